fn main() {
    std::process::exit(rotoselect::harness::cli_main(std::env::args_os()));
}
