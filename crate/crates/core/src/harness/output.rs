use std::fs;
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};

use chrono::Utc;
use serde::Serialize;

use super::experiment::RunRecord;
use crate::error::Result;

/// Writes one record's traces as CSV:
/// `trial,cycle,gate_index,cumulative_evals,energy[,exact_energy],generator`.
///
/// The `exact_energy` column appears only when some trace recorded it.
/// Missing gate indices and generators are empty fields.
pub fn write_trace_csv<W: Write>(writer: W, record: &RunRecord) -> Result<()> {
    let with_exact = record
        .traces
        .iter()
        .flat_map(|t| &t.records)
        .any(|r| r.exact_energy.is_some());
    let mut out = csv::Writer::from_writer(writer);
    let mut header = vec!["trial", "cycle", "gate_index", "cumulative_evals", "energy"];
    if with_exact {
        header.push("exact_energy");
    }
    header.push("generator");
    out.write_record(&header)?;
    for (trial, trace) in record.trials.iter().zip(&record.traces) {
        for r in &trace.records {
            let mut row = vec![
                trial.trial.to_string(),
                r.cycle.to_string(),
                r.gate_index.map(|d| d.to_string()).unwrap_or_default(),
                r.cumulative_evals.to_string(),
                r.energy.to_string(),
            ];
            if with_exact {
                row.push(r.exact_energy.map(|e| e.to_string()).unwrap_or_default());
            }
            row.push(r.generator.clone().unwrap_or_default());
            out.write_record(&row)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// `trace.csv` for a single record, otherwise
/// `trace_<optimizer>_n<qubits>_l<layers>.csv`.
pub fn trace_file_name(record: &RunRecord, single: bool) -> String {
    if single {
        "trace.csv".to_string()
    } else {
        format!(
            "trace_{}_n{}_l{}.csv",
            record.optimizer,
            record.num_qubits(),
            record.layers()
        )
    }
}

#[derive(Serialize)]
struct Summary<'a> {
    experiment: &'a str,
    created_at: String,
    seed: u64,
    wall_clock_seconds: f64,
    trace_files: Vec<String>,
    records: &'a [RunRecord],
}

/// Creates `<root>/<experiment>/<timestamp>_<seed>/` and writes every trace
/// CSV plus `summary.json` into it. Returns the directory.
pub fn write_outputs(root: &Path, experiment: &str, seed: u64, records: &[RunRecord]) -> Result<PathBuf> {
    let now = Utc::now();
    let parent = root.join(experiment);
    fs::create_dir_all(&parent)?;
    let stem = format!("{}_{seed}", now.format("%Y%m%dT%H%M%SZ"));
    let mut dir = parent.join(&stem);
    let mut suffix = 1;
    loop {
        match fs::create_dir(&dir) {
            Ok(()) => break,
            Err(e) if e.kind() == ErrorKind::AlreadyExists => {
                dir = parent.join(format!("{stem}-{suffix}"));
                suffix += 1;
            }
            Err(e) => return Err(e.into()),
        }
    }

    let single = records.len() == 1;
    let mut trace_files = Vec::with_capacity(records.len());
    for record in records {
        let name = trace_file_name(record, single);
        let file = fs::File::create(dir.join(&name))?;
        write_trace_csv(std::io::BufWriter::new(file), record)?;
        trace_files.push(name);
    }
    let summary = Summary {
        experiment,
        created_at: now.to_rfc3339(),
        seed,
        wall_clock_seconds: records.iter().map(|r| r.wall_clock_seconds).sum(),
        trace_files,
        records,
    };
    let file = fs::File::create(dir.join("summary.json"))?;
    serde_json::to_writer_pretty(std::io::BufWriter::new(file), &summary)?;
    Ok(dir)
}
