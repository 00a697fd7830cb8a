//! Closed-form minimization of a single rotation angle.
//!
//! For a generator with `H² = I` the energy as a function of one angle is
//! `A sin(θ + B) + C`. Three probes at `φ` and `φ ± π/2` determine the three
//! coefficients for any offset `φ`:
//!
//! ```text
//! C = (m₊ + m₋) / 2
//! B = atan2(2m_φ − m₊ − m₋, m₊ − m₋) − φ
//! A = ½ √((2m_φ − m₊ − m₋)² + (m₊ − m₋)²)
//! ```
//!
//! The minimum sits at `θ* = −π/2 − B` with value `C − A`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::circuit::canonical_angle;
use crate::error::{Error, Result};

/// Amplitude below which an exact-mode curve is treated as flat.
pub const EXACT_FLAT_THRESHOLD: f64 = 1e-9;

/// Energies measured at `phi`, `phi + π/2` and `phi − π/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeTriple {
    pub phi: f64,
    pub at_phi: f64,
    pub plus: f64,
    pub minus: f64,
}

impl ProbeTriple {
    pub fn new(phi: f64, at_phi: f64, plus: f64, minus: f64) -> Self {
        Self {
            phi,
            at_phi,
            plus,
            minus,
        }
    }

    fn validate(&self) -> Result<()> {
        if [self.phi, self.at_phi, self.plus, self.minus]
            .iter()
            .all(|v| v.is_finite())
        {
            Ok(())
        } else {
            Err(Error::Validation(format!("non-finite probe values {self:?}")))
        }
    }

    /// `(2m_φ − m₊ − m₋, m₊ − m₋)`: the arguments handed to `atan2`.
    fn atan2_args(&self) -> (f64, f64) {
        (2.0 * self.at_phi - self.plus - self.minus, self.plus - self.minus)
    }
}

/// `⟨M⟩_θ = A sin(θ + B) + C` with `A ≥ 0` and `B ∈ (−π, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SinusoidFit {
    pub amplitude: f64,
    pub phase: f64,
    pub intercept: f64,
}

impl SinusoidFit {
    pub fn value_at(&self, theta: f64) -> f64 {
        self.amplitude * (theta + self.phase).sin() + self.intercept
    }

    /// Minimizing angle in `(−π, π]`.
    pub fn minimizer(&self) -> f64 {
        canonical_angle(-FRAC_PI_2 - self.phase)
    }

    pub fn extrapolated_minimum(&self) -> f64 {
        extrapolated_minimum(self)
    }

    pub fn is_flat(&self, threshold: f64) -> bool {
        self.amplitude < threshold
    }
}

pub fn fit(probes: &ProbeTriple) -> Result<SinusoidFit> {
    probes.validate()?;
    let (sine_part, cosine_part) = probes.atan2_args();
    let amplitude = 0.5 * sine_part.hypot(cosine_part);
    // atan2(0, 0) is convention-dependent; a flat curve gets phase 0
    let phase = if sine_part == 0.0 && cosine_part == 0.0 {
        0.0
    } else {
        canonical_angle(sine_part.atan2(cosine_part) - probes.phi)
    };
    Ok(SinusoidFit {
        amplitude,
        phase,
        intercept: 0.5 * (probes.plus + probes.minus),
    })
}

/// `θ* = φ − π/2 − atan2(2m_φ − m₊ − m₋, m₊ − m₋)` wrapped into `(−π, π]`.
///
/// For a flat curve any angle is optimal; callers are expected to keep their
/// current angle when the fitted amplitude is below their flat threshold.
pub fn optimal_angle(probes: &ProbeTriple) -> Result<f64> {
    probes.validate()?;
    let (sine_part, cosine_part) = probes.atan2_args();
    Ok(canonical_angle(
        probes.phi - FRAC_PI_2 - sine_part.atan2(cosine_part),
    ))
}

/// Energy at the minimizer, `C − A`.
pub fn extrapolated_minimum(fit: &SinusoidFit) -> f64 {
    fit.intercept - fit.amplitude
}

/// Recovers `m_φ` from the two shifted probes and a known value of the curve
/// at another angle `theta`.
///
/// With `u = φ + B` and `δ = θ − φ`, `value − C = A sin u cos δ + A cos u sin δ`
/// and `A cos u = (m₊ − m₋)/2`, so `A sin u` follows whenever
/// `|cos δ| > eps_cos`. Returns `None` in the singular configuration.
pub fn recover_center_probe(
    phi: f64,
    plus: f64,
    minus: f64,
    theta: f64,
    value: f64,
    eps_cos: f64,
) -> Option<f64> {
    let delta = theta - phi;
    let (sin_d, cos_d) = delta.sin_cos();
    if cos_d.abs() <= eps_cos {
        return None;
    }
    let intercept = 0.5 * (plus + minus);
    let a_cos_u = 0.5 * (plus - minus);
    let a_sin_u = (value - intercept - a_cos_u * sin_d) / cos_d;
    Some(a_sin_u + intercept)
}
