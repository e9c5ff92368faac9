use serde::{Deserialize, Serialize};

use super::{FiberLabel, FieldExperiment};
use crate::repr::{function_norm, SmoothBump};
use crate::spectra::SpectrumSet;
use crate::{Error, Result};

/// Slack on the spectral mapping bound `‖φ(M)‖ >= 1`.
const PROBE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// `‖φ(M_n)‖ >= 1 - 1e-6` along the tail: spectrum escapes the limit.
    Obstructed,
    /// `‖φ(M_n)‖` decreases to zero along the tail.
    ContinuousAtLimit,
    /// The bump is centered inside the limit spectrum, so it tests nothing.
    VacuousPlacement,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub bump: SmoothBump,
    /// Distance from the bump center to the limit spectrum.
    pub center_distance: f64,
    /// `‖φ(M_n)‖ = max_λ |φ(λ)|` per fiber.
    pub values: Vec<(FiberLabel, f64)>,
    /// Number of trailing fibers the verdict is based on.
    pub tail: usize,
    pub verdict: Verdict,
}

/// Evaluates a bump `φ` on every fiber spectrum of an experiment.
///
/// If `φ` vanishes near the limit spectrum but `‖φ(M_n)‖` stays near 1,
/// the spectra cannot converge to the limit. The tail is the second half of
/// the fibers. A bump centered inside the limit spectrum gets the verdict
/// [`Verdict::VacuousPlacement`]; a bump centered outside whose support
/// still reaches the limit spectrum is rejected.
pub fn semicontinuity_probe(
    exp: &FieldExperiment,
    limit: &SpectrumSet,
    bump: &SmoothBump,
) -> Result<ProbeReport> {
    if exp.fibers.is_empty() {
        return Err(Error::Empty("experiment"));
    }
    let center_distance = limit.distance_to(bump.center);
    let vacuous = center_distance == 0.0;
    if !vacuous && center_distance < bump.outer {
        return Err(Error::InvalidParameter(format!(
            "bump support (radius {}) reaches the limit spectrum at distance {center_distance}",
            bump.outer
        )));
    }
    let mut values = Vec::with_capacity(exp.fibers.len());
    for fib in &exp.fibers {
        let points = fib.spectrum.points().ok_or_else(|| {
            Error::InvalidParameter("probe needs eigenvalue lists, not interval spectra".into())
        })?;
        values.push((fib.label.clone(), function_norm(points, |x| bump.eval(x))));
    }
    let tail = values.len().div_ceil(2);
    let tail_values: Vec<f64> = values[values.len() - tail..].iter().map(|v| v.1).collect();
    let verdict = if vacuous {
        Verdict::VacuousPlacement
    } else if tail_values.iter().all(|&v| v >= 1.0 - PROBE_TOL) {
        Verdict::Obstructed
    } else if tail_values.last().is_some_and(|&v| v <= PROBE_TOL)
        && tail_values.windows(2).all(|w| w[1] <= w[0])
    {
        Verdict::ContinuousAtLimit
    } else {
        Verdict::Indeterminate
    };
    Ok(ProbeReport {
        bump: *bump,
        center_distance,
        values,
        tail,
        verdict,
    })
}
