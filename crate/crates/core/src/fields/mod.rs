//! Experiment pipelines over fields of groupoids.
//!
//! A field is realized through its fibers only: the finite quotients `G/H_n`
//! of a chain (with the base group as limit fiber), or the members of a
//! cocycle family `ω_θ`. Each pipeline evaluates one section with constant
//! coefficients fiber by fiber and records the spectra together with
//! summary diagnostics. Fibers are independent and run in parallel; results
//! are merged in label order so every run is deterministic.

mod hls;
mod manifest;
mod probe;
mod rd;
mod sweep;

use serde::{Deserialize, Serialize};

use crate::spectra::{hausdorff, SpectrumSet};

pub use hls::{
    compression_limit, detect_trivial_eigenvalue, hls_run, recompute_level, TrivialEigenvalue,
};
pub use manifest::RunManifest;
pub use probe::{semicontinuity_probe, ProbeReport, Verdict};
pub use rd::{
    haagerup_check, parse_levels, rd_certificate, rd_ratio, CompressionPattern, HaagerupReport,
    HaagerupSample, NormMethod, PatternOperator, RdCertificate, RdLevel, SampleSpec,
};
pub use sweep::{
    butterfly_rows, farey, flux_matrix, flux_sweep, holder_half_constant, recompute_flux,
    recompute_theta, theta_grid, theta_sweep, SweepSize, DEFAULT_FAREY_ORDER, DEFAULT_THETA_POINTS,
};

/// Position of a fiber in its field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FiberLabel {
    /// Level `index` of a quotient chain.
    Level { index: usize, modulus: u64 },
    /// Member `ω_θ` of a cocycle family.
    Theta { theta: f64 },
    /// Rational flux `p/q` on a torus quotient of side `modulus`.
    Flux { p: i64, q: u64, modulus: u64 },
}

impl FiberLabel {
    /// The abscissa used in sweeps and CSV output: modulus, `θ` or `p/q`.
    pub fn coordinate(&self) -> f64 {
        match *self {
            FiberLabel::Level { modulus, .. } => modulus as f64,
            FiberLabel::Theta { theta } => theta,
            FiberLabel::Flux { p, q, .. } => p as f64 / q as f64,
        }
    }

    /// The flux angle `θ`, where one is defined.
    pub fn theta(&self) -> Option<f64> {
        match *self {
            FiberLabel::Level { .. } => None,
            FiberLabel::Theta { theta } => Some(theta),
            FiberLabel::Flux { p, q, .. } => Some(2.0 * std::f64::consts::PI * p as f64 / q as f64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberResult {
    pub label: FiberLabel,
    pub dim: usize,
    pub spectrum: SpectrumSet,
    /// Spectral radius, which is the operator norm for Hermitian matrices.
    pub norm: f64,
    pub hausdorff_to_limit: Option<f64>,
}

/// A limit spectrum together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSpectrum {
    pub set: SpectrumSet,
    pub label: String,
    /// True when the set is an analytic value; false for a compression
    /// estimate, which only approximates the limit from inside.
    pub analytic: bool,
}

impl LimitSpectrum {
    pub fn analytic(set: SpectrumSet, label: impl Into<String>) -> Self {
        LimitSpectrum {
            set,
            label: label.into(),
            analytic: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    /// `d_H` between consecutive fibers.
    pub consecutive_hausdorff: Vec<f64>,
    /// Distances to the limit are strictly decreasing.
    pub decreasing_to_limit: Option<bool>,
    /// Consecutive distances are nonincreasing.
    pub cauchy_decreasing: bool,
    /// `max d_H(σ_k, σ_{k+1}) / √|θ_{k+1} - θ_k|` over adjacent sweep points.
    pub holder_half_constant: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldExperiment {
    pub base: String,
    /// Representation backend: quotient chain, torus or ball compression.
    pub backend: String,
    pub element: String,
    pub cocycle: String,
    pub limit: Option<LimitSpectrum>,
    pub fibers: Vec<FiberResult>,
    /// Fibers that were requested but not computed, with the reason.
    pub skipped: Vec<(FiberLabel, String)>,
    pub diagnostics: Diagnostics,
}

impl FieldExperiment {
    pub fn spectra(&self) -> impl Iterator<Item = &SpectrumSet> {
        self.fibers.iter().map(|f| &f.spectrum)
    }

    pub fn limit_distances(&self) -> Vec<f64> {
        self.fibers
            .iter()
            .filter_map(|f| f.hausdorff_to_limit)
            .collect()
    }
}

fn fiber(
    label: FiberLabel,
    dim: usize,
    spectrum: SpectrumSet,
    limit: Option<&LimitSpectrum>,
) -> FiberResult {
    FiberResult {
        label,
        dim,
        norm: spectrum.spectral_radius(),
        hausdorff_to_limit: limit.map(|l| hausdorff(&spectrum, &l.set)),
        spectrum,
    }
}

fn diagnostics(fibers: &[FiberResult]) -> Diagnostics {
    let consecutive: Vec<f64> = fibers
        .windows(2)
        .map(|w| hausdorff(&w[0].spectrum, &w[1].spectrum))
        .collect();
    let to_limit: Vec<f64> = fibers.iter().filter_map(|f| f.hausdorff_to_limit).collect();
    Diagnostics {
        cauchy_decreasing: consecutive.windows(2).all(|w| w[1] <= w[0]),
        consecutive_hausdorff: consecutive,
        decreasing_to_limit: (!to_limit.is_empty())
            .then(|| to_limit.windows(2).all(|w| w[1] < w[0])),
        holder_half_constant: None,
    }
}

fn describe_element<E>(f: &crate::algebra::AlgebraElement<E>) -> String
where
    E: Clone + PartialEq,
{
    format!(
        "{} terms, I-norm {:.12}",
        f.len(),
        crate::algebra::i_norm(f, crate::algebra::NormSide::Max)
    )
}
