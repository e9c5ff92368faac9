use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{describe_element, diagnostics, fiber, FiberLabel, FieldExperiment, LimitSpectrum};
use crate::algebra::{self_adjoint_defect, AlgebraElement, Cocycle, Trivial};
use crate::groups::{enumerate_ball, Group, QuotientChain, QuotientOf};
use crate::repr::{compression_rep, regular_rep, regular_rep_on};
use crate::spectra::{extremal_bounds, SpectrumSet, EIGEN_CAP};
use crate::{Error, Result};

/// Relative tolerance on `‖f* - f‖_max` before an element counts as not
/// self-adjoint.
const SELF_ADJOINT_TOL: f64 = 1e-12;

fn check_self_adjoint<G, C>(f: &AlgebraElement<G::Elem>, omega: &C, group: &G) -> Result<()>
where
    G: Group,
    C: Cocycle<G::Elem> + ?Sized,
{
    let defect = self_adjoint_defect(f, omega, group)?;
    if defect > SELF_ADJOINT_TOL * f.max_abs().max(1.0) {
        return Err(Error::NotSelfAdjoint { defect });
    }
    Ok(())
}

fn level_spectrum<G, Q, C>(f: &AlgebraElement<G::Elem>, omega: &C, q: &Q) -> Result<SpectrumSet>
where
    G: Group,
    Q: QuotientOf<G>,
    C: Cocycle<Q::Elem> + ?Sized,
{
    let pushed = f.push_forward(q)?;
    check_self_adjoint(&pushed, omega, q)?;
    if q.size() > EIGEN_CAP {
        return Err(Error::DimensionCap {
            dim: q.size(),
            cap: EIGEN_CAP,
            what: "dense eigendecomposition",
        });
    }
    regular_rep_on(&pushed, omega, q)?.eigenvalues()
}

fn level_label<G: Group, Q: QuotientOf<G>>(index: usize, q: &Q) -> FiberLabel {
    FiberLabel::Level {
        index,
        modulus: q.level_info().modulus,
    }
}

/// Spectra of `π_n(f)` along a quotient chain, compared with a limit spectrum.
///
/// `cocycle_for` supplies the cocycle on each quotient (use
/// `|_| Ok(Trivial)` for the untwisted case). Levels whose quotient exceeds
/// the dense eigensolver cap are skipped with a warning and listed in
/// `skipped`; every other failure aborts the run. With an untwisted
/// cocycle, `f` must be self-adjoint on the base group; in every case its
/// image must be self-adjoint on each quotient.
pub fn hls_run<G, Q, C, F>(
    chain: &QuotientChain<G, Q>,
    f: &AlgebraElement<G::Elem>,
    cocycle_for: F,
    limit: Option<LimitSpectrum>,
) -> Result<FieldExperiment>
where
    G: Group,
    Q: QuotientOf<G>,
    C: Cocycle<Q::Elem>,
    F: Fn(&Q) -> Result<C> + Sync,
{
    let levels = chain.levels();
    if levels.is_empty() {
        return Err(Error::Empty("quotient chain"));
    }
    let cocycle = cocycle_for(&levels[0])?;
    if cocycle.is_trivial() {
        check_self_adjoint(f, &Trivial, chain.base())?;
    }
    let outcomes: Vec<Result<SpectrumSet>> = levels
        .par_iter()
        .map(|q| level_spectrum(f, &cocycle_for(q)?, q))
        .collect();

    let mut fibers = Vec::new();
    let mut skipped = Vec::new();
    for (index, (q, outcome)) in levels.iter().zip(outcomes).enumerate() {
        let label = level_label::<G, Q>(index, q);
        match outcome {
            Ok(spectrum) => fibers.push(fiber(label, q.size(), spectrum, limit.as_ref())),
            Err(e @ Error::DimensionCap { .. }) => {
                log::warn!("skipping level {index}: {e}");
                skipped.push((label, e.to_string()));
            }
            Err(e) => return Err(e),
        }
    }
    if fibers.is_empty() {
        return Err(Error::Empty("set of in-cap chain levels"));
    }
    Ok(FieldExperiment {
        base: chain.base().name(),
        backend: format!("quotient chain {:?}", chain.manifest().moduli),
        element: describe_element(f),
        cocycle: cocycle.describe(),
        diagnostics: diagnostics(&fibers),
        limit,
        fibers,
        skipped,
    })
}

/// Recomputes the spectrum of a single chain level from scratch.
pub fn recompute_level<G, Q, C, F>(
    chain: &QuotientChain<G, Q>,
    f: &AlgebraElement<G::Elem>,
    cocycle_for: F,
    index: usize,
) -> Result<SpectrumSet>
where
    G: Group,
    Q: QuotientOf<G>,
    C: Cocycle<Q::Elem>,
    F: Fn(&Q) -> Result<C>,
{
    let q = chain
        .levels()
        .get(index)
        .ok_or_else(|| Error::InvalidParameter(format!("chain has no level {index}")))?;
    level_spectrum(f, &cocycle_for(q)?, q)
}

/// Estimates the limit spectrum by compressing `f` to the ball of the given
/// radius. Small compressions are diagonalized exactly. Larger ones are
/// replaced by the interval between the Lanczos Rayleigh quotients, which
/// lies inside the numerical range of the compression. Either way the
/// result approximates `σ(f)` from inside and is labelled as an estimate.
pub fn compression_limit<G, C>(
    group: &G,
    f: &AlgebraElement<G::Elem>,
    omega: &C,
    radius: usize,
    ball_cap: usize,
    iterations: usize,
    seed: u64,
) -> Result<LimitSpectrum>
where
    G: Group,
    C: Cocycle<G::Elem> + ?Sized,
{
    check_self_adjoint(f, omega, group)?;
    let ball = enumerate_ball(group, radius, ball_cap)?;
    let rep = compression_rep(f, omega, group, &ball)?;
    let (set, label) = if rep.dim() <= EIGEN_CAP {
        (
            rep.eigenvalues()?,
            format!(
                "compression estimate: eigenvalues on ball R={radius} ({} elements)",
                rep.dim()
            ),
        )
    } else {
        let b = extremal_bounds(rep.matrix(), iterations, seed)?;
        (
            SpectrumSet::interval(b.rayleigh_min, b.rayleigh_max)?,
            format!(
                "compression estimate: Lanczos hull on ball R={radius} ({} elements, {} steps)",
                rep.dim(),
                b.iterations
            ),
        )
    };
    Ok(LimitSpectrum {
        set,
        label,
        analytic: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrivialEigenvalue {
    /// `Σ_g f(g)`.
    pub value: Complex64,
    /// `‖M·1 − value·1‖ / ‖1‖`.
    pub residual: f64,
}

/// Checks that the constant vector is an eigenvector of the untwisted
/// regular representation of `f` on a finite quotient.
pub fn detect_trivial_eigenvalue<G, Q, C>(
    f: &AlgebraElement<G::Elem>,
    omega: &C,
    q: &Q,
) -> Result<TrivialEigenvalue>
where
    G: Group,
    Q: QuotientOf<G>,
    C: Cocycle<Q::Elem> + ?Sized,
{
    if !omega.is_trivial() {
        return Err(Error::Twisted(format!(
            "{}: the constant vector need not be an eigenvector",
            omega.describe()
        )));
    }
    let value: Complex64 = f.terms().iter().map(|(_, c)| c).sum();
    let rep = regular_rep::<G, Q, C>(f, omega, q)?;
    let n = rep.dim();
    let ones = vec![Complex64::new(1.0, 0.0); n];
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    rep.matrix().matvec(&ones, &mut y);
    let err: f64 = y.iter().map(|v| (v - value).norm_sqr()).sum::<f64>().sqrt();
    Ok(TrivialEigenvalue {
        value,
        residual: err / (n as f64).sqrt(),
    })
}
