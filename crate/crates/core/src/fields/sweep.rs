use rayon::prelude::*;

use super::{describe_element, diagnostics, fiber, FiberLabel, FiberResult, FieldExperiment};
use crate::algebra::{self_adjoint_defect, AlgebraElement, Cocycle};
use crate::cocycles::{heisenberg_quotient, Flux};
use crate::groups::{Ball, Group, IntVec, Lattice, TorusQuotient};
use crate::repr::{compression_rep, regular_rep, Matrix};
use crate::spectra::{hausdorff, SpectrumSet, EIGEN_CAP};
use crate::{Error, Result};

/// Default number of points of a `θ` grid. The count is odd so the midpoint
/// is included.
pub const DEFAULT_THETA_POINTS: usize = 199;

/// Default Farey order of a flux sweep.
pub const DEFAULT_FAREY_ORDER: u64 = 12;

/// `n` equally spaced points from `lo` to `hi`, both included.
pub fn theta_grid(n: usize, lo: f64, hi: f64) -> Result<Vec<f64>> {
    if n == 0 || !lo.is_finite() || !hi.is_finite() || hi < lo {
        return Err(Error::InvalidParameter(format!(
            "theta grid needs n >= 1 and finite lo <= hi (got n={n}, [{lo}, {hi}])"
        )));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n)
        .map(|k| if k == n - 1 { hi } else { lo + k as f64 * step })
        .collect())
}

/// Farey fractions `p/q` in `[0, 1]` with `q <= order`, ascending.
pub fn farey(order: u64) -> Result<Vec<Flux>> {
    if order == 0 {
        return Err(Error::InvalidParameter(
            "Farey order must be positive".into(),
        ));
    }
    let mut out = Vec::new();
    for q in 1..=order {
        for p in 0..=q as i64 {
            let f = Flux::new(p, q)?;
            if f.q == q {
                out.push(f);
            }
        }
    }
    out.sort_by(|a, b| (a.p as i128 * b.q as i128).cmp(&(b.p as i128 * a.q as i128)));
    Ok(out)
}

/// Side length of the torus used for each flux point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepSize {
    /// The same `N` for every flux; points with `q ∤ N` are skipped.
    Fixed(u64),
    /// The smallest multiple of `q` that is at least `min`.
    Adaptive { min: u64 },
}

impl SweepSize {
    pub fn modulus(&self, q: u64) -> u64 {
        match *self {
            SweepSize::Fixed(n) => n,
            SweepSize::Adaptive { min } => q * min.div_ceil(q).max(1),
        }
    }
}

/// Matrix of `f` on `ℓ²((Z/N)²)` twisted by the descended Heisenberg cocycle
/// of the given flux.
pub fn flux_matrix(f: &AlgebraElement<IntVec>, flux: Flux, modulus: u64) -> Result<Matrix> {
    let omega = heisenberg_quotient(flux.p, flux.q, modulus)?;
    let q = TorusQuotient::new(2, modulus)?;
    Ok(regular_rep::<Lattice, _, _>(f, &omega, &q)?.into_matrix())
}

fn flux_spectrum(
    f: &AlgebraElement<IntVec>,
    flux: Flux,
    modulus: u64,
) -> Result<(usize, SpectrumSet)> {
    let dim = (modulus * modulus) as usize;
    if dim > EIGEN_CAP {
        return Err(Error::DimensionCap {
            dim,
            cap: EIGEN_CAP,
            what: "dense eigendecomposition",
        });
    }
    let omega = heisenberg_quotient(flux.p, flux.q, modulus)?;
    let q = TorusQuotient::new(2, modulus)?;
    let pushed = f.push_forward::<Lattice, _>(&q)?;
    let defect = self_adjoint_defect(&pushed, &omega, &q)?;
    if defect > 1e-12 * pushed.max_abs().max(1.0) {
        return Err(Error::NotSelfAdjoint { defect });
    }
    let m = flux_matrix(f, flux, modulus)?;
    Ok((dim, crate::spectra::eigenvalues(&m)?))
}

/// Recomputes one flux fiber.
pub fn recompute_flux(f: &AlgebraElement<IntVec>, flux: Flux, modulus: u64) -> Result<SpectrumSet> {
    Ok(flux_spectrum(f, flux, modulus)?.1)
}

fn finish(mut exp: FieldExperiment) -> FieldExperiment {
    exp.diagnostics = diagnostics(&exp.fibers);
    exp.diagnostics.holder_half_constant = holder_half_constant(&exp.fibers);
    exp
}

/// Quotient-mode sweep on `Z²` over rational fluxes.
///
/// Each flux `p/q` is realized on `(Z/N)²` with the descended Heisenberg
/// cocycle. Points where the cocycle does not descend, or where `N²`
/// exceeds the eigensolver cap, are skipped with a warning. Fibers are
/// ordered by flux value.
pub fn flux_sweep(
    f: &AlgebraElement<IntVec>,
    fluxes: &[Flux],
    size: SweepSize,
) -> Result<FieldExperiment> {
    if fluxes.is_empty() {
        return Err(Error::Empty("flux grid"));
    }
    let mut order: Vec<Flux> = fluxes.to_vec();
    order.sort_by(|a, b| (a.p as i128 * b.q as i128).cmp(&(b.p as i128 * a.q as i128)));
    let outcomes: Vec<(FiberLabel, Result<(usize, SpectrumSet)>)> = order
        .par_iter()
        .map(|&flux| {
            let n = size.modulus(flux.q);
            let label = FiberLabel::Flux {
                p: flux.p,
                q: flux.q,
                modulus: n,
            };
            (label, flux_spectrum(f, flux, n))
        })
        .collect();

    let mut fibers = Vec::new();
    let mut skipped = Vec::new();
    for (label, outcome) in outcomes {
        match outcome {
            Ok((dim, spectrum)) => fibers.push(fiber(label, dim, spectrum, None)),
            Err(e @ (Error::Descent(_) | Error::DimensionCap { .. })) => {
                log::warn!("skipping flux point {label:?}: {e}");
                skipped.push((label, e.to_string()));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(finish(FieldExperiment {
        base: "Z^2".into(),
        backend: match size {
            SweepSize::Fixed(n) => format!("torus (Z/{n})^2"),
            SweepSize::Adaptive { min } => format!("torus (Z/N)^2, N = q*ceil({min}/q)"),
        },
        element: describe_element(f),
        cocycle: "heisenberg (descended)".into(),
        limit: None,
        fibers,
        skipped,
        diagnostics: Default::default(),
    }))
}

fn theta_spectrum<G, C, F>(
    group: &G,
    f: &AlgebraElement<G::Elem>,
    family: &F,
    theta: f64,
    ball: &Ball<G>,
) -> Result<SpectrumSet>
where
    G: Group,
    C: Cocycle<G::Elem>,
    F: Fn(f64) -> C,
{
    let omega = family(theta);
    let defect = self_adjoint_defect(f, &omega, group)?;
    if defect > 1e-12 * f.max_abs().max(1.0) {
        return Err(Error::NotSelfAdjoint { defect });
    }
    compression_rep(f, &omega, group, ball)?.eigenvalues()
}

/// Compression-mode sweep: the spectrum of `f` compressed to `ball` for
/// each cocycle `family(θ)` of the grid, in grid order.
pub fn theta_sweep<G, C, F>(
    group: &G,
    f: &AlgebraElement<G::Elem>,
    family: F,
    thetas: &[f64],
    ball: &Ball<G>,
) -> Result<FieldExperiment>
where
    G: Group,
    C: Cocycle<G::Elem>,
    F: Fn(f64) -> C + Sync,
{
    if thetas.is_empty() {
        return Err(Error::Empty("theta grid"));
    }
    if ball.len() > EIGEN_CAP {
        return Err(Error::DimensionCap {
            dim: ball.len(),
            cap: EIGEN_CAP,
            what: "dense eigendecomposition",
        });
    }
    let spectra: Vec<Result<SpectrumSet>> = thetas
        .par_iter()
        .map(|&t| theta_spectrum(group, f, &family, t, ball))
        .collect();
    let mut fibers = Vec::with_capacity(thetas.len());
    for (&theta, s) in thetas.iter().zip(spectra) {
        fibers.push(fiber(FiberLabel::Theta { theta }, ball.len(), s?, None));
    }
    Ok(finish(FieldExperiment {
        base: group.name(),
        backend: format!(
            "ball compression R={} ({} elements)",
            ball.radius(),
            ball.len()
        ),
        element: describe_element(f),
        cocycle: family(thetas[0]).describe(),
        limit: None,
        fibers,
        skipped: Vec::new(),
        diagnostics: Default::default(),
    }))
}

/// Recomputes one compression fiber.
pub fn recompute_theta<G, C, F>(
    group: &G,
    f: &AlgebraElement<G::Elem>,
    family: F,
    theta: f64,
    ball: &Ball<G>,
) -> Result<SpectrumSet>
where
    G: Group,
    C: Cocycle<G::Elem>,
    F: Fn(f64) -> C,
{
    theta_spectrum(group, f, &family, theta, ball)
}

/// Smallest `C` with `d_H(σ_k, σ_{k+1}) <= C √|θ_{k+1} − θ_k|` over
/// adjacent fibers; `None` with fewer than two distinct `θ`.
pub fn holder_half_constant(fibers: &[FiberResult]) -> Option<f64> {
    let mut best: Option<f64> = None;
    for w in fibers.windows(2) {
        let (Some(a), Some(b)) = (w[0].label.theta(), w[1].label.theta()) else {
            continue;
        };
        let dt = (b - a).abs();
        if dt == 0.0 {
            continue;
        }
        let c = hausdorff(&w[0].spectrum, &w[1].spectrum) / dt.sqrt();
        best = Some(best.map_or(c, |b: f64| b.max(c)));
    }
    best
}

/// Butterfly rows `(θ or flux, eigenvalue)`, one per eigenvalue per fiber.
pub fn butterfly_rows(exp: &FieldExperiment) -> Vec<(f64, f64)> {
    exp.fibers
        .iter()
        .flat_map(|fib| {
            let x = fib.label.coordinate();
            let ys: Vec<f64> = match fib.spectrum.points() {
                Some(p) => p.to_vec(),
                None => fib.spectrum.pieces().into_iter().flatten().collect(),
            };
            ys.into_iter().map(move |y| (x, y))
        })
        .collect()
}
