use faer::{Mat, Side};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::repr::{Csr, Matrix};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A square linear operator given by its action on vectors.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;

    /// `y = A x`; `y` is overwritten.
    fn apply(&self, x: &[Complex64], y: &mut [Complex64]);
}

/// An operator that can also apply its adjoint.
pub trait AdjointOperator: LinearOperator {
    fn apply_adjoint(&self, x: &[Complex64], y: &mut [Complex64]);
}

impl LinearOperator for Matrix {
    fn dim(&self) -> usize {
        Matrix::dim(self)
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        self.matvec(x, y)
    }
}

impl AdjointOperator for Matrix {
    fn apply_adjoint(&self, x: &[Complex64], y: &mut [Complex64]) {
        self.adjoint_matvec(x, y)
    }
}

impl LinearOperator for Csr {
    fn dim(&self) -> usize {
        Csr::dim(self)
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        self.matvec(x, y)
    }
}

/// The positive operator `A*A`, whose top eigenvalue is `‖A‖²`.
pub struct NormalOperator<'a, A: AdjointOperator>(pub &'a A);

impl<A: AdjointOperator> LinearOperator for NormalOperator<'_, A> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        let mut t = vec![ZERO; x.len()];
        self.0.apply(x, &mut t);
        self.0.apply_adjoint(&t, y);
    }
}

/// Result of a Lanczos run on a Hermitian operator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LanczosBounds {
    pub iterations: usize,
    /// Extreme Ritz values of the Lanczos tridiagonal matrix.
    pub ritz_min: f64,
    pub ritz_max: f64,
    /// Rayleigh quotients `⟨x, Ax⟩ / ⟨x, x⟩` of the reconstructed Ritz
    /// vectors, recomputed with one extra application of `A`. They lie in
    /// the numerical range, so `max(|rayleigh_min|, |rayleigh_max|)` is a
    /// certified lower bound on `‖A‖`.
    pub rayleigh_min: f64,
    pub rayleigh_max: f64,
    pub norm_lower_bound: f64,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

struct Recurrence<'a, A: LinearOperator + ?Sized> {
    op: &'a A,
    prev: Vec<Complex64>,
    cur: Vec<Complex64>,
    work: Vec<Complex64>,
    beta_prev: f64,
}

impl<'a, A: LinearOperator + ?Sized> Recurrence<'a, A> {
    fn new(op: &'a A, start: Vec<Complex64>) -> Self {
        let n = start.len();
        Recurrence {
            op,
            prev: vec![ZERO; n],
            cur: start,
            work: vec![ZERO; n],
            beta_prev: 0.0,
        }
    }

    /// Advances one step, returning `(α_j, β_{j+1})`; `cur` holds `v_j` on
    /// entry and `v_{j+1}` on exit.
    fn step(&mut self) -> (f64, f64) {
        self.op.apply(&self.cur, &mut self.work);
        let alpha = dot(&self.cur, &self.work).re;
        for i in 0..self.work.len() {
            self.work[i] -= self.cur[i] * alpha + self.prev[i] * self.beta_prev;
        }
        let beta = norm(&self.work);
        std::mem::swap(&mut self.prev, &mut self.cur);
        if beta > 0.0 {
            for (c, w) in self.cur.iter_mut().zip(&self.work) {
                *c = w / beta;
            }
        }
        self.beta_prev = beta;
        (alpha, beta)
    }
}

/// Lanczos bounds on the extreme eigenvalues of a Hermitian operator.
///
/// Runs `iterations` steps without storing the Krylov basis, then repeats
/// the recurrence from the same seeded start to assemble the Ritz vectors
/// of the extreme Ritz values, and evaluates their Rayleigh quotients.
/// Memory is `O(dim)`. Without reorthogonalization the Ritz values may carry
/// spurious copies, but the returned Rayleigh quotients are exact
/// certificates regardless.
pub fn extremal_bounds<A: LinearOperator + ?Sized>(
    op: &A,
    iterations: usize,
    seed: u64,
) -> Result<LanczosBounds> {
    if iterations == 0 {
        return Err(Error::InvalidParameter(
            "Lanczos iteration budget must be positive".into(),
        ));
    }
    let n = op.dim();
    if n == 0 {
        return Err(Error::Empty("operator"));
    }
    let start = random_unit_vector(n, seed);

    let mut alphas = Vec::with_capacity(iterations);
    let mut betas = Vec::with_capacity(iterations);
    let mut rec = Recurrence::new(op, start.clone());
    let breakdown = 1e-12;
    let mut scale: f64 = 0.0;
    for _ in 0..iterations.min(n) {
        let (a, b) = rec.step();
        alphas.push(a);
        scale = scale.max(a.abs()).max(b);
        if b <= breakdown * scale.max(1.0) {
            break;
        }
        betas.push(b);
    }
    let m = alphas.len();
    betas.truncate(m.saturating_sub(1));

    let t = Mat::<f64>::from_fn(m, m, |i, j| {
        if i == j {
            alphas[i]
        } else if i == j + 1 {
            betas[j]
        } else if j == i + 1 {
            betas[i]
        } else {
            0.0
        }
    });
    let evd = t
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numeric(format!("tridiagonal eigensolver failed: {e:?}")))?;
    let s = evd.S().column_vector();
    let vals: Vec<f64> = (0..m).map(|i| s[i]).collect();
    let imin = (0..m).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
    let imax = (0..m).max_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
    let u = evd.U();

    let mut xmin = vec![ZERO; n];
    let mut xmax = vec![ZERO; n];
    let mut rec = Recurrence::new(op, start);
    for j in 0..m {
        let (cmin, cmax) = (u[(j, imin)], u[(j, imax)]);
        for i in 0..n {
            xmin[i] += rec.cur[i] * cmin;
            xmax[i] += rec.cur[i] * cmax;
        }
        if j + 1 < m {
            rec.step();
        }
    }
    let rayleigh = |x: &[Complex64]| {
        let mut y = vec![ZERO; n];
        op.apply(x, &mut y);
        dot(x, &y).re / dot(x, x).re
    };
    let (rmin, rmax) = (rayleigh(&xmin), rayleigh(&xmax));
    Ok(LanczosBounds {
        iterations: m,
        ritz_min: vals[imin],
        ritz_max: vals[imax],
        rayleigh_min: rmin,
        rayleigh_max: rmax,
        norm_lower_bound: rmin.abs().max(rmax.abs()),
    })
}

/// Certified lower bound on `‖A‖` for a general operator, from Lanczos on
/// `A*A`.
pub fn operator_norm_lower_bound<A: AdjointOperator>(
    op: &A,
    iterations: usize,
    seed: u64,
) -> Result<f64> {
    let b = extremal_bounds(&NormalOperator(op), iterations, seed)?;
    Ok(b.rayleigh_max.max(0.0).sqrt())
}

fn random_unit_vector(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Complex64> = (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .collect();
    let s = norm(&v);
    v.iter_mut().for_each(|x| *x /= s);
    v
}
