use std::f64::consts::PI;

use faer::{Mat, Side};
use num_complex::Complex64;
use rayon::prelude::*;

use super::SpectrumSet;
use crate::{Error, Result};

/// `{2 cos(2πk/n)}`, the spectrum of `δ₁ + δ₋₁` on `Z/n`.
pub fn circulant_spectrum(n: usize) -> Result<SpectrumSet> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "circulant size must be positive".into(),
        ));
    }
    if n == 1 {
        return SpectrumSet::from_points(vec![2.0]);
    }
    if n == 2 {
        return SpectrumSet::from_points(vec![-2.0, 2.0]);
    }
    SpectrumSet::from_points(
        (0..n)
            .map(|k| 2.0 * (2.0 * PI * k as f64 / n as f64).cos())
            .collect(),
    )
}

/// `{2 cos(jπ/(m+1))}`, the spectrum of the path graph on `m` vertices.
pub fn path_spectrum(m: usize) -> Result<SpectrumSet> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "path length must be positive".into(),
        ));
    }
    SpectrumSet::from_points(
        (1..=m)
            .map(|j| 2.0 * (j as f64 * PI / (m + 1) as f64).cos())
            .collect(),
    )
}

/// `{Σ_i 2 cos(2πk_i/n)}`, the untwisted adjacency spectrum of `(Z/n)^d`.
pub fn torus_spectrum(d: usize, n: usize) -> Result<SpectrumSet> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidParameter(
            "torus needs d >= 1 and n >= 1".into(),
        ));
    }
    let one: Vec<f64> = (0..n)
        .map(|k| 2.0 * (2.0 * PI * k as f64 / n as f64).cos())
        .collect();
    let mut sums = vec![0.0];
    for _ in 0..d {
        sums = sums
            .iter()
            .flat_map(|s| one.iter().map(move |v| s + v))
            .collect();
    }
    SpectrumSet::from_points(sums)
}

/// The `q × q` Bloch matrix of the flux-`p/q` magnetic Laplacian on `Z²` at
/// quasi-momentum `(k₁, k₂)`: diagonal `2cos(k₂ + 2πpj/q)`, unit hopping
/// `j → j+1` closed with the Bloch phase `e^{ik₁}`.
pub fn harper_matrix(p: i64, q: u64, k1: f64, k2: f64) -> Mat<Complex64> {
    let q = q as usize;
    let theta = 2.0 * PI * p as f64 / q as f64;
    let mut h = Mat::<Complex64>::zeros(q, q);
    for j in 0..q {
        h[(j, j)] += Complex64::new(2.0 * (k2 + theta * j as f64).cos(), 0.0);
        let phase = if j == q - 1 {
            Complex64::from_polar(1.0, k1)
        } else {
            Complex64::new(1.0, 0.0)
        };
        let next = (j + 1) % q;
        h[(j, next)] += phase;
        h[(next, j)] += phase.conj();
    }
    h
}

/// Rational-flux band spectrum of the magnetic Laplacian on `Z²`, from the
/// Harper matrices on a `k_grid × k_grid` quasi-momentum grid over
/// `[0, 2π)²`.
///
/// Band `b` is the hull of the `b`-th eigenvalue over the grid. Bands whose
/// gap is below twice the largest eigenvalue jump between neighbouring grid
/// points are merged, so sampling artefacts are not reported as gaps. The
/// merge tolerance is stored as the set's `tol`.
pub fn harper_spectrum(p: i64, q: u64, k_grid: usize) -> Result<SpectrumSet> {
    if q == 0 {
        return Err(Error::InvalidParameter(
            "flux denominator must be positive".into(),
        ));
    }
    if k_grid == 0 {
        return Err(Error::InvalidParameter(
            "quasi-momentum grid must be nonempty".into(),
        ));
    }
    let g = gcd(p.unsigned_abs(), q);
    if g != 1 {
        return Err(Error::InvalidParameter(format!(
            "flux {p}/{q} is not in lowest terms"
        )));
    }
    let qs = q as usize;
    let step = 2.0 * PI / k_grid as f64;
    let rows: Vec<Vec<Vec<f64>>> = (0..k_grid)
        .into_par_iter()
        .map(|i| {
            (0..k_grid)
                .map(|j| {
                    let h = harper_matrix(p, q, i as f64 * step, j as f64 * step);
                    let mut ev = h
                        .self_adjoint_eigenvalues(Side::Lower)
                        .expect("Harper eigensolver");
                    ev.sort_by(f64::total_cmp);
                    ev
                })
                .collect()
        })
        .collect();

    let mut bands = vec![[f64::INFINITY, f64::NEG_INFINITY]; qs];
    let mut jump: f64 = 0.0;
    for i in 0..k_grid {
        for j in 0..k_grid {
            let ev = &rows[i][j];
            let right = &rows[(i + 1) % k_grid][j];
            let up = &rows[i][(j + 1) % k_grid];
            for b in 0..qs {
                bands[b][0] = bands[b][0].min(ev[b]);
                bands[b][1] = bands[b][1].max(ev[b]);
                jump = jump
                    .max((ev[b] - right[b]).abs())
                    .max((ev[b] - up[b]).abs());
            }
        }
    }
    SpectrumSet::from_intervals(bands, 2.0 * jump)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `[-2√(2k-1), 2√(2k-1)]`, the spectrum of the adjacency operator of `F_k`
/// in the regular representation.
pub fn kesten_interval(k: usize) -> Result<SpectrumSet> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "Kesten interval needs rank k >= 2 (got {k})"
        )));
    }
    let r = 2.0 * ((2 * k - 1) as f64).sqrt();
    SpectrumSet::interval(-r, r)
}
