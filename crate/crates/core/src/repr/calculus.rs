use faer::Mat;

use super::{Matrix, MatrixRep};
use crate::spectra::{eigen_decomposition, Eigen};
use crate::{Error, Result};

/// `φ(M) = U φ(Λ) U*` by full eigendecomposition.
pub fn functional_calculus<E: Clone>(
    rep: &MatrixRep<E>,
    phi: impl Fn(f64) -> f64,
) -> Result<MatrixRep<E>> {
    let eig = eigen_decomposition(rep.matrix())?;
    Ok(rep.with_matrix(apply_function(&eig, phi)))
}

/// Rebuilds `U φ(Λ) U*` from a decomposition.
pub fn apply_function(eig: &Eigen, phi: impl Fn(f64) -> f64) -> Matrix {
    let u = &eig.vectors;
    let n = u.nrows();
    let weights: Vec<f64> = eig.values.iter().map(|&l| phi(l)).collect();
    let scaled = Mat::from_fn(n, n, |i, k| u[(i, k)] * weights[k]);
    Matrix::Dense(scaled * u.adjoint())
}

/// `max_k |φ(λ_k)|`, the operator norm of `φ(M)` for Hermitian `M`.
pub fn function_norm(values: &[f64], phi: impl Fn(f64) -> f64) -> f64 {
    values.iter().map(|&l| phi(l).abs()).fold(0.0, f64::max)
}

/// `C^∞` plateau bump: 1 on `[c - r_in, c + r_in]`, 0 outside
/// `(c - r_out, c + r_out)`, with the `exp(-1/t)` transition in between.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SmoothBump {
    pub center: f64,
    pub inner: f64,
    pub outer: f64,
}

fn psi(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// Builds a bump. `inner = 0` is allowed and gives a bump that equals 1 only
/// at the center.
pub fn smooth_bump(center: f64, inner: f64, outer: f64) -> Result<SmoothBump> {
    if !(center.is_finite() && inner >= 0.0 && outer > inner && outer.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "bump radii must satisfy 0 <= inner < outer (got inner={inner}, outer={outer})"
        )));
    }
    Ok(SmoothBump {
        center,
        inner,
        outer,
    })
}

impl SmoothBump {
    pub fn eval(&self, x: f64) -> f64 {
        let t = ((x - self.center).abs() - self.inner) / (self.outer - self.inner);
        if t <= 0.0 {
            return 1.0;
        }
        if t >= 1.0 {
            return 0.0;
        }
        let (a, b) = (psi(1.0 - t), psi(t));
        a / (a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraElement, Trivial};
    use crate::groups::{make_free_group, make_lattice, SanovQuotient, TorusQuotient};
    use crate::repr::regular_rep;
    use crate::spectra::{eigenvalues, kesten_interval, operator_norm};

    #[test]
    fn bump_shape() {
        let b = smooth_bump(2.0, 0.5, 1.0).unwrap();
        assert_eq!(b.eval(2.0), 1.0);
        assert_eq!(b.eval(2.5), 1.0);
        assert_eq!(b.eval(3.0), 0.0);
        assert_eq!(b.eval(-5.0), 0.0);
        for s in [0.6, 0.7, 0.77, 0.9] {
            assert!((b.eval(2.0 + s) - b.eval(2.0 - s)).abs() < 1e-12);
            assert!(b.eval(2.0 + s) > 0.0 && b.eval(2.0 + s) < 1.0);
        }
        assert!(b.eval(2.6) > b.eval(2.9));
        assert!(smooth_bump(0.0, 1.0, 1.0).is_err());
        assert!(smooth_bump(0.0, -1.0, 1.0).is_err());
        assert!(smooth_bump(0.0, 0.0, 1.0).is_ok());
    }

    #[test]
    fn identity_function_reproduces_matrix() {
        let z1 = make_lattice(1).unwrap();
        let q = TorusQuotient::new(1, 7).unwrap();
        let rep = regular_rep(&AlgebraElement::adjacency(&z1).unwrap(), &Trivial, &q).unwrap();
        let same = functional_calculus(&rep, |x| x).unwrap();
        assert!(same.matrix().max_difference(rep.matrix()) < 1e-10);
    }

    #[test]
    fn bump_at_four_detects_trivial_eigenvalue() {
        let f2 = make_free_group(2).unwrap();
        let q = SanovQuotient::new(8).unwrap();
        let rep = regular_rep(&AlgebraElement::adjacency(&f2).unwrap(), &Trivial, &q).unwrap();
        let edge = kesten_interval(2).unwrap().max() + 0.1;
        let bump = smooth_bump(4.0, 0.05, 4.0 - edge).unwrap();
        assert_eq!(bump.eval(edge), 0.0);
        let out = functional_calculus(&rep, |x| bump.eval(x)).unwrap();
        assert!(operator_norm(out.matrix()).unwrap() >= 1.0 - 1e-9);
    }

    #[test]
    fn disjoint_bump_annihilates() {
        let z1 = make_lattice(1).unwrap();
        let q = TorusQuotient::new(1, 12).unwrap();
        let rep = regular_rep(&AlgebraElement::adjacency(&z1).unwrap(), &Trivial, &q).unwrap();
        let bump = smooth_bump(3.0, 0.0, 0.5).unwrap();
        let out = functional_calculus(&rep, |x| bump.eval(x)).unwrap();
        assert_eq!(out.matrix().max_abs(), 0.0);
        let spec = eigenvalues(rep.matrix()).unwrap();
        assert_eq!(function_norm(spec.points().unwrap(), |x| bump.eval(x)), 0.0);
    }
}
