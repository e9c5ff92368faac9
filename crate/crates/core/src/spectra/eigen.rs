use faer::{Mat, Side};
use num_complex::Complex64;

use super::SpectrumSet;
use crate::repr::Matrix;
use crate::{Error, Result};

/// Largest dimension for full dense eigendecomposition.
pub const EIGEN_CAP: usize = 4096;

/// Relative Hermitian defect tolerated before a matrix is rejected.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Mat<Complex64>,
}

fn checked_dense(m: &Matrix) -> Result<(Mat<Complex64>, bool)> {
    let n = m.dim();
    if n > EIGEN_CAP {
        return Err(Error::DimensionCap {
            dim: n,
            cap: EIGEN_CAP,
            what: "dense eigendecomposition",
        });
    }
    if n == 0 {
        return Err(Error::Empty("matrix"));
    }
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOL * m.max_abs().max(1.0) {
        return Err(Error::NotHermitian { defect });
    }
    let dense = m.to_dense();
    let real = (0..n).all(|j| dense.col_as_slice(j).iter().all(|v| v.im == 0.0));
    Ok((dense, real))
}

fn evd_error(e: faer::linalg::evd::EvdError) -> Error {
    Error::Numeric(format!("eigensolver failed to converge: {e:?}"))
}

/// All eigenvalues of a Hermitian matrix, ascending. Real symmetric input
/// takes a faster real path.
pub fn eigenvalues(m: &Matrix) -> Result<SpectrumSet> {
    let (dense, real) = checked_dense(m)?;
    let values = if real {
        let r = Mat::<f64>::from_fn(dense.nrows(), dense.ncols(), |i, j| dense[(i, j)].re);
        r.self_adjoint_eigenvalues(Side::Lower).map_err(evd_error)?
    } else {
        dense
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(evd_error)?
    };
    SpectrumSet::from_points(values)
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn eigen_decomposition(m: &Matrix) -> Result<Eigen> {
    let (dense, _) = checked_dense(m)?;
    let evd = dense.self_adjoint_eigen(Side::Lower).map_err(evd_error)?;
    let s = evd.S().column_vector();
    let n = dense.nrows();
    let values: Vec<f64> = (0..n).map(|i| s[i].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let u = evd.U();
    Ok(Eigen {
        values: order.iter().map(|&i| values[i]).collect(),
        vectors: Mat::from_fn(n, n, |i, j| u[(i, order[j])]),
    })
}

/// Operator norm (largest singular value) of a matrix of dimension at most
/// [`EIGEN_CAP`].
pub fn operator_norm(m: &Matrix) -> Result<f64> {
    let n = m.dim();
    if n > EIGEN_CAP {
        return Err(Error::DimensionCap {
            dim: n,
            cap: EIGEN_CAP,
            what: "dense singular values",
        });
    }
    if n == 0 {
        return Ok(0.0);
    }
    let sv = m
        .to_dense()
        .singular_values()
        .map_err(|e| Error::Numeric(format!("SVD failed to converge: {e:?}")))?;
    Ok(sv.into_iter().fold(0.0, f64::max))
}

/// `max_k ‖M v_k − λ_k v_k‖ / max(‖M‖_max, 1)` over all eigenpairs.
pub fn eigen_residual(m: &Matrix, eig: &Eigen) -> f64 {
    let n = m.dim();
    let scale = m.max_abs().max(1.0);
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    let mut worst: f64 = 0.0;
    for (k, &lambda) in eig.values.iter().enumerate() {
        let v = eig.vectors.col_as_slice(k);
        m.matvec(v, &mut y);
        let r: f64 = y
            .iter()
            .zip(v)
            .map(|(a, b)| (a - b * lambda).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst = worst.max(r / scale);
    }
    worst
}
