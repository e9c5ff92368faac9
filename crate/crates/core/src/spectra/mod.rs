//! Spectra of Hermitian matrices and operators, spectral sets with the
//! Hausdorff metric, and closed-form oracles.

mod eigen;
mod lanczos;
mod oracles;
mod set;

pub use eigen::{
    eigen_decomposition, eigen_residual, eigenvalues, operator_norm, Eigen, EIGEN_CAP,
    HERMITIAN_TOL,
};
pub use lanczos::{
    extremal_bounds, operator_norm_lower_bound, AdjointOperator, LanczosBounds, LinearOperator,
    NormalOperator,
};
pub use oracles::{
    circulant_spectrum, harper_matrix, harper_spectrum, kesten_interval, path_spectrum,
    torus_spectrum,
};
pub use set::{directed_hausdorff, hausdorff, SpectrumSet};
