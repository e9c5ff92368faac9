//! Matrix realizations of algebra elements.
//!
//! [`regular_rep`] assembles the twisted left regular representation on a
//! finite quotient, [`compression_rep`] the compression of the regular
//! representation of an infinite group to a Cayley ball. Matrices below
//! [`DENSE_LIMIT`] are stored densely, larger ones in CSR form.

mod calculus;
mod matrix;
mod rep;

pub use calculus::{apply_function, function_norm, functional_calculus, smooth_bump, SmoothBump};
pub use matrix::{Csr, Matrix, DENSE_LIMIT};
pub use rep::{
    compression_rep, regular_rep, regular_rep_on, MatrixRep, Provenance, RepMode, REP_CAP,
};
