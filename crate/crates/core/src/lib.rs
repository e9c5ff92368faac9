//! Spectral theory of twisted group convolution algebras over fields of
//! groupoids.
//!
//! The crate builds finitely supported elements of twisted group algebras
//! over concrete group backends (free abelian lattices, free groups, their
//! finite quotients and a cocompact Fuchsian surface group), represents them
//! as explicit Hermitian matrices (twisted regular representations on finite
//! quotients, compressions to Cayley balls on infinite groups) and compares
//! the resulting spectra in the Hausdorff metric.
//!
//! The [`fields`] module contains the experiment pipelines: convergence of
//! spectra along chains of finite quotients, magnetic flux sweeps, empirical
//! rapid-decay constants and functional-calculus semicontinuity probes.

pub mod algebra;
pub mod cocycles;
pub mod error;
pub mod fields;
pub mod groups;
pub mod repr;
pub mod spectra;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Default seed used for every randomized procedure unless overridden.
pub const DEFAULT_SEED: u64 = 0x5EED;
