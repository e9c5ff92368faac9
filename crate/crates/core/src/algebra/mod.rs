//! Twisted convolution algebras `C_c(G, ω)` over group backends.
//!
//! Elements are finitely supported coefficient maps. The product is the
//! twisted convolution, the adjoint is the twisted involution, and the
//! I-norm and weighted `ℓ²` norms are the ones entering the rapid-decay
//! inequality.

mod cocycle;
mod element;
mod ops;

pub use cocycle::{check_cocycle, Cocycle, CocycleReport, Tabulated, Trivial, TABLE_CAP};
pub use element::{AlgebraElement, TermRecord};
pub use ops::{convolve, i_norm, involute, self_adjoint_defect, weighted_two_norm, NormSide};
