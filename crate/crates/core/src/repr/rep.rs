use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Matrix;
use crate::algebra::{i_norm, AlgebraElement, Cocycle, NormSide};
use crate::groups::{Ball, FiniteGroup, Group, QuotientOf};
use crate::spectra::{eigenvalues, SpectrumSet};
use crate::{Error, Result};

/// Largest representation dimension that will be assembled.
pub const REP_CAP: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepMode {
    Quotient,
    Compression,
}

/// Where a matrix came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub element_terms: usize,
    pub element_i_norm: f64,
    pub cocycle: String,
    pub backend: String,
    pub mode: RepMode,
}

/// Matrix of `π(f)` on an ordered basis of group elements.
#[derive(Debug, Clone)]
pub struct MatrixRep<E> {
    basis: Vec<E>,
    matrix: Matrix,
    provenance: Provenance,
}

impl<E> MatrixRep<E> {
    pub fn basis(&self) -> &[E] {
        &self.basis
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn eigenvalues(&self) -> Result<SpectrumSet> {
        eigenvalues(&self.matrix)
    }
}

impl<E: Clone> MatrixRep<E> {
    /// Same basis and provenance, different entries.
    pub fn with_matrix(&self, matrix: Matrix) -> MatrixRep<E> {
        MatrixRep {
            basis: self.basis.clone(),
            matrix,
            provenance: self.provenance.clone(),
        }
    }
}

fn check_dim(n: usize, what: &'static str) -> Result<()> {
    if n > REP_CAP {
        return Err(Error::DimensionCap {
            dim: n,
            cap: REP_CAP,
            what,
        });
    }
    Ok(())
}

fn provenance<E: Clone + PartialEq>(
    f: &AlgebraElement<E>,
    cocycle: String,
    backend: String,
    mode: RepMode,
) -> Provenance {
    Provenance {
        element_terms: f.len(),
        element_i_norm: i_norm(f, NormSide::Max),
        cocycle,
        backend,
        mode,
    }
}

/// Twisted left regular representation of an element of `C(Q, ω)` on
/// `ℓ²(Q)`: `M[hη, η] += ω(h, η) f(h)`.
pub fn regular_rep_on<Q, C>(
    f: &AlgebraElement<Q::Elem>,
    omega: &C,
    quotient: &Q,
) -> Result<MatrixRep<Q::Elem>>
where
    Q: FiniteGroup,
    C: Cocycle<Q::Elem> + ?Sized,
{
    let n = quotient.size();
    check_dim(n, "regular representation")?;
    let elems = quotient.elements();
    let trivial = omega.is_trivial();
    let triplets: Vec<(usize, usize, Complex64)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|j| {
            let eta = &elems[j];
            f.terms().iter().map(move |(h, c)| {
                let i = quotient.index_of(&quotient.multiply(h, eta));
                let v = if trivial { *c } else { omega.eval(h, eta) * c };
                (i, j, v)
            })
        })
        .collect();
    Ok(MatrixRep {
        basis: elems.to_vec(),
        matrix: Matrix::from_triplets(n, triplets),
        provenance: provenance(f, omega.describe(), quotient.name(), RepMode::Quotient),
    })
}

/// `π_n(f)` for `f` on the base group: the element is pushed forward to the
/// quotient, where `ω` must be defined (directly or by descent). Assembly
/// iterates over the support only, `O(|supp f| · |Q|)`.
pub fn regular_rep<G, Q, C>(
    f: &AlgebraElement<G::Elem>,
    omega: &C,
    quotient: &Q,
) -> Result<MatrixRep<Q::Elem>>
where
    G: Group,
    Q: QuotientOf<G>,
    C: Cocycle<Q::Elem> + ?Sized,
{
    let pushed = f.push_forward(quotient)?;
    let mut rep = regular_rep_on(&pushed, omega, quotient)?;
    rep.provenance.element_terms = f.len();
    rep.provenance.element_i_norm = i_norm(f, NormSide::Max);
    Ok(rep)
}

/// Compression of the regular representation to `ℓ²(B)` for a ball `B`:
/// `M[γ, η] = ω(γη⁻¹, η) f(γη⁻¹)` for `γ, η ∈ B`.
pub fn compression_rep<G, C>(
    f: &AlgebraElement<G::Elem>,
    omega: &C,
    group: &G,
    ball: &Ball<G>,
) -> Result<MatrixRep<G::Elem>>
where
    G: Group,
    C: Cocycle<G::Elem> + ?Sized,
{
    let n = ball.len();
    check_dim(n, "ball compression")?;
    let elems = ball.elements();
    let trivial = omega.is_trivial();
    let columns: Vec<Result<Vec<(usize, usize, Complex64)>>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let eta = &elems[j];
            let mut col = Vec::with_capacity(f.len());
            for (s, c) in f.terms() {
                if let Some(i) = ball.try_position(&group.multiply(s, eta))? {
                    let v = if trivial { *c } else { omega.eval(s, eta) * c };
                    col.push((i, j, v));
                }
            }
            Ok(col)
        })
        .collect();
    let mut triplets = Vec::with_capacity(n * f.len());
    for col in columns {
        triplets.extend(col?);
    }
    Ok(MatrixRep {
        basis: elems.to_vec(),
        matrix: Matrix::from_triplets(n, triplets),
        provenance: provenance(f, omega.describe(), group.name(), RepMode::Compression),
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::algebra::Trivial;
    use crate::cocycles::{area_cocycle, heisenberg_quotient};
    use crate::groups::{
        enumerate_ball, make_free_group, make_lattice, make_octagon_group, IntVec, SanovQuotient,
        TorusQuotient,
    };
    use crate::spectra::operator_norm;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn cyclic_permutation() {
        let q = TorusQuotient::new(1, 3).unwrap();
        let f = AlgebraElement::delta(IntVec::from_slice(&[1]), one());
        let rep = regular_rep::<crate::groups::Lattice, _, _>(&f, &Trivial, &q).unwrap();
        let m = rep.matrix();
        for j in 0..3 {
            assert_eq!(m.get((j + 1) % 3, j), one());
        }
        assert_eq!(m.nnz(), 3);
        assert!((operator_norm(m).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sanov_row_sums_are_four() {
        let f2 = make_free_group(2).unwrap();
        let a = AlgebraElement::adjacency(&f2).unwrap();
        for m in [4, 8] {
            let q = SanovQuotient::new(m).unwrap();
            let rep = regular_rep(&a, &Trivial, &q).unwrap();
            let mat = rep.matrix();
            for i in 0..rep.dim() {
                let s: Complex64 = (0..rep.dim()).map(|j| mat.get(i, j)).sum();
                assert_eq!(s, Complex64::new(4.0, 0.0));
            }
        }
    }

    #[test]
    fn half_flux_torus_is_hermitian() {
        let z2 = make_lattice(2).unwrap();
        let q = TorusQuotient::new(2, 4).unwrap();
        let w = heisenberg_quotient(1, 2, 4).unwrap();
        let rep = regular_rep(&AlgebraElement::adjacency(&z2).unwrap(), &w, &q).unwrap();
        assert!(rep.matrix().hermitian_defect() < 1e-15);
        assert_eq!(rep.matrix().nnz(), 16 * 4);
    }

    #[test]
    fn path_compression_top_eigenvalue() {
        let z1 = make_lattice(1).unwrap();
        let a = AlgebraElement::adjacency(&z1).unwrap();
        for r in [1usize, 5, 20] {
            let ball = enumerate_ball(&z1, r, 1000).unwrap();
            let rep = compression_rep(&a, &Trivial, &z1, &ball).unwrap();
            let top = rep.eigenvalues().unwrap().max();
            let expected = 2.0 * (PI / (2 * r + 2) as f64).cos();
            assert!((top - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn tree_compression_is_tree_adjacency() {
        let f2 = make_free_group(2).unwrap();
        let a = AlgebraElement::adjacency(&f2).unwrap();
        let ball = enumerate_ball(&f2, 3, 1000).unwrap();
        let rep = compression_rep(&a, &Trivial, &f2, &ball).unwrap();
        // Edges of the truncated tree: |B| - 1, each stored twice.
        assert_eq!(rep.matrix().nnz(), 2 * (ball.len() - 1));
    }

    #[test]
    fn octagon_radius_one() {
        let g = make_octagon_group();
        let ball = enumerate_ball(&g, 1, 100).unwrap();
        let a = AlgebraElement::adjacency(&g).unwrap();
        let rep = compression_rep(&a, &area_cocycle(0.0, &g), &g, &ball).unwrap();
        assert_eq!(rep.dim(), 9);
        assert!(rep.eigenvalues().unwrap().spectral_radius() <= 8.0);
        let twisted = compression_rep(&a, &area_cocycle(0.9, &g), &g, &ball).unwrap();
        assert!(twisted.matrix().hermitian_defect() < 1e-12);
    }
}
