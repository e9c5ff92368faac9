use num_complex::Complex64;

use super::{AlgebraElement, Cocycle};
use crate::groups::{ElementIndex, Group, LengthFunction};
use crate::{Error, Result};

/// Twisted convolution `(f₁ * f₂)(γ) = Σ_η ω(γη⁻¹, η) f₁(γη⁻¹) f₂(η)`,
/// evaluated as `Σ_{a,b} ω(a, b) f₁(a) f₂(b) δ_{ab}`.
pub fn convolve<G: Group, C: Cocycle<G::Elem> + ?Sized>(
    f1: &AlgebraElement<G::Elem>,
    f2: &AlgebraElement<G::Elem>,
    omega: &C,
    group: &G,
) -> Result<AlgebraElement<G::Elem>> {
    let trivial = omega.is_trivial();
    let mut index = group.new_index();
    let mut coeffs: Vec<Complex64> = Vec::new();
    for (a, c1) in f1.terms() {
        for (b, c2) in f2.terms() {
            let mut v = c1 * c2;
            if !trivial {
                v *= omega.eval(a, b);
            }
            let (i, fresh) = index.insert(group.multiply(a, b))?;
            if fresh {
                coeffs.push(v);
            } else {
                coeffs[i] += v;
            }
        }
    }
    Ok(AlgebraElement::from_parts(index.elements(), &coeffs))
}

/// Involution `f*(γ) = conj(ω(γ, γ⁻¹)) conj(f(γ⁻¹))`.
pub fn involute<G: Group, C: Cocycle<G::Elem> + ?Sized>(
    f: &AlgebraElement<G::Elem>,
    omega: &C,
    group: &G,
) -> AlgebraElement<G::Elem> {
    let (elems, coeffs): (Vec<_>, Vec<_>) = f
        .terms()
        .iter()
        .map(|(g, c)| {
            let gi = group.invert(g);
            let w = omega.eval(&gi, g);
            (gi, (w * c).conj())
        })
        .unzip();
    AlgebraElement::from_parts(&elems, &coeffs)
}

/// `max_γ |f(γ) - f*(γ)|`; zero exactly when `f` is self-adjoint.
pub fn self_adjoint_defect<G: Group, C: Cocycle<G::Elem> + ?Sized>(
    f: &AlgebraElement<G::Elem>,
    omega: &C,
    group: &G,
) -> Result<f64> {
    f.distance(group, &involute(f, omega, group))
}

/// Which one-sided norm to take. On groups (a single unit) all three agree;
/// the distinction is kept for groupoid fibers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormSide {
    Source,
    Range,
    #[default]
    Max,
}

/// The I-norm `‖f‖_I = Σ |f(γ)|`.
pub fn i_norm<E: Clone + PartialEq>(f: &AlgebraElement<E>, side: NormSide) -> f64 {
    let _ = side;
    f.terms().iter().map(|(_, c)| c.norm()).sum()
}

/// Weighted norm `‖f‖_{2,q} = (Σ |f(γ)|² (1 + l(γ))^{2q})^{1/2}`.
pub fn weighted_two_norm<E, L>(f: &AlgebraElement<E>, l: &L, q: f64, side: NormSide) -> Result<f64>
where
    E: Clone + PartialEq,
    L: LengthFunction<E> + ?Sized,
{
    let _ = side;
    if !(q >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "weight exponent q must be nonnegative (got {q})"
        )));
    }
    let sum: f64 = f
        .terms()
        .iter()
        .map(|(g, c)| c.norm_sqr() * (1.0 + l.length(g)).powf(2.0 * q))
        .sum();
    Ok(sum.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Trivial;
    use crate::groups::{make_free_group, make_lattice, FreeWord, WordLength};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn adjacency_square_has_four_at_identity() {
        let f = make_free_group(2).unwrap();
        let a = AlgebraElement::adjacency(&f).unwrap();
        let a2 = convolve(&a, &a, &Trivial, &f).unwrap();
        assert_eq!(a2.coefficient(&f, &f.identity()), c(4.0));
        // 4 + 4·3 words: identity and the twelve reduced words of length 2.
        assert_eq!(a2.len(), 13);
        assert_eq!(i_norm(&a2, NormSide::Max), 16.0);
    }

    #[test]
    fn delta_unit() {
        let z2 = make_lattice(2).unwrap();
        let a = AlgebraElement::adjacency(&z2).unwrap();
        let e = AlgebraElement::delta(z2.identity(), c(1.0));
        assert_eq!(convolve(&e, &a, &Trivial, &z2).unwrap(), a);
    }

    #[test]
    fn adjacency_is_self_adjoint() {
        let f = make_free_group(2).unwrap();
        let a = AlgebraElement::adjacency(&f).unwrap();
        assert_eq!(self_adjoint_defect(&a, &Trivial, &f).unwrap(), 0.0);
        let x = AlgebraElement::delta(f.parse_word("x").unwrap(), c(1.0));
        let xs = involute(&x, &Trivial, &f);
        assert_eq!(xs.terms()[0].0, f.parse_word("x^-1").unwrap());
    }

    #[test]
    fn norm_examples() {
        let f = make_free_group(2).unwrap();
        let a = AlgebraElement::adjacency(&f).unwrap();
        assert_eq!(i_norm(&a, NormSide::Source), 4.0);
        assert_eq!(
            i_norm(&AlgebraElement::<FreeWord>::zero(), NormSide::Range),
            0.0
        );
        let b = AlgebraElement::from_terms(
            &f,
            [
                (f.identity(), c(2.0)),
                (f.parse_word("x").unwrap(), c(-1.0)),
            ],
        )
        .unwrap();
        assert_eq!(i_norm(&b, NormSide::Max), 3.0);

        let wl = WordLength(&f);
        assert_eq!(weighted_two_norm(&a, &wl, 0.0, NormSide::Max).unwrap(), 2.0);
        assert_eq!(weighted_two_norm(&a, &wl, 2.0, NormSide::Max).unwrap(), 8.0);
        let x = AlgebraElement::delta(f.parse_word("x").unwrap(), c(1.0));
        assert_eq!(weighted_two_norm(&x, &wl, 2.0, NormSide::Max).unwrap(), 4.0);
        assert!(weighted_two_norm(&a, &wl, -0.5, NormSide::Max).is_err());
        assert!(weighted_two_norm(&a, &wl, f64::NAN, NormSide::Max).is_err());
    }
}
