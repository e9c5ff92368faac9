use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::groups::{ElemSpec, ElementIndex, Group, QuotientOf};
use crate::{Error, Result};

/// Finitely supported function `G → C`, stored as `(element, coefficient)`
/// pairs with pairwise distinct elements and no zero coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement<E> {
    terms: Vec<(E, Complex64)>,
}

impl<E> Default for AlgebraElement<E> {
    fn default() -> Self {
        Self { terms: Vec::new() }
    }
}

impl<E: Clone + PartialEq> AlgebraElement<E> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `c · δ_g`.
    pub fn delta(g: E, c: Complex64) -> Self {
        if c == Complex64::new(0.0, 0.0) {
            return Self::zero();
        }
        Self {
            terms: vec![(g, c)],
        }
    }

    /// Normalizes arbitrary terms: duplicate elements are merged in order of
    /// first appearance and exact zeros are removed.
    pub fn from_terms<G>(group: &G, terms: impl IntoIterator<Item = (E, Complex64)>) -> Result<Self>
    where
        G: Group<Elem = E>,
    {
        let mut index = group.new_index();
        let mut coeffs: Vec<Complex64> = Vec::new();
        for (g, c) in terms {
            let (i, fresh) = index.insert(g)?;
            if fresh {
                coeffs.push(c);
            } else {
                coeffs[i] += c;
            }
        }
        Ok(Self::from_parts(index.elements(), &coeffs))
    }

    pub(crate) fn from_parts(elems: &[E], coeffs: &[Complex64]) -> Self {
        let terms = elems
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
            .map(|(g, c)| (g.clone(), *c))
            .collect();
        Self { terms }
    }

    pub fn terms(&self) -> &[(E, Complex64)] {
        &self.terms
    }

    pub fn support(&self) -> impl Iterator<Item = &E> {
        self.terms.iter().map(|(g, _)| g)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient at `g`, using the backend's notion of equality.
    pub fn coefficient<G: Group<Elem = E>>(&self, group: &G, g: &E) -> Complex64 {
        self.terms
            .iter()
            .filter(|(h, _)| group.same(h, g))
            .map(|(_, c)| *c)
            .sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        if s == Complex64::new(0.0, 0.0) {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(g, c)| (g.clone(), c * s)).collect(),
        }
    }

    pub fn add<G: Group<Elem = E>>(&self, group: &G, other: &Self) -> Result<Self> {
        Self::from_terms(group, self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn sub<G: Group<Elem = E>>(&self, group: &G, other: &Self) -> Result<Self> {
        self.add(group, &other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Largest coefficient modulus, 0 for the zero element.
    pub fn max_abs(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }

    /// `max_g |f(g) - h(g)|`.
    pub fn distance<G: Group<Elem = E>>(&self, group: &G, other: &Self) -> Result<f64> {
        Ok(self.sub(group, other)?.max_abs())
    }

    /// `Σ_{s ∈ S} δ_s` over the generating set.
    pub fn adjacency<G: Group<Elem = E>>(group: &G) -> Result<Self> {
        Self::from_terms(
            group,
            group
                .generators()
                .iter()
                .map(|s| (s.elem.clone(), Complex64::new(1.0, 0.0))),
        )
    }

    /// Adjacency minus `|S| · δ_e`.
    pub fn laplacian<G: Group<Elem = E>>(group: &G) -> Result<Self> {
        let degree = group.generators().len() as f64;
        Self::adjacency(group)?.add(
            group,
            &Self::delta(group.identity(), Complex64::new(-degree, 0.0)),
        )
    }

    /// Named preset: `adjacency` or `laplacian`.
    pub fn preset<G: Group<Elem = E>>(group: &G, name: &str) -> Result<Self> {
        match name {
            "adjacency" => Self::adjacency(group),
            "laplacian" => Self::laplacian(group),
            other => Err(Error::Parse(format!(
                "unknown element preset `{other}` (expected adjacency or laplacian)"
            ))),
        }
    }

    /// Image `Σ f(g) δ_{π(g)}` in a finite quotient (untwisted push-forward).
    pub fn push_forward<G, Q>(&self, quotient: &Q) -> Result<AlgebraElement<Q::Elem>>
    where
        G: Group<Elem = E>,
        Q: QuotientOf<G>,
    {
        AlgebraElement::from_terms(
            quotient,
            self.terms.iter().map(|(g, c)| (quotient.project(g), *c)),
        )
    }

    /// External form, one record per support element.
    pub fn to_records<G: Group<Elem = E>>(&self, group: &G) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|(g, c)| TermRecord {
                word: group.elem_spec(g),
                re: c.re,
                im: c.im,
            })
            .collect()
    }

    pub fn from_records<G: Group<Elem = E>>(group: &G, records: &[TermRecord]) -> Result<Self> {
        let terms = records
            .iter()
            .map(|r| {
                let g = match &r.word {
                    ElemSpec::Label(s) => group.parse_word(s)?,
                    ElemSpec::Vector(v) => group.elem_from_coordinates(v)?,
                };
                Ok((g, Complex64::new(r.re, r.im)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(group, terms)
    }

    pub fn from_json<G: Group<Elem = E>>(group: &G, text: &str) -> Result<Self> {
        let records: Vec<TermRecord> = serde_json::from_str(text)?;
        Self::from_records(group, &records)
    }

    pub fn to_json<G: Group<Elem = E>>(&self, group: &G) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_records(group))?)
    }
}

/// JSON record `{word, re, im}` for one coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub word: ElemSpec,
    pub re: f64,
    pub im: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{make_free_group, make_lattice, TorusQuotient};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn duplicates_merge_and_zeros_purge() {
        let f = make_free_group(2).unwrap();
        let x = f.parse_word("x").unwrap();
        let y = f.parse_word("y").unwrap();
        let a = AlgebraElement::from_terms(
            &f,
            [(x.clone(), c(1.0)), (y, c(2.0)), (x.clone(), c(-1.0))],
        )
        .unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a.coefficient(&f, &x), c(0.0));
    }

    #[test]
    fn presets() {
        let f = make_free_group(2).unwrap();
        let a = AlgebraElement::adjacency(&f).unwrap();
        assert_eq!(a.len(), 4);
        let l = AlgebraElement::laplacian(&f).unwrap();
        assert_eq!(l.coefficient(&f, &f.identity()), c(-4.0));
        assert!(AlgebraElement::preset(&f, "bogus").is_err());
    }

    #[test]
    fn json_round_trip_on_lattice() {
        let z2 = make_lattice(2).unwrap();
        let text = r#"[{"word":[1,0],"re":1.0,"im":0.5},{"word":"e1*e2","re":-2.0,"im":0.0}]"#;
        let a = AlgebraElement::from_json(&z2, text).unwrap();
        assert_eq!(a.coefficient(&z2, &z2.vector(&[1, 1]).unwrap()), c(-2.0));
        let back = AlgebraElement::from_json(&z2, &a.to_json(&z2).unwrap()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn json_labels_on_free_group() {
        let f = make_free_group(2).unwrap();
        let a = AlgebraElement::from_json(&f, r#"[{"word":"x*y^-1","re":1,"im":0}]"#).unwrap();
        assert_eq!(a.to_records(&f)[0].word, ElemSpec::Label("x*y^-1".into()));
        assert!(AlgebraElement::from_json(&f, r#"[{"word":[1],"re":1,"im":0}]"#).is_err());
    }

    #[test]
    fn push_forward_merges_preimages() {
        let z1 = make_lattice(1).unwrap();
        let q = TorusQuotient::new(1, 2).unwrap();
        let a = AlgebraElement::adjacency(&z1).unwrap();
        let b = a.push_forward(&q).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b.terms()[0].1, c(2.0));
    }
}
