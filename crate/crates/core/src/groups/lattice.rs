use smallvec::SmallVec;

use super::{
    bfs_lengths, ElemSpec, FiniteGroup, Generator, Group, HashIndex, LevelInfo, QuotientOf,
    QUOTIENT_CAP,
};
use crate::{Error, Result};

/// Integer vector used for elements of `Z^d` and `(Z/n)^d`.
pub type IntVec = SmallVec<[i64; 4]>;

fn unit_generators(d: usize) -> Vec<Generator<IntVec>> {
    let mut gens = Vec::with_capacity(2 * d);
    for i in 0..d {
        let mut plus = IntVec::from_elem(0, d);
        plus[i] = 1;
        let mut minus = IntVec::from_elem(0, d);
        minus[i] = -1;
        gens.push(Generator {
            label: format!("e{}", i + 1),
            elem: plus,
        });
        gens.push(Generator {
            label: format!("-e{}", i + 1),
            elem: minus,
        });
    }
    gens
}

/// The free abelian group `Z^d` with generators `±e_1, …, ±e_d`.
#[derive(Debug, Clone)]
pub struct Lattice {
    dim: usize,
    gens: Vec<Generator<IntVec>>,
}

/// Builds `Z^d`; word length is the `l^1` norm.
pub fn make_lattice(d: usize) -> Result<Lattice> {
    if d == 0 {
        return Err(Error::InvalidParameter(
            "lattice rank must be at least 1".into(),
        ));
    }
    Ok(Lattice {
        dim: d,
        gens: unit_generators(d),
    })
}

impl Lattice {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vector(&self, coords: &[i64]) -> Result<IntVec> {
        if coords.len() != self.dim {
            return Err(Error::InvalidParameter(format!(
                "expected {} coordinates, got {}",
                self.dim,
                coords.len()
            )));
        }
        Ok(IntVec::from_slice(coords))
    }
}

impl Group for Lattice {
    type Elem = IntVec;
    type Index = HashIndex<IntVec>;

    fn name(&self) -> String {
        format!("Z^{}", self.dim)
    }

    fn identity(&self) -> IntVec {
        IntVec::from_elem(0, self.dim)
    }

    fn multiply(&self, a: &IntVec, b: &IntVec) -> IntVec {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn invert(&self, a: &IntVec) -> IntVec {
        a.iter().map(|x| -x).collect()
    }

    fn generators(&self) -> &[Generator<IntVec>] {
        &self.gens
    }

    fn new_index(&self) -> Self::Index {
        HashIndex::default()
    }

    fn word_length(&self, g: &IntVec) -> Option<usize> {
        Some(g.iter().map(|x| x.unsigned_abs() as usize).sum())
    }

    fn elem_from_coordinates(&self, coords: &[i64]) -> Result<IntVec> {
        self.vector(coords)
    }

    fn elem_spec(&self, g: &IntVec) -> ElemSpec {
        ElemSpec::Vector(g.to_vec())
    }
}

/// The finite quotient `(Z/n)^d = Z^d / nZ^d`.
///
/// Elements are residue vectors with entries in `0..n`, enumerated in
/// lexicographic order so that the matrix index is the mixed-radix value.
#[derive(Debug, Clone)]
pub struct TorusQuotient {
    dim: usize,
    modulus: u64,
    gens: Vec<Generator<IntVec>>,
    elements: Vec<IntVec>,
    lengths: Vec<usize>,
}

impl TorusQuotient {
    pub fn new(dim: usize, modulus: u64) -> Result<Self> {
        if dim == 0 || modulus == 0 {
            return Err(Error::InvalidParameter(format!(
                "torus quotient needs d >= 1 and n >= 1 (got d={dim}, n={modulus})"
            )));
        }
        let size = (modulus as u128).pow(dim as u32);
        if size > QUOTIENT_CAP as u128 {
            return Err(Error::DimensionCap {
                dim: size.min(usize::MAX as u128) as usize,
                cap: QUOTIENT_CAP,
                what: "torus quotient",
            });
        }
        let size = size as usize;
        let n = modulus as i64;
        let gens = unit_generators(dim)
            .into_iter()
            .map(|g| Generator {
                label: g.label,
                elem: g.elem.iter().map(|x| x.rem_euclid(n)).collect(),
            })
            .collect();
        let elements: Vec<IntVec> = (0..size)
            .map(|mut idx| {
                let mut v = IntVec::from_elem(0, dim);
                for slot in v.iter_mut().rev() {
                    *slot = (idx % modulus as usize) as i64;
                    idx /= modulus as usize;
                }
                v
            })
            .collect();
        let mut q = TorusQuotient {
            dim,
            modulus,
            gens,
            elements,
            lengths: Vec::new(),
        };
        let lengths = bfs_lengths(&q.elements, 0, |g| {
            q.gens
                .iter()
                .map(|s| q.index_of(&q.multiply(g, &s.elem)))
                .collect()
        });
        q.lengths = lengths;
        Ok(q)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn reduce(&self, x: i64) -> i64 {
        x.rem_euclid(self.modulus as i64)
    }
}

impl Group for TorusQuotient {
    type Elem = IntVec;
    type Index = HashIndex<IntVec>;

    fn name(&self) -> String {
        format!("(Z/{})^{}", self.modulus, self.dim)
    }

    fn identity(&self) -> IntVec {
        IntVec::from_elem(0, self.dim)
    }

    fn multiply(&self, a: &IntVec, b: &IntVec) -> IntVec {
        a.iter().zip(b).map(|(x, y)| self.reduce(x + y)).collect()
    }

    fn invert(&self, a: &IntVec) -> IntVec {
        a.iter().map(|x| self.reduce(-x)).collect()
    }

    fn generators(&self) -> &[Generator<IntVec>] {
        &self.gens
    }

    fn new_index(&self) -> Self::Index {
        HashIndex::default()
    }

    fn order(&self) -> Option<usize> {
        Some(self.elements.len())
    }

    fn word_length(&self, g: &IntVec) -> Option<usize> {
        Some(self.quotient_length(g))
    }

    fn elem_from_coordinates(&self, coords: &[i64]) -> Result<IntVec> {
        if coords.len() != self.dim {
            return Err(Error::Parse(format!(
                "expected {} coordinates, got {}",
                self.dim,
                coords.len()
            )));
        }
        Ok(coords.iter().map(|&x| self.reduce(x)).collect())
    }

    fn elem_spec(&self, g: &IntVec) -> ElemSpec {
        ElemSpec::Vector(g.to_vec())
    }
}

impl FiniteGroup for TorusQuotient {
    fn elements(&self) -> &[IntVec] {
        &self.elements
    }

    fn index_of(&self, g: &IntVec) -> usize {
        let n = self.modulus as usize;
        g.iter()
            .fold(0usize, |acc, &x| acc * n + self.reduce(x) as usize)
    }

    fn quotient_length(&self, g: &IntVec) -> usize {
        self.lengths[self.index_of(g)]
    }
}

impl QuotientOf<Lattice> for TorusQuotient {
    fn project(&self, g: &IntVec) -> IntVec {
        g.iter().map(|&x| self.reduce(x)).collect()
    }

    fn level_info(&self) -> LevelInfo {
        LevelInfo {
            modulus: self.modulus,
            order: self.elements.len(),
            generator_images: self
                .gens
                .iter()
                .map(|g| (g.label.clone(), vec![g.elem.to_vec()]))
                .collect(),
        }
    }
}
