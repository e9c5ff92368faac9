//! Concrete group backends and the machinery shared by all of them.
//!
//! Every backend implements [`Group`]. Finite backends additionally implement
//! [`FiniteGroup`], which fixes an enumeration of the elements and tabulates
//! the word length on the quotient Cayley graph; quotient backends implement
//! [`QuotientOf`] for the projection from their base group.

mod ball;
mod chain;
mod free;
mod fuchsian;
mod lattice;
mod length;
mod sanov;

use std::fmt::Debug;
use std::hash::Hash;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use ball::{enumerate_ball, Ball, DEFAULT_BALL_CAP};
pub use chain::{lattice_quotient_chain, sanov_chain, ChainManifest, LevelInfo, QuotientChain};
pub use free::{make_free_group, FreeGroup, FreeWord};
pub use fuchsian::{make_octagon_group, FuchsianGroup, FuchsianIndex, Sl2R, DEDUP_EPS};
pub use lattice::{make_lattice, IntVec, Lattice, TorusQuotient};
pub use length::{check_length, LengthFunction, LengthReport, WordLength};
pub use sanov::{Mat2, SanovQuotient};

/// Largest finite quotient that will be enumerated.
pub(crate) const QUOTIENT_CAP: usize = 1 << 22;

/// External form of a group element: a word in generator labels or an
/// integer coordinate vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemSpec {
    Label(String),
    Vector(Vec<i64>),
}

/// A labelled generator from a symmetric generating set.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator<E> {
    pub label: String,
    pub elem: E,
}

/// Lookup table from elements to insertion indices.
///
/// Exact backends use [`HashIndex`]; the Fuchsian backend identifies elements
/// up to a tolerance and supplies its own index.
pub trait ElementIndex<E>: Send + Sync {
    fn get(&self, g: &E) -> Option<usize>;

    /// Like [`ElementIndex::get`], but reports identification failures of
    /// tolerance-based indices instead of treating them as absent.
    fn lookup(&self, g: &E) -> Result<Option<usize>> {
        Ok(self.get(g))
    }

    /// Inserts `g` unless an equal element is present. Returns the index of
    /// the stored element and whether it was newly inserted.
    fn insert(&mut self, g: E) -> Result<(usize, bool)>;

    fn elements(&self) -> &[E];

    fn len(&self) -> usize {
        self.elements().len()
    }

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Index for backends with exact, hashable elements.
#[derive(Debug, Clone)]
pub struct HashIndex<E> {
    elems: Vec<E>,
    map: FxHashMap<E, usize>,
}

impl<E> Default for HashIndex<E> {
    fn default() -> Self {
        Self {
            elems: Vec::new(),
            map: FxHashMap::default(),
        }
    }
}

impl<E: Clone + Eq + Hash + Send + Sync> ElementIndex<E> for HashIndex<E> {
    fn get(&self, g: &E) -> Option<usize> {
        self.map.get(g).copied()
    }

    fn insert(&mut self, g: E) -> Result<(usize, bool)> {
        if let Some(&i) = self.map.get(&g) {
            return Ok((i, false));
        }
        let i = self.elems.len();
        self.map.insert(g.clone(), i);
        self.elems.push(g);
        Ok((i, true))
    }

    fn elements(&self) -> &[E] {
        &self.elems
    }
}

/// A finitely generated group with a symmetric generating set.
pub trait Group: Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;
    type Index: ElementIndex<Self::Elem>;

    /// Short backend description, e.g. `Z^2` or `SL2(Z/8) Sanov image`.
    fn name(&self) -> String;

    fn identity(&self) -> Self::Elem;

    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn invert(&self, a: &Self::Elem) -> Self::Elem;

    /// Symmetric generating set, listed as consecutive pairs `(s, s^-1)`.
    fn generators(&self) -> &[Generator<Self::Elem>];

    fn new_index(&self) -> Self::Index;

    /// Element equality as used by the backend (exact or tolerance based).
    fn same(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        a == b
    }

    /// Cardinality, when finite.
    fn order(&self) -> Option<usize> {
        None
    }

    /// Word length with respect to [`Group::generators`] when the backend
    /// knows it without a search.
    fn word_length(&self, _g: &Self::Elem) -> Option<usize> {
        None
    }

    fn is_identity(&self, g: &Self::Elem) -> bool {
        self.same(g, &self.identity())
    }

    /// Evaluates a product of generators given by their positions in
    /// [`Group::generators`].
    fn evaluate_word(&self, letters: &[usize]) -> Self::Elem {
        let gens = self.generators();
        letters.iter().fold(self.identity(), |acc, &i| {
            self.multiply(&acc, &gens[i].elem)
        })
    }

    /// Builds an element from integer coordinates, for backends whose
    /// elements are integer vectors.
    fn elem_from_coordinates(&self, coords: &[i64]) -> Result<Self::Elem> {
        let _ = coords;
        Err(Error::Parse(format!(
            "{} elements cannot be given as integer vectors",
            self.name()
        )))
    }

    /// Serializable form of an element.
    fn elem_spec(&self, g: &Self::Elem) -> ElemSpec {
        ElemSpec::Label(format!("{g:?}"))
    }

    /// Parses a word written as generator labels separated by `*` or
    /// whitespace. `e` or the empty string denote the identity.
    fn parse_word(&self, text: &str) -> Result<Self::Elem> {
        let mut letters = Vec::new();
        for token in text
            .split(|c: char| c == '*' || c.is_whitespace())
            .filter(|t| !t.is_empty() && *t != "e")
        {
            let pos = self
                .generators()
                .iter()
                .position(|g| g.label == token)
                .ok_or_else(|| {
                    Error::Parse(format!("unknown generator `{token}` for {}", self.name()))
                })?;
            letters.push(pos);
        }
        Ok(self.evaluate_word(&letters))
    }
}

/// A finite group whose elements are enumerated once at construction.
pub trait FiniteGroup: Group {
    /// Elements in the backend's canonical order; position = matrix index.
    fn elements(&self) -> &[Self::Elem];

    fn index_of(&self, g: &Self::Elem) -> usize;

    /// Word length on the Cayley graph of the finite group.
    fn quotient_length(&self, g: &Self::Elem) -> usize;

    fn size(&self) -> usize {
        self.elements().len()
    }
}

/// A finite quotient `G/H` together with the projection from `G`.
pub trait QuotientOf<G: Group>: FiniteGroup {
    fn project(&self, g: &G::Elem) -> Self::Elem;

    /// Metadata describing the level: modulus, order, generator images.
    fn level_info(&self) -> LevelInfo;
}

/// Single-source BFS distances on the Cayley graph of a finite group whose
/// elements are addressed through `index_of`. Right multiplication by
/// generators is used, matching [`enumerate_ball`].
pub(crate) fn bfs_lengths<E: Clone>(
    elements: &[E],
    identity_index: usize,
    neighbours: impl Fn(&E) -> Vec<usize>,
) -> Vec<usize> {
    let mut dist = vec![usize::MAX; elements.len()];
    let mut queue = std::collections::VecDeque::new();
    dist[identity_index] = 0;
    queue.push_back(identity_index);
    while let Some(i) = queue.pop_front() {
        for j in neighbours(&elements[i]) {
            if dist[j] == usize::MAX {
                dist[j] = dist[i] + 1;
                queue.push_back(j);
            }
        }
    }
    dist
}
