use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::{ElemSpec, Generator, Group, HashIndex};
use crate::{Error, Result};

/// Reduced word in a free group.
///
/// Letter `2i` is generator `i`, letter `2i + 1` its inverse. Words are kept
/// freely reduced, so the word length is the number of letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FreeWord(pub SmallVec<[u8; 24]>);

impl FreeWord {
    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[inline]
fn inverse_letter(c: u8) -> u8 {
    c ^ 1
}

/// The free group on `k` generators.
#[derive(Debug, Clone)]
pub struct FreeGroup {
    rank: usize,
    gens: Vec<Generator<FreeWord>>,
}

/// Builds the free group `F_k`. For `k = 2` the generators are labelled
/// `x, x^-1, y, y^-1`; otherwise `a1, a1^-1, …`.
pub fn make_free_group(k: usize) -> Result<FreeGroup> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "free group rank must be at least 1".into(),
        ));
    }
    if 2 * k > u8::MAX as usize {
        return Err(Error::InvalidParameter(format!(
            "free group rank {k} too large"
        )));
    }
    let base = |i: usize| {
        if k == 2 {
            ["x", "y"][i].to_string()
        } else {
            format!("a{}", i + 1)
        }
    };
    let gens = (0..2 * k)
        .map(|c| Generator {
            label: if c % 2 == 0 {
                base(c / 2)
            } else {
                format!("{}^-1", base(c / 2))
            },
            elem: FreeWord(SmallVec::from_slice(&[c as u8])),
        })
        .collect();
    Ok(FreeGroup { rank: k, gens })
}

impl FreeGroup {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// All reduced words of length exactly `n`, in lexicographic order of
    /// letter codes.
    pub fn sphere(&self, n: usize) -> Vec<FreeWord> {
        let letters = (2 * self.rank) as u8;
        let mut layer = vec![FreeWord::default()];
        for _ in 0..n {
            let mut next = Vec::with_capacity(layer.len() * (letters as usize - 1).max(1));
            for w in &layer {
                for c in 0..letters {
                    if w.0.last().is_some_and(|&l| l == inverse_letter(c)) {
                        continue;
                    }
                    let mut v = w.clone();
                    v.0.push(c);
                    next.push(v);
                }
            }
            layer = next;
        }
        layer
    }

    /// Length of the reduced product `ab`, without forming it.
    pub fn product_length(&self, a: &FreeWord, b: &FreeWord) -> usize {
        let (a, b) = (a.letters(), b.letters());
        let mut cancel = 0;
        while cancel < a.len()
            && cancel < b.len()
            && a[a.len() - 1 - cancel] == inverse_letter(b[cancel])
        {
            cancel += 1;
        }
        a.len() + b.len() - 2 * cancel
    }

    /// Renders a word with generator labels joined by `*`; the identity is `e`.
    pub fn format_word(&self, w: &FreeWord) -> String {
        if w.is_empty() {
            return "e".to_string();
        }
        w.0.iter()
            .map(|&c| self.gens[c as usize].label.as_str())
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl Group for FreeGroup {
    type Elem = FreeWord;
    type Index = HashIndex<FreeWord>;

    fn name(&self) -> String {
        format!("F_{}", self.rank)
    }

    fn identity(&self) -> FreeWord {
        FreeWord::default()
    }

    fn multiply(&self, a: &FreeWord, b: &FreeWord) -> FreeWord {
        let (a, b) = (a.letters(), b.letters());
        let mut cancel = 0;
        while cancel < a.len()
            && cancel < b.len()
            && a[a.len() - 1 - cancel] == inverse_letter(b[cancel])
        {
            cancel += 1;
        }
        let mut out = SmallVec::with_capacity(a.len() + b.len() - 2 * cancel);
        out.extend_from_slice(&a[..a.len() - cancel]);
        out.extend_from_slice(&b[cancel..]);
        FreeWord(out)
    }

    fn invert(&self, a: &FreeWord) -> FreeWord {
        FreeWord(a.0.iter().rev().map(|&c| inverse_letter(c)).collect())
    }

    fn generators(&self) -> &[Generator<FreeWord>] {
        &self.gens
    }

    fn new_index(&self) -> Self::Index {
        HashIndex::default()
    }

    fn word_length(&self, g: &FreeWord) -> Option<usize> {
        Some(g.len())
    }

    fn elem_spec(&self, g: &FreeWord) -> ElemSpec {
        ElemSpec::Label(self.format_word(g))
    }
}
