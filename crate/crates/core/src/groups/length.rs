use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Ball, Group};
use crate::{Error, Result};

/// A length function `l : G → [0, ∞)`.
pub trait LengthFunction<E> {
    fn length(&self, g: &E) -> f64;
}

impl<E, F: Fn(&E) -> f64> LengthFunction<E> for F {
    fn length(&self, g: &E) -> f64 {
        self(g)
    }
}

/// Word length of a backend that knows it in closed form or by table
/// (lattices, free groups, finite quotients).
#[derive(Debug, Clone, Copy)]
pub struct WordLength<'a, G>(pub &'a G);

impl<G: Group> LengthFunction<G::Elem> for WordLength<'_, G> {
    fn length(&self, g: &G::Elem) -> f64 {
        match self.0.word_length(g) {
            Some(l) => l as f64,
            None => panic!("{} has no closed-form word length", self.0.name()),
        }
    }
}

/// Word length read off an enumerated ball; infinite outside the ball.
impl<G: Group> LengthFunction<G::Elem> for Ball<G> {
    fn length(&self, g: &G::Elem) -> f64 {
        self.length_of(g).map_or(f64::INFINITY, |l| l as f64)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LengthReport {
    pub samples: usize,
    /// `max(l(gh) - l(g) - l(h), 0)` over sampled pairs.
    pub max_subadditivity_excess: f64,
    /// `max |l(g) - l(g^-1)|`.
    pub max_symmetry_defect: f64,
    pub identity_length: f64,
    pub min_value: f64,
    pub pass: bool,
}

/// Checks the length-function axioms on `n_samples` random pairs drawn from
/// `pool`: `l(e) = 0`, `l(g^-1) = l(g)`, `l(gh) <= l(g) + l(h)`, `l >= 0`.
pub fn check_length<G: Group, L: LengthFunction<G::Elem> + ?Sized>(
    l: &L,
    group: &G,
    pool: &[G::Elem],
    n_samples: usize,
    seed: u64,
) -> Result<LengthReport> {
    if pool.is_empty() || n_samples == 0 {
        return Err(Error::Empty("length sample set"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let identity_length = l.length(&group.identity());
    let mut excess: f64 = 0.0;
    let mut symmetry: f64 = 0.0;
    let mut min_value = identity_length;
    for _ in 0..n_samples {
        let g = &pool[rng.random_range(0..pool.len())];
        let h = &pool[rng.random_range(0..pool.len())];
        let (lg, lh) = (l.length(g), l.length(h));
        let lgh = l.length(&group.multiply(g, h));
        excess = excess.max(lgh - lg - lh);
        symmetry = symmetry.max((lg - l.length(&group.invert(g))).abs());
        min_value = min_value.min(lg).min(lh);
    }
    let pass = identity_length == 0.0 && excess <= 0.0 && symmetry == 0.0 && min_value >= 0.0;
    Ok(LengthReport {
        samples: n_samples,
        max_subadditivity_excess: excess.max(0.0),
        max_symmetry_defect: symmetry,
        identity_length,
        min_value,
        pass,
    })
}
