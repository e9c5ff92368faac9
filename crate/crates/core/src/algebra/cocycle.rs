use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::groups::{FiniteGroup, Group};
use crate::{Error, Result};

/// A unit-modulus 2-cocycle `ω : G × G → T`.
pub trait Cocycle<E>: Send + Sync {
    fn eval(&self, g: &E, h: &E) -> Complex64;

    /// Human-readable descriptor stored in run manifests.
    fn describe(&self) -> String;

    /// True when `ω ≡ 1` is known structurally.
    fn is_trivial(&self) -> bool {
        false
    }
}

impl<E, C: Cocycle<E> + ?Sized> Cocycle<E> for &C {
    fn eval(&self, g: &E, h: &E) -> Complex64 {
        (**self).eval(g, h)
    }

    fn describe(&self) -> String {
        (**self).describe()
    }

    fn is_trivial(&self) -> bool {
        (**self).is_trivial()
    }
}

impl<E, C: Cocycle<E> + ?Sized> Cocycle<E> for Box<C> {
    fn eval(&self, g: &E, h: &E) -> Complex64 {
        (**self).eval(g, h)
    }

    fn describe(&self) -> String {
        (**self).describe()
    }

    fn is_trivial(&self) -> bool {
        (**self).is_trivial()
    }
}

/// `ω ≡ 1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Trivial;

impl<E> Cocycle<E> for Trivial {
    fn eval(&self, _: &E, _: &E) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    fn describe(&self) -> String {
        "trivial".into()
    }

    fn is_trivial(&self) -> bool {
        true
    }
}

/// Largest table a [`Tabulated`] cocycle will allocate.
pub const TABLE_CAP: usize = 10_000_000;

/// Full `|Q|²` table of a cocycle on a finite group.
pub struct Tabulated<'a, Q: FiniteGroup> {
    group: &'a Q,
    n: usize,
    table: Vec<Complex64>,
    description: String,
    trivial: bool,
}

impl<'a, Q: FiniteGroup> Tabulated<'a, Q> {
    pub fn new<C: Cocycle<Q::Elem> + ?Sized>(group: &'a Q, omega: &C) -> Result<Self> {
        let n = group.size();
        let entries = n.saturating_mul(n);
        if entries > TABLE_CAP {
            return Err(Error::DimensionCap {
                dim: entries,
                cap: TABLE_CAP,
                what: "cocycle table",
            });
        }
        let elems = group.elements();
        let mut table = Vec::with_capacity(entries);
        for g in elems {
            for h in elems {
                table.push(omega.eval(g, h));
            }
        }
        Ok(Tabulated {
            group,
            n,
            table,
            description: format!("{} (tabulated)", omega.describe()),
            trivial: omega.is_trivial(),
        })
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.table[i * self.n + j]
    }
}

impl<Q: FiniteGroup> Cocycle<Q::Elem> for Tabulated<'_, Q> {
    fn eval(&self, g: &Q::Elem, h: &Q::Elem) -> Complex64 {
        self.at(self.group.index_of(g), self.group.index_of(h))
    }

    fn describe(&self) -> String {
        self.description.clone()
    }

    fn is_trivial(&self) -> bool {
        self.trivial
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CocycleReport {
    pub cocycle: String,
    pub samples: usize,
    /// `max |ω(a,b)ω(ab,c) - ω(a,bc)ω(b,c)|`.
    pub max_residual: f64,
    /// `max ||ω(a,b)| - 1|` over all evaluations.
    pub max_modulus_defect: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Tests the cocycle identity on `n_samples` random triples from `pool`.
/// Passes when both the identity residual and the modulus defect are within
/// `tol`.
pub fn check_cocycle<G: Group, C: Cocycle<G::Elem> + ?Sized>(
    omega: &C,
    group: &G,
    pool: &[G::Elem],
    n_samples: usize,
    tol: f64,
    seed: u64,
) -> Result<CocycleReport> {
    if pool.is_empty() || n_samples == 0 {
        return Err(Error::Empty("cocycle sample set"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut residual: f64 = 0.0;
    let mut modulus: f64 = 0.0;
    for _ in 0..n_samples {
        let a = &pool[rng.random_range(0..pool.len())];
        let b = &pool[rng.random_range(0..pool.len())];
        let c = &pool[rng.random_range(0..pool.len())];
        let ab = group.multiply(a, b);
        let bc = group.multiply(b, c);
        let values = [
            omega.eval(a, b),
            omega.eval(&ab, c),
            omega.eval(a, &bc),
            omega.eval(b, c),
        ];
        for v in &values {
            modulus = modulus.max((v.norm() - 1.0).abs());
        }
        residual = residual.max((values[0] * values[1] - values[2] * values[3]).norm());
    }
    Ok(CocycleReport {
        cocycle: omega.describe(),
        samples: n_samples,
        max_residual: residual,
        max_modulus_defect: modulus,
        tol,
        pass: residual <= tol && modulus <= tol,
    })
}
