use serde::{Deserialize, Serialize};

use super::{
    make_free_group, make_lattice, FreeGroup, Group, Lattice, QuotientOf, SanovQuotient,
    TorusQuotient,
};
use crate::{Error, Result};

/// Serializable description of one chain level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelInfo {
    pub modulus: u64,
    pub order: usize,
    /// `(label, integer matrix)` per generator image; lattice images are
    /// single-row matrices.
    pub generator_images: Vec<(String, Vec<Vec<i64>>)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainManifest {
    pub base: String,
    pub moduli: Vec<u64>,
    pub orders: Vec<usize>,
    pub levels: Vec<LevelInfo>,
}

/// Decreasing chain of finite-index normal subgroups `H_1 ⊃ H_2 ⊃ …`,
/// presented by the finite quotients `G/H_n` and their projections.
#[derive(Debug, Clone)]
pub struct QuotientChain<G: Group, Q: QuotientOf<G>> {
    base: G,
    levels: Vec<Q>,
}

impl<G: Group, Q: QuotientOf<G>> QuotientChain<G, Q> {
    pub fn new(base: G, levels: Vec<Q>) -> Self {
        QuotientChain { base, levels }
    }

    pub fn base(&self) -> &G {
        &self.base
    }

    pub fn levels(&self) -> &[Q] {
        &self.levels
    }

    pub fn manifest(&self) -> ChainManifest {
        let levels: Vec<LevelInfo> = self.levels.iter().map(|q| q.level_info()).collect();
        ChainManifest {
            base: self.base.name(),
            moduli: levels.iter().map(|l| l.modulus).collect(),
            orders: levels.iter().map(|l| l.order).collect(),
            levels,
        }
    }

    /// Largest violation count of `π(gh) = π(g)π(h)` over the given pairs,
    /// summed over all levels.
    pub fn homomorphism_failures(&self, pairs: &[(G::Elem, G::Elem)]) -> usize {
        let mut failures = 0;
        for q in &self.levels {
            for (g, h) in pairs {
                let lhs = q.project(&self.base.multiply(g, h));
                let rhs = q.multiply(&q.project(g), &q.project(h));
                if !q.same(&lhs, &rhs) {
                    failures += 1;
                }
            }
        }
        failures
    }

    /// Counts samples violating nesting: for `n < m`, `π_m(g) = e` must imply
    /// `π_n(g) = e`.
    pub fn nesting_failures(&self, samples: &[G::Elem]) -> usize {
        let mut failures = 0;
        for g in samples {
            let trivial: Vec<bool> = self
                .levels
                .iter()
                .map(|q| q.is_identity(&q.project(g)))
                .collect();
            for m in 0..trivial.len() {
                if trivial[m] && trivial[..m].iter().any(|t| !t) {
                    failures += 1;
                }
            }
        }
        failures
    }

    /// First level at which `g` projects to a non-identity element.
    pub fn separating_level(&self, g: &G::Elem) -> Option<usize> {
        self.levels
            .iter()
            .position(|q| !q.is_identity(&q.project(g)))
    }
}

fn check_divisibility(moduli: &[u64]) -> Result<()> {
    if moduli.is_empty() {
        return Err(Error::Empty("modulus sequence"));
    }
    if moduli.contains(&0) {
        return Err(Error::InvalidParameter("moduli must be positive".into()));
    }
    for w in moduli.windows(2) {
        if w[1] % w[0] != 0 || w[1] == w[0] {
            return Err(Error::InvalidParameter(format!(
                "modulus {} does not strictly divide {}; the subgroups would not be nested",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// Chain `Z^d ⊃ m_1 Z^d ⊃ m_2 Z^d ⊃ …` with quotients `(Z/m_n)^d`.
pub fn lattice_quotient_chain(
    d: usize,
    moduli: &[u64],
) -> Result<QuotientChain<Lattice, TorusQuotient>> {
    let base = make_lattice(d)?;
    check_divisibility(moduli)?;
    let levels = moduli
        .iter()
        .map(|&m| TorusQuotient::new(d, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(QuotientChain::new(base, levels))
}

/// Chain of congruence kernels for the Sanov copy of `F_2`, with quotients
/// the images in `SL(2, Z/m_n)`.
pub fn sanov_chain(moduli: &[u64]) -> Result<QuotientChain<FreeGroup, SanovQuotient>> {
    check_divisibility(moduli)?;
    let base = make_free_group(2)?;
    let levels = moduli
        .iter()
        .map(|&m| SanovQuotient::new(m))
        .collect::<Result<Vec<_>>>()?;
    Ok(QuotientChain::new(base, levels))
}
