//! Concrete 2-cocycle families.
//!
//! * [`Trivial`](crate::algebra::Trivial), the untwisted case.
//! * [`Heisenberg`] on `Z²` and its descent [`HeisenbergQuotient`] to
//!   `(Z/N)²` for rational flux.
//! * [`AreaCocycle`] on Fuchsian backends, the phase of a constant magnetic
//!   field through hyperbolic triangles.
//!
//! Orientation convention: counterclockwise triangles have positive area.

mod area;
mod heisenberg;

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::Error;

pub use area::{area_cocycle, hyperbolic_area, AreaCocycle, AreaConvention, HyperbolicPoint};
pub use heisenberg::{heisenberg, heisenberg_quotient, Flux, Heisenberg, HeisenbergQuotient};

/// Cocycle family selector used by front ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CocycleKind {
    Trivial,
    Heisenberg,
    Area,
}

impl FromStr for CocycleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "trivial" => Ok(CocycleKind::Trivial),
            "heisenberg" => Ok(CocycleKind::Heisenberg),
            "area" => Ok(CocycleKind::Area),
            other => Err(Error::Parse(format!(
                "unknown cocycle `{other}` (expected trivial, heisenberg or area)"
            ))),
        }
    }
}
