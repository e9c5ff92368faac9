use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::Cocycle;
use crate::groups::IntVec;
use crate::{Error, Result};

/// Magnetic-translation cocycle on `Z²`: `ω_θ(m, n) = exp(iθ m₂ n₁)`.
///
/// The exponent is bilinear, so the cocycle identity holds exactly up to
/// rounding of the phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Heisenberg {
    theta: f64,
}

pub fn heisenberg(theta: f64) -> Heisenberg {
    Heisenberg { theta }
}

impl Heisenberg {
    pub fn theta(&self) -> f64 {
        self.theta
    }
}

impl Cocycle<IntVec> for Heisenberg {
    fn eval(&self, m: &IntVec, n: &IntVec) -> Complex64 {
        let k = m[1] * n[0];
        if k == 0 || self.theta == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        Complex64::from_polar(1.0, self.theta * k as f64)
    }

    fn describe(&self) -> String {
        format!("heisenberg(theta={})", self.theta)
    }

    fn is_trivial(&self) -> bool {
        self.theta == 0.0
    }
}

/// Rational flux `p/q` in lowest terms with `q >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Flux {
    pub p: i64,
    pub q: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Flux {
    pub fn new(p: i64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParameter(
                "flux denominator must be positive".into(),
            ));
        }
        let g = gcd(p.unsigned_abs(), q).max(1);
        Ok(Flux {
            p: p / g as i64,
            q: q / g,
        })
    }

    /// `θ = 2π p / q`.
    pub fn theta(&self) -> f64 {
        2.0 * PI * self.p as f64 / self.q as f64
    }

    pub fn value(&self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

impl fmt::Display for Flux {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Flux {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let p: i64 = p
            .parse()
            .map_err(|_| Error::Parse(format!("bad flux numerator in `{s}`")))?;
        let q: u64 = q
            .parse()
            .map_err(|_| Error::Parse(format!("bad flux denominator in `{s}`")))?;
        Flux::new(p, q)
    }
}

/// Descent of the Heisenberg cocycle with `θ = 2πp/q` to `(Z/N)²`.
///
/// Evaluated with the integer exponent `p · (m₂ n₁ mod q)`, which makes the
/// values independent of the residue representatives bit for bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeisenbergQuotient {
    flux: Flux,
    modulus: u64,
}

/// Builds the descended cocycle; fails unless `q | N`.
pub fn heisenberg_quotient(p: i64, q: u64, modulus: u64) -> Result<HeisenbergQuotient> {
    let flux = Flux::new(p, q)?;
    if modulus == 0 || !modulus.is_multiple_of(flux.q) {
        return Err(Error::Descent(format!(
            "flux {flux} does not descend to (Z/{modulus})^2: exp(iθ·N·k) = 1 for all k \
             requires the reduced denominator {} to divide N = {modulus}",
            flux.q
        )));
    }
    Ok(HeisenbergQuotient { flux, modulus })
}

impl HeisenbergQuotient {
    pub fn flux(&self) -> Flux {
        self.flux
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

impl Cocycle<IntVec> for HeisenbergQuotient {
    fn eval(&self, m: &IntVec, n: &IntVec) -> Complex64 {
        let q = self.flux.q as i128;
        let k = (m[1] as i128 * n[0] as i128).rem_euclid(q);
        let e = (self.flux.p as i128 * k).rem_euclid(q);
        if e == 0 {
            return Complex64::new(1.0, 0.0);
        }
        Complex64::from_polar(1.0, 2.0 * PI * e as f64 / q as f64)
    }

    fn describe(&self) -> String {
        format!("heisenberg(flux={}, N={})", self.flux, self.modulus)
    }

    fn is_trivial(&self) -> bool {
        self.flux.p == 0
    }
}
