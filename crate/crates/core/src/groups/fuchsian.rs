use std::f64::consts::PI;

use num_complex::Complex64;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::{ElementIndex, Generator, Group};
use crate::{Error, Result};

/// Tolerance for identifying Fuchsian group elements (relative max-norm on
/// matrices, modulo the sign ambiguity `M ~ -M`).
pub const DEDUP_EPS: f64 = 1e-9;

/// Grid cell used to bucket orbit points in the disk.
const CELL: f64 = 1e-7;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Element of `SL(2, R)` acting on the upper half-plane by Möbius maps
/// `w ↦ (a w + b) / (c w + d)`; the disk picture is obtained through the
/// Cayley transform `w ↦ (w - i) / (w + i)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sl2R {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Sl2R {
    pub const IDENTITY: Sl2R = Sl2R {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let m = Sl2R { a, b, c, d };
        if (m.det() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "matrix determinant {} is not 1",
                m.det()
            )));
        }
        Ok(m)
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Sl2R) -> Sl2R {
        Sl2R {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn inverse(&self) -> Sl2R {
        Sl2R {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.a
            .abs()
            .max(self.b.abs())
            .max(self.c.abs())
            .max(self.d.abs())
    }

    fn max_diff(&self, o: &Sl2R, sign: f64) -> f64 {
        (self.a - sign * o.a)
            .abs()
            .max((self.b - sign * o.b).abs())
            .max((self.c - sign * o.c).abs())
            .max((self.d - sign * o.d).abs())
    }

    /// Projective comparison: `M ≈ N` or `M ≈ -N` within `eps` relative to
    /// the larger entry size.
    pub fn approx_eq(&self, o: &Sl2R, eps: f64) -> bool {
        let scale = self.max_abs().max(o.max_abs()).max(1.0);
        self.max_diff(o, 1.0).min(self.max_diff(o, -1.0)) <= eps * scale
    }

    /// Representative with a positive leading entry (or positive `c` when
    /// `a` vanishes).
    pub fn normalized(&self) -> Sl2R {
        let lead = if self.a.abs() > 1e-12 { self.a } else { self.c };
        if lead < 0.0 {
            Sl2R {
                a: -self.a,
                b: -self.b,
                c: -self.c,
                d: -self.d,
            }
        } else {
            *self
        }
    }

    pub fn act_upper(&self, w: Complex64) -> Complex64 {
        (w * self.a + self.b) / (w * self.c + self.d)
    }

    /// Action on the Poincaré disk.
    pub fn act_disk(&self, z: Complex64) -> Complex64 {
        upper_to_disk(self.act_upper(disk_to_upper(z)))
    }
}

pub(crate) fn disk_to_upper(z: Complex64) -> Complex64 {
    I * (Complex64::new(1.0, 0.0) + z) / (Complex64::new(1.0, 0.0) - z)
}

pub(crate) fn upper_to_disk(w: Complex64) -> Complex64 {
    (w - I) / (w + I)
}

/// Rotation of the disk about the origin by `phi` (counterclockwise).
fn disk_rotation(phi: f64) -> Sl2R {
    let (s, c) = (phi / 2.0).sin_cos();
    Sl2R {
        a: c,
        b: s,
        c: -s,
        d: c,
    }
}

/// A cocompact Fuchsian group given by generator matrices, with a base
/// point in the disk whose orbit is the hyperbolic crystal.
#[derive(Debug, Clone)]
pub struct FuchsianGroup {
    gens: Vec<Generator<Sl2R>>,
    base_point: Complex64,
    eps: f64,
}

/// Genus-two surface group from the regular hyperbolic octagon with interior
/// angles `π/4`. Generator `a_k` translates along the axis through the origin
/// at angle `kπ/4` by twice the inradius, mapping side `k + 4` onto side `k`.
pub fn make_octagon_group() -> FuchsianGroup {
    // cosh(inradius) = cot(π/8) for the regular octagon with angles π/4.
    let cosh_r = 1.0 / (PI / 8.0).tan();
    let lambda = cosh_r + (cosh_r * cosh_r - 1.0).sqrt();
    let translation = Sl2R {
        a: lambda,
        b: 0.0,
        c: 0.0,
        d: 1.0 / lambda,
    };
    let mut gens = Vec::with_capacity(8);
    for k in 0..4 {
        let phi = k as f64 * PI / 4.0;
        let g = disk_rotation(phi)
            .mul(&translation)
            .mul(&disk_rotation(-phi));
        gens.push(Generator {
            label: format!("a{}", k + 1),
            elem: g,
        });
        gens.push(Generator {
            label: format!("a{}^-1", k + 1),
            elem: g.inverse(),
        });
    }
    FuchsianGroup {
        gens,
        base_point: Complex64::new(0.0, 0.0),
        eps: DEDUP_EPS,
    }
}

impl FuchsianGroup {
    /// Builds a group from explicit generators (listed as `(s, s^-1)` pairs)
    /// and a base point in the open disk.
    pub fn from_generators(gens: Vec<Generator<Sl2R>>, base_point: Complex64) -> Result<Self> {
        if base_point.norm() >= 1.0 {
            return Err(Error::InvalidParameter(
                "base point must lie in the open disk".into(),
            ));
        }
        for g in &gens {
            if (g.elem.det() - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidParameter(format!(
                    "generator {} has determinant {}",
                    g.label,
                    g.elem.det()
                )));
            }
        }
        Ok(FuchsianGroup {
            gens,
            base_point,
            eps: DEDUP_EPS,
        })
    }

    pub fn base_point(&self) -> Complex64 {
        self.base_point
    }

    pub fn dedup_eps(&self) -> f64 {
        self.eps
    }

    /// The orbit point `g · x` in the disk.
    pub fn orbit_point(&self, g: &Sl2R) -> Complex64 {
        g.act_disk(self.base_point)
    }
}

impl Group for FuchsianGroup {
    type Elem = Sl2R;
    type Index = FuchsianIndex;

    fn name(&self) -> String {
        format!("Fuchsian group ({} generators)", self.gens.len())
    }

    fn identity(&self) -> Sl2R {
        Sl2R::IDENTITY
    }

    fn multiply(&self, a: &Sl2R, b: &Sl2R) -> Sl2R {
        a.mul(b)
    }

    fn invert(&self, a: &Sl2R) -> Sl2R {
        a.inverse()
    }

    fn generators(&self) -> &[Generator<Sl2R>] {
        &self.gens
    }

    fn new_index(&self) -> FuchsianIndex {
        FuchsianIndex {
            group_base: self.base_point,
            eps: self.eps,
            elems: Vec::new(),
            points: Vec::new(),
            cells: FxHashMap::default(),
        }
    }

    fn same(&self, a: &Sl2R, b: &Sl2R) -> bool {
        a.approx_eq(b, self.eps)
    }
}

/// Element index keyed by bucketed orbit points.
///
/// The group acts freely on the orbit of the base point, so an element is
/// located by its orbit point; neighbouring cells are probed so that
/// rounding across a cell boundary cannot split an element in two. Two
/// different matrices whose orbit points coincide within `eps` signal a
/// failure of free action and are reported as an error.
#[derive(Debug, Clone)]
pub struct FuchsianIndex {
    group_base: Complex64,
    eps: f64,
    elems: Vec<Sl2R>,
    points: Vec<Complex64>,
    cells: FxHashMap<(i64, i64), Vec<usize>>,
}

impl FuchsianIndex {
    fn cell(z: Complex64) -> (i64, i64) {
        ((z.re / CELL).floor() as i64, (z.im / CELL).floor() as i64)
    }

    fn locate(&self, g: &Sl2R, z: Complex64) -> Result<Option<usize>> {
        let (cx, cy) = Self::cell(z);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.cells.get(&(cx + dx, cy + dy)) {
                    for &i in ids {
                        if self.elems[i].approx_eq(g, self.eps) {
                            return Ok(Some(i));
                        }
                        if (self.points[i] - z).norm() <= self.eps {
                            return Err(Error::Dedup(format!(
                                "distinct matrices {:?} and {:?} share the orbit point {z}",
                                self.elems[i].normalized(),
                                g.normalized()
                            )));
                        }
                    }
                }
            }
        }
        Ok(None)
    }
}

impl ElementIndex<Sl2R> for FuchsianIndex {
    fn get(&self, g: &Sl2R) -> Option<usize> {
        self.locate(g, g.act_disk(self.group_base)).ok().flatten()
    }

    fn lookup(&self, g: &Sl2R) -> Result<Option<usize>> {
        self.locate(g, g.act_disk(self.group_base))
    }

    fn insert(&mut self, g: Sl2R) -> Result<(usize, bool)> {
        let z = g.act_disk(self.group_base);
        if let Some(i) = self.locate(&g, z)? {
            return Ok((i, false));
        }
        let i = self.elems.len();
        self.cells.entry(Self::cell(z)).or_default().push(i);
        self.elems.push(g);
        self.points.push(z);
        Ok((i, true))
    }

    fn elements(&self) -> &[Sl2R] {
        &self.elems
    }
}
