//! Memoized area tables for octagon compressions.
//!
//! A ball compression only evaluates `ω_θ(s, η)` for support elements `s`
//! and ball elements `η`, and the signed area behind the phase does not
//! depend on `θ`. The table of areas `A(s, η)` for every generator `s` is
//! therefore computed once per radius and, when `SPECTRAL_FIELDS_CACHE`
//! names a directory, stored there for later runs. Areas are stored as raw
//! bit patterns so cached and fresh runs agree bit for bit.

use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use spectral_fields::algebra::Cocycle;
use spectral_fields::cocycles::{area_cocycle, AreaCocycle};
use spectral_fields::groups::{Ball, FuchsianGroup, Group, Sl2R};
use spectral_fields::{Complex64, Result};

pub const CACHE_ENV: &str = "SPECTRAL_FIELDS_CACHE";

#[derive(Debug, Serialize, Deserialize)]
pub struct AreaTable {
    radius: usize,
    ball_len: usize,
    base_point: [f64; 2],
    /// `area_bits[i][j]` is `A(s_i, η_j)` for generator `i`, ball element `j`.
    area_bits: Vec<Vec<u64>>,
}

fn cache_path(radius: usize) -> Option<PathBuf> {
    let dir = std::env::var_os(CACHE_ENV)?;
    Some(PathBuf::from(dir).join(format!("octagon-area-r{radius}.json")))
}

impl AreaTable {
    fn build(group: &FuchsianGroup, ball: &Ball<FuchsianGroup>) -> Self {
        let omega = area_cocycle(1.0, group);
        let area_bits = group
            .generators()
            .iter()
            .map(|s| {
                ball.elements()
                    .par_iter()
                    .map(|eta| omega.area(&s.elem, eta).to_bits())
                    .collect()
            })
            .collect();
        let b = group.base_point();
        AreaTable {
            radius: ball.radius(),
            ball_len: ball.len(),
            base_point: [b.re, b.im],
            area_bits,
        }
    }

    fn matches(&self, group: &FuchsianGroup, ball: &Ball<FuchsianGroup>) -> bool {
        let b = group.base_point();
        self.radius == ball.radius()
            && self.ball_len == ball.len()
            && self.base_point == [b.re, b.im]
            && self.area_bits.len() == group.generators().len()
            && self.area_bits.iter().all(|row| row.len() == ball.len())
    }

    /// Loads the table from the cache directory if present and consistent,
    /// otherwise builds it (and stores it when caching is enabled). Returns
    /// the cache file that was read, if any.
    pub fn load_or_build(
        group: &FuchsianGroup,
        ball: &Ball<FuchsianGroup>,
    ) -> Result<(Self, Option<PathBuf>)> {
        let path = cache_path(ball.radius());
        if let Some(p) = &path {
            if let Ok(text) = std::fs::read_to_string(p) {
                match serde_json::from_str::<AreaTable>(&text) {
                    Ok(t) if t.matches(group, ball) => {
                        log::info!("area table read from {}", p.display());
                        return Ok((t, Some(p.clone())));
                    }
                    _ => log::warn!("ignoring stale area table {}", p.display()),
                }
            }
        }
        let table = AreaTable::build(group, ball);
        if let Some(p) = &path {
            if let Some(dir) = p.parent() {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(p, serde_json::to_string(&table)?)?;
            log::info!("area table written to {}", p.display());
        }
        Ok((table, None))
    }
}

/// `ω_θ` on the octagon group, reading areas from an [`AreaTable`] and
/// falling back to direct evaluation off the table.
pub struct TabulatedArea<'a> {
    pub theta: f64,
    pub group: &'a FuchsianGroup,
    pub ball: &'a Ball<FuchsianGroup>,
    pub table: &'a AreaTable,
    pub exact: AreaCocycle,
}

impl<'a> TabulatedArea<'a> {
    pub fn new(
        theta: f64,
        group: &'a FuchsianGroup,
        ball: &'a Ball<FuchsianGroup>,
        table: &'a AreaTable,
    ) -> Self {
        TabulatedArea {
            theta,
            group,
            ball,
            table,
            exact: area_cocycle(theta, group),
        }
    }

    fn lookup(&self, g: &Sl2R, h: &Sl2R) -> Option<f64> {
        let i = self
            .group
            .generators()
            .iter()
            .position(|s| self.group.same(&s.elem, g))?;
        let j = self.ball.position(h)?;
        Some(f64::from_bits(self.table.area_bits[i][j]))
    }
}

impl Cocycle<Sl2R> for TabulatedArea<'_> {
    fn eval(&self, g: &Sl2R, h: &Sl2R) -> Complex64 {
        if self.theta == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        match self.lookup(g, h) {
            Some(a) => Complex64::from_polar(1.0, self.theta * a),
            None => self.exact.eval(g, h),
        }
    }

    fn describe(&self) -> String {
        self.exact.describe()
    }
}
