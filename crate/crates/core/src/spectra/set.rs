use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Compact subset of the real line: a sorted point list (eigenvalues) or a
/// sorted union of disjoint closed intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpectrumSet {
    Intervals {
        intervals: Vec<[f64; 2]>,
        tol: f64,
    },
    Points {
        points: Vec<f64>,
        #[serde(default, skip_serializing_if = "is_zero")]
        tol: f64,
    },
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

fn check_finite(values: impl IntoIterator<Item = f64>) -> Result<()> {
    for v in values {
        if !v.is_finite() {
            return Err(Error::Numeric(format!("non-finite spectral value {v}")));
        }
    }
    Ok(())
}

impl SpectrumSet {
    /// Sorted point set; empty input is rejected.
    pub fn from_points(mut points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty("spectrum"));
        }
        check_finite(points.iter().copied())?;
        points.sort_by(f64::total_cmp);
        Ok(SpectrumSet::Points { points, tol: 0.0 })
    }

    /// Interval union; intervals closer than `tol` are merged.
    pub fn from_intervals(mut intervals: Vec<[f64; 2]>, tol: f64) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::Empty("spectrum"));
        }
        check_finite(intervals.iter().flatten().copied())?;
        for iv in &intervals {
            if iv[0] > iv[1] {
                return Err(Error::InvalidParameter(format!(
                    "interval [{}, {}] has reversed endpoints",
                    iv[0], iv[1]
                )));
            }
        }
        intervals.sort_by(|a, b| a[0].total_cmp(&b[0]));
        let mut merged: Vec<[f64; 2]> = Vec::with_capacity(intervals.len());
        for iv in intervals {
            match merged.last_mut() {
                Some(last) if iv[0] <= last[1] + tol => last[1] = last[1].max(iv[1]),
                _ => merged.push(iv),
            }
        }
        Ok(SpectrumSet::Intervals {
            intervals: merged,
            tol,
        })
    }

    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::from_intervals(vec![[a, b]], 0.0)
    }

    pub fn tol(&self) -> f64 {
        match self {
            SpectrumSet::Intervals { tol, .. } | SpectrumSet::Points { tol, .. } => *tol,
        }
    }

    /// Closed pieces in increasing order; points are degenerate intervals.
    pub fn pieces(&self) -> Vec<[f64; 2]> {
        match self {
            SpectrumSet::Intervals { intervals, .. } => intervals.clone(),
            SpectrumSet::Points { points, .. } => points.iter().map(|&p| [p, p]).collect(),
        }
    }

    pub fn points(&self) -> Option<&[f64]> {
        match self {
            SpectrumSet::Points { points, .. } => Some(points),
            SpectrumSet::Intervals { .. } => None,
        }
    }

    pub fn min(&self) -> f64 {
        match self {
            SpectrumSet::Intervals { intervals, .. } => intervals[0][0],
            SpectrumSet::Points { points, .. } => points[0],
        }
    }

    pub fn max(&self) -> f64 {
        match self {
            SpectrumSet::Intervals { intervals, .. } => intervals[intervals.len() - 1][1],
            SpectrumSet::Points { points, .. } => points[points.len() - 1],
        }
    }

    /// `max |λ|`, the norm of a self-adjoint operator with this spectrum.
    pub fn spectral_radius(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }

    /// Distance from `x` to the set.
    pub fn distance_to(&self, x: f64) -> f64 {
        distance_to_pieces(&self.pieces(), x)
    }

    /// Gaps `(hi_k, lo_{k+1})` between consecutive pieces wider than `min_width`.
    pub fn gaps(&self, min_width: f64) -> Vec<[f64; 2]> {
        self.pieces()
            .windows(2)
            .filter(|w| w[1][0] - w[0][1] > min_width)
            .map(|w| [w[0][1], w[1][0]])
            .collect()
    }
}

fn distance_to_pieces(pieces: &[[f64; 2]], x: f64) -> f64 {
    // First piece whose upper end is >= x.
    let k = pieces.partition_point(|p| p[1] < x);
    let mut d = f64::INFINITY;
    if k < pieces.len() {
        d = d.min((pieces[k][0] - x).max(0.0));
    }
    if k > 0 {
        d = d.min(x - pieces[k - 1][1]);
    }
    d
}

/// `sup_{a ∈ A} dist(a, B)`, exact for interval unions: the distance to `B`
/// is piecewise linear on each piece of `A`, so its maximum is attained at a
/// piece endpoint or at the midpoint of a gap of `B`.
pub fn directed_hausdorff(a: &SpectrumSet, b: &SpectrumSet) -> f64 {
    let pa = a.pieces();
    let pb = b.pieces();
    let mut d: f64 = 0.0;
    for p in &pa {
        d = d.max(distance_to_pieces(&pb, p[0]));
        d = d.max(distance_to_pieces(&pb, p[1]));
    }
    if matches!(a, SpectrumSet::Intervals { .. }) {
        for w in pb.windows(2) {
            let mid = 0.5 * (w[0][1] + w[1][0]);
            let k = pa.partition_point(|p| p[1] < mid);
            if k < pa.len() && pa[k][0] <= mid {
                d = d.max(0.5 * (w[1][0] - w[0][1]));
            }
        }
    }
    d
}

/// Hausdorff distance `max(sup_A dist(·,B), sup_B dist(·,A))`.
pub fn hausdorff(a: &SpectrumSet, b: &SpectrumSet) -> f64 {
    directed_hausdorff(a, b).max(directed_hausdorff(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[f64]) -> SpectrumSet {
        SpectrumSet::from_points(v.to_vec()).unwrap()
    }

    #[test]
    fn examples() {
        let a = pts(&[-2.0, 0.0, 2.0]);
        assert_eq!(hausdorff(&a, &a), 0.0);
        assert_eq!(hausdorff(&pts(&[0.0]), &pts(&[3.0])), 3.0);
        let iv = SpectrumSet::interval(-2.0, 2.0).unwrap();
        assert_eq!(hausdorff(&a, &iv), 1.0);
    }

    #[test]
    fn brute_force_grid_agrees() {
        let a = pts(&[-2.0, 0.0, 2.0]);
        let grid: Vec<f64> = (0..=40_000).map(|i| -2.0 + i as f64 * 1e-4).collect();
        let brute = grid.iter().map(|&x| a.distance_to(x)).fold(0.0, f64::max);
        assert!((brute - 1.0).abs() < 1e-4);
    }

    #[test]
    fn interval_vs_interval() {
        let a = SpectrumSet::from_intervals(vec![[0.0, 1.0], [3.0, 4.0]], 0.0).unwrap();
        let b = SpectrumSet::interval(0.0, 4.0).unwrap();
        assert_eq!(directed_hausdorff(&a, &b), 0.0);
        assert_eq!(directed_hausdorff(&b, &a), 1.0);
        assert_eq!(hausdorff(&a, &b), 1.0);
    }

    #[test]
    fn merging_and_validation() {
        let s =
            SpectrumSet::from_intervals(vec![[2.0, 3.0], [0.0, 1.0], [1.05, 1.5]], 0.1).unwrap();
        assert_eq!(s.pieces(), vec![[0.0, 1.5], [2.0, 3.0]]);
        assert_eq!(s.gaps(0.0), vec![[1.5, 2.0]]);
        assert!(SpectrumSet::from_points(vec![]).is_err());
        assert!(SpectrumSet::from_points(vec![f64::NAN]).is_err());
        assert!(SpectrumSet::interval(1.0, 0.0).is_err());
    }

    #[test]
    fn json_shapes() {
        let p = pts(&[1.0, -1.0]);
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"{"points":[-1.0,1.0]}"#
        );
        let i = SpectrumSet::from_intervals(vec![[0.0, 1.0]], 0.01).unwrap();
        let text = serde_json::to_string(&i).unwrap();
        assert_eq!(text, r#"{"intervals":[[0.0,1.0]],"tol":0.01}"#);
        assert_eq!(serde_json::from_str::<SpectrumSet>(&text).unwrap(), i);
        assert_eq!(
            serde_json::from_str::<SpectrumSet>(r#"{"points":[-1.0,1.0]}"#).unwrap(),
            p
        );
    }
}
