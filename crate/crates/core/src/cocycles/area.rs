use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::Cocycle;
use crate::groups::{FuchsianGroup, Sl2R};
use crate::{Error, Result};

/// A point of the open Poincaré disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicPoint(Complex64);

impl HyperbolicPoint {
    pub fn new(z: Complex64) -> Result<Self> {
        if !(z.norm() < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "point {z} is not in the open unit disk"
            )));
        }
        Ok(HyperbolicPoint(z))
    }

    pub fn z(&self) -> Complex64 {
        self.0
    }
}

/// Disk automorphism moving `a` to the origin; its derivative at `a` is a
/// positive real, so it preserves directions there.
fn recenter(a: Complex64, z: Complex64) -> Complex64 {
    (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)
}

/// Interior angle at `a` between the geodesics towards `b` and `c`.
fn angle_at(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    let (u, v) = (recenter(a, b), recenter(a, c));
    let w = u.conj() * v;
    w.im.abs().atan2(w.re)
}

/// Signed area of the geodesic triangle `(z₁, z₂, z₃)`: the angle defect
/// `π - (α + β + γ)`, positive for counterclockwise vertex order.
pub fn hyperbolic_area(z1: HyperbolicPoint, z2: HyperbolicPoint, z3: HyperbolicPoint) -> f64 {
    signed_area(z1.0, z2.0, z3.0)
}

pub(crate) fn signed_area(z1: Complex64, z2: Complex64, z3: Complex64) -> f64 {
    if z1 == z2 || z2 == z3 || z3 == z1 {
        return 0.0;
    }
    // Orientation as seen from z1 after moving it to the origin, where the
    // sides through z1 become diameters.
    let orient = (recenter(z1, z2).conj() * recenter(z1, z3)).im;
    if orient == 0.0 {
        return 0.0;
    }
    let defect = PI - angle_at(z1, z2, z3) - angle_at(z2, z3, z1) - angle_at(z3, z1, z2);
    defect.max(0.0).copysign(orient)
}

/// Which triangle the area cocycle measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AreaConvention {
    /// `(x, γx, γγ'x)`, which satisfies the cocycle identity.
    #[default]
    Standard,
    /// `(x, γx, γ'x)`, kept for comparison.
    Literal,
}

/// Area cocycle `ω_θ(γ, γ') = exp(iθ A)` on a Fuchsian backend.
#[derive(Debug, Clone)]
pub struct AreaCocycle {
    theta: f64,
    base: Complex64,
    convention: AreaConvention,
}

pub fn area_cocycle(theta: f64, group: &FuchsianGroup) -> AreaCocycle {
    AreaCocycle::with_convention(theta, group, AreaConvention::Standard)
}

impl AreaCocycle {
    pub fn with_convention(theta: f64, group: &FuchsianGroup, convention: AreaConvention) -> Self {
        AreaCocycle {
            theta,
            base: group.base_point(),
            convention,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn convention(&self) -> AreaConvention {
        self.convention
    }

    /// The signed area `A(γ, γ')` entering the phase.
    pub fn area(&self, g: &Sl2R, h: &Sl2R) -> f64 {
        let x = self.base;
        match self.convention {
            // A(x, gx, ghx) = A(g⁻¹x, x, hx) by invariance under g⁻¹; the
            // right side keeps all vertices at most |g| or |h| steps from x,
            // away from the boundary where disk coordinates lose precision.
            AreaConvention::Standard => signed_area(g.inverse().act_disk(x), x, h.act_disk(x)),
            AreaConvention::Literal => signed_area(x, g.act_disk(x), h.act_disk(x)),
        }
    }
}

impl Cocycle<Sl2R> for AreaCocycle {
    fn eval(&self, g: &Sl2R, h: &Sl2R) -> Complex64 {
        if self.theta == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        Complex64::from_polar(1.0, self.theta * self.area(g, h))
    }

    fn describe(&self) -> String {
        let conv = match self.convention {
            AreaConvention::Standard => "standard",
            AreaConvention::Literal => "literal",
        };
        format!("area(theta={}, convention={conv})", self.theta)
    }

    fn is_trivial(&self) -> bool {
        self.theta == 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::check_cocycle;
    use crate::groups::{enumerate_ball, make_octagon_group, Group};

    fn p(re: f64, im: f64) -> HyperbolicPoint {
        HyperbolicPoint::new(Complex64::new(re, im)).unwrap()
    }

    /// Green's theorem oracle: the signed area is `∮ 2 Im(z̄ dz) / (1 - |z|²)`
    /// along the boundary, each side parametrized as a geodesic.
    fn area_by_quadrature(zs: [Complex64; 3]) -> f64 {
        let one = Complex64::new(1.0, 0.0);
        let steps = 4000;
        let mut total = 0.0;
        for k in 0..3 {
            let (a, b) = (zs[k], zs[(k + 1) % 3]);
            let w = recenter(a, b);
            let integrand = |t: f64| {
                let s = w * t;
                let z = (s + a) / (one + a.conj() * s);
                let dz = w * (1.0 - a.norm_sqr()) / ((one + a.conj() * s) * (one + a.conj() * s));
                2.0 * (z.conj() * dz).im / (1.0 - z.norm_sqr())
            };
            let h = 1.0 / steps as f64;
            let mut sum = integrand(0.0) + integrand(1.0);
            for i in 1..steps {
                sum += integrand(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            total += sum * h / 3.0;
        }
        total
    }

    #[test]
    fn matches_line_integral() {
        let cases = [
            [p(0.1, 0.2), p(-0.5, 0.3), p(0.4, -0.6)],
            [p(0.0, 0.0), p(0.9, 0.0), p(0.0, 0.9)],
            [p(-0.7, -0.1), p(0.2, 0.75), p(0.5, 0.1)],
        ];
        for t in cases {
            let expected = area_by_quadrature([t[0].z(), t[1].z(), t[2].z()]);
            let got = hyperbolic_area(t[0], t[1], t[2]);
            assert!((got - expected).abs() < 1e-9, "{got} vs {expected}");
        }
    }

    #[test]
    fn degenerate_and_orientation() {
        let a = p(0.3, 0.1);
        assert_eq!(hyperbolic_area(a, a, a), 0.0);
        let (b, c) = (p(-0.2, 0.5), p(0.1, -0.4));
        let abc = hyperbolic_area(a, b, c);
        assert!((abc + hyperbolic_area(b, a, c)).abs() < 1e-12);
        // Counterclockwise is positive.
        assert!(hyperbolic_area(p(0.0, 0.0), p(0.5, 0.0), p(0.0, 0.5)) > 0.0);
        // Points on a diameter span no area.
        assert_eq!(hyperbolic_area(p(-0.5, 0.0), p(0.0, 0.0), p(0.3, 0.0)), 0.0);
    }

    #[test]
    fn near_ideal_triangle() {
        let v: Vec<HyperbolicPoint> = (0..3)
            .map(|k| {
                let phi = 2.0 * PI * k as f64 / 3.0;
                HyperbolicPoint::new(Complex64::from_polar(0.999, phi)).unwrap()
            })
            .collect();
        let a = hyperbolic_area(v[0], v[1], v[2]);
        assert!(a > 3.0 && a < PI, "{a}");
    }

    #[test]
    fn rejects_points_outside_disk() {
        assert!(HyperbolicPoint::new(Complex64::new(1.0, 0.0)).is_err());
        assert!(HyperbolicPoint::new(Complex64::new(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn area_cocycle_identity_on_octagon_ball() {
        let g = make_octagon_group();
        let ball = enumerate_ball(&g, 3, 10_000).unwrap();
        let w = area_cocycle(0.7, &g);
        let r = check_cocycle(&w, &g, ball.elements(), 1000, 1e-8, 11).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn area_cocycle_basic_values() {
        let g = make_octagon_group();
        let s = g.generators()[0].elem;
        let w = area_cocycle(0.7, &g);
        assert_eq!(w.area(&s, &s.inverse()), 0.0);
        assert_eq!(
            area_cocycle(0.0, &g).eval(&s, &g.generators()[2].elem),
            Complex64::new(1.0, 0.0)
        );
        assert!(area_cocycle(0.0, &g).is_trivial());
    }

    #[test]
    fn literal_convention_differs() {
        let g = make_octagon_group();
        let ball = enumerate_ball(&g, 2, 10_000).unwrap();
        let w = AreaCocycle::with_convention(0.7, &g, AreaConvention::Literal);
        let r = check_cocycle(&w, &g, ball.elements(), 500, 1e-8, 12).unwrap();
        assert!(!r.pass, "{r:?}");
    }
}
