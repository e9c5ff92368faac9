use num_complex::Complex64;
use proptest::prelude::*;

use spectral_fields::algebra::{
    convolve, i_norm, involute, weighted_two_norm, AlgebraElement, Cocycle, NormSide, Trivial,
};
use spectral_fields::cocycles::{
    heisenberg, heisenberg_quotient, hyperbolic_area, Flux, HyperbolicPoint,
};
use spectral_fields::fields::{flux_sweep, recompute_flux, SweepSize};
use spectral_fields::groups::{
    enumerate_ball, make_free_group, make_lattice, sanov_chain, Group, IntVec, Lattice,
    TorusQuotient, WordLength,
};
use spectral_fields::repr::{compression_rep, regular_rep, regular_rep_on, Matrix};
use spectral_fields::spectra::{hausdorff, operator_norm, SpectrumSet};

type Terms = Vec<((i64, i64), (f64, f64))>;

fn terms() -> impl Strategy<Value = Terms> {
    prop::collection::vec(((-3i64..=3, -3i64..=3), (-1.0..1.0, -1.0..1.0)), 1..6)
}

fn element(z: &Lattice, t: &Terms) -> AlgebraElement<IntVec> {
    AlgebraElement::from_terms(
        z,
        t.iter()
            .map(|&((a, b), (re, im))| (z.vector(&[a, b]).unwrap(), Complex64::new(re, im))),
    )
    .unwrap()
}

fn frobenius_difference(a: &Matrix, b: &Matrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += (a.get(i, j) - b.get(i, j)).norm_sqr();
        }
    }
    s.sqrt()
}

fn set_strategy() -> impl Strategy<Value = SpectrumSet> {
    prop_oneof![
        prop::collection::vec(-5.0..5.0f64, 1..8)
            .prop_map(|p| SpectrumSet::from_points(p).unwrap()),
        prop::collection::vec((-5.0..5.0f64, 0.0..2.0f64), 1..4).prop_map(|iv| {
            SpectrumSet::from_intervals(iv.into_iter().map(|(a, w)| [a, a + w]).collect(), 0.0)
                .unwrap()
        }),
    ]
}

fn disk_point() -> impl Strategy<Value = HyperbolicPoint> {
    (0.0..0.9f64, 0.0..std::f64::consts::TAU)
        .prop_map(|(r, t)| HyperbolicPoint::new(Complex64::from_polar(r, t)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn i_norm_is_submultiplicative(a in terms(), b in terms(), theta in -3.0..3.0f64) {
        let z = make_lattice(2).unwrap();
        let (f, g) = (element(&z, &a), element(&z, &b));
        let fg = convolve(&f, &g, &heisenberg(theta), &z).unwrap();
        prop_assert!(
            i_norm(&fg, NormSide::Max) <= i_norm(&f, NormSide::Max) * i_norm(&g, NormSide::Max) + 1e-12
        );
    }

    #[test]
    fn involution_is_an_involution(a in terms(), theta in -3.0..3.0f64) {
        let z = make_lattice(2).unwrap();
        let omega = heisenberg(theta);
        let f = element(&z, &a);
        let back = involute(&involute(&f, &omega, &z), &omega, &z);
        prop_assert!(back.distance(&z, &f).unwrap() <= 1e-12);
    }

    #[test]
    fn weighted_norms_grow_with_q(a in terms(), q1 in 0.0..3.0f64, dq in 0.0..2.0f64) {
        let z = make_lattice(2).unwrap();
        let f = element(&z, &a);
        let l = WordLength(&z);
        let lo = weighted_two_norm(&f, &l, q1, NormSide::Max).unwrap();
        let hi = weighted_two_norm(&f, &l, q1 + dq, NormSide::Max).unwrap();
        prop_assert!(lo <= hi * (1.0 + 1e-12));
        let two = weighted_two_norm(&f, &l, 0.0, NormSide::Max).unwrap();
        prop_assert!(two <= i_norm(&f, NormSide::Max) * (1.0 + 1e-12));
    }

    #[test]
    fn regular_rep_is_a_star_homomorphism(a in terms(), b in terms(), p in 0i64..6) {
        let z = make_lattice(2).unwrap();
        let q = TorusQuotient::new(2, 6).unwrap();
        let omega = heisenberg_quotient(p, 6, 6).unwrap();
        let (f, g) = (element(&z, &a), element(&z, &b));
        let (pf, pg) = (f.push_forward::<Lattice, _>(&q).unwrap(), g.push_forward::<Lattice, _>(&q).unwrap());
        let rep = |h: &AlgebraElement<IntVec>| regular_rep_on(h, &omega, &q)
            .unwrap()
            .into_matrix();
        let product = rep(&convolve(&pf, &pg, &omega, &q).unwrap());
        prop_assert!(product.max_difference(&rep(&pf).product(&rep(&pg))) <= 1e-9);
        let star = rep(&involute(&pf, &omega, &q));
        prop_assert!(star.max_difference(&rep(&pf).adjoint()) <= 1e-9);
    }

    #[test]
    fn representations_are_contractive(a in terms(), p in 0i64..4) {
        let z = make_lattice(2).unwrap();
        let f = element(&z, &a);
        let q = TorusQuotient::new(2, 8).unwrap();
        let omega = heisenberg_quotient(p, 4, 8).unwrap();
        let m = regular_rep::<Lattice, _, _>(&f, &omega, &q).unwrap().into_matrix();
        prop_assert!(operator_norm(&m).unwrap() <= i_norm(&f, NormSide::Max) + 1e-9);
    }

    #[test]
    fn compression_norms_increase_with_radius(a in terms(), theta in -3.0..3.0f64, r in 1usize..4) {
        let z = make_lattice(2).unwrap();
        let f = element(&z, &a);
        let omega = heisenberg(theta);
        let norm = |radius| {
            let ball = enumerate_ball(&z, radius, 10_000).unwrap();
            operator_norm(compression_rep(&f, &omega, &z, &ball).unwrap().matrix()).unwrap()
        };
        prop_assert!(norm(r) <= norm(r + 1) + 1e-9);
    }

    #[test]
    fn heisenberg_spectra_move_continuously(theta in -3.0..3.0f64, dt in -0.1..0.1f64) {
        let z = make_lattice(2).unwrap();
        let f = AlgebraElement::adjacency(&z).unwrap();
        let ball = enumerate_ball(&z, 4, 10_000).unwrap();
        let rep = |t| compression_rep(&f, &heisenberg(t), &z, &ball).unwrap();
        let (a, b) = (rep(theta), rep(theta + dt));
        let d = hausdorff(&a.eigenvalues().unwrap(), &b.eigenvalues().unwrap());
        prop_assert!(d <= frobenius_difference(a.matrix(), b.matrix()) + 1e-9);
    }

    #[test]
    fn flux_fibers_recompute_identically(p in 0i64..5, q in 1u64..5) {
        let z = make_lattice(2).unwrap();
        let f = AlgebraElement::adjacency(&z).unwrap();
        let flux = Flux::new(p, q).unwrap();
        let exp = flux_sweep(&f, &[flux], SweepSize::Adaptive { min: 8 }).unwrap();
        let fib = &exp.fibers[0];
        let n = SweepSize::Adaptive { min: 8 }.modulus(flux.q);
        prop_assert_eq!(&fib.spectrum, &recompute_flux(&f, flux, n).unwrap());
    }

    #[test]
    fn hausdorff_is_a_metric(a in set_strategy(), b in set_strategy(), c in set_strategy()) {
        prop_assert_eq!(hausdorff(&a, &b), hausdorff(&b, &a));
        prop_assert_eq!(hausdorff(&a, &a), 0.0);
        prop_assert!(hausdorff(&a, &c) <= hausdorff(&a, &b) + hausdorff(&b, &c) + 1e-12);
    }

    #[test]
    fn area_is_additive_and_invariant(
        p in disk_point(), q in disk_point(), r in disk_point(), s in disk_point(),
        c in disk_point(), rot in 0.0..std::f64::consts::TAU,
    ) {
        let whole = hyperbolic_area(p, q, r);
        let split = hyperbolic_area(s, p, q) + hyperbolic_area(s, q, r) + hyperbolic_area(s, r, p);
        prop_assert!((whole - split).abs() <= 1e-9);
        prop_assert!((hyperbolic_area(q, p, r) + whole).abs() <= 1e-12);
        let (c, u) = (c.z(), Complex64::from_polar(1.0, rot));
        let m = |x: HyperbolicPoint| {
            HyperbolicPoint::new(u * (x.z() - c) / (Complex64::new(1.0, 0.0) - c.conj() * x.z())).unwrap()
        };
        prop_assert!((hyperbolic_area(m(p), m(q), m(r)) - whole).abs() <= 1e-9);
    }

    #[test]
    fn sanov_projections_are_homomorphisms(
        pairs in prop::collection::vec(
            (prop::collection::vec(0usize..4, 0..8), prop::collection::vec(0usize..4, 0..8)),
            1..20,
        )
    ) {
        let chain = sanov_chain(&[3, 9]).unwrap();
        let f2 = make_free_group(2).unwrap();
        let words: Vec<_> = pairs
            .iter()
            .map(|(a, b)| (f2.evaluate_word(a), f2.evaluate_word(b)))
            .collect();
        prop_assert_eq!(chain.homomorphism_failures(&words), 0);
        prop_assert_eq!(chain.nesting_failures(&words.iter().map(|w| w.0.clone()).collect::<Vec<_>>()), 0);
    }
}

#[test]
fn trivial_cocycle_agrees_with_zero_field() {
    let z = make_lattice(2).unwrap();
    let g = z.vector(&[2, -1]).unwrap();
    let h = z.vector(&[-3, 5]).unwrap();
    assert_eq!(
        heisenberg(0.0).eval(&g, &h),
        Cocycle::<IntVec>::eval(&Trivial, &g, &h)
    );
}
