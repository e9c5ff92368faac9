//! Acceptance suite: one PASS/FAIL line per criterion, with the measured
//! values. Exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spectral_fields::algebra::{check_cocycle, convolve, AlgebraElement, Cocycle, Trivial};
use spectral_fields::cocycles::{
    area_cocycle, heisenberg_quotient, hyperbolic_area, Flux, HyperbolicPoint,
};
use spectral_fields::fields::{
    flux_matrix, flux_sweep, haagerup_check, hls_run, parse_levels, rd_certificate,
    semicontinuity_probe, theta_grid, theta_sweep, LimitSpectrum, SampleSpec, SweepSize,
    DEFAULT_THETA_POINTS,
};
use spectral_fields::groups::{
    enumerate_ball, lattice_quotient_chain, make_lattice, make_octagon_group, sanov_chain,
    FiniteGroup, SanovQuotient, TorusQuotient,
};
use spectral_fields::repr::{compression_rep, regular_rep_on, smooth_bump};
use spectral_fields::spectra::{
    circulant_spectrum, eigenvalues, harper_spectrum, hausdorff, kesten_interval, path_spectrum,
    SpectrumSet,
};
use spectral_fields::{Result, DEFAULT_SEED};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        pass,
        detail: detail.into(),
    })
}

fn trivial<Q>(_: &Q) -> Result<Trivial> {
    Ok(Trivial)
}

fn hls_obstruction() -> Result<Outcome> {
    let chain = sanov_chain(&[2, 4, 8, 16])?;
    let a = AlgebraElement::adjacency(chain.base())?;
    let k = LimitSpectrum::analytic(kesten_interval(2)?, "Kesten");
    let exp = hls_run(&chain, &a, trivial, Some(k))?;
    let near4 = exp
        .fibers
        .iter()
        .map(|f| f.spectrum.distance_to(4.0))
        .fold(0.0, f64::max);
    let dmin = exp
        .limit_distances()
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let orders: Vec<usize> = exp.fibers.iter().map(|f| f.dim).collect();
    outcome(
        near4 <= 1e-9 && dmin >= 0.5358 && exp.fibers.len() == 4,
        format!("orders {orders:?}, max dist(4, σ_n) = {near4:.3e}, min d_H = {dmin:.6}"),
    )
}

fn amenable_cyclic() -> Result<Outcome> {
    let moduli: Vec<u64> = (1..=10).map(|n| 1u64 << n).collect();
    let chain = lattice_quotient_chain(1, &moduli)?;
    let a = AlgebraElement::adjacency(chain.base())?;
    let lim = LimitSpectrum::analytic(SpectrumSet::interval(-2.0, 2.0)?, "[-2, 2]");
    let exp = hls_run(&chain, &a, trivial, Some(lim))?;
    let d = exp.limit_distances();
    let mut worst = String::new();
    let mut within = true;
    for (i, di) in d.iter().enumerate() {
        let n = i as i32 + 1;
        let bound = 20.0 * 4f64.powi(-n);
        if *di > bound {
            within = false;
            if worst.is_empty() {
                worst = format!("first violation n={n}: {di:.6} > {bound:.6}");
            }
        }
    }
    let decreasing = exp.diagnostics.decreasing_to_limit == Some(true);
    outcome(
        within && decreasing,
        format!(
            "strictly decreasing: {decreasing}; d_H(n=10) = {:.6e} vs bound {:.6e}; {worst}",
            d[9],
            20.0 * 4f64.powi(-10)
        ),
    )
}

fn amenable_torus() -> Result<Outcome> {
    let z2 = make_lattice(2)?;
    let a = AlgebraElement::adjacency(&z2)?;
    let exp = flux_sweep(&a, &[Flux::new(0, 1)?], SweepSize::Fixed(64))?;
    let d = hausdorff(&exp.fibers[0].spectrum, &SpectrumSet::interval(-4.0, 4.0)?);
    outcome(
        d <= 0.02,
        format!("(Z/64)^2 untwisted: d_H = {d:.6} (tolerance 0.02)"),
    )
}

fn hofstadter() -> Result<Outcome> {
    let z2 = make_lattice(2)?;
    let a = AlgebraElement::adjacency(&z2)?;
    let exp = flux_sweep(&a, &[Flux::new(1, 3)?], SweepSize::Fixed(60))?;
    let harper = harper_spectrum(1, 3, 240)?;
    let d = hausdorff(&exp.fibers[0].spectrum, &harper);
    let half = harper_spectrum(1, 2, 240)?;
    let r = 2.0 * 2f64.sqrt();
    let end = (half.min() + r).abs().max((half.max() - r).abs());
    outcome(
        d <= 0.05 && end <= 1e-6,
        format!("flux 1/3 on (Z/60)^2: d_H = {d:.6}; flux 1/2 endpoint error {end:.3e}"),
    )
}

fn random_disk_point(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(
        0.95 * rng.random::<f64>().sqrt(),
        2.0 * PI * rng.random::<f64>(),
    )
}

fn cocycle_validity() -> Result<Outcome> {
    let g = make_octagon_group();
    let ball = enumerate_ball(&g, 3, 10_000)?;
    let mut worst_cocycle: f64 = 0.0;
    let mut all = true;
    for theta in [0.3, 0.7, 2.0] {
        let r = check_cocycle(
            &area_cocycle(theta, &g),
            &g,
            ball.elements(),
            1000,
            1e-8,
            DEFAULT_SEED,
        )?;
        worst_cocycle = worst_cocycle.max(r.max_residual);
        all &= r.pass;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let (mut additivity, mut invariance): (f64, f64) = (0.0, 0.0);
    for _ in 0..1000 {
        let p: Vec<HyperbolicPoint> = (0..4)
            .map(|_| HyperbolicPoint::new(random_disk_point(&mut rng)))
            .collect::<Result<_>>()?;
        let whole = hyperbolic_area(p[0], p[1], p[2]);
        let split = hyperbolic_area(p[3], p[0], p[1])
            + hyperbolic_area(p[3], p[1], p[2])
            + hyperbolic_area(p[3], p[2], p[0]);
        additivity = additivity.max((whole - split).abs());
        let c = random_disk_point(&mut rng);
        let rot = Complex64::from_polar(1.0, 2.0 * PI * rng.random::<f64>());
        let mobius = |z: Complex64| rot * (z - c) / (Complex64::new(1.0, 0.0) - c.conj() * z);
        let q: Vec<HyperbolicPoint> = p[..3]
            .iter()
            .map(|z| HyperbolicPoint::new(mobius(z.z())))
            .collect::<Result<_>>()?;
        invariance = invariance.max((hyperbolic_area(q[0], q[1], q[2]) - whole).abs());
    }
    outcome(
        all && worst_cocycle <= 1e-8 && additivity <= 1e-9 && invariance <= 1e-9,
        format!(
            "cocycle residual {worst_cocycle:.3e}, additivity {additivity:.3e}, Möbius invariance {invariance:.3e}"
        ),
    )
}

fn semicontinuity() -> Result<Outcome> {
    let chain = sanov_chain(&[2, 4, 8, 16])?;
    let a = AlgebraElement::adjacency(chain.base())?;
    let exp = hls_run(&chain, &a, trivial, None)?;
    let k = kesten_interval(2)?;
    let bump = smooth_bump(4.0, 0.0, 4.0 - (k.max() + 0.1))?;
    let hls = semicontinuity_probe(&exp, &k, &bump)?;
    let low = hls.values.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);

    let moduli: Vec<u64> = (1..=10).map(|n| 1u64 << n).collect();
    let chain = lattice_quotient_chain(1, &moduli)?;
    let a = AlgebraElement::adjacency(chain.base())?;
    let exp = hls_run(&chain, &a, trivial, None)?;
    let bump = smooth_bump(3.0, 0.0, 0.9)?;
    let line = semicontinuity_probe(&exp, &SpectrumSet::interval(-2.0, 2.0)?, &bump)?;
    let high = line.values.iter().map(|v| v.1).fold(0.0, f64::max);
    outcome(
        low >= 1.0 - 1e-6 && high == 0.0,
        format!(
            "Sanov min ‖φ(M_n)‖ = {low:.9} ({:?}); Z chain max = {high} ({:?})",
            hls.verdict, line.verdict
        ),
    )
}

fn rd_uniform() -> Result<Outcome> {
    let z2 = make_lattice(2)?;
    let quotients: Vec<TorusQuotient> = parse_levels("4..64")?
        .into_iter()
        .map(|n| TorusQuotient::new(2, n))
        .collect::<Result<_>>()?;
    let cert = rd_certificate(&z2, &quotients, 2.0, &SampleSpec::default(), DEFAULT_SEED)?;
    let c: Vec<String> = cert
        .levels
        .iter()
        .map(|l| format!("{:.6}", l.c_hat))
        .collect();
    outcome(
        cert.uniformity_ratio <= 2.0,
        format!(
            "Ĉ_n = [{}], ratio {:.6}",
            c.join(", "),
            cert.uniformity_ratio
        ),
    )
}

fn haagerup() -> Result<Outcome> {
    let r = haagerup_check(5, 4, 12, 1_200_000, 40, DEFAULT_SEED)?;
    let slack = r
        .samples
        .iter()
        .map(|s| s.norm_lower_bound / s.bound)
        .fold(0.0, f64::max);
    outcome(
        r.pass && r.samples.len() == 20,
        format!(
            "{} samples on ball R={} ({} elements), max lower/bound = {slack:.6}",
            r.samples.len(),
            r.radius,
            r.ball_size
        ),
    )
}

fn max_diff(a: &SpectrumSet, b: &SpectrumSet) -> f64 {
    let (a, b) = (a.points().unwrap(), b.points().unwrap());
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn eigensolver() -> Result<Outcome> {
    let z1 = make_lattice(1)?;
    let a = AlgebraElement::adjacency(&z1)?;
    let mut worst: f64 = 0.0;
    for n in [2u64, 16, 255, 1024, 2048] {
        let q = TorusQuotient::new(1, n)?;
        let pushed = a.push_forward(&q)?;
        let s = eigenvalues(regular_rep_on(&pushed, &Trivial, &q)?.matrix())?;
        worst = worst.max(max_diff(&s, &circulant_spectrum(n as usize)?));
    }
    for r in [1usize, 40, 511, 1023] {
        let ball = enumerate_ball(&z1, r, 4096)?;
        let s = compression_rep(&a, &Trivial, &z1, &ball)?.eigenvalues()?;
        worst = worst.max(max_diff(&s, &path_spectrum(2 * r + 1)?));
    }
    outcome(
        worst <= 1e-9,
        format!("max eigenvalue error {worst:.3e} (circulant to 2048, path to 2047)"),
    )
}

fn random_set(rng: &mut ChaCha8Rng) -> SpectrumSet {
    let n = rng.random_range(1..8);
    if rng.random::<bool>() {
        SpectrumSet::from_points((0..n).map(|_| rng.random_range(-5.0..5.0)).collect()).unwrap()
    } else {
        let ivs = (0..n)
            .map(|_| {
                let a: f64 = rng.random_range(-5.0..5.0);
                [a, a + rng.random_range(0.0..1.0)]
            })
            .collect();
        SpectrumSet::from_intervals(ivs, 0.0).unwrap()
    }
}

fn hausdorff_metric() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let (mut asym, mut excess): (f64, f64) = (0.0, 0.0);
    for _ in 0..1000 {
        let (a, b, c) = (
            random_set(&mut rng),
            random_set(&mut rng),
            random_set(&mut rng),
        );
        asym = asym.max((hausdorff(&a, &b) - hausdorff(&b, &a)).abs());
        excess = excess.max(hausdorff(&a, &c) - hausdorff(&a, &b) - hausdorff(&b, &c));
    }
    outcome(
        asym == 0.0 && excess <= 1e-12,
        format!("symmetry defect {asym:e}, triangle excess {excess:.3e}"),
    )
}

fn random_element<Q: FiniteGroup>(q: &Q, rng: &mut ChaCha8Rng) -> Result<AlgebraElement<Q::Elem>> {
    let k = rng.random_range(1..6);
    let terms: Vec<_> = (0..k)
        .map(|_| {
            let g = q.elements()[rng.random_range(0..q.size())].clone();
            (
                g,
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            )
        })
        .collect();
    AlgebraElement::from_terms(q, terms)
}

fn homomorphism_defect<Q, C>(q: &Q, omega: &C, rng: &mut ChaCha8Rng) -> Result<f64>
where
    Q: FiniteGroup,
    C: Cocycle<Q::Elem>,
{
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let f = random_element(q, rng)?;
        let g = random_element(q, rng)?;
        let fg = regular_rep_on(&convolve(&f, &g, omega, q)?, omega, q)?;
        let pf = regular_rep_on(&f, omega, q)?;
        let pg = regular_rep_on(&g, omega, q)?;
        let prod = pf.matrix().product(pg.matrix());
        worst = worst.max(fg.matrix().max_difference(&prod));
    }
    Ok(worst)
}

fn star_homomorphism() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let z8 = TorusQuotient::new(1, 8)?;
    let t6 = TorusQuotient::new(2, 6)?;
    let s8 = SanovQuotient::new(8)?;
    let d = [
        homomorphism_defect(&z8, &Trivial, &mut rng)?,
        homomorphism_defect(&t6, &Trivial, &mut rng)?,
        homomorphism_defect(&t6, &heisenberg_quotient(1, 3, 6)?, &mut rng)?,
        homomorphism_defect(&s8, &Trivial, &mut rng)?,
    ];
    let worst = d.iter().copied().fold(0.0, f64::max);
    outcome(
        worst <= 1e-9,
        format!(
            "max ‖π(f*g) − π(f)π(g)‖ over Z/8, (Z/6)^2, (Z/6)^2 flux 1/3, Sanov 8: {worst:.3e}"
        ),
    )
}

struct OctagonSweep {
    first_last_equal: bool,
    holder: Option<f64>,
    points: usize,
    spread: f64,
}

fn octagon_sweep() -> Result<OctagonSweep> {
    let g = make_octagon_group();
    let ball = enumerate_ball(&g, 3, 10_000)?;
    let a = AlgebraElement::adjacency(&g)?;
    let thetas = theta_grid(DEFAULT_THETA_POINTS, 0.0, 2.0 * PI)?;
    let exp = theta_sweep(&g, &a, |t| area_cocycle(t, &g), &thetas, &ball)?;
    let first = &exp.fibers[0].spectrum;
    let last = &exp.fibers[exp.fibers.len() - 1].spectrum;
    Ok(OctagonSweep {
        first_last_equal: first == last,
        holder: exp.diagnostics.holder_half_constant,
        points: exp.fibers.len(),
        spread: hausdorff(first, last),
    })
}

fn flux_periodicity() -> Result<Outcome> {
    let a = AlgebraElement::adjacency(&make_lattice(2)?)?;
    let mut identical = true;
    for (p, q, n) in [(1, 3, 12), (2, 5, 10), (1, 2, 8), (5, 12, 24)] {
        let m0 = flux_matrix(&a, Flux::new(p, q)?, n)?;
        let m1 = flux_matrix(&a, Flux::new(p + q as i64, q)?, n)?;
        identical &= m0.triplets() == m1.triplets();
    }
    outcome(
        identical,
        "θ and θ+2π matrices compared entrywise at fluxes 1/3, 2/5, 1/2, 5/12",
    )
}

fn main() {
    let mut failures = 0;
    let mut report = |name: &str, start: Instant, r: Result<Outcome>| {
        let secs = start.elapsed().as_secs_f64();
        let (pass, detail) = match r {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "{} {name}: {detail} [{secs:.1}s]",
            if pass { "PASS" } else { "FAIL" }
        );
    };

    let t = Instant::now();
    report("1 HLS obstruction on the Sanov chain", t, hls_obstruction());
    let t = Instant::now();
    report("2a amenable convergence, Z/2^n", t, amenable_cyclic());
    let t = Instant::now();
    report("2b amenable convergence, (Z/64)^2", t, amenable_torus());
    let t = Instant::now();
    report("3 Hofstadter oracle match", t, hofstadter());
    let t = Instant::now();
    report("4 area cocycle validity", t, cocycle_validity());
    let t = Instant::now();
    report("5 semicontinuity probe", t, semicontinuity());
    let t = Instant::now();
    report("6a uniform RD on Z^2 quotients", t, rd_uniform());
    let t = Instant::now();
    report("6b sphere bound on F2", t, haagerup());
    let t = Instant::now();
    report("7a eigensolver vs closed forms", t, eigensolver());
    let t = Instant::now();
    report("7b Hausdorff metric", t, hausdorff_metric());
    let t = Instant::now();
    report("7c *-homomorphism of regular_rep", t, star_homomorphism());
    let t = Instant::now();
    report(
        "8a flux periodicity in quotient mode",
        t,
        flux_periodicity(),
    );

    let t = Instant::now();
    match octagon_sweep() {
        Ok(s) => {
            report(
                "8b octagon sweep completes",
                t,
                outcome(
                    s.points == DEFAULT_THETA_POINTS,
                    format!("{} θ-points on ball R=3", s.points),
                ),
            );
            let t = Instant::now();
            report(
                "8c octagon sweep 2π-periodic bit-for-bit",
                t,
                outcome(
                    s.first_last_equal,
                    format!("d_H(σ(θ=0), σ(θ=2π)) = {:.3e}", s.spread),
                ),
            );
            let t = Instant::now();
            report(
                "8d octagon Hölder-1/2 constant finite",
                t,
                outcome(
                    s.holder.is_some_and(f64::is_finite),
                    format!("fitted C = {:.3e}", s.holder.unwrap_or(f64::NAN)),
                ),
            );
        }
        Err(e) => report("8b octagon sweep completes", t, Err(e)),
    }

    println!("{failures} criteria failed");
    if failures > 0 {
        std::process::exit(1);
    }
}
