//! Subcommand implementations. Each returns `Ok(false)` when the run
//! completed but its check failed.

use std::f64::consts::PI;
use std::path::Path;

use serde::Serialize;
use spectral_fields::algebra::{
    check_cocycle, self_adjoint_defect, AlgebraElement, Cocycle, Trivial,
};
use spectral_fields::cocycles::{area_cocycle, heisenberg, heisenberg_quotient, Flux};
use spectral_fields::fields::{
    butterfly_rows, compression_limit, detect_trivial_eigenvalue, farey, flux_sweep,
    haagerup_check, hls_run, parse_levels, rd_certificate, semicontinuity_probe, theta_grid,
    theta_sweep, FieldExperiment, LimitSpectrum, ProbeReport, SampleSpec, SweepSize,
    TrivialEigenvalue,
};
use spectral_fields::groups::{
    enumerate_ball, lattice_quotient_chain, make_free_group, make_lattice, make_octagon_group,
    sanov_chain, Ball, FreeGroup, FuchsianGroup, Group, Lattice, QuotientChain, QuotientOf,
    SanovQuotient, TorusQuotient, DEFAULT_BALL_CAP,
};
use spectral_fields::repr::{compression_rep, regular_rep, smooth_bump};
use spectral_fields::spectra::{kesten_interval, SpectrumSet, EIGEN_CAP};
use spectral_fields::{Error, Result};

use crate::args::{
    ButterflyArgs, ButterflyGroup, ChainGroup, CocycleCheckArgs, CocycleName, GroupName,
    HaagerupArgs, HlsArgs, LimitName, RdArgs, SpectrumArgs, TwistArgs,
};
use crate::cache::{AreaTable, TabulatedArea};
use crate::output::{scatter_svg, sig, Ctx};

const SELF_ADJOINT_TOL: f64 = 1e-12;
const LIMIT_ITERATIONS: usize = 80;

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn unsupported(cocycle: CocycleName, group: impl std::fmt::Debug) -> Error {
    usage(format!(
        "cocycle {cocycle:?} is not available for {group:?} in this mode"
    ))
}

fn load_element<G: Group>(group: &G, spec: &str, ctx: &mut Ctx) -> Result<AlgebraElement<G::Elem>> {
    match spec {
        "adjacency" | "laplacian" => AlgebraElement::preset(group, spec),
        path => {
            let p = Path::new(path);
            if !p.is_file() {
                return Err(Error::Parse(format!(
                    "element `{path}` is neither a preset (adjacency, laplacian) nor a readable JSON file"
                )));
            }
            let text = std::fs::read_to_string(p)?;
            ctx.inputs.push(p.to_path_buf());
            AlgebraElement::from_json(group, &text)
        }
    }
}

fn area_table(
    group: &FuchsianGroup,
    ball: &Ball<FuchsianGroup>,
    ctx: &mut Ctx,
) -> Result<AreaTable> {
    let (table, read) = AreaTable::load_or_build(group, ball)?;
    ctx.inputs.extend(read);
    Ok(table)
}

fn check_self_adjoint<G, C>(f: &AlgebraElement<G::Elem>, omega: &C, group: &G) -> Result<()>
where
    G: Group,
    C: Cocycle<G::Elem> + ?Sized,
{
    let defect = self_adjoint_defect(f, omega, group)?;
    if defect > SELF_ADJOINT_TOL * f.max_abs().max(1.0) {
        return Err(Error::NotSelfAdjoint { defect });
    }
    Ok(())
}

fn check_eigen_dim(dim: usize) -> Result<()> {
    if dim > EIGEN_CAP {
        return Err(Error::DimensionCap {
            dim,
            cap: EIGEN_CAP,
            what: "dense eigendecomposition",
        });
    }
    Ok(())
}

/// Field strength selected by `--theta` / `--flux`.
#[derive(Clone, Copy)]
enum Twist {
    None,
    Theta(f64),
    Flux(Flux),
}

impl Twist {
    fn from_args(t: &TwistArgs) -> Result<Self> {
        match (t.cocycle, t.theta, t.flux) {
            (CocycleName::Trivial, None, None) => Ok(Twist::None),
            (CocycleName::Trivial, _, _) => {
                Err(usage("--theta and --flux need a twisted --cocycle"))
            }
            (_, Some(theta), None) => Ok(Twist::Theta(theta)),
            (_, None, Some(flux)) => Ok(Twist::Flux(flux)),
            (_, None, None) => Err(usage("a twisted --cocycle needs --theta or --flux")),
            (_, Some(_), Some(_)) => Err(usage("--theta and --flux are mutually exclusive")),
        }
    }

    fn theta(&self) -> f64 {
        match *self {
            Twist::None => 0.0,
            Twist::Theta(t) => t,
            Twist::Flux(f) => f.theta(),
        }
    }
}

struct Computed {
    set: SpectrumSet,
    dim: usize,
    backend: String,
    cocycle: String,
}

fn on_quotient<G, Q, C>(f: &AlgebraElement<G::Elem>, omega: &C, q: &Q) -> Result<Computed>
where
    G: Group,
    Q: QuotientOf<G>,
    C: Cocycle<Q::Elem>,
{
    check_self_adjoint(&f.push_forward::<G, Q>(q)?, omega, q)?;
    check_eigen_dim(q.size())?;
    let rep = regular_rep::<G, Q, C>(f, omega, q)?;
    Ok(Computed {
        set: rep.eigenvalues()?,
        dim: rep.dim(),
        backend: q.name(),
        cocycle: omega.describe(),
    })
}

fn on_ball<G, C>(
    group: &G,
    f: &AlgebraElement<G::Elem>,
    omega: &C,
    ball: &Ball<G>,
) -> Result<Computed>
where
    G: Group,
    C: Cocycle<G::Elem>,
{
    check_self_adjoint(f, omega, group)?;
    check_eigen_dim(ball.len())?;
    let rep = compression_rep(f, omega, group, ball)?;
    Ok(Computed {
        set: rep.eigenvalues()?,
        dim: rep.dim(),
        backend: format!(
            "{} ball R={} ({} elements)",
            group.name(),
            ball.radius(),
            ball.len()
        ),
        cocycle: omega.describe(),
    })
}

fn lattice_dim(g: GroupName) -> usize {
    if g == GroupName::Z1 {
        1
    } else {
        2
    }
}

pub fn spectrum(a: &SpectrumArgs, ctx: &mut Ctx) -> Result<bool> {
    let twist = Twist::from_args(&a.twist)?;
    let cocycle = a.twist.cocycle;
    let c = match (a.group, a.quotient, a.sanov, a.radius) {
        (GroupName::Z1 | GroupName::Z2, Some(n), None, None) => {
            let d = lattice_dim(a.group);
            let z = make_lattice(d)?;
            let f = load_element(&z, &a.element, ctx)?;
            let q = TorusQuotient::new(d, n)?;
            match (cocycle, twist) {
                (CocycleName::Trivial, _) => on_quotient::<Lattice, _, _>(&f, &Trivial, &q)?,
                (CocycleName::Heisenberg, Twist::Flux(fl)) if d == 2 => {
                    on_quotient::<Lattice, _, _>(&f, &heisenberg_quotient(fl.p, fl.q, n)?, &q)?
                }
                (CocycleName::Heisenberg, _) if d == 2 => {
                    return Err(usage("heisenberg on a torus quotient needs --flux p/q"))
                }
                (c, _) => return Err(unsupported(c, a.group)),
            }
        }
        (GroupName::F2, None, Some(m), None) => {
            let f2 = make_free_group(2)?;
            let f = load_element(&f2, &a.element, ctx)?;
            let q = SanovQuotient::new(m)?;
            match cocycle {
                CocycleName::Trivial => on_quotient::<FreeGroup, _, _>(&f, &Trivial, &q)?,
                c => return Err(unsupported(c, a.group)),
            }
        }
        (GroupName::Z1 | GroupName::Z2, None, None, Some(r)) => {
            let d = lattice_dim(a.group);
            let z = make_lattice(d)?;
            let f = load_element(&z, &a.element, ctx)?;
            let ball = enumerate_ball(&z, r, a.ball_cap)?;
            match cocycle {
                CocycleName::Trivial => on_ball(&z, &f, &Trivial, &ball)?,
                CocycleName::Heisenberg if d == 2 => {
                    on_ball(&z, &f, &heisenberg(twist.theta()), &ball)?
                }
                c => return Err(unsupported(c, a.group)),
            }
        }
        (GroupName::F2, None, None, Some(r)) => {
            let f2 = make_free_group(2)?;
            let f = load_element(&f2, &a.element, ctx)?;
            let ball = enumerate_ball(&f2, r, a.ball_cap)?;
            match cocycle {
                CocycleName::Trivial => on_ball(&f2, &f, &Trivial, &ball)?,
                c => return Err(unsupported(c, a.group)),
            }
        }
        (GroupName::Octagon, None, None, Some(r)) => {
            let g = make_octagon_group();
            let f = load_element(&g, &a.element, ctx)?;
            let ball = enumerate_ball(&g, r, a.ball_cap)?;
            match cocycle {
                CocycleName::Trivial => on_ball(&g, &f, &Trivial, &ball)?,
                CocycleName::Area => {
                    let table = area_table(&g, &ball, ctx)?;
                    on_ball(
                        &g,
                        &f,
                        &TabulatedArea::new(twist.theta(), &g, &ball, &table),
                        &ball,
                    )?
                }
                c => return Err(unsupported(c, a.group)),
            }
        }
        (g, ..) => {
            return Err(usage(format!(
                "{g:?}: use --quotient with z1/z2, --sanov with f2, or --radius with any group"
            )))
        }
    };

    ctx.write_json("spectrum.json", &c.set)?;
    let mut csv = String::from("eigenvalue\n");
    for x in c.set.points().unwrap_or_default() {
        csv.push_str(&sig(*x));
        csv.push('\n');
    }
    ctx.write_text("eigenvalues.csv", &csv)?;
    println!(
        "{}, cocycle {}: {} eigenvalues in [{}, {}]",
        c.backend,
        c.cocycle,
        c.dim,
        sig(c.set.min()),
        sig(c.set.max())
    );
    Ok(true)
}

pub fn butterfly(a: &ButterflyArgs, ctx: &mut Ctx) -> Result<bool> {
    let (exp, header, xlabel): (FieldExperiment, &str, &str) = match a.group {
        ButterflyGroup::Z2 => {
            let z = make_lattice(2)?;
            let f = load_element(&z, &a.element, ctx)?;
            let size = match a.size {
                Some(n) => SweepSize::Fixed(n),
                None => SweepSize::Adaptive { min: a.n_min },
            };
            (
                flux_sweep(&f, &farey(a.farey_order)?, size)?,
                "flux,eigenvalue",
                "flux p/q",
            )
        }
        ButterflyGroup::Octagon => {
            let g = make_octagon_group();
            let f = load_element(&g, &a.element, ctx)?;
            let ball = enumerate_ball(&g, a.radius, DEFAULT_BALL_CAP)?;
            let table = area_table(&g, &ball, ctx)?;
            let thetas = theta_grid(a.theta_points, a.theta_min, a.theta_max.unwrap_or(2.0 * PI))?;
            let family = |t: f64| TabulatedArea::new(t, &g, &ball, &table);
            (
                theta_sweep(&g, &f, family, &thetas, &ball)?,
                "theta,eigenvalue",
                "theta (rad)",
            )
        }
    };
    let rows = butterfly_rows(&exp);
    ctx.write_csv("butterfly.csv", header, &rows)?;
    ctx.write_json("experiment.json", &exp)?;
    if a.svg {
        ctx.write_text("butterfly.svg", &scatter_svg(&rows, xlabel, "eigenvalue"))?;
    }
    println!(
        "{} fibers ({} skipped), {} rows; Hölder-1/2 constant {}",
        exp.fibers.len(),
        exp.skipped.len(),
        rows.len(),
        exp.diagnostics
            .holder_half_constant
            .map_or_else(|| "n/a".into(), sig)
    );
    Ok(true)
}

#[derive(Serialize)]
struct TrivialLevel {
    index: usize,
    order: usize,
    #[serde(flatten)]
    eigenvalue: TrivialEigenvalue,
}

#[derive(Serialize)]
struct HlsReport {
    experiment: FieldExperiment,
    probe: Option<ProbeReport>,
    /// Eigenvalue `Σ f(g)` on constants, per level (untwisted runs only).
    trivial_eigenvalues: Option<Vec<TrivialLevel>>,
}

fn resolve_limit<G: Group>(
    a: &HlsArgs,
    base: &G,
    f: &AlgebraElement<G::Elem>,
    base_omega: &dyn Cocycle<G::Elem>,
    seed: u64,
) -> Result<Option<LimitSpectrum>> {
    Ok(match a.limit {
        LimitName::None => None,
        LimitName::Kesten => {
            if a.group != ChainGroup::F2 {
                return Err(usage("--limit kesten applies to f2"));
            }
            Some(LimitSpectrum::analytic(
                kesten_interval(2)?,
                "Kesten interval of F2",
            ))
        }
        LimitName::Interval => {
            let [lo, hi] = match (&a.interval, a.group) {
                (Some(v), _) if v.len() == 2 => [v[0], v[1]],
                (Some(_), _) => return Err(usage("--interval takes LO,HI")),
                (None, ChainGroup::Z1) => [-2.0, 2.0],
                (None, ChainGroup::Z2) => [-4.0, 4.0],
                (None, ChainGroup::F2) => {
                    return Err(usage("--limit interval on f2 needs --interval LO,HI"))
                }
            };
            Some(LimitSpectrum::analytic(
                SpectrumSet::interval(lo, hi)?,
                format!("[{}, {}]", sig(lo), sig(hi)),
            ))
        }
        LimitName::Compression => Some(compression_limit(
            base,
            f,
            base_omega,
            a.limit_radius,
            a.ball_cap,
            LIMIT_ITERATIONS,
            seed,
        )?),
    })
}

fn run_hls<G, Q, C, F>(
    a: &HlsArgs,
    ctx: &mut Ctx,
    chain: &QuotientChain<G, Q>,
    f: &AlgebraElement<G::Elem>,
    cocycle_for: F,
    base_omega: &dyn Cocycle<G::Elem>,
) -> Result<bool>
where
    G: Group,
    Q: QuotientOf<G>,
    C: Cocycle<Q::Elem>,
    F: Fn(&Q) -> Result<C> + Sync,
{
    let limit = resolve_limit(a, chain.base(), f, base_omega, ctx.seed)?;
    let bump = match &a.probe {
        Some(v) if v.len() == 3 => Some(smooth_bump(v[0], v[1], v[2])?),
        Some(_) => return Err(usage("--probe takes CENTER,INNER,OUTER")),
        None => None,
    };
    if bump.is_some() && limit.is_none() {
        return Err(usage("--probe needs a --limit"));
    }
    let experiment = hls_run(chain, f, cocycle_for, limit.clone())?;
    let probe = match (&bump, &limit) {
        (Some(b), Some(l)) => Some(semicontinuity_probe(&experiment, &l.set, b)?),
        _ => None,
    };
    let trivial_eigenvalues = if base_omega.is_trivial() {
        Some(
            chain
                .levels()
                .iter()
                .enumerate()
                .map(|(index, q)| {
                    Ok(TrivialLevel {
                        index,
                        order: q.size(),
                        eigenvalue: detect_trivial_eigenvalue::<G, Q, _>(f, &Trivial, q)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };

    for fib in &experiment.fibers {
        println!(
            "{:?}: order {}, norm {}, d_H to limit {}",
            fib.label,
            fib.dim,
            sig(fib.norm),
            fib.hausdorff_to_limit.map_or_else(|| "n/a".into(), sig)
        );
    }
    for (label, why) in &experiment.skipped {
        println!("{label:?}: skipped ({why})");
    }
    if let Some(p) = &probe {
        println!("probe verdict: {:?}", p.verdict);
    }
    ctx.write_json(
        "hls.json",
        &HlsReport {
            experiment,
            probe,
            trivial_eigenvalues,
        },
    )?;
    Ok(true)
}

pub fn hls(a: &HlsArgs, ctx: &mut Ctx) -> Result<bool> {
    let levels = parse_levels(&a.levels)?;
    match a.group {
        ChainGroup::F2 => {
            if a.flux.is_some() {
                return Err(usage("--flux applies to z2"));
            }
            let chain = sanov_chain(&levels)?;
            let f = load_element(chain.base(), &a.element, ctx)?;
            run_hls(
                a,
                ctx,
                &chain,
                &f,
                |_: &SanovQuotient| Ok(Trivial),
                &Trivial,
            )
        }
        ChainGroup::Z1 | ChainGroup::Z2 => {
            let d = if a.group == ChainGroup::Z1 { 1 } else { 2 };
            let chain = lattice_quotient_chain(d, &levels)?;
            let f = load_element(chain.base(), &a.element, ctx)?;
            match a.flux {
                None => run_hls(
                    a,
                    ctx,
                    &chain,
                    &f,
                    |_: &TorusQuotient| Ok(Trivial),
                    &Trivial,
                ),
                Some(fl) if d == 2 => run_hls(
                    a,
                    ctx,
                    &chain,
                    &f,
                    move |q: &TorusQuotient| heisenberg_quotient(fl.p, fl.q, q.modulus()),
                    &heisenberg(fl.theta()),
                ),
                Some(_) => Err(usage("--flux applies to z2")),
            }
        }
    }
}

pub fn rd_certify(a: &RdArgs, ctx: &mut Ctx) -> Result<bool> {
    let levels = parse_levels(&a.levels)?;
    let spec = SampleSpec {
        radii: a.radii.clone(),
        per_radius: a.per_radius,
        presets: !a.no_presets,
    };
    let cert = match a.group {
        ChainGroup::Z1 | ChainGroup::Z2 => {
            let d = if a.group == ChainGroup::Z1 { 1 } else { 2 };
            let z = make_lattice(d)?;
            let qs = levels
                .iter()
                .map(|&n| TorusQuotient::new(d, n))
                .collect::<Result<Vec<_>>>()?;
            rd_certificate(&z, &qs, a.p, &spec, ctx.seed)?
        }
        ChainGroup::F2 => {
            let f2 = make_free_group(2)?;
            let qs = levels
                .iter()
                .map(|&m| SanovQuotient::new(m))
                .collect::<Result<Vec<_>>>()?;
            rd_certificate(&f2, &qs, a.p, &spec, ctx.seed)?
        }
    };
    for l in &cert.levels {
        println!(
            "{:?}: dim {}, C_hat {} ({})",
            l.label,
            l.dim,
            sig(l.c_hat),
            l.argmax
        );
    }
    println!("uniformity ratio {}", sig(cert.uniformity_ratio));
    ctx.write_json("rd.json", &cert)?;
    Ok(true)
}

pub fn haagerup(a: &HaagerupArgs, ctx: &mut Ctx) -> Result<bool> {
    let report = haagerup_check(
        a.max_n,
        a.per_n,
        a.radius,
        a.ball_cap,
        a.iterations,
        ctx.seed,
    )?;
    for s in &report.samples {
        println!(
            "n={} #{}: lower bound {} <= {}: {}",
            s.n,
            s.index,
            sig(s.norm_lower_bound),
            sig(s.bound),
            s.pass
        );
    }
    println!(
        "ball R={} ({} elements): pass {}",
        report.radius, report.ball_size, report.pass
    );
    ctx.write_json("haagerup.json", &report)?;
    Ok(report.pass)
}

fn cocycle_on<G, C>(
    group: &G,
    omega: &C,
    a: &CocycleCheckArgs,
    seed: u64,
) -> Result<spectral_fields::algebra::CocycleReport>
where
    G: Group,
    C: Cocycle<G::Elem>,
{
    let ball = enumerate_ball(group, a.radius, a.ball_cap)?;
    check_cocycle(omega, group, ball.elements(), a.samples, a.tol, seed)
}

pub fn cocycle_check(a: &CocycleCheckArgs, ctx: &mut Ctx) -> Result<bool> {
    let seed = ctx.seed;
    let report = match (a.group, a.cocycle) {
        (GroupName::Octagon, CocycleName::Area) => {
            let g = make_octagon_group();
            cocycle_on(&g, &area_cocycle(a.theta, &g), a, seed)?
        }
        (GroupName::Z2, CocycleName::Heisenberg) => {
            cocycle_on(&make_lattice(2)?, &heisenberg(a.theta), a, seed)?
        }
        (GroupName::Z1, CocycleName::Trivial) => cocycle_on(&make_lattice(1)?, &Trivial, a, seed)?,
        (GroupName::Z2, CocycleName::Trivial) => cocycle_on(&make_lattice(2)?, &Trivial, a, seed)?,
        (GroupName::F2, CocycleName::Trivial) => {
            cocycle_on(&make_free_group(2)?, &Trivial, a, seed)?
        }
        (GroupName::Octagon, CocycleName::Trivial) => {
            cocycle_on(&make_octagon_group(), &Trivial, a, seed)?
        }
        (g, c) => return Err(unsupported(c, g)),
    };
    println!(
        "{}: {} triples, max residual {}, max modulus defect {}, tol {}: pass {}",
        report.cocycle,
        report.samples,
        sig(report.max_residual),
        sig(report.max_modulus_defect),
        sig(report.tol),
        report.pass
    );
    ctx.write_json("cocycle.json", &report)?;
    Ok(report.pass)
}
