use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::FiberLabel;
use crate::algebra::{weighted_two_norm, AlgebraElement, NormSide, Trivial};
use crate::groups::{enumerate_ball, make_free_group, Ball, Group, QuotientOf, DEFAULT_BALL_CAP};
use crate::repr::regular_rep_on;
use crate::spectra::{operator_norm, operator_norm_lower_bound, AdjointOperator, LinearOperator};
use crate::{Error, Result};

/// Quotients up to this order get an exact SVD; larger ones a Lanczos
/// lower bound.
const SVD_LIMIT: usize = 256;

/// Lanczos steps on `M*M` for large quotients.
const NORM_ITERATIONS: usize = 80;

/// Elements sampled by an RD certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    /// Radii of the balls carrying Gaussian coefficients.
    pub radii: Vec<usize>,
    /// Gaussian draws per radius.
    pub per_radius: usize,
    /// Whether to add `δ_e`, the adjacency element and the sphere
    /// indicators `1_{S_r}` for each radius.
    pub presets: bool,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec {
            radii: vec![1, 2, 3],
            per_radius: 8,
            presets: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum NormMethod {
    Svd,
    /// Certified lower bound from Lanczos on `M*M`.
    LanczosLowerBound {
        iterations: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RdLevel {
    pub label: FiberLabel,
    pub dim: usize,
    /// `max ‖π_n(f)‖ / ‖π_n(f)‖_{2,p}` over the sample.
    pub c_hat: f64,
    /// Sample attaining `c_hat`.
    pub argmax: String,
    pub method: NormMethod,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RdCertificate {
    pub p: f64,
    pub seed: u64,
    pub spec: SampleSpec,
    pub samples: Vec<String>,
    pub levels: Vec<RdLevel>,
    /// `max Ĉ_n / min Ĉ_n`.
    pub uniformity_ratio: f64,
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn build_samples<G: Group>(
    base: &G,
    spec: &SampleSpec,
    seed: u64,
) -> Result<Vec<(String, AlgebraElement<G::Elem>)>> {
    let mut out = Vec::new();
    let rmax = spec.radii.iter().copied().max();
    let ball = match rmax {
        Some(r) => Some(enumerate_ball(base, r, DEFAULT_BALL_CAP)?),
        None => None,
    };
    let one = Complex64::new(1.0, 0.0);
    if let Some(ball) = &ball {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for &r in &spec.radii {
            for k in 0..spec.per_radius {
                let terms = ball
                    .elements()
                    .iter()
                    .zip(ball.lengths())
                    .filter(|(_, &l)| l <= r)
                    .map(|(g, _)| (g.clone(), gaussian(&mut rng)));
                out.push((
                    format!("gaussian r={r} #{k}"),
                    AlgebraElement::from_terms(base, terms)?,
                ));
            }
        }
    }
    if spec.presets {
        out.push((
            "delta_e".into(),
            AlgebraElement::delta(base.identity(), one),
        ));
        out.push(("adjacency".into(), AlgebraElement::adjacency(base)?));
        if let Some(ball) = &ball {
            for &r in &spec.radii {
                let sphere = ball.sphere(r).into_iter().map(|g| (g, one));
                out.push((
                    format!("sphere r={r}"),
                    AlgebraElement::from_terms(base, sphere)?,
                ));
            }
        }
    }
    out.retain(|(_, f)| !f.is_empty());
    if out.is_empty() {
        return Err(Error::Empty("RD sample"));
    }
    Ok(out)
}

/// `(‖π(f)‖, method)` for the untwisted regular representation of `f` on a
/// finite quotient.
fn quotient_norm<G, Q>(f: &AlgebraElement<Q::Elem>, q: &Q, seed: u64) -> Result<(f64, NormMethod)>
where
    G: Group,
    Q: QuotientOf<G>,
{
    let rep = regular_rep_on(f, &Trivial, q)?;
    if rep.dim() <= SVD_LIMIT {
        Ok((operator_norm(rep.matrix())?, NormMethod::Svd))
    } else {
        let b = operator_norm_lower_bound(rep.matrix(), NORM_ITERATIONS, seed)?;
        Ok((
            b,
            NormMethod::LanczosLowerBound {
                iterations: NORM_ITERATIONS,
            },
        ))
    }
}

/// `‖π(f)‖ / ‖f‖_{2,p}` on a finite quotient with its quotient word length,
/// for `f` given on the base group. `None` when `f` projects to zero.
pub fn rd_ratio<G, Q>(
    f: &AlgebraElement<G::Elem>,
    q: &Q,
    p: f64,
    seed: u64,
) -> Result<Option<(f64, NormMethod)>>
where
    G: Group,
    Q: QuotientOf<G>,
{
    let pushed = f.push_forward(q)?;
    let length = |g: &Q::Elem| q.quotient_length(g) as f64;
    let weighted = weighted_two_norm(&pushed, &length, p, NormSide::Max)?;
    if weighted == 0.0 {
        return Ok(None);
    }
    let (norm, method) = quotient_norm::<G, Q>(&pushed, q, seed)?;
    Ok(Some((norm / weighted, method)))
}

/// Empirical rapid-decay constants `Ĉ_n` on each quotient.
///
/// Samples live on the base group and are pushed to each quotient. Norms
/// are exact singular values on small quotients and Lanczos lower bounds
/// on large ones, so `Ĉ_n` never overestimates the sampled maximum.
pub fn rd_certificate<G, Q>(
    base: &G,
    quotients: &[Q],
    p: f64,
    spec: &SampleSpec,
    seed: u64,
) -> Result<RdCertificate>
where
    G: Group,
    Q: QuotientOf<G>,
{
    if quotients.is_empty() {
        return Err(Error::Empty("quotient list"));
    }
    let samples = build_samples(base, spec, seed)?;
    let mut levels = Vec::with_capacity(quotients.len());
    for (index, q) in quotients.iter().enumerate() {
        let ratios: Vec<Result<Option<(f64, NormMethod)>>> = samples
            .par_iter()
            .map(|(_, f)| rd_ratio(f, q, p, seed))
            .collect();
        let mut best: Option<(f64, usize, NormMethod)> = None;
        for (k, r) in ratios.into_iter().enumerate() {
            if let Some((c, m)) = r? {
                if best.is_none_or(|(b, _, _)| c > b) {
                    best = Some((c, k, m));
                }
            }
        }
        let (c_hat, k, method) = best.ok_or(Error::Empty("sample after projection"))?;
        levels.push(RdLevel {
            label: FiberLabel::Level {
                index,
                modulus: q.level_info().modulus,
            },
            dim: q.size(),
            c_hat,
            argmax: samples[k].0.clone(),
            method,
        });
    }
    let max = levels
        .iter()
        .map(|l| l.c_hat)
        .fold(f64::NEG_INFINITY, f64::max);
    let min = levels.iter().map(|l| l.c_hat).fold(f64::INFINITY, f64::min);
    Ok(RdCertificate {
        p,
        seed,
        spec: spec.clone(),
        samples: samples.into_iter().map(|(name, _)| name).collect(),
        uniformity_ratio: if min > 0.0 { max / min } else { f64::INFINITY },
        levels,
    })
}

/// Parses a level list: `"4,8,16"` or a doubling range `"4..64"`, which
/// means `4, 8, 16, 32, 64`.
pub fn parse_levels(text: &str) -> Result<Vec<u64>> {
    let bad = || Error::Parse(format!("bad level list `{text}`"));
    if let Some((a, b)) = text.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        if a == 0 || b < a {
            return Err(bad());
        }
        let mut out = vec![a];
        while out[out.len() - 1] * 2 <= b {
            out.push(out[out.len() - 1] * 2);
        }
        return Ok(out);
    }
    let out: Vec<u64> = text
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    if out.is_empty() || out.contains(&0) {
        return Err(bad());
    }
    Ok(out)
}

/// Sparsity pattern of the compression to a ball of an element with a fixed
/// support: entry `(γ, η)` for every `s` in the support with `γ = sη` in the
/// ball. Coefficients are supplied separately, so one pattern serves many
/// elements with the same support.
#[derive(Debug, Clone)]
pub struct CompressionPattern {
    dim: usize,
    rows: Vec<u32>,
    cols: Vec<u32>,
    terms: Vec<u32>,
}

impl CompressionPattern {
    /// `within(s, η)` may return `false` for products known to leave the
    /// ball, which skips the hash lookup.
    pub fn build<G, W>(group: &G, ball: &Ball<G>, support: &[G::Elem], within: W) -> Result<Self>
    where
        G: Group,
        W: Fn(&G::Elem, &G::Elem) -> bool + Sync,
    {
        let n = ball.len();
        if n > u32::MAX as usize || support.len() > u32::MAX as usize {
            return Err(Error::DimensionCap {
                dim: n,
                cap: u32::MAX as usize,
                what: "compression pattern",
            });
        }
        let elems = ball.elements();
        let chunks: Vec<Result<(Vec<u32>, Vec<u32>, Vec<u32>)>> = (0..n)
            .into_par_iter()
            .chunks(4096)
            .map(|cols| {
                let (mut r, mut c, mut t) = (Vec::new(), Vec::new(), Vec::new());
                for j in cols {
                    let eta = &elems[j];
                    for (k, s) in support.iter().enumerate() {
                        if !within(s, eta) {
                            continue;
                        }
                        if let Some(i) = ball.try_position(&group.multiply(s, eta))? {
                            r.push(i as u32);
                            c.push(j as u32);
                            t.push(k as u32);
                        }
                    }
                }
                Ok((r, c, t))
            })
            .collect();
        let mut pattern = CompressionPattern {
            dim: n,
            rows: Vec::new(),
            cols: Vec::new(),
            terms: Vec::new(),
        };
        for chunk in chunks {
            let (r, c, t) = chunk?;
            pattern.rows.extend(r);
            pattern.cols.extend(c);
            pattern.terms.extend(t);
        }
        Ok(pattern)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.rows.len()
    }

    /// The untwisted compression with the given coefficients, indexed like
    /// the support.
    pub fn operator<'a>(&'a self, coefficients: &'a [Complex64]) -> PatternOperator<'a> {
        PatternOperator {
            pattern: self,
            coefficients,
        }
    }
}

/// Matrix-free compression operator over a [`CompressionPattern`].
pub struct PatternOperator<'a> {
    pattern: &'a CompressionPattern,
    coefficients: &'a [Complex64],
}

impl LinearOperator for PatternOperator<'_> {
    fn dim(&self) -> usize {
        self.pattern.dim
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        y.fill(Complex64::new(0.0, 0.0));
        let p = self.pattern;
        for e in 0..p.rows.len() {
            y[p.rows[e] as usize] += self.coefficients[p.terms[e] as usize] * x[p.cols[e] as usize];
        }
    }
}

impl AdjointOperator for PatternOperator<'_> {
    fn apply_adjoint(&self, x: &[Complex64], y: &mut [Complex64]) {
        y.fill(Complex64::new(0.0, 0.0));
        let p = self.pattern;
        for e in 0..p.rows.len() {
            y[p.cols[e] as usize] +=
                self.coefficients[p.terms[e] as usize].conj() * x[p.rows[e] as usize];
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HaagerupSample {
    pub n: usize,
    pub index: usize,
    /// `‖f‖_{2,0}`, the plain ℓ² norm of the coefficients.
    pub l2_norm: f64,
    /// Lanczos lower bound on the compressed operator norm.
    pub norm_lower_bound: f64,
    /// `(n + 1) ‖f‖_{2,0}`.
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HaagerupReport {
    pub radius: usize,
    pub ball_size: usize,
    pub iterations: usize,
    pub seed: u64,
    pub samples: Vec<HaagerupSample>,
    pub pass: bool,
}

/// Checks `‖λ(f)‖ <= (n + 1) ‖f‖₂` on `F_2` for Gaussian `f` supported on
/// the sphere `S_n`, `1 <= n <= max_n`, with `per_n` draws each. The
/// operator norm is bounded from below by Lanczos on the compression to the
/// ball of the given radius; the compression norm never exceeds the full
/// norm, so a violation would refute the bound.
pub fn haagerup_check(
    max_n: usize,
    per_n: usize,
    radius: usize,
    ball_cap: usize,
    iterations: usize,
    seed: u64,
) -> Result<HaagerupReport> {
    if max_n == 0 || per_n == 0 {
        return Err(Error::Empty("Haagerup sample"));
    }
    let f2 = make_free_group(2)?;
    let ball = enumerate_ball(&f2, radius, ball_cap)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(max_n * per_n);
    for n in 1..=max_n {
        let sphere = f2.sphere(n);
        let pattern = CompressionPattern::build(&f2, &ball, &sphere, |s, eta| {
            f2.product_length(s, eta) <= radius
        })?;
        log::info!(
            "sphere {n}: {} words, pattern nnz {}",
            sphere.len(),
            pattern.nnz()
        );
        for index in 0..per_n {
            let coeffs: Vec<Complex64> = sphere.iter().map(|_| gaussian(&mut rng)).collect();
            let l2_norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            let lower = operator_norm_lower_bound(
                &pattern.operator(&coeffs),
                iterations,
                seed ^ (n * 1000 + index) as u64,
            )?;
            let bound = (n + 1) as f64 * l2_norm;
            samples.push(HaagerupSample {
                n,
                index,
                l2_norm,
                norm_lower_bound: lower,
                bound,
                pass: lower <= bound + 1e-9,
            });
        }
    }
    Ok(HaagerupReport {
        radius,
        ball_size: ball.len(),
        iterations,
        seed,
        pass: samples.iter().all(|s| s.pass),
        samples,
    })
}
