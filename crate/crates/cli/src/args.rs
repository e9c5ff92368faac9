//! Command-line arguments. Every subcommand's arguments serialize to the
//! parameter map of its run manifest and deserialize again for replay.

use std::path::PathBuf;

use clap::{ArgGroup, Args, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use spectral_fields::cocycles::Flux;
use spectral_fields::fields::{DEFAULT_FAREY_ORDER, DEFAULT_THETA_POINTS};
use spectral_fields::groups::DEFAULT_BALL_CAP;

fn parse_flux(s: &str) -> Result<Flux, String> {
    s.parse().map_err(|e: spectral_fields::Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupName {
    /// The integers, generated by ±1
    Z1,
    /// The square lattice, generated by ±e1, ±e2
    Z2,
    /// The free group on two generators (Sanov matrices)
    #[value(alias = "sanov")]
    F2,
    /// Genus-two surface group acting on the Poincaré disk
    Octagon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CocycleName {
    /// No twist
    Trivial,
    /// Magnetic phase on Z2; descends to (Z/N)^2 for flux p/q with q | N
    Heisenberg,
    /// Hyperbolic area phase on the octagon group
    Area,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct TwistArgs {
    /// Cocycle family
    #[arg(long, value_enum, default_value_t = CocycleName::Trivial)]
    pub cocycle: CocycleName,
    /// Field strength θ in radians per unit area (heisenberg on Z2 balls,
    /// area on octagon balls)
    #[arg(long, conflicts_with = "flux", allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Rational flux p/q, i.e. θ = 2πp/q (required for heisenberg on a torus
    /// quotient)
    #[arg(long, value_parser = parse_flux)]
    pub flux: Option<Flux>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[command(group(ArgGroup::new("backend").required(true).args(["quotient", "sanov", "radius"])))]
pub struct SpectrumArgs {
    /// Group backend
    #[arg(long, value_enum)]
    pub group: GroupName,
    /// Torus side N for z1/z2: the spectrum on (Z/N)^d
    #[arg(long)]
    pub quotient: Option<u64>,
    /// Congruence modulus m for f2: the spectrum on the Sanov image in
    /// SL(2, Z/m)
    #[arg(long)]
    pub sanov: Option<u64>,
    /// Compression to the word-length ball of radius R on the infinite group
    #[arg(long)]
    pub radius: Option<usize>,
    /// Element: `adjacency`, `laplacian`, or a JSON file of {word, re, im}
    /// records
    #[arg(long)]
    pub element: String,
    #[command(flatten)]
    #[serde(flatten)]
    pub twist: TwistArgs,
    /// Maximum number of ball elements (elements, not radius)
    #[arg(long, default_value_t = DEFAULT_BALL_CAP)]
    pub ball_cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ButterflyGroup {
    /// Rational fluxes on (Z/N)^2 tori
    Z2,
    /// θ grid on an octagon ball compression with the area cocycle
    Octagon,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ButterflyArgs {
    /// Group backend
    #[arg(long, value_enum)]
    pub group: ButterflyGroup,
    /// Element: `adjacency`, `laplacian`, or a JSON file of {word, re, im}
    /// records
    #[arg(long, default_value = "adjacency")]
    pub element: String,
    /// z2: Farey order; fluxes are all p/q in [0, 1] with q <= order
    #[arg(long, default_value_t = DEFAULT_FAREY_ORDER)]
    pub farey_order: u64,
    /// z2: minimal torus side; flux p/q uses N = q·ceil(n_min/q)
    #[arg(long, default_value_t = 24)]
    pub n_min: u64,
    /// z2: fixed torus side N for all fluxes; fluxes with q ∤ N are skipped
    #[arg(long)]
    pub size: Option<u64>,
    /// octagon: number of θ points, both endpoints included
    #[arg(long, default_value_t = DEFAULT_THETA_POINTS)]
    pub theta_points: usize,
    /// octagon: first θ in radians
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta_min: f64,
    /// octagon: last θ in radians [default: 2π]
    #[arg(long, allow_negative_numbers = true)]
    pub theta_max: Option<f64>,
    /// octagon: compression ball radius (word length)
    #[arg(long, default_value_t = 3)]
    pub radius: usize,
    /// Also write butterfly.svg, a scatter of (θ or flux, eigenvalue)
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LimitName {
    /// No limit spectrum; only consecutive distances are reported
    None,
    /// Kesten interval [-2√3, 2√3] of the F2 adjacency operator
    Kesten,
    /// A given interval (--interval), default [-2d, 2d] on Z^d
    Interval,
    /// Spectrum of the compression to a ball (--limit-radius), an estimate
    Compression,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainGroup {
    Z1,
    Z2,
    #[value(alias = "sanov")]
    F2,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct HlsArgs {
    /// Group whose quotient chain is used
    #[arg(long, value_enum)]
    pub group: ChainGroup,
    /// Chain moduli, each dividing the next: `2,4,8` or `2..16` (doubling)
    #[arg(long)]
    pub levels: String,
    /// Element: `adjacency`, `laplacian`, or a JSON file of {word, re, im}
    /// records
    #[arg(long)]
    pub element: String,
    /// Limit spectrum the levels are compared with
    #[arg(long, value_enum, default_value_t = LimitName::None)]
    pub limit: LimitName,
    /// Limit interval endpoints LO,HI (dimensionless spectral values)
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub interval: Option<Vec<f64>>,
    /// Ball radius for --limit compression (word length)
    #[arg(long, default_value_t = 5)]
    pub limit_radius: usize,
    /// z2 only: twist every level by the descended Heisenberg cocycle of
    /// flux p/q (q must divide every modulus)
    #[arg(long, value_parser = parse_flux)]
    pub flux: Option<Flux>,
    /// Semicontinuity probe: bump CENTER,INNER,OUTER (equal to 1 within
    /// INNER of CENTER, 0 beyond OUTER); needs a limit
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub probe: Option<Vec<f64>>,
    /// Maximum number of ball elements for --limit compression
    #[arg(long, default_value_t = DEFAULT_BALL_CAP)]
    pub ball_cap: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct RdArgs {
    /// Group whose quotients are certified
    #[arg(long, value_enum)]
    pub group: ChainGroup,
    /// Length exponent p of the weighted norm ‖f‖_{2,p}
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Quotient moduli: `4,8,16` or `4..64` (doubling)
    #[arg(long)]
    pub levels: String,
    /// Radii (word length) of the balls carrying Gaussian samples
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub radii: Vec<usize>,
    /// Gaussian samples per radius
    #[arg(long, default_value_t = 8)]
    pub per_radius: usize,
    /// Leave out δ_e, the adjacency element and the sphere indicators
    #[arg(long)]
    pub no_presets: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct HaagerupArgs {
    /// Largest sphere radius n (word length)
    #[arg(long, default_value_t = 5)]
    pub max_n: usize,
    /// Random sphere-supported elements per radius
    #[arg(long, default_value_t = 4)]
    pub per_n: usize,
    /// Compression ball radius (word length)
    #[arg(long, default_value_t = 12)]
    pub radius: usize,
    /// Maximum number of ball elements
    #[arg(long, default_value_t = 1_200_000)]
    pub ball_cap: usize,
    /// Lanczos steps per norm bound
    #[arg(long, default_value_t = 40)]
    pub iterations: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct CocycleCheckArgs {
    /// Group backend
    #[arg(long, value_enum)]
    pub group: GroupName,
    /// Cocycle family
    #[arg(long, value_enum)]
    pub cocycle: CocycleName,
    /// Field strength θ in radians per unit area
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub theta: f64,
    /// Random triples drawn from the ball
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Radius (word length) of the ball the triples are drawn from
    #[arg(long, default_value_t = 3)]
    pub radius: usize,
    /// Largest admissible residual (absolute, dimensionless)
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Maximum number of ball elements
    #[arg(long, default_value_t = DEFAULT_BALL_CAP)]
    pub ball_cap: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    /// Manifest written by an earlier run
    pub manifest: PathBuf,
    /// Directory for the replayed outputs [default: <manifest dir>/replay]
    #[arg(long)]
    pub into: Option<PathBuf>,
    /// Largest admissible relative deviation per number, max(1, |x|) scaled
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Spectrum of one element on a finite quotient or a ball compression;
    /// writes spectrum.json and eigenvalues.csv
    Spectrum(SpectrumArgs),
    /// Spectra over a flux or θ sweep; writes butterfly.csv and
    /// experiment.json (and butterfly.svg with --svg)
    Butterfly(ButterflyArgs),
    /// Spectra along a quotient chain compared with a limit spectrum;
    /// writes hls.json
    Hls(HlsArgs),
    /// Empirical rapid-decay constants over quotients; writes rd.json
    RdCertify(RdArgs),
    /// Sphere-supported norm bound on F2 via ball compressions; writes
    /// haagerup.json
    Haagerup(HaagerupArgs),
    /// Cocycle identity on random triples; writes cocycle.json
    CocycleCheck(CocycleCheckArgs),
    /// Re-runs a manifest and compares every output file
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::Butterfly(_) => "butterfly",
            Command::Hls(_) => "hls",
            Command::RdCertify(_) => "rd-certify",
            Command::Haagerup(_) => "haagerup",
            Command::CocycleCheck(_) => "cocycle-check",
            Command::Replay(_) => "replay",
        }
    }

    pub fn params(&self) -> serde_json::Result<serde_json::Value> {
        match self {
            Command::Spectrum(a) => serde_json::to_value(a),
            Command::Butterfly(a) => serde_json::to_value(a),
            Command::Hls(a) => serde_json::to_value(a),
            Command::RdCertify(a) => serde_json::to_value(a),
            Command::Haagerup(a) => serde_json::to_value(a),
            Command::CocycleCheck(a) => serde_json::to_value(a),
            Command::Replay(a) => serde_json::to_value(a),
        }
    }

    pub fn from_params(name: &str, params: serde_json::Value) -> spectral_fields::Result<Self> {
        use serde_json::from_value as v;
        Ok(match name {
            "spectrum" => Command::Spectrum(v(params)?),
            "butterfly" => Command::Butterfly(v(params)?),
            "hls" => Command::Hls(v(params)?),
            "rd-certify" => Command::RdCertify(v(params)?),
            "haagerup" => Command::Haagerup(v(params)?),
            "cocycle-check" => Command::CocycleCheck(v(params)?),
            other => {
                return Err(spectral_fields::Error::Parse(format!(
                    "manifest subcommand `{other}` cannot be replayed"
                )))
            }
        })
    }
}
