//! `spectral-fields`: command-line driver for the experiment pipelines.
//!
//! Every run writes its outputs and a `manifest.json` into `--out`. Exit
//! codes: 0 on success, 2 on invalid arguments or specifications, 3 on
//! numerical failure or a failed check.

mod args;
mod cache;
mod commands;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use spectral_fields::fields::RunManifest;
use spectral_fields::{Error, Result, DEFAULT_SEED};

use args::{Command, ReplayArgs};
use output::{compare_files, sig, Ctx};

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "spectral-fields",
    version,
    about = "Spectra of twisted group algebra elements on finite quotients and ball compressions",
    after_help = "Environment:\n  SPECTRAL_FIELDS_CACHE  directory for memoized octagon area tables\n  RUST_LOG               log filter (default: warn)\n\nExit codes: 0 success, 2 invalid arguments, 3 numerical failure or failed check"
)]
struct Cli {
    /// Worker threads for per-fiber parallelism [default: available parallelism]
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for every randomized step
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output directory, created if missing
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

fn execute(command: &Command, ctx: &mut Ctx) -> Result<bool> {
    match command {
        Command::Spectrum(a) => commands::spectrum(a, ctx),
        Command::Butterfly(a) => commands::butterfly(a, ctx),
        Command::Hls(a) => commands::hls(a, ctx),
        Command::RdCertify(a) => commands::rd_certify(a, ctx),
        Command::Haagerup(a) => commands::haagerup(a, ctx),
        Command::CocycleCheck(a) => commands::cocycle_check(a, ctx),
        Command::Replay(a) => replay(a),
    }
}

/// Runs a subcommand into `out` and writes its manifest there.
fn run_recorded(command: &Command, seed: u64, out: &Path) -> Result<bool> {
    let start = Instant::now();
    let mut ctx = Ctx::new(seed, out.to_path_buf())?;
    let pass = execute(command, &mut ctx)?;
    let mut manifest = RunManifest::new(command.name(), command.params()?, seed);
    manifest.inputs = ctx.inputs;
    manifest.outputs = ctx.outputs;
    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    let path = out.join("manifest.json");
    manifest.write(&path)?;
    log::info!("manifest written to {}", path.display());
    Ok(pass)
}

fn replay(a: &ReplayArgs) -> Result<bool> {
    let manifest = RunManifest::read(&a.manifest).map_err(|e| {
        Error::Parse(format!(
            "cannot read manifest {}: {e}",
            a.manifest.display()
        ))
    })?;
    let command = Command::from_params(&manifest.subcommand, manifest.params.clone())?;
    let into = match &a.into {
        Some(p) => p.clone(),
        None => a
            .manifest
            .parent()
            .unwrap_or_else(|| Path::new("."))
            .join("replay"),
    };
    let originals: Vec<PathBuf> = manifest
        .outputs
        .iter()
        .map(|p| {
            let name = p
                .file_name()
                .ok_or_else(|| Error::Parse(format!("bad output path {}", p.display())))?;
            Ok(a.manifest
                .parent()
                .unwrap_or_else(|| Path::new("."))
                .join(name))
        })
        .collect::<Result<_>>()?;
    run_recorded(&command, manifest.seed, &into)?;

    let mut all = true;
    for original in &originals {
        let fresh = into.join(original.file_name().unwrap_or_default());
        let verdict = match compare_files(original, &fresh)? {
            Some(d) if d <= a.tol => format!("match (max relative deviation {})", sig(d)),
            Some(d) => {
                all = false;
                format!(
                    "MISMATCH (max relative deviation {} > {})",
                    sig(d),
                    sig(a.tol)
                )
            }
            None => {
                all = false;
                "MISMATCH (structure differs)".into()
            }
        };
        println!("{}: {verdict}", original.display());
    }
    println!(
        "replay of `{}`: {}",
        manifest.subcommand,
        if all { "reproduced" } else { "differs" }
    );
    Ok(all)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            log::warn!("could not size the thread pool: {e}");
        }
    }
    let outcome = match &cli.command {
        Command::Replay(a) => replay(a),
        command => run_recorded(command, cli.seed, &cli.out),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: check failed");
            ExitCode::from(EXIT_NUMERIC)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() {
                EXIT_USAGE
            } else {
                EXIT_NUMERIC
            })
        }
    }
}
