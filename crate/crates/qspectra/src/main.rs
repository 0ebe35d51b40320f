use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use qspectra::bai::{bai_rhs, make_constants};
use qspectra::error::Error;
use qspectra::experiments::{
    lambda_max_check, lambda_max_csv, rate_csv, rate_sweep, reflection_check, variance_csv,
    variance_scaling, ExperimentConfig,
};
use qspectra::mp_law::{MPLaw, UpperHalfPoint};
use qspectra::sampling::{sample_covariance, sample_matrix, EntryDistribution};
use qspectra::spectra::{eigenvalues_hermitian, esd};

#[derive(Parser)]
#[command(name = "qspectra", version, about = "Quaternion sample covariance spectral experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo rate sweep over the n grid (CSV + JSON summary)
    RateSweep(ConfigArgs),
    /// Sample variance of the empirical Stieltjes transform across replications
    Variance {
        #[command(flatten)]
        config: ConfigArgs,
        /// real part of z
        #[arg(long, default_value_t = 0.0)]
        zu: f64,
        /// imaginary part of z
        #[arg(long, default_value_t = 1.0)]
        zv: f64,
    },
    /// Largest-eigenvalue exceedance counts above the support edge plus margin
    LambdaMax {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, default_value_t = 0.3)]
        margin: f64,
    },
    /// Reflection identity check for p > n
    Reflection {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_distribution, default_value = "q_gaussian")]
        distribution: EntryDistribution,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Bai inequality report for a single sampled covariance
    BaiBound {
        #[arg(long)]
        y: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// imaginary offset; defaults to n^{-2/5}
        #[arg(long)]
        v: Option<f64>,
        #[arg(long, value_parser = parse_distribution, default_value = "q_gaussian")]
        distribution: EntryDistribution,
    },
    /// Evaluate the M-P density / cdf / Stieltjes transform at a point
    MpEval {
        #[arg(long)]
        y: f64,
        /// evaluation point on the real line (density and cdf)
        #[arg(long)]
        x: Option<f64>,
        /// real part of z for the Stieltjes transform
        #[arg(long)]
        zu: Option<f64>,
        /// imaginary part of z for the Stieltjes transform
        #[arg(long)]
        zv: Option<f64>,
    },
}

#[derive(Args)]
struct ConfigArgs {
    /// JSON config: {"distribution", "y", "n_grid", "replications", "seed", "v", "out"}
    #[arg(long)]
    config: PathBuf,
}

fn parse_distribution(s: &str) -> Result<EntryDistribution, String> {
    match s {
        "q_gaussian" => Ok(EntryDistribution::QGaussian),
        "q_rademacher" => Ok(EntryDistribution::QRademacher),
        "q_bounded_mix" => Ok(EntryDistribution::QBoundedMix),
        other => Err(format!("unknown distribution '{other}'")),
    }
}

fn load_config(args: &ConfigArgs) -> Result<ExperimentConfig, Error> {
    let text = fs::read_to_string(&args.config)?;
    let cfg: ExperimentConfig = serde_json::from_str(&text)?;
    cfg.validate()?;
    Ok(cfg)
}

/// CSV goes to `out` (or stdout); the JSON summary sits next to it.
fn emit(cfg_echo: serde_json::Value, out: Option<&str>, csv: &str, phases: serde_json::Value) -> Result<(), Error> {
    match out {
        Some(path) => {
            fs::write(path, csv)?;
            let summary = json!({
                "config": cfg_echo,
                "version": env!("CARGO_PKG_VERSION"),
                "phases_seconds": phases,
            });
            fs::write(format!("{path}.summary.json"), serde_json::to_string_pretty(&summary)?)?;
        }
        None => {
            print!("{csv}");
            eprintln!("summary: {}", json!({"config": cfg_echo, "version": env!("CARGO_PKG_VERSION"), "phases_seconds": phases}));
        }
    }
    Ok(())
}

fn run() -> Result<(), Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::RateSweep(args) => {
            let cfg = load_config(&args)?;
            let t0 = Instant::now();
            let report = rate_sweep(&cfg)?;
            let sweep_s = t0.elapsed().as_secs_f64();
            let csv = rate_csv(&report);
            emit(
                serde_json::to_value(&cfg)?,
                cfg.out.as_deref(),
                &csv,
                json!({"sweep": sweep_s}),
            )?;
            eprintln!(
                "slope_mean={} slope_pooled={}",
                report.slope_mean, report.slope_pooled
            );
        }
        Command::Variance { config, zu, zv } => {
            let cfg = load_config(&config)?;
            let z = UpperHalfPoint::new(zu, zv)?;
            let t0 = Instant::now();
            let report = variance_scaling(&cfg, z)?;
            let csv = variance_csv(&report);
            emit(
                serde_json::to_value(&cfg)?,
                cfg.out.as_deref(),
                &csv,
                json!({"variance": t0.elapsed().as_secs_f64()}),
            )?;
            eprintln!(
                "slope_re={} slope_im={} low_confidence={}",
                report.slope_re, report.slope_im, report.low_confidence
            );
        }
        Command::LambdaMax { config, margin } => {
            let cfg = load_config(&config)?;
            let t0 = Instant::now();
            let rows = lambda_max_check(&cfg, margin)?;
            let csv = lambda_max_csv(&rows);
            emit(
                serde_json::to_value(&cfg)?,
                cfg.out.as_deref(),
                &csv,
                json!({"lambda_max": t0.elapsed().as_secs_f64()}),
            )?;
        }
        Command::Reflection { p, n, distribution, seed } => {
            if p <= n {
                return Err(Error::Config(format!("reflection requires p > n, got p={p}, n={n}")));
            }
            let x = sample_matrix(p, n, distribution, seed)?;
            let report = reflection_check(&x)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::BaiBound { y, n, seed, v, distribution } => {
            let p = (y * n as f64).round() as usize;
            if p < 1 {
                return Err(Error::Config(format!("p = round(y*n) < 1 for y={y}, n={n}")));
            }
            let y_p = p as f64 / n as f64;
            let law = MPLaw::new(y_p)?;
            let v = v.unwrap_or_else(|| (n as f64).powf(-0.4));
            let x = sample_matrix(p, n, distribution, seed)?;
            let s = sample_covariance(&x);
            let spectrum = eigenvalues_hermitian(&s, 1e-10)?;
            let f = esd(&spectrum)?;
            let consts = make_constants(law.support_upper());
            let report = bai_rhs(&f, &law, v, &consts)?;
            println!("{}", serde_json::to_string_pretty(&json!({
                "y_p": y_p, "n": n, "p": p, "v": v, "seed": seed,
                "term_stieltjes": report.term_stieltjes,
                "term_tail": report.term_tail,
                "term_smoothing": report.term_smoothing,
                "prefactor": report.prefactor,
                "total": report.total,
                "observed_ks": report.observed_ks,
                "holds": report.observed_ks <= report.total,
            }))?);
        }
        Command::MpEval { y, x, zu, zv } => {
            let law = MPLaw::new(y)?;
            let mut out = serde_json::Map::new();
            out.insert("y".into(), json!(y));
            out.insert("support".into(), json!([law.support_lower(), law.support_upper()]));
            out.insert("atom".into(), json!(law.atom()));
            if let Some(x) = x {
                out.insert("x".into(), json!(x));
                out.insert("density".into(), json!(law.density(x)));
                out.insert("cdf".into(), json!(law.cdf(x)?));
            }
            if let (Some(u), Some(v)) = (zu, zv) {
                let s = law.stieltjes(UpperHalfPoint::new(u, v)?)?;
                out.insert("stieltjes".into(), json!([s.re, s.im]));
            }
            println!("{}", serde_json::to_string_pretty(&serde_json::Value::Object(out))?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Config(_) | Error::InvalidParameter(_) | Error::Io(_) | Error::Json(_) => 1,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}
