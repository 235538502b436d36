//! Batch driver: run verification suites and experiments from flags or a
//! flat JSON config, emitting JSON reports and CSV tables.

mod config;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use config::RunConfig;
use gaussint::analysis::{
    estimate_operator_norm, estimate_weak11, report::ExperimentReport, single_term_crosscheck,
    spectral_suite, verify_global_domination, verify_lemma21, verify_lemma22, verify_local_claim,
    GaussianBump,
};
use gaussint::kernels::{orthogonality_check, write_kernel_dump, KernelSpec};
use gaussint::riesz::calibrate_cbeta;
use gaussint::{HermiteExpansion, MultiIndex, QuadratureConfig};

/// Deterministic default seed; experiments never key off the clock.
const DEFAULT_SEED: u64 = 77;

#[derive(Parser)]
#[command(
    name = "gaussint",
    about = "Verification suites and experiments for Gaussian singular integral operators"
)]
struct Cli {
    /// Flat JSON config file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,

    #[command(flatten)]
    flags: FlagSet,
}

#[derive(Args, Clone, Default)]
struct FlagSet {
    /// Dimension.
    #[arg(long, global = true)]
    d: Option<usize>,
    /// Kernel order m.
    #[arg(long, global = true)]
    m: Option<u32>,
    /// Profile preset: hermite:B (e.g. hermite:1,1) or custom:NU=C;NU=C.
    #[arg(long = "F", global = true)]
    profile: Option<String>,
    /// Multi-index for calibrate, e.g. 1 or 1,1.
    #[arg(long, global = true)]
    beta: Option<String>,
    /// Lebesgue exponents (repeatable).
    #[arg(long, global = true)]
    p: Option<Vec<f64>>,
    /// Largest expansion degree for norms.
    #[arg(long, global = true)]
    degree: Option<u32>,
    /// Trials per degree for norms.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Sample count for sampled experiments.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// RNG seed (fixed default; never time-based).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (env GAUSS_SING_THREADS as fallback).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Quadrature tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<String>,
    /// The admissible-ball constant C_d.
    #[arg(long, global = true)]
    cd: Option<f64>,
    /// Bump scales for weak11 (repeatable).
    #[arg(long, global = true)]
    bump_scales: Option<Vec<f64>>,
    /// Explicit level grid for weak11 (repeatable).
    #[arg(long, global = true)]
    lambda_grid: Option<Vec<f64>>,
    /// Grid side length for kernel-dump.
    #[arg(long, global = true)]
    grid: Option<usize>,
}

#[derive(Subcommand, Clone)]
enum Command {
    /// Profile bounds, cross-section estimate, local claim, and the exact
    /// spectral identity suite.
    Verify,
    /// Operator norm ratios over a p x degree grid.
    Norms,
    /// Weak (1,1) statistic and the maximal-function domination.
    Weak11,
    /// CSV table of kernel values over a point grid.
    KernelDump,
    /// Fit the scalar in front of the Hermite-profile kernel.
    Calibrate,
}

enum CliError {
    /// Invalid configuration: exit status 2.
    Invalid(String),
    /// Numerical failure or failed thresholds: exit status 3.
    Numerical(String),
}

impl CliError {
    fn invalid(msg: impl Into<String>) -> Self {
        CliError::Invalid(msg.into())
    }
    fn numerical(msg: impl Into<String>) -> Self {
        CliError::Numerical(msg.into())
    }
}

impl From<gaussint::Error> for CliError {
    fn from(e: gaussint::Error) -> Self {
        match e {
            gaussint::Error::InvalidConfig(msg) => CliError::Invalid(msg),
            cap @ gaussint::Error::DegreeCapExceeded { .. } => CliError::Invalid(cap.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

fn flags_to_config(flags: &FlagSet, command: Option<&Command>) -> RunConfig {
    RunConfig {
        command: command.map(|c| {
            match c {
                Command::Verify => "verify",
                Command::Norms => "norms",
                Command::Weak11 => "weak11",
                Command::KernelDump => "kernel-dump",
                Command::Calibrate => "calibrate",
            }
            .to_string()
        }),
        d: flags.d,
        m: flags.m,
        profile: flags.profile.clone(),
        beta: flags.beta.clone(),
        p: flags.p.clone(),
        degree: flags.degree,
        trials: flags.trials,
        samples: flags.samples,
        seed: flags.seed,
        threads: flags.threads,
        tol: flags.tol,
        out: flags.out.clone(),
        cd: flags.cd,
        bump_scales: flags.bump_scales.clone(),
        lambda_grid: flags.lambda_grid.clone(),
        grid: flags.grid,
    }
}

fn parse_multi_index(text: &str, what: &str) -> Result<MultiIndex, CliError> {
    let entries: Result<Vec<u32>, _> = text.split(',').map(|s| s.trim().parse::<u32>()).collect();
    match entries {
        Ok(e) if !e.is_empty() => Ok(MultiIndex::new(e)),
        _ => Err(CliError::invalid(format!(
            "field {what}: expected comma-separated non-negative integers, got '{text}'"
        ))),
    }
}

/// Resolve the `--F` preset into an admissible kernel profile.
///
/// `hermite:B` profiles carry the calibrated scalar so the integral
/// operator matches the spectral transform; `custom:NU=C;...` profiles are
/// finite Hermite expansions.
fn resolve_profile(cfg: &RunConfig, quad: &QuadratureConfig) -> Result<KernelSpec, CliError> {
    let d = cfg.d.unwrap_or(2);
    let text = cfg
        .profile
        .as_deref()
        .ok_or_else(|| CliError::invalid("field F: profile preset is required"))?;

    let spec = if let Some(rest) = text.strip_prefix("hermite:") {
        let beta = parse_multi_index(rest, "F")?;
        if beta.dimension() != d {
            return Err(CliError::invalid(format!(
                "field F: preset dimension {} does not match --d {}",
                beta.dimension(),
                d
            )));
        }
        let calibration = calibrate_cbeta(&beta, d, quad, 1e-5)?;
        let mut spec = KernelSpec::hermite(d, &beta, calibration.c_beta)?;
        if let Some(m) = cfg.m {
            spec = spec.with_order(m);
        }
        spec
    } else if let Some(rest) = text.strip_prefix("custom:") {
        let mut expansion = HermiteExpansion::zero(d);
        for piece in rest.split(';') {
            let (nu_text, c_text) = piece.split_once('=').ok_or_else(|| {
                CliError::invalid(format!("field F: expected NU=C in custom piece '{piece}'"))
            })?;
            let nu = parse_multi_index(nu_text, "F")?;
            let c: f64 = c_text.trim().parse().map_err(|_| {
                CliError::invalid(format!("field F: bad coefficient '{c_text}'"))
            })?;
            expansion
                .add_term(nu, c)
                .map_err(|e| CliError::invalid(format!("field F: {e}")))?;
        }
        let m = cfg
            .m
            .ok_or_else(|| CliError::invalid("field m: required for custom profiles"))?;
        KernelSpec::from_expansion(&expansion, m, format!("custom:{rest}"))?
    } else {
        return Err(CliError::invalid(format!(
            "field F: unknown preset '{text}' (expected hermite:... or custom:...)"
        )));
    };

    let mean = orthogonality_check(&spec, quad)?;
    if mean.abs() > 1e-8 {
        return Err(CliError::invalid(format!(
            "field F: profile is not mean-zero against the Gaussian measure (integral = {mean:.3e})"
        )));
    }
    Ok(spec)
}

#[derive(Serialize)]
struct Bundle<'a> {
    command: &'a str,
    seed: u64,
    timestamp_unix: u64,
    config: &'a RunConfig,
    passed: bool,
    reports: Vec<ExperimentReport>,
}

fn write_outputs(
    out_dir: &Path,
    command: &str,
    seed: u64,
    cfg: &RunConfig,
    reports: Vec<ExperimentReport>,
) -> Result<bool, CliError> {
    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::invalid(format!("cannot create output dir: {e}")))?;
    let passed = reports.iter().all(|r| r.passed);
    let bundle = Bundle {
        command,
        seed,
        timestamp_unix: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        config: cfg,
        passed,
        reports,
    };
    let json = serde_json::to_string_pretty(&bundle)
        .map_err(|e| CliError::numerical(format!("report serialization failed: {e}")))?;
    fs::write(out_dir.join("report.json"), json)
        .map_err(|e| CliError::numerical(format!("cannot write report.json: {e}")))?;

    let mut details = Vec::new();
    {
        let mut w = &mut details;
        for report in &bundle.reports {
            writeln!(w, "# report: {}", report.name)
                .map_err(|e| CliError::numerical(e.to_string()))?;
            report.details_to_csv(&mut w)?;
        }
    }
    fs::write(out_dir.join("details.csv"), details)
        .map_err(|e| CliError::numerical(format!("cannot write details.csv: {e}")))?;

    for report in &bundle.reports {
        let status = if report.passed { "pass" } else { "FAIL" };
        println!(
            "{status}  {name}: statistic {stat:.6e}{thr}",
            name = report.name,
            stat = report.statistic,
            thr = report
                .threshold
                .map(|t| format!(" (threshold {t})"))
                .unwrap_or_default()
        );
    }
    Ok(passed)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::invalid(format!("cannot read config file: {e}")))?;
        cfg = serde_json::from_str(&text)
            .map_err(|e| CliError::invalid(format!("config file: {e}")))?;
    }
    cfg = cfg.overridden_by(flags_to_config(&cli.flags, cli.command.as_ref()));

    let command = cfg
        .command
        .clone()
        .ok_or_else(|| CliError::invalid("field command: no subcommand given"))?;

    let threads = cfg
        .threads
        .or_else(|| {
            std::env::var("GAUSS_SING_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(0);
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::invalid(format!("field threads: {e}")))?;
    }

    let seed = cfg.seed.unwrap_or(DEFAULT_SEED);
    let tol = cfg.tol.unwrap_or(1e-7);
    let quad = QuadratureConfig::default()
        .with_tols(tol.max(1e-12), tol.max(1e-12))
        .with_sphere_nodes(24);
    quad.validate().map_err(CliError::from)?;
    let out_dir = PathBuf::from(cfg.out.clone().unwrap_or_else(|| "gaussint-out".into()));
    let c_d = cfg.cd.unwrap_or(1.0);

    let passed = match command.as_str() {
        "verify" => {
            let spec = resolve_profile(&cfg, &quad)?;
            let d = cfg.d.unwrap_or(2);
            let samples = cfg.samples.unwrap_or(1000);
            let mut reports = vec![spectral_suite(&[1, 2, 3], 6, seed)?];
            reports.push(verify_lemma21(&[1, 2, 3, 4, 5, 6], &[2, 3], 1000)?);
            if d >= 2 {
                reports.push(verify_lemma22(
                    &[0.0, 0.5, 1.0],
                    &[1.0, 2.0],
                    samples,
                    d.min(3),
                    c_d,
                    seed,
                    &quad,
                )?);
            }
            reports.push(verify_local_claim(
                &spec,
                cfg.samples.unwrap_or(200).min(400),
                c_d,
                seed,
                &quad,
            )?);
            write_outputs(&out_dir, "verify", seed, &cfg, reports)?
        }
        "norms" => {
            let d = cfg.d.unwrap_or(1);
            let beta = match &cfg.profile {
                Some(text) if text.starts_with("hermite:") => {
                    parse_multi_index(text.trim_start_matches("hermite:"), "F")?
                }
                _ => MultiIndex::unit(d, 0),
            };
            let degrees: Vec<u32> = (1..=cfg.degree.unwrap_or(8)).collect();
            let trials = cfg.trials.unwrap_or(50);
            let ps = cfg.p.clone().unwrap_or_else(|| vec![1.5, 2.0, 4.0]);
            let mut reports = Vec::new();
            for &p in &ps {
                reports.push(estimate_operator_norm(
                    &beta, d, p, &degrees, trials, seed, &quad,
                )?);
                reports.push(single_term_crosscheck(&beta, d, p, 6, &quad)?);
            }
            write_outputs(&out_dir, "norms", seed, &cfg, reports)?
        }
        "weak11" => {
            let spec = resolve_profile(&cfg, &quad)?;
            let d = spec.dimension();
            let scales = cfg
                .bump_scales
                .clone()
                .unwrap_or_else(|| vec![0.5, 0.25, 0.125]);
            let lambda_grid = cfg.lambda_grid.clone().unwrap_or_default();
            let mut y0 = vec![0.0; d];
            y0[0] = 0.7;
            let weak_quad = QuadratureConfig {
                abs_tol: 1e-6,
                rel_tol: 1e-5,
                sphere_nodes: 16,
                ..quad.clone()
            };
            let mut reports = vec![estimate_weak11(
                &spec,
                &scales,
                &lambda_grid,
                &y0,
                &weak_quad,
            )?];
            if d == 1 {
                let bump = GaussianBump::normalized(y0.clone(), 0.5)?;
                reports.push(verify_global_domination(
                    &spec,
                    0.5,
                    &bump,
                    cfg.samples.unwrap_or(12),
                    c_d,
                    &weak_quad,
                )?);
            }
            write_outputs(&out_dir, "weak11", seed, &cfg, reports)?
        }
        "kernel-dump" => {
            let spec = resolve_profile(&cfg, &quad)?;
            let d = spec.dimension();
            let n = cfg.grid.unwrap_or(8);
            let mut pairs = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    let xv = -1.5 + 3.0 * i as f64 / (n - 1).max(1) as f64;
                    let yv = -1.5 + 3.0 * j as f64 / (n - 1).max(1) as f64;
                    if (xv - yv).abs() < 1e-9 {
                        continue;
                    }
                    let mut x = vec![0.0; d];
                    let mut y = vec![0.0; d];
                    x[0] = xv;
                    y[0] = yv;
                    pairs.push((x, y));
                }
            }
            fs::create_dir_all(&out_dir)
                .map_err(|e| CliError::invalid(format!("cannot create output dir: {e}")))?;
            let mut file = fs::File::create(out_dir.join("kernel.csv"))
                .map_err(|e| CliError::numerical(format!("cannot write kernel.csv: {e}")))?;
            write_kernel_dump(&spec, &pairs, &quad, &mut file)?;
            println!("pass  kernel-dump: {} pairs written", pairs.len());
            true
        }
        "calibrate" => {
            let d = cfg.d.unwrap_or(1);
            let beta_text = cfg
                .beta
                .clone()
                .ok_or_else(|| CliError::invalid("field beta: required for calibrate"))?;
            let beta = parse_multi_index(&beta_text, "beta")?;
            let calibration = calibrate_cbeta(&beta, d, &quad, 1e-5)?;
            println!(
                "pass  calibrate: C_beta = {:.12e}, residual = {:.3e}",
                calibration.c_beta, calibration.residual
            );
            let mut report = ExperimentReport::new("calibrate", seed);
            report.set_parameter("d", d as u64);
            report.set_parameter("beta", beta.to_string());
            report.set_parameter(
                "c_beta",
                serde_json::Number::from_f64(calibration.c_beta)
                    .map(serde_json::Value::Number)
                    .unwrap_or(serde_json::Value::Null),
            );
            report.finalize(calibration.residual, Some(1e-5));
            write_outputs(&out_dir, "calibrate", seed, &cfg, vec![report])?
        }
        other => {
            return Err(CliError::invalid(format!(
                "field command: unknown command '{other}'"
            )));
        }
    };

    if !passed {
        return Err(CliError::numerical(
            "one or more report thresholds failed (reports written)",
        ));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
