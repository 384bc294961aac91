//! `cw`: command-line laboratory for the Curie–Weiss model at complex
//! inverse temperature β = 1 + ε + iR. Exact partition functions, the
//! integral representation, saddle data, critical curves, zero location,
//! zero-counting measures, phase scans, reproduction suites, and plot
//! scripts.

mod output;
mod settings;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use cw_core::checks::{annulus_cover, matched_zero_sets, reproduce_suite, REPRODUCE_IDS};
use cw_core::critical::{
    conjectured_curve, theorem2_eps, trace_gamma, CurveKind, CurvePoint, CurveSegment,
};
use cw_core::model::{z_binomial, ComplexBeta};
use cw_core::numerics::Precision;
use cw_core::quadrature::z_integral_f;
use cw_core::saddle::find_u_beta;
use cw_core::scan::{scan, PhaseLabel, ScanConfig, ScanGrid};
use cw_core::zeros::{build_measures, psi_zeros, z_zeros, Annulus, Region, ZeroSet, ZeroSource};

use output::{
    complex_pair, complex_pair_f64, curve_csv, ensure_dir, match_json, measure_json,
    phase_diagram_script, reproduce_json, scan_csv, sig, sig_float, write_text, zeros_csv,
    zeros_script,
};
use settings::Settings;

/// The annulus around β = 1 searched by the zero and measure commands.
const ZERO_ANNULUS: Annulus = Annulus {
    delta: 0.005,
    c_max: 0.1,
};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config, or arguments — exit code 2.
    Usage(String),
    /// Numerical or I/O failure during a well-formed run — exit code 1.
    Failure(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Failure(msg) => f.write_str(msg),
        }
    }
}

impl From<cw_core::Error> for CliError {
    fn from(e: cw_core::Error) -> Self {
        match e {
            cw_core::Error::Config(msg) => CliError::Usage(msg),
            other => CliError::Failure(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "cw",
    version,
    about = "Curie-Weiss partition functions, critical curves, and zeros at complex inverse temperature"
)]
struct Cli {
    /// Spin count N
    #[arg(long, global = true, value_name = "N")]
    n: Option<u32>,

    /// Inverse temperature as `re,im`
    #[arg(
        long,
        global = true,
        value_name = "RE,IM",
        value_parser = settings::parse_beta,
        allow_hyphen_values = true
    )]
    beta: Option<(f64, f64)>,

    /// Significant digits for printed values (for z-integral, also the
    /// requested quadrature accuracy)
    #[arg(long, global = true, value_name = "D")]
    digits: Option<u32>,

    /// Worker threads; 0 or absent keeps the library default pool
    #[arg(long, global = true, value_name = "T")]
    threads: Option<u32>,

    /// Output directory for generated files (default: current directory)
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Flat key=value config file mirroring these flags; flags win
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CurveArg {
    Gamma,
    Theorem2,
    Conjectured,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ZerosArg {
    Psi,
    Exact,
    Match,
}

#[derive(Subcommand)]
enum Command {
    /// Exact partition function by the binomial sum (needs --beta, --n)
    ZExact,
    /// Partition function via the real-axis integral representation
    /// (needs --beta with Re beta > 0, --n)
    ZIntegral,
    /// Saddle point u_beta with h(u_beta) and xi(beta) (needs --beta,
    /// 0 < |beta-1| <= 0.1)
    Saddle,
    /// Trace a critical curve to curve-<kind>.csv
    Curve {
        #[arg(value_enum)]
        kind: CurveArg,
    },
    /// Locate partition-function zeros in 0.005 <= |beta-1| <= 0.1
    /// (needs --n; the exact-Z search is capped at N = 400)
    Zeros {
        #[arg(value_enum)]
        source: ZerosArg,
    },
    /// Zero-counting measures mu_N and mu from the psi zeros (needs --n)
    Measure,
    /// Free-energy phase scan over a beta grid (grid set by scan.* config
    /// keys) written to scan.csv
    Scan,
    /// Run a reproduction suite and write reproduce-<id>.json
    Reproduce { id: String },
    /// Emit gnuplot scripts for CSV files already in the output directory
    Plot,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            2
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut s = Settings::default();
    if let Some(path) = &cli.config {
        s.apply_config_file(path)?;
    }
    if let Some(n) = cli.n {
        s.n = Some(n);
    }
    if let Some(beta) = cli.beta {
        s.beta = Some(beta);
    }
    if let Some(digits) = cli.digits {
        s.digits = Some(digits);
    }
    if let Some(threads) = cli.threads {
        s.threads = Some(threads);
    }
    if let Some(out) = cli.out {
        s.out = Some(out);
    }
    if let Some(d) = s.digits {
        if d == 0 || d > 1000 {
            return Err(CliError::Usage(format!(
                "--digits must be in 1..=1000 (got {d})"
            )));
        }
    }

    match cli.command {
        Command::ZExact => cmd_z_exact(&s),
        Command::ZIntegral => cmd_z_integral(&s),
        Command::Saddle => cmd_saddle(&s),
        Command::Curve { kind } => cmd_curve(&s, kind),
        Command::Zeros { source } => cmd_zeros(&s, source),
        Command::Measure => cmd_measure(&s),
        Command::Scan => cmd_scan(&s),
        Command::Reproduce { id } => cmd_reproduce(&s, &id),
        Command::Plot => cmd_plot(&s),
    }
}

/// Runs `f` inside a dedicated rayon pool when a positive thread count was
/// requested; reductions in the core are order-fixed, so the result is the
/// same either way.
fn with_threads<T, F>(threads: Option<u32>, f: F) -> Result<T, CliError>
where
    T: Send,
    F: FnOnce() -> Result<T, CliError> + Send,
{
    match threads {
        Some(t) if t > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(t as usize)
            .build()
            .map_err(|e| CliError::Failure(format!("cannot build thread pool: {e}")))?
            .install(f),
        _ => f(),
    }
}

fn beta_of(s: &Settings) -> Result<ComplexBeta, CliError> {
    let (re, im) = s.need_beta()?;
    Ok(ComplexBeta::new(re, im))
}

fn cmd_z_exact(s: &Settings) -> Result<(), CliError> {
    let n = s.need_n()?;
    let beta = beta_of(s)?;
    let digits = s.digits.unwrap_or(17);
    let z = z_binomial(&beta, n)?;
    println!(
        "Z(beta = {}, N = {n}) by the exact binomial sum",
        complex_pair_f64(beta.re(), beta.im(), digits)
    );
    println!(
        "working precision = {} decimal digits",
        z.precision_used.decimal_digits()
    );
    println!("Re Z = {}", sig_float(z.value.re(), digits));
    println!("Im Z = {}", sig_float(z.value.im(), digits));
    let abs = z.value.abs();
    let log_abs = abs.clone().ln();
    println!("|Z| = {}", sig_float(&abs, digits));
    println!("(1/N) log|Z| = {}", sig_float(&(log_abs / n), digits));
    Ok(())
}

fn cmd_z_integral(s: &Settings) -> Result<(), CliError> {
    let n = s.need_n()?;
    let beta = beta_of(s)?;
    let digits = s.digits.unwrap_or(12);
    let q = z_integral_f(&beta, n, digits)?;
    println!(
        "Z(beta = {}, N = {n}) by the integral representation",
        complex_pair_f64(beta.re(), beta.im(), digits)
    );
    println!("Re Z = {}", sig_float(q.value.re(), digits));
    println!("Im Z = {}", sig_float(q.value.im(), digits));
    println!("|Z| = {}", sig_float(&q.value.abs(), digits));
    println!(
        "panels = {}, truncation U = {}, est rel error = {}",
        q.panels,
        sig(q.truncation, 6),
        sig(q.est_error, 3)
    );
    Ok(())
}

fn cmd_saddle(s: &Settings) -> Result<(), CliError> {
    let beta = beta_of(s)?;
    let digits = s.digits.unwrap_or(17);
    let data = find_u_beta(&beta, Precision::new(digits.max(30) + 10))?;
    println!(
        "saddle data at beta = {}",
        complex_pair_f64(beta.re(), beta.im(), digits)
    );
    println!(
        "u_beta = {}",
        complex_pair(data.u_beta.re(), data.u_beta.im(), digits)
    );
    println!(
        "h(u_beta) = {}",
        complex_pair(data.h_at_saddle.re(), data.h_at_saddle.im(), digits)
    );
    println!(
        "xi(beta) = {}",
        complex_pair(data.xi.re(), data.xi.im(), digits)
    );
    println!("certified disc radius = {}", sig(data.disc_radius, 6));
    Ok(())
}

fn cmd_curve(s: &Settings, kind: CurveArg) -> Result<(), CliError> {
    let segment = match kind {
        CurveArg::Gamma => trace_gamma(0.1, 0.0005)?,
        CurveArg::Theorem2 => {
            // ε(R) over R ∈ (π, 2π]; the landscape value at the real saddle
            // is real, so the im_h payload is 0.
            let mut points = Vec::new();
            for j in 0..100 {
                let r = 3.18 + (6.28 - 3.18) * f64::from(j) / 99.0;
                let eps = theorem2_eps(r)?;
                points.push(CurvePoint {
                    beta: ComplexBeta::new(1.0 + eps, r),
                    eps,
                    r,
                    im_h: 0.0,
                });
            }
            CurveSegment {
                kind: CurveKind::Theorem2,
                points,
            }
        }
        CurveArg::Conjectured => conjectured_curve(&[
            2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0, 20.0,
        ])?,
    };
    let out = s.out_dir();
    ensure_dir(&out)?;
    let path = out.join(format!("curve-{}.csv", segment.kind.as_str()));
    write_text(&path, &curve_csv(&segment))?;
    println!(
        "{} points on the {} curve",
        segment.points.len(),
        segment.kind.as_str()
    );
    Ok(())
}

fn exact_zero_set(n: u32) -> Result<ZeroSet, CliError> {
    let mut found: Vec<(f64, f64, cw_core::numerics::BigC, f64)> = Vec::new();
    for rect in annulus_cover(ZERO_ANNULUS.delta, ZERO_ANNULUS.c_max) {
        let set = z_zeros(n, rect)?;
        for (zero, residual) in set.zeros.into_iter().zip(set.residuals) {
            let (re, im) = zero.to_f64_parts();
            found.push((re, im, zero, residual));
        }
    }
    found.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Ok(ZeroSet {
        n,
        zeros: found.iter().map(|(_, _, z, _)| z.clone()).collect(),
        residuals: found.iter().map(|(_, _, _, r)| *r).collect(),
        source: ZeroSource::ExactZ,
        region: Region::Annulus(ZERO_ANNULUS),
    })
}

fn cmd_zeros(s: &Settings, source: ZerosArg) -> Result<(), CliError> {
    let n = s.need_n()?;
    let out = s.out_dir();
    ensure_dir(&out)?;
    match source {
        ZerosArg::Psi => {
            let set = with_threads(s.threads, || Ok(psi_zeros(n, ZERO_ANNULUS)?))?;
            write_text(&out.join("zeros-psi.csv"), &zeros_csv(&set))?;
            println!("{} psi zeros at N = {n} in the annulus", set.zeros.len());
        }
        ZerosArg::Exact => {
            let set = with_threads(s.threads, || exact_zero_set(n))?;
            write_text(&out.join("zeros-exact.csv"), &zeros_csv(&set))?;
            println!("{} exact-Z zeros at N = {n} in the annulus", set.zeros.len());
        }
        ZerosArg::Match => {
            let (z_set, psi_set, report) = with_threads(s.threads, || {
                Ok(matched_zero_sets(n, ZERO_ANNULUS.delta, ZERO_ANNULUS.c_max)?)
            })?;
            write_text(&out.join("zeros-exact.csv"), &zeros_csv(&z_set))?;
            write_text(&out.join("zeros-psi.csv"), &zeros_csv(&psi_set))?;
            write_text(&out.join("zeros-match.json"), &match_json(&report)?)?;
            println!(
                "{} pairs, {} + {} unmatched, max |dbeta| x N^2 = {}",
                report.pairs.len(),
                report.unmatched_a.len(),
                report.unmatched_b.len(),
                sig(report.max_scaled_distance, 6)
            );
        }
    }
    Ok(())
}

fn cmd_measure(s: &Settings) -> Result<(), CliError> {
    let n = s.need_n()?;
    let out = s.out_dir();
    ensure_dir(&out)?;
    let pair = with_threads(s.threads, || {
        let set = psi_zeros(n, ZERO_ANNULUS)?;
        let gamma = trace_gamma(0.1, 0.000625)?;
        Ok(build_measures(&set, &gamma)?)
    })?;
    write_text(&out.join("measure.json"), &measure_json(&pair)?)?;
    println!(
        "mu_N mass = {} ({} atoms), mu mass = {} ({} segments)",
        sig(pair.mu_n_mass(), 6),
        pair.mu_n.len(),
        sig(pair.mu_limit_mass(), 6),
        pair.mu_limit.len()
    );
    Ok(())
}

fn cmd_scan(s: &Settings) -> Result<(), CliError> {
    let out = s.out_dir();
    ensure_dir(&out)?;
    let config = ScanConfig {
        grid: ScanGrid {
            re_lo: s.scan.re_lo,
            re_hi: s.scan.re_hi,
            im_lo: s.scan.im_lo,
            im_hi: s.scan.im_hi,
            nx: s.scan.nx,
            ny: s.scan.ny,
        },
        n_list: s.scan.n_list.clone(),
        precision_override: s.scan.precision,
        threads: s.threads.unwrap_or(0),
        output_dir: Some(out.display().to_string()),
    };
    let result = scan(&config)?;
    write_text(&out.join("scan.csv"), &scan_csv(&result))?;
    let positive = result
        .points
        .iter()
        .filter(|p| p.label == PhaseLabel::Positive)
        .count();
    let flagged = result.points.iter().filter(|p| p.flagged).count();
    println!(
        "{} grid points: {} positive-F, {} zero-F, {} flagged",
        result.points.len(),
        positive,
        result.points.len() - positive,
        flagged
    );
    Ok(())
}

fn cmd_reproduce(s: &Settings, id: &str) -> Result<(), CliError> {
    if !REPRODUCE_IDS.contains(&id) {
        return Err(CliError::Usage(format!(
            "unknown reproduce id {id:?}; expected one of {REPRODUCE_IDS:?}"
        )));
    }
    let out = s.out_dir();
    ensure_dir(&out)?;
    let reports = with_threads(s.threads, || Ok(reproduce_suite(id)?))?;
    write_text(
        &out.join(format!("reproduce-{id}.json")),
        &reproduce_json(id, &reports)?,
    )?;
    for report in &reports {
        println!("{}", report.summary_line());
    }
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed && !r.advisory)
        .map(|r| r.id)
        .collect();
    if !failed.is_empty() {
        return Err(CliError::Failure(format!(
            "criteria failed: {} (report written)",
            failed.join(", ")
        )));
    }
    Ok(())
}

fn cmd_plot(s: &Settings) -> Result<(), CliError> {
    let out = s.out_dir();
    if !Path::new(&out).is_dir() {
        return Err(CliError::Failure(format!(
            "output directory {} does not exist",
            out.display()
        )));
    }
    let phase = phase_diagram_script(&out);
    let zeros = zeros_script(&out);
    match (phase, zeros) {
        (Err(p), Err(z)) => Err(CliError::Failure(format!("nothing to plot: {p}; {z}"))),
        (phase, zeros) => {
            for skipped in [phase.err(), zeros.err()].into_iter().flatten() {
                eprintln!("skipped: {skipped}");
            }
            Ok(())
        }
    }
}
