//! Formatting and file emission: significant-digit numeric printing, the
//! CSV schemas (curves: eps,r,im_h,kind; zeros: re,im,residual,source,n;
//! scan: grid fields), JSON report shapes, and gnuplot script generation.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use cw_core::critical::CurveSegment;
use cw_core::scan::ScanResult;
use cw_core::zeros::{MatchReport, MeasurePair, ZeroSet};
use rug::Float;
use serde::Serialize;

use crate::CliError;

/// `x` in scientific notation with an explicit count of significant digits.
/// (std's float formatting takes fractional digits, hence the −1.)
pub fn sig(x: f64, digits: u32) -> String {
    format!("{:.*e}", digits.max(1) as usize - 1, x)
}

/// High-precision value with an explicit count of significant digits.
/// (rug's formatting takes significant digits directly; exact zeros would
/// print as a bare `0`, so they go through the f64 path.)
pub fn sig_float(x: &Float, digits: u32) -> String {
    if x.is_zero() {
        return sig(0.0, digits);
    }
    format!("{:.*e}", digits.max(1) as usize, x)
}

/// `re + im i` with the sign folded into the separator.
pub fn complex_pair_f64(re: f64, im: f64, digits: u32) -> String {
    let sep = if im.is_sign_negative() { "-" } else { "+" };
    format!("{} {sep} {} i", sig(re, digits), sig(im.abs(), digits))
}

pub fn complex_pair(re: &Float, im: &Float, digits: u32) -> String {
    let sep = if im.is_sign_negative() { "-" } else { "+" };
    let im_abs = Float::with_val(im.prec(), im.abs_ref());
    format!("{} {sep} {} i", sig_float(re, digits), sig_float(&im_abs, digits))
}

/// Fixed CSV float format: 17 significant digits round-trip f64 exactly, so
/// re-runs (any thread count) are byte-identical.
fn csv_num(x: f64) -> String {
    sig(x, 17)
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Failure(format!("cannot create {}: {e}", dir.display())))
}

pub fn curve_csv(segment: &CurveSegment) -> String {
    let mut out = String::from("eps,r,im_h,kind\n");
    for p in &segment.points {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            csv_num(p.eps),
            csv_num(p.r),
            csv_num(p.im_h),
            segment.kind.as_str()
        );
    }
    out
}

pub fn zeros_csv(set: &ZeroSet) -> String {
    let mut out = String::from("re,im,residual,source,n\n");
    for (zero, residual) in set.zeros.iter().zip(&set.residuals) {
        let (re, im) = zero.to_f64_parts();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            csv_num(re),
            csv_num(im),
            sig(*residual, 6),
            set.source.as_str(),
            set.n
        );
    }
    out
}

pub fn scan_csv(result: &ScanResult) -> String {
    let mut out = String::from("re,im");
    for n in &result.config.n_list {
        let _ = write!(out, ",f_n{n}");
    }
    out.push_str(",f_ext,label,flagged\n");
    for p in &result.points {
        let _ = write!(out, "{},{}", csv_num(p.beta.re()), csv_num(p.beta.im()));
        for f in &p.f_per_n {
            let _ = write!(out, ",{}", csv_num(*f));
        }
        let _ = writeln!(
            out,
            ",{},{},{}",
            csv_num(p.f_ext),
            p.label.as_str(),
            u8::from(p.flagged)
        );
    }
    out
}

#[derive(Serialize)]
struct ZeroJson {
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct PairJson {
    a: ZeroJson,
    b: ZeroJson,
    distance: f64,
    scaled_distance: f64,
}

#[derive(Serialize)]
struct MatchJson {
    n: u32,
    source_a: &'static str,
    source_b: &'static str,
    pairs: Vec<PairJson>,
    unmatched_a: Vec<ZeroJson>,
    unmatched_b: Vec<ZeroJson>,
    max_scaled_distance: f64,
}

fn zero_json(z: &cw_core::numerics::BigC) -> ZeroJson {
    let (re, im) = z.to_f64_parts();
    ZeroJson { re, im }
}

pub fn match_json(report: &MatchReport) -> Result<String, CliError> {
    let n2 = f64::from(report.n) * f64::from(report.n);
    let doc = MatchJson {
        n: report.n,
        source_a: "exact-Z",
        source_b: "psi",
        pairs: report
            .pairs
            .iter()
            .map(|p| PairJson {
                a: zero_json(&p.beta_a),
                b: zero_json(&p.beta_b),
                distance: p.distance,
                scaled_distance: p.distance * n2,
            })
            .collect(),
        unmatched_a: report.unmatched_a.iter().map(zero_json).collect(),
        unmatched_b: report.unmatched_b.iter().map(zero_json).collect(),
        max_scaled_distance: report.max_scaled_distance,
    };
    to_pretty(&doc)
}

#[derive(Serialize)]
struct AtomJson {
    re: f64,
    im: f64,
    weight: f64,
}

#[derive(Serialize)]
struct SegmentJson {
    eps_lo: f64,
    r_lo: f64,
    eps_hi: f64,
    r_hi: f64,
    mass: f64,
}

#[derive(Serialize)]
struct MeasureJson {
    n: u32,
    mu_n_mass: f64,
    mu_mass: f64,
    mu_n_atoms: Vec<AtomJson>,
    mu_segments: Vec<SegmentJson>,
}

pub fn measure_json(pair: &MeasurePair) -> Result<String, CliError> {
    let doc = MeasureJson {
        n: pair.n,
        mu_n_mass: pair.mu_n_mass(),
        mu_mass: pair.mu_limit_mass(),
        mu_n_atoms: pair
            .mu_n
            .iter()
            .map(|a| AtomJson {
                re: a.re,
                im: a.im,
                weight: a.weight,
            })
            .collect(),
        mu_segments: pair
            .mu_limit
            .iter()
            .map(|s| SegmentJson {
                eps_lo: s.eps_lo,
                r_lo: s.r_lo,
                eps_hi: s.eps_hi,
                r_hi: s.r_hi,
                mass: s.mass,
            })
            .collect(),
    };
    to_pretty(&doc)
}

#[derive(Serialize)]
struct MeasuredJson {
    name: String,
    value: f64,
}

#[derive(Serialize)]
struct CriterionJson {
    id: &'static str,
    title: &'static str,
    status: &'static str,
    passed: bool,
    advisory: bool,
    measured: Vec<MeasuredJson>,
    notes: Vec<String>,
}

#[derive(Serialize)]
struct ReproduceJson {
    id: String,
    criteria: Vec<CriterionJson>,
    /// True when every non-advisory criterion passed.
    build_ok: bool,
}

pub fn reproduce_json(id: &str, reports: &[cw_core::checks::CriterionReport]) -> Result<String, CliError> {
    let build_ok = reports.iter().all(|r| r.passed || r.advisory);
    let doc = ReproduceJson {
        id: id.to_string(),
        criteria: reports
            .iter()
            .map(|r| CriterionJson {
                id: r.id,
                title: r.title,
                status: r.status(),
                passed: r.passed,
                advisory: r.advisory,
                measured: r
                    .measured
                    .iter()
                    .map(|(name, value)| MeasuredJson {
                        name: name.clone(),
                        value: *value,
                    })
                    .collect(),
                notes: r.notes.clone(),
            })
            .collect(),
        build_ok,
    };
    to_pretty(&doc)
}

fn to_pretty<T: Serialize>(doc: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(doc)
        .map_err(|e| CliError::Failure(format!("JSON serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// Column index (1-based, for gnuplot) of `name` in a CSV header line.
fn csv_column(header: &str, name: &str) -> Option<usize> {
    header
        .split(',')
        .position(|h| h.trim() == name)
        .map(|i| i + 1)
}

/// Phase-diagram script: extrapolated-F heat map with every available
/// critical curve overlaid. Requires `scan.csv`.
pub fn phase_diagram_script(out: &Path) -> Result<PathBuf, CliError> {
    let scan_path = out.join("scan.csv");
    let text = std::fs::read_to_string(&scan_path).map_err(|e| {
        CliError::Failure(format!(
            "phase diagram needs {} (run `cw scan` first): {e}",
            scan_path.display()
        ))
    })?;
    let header = text.lines().next().unwrap_or_default();
    let f_col = csv_column(header, "f_ext").ok_or_else(|| {
        CliError::Failure(format!("{} has no f_ext column", scan_path.display()))
    })?;

    let mut script = String::from(
        "# Phase diagram: extrapolated free energy over the beta plane.\n\
         set datafile separator comma\n\
         set key autotitle columnhead\n\
         set key outside\n\
         set term pngcairo size 1000,800\n\
         set output 'phase-diagram.png'\n\
         set xlabel 'Re beta'\n\
         set ylabel 'Im beta'\n\
         set cblabel 'extrapolated F'\n\
         set title 'Free energy and critical curves'\n\
         set view map\n",
    );
    script.push_str(&format!(
        "splot 'scan.csv' using 1:2:{f_col} with points pt 5 ps 1.4 palette notitle"
    ));
    for (kind, color, label) in [
        ("gamma", "black", "Gamma"),
        ("theorem2", "blue", "theorem2 curve"),
        ("conjectured", "web-green", "conjectured curve"),
    ] {
        let file = format!("curve-{kind}.csv");
        if out.join(&file).exists() {
            script.push_str(&format!(
                ", \\\n      '{file}' using (1+$1):2:(0) with lines lw 2 lc '{color}' title '{label}'\
                 , \\\n      '{file}' using (1+$1):(-$2):(0) with lines lw 2 lc '{color}' notitle"
            ));
        }
    }
    script.push('\n');

    let path = out.join("phase-diagram.gp");
    write_text(&path, &script)?;
    Ok(path)
}

/// Zero-scatter script with the traced curve overlay. Requires at least one
/// zeros CSV; an empty (header-only) zero set still yields a valid script.
pub fn zeros_script(out: &Path) -> Result<PathBuf, CliError> {
    let sources = [
        ("zeros-psi.csv", "blue", "psi zeros", 7),
        ("zeros-exact.csv", "red", "exact-Z zeros", 4),
    ];
    let present: Vec<_> = sources
        .iter()
        .filter(|(file, ..)| out.join(file).exists())
        .collect();
    if present.is_empty() {
        return Err(CliError::Failure(format!(
            "zero scatter needs zeros-psi.csv or zeros-exact.csv in {} (run `cw zeros ...` first)",
            out.display()
        )));
    }

    let mut script = String::from(
        "# Partition-function zeros against the traced critical curve.\n\
         set datafile separator comma\n\
         set key autotitle columnhead\n\
         set key outside\n\
         set term pngcairo size 900,700\n\
         set output 'zeros.png'\n\
         set xlabel 'Re beta'\n\
         set ylabel 'Im beta'\n\
         set title 'Zeros near beta = 1'\n",
    );
    let mut clauses: Vec<String> = Vec::new();
    if out.join("curve-gamma.csv").exists() {
        clauses.push(
            "'curve-gamma.csv' using (1+$1):2 with lines lw 2 lc 'black' title 'Gamma'".into(),
        );
        clauses
            .push("'curve-gamma.csv' using (1+$1):(-$2) with lines lw 2 lc 'black' notitle".into());
    }
    for (file, color, label, pt) in &present {
        clauses.push(format!(
            "'{file}' using 1:2 with points pt {pt} ps 1.4 lc '{color}' title '{label}'"
        ));
    }
    script.push_str(&format!("plot {}\n", clauses.join(", \\\n     ")));

    let path = out.join("zeros.gp");
    write_text(&path, &script)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting_is_explicit() {
        assert_eq!(sig(std::f64::consts::PI, 6), "3.14159e0");
        assert_eq!(sig(-0.000125, 3), "-1.25e-4");
        assert_eq!(sig(f64::NAN, 5), "NaN");
        let third = Float::with_val(200, 1) / 3u32;
        assert_eq!(sig_float(&third, 10), "3.333333333e-1");
        assert_eq!(sig_float(&Float::with_val(53, 0), 4), "0.000e0");
        let z = Float::with_val(53, -0.5);
        assert_eq!(complex_pair(&third, &z, 4), "3.333e-1 - 5.000e-1 i");
    }

    #[test]
    fn csv_floats_round_trip() {
        for x in [1.0 / 3.0, -2.7e-13, 6.02e23] {
            let parsed: f64 = csv_num(x).parse().unwrap();
            assert_eq!(parsed, x);
        }
    }

    #[test]
    fn csv_columns_locate_headers() {
        assert_eq!(csv_column("re,im,f_n50,f_ext,label", "f_ext"), Some(4));
        assert_eq!(csv_column("re,im", "f_ext"), None);
    }
}
