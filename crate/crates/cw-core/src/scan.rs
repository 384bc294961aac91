//! Phase-diagram grid scans: (1/n)·log|Z| per grid point per n, Richardson
//! extrapolation in n, and the F = 0 / F > 0 classification.

use crate::model::{free_energy_estimate_at, ComplexBeta};
use crate::numerics::{required_precision, Precision};
use crate::{Error, Result};

/// |extrapolated F| at or below this is labeled the F = 0 phase.
pub const PHASE_THRESHOLD: f64 = 0.01;

/// Inclusive grid over a β rectangle, `nx × ny` points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanGrid {
    pub re_lo: f64,
    pub re_hi: f64,
    pub im_lo: f64,
    pub im_hi: f64,
    pub nx: u32,
    pub ny: u32,
}

impl ScanGrid {
    /// Grid coordinate as an endpoint blend: exact at the ends and exactly
    /// sign-symmetric for symmetric ranges, so conjugate rows carry
    /// bit-identical β.
    fn coord(lo: f64, hi: f64, i: u32, count: u32) -> f64 {
        let span = f64::from(count - 1);
        (f64::from(count - 1 - i) * lo + f64::from(i) * hi) / span
    }

    pub fn point(&self, ix: u32, iy: u32) -> ComplexBeta {
        ComplexBeta::new(
            Self::coord(self.re_lo, self.re_hi, ix, self.nx),
            Self::coord(self.im_lo, self.im_hi, iy, self.ny),
        )
    }
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub grid: ScanGrid,
    pub n_list: Vec<u32>,
    pub precision_override: Option<u32>,
    pub threads: u32,
    pub output_dir: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseLabel {
    Zero,
    Positive,
}

impl PhaseLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            PhaseLabel::Zero => "zero",
            PhaseLabel::Positive => "positive",
        }
    }
}

/// One grid point: the per-n free-energy estimates (NaN where |Z| fell to
/// the noise floor), their extrapolation, and the phase call. `flagged`
/// marks points where at least one n hit a numerical zero of Z; those with
/// no usable n at all carry NaN extrapolation and the Zero label (a
/// numerical zero of Z pins the point to the phase boundary).
#[derive(Clone, Debug)]
pub struct ScanPoint {
    pub beta: ComplexBeta,
    pub f_per_n: Vec<f64>,
    pub f_ext: f64,
    pub label: PhaseLabel,
    pub flagged: bool,
}

#[derive(Clone, Debug)]
pub struct ScanResult {
    pub config: ScanConfig,
    /// Row-major: iy outer (im ascending), ix inner (re ascending).
    pub points: Vec<ScanPoint>,
}

fn validate(config: &ScanConfig) -> Result<()> {
    let g = &config.grid;
    let finite = [g.re_lo, g.re_hi, g.im_lo, g.im_hi]
        .iter()
        .all(|v| v.is_finite());
    if !finite || g.re_lo > g.re_hi || g.im_lo > g.im_hi {
        return Err(Error::Config(format!(
            "grid rectangle [{}, {}] x [{}, {}] is not ordered and finite",
            g.re_lo, g.re_hi, g.im_lo, g.im_hi
        )));
    }
    if g.nx < 2 || g.ny < 2 {
        return Err(Error::Config(format!(
            "grid resolution {}x{} below the 2-per-axis minimum",
            g.nx, g.ny
        )));
    }
    if config.n_list.is_empty() {
        return Err(Error::Config("n_list is empty".into()));
    }
    if config.n_list[0] == 0 || config.n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(format!(
            "n_list {:?} must be ascending positive spin counts",
            config.n_list
        )));
    }
    if let Some(d) = config.precision_override {
        if d < 12 {
            return Err(Error::Config(format!(
                "precision override of {d} digits is below the 12-digit floor"
            )));
        }
    }
    Ok(())
}

/// Richardson extrapolation in n with the finite-size model
/// F_n = F + a·(ln n)/n + b/n: one pairwise elimination stage per term,
/// highest-n entries kept last.
pub(crate) fn richardson(ns: &[u32], fs: &[f64]) -> f64 {
    let mut vals: Vec<(f64, f64)> = ns
        .iter()
        .zip(fs)
        .filter(|(_, f)| f.is_finite())
        .map(|(&n, &f)| (f64::from(n), f))
        .collect();
    if vals.is_empty() {
        return f64::NAN;
    }
    for model in [|n: f64| n.ln() / n, |n: f64| 1.0 / n] {
        if vals.len() < 2 {
            break;
        }
        vals = vals
            .windows(2)
            .map(|w| {
                let ((na, fa), (nb, fb)) = (w[0], w[1]);
                let (ga, gb) = (model(na), model(nb));
                (nb, (fa * gb - fb * ga) / (gb - ga))
            })
            .collect();
    }
    vals.last().unwrap().1
}

fn eval_point(beta: ComplexBeta, config: &ScanConfig) -> Result<ScanPoint> {
    let mut f_per_n = Vec::with_capacity(config.n_list.len());
    let mut flagged = false;
    for &n in &config.n_list {
        let prec = match config.precision_override {
            Some(d) => Precision::new(d),
            None => required_precision(&beta, n),
        };
        match free_energy_estimate_at(&beta, n, prec) {
            Ok(f) => f_per_n.push(f),
            Err(Error::ZeroProximity { .. }) => {
                flagged = true;
                f_per_n.push(f64::NAN);
            }
            Err(e) => return Err(e),
        }
    }
    let f_ext = richardson(&config.n_list, &f_per_n);
    let label = if f_ext.is_finite() && f_ext.abs() > PHASE_THRESHOLD {
        PhaseLabel::Positive
    } else {
        PhaseLabel::Zero
    };
    Ok(ScanPoint {
        beta,
        f_per_n,
        f_ext,
        label,
        flagged,
    })
}

/// Free energy over the grid for each n in `n_list`, extrapolated and
/// classified. Output is independent of `threads`: every point is computed
/// in isolation and merged in fixed row-major order.
pub fn scan(config: &ScanConfig) -> Result<ScanResult> {
    validate(config)?;
    let g = config.grid;
    let betas: Vec<ComplexBeta> = (0..g.ny)
        .flat_map(|iy| (0..g.nx).map(move |ix| (ix, iy)))
        .map(|(ix, iy)| g.point(ix, iy))
        .collect();

    #[cfg(feature = "parallel")]
    let points = {
        use rayon::prelude::*;
        let work = || {
            betas
                .par_iter()
                .map(|b| eval_point(*b, config))
                .collect::<Result<Vec<_>>>()
        };
        if config.threads > 0 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(config.threads as usize)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?
                .install(work)?
        } else {
            work()?
        }
    };
    #[cfg(not(feature = "parallel"))]
    let points = betas
        .iter()
        .map(|b| eval_point(*b, config))
        .collect::<Result<Vec<_>>>()?;

    Ok(ScanResult {
        config: config.clone(),
        points,
    })
}
