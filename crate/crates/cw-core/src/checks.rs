//! The acceptance/reproduction suites: each criterion is a self-contained
//! measurement returning a [`CriterionReport`], shared verbatim by the
//! `acceptance` integration tests and the CLI `reproduce` subcommand.
//!
//! Every randomized criterion draws its β samples from a fixed splitmix64
//! stream, so reports are reproducible bit for bit.

use crate::critical::{conjectured_curve, r0_of_eps, theorem2_eps, trace_gamma, u_star};
use crate::landscape::{f_eval, inequality_suite};
use crate::model::{free_energy_estimate, z_binomial, z_enumerate, ComplexBeta};
use crate::numerics::{principal_sqrt, BigC, Precision};
use crate::quadrature::z_integral_f;
use crate::saddle::h_at_saddle;
use crate::scan::{scan, ScanConfig, ScanGrid, PHASE_THRESHOLD};
use crate::zeros::{
    build_measures, match_zeros, psi_terms, psi_zeros, refine_z_zero, z_zeros, Annulus,
    MatchReport, Rectangle, ZeroSet, ZeroSource,
};
use crate::{Error, Result};

/// Outcome of one acceptance criterion: the verdict, the quantities it was
/// judged on, and any caveats. `advisory` marks the conjectured-transition
/// probe, whose failure flags the conjecture rather than the build.
#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub advisory: bool,
    pub measured: Vec<(String, f64)>,
    pub notes: Vec<String>,
}

impl CriterionReport {
    pub fn status(&self) -> &'static str {
        if self.passed {
            "PASS"
        } else if self.advisory {
            "FLAGGED"
        } else {
            "FAIL"
        }
    }

    pub fn summary_line(&self) -> String {
        format!("[{}] {}: {}", self.status(), self.id, self.title)
    }
}

/// splitmix64, the deterministic sample stream behind the randomized
/// criteria.
struct Sampler(u64);

impl Sampler {
    fn new(seed: u64) -> Self {
        Sampler(seed)
    }

    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.next() >> 11) as f64 / (1u64 << 53) as f64;
        lo + u * (hi - lo)
    }
}

fn loglog_slope(ns: &[u32], es: &[f64]) -> f64 {
    let k = ns.len() as f64;
    let xs: Vec<f64> = ns.iter().map(|&n| f64::from(n).ln()).collect();
    let ys: Vec<f64> = es.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

/// Oracle equivalence: z_enumerate against z_binomial for all n ≤ 16 over
/// 100 deterministic β, relative error ≤ 1e−12.
pub fn criterion_01_oracle_equivalence() -> Result<CriterionReport> {
    let mut s = Sampler::new(1);
    let mut max_rel = 0.0f64;
    for _ in 0..100 {
        let beta = ComplexBeta::new(s.uniform(-2.0, 2.0), s.uniform(-4.0, 4.0));
        for n in 1..=16 {
            let a = z_enumerate(&beta, n)?.value;
            let b = z_binomial(&beta, n)?.value;
            let rel = ((&a - &b).abs() / b.abs()).to_f64();
            max_rel = max_rel.max(rel);
        }
    }
    Ok(CriterionReport {
        id: "criterion-01",
        title: "oracle equivalence of the enumeration and binomial sums",
        passed: max_rel <= 1e-12,
        advisory: false,
        measured: vec![("max relative error".into(), max_rel)],
        notes: vec!["100 beta in [-2,2] x [-4,4], all n <= 16".into()],
    })
}

/// Representation identity: the f-form integral against the binomial sum for
/// n ∈ {10, 25, 50, 100} over 30 deterministic β with Re β > 0, relative
/// error ≤ 1e−8.
pub fn criterion_02_integral_identity() -> Result<CriterionReport> {
    let mut s = Sampler::new(2);
    let mut max_rel = 0.0f64;
    for _ in 0..30 {
        let beta = ComplexBeta::new(s.uniform(0.1, 2.2), s.uniform(-3.0, 3.0));
        for n in [10, 25, 50, 100] {
            let zi = z_integral_f(&beta, n, 14)?.value;
            let zb = z_binomial(&beta, n)?.value;
            let rel = ((&zi - &zb.with_precision(zi.precision())).abs() / zb.abs()).to_f64();
            max_rel = max_rel.max(rel);
        }
    }
    Ok(CriterionReport {
        id: "criterion-02",
        title: "integral representation reproduces the exact sum",
        passed: max_rel <= 1e-8,
        advisory: false,
        measured: vec![("max relative error".into(), max_rel)],
        notes: vec!["30 beta with Re in [0.1, 2.2], n in {10, 25, 50, 100}".into()],
    })
}

fn theorem1_errors(beta: &ComplexBeta, ns: &[u32]) -> Result<Vec<f64>> {
    ns.iter()
        .map(|&n| {
            let z = z_binomial(beta, n)?;
            let b = beta.to_bigc(z.precision_used);
            let a = principal_sqrt(&(&b / &(&b - &b.square())));
            Ok((&z.value - &a).abs().to_f64())
        })
        .collect()
}

/// Z_N → √(β/(β−β²)) inside the convergence region, with a log-log decay
/// slope at most −0.15; checked on both the ε > 0 and ε < 0 branches.
pub fn criterion_03_theorem1_convergence() -> Result<CriterionReport> {
    let ns = [50u32, 100, 200, 400, 800];
    let mut measured = Vec::new();
    let mut passed = true;
    for (tag, beta) in [
        ("eps>0", ComplexBeta::new(1.05, 1.5)),
        ("eps<0", ComplexBeta::new(0.9, 0.5)),
    ] {
        let es = theorem1_errors(&beta, &ns)?;
        let decreasing = es.windows(2).all(|w| w[1] < w[0]);
        let slope = loglog_slope(&ns, &es);
        passed &= decreasing && slope <= -0.15;
        measured.push((format!("{tag} slope"), slope));
        for (n, e) in ns.iter().zip(&es) {
            measured.push((format!("{tag} e_{n}"), *e));
        }
    }
    Ok(CriterionReport {
        id: "criterion-03",
        title: "convergence to the limit constant at the expected rate",
        passed,
        advisory: false,
        measured,
        notes: vec!["errors must decrease with slope <= -0.15".into()],
    })
}

/// The scaled branch-formula error N·|Z_N − branch| / scale stays under one
/// constant (256) across the annulus sample and all N.
pub fn criterion_04_branch_formula_error_constant() -> Result<CriterionReport> {
    const BOUND: f64 = 256.0;
    let mut s = Sampler::new(4);
    let mut betas = Vec::new();
    for side in 0..2 {
        while betas.iter().filter(|b: &&ComplexBeta| (b.re() > 1.0) == (side == 0)).count() < 10 {
            let b = ComplexBeta::new(s.uniform(0.92, 1.08), s.uniform(-0.08, 0.08));
            let d = b.abs_minus_one();
            if (0.02..=0.08).contains(&d) && (b.re() > 1.0) == (side == 0) && b.re() != 1.0 {
                betas.push(b);
            }
        }
    }

    let ns = [100u32, 200, 400];
    let mut worst_per_n = vec![0.0f64; ns.len()];
    for beta in &betas {
        for (i, &n) in ns.iter().enumerate() {
            let (sing, osc) = psi_terms(beta, n)?;
            let z = z_binomial(beta, n)?.value;
            let prec = z.precision();
            let (branch, scale) = if beta.re() >= 1.0 {
                (
                    (&sing + &osc).with_precision(prec),
                    (sing.abs() + osc.abs()).to_f64(),
                )
            } else {
                (sing.with_precision(prec), sing.abs().to_f64())
            };
            let r = f64::from(n) * (&z - &branch).abs().to_f64() / scale;
            worst_per_n[i] = worst_per_n[i].max(r);
        }
    }
    let overall = worst_per_n.iter().fold(0.0f64, |a, &b| a.max(b));
    let growth = worst_per_n[2] / worst_per_n[0];
    Ok(CriterionReport {
        id: "criterion-04",
        title: "branch-formula error constant across the annulus",
        passed: overall <= BOUND,
        advisory: false,
        measured: vec![
            ("max r_N at N=100".into(), worst_per_n[0]),
            ("max r_N at N=200".into(), worst_per_n[1]),
            ("max r_N at N=400".into(), worst_per_n[2]),
            ("bound".into(), BOUND),
            ("growth N=400 vs N=100".into(), growth),
        ],
        notes: vec!["20 beta, 0.02 <= |beta-1| <= 0.08, both sides of Re beta = 1".into()],
    })
}

/// Trichotomy of Re h_β(u_β) below / on / above R₀(ε), plus the closeness
/// |R₀(ε) − ε| ≤ 5ε².
pub fn criterion_05_trichotomy() -> Result<CriterionReport> {
    let prec = Precision::new(40);
    let mut measured = Vec::new();
    let mut passed = true;
    for eps in [0.01, 0.02, 0.04] {
        let r0 = r0_of_eps(eps)?;
        let sign_at = |r: f64| -> Result<f64> {
            Ok(h_at_saddle(&ComplexBeta::from_eps_r(eps, r), prec)?
                .to_f64_parts()
                .0)
        };
        let below = sign_at(0.8 * r0)?;
        let on = sign_at(r0)?;
        let above = sign_at(1.25 * r0)?;
        // On the curve the sign is numerically indistinct: require it to be
        // two orders below the off-curve magnitudes instead of a fixed zero.
        passed &= below < 0.0 && above > 0.0;
        passed &= on.abs() <= 0.01 * below.abs().min(above.abs());
        passed &= (r0 - eps).abs() <= 5.0 * eps * eps;
        measured.push((format!("R0({eps})"), r0));
        measured.push((format!("Re h below (eps={eps})"), below));
        measured.push((format!("Re h on (eps={eps})"), on));
        measured.push((format!("Re h above (eps={eps})"), above));
    }
    Ok(CriterionReport {
        id: "criterion-05",
        title: "sign trichotomy of Re h at the saddle around R0",
        passed,
        advisory: false,
        measured,
        notes: vec!["R sampled at 0.8*R0, R0, 1.25*R0 for eps in {0.01, 0.02, 0.04}".into()],
    })
}

/// Rectangles covering the δ ≤ |β−1| ≤ c annulus while keeping every cell
/// 0.005 away from β = 1. A thin sliver next to the real axis at distance
/// ≈ δ (between the side rectangles and the inner circle) stays unsearched.
pub fn annulus_cover(delta: f64, c_max: f64) -> Vec<Rectangle> {
    let y0 = (delta / 4.0).max(0.005);
    let y_side = 0.98 * y0;
    let mut rects = Vec::new();
    if y0 < c_max {
        rects.push(Rectangle::new(1.0 - c_max, 1.0 + c_max, y0, c_max));
        rects.push(Rectangle::new(1.0 - c_max, 1.0 + c_max, -c_max, -y0));
    }
    if 1.005 * delta < c_max {
        rects.push(Rectangle::new(1.0 - c_max, 1.0 - 1.005 * delta, -y_side, y_side));
        rects.push(Rectangle::new(1.0 + 1.005 * delta, 1.0 + c_max, -y_side, y_side));
    }
    rects
}

fn gamma_distance(zero: &BigC, gamma_eps_top: f64) -> Result<f64> {
    let gamma = trace_gamma(gamma_eps_top, gamma_eps_top / 80.0)?;
    let (re, im) = zero.to_f64_parts();
    Ok(gamma
        .points
        .iter()
        .map(|p| (re - 1.0 - p.eps).hypot(im.abs() - p.r))
        .fold(f64::INFINITY, f64::min))
}

/// Zero location and pairing in the annulus. At N ∈ {100, 200} the annulus
/// is empty on both sides (the first zero sits at |β−1| ≈ √(2π/N) > 0.08),
/// which satisfies (a)–(c) vacuously; the N = 800 supplement pins the
/// non-vacuous pairing through the Ψ-seeded exact-Z refinement.
pub fn criterion_06_corollary1_zero_pairing() -> Result<CriterionReport> {
    let mut measured = Vec::new();
    let mut notes = Vec::new();
    let mut passed = true;

    for n in [100u32, 200] {
        let mut z_total = 0usize;
        for rect in annulus_cover(0.02, 0.08) {
            z_total += z_zeros(n, rect)?.zeros.len();
        }
        let psi_set = psi_zeros(
            n,
            Annulus {
                delta: 0.02,
                c_max: 0.08,
            },
        )?;
        measured.push((format!("exact-Z zeros in annulus, N={n}"), z_total as f64));
        measured.push((
            format!("psi zeros in annulus, N={n}"),
            psi_set.zeros.len() as f64,
        ));
        measured.push((
            format!("first-zero radius prediction, N={n}"),
            (2.0 * std::f64::consts::PI / f64::from(n)).sqrt(),
        ));
        passed &= z_total == 0 && psi_set.zeros.is_empty();
    }
    notes.push(
        "annulus empty at N in {100, 200}: first zero enters |beta-1| <= 0.1 only near N = 676; \
         (a)-(c) hold vacuously and the N = 800 supplement is the non-vacuous check"
            .into(),
    );

    // Supplement: the m = 1 pair at N = 800.
    let n = 800u32;
    let psi_set = psi_zeros(
        n,
        Annulus {
            delta: 0.005,
            c_max: 0.1,
        },
    )?;
    passed &= psi_set.zeros.len() == 2;
    let upper = psi_set
        .zeros
        .iter()
        .find(|z| z.to_f64_parts().1 > 0.0)
        .ok_or_else(|| Error::Config("no upper psi zero found at N = 800".into()))?;
    let (p_re, p_im) = upper.to_f64_parts();
    let (z_zero, z_res) = refine_z_zero(&ComplexBeta::new(p_re, p_im), n)?;
    let (z_re, z_im) = z_zero.to_f64_parts();
    let dist = (z_re - p_re).hypot(z_im - p_im);
    let scaled = dist * f64::from(n) * f64::from(n);
    let gamma_gap = gamma_distance(&z_zero, 0.075)?;

    passed &= z_re > 1.0 && p_re > 1.0;
    passed &= gamma_gap <= 10.0 / f64::from(n);
    passed &= scaled <= 600.0;
    measured.push(("N=800 psi zero Re".into(), p_re));
    measured.push(("N=800 psi zero Im".into(), p_im));
    measured.push(("N=800 exact-Z zero Re".into(), z_re));
    measured.push(("N=800 exact-Z zero Im".into(), z_im));
    measured.push(("N=800 pair distance".into(), dist));
    measured.push(("N=800 distance x N^2".into(), scaled));
    measured.push(("N=800 exact-Z zero residual".into(), z_res));
    measured.push(("N=800 gamma distance".into(), gamma_gap));

    Ok(CriterionReport {
        id: "criterion-06",
        title: "exact-Z zeros: right half, on gamma, paired with psi zeros",
        passed,
        advisory: false,
        measured,
        notes,
    })
}

/// Weak convergence of the zero-counting measures. Honest as implemented:
/// with the zero search supported on |β−1| ≤ 0.1 and the first zero at
/// |β−1| ≈ √(2π/N), every μ_N with N ≤ 400 is the empty measure, so the
/// discrepancies cannot decrease. Reported as a failure with the mechanism
/// in the notes.
pub fn criterion_07_corollary2_weak_convergence() -> Result<CriterionReport> {
    let gamma = trace_gamma(0.075, 0.075 / 80.0)?;
    let tests: [(&str, fn(f64, f64) -> f64); 4] = [
        ("1", |_, _| 1.0),
        ("Re(beta-1)", |re, _| re - 1.0),
        ("Im(beta-1)", |_, im| im),
        ("|beta-1|^2", |re, im| (re - 1.0) * (re - 1.0) + im * im),
    ];

    let mut measured = Vec::new();
    let mut final_discrepancy = 0.0f64;
    let mut decreasing = true;
    let annulus = Annulus {
        delta: 0.005,
        c_max: 0.1,
    };
    let mut prev_max: Option<f64> = None;
    let mut mu_mass = 0.0;
    for n in [100u32, 200, 400] {
        let set = psi_zeros(n, annulus)?;
        let pair = build_measures(&set, &gamma)?;
        mu_mass = pair.mu_limit_mass();
        let mut worst = 0.0f64;
        for (name, f) in &tests {
            let atom_sum: f64 = pair.mu_n.iter().map(|a| a.weight * f(a.re, a.im)).sum();
            let segment_sum: f64 = pair
                .mu_limit
                .iter()
                .map(|seg| {
                    let re = 1.0 + 0.5 * (seg.eps_lo + seg.eps_hi);
                    let im = 0.5 * (seg.r_lo + seg.r_hi);
                    seg.mass * f(re, im)
                })
                .sum();
            let d = (atom_sum - segment_sum).abs();
            worst = worst.max(d);
            measured.push((format!("|mu_N - mu| on {name}, N={n}"), d));
        }
        if let Some(p) = prev_max {
            decreasing &= worst < p;
        }
        prev_max = Some(worst);
        final_discrepancy = worst;
    }
    let passed = decreasing && final_discrepancy <= 0.1 * mu_mass;
    Ok(CriterionReport {
        id: "criterion-07",
        title: "zero-counting measures converge weakly to the gamma measure",
        passed,
        advisory: false,
        measured,
        notes: vec![
            "mu_N is empty for all N <= 400: the first zero reaches the supported annulus \
             |beta-1| <= 0.1 only near N = 676, so the discrepancy equals the fixed mu integral \
             at every N and cannot decrease"
                .into(),
        ],
    })
}

/// Tilted-curve point at R = 4: positive free energy at the predicted level
/// −f_{1+ε}(π/R), and |Z_β| / Z_{Re β} stabilizing.
pub fn criterion_08_theorem2_line() -> Result<CriterionReport> {
    let r = 4.0;
    let eps = theorem2_eps(r)?;
    let beta = ComplexBeta::new(1.0 + eps, r);
    let u = BigC::from_f64(std::f64::consts::PI / r, 0.0, Precision::new(40));
    let target = -f_eval(&ComplexBeta::new(1.0 + eps, 0.0), &u)?
        .value
        .to_f64_parts()
        .0;

    let ns = [100u32, 200, 400];
    let mut diffs = Vec::new();
    let mut ratios = Vec::new();
    let mut measured = vec![("eps = theorem2_eps(4)".into(), eps), ("-f_{1+eps}(pi/4)".into(), target)];
    for &n in &ns {
        let f_n = free_energy_estimate(&beta, n)?;
        diffs.push((f_n - target).abs());
        let zc = z_binomial(&beta, n)?.value.abs();
        let zr = z_binomial(&ComplexBeta::new(1.0 + eps, 0.0), n)?.value.abs();
        let ratio = (zc / zr).to_f64();
        ratios.push(ratio);
        measured.push((format!("F_{n}"), f_n));
        measured.push((format!("|Z_beta|/Z_Re(beta) at N={n}"), ratio));
    }
    let converging = diffs.windows(2).all(|w| w[1] < w[0]);
    let within = *diffs.last().unwrap() <= 0.02;
    let stable = ratios
        .windows(2)
        .all(|w| (w[1] / w[0] - 1.0).abs() <= 0.10);
    let passed = target > 0.0 && converging && within && stable;
    for (n, d) in ns.iter().zip(&diffs) {
        measured.push((format!("|F_{n} - target|"), *d));
    }
    Ok(CriterionReport {
        id: "criterion-08",
        title: "positive free energy at the predicted level on the tilted curve",
        passed,
        advisory: false,
        measured,
        notes: vec!["precision scales with N Re beta (about 150 digits at N = 400)".into()],
    })
}

/// Inequality margins on a 100 ε × 100 u grid inside the stated hypotheses
/// (R picked inside the admissible window for each ε).
pub fn criterion_09_inequality_grids() -> Result<CriterionReport> {
    let mut min_margin = f64::INFINITY;
    let mut passed = true;
    for i in 0..100 {
        // Geometric ladder over (0, π/√3072): the window [√(24ε), π/√(128ε)]
        // is nonempty exactly there.
        let t = f64::from(i) / 99.0;
        let eps = 0.002 * (0.0566f64 / 0.002).powf(t);
        let window_lo = (24.0 * eps).sqrt();
        let window_hi = std::f64::consts::PI / (128.0 * eps).sqrt();
        let r = (window_lo * window_hi).sqrt();
        let split = (8.0 * eps).sqrt();
        let us: Vec<f64> = (1..=100).map(|j| 2.5 * split * f64::from(j) / 100.0).collect();
        let report = inequality_suite(eps, r, &us)?;
        passed &= report.r_in_small_u_window && report.all_nonnegative();
        min_margin = min_margin.min(report.min_margin());
    }
    Ok(CriterionReport {
        id: "criterion-09",
        title: "explicit landscape lower bounds hold on their grids",
        passed,
        advisory: false,
        measured: vec![("min margin over all grids".into(), min_margin)],
        notes: vec!["100 eps values, R at the geometric middle of each admissible window".into()],
    })
}

/// Conjectured-transition probe. Two measurements per R ∈ {5, 10, 20}: the
/// literal scan transition of extrapolated F through 0.01 inside the ±0.025
/// window (unattainable — see notes), and the saddle-side zero crossing of
/// the limit free energy, which lands on ε₀(R) to high accuracy.
pub fn criterion_10_conjecture_probe() -> Result<CriterionReport> {
    let rs = [5.0, 10.0, 20.0];
    let curve = conjectured_curve(&rs)?;
    let mut measured = Vec::new();
    let mut notes = Vec::new();
    let mut literal_ok = true;
    let mut crossing_ok = true;

    for point in &curve.points {
        let (r, eps0) = (point.r, point.eps);
        let grid = ScanGrid {
            re_lo: 1.0 + eps0 - 0.025,
            re_hi: 1.0 + eps0 + 0.025,
            im_lo: r,
            im_hi: r,
            nx: 11,
            ny: 2,
        };
        let cfg = ScanConfig {
            grid,
            n_list: vec![100, 200, 400],
            precision_override: None,
            threads: 0,
            output_dir: None,
        };
        let result = scan(&cfg)?;
        let row = &result.points[..11];
        let left = row.first().unwrap().f_ext;
        let right = row.last().unwrap().f_ext;
        let transitions = left <= PHASE_THRESHOLD
            && right > PHASE_THRESHOLD
            && row.windows(2).any(|w| {
                w[0].f_ext <= PHASE_THRESHOLD && w[1].f_ext > PHASE_THRESHOLD
            });
        literal_ok &= transitions;
        measured.push((format!("R={r} f_ext window start"), left));
        measured.push((format!("R={r} f_ext window end"), right));

        // Saddle side: limit F = max(0, −Re f(u*)) crosses zero at ε₀.
        let mut prev: Option<(f64, f64)> = None;
        let mut crossing = f64::NAN;
        for j in 0..11 {
            let eps = eps0 - 0.025 + 0.005 * f64::from(j);
            let beta = ComplexBeta::from_eps_r(eps, r);
            let re_f = f_eval(&beta, &u_star(&beta)?.u_star)?.value.to_f64_parts().0;
            if let Some((pe, pf)) = prev {
                if pf > 0.0 && re_f <= 0.0 {
                    crossing = pe + (eps - pe) * pf / (pf - re_f);
                }
            }
            prev = Some((eps, re_f));
        }
        crossing_ok &= (crossing - eps0).abs() <= 0.005;
        measured.push((format!("R={r} limit-F zero crossing"), crossing));
        measured.push((format!("R={r} crossing offset from eps0"), crossing - eps0));
        measured.push((
            format!("R={r} limit F at window end"),
            {
                let beta = ComplexBeta::from_eps_r(eps0 + 0.025, r);
                -f_eval(&beta, &u_star(&beta)?.u_star)?.value.to_f64_parts().0
            },
        ));
    }

    notes.push(
        "the limit free energy crosses zero at eps0(R) (the substantive probe result), but its \
         slope past the curve (~0.20, 0.05, 0.01 for R = 5, 10, 20) keeps it below 0.005 across \
         the whole +-0.025 window, so no N can push extrapolated F through the 0.01 threshold \
         inside the window; the literal transition condition is unattainable and flagged"
            .into(),
    );
    notes.push(
        "finite-N F in the window is |F| <= 0.006 noise at N <= 400; Richardson output there \
         amplifies non-asymptotic structure and is reported, not asserted"
            .into(),
    );

    Ok(CriterionReport {
        id: "criterion-10",
        title: "conjectured transition probe along R in {5, 10, 20}",
        passed: literal_ok && crossing_ok,
        advisory: true,
        measured,
        notes,
    })
}

pub const REPRODUCE_IDS: &[&str] = &[
    "thm1",
    "thm2",
    "thm3",
    "cor1",
    "cor2",
    "claim-crit-curve",
    "inequalities",
    "prop21",
];

/// The criterion suite behind one `reproduce` id.
pub fn reproduce_suite(id: &str) -> Result<Vec<CriterionReport>> {
    match id {
        "prop21" => Ok(vec![
            criterion_01_oracle_equivalence()?,
            criterion_02_integral_identity()?,
        ]),
        "thm1" => Ok(vec![criterion_03_theorem1_convergence()?]),
        "thm2" => Ok(vec![criterion_08_theorem2_line()?]),
        "thm3" => Ok(vec![criterion_04_branch_formula_error_constant()?]),
        "cor1" => Ok(vec![criterion_06_corollary1_zero_pairing()?]),
        "cor2" => Ok(vec![criterion_07_corollary2_weak_convergence()?]),
        "claim-crit-curve" => Ok(vec![
            criterion_05_trichotomy()?,
            criterion_10_conjecture_probe()?,
        ]),
        "inequalities" => Ok(vec![criterion_09_inequality_grids()?]),
        other => Err(Error::Config(format!(
            "unknown reproduce id {other:?}; expected one of {REPRODUCE_IDS:?}"
        ))),
    }
}

/// Zero sets plus their matching for the CLI `zeros match` path: the Ψ
/// search and a rectangle cover of the same annulus for the exact-Z search.
pub fn matched_zero_sets(n: u32, delta: f64, c_max: f64) -> Result<(ZeroSet, ZeroSet, MatchReport)> {
    let annulus = Annulus { delta, c_max };
    let psi_set = psi_zeros(n, annulus)?;
    let mut found = Vec::new();
    for rect in annulus_cover(delta, c_max) {
        let set = z_zeros(n, rect)?;
        found.extend(set.zeros.into_iter().zip(set.residuals));
    }
    let z_set = ZeroSet {
        n,
        zeros: found.iter().map(|(z, _)| z.clone()).collect(),
        residuals: found.iter().map(|(_, r)| *r).collect(),
        source: ZeroSource::ExactZ,
        region: psi_set.region,
    };
    let report = match_zeros(&z_set, &psi_set)?;
    Ok((z_set, psi_set, report))
}
