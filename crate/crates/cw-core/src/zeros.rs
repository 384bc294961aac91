//! Zeros of the partition function and of its saddle-point surrogate Ψ_N,
//! their pairing, and the zero-counting measures supported on Γ.
//!
//! Ψ_N(β) = 1/√(1−β) + 2·√(β/(β−β²+u_β²))·e^{−N·h_β(u_β)} vanishes when the
//! oscillating term cancels the fixed one, which happens once per 2π/N of
//! Im h along Γ; the exact-Z zeros sit within O(1/N²) of Ψ's.

use rug::Float;

use crate::critical::{trace_gamma, CurveKind, CurveSegment, TRACE_EPS_MAX};
use crate::model::ComplexBeta;
use crate::model::{z_binomial_at, z_derivative_at, z_term_scale_ln};
use crate::numerics::{principal_sqrt, required_precision, BigC, Precision};
use crate::saddle::{saddle_core, MAX_BETA_DIST};
use crate::{Error, Result};

/// Ψ_N is dominated by its 1/√(1−β) singularity below this distance.
pub const PSI_MIN_DIST: f64 = 0.005;

/// Runtime cap for the rectangle search (each winding evaluation is a full
/// n-term exponential sum at O(n) digits).
pub const Z_ZEROS_MAX_N: u32 = 400;

/// Working digits for Ψ evaluations and Ψ-zero Newton; the finite-difference
/// step is 1e−(digits/3) and the keep threshold 1e−(digits/2).
const PSI_DIGITS: u32 = 60;

const MAX_SPLIT_DEPTH: usize = 48;
const MAX_PHASE_DEPTH: usize = 44;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Annulus {
    pub delta: f64,
    pub c_max: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rectangle {
    pub re_lo: f64,
    pub re_hi: f64,
    pub im_lo: f64,
    pub im_hi: f64,
}

impl Rectangle {
    pub fn new(re_lo: f64, re_hi: f64, im_lo: f64, im_hi: f64) -> Self {
        Rectangle {
            re_lo,
            re_hi,
            im_lo,
            im_hi,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = self.re_lo.is_finite()
            && self.re_hi.is_finite()
            && self.im_lo.is_finite()
            && self.im_hi.is_finite()
            && self.re_lo < self.re_hi
            && self.im_lo < self.im_hi;
        if !ok {
            return Err(Error::Config(format!(
                "degenerate zero-search rectangle [{}, {}] x [{}, {}]",
                self.re_lo, self.re_hi, self.im_lo, self.im_hi
            )));
        }
        let d = self.distance_to_one();
        if d < PSI_MIN_DIST {
            return Err(Error::Config(format!(
                "zero-search rectangle comes within {d:.4e} of beta = 1; need {PSI_MIN_DIST}"
            )));
        }
        Ok(())
    }

    /// Euclidean distance from β = 1 to the (closed) rectangle.
    fn distance_to_one(&self) -> f64 {
        let dx = (self.re_lo - 1.0).max(0.0).max(1.0 - self.re_hi);
        let dy = self.im_lo.max(0.0).max(-self.im_hi);
        dx.hypot(dy)
    }

    fn contains(&self, re: f64, im: f64) -> bool {
        re >= self.re_lo && re <= self.re_hi && im >= self.im_lo && im <= self.im_hi
    }

    /// Four children split slightly off the midlines so that a zero sitting
    /// exactly at the center of the parent cannot land on a child boundary.
    fn quadrisect(&self) -> [Rectangle; 4] {
        let cx = self.re_lo + (self.re_hi - self.re_lo) * 0.500_371_439;
        let cy = self.im_lo + (self.im_hi - self.im_lo) * 0.499_628_561;
        [
            Rectangle::new(self.re_lo, cx, self.im_lo, cy),
            Rectangle::new(cx, self.re_hi, self.im_lo, cy),
            Rectangle::new(self.re_lo, cx, cy, self.im_hi),
            Rectangle::new(cx, self.re_hi, cy, self.im_hi),
        ]
    }

    /// Boundary point at parameter t ∈ [0, 4), one unit per edge,
    /// counterclockwise from the bottom-left corner.
    fn boundary_point(&self, t: f64) -> (f64, f64) {
        let (w, h) = (self.re_hi - self.re_lo, self.im_hi - self.im_lo);
        match t.div_euclid(1.0) as usize {
            0 => (self.re_lo + w * t.rem_euclid(1.0), self.im_lo),
            1 => (self.re_hi, self.im_lo + h * t.rem_euclid(1.0)),
            2 => (self.re_hi - w * t.rem_euclid(1.0), self.im_hi),
            _ => (self.re_lo, self.im_hi - h * t.rem_euclid(1.0)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region {
    Annulus(Annulus),
    Rectangle(Rectangle),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroSource {
    ExactZ,
    Psi,
}

impl ZeroSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            ZeroSource::ExactZ => "exact-Z",
            ZeroSource::Psi => "psi",
        }
    }
}

/// Located zeros with residual certificates. For `exact-Z` sets the residual
/// is |Z| relative to the largest binomial summand (the scale against which
/// "numerically zero" is meaningful); for `psi` sets it is |Ψ_N| itself.
#[derive(Clone, Debug)]
pub struct ZeroSet {
    pub n: u32,
    pub zeros: Vec<BigC>,
    pub residuals: Vec<f64>,
    pub source: ZeroSource,
    pub region: Region,
}

#[derive(Clone, Debug)]
pub struct MatchedPair {
    pub beta_a: BigC,
    pub beta_b: BigC,
    pub distance: f64,
}

#[derive(Clone, Debug)]
pub struct MatchReport {
    pub n: u32,
    pub pairs: Vec<MatchedPair>,
    pub unmatched_a: Vec<BigC>,
    pub unmatched_b: Vec<BigC>,
    /// max over pairs of |β − β'|·n².
    pub max_scaled_distance: f64,
}

/// One atom of μ_N = (1/N)·Σ δ_β.
#[derive(Clone, Copy, Debug)]
pub struct MuAtom {
    pub re: f64,
    pub im: f64,
    pub weight: f64,
}

/// One arc of the limit measure: the Γ sub-segment from (eps_lo, r_lo) to
/// (eps_hi, r_hi) carries mass (Im-h increment)/2π.
#[derive(Clone, Copy, Debug)]
pub struct MuSegment {
    pub eps_lo: f64,
    pub r_lo: f64,
    pub eps_hi: f64,
    pub r_hi: f64,
    pub mass: f64,
}

#[derive(Clone, Debug)]
pub struct MeasurePair {
    pub n: u32,
    pub mu_n: Vec<MuAtom>,
    pub mu_limit: Vec<MuSegment>,
}

impl MeasurePair {
    pub fn mu_n_mass(&self) -> f64 {
        self.mu_n.iter().map(|a| a.weight).sum()
    }

    pub fn mu_limit_mass(&self) -> f64 {
        self.mu_limit.iter().map(|s| s.mass).sum()
    }
}

/// Ψ_N(β) at f64 β.
pub fn psi(beta: &ComplexBeta, n: u32) -> Result<BigC> {
    let (singular, oscillating) = psi_terms(beta, n)?;
    Ok(&singular + &oscillating)
}

/// The two terms of Ψ_N separately: the fixed singular term 1/√(1−β) and
/// the oscillating saddle term 2·√(β/(β−β²+u_β²))·e^{−N·h_β(u_β)}.
pub fn psi_terms(beta: &ComplexBeta, n: u32) -> Result<(BigC, BigC)> {
    let dist = beta.abs_minus_one();
    if dist < PSI_MIN_DIST {
        return Err(Error::PsiSingularityProximity {
            dist,
            min: PSI_MIN_DIST,
        });
    }
    psi_terms_at(&beta.to_bigc(Precision::new(PSI_DIGITS)), n)
}

fn psi_terms_at(b: &BigC, n: u32) -> Result<(BigC, BigC)> {
    let core = saddle_core(b, MAX_BETA_DIST)?;
    let one = BigC::one(b.precision());
    let singular = principal_sqrt(&(&one - b)).recip();
    let u2 = core.u.square();
    let b2 = b.square();
    let denom = &(b - &b2) + &u2;
    let prefactor = principal_sqrt(&(b / &denom)).scale_pow2(1);
    let oscillating = core.h_value.mul_f64(-f64::from(n)).exp();
    Ok((singular, &prefactor * &oscillating))
}

/// Ψ_N at an arbitrary high-precision β (Newton steps go far below f64).
fn psi_at(b: &BigC, n: u32) -> Result<BigC> {
    let (singular, oscillating) = psi_terms_at(b, n)?;
    Ok(&singular + &oscillating)
}

/// Newton on Ψ_N with the derivative by finite differences; returns the
/// converged zero and |Ψ| there, or None if the iteration never brings |Ψ|
/// under the keep threshold (10^−(digits/2)).
fn newton_psi(mut b: BigC, n: u32) -> Option<(BigC, f64)> {
    let prec = b.precision();
    let fd = BigC::from_f64(1e-20, 0.0, prec);
    let keep = Float::with_val(64, 1e-30);
    for _ in 0..40 {
        let v = psi_at(&b, n).ok()?;
        let va = v.abs();
        if va <= keep {
            return Some((b, va.to_f64()));
        }
        let vp = psi_at(&(&b + &fd), n).ok()?;
        let dv = &(&vp - &v) / &fd;
        if dv.is_zero() {
            return None;
        }
        b = &b - &(&v / &dv);
    }
    None
}

struct GammaRow {
    dist: f64,
    eps: f64,
    r: f64,
    im_h: f64,
}

fn gamma_rows(eps_top: f64) -> Result<Vec<GammaRow>> {
    let curve = trace_gamma(eps_top, eps_top / 80.0)?;
    Ok(curve
        .points
        .iter()
        .map(|p| GammaRow {
            dist: p.eps.hypot(p.r),
            eps: p.eps,
            r: p.r,
            im_h: p.im_h,
        })
        .collect())
}

/// Linear interpolation of Im h along Γ as a function of |β−1| (both are
/// strictly increasing along the trace).
fn im_h_at_dist(rows: &[GammaRow], d: f64) -> f64 {
    if d <= rows[0].dist {
        return rows[0].im_h * d / rows[0].dist;
    }
    for w in rows.windows(2) {
        if d <= w[1].dist {
            let t = (d - w[0].dist) / (w[1].dist - w[0].dist);
            return w[0].im_h + t * (w[1].im_h - w[0].im_h);
        }
    }
    rows.last().unwrap().im_h
}

/// The Γ point (as ε, R) at a prescribed Im h payload.
fn gamma_point_at_im_h(rows: &[GammaRow], target: f64) -> (f64, f64) {
    if target <= rows[0].im_h {
        let t = target / rows[0].im_h;
        return (rows[0].eps * t, rows[0].r * t);
    }
    for w in rows.windows(2) {
        if target <= w[1].im_h {
            let t = (target - w[0].im_h) / (w[1].im_h - w[0].im_h);
            return (w[0].eps + t * (w[1].eps - w[0].eps), w[0].r + t * (w[1].r - w[0].r));
        }
    }
    let last = rows.last().unwrap();
    (last.eps, last.r)
}

/// Zeros of Ψ_N inside the annulus δ ≤ |β−1| ≤ c_max (upper and lower).
///
/// Writing the fixed term as A and the oscillating one as B·e^{−N·h}, zeros
/// require e^{−iN·Im h} to cancel the phase of A/B, which is π/2 to leading
/// order; so the k-th zero sits near the Γ point with
/// Im h = (2πk − π/2)/N, and that is where Newton is seeded. (Seeding at
/// 2πk/N exactly — the crossing count heuristic — places the seed half a
/// basin away and loses the outermost zero whenever 2πk/N exceeds the
/// annulus's Im-h range while (2πk − π/2)/N does not.)
pub fn psi_zeros(n: u32, annulus: Annulus) -> Result<ZeroSet> {
    if n == 0 {
        return Err(Error::Config("psi_zeros needs n >= 1".into()));
    }
    let Annulus { delta, c_max } = annulus;
    let ok = delta.is_finite()
        && c_max.is_finite()
        && delta >= PSI_MIN_DIST - 1e-12
        && c_max <= MAX_BETA_DIST + 1e-12
        && delta < c_max;
    if !ok {
        return Err(Error::AnnulusRange {
            lo: delta,
            hi: c_max,
            min: PSI_MIN_DIST,
            max: MAX_BETA_DIST,
        });
    }

    let eps_top = (0.75 * c_max).min(TRACE_EPS_MAX);
    let rows = gamma_rows(eps_top)?;
    let im_h_inner = im_h_at_dist(&rows, delta);
    let im_h_top = im_h_at_dist(&rows, c_max);

    let nf = f64::from(n);
    let mut seeds = Vec::new();
    let mut k = 1u32;
    loop {
        let target = (2.0 * std::f64::consts::PI * f64::from(k) - std::f64::consts::FRAC_PI_2) / nf;
        if target > im_h_top {
            break;
        }
        if target >= im_h_inner {
            let (eps, r) = gamma_point_at_im_h(&rows, target);
            seeds.push((k, eps, r));
        }
        k += 1;
    }

    let prec = Precision::new(PSI_DIGITS);
    let locate = |&(k, eps, r): &(u32, f64, f64)| -> Option<(BigC, f64)> {
        let seed = ComplexBeta::from_eps_r(eps, r).to_bigc(prec);
        let (zero, residual) = newton_psi(seed, n)?;
        let (zre, zim) = zero.to_f64_parts();
        let dist = (zre - 1.0).hypot(zim);
        if !(delta - 1e-12..=c_max + 1e-12).contains(&dist) || zim <= 0.0 {
            eprintln!(
                "psi_zeros: k = {k} Newton escaped the annulus (landed at |beta-1| = {dist:.4});\
                 dropping"
            );
            return None;
        }
        Some((zero, residual))
    };

    #[cfg(feature = "parallel")]
    let hits: Vec<(BigC, f64)> = {
        use rayon::prelude::*;
        seeds.par_iter().filter_map(locate).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let hits: Vec<(BigC, f64)> = seeds.iter().filter_map(locate).collect();

    let mut found = hits;
    let mirrored: Vec<(BigC, f64)> = found.iter().map(|(z, r)| (z.conj(), *r)).collect();
    found.extend(mirrored);
    Ok(assemble(
        n,
        found,
        ZeroSource::Psi,
        Region::Annulus(annulus),
    ))
}

/// Deterministic merge: lexicographic (Re, Im) order, near-duplicates
/// (distinct seeds or cells converging to one zero) collapsed.
fn assemble(n: u32, mut found: Vec<(BigC, f64)>, source: ZeroSource, region: Region) -> ZeroSet {
    found.sort_by(|a, b| {
        let (ar, ai) = a.0.to_f64_parts();
        let (br, bi) = b.0.to_f64_parts();
        ar.total_cmp(&br).then(ai.total_cmp(&bi))
    });
    let dedupe = 0.05 / f64::from(n);
    let mut zeros: Vec<BigC> = Vec::new();
    let mut residuals = Vec::new();
    for (z, r) in found {
        if let Some(last) = zeros.last() {
            if (&z - last).abs().to_f64() < dedupe {
                continue;
            }
        }
        zeros.push(z);
        residuals.push(r);
    }
    ZeroSet {
        n,
        zeros,
        residuals,
        source,
        region,
    }
}

/// Zeros of the exact Z_{β,N} inside a rectangle, by the argument principle:
/// the winding number of Z around each cell is computed by adaptive phase
/// tracking (refining until successive increments are < π/2), cells with
/// more than one zero are quadrisected, and single zeros are polished by
/// Newton with the term-wise derivative.
pub fn z_zeros(n: u32, rect: Rectangle) -> Result<ZeroSet> {
    if n == 0 || n > Z_ZEROS_MAX_N {
        return Err(Error::ZeroSearchCap {
            n,
            max: Z_ZEROS_MAX_N,
        });
    }
    rect.validate()?;
    let prec = required_precision(&ComplexBeta::new(rect.re_hi, 0.0), n);
    let found = search_cells(&rect, n, prec, MAX_SPLIT_DEPTH)?;
    Ok(assemble(
        n,
        found,
        ZeroSource::ExactZ,
        Region::Rectangle(rect),
    ))
}

fn search_cells(
    rect: &Rectangle,
    n: u32,
    prec: Precision,
    depth: usize,
) -> Result<Vec<(BigC, f64)>> {
    let w = winding_number_prec(rect, n, prec)?;
    if w == 0 {
        return Ok(Vec::new());
    }
    if w == 1 {
        if let Some((zero, residual)) = newton_z(rect, n, prec) {
            let (zre, zim) = zero.to_f64_parts();
            if rect.contains(zre, zim) {
                return Ok(vec![(zero, residual)]);
            }
        }
    }
    if depth == 0 {
        return Err(Error::WindingUnresolved(format!(
            "cell [{:.6}, {:.6}] x [{:.6}, {:.6}]",
            rect.re_lo, rect.re_hi, rect.im_lo, rect.im_hi
        )));
    }
    let kids = rect.quadrisect();
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let parts = kids
            .par_iter()
            .map(|k| search_cells(k, n, prec, depth - 1))
            .collect::<Result<Vec<_>>>()?;
        Ok(parts.concat())
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut out = Vec::new();
        for k in &kids {
            out.extend(search_cells(k, n, prec, depth - 1)?);
        }
        Ok(out)
    }
}

#[cfg(test)]
pub(crate) fn winding_number(n: u32, rect: &Rectangle) -> Result<i32> {
    let prec = required_precision(&ComplexBeta::new(rect.re_hi, 0.0), n);
    winding_number_prec(rect, n, prec)
}

fn winding_number_prec(rect: &Rectangle, n: u32, prec: Precision) -> Result<i32> {
    let arg_at = |t: f64| -> Result<f64> {
        let (re, im) = rect.boundary_point(t);
        let z = z_binomial_at(&BigC::from_f64(re, im, prec), n);
        // A numerically-vanishing Z on the boundary makes the phase
        // meaningless; the caller's subdivision offsets make this transient.
        let scale_ln = z_term_scale_ln(&ComplexBeta::new(re, im), n);
        let ln_rel = z.abs().ln().to_f64() - scale_ln;
        if ln_rel < -(f64::from(prec.decimal_digits()) / 2.0) * std::f64::consts::LN_10 {
            return Err(Error::WindingUnresolved(format!(
                "|Z| vanishes on the boundary near ({re:.6}, {im:.6})"
            )));
        }
        Ok(Float::with_val(64, z.im())
            .atan2(&Float::with_val(64, z.re()))
            .to_f64())
    };

    let mut knots: Vec<(f64, f64)> = Vec::with_capacity(33);
    for i in 0..32 {
        let t = f64::from(i) / 8.0;
        knots.push((t, arg_at(t)?));
    }
    knots.push((4.0, knots[0].1));

    let mut total = 0.0;
    for pair in knots.windows(2) {
        let (t0, p0) = pair[0];
        let (t1, p1) = pair[1];
        total += phase_increment(&arg_at, t0, p0, t1, p1, MAX_PHASE_DEPTH)?;
    }
    let w = total / (2.0 * std::f64::consts::PI);
    let rounded = w.round();
    if (w - rounded).abs() > 0.1 {
        return Err(Error::WindingUnresolved(format!(
            "boundary phase sums to {w:.3} turns"
        )));
    }
    Ok(rounded as i32)
}

fn phase_increment(
    arg_at: &dyn Fn(f64) -> Result<f64>,
    t0: f64,
    p0: f64,
    t1: f64,
    p1: f64,
    depth: usize,
) -> Result<f64> {
    let mut d = p1 - p0;
    while d > std::f64::consts::PI {
        d -= 2.0 * std::f64::consts::PI;
    }
    while d <= -std::f64::consts::PI {
        d += 2.0 * std::f64::consts::PI;
    }
    if d.abs() < std::f64::consts::FRAC_PI_2 {
        return Ok(d);
    }
    if depth == 0 {
        return Err(Error::WindingUnresolved(format!(
            "phase jump of {d:.3} rad between t = {t0:.9} and {t1:.9}"
        )));
    }
    let tm = 0.5 * (t0 + t1);
    let pm = arg_at(tm)?;
    Ok(phase_increment(arg_at, t0, p0, tm, pm, depth - 1)?
        + phase_increment(arg_at, tm, pm, t1, p1, depth - 1)?)
}

/// Newton on Z from the cell center. Convergence is judged on the residual
/// |Z| relative to the largest binomial summand; the returned residual is
/// that ratio.
fn newton_z(rect: &Rectangle, n: u32, prec: Precision) -> Option<(BigC, f64)> {
    let cx = 0.5 * (rect.re_lo + rect.re_hi);
    let cy = 0.5 * (rect.im_lo + rect.im_hi);
    let b = BigC::from_f64(cx, cy, prec);
    let margin_x = rect.re_hi - rect.re_lo;
    let margin_y = rect.im_hi - rect.im_lo;
    let roam = Rectangle::new(
        rect.re_lo - margin_x,
        rect.re_hi + margin_x,
        rect.im_lo - margin_y,
        rect.im_hi + margin_y,
    );
    newton_z_from(b, n, prec, |re, im| roam.contains(re, im))
}

fn newton_z_from(
    mut b: BigC,
    n: u32,
    prec: Precision,
    keep_going: impl Fn(f64, f64) -> bool,
) -> Option<(BigC, f64)> {
    let target = -(f64::from(prec.decimal_digits()) / 2.0) * std::f64::consts::LN_10;
    for _ in 0..60 {
        let (re, im) = b.to_f64_parts();
        if !keep_going(re, im) {
            return None;
        }
        let v = z_binomial_at(&b, n);
        let ln_rel = v.abs().ln().to_f64() - z_term_scale_ln(&ComplexBeta::new(re, im), n);
        if ln_rel <= target {
            return Some((b, ln_rel.exp()));
        }
        let d = z_derivative_at(&b, n);
        if d.is_zero() {
            return None;
        }
        b = &b - &(&v / &d);
    }
    None
}

/// Polishes a single zero of the exact Z from an externally supplied seed
/// (typically a Ψ zero), without the rectangle machinery or its n cap.
pub fn refine_z_zero(seed: &ComplexBeta, n: u32) -> Result<(BigC, f64)> {
    if n == 0 {
        return Err(Error::Config("zero refinement needs n >= 1".into()));
    }
    let prec = required_precision(seed, n);
    let b = seed.to_bigc(prec);
    let (s_re, s_im) = (seed.re(), seed.im());
    match newton_z_from(b, n, prec, |re, im| {
        (re - s_re).hypot(im - s_im) <= 0.05
    }) {
        Some(hit) => Ok(hit),
        None => Err(Error::ZeroRefinement {
            re: s_re,
            im: s_im,
        }),
    }
}

/// Mutual-nearest-neighbor pairing of two zero sets of the same n and
/// region. Distances are reported raw and scaled by n².
pub fn match_zeros(a: &ZeroSet, b: &ZeroSet) -> Result<MatchReport> {
    if a.n != b.n || a.region != b.region {
        return Err(Error::MatchScopeMismatch);
    }
    let dist = |x: &BigC, y: &BigC| (x - y).abs().to_f64();
    let nearest = |z: &BigC, pool: &[BigC]| -> Option<usize> {
        pool.iter()
            .enumerate()
            .map(|(j, y)| (j, dist(z, y)))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .map(|(j, _)| j)
    };

    let mut pairs = Vec::new();
    let mut used_a = vec![false; a.zeros.len()];
    let mut used_b = vec![false; b.zeros.len()];
    for (i, za) in a.zeros.iter().enumerate() {
        let Some(j) = nearest(za, &b.zeros) else {
            continue;
        };
        if nearest(&b.zeros[j], &a.zeros) == Some(i) {
            pairs.push(MatchedPair {
                beta_a: za.clone(),
                beta_b: b.zeros[j].clone(),
                distance: dist(za, &b.zeros[j]),
            });
            used_a[i] = true;
            used_b[j] = true;
        }
    }
    let nf = f64::from(a.n);
    let max_scaled_distance = pairs
        .iter()
        .map(|p| p.distance * nf * nf)
        .fold(0.0, f64::max);
    let unmatched_a = a
        .zeros
        .iter()
        .zip(&used_a)
        .filter(|(_, u)| !**u)
        .map(|(z, _)| z.clone())
        .collect();
    let unmatched_b = b
        .zeros
        .iter()
        .zip(&used_b)
        .filter(|(_, u)| !**u)
        .map(|(z, _)| z.clone())
        .collect();
    Ok(MatchReport {
        n: a.n,
        pairs,
        unmatched_a,
        unmatched_b,
        max_scaled_distance,
    })
}

/// μ_N (atoms of weight 1/N at the zeros) together with the limit measure on
/// Γ: each sub-segment carries its Im-h increment over 2π, and the whole is
/// extended to the lower half-plane by conjugation symmetry.
pub fn build_measures(zs: &ZeroSet, gamma: &CurveSegment) -> Result<MeasurePair> {
    if gamma.kind != CurveKind::Gamma || gamma.points.is_empty() {
        return Err(Error::Config(
            "build_measures needs a nonempty gamma-kind curve".into(),
        ));
    }
    let need = zs
        .zeros
        .iter()
        .map(|z| z.to_f64_parts().0 - 1.0)
        .fold(0.0, f64::max);
    let have = gamma.points.last().unwrap().eps;
    if need > have + 1e-12 {
        return Err(Error::GammaCoverage { need, have });
    }

    let nf = f64::from(zs.n);
    let mu_n = zs
        .zeros
        .iter()
        .map(|z| {
            let (re, im) = z.to_f64_parts();
            MuAtom {
                re,
                im,
                weight: 1.0 / nf,
            }
        })
        .collect();

    let two_pi = 2.0 * std::f64::consts::PI;
    let mut upper = Vec::with_capacity(gamma.points.len());
    let first = &gamma.points[0];
    upper.push(MuSegment {
        eps_lo: 0.0,
        r_lo: 0.0,
        eps_hi: first.eps,
        r_hi: first.r,
        mass: first.im_h / two_pi,
    });
    for w in gamma.points.windows(2) {
        upper.push(MuSegment {
            eps_lo: w[0].eps,
            r_lo: w[0].r,
            eps_hi: w[1].eps,
            r_hi: w[1].r,
            mass: (w[1].im_h - w[0].im_h) / two_pi,
        });
    }
    let mut mu_limit = upper.clone();
    mu_limit.extend(upper.iter().map(|s| MuSegment {
        eps_lo: s.eps_lo,
        r_lo: -s.r_lo,
        eps_hi: s.eps_hi,
        r_hi: -s.r_hi,
        mass: s.mass,
    }));
    Ok(MeasurePair {
        n: zs.n,
        mu_n,
        mu_limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::saddle::find_u_beta;

    #[test]
    fn psi_domain_and_conjugation() {
        assert!(matches!(
            psi(&ComplexBeta::new(1.001, 0.003), 100),
            Err(Error::PsiSingularityProximity { .. })
        ));
        assert!(matches!(
            psi(&ComplexBeta::new(1.12, 0.05), 100),
            Err(Error::SaddleNeighborhood { .. })
        ));

        let beta = ComplexBeta::new(1.03, 0.06);
        let upper = psi(&beta, 150).unwrap();
        let lower = psi(&beta.conj(), 150).unwrap();
        assert!((&lower - &upper.conj()).abs().to_f64() < 1e-35);
    }

    #[test]
    fn psi_collapses_to_the_singular_term_where_re_h_is_positive() {
        // Re β < 1 but Re h(u_β) > 0: the oscillating term dies like
        // e^{−N·Re h}, leaving 1/√(1−β).
        let beta = ComplexBeta::new(0.98, 0.0979);
        let prec = Precision::new(PSI_DIGITS);
        let one = BigC::one(prec);
        let a = principal_sqrt(&(&one - &beta.to_bigc(prec))).recip();
        let gap = |n: u32| (&psi(&beta, n).unwrap() - &a).abs().to_f64();
        let g400 = gap(400);
        let g800 = gap(800);
        assert!(g800 < 0.08 * g400, "g400 = {g400:.3e}, g800 = {g800:.3e}");
        assert!(g800 < 0.05 * a.abs().to_f64());
    }

    #[test]
    fn psi_terms_balance_on_gamma() {
        let curve = trace_gamma(0.05, 0.025).unwrap();
        for p in &curve.points {
            let prec = Precision::new(PSI_DIGITS);
            let b = p.beta.to_bigc(prec);
            let one = BigC::one(prec);
            let t1 = principal_sqrt(&(&one - &b)).recip().abs().to_f64();
            let sd = find_u_beta(&p.beta, prec).unwrap();
            let u2 = sd.u_beta.square();
            let b2 = b.square();
            let denom = &(&b - &b2) + &u2;
            let t2 = principal_sqrt(&(&b / &denom)).scale_pow2(1).abs().to_f64();
            // |e^{−Nh}| = 1 on the curve, so the balance is N-free.
            let ratio = t2 / t1;
            assert!(
                (0.25..=4.0).contains(&ratio),
                "term ratio {ratio:.3} at eps = {}",
                p.eps
            );
        }
    }

    #[test]
    fn psi_zeros_at_n800_match_frozen_locations() {
        let set = psi_zeros(
            800,
            Annulus {
                delta: 0.005,
                c_max: 0.1,
            },
        )
        .unwrap();
        assert_eq!(set.zeros.len(), 2, "expected the m = 1 pair only");
        let (lo_re, lo_im) = set.zeros[0].to_f64_parts();
        let (hi_re, hi_im) = set.zeros[1].to_f64_parts();
        // Lexicographic order puts the lower-half zero first here? Both have
        // the same Re, so order is by Im: conjugate then upper.
        assert!(lo_im < 0.0 && hi_im > 0.0);
        assert!((hi_re - 1.059382207754332).abs() < 1e-8);
        assert!((hi_im - 0.06978010396533985).abs() < 1e-8);
        assert!((lo_re - hi_re).abs() < 1e-12 && (lo_im + hi_im).abs() < 1e-12);
        for (z, r) in set.zeros.iter().zip(&set.residuals) {
            assert!(*r <= 1e-30);
            assert!(z.to_f64_parts().0 > 1.0, "psi zero with Re <= 1");
        }
        let sep = (&set.zeros[0] - &set.zeros[1]).abs().to_f64();
        assert!(sep >= 0.1 / 800.0);
    }

    #[test]
    fn psi_zero_count_and_gamma_proximity() {
        let annulus = Annulus {
            delta: 0.005,
            c_max: 0.1,
        };
        // Below the first-zero threshold the annulus is empty of zeros.
        assert!(psi_zeros(200, annulus).unwrap().zeros.is_empty());
        assert!(psi_zeros(600, annulus).unwrap().zeros.is_empty());
        // (3π/2)/700 just clears the Im-h range: the m = 1 pair appears.
        assert_eq!(psi_zeros(700, annulus).unwrap().zeros.len(), 2);

        let set = psi_zeros(2000, annulus).unwrap();
        assert_eq!(set.zeros.len(), 4, "m = 1, 2 and conjugates");

        // Every zero within 5/N of the traced curve, and the gap shrinks
        // with N.
        let rows = gamma_rows(0.075).unwrap();
        let gamma_gap = |set: &ZeroSet| -> f64 {
            set.zeros
                .iter()
                .map(|z| {
                    let (re, im) = z.to_f64_parts();
                    rows.iter()
                        .map(|row| (re - 1.0 - row.eps).hypot(im.abs() - row.r))
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max)
        };
        let d2000 = gamma_gap(&set);
        assert!(d2000 <= 5.0 / 2000.0, "zero strays {d2000:.2e} from gamma");
        let d800 = gamma_gap(&psi_zeros(800, annulus).unwrap());
        assert!(d2000 < d800, "gamma gap did not shrink: {d800:.2e} -> {d2000:.2e}");
    }

    #[test]
    fn psi_zeros_domain_errors() {
        let bad = |d: f64, c: f64| psi_zeros(500, Annulus { delta: d, c_max: c });
        assert!(matches!(bad(0.001, 0.05), Err(Error::AnnulusRange { .. })));
        assert!(matches!(bad(0.01, 0.2), Err(Error::AnnulusRange { .. })));
        assert!(matches!(bad(0.05, 0.01), Err(Error::AnnulusRange { .. })));
    }

    /// n = 2: Z = (e^β + 1)/2 exactly, zeros at iπ(2m+1).
    /// n = 3: Z = (e^{3β/2} + 3e^{β/6})/4, zeros at (3/4)(ln 3 + iπ(2m+1)).
    #[test]
    fn z_zeros_land_on_closed_form_roots() {
        let set = z_zeros(2, Rectangle::new(-0.4, 0.4, 2.7, 3.5)).unwrap();
        assert_eq!(set.zeros.len(), 1);
        let (re, im) = set.zeros[0].to_f64_parts();
        assert!(re.abs() < 1e-12 && (im - std::f64::consts::PI).abs() < 1e-12);
        assert!(set.residuals[0] <= 1e-14);

        let set = z_zeros(3, Rectangle::new(0.6, 1.1, 2.1, 2.6)).unwrap();
        assert_eq!(set.zeros.len(), 1);
        let (re, im) = set.zeros[0].to_f64_parts();
        let want_re = 0.75 * 3f64.ln();
        let want_im = 0.75 * std::f64::consts::PI;
        assert!((re - want_re).abs() < 1e-12 && (im - want_im).abs() < 1e-12);

        let mirror = z_zeros(3, Rectangle::new(0.6, 1.1, -2.6, -2.1)).unwrap();
        assert_eq!(mirror.zeros.len(), 1);
        let (mre, mim) = mirror.zeros[0].to_f64_parts();
        assert!((mre - re).abs() < 1e-12 && (mim + im).abs() < 1e-12);
    }

    #[test]
    fn z_zeros_quadrisection_separates_a_double_cell() {
        let set = z_zeros(2, Rectangle::new(-0.4, 0.4, 2.7, 9.7)).unwrap();
        assert_eq!(set.zeros.len(), 2);
        let mut ims: Vec<f64> = set.zeros.iter().map(|z| z.to_f64_parts().1).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] - std::f64::consts::PI).abs() < 1e-12);
        assert!((ims[1] - 3.0 * std::f64::consts::PI).abs() < 1e-12);
        for (z, r) in set.zeros.iter().zip(&set.residuals) {
            assert!(z.to_f64_parts().0.abs() < 1e-12);
            assert!(*r <= 1e-14);
        }
    }

    #[test]
    fn winding_numbers_are_additive_over_partitions() {
        let rect = Rectangle::new(0.6, 1.1, 2.1, 2.6);
        let whole = winding_number(3, &rect).unwrap();
        assert_eq!(whole, 1);
        let parts: i32 = rect
            .quadrisect()
            .iter()
            .map(|r| winding_number(3, r).unwrap())
            .sum();
        assert_eq!(parts, whole);

        // Z > 0 on the real axis: a flat box around it has winding 0.
        let flat = Rectangle::new(1.2, 2.0, -0.001, 0.001);
        assert_eq!(winding_number(50, &flat).unwrap(), 0);
    }

    #[test]
    fn z_zero_free_regions_stay_empty() {
        // Re β < 1 within the annulus radii: no zeros at either n.
        let left = Rectangle::new(0.93, 0.98, -0.03, 0.03);
        for n in [100, 200] {
            assert!(z_zeros(n, left).unwrap().zeros.is_empty());
        }
        // The upper half of the 0.02..0.08 annulus at n = 200: zeros only
        // appear at |β−1| ~ 2.5/√n ≈ 0.18, so this is empty too.
        let upper = Rectangle::new(0.92, 1.08, 0.005, 0.08);
        assert!(z_zeros(200, upper).unwrap().zeros.is_empty());
    }

    #[test]
    fn z_zeros_domain_errors() {
        let rect = Rectangle::new(1.2, 1.4, 0.1, 0.3);
        assert!(matches!(
            z_zeros(500, rect),
            Err(Error::ZeroSearchCap { max: 400, .. })
        ));
        assert!(matches!(
            z_zeros(100, Rectangle::new(0.999, 1.001, -0.001, 0.001)),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            z_zeros(100, Rectangle::new(1.4, 1.2, 0.1, 0.3)),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn z_certificates_survive_extra_guard_digits() {
        let set = z_zeros(3, Rectangle::new(0.6, 1.1, 2.1, 2.6)).unwrap();
        let zero = &set.zeros[0];
        let n = set.n;
        let prec = required_precision(&ComplexBeta::new(1.1, 0.0), n);
        let guarded = Precision::new(prec.decimal_digits() + 20);
        let z = z_binomial_at(&zero.with_precision(guarded), n);
        let (re, im) = zero.to_f64_parts();
        let rel = (z.abs().ln().to_f64() - z_term_scale_ln(&ComplexBeta::new(re, im), n)).exp();
        assert!(rel <= 10.0 * set.residuals[0].max(1e-30));
    }

    fn synthetic_set(n: u32, pts: &[(f64, f64)], region: Region) -> ZeroSet {
        let prec = Precision::new(40);
        ZeroSet {
            n,
            zeros: pts
                .iter()
                .map(|&(re, im)| BigC::from_f64(re, im, prec))
                .collect(),
            residuals: vec![0.0; pts.len()],
            source: ZeroSource::ExactZ,
            region,
        }
    }

    #[test]
    fn match_zeros_identity_disjoint_and_mutuality() {
        let region = Region::Annulus(Annulus {
            delta: 0.005,
            c_max: 0.1,
        });
        let a = synthetic_set(100, &[(1.02, 0.03), (1.02, -0.03)], region);
        let same = match_zeros(&a, &a).unwrap();
        assert_eq!(same.pairs.len(), 2);
        assert!(same.max_scaled_distance == 0.0);
        assert!(same.unmatched_a.is_empty() && same.unmatched_b.is_empty());

        let far = synthetic_set(100, &[(1.09, 0.005)], region);
        let rep = match_zeros(&a, &far).unwrap();
        // (1.02, 0.03) is mutual-nearest with the single far zero; its
        // conjugate stays unmatched.
        assert_eq!(rep.pairs.len(), 1);
        assert_eq!(rep.unmatched_a.len(), 1);
        assert!(rep.unmatched_b.is_empty());

        // Non-mutual pairs are excluded: 0 <-> 0.4 is mutual, but 1.0's
        // nearest (0.45) prefers 0.4's partner.
        let xs = synthetic_set(100, &[(0.0, 1.0), (1.0, 1.0)], region);
        let ys = synthetic_set(100, &[(0.4, 1.0), (0.45, 1.0)], region);
        let rep = match_zeros(&xs, &ys).unwrap();
        assert_eq!(rep.pairs.len(), 1);
        assert!((rep.pairs[0].distance - 0.4).abs() < 1e-15);
        assert_eq!(rep.unmatched_a.len(), 1);
        assert_eq!(rep.unmatched_b.len(), 1);

        let other_n = synthetic_set(200, &[(1.02, 0.03)], region);
        assert!(matches!(
            match_zeros(&a, &other_n),
            Err(Error::MatchScopeMismatch)
        ));
    }

    #[test]
    fn measures_mass_accounting_and_coverage() {
        let set = psi_zeros(
            800,
            Annulus {
                delta: 0.005,
                c_max: 0.1,
            },
        )
        .unwrap();
        let gamma = trace_gamma(0.071, 0.071 / 60.0).unwrap();
        let pair = build_measures(&set, &gamma).unwrap();

        // μ_N mass is exactly count/N.
        assert!((pair.mu_n_mass() - 2.0 / 800.0).abs() < 1e-15);
        // Total μ mass telescopes to 2·(outer Im h)/2π.
        let top = gamma.points.last().unwrap().im_h;
        assert!((pair.mu_limit_mass() - top / std::f64::consts::PI).abs() < 1e-15);
        // The two masses agree to O(1/N) on the annulus.
        assert!((pair.mu_n_mass() - pair.mu_limit_mass()).abs() <= 3.0 / 800.0);

        let short = trace_gamma(0.03, 0.01).unwrap();
        assert!(matches!(
            build_measures(&set, &short),
            Err(Error::GammaCoverage { .. })
        ));
        let wrong_kind = CurveSegment {
            kind: CurveKind::Conjectured,
            points: gamma.points.clone(),
        };
        assert!(matches!(
            build_measures(&set, &wrong_kind),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn refine_z_zero_tracks_the_psi_zero_at_n800() {
        let seed = ComplexBeta::new(1.059382207754332, 0.06978010396533985);
        let (zero, residual) = refine_z_zero(&seed, 800).unwrap();
        let (re, im) = zero.to_f64_parts();
        assert!((re - 1.0599123851779644).abs() < 1e-7, "re = {re:.12}");
        assert!((im - 0.070289920866777).abs() < 1e-7, "im = {im:.12}");
        assert!(residual < 1e-40);
        let gap = (re - seed.re()).hypot(im - seed.im());
        assert!((6e-4..9e-4).contains(&gap), "|z - psi| = {gap:.3e}");
    }
}
