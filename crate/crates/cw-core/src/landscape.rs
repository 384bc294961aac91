//! The saddle landscapes `f_β`, `h_β`, their local Taylor models, the
//! explicit real-axis lower bounds on `Re f_β`, and certified truncation
//! radii for the integral representation.
//!
//! Both landscapes use the principal branch of `log cosh`. Evaluations that
//! come too close to a zero of `cosh` are rejected rather than silently
//! switching branches: every algorithm in this crate operates away from the
//! poles, so proximity indicates a caller bug, not a need for continuation.

use std::f64::consts::{LN_10, PI};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::model::ComplexBeta;
use crate::numerics::{BigC, Precision};
use crate::{Error, Result};

/// Which of the two landscapes an evaluation belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    /// `f_β(u) = βu²/2 − log cosh(βu)`, the variable of the direct integral.
    F,
    /// `h_β(u) = u²/(2β) − log cosh u`, the rescaled variable `v = βu`.
    H,
}

/// Value and first two derivatives of a landscape at one point.
#[derive(Clone, Debug)]
pub struct LandscapeEval {
    pub u: BigC,
    pub value: BigC,
    pub d1: BigC,
    pub d2: BigC,
    pub form: Form,
}

/// Evaluates `f_β(u) = βu²/2 − log cosh(βu)` with its first two derivatives.
///
/// `f` is entire in `β`; the integral representation additionally needs
/// `Re β > 0`, which is enforced by the quadrature module, not here.
pub fn f_eval(beta: &ComplexBeta, u: &BigC) -> Result<LandscapeEval> {
    let b = beta.to_bigc(u.precision());
    let (value, d1, d2) = f_parts(&b, u)?;
    Ok(LandscapeEval {
        u: u.clone(),
        value,
        d1,
        d2,
        form: Form::F,
    })
}

/// Evaluates `h_β(u) = u²/(2β) − log cosh u` with its first two derivatives.
///
/// Off the real axis the principal branch is only well defined for
/// `|u| < π/2`; real `u` is unrestricted.
pub fn h_eval(beta: &ComplexBeta, u: &BigC) -> Result<LandscapeEval> {
    check_h_domain(u)?;
    let b = beta.to_bigc(u.precision());
    let (value, d1, d2) = h_parts(&b, u)?;
    Ok(LandscapeEval {
        u: u.clone(),
        value,
        d1,
        d2,
        form: Form::H,
    })
}

/// `(f, f', f'')` at `u` for a `β` already lifted to working precision.
///
/// Saddle and zero finders use this directly so that Newton steps smaller
/// than an f64 ulp of `β` remain representable.
pub(crate) fn f_parts(b: &BigC, u: &BigC) -> Result<(BigC, BigC, BigC)> {
    let w = b * u;
    let c = w.cosh();
    guard_pole(&c, u.precision())?;
    let t = w.tanh();
    let one = BigC::one(u.precision());
    let value = &(b * &u.square()).scale_pow2(-1) - &c.ln();
    let d1 = b * &(u - &t);
    let d2 = b - &(&b.square() * &(&one - &t.square()));
    Ok((value, d1, d2))
}

/// `(h, h', h'')` at `u`; the caller is responsible for the branch domain.
pub(crate) fn h_parts(b: &BigC, u: &BigC) -> Result<(BigC, BigC, BigC)> {
    let c = u.cosh();
    guard_pole(&c, u.precision())?;
    let t = u.tanh();
    let one = BigC::one(u.precision());
    let value = &(&u.square() / b).scale_pow2(-1) - &c.ln();
    let d1 = &(u / b) - &t;
    let d2 = &(&b.recip() - &one) + &t.square();
    Ok((value, d1, d2))
}

fn check_h_domain(u: &BigC) -> Result<()> {
    if u.im().is_zero() {
        return Ok(());
    }
    let bits = u.precision().bits();
    let half_pi = Float::with_val(bits, Constant::Pi) / 2i32;
    let abs_u = u.abs();
    if abs_u >= half_pi {
        return Err(Error::HBranchDomain {
            abs_u: abs_u.to_f64(),
        });
    }
    Ok(())
}

fn guard_pole(cosh_val: &BigC, prec: Precision) -> Result<()> {
    let digits = prec.decimal_digits();
    let exp = i32::try_from(digits / 2).unwrap_or(i32::MAX);
    let threshold = Float::with_val(64, 10).pow(-exp);
    let dist = cosh_val.abs();
    if dist < threshold {
        return Err(Error::PoleProximity {
            dist: dist.to_f64(),
            threshold: threshold.to_f64(),
        });
    }
    Ok(())
}

/// Values at `u` of the local polynomial models of the landscapes.
///
/// `p2` and `p4` expand `f_β` and `h_β` around the origin. `ptilde2` expands
/// `f_β` around the off-axis saddle `π/R` with `R = Im β`, `ε = Re β − 1`;
/// it is only produced when `Im β ≠ 0`. Because `Im(β·π/R) = π` exactly,
/// the real quantity `cosh²((1+ε)π/R)` in its curvature coefficient equals
/// `cosh²(βπ/R)`, so the coefficient is exactly `f''_β(π/R)`.
#[derive(Clone, Debug)]
pub struct TaylorModels {
    /// `P₂(u) = (β−β²)u²/2`.
    pub p2: BigC,
    /// `P₄(u) = (1/β−1)u²/2 + u⁴/12`.
    pub p4: BigC,
    /// `P̃₂(u) = f_β(π/R) + (β − β²/cosh²((1+ε)π/R))·(u−π/R)²/2`.
    pub ptilde2: Option<BigC>,
}

/// Evaluates the three local models at `u`.
pub fn taylor_models(beta: &ComplexBeta, u: &BigC) -> Result<TaylorModels> {
    let prec = u.precision();
    let b = beta.to_bigc(prec);
    let one = BigC::one(prec);
    let u2 = u.square();

    let p2 = (&(&b - &b.square()) * &u2).scale_pow2(-1);

    let twelve = BigC::from_f64(12.0, 0.0, prec);
    let p4 = &(&(&b.recip() - &one) * &u2).scale_pow2(-1) + &(&u2.square() / &twelve);

    let ptilde2 = if beta.r() != 0.0 {
        let bits = prec.bits();
        let pi_over_r = Float::with_val(bits, Constant::Pi) / Float::with_val(bits, beta.r());
        let x = Float::with_val(
            bits,
            (Float::with_val(bits, 1) + Float::with_val(bits, beta.eps())) * &pi_over_r,
        );
        let u0 = BigC::from_real(pi_over_r, prec);
        let (f0, _, _) = f_parts(&b, &u0)?;
        let cosh_sq = BigC::from_real(x.cosh().square(), prec);
        let coeff = &b - &(&b.square() / &cosh_sq);
        let du = u - &u0;
        Some(&f0 + &(&coeff * &du.square()).scale_pow2(-1))
    } else {
        None
    };

    Ok(TaylorModels { p2, p4, ptilde2 })
}

/// Margins observed for one inequality family over the supplied grid.
#[derive(Clone, Copy, Debug)]
pub struct MarginStat {
    /// Number of grid points the family applied to.
    pub checked: usize,
    /// Smallest margin (inequality LHS − RHS); `+∞` when nothing applied.
    pub min_margin: f64,
    /// Grid point attaining `min_margin`; NaN when nothing applied.
    pub argmin_u: f64,
}

impl MarginStat {
    fn empty() -> Self {
        MarginStat {
            checked: 0,
            min_margin: f64::INFINITY,
            argmin_u: f64::NAN,
        }
    }

    fn update(&mut self, u: f64, margin: f64) {
        self.checked += 1;
        if margin < self.min_margin {
            self.min_margin = margin;
            self.argmin_u = u;
        }
    }
}

/// Measured margins of the real-axis lower bounds on `Re f_{1+ε+iR}`.
///
/// The small-`u` bound is only asserted for `R` inside
/// `[√(24ε), π/√(128ε)]`; outside that window the margin is still measured
/// and reported (it may legitimately be negative there), with
/// `r_in_small_u_window` recording the hypothesis status.
#[derive(Clone, Copy, Debug)]
pub struct InequalityReport {
    pub eps: f64,
    pub r: f64,
    pub r_in_small_u_window: bool,
    /// `Re f_β(u) − εu²/2` over grid points `u ≤ √(8ε)`.
    pub small_u: MarginStat,
    /// `Re f_β(u) − ε²u²/2` over grid points `u ≥ √(8ε)`.
    pub large_u: MarginStat,
    /// `(1−ε)t²/2 − log cosh t` at `t = (1+ε)u` over grid points `u ≥ √(8ε)`.
    pub cosh_bound: MarginStat,
}

impl InequalityReport {
    /// Smallest margin over all families that applied to at least one point.
    pub fn min_margin(&self) -> f64 {
        self.small_u
            .min_margin
            .min(self.large_u.min_margin)
            .min(self.cosh_bound.min_margin)
    }

    pub fn all_nonnegative(&self) -> bool {
        self.min_margin() >= 0.0
    }
}

const INEQ_BITS: u32 = 160;

/// Checks the explicit lower bounds on `Re f_{1+ε+iR}` over a grid of real
/// `u ≥ 0` and reports the minimal margins per family.
pub fn inequality_suite(eps: f64, r: f64, us: &[f64]) -> Result<InequalityReport> {
    if !(eps > 0.0 && eps <= 1.0 / 9.0) {
        return Err(Error::ClaimDomain(format!(
            "need 0 < eps <= 1/9, got eps = {eps}"
        )));
    }
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::ClaimDomain(format!("need finite R > 0, got R = {r}")));
    }
    if us.is_empty() {
        return Err(Error::ClaimDomain("empty u grid".into()));
    }
    if let Some(bad) = us.iter().find(|u| !u.is_finite() || **u < 0.0) {
        return Err(Error::ClaimDomain(format!(
            "u grid must be finite and nonnegative, got {bad}"
        )));
    }

    let split = (8.0 * eps).sqrt();
    let window_lo = (24.0 * eps).sqrt();
    let window_hi = PI / (128.0 * eps).sqrt();

    let mut small_u = MarginStat::empty();
    let mut large_u = MarginStat::empty();
    let mut cosh_bound = MarginStat::empty();

    for &u in us {
        let uf = Float::with_val(INEQ_BITS, u);
        if u <= split {
            let re_f = re_f_real_axis(1.0 + eps, r, &uf);
            small_u.update(u, re_f.to_f64() - eps * u * u / 2.0);
        }
        if u >= split {
            let re_f = re_f_real_axis(1.0 + eps, r, &uf);
            large_u.update(u, re_f.to_f64() - eps * eps * u * u / 2.0);
            let t = Float::with_val(INEQ_BITS, 1.0 + eps) * &uf;
            let log_cosh = t.clone().cosh().ln();
            let bound = t.square() * ((1.0 - eps) / 2.0);
            cosh_bound.update(u, (bound - log_cosh).to_f64());
        }
    }

    Ok(InequalityReport {
        eps,
        r,
        r_in_small_u_window: r >= window_lo && r <= window_hi,
        small_u,
        large_u,
        cosh_bound,
    })
}

/// `Re f_β(u)` for real `u` via the cancellation-free real form
/// `Reβ·u²/2 − ½·log((cosh(2·Reβ·u) + cos(2·Imβ·u))/2)`.
pub(crate) fn re_f_real_axis(re_beta: f64, im_beta: f64, u: &Float) -> Float {
    let mut quad = u.clone();
    quad.square_mut();
    quad *= re_beta;
    quad /= 2;

    let mut x2 = u.clone();
    x2 *= 2.0 * re_beta;
    let mut y2 = u.clone();
    y2 *= 2.0 * im_beta;

    let mut m = x2.cosh();
    m += y2.cos();
    m /= 2;
    let mut log_abs = m.ln();
    log_abs /= 2;

    quad - log_abs
}

/// `Re h_β(u)` for real `u`: `Re(1/β)·u²/2 − log cosh u`.
pub(crate) fn re_h_real_axis(re_inv_beta: f64, u: &Float) -> Float {
    let mut quad = u.clone();
    quad.square_mut();
    quad *= re_inv_beta;
    quad /= 2;
    quad - u.clone().cosh().ln()
}

/// Certified radius `U`: `exp(−n·Re f_β(u)) < 10^{−digits}` for all real
/// `|u| ≥ U`, from the bound `Re f_β(u) ≥ Reβ·(u²/2 − u)` for `u ≥ 0`
/// (since `|cosh(βu)| ≤ cosh(Reβ·u) ≤ e^{Reβ·u}`), then verified by direct
/// evaluation at `U`. The six extra guard digits also make the tail
/// *integral* beyond `U` smaller than `10^{−digits}`.
pub fn truncation_radius(beta: &ComplexBeta, n: u32, prec: Precision) -> Result<f64> {
    let a = beta.re();
    if a <= 0.0 {
        return Err(Error::NonpositiveReBeta { re_beta: a });
    }
    let digits = prec.decimal_digits();
    let u0 = radius_from_bound(a, a, n, digits);
    let re = beta.re();
    let im = beta.im();
    certify(u0, n, digits, |u| {
        re_f_real_axis(re, im, &Float::with_val(96, u))
    })
}

/// Same contract for the `h`-form: `Re h_β(u) ≥ Re(1/β)·u²/2 − u`.
pub(crate) fn truncation_radius_h(beta: &ComplexBeta, n: u32, prec: Precision) -> Result<f64> {
    let a = beta.re();
    if a <= 0.0 {
        return Err(Error::NonpositiveReBeta { re_beta: a });
    }
    let re_inv = a / (a * a + beta.im() * beta.im());
    let digits = prec.decimal_digits();
    let u0 = radius_from_bound(re_inv, 1.0, n, digits);
    certify(u0, n, digits, |u| {
        re_h_real_axis(re_inv, &Float::with_val(96, u))
    })
}

/// Positive root of `a·u²/2 − b·u = (digits+6)·ln 10 / n`.
fn radius_from_bound(a: f64, b: f64, n: u32, digits: u32) -> f64 {
    let target = (f64::from(digits) + 6.0) * LN_10 / f64::from(n);
    (b + (b * b + 2.0 * a * target).sqrt()) / a
}

fn certify(mut u: f64, n: u32, digits: u32, re_of: impl Fn(f64) -> Float) -> Result<f64> {
    let need = f64::from(digits) * LN_10 + 2.0;
    for _ in 0..64 {
        if re_of(u).to_f64() * f64::from(n) > need {
            return Ok(u);
        }
        u *= 1.25;
    }
    Err(Error::TruncationUnverified { n, digits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::principal_sqrt;
    use crate::testutil::Rng;

    fn rel_diff(a: &BigC, b: &BigC) -> f64 {
        (a - b).abs().to_f64() / b.abs().to_f64().max(1e-300)
    }

    fn fd1<F: Fn(&BigC) -> BigC>(f: F, u: &BigC, step: f64, prec: Precision) -> BigC {
        let h = BigC::from_f64(step, 0.0, prec);
        let denom = BigC::from_f64(2.0 * step, 0.0, prec);
        &(&f(&(u + &h)) - &f(&(u - &h))) / &denom
    }

    fn fd1_imag<F: Fn(&BigC) -> BigC>(f: F, u: &BigC, step: f64, prec: Precision) -> BigC {
        let h = BigC::from_f64(0.0, step, prec);
        let denom = BigC::from_f64(0.0, 2.0 * step, prec);
        &(&f(&(u + &h)) - &f(&(u - &h))) / &denom
    }

    fn fd2<F: Fn(&BigC) -> BigC>(f: F, u: &BigC, step: f64, prec: Precision) -> BigC {
        let h = BigC::from_f64(step, 0.0, prec);
        let sum = &(&f(&(u + &h)) + &f(&(u - &h))) - &f(u).scale_pow2(1);
        &sum / &h.square()
    }

    #[test]
    fn value_and_gradient_vanish_at_origin() {
        let prec = Precision::new(40);
        let beta = ComplexBeta::new(1.3, 0.7);
        let zero = BigC::zero(prec);
        let fe = f_eval(&beta, &zero).unwrap();
        assert!(fe.value.is_zero() && fe.d1.is_zero());
        assert!(!fe.d2.is_zero());
        let he = h_eval(&beta, &zero).unwrap();
        assert!(he.value.is_zero() && he.d1.is_zero());
    }

    #[test]
    fn evenness_is_exact() {
        let prec = Precision::new(45);
        let mut rng = Rng::new(0x5eed_0001);
        for _ in 0..5 {
            let beta = ComplexBeta::new(rng.range(0.3, 2.5), rng.range(-2.0, 2.0));
            let u = BigC::from_f64(rng.range(-1.0, 1.0), rng.range(-0.5, 0.5), prec);
            let plus = f_eval(&beta, &u).unwrap();
            let minus = f_eval(&beta, &(-&u)).unwrap();
            assert_eq!(plus.value, minus.value);
            assert_eq!(plus.d2, minus.d2);
            assert_eq!(minus.d1, -&plus.d1);

            let hp = h_eval(&beta, &u).unwrap();
            let hm = h_eval(&beta, &(-&u)).unwrap();
            assert_eq!(hp.value, hm.value);
            assert_eq!(hm.d1, -&hp.d1);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let prec = Precision::new(60);
        let mut rng = Rng::new(0x1a5d_cafe);
        let mut checked = 0;
        while checked < 10 {
            let beta = ComplexBeta::new(rng.range(0.4, 2.2), rng.range(-1.5, 1.5));
            let u = BigC::from_f64(rng.range(-0.9, 0.9), rng.range(-0.6, 0.6), prec);
            let (Ok(fe), Ok(he)) = (f_eval(&beta, &u), h_eval(&beta, &u)) else {
                continue;
            };
            let b = beta.to_bigc(prec);
            let ff = |x: &BigC| f_parts(&b, x).unwrap().0;
            let hf = |x: &BigC| h_parts(&b, x).unwrap().0;

            assert!(rel_diff(&fd1(ff, &u, 1e-20, prec), &fe.d1) < 1e-20);
            assert!(rel_diff(&fd1_imag(ff, &u, 1e-20, prec), &fe.d1) < 1e-20);
            assert!(rel_diff(&fd2(ff, &u, 1e-15, prec), &fe.d2) < 1e-20);

            assert!(rel_diff(&fd1(hf, &u, 1e-20, prec), &he.d1) < 1e-20);
            assert!(rel_diff(&fd2(hf, &u, 1e-15, prec), &he.d2) < 1e-20);
            checked += 1;
        }
    }

    #[test]
    fn substitution_identity_with_jacobian() {
        let prec = Precision::new(40);
        let beta = ComplexBeta::new(1.3, 0.4);
        let b = beta.to_bigc(prec);
        let u = BigC::from_f64(0.3, 0.0, prec);
        let v = &b * &u;
        let n = 10.0;

        let f = f_eval(&beta, &u).unwrap().value;
        let h = h_eval(&beta, &v).unwrap().value;
        let diff = (&f - &h).abs().to_f64();
        assert!(diff < 1e-36, "landscapes disagree under v = beta*u: {diff:.3e}");

        let bits = prec.bits();
        let mut two_pi = Float::with_val(bits, Constant::Pi);
        two_pi *= 2;
        let two_pi = BigC::from_real(two_pi, prec);

        let nf = f.mul_f64(n);
        let nh = h.mul_f64(n);
        let lhs = &principal_sqrt(&(&b.mul_f64(n) / &two_pi)) * &(-&nf).exp();
        let amp = principal_sqrt(&(&BigC::from_f64(n, 0.0, prec) / &(&two_pi * &b)));
        let rhs = &(&amp * &(-&nh).exp()) * &b;
        let rel = rel_diff(&lhs, &rhs);
        assert!(rel < 1e-33, "jacobian-form mismatch: {rel:.3e}");
    }

    #[test]
    fn tilted_saddle_sits_where_the_curve_equation_says() {
        // On the curve 1+eps = (R/2pi)·log((1+pi/R)/(1−pi/R)), the point
        // u = pi/R is a genuine saddle of f_beta, and the ptilde2 curvature
        // coefficient equals f''_beta(pi/R).
        let prec = Precision::new(60);
        let r = 7.0;
        let pr = PI / r;
        let eps = r / (2.0 * PI) * ((1.0 + pr) / (1.0 - pr)).ln() - 1.0;
        let beta = ComplexBeta::new(1.0 + eps, r);

        let bits = prec.bits();
        let u0 = BigC::from_real(
            Float::with_val(bits, Constant::Pi) / Float::with_val(bits, r),
            prec,
        );
        let fe = f_eval(&beta, &u0).unwrap();
        assert!(
            fe.d1.abs().to_f64() < 1e-12,
            "d1 at pi/R: {:.3e}",
            fe.d1.abs().to_f64()
        );

        // Recover the quadratic coefficient of ptilde2 from two evaluations.
        let tm0 = taylor_models(&beta, &u0).unwrap();
        let p0 = tm0.ptilde2.unwrap();
        assert!(rel_diff(&p0, &fe.value) < 1e-50);
        let u1 = &u0 + &BigC::from_f64(0.125, 0.0, prec);
        let p1 = taylor_models(&beta, &u1).unwrap().ptilde2.unwrap();
        let coeff = (&(&p1 - &p0) / &BigC::from_f64(0.125 * 0.125, 0.0, prec)).scale_pow2(1);
        assert!(
            rel_diff(&coeff, &fe.d2) < 1e-50,
            "ptilde2 curvature vs f'': {:.3e}",
            rel_diff(&coeff, &fe.d2)
        );
    }

    #[test]
    fn taylor_models_approximate_their_landscapes() {
        let prec = Precision::new(50);
        let beta = ComplexBeta::new(1.3, 0.4);

        // f − P2 = β⁴u⁴/12 + O(u⁶).
        let u = BigC::from_f64(0.01, 0.0, prec);
        let tm = taylor_models(&beta, &u).unwrap();
        let f = f_eval(&beta, &u).unwrap().value;
        let gap = (&f - &tm.p2).abs().to_f64();
        assert!(gap < 1e-8 && gap > 1e-10, "f-P2 gap {gap:.3e}");

        let z = taylor_models(&beta, &BigC::zero(prec)).unwrap();
        assert!(z.p2.is_zero() && z.p4.is_zero());

        // h − P4 = −u⁶/45 + O(u⁸) for real u.
        let beta_r = ComplexBeta::new(1.1, 0.0);
        let u = BigC::from_f64(0.3, 0.0, prec);
        let tm = taylor_models(&beta_r, &u).unwrap();
        assert!(tm.ptilde2.is_none());
        let h = h_eval(&beta_r, &u).unwrap().value;
        let gap = (&h - &tm.p4).abs().to_f64();
        let expect = 0.3f64.powi(6) / 45.0;
        assert!((gap - expect).abs() < 0.1 * expect, "h-P4 gap {gap:.3e}");
    }

    #[test]
    fn p4_derivative_vanishes_at_seed_root() {
        let prec = Precision::new(60);
        let beta = ComplexBeta::new(1.2, 0.0);
        let b = beta.to_bigc(prec);
        // u0 = sqrt(3(1 − 1/β)) built from the same f64 β the model sees.
        let three = BigC::from_f64(3.0, 0.0, prec);
        let u0 = principal_sqrt(&(&three * &(&BigC::one(prec) - &b.recip())));
        let p4 = |x: &BigC| taylor_models(&beta, x).unwrap().p4;
        let slope = fd1(p4, &u0, 1e-15, prec).abs().to_f64();
        assert!(slope < 1e-28, "P4' at its root: {slope:.3e}");
    }

    #[test]
    fn p4_prime_tracks_h_prime_to_fifth_order() {
        let prec = Precision::new(60);
        let mut rng = Rng::new(0xbd_04_2024);
        for beta in [ComplexBeta::new(1.05, 0.0), ComplexBeta::new(1.0, 0.07)] {
            let b = beta.to_bigc(prec);
            for _ in 0..8 {
                let rad = rng.unit() * PI / 4.0;
                let theta = rng.range(0.0, 2.0 * PI);
                let u = BigC::from_f64(rad * theta.cos(), rad * theta.sin(), prec);
                let d1 = h_eval(&beta, &u).unwrap().d1;
                let three = BigC::from_f64(3.0, 0.0, prec);
                let p4_prime =
                    &(&(&b.recip() - &BigC::one(prec)) * &u) + &(&(&u.square() * &u) / &three);
                let gap = (&d1 - &p4_prime).abs().to_f64();
                let bound = 5.0 * u.abs().to_f64().powi(5);
                assert!(
                    gap <= bound * (1.0 + 1e-10) + 1e-40,
                    "|h'-P4'| = {gap:.3e} > 5|u|^5 = {bound:.3e}"
                );
            }
        }
    }

    #[test]
    fn h_gradient_vanishes_at_mean_field_point() {
        // Bisection oracle for tanh u = u/1.2 on [0.1, 1.5].
        let g = |u: f64| u.tanh() - u / 1.2;
        let (mut lo, mut hi) = (0.1f64, 1.5f64);
        assert!(g(lo) > 0.0 && g(hi) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        let prec = Precision::new(40);
        let he = h_eval(&ComplexBeta::new(1.2, 0.0), &BigC::from_f64(root, 0.0, prec)).unwrap();
        assert!(he.d1.abs().to_f64() < 1e-12);
        // The minimum value at the off-origin critical point is negative.
        assert!(he.value.re().to_f64() < 0.0);
    }

    #[test]
    fn branch_domain_and_poles_are_rejected() {
        let prec = Precision::new(40);
        let beta = ComplexBeta::new(1.0, 0.0);

        let off_domain = BigC::from_f64(1.0, 1.5, prec);
        assert!(matches!(
            h_eval(&beta, &off_domain),
            Err(Error::HBranchDomain { .. })
        ));

        // Real u beyond pi/2 is fine for h.
        let real_far = BigC::from_f64(5.0, 0.0, prec);
        assert!(h_eval(&beta, &real_far).is_ok());

        // f_beta has a pole of log cosh at beta·u = i·pi/2.
        let half_pi = Float::with_val(200, Constant::Pi) / 2i32;
        let near_pole = BigC::from_parts(Float::with_val(200, 0), half_pi, prec);
        assert!(matches!(
            f_eval(&beta, &near_pole),
            Err(Error::PoleProximity { .. })
        ));
    }

    #[test]
    fn inequality_margins_nonnegative_on_claim_grid() {
        for i in 0..100 {
            let eps = 0.0005 + (0.0566 - 0.0005) * f64::from(i) / 99.0;
            let lo = (24.0 * eps).sqrt();
            let hi = PI / (128.0 * eps).sqrt();
            assert!(lo < hi, "window empty at eps = {eps}");
            let r = (lo * hi).sqrt();
            let split = (8.0 * eps).sqrt();
            let mut us: Vec<f64> = (0..100).map(|j| split * f64::from(j) / 99.0).collect();
            us.extend((0..100).map(|j| split + (4.0 - split) * f64::from(j) / 99.0));
            let rep = inequality_suite(eps, r, &us).unwrap();
            assert!(rep.r_in_small_u_window);
            assert!(rep.small_u.checked >= 100);
            assert!(rep.large_u.checked >= 100 && rep.cosh_bound.checked >= 100);
            assert!(
                rep.all_nonnegative(),
                "eps = {eps}: min margin {:.3e} at u = {:.4}",
                rep.min_margin(),
                rep.small_u.argmin_u.min(rep.large_u.argmin_u)
            );
        }
    }

    #[test]
    fn inequality_suite_specific_points() {
        // R outside the small-u window: margin still measured and positive.
        let rep = inequality_suite(0.05, 1.5, &[0.2]).unwrap();
        assert!(!rep.r_in_small_u_window);
        assert_eq!(rep.small_u.checked, 1);
        assert!(rep.small_u.min_margin > 0.0);

        let rep = inequality_suite(0.05, 1.2, &[1.0]).unwrap();
        assert_eq!(rep.large_u.checked, 1);
        assert!(rep.large_u.min_margin > 0.0);

        // cosh bound at the smallest admissible argument, eps = 0.1.
        let eps = 0.1f64;
        let u = (8.0 * eps).sqrt();
        let rep = inequality_suite(eps, 1.0, &[u]).unwrap();
        assert_eq!(rep.cosh_bound.checked, 1);
        assert!(rep.cosh_bound.min_margin > 0.0);
    }

    #[test]
    fn inequality_suite_rejects_bad_domains() {
        assert!(matches!(
            inequality_suite(0.2, 1.0, &[0.1]),
            Err(Error::ClaimDomain(_))
        ));
        assert!(matches!(
            inequality_suite(0.0, 1.0, &[0.1]),
            Err(Error::ClaimDomain(_))
        ));
        assert!(matches!(
            inequality_suite(0.05, -1.0, &[0.1]),
            Err(Error::ClaimDomain(_))
        ));
        assert!(matches!(
            inequality_suite(0.05, 1.2, &[]),
            Err(Error::ClaimDomain(_))
        ));
        assert!(matches!(
            inequality_suite(0.05, 1.2, &[0.1, -0.2]),
            Err(Error::ClaimDomain(_))
        ));
    }

    #[test]
    fn truncation_radius_certifies_pointwise_decay() {
        let n = 100u32;
        let digits = 60u32;
        let beta = ComplexBeta::new(2.0, 0.0);
        let u = truncation_radius(&beta, n, Precision::new(digits)).unwrap();
        // Independent f64 check of exp(−n Re f) < 10^{−digits} at and beyond U.
        let re_f = |x: f64| {
            let m = ((2.0 * beta.re() * x).cosh() + (2.0 * beta.im() * x).cos()) / 2.0;
            beta.re() * x * x / 2.0 - m.ln() / 2.0
        };
        for factor in [1.0, 1.3, 2.0] {
            let x = u * factor;
            assert!(
                f64::from(n) * re_f(x) > f64::from(digits) * LN_10,
                "decay not certified at {x}"
            );
        }
    }

    #[test]
    fn truncation_radius_bounds_the_tail_integral() {
        let beta = ComplexBeta::new(1.05, 1.5);
        let n = 200u32;
        let prec = crate::numerics::required_precision(&beta, n);
        let digits = prec.decimal_digits();
        let u = truncation_radius(&beta, n, prec).unwrap();

        // Analytic tail bound: Re f ≥ a((u−1)²/2 − 1/2) with a = Re β, so
        // ∫_U^∞ e^{−n·Re f} du ≤ e^{na/2}·√(π/(2na))·erfc((U−1)·√(na/2)).
        let a = beta.re();
        let na = f64::from(n) * a;
        let arg = Float::with_val(300, (u - 1.0) * (na / 2.0).sqrt());
        let amp = Float::with_val(300, na / 2.0).exp()
            * Float::with_val(300, PI / (2.0 * na)).sqrt();
        let tail = amp * arg.erfc();

        let bound = Float::with_val(300, 10).pow(-i32::try_from(digits).unwrap());
        assert!(tail < bound, "tail {:.3e} vs 10^-{digits}", tail.to_f64());
    }

    #[test]
    fn truncation_radius_monotone_in_digits() {
        let beta = ComplexBeta::new(1.5, 0.5);
        let u40 = truncation_radius(&beta, 50, Precision::new(40)).unwrap();
        let u80 = truncation_radius(&beta, 50, Precision::new(80)).unwrap();
        let u160 = truncation_radius(&beta, 50, Precision::new(160)).unwrap();
        assert!(u40 <= u80 && u80 <= u160);
        assert!(matches!(
            truncation_radius(&ComplexBeta::new(-0.2, 1.0), 50, Precision::new(40)),
            Err(Error::NonpositiveReBeta { .. })
        ));
    }

    #[test]
    fn truncation_radius_h_form() {
        let beta = ComplexBeta::new(2.0, 0.0);
        let n = 50u32;
        let digits = 40u32;
        let u = truncation_radius_h(&beta, n, Precision::new(digits)).unwrap();
        let re_inv = 0.5;
        let re_h = |x: f64| re_inv * x * x / 2.0 - (x - std::f64::consts::LN_2 + (-2.0 * x).exp().ln_1p());
        assert!(f64::from(n) * re_h(u) > f64::from(digits) * LN_10);
    }
}
