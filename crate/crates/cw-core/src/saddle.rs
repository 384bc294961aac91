//! The off-origin critical points of `h_β` near `β = 1`.
//!
//! For `0 < |β−1| ≤ 0.1` the derivative `h'_β` has exactly three zeros near
//! the origin: `0` and `±u_β`. `find_u_beta` locates `u_β` by Newton
//! iteration from the quartic-model root `√(3(1−1/β))`, certifies the
//! residual, and checks the converged point against the disc and the
//! low-order asymptotics that are valid in this neighborhood.

use rug::ops::Pow;
use rug::Float;

use crate::landscape::h_parts;
use crate::model::ComplexBeta;
use crate::numerics::{principal_sqrt, BigC, Precision};
use crate::{Error, Result};

/// Largest `|β−1|` the saddle machinery accepts.
///
/// The disc constant below is validated in this neighborhood; outside it the
/// quartic model no longer controls `h'_β` and callers get an error instead
/// of an uncertified point.
pub const MAX_BETA_DIST: f64 = 0.1;

/// Disc constant: `u_β` must lie within `K·|β−1|^{3/2}` of the seed.
pub const DISC_K: f64 = 241.0;

/// Looser cap used internally by curve tracing, whose bisection brackets
/// reach `|β−1| = ε√5` and need evaluations just past the public
/// neighborhood. Residual and disc certificates still apply.
pub(crate) const TRACE_MAX_DIST: f64 = 0.3;

const MAX_NEWTON_ITER: usize = 200;

/// Converged saddle data for one `β`.
#[derive(Clone, Debug)]
pub struct SaddleData {
    /// The critical point with `Im u_β ≥ 0` when `Im β ≥ 0`.
    pub u_beta: BigC,
    /// `h_β(u_β)`.
    pub h_at_saddle: BigC,
    /// `ξ(β) = √(−2 h_β(u_β))`, branch aligned with `√(3/2)·(β−1)`.
    pub xi: BigC,
    /// Radius `K·|β−1|^{3/2}` of the disc certifying `u_beta`.
    pub disc_radius: f64,
    /// `|h'_β(u_beta)|` at the accepted point.
    pub residual: f64,
}

pub(crate) struct SaddleCore {
    pub u: BigC,
    pub h_value: BigC,
    pub residual: f64,
    pub disc_radius: f64,
}

/// Newton seed `√(3(1−1/β))`, the nonzero root of the quartic model's
/// derivative, on the branch with `Im ≥ 0` when `Im β ≥ 0`.
///
/// Pure arithmetic, defined for any `β ∉ {0, 1}`; the neighborhood cap is
/// enforced by `find_u_beta`, which actually certifies a saddle.
pub fn seed(beta: &ComplexBeta, prec: Precision) -> Result<BigC> {
    if beta.abs_minus_one() == 0.0 {
        return Err(Error::DegenerateSaddle);
    }
    Ok(seed_at(&beta.to_bigc(prec)))
}

fn seed_at(b: &BigC) -> BigC {
    let prec = b.precision();
    let one = BigC::one(prec);
    let three = BigC::from_f64(3.0, 0.0, prec);
    principal_sqrt(&(&three * &(&one - &b.recip())))
}

/// Locates `u_β` and certifies it.
pub fn find_u_beta(beta: &ComplexBeta, prec: Precision) -> Result<SaddleData> {
    let b = beta.to_bigc(prec);
    let core = saddle_core(&b, MAX_BETA_DIST)?;
    let xi = xi_from(&b, &core.h_value)?;
    Ok(SaddleData {
        u_beta: core.u,
        h_at_saddle: core.h_value,
        xi,
        disc_radius: core.disc_radius,
        residual: core.residual,
    })
}

/// `h_β(u_β)`.
pub fn h_at_saddle(beta: &ComplexBeta, prec: Precision) -> Result<BigC> {
    Ok(find_u_beta(beta, prec)?.h_at_saddle)
}

/// `ξ(β) = √(−2 h_β(u_β))` on the branch continuous with `√(3/2)·(β−1)`.
pub fn xi(beta: &ComplexBeta, prec: Precision) -> Result<BigC> {
    Ok(find_u_beta(beta, prec)?.xi)
}

/// Runs Newton from the three quartic-model roots `0, ±seed` and returns the
/// converged points in that order.
pub fn three_saddles(beta: &ComplexBeta, prec: Precision) -> Result<[BigC; 3]> {
    let b = beta.to_bigc(prec);
    check_dist(&b, MAX_BETA_DIST)?;
    let thr = residual_threshold(prec);
    let s = seed_at(&b);
    let origin = newton(&b, BigC::zero(prec), &thr)?;
    let plus = newton(&b, s.clone(), &thr)?;
    let minus = newton(&b, -&s, &thr)?;
    Ok([origin.0, plus.0, minus.0])
}

/// Full saddle computation on a `β` already lifted to working precision, so
/// that callers perturbing `β` below f64 resolution (the Ψ zero finder) can
/// reuse it.
pub(crate) fn saddle_core(b: &BigC, max_dist: f64) -> Result<SaddleCore> {
    let prec = b.precision();
    let dist = check_dist(b, max_dist)?;
    let disc_radius = DISC_K * dist.powf(1.5);
    let thr = residual_threshold(prec);
    let s = seed_at(b);
    let (u, h_value, residual) = newton(b, s.clone(), &thr)?;

    let off_seed = (&u - &s).abs().to_f64();
    if off_seed > disc_radius {
        return Err(Error::NoSaddle(format!(
            "converged point left the certification disc: |u - seed| = {off_seed:.3e} > {disc_radius:.3e}"
        )));
    }

    if dist <= 0.05 {
        // u_β² = 3(β−1)(1 + corr) with |corr| ≤ 2|β−1| in this range.
        let one = BigC::one(prec);
        let three = BigC::from_f64(3.0, 0.0, prec);
        let corr = &(&u.square() / &(&three * &(b - &one))) - &one;
        let corr_abs = corr.abs().to_f64();
        if corr_abs > 2.0 * dist {
            return Err(Error::NoSaddle(format!(
                "quadratic asymptotics violated: |corr| = {corr_abs:.3e} at |beta-1| = {dist:.3e}"
            )));
        }
        // h_β(u_β) = −(3/4)(β−1)²(1 + O(β−1)), with |error| ≤ 3|β−1|³.
        let quarter3 = BigC::from_f64(0.75, 0.0, prec);
        let gap = (&h_value + &(&quarter3 * &(b - &one).square())).abs().to_f64();
        if gap > 3.0 * dist.powi(3) {
            return Err(Error::NoSaddle(format!(
                "h(u_beta) asymptotics violated: |h + (3/4)(beta-1)^2| = {gap:.3e}"
            )));
        }
    }

    Ok(SaddleCore {
        u,
        h_value,
        residual,
        disc_radius,
    })
}

fn check_dist(b: &BigC, max_dist: f64) -> Result<f64> {
    let one = BigC::one(b.precision());
    let dist = (b - &one).abs().to_f64();
    if dist == 0.0 {
        return Err(Error::DegenerateSaddle);
    }
    if dist > max_dist {
        return Err(Error::SaddleNeighborhood { dist, max: max_dist });
    }
    Ok(dist)
}

fn residual_threshold(prec: Precision) -> Float {
    let digits = prec.decimal_digits();
    Float::with_val(64, 10).pow(-(digits.saturating_sub(8) as i32))
}

/// Newton on `h'_β`; stops when both the residual and the last step are
/// below `thr`. Returns `(u, h_β(u), |h'_β(u)|)`.
fn newton(b: &BigC, start: BigC, thr: &Float) -> Result<(BigC, BigC, f64)> {
    let mut u = start;
    let (_, mut d1, mut d2) = h_parts(b, &u)?;
    for _ in 0..MAX_NEWTON_ITER {
        let step = &d1 / &d2;
        u = &u - &step;
        let (h, nd1, nd2) = h_parts(b, &u)?;
        d1 = nd1;
        d2 = nd2;
        let res = d1.abs();
        if res <= *thr && step.abs() <= *thr {
            return Ok((u, h, res.to_f64()));
        }
    }
    Err(Error::NoSaddle(format!(
        "Newton did not reach residual {:.3e} in {MAX_NEWTON_ITER} iterations",
        thr.to_f64()
    )))
}

fn xi_from(b: &BigC, h_value: &BigC) -> Result<BigC> {
    let prec = b.precision();
    let root = principal_sqrt(&(-&h_value.scale_pow2(1)));
    let one = BigC::one(prec);
    let ref_dir = &(b - &one) * &principal_sqrt(&BigC::from_f64(1.5, 0.0, prec));
    let inner = (&root * &ref_dir.conj()).re().to_f64();
    let scale = root.abs().to_f64() * ref_dir.abs().to_f64();
    if inner >= 1e-6 * scale {
        Ok(root)
    } else if inner <= -1e-6 * scale {
        Ok(-&root)
    } else {
        Err(Error::XiBranchAmbiguity)
    }
}
