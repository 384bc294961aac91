//! The three curves organizing the phase picture near and beyond β = 1.
//!
//! * Γ — the local critical curve `Re h_β(u_β) = 0`, parametrized by ε with
//!   R = R₀(ε) found by bisection.
//! * The tilted curve `1+ε = (R/2π)·log((1+π/R)/(1−π/R))` for R > π.
//! * The conjectured global boundary `Re f_β(u*(β)) = 0`, where u*(β) is the
//!   saddle branch continued from u*(1) = 0.

use rug::Float;

use crate::landscape::{f_eval, f_parts, h_parts};
use crate::model::ComplexBeta;
use crate::numerics::{principal_sqrt, BigC, Precision};
use crate::saddle::{saddle_core, TRACE_MAX_DIST};
use crate::{Error, Result};

/// Working precision for all curve tracing; residual targets are 1e−12, so
/// 40 digits leave a wide certification margin.
const CURVE_DIGITS: u32 = 40;

/// Largest Re β on which the u* branch is supported (the branch picture
/// changes past the intersection point near 1.3).
pub const U_STAR_MAX_RE: f64 = 1.4;

/// Largest ε accepted by `trace_gamma`; beyond the certified ε ≤ 0.05 window
/// the trace is still produced (the zero machinery consumes Γ out to the
/// |β−1| ≤ 0.1 annulus) but carries no claim-level guarantee.
pub const TRACE_EPS_MAX: f64 = 0.12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveKind {
    Gamma,
    Theorem2,
    Conjectured,
}

impl CurveKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CurveKind::Gamma => "gamma",
            CurveKind::Theorem2 => "theorem2",
            CurveKind::Conjectured => "conjectured",
        }
    }
}

/// One traced point: β together with the payload exported to CSV/JSON.
#[derive(Clone, Copy, Debug)]
pub struct CurvePoint {
    pub beta: ComplexBeta,
    pub eps: f64,
    pub r: f64,
    /// |Im| of the landscape value pinned to the curve: |Im h_β(u_β)| on Γ,
    /// |Im f_β(u*)| on the conjectured curve, 0 on the tilted curve (whose
    /// defining equation is real).
    pub im_h: f64,
}

#[derive(Clone, Debug)]
pub struct CurveSegment {
    pub kind: CurveKind,
    pub points: Vec<CurvePoint>,
}

/// A point of the u* branch with its sheet index.
#[derive(Clone, Debug)]
pub struct BranchPoint {
    pub u_star: BigC,
    /// Sheet of `β = (1/2u)·[log((1+u)/(1−u)) + 2πik]`: 0 near β = 1, 1
    /// after the principal-branch cut is crossed (further indices can occur
    /// at large |Im β|, where the branch wraps again).
    pub k: i32,
    pub beta: ComplexBeta,
}

fn h_at_saddle_eps_r(eps: f64, r: f64) -> Result<BigC> {
    let prec = Precision::new(CURVE_DIGITS);
    let b = ComplexBeta::from_eps_r(eps, r).to_bigc(prec);
    Ok(saddle_core(&b, TRACE_MAX_DIST)?.h_value)
}

fn sgn(x: f64) -> i32 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// R₀(ε): the R at which Re h_β(u_β) changes sign, β = 1+ε+iR.
pub fn r0_of_eps(eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 0.05) {
        return Err(Error::ClaimDomain(format!(
            "r0_of_eps is validated on 0 < eps <= 0.05; got {eps}"
        )));
    }
    r0_core(eps)
}

fn r0_core(eps: f64) -> Result<f64> {
    // Re h < 0 below R0, > 0 above; |R0 − ε| = O(ε²) keeps it inside [ε/2, 2ε].
    match bisect_r0(eps, eps / 2.0, 2.0 * eps)? {
        Ok(r) => Ok(r),
        // One widening absorbs roundoff at very small ε.
        Err(_) => match bisect_r0(eps, eps / 4.0, 4.0 * eps)? {
            Ok(r) => Ok(r),
            Err((lo_sign, hi_sign)) => Err(Error::BracketError {
                eps,
                lo_sign,
                hi_sign,
            }),
        },
    }
}

type Bracketed = std::result::Result<f64, (i32, i32)>;

fn bisect_r0(eps: f64, mut lo: f64, mut hi: f64) -> Result<Bracketed> {
    let g = |r: f64| -> Result<f64> { Ok(h_at_saddle_eps_r(eps, r)?.re().to_f64()) };
    let glo = g(lo)?;
    let ghi = g(hi)?;
    if !(glo < 0.0 && ghi > 0.0) {
        return Ok(Err((sgn(glo), sgn(ghi))));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid)?;
        if gm.abs() <= 1e-13 {
            return Ok(Ok(mid));
        }
        if gm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Ok(0.5 * (lo + hi)))
}

/// Traces Γ at ε = step, 2·step, …, eps_max with R = R₀(ε); the payload is
/// |Im h_β(u_β)|, which increases strictly along the upper branch.
pub fn trace_gamma(eps_max: f64, step: f64) -> Result<CurveSegment> {
    if !(step > 0.0 && step <= eps_max && eps_max <= TRACE_EPS_MAX) {
        return Err(Error::TraceRange { max: TRACE_EPS_MAX });
    }
    let mut points = Vec::new();
    let mut k = 1usize;
    loop {
        let eps = step * k as f64;
        if eps > eps_max * (1.0 + 1e-12) {
            break;
        }
        let r = r0_core(eps)?;
        let h = h_at_saddle_eps_r(eps, r)?;
        points.push(CurvePoint {
            beta: ComplexBeta::from_eps_r(eps, r),
            eps,
            r,
            im_h: h.im().to_f64().abs(),
        });
        k += 1;
    }
    Ok(CurveSegment {
        kind: CurveKind::Gamma,
        points,
    })
}

/// ε(R) on the tilted curve, R > π:
/// `1 + ε = (R/2π)·log((1+π/R)/(1−π/R))`, equivalently f'_{1+ε}(π/R) = 0.
pub fn theorem2_eps(r: f64) -> Result<f64> {
    if !r.is_finite() || r <= std::f64::consts::PI {
        return Err(Error::Theorem2Domain(r));
    }
    let x = std::f64::consts::PI / r;
    let eps = (r / (2.0 * std::f64::consts::PI)) * ((1.0 + x) / (1.0 - x)).ln() - 1.0;
    let prec = Precision::new(CURVE_DIGITS);
    let ev = f_eval(&ComplexBeta::new(1.0 + eps, 0.0), &BigC::from_f64(x, 0.0, prec))?;
    let resid = ev.d1.abs().to_f64();
    if resid > 1e-12 {
        return Err(Error::ClaimDomain(format!(
            "tilted-curve equation fails post-verification at R = {r}: |f'| = {resid:.3e}"
        )));
    }
    Ok(eps)
}

/// The saddle branch u*(β) solving u = tanh(βu), continued from u*(1) = 0
/// along the straight path from 1 to β. The lower half-plane is handled by
/// conjugation.
///
/// The tracking itself is done on w = βu, the root of w/β = tanh w: the
/// poles of tanh w sit at the fixed points ±iπ/2, ±3iπ/2, … regardless of
/// β, so Newton's basins along the path do not deform as β moves, whereas
/// tracking u directly (tanh argument βu) is prone to hopping between root
/// families once |Im β| is a few units. The result is mapped back at the
/// end via u* = w/β.
pub fn u_star(beta: &ComplexBeta) -> Result<BranchPoint> {
    if !(beta.re() > 0.0 && beta.re() <= U_STAR_MAX_RE) {
        return Err(Error::UStarRegion {
            re_beta: beta.re(),
            max: U_STAR_MAX_RE,
        });
    }
    if beta.im() < 0.0 {
        let upper = u_star(&beta.conj())?;
        return Ok(BranchPoint {
            u_star: upper.u_star.conj(),
            k: upper.k,
            beta: *beta,
        });
    }
    let prec = Precision::new(CURVE_DIGITS);
    let dist = beta.abs_minus_one();
    if dist == 0.0 {
        return Ok(BranchPoint {
            u_star: BigC::zero(prec),
            k: 0,
            beta: *beta,
        });
    }

    let beta_at = |t: f64| ComplexBeta::from_eps_r(beta.eps() * t, beta.r() * t);
    let t0 = (0.01 / dist).min(1.0);
    let b0 = beta_at(t0).to_bigc(prec);
    let one = BigC::one(prec);
    let three = BigC::from_f64(3.0, 0.0, prec);
    let seed = principal_sqrt(&(&three * &(&b0 - &one)));
    let mut w = match newton_w(&b0, seed) {
        Ok(w) => w,
        Err(residual) => return Err(Error::ContinuationFailure { t: t0, residual }),
    };

    // The root moves like √t for small t, so keep dt a bounded fraction of t
    // and insist each accepted step stays in the tracked root's basin; a
    // too-large motion means Newton hopped to a different sheet.
    let mut t = t0;
    let mut dt = t0 / 2.0;
    let mut last_residual = 0.0_f64;
    while t < 1.0 {
        let tn = (t + dt).min(1.0);
        let bn = beta_at(tn).to_bigc(prec);
        let accepted = match newton_w(&bn, w.clone()) {
            Ok(wn) => {
                let motion = (&wn - &w).abs().to_f64();
                if motion <= (0.3 * w.abs().to_f64()).max(0.02) {
                    w = wn;
                    t = tn;
                    true
                } else {
                    last_residual = motion;
                    false
                }
            }
            Err(residual) => {
                last_residual = residual;
                false
            }
        };
        if accepted {
            dt = (dt * 1.4).min(0.5 * t).min(0.25);
        } else {
            dt /= 2.0;
            if dt < 1e-6 {
                return Err(Error::ContinuationFailure {
                    t,
                    residual: last_residual,
                });
            }
        }
    }

    let b = beta.to_bigc(prec);
    let u = &w / &b;
    let (_, d1, _) = f_parts(&b, &u)?;
    let residual = d1.abs().to_f64();
    if residual > 1e-12 {
        return Err(Error::ContinuationFailure { t: 1.0, residual });
    }
    let k = branch_index(&b, &u);
    Ok(BranchPoint {
        u_star: u,
        k,
        beta: *beta,
    })
}

/// Newton for w = βu on h'_β(w) = w/β − tanh w from `start`; `Err` carries
/// the best residual reached so the continuation driver can refine its step.
fn newton_w(b: &BigC, start: BigC) -> std::result::Result<BigC, f64> {
    let thr = Float::with_val(64, 1e-28);
    let mut w = start;
    let Ok((_, mut d1, mut d2)) = h_parts(b, &w) else {
        return Err(f64::INFINITY);
    };
    let mut best = d1.abs().to_f64();
    for _ in 0..60 {
        let step = &d1 / &d2;
        let next = &w - &step;
        // A runaway iterate has left the branch's neighborhood (the branch
        // stays within a couple of pole spacings of the origin).
        if next.abs().to_f64() >= 8.0 {
            return Err(best);
        }
        w = next;
        let Ok((_, nd1, nd2)) = h_parts(b, &w) else {
            return Err(best);
        };
        d1 = nd1;
        d2 = nd2;
        let res = d1.abs();
        best = best.min(res.to_f64());
        if res <= thr && step.abs() <= thr {
            return Ok(w);
        }
    }
    Err(best)
}

/// Sheet index from `βu = artanh u + iπk` (principal artanh).
fn branch_index(b: &BigC, u: &BigC) -> i32 {
    let one = BigC::one(u.precision());
    let artanh = (&(&one + u) / &(&one - u)).ln().scale_pow2(-1);
    let gap = (&(b * u) - &artanh).im().to_f64();
    (gap / std::f64::consts::PI).round() as i32
}

/// Traces the conjectured boundary: for each R in the grid, solves
/// `Re f_β(u*(β)) = 0` in ε by a bracketed Illinois secant on [1e−6, 0.39].
/// Grid points whose bracket shows no sign change are skipped.
pub fn conjectured_curve(r_grid: &[f64]) -> Result<CurveSegment> {
    for &r in r_grid {
        if !r.is_finite() || r <= 0.0 {
            return Err(Error::ClaimDomain(format!(
                "conjectured_curve needs R > 0; got {r}"
            )));
        }
    }
    let mut points = Vec::new();
    for &r in r_grid {
        match eps0_at(r) {
            Ok(p) => points.push(p),
            Err(e) => eprintln!("conjectured curve: skipping R = {r}: {e}"),
        }
    }
    Ok(CurveSegment {
        kind: CurveKind::Conjectured,
        points,
    })
}

/// Solves Re f_{1+ε+iR}(u*) = 0 in ε at fixed R: a forward scan locates the
/// lowest sign change (Re f(u*) > 0 below the curve), then a bracketed
/// Illinois secant polishes it. A warm-started Newton reuses the previous u*
/// but falls back to the full continuation whenever its result leaves the
/// tracked branch (the trivial root u = 0 also solves f' = 0).
fn eps0_at(r: f64) -> Result<CurvePoint> {
    const EPS_MIN: f64 = 1e-6;
    const EPS_MAX: f64 = 0.39;
    const SCAN_STEP: f64 = 0.0025;

    let prec = Precision::new(CURVE_DIGITS);
    let mut warm: Option<BigC> = None;
    let mut eval = |eps: f64| -> Result<(f64, f64)> {
        let beta = ComplexBeta::from_eps_r(eps, r);
        let b = beta.to_bigc(prec);
        let u = match warm.take() {
            Some(seed) => {
                let motion_cap = (0.3 * seed.abs().to_f64()).max(0.02);
                match newton_w(&b, seed.clone()) {
                    Ok(w)
                        if w.abs().to_f64() > 1e-6
                            && (&w - &seed).abs().to_f64() <= motion_cap =>
                    {
                        &w / &b
                    }
                    _ => u_star(&beta)?.u_star,
                }
            }
            None => u_star(&beta)?.u_star,
        };
        let (v, _, _) = f_parts(&b, &u)?;
        warm = Some(&u * &b);
        Ok((v.re().to_f64(), v.im().to_f64()))
    };
    let point = |eps: f64, im: f64| CurvePoint {
        beta: ComplexBeta::from_eps_r(eps, r),
        eps,
        r,
        im_h: im.abs(),
    };

    let (mut a, mut fa) = (EPS_MIN, 0.0);
    let mut bracket = None;
    let mut k = 0usize;
    loop {
        let x = if k == 0 { EPS_MIN } else { k as f64 * SCAN_STEP };
        if x > EPS_MAX {
            break;
        }
        let (fx, im) = eval(x)?;
        if fx.abs() <= 1e-13 {
            return Ok(point(x, im));
        }
        if k > 0 && sgn(fa) * sgn(fx) < 0 {
            bracket = Some((x, fx));
            break;
        }
        a = x;
        fa = fx;
        k += 1;
    }
    let Some((mut b, mut fb)) = bracket else {
        return Err(Error::ClaimDomain(format!(
            "no sign change for eps0 in [{EPS_MIN}, {EPS_MAX}] at R = {r}"
        )));
    };

    let mut side = 0i32;
    for _ in 0..80 {
        let x = (a * fb - b * fa) / (fb - fa);
        let (fx, im) = eval(x)?;
        if fx.abs() <= 1e-13 || (b - a).abs() < 1e-15 {
            return Ok(point(x, im));
        }
        if sgn(fa) * sgn(fx) < 0 {
            b = x;
            fb = fx;
            if side == -1 {
                fa /= 2.0;
            }
            side = -1;
        } else {
            a = x;
            fa = fx;
            if side == 1 {
                fb /= 2.0;
            }
            side = 1;
        }
    }
    Err(Error::ClaimDomain(format!(
        "eps0 secant did not converge at R = {r}"
    )))
}
