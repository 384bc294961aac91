//! Numerical evaluation of the integral representation of `Z`.
//!
//! For `Re β > 0`,
//! `Z = √(βN/2π)·∫_ℝ e^{−N f_β(u)} du = √(N/2πβ)·∫_ℝ e^{−N h_β(u)} du`.
//! Both integrals run over the real line: fixed-order Gauss–Legendre panels
//! refined by bisection until successive levels agree, truncated at the
//! certified radius from the landscape module, doubled by evenness.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::landscape::{
    f_parts, h_parts, re_f_real_axis, truncation_radius, truncation_radius_h, Form,
};
use crate::model::ComplexBeta;
use crate::numerics::{principal_sqrt, BigC, Precision};
use crate::{Error, Result};

const MAX_DEPTH: usize = 32;

/// A converged integral value with its certification data.
#[derive(Clone, Debug)]
pub struct QuadratureResult {
    /// `√(βN/2π)·∫_{−U}^{U} e^{−N f_β}` (or the h-form analogue).
    pub value: BigC,
    /// Number of accepted leaf panels on `[0, U]`.
    pub panels: usize,
    /// The truncation radius `U`.
    pub truncation: f64,
    /// Accumulated inter-level disagreement divided by the natural scale of
    /// the result, `max(1, |value|, e^{−N·min Re f_β})`.
    pub est_error: f64,
}

/// Evaluates the f-form integral representation.
pub fn z_integral_f(beta: &ComplexBeta, n: u32, requested_digits: u32) -> Result<QuadratureResult> {
    if beta.re() <= 0.0 {
        return Err(Error::NonpositiveReBeta { re_beta: beta.re() });
    }
    // On the real line Re f_β ≥ Re β·(u²/2 − u) ≥ −Re β/2, so the integrand
    // peaks at most e^{N·Re β/2}; provision that many digits above the target.
    let prec = working_precision(beta.re() / 2.0, n, requested_digits);
    let u_max = truncation_radius(beta, n, prec)?;
    let freq = beta.im().abs();
    integrate(beta, n, requested_digits, prec, u_max, freq, Form::F)
}

/// Evaluates the h-form integral representation.
///
/// The stated conditions `Re β > 0` and `Re(1/β) > 0` coincide, so a single
/// check covers both.
pub fn z_integral_h(beta: &ComplexBeta, n: u32, requested_digits: u32) -> Result<QuadratureResult> {
    if beta.re() <= 0.0 {
        return Err(Error::NonpositiveReBeta { re_beta: beta.re() });
    }
    let a_h = beta.re() / (beta.re() * beta.re() + beta.im() * beta.im());
    // Re h_β ≥ Re(1/β)·u²/2 − u ≥ −1/(2 Re(1/β)) on the real line.
    let prec = working_precision(0.5 / a_h, n, requested_digits);
    let u_max = truncation_radius_h(beta, n, prec)?;
    let freq = beta.im().abs() / (beta.re() * beta.re() + beta.im() * beta.im());
    integrate(beta, n, requested_digits, prec, u_max, freq, Form::H)
}

/// Working precision: certified integrand peak (in nats per sample) plus the
/// requested digits and guard room.
fn working_precision(peak_nats: f64, n: u32, requested_digits: u32) -> Precision {
    let peak_digits = (n as f64 * peak_nats / std::f64::consts::LN_10).ceil().max(0.0) as u32;
    Precision::new(peak_digits + (requested_digits + 12).max(30))
}

struct Acc {
    sum: BigC,
    err: Float,
    panels: usize,
    converged: bool,
}

fn integrate(
    beta: &ComplexBeta,
    n: u32,
    requested_digits: u32,
    prec: Precision,
    u_max: f64,
    freq: f64,
    form: Form,
) -> Result<QuadratureResult> {
    let bits = prec.bits();
    let b = beta.to_bigc(prec);
    let rule = gl16_rule(prec);
    let g = |uf: &Float| -> Result<BigC> {
        let u = BigC::from_real(uf.clone(), prec);
        let (v, _, _) = match form {
            Form::F => f_parts(&b, &u),
            Form::H => h_parts(&b, &u),
        }?;
        Ok(v.mul_f64(-(n as f64)).exp())
    };

    // √(βN/2π) or √(N/2πβ); principal branch is analytic on Re β > 0.
    let two_pi = Float::with_val(bits, Constant::Pi) * 2u32;
    let n_over_2pi = Float::with_val(bits, n) / two_pi;
    let pref_arg = match form {
        Form::F => &b * &BigC::from_real(n_over_2pi, prec),
        Form::H => &b.recip() * &BigC::from_real(n_over_2pi, prec),
    };
    let pref = principal_sqrt(&pref_arg);
    let pref_abs = pref.abs();

    // Initial panels sized so each holds a bounded number of oscillation
    // wavelengths of exp(−i·N·Im(common quadratic phase)).
    let w0 = 4.0 * (std::f64::consts::PI / (n as f64 * freq)).min(1.0);
    let k0 = (u_max / w0).ceil().max(1.0) as usize;
    let edges: Vec<Float> = (0..=k0)
        .map(|i| Float::with_val(bits, u_max * (i as f64) / (k0 as f64)))
        .collect();

    // Tolerance scale of the result. Under heavy oscillatory cancellation a
    // coarse integral estimate is unreliable, but the dominant balance is
    // known a priori: |Z| ≈ e^{−N·min Re f_β} up to algebraic factors (and
    // the same scale governs the h-form, whose value is the same Z).
    let mut min_re_f = 0.0f64;
    for i in 0..=512 {
        let u = Float::with_val(64, u_max * i as f64 / 512.0);
        min_re_f = min_re_f.min(re_f_real_axis(beta.re(), beta.im(), &u).to_f64());
    }
    let mut scale = Float::with_val(bits, -(n as f64) * min_re_f).exp();
    if scale < 1u32 {
        scale = Float::with_val(bits, 1);
    }

    // Coarse pass; the panel values are reused as the parent level of the
    // refinement.
    let mut coarse = Vec::with_capacity(k0);
    for i in 0..k0 {
        coarse.push(panel_integral(&g, &edges[i], &edges[i + 1], &rule, prec)?);
    }
    // Half of the budget absorbs the accumulation across panels.
    let tol_value = Float::with_val(64, 10).pow(-(requested_digits as i32)) * &scale / 2u32;
    let tol_j = Float::with_val(bits, &tol_value / &pref_abs) / 2u32;
    let tol_per_width = Float::with_val(bits, &tol_j / Float::with_val(bits, u_max));

    let mut acc = Acc {
        sum: BigC::zero(prec),
        err: Float::with_val(bits, 0),
        panels: 0,
        converged: true,
    };
    for i in 0..k0 {
        adapt(
            &g,
            &edges[i],
            &edges[i + 1],
            coarse[i].clone(),
            &tol_per_width,
            &rule,
            prec,
            0,
            &mut acc,
        )?;
    }

    let value = (&pref * &acc.sum).scale_pow2(1);
    let mut value_scale = value.abs();
    if value_scale < scale {
        value_scale = scale;
    }
    let est_error = (Float::with_val(bits, &acc.err * &pref_abs) * 2u32 / value_scale).to_f64();
    if !acc.converged || est_error > 10f64.powi(-(requested_digits as i32)) {
        return Err(Error::QuadratureAccuracy {
            requested: requested_digits,
            best: est_error,
        });
    }
    Ok(QuadratureResult {
        value,
        panels: acc.panels,
        truncation: u_max,
        est_error,
    })
}

#[allow(clippy::too_many_arguments)]
fn adapt<G>(
    g: &G,
    a: &Float,
    b: &Float,
    whole: BigC,
    tol_per_width: &Float,
    rule: &Rule,
    prec: Precision,
    depth: usize,
    acc: &mut Acc,
) -> Result<()>
where
    G: Fn(&Float) -> Result<BigC>,
{
    let bits = prec.bits();
    let mid = Float::with_val(bits, a + b) / 2u32;
    let left = panel_integral(g, a, &mid, rule, prec)?;
    let right = panel_integral(g, &mid, b, rule, prec)?;
    let refined = &left + &right;
    let delta = (&refined - &whole).abs();
    let width = Float::with_val(bits, b - a);
    let allowed = Float::with_val(bits, tol_per_width * &width);
    if delta <= allowed || depth >= MAX_DEPTH {
        if delta > allowed {
            acc.converged = false;
        }
        acc.err += &delta;
        acc.sum = &acc.sum + &refined;
        acc.panels += 2;
        return Ok(());
    }
    adapt(g, a, &mid, left, tol_per_width, rule, prec, depth + 1, acc)?;
    adapt(g, &mid, b, right, tol_per_width, rule, prec, depth + 1, acc)
}

fn panel_integral<G>(g: &G, a: &Float, b: &Float, rule: &Rule, prec: Precision) -> Result<BigC>
where
    G: Fn(&Float) -> Result<BigC>,
{
    let bits = prec.bits();
    let center = Float::with_val(bits, a + b) / 2u32;
    let half = Float::with_val(bits, b - a) / 2u32;
    let mut sum = BigC::zero(prec);
    for (x, w) in rule.xs.iter().zip(rule.ws.iter()) {
        let u = Float::with_val(bits, x * &half) + &center;
        let val = g(&u)?;
        sum = &sum + &(&val * &BigC::from_real(Float::with_val(bits, w), prec));
    }
    Ok(&sum * &BigC::from_real(half, prec))
}

struct Rule {
    xs: Vec<Float>,
    ws: Vec<Float>,
}

/// Gauss–Legendre 16-node rule on [−1, 1] at the working precision: Newton
/// on P₁₆ from the Chebyshev-angle seeds, weights 2/((1−x²)·P₁₆'(x)²).
fn gl16_rule(prec: Precision) -> Rule {
    let bits = prec.bits() + 16;
    let eps = Float::with_val(bits, 2).pow(-(bits as i32) + 12);
    let mut pos_x = Vec::with_capacity(8);
    let mut pos_w = Vec::with_capacity(8);
    for i in 1..=8 {
        let seed = (std::f64::consts::PI * (i as f64 - 0.25) / 16.5).cos();
        let mut x = Float::with_val(bits, seed);
        for _ in 0..64 {
            let (p, dp) = legendre16(&x);
            let step = Float::with_val(bits, &p / &dp);
            x -= &step;
            if step.abs() < eps {
                break;
            }
        }
        let (_, dp) = legendre16(&x);
        let mut denom = Float::with_val(bits, 1) - Float::with_val(bits, &x * &x);
        denom *= Float::with_val(bits, &dp * &dp);
        pos_w.push(Float::with_val(bits, 2) / denom);
        pos_x.push(x);
    }
    let mut xs = Vec::with_capacity(16);
    let mut ws = Vec::with_capacity(16);
    for i in 0..8 {
        xs.push(-pos_x[i].clone());
        ws.push(pos_w[i].clone());
    }
    for i in (0..8).rev() {
        xs.push(pos_x[i].clone());
        ws.push(pos_w[i].clone());
    }
    Rule { xs, ws }
}

/// `(P₁₆(x), P₁₆'(x))` by the three-term recurrence.
fn legendre16(x: &Float) -> (Float, Float) {
    let bits = x.prec();
    let mut pkm1 = Float::with_val(bits, 1);
    let mut pk = x.clone();
    for k in 1..16u32 {
        // (k+1)·P_{k+1} = (2k+1)·x·P_k − k·P_{k−1}
        let mut next = Float::with_val(bits, x * &pk);
        next *= 2 * k + 1;
        next -= Float::with_val(bits, &pkm1 * k);
        next /= k + 1;
        pkm1 = pk;
        pk = next;
    }
    let mut num = Float::with_val(bits, x * &pk);
    num -= &pkm1;
    num *= 16u32;
    let den = Float::with_val(bits, x * x) - 1u32;
    (pk, num / den)
}
