//! Exact finite-N Curie–Weiss objects: Hamiltonian, partition function,
//! free-energy estimator.
//!
//! The Hamiltonian depends on a configuration only through its magnetization
//! m = (Σσ_i)/N, so Z collapses from 2^N configurations to N+1 binomial
//! terms:
//!
//! ```text
//! Z_{β,N} = 2^{−N} Σ_{k=0}^{N} C(N,k) · exp(β·(N−2k)²/(2N))
//! ```
//!
//! [`z_enumerate`] keeps the brute-force configuration sum as an independent
//! oracle for small N; [`z_binomial`] is the production evaluator.

use crate::numerics::{required_precision, stable_sum_iter, BigC, Precision};
use crate::{Error, Result};
use rug::{Complex, Float, Integer};
use std::fmt;

/// Inverse temperature β = 1 + ε + iR, stored by its offset from the
/// critical point β = 1. `to_bigc` reconstructs β as Float(1) + ε at full
/// working precision, so a tiny ε is never absorbed into the leading 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexBeta {
    epsilon: f64,
    r: f64,
}

impl ComplexBeta {
    pub fn new(re: f64, im: f64) -> Self {
        ComplexBeta {
            epsilon: re - 1.0,
            r: im,
        }
    }

    pub fn from_eps_r(epsilon: f64, r: f64) -> Self {
        ComplexBeta { epsilon, r }
    }

    pub fn re(&self) -> f64 {
        1.0 + self.epsilon
    }

    pub fn im(&self) -> f64 {
        self.r
    }

    pub fn eps(&self) -> f64 {
        self.epsilon
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn conj(&self) -> Self {
        ComplexBeta {
            epsilon: self.epsilon,
            r: -self.r,
        }
    }

    pub fn is_real(&self) -> bool {
        self.r == 0.0
    }

    /// |β − 1| = √(ε² + R²).
    pub fn abs_minus_one(&self) -> f64 {
        self.epsilon.hypot(self.r)
    }

    pub fn to_bigc(&self, prec: Precision) -> BigC {
        let bits = prec.bits();
        let re = Float::with_val(bits, 1) + Float::with_val(bits, self.epsilon);
        let im = Float::with_val(bits, self.r);
        BigC::from_parts(re, im, prec)
    }
}

impl fmt::Display for ComplexBeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.re(), self.im())
    }
}

/// How a partition value was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionMethod {
    Enumeration,
    Binomial,
    IntegralF,
    IntegralH,
}

/// A computed Z_{β,N} with its provenance.
#[derive(Clone, Debug)]
pub struct PartitionValue {
    pub value: BigC,
    pub n: u32,
    pub method: PartitionMethod,
    pub precision_used: Precision,
}

/// H_N(σ) = −(N/2)·m_N(σ)² with m_N = (Σσ_i)/N. Always in [−N/2, 0].
pub fn hamiltonian(config: &[i8]) -> Result<f64> {
    if config.is_empty() {
        return Err(Error::EmptyConfig);
    }
    let mut s: i64 = 0;
    for &x in config {
        match x {
            1 | -1 => s += i64::from(x),
            other => return Err(Error::BadSpin(other)),
        }
    }
    let n = config.len() as f64;
    let m = s as f64 / n;
    Ok(-(n / 2.0) * m * m)
}

/// Largest n for which brute-force enumeration is kept as an oracle.
pub const ENUMERATE_MAX_N: u32 = 20;

/// Per-magnetization Boltzmann weights exp(β·(n−2k)²/(2n)), k = 0..=n.
/// The exponent is formed as Float((n−2k)²)/(2n): one rounding each.
fn magnetization_weights(b: &BigC, n: u32) -> Vec<Complex> {
    let prec = b.precision();
    let bits = prec.bits();
    (0..=n)
        .map(|k| {
            let s = i64::from(n) - 2 * i64::from(k);
            let e = Float::with_val(bits, s * s) / Float::with_val(bits, 2 * i64::from(n));
            let arg = BigC::from_parts(
                Float::with_val(bits, b.re() * &e),
                Float::with_val(bits, b.im() * &e),
                prec,
            );
            arg.exp().raw().clone()
        })
        .collect()
}

/// Brute-force oracle: Z = 2^{−n} Σ_{σ∈{±1}^n} exp(−β H_n(σ)), summed in
/// lexicographic configuration order (σ_1 varies slowest, +1 before −1).
/// Restricted to n ≤ [`ENUMERATE_MAX_N`].
pub fn z_enumerate(beta: &ComplexBeta, n: u32) -> Result<PartitionValue> {
    if n == 0 || n > ENUMERATE_MAX_N {
        return Err(Error::OracleRange {
            n,
            max: ENUMERATE_MAX_N,
        });
    }
    let prec = required_precision(beta, n);
    // exp(−βH) depends only on the number of −1 spins; the per-k weights are
    // computed once, but the sum still walks all 2^n configurations in order.
    let weights = magnetization_weights(&beta.to_bigc(prec), n);
    let sum = stable_sum_iter(
        (0u64..(1u64 << n)).map(|bits| &weights[bits.count_ones() as usize]),
        prec,
    );
    Ok(PartitionValue {
        value: sum.scale_pow2(-(n as i32)),
        n,
        method: PartitionMethod::Enumeration,
        precision_used: prec,
    })
}

/// Production evaluator: Z = Σ_k C(n,k)·2^{−n}·exp(β·(n−2k)²/(2n)) at
/// [`required_precision`], summed k-ascending. Binomial coefficients are
/// exact integers rounded once into the working precision.
pub fn z_binomial(beta: &ComplexBeta, n: u32) -> Result<PartitionValue> {
    if n == 0 {
        return Err(Error::OracleRange { n, max: u32::MAX });
    }
    let prec = required_precision(beta, n);
    Ok(PartitionValue {
        value: z_binomial_at(&beta.to_bigc(prec), n),
        n,
        method: PartitionMethod::Binomial,
        precision_used: prec,
    })
}

/// Binomial-sum Z at an arbitrary high-precision β. The caller owns the
/// precision choice; zero finders use this to take steps far below f64
/// resolution.
pub fn z_binomial_at(b: &BigC, n: u32) -> BigC {
    let prec = b.precision();
    let bits = prec.bits();
    let weights = magnetization_weights(b, n);
    let terms: Vec<Complex> = (0..=n)
        .map(|k| {
            let c = Integer::from(Integer::binomial_u(n, k));
            let c = Float::with_val(bits, &c) >> n;
            Complex::with_val(bits, &weights[k as usize] * &c)
        })
        .collect();
    stable_sum_iter(terms.iter(), prec)
}

/// dZ/dβ = Σ_k C(n,k)·2^{−n}·E_k·exp(β·E_k) with E_k = (n−2k)²/(2n)
/// (term-wise derivative of the binomial sum; consumed by the zero finder).
pub fn z_derivative(beta: &ComplexBeta, n: u32) -> Result<BigC> {
    if n == 0 {
        return Err(Error::OracleRange { n, max: u32::MAX });
    }
    let prec = required_precision(beta, n);
    Ok(z_derivative_at(&beta.to_bigc(prec), n))
}

/// dZ/dβ at an arbitrary high-precision β (see [`z_binomial_at`]).
pub fn z_derivative_at(b: &BigC, n: u32) -> BigC {
    let prec = b.precision();
    let bits = prec.bits();
    let weights = magnetization_weights(b, n);
    let terms: Vec<Complex> = (0..=n)
        .map(|k| {
            let s = i64::from(n) - 2 * i64::from(k);
            let e = Float::with_val(bits, s * s) / Float::with_val(bits, 2 * i64::from(n));
            let c = Integer::from(Integer::binomial_u(n, k));
            let c = Float::with_val(bits, &c) >> n;
            let scale = Float::with_val(bits, &e * &c);
            Complex::with_val(bits, &weights[k as usize] * &scale)
        })
        .collect();
    stable_sum_iter(terms.iter(), prec)
}

/// Natural log of the largest term modulus in the binomial sum:
/// max_k [ln C(n,k) − n ln 2 + Re β·(n−2k)²/(2n)]. This is the scale against
/// which "Z is numerically zero" must be judged.
pub fn z_term_scale_ln(beta: &ComplexBeta, n: u32) -> f64 {
    let nf = f64::from(n);
    // ln C(n,k) built incrementally: ln C(n,0) = 0, ratio (n−k)/(k+1).
    let mut ln_c = 0.0f64;
    let mut best = beta.re() * nf / 2.0; // k = 0 term
    for k in 0..n {
        ln_c += ((nf - f64::from(k)) / (f64::from(k) + 1.0)).ln();
        let s = nf - 2.0 * (f64::from(k) + 1.0);
        let t = ln_c + beta.re() * s * s / (2.0 * nf);
        if t > best {
            best = t;
        }
    }
    best - nf * std::f64::consts::LN_2
}

/// (1/n)·log|Z_{β,n}|. Errors out when |Z| sinks to the working-precision
/// noise floor of the sum (the caller must perturb β or raise precision).
pub fn free_energy_estimate(beta: &ComplexBeta, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::OracleRange { n, max: u32::MAX });
    }
    free_energy_estimate_at(beta, n, required_precision(beta, n))
}

/// [`free_energy_estimate`] at a caller-chosen working precision (grid scans
/// use this to honor a precision override).
pub fn free_energy_estimate_at(beta: &ComplexBeta, n: u32, prec: Precision) -> Result<f64> {
    let digits = prec.decimal_digits();
    let abs_z = z_binomial_at(&beta.to_bigc(prec), n).abs();
    let threshold =
        (z_term_scale_ln(beta, n) - (f64::from(digits) - 10.0) * std::f64::consts::LN_10).exp();
    if abs_z.clone().to_f64() <= threshold {
        return Err(Error::ZeroProximity {
            abs_z: abs_z.to_f64(),
            threshold,
        });
    }
    let ln_abs = abs_z.ln();
    Ok(ln_abs.to_f64() / f64::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::Rng;

    #[test]
    fn hamiltonian_examples() {
        assert_eq!(hamiltonian(&[1]).unwrap(), -0.5);
        assert_eq!(hamiltonian(&[1, -1]).unwrap(), 0.0);
        assert_eq!(hamiltonian(&[1, 1, 1, -1]).unwrap(), -0.5);
        assert!(matches!(hamiltonian(&[]), Err(Error::EmptyConfig)));
        assert!(matches!(hamiltonian(&[1, 2]), Err(Error::BadSpin(2))));
    }

    #[test]
    fn enumerate_closed_forms() {
        // n = 1: Z = exp(β/2)
        let beta = ComplexBeta::new(0.8, -0.6);
        let z1 = z_enumerate(&beta, 1).unwrap();
        let prec = z1.precision_used;
        let expected = beta.to_bigc(prec).scale_pow2(-1).exp();
        let err = (&z1.value - &expected).abs().to_f64();
        assert!(err < 1e-28, "err = {err:.3e}");

        // n = 2: Z = (exp(β) + 1)/2
        let z2 = z_enumerate(&beta, 2).unwrap();
        let expected = (beta.to_bigc(prec).exp() + BigC::one(prec)).scale_pow2(-1);
        let err = (&z2.value - &expected).abs().to_f64();
        assert!(err < 1e-28, "err = {err:.3e}");

        // β = 0: all weights are 1, Z = 1 exactly
        let z = z_enumerate(&ComplexBeta::new(0.0, 0.0), 12).unwrap();
        assert_eq!(z.value, BigC::one(z.precision_used));
        assert_eq!(z.method, PartitionMethod::Enumeration);
    }

    #[test]
    fn binomial_matches_closed_form() {
        let beta = ComplexBeta::new(1.0, 1.0);
        let z = z_binomial(&beta, 2).unwrap();
        let prec = z.precision_used;
        let expected = (beta.to_bigc(prec).exp() + BigC::one(prec)).scale_pow2(-1);
        let err = (&z.value - &expected).abs().to_f64();
        assert!(err < 1e-28, "err = {err:.3e}");
    }

    #[test]
    fn binomial_agrees_with_enumeration() {
        let mut rng = Rng::new(17);
        for _ in 0..12 {
            let beta = ComplexBeta::new(rng.range(-1.0, 3.0), rng.range(-3.0, 3.0));
            let n = 1 + (rng.unit() * 16.0) as u32;
            let ze = z_enumerate(&beta, n).unwrap().value;
            let zb = z_binomial(&beta, n).unwrap().value;
            let scale = ze.abs().to_f64().max(1e-6);
            let rel = (&ze - &zb).abs().to_f64() / scale;
            assert!(rel <= 1e-12, "n={n} beta={beta} rel={rel:.3e}");
        }
    }

    #[test]
    fn enumeration_oracle_range() {
        let beta = ComplexBeta::new(1.0, 0.0);
        assert!(matches!(
            z_enumerate(&beta, 21),
            Err(Error::OracleRange { n: 21, max: 20 })
        ));
    }

    #[test]
    fn conjugation_symmetry_is_exact() {
        let beta = ComplexBeta::new(1.3, 0.7);
        let z = z_binomial(&beta, 40).unwrap().value;
        let zc = z_binomial(&beta.conj(), 40).unwrap().value;
        assert_eq!(zc, z.conj());
    }

    #[test]
    fn real_beta_positivity() {
        for &(re, n) in &[(0.5, 30u32), (1.5, 75), (2.5, 40)] {
            let beta = ComplexBeta::new(re, 0.0);
            let z = z_binomial(&beta, n).unwrap().value;
            assert!(z.im().is_zero());
            assert!(z.re().to_f64() > 0.0);
            let dz = z_derivative(&beta, n).unwrap();
            assert!(dz.im().is_zero());
            assert!(dz.re().to_f64() > 0.0);
        }
    }

    #[test]
    fn two_precision_self_consistency() {
        // required_precision is sufficient: recomputing at +20 digits moves
        // the value by less than 10^{-20} relative.
        let beta = ComplexBeta::new(1.5, 0.0);
        let z = z_binomial(&beta, 100).unwrap();
        let hi_prec = z.precision_used.with_extra_digits(20);
        let b = beta.to_bigc(hi_prec);
        let bits = hi_prec.bits();
        let mut terms = Vec::new();
        for k in 0..=100u32 {
            let s = i64::from(100 - 2 * k as i64);
            let e = Float::with_val(bits, s * s) / Float::with_val(bits, 200);
            let c = Integer::from(Integer::binomial_u(100, k));
            let c = Float::with_val(bits, &c) >> 100;
            let w = BigC::from_parts(
                Float::with_val(bits, b.re() * &e),
                Float::with_val(bits, b.im() * &e),
                hi_prec,
            )
            .exp();
            terms.push(Complex::with_val(bits, w.raw() * &c));
        }
        let z_hi = stable_sum_iter(terms.iter(), hi_prec);
        let rel = (&z_hi - &z.value.to_precision(hi_prec)).abs().to_f64() / z_hi.abs().to_f64();
        assert!(rel < 1e-20, "rel = {rel:.3e}");
    }

    #[test]
    fn derivative_closed_form_and_finite_difference() {
        // n = 2 at β = 0: d/dβ (e^β + 1)/2 = 1/2
        let dz = z_derivative(&ComplexBeta::new(0.0, 0.0), 2).unwrap();
        assert_eq!(dz.to_f64_parts(), (0.5, 0.0));

        // central finite difference at a complex point; the divisor is the
        // actually-realized step (f64 rounding of 0.7 ± h), not the nominal h
        let n = 14;
        let h = 1e-11;
        let beta = ComplexBeta::new(0.7, 0.3);
        let dz = z_derivative(&beta, n).unwrap();
        let bp = ComplexBeta::new(0.7 + h, 0.3);
        let bm = ComplexBeta::new(0.7 - h, 0.3);
        let zp = z_binomial(&bp, n).unwrap().value;
        let zm = z_binomial(&bm, n).unwrap().value;
        let fd = (&zp - &zm).mul_f64(1.0 / (bp.eps() - bm.eps()));
        let rel = (&fd - &dz).abs().to_f64() / dz.abs().to_f64();
        assert!(rel <= 1e-10, "rel = {rel:.3e}");
    }

    #[test]
    fn free_energy_basics() {
        // β = 0: Z = 1 exactly, F = 0
        assert_eq!(free_energy_estimate(&ComplexBeta::new(0.0, 0.0), 37).unwrap(), 0.0);

        // supercritical real β: F stabilizes above 0.1
        let f200 = free_energy_estimate(&ComplexBeta::new(2.0, 0.0), 200).unwrap();
        let f400 = free_energy_estimate(&ComplexBeta::new(2.0, 0.0), 400).unwrap();
        assert!((f200 - f400).abs() < 0.05);
        assert!(f200 > 0.1 && f400 > 0.1);

        // deep in the F = 0 phase: small and shrinking
        let g200 = free_energy_estimate(&ComplexBeta::new(0.5, 0.5), 200).unwrap();
        let g400 = free_energy_estimate(&ComplexBeta::new(0.5, 0.5), 400).unwrap();
        assert!(g200.abs() <= 0.05);
        assert!(g400.abs() < g200.abs());
    }

    #[test]
    fn beta_reconstruction_is_exact() {
        let beta = ComplexBeta::from_eps_r(1e-25, 0.5);
        let prec = Precision::new(40);
        let b = beta.to_bigc(prec);
        // ε survives at full precision instead of vanishing into 1 + ε
        let shifted = &b - &BigC::one(prec);
        assert!((shifted.re().to_f64() - 1e-25).abs() < 1e-38);
        assert_eq!(beta.conj().r(), -0.5);
        assert_eq!(beta.conj().eps(), beta.eps());
    }
}
