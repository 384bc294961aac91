//! Precision policy and stable complex primitives.
//!
//! Z_{β,N} is an O(1) quantity assembled from summands as large as
//! exp(N·Re β/2), so plain doubles lose everything to cancellation long
//! before desk-scale N. All evaluation flows through [`BigC`], a
//! configurable-precision complex number backed by MPFR/MPC, at a precision
//! chosen by [`required_precision`] from the dynamic range of the sum.

use crate::model::ComplexBeta;
use crate::{Error, Result};
use rug::{Complex, Float};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Working precision in decimal digits. Never below 12 (the floor under
/// which the estimators' noise-floor accounting loses meaning). Evaluators
/// that pick their own precision via [`required_precision`] always carry a
/// 30-digit guard on top of the cancellation budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision {
    decimal_digits: u32,
}

impl Precision {
    pub const MIN_DIGITS: u32 = 12;

    /// Precision of `decimal_digits` digits, clamped to the 12-digit floor.
    pub fn new(decimal_digits: u32) -> Self {
        Precision {
            decimal_digits: decimal_digits.max(Self::MIN_DIGITS),
        }
    }

    pub fn decimal_digits(self) -> u32 {
        self.decimal_digits
    }

    /// Binary precision handed to MPFR: ceil(digits·log2 10) plus a word of slack.
    pub fn bits(self) -> u32 {
        (self.decimal_digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 4
    }

    pub fn with_extra_digits(self, extra: u32) -> Self {
        Precision::new(self.decimal_digits + extra)
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} digits", self.decimal_digits)
    }
}

/// Precision sufficient to evaluate Z_{β,n} and its relatives.
///
/// |exp(β·n·m²/2)| = exp(Re β·n·m²/2) peaks at m = ±1, so the sum spans
/// n·max(Re β,0)/(2 ln 10) decimal orders of magnitude; 30 guard digits on
/// top absorb binomial rounding and downstream arithmetic. Monotone
/// nondecreasing in both n and Re β. For Re β ≤ 0 every summand has modulus
/// ≤ 1 and the guard floor alone suffices.
pub fn required_precision(beta: &ComplexBeta, n: u32) -> Precision {
    let spread = f64::from(n) * beta.re().max(0.0) / (2.0 * std::f64::consts::LN_10);
    Precision::new(spread.ceil() as u32 + 30)
}

/// Complex number at a fixed [`Precision`].
///
/// Arithmetic is deterministic for a fixed precision and operand order
/// (MPFR/MPC round correctly), and binary operations require both operands
/// at the same precision — cross-precision mixing is always explicit via
/// [`BigC::to_precision`].
#[derive(Clone, Debug)]
pub struct BigC {
    z: Complex,
    prec: Precision,
}

impl BigC {
    pub fn zero(prec: Precision) -> Self {
        BigC {
            z: Complex::with_val(prec.bits(), (0, 0)),
            prec,
        }
    }

    pub fn one(prec: Precision) -> Self {
        BigC {
            z: Complex::with_val(prec.bits(), (1, 0)),
            prec,
        }
    }

    pub fn from_f64(re: f64, im: f64, prec: Precision) -> Self {
        BigC {
            z: Complex::with_val(prec.bits(), (re, im)),
            prec,
        }
    }

    pub fn from_real(re: Float, prec: Precision) -> Self {
        BigC {
            z: Complex::with_val(prec.bits(), (re, Float::new(prec.bits()))),
            prec,
        }
    }

    pub fn from_parts(re: Float, im: Float, prec: Precision) -> Self {
        BigC {
            z: Complex::with_val(prec.bits(), (re, im)),
            prec,
        }
    }

    pub(crate) fn raw(&self) -> &Complex {
        &self.z
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    /// The same value re-rounded to a new working precision (raising it pads
    /// with exact zero bits, so a value can be re-evaluated with guard
    /// digits).
    pub fn with_precision(&self, prec: Precision) -> BigC {
        BigC {
            z: Complex::with_val(prec.bits(), &self.z),
            prec,
        }
    }

    pub fn re(&self) -> &Float {
        self.z.real()
    }

    pub fn im(&self) -> &Float {
        self.z.imag()
    }

    pub fn to_f64_parts(&self) -> (f64, f64) {
        (self.z.real().to_f64(), self.z.imag().to_f64())
    }

    /// Round (or pad) to a different working precision. Explicit by design.
    pub fn to_precision(&self, prec: Precision) -> BigC {
        BigC {
            z: Complex::with_val(prec.bits(), &self.z),
            prec,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.z.real().is_zero() && self.z.imag().is_zero()
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec.bits(), self.z.abs_ref())
    }

    /// Principal argument in (−π, π], via atan2(im, re).
    pub fn arg(&self) -> Float {
        Float::with_val(self.prec.bits(), self.z.imag().atan2_ref(self.z.real()))
    }

    pub fn conj(&self) -> BigC {
        BigC {
            z: Complex::with_val(self.prec.bits(), self.z.conj_ref()),
            prec: self.prec,
        }
    }

    pub fn exp(&self) -> BigC {
        BigC {
            z: Complex::with_val(self.prec.bits(), self.z.exp_ref()),
            prec: self.prec,
        }
    }

    /// Principal natural logarithm (imaginary part in (−π, π]).
    pub fn ln(&self) -> BigC {
        BigC {
            z: Complex::with_val(self.prec.bits(), self.z.ln_ref()),
            prec: self.prec,
        }
    }

    pub fn cosh(&self) -> BigC {
        BigC {
            z: Complex::with_val(self.prec.bits(), self.z.cosh_ref()),
            prec: self.prec,
        }
    }

    pub fn tanh(&self) -> BigC {
        BigC {
            z: Complex::with_val(self.prec.bits(), self.z.tanh_ref()),
            prec: self.prec,
        }
    }

    pub fn square(&self) -> BigC {
        self * self
    }

    pub fn recip(&self) -> BigC {
        BigC {
            z: Complex::with_val(self.prec.bits(), self.z.recip_ref()),
            prec: self.prec,
        }
    }

    /// Exact multiplication by 2^k.
    pub fn scale_pow2(&self, k: i32) -> BigC {
        let mut z = self.z.clone();
        if k >= 0 {
            z <<= k as u32;
        } else {
            z >>= (-k) as u32;
        }
        BigC { z, prec: self.prec }
    }

    pub fn mul_f64(&self, x: f64) -> BigC {
        BigC {
            z: Complex::with_val(self.prec.bits(), &self.z * x),
            prec: self.prec,
        }
    }

    /// Decimal rendering of both parts with an explicit digit count.
    pub fn to_string_digits(&self, digits: u32) -> String {
        format!(
            "{} {}",
            self.z.real().to_string_radix(10, Some(digits as usize)),
            self.z.imag().to_string_radix(10, Some(digits as usize))
        )
    }

    fn assert_same_prec(&self, other: &BigC) {
        assert_eq!(
            self.prec, other.prec,
            "BigC operands must share a precision; convert explicitly"
        );
    }
}

impl PartialEq for BigC {
    fn eq(&self, other: &Self) -> bool {
        self.z == other.z
    }
}

macro_rules! bigc_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for &BigC {
            type Output = BigC;
            fn $method(self, rhs: &BigC) -> BigC {
                self.assert_same_prec(rhs);
                BigC {
                    z: Complex::with_val(self.prec.bits(), &self.z $op &rhs.z),
                    prec: self.prec,
                }
            }
        }
        impl $trait for BigC {
            type Output = BigC;
            fn $method(self, rhs: BigC) -> BigC {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&BigC> for BigC {
            type Output = BigC;
            fn $method(self, rhs: &BigC) -> BigC {
                (&self).$method(rhs)
            }
        }
    };
}

bigc_binop!(Add, add, +);
bigc_binop!(Sub, sub, -);
bigc_binop!(Mul, mul, *);
bigc_binop!(Div, div, /);

impl Neg for &BigC {
    type Output = BigC;
    fn neg(self) -> BigC {
        BigC {
            z: Complex::with_val(self.prec.bits(), -&self.z),
            prec: self.prec,
        }
    }
}

impl Neg for BigC {
    type Output = BigC;
    fn neg(self) -> BigC {
        -&self
    }
}

/// Sum a sequence in its given order, rounding once at the end.
///
/// Accumulation runs at 64 extra bits, so the result equals the exact sum of
/// the inputs to well within 4·count·ulp of the working precision, and is
/// deterministic for a fixed input order. Inputs must share one precision.
pub fn stable_sum(terms: &[BigC]) -> Result<BigC> {
    if terms.is_empty() {
        return Ok(BigC::zero(Precision::new(Precision::MIN_DIGITS)));
    }
    let prec = terms[0].prec;
    for t in &terms[1..] {
        if t.prec != prec {
            return Err(Error::MixedPrecision(
                prec.decimal_digits,
                t.prec.decimal_digits,
            ));
        }
    }
    Ok(stable_sum_iter(terms.iter().map(|t| &t.z), prec))
}

/// Order-preserving guarded accumulation over borrowed raw values.
pub(crate) fn stable_sum_iter<'a>(
    terms: impl Iterator<Item = &'a Complex>,
    prec: Precision,
) -> BigC {
    let guard_bits = prec.bits() + 64;
    let mut acc = Complex::with_val(guard_bits, (0, 0));
    for t in terms {
        acc += t;
    }
    BigC {
        z: Complex::with_val(prec.bits(), &acc),
        prec,
    }
}

/// Principal branch of the complex square root: Re ≥ 0, and the branch cut
/// (negative real axis) maps onto the positive imaginary axis, so that
/// √1 = 1 and √(−4) = 2i. A `−0` imaginary part is treated as `+0`; callers
/// never select the lower rim of the cut implicitly.
pub fn principal_sqrt(z: &BigC) -> BigC {
    let mut w = z.z.clone();
    if w.imag().is_zero() && w.imag().is_sign_negative() {
        w.mut_imag().abs_mut();
    }
    BigC {
        z: Complex::with_val(z.prec.bits(), w.sqrt_ref()),
        prec: z.prec,
    }
}
