//! Numerical laboratory for the Curie–Weiss model at complex inverse temperature.
//!
//! The partition function of N mean-field spins,
//! `Z_{β,N} = 2^{−N} Σ_σ exp(−β H_N(σ))` with `H_N(σ) = −(N/2) m_N(σ)²`,
//! is an entire function of β whose complex zeros organize the phase diagram.
//! This crate computes Z exactly at arbitrary precision, evaluates its
//! integral representation, locates the relevant saddle points of the two
//! landscapes
//!
//! ```text
//! f_β(u) = βu²/2 − log cosh(βu)        h_β(u) = u²/(2β) − log cosh u
//! ```
//!
//! traces the critical curves on which the free energy changes character,
//! finds zeros of Z and of its two-term saddle approximation Ψ_N, and builds
//! the zero-counting measures that concentrate on the critical curve.
//!
//! Modules mirror that pipeline: [`numerics`] (precision policy and stable
//! complex primitives), [`model`] (exact finite-N objects), [`landscape`]
//! (f/h evaluation, Taylor models, inequality certificates), [`saddle`]
//! (u_β, h_β(u_β), ξ(β)), [`quadrature`] (integral representation),
//! [`critical`] (curve tracing and the u* branch), [`zeros`] (Ψ_N, zero
//! location, matching, measures), [`scan`] (phase-diagram grids), and
//! [`checks`] (the acceptance/reproduction suites shared by tests and CLI).
//!
//! Everything is deterministic: fixed summation orders, fixed seeds, and
//! correctly-rounded MPFR/MPC arithmetic underneath.

pub mod checks;
pub mod critical;
pub mod landscape;
pub mod model;
pub mod numerics;
pub mod quadrature;
pub mod saddle;
pub mod scan;
pub mod zeros;

use thiserror::Error;

/// Crate-wide error type. Variants are grouped by the module that raises them.
#[derive(Debug, Error)]
pub enum Error {
    // --- numerics ---
    #[error("stable_sum requires uniform precision; saw {0} and {1} decimal digits")]
    MixedPrecision(u32, u32),

    // --- model ---
    #[error("spin configuration must be nonempty")]
    EmptyConfig,
    #[error("spin configurations must contain only +1/-1 entries (found {0})")]
    BadSpin(i8),
    #[error("z_enumerate is an oracle for n <= {max}; got n = {n}")]
    OracleRange { n: u32, max: u32 },
    #[error("|Z| = {abs_z:.3e} is below the zero-proximity threshold {threshold:.3e}; refine precision or perturb beta")]
    ZeroProximity { abs_z: f64, threshold: f64 },

    // --- landscape ---
    #[error("cosh(beta*u) within {dist:.3e} of a pole (threshold {threshold:.3e}); evaluation rejected")]
    PoleProximity { dist: f64, threshold: f64 },
    #[error("h_beta(u) off the real axis requires |u| < pi/2; got |u| = {abs_u:.6}")]
    HBranchDomain { abs_u: f64 },
    #[error("inequality suite outside claim hypotheses: {0}")]
    ClaimDomain(String),
    #[error("Re beta = {re_beta} <= 0: real-axis integral representation unsupported")]
    NonpositiveReBeta { re_beta: f64 },
    #[error("could not certify a truncation radius for n = {n} at {digits} digits")]
    TruncationUnverified { n: u32, digits: u32 },

    // --- saddle ---
    #[error("beta = 1 is the degenerate triple saddle; sample around it")]
    DegenerateSaddle,
    #[error("|beta-1| = {dist:.4} outside the validated saddle neighborhood (0, {max}]")]
    SaddleNeighborhood { dist: f64, max: f64 },
    #[error("saddle search failed: {0}")]
    NoSaddle(String),
    #[error("xi branch ambiguous: both square roots nearly orthogonal to the reference direction")]
    XiBranchAmbiguity,

    // --- quadrature ---
    #[error("quadrature reached max depth before {requested} digits; best relative error {best:.3e}")]
    QuadratureAccuracy { requested: u32, best: f64 },

    // --- critical ---
    #[error("R0 bracket invalid at eps = {eps}: Re h has signs ({lo_sign}, {hi_sign}) at the endpoints")]
    BracketError { eps: f64, lo_sign: i32, hi_sign: i32 },
    #[error("the tilted critical curve eps_T2(R) needs R > pi; got R = {0}")]
    Theorem2Domain(f64),
    #[error("u* branch supported on 0 < Re beta <= {max}; got Re beta = {re_beta}")]
    UStarRegion { re_beta: f64, max: f64 },
    #[error("u* continuation failed at path parameter t = {t:.4} (residual {residual:.3e})")]
    ContinuationFailure { t: f64, residual: f64 },
    #[error("trace step/eps_max invalid: need 0 < step <= eps_max <= {max}")]
    TraceRange { max: f64 },

    // --- zeros ---
    #[error("Psi_N is singular at beta = 1; need |beta-1| >= {min} (got {dist:.3e})")]
    PsiSingularityProximity { dist: f64, min: f64 },
    #[error("annulus [{lo}, {hi}] not contained in the supported range [{min}, {max}]")]
    AnnulusRange { lo: f64, hi: f64, min: f64, max: f64 },
    #[error("zero search capped at n <= {max} for runtime; got n = {n}")]
    ZeroSearchCap { n: u32, max: u32 },
    #[error("winding-number phase tracking unresolved near {0} after max refinement")]
    WindingUnresolved(String),
    #[error("zero-set matching requires identical n and region")]
    MatchScopeMismatch,
    #[error("gamma trace covers eps <= {have:.4} but the zero set needs eps <= {need:.4}")]
    GammaCoverage { need: f64, have: f64 },
    #[error("zero refinement from seed ({re:.4}, {im:.4}) did not converge")]
    ZeroRefinement { re: f64, im: f64 },

    // --- scan / io ---
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
