//! Numerical library for the generalized `L_n` integral transform
//!
//! The transform is
//!
//! ```text
//! L_n{f(x); y} = ∫₀^∞ x^{n-1} exp(-xⁿ yⁿ) f(x) dx ,   n = 2^k
//! ```
//!
//! with `n = 1` reducing to the classical Laplace transform. The crate
//! provides:
//!
//! * [`specfun`] — self-contained Gamma / Bessel J / erf kernel,
//! * [`transform`] — forward transform by quadrature plus the Laplace-relation route,
//! * [`table`] — the ten-pair closed-form catalog with validity checking,
//! * [`operator`] — the δ-derivative operator and its transform identities,
//! * [`inversion`] — residue inversion of rationals in s = yⁿ and termwise
//!   inversion of power series in 1/yⁿ,
//! * [`ode`] — the Bessel-type ODE families solved through the transform domain,
//! * [`verify`] — the cross-validation suites exposed by the CLI.

pub mod expr;
pub mod inversion;
pub mod ode;
pub mod operator;
pub mod quad;
pub mod specfun;
pub mod table;
pub mod transform;
pub mod verify;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("gamma pole at non-positive integer argument {0}")]
    GammaPole(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{condition} violated")]
    RegionViolation { condition: String },
    #[error("order must be a power of two (n = 2^k), got {0}")]
    InvalidOrder(u32),
    #[error("quadrature failed to converge (estimated error {err:.3e} exceeds {tol:.3e})")]
    QuadratureNonConvergence { err: f64, tol: f64 },
    #[error("unknown pair id `{0}`")]
    UnknownPair(String),
    #[error("missing parameter `{0}`")]
    MissingParam(&'static str),
    #[error("initial data length mismatch: expected {expected}, got {got}")]
    InitialDataLength { expected: usize, got: usize },
    #[error("pole multiplicity {0} unsupported (only simple and double poles)")]
    UnsupportedMultiplicity(usize),
    #[error("root finding failed: {0}")]
    RootFinding(String),
    #[error("series truncation bound not met within {0} terms")]
    NonConvergentSeries(usize),
    #[error("imaginary residue leakage {imag:.3e} exceeds cancellation tolerance")]
    ResidueImbalance { imag: f64 },
    #[error("invalid ODE problem: {0}")]
    InvalidOde(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Relative difference |a - b| / max(|a|, |b|); zero when both vanish.
pub fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
