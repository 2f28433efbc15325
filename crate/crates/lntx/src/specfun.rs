//! Special-function kernel: Gamma, Bessel J of real order, erf / erfc, and
//! the scaled complement erfcx. Serves as the oracle layer for every closed
//! form in the catalog, so everything here is built from first principles
//! (series, recurrences, continued fractions, integral representations).

use crate::{quad, Error, Result};

pub const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Stirling series coefficients B_{2k} / (2k (2k-1)).
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// ln Γ(z) for z > 0: Stirling series after shifting small arguments up
/// with the recurrence Γ(z+1) = z Γ(z).
pub(crate) fn ln_gamma_pos(z: f64) -> f64 {
    debug_assert!(z > 0.0);
    let mut acc = 0.0;
    let mut z = z;
    while z < 12.0 {
        acc -= z.ln();
        z += 1.0;
    }
    let mut series = 0.0;
    let z2 = z * z;
    let mut zp = z;
    for c in STIRLING {
        series += c / zp;
        zp *= z2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + series + acc
}

pub(crate) fn gamma_pos(z: f64) -> f64 {
    ln_gamma_pos(z).exp()
}

/// Γ(z) for real z, excluding the poles at z = 0, -1, -2, ...
pub fn gamma(z: f64) -> Result<f64> {
    if z.is_nan() || z.is_infinite() {
        return Err(Error::Domain(format!("gamma argument must be finite, got {z}")));
    }
    if z <= 0.0 && z == z.floor() {
        return Err(Error::GammaPole(z));
    }
    if z > 0.0 {
        Ok(gamma_pos(z))
    } else {
        // reflection: Γ(z) Γ(1-z) = π / sin(πz)
        Ok(std::f64::consts::PI / ((std::f64::consts::PI * z).sin() * gamma_pos(1.0 - z)))
    }
}

/// Bessel J power series Σ (-1)^m / (m! Γ(m+v+1)) (x/2)^{2m+v}.
/// Truncated when the next term drops below 1e-16 of the largest partial sum.
fn bessel_j_series(v: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if v == 0.0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    let mut term = (v * half.ln() - ln_gamma_pos(v + 1.0)).exp();
    let q = half * half;
    let mut sum = term;
    let mut scale = term.abs();
    for m in 1..500 {
        let mf = m as f64;
        term *= -q / (mf * (mf + v));
        sum += term;
        scale = scale.max(sum.abs());
        if term.abs() < 1e-16 * scale {
            break;
        }
    }
    sum
}

/// Bessel J by its real integral representation,
/// J_v(x) = (1/π)∫₀^π cos(vθ - x sinθ)dθ - (sin vπ/π)∫₀^∞ e^{-vt - x sinh t}dt.
/// Used for arguments where the power series cancels catastrophically.
fn bessel_j_integral(v: f64, x: f64) -> f64 {
    let pi = std::f64::consts::PI;
    // the phase v·t - x·sin t runs through about (v+x)/2 cycles on [0, π];
    // 20-point panels at ~1.5 cycles each resolve it to machine precision
    let panels = (((x + v) / 3.0).ceil() as usize).max(8);
    let osc = quad::composite(&|t: f64| (v * t - x * t.sin()).cos(), 0.0, pi, panels);
    let mut val = osc / pi;
    let s = (v * pi).sin();
    if s != 0.0 {
        // ∫₀^∞ e^{-vt - x sinh t} dt with u = x sinh t becomes a smooth
        // Gauss-Laguerre integrand e^{-u}·e^{-v asinh(u/x)}/√(x²+u²)
        let tail = quad::laguerre_integrate(
            &|u: f64| (-v * (u / x).asinh()).exp() / (x * x + u * u).sqrt(),
            96,
        );
        val -= s / pi * tail;
    }
    val
}

/// Threshold between the defining power series and the integral representation.
const BESSEL_SERIES_MAX_X: f64 = 12.0;

/// Bessel function of the first kind J_v(x) for v ≥ 0, x ≥ 0.
pub fn bessel_j(order: f64, x: f64) -> Result<f64> {
    if order.is_nan() || x.is_nan() {
        return Err(Error::Domain("bessel_j arguments must not be NaN".into()));
    }
    if order < 0.0 {
        return Err(Error::Domain(format!("bessel_j order must be >= 0, got {order}")));
    }
    if x < 0.0 {
        return Err(Error::Domain(format!("bessel_j argument must be >= 0, got {x}")));
    }
    Ok(bessel_j_raw(order, x))
}

/// Infallible path for callers that already guarantee order ≥ 0, x ≥ 0.
pub(crate) fn bessel_j_raw(order: f64, x: f64) -> f64 {
    if x <= BESSEL_SERIES_MAX_X {
        bessel_j_series(order, x)
    } else {
        bessel_j_integral(order, x)
    }
}

fn erf_series(x: f64) -> f64 {
    // 2/√π Σ (-1)^m x^{2m+1} / (m! (2m+1))
    let x2 = x * x;
    let mut t = x;
    let mut sum = x;
    for m in 1..200 {
        let mf = m as f64;
        t *= -x2 / mf;
        let term = t / (2.0 * mf + 1.0);
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    2.0 / SQRT_PI * sum
}

/// erfcx(z) = e^{z²} erfc(z) for z ≥ 3 by the Laplace continued fraction
/// (modified Lentz).
fn erfcx_cf(z: f64) -> f64 {
    let tiny = 1e-300;
    let mut f = z.max(tiny);
    let mut c = f;
    let mut d = 0.0;
    for k in 1..200 {
        let a = k as f64 / 2.0;
        d = z + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = z + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / (SQRT_PI * f)
}

pub(crate) fn erf_raw(x: f64) -> f64 {
    if x.abs() <= 3.0 {
        erf_series(x)
    } else if x > 0.0 {
        1.0 - erfc_raw(x)
    } else {
        -1.0 + erfc_raw(-x)
    }
}

pub(crate) fn erfc_raw(x: f64) -> f64 {
    if x >= 27.0 {
        // erfc(27) < 1e-318; flushes to zero anyway
        0.0
    } else if x >= 3.0 {
        erfcx_cf(x) * (-x * x).exp()
    } else if x <= -3.0 {
        2.0 - erfc_raw(-x)
    } else {
        1.0 - erf_series(x)
    }
}

pub(crate) fn erfcx_raw(x: f64) -> f64 {
    if x >= 1e8 {
        // leading asymptote; relative error < 1e-16/x²
        1.0 / (x * SQRT_PI)
    } else if x >= 3.0 {
        erfcx_cf(x)
    } else {
        (x * x).exp() * erfc_raw(x)
    }
}

/// Error function.
pub fn erf(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain("erf argument must not be NaN".into()));
    }
    Ok(erf_raw(x))
}

/// Complementary error function.
pub fn erfc(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain("erfc argument must not be NaN".into()));
    }
    Ok(erfc_raw(x))
}

/// Scaled complementary error function e^{x²} erfc(x); stays finite where
/// the exp/erfc factors individually overflow and underflow.
pub fn erfcx(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain("erfcx argument must not be NaN".into()));
    }
    Ok(erfcx_raw(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    #[test]
    fn gamma_small_integers_and_half() {
        assert_relative_eq!(gamma(1.0).unwrap(), 1.0, max_relative = 1e-13);
        assert_relative_eq!(gamma(4.0).unwrap(), 6.0, max_relative = 1e-13);
        assert_relative_eq!(gamma(0.5).unwrap(), SQRT_PI, max_relative = 1e-13);
    }

    #[test]
    fn gamma_rejects_poles() {
        assert!(gamma(0.0).is_err());
        assert!(gamma(-3.0).is_err());
        assert!(gamma(f64::NAN).is_err());
    }

    #[test]
    fn gamma_duplication_formula() {
        // Γ(z) Γ(z+1/2) = 2^{1-2z} √π Γ(2z)
        let mut z = 0.1;
        while z < 15.0 {
            let lhs = gamma(z).unwrap() * gamma(z + 0.5).unwrap();
            let rhs = 2f64.powf(1.0 - 2.0 * z) * SQRT_PI * gamma(2.0 * z).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-10);
            z += 0.234;
        }
    }

    #[test]
    fn gamma_reflection_formula() {
        let mut z = 0.05f64;
        while z < 1.0 {
            let lhs = gamma(z).unwrap() * gamma(1.0 - z).unwrap();
            let rhs = std::f64::consts::PI / (std::f64::consts::PI * z).sin();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-10);
            z += 0.05;
        }
    }

    proptest! {
        #[test]
        fn gamma_recurrence(z in 0.1f64..30.0) {
            let lhs = gamma(z + 1.0).unwrap();
            let rhs = z * gamma(z).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-11 * lhs.abs());
        }

        #[test]
        fn erf_is_odd(x in -5.0f64..5.0) {
            let a = erf(x).unwrap();
            let b = erf(-x).unwrap();
            prop_assert!((a + b).abs() <= 1e-15);
        }

        #[test]
        fn erf_plus_erfc_is_one(x in -6.0f64..6.0) {
            let s = erf(x).unwrap() + erfc(x).unwrap();
            prop_assert!((s - 1.0).abs() <= 1e-14);
        }
    }

    #[test]
    fn bessel_trivial_points() {
        assert_relative_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_abs_diff_eq!(bessel_j(1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn bessel_rejects_bad_domain() {
        assert!(bessel_j(-1.0, 1.0).is_err());
        assert!(bessel_j(0.0, -1.0).is_err());
    }

    /// Locate the first zero of J₀ by bisection on the series evaluation and
    /// check the frozen value.
    #[test]
    fn bessel_first_zero_of_j0() {
        let f = |x: f64| bessel_j(0.0, x).unwrap();
        let (mut lo, mut hi) = (2.0, 3.0);
        assert!(f(lo) > 0.0 && f(hi) < 0.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let zero = 0.5 * (lo + hi);
        assert_abs_diff_eq!(zero, 2.404825557695773, epsilon = 1e-12);
        assert_abs_diff_eq!(bessel_j(0.0, 2.404825557695773).unwrap(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn bessel_recurrence() {
        // J_{v-1}(x) + J_{v+1}(x) = (2v/x) J_v(x), mixing both evaluation branches
        for v in 1..=6 {
            let vf = v as f64;
            let mut x = 0.5;
            while x <= 20.0 {
                let lhs = bessel_j(vf - 1.0, x).unwrap() + bessel_j(vf + 1.0, x).unwrap();
                let rhs = 2.0 * vf / x * bessel_j(vf, x).unwrap();
                assert!(
                    (lhs - rhs).abs() <= 1e-9 * lhs.abs().max(rhs.abs()).max(1e-3),
                    "recurrence failed at v={v}, x={x}: {lhs} vs {rhs}"
                );
                x += 0.7;
            }
        }
    }

    #[test]
    fn bessel_branches_agree_at_threshold() {
        for v in [0.0, 1.0, 2.5, 5.0] {
            let a = bessel_j_series(v, 12.0);
            let b = bessel_j_integral(v, 12.0);
            assert_abs_diff_eq!(a, b, epsilon = 1e-11);
        }
    }

    #[test]
    fn erf_matches_quadrature_of_gaussian() {
        // erf(x) = (2/√π) ∫₀^x e^{-u²} du
        let mut x = 0.25;
        while x <= 4.0 {
            let q = quad::adaptive(&|u: f64| (-u * u).exp(), 0.0, x, 1e-14).unwrap();
            assert_abs_diff_eq!(erf(x).unwrap(), 2.0 / SQRT_PI * q, epsilon = 1e-10);
            x += 0.25;
        }
    }

    #[test]
    fn erf_saturates() {
        assert_abs_diff_eq!(erf(10.0).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(erfc(0.0).unwrap(), 1.0);
        assert_abs_diff_eq!(erf(0.0).unwrap(), 0.0);
    }

    #[test]
    fn erfcx_consistency() {
        // erfcx agrees with exp(x²) erfc(x) where the product is representable
        for x in [0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 20.0] {
            let lhs = erfcx(x).unwrap();
            let rhs = (x * x).exp() * erfc(x).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-11);
        }
        // large-argument asymptote 1/(x√π)
        let x = 1e4;
        assert_relative_eq!(erfcx(x).unwrap(), 1.0 / (x * SQRT_PI), max_relative = 1e-7);
    }
}
