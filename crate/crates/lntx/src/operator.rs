//! The δ-derivative operator δ_x = x^{1-n} d/dx and its transform identities:
//! L_n{δ_x^k f} in terms of L_n{f} plus boundary data, and the moment rule
//! L_n{x^{kn} f} = ((-1)^k/nᵏ) δ_y^k L_n{f}.
//!
//! In the variable t = xⁿ the operator is simply δ_x = n d/dt, so catalog
//! families get exact analytic derivatives of their t-profile; black-box
//! inputs fall back to finite differences with Richardson extrapolation.

use crate::expr::Expr;
use crate::specfun;
use crate::table::{self, Params};
use crate::transform::{FunctionSpec, Order};
use crate::{Error, Result};

/// Boundary data for the derivative identity: f(0⁺) and δ_x^j f(0⁺) for
/// j = 1..k-1.
#[derive(Clone, Debug)]
pub struct InitialData {
    pub f0: f64,
    pub delta_f0: Vec<f64>,
}

fn falling(p: f64, j: u32) -> f64 {
    (0..j).map(|i| p - i as f64).product()
}

/// j-th derivative of the t-profile g(t) where f(x) = g(xⁿ).
/// Supports j ≤ 3 for every catalog family (exact formulas / term-by-term
/// series), which covers the identities up to the third operator power.
fn t_profile_deriv(f: &FunctionSpec, n: Order, t: f64, j: u32) -> Result<f64> {
    let nf = n.nf();
    let ni = n.n() as i32;
    let jf = j as f64;
    match f {
        FunctionSpec::Const => Ok(if j == 0 { 1.0 } else { 0.0 }),
        FunctionSpec::Power { k } => {
            let p = k / nf;
            let c = falling(p, j);
            if c == 0.0 {
                return Ok(0.0);
            }
            Ok(c * t.powf(p - jf))
        }
        FunctionSpec::CosXn { a } => {
            Ok(a.powi(j as i32) * (a * t + jf * std::f64::consts::FRAC_PI_2).cos())
        }
        FunctionSpec::SinXn { a } => {
            Ok(a.powi(j as i32) * (a * t + jf * std::f64::consts::FRAC_PI_2).sin())
        }
        FunctionSpec::ExpNegAXn { a } => {
            let an = a.powi(ni);
            Ok((-an).powi(j as i32) * (-an * t).exp())
        }
        FunctionSpec::BesselJ0Arg { a } => {
            // g(t) = Σ (-1)^m a^{nm} t^m / (m!)², differentiated term by term
            let an = a.powi(ni);
            let mut sum = 0.0;
            let mut scale: f64 = 0.0;
            for m in j..400 {
                let mf = m as f64;
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let term = sign
                    * (mf * an.ln() + (mf - jf) * t.max(1e-300).ln()
                        - specfun::ln_gamma_pos(mf - jf + 1.0)
                        - specfun::ln_gamma_pos(mf + 1.0))
                    .exp();
                let term = if t == 0.0 && m > j { 0.0 } else { term };
                sum += term;
                scale = scale.max(sum.abs()).max(term.abs());
                if term.abs() < 1e-16 * scale.max(1e-300) && m > j + 4 {
                    break;
                }
            }
            Ok(sum)
        }
        FunctionSpec::BesselJvArg { a, v } => {
            // g(t) = Σ (-1)^m a^{n(m + v/2)} t^{m+v} / (m! Γ(m+v+1))
            let an = a.powi(ni);
            let pref = a.powf(nf * v / 2.0);
            let mut sum = 0.0;
            let mut scale: f64 = 0.0;
            for m in 0..400 {
                let mf = m as f64;
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let p = mf + v;
                let coeff = sign * pref
                    * (mf * an.ln() - specfun::ln_gamma_pos(mf + 1.0)
                        - specfun::ln_gamma_pos(mf + v + 1.0))
                    .exp();
                let term = if t == 0.0 {
                    if (p - jf).abs() < 1e-12 {
                        coeff * falling(p, j)
                    } else if p - jf > 0.0 {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    coeff * falling(p, j) * t.powf(p - jf)
                };
                sum += term;
                scale = scale.max(sum.abs()).max(term.abs());
                if term.abs() < 1e-16 * scale.max(1e-300) && m > 4 {
                    break;
                }
            }
            Ok(sum)
        }
        FunctionSpec::ErfcInvArg { a } => {
            // g(t) = erfc(c t^{-1/2}), c = a^{n/2}/2
            let c = a.powf(nf / 2.0) / 2.0;
            if t == 0.0 {
                return Ok(0.0);
            }
            let e = (-c * c / t).exp();
            let s = c / specfun::SQRT_PI;
            Ok(match j {
                0 => specfun::erfc_raw(c / t.sqrt()),
                1 => s * t.powf(-1.5) * e,
                2 => s * e * (-1.5 * t.powf(-2.5) + c * c * t.powf(-3.5)),
                3 => s * e
                    * (3.75 * t.powf(-3.5) - 5.0 * c * c * t.powf(-4.5)
                        + c.powi(4) * t.powf(-5.5)),
                _ => {
                    return Err(Error::Domain(
                        "analytic t-derivatives supported up to order 3".into(),
                    ))
                }
            })
        }
        FunctionSpec::ErfArg { a } => {
            // g(t) = erf(b √t), b = a^{n/2}
            let b = a.powf(nf / 2.0);
            let e = (-b * b * t).exp();
            let s = b / specfun::SQRT_PI;
            Ok(match j {
                0 => specfun::erf_raw(b * t.sqrt()),
                1 => s * t.powf(-0.5) * e,
                2 => s * e * (-0.5 * t.powf(-1.5) - b * b * t.powf(-0.5)),
                3 => s * e
                    * (0.75 * t.powf(-2.5) + b * b * t.powf(-1.5) + b.powi(4) * t.powf(-0.5)),
                _ => {
                    return Err(Error::Domain(
                        "analytic t-derivatives supported up to order 3".into(),
                    ))
                }
            })
        }
        FunctionSpec::GaussXn2 { a } => {
            let e = (-a * t * t).exp();
            Ok(match j {
                0 => e,
                1 => -2.0 * a * t * e,
                2 => (4.0 * a * a * t * t - 2.0 * a) * e,
                3 => (12.0 * a * a * t - 8.0 * a.powi(3) * t.powi(3)) * e,
                _ => {
                    return Err(Error::Domain(
                        "analytic t-derivatives supported up to order 3".into(),
                    ))
                }
            })
        }
        FunctionSpec::BlackBox { .. } => unreachable!("black-box handled by caller"),
    }
}

/// 5-point central first derivative with two Richardson levels.
fn ddx(g: &dyn Fn(f64) -> f64, x: f64, h0: f64) -> f64 {
    let five = |h: f64| {
        (g(x - 2.0 * h) - 8.0 * g(x - h) + 8.0 * g(x + h) - g(x + 2.0 * h)) / (12.0 * h)
    };
    let d0 = five(h0);
    let d1 = five(h0 / 2.0);
    let d2 = five(h0 / 4.0);
    let r1 = (16.0 * d1 - d0) / 15.0;
    let r2 = (16.0 * d2 - d1) / 15.0;
    (64.0 * r2 - r1) / 63.0
}

/// k-fold δ-derivative of an arbitrary evaluator by nested finite differences.
pub fn delta_x_numeric(g: &dyn Fn(f64) -> f64, n: Order, x: f64, k: u32) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::Domain("delta operator is singular at x = 0".into()));
    }
    if k == 0 {
        return Ok(g(x));
    }
    let nf = n.nf();
    let inner = |u: f64| delta_x_numeric(g, n, u, k - 1).unwrap_or(f64::NAN);
    let h = (1e-5f64).max(1e-5 * x).min(x / 5.0);
    let d = ddx(&inner, x, h);
    if !d.is_finite() {
        return Err(Error::Domain(
            "finite-difference delta derivative diverged".into(),
        ));
    }
    Ok(x.powf(1.0 - nf) * d)
}

/// k-fold δ-derivative δ_x^k f at x > 0.
pub fn delta_x(f: &FunctionSpec, n: Order, x: f64, k: u32) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::Domain("delta operator is singular at x = 0".into()));
    }
    if k == 0 {
        return Ok(f.eval(n, x));
    }
    match f {
        FunctionSpec::BlackBox { f: g, .. } => {
            let g = g.clone();
            delta_x_numeric(&move |u| g(u), n, x, k)
        }
        _ => {
            let t = x.powi(n.n() as i32);
            Ok(n.nf().powi(k as i32) * t_profile_deriv(f, n, t, k)?)
        }
    }
}

/// Analytic boundary data δ_x^j f(0⁺), j = 0..k-1, for catalog families.
pub fn initial_data(f: &FunctionSpec, n: Order, k: u32) -> Result<InitialData> {
    if k == 0 {
        return Err(Error::Domain("initial data requires k >= 1".into()));
    }
    if matches!(f, FunctionSpec::BlackBox { .. }) {
        return Err(Error::Domain(
            "black-box inputs must supply InitialData explicitly".into(),
        ));
    }
    let nf = n.nf();
    let limit_j = |j: u32| -> Result<f64> {
        // lim_{t→0⁺} g^{(j)}(t), finite for the families used with Theorem 2.1
        let v = t_profile_deriv(f, n, 0.0, j)?;
        if !v.is_finite() {
            return Err(Error::Domain(format!(
                "delta^{j} f(0+) is not finite for {f:?}"
            )));
        }
        Ok(nf.powi(j as i32) * v)
    };
    let f0 = limit_j(0)?;
    let delta_f0 = (1..k).map(limit_j).collect::<Result<Vec<_>>>()?;
    Ok(InitialData { f0, delta_f0 })
}

/// Right-hand side of the derivative identity:
/// (n yⁿ)ᵏ F - Σ_{j=0}^{k-1} (n yⁿ)^{k-1-j} δ_x^j f(0⁺).
pub fn thm21_rhs(f_at_y: f64, n: Order, y: f64, k: u32, init: &InitialData) -> Result<f64> {
    if init.delta_f0.len() != (k as usize).saturating_sub(1) {
        return Err(Error::InitialDataLength {
            expected: (k as usize).saturating_sub(1),
            got: init.delta_f0.len(),
        });
    }
    let nyn = n.nf() * y.powi(n.n() as i32);
    let mut rhs = nyn.powi(k as i32) * f_at_y;
    for j in 0..k {
        let boundary = if j == 0 {
            init.f0
        } else {
            init.delta_f0[(j - 1) as usize]
        };
        rhs -= nyn.powi((k - 1 - j) as i32) * boundary;
    }
    Ok(rhs)
}

/// Moment rule: L_n{x^{kn} f; y} = ((-1)^k / nᵏ) δ_y^k L_n{f; y}, with the
/// δ_y derivative taken symbolically on the catalog closed form.
pub fn thm22_moment(pair_id: &str, n: Order, params: &Params, k: u32, y: f64) -> Result<f64> {
    table::check_validity(pair_id, n, params, y)?;
    let mut expr: Expr = table::closed_form(pair_id, n, params)?;
    for _ in 0..k {
        expr = expr.delta_y(n.nf());
    }
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign / n.nf().powi(k as i32) * expr.eval(y))
}
