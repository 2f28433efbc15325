//! Bessel-type ODE families solved through the transform domain:
//!
//! ```text
//! family 1:  x z'' - (2v + n - 3) z' + x^{n-1} z = 0 ,  v = 2^m + 1 > n
//! family 2:  x z'' - (n² - 1) z'   + x^{n-1} z = 0
//! ```
//!
//! Transforming (with z(0⁺) = 0) gives a first-order ODE for the image
//! z̄(y), solved in closed exponential form; inverting its 1/yⁿ expansion
//! term by term yields the Bessel-form solution x^{nα/2} J_α((2/n)x^{n/2}).

use crate::inversion::PowerSeriesInvS;
use crate::specfun;
use crate::transform::Order;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct OdeProblem {
    pub family: u8,
    pub n: Order,
    /// family 1 parameter; ignored for family 2
    pub v: u32,
}

impl OdeProblem {
    pub fn new(family: u8, n: Order, v: Option<u32>) -> Result<Self> {
        match family {
            1 => {
                let v = v.ok_or(Error::MissingParam("v"))?;
                if v <= n.n() || v < 2 || !(v - 1).is_power_of_two() {
                    return Err(Error::InvalidOde(
                        "v must equal 2^m+1 and exceed n".into(),
                    ));
                }
                Ok(OdeProblem { family, n, v })
            }
            2 => Ok(OdeProblem { family, n, v: 0 }),
            f => Err(Error::InvalidOde(format!("family must be 1 or 2, got {f}"))),
        }
    }

    /// Coefficient c₁ in x z'' − c₁ z' + x^{n−1} z = 0.
    pub fn c1(&self) -> f64 {
        let nf = self.n.nf();
        match self.family {
            1 => 2.0 * self.v as f64 + nf - 3.0,
            _ => nf * nf - 1.0,
        }
    }

    /// Bessel order α of the solution.
    pub fn alpha(&self) -> f64 {
        let nf = self.n.nf();
        match self.family {
            1 => (2.0 * self.v as f64 + nf - 2.0) / nf,
            _ => nf,
        }
    }
}

/// Transform-domain ODE z̄'(y) + A(y) z̄(y) = 0 with
/// A(y) = coef_inv_y / y + coef_inv_yn1 / y^{n+1}.
#[derive(Clone, Copy, Debug)]
pub struct FirstOrderOde {
    pub coef_inv_y: f64,
    pub coef_inv_yn1: f64,
}

impl FirstOrderOde {
    pub fn a(&self, n: Order, y: f64) -> f64 {
        self.coef_inv_y / y + self.coef_inv_yn1 / y.powi(n.n() as i32 + 1)
    }
}

/// Closed-form image z̄(y) = scale · y^{power_exponent} · exp(exp_coefficient / yⁿ).
#[derive(Clone, Copy, Debug)]
pub struct TransformImage {
    pub scale: f64,
    pub power_exponent: f64,
    pub exp_coefficient: f64,
}

impl TransformImage {
    pub fn eval(&self, n: Order, y: f64) -> f64 {
        self.scale * y.powf(self.power_exponent) * (self.exp_coefficient / y.powf(n.nf())).exp()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct OdeSolution {
    pub prefactor_exponent: f64,
    pub bessel_order: f64,
    pub arg_scale: f64,
    pub normalization: f64,
}

pub fn reduce_to_transform_ode(p: &OdeProblem) -> FirstOrderOde {
    let nf = p.n.nf();
    let coef_inv_y = match p.family {
        1 => 2.0 * (nf + p.v as f64 - 1.0),
        _ => nf * (nf + 1.0),
    };
    FirstOrderOde {
        coef_inv_y,
        coef_inv_yn1: -1.0 / nf,
    }
}

pub fn solve_transform_ode(p: &OdeProblem) -> TransformImage {
    let nf = p.n.nf();
    let alpha = p.alpha();
    TransformImage {
        scale: nf.powf(-(alpha + 1.0)),
        power_exponent: -nf * (alpha + 1.0),
        exp_coefficient: -1.0 / (nf * nf),
    }
}

/// Series of the image in 1/yⁿ powers, ready for termwise inversion.
pub fn image_series(p: &OdeProblem) -> PowerSeriesInvS {
    let img = solve_transform_ode(p);
    PowerSeriesInvS::exp_image(img.scale, -img.exp_coefficient, p.alpha() + 1.0)
}

pub fn solve(p: &OdeProblem) -> Result<OdeSolution> {
    let nf = p.n.nf();
    let alpha = p.alpha();
    if (alpha - alpha.round()).abs() > 1e-12 {
        return Err(Error::InvalidOde(format!(
            "bessel order alpha = {alpha} is not an integer"
        )));
    }
    let c = nf.powf(-(alpha + 1.0));
    // the inverted image series must reproduce the J_alpha series term by term
    let series = image_series(p);
    for m in 0..12 {
        let mf = m as f64;
        // inverted term coefficient: c·(−1/n²)^m/m! · n / Γ(m+α+1)
        let inv = series.coeffs[m] * nf / specfun::gamma(mf + alpha + 1.0)?;
        // J_alpha series coefficient of x^{n(m+α)} after the x^{nα/2} prefactor
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let bessel = sign
            * nf.powf(-(2.0 * mf + alpha))
            / (specfun::gamma(mf + 1.0)? * specfun::gamma(mf + alpha + 1.0)?);
        let ratio = inv / bessel;
        if (ratio - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidOde(format!(
                "image series deviates from the Bessel series at term {m} (ratio {ratio})"
            )));
        }
    }
    Ok(OdeSolution {
        prefactor_exponent: nf * alpha / 2.0,
        bessel_order: alpha,
        arg_scale: 2.0 / nf,
        normalization: c,
    })
}

/// z(x) = x^{nα/2} J_α((2/n) x^{n/2}); z(0⁺) = 0.
pub fn eval_solution(sol: &OdeSolution, n: Order, x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::Domain("x must be nonnegative".into()));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let w = sol.arg_scale * x.powf(n.nf() / 2.0);
    Ok(x.powf(sol.prefactor_exponent) * specfun::bessel_j(sol.bessel_order, w)?)
}

/// Normalized residual |x z'' − c₁ z' + x^{n−1} z| / max(term magnitudes),
/// with z', z'' from exact Bessel recurrences.
pub fn residual(p: &OdeProblem, sol: &OdeSolution, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::Domain("residual requires x > 0".into()));
    }
    let nf = p.n.nf();
    let q = sol.prefactor_exponent;
    let alpha = sol.bessel_order;
    let w = sol.arg_scale * x.powf(nf / 2.0);
    let j = specfun::bessel_j(alpha, w)?;
    let jm = specfun::bessel_j(alpha - 1.0, w)?;
    let jp = specfun::bessel_j(alpha + 1.0, w)?;
    let dj = 0.5 * (jm - jp);
    let ddj = -dj / w + (alpha * alpha / (w * w) - 1.0) * j;
    // z = x^q J(w), w = (2/n) x^{n/2}, dw/dx = x^{n/2 - 1}
    let z = x.powf(q) * j;
    let dz = q * x.powf(q - 1.0) * j + x.powf(q + nf / 2.0 - 1.0) * dj;
    let ddz = q * (q - 1.0) * x.powf(q - 2.0) * j
        + (2.0 * q + nf / 2.0 - 1.0) * x.powf(q + nf / 2.0 - 2.0) * dj
        + x.powf(q + nf - 2.0) * ddj;
    let t1 = x * ddz;
    let t2 = p.c1() * dz;
    let t3 = x.powf(nf - 1.0) * z;
    let scale = t1.abs().max(t2.abs()).max(t3.abs()).max(1e-300);
    Ok((t1 - t2 + t3).abs() / scale)
}
