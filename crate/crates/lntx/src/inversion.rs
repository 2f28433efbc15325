//! Inverse transform for rational images in s = yⁿ (residue sum over the
//! poles, f(x) = Σ Res[n·R(s)eˢ^{xⁿ}; s_k]) and for power series in 1/yⁿ
//! (term-by-term inversion y^{-n(m+p)} ↦ n·x^{n(m+p-1)}/Γ(m+p)).

use crate::specfun;
use crate::transform::Order;
use crate::{Error, Result};
use num_complex::Complex64;

/// Rational function of s = yⁿ, coefficients ascending in s.
#[derive(Clone, Debug)]
pub struct RationalInS {
    pub num: Vec<f64>,
    pub den: Vec<f64>,
}

#[derive(Clone, Copy, Debug)]
pub struct Pole {
    pub location: Complex64,
    pub multiplicity: usize,
}

fn trim(coeffs: &[f64]) -> &[f64] {
    let mut end = coeffs.len();
    while end > 1 && coeffs[end - 1] == 0.0 {
        end -= 1;
    }
    &coeffs[..end]
}

fn poly_eval(coeffs: &[f64], s: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
}

fn poly_deriv(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| i as f64 * c)
        .collect()
}

fn poly_deriv_c(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| i as f64 * c)
        .collect()
}

fn poly_eval_c(coeffs: &[Complex64], s: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
}

/// Synthetic division of `coeffs` (ascending) by (s - s0); returns the
/// ascending quotient, dropping the remainder.
fn deflate(coeffs: &[Complex64], s0: Complex64) -> Vec<Complex64> {
    let m = coeffs.len();
    let mut q = vec![Complex64::new(0.0, 0.0); m - 1];
    let mut carry = coeffs[m - 1];
    for i in (0..m - 1).rev() {
        q[i] = carry;
        carry = coeffs[i] + carry * s0;
    }
    q
}

/// All roots of the (ascending) real polynomial, with multiplicity detection:
/// roots closer than 1e-8 (relative to their magnitude) are merged as a
/// double pole; larger clusters are rejected.
pub fn find_poles(den_coeffs: &[f64]) -> Result<Vec<Pole>> {
    let den = trim(den_coeffs);
    let deg = den.len() - 1;
    if deg < 1 {
        return Err(Error::RootFinding(
            "denominator must have degree >= 1".into(),
        ));
    }
    let lead = den[deg];
    // companion matrix of the monic polynomial
    let mut comp = nalgebra::DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -den[i] / lead;
    }
    let mut roots: Vec<Complex64> = comp
        .complex_eigenvalues()
        .iter()
        .map(|e| Complex64::new(e.re, e.im))
        .collect();
    // Newton polish; near a repeated root (where den' also vanishes and the
    // eigenvalue accuracy degrades to ~sqrt(eps)) polish as a root of den'
    let dden = poly_deriv(den);
    let ddden = poly_deriv(&dden);
    let scale: f64 = den.iter().map(|c| c.abs()).fold(0.0, f64::max);
    for r in roots.iter_mut() {
        // convergence is linear (not quadratic) when falling through to the
        // repeated-root branch, hence the generous iteration cap
        for _ in 0..60 {
            let p = poly_eval(den, *r);
            let dp = poly_eval(&dden, *r);
            let dp_scale = scale * r.norm().max(1.0).powi(deg as i32 - 1);
            let step = if dp.norm() > 1e-7 * dp_scale {
                p / dp
            } else if !ddden.is_empty() {
                dp / poly_eval(&ddden, *r)
            } else {
                break;
            };
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            *r -= step;
            if step.norm() < 1e-14 * r.norm().max(1.0) {
                break;
            }
        }
        let resid = poly_eval(den, *r).norm();
        let local = scale * r.norm().max(1.0).powi(deg as i32);
        if resid > 1e-10 * local {
            return Err(Error::RootFinding(format!(
                "root residual {resid:.3e} too large at s = {r}"
            )));
        }
    }
    // cluster
    let mut poles: Vec<Pole> = Vec::new();
    let mut used = vec![false; roots.len()];
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        let mut cluster = vec![roots[i]];
        used[i] = true;
        let tol = 1e-8 * roots[i].norm().max(1.0);
        for j in i + 1..roots.len() {
            if !used[j] && (roots[j] - roots[i]).norm() < tol {
                cluster.push(roots[j]);
                used[j] = true;
            }
        }
        let mult = cluster.len();
        if mult > 2 {
            return Err(Error::UnsupportedMultiplicity(mult));
        }
        let center = cluster.iter().sum::<Complex64>() / mult as f64;
        // snap conjugate-symmetric and real roots exactly
        let center = if center.im.abs() < 1e-10 * center.norm().max(1.0) {
            Complex64::new(center.re, 0.0)
        } else {
            center
        };
        poles.push(Pole {
            location: center,
            multiplicity: mult,
        });
    }
    Ok(poles)
}

/// Residue inversion: f(x) = Σ_k Res[n·R(s)·e^{s xⁿ}; s_k].
pub fn invert_rational(r: &RationalInS, n: Order, x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::Domain("x must be nonnegative".into()));
    }
    let num = trim(&r.num);
    let den = trim(&r.den);
    if num.len() >= den.len() {
        return Err(Error::Domain(
            "rational image must be strictly proper (deg num < deg den)".into(),
        ));
    }
    let poles = find_poles(den)?;
    let t = x.powi(n.n() as i32);
    let nf = n.nf();
    let dden = poly_deriv(den);
    let den_c: Vec<Complex64> = den.iter().map(|&c| Complex64::new(c, 0.0)).collect();
    let dnum = poly_deriv(num);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut res_scale: f64 = 0.0;
    for p in &poles {
        let s0 = p.location;
        let e = (s0 * t).exp();
        let res = match p.multiplicity {
            1 => nf * poly_eval(num, s0) / poly_eval(&dden, s0) * e,
            2 => {
                // den = (s - s0)² q(s); Res = n·d/ds[num/q · e^{st}] at s0
                let q = deflate(&deflate(&den_c, s0), s0);
                let qv = poly_eval_c(&q, s0);
                let dqv = poly_eval_c(&poly_deriv_c(&q), s0);
                let nv = poly_eval(num, s0);
                let dnv = poly_eval(&dnum, s0);
                nf * ((dnv * qv - nv * dqv) / (qv * qv) + t * nv / qv) * e
            }
            m => return Err(Error::UnsupportedMultiplicity(m)),
        };
        res_scale = res_scale.max(res.norm());
        sum += res;
    }
    let leak = sum.im.abs();
    if leak > 1e-10 * sum.re.abs().max(res_scale).max(1e-300) {
        return Err(Error::ResidueImbalance { imag: leak });
    }
    Ok(sum.re)
}

/// Power series Σ_m c_m · y^{-n(m+p)} with positive offset p.
#[derive(Clone, Debug)]
pub struct PowerSeriesInvS {
    pub coeffs: Vec<f64>,
    pub offset: f64,
}

pub const SERIES_MAX_TERMS: usize = 200;

impl PowerSeriesInvS {
    /// Expansion of C·y^{-n p₀}·e^{-c/yⁿ} = C·Σ_m (-c)^m/m! · y^{-n(m+p₀)}.
    pub fn exp_image(scale: f64, c: f64, offset: f64) -> Self {
        let mut coeffs = Vec::with_capacity(SERIES_MAX_TERMS);
        let mut term = scale;
        for m in 0..SERIES_MAX_TERMS {
            coeffs.push(term);
            term *= -c / (m as f64 + 1.0);
        }
        PowerSeriesInvS { coeffs, offset }
    }
}

/// Term-by-term inverse: f(x) = Σ_m c_m · n · x^{n(m+p-1)} / Γ(m+p).
pub fn invert_series(s: &PowerSeriesInvS, n: Order, x: f64) -> Result<f64> {
    if s.offset <= 0.0 {
        return Err(Error::Domain("series offset p must be positive".into()));
    }
    let nf = n.nf();
    let mut sum = 0.0;
    let mut scale: f64 = 0.0;
    let mut tail_met = s.coeffs.len() < SERIES_MAX_TERMS;
    for (m, &c) in s.coeffs.iter().enumerate() {
        let p = m as f64 + s.offset;
        let expo = nf * (p - 1.0);
        let xp = if x == 0.0 {
            if expo == 0.0 {
                1.0
            } else if expo > 0.0 {
                0.0
            } else {
                return Err(Error::Domain(
                    "series term singular at x = 0 (negative exponent)".into(),
                ));
            }
        } else {
            x.powf(expo)
        };
        let term = c * nf * xp / specfun::gamma(p)?;
        sum += term;
        scale = scale.max(sum.abs()).max(term.abs());
        if m > 2 && term.abs() < 1e-12 * scale.max(1e-300) {
            tail_met = true;
            break;
        }
    }
    if !tail_met {
        return Err(Error::NonConvergentSeries(SERIES_MAX_TERMS));
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rel_err;
    use crate::transform::{forward_numeric, FunctionSpec, TransformQuery};
    use approx::assert_relative_eq;
    use std::sync::Arc;

    fn order(n: u32) -> Order {
        Order::new(n).unwrap()
    }

    #[test]
    fn poles_of_quadratics() {
        // s² + 1
        let poles = find_poles(&[1.0, 0.0, 1.0]).unwrap();
        assert_eq!(poles.len(), 2);
        for p in &poles {
            assert_eq!(p.multiplicity, 1);
            assert!(p.location.re.abs() < 1e-12);
            assert_relative_eq!(p.location.im.abs(), 1.0, max_relative = 1e-12);
        }
        // (s + 1)² = 1 + 2s + s²
        let poles = find_poles(&[1.0, 2.0, 1.0]).unwrap();
        assert_eq!(poles.len(), 1);
        assert_eq!(poles[0].multiplicity, 2);
        assert_relative_eq!(poles[0].location.re, -1.0, max_relative = 1e-7);
        // s² + 3s + 2
        let mut re: Vec<f64> = find_poles(&[2.0, 3.0, 1.0])
            .unwrap()
            .iter()
            .map(|p| p.location.re)
            .collect();
        re.sort_by(f64::total_cmp);
        assert_relative_eq!(re[0], -2.0, max_relative = 1e-12);
        assert_relative_eq!(re[1], -1.0, max_relative = 1e-12);
    }

    #[test]
    fn triple_pole_rejected() {
        // (s + 1)³ = 1 + 3s + 3s² + s³
        assert!(matches!(
            find_poles(&[1.0, 3.0, 3.0, 1.0]),
            Err(Error::UnsupportedMultiplicity(3))
        ));
    }

    #[test]
    fn improper_rational_rejected() {
        let r = RationalInS {
            num: vec![0.0, 0.0, 1.0],
            den: vec![1.0, 0.0, 1.0],
        };
        assert!(invert_rational(&r, order(2), 1.0).is_err());
    }

    #[test]
    fn sine_pair_values() {
        // 1/(s² + a^{2n}) inverts to (n/aⁿ) sin(aⁿ xⁿ)
        let r = RationalInS {
            num: vec![1.0],
            den: vec![1.0, 0.0, 1.0],
        };
        let n = order(2);
        let v = invert_rational(&r, n, (std::f64::consts::PI / 2.0).sqrt()).unwrap();
        assert_relative_eq!(v, 2.0, max_relative = 1e-12);
        assert_eq!(invert_rational(&r, n, 0.0).unwrap(), 0.0);
        // (n, a) = (4, 1.5)
        let a: f64 = 1.5;
        let n4 = order(4);
        let a2n = a.powi(8);
        let r = RationalInS {
            num: vec![1.0],
            den: vec![a2n, 0.0, 1.0],
        };
        for &x in &[0.4, 0.9, 1.3] {
            let v = invert_rational(&r, n4, x).unwrap();
            let expect = 4.0 / a.powi(4) * (a.powi(4) * x.powi(4)).sin();
            assert_relative_eq!(v, expect, max_relative = 1e-10);
        }
    }

    #[test]
    fn simple_exponential_pole() {
        // 1/(s + aⁿ) inverts to n·e^{-aⁿxⁿ}; a = 1, n = 2, x = 1
        let r = RationalInS {
            num: vec![1.0],
            den: vec![1.0, 1.0],
        };
        let v = invert_rational(&r, order(2), 1.0).unwrap();
        assert_relative_eq!(v, 2.0 * (-1.0f64).exp(), max_relative = 1e-12);
        // x = 0 gives n itself
        assert_relative_eq!(
            invert_rational(&r, order(2), 0.0).unwrap(),
            2.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn double_pole_matches_laplace_formula() {
        // 1/(s + 1)² inverts to n·t·e^{-t} with t = xⁿ
        let r = RationalInS {
            num: vec![1.0],
            den: vec![1.0, 2.0, 1.0],
        };
        let n = order(2);
        for &x in &[0.3, 0.8, 1.5] {
            let t = x * x;
            let v = invert_rational(&r, n, x).unwrap();
            assert_relative_eq!(v, 2.0 * t * (-t).exp(), max_relative = 1e-9);
        }
    }

    #[test]
    fn inversion_is_linear() {
        let r1 = RationalInS {
            num: vec![1.0],
            den: vec![1.0, 1.0],
        };
        let r2 = RationalInS {
            num: vec![1.0],
            den: vec![2.0, 1.0],
        };
        // 3/(s+1) + 2/(s+2) has combined numerator 3(s+2) + 2(s+1) = 8 + 5s
        let combo = RationalInS {
            num: vec![8.0, 5.0],
            den: vec![2.0, 3.0, 1.0],
        };
        let n = order(2);
        for &x in &[0.2, 1.0, 1.7] {
            let lhs = invert_rational(&combo, n, x).unwrap();
            let rhs = 3.0 * invert_rational(&r1, n, x).unwrap()
                + 2.0 * invert_rational(&r2, n, x).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-9);
        }
    }

    #[test]
    fn rational_round_trip_through_quadrature() {
        // forward transform of the inverse reproduces R(yⁿ)
        let r = RationalInS {
            num: vec![1.0, 0.5],
            den: vec![2.0, 3.0, 1.0],
        };
        let n = order(2);
        let rc = r.clone();
        let f = FunctionSpec::BlackBox {
            f: Arc::new(move |x| invert_rational(&rc, n, x).unwrap()),
            growth_alpha: 0.0,
        };
        for &y in &[1.0, 2.0] {
            let forward = forward_numeric(&TransformQuery { f: f.clone(), n, y }, 96).unwrap();
            let s = y * y;
            let expect = (1.0 + 0.5 * s) / (2.0 + 3.0 * s + s * s);
            assert!(rel_err(forward, expect) < 1e-8);
        }
    }

    #[test]
    fn series_single_term() {
        let s = PowerSeriesInvS {
            coeffs: vec![1.0],
            offset: 1.0,
        };
        assert_relative_eq!(
            invert_series(&s, order(2), 1.3).unwrap(),
            2.0,
            max_relative = 1e-14
        );
    }

    #[test]
    fn series_bessel_image() {
        // (1/yⁿ)e^{-aⁿ/yⁿ} inverts to n·J₀(2a^{n/2}x^{n/2}); a = 1, n = 2
        let s = PowerSeriesInvS::exp_image(1.0, 1.0, 1.0);
        let n = order(2);
        assert_relative_eq!(invert_series(&s, n, 0.0).unwrap(), 2.0, max_relative = 1e-12);
        let v = invert_series(&s, n, 1.2).unwrap();
        let expect = 2.0 * crate::specfun::bessel_j(0.0, 2.4).unwrap();
        assert_relative_eq!(v, expect, max_relative = 1e-10);
    }

    #[test]
    fn series_round_trip_exp_pair() {
        // image of e^{-aⁿxⁿ} is (1/n)·1/(yⁿ+aⁿ) = (1/n)Σ(-aⁿ)^m y^{-n(m+1)}
        let a: f64 = 0.7;
        let n = order(2);
        let an = a * a;
        let coeffs: Vec<f64> = (0..60)
            .scan(1.0 / n.nf(), |c, _| {
                let out = *c;
                *c *= -an;
                Some(out)
            })
            .collect();
        let s = PowerSeriesInvS {
            coeffs,
            offset: 1.0,
        };
        for &x in &[0.0, 0.5, 1.0, 1.5] {
            let v = invert_series(&s, n, x).unwrap();
            assert_relative_eq!(v, (-an * x * x).exp(), max_relative = 1e-9);
        }
    }

    #[test]
    fn series_linearity() {
        let s1 = PowerSeriesInvS::exp_image(1.0, 1.0, 1.0);
        let s2 = PowerSeriesInvS::exp_image(0.5, 2.0, 1.0);
        let combined = PowerSeriesInvS {
            coeffs: s1
                .coeffs
                .iter()
                .zip(&s2.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
            offset: 1.0,
        };
        let n = order(2);
        let x = 0.9;
        assert_relative_eq!(
            invert_series(&combined, n, x).unwrap(),
            invert_series(&s1, n, x).unwrap() + invert_series(&s2, n, x).unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn bad_offset_rejected() {
        let s = PowerSeriesInvS {
            coeffs: vec![1.0],
            offset: 0.0,
        };
        assert!(invert_series(&s, order(2), 1.0).is_err());
    }
}
