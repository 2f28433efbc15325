//! Cross-validation suites: every closed form in the crate checked against an
//! independent numerical route. Shared by `lntx verify` and the acceptance
//! tests.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::inversion::{invert_rational, invert_series, PowerSeriesInvS, RationalInS};
use crate::ode::{self, OdeProblem};
use crate::operator::{self, InitialData};
use crate::rel_err;
use crate::specfun;
use crate::table::{self, Params};
use crate::transform::{forward_numeric, forward_via_laplace, FunctionSpec, Order, TransformQuery};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub worst: f64,
    pub tol: f64,
    pub pass: bool,
}

impl CheckResult {
    fn new(name: impl Into<String>, worst: f64, tol: f64) -> Self {
        let pass = worst.is_finite() && worst <= tol;
        CheckResult {
            name: name.into(),
            worst,
            tol,
            pass,
        }
    }
}

pub const SUITES: [&str; 6] = [
    "pairs",
    "shift",
    "operators",
    "inversion",
    "odes",
    "laplace",
];

pub const GRID_N: [u32; 4] = [1, 2, 4, 8];
pub const GRID_Y: [f64; 4] = [0.6, 1.0, 2.0, 4.0];

/// In-region parameters for a pair at a given grid point, scaled with (n, y)
/// so the transform value stays at a magnitude where relative tolerances are
/// meaningful in f64 across the whole grid.
pub fn grid_params(id: &str, n: Order, y: f64) -> Params {
    let yn = y.powi(n.n() as i32);
    match id {
        "const" => Params::default(),
        "power" => Params {
            k: Some(2.5),
            ..Default::default()
        },
        "cos_xn" | "sin_xn" => Params::with_a(0.5 * yn),
        "exp_neg_axn" => Params::with_a(0.6 * y),
        "bessel_j0" => Params::with_a(0.8 * y),
        "bessel_jv" => Params {
            a: Some(0.8 * y),
            v: Some(1.5),
            ..Default::default()
        },
        "erfc_inv" => Params::with_a(1.0 / y),
        "erf" => Params::with_a(y),
        "gauss_xn2" => Params::with_a(yn * yn),
        _ => Params::with_a(1.0),
    }
}

fn pair_tol(id: &str) -> f64 {
    if id == "erfc_inv" {
        1e-6
    } else {
        1e-8
    }
}

/// Pair catalog: closed form vs quadrature vs the Laplace-relation route,
/// pairwise, over the full (n, y) grid.
pub fn suite_pairs(quad_order: usize) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for id in table::PAIR_IDS {
        let mut worst: f64 = 0.0;
        for &nu in &GRID_N {
            let n = Order::new(nu)?;
            for &y in &GRID_Y {
                let params = grid_params(id, n, y);
                let closed = table::eval_pair(id, n, &params, y)?;
                let q = TransformQuery {
                    f: table::function_spec(id, &params)?,
                    n,
                    y,
                };
                let numeric = forward_numeric(&q, quad_order)?;
                let laplace = forward_via_laplace(&q, quad_order)?;
                worst = worst
                    .max(rel_err(closed, numeric))
                    .max(rel_err(closed, laplace))
                    .max(rel_err(numeric, laplace));
            }
        }
        out.push(CheckResult::new(format!("pairs:{id}"), worst, pair_tol(id)));
    }
    Ok(out)
}

/// Shift rule: quadrature of e^{-a xⁿ} f(x) vs the closed form at the
/// shifted abscissa (yⁿ + a)^{1/n}.
pub fn suite_shift(quad_order: usize) -> Result<Vec<CheckResult>> {
    let cases: [(&str, Params); 3] = [
        ("const", Params::default()),
        ("cos_xn", Params::with_a(1.0)),
        ("bessel_j0", Params::with_a(1.0)),
    ];
    let mut out = Vec::new();
    for (id, params) in cases {
        let mut worst: f64 = 0.0;
        for &nu in &[1u32, 2, 4] {
            let n = Order::new(nu)?;
            for &a in &[0.5, 1.0, 3.0] {
                for &y in &[1.0f64, 1.5] {
                    let shifted = (y.powi(n.n() as i32) + a).powf(1.0 / n.nf());
                    let closed = table::eval_pair(id, n, &params, shifted)?;
                    let base = table::function_spec(id, &params)?;
                    let damped = FunctionSpec::BlackBox {
                        f: Arc::new(move |x: f64| {
                            (-a * x.powi(n.n() as i32)).exp() * base.eval(n, x)
                        }),
                        growth_alpha: 0.0,
                    };
                    let numeric = forward_numeric(
                        &TransformQuery { f: damped, n, y },
                        quad_order,
                    )?;
                    worst = worst.max(rel_err(closed, numeric));
                }
            }
        }
        out.push(CheckResult::new(format!("shift:{id}"), worst, 1e-8));
    }
    Ok(out)
}

/// Theorem 2.1 (derivative identity) and Theorem 2.2 (moment rule).
pub fn suite_operators(quad_order: usize) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();

    // Theorem 2.1: quadrature of δ_x^k f vs the boundary-data identity
    let mut worst: f64 = 0.0;
    for &nu in &[1u32, 2] {
        let n = Order::new(nu)?;
        let cases = [
            FunctionSpec::Const,
            FunctionSpec::Power { k: n.nf() },
            FunctionSpec::ExpNegAXn { a: 0.5 },
            FunctionSpec::CosXn { a: 1.0 },
        ];
        for f in cases {
            for &y in &[1.0, 1.5] {
                let big_f = forward_numeric(
                    &TransformQuery {
                        f: f.clone(),
                        n,
                        y,
                    },
                    quad_order,
                )?;
                for k in 1..=3u32 {
                    let init: InitialData = operator::initial_data(&f, n, k)?;
                    let rhs = operator::thm21_rhs(big_f, n, y, k, &init)?;
                    let fc = f.clone();
                    let lhs = forward_numeric(
                        &TransformQuery {
                            f: FunctionSpec::BlackBox {
                                f: Arc::new(move |x| delta_or_zero(&fc, n, x, k)),
                                growth_alpha: 0.0,
                            },
                            n,
                            y,
                        },
                        quad_order,
                    )?;
                    let scale = lhs.abs().max(rhs.abs()).max(1.0);
                    worst = worst.max((lhs - rhs).abs() / scale);
                }
            }
        }
    }
    out.push(CheckResult::new("operators:thm21", worst, 1e-6));

    // Theorem 2.2: symbolic δ_y moment vs quadrature of x^{kn} f
    let mut worst: f64 = 0.0;
    for id in table::PAIR_IDS {
        for &nu in &[1u32, 2] {
            let n = Order::new(nu)?;
            let y = 1.2;
            let params = table::sample_params(id);
            let f = table::function_spec(id, &params)?;
            for k in 1..=2u32 {
                let moment = operator::thm22_moment(id, n, &params, k, y)?;
                let fc = f.clone();
                let kn = (k * n.n()) as i32;
                let numeric = forward_numeric(
                    &TransformQuery {
                        f: FunctionSpec::BlackBox {
                            f: Arc::new(move |x| x.powi(kn) * fc.eval(n, x)),
                            growth_alpha: 0.0,
                        },
                        n,
                        y,
                    },
                    quad_order,
                )?;
                worst = worst.max(rel_err(moment, numeric));
            }
        }
    }
    out.push(CheckResult::new("operators:thm22", worst, 1e-7));
    Ok(out)
}

fn delta_or_zero(f: &FunctionSpec, n: Order, x: f64, k: u32) -> f64 {
    if x == 0.0 {
        // integrand carries the x^{n-1} weight; the quadrature never lands
        // exactly on 0 but guard anyway
        return 0.0;
    }
    operator::delta_x(f, n, x, k).unwrap_or(f64::NAN)
}

/// Residue inversion of the sine image, series inversion of the Bessel image,
/// and the random rational round trip.
pub fn suite_inversion(quad_order: usize) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let xs: Vec<f64> = (0..=12).map(|i| i as f64 * 0.25).collect();

    // Example 2.4: 1/(s² + a^{2n}) vs (n/aⁿ) sin(aⁿ xⁿ)
    let mut worst: f64 = 0.0;
    for &(nu, a) in &[(2u32, 1.0f64), (4u32, 1.5f64)] {
        let n = Order::new(nu)?;
        let an = a.powi(nu as i32);
        let r = RationalInS {
            num: vec![1.0],
            den: vec![an * an, 0.0, 1.0],
        };
        for &x in &xs {
            let v = invert_rational(&r, n, x)?;
            let expect = n.nf() / an * (an * x.powi(nu as i32)).sin();
            let scale = (n.nf() / an).max(v.abs());
            worst = worst.max((v - expect).abs() / scale);
        }
    }
    out.push(CheckResult::new("inversion:sine", worst, 1e-10));

    // Example 2.5: series of (1/yⁿ)e^{-aⁿ/yⁿ} vs n·J₀(2a^{n/2}x^{n/2})
    let mut worst: f64 = 0.0;
    for &(nu, a) in &[(2u32, 1.0f64), (2u32, 1.3f64), (1u32, 1.0f64)] {
        let n = Order::new(nu)?;
        let an = a.powi(nu as i32);
        let series = PowerSeriesInvS::exp_image(1.0, an, 1.0);
        for &x in &xs {
            let v = invert_series(&series, n, x)?;
            let expect = n.nf()
                * specfun::bessel_j(0.0, 2.0 * a.powf(n.nf() / 2.0) * x.powf(n.nf() / 2.0))?;
            worst = worst.max((v - expect).abs() / n.nf());
        }
    }
    out.push(CheckResult::new("inversion:bessel_series", worst, 1e-9));

    // Round trip: 20 random stable rationals, forward of the inverse vs R(yⁿ)
    let mut rng = ChaCha8Rng::seed_from_u64(0x4c6e);
    let n = Order::new(2)?;
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let r = random_stable_rational(&mut rng);
        let rc = r.clone();
        let f = FunctionSpec::BlackBox {
            f: Arc::new(move |x| invert_rational(&rc, n, x).unwrap_or(f64::NAN)),
            growth_alpha: 0.0,
        };
        for &y in &[1.0, 2.0] {
            let forward = forward_numeric(&TransformQuery { f: f.clone(), n, y }, quad_order)?;
            let s = y * y;
            let expect = poly(&r.num, s) / poly(&r.den, s);
            worst = worst.max(rel_err(forward, expect));
        }
    }
    out.push(CheckResult::new("inversion:round_trip", worst, 1e-6));
    Ok(out)
}

fn poly(coeffs: &[f64], s: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * s + c)
}

/// Random strictly proper rational with all poles in Re s < 0 and a positive
/// numerator, so R(s) is O(1) on s > 0.
fn random_stable_rational(rng: &mut ChaCha8Rng) -> RationalInS {
    // denominator from 1-2 real roots and 0-1 conjugate pairs, deg <= 4
    let mut den = vec![1.0];
    let n_real = rng.gen_range(0..=2usize);
    let n_pairs = rng.gen_range(0..=1usize);
    let deg_min_one = n_real + 2 * n_pairs == 0;
    let n_real = if deg_min_one { 1 } else { n_real };
    for _ in 0..n_real {
        let p = -rng.gen_range(0.3..2.0);
        den = poly_mul(&den, &[-p, 1.0]);
    }
    for _ in 0..n_pairs {
        let re = -rng.gen_range(0.3..2.0);
        let im = rng.gen_range(0.2..2.0);
        den = poly_mul(&den, &[re * re + im * im, -2.0 * re, 1.0]);
    }
    let deg = den.len() - 1;
    let num: Vec<f64> = (0..deg).map(|_| rng.gen_range(0.5..1.5)).collect();
    RationalInS { num, den }
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// ODE families: normalized residual on the x grid plus transform-image
/// consistency.
pub fn suite_odes(quad_order: usize) -> Result<Vec<CheckResult>> {
    let problems = [
        OdeProblem::new(1, Order::new(2)?, Some(3))?,
        OdeProblem::new(1, Order::new(2)?, Some(5))?,
        OdeProblem::new(1, Order::new(4)?, Some(5))?,
        OdeProblem::new(2, Order::new(1)?, None)?,
        OdeProblem::new(2, Order::new(2)?, None)?,
        OdeProblem::new(2, Order::new(4)?, None)?,
    ];
    let xs = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0];
    let mut worst_res: f64 = 0.0;
    let mut worst_img: f64 = 0.0;
    for p in &problems {
        let sol = ode::solve(p)?;
        for &x in &xs {
            worst_res = worst_res.max(ode::residual(p, &sol, x)?);
        }
        let img = ode::solve_transform_ode(p);
        let n = p.n;
        let f = FunctionSpec::BlackBox {
            f: Arc::new(move |x| ode::eval_solution(&sol, n, x).unwrap_or(f64::NAN)),
            growth_alpha: 0.0,
        };
        for &y in &[1.5, 2.0, 3.0] {
            let forward = forward_numeric(&TransformQuery { f: f.clone(), n, y }, quad_order)?;
            worst_img = worst_img.max(rel_err(forward, img.eval(n, y)));
        }
    }
    Ok(vec![
        CheckResult::new("odes:residual", worst_res, 1e-8),
        CheckResult::new("odes:image", worst_img, 1e-7),
    ])
}

/// Laplace anchor: at n = 1 the library reproduces five classical pairs.
pub fn suite_laplace(quad_order: usize) -> Result<Vec<CheckResult>> {
    let n = Order::new(1)?;
    let y = 1.3;
    let cases: [(&str, FunctionSpec, f64); 5] = [
        ("1 -> 1/y", FunctionSpec::Const, 1.0 / y),
        ("x -> 1/y^2", FunctionSpec::Power { k: 1.0 }, 1.0 / (y * y)),
        (
            "exp(-ax) -> 1/(y+a)",
            FunctionSpec::ExpNegAXn { a: 0.5 },
            1.0 / (y + 0.5),
        ),
        (
            "sin(2x) -> 2/(y^2+4)",
            FunctionSpec::SinXn { a: 2.0 },
            2.0 / (y * y + 4.0),
        ),
        (
            "cos(x) -> y/(y^2+1)",
            FunctionSpec::CosXn { a: 1.0 },
            y / (y * y + 1.0),
        ),
    ];
    let mut worst: f64 = 0.0;
    for (_, f, expect) in &cases {
        let v = forward_numeric(
            &TransformQuery {
                f: f.clone(),
                n,
                y,
            },
            quad_order,
        )?;
        worst = worst.max(rel_err(v, *expect));
    }
    Ok(vec![CheckResult::new("laplace:classical", worst, 1e-8)])
}

/// Run one named suite, or every suite for "all".
pub fn run_suite(name: &str, quad_order: usize) -> Result<Vec<CheckResult>> {
    match name {
        "pairs" => suite_pairs(quad_order),
        "shift" => suite_shift(quad_order),
        "operators" => suite_operators(quad_order),
        "inversion" => suite_inversion(quad_order),
        "odes" => suite_odes(quad_order),
        "laplace" => suite_laplace(quad_order),
        "all" => {
            let mut out = Vec::new();
            for s in SUITES {
                out.extend(run_suite(s, quad_order)?);
            }
            Ok(out)
        }
        other => Err(Error::Domain(format!(
            "unknown suite `{other}` (expected one of {:?} or `all`)",
            SUITES
        ))),
    }
}
