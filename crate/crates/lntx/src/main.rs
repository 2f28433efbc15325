use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use lntx::inversion::{invert_rational, invert_series, PowerSeriesInvS, RationalInS};
use lntx::ode::{self, OdeProblem};
use lntx::table::{self, Params};
use lntx::transform::{
    forward_numeric, forward_via_laplace, FunctionSpec, Order, TransformQuery,
};
use lntx::{rel_err, verify};

#[derive(Parser)]
#[command(name = "lntx", version, about = "Generalized L_n integral transform toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputOpts {
    /// Emit a machine-readable JSON record
    #[arg(long)]
    json: bool,
    /// Emit CSV rows
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct NumericOpts {
    /// Gauss-Laguerre base order
    #[arg(long, env = "LNTX_QUAD_ORDER", default_value_t = 96)]
    quad_order: usize,
    /// Agreement tolerance reported as tolerances_met
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a catalog pair: closed form vs quadrature vs the Laplace route
    Transform {
        /// Catalog pair id (see `lntx catalog`)
        #[arg(long)]
        pair: String,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long)]
        v: Option<f64>,
        #[arg(long)]
        k: Option<f64>,
        /// Abscissa grid: a value or start:stop:step
        #[arg(long, default_value = "1")]
        y: String,
        #[command(flatten)]
        num: NumericOpts,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Invert a rational image in s = y^n or a named series image
    Invert {
        /// Rational image as "num=c0,c1,...;den=d0,d1,..." (ascending in s)
        #[arg(long)]
        rational: Option<String>,
        /// Named series image (available: bessel_j0_image, requires --a)
        #[arg(long)]
        series: Option<String>,
        #[arg(long)]
        a: Option<f64>,
        #[arg(long, default_value_t = 2)]
        n: u32,
        /// Sample grid: a value or start:stop:step
        #[arg(long, default_value = "0:3:0.5")]
        x: String,
        #[command(flatten)]
        num: NumericOpts,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Solve one of the two Bessel-type ODE families through the transform
    SolveOde {
        #[arg(long)]
        family: u8,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long)]
        v: Option<u32>,
        /// Sample grid for z(x)
        #[arg(long, default_value = "0:5:0.5")]
        x: String,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Run a cross-validation suite; exits nonzero if any check fails
    Verify {
        /// One of pairs, shift, operators, inversion, odes, laplace, all
        #[arg(long, default_value = "all")]
        suite: String,
        #[command(flatten)]
        num: NumericOpts,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Print the transform-pair catalog
    Catalog {
        #[command(flatten)]
        out: OutputOpts,
    },
}

fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let p = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number `{t}`: {e}"));
    match parts.as_slice() {
        [one] => Ok(vec![p(one)?]),
        [start, stop, step] => {
            let (start, stop, step) = (p(start)?, p(stop)?, p(step)?);
            if step <= 0.0 {
                return Err("grid step must be positive".into());
            }
            let mut out = Vec::new();
            let mut i = 0u32;
            loop {
                let x = start + f64::from(i) * step;
                if x > stop + 0.5 * step {
                    break;
                }
                out.push(x);
                i += 1;
            }
            Ok(out)
        }
        _ => Err(format!("grid must be a value or start:stop:step, got `{s}`")),
    }
}

fn parse_rational(s: &str) -> Result<RationalInS, String> {
    let mut num: Option<Vec<f64>> = None;
    let mut den: Option<Vec<f64>> = None;
    for part in s.split(';') {
        let (key, list) = part
            .split_once('=')
            .ok_or_else(|| format!("expected key=c0,c1,... in `{part}`"))?;
        let coeffs: Vec<f64> = list
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| format!("bad coefficient `{t}`: {e}")))
            .collect::<Result<_, _>>()?;
        match key.trim() {
            "num" => num = Some(coeffs),
            "den" => den = Some(coeffs),
            other => return Err(format!("unknown key `{other}` (expected num or den)")),
        }
    }
    Ok(RationalInS {
        num: num.ok_or("missing num=...")?,
        den: den.ok_or("missing den=...")?,
    })
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Transform {
            pair,
            n,
            a,
            v,
            k,
            y,
            num,
            out,
        } => cmd_transform(&pair, n, Params { a, v, k }, &y, &num, &out),
        Command::Invert {
            rational,
            series,
            a,
            n,
            x,
            num,
            out,
        } => cmd_invert(rational.as_deref(), series.as_deref(), a, n, &x, &num, &out),
        Command::SolveOde { family, n, v, x, out } => cmd_solve_ode(family, n, v, &x, &out),
        Command::Verify { suite, num, out } => cmd_verify(&suite, &num, &out),
        Command::Catalog { out } => {
            let doc = table::catalog_json();
            if out.csv {
                println!("id,latex,validity");
                for p in table::list_pairs() {
                    println!("{},\"{}\",\"{}\"", p.id, p.latex, p.validity);
                }
            } else {
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            }
            ExitCode::SUCCESS
        }
    }
}

fn cmd_transform(
    pair: &str,
    n: u32,
    params: Params,
    y_grid: &str,
    num: &NumericOpts,
    out: &OutputOpts,
) -> ExitCode {
    let order = match Order::new(n) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    let ys = match parse_grid(y_grid) {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    let mut rows = Vec::new();
    let mut met = true;
    for &y in &ys {
        let closed = match table::eval_pair(pair, order, &params, y) {
            Ok(v) => v,
            Err(e) => return fail(e),
        };
        let q = match table::function_spec(pair, &params) {
            Ok(f) => TransformQuery { f, n: order, y },
            Err(e) => return fail(e),
        };
        let quadrature = match forward_numeric(&q, num.quad_order) {
            Ok(v) => v,
            Err(e) => return fail(e),
        };
        let laplace = match forward_via_laplace(&q, num.quad_order) {
            Ok(v) => v,
            Err(e) => return fail(e),
        };
        let spread = rel_err(closed, quadrature)
            .max(rel_err(closed, laplace))
            .max(rel_err(quadrature, laplace));
        met &= spread <= num.tol;
        rows.push((y, closed, quadrature, laplace, spread));
    }
    if out.csv {
        println!("y,closed,quadrature,laplace,spread");
        for (y, c, q, l, s) in &rows {
            println!("{y},{c},{q},{l},{s}");
        }
    } else if out.json {
        let values: Vec<_> = rows
            .iter()
            .map(|(y, c, q, l, s)| {
                json!({"point": y, "closed": c, "quadrature": q, "laplace": l, "spread": s})
            })
            .collect();
        let doc = json!({
            "schema": 1,
            "command": "transform",
            "inputs": {
                "pair": pair, "n": n, "a": params.a, "v": params.v, "k": params.k,
                "y": y_grid, "quad_order": num.quad_order, "tol": num.tol,
            },
            "values": values,
            "tolerances_met": met,
        });
        println!("{}", serde_json::to_string(&doc).unwrap());
    } else {
        println!("L_{n}{{{pair}}}  (quad order {})", num.quad_order);
        for (y, c, q, l, s) in &rows {
            println!("  y = {y:<8} closed = {c:.12e}  quad = {q:.12e}  laplace = {l:.12e}  spread = {s:.2e}");
        }
        println!("tolerances_met: {met}");
    }
    ExitCode::SUCCESS
}

#[allow(clippy::too_many_arguments)]
fn cmd_invert(
    rational: Option<&str>,
    series: Option<&str>,
    a: Option<f64>,
    n: u32,
    x_grid: &str,
    num: &NumericOpts,
    out: &OutputOpts,
) -> ExitCode {
    let order = match Order::new(n) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    let xs = match parse_grid(x_grid) {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    // the inverse as an evaluator, plus its image for the round-trip spread
    let (invert, image, desc): (
        Arc<dyn Fn(f64) -> lntx::Result<f64> + Send + Sync>,
        Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        String,
    ) = match (rational, series) {
        (Some(r), None) => {
            let r = match parse_rational(r) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            let rc = r.clone();
            let ri = r.clone();
            (
                Arc::new(move |x| invert_rational(&rc, order, x)),
                Arc::new(move |y: f64| {
                    let s = y.powi(n as i32);
                    poly(&ri.num, s) / poly(&ri.den, s)
                }),
                format!("rational num={:?} den={:?}", r.num, r.den),
            )
        }
        (None, Some("bessel_j0_image")) => {
            let a = match a {
                Some(a) if a > 0.0 => a,
                _ => return fail("--series bessel_j0_image requires --a > 0"),
            };
            let an = a.powi(n as i32);
            let s = PowerSeriesInvS::exp_image(1.0, an, 1.0);
            (
                Arc::new(move |x| invert_series(&s, order, x)),
                Arc::new(move |y: f64| {
                    let yn = y.powi(n as i32);
                    (-an / yn).exp() / yn
                }),
                format!("series bessel_j0_image a={a}"),
            )
        }
        (None, Some(other)) => {
            return fail(format!("unknown series `{other}` (available: bessel_j0_image)"))
        }
        _ => return fail("provide exactly one of --rational or --series"),
    };
    let mut rows = Vec::new();
    for &x in &xs {
        match invert(x) {
            Ok(v) => rows.push((x, v)),
            Err(e) => return fail(e),
        }
    }
    // round-trip spread: forward transform of the inverse vs the image
    let inv = invert.clone();
    let f = FunctionSpec::BlackBox {
        f: Arc::new(move |x| inv(x).unwrap_or(f64::NAN)),
        growth_alpha: 0.0,
    };
    let mut spread: f64 = 0.0;
    for &y in &[1.0, 2.0] {
        match forward_numeric(&TransformQuery { f: f.clone(), n: order, y }, num.quad_order) {
            Ok(fwd) => spread = spread.max(rel_err(fwd, image(y))),
            Err(e) => return fail(e),
        }
    }
    let met = spread <= num.tol;
    if out.csv {
        println!("x,value");
        for (x, v) in &rows {
            println!("{x},{v}");
        }
    } else if out.json {
        let values: Vec<_> = rows
            .iter()
            .map(|(x, v)| json!({"point": x, "result": v, "method": "residue/series"}))
            .collect();
        let doc = json!({
            "schema": 1,
            "command": "invert",
            "inputs": {"spec": desc, "n": n, "x": x_grid, "quad_order": num.quad_order, "tol": num.tol},
            "values": values,
            "round_trip_spread": spread,
            "tolerances_met": met,
        });
        println!("{}", serde_json::to_string(&doc).unwrap());
    } else {
        println!("inverse of {desc} at n = {n}");
        for (x, v) in &rows {
            println!("  x = {x:<8} f(x) = {v:.12e}");
        }
        println!("round-trip spread: {spread:.2e}   tolerances_met: {met}");
    }
    ExitCode::SUCCESS
}

fn poly(coeffs: &[f64], s: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * s + c)
}

fn cmd_solve_ode(family: u8, n: u32, v: Option<u32>, x_grid: &str, out: &OutputOpts) -> ExitCode {
    let order = match Order::new(n) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    let problem = match OdeProblem::new(family, order, v) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    let sol = match ode::solve(&problem) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let img = ode::solve_transform_ode(&problem);
    let xs = match parse_grid(x_grid) {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    let mut rows = Vec::new();
    let mut max_residual: f64 = 0.0;
    for &x in &xs {
        let z = match ode::eval_solution(&sol, order, x) {
            Ok(z) => z,
            Err(e) => return fail(e),
        };
        if x > 0.0 {
            match ode::residual(&problem, &sol, x) {
                Ok(r) => max_residual = max_residual.max(r),
                Err(e) => return fail(e),
            }
        }
        rows.push((x, z));
    }
    if out.csv {
        println!("x,value");
        for (x, z) in &rows {
            println!("{x},{z}");
        }
    } else if out.json {
        let values: Vec<_> = rows
            .iter()
            .map(|(x, z)| json!({"point": x, "result": z, "method": "bessel"}))
            .collect();
        let doc = json!({
            "schema": 1,
            "command": "solve-ode",
            "inputs": {"family": family, "n": n, "v": v, "x": x_grid},
            "alpha": sol.bessel_order,
            "C": sol.normalization,
            "image": {
                "scale": img.scale,
                "power_exponent": img.power_exponent,
                "exp_coefficient": img.exp_coefficient,
            },
            "values": values,
            "max_residual": max_residual,
            "tolerances_met": max_residual <= 1e-8,
        });
        println!("{}", serde_json::to_string(&doc).unwrap());
    } else {
        println!(
            "family {family}, n = {n}: z(x) = x^{} J_{}({} x^{})",
            sol.prefactor_exponent,
            sol.bessel_order,
            sol.arg_scale,
            order.nf() / 2.0
        );
        println!(
            "alpha = {}, C = {:.6e}, image = C y^{} exp({}/y^{n})",
            sol.bessel_order, sol.normalization, img.power_exponent, img.exp_coefficient
        );
        for (x, z) in &rows {
            println!("  x = {x:<8} z(x) = {z:.12e}");
        }
        println!("max residual: {max_residual:.2e}");
    }
    ExitCode::SUCCESS
}

fn cmd_verify(suite: &str, num: &NumericOpts, out: &OutputOpts) -> ExitCode {
    let checks = match verify::run_suite(suite, num.quad_order) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let all_pass = checks.iter().all(|c| c.pass);
    if out.json {
        let rows: Vec<_> = checks
            .iter()
            .map(|c| json!({"name": c.name, "worst": c.worst, "tol": c.tol, "pass": c.pass}))
            .collect();
        let doc = json!({
            "schema": 1,
            "command": "verify",
            "inputs": {"suite": suite, "quad_order": num.quad_order},
            "values": rows,
            "tolerances_met": all_pass,
        });
        println!("{}", serde_json::to_string(&doc).unwrap());
    } else {
        for c in &checks {
            println!(
                "{:<26} worst {:>10.3e}  tol {:>8.1e}  {}",
                c.name,
                c.worst,
                c.tol,
                if c.pass { "PASS" } else { "FAIL" }
            );
        }
        println!("{}", if all_pass { "all checks passed" } else { "FAILURES present" });
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
