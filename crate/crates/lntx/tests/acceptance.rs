//! End-to-end acceptance gate. Each criterion prints one pass/fail line;
//! the test fails if any criterion fails.

use std::sync::Arc;
use std::time::Instant;

use lntx::ode::{self, OdeProblem};
use lntx::rel_err;
use lntx::transform::{forward_numeric, FunctionSpec, Order, TransformQuery};
use lntx::verify::{self, CheckResult};

const QUAD_ORDER: usize = 96;

fn report(num: u32, label: &str, worst: f64, tol: f64) -> bool {
    let pass = worst.is_finite() && worst <= tol;
    println!(
        "criterion {num:>2} [{}] {label}: worst {worst:.3e} (tol {tol:.1e})",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

fn report_checks(num: u32, label: &str, checks: &[CheckResult]) -> bool {
    let worst = checks
        .iter()
        .map(|c| c.worst / c.tol)
        .fold(0.0f64, f64::max);
    let pass = checks.iter().all(|c| c.pass);
    println!(
        "criterion {num:>2} [{}] {label}: worst/tol {worst:.3e}",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

#[test]
fn acceptance() {
    let mut all = true;

    // 1. pair catalog over the full (n, y) grid, three routes pairwise
    all &= report_checks(
        1,
        "pair catalog, closed vs quadrature vs Laplace route",
        &verify::suite_pairs(QUAD_ORDER).unwrap(),
    );

    // 2. shift rule
    all &= report_checks(
        2,
        "shift rule for Const/CosXn/BesselJ0Arg, a in {0.5,1,3}",
        &verify::suite_shift(QUAD_ORDER).unwrap(),
    );

    let ops = verify::suite_operators(QUAD_ORDER).unwrap();
    // 3. derivative identity
    all &= report(3, "derivative identity, k in {1,2,3}", ops[0].worst, 1e-6);
    // 4. moment rule
    all &= report(4, "moment rule, k in {1,2}, all pairs", ops[1].worst, 1e-7);

    let inv = verify::suite_inversion(QUAD_ORDER).unwrap();
    // 5. residue inversion of the sine image
    all &= report(5, "residue inversion of 1/(s^2+a^{2n})", inv[0].worst, 1e-10);
    // 6. series inversion of the Bessel image
    all &= report(6, "series inversion of (1/y^n)e^{-a^n/y^n}", inv[1].worst, 1e-9);
    // 7. random rational round trip
    all &= report(7, "20 random stable rational round trips", inv[2].worst, 1e-6);

    // 8 & 9. ODE families: residual and transform-image consistency
    for (num, label, problems) in [
        (
            8u32,
            "ODE family 1, (n,v) in {(2,3),(2,5),(4,5)}",
            vec![
                OdeProblem::new(1, Order::new(2).unwrap(), Some(3)).unwrap(),
                OdeProblem::new(1, Order::new(2).unwrap(), Some(5)).unwrap(),
                OdeProblem::new(1, Order::new(4).unwrap(), Some(5)).unwrap(),
            ],
        ),
        (
            9,
            "ODE family 2, n in {1,2,4}",
            vec![
                OdeProblem::new(2, Order::new(1).unwrap(), None).unwrap(),
                OdeProblem::new(2, Order::new(2).unwrap(), None).unwrap(),
                OdeProblem::new(2, Order::new(4).unwrap(), None).unwrap(),
            ],
        ),
    ] {
        let mut worst_res: f64 = 0.0;
        let mut worst_img: f64 = 0.0;
        for p in &problems {
            let sol = ode::solve(p).unwrap();
            for &x in &[0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
                worst_res = worst_res.max(ode::residual(p, &sol, x).unwrap());
            }
            let img = ode::solve_transform_ode(p);
            let n = p.n;
            let f = FunctionSpec::BlackBox {
                f: Arc::new(move |x| ode::eval_solution(&sol, n, x).unwrap()),
                growth_alpha: 0.0,
            };
            for &y in &[1.5, 2.0, 3.0] {
                let fwd =
                    forward_numeric(&TransformQuery { f: f.clone(), n, y }, QUAD_ORDER).unwrap();
                worst_img = worst_img.max(rel_err(fwd, img.eval(n, y)));
            }
        }
        let pass_res = worst_res <= 1e-8;
        let pass_img = worst_img <= 1e-7;
        println!(
            "criterion {num:>2} [{}] {label}: residual {worst_res:.3e} (tol 1e-8), image {worst_img:.3e} (tol 1e-7)",
            if pass_res && pass_img { "PASS" } else { "FAIL" }
        );
        all &= pass_res && pass_img;
    }

    // 10. classical Laplace anchor at n = 1
    all &= report_checks(
        10,
        "five classical Laplace pairs at n=1",
        &verify::suite_laplace(QUAD_ORDER).unwrap(),
    );

    // 11. CLI full verification suite exits 0 in under 60 s
    let start = Instant::now();
    let status = std::process::Command::new(env!("CARGO_BIN_EXE_lntx"))
        .args(["verify", "--suite", "all"])
        .stdout(std::process::Stdio::null())
        .status()
        .expect("failed to spawn lntx");
    let elapsed = start.elapsed().as_secs_f64();
    let pass = status.success() && elapsed < 60.0;
    println!(
        "criterion 11 [{}] `verify --suite all` exit {:?} in {elapsed:.1} s (limit 60 s)",
        if pass { "PASS" } else { "FAIL" },
        status.code()
    );
    all &= pass;

    assert!(all, "one or more acceptance criteria failed");
}
