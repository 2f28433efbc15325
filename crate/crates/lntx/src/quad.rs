//! Quadrature rules: Gauss-Laguerre (Golub-Welsch), Gauss-Legendre, and an
//! adaptive bisection integrator used as the fallback path for integrands
//! that are singular, peaked, or oscillatory after the transform substitution.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;

use crate::{Error, Result};

/// Nodes and weights of a fixed quadrature rule.
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn laguerre_cache() -> &'static Mutex<HashMap<usize, Arc<Rule>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Rule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn legendre_cache() -> &'static Mutex<HashMap<usize, Arc<Rule>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Rule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Gauss-Laguerre rule for ∫₀^∞ e^{-u} g(u) du, computed once per order by
/// the Golub-Welsch eigenvalue method and cached.
pub fn laguerre(order: usize) -> Arc<Rule> {
    if let Some(rule) = laguerre_cache().lock().unwrap().get(&order) {
        return rule.clone();
    }
    // Jacobi matrix of the monic Laguerre recurrence: a_k = 2k+1, b_k = k².
    let m = DMatrix::from_fn(order, order, |i, j| {
        if i == j {
            2.0 * i as f64 + 1.0
        } else if j == i + 1 || i == j + 1 {
            i.max(j) as f64
        } else {
            0.0
        }
    });
    let eig = m.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|j| {
            let v0 = eig.eigenvectors[(0, j)];
            (eig.eigenvalues[j], v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let rule = Arc::new(Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    });
    laguerre_cache().lock().unwrap().insert(order, rule.clone());
    rule
}

/// Σ w_i g(x_i) over the Gauss-Laguerre rule, approximating ∫₀^∞ e^{-u} g(u) du.
pub fn laguerre_integrate<F: Fn(f64) -> f64>(g: &F, order: usize) -> f64 {
    let rule = laguerre(order);
    rule.nodes
        .iter()
        .zip(rule.weights.iter())
        .map(|(&x, &w)| w * g(x))
        .sum()
}

/// Gauss-Legendre rule on [-1, 1] via Newton iteration on the Legendre
/// recurrence.
pub fn legendre(order: usize) -> Arc<Rule> {
    if let Some(rule) = legendre_cache().lock().unwrap().get(&order) {
        return rule.clone();
    }
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    let rule = Arc::new(Rule { nodes, weights });
    legendre_cache().lock().unwrap().insert(order, rule.clone());
    rule
}

/// Composite 20-point Gauss-Legendre rule over `panels` uniform panels.
pub fn composite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let rule = legendre(20);
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| panel(f, a + i as f64 * h, a + (i + 1) as f64 * h, &rule))
        .sum()
}

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rule: &Rule) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for (&x, &w) in rule.nodes.iter().zip(rule.weights.iter()) {
        s += w * f(c + h * x);
    }
    s * h
}

/// Adaptive bisection with a 20-point Gauss-Legendre panel rule.
///
/// `abs_tol` is the absolute error budget for the whole interval; it is
/// split proportionally between subintervals.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    const MAX_DEPTH: u32 = 48;
    let rule = legendre(20);
    let mut total = 0.0;
    let mut err_acc = 0.0;
    let whole = panel(f, a, b, &rule);
    let mut stack = vec![(a, b, whole, abs_tol.max(f64::MIN_POSITIVE), 0u32)];
    while let Some((a, b, whole, tol, depth)) = stack.pop() {
        let mid = 0.5 * (a + b);
        let left = panel(f, a, mid, &rule);
        let right = panel(f, mid, b, &rule);
        let diff = (left + right - whole).abs();
        if diff <= tol || depth >= MAX_DEPTH {
            total += left + right;
            err_acc += diff;
        } else {
            stack.push((a, mid, left, 0.5 * tol, depth + 1));
            stack.push((mid, b, right, 0.5 * tol, depth + 1));
        }
    }
    if !total.is_finite() || err_acc > 50.0 * abs_tol.max(f64::MIN_POSITIVE) {
        return Err(Error::QuadratureNonConvergence {
            err: err_acc,
            tol: abs_tol,
        });
    }
    Ok(total)
}
