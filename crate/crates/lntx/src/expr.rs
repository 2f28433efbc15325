//! Closed-form expression nodes over the abscissa y.
//!
//! The catalog images are built from a small fixed grammar — powers of y,
//! exp, erfc, erfcx, sums, products, and real powers — kept symbolic so the
//! operator module can apply exact δ_y differentiation (Theorem-of-moments
//! checks) instead of nested finite differences.

use crate::specfun;

#[derive(Clone, Debug)]
pub enum Expr {
    Const(f64),
    /// y^p
    YPow(f64),
    Sum(Vec<Expr>),
    Prod(Vec<Expr>),
    /// base^r for real r
    Pow(Box<Expr>, f64),
    Exp(Box<Expr>),
    Erfc(Box<Expr>),
    /// scaled complement e^{z²} erfc(z); keeps Example-1.10-style forms
    /// representable at large y where exp and erfc separately overflow
    Erfcx(Box<Expr>),
}

impl Expr {
    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn ypow(p: f64) -> Expr {
        Expr::YPow(p)
    }

    pub fn prod(terms: Vec<Expr>) -> Expr {
        Expr::Prod(terms)
    }

    pub fn eval(&self, y: f64) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::YPow(p) => y.powf(*p),
            Expr::Sum(ts) => ts.iter().map(|t| t.eval(y)).sum(),
            Expr::Prod(ts) => ts.iter().map(|t| t.eval(y)).product(),
            Expr::Pow(b, r) => b.eval(y).powf(*r),
            Expr::Exp(e) => e.eval(y).exp(),
            Expr::Erfc(e) => specfun::erfc_raw(e.eval(y)),
            Expr::Erfcx(e) => specfun::erfcx_raw(e.eval(y)),
        }
    }

    /// Exact d/dy over the grammar (closed under differentiation).
    pub fn d_dy(&self) -> Expr {
        match self {
            Expr::Const(_) => Expr::Const(0.0),
            Expr::YPow(p) => {
                if *p == 0.0 {
                    Expr::Const(0.0)
                } else {
                    Expr::Prod(vec![Expr::Const(*p), Expr::YPow(p - 1.0)])
                }
            }
            Expr::Sum(ts) => Expr::Sum(ts.iter().map(Expr::d_dy).collect()),
            Expr::Prod(ts) => {
                let mut out = Vec::with_capacity(ts.len());
                for i in 0..ts.len() {
                    let mut factors = Vec::with_capacity(ts.len());
                    for (j, t) in ts.iter().enumerate() {
                        factors.push(if i == j { t.d_dy() } else { t.clone() });
                    }
                    out.push(Expr::Prod(factors));
                }
                Expr::Sum(out)
            }
            Expr::Pow(b, r) => Expr::Prod(vec![
                Expr::Const(*r),
                Expr::Pow(b.clone(), r - 1.0),
                b.d_dy(),
            ]),
            Expr::Exp(e) => Expr::Prod(vec![e.d_dy(), Expr::Exp(e.clone())]),
            Expr::Erfc(e) => Expr::Prod(vec![
                Expr::Const(-2.0 / specfun::SQRT_PI),
                Expr::Exp(Box::new(Expr::Prod(vec![
                    Expr::Const(-1.0),
                    Expr::Pow(e.clone(), 2.0),
                ]))),
                e.d_dy(),
            ]),
            // erfcx'(z) = 2z erfcx(z) - 2/√π
            Expr::Erfcx(e) => Expr::Prod(vec![
                e.d_dy(),
                Expr::Sum(vec![
                    Expr::Prod(vec![
                        Expr::Const(2.0),
                        (**e).clone(),
                        Expr::Erfcx(e.clone()),
                    ]),
                    Expr::Const(-2.0 / specfun::SQRT_PI),
                ]),
            ]),
        }
    }

    /// δ_y = y^{1-n} d/dy applied once.
    pub fn delta_y(&self, n: f64) -> Expr {
        Expr::Prod(vec![Expr::YPow(1.0 - n), self.d_dy()])
    }
}
