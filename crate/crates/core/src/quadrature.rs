//! Double-exponential quadrature rules and Gauss–Legendre nodes.
//!
//! The exp-sinh rule integrates over `[0, ∞)` and clusters nodes doubly
//! exponentially at the origin, so integrable endpoint singularities such as
//! `t^{-1/2}` cost nothing extra. The tanh-sinh rule does the same on a finite
//! interval.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Number of step-halving refinements allowed.
    pub max_subdivisions: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 10,
        }
    }
}

impl QuadratureSpec {
    pub fn tight() -> Self {
        Self {
            rel_tol: 1e-14,
            abs_tol: 1e-300,
            max_subdivisions: 12,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) || self.max_subdivisions < 1 {
            return Err(Error::InvalidConfig(format!("bad quadrature spec {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
}

const U_LO: f64 = -6.5;
const U_HI: f64 = 4.5;

/// `∫_0^∞ f(t) dt` by the exp-sinh substitution `t = exp(π/2 sinh u)`.
pub fn exp_sinh<F>(f: F, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    spec.validate()?;
    let term = |u: f64| -> Result<Complex64> {
        let t = (FRAC_PI_2 * u.sinh()).exp();
        if t > 740.0 || t == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let w = FRAC_PI_2 * u.cosh() * t;
        let v = f(t) * w;
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::QuadratureFailure(format!("non-finite integrand at t = {t:e}")))
        }
    };
    refine(term, U_LO, U_HI, spec)
}

/// `∫_a^b f(x) dx` by the tanh-sinh substitution.
pub fn tanh_sinh<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    spec.validate()?;
    let half = 0.5 * (b - a);
    let term = |u: f64| -> Result<Complex64> {
        let s = FRAC_PI_2 * u.sinh();
        // distance to the nearer endpoint, computed without cancellation
        let gap = half / (s.abs().exp() * s.abs().cosh());
        if gap == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let x = if u >= 0.0 { b - gap } else { a + gap };
        let w = half * FRAC_PI_2 * u.cosh() / (s.cosh() * s.cosh());
        let v = f(x) * w;
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::QuadratureFailure(format!("non-finite integrand at x = {x:e}")))
        }
    };
    refine(term, -4.0, 4.0, spec)
}

fn refine<T>(term: T, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<QuadResult>
where
    T: Fn(f64) -> Result<Complex64>,
{
    let mut h = 0.5;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut j = (lo / h).ceil() as i64;
    while (j as f64) * h <= hi {
        sum += term(j as f64 * h)?;
        j += 1;
    }
    let mut estimate = sum * h;
    for level in 1..=spec.max_subdivisions {
        h *= 0.5;
        let mut j = (lo / h).ceil() as i64;
        if j % 2 == 0 {
            j += 1;
        }
        while (j as f64) * h <= hi {
            sum += term(j as f64 * h)?;
            j += 2;
        }
        let next = sum * h;
        let err = (next - estimate).norm();
        estimate = next;
        if level >= 2 && err <= spec.abs_tol.max(spec.rel_tol * estimate.norm()) {
            return Ok(QuadResult { value: estimate, error: err });
        }
    }
    Err(Error::QuadratureFailure(format!(
        "no convergence after {} refinements (value {estimate})",
        spec.max_subdivisions
    )))
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            return (vec![0.0], vec![2.0]);
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre rule on `[a, b]` with `panels` equal panels.
pub fn composite_gauss(a: f64, b: f64, panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let (gx, gw) = gauss_legendre(order);
    let width = (b - a) / panels as f64;
    let mut xs = Vec::with_capacity(panels * order);
    let mut ws = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + p as f64 * width;
        for (x, w) in gx.iter().zip(&gw) {
            xs.push(lo + 0.5 * width * (x + 1.0));
            ws.push(0.5 * width * w);
        }
    }
    (xs, ws)
}
