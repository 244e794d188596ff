//! `n = 2` propagating mode `u_m = φ(x) sin(δ|x|) − i cos(δx)` with a staircase `φ`
//! that only climbs where `|cos(δx)| ≥ 1/2`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{max_potential, ConstructedSolution, Construction, Profile, TightnessReport};
use crate::bounds::{best_mode_bound, GenericConstants};
use crate::error::{Error, Result};
use crate::spectral::{ModeWavenumber, SlabProblem, SupportDescriptor};

/// Even, nondecreasing on `x ≥ 0`, `φ ≡ 1` for `|x| ≥ B`, `|φ''| = δ` on the windows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Staircase {
    pub delta: f64,
    /// Windows `|x − jπ/δ| ≤ π/(3δ)`, `j = 1..=windows`, after the half window at 0.
    pub windows: usize,
    pub b: f64,
    pub c0: f64,
    alpha: f64,
    half: f64,
}

impl Staircase {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 1.0) {
            return Err(Error::InvalidConfig(format!("staircase needs delta > 1, got {delta}")));
        }
        let half = PI / (3.0 * delta);
        let windows = ((delta - PI / 3.0) / PI).floor().max(0.0) as usize;
        let b = windows as f64 * PI / delta + half;
        let alpha = delta / 2.0;
        let rise = alpha * half * half * (0.5 + 2.0 * windows as f64);
        let c0 = 1.0 - rise;
        if !(c0 > 0.0) {
            return Err(Error::ConstructionFailure(format!("staircase rise {rise} leaves no room below 1")));
        }
        Ok(Self { delta, windows, b, c0, alpha, half })
    }

    /// Points where `φ''` jumps, on `x ≥ 0`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut v = vec![self.half / 2.0, self.half];
        for j in 1..=self.windows {
            let mid = j as f64 * PI / self.delta;
            v.extend([mid - self.half, mid, mid + self.half]);
        }
        v
    }

    /// `(φ, φ', φ'')` at `|x|`.
    pub fn eval(&self, x: f64) -> (f64, f64, f64) {
        let (x, sign) = (x.abs(), x.signum());
        let (a, h) = (self.alpha, self.half);
        let step = 2.0 * a * h * h;
        let up = |base: f64, t: f64| (base + a * t * t, 2.0 * a * t, 2.0 * a);
        let down = |top: f64, t: f64| (top - a * t * t, -2.0 * a * t, -2.0 * a);
        let after0 = self.c0 + a * h * h / 2.0;
        let (p, dp, ddp) = if x >= self.b {
            (1.0, 0.0, 0.0)
        } else if x <= h / 2.0 {
            up(self.c0, x)
        } else if x <= h {
            down(after0, x - h)
        } else {
            // window index nearest to x
            let j = (x * self.delta / PI).round().max(1.0);
            let mid = j * PI / self.delta;
            let base = after0 + step * (j - 1.0);
            if x <= mid - h {
                (base, 0.0, 0.0)
            } else if x <= mid {
                up(base, x - (mid - h))
            } else if x <= mid + h {
                down(base + step, x - (mid + h))
            } else {
                (base + step, 0.0, 0.0)
            }
        };
        (p, if x == 0.0 { 0.0 } else { sign * dp }, ddp)
    }

    pub fn u(&self, x: f64) -> Complex64 {
        let (p, _, _) = self.eval(x);
        Complex64::new(p * (self.delta * x.abs()).sin(), -(self.delta * x).cos())
    }

    /// `E = φ''s + 2φ's'`, so that `−u'' − δ²u = −E`.
    pub fn e(&self, x: f64) -> f64 {
        let x = x.abs();
        let (_, dp, ddp) = self.eval(x);
        ddp * (self.delta * x).sin() + 2.0 * dp * self.delta * (self.delta * x).cos()
    }
}

pub fn construct_propagating_staircase(delta: f64, constants: &GenericConstants) -> Result<Construction> {
    let s = Staircase::new(delta)?;
    let extent = s.b + 2.0;
    let profile = Profile {
        d: 1,
        k_m2: delta * delta,
        u: Box::new(move |x| s.u(x)),
        f: Box::new(move |x| Complex64::new(-s.e(x), 0.0)),
        interfaces: s.breakpoints(),
        extent,
    };
    let samples = profile.sample();
    let residual = profile.residual(&samples);
    let v = max_potential(&samples, -1.0);
    let k_m = ModeWavenumber::propagating(delta);
    let mut notes = vec![
        format!("B = {:.6}, windows = {}, c0 = {:.6}", s.b, s.windows, s.c0),
        format!("|V|/delta = {:.6}", v / delta),
    ];
    if s.b > 1.0 {
        notes.push("delta below pi/3: B is the first window end, above 1".into());
    }
    let solution = ConstructedSolution {
        example: "staircase".into(),
        n: 2,
        m: 1,
        k_m,
        support_radius: s.b,
        v_norm: Some(v),
        v_outside: max_potential(&samples, s.b),
        norm_ratio: None,
        residual,
        slab_residual: None,
        samples,
        notes,
    };
    let problem = SlabProblem::new(2, PI * PI + delta * delta, SupportDescriptor::ball(1, s.b))?;
    let bound = best_mode_bound(&problem, 1, constants)?;
    let report = TightnessReport::potential(
        "staircase",
        delta,
        1.0 / bound.c_m,
        v,
        format!("bound from {}", bound.source.map_or("none", |l| l.name())),
    );
    Ok(Construction { solution, report })
}
