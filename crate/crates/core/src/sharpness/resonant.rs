//! Resonant modes `k_m = 0`: compactly supported `u_m` whose source `f_m = −Δu_m`
//! is piecewise constant on a set of prescribed measure.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{max_source, radial_l2, ConstructedSolution, Construction, Profile, TightnessReport};
use crate::bounds::{aggregate, cm_n2_resonant, cm_n3_resonant, cm_n4_resonant, GenericConstants};
use crate::error::{Error, Result};
use crate::oracle::pde::{pde_residual, ResidualGrid};
use crate::special::unit_ball_volume;
use crate::spectral::{ModeWavenumber, SlabProblem, SupportDescriptor};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ResonantExample {
    /// `n = 2`, `ρ = 1`: smoothed tent `2/3 − |x|`.
    N2 { measure: f64 },
    /// `n = 2`, `k = 4π²`: `u = 2cos(√3πx) sin(πy) + u₂(x) sin(2πy)` with `|D| = measure`.
    N2TwoMode { measure: f64 },
    /// `n = 3`, `ρ = 1`: `−ln r` between a disk and an annulus carrying the source.
    N3 { measure: f64 },
    /// `n ≥ 4`: `r^{3−n}` outside a ball of measure `|I|`.
    N4 { n: usize, measure: f64 },
}

/// `height − |x|` with parabolic caps: `f = 2/L` on `|x| < L/2`, `f = −1/L` within
/// `L/2` of `±height`, zero elsewhere; `|{f ≠ 0}| = 3L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothedTent {
    pub height: f64,
    pub l: f64,
}

impl SmoothedTent {
    pub fn new(height: f64, l: f64) -> Result<Self> {
        if !(l > 0.0 && l <= height) {
            return Err(Error::SizeViolation(format!("tent of height {height} cannot carry caps of width {l}")));
        }
        Ok(Self { height, l })
    }

    pub fn breakpoints(&self) -> [f64; 3] {
        [self.l / 2.0, self.height - self.l / 2.0, self.height + self.l / 2.0]
    }

    pub fn u(&self, x: f64) -> f64 {
        let (x, l, a) = (x.abs(), self.l, self.height);
        if x <= l / 2.0 {
            a - l / 4.0 - x * x / l
        } else if x <= a - l / 2.0 {
            a - x
        } else if x <= a + l / 2.0 {
            (x - a - l / 2.0).powi(2) / (2.0 * l)
        } else {
            0.0
        }
    }

    /// `−u''`.
    pub fn f(&self, x: f64) -> f64 {
        let [p, q, e] = self.breakpoints();
        let x = x.abs();
        if x < p {
            2.0 / self.l
        } else if x > q && x < e {
            -1.0 / self.l
        } else {
            0.0
        }
    }

    /// Radial pieces of `{f ≠ 0}` on `x ≥ 0`.
    pub fn source_pieces(&self) -> [(f64, f64); 2] {
        let [p, q, e] = self.breakpoints();
        [(0.0, p), (q, e)]
    }
}

fn tent_profile(t: SmoothedTent, extent: f64) -> Profile<'static> {
    Profile {
        d: 1,
        k_m2: 0.0,
        u: Box::new(move |x| Complex64::new(t.u(x), 0.0)),
        f: Box::new(move |x| Complex64::new(t.f(x), 0.0)),
        interfaces: t.breakpoints().to_vec(),
        extent,
    }
}

fn solution(example: &str, n: usize, m: u32, profile: &Profile, support_radius: f64) -> ConstructedSolution {
    let samples = profile.sample();
    ConstructedSolution {
        example: example.into(),
        n,
        m,
        k_m: ModeWavenumber::resonant(),
        support_radius,
        v_norm: None,
        v_outside: max_source(&samples, support_radius * (1.0 + 1e-12)),
        norm_ratio: None,
        residual: profile.residual(&samples),
        slab_residual: None,
        samples,
        notes: Vec::new(),
    }
}

fn n2(measure: f64) -> Result<Construction> {
    if !(measure > 0.0 && measure <= 2.0) {
        return Err(Error::SizeViolation(format!("n = 2 tent needs 0 < |I| <= 2 rho = 2, got {measure}")));
    }
    let t = SmoothedTent::new(2.0 / 3.0, measure / 3.0)?;
    let profile = tent_profile(t, 1.0);
    let mut sol = solution("n2-resonant", 2, 1, &profile, t.breakpoints()[2]);
    let pieces = t.source_pieces();
    let (un, fnorm) = (radial_l2(1, |x| Complex64::new(t.u(x), 0.0), &pieces), radial_l2(1, |x| Complex64::new(t.f(x), 0.0), &pieces));
    let ratio = un / fnorm;
    sol.norm_ratio = Some(ratio);
    sol.notes.push(format!("|u|_L2(I) |I|^(-1/2) = {:.6}, |f|_2 |I|^(1/2) = {:.6}", un / measure.sqrt(), fnorm * measure.sqrt()));
    let support = SupportDescriptor::Ball { center: vec![0.0], radius: 1.0, measure };
    let bound = cm_n2_resonant(2, &ModeWavenumber::resonant(), &support)?.c_m;
    let report = TightnessReport::norm_ratio("n2-resonant", measure, bound, ratio, "rho = 1, bound 2 rho |I|".into());
    Ok(Construction { solution: sol, report })
}

fn n2_two_mode(measure: f64, constants: &GenericConstants) -> Result<Construction> {
    if !(measure > 0.0 && measure < 0.1) {
        return Err(Error::SizeViolation(format!("two-mode example needs 0 < |D| < 0.1, got {measure}")));
    }
    let t = SmoothedTent::new(0.1, measure / 3.0)?;
    let w = 3f64.sqrt() * PI;
    let u1 = move |x: f64| 2.0 * (w * x).cos();
    let profile = tent_profile(t, 0.5);
    let mut sol = solution("n2-two-mode", 2, 2, &profile, t.breakpoints()[2]);
    if let Some(s) = sol.samples.iter().find(|s| s.u.re > 0.0 && 2.0 * s.u.re > u1(s.r)) {
        return Err(Error::ConstructionFailure(format!("2u_2 > u_1 at x = {}", s.r)));
    }
    // |V| is largest as cos(πy) → ±1
    let v = sol.samples.iter().map(|s| 2.0 * s.f.re.abs() / (u1(s.r) - 2.0 * s.u.re)).fold(0.0, f64::max);
    sol.v_norm = Some(v);
    let k = 4.0 * PI * PI;
    let h = 1e-3f64.min(t.l / 10.0);
    let [p, q, e] = t.breakpoints();
    let grid = ResidualGrid {
        h,
        centers: [p / 2.0, (p + q) / 2.0, t.height, (e + 0.5) / 2.0].iter().map(|x| vec![*x]).collect(),
        y_count: 9,
        interfaces: t.breakpoints().to_vec(),
    };
    let u = |x: &[f64], y: f64| Complex64::new(u1(x[0]) * (PI * y).sin() + t.u(x[0]) * (2.0 * PI * y).sin(), 0.0);
    let pot = |x: &[f64], y: f64| {
        let c = (PI * y).cos();
        2.0 * c * t.f(x[0]) / (u1(x[0]) + 2.0 * t.u(x[0]) * c)
    };
    sol.slab_residual = Some(pde_residual(u, pot, k, &grid)?.max_relative);
    sol.notes.push(format!("|D| |V| = {:.6}", measure * v));
    sol.notes.push("k = 4 pi^2 as in the source construction".into());
    let problem = SlabProblem::new(2, k, SupportDescriptor::Ball { center: vec![0.0], radius: 1.0, measure })?;
    let cert = aggregate(&problem, constants)?;
    let report = TightnessReport::potential("n2-two-mode", measure, cert.threshold, v, "support in B_1, |D| = measure".into());
    Ok(Construction { solution: sol, report })
}

/// Disk `r < a` with `f = 2/a²`, annulus `b < r < 1` with `f = −2/(1 − b²)`, `u = −ln r − ε` between.
#[derive(Debug, Clone, Copy)]
struct LogAnnulus {
    a: f64,
    b: f64,
    c1: f64,
    c2: f64,
    beta: f64,
    eps: f64,
}

impl LogAnnulus {
    fn new(measure: f64) -> Self {
        let a = (measure / (2.0 * PI)).sqrt();
        let b = (1.0 - measure / (2.0 * PI)).sqrt();
        let c1 = 2.0 / (a * a);
        let c2 = -2.0 / (1.0 - b * b);
        let gamma = c2 / 2.0;
        let beta = -b.ln() + c2 * b * b / 4.0 - gamma * b.ln();
        let mut s = Self { a, b, c1, c2, beta, eps: 0.0 };
        s.eps = s.v2(1.0);
        s
    }

    fn v2(&self, r: f64) -> f64 {
        if r < self.a {
            0.5 - self.a.ln() - r * r / (2.0 * self.a * self.a)
        } else if r <= self.b {
            -r.ln()
        } else {
            self.beta - self.c2 * r * r / 4.0 + self.c2 / 2.0 * r.ln()
        }
    }

    fn u(&self, r: f64) -> f64 {
        if r >= 1.0 {
            0.0
        } else {
            self.v2(r) - self.eps
        }
    }

    fn f(&self, r: f64) -> f64 {
        if r < self.a {
            self.c1
        } else if r > self.b && r < 1.0 {
            self.c2
        } else {
            0.0
        }
    }
}

fn n3(measure: f64) -> Result<Construction> {
    if !(measure > 0.0 && measure < PI) {
        return Err(Error::SizeViolation(format!("n = 3 annulus needs 0 < |I| < pi rho^2 = pi, got {measure}")));
    }
    let s = LogAnnulus::new(measure);
    let profile = Profile {
        d: 2,
        k_m2: 0.0,
        u: Box::new(move |r| Complex64::new(s.u(r), 0.0)),
        f: Box::new(move |r| Complex64::new(s.f(r), 0.0)),
        interfaces: vec![s.a, s.b, 1.0],
        extent: 1.5,
    };
    let mut sol = solution("n3-resonant", 3, 1, &profile, 1.0);
    let pieces = [(0.0, s.a), (s.b, 1.0)];
    let un = radial_l2(2, |r| Complex64::new(s.u(r), 0.0), &pieces);
    let fnorm = radial_l2(2, |r| Complex64::new(s.f(r), 0.0), &pieces);
    sol.norm_ratio = Some(un / fnorm);
    sol.notes.push(format!("c1 |I1| = {:.12}, c2 |I2| = {:.12}", s.c1 * PI * s.a * s.a, s.c2 * PI * (1.0 - s.b * s.b)));
    sol.notes.push(format!("a = {:.6}, b = {:.6}, eps = {:.6}", s.a, s.b, s.eps));
    let support = SupportDescriptor::Ball { center: vec![0.0, 0.0], radius: 1.0, measure };
    let bound = cm_n3_resonant(3, &ModeWavenumber::resonant(), &support)?.c_m;
    let report = TightnessReport::norm_ratio("n3-resonant", measure, bound, un / fnorm, "rho = 1".into());
    Ok(Construction { solution: sol, report })
}

fn n4(n: usize, measure: f64, constants: &GenericConstants) -> Result<Construction> {
    if n < 4 || !(measure > 0.0) {
        return Err(Error::SizeViolation(format!("power-law example needs n >= 4 and |I| > 0 (n = {n}, |I| = {measure})")));
    }
    let d = n - 1;
    let df = d as f64;
    let r0 = (measure / unit_ball_volume(d)).powf(1.0 / df);
    let c = (df - 2.0) * df * r0.powf(-df);
    let alpha = r0.powf(2.0 - df) + c * r0 * r0 / (2.0 * df);
    let u = move |r: f64| if r < r0 { alpha - c * r * r / (2.0 * df) } else { r.powf(2.0 - df) };
    let profile = Profile {
        d,
        k_m2: 0.0,
        u: Box::new(move |r| Complex64::new(u(r), 0.0)),
        f: Box::new(move |r| Complex64::new(if r < r0 { c } else { 0.0 }, 0.0)),
        interfaces: vec![r0],
        extent: 3.0 * r0,
    };
    let mut sol = solution("n4-resonant", n, 1, &profile, r0);
    let un = radial_l2(d, |r| Complex64::new(u(r), 0.0), &[(0.0, r0)]);
    let ratio = un / (c * measure.sqrt());
    sol.norm_ratio = Some(ratio);
    sol.notes.push(format!("r0 = {r0:.6}; |u|_L2(I) / (|I|^(1/2) r0^(3-n)) = {:.6}", un / (measure.sqrt() * r0.powf(2.0 - df))));
    let bound = cm_n4_resonant(n, &ModeWavenumber::resonant(), measure, constants)?.c_m;
    let report = TightnessReport::norm_ratio("n4-resonant", measure, bound, ratio, format!("n = {n}, I a ball"));
    Ok(Construction { solution: sol, report })
}

pub fn construct_resonant(example: &ResonantExample, constants: &GenericConstants) -> Result<Construction> {
    match *example {
        ResonantExample::N2 { measure } => n2(measure),
        ResonantExample::N2TwoMode { measure } => n2_two_mode(measure, constants),
        ResonantExample::N3 { measure } => n3(measure),
        ResonantExample::N4 { n, measure } => n4(n, measure, constants),
    }
}
