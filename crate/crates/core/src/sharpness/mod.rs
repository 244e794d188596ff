//! Explicit solutions showing how tight the per-mode estimates are.
//!
//! Each construction produces a radial (or even, one-dimensional) mode profile
//! `u_m` together with its source `f_m = −Δ_x u_m − k_m² u_m`, checks the mode
//! equation by finite differences, and compares the achieved quantity with the
//! bound the certificate gives for it.

pub mod patch;
mod radial;
mod resonant;
mod staircase;
mod subcritical;

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bounds::GenericConstants;
use crate::error::{Error, Result};
use crate::quadrature::composite_gauss;
use crate::special::unit_sphere_area;
use crate::spectral::ModeWavenumber;

pub use patch::{admissible_phase, parabolic_patch_complex, parabolic_patch_real, PatchResult};
pub use radial::{construct_dlarge, construct_evanescent_sharp, construct_n3_log};
pub use resonant::{construct_resonant, ResonantExample, SmoothedTent};
pub use staircase::{construct_propagating_staircase, Staircase};
pub use subcritical::{construct_subcritical, Subcritical};

/// Tolerance on the relative finite-difference residual of the mode equation.
pub const MODE_RESIDUAL_TOLERANCE: f64 = 1e-4;

const SAMPLES: usize = 2001;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialSample {
    pub r: f64,
    pub u: Complex64,
    /// `f_m = −Δ_x u_m − k_m² u_m`; equals `V_m u_m` for potential constructions.
    pub f: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructedSolution {
    pub example: String,
    pub n: usize,
    pub m: u32,
    pub k_m: ModeWavenumber,
    /// `V_m` (or `f_m`) vanishes for `r` beyond this radius; infinite when unbounded.
    pub support_radius: f64,
    pub samples: Vec<RadialSample>,
    /// `max |V|` on the samples, for constructions that define a potential.
    pub v_norm: Option<f64>,
    /// `max |V|` (or `|f|`) sampled beyond `support_radius`.
    pub v_outside: f64,
    /// `‖u_m‖_{L²(I)} / ‖f_m‖₂` where the example is about the norm ratio.
    pub norm_ratio: Option<f64>,
    /// Relative residual of the radial mode equation.
    pub residual: f64,
    /// Relative residual of the full slab equation, when checked.
    pub slab_residual: Option<f64>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightnessReport {
    pub example: String,
    pub param: f64,
    pub bound: f64,
    pub achieved: f64,
    /// `achieved/bound` for norm ratios, `bound/achieved` for potentials.
    pub ratio: f64,
    pub note: String,
}

impl TightnessReport {
    fn potential(example: &str, param: f64, bound: f64, achieved: f64, note: String) -> Self {
        Self { example: example.into(), param, bound, achieved, ratio: bound / achieved, note }
    }

    fn norm_ratio(example: &str, param: f64, bound: f64, achieved: f64, note: String) -> Self {
        Self { example: example.into(), param, bound, achieved, ratio: achieved / bound, note }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Construction {
    pub solution: ConstructedSolution,
    pub report: TightnessReport,
}

/// A radial profile on `[0, extent]` in `ℝ^d`; `d = 1` means an even function of `x`.
pub(crate) struct Profile<'a> {
    pub d: usize,
    /// Signed `k_m²`.
    pub k_m2: f64,
    pub u: Box<dyn Fn(f64) -> Complex64 + 'a>,
    pub f: Box<dyn Fn(f64) -> Complex64 + 'a>,
    /// Radii where `u` is only `C¹`.
    pub interfaces: Vec<f64>,
    pub extent: f64,
}

impl Profile<'_> {
    fn radii(&self) -> Vec<f64> {
        let mut r: Vec<f64> =
            (0..SAMPLES).map(|i| self.extent * i as f64 / (SAMPLES - 1) as f64).chain(self.interfaces.iter().copied()).collect();
        r.retain(|x| *x <= self.extent);
        r.sort_by(f64::total_cmp);
        r.dedup();
        r
    }

    pub fn sample(&self) -> Vec<RadialSample> {
        self.radii().into_iter().map(|r| RadialSample { r, u: (self.u)(r), f: (self.f)(r) }).collect()
    }

    /// `max |−u'' − (d−1)u'/r − k_m² u − f| / max(|f| + |k_m² u|)` with central differences.
    pub fn residual(&self, samples: &[RadialSample]) -> f64 {
        let kappa = self.k_m2.abs().sqrt();
        let gap = self.interfaces.windows(2).map(|w| (w[1] - w[0]).abs()).filter(|g| *g > 0.0).fold(1.0, f64::min);
        let h = 1e-3 * (1.0 / kappa.max(1.0)).min(gap);
        let scale = samples.iter().map(|s| s.f.norm() + self.k_m2.abs() * s.u.norm()).fold(0.0, f64::max);
        let dm1 = self.d as f64 - 1.0;
        let mut worst: f64 = 0.0;
        for s in samples {
            let r = s.r;
            if r <= 2.0 * h || r + h > self.extent || self.interfaces.iter().any(|a| (r - a).abs() <= 1.5 * h) {
                continue;
            }
            let (p, m) = ((self.u)(r + h), (self.u)(r - h));
            let lap = (p + m - s.u * 2.0) / (h * h) + (p - m) * (dm1 / (2.0 * h * r));
            worst = worst.max((-lap - s.u * self.k_m2 - s.f).norm());
        }
        if scale > 0.0 {
            worst / scale
        } else {
            worst
        }
    }
}

pub(crate) fn max_potential(samples: &[RadialSample], beyond: f64) -> f64 {
    samples
        .iter()
        .filter(|s| s.r > beyond)
        .map(|s| if s.f == Complex64::new(0.0, 0.0) { 0.0 } else { (s.f / s.u).norm() })
        .fold(0.0, f64::max)
}

pub(crate) fn max_source(samples: &[RadialSample], beyond: f64) -> f64 {
    samples.iter().filter(|s| s.r > beyond).map(|s| s.f.norm()).fold(0.0, f64::max)
}

/// `‖g‖_{L²}` of a radial function over the union of radial intervals `pieces` in `ℝ^d`.
pub(crate) fn radial_l2<G: Fn(f64) -> Complex64>(d: usize, g: G, pieces: &[(f64, f64)]) -> f64 {
    let area = if d == 1 { 2.0 } else { unit_sphere_area(d) };
    let mut total = 0.0;
    for &(a, b) in pieces {
        let (x, w) = composite_gauss(a, b, 16, 16);
        total += x.iter().zip(&w).map(|(r, w)| w * g(*r).norm_sqr() * r.powi(d as i32 - 1)).sum::<f64>();
    }
    (area * total).sqrt()
}

/// `key=value` pairs given to [`run_example`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExampleParams {
    pub n: Option<usize>,
    pub k: Option<f64>,
    pub delta: Option<f64>,
    pub measure: Option<f64>,
    pub r0: Option<f64>,
    pub class: Option<String>,
}

impl std::str::FromStr for ExampleParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Self::default();
        let bad = |item: &str| Error::InvalidConfig(format!("bad example parameter {item:?}"));
        for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
            let (key, value) = item.split_once('=').ok_or_else(|| bad(item))?;
            let num = || value.trim().parse::<f64>().map_err(|_| bad(item));
            match key.trim() {
                "n" => p.n = Some(value.trim().parse().map_err(|_| bad(item))?),
                "k" => p.k = Some(num()?),
                "delta" => p.delta = Some(num()?),
                "measure" => p.measure = Some(num()?),
                "r0" => p.r0 = Some(num()?),
                "class" => p.class = Some(value.trim().to_string()),
                _ => return Err(bad(item)),
            }
        }
        Ok(p)
    }
}

/// Identifiers accepted by [`run_example`].
pub const EXAMPLES: [&str; 9] = [
    "dlarge",
    "evanescent-sharp",
    "staircase",
    "n3-log",
    "subcritical",
    "n2-resonant",
    "n2-two-mode",
    "n3-resonant",
    "n4-resonant",
];

/// Builds example `id`. Missing parameters take the defaults of the documented instances;
/// `constants` defaults to the calibrated table for the example's dimension.
pub fn run_example(id: &str, params: &ExampleParams, constants: Option<&GenericConstants>) -> Result<Construction> {
    let consts = |n: usize| match constants {
        Some(c) => Ok(c.clone()),
        None => GenericConstants::defaults(n),
    };
    match id {
        "dlarge" => {
            let n = params.n.unwrap_or(2);
            let kappa = params.delta.unwrap_or(5.0);
            let k_m = match params.class.as_deref().unwrap_or("evanescent") {
                "evanescent" => ModeWavenumber::evanescent(kappa),
                "propagating" => ModeWavenumber::propagating(kappa),
                other => return Err(Error::InvalidConfig(format!("class must be evanescent or propagating, got {other}"))),
            };
            construct_dlarge(n, k_m)
        }
        "evanescent-sharp" => {
            let n = params.n.unwrap_or(2);
            construct_evanescent_sharp(n, params.delta.unwrap_or(50.0), &consts(n)?)
        }
        "staircase" => construct_propagating_staircase(params.delta.unwrap_or(10.0), &consts(2)?),
        "n3-log" => construct_n3_log(params.delta.unwrap_or(0.01), &consts(3)?),
        "subcritical" => construct_subcritical(params.n.unwrap_or(2), params.k.unwrap_or(0.0), params.r0.unwrap_or(100.0)),
        "n2-resonant" => construct_resonant(&ResonantExample::N2 { measure: params.measure.unwrap_or(0.03) }, &consts(2)?),
        "n2-two-mode" => construct_resonant(&ResonantExample::N2TwoMode { measure: params.measure.unwrap_or(0.03) }, &consts(2)?),
        "n3-resonant" => construct_resonant(&ResonantExample::N3 { measure: params.measure.unwrap_or(0.1 * PI) }, &consts(3)?),
        "n4-resonant" => {
            let n = params.n.unwrap_or(5);
            construct_resonant(&ResonantExample::N4 { n, measure: params.measure.unwrap_or(1.0) }, &consts(n)?)
        }
        other => Err(Error::InvalidConfig(format!("unknown example {other:?}; expected one of {}", EXAMPLES.join(", ")))),
    }
}

pub fn write_reports<W: Write>(out: W, reports: &[TightnessReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["example", "param", "bound", "achieved", "ratio"]).map_err(io)?;
    for r in reports {
        w.write_record([r.example.clone(), r.param.to_string(), r.bound.to_string(), r.achieved.to_string(), r.ratio.to_string()])
            .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Sampled profile as CSV `r,u_re,u_im,f_re,f_im`.
pub fn write_samples<W: Write>(out: W, solution: &ConstructedSolution) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["r", "u_re", "u_im", "f_re", "f_im"]).map_err(io)?;
    for s in &solution.samples {
        w.write_record([s.r, s.u.re, s.u.im, s.f.re, s.f.im].map(|v| v.to_string())).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
