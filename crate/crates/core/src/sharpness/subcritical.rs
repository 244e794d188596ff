//! `k < π²`: `u = s(|x|) sin(πy)` with `s = e^{−δ₊r}` outside `r₀`, `Ar² + B` inside.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{max_potential, ConstructedSolution, Construction, Profile, TightnessReport};
use crate::bounds::cm_fourier;
use crate::error::{Error, Result};
use crate::oracle::pde::{pde_residual, ResidualGrid};
use crate::spectral::ModeWavenumber;

/// Stencil step of the slab residual check.
pub const SLAB_STEP: f64 = 1e-3;

/// Radial profile normalised by `B` so that `s(0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Subcritical {
    pub n: usize,
    pub k: f64,
    pub r0: f64,
    /// `δ₊ = (π² − k)^{1/2}`.
    pub delta: f64,
}

impl Subcritical {
    pub fn new(n: usize, k: f64, r0: f64) -> Result<Self> {
        if n < 2 || !(k < PI * PI) || !(r0 > 0.0) {
            return Err(Error::InvalidConfig(format!("subcritical needs n >= 2, k < pi^2, r0 > 0 (n = {n}, k = {k}, r0 = {r0})")));
        }
        Ok(Self { n, k, r0, delta: (PI * PI - k).sqrt() })
    }

    fn b(&self) -> f64 {
        1.0 + self.delta * self.r0 / 2.0
    }

    pub fn s(&self, r: f64) -> f64 {
        if r <= self.r0 {
            let a = -self.delta / (2.0 * self.r0);
            1.0 + a * r * r / self.b()
        } else {
            (-self.delta * (r - self.r0)).exp() / self.b()
        }
    }

    /// `V = −Δ_x s/s + δ₊²`.
    pub fn v(&self, r: f64) -> f64 {
        let d = (self.n - 1) as f64;
        let d2 = self.delta * self.delta;
        if r <= self.r0 {
            let a = -self.delta / (2.0 * self.r0);
            d2 - 2.0 * a * d / (self.b() * self.s(r))
        } else if r > 0.0 {
            self.delta * (d - 1.0) / r
        } else {
            0.0
        }
    }

    /// `δ₊² + (n−1)δ₊/r₀`.
    pub fn sup_v(&self) -> f64 {
        self.delta * self.delta + (self.n - 1) as f64 * self.delta / self.r0
    }
}

pub fn construct_subcritical(n: usize, k: f64, r0: f64) -> Result<Construction> {
    let s = Subcritical::new(n, k, r0)?;
    let k_m2 = k - PI * PI;
    let profile = Profile {
        d: n - 1,
        k_m2,
        u: Box::new(move |r| Complex64::new(s.s(r), 0.0)),
        f: Box::new(move |r| Complex64::new(s.v(r) * s.s(r), 0.0)),
        interfaces: vec![r0],
        extent: 1.5 * r0,
    };
    let samples = profile.sample();
    let residual = profile.residual(&samples);
    let v = samples.iter().map(|p| s.v(p.r).abs()).fold(0.0, f64::max);
    let support_radius = if n == 2 { r0 } else { f64::INFINITY };
    let d = n - 1;
    let along = |r: f64| {
        let mut x = vec![0.0; d];
        x[0] = r;
        x
    };
    let grid = ResidualGrid {
        h: SLAB_STEP,
        centers: [0.1, 0.5, 0.9, 0.999, 1.001, 1.2].iter().map(|t| along(t * r0)).collect(),
        y_count: 7,
        interfaces: vec![r0],
    };
    let norm = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let slab = pde_residual(|x, y| Complex64::new(s.s(norm(x)) * (PI * y).sin(), 0.0), |x, _| s.v(norm(x)), k, &grid)?;
    let solution = ConstructedSolution {
        example: "subcritical".into(),
        n,
        m: 1,
        k_m: ModeWavenumber::evanescent(s.delta),
        support_radius,
        v_norm: Some(v),
        v_outside: if n == 2 { max_potential(&samples, r0) } else { 0.0 },
        norm_ratio: None,
        residual,
        slab_residual: Some(slab.max_relative),
        notes: vec![format!("sup V formula = {:.12}", s.sup_v()), format!("boundary max |u| = {:e}", slab.boundary_max)],
        samples,
    };
    let bound = 1.0 / cm_fourier(&ModeWavenumber::evanescent(s.delta))?.c_m;
    let report = TightnessReport::potential("subcritical", r0, bound, v, format!("n = {n}, k = {k}: threshold pi^2 - k"));
    Ok(Construction { solution, report })
}
