//! Inequality checks with margins.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::convolution::ConvolutionPlan;
use super::grid::{Geometry, Grid, SampledFunction};
use super::norms::l2_norm;
use super::rearrange::{lattice_positions, nonnegative, radial_order, rearrange_step_1d, upsample_1d};
use crate::bounds::ModeBound;
use crate::error::{Error, Result};
use crate::kernel::GreenKernel;
use crate::spectral::{ModeClass, SlabProblem};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerificationResult {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`.
    pub margin: f64,
    pub pass: bool,
    pub estimated_error: f64,
}

impl VerificationResult {
    pub fn new(lhs: f64, rhs: f64, estimated_error: f64) -> Self {
        let margin = rhs - lhs;
        Self { lhs, rhs, margin, pass: margin >= -estimated_error, estimated_error }
    }
}

/// Relative rounding allowance for the Hardy–Littlewood sums.
pub const HL_ROUNDING: f64 = 1e-13;

/// `∫h(f*g)` for step functions on boundary-aligned cells of width `eta`; array
/// position `p` is the cell `[(p − M/2)η, (p − M/2 + 1)η]`.
fn step_form_1d(h: &[f64], f: &[f64], g: &[f64], eta: f64) -> f64 {
    let m = h.len() as isize;
    let half = m / 2;
    let gat = |k: isize| {
        let a = k + half;
        if (0..m).contains(&a) {
            g[a as usize]
        } else {
            0.0
        }
    };
    let mut tot = 0.0;
    for (i, hi) in h.iter().enumerate() {
        if *hi == 0.0 {
            continue;
        }
        let mut s = 0.0;
        for (j, fj) in f.iter().enumerate() {
            let k = i as isize - j as isize;
            s += fj * 0.5 * (gat(k) + gat(k - 1));
        }
        tot += hi * s;
    }
    tot * eta * eta
}

/// `Σ_x h(x) Σ_y f(y) g(x−y)` on the integer lattice, times `h^{2d}`.
fn lattice_form(h: &SampledFunction, hv: &[f64], fv: &[f64], gv: &[f64]) -> f64 {
    let pos = lattice_positions(h);
    let n = h.grid.nodes() as i64;
    let c = n / 2;
    let index = |p: &[i64]| -> Option<usize> {
        let mut idx = 0usize;
        for &x in p {
            let a = x + c;
            if !(0..n).contains(&a) {
                return None;
            }
            idx = idx * n as usize + a as usize;
        }
        Some(idx)
    };
    let mut tot = 0.0;
    for (i, hi) in hv.iter().enumerate() {
        if *hi == 0.0 {
            continue;
        }
        let mut s = 0.0;
        for (j, fj) in fv.iter().enumerate() {
            if *fj == 0.0 {
                continue;
            }
            let diff: Vec<i64> = pos[i].iter().zip(&pos[j]).map(|(a, b)| a - b).collect();
            if let Some(k) = index(&diff) {
                s += fj * gv[k];
            }
        }
        tot += hi * s;
    }
    tot * h.grid.h.powi(2 * h.grid.dim() as i32)
}

fn permute_by_rank(f: &SampledFunction, v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut out = vec![0.0; v.len()];
    for (slot, x) in radial_order(f).into_iter().zip(sorted) {
        out[slot] = x;
    }
    out
}

/// `∫h(f*g) ≤ ∫h̄(f̄*ḡ)` for nonnegative samples on one Cartesian grid.
///
/// In one dimension the samples are read as step functions and both sides are
/// exact. In two dimensions both sides are lattice sums and the rearrangement
/// orders lattice points by distance to the center.
pub fn verify_hardy_littlewood(h: &SampledFunction, f: &SampledFunction, g: &SampledFunction) -> Result<VerificationResult> {
    if h.grid != f.grid || h.grid != g.grid {
        return Err(Error::DomainError("all three functions must share one grid".into()));
    }
    let (hv, fv, gv) = (nonnegative(h)?, nonnegative(f)?, nonnegative(g)?);
    let (lhs, rhs) = match h.grid.geometry {
        Geometry::Cartesian { dim: 1, .. } => {
            let eta = h.grid.h / 2.0;
            let lhs = step_form_1d(&upsample_1d(&hv), &upsample_1d(&fv), &upsample_1d(&gv), eta);
            let rhs = step_form_1d(&rearrange_step_1d(&hv), &rearrange_step_1d(&fv), &rearrange_step_1d(&gv), eta);
            (lhs, rhs)
        }
        Geometry::Cartesian { .. } => {
            let lhs = lattice_form(h, &hv, &fv, &gv);
            let rhs = lattice_form(h, &permute_by_rank(h, &hv), &permute_by_rank(h, &fv), &permute_by_rank(h, &gv));
            (lhs, rhs)
        }
        Geometry::Radial { dim, .. } => return Err(Error::UnsupportedDimension(dim)),
    };
    Ok(VerificationResult::new(lhs, rhs, HL_ROUNDING * (lhs.abs() + rhs.abs())))
}

fn kernel_for(problem: &SlabProblem, m: u32) -> Result<GreenKernel> {
    let k_m = problem.mode(m);
    let rho = if problem.n == 3 && k_m.class == ModeClass::Resonant { problem.support.radius() } else { None };
    GreenKernel::new(problem.n, k_m, rho)
}

/// Convolution plans on a grid and on its coarsening, for repeated checks of
/// `‖g_m * f‖_{L²(I)} ≤ c_m‖f‖_{L²(I)}`.
pub struct ModeVerifier {
    pub c_m: f64,
    fine: ConvolutionPlan,
    coarse: ConvolutionPlan,
}

impl ModeVerifier {
    pub fn new(problem: &SlabProblem, m: u32, grid: Grid, bound: &ModeBound) -> Result<Self> {
        if !bound.c_m.is_finite() {
            return Err(Error::NoApplicableBound { m, reason: "bound is infinite".into() });
        }
        let kernel = kernel_for(problem, m)?;
        let probe = SampledFunction::new(grid, vec![Complex64::new(0.0, 0.0); grid.len()], vec![true; grid.len()])?;
        let coarse_grid = probe.coarsen()?.grid;
        Ok(Self {
            c_m: bound.c_m,
            fine: ConvolutionPlan::new(grid, kernel)?,
            coarse: ConvolutionPlan::new(coarse_grid, kernel)?,
        })
    }

    /// Ratio `‖u‖/‖f‖` over the mask, and its value on the coarse grid.
    fn ratios(&self, f: &SampledFunction) -> Result<(f64, f64, f64)> {
        if f.values.iter().zip(&f.mask).any(|(v, inside)| !inside && *v != Complex64::new(0.0, 0.0)) {
            return Err(Error::DomainError("f is not supported in I".into()));
        }
        let norm = l2_norm(f);
        if norm == 0.0 {
            return Ok((0.0, 0.0, 0.0));
        }
        let u = self.fine.apply(f)?;
        let fc = f.coarsen()?;
        let uc = self.coarse.apply(&fc)?;
        let nc = l2_norm(&fc);
        let coarse = if nc > 0.0 { l2_norm(&uc) / nc } else { 0.0 };
        Ok((norm, l2_norm(&u) / norm, coarse))
    }

    /// Error estimate is the Richardson correction `|r_h − r_{2h}|/3` scaled by `‖f‖`.
    pub fn check(&self, f: &SampledFunction) -> Result<VerificationResult> {
        let (norm, fine, coarse) = self.ratios(f)?;
        Ok(VerificationResult::new(fine * norm, self.c_m * norm, (fine - coarse).abs() / 3.0 * norm))
    }

    /// Observed `‖u‖/‖f‖`.
    pub fn ratio(&self, f: &SampledFunction) -> Result<f64> {
        let norm = l2_norm(f);
        if norm == 0.0 {
            return Ok(0.0);
        }
        Ok(l2_norm(&self.fine.apply(f)?) / norm)
    }

    /// `f ↦ g_m * f` restricted to the mask, and its adjoint.
    pub fn apply_masked(&self, f: &SampledFunction) -> Result<SampledFunction> {
        let u = self.fine.apply(f)?;
        Ok(u.with_values(u.values.iter().zip(&u.mask).map(|(v, m)| if *m { *v } else { Complex64::new(0.0, 0.0) }).collect()))
    }

    pub fn adjoint_masked(&self, u: &SampledFunction) -> Result<SampledFunction> {
        // the kernel is even, so the adjoint is conjugation around the same operator
        let conj = u.with_values(u.values.iter().map(|v| v.conj()).collect());
        let w = self.apply_masked(&conj)?;
        Ok(w.with_values(w.values.iter().map(|v| v.conj()).collect()))
    }
}

pub fn verify_mode_inequality(problem: &SlabProblem, m: u32, f: &SampledFunction, bound: &ModeBound) -> Result<VerificationResult> {
    ModeVerifier::new(problem, m, f.grid, bound)?.check(f)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRow {
    pub lemma: String,
    pub m: u32,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
}

impl VerificationRow {
    pub fn new(lemma: &str, m: u32, r: &VerificationResult) -> Self {
        Self { lemma: lemma.into(), m, lhs: r.lhs, rhs: r.rhs, margin: r.margin, pass: r.pass }
    }
}

/// CSV with header `lemma,m,lhs,rhs,margin,pass`.
pub fn write_rows<W: std::io::Write>(out: W, rows: &[VerificationRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
