//! `L^p`, weighted `L²` and weak-`L^p` (Lorentz `(p,∞)`) norms over the masked region.

use serde::{Deserialize, Serialize};

use super::grid::SampledFunction;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct NormRequest {
    pub weighted: bool,
    /// Exponents `p ≥ 1` for `‖·‖_{p,∞}`.
    pub lorentz: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
    /// `(∫(1+|x|)^{-2}|f|²)^{1/2}`.
    pub weighted_minus1: Option<f64>,
    /// `(∫(1+|x|)^{2}|f|²)^{1/2}`.
    pub weighted_plus1: Option<f64>,
    pub lorentz: Vec<(f64, f64)>,
}

pub const LORENTZ_LEVELS: usize = 64;

fn masked(f: &SampledFunction) -> impl Iterator<Item = (usize, f64)> + '_ {
    (0..f.values.len()).filter(|&i| f.mask[i]).map(|i| (i, f.values[i].norm()))
}

pub fn lp_norm(f: &SampledFunction, p: f64) -> f64 {
    masked(f).map(|(i, v)| f.grid.weight(i) * v.powf(p)).sum::<f64>().powf(1.0 / p)
}

pub fn l2_norm(f: &SampledFunction) -> f64 {
    masked(f).map(|(i, v)| f.grid.weight(i) * v * v).sum::<f64>().sqrt()
}

pub fn linf_norm(f: &SampledFunction) -> f64 {
    masked(f).map(|(_, v)| v).fold(0.0, f64::max)
}

pub fn weighted_l2(f: &SampledFunction, s: f64) -> f64 {
    masked(f)
        .map(|(i, v)| f.grid.weight(i) * (1.0 + f.grid.radius(i)).powf(2.0 * s) * v * v)
        .sum::<f64>()
        .sqrt()
}

/// `sup_α α·|{|f| > α}|^{1/p}` over [`LORENTZ_LEVELS`] geometric levels between the
/// smallest and largest nonzero `|f|`.
pub fn lorentz_norm(f: &SampledFunction, p: f64) -> f64 {
    let mut mags: Vec<(f64, f64)> = masked(f).filter(|(_, v)| *v > 0.0).map(|(i, v)| (v, f.grid.weight(i))).collect();
    if mags.is_empty() {
        return 0.0;
    }
    mags.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (lo, hi) = (mags.last().expect("nonempty").0, mags[0].0);
    let mut best: f64 = 0.0;
    for j in 0..LORENTZ_LEVELS {
        // levels strictly below each endpoint so that the top level set is nonempty
        let t = j as f64 / (LORENTZ_LEVELS - 1) as f64;
        let alpha = lo.powf(1.0 - t) * hi.powf(t) * (1.0 - 1e-12);
        let measure: f64 = mags.iter().take_while(|(v, _)| *v > alpha).map(|(_, w)| w).sum();
        best = best.max(alpha * measure.powf(1.0 / p));
    }
    best
}

pub fn norms(f: &SampledFunction, request: &NormRequest) -> NormReport {
    NormReport {
        l1: lp_norm(f, 1.0),
        l2: l2_norm(f),
        linf: linf_norm(f),
        weighted_minus1: request.weighted.then(|| weighted_l2(f, -1.0)),
        weighted_plus1: request.weighted.then(|| weighted_l2(f, 1.0)),
        lorentz: request.lorentz.iter().map(|&p| (p, lorentz_norm(f, p))).collect(),
    }
}
