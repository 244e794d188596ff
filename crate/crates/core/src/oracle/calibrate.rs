//! Numerical values for the unnamed lemma constants.
//!
//! Trials walk a geometric grid of the dilation-invariant product of `|k_m|` and
//! the support radius, on the support ball of unit measure, each starting from a
//! random smooth `f` supported in the ball. A few steps of power
//! iteration on `f ↦ 1_I(g_m * f)` push `f` towards the worst case; every
//! iterate's ratio `‖u‖/‖f‖ ÷ shape` counts as an observation.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::convolution::ConvolutionPlan;
use super::grid::{Grid, SampledFunction};
use super::norms::l2_norm;
use crate::bounds::{
    cm_agmon, cm_fourier, cm_n2, cm_n2_resonant, cm_n3_lorentz, cm_n3_resonant, cm_n3_smallgap, cm_n4, cm_n4_resonant,
    Constant, GenericConstants, Lemma,
};
use crate::error::{Error, Result};
use crate::kernel::GreenKernel;
use crate::special::unit_ball_volume;
use crate::spectral::{ModeClass, ModeWavenumber, SupportDescriptor};

pub const SAFETY_FACTOR: f64 = 1.1;
pub const POWER_STEPS: usize = 6;
const MAX_NODES_1D: usize = 4097;
const MAX_NODES_2D: usize = 201;

/// How trials are drawn for one lemma.
#[derive(Debug, Clone, PartialEq)]
struct TrialPlan {
    classes: &'static [ModeClass],
    /// Range of `|k_m|·ρ`; ignored for resonant modes.
    t: (f64, f64),
    /// Range of the support radius relative to the unit-measure ball.
    scale: (f64, f64),
    /// Ratio `ρ_kernel / ρ_support` range for the resonant log kernel.
    inner: (f64, f64),
    radial: bool,
}

const BOTH: &[ModeClass] = &[ModeClass::Evanescent, ModeClass::Propagating];

fn plan_for(lemma: Lemma, n: usize) -> Result<TrialPlan> {
    let d = n - 1;
    let base = TrialPlan { classes: BOTH, t: (0.05, 8.0), scale: (1.0, 1.0), inner: (1.0, 1.0), radial: d >= 3 };
    let ok = match lemma {
        Lemma::Fourier | Lemma::Agmon => (2..=8).contains(&n),
        Lemma::N2 | Lemma::N2Resonant => n == 2,
        Lemma::N3Lorentz | Lemma::N3SmallGap | Lemma::N3Resonant => n == 3,
        Lemma::N4 | Lemma::N4Resonant => (4..=8).contains(&n),
    };
    if !ok {
        return Err(Error::NotApplicable(format!("{} has no constant in n = {n}", lemma.name())));
    }
    Ok(match lemma {
        Lemma::Fourier => TrialPlan { classes: &[ModeClass::Evanescent], ..base },
        Lemma::Agmon => TrialPlan { classes: &[ModeClass::Propagating], t: (0.11, 20.0), ..base },
        Lemma::N2 | Lemma::N3Lorentz | Lemma::N4 => base,
        Lemma::N3SmallGap => TrialPlan { t: (0.005, 0.24), ..base },
        // the radius must be at least 1
        Lemma::N2Resonant => TrialPlan { classes: &[ModeClass::Resonant], scale: (2.0, 6.0), ..base },
        // |I| between 1% and all of πρ²; positive kernel, so radial f suffice
        Lemma::N3Resonant => TrialPlan { classes: &[ModeClass::Resonant], inner: (1.0, 100.0), radial: true, ..base },
        Lemma::N4Resonant => TrialPlan { classes: &[ModeClass::Resonant], ..base },
    })
}

fn unit_constants() -> GenericConstants {
    let one = Some(Constant::calibrated(1.0));
    GenericConstants { agmon: one, lorentz: one, small_gap: one, young: one, resonant_power: one }
}

/// `c_m` of the lemma with every generic constant set to 1.
fn shape(lemma: Lemma, n: usize, k_m: &ModeWavenumber, support: &SupportDescriptor) -> Result<f64> {
    let c = unit_constants();
    let m = support.measure();
    let b = match lemma {
        Lemma::Fourier => cm_fourier(k_m),
        Lemma::Agmon => cm_agmon(k_m, support, &c),
        Lemma::N2 => cm_n2(n, k_m, m),
        Lemma::N2Resonant => cm_n2_resonant(n, k_m, support),
        Lemma::N3Lorentz => cm_n3_lorentz(n, k_m, m, &c),
        Lemma::N3SmallGap => cm_n3_smallgap(n, k_m, m, &c),
        Lemma::N3Resonant => cm_n3_resonant(n, k_m, support),
        Lemma::N4 => cm_n4(n, k_m, m, &c),
        Lemma::N4Resonant => cm_n4_resonant(n, k_m, m, &c),
    }?;
    Ok(b.c_m)
}

/// Point `u ∈ [0, 1]` of the geometric range `[a, b]`.
fn log_point((a, b): (f64, f64), u: f64) -> f64 {
    a * (b / a).powf(u)
}

pub(crate) fn grid_for(d: usize, radius: f64, kappa: f64, radial: bool) -> Result<Grid> {
    let resolve = if kappa > 0.0 { 0.05 / kappa } else { f64::INFINITY };
    if radial {
        return Grid::radial_covering(d, radius, resolve.min(radius / 256.0).max(radius / MAX_NODES_1D as f64));
    }
    let (base, cap) = if d == 1 { (128.0, MAX_NODES_1D) } else { (64.0, MAX_NODES_2D) };
    let h = resolve.min(radius / base).max(2.0 * radius / (cap - 2) as f64);
    Grid::covering(d, radius, h)
}

/// Random smooth function supported in the ball of radius `radius`: a few
/// Gaussian bumps with random complex amplitudes under a cutoff vanishing on the boundary.
pub fn random_bumps(grid: Grid, radius: f64, rng: &mut ChaCha8Rng) -> Result<SampledFunction> {
    let d = grid.dim();
    let count = rng.gen_range(1..=4);
    let radial = grid.is_radial();
    let bumps: Vec<(Vec<f64>, f64, Complex64)> = (0..count)
        .map(|_| {
            let center: Vec<f64> = if radial {
                vec![rng.gen_range(0.0..radius)]
            } else {
                (0..d).map(|_| rng.gen_range(-radius..radius) / (d as f64).sqrt()).collect()
            };
            let width = rng.gen_range(0.05..0.6) * radius;
            let amp = Complex64::from_polar(rng.gen_range(0.2..1.0), rng.gen_range(0.0..2.0 * PI));
            (center, width, amp)
        })
        .collect();
    SampledFunction::from_fn(
        grid,
        |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            let cut = (1.0 - r2 / (radius * radius)).max(0.0).powi(2);
            let mut s = Complex64::new(0.0, 0.0);
            for (c, w, a) in &bumps {
                let dist2: f64 = x.iter().zip(c).map(|(x, c)| (x - c).powi(2)).sum();
                s += a * (-dist2 / (2.0 * w * w)).exp();
            }
            s * cut
        },
        |x| x.iter().map(|v| v * v).sum::<f64>() < radius * radius,
    )
}

fn masked(u: SampledFunction) -> SampledFunction {
    let zero = Complex64::new(0.0, 0.0);
    let vals = u.values.iter().zip(&u.mask).map(|(v, m)| if *m { *v } else { zero }).collect();
    u.with_values(vals)
}

/// Largest `‖1_I(g*f)‖/‖f‖` seen along power iteration from `f`.
pub fn power_ratio(plan: &ConvolutionPlan, f: &SampledFunction, steps: usize) -> Result<f64> {
    let mut f = masked(f.clone());
    let mut best: f64 = 0.0;
    for _ in 0..steps.max(1) {
        let nf = l2_norm(&f);
        if nf == 0.0 {
            break;
        }
        let u = masked(plan.apply(&f)?);
        best = best.max(l2_norm(&u) / nf);
        // the kernel is even, so the adjoint is the conjugated operator
        let conj = u.with_values(u.values.iter().map(|v| v.conj()).collect());
        let w = masked(plan.apply(&conj)?);
        let nw = l2_norm(&w);
        if nw == 0.0 {
            break;
        }
        f = w.with_values(w.values.iter().map(|v| v.conj() / nw).collect());
    }
    Ok(best)
}

/// One observation per trial: `(|k_m|, support radius, ratio ÷ shape)`.
pub fn calibration_trials(lemma: Lemma, n: usize, trials: usize, seed: u64) -> Result<Vec<(f64, f64, f64)>> {
    let plan = plan_for(lemma, n)?;
    let d = n - 1;
    let unit_radius = (1.0 / unit_ball_volume(d)).powf(1.0 / d as f64);
    let stream = seed ^ ((lemma as u64 + 1) << 40) ^ ((n as u64) << 32);
    let mut rng = ChaCha8Rng::seed_from_u64(stream);
    let mut out = Vec::with_capacity(trials);
    let classes = plan.classes.len();
    let per_class = trials.div_ceil(classes);
    for i in 0..trials {
        let class = plan.classes[i % classes];
        let u = if per_class > 1 { (i / classes) as f64 / (per_class - 1) as f64 } else { 0.5 };
        let rho = unit_radius * log_point(plan.scale, u);
        let t = log_point(plan.t, u);
        let kappa = if class == ModeClass::Resonant { 0.0 } else { t / rho };
        let k_m = ModeWavenumber::with_class(class, kappa);
        let inner = log_point(plan.inner, u);
        let support_radius = rho / inner.sqrt();
        // the log kernel is normalized by ρ, the support may be a smaller disk
        let kernel_rho = (n == 3 && class == ModeClass::Resonant).then_some(rho);
        let lemma_support = SupportDescriptor::Ball {
            center: vec![0.0; d],
            radius: rho,
            measure: unit_ball_volume(d) * support_radius.powi(d as i32),
        };
        let s = shape(lemma, n, &k_m, &lemma_support)?;
        let grid = grid_for(d, support_radius, kappa, plan.radial)?;
        let kernel = GreenKernel::new(n, k_m, kernel_rho)?;
        let conv = ConvolutionPlan::new(grid, kernel)?;
        let f = random_bumps(grid, support_radius, &mut rng)?;
        let ratio = power_ratio(&conv, &f, POWER_STEPS)?;
        out.push((kappa, support_radius, ratio / s));
    }
    Ok(out)
}

/// `1.1 × max` of the observed ratio over the lemma's shape; deterministic given `seed`.
pub fn calibrate_constant(lemma: Lemma, n: usize, trials: usize, seed: u64) -> Result<f64> {
    let obs = calibration_trials(lemma, n, trials, seed)?;
    let worst = obs.iter().map(|o| o.2).fold(0.0, f64::max);
    if !(worst > 0.0 && worst.is_finite()) {
        return Err(Error::QuadratureFailure(format!("calibration of {} produced {worst}", lemma.name())));
    }
    Ok(SAFETY_FACTOR * worst)
}

/// Lemmas with a generic constant in dimension `n`, with their slot in [`GenericConstants`].
pub fn generic_lemmas(n: usize) -> Vec<Lemma> {
    match n {
        2 => vec![Lemma::Agmon],
        3 => vec![Lemma::Agmon, Lemma::N3Lorentz, Lemma::N3SmallGap],
        _ => vec![Lemma::Agmon, Lemma::N4, Lemma::N4Resonant],
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibratedRow {
    pub n: usize,
    pub constants: GenericConstants,
}

pub fn calibrated_constants(n: usize, trials: usize, seed: u64) -> Result<GenericConstants> {
    let mut c = GenericConstants::default();
    for lemma in generic_lemmas(n) {
        let v = Some(Constant::calibrated(calibrate_constant(lemma, n, trials, seed)?));
        match lemma {
            Lemma::Agmon => c.agmon = v,
            Lemma::N3Lorentz => c.lorentz = v,
            Lemma::N3SmallGap => c.small_gap = v,
            Lemma::N4 => c.young = v,
            Lemma::N4Resonant => c.resonant_power = v,
            _ => unreachable!("explicit lemmas carry no generic constant"),
        }
    }
    Ok(c)
}

/// Constants for `2 ≤ n ≤ 8`.
pub fn default_table(trials: usize, seed: u64) -> Result<Vec<CalibratedRow>> {
    (2..=8).map(|n| Ok(CalibratedRow { n, constants: calibrated_constants(n, trials, seed)? })).collect()
}
