//! Kernel tails patched inside a ball: `u_m = g_m` outside, `A − Br²` inside.

use num_complex::Complex64;

use super::patch::{admissible_phase, parabolic_patch_complex, parabolic_patch_real, PatchResult};
use super::{max_potential, ConstructedSolution, Construction, Profile, TightnessReport};
use crate::bounds::{best_mode_bound, GenericConstants};
use crate::error::{Error, Result};
use crate::kernel::GreenKernel;
use crate::special::{bessel, BesselKind};
use crate::spectral::{ModeClass, ModeWavenumber, SlabProblem, SupportDescriptor};

fn k_m2(k_m: &ModeWavenumber) -> f64 {
    match k_m.class {
        ModeClass::Evanescent => -k_m.abs().powi(2),
        _ => k_m.abs().powi(2),
    }
}

/// Patched profile: `outside(r)` for `r ≥ radius`, `patch` inside; `V = f/u`.
fn patched<'a, O>(n: usize, k_m: &ModeWavenumber, patch: PatchResult, outside: O, extent: f64) -> Result<(Profile<'a>, f64)>
where
    O: Fn(f64) -> Result<Complex64> + 'a,
{
    let radius = patch.radius;
    let k2 = k_m2(k_m);
    // fail early rather than inside a boxed closure
    outside(extent)?;
    let outside = move |r: f64| outside(r).expect("kernel evaluated on its domain");
    let u = move |r: f64| if r <= radius { patch.value(r) } else { outside(r) };
    let f = move |r: f64| if r <= radius { -patch.laplacian() - patch.value(r) * k2 } else { Complex64::new(0.0, 0.0) };
    let profile = Profile { d: n - 1, k_m2: k2, u: Box::new(u), f: Box::new(f), interfaces: vec![radius], extent };
    Ok((profile, radius))
}

fn finish(example: &str, n: usize, m: u32, k_m: ModeWavenumber, profile: &Profile, radius: f64, notes: Vec<String>) -> ConstructedSolution {
    let samples = profile.sample();
    let residual = profile.residual(&samples);
    ConstructedSolution {
        example: example.into(),
        n,
        m,
        k_m,
        support_radius: radius,
        v_norm: Some(max_potential(&samples, -1.0)),
        v_outside: max_potential(&samples, radius),
        norm_ratio: None,
        residual,
        slab_residual: None,
        samples,
        notes,
    }
}

/// `u_m = g_m` outside the unit ball, parabolic inside: a real patch for evanescent
/// modes, a complex one (after a unit rotation of `g_m`) for propagating modes.
/// The report compares `max |V_m + k_m²|` with the patch bound.
pub fn construct_dlarge(n: usize, k_m: ModeWavenumber) -> Result<Construction> {
    if k_m.class == ModeClass::Resonant {
        return Err(Error::NotApplicable("dlarge needs a nonresonant mode".into()));
    }
    let kernel = GreenKernel::new(n, k_m, None)?;
    let (g, dg) = (kernel.eval(1.0)?, kernel.derivative(1.0)?);
    let (patch, phase) = match k_m.class {
        ModeClass::Evanescent => (parabolic_patch_real(g.re, dg.re, n, 1.0)?, Complex64::new(1.0, 0.0)),
        _ => {
            let c = admissible_phase(g, dg)?;
            (parabolic_patch_complex(c * g, c * dg, n, 1.0)?, c)
        }
    };
    let extent = 1.0 + 3.0 / k_m.abs().max(1.0);
    let (profile, radius) = patched(n, &k_m, patch, move |r| Ok(phase * kernel.eval(r)?), extent)?;
    let k2 = k_m2(&k_m);
    let samples = profile.sample();
    let shifted = samples.iter().filter(|s| s.r <= radius).map(|s| (s.f / s.u + k2).norm()).fold(0.0, f64::max);
    let solution = finish(
        "dlarge",
        n,
        1,
        k_m,
        &profile,
        radius,
        vec![format!("|g'(1)/g(1)| = {:.6}", (dg / g).norm()), format!("observed c_n = {:.6}", shifted / (k_m.abs() + 1.0))],
    );
    let report = TightnessReport::norm_ratio(
        "dlarge",
        k_m.abs(),
        patch.bound,
        shifted,
        format!("{:?} n = {n}: max |V + k_m^2| against (n-1)|psi'(1)|/Re psi(1)", k_m.class),
    );
    Ok(Construction { solution, report })
}

/// The evanescent mode `m` with `|k_m| = δ₊`: `k = m²π² − δ₊²` for the first `m` with
/// `m²π² > δ₊²`, support the unit ball. Reports `1/c_m` against `‖V_m‖_∞`.
pub fn construct_evanescent_sharp(n: usize, delta: f64, constants: &GenericConstants) -> Result<Construction> {
    if !(delta > 0.0) {
        return Err(Error::InvalidConfig(format!("delta must be positive, got {delta}")));
    }
    let m = (delta / std::f64::consts::PI).floor() as u32 + 1;
    let k = (m as f64 * std::f64::consts::PI).powi(2) - delta * delta;
    let problem = SlabProblem::new(n, k, SupportDescriptor::ball(n - 1, 1.0))?;
    let k_m = problem.mode(m);
    let mut built = construct_dlarge(n, k_m)?;
    let bound = best_mode_bound(&problem, m, constants)?;
    let v = built.solution.v_norm.unwrap_or(f64::NAN);
    built.solution.example = "evanescent-sharp".into();
    built.solution.m = m;
    built.solution.notes.push(format!("|V|/delta^2 = {:.9}, |V|/delta = {:.6}", v / (delta * delta), v / delta));
    built.report = TightnessReport::potential(
        "evanescent-sharp",
        delta,
        1.0 / bound.c_m,
        v,
        format!("n = {n}, m = {m}, k = {k:.6}, bound from {}", bound.source.map_or("none", |l| l.name())),
    );
    Ok(built)
}

/// `n = 3`, propagating `k_m = δ`: `u_m = −Y₀(δr) + iJ₀(δr)` for `r ≥ 1/2`, patched inside.
pub fn construct_n3_log(delta: f64, constants: &GenericConstants) -> Result<Construction> {
    if !(delta > 0.0 && delta <= 0.05) {
        return Err(Error::InvalidConfig(format!("n3-log needs 0 < delta <= 0.05, got {delta}")));
    }
    const RADIUS: f64 = 0.5;
    let tail = move |r: f64| -> Result<Complex64> {
        Ok(Complex64::new(-bessel(BesselKind::Y0, delta * r)?, bessel(BesselKind::J0, delta * r)?))
    };
    let value = tail(RADIUS)?;
    let slope = Complex64::new(delta * bessel(BesselKind::Y1, delta * RADIUS)?, -delta * bessel(BesselKind::J1, delta * RADIUS)?);
    let patch = parabolic_patch_complex(value, slope, 3, RADIUS)?;
    let k_m = ModeWavenumber::propagating(delta);
    let (profile, radius) = patched(3, &k_m, patch, tail, 3.0)?;
    let log = delta.ln().abs();
    let mut solution = finish(
        "n3-log",
        3,
        1,
        k_m,
        &profile,
        radius,
        vec![
            format!("Re u(0.5)/|ln delta| = {:.6}", value.re / log),
            format!("|Im u'(0.5)|/delta = {:.6}", slope.im.abs() / delta),
            format!("patch bound * |ln(delta/2)| = {:.6}", patch.bound * (delta / 2.0).ln().abs()),
        ],
    );
    let v = solution.v_norm.unwrap_or(f64::NAN);
    solution.notes.push(format!("|V| * |ln delta| = {:.6}", v * log));
    let problem = SlabProblem::new(3, std::f64::consts::PI.powi(2) + delta * delta, SupportDescriptor::ball(2, RADIUS))?;
    let bound = best_mode_bound(&problem, 1, constants)?;
    let report = TightnessReport::potential(
        "n3-log",
        delta,
        1.0 / bound.c_m,
        v,
        format!("bound from {}", bound.source.map_or("none", |l| l.name())),
    );
    Ok(Construction { solution, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sharpness::MODE_RESIDUAL_TOLERANCE;

    #[test]
    fn n2_kernel_tail_gives_exact_bound() {
        let c = construct_dlarge(2, ModeWavenumber::evanescent(5.0)).unwrap();
        assert!((c.report.bound - 5.0).abs() < 1e-12);
        assert!((c.report.achieved - 5.0).abs() < 1e-9, "{:?}", c.report);
        assert!(c.solution.residual < MODE_RESIDUAL_TOLERANCE, "{}", c.solution.residual);
        assert_eq!(c.solution.v_outside, 0.0);
    }

    #[test]
    fn yukawa_tail_ratio_three() {
        let c = construct_dlarge(4, ModeWavenumber::evanescent(2.0)).unwrap();
        assert!((c.report.bound - 9.0).abs() < 1e-9, "{:?}", c.report);
        assert!(c.report.ratio <= 1.0 + 1e-12);
        assert!(c.solution.residual < MODE_RESIDUAL_TOLERANCE);
    }

    #[test]
    fn propagating_tails_respect_patch_bound() {
        for n in [2, 3, 4] {
            let c = construct_dlarge(n, ModeWavenumber::propagating(1.0)).unwrap();
            assert!(c.report.ratio <= 1.0 + 1e-12 && c.report.ratio > 0.0, "{:?}", c.report);
            assert!(c.solution.residual < MODE_RESIDUAL_TOLERANCE, "n = {n}: {}", c.solution.residual);
            assert!(c.solution.v_outside == 0.0);
        }
    }

    #[test]
    fn evanescent_bracket_n2() {
        let c = construct_evanescent_sharp(2, 50.0, &GenericConstants::defaults(2).unwrap()).unwrap();
        let q = c.solution.v_norm.unwrap() / 2500.0;
        assert!((1.0..=1.02 + 1e-12).contains(&q), "{q}");
        assert!(c.report.ratio <= 1.0);
    }

    #[test]
    fn n3_log_patch() {
        let c = construct_n3_log(0.01, &GenericConstants::defaults(3).unwrap()).unwrap();
        assert!(c.solution.residual < MODE_RESIDUAL_TOLERANCE, "{}", c.solution.residual);
        assert!(c.report.ratio > 0.0 && c.report.ratio <= 1.0, "{:?}", c.report);
        assert!(c.solution.v_outside == 0.0);
    }
}
