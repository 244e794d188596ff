//! Batches of randomized inequality checks, as run by the `verify` command.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use super::calibrate::{grid_for, random_bumps};
use super::grid::{Grid, SampledFunction};
use super::verify::{verify_hardy_littlewood, ModeVerifier, VerificationRow};
use crate::bounds::{aggregate, best_mode_bound, GenericConstants, Lemma, ModeBound};
use crate::error::{Error, Result};
use crate::spectral::{ModeClass, SlabProblem, SupportDescriptor};

/// `|k_m|` values of the built-in `n = 2` suite.
pub const N2_SUITE_KAPPAS: [f64; 4] = [0.2, 1.0, 3.0, 10.0];
/// Support measures of the built-in `n = 2` suite.
pub const N2_SUITE_MEASURES: [f64; 2] = [0.5, 2.0];

/// Problem whose mode `m` has the requested class and `|k_m| = kappa`, with `k > 0`.
pub fn problem_with_mode(n: usize, class: ModeClass, kappa: f64, support: SupportDescriptor) -> Result<(SlabProblem, u32)> {
    let (k, m) = match class {
        ModeClass::Propagating => (PI * PI + kappa * kappa, 1),
        ModeClass::Evanescent => {
            let m = (kappa / PI).floor() as u32 + 1;
            ((m as f64 * PI).powi(2) - kappa * kappa, m)
        }
        ModeClass::Resonant => (PI * PI, 1),
    };
    Ok((SlabProblem::new(n, k, support)?, m))
}

fn single(bound: &ModeBound, lemma: Lemma, c_m: f64, factor: f64) -> ModeBound {
    ModeBound { c_m: c_m * factor, source: Some(lemma), applicability: vec![(lemma, c_m * factor)], ..bound.clone() }
}

/// Every lemma applicable to mode `m`, each checked on `trials` random smooth `f`
/// supported in the ball of radius `radius`. `factor` scales each `c_m`.
pub fn mode_rows(
    problem: &SlabProblem,
    m: u32,
    constants: &GenericConstants,
    radius: f64,
    trials: usize,
    rng: &mut ChaCha8Rng,
    factor: f64,
) -> Result<Vec<VerificationRow>> {
    let best = best_mode_bound(problem, m, constants)?;
    let k_m = problem.mode(m);
    let d = problem.cross_dim();
    let grid = grid_for(d, radius, k_m.abs(), d >= 3)?;
    let mut rows = Vec::new();
    for &(lemma, c_m) in &best.applicability {
        let verifier = ModeVerifier::new(problem, m, grid, &single(&best, lemma, c_m, factor))?;
        for _ in 0..trials {
            let f = random_bumps(grid, radius, rng)?;
            rows.push(VerificationRow::new(lemma.name(), m, &verifier.check(&f)?));
        }
    }
    Ok(rows)
}

/// Built-in `n = 2` suite: `|k_m| ∈` [`N2_SUITE_KAPPAS`] in both classes, `|I| ∈`
/// [`N2_SUITE_MEASURES`], every explicit lemma that applies.
pub fn n2_suite(trials: usize, seed: u64, factor: f64) -> Result<Vec<VerificationRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for class in [ModeClass::Evanescent, ModeClass::Propagating] {
        for kappa in N2_SUITE_KAPPAS {
            for measure in N2_SUITE_MEASURES {
                let (problem, m) = problem_with_mode(2, class, kappa, SupportDescriptor::ball(1, measure / 2.0))?;
                let explicit = GenericConstants::default();
                rows.extend(mode_rows(&problem, m, &explicit, measure / 2.0, trials, &mut rng, factor)?);
            }
        }
    }
    Ok(rows)
}

/// Modes `1..=m_tail` of `problem` with every applicable lemma. The support is
/// modelled as a centred ball; a measure-only support uses the ball of that measure.
pub fn problem_suite(problem: &SlabProblem, constants: &GenericConstants, trials: usize, seed: u64, factor: f64) -> Result<Vec<VerificationRow>> {
    let cert = aggregate(problem, constants)?;
    let d = problem.cross_dim();
    let radius = match problem.support.radius() {
        Some(r) => r,
        None => (problem.support.measure() / crate::special::unit_ball_volume(d)).powf(1.0 / d as f64),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for b in &cert.modes {
        rows.extend(mode_rows(problem, b.m, constants, radius, trials, &mut rng, factor)?);
    }
    Ok(rows)
}

/// Random nonnegative sparse samples; a mix of indicator-like and graded values.
pub fn random_nonnegative(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let p = rng.gen_range(0.05..0.9);
    let flat = rng.gen_bool(0.3);
    (0..len).map(|_| if rng.gen_bool(p) { if flat { 1.0 } else { rng.gen() } } else { 0.0 }).collect()
}

/// `count` random triples on a `nodes^dim` unit-spacing grid.
pub fn hardy_littlewood_rows(dim: usize, nodes: usize, count: usize, seed: u64) -> Result<Vec<VerificationRow>> {
    let grid = Grid::cartesian(dim, nodes, 1.0)?;
    let len = grid.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(count);
    for _ in 0..count {
        let mut draw = || SampledFunction::from_real(grid, &random_nonnegative(&mut rng, len));
        let (h, f, g) = (draw()?, draw()?, draw()?);
        rows.push(VerificationRow::new("hardy-littlewood", 0, &verify_hardy_littlewood(&h, &f, &g)?));
    }
    Ok(rows)
}

pub fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_have_requested_class() {
        for class in [ModeClass::Evanescent, ModeClass::Propagating] {
            for kappa in [0.2, 10.0] {
                let (p, m) = problem_with_mode(2, class, kappa, SupportDescriptor::ball(1, 1.0)).unwrap();
                let k_m = p.mode(m);
                assert_eq!(k_m.class, class);
                assert!((k_m.abs() - kappa).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn n2_suite_passes_and_stress_fails() {
        let rows = n2_suite(3, 5, 1.0).unwrap();
        assert_eq!(rows.len(), 3 * 24);
        assert!(rows.iter().all(|r| r.pass), "{:?}", rows.iter().find(|r| !r.pass));
        assert!(n2_suite(3, 5, 0.5).unwrap().iter().any(|r| !r.pass));
    }

    #[test]
    fn problem_suite_covers_listed_modes() {
        let p = SlabProblem::new(2, 2.0 * PI * PI, SupportDescriptor::ball(1, 0.5)).unwrap();
        let rows = problem_suite(&p, &GenericConstants::defaults(2).unwrap(), 2, 1, 1.0).unwrap();
        assert!(rows.iter().all(|r| r.pass));
        assert!(rows.iter().any(|r| r.m == 1) && rows.iter().any(|r| r.m == 2));
        assert!(check_trials(0).is_err());
    }
}
