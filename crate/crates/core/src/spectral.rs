//! Slab problems, modal wavenumbers, spectral gaps and mode projection.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::composite_gauss;
use crate::special::unit_ball_volume;

pub const DEFAULT_RESONANCE_TOLERANCE: f64 = 1e-9;

/// The set `I ⊂ ℝ^{n-1}` carrying the potential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SupportDescriptor {
    /// `I ⊆ B_ρ(x₀)` with `|I| = measure`.
    Ball { center: Vec<f64>, radius: f64, measure: f64 },
    /// Only `|I|` is known.
    MeasureOnly { measure: f64 },
}

impl SupportDescriptor {
    /// Full ball `B_ρ(0)` in `ℝ^d`.
    pub fn ball(d: usize, radius: f64) -> Self {
        Self::Ball { center: vec![0.0; d], radius, measure: unit_ball_volume(d) * radius.powi(d as i32) }
    }

    pub fn measure(&self) -> f64 {
        match self {
            Self::Ball { measure, .. } | Self::MeasureOnly { measure } => *measure,
        }
    }

    pub fn radius(&self) -> Option<f64> {
        match self {
            Self::Ball { radius, .. } => Some(*radius),
            Self::MeasureOnly { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlabProblem {
    pub n: usize,
    pub k: f64,
    pub support: SupportDescriptor,
    pub resonance_tolerance: f64,
}

impl SlabProblem {
    pub fn new(n: usize, k: f64, support: SupportDescriptor) -> Result<Self> {
        Self::with_tolerance(n, k, support, DEFAULT_RESONANCE_TOLERANCE)
    }

    pub fn with_tolerance(n: usize, k: f64, support: SupportDescriptor, resonance_tolerance: f64) -> Result<Self> {
        let p = Self { n, k, support, resonance_tolerance };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidConfig(format!("n must be at least 2, got {}", self.n)));
        }
        if !self.k.is_finite() {
            return Err(Error::InvalidConfig("k must be finite".into()));
        }
        if !(self.resonance_tolerance > 0.0) {
            return Err(Error::InvalidConfig("resonance_tolerance must be positive".into()));
        }
        let measure = self.support.measure();
        if !(measure.is_finite() && measure > 0.0) {
            return Err(Error::InvalidConfig(format!("support measure must be finite and positive, got {measure}")));
        }
        if let SupportDescriptor::Ball { center, radius, measure } = &self.support {
            let d = self.n - 1;
            if center.len() != d {
                return Err(Error::InvalidConfig(format!("center has {} coordinates, expected {d}", center.len())));
            }
            if !(*radius > 0.0 && radius.is_finite()) {
                return Err(Error::InvalidConfig(format!("radius must be positive, got {radius}")));
            }
            let vol = unit_ball_volume(d) * radius.powi(d as i32);
            if *measure > vol * (1.0 + 1e-12) {
                return Err(Error::InvalidConfig(format!("measure {measure} exceeds the ball volume {vol}")));
            }
        }
        Ok(())
    }

    /// Dimension of the cross-section, `n - 1`.
    pub fn cross_dim(&self) -> usize {
        self.n - 1
    }

    pub fn mode(&self, m: u32) -> ModeWavenumber {
        mode_wavenumber(self.k, m, self.resonance_tolerance)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModeClass {
    Propagating,
    Evanescent,
    Resonant,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeWavenumber {
    pub m: u32,
    pub value: Complex64,
    pub class: ModeClass,
}

impl ModeWavenumber {
    /// `|k_m|`.
    pub fn abs(&self) -> f64 {
        self.value.norm()
    }

    /// A bare wavenumber not tied to a slab mode (`m = 0`).
    pub fn evanescent(kappa: f64) -> Self {
        Self { m: 0, value: Complex64::new(0.0, kappa), class: ModeClass::Evanescent }
    }

    pub fn propagating(kappa: f64) -> Self {
        Self { m: 0, value: Complex64::new(kappa, 0.0), class: ModeClass::Propagating }
    }

    pub fn resonant() -> Self {
        Self { m: 0, value: Complex64::new(0.0, 0.0), class: ModeClass::Resonant }
    }

    pub fn with_class(class: ModeClass, kappa: f64) -> Self {
        match class {
            ModeClass::Propagating => Self::propagating(kappa),
            ModeClass::Evanescent => Self::evanescent(kappa),
            ModeClass::Resonant => Self::resonant(),
        }
    }
}

fn eigenvalue(m: u32) -> f64 {
    let m = m as f64;
    m * m * PI * PI
}

fn is_resonant(k: f64, m: u32, eps: f64) -> bool {
    (eigenvalue(m) - k).abs() <= eps * k.abs().max(1.0)
}

/// `k_m = √(k − m²π²)`, real positive, positive imaginary, or zero inside the resonance band.
pub fn mode_wavenumber(k: f64, m: u32, eps: f64) -> ModeWavenumber {
    let diff = k - eigenvalue(m);
    if is_resonant(k, m, eps) {
        ModeWavenumber { m, value: Complex64::new(0.0, 0.0), class: ModeClass::Resonant }
    } else if diff > 0.0 {
        ModeWavenumber { m, value: Complex64::new(diff.sqrt(), 0.0), class: ModeClass::Propagating }
    } else {
        ModeWavenumber { m, value: Complex64::new(0.0, (-diff).sqrt()), class: ModeClass::Evanescent }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralGaps {
    pub delta_plus: f64,
    /// `+∞` when `k < π²`.
    pub delta_minus: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resonance {
    InK(u32),
    NotInK,
}

/// Largest `m` with `m²π² ≤ k`, or 0.
fn floor_index(k: f64) -> u32 {
    if k <= 0.0 {
        return 0;
    }
    let mut m = (k.sqrt() / PI).floor() as u32;
    while eigenvalue(m + 1) <= k {
        m += 1;
    }
    while m > 0 && eigenvalue(m) > k {
        m -= 1;
    }
    m
}

pub fn classify_k(k: f64, eps: f64) -> Resonance {
    if k <= 0.0 {
        return Resonance::NotInK;
    }
    let m = floor_index(k);
    for c in [m, m + 1] {
        if c >= 1 && is_resonant(k, c, eps) {
            return Resonance::InK(c);
        }
    }
    Resonance::NotInK
}

/// Index of the first evanescent mode (`m²π² > k`, not resonant).
pub fn first_evanescent(k: f64, eps: f64) -> u32 {
    let mut m = floor_index(k) + 1;
    while mode_wavenumber(k, m, eps).class != ModeClass::Evanescent {
        m += 1;
    }
    m
}

pub fn spectral_gaps(k: f64, eps: f64) -> Result<SpectralGaps> {
    if let Resonance::InK(m) = classify_k(k, eps) {
        return Err(Error::ResonantInput { k, m });
    }
    let below = floor_index(k);
    let delta_plus = mode_wavenumber(k, below + 1, eps).abs();
    let delta_minus = if below == 0 { f64::INFINITY } else { mode_wavenumber(k, below, eps).abs() };
    Ok(SpectralGaps { delta_plus, delta_minus, delta: delta_plus.min(delta_minus) })
}

/// Samples of a slab function on `X × Y`, where `Y` is a Gauss rule on `(0, 1)`.
#[derive(Debug, Clone)]
pub struct SlabSamples {
    pub x: Vec<Vec<f64>>,
    pub y: Vec<f64>,
    pub y_weights: Vec<f64>,
    /// `values[i][j] = u(x[i], y[j])`.
    pub values: Vec<Vec<Complex64>>,
}

impl SlabSamples {
    /// Samples `u` on the given `x` nodes and a composite Gauss–Legendre rule in `y`.
    pub fn sample<F>(x: Vec<Vec<f64>>, y_panels: usize, y_order: usize, u: F) -> Self
    where
        F: Fn(&[f64], f64) -> Complex64,
    {
        let (y, y_weights) = composite_gauss(0.0, 1.0, y_panels, y_order);
        let values = x.iter().map(|xi| y.iter().map(|&yj| u(xi, yj)).collect()).collect();
        Self { x, y, y_weights, values }
    }
}

/// `u_m(x) = 2∫₀¹ u(x, y) sin(mπy) dy` at every `x` node.
pub fn mode_project(u: &SlabSamples, m: u32) -> Result<Vec<Complex64>> {
    if m == 0 {
        return Err(Error::DomainError("mode index starts at 1".into()));
    }
    let need = 8 * m as usize;
    if u.y.len() < need {
        return Err(Error::GridTooCoarse(format!("{} y nodes, need at least {need} for mode {m}", u.y.len())));
    }
    let basis: Vec<f64> = u.y.iter().zip(&u.y_weights).map(|(y, w)| 2.0 * w * (m as f64 * PI * y).sin()).collect();
    Ok(u.values.iter().map(|row| row.iter().zip(&basis).map(|(v, b)| v * b).sum()).collect())
}

/// `V = k(n² − 1)`.
pub fn refraction_to_potential(k: f64, index: &[f64]) -> Result<Vec<f64>> {
    if !(k > 0.0) {
        return Err(Error::NonpositiveK(k));
    }
    Ok(index.iter().map(|n| k * (n * n - 1.0)).collect())
}

/// Inverse of [`refraction_to_potential`]: `n = √(1 + V/k)`.
pub fn potential_to_refraction(k: f64, potential: &[f64]) -> Result<Vec<f64>> {
    if !(k > 0.0) {
        return Err(Error::NonpositiveK(k));
    }
    potential
        .iter()
        .map(|v| {
            let q = 1.0 + v / k;
            if q < 0.0 {
                Err(Error::DomainError(format!("V = {v} gives a negative n² at k = {k}")))
            } else {
                Ok(q.sqrt())
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const EPS: f64 = DEFAULT_RESONANCE_TOLERANCE;
    const PI2: f64 = PI * PI;

    #[test]
    fn wavenumber_examples() {
        let a = mode_wavenumber(2.0 * PI2, 1, EPS);
        assert_eq!(a.class, ModeClass::Propagating);
        assert!((a.value.re - PI).abs() < 1e-14);
        let b = mode_wavenumber(2.0 * PI2, 2, EPS);
        assert_eq!(b.class, ModeClass::Evanescent);
        assert!((b.value.im - 2f64.sqrt() * PI).abs() < 1e-13);
        let c = mode_wavenumber(4.0 * PI2, 2, EPS);
        assert_eq!(c.class, ModeClass::Resonant);
        assert_eq!(c.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn modulus_squared_matches_gap() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let k = rng.gen_range(-50.0..2000.0);
            let m = rng.gen_range(1..30);
            let w = mode_wavenumber(k, m, EPS);
            if w.class != ModeClass::Resonant {
                let want = (eigenvalue(m) - k).abs();
                assert!((w.abs().powi(2) - want).abs() <= 1e-12 * want);
            }
        }
    }

    #[test]
    fn monotone_in_m() {
        let k = 37.3 * PI2;
        let abs: Vec<f64> = (1..20).map(|m| mode_wavenumber(k, m, EPS).abs()).collect();
        for m in 1..abs.len() {
            let (prev, cur) = (abs[m - 1], abs[m]);
            if eigenvalue(m as u32 + 1) > k && eigenvalue(m as u32) > k {
                assert!(cur > prev);
            } else if eigenvalue(m as u32 + 1) < k {
                assert!(cur < prev);
            }
        }
    }

    #[test]
    fn gap_examples() {
        let g = spectral_gaps(2.0 * PI2, EPS).unwrap();
        assert!((g.delta_plus - 2f64.sqrt() * PI).abs() < 1e-13);
        assert!((g.delta_minus - PI).abs() < 1e-13);
        assert_eq!(g.delta, g.delta_minus);
        let g = spectral_gaps(0.5 * PI2, EPS).unwrap();
        assert!((g.delta_plus - (PI2 / 2.0).sqrt()).abs() < 1e-13);
        assert!(g.delta_minus.is_infinite());
        let g = spectral_gaps(9.5 * PI2, EPS).unwrap();
        assert!((g.delta_minus - 0.5f64.sqrt() * PI).abs() < 1e-12);
        assert!((g.delta_plus - 6.5f64.sqrt() * PI).abs() < 1e-12);
        assert!(matches!(spectral_gaps(9.0 * PI2, EPS), Err(Error::ResonantInput { m: 3, .. })));
    }

    #[test]
    fn gaps_agree_with_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let k = rng.gen_range(-20.0..3000.0);
            let Ok(g) = spectral_gaps(k, EPS) else { continue };
            let modes: Vec<_> = (1..100).map(|m| mode_wavenumber(k, m, EPS)).collect();
            let plus = modes.iter().filter(|w| w.class == ModeClass::Evanescent).map(|w| w.abs()).fold(f64::INFINITY, f64::min);
            let minus = modes.iter().filter(|w| w.class == ModeClass::Propagating).map(|w| w.abs()).fold(f64::INFINITY, f64::min);
            assert_eq!(g.delta_plus, plus);
            assert_eq!(g.delta_minus, minus);
            assert_eq!(g.delta_minus.is_infinite(), k < PI2);
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_k(9.0 * PI2, EPS), Resonance::InK(3));
        assert_eq!(classify_k(10.0, EPS), Resonance::NotInK);
        assert_eq!(classify_k(-5.0, EPS), Resonance::NotInK);
        assert_eq!(classify_k(PI2 * (1.0 + 1e-12), EPS), Resonance::InK(1));
    }

    fn grid() -> Vec<Vec<f64>> {
        (0..11).map(|i| vec![-1.0 + 0.2 * i as f64]).collect()
    }

    #[test]
    fn projection_orthogonality() {
        let phi = |x: f64| (-x * x).exp();
        let s = SlabSamples::sample(grid(), 4, 8, |x, y| Complex64::new(phi(x[0]) * (2.0 * PI * y).sin(), 0.0));
        let u2 = mode_project(&s, 2).unwrap();
        let u1 = mode_project(&s, 1).unwrap();
        for (i, x) in s.x.iter().enumerate() {
            assert!((u2[i].re - phi(x[0])).abs() < 1e-13);
            assert!(u1[i].norm() < 1e-13);
        }
    }

    #[test]
    fn projection_picks_coefficient() {
        let s = SlabSamples::sample(grid(), 4, 8, |_, y| Complex64::new((PI * y).sin() + 3.0 * (3.0 * PI * y).sin(), 0.0));
        for v in mode_project(&s, 3).unwrap() {
            assert!((v.re - 3.0).abs() < 1e-13);
        }
        let coarse = SlabSamples::sample(grid(), 2, 8, |_, _| Complex64::new(1.0, 0.0));
        assert!(matches!(mode_project(&coarse, 3), Err(Error::GridTooCoarse(_))));
    }

    #[test]
    fn project_then_resum() {
        let coef = [0.5, -1.25, 0.0, 2.0];
        let u = |x: &[f64], y: f64| {
            Complex64::new(coef.iter().enumerate().map(|(j, c)| c * (1.0 + x[0]) * ((j as f64 + 1.0) * PI * y).sin()).sum(), 0.0)
        };
        let s = SlabSamples::sample(grid(), 6, 8, u);
        let modes: Vec<_> = (1..=4).map(|m| mode_project(&s, m).unwrap()).collect();
        for (i, x) in s.x.iter().enumerate() {
            for &y in &[0.13, 0.5, 0.77] {
                let back: f64 = (0..4).map(|j| modes[j][i].re * ((j as f64 + 1.0) * PI * y).sin()).sum();
                assert!((back - u(x, y).re).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn refraction_round_trip() {
        assert_eq!(refraction_to_potential(3.0, &[1.0, 1.0]).unwrap(), vec![0.0, 0.0]);
        let v = refraction_to_potential(4.0, &[2f64.sqrt()]).unwrap();
        assert!((v[0] - 4.0).abs() < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pot: Vec<f64> = (0..100).map(|_| rng.gen_range(-0.9..5.0)).collect();
        let back = refraction_to_potential(1.0, &potential_to_refraction(1.0, &pot).unwrap()).unwrap();
        for (a, b) in pot.iter().zip(&back) {
            assert!((a - b).abs() < 1e-13);
        }
        assert!(matches!(refraction_to_potential(0.0, &[1.0]), Err(Error::NonpositiveK(_))));
    }

    #[test]
    fn problem_validation() {
        assert!(SlabProblem::new(1, 1.0, SupportDescriptor::MeasureOnly { measure: 1.0 }).is_err());
        assert!(SlabProblem::new(2, 1.0, SupportDescriptor::MeasureOnly { measure: 0.0 }).is_err());
        let too_big = SupportDescriptor::Ball { center: vec![0.0], radius: 1.0, measure: 2.5 };
        assert!(SlabProblem::new(2, 1.0, too_big).is_err());
        assert!(SlabProblem::new(3, 1.0, SupportDescriptor::ball(2, 1.0)).is_ok());
    }
}
