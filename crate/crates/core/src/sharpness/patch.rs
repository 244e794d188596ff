//! Parabolic extension `A − B r²` of a radial function inside the ball of radius `R`,
//! matching value and slope at `R`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const PATCH_SAMPLES: usize = 1001;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PatchResult {
    pub radius: f64,
    /// Dimension of the slab; the patch lives in `ℝ^{n−1}`.
    pub n: usize,
    pub a: Complex64,
    pub b: Complex64,
    /// Claimed bound on `|V + k_m²|` inside the ball.
    pub bound: f64,
    /// Largest `|V + k_m²|` seen on a uniform radial sample of the ball.
    pub sampled_max: f64,
}

impl PatchResult {
    pub fn value(&self, r: f64) -> Complex64 {
        self.a - self.b * (r * r)
    }

    pub fn slope(&self, r: f64) -> Complex64 {
        -self.b * (2.0 * r)
    }

    /// `Δ_x` of the patch, constant in `r`.
    pub fn laplacian(&self) -> Complex64 {
        -self.b * (2.0 * (self.n as f64 - 1.0))
    }

    /// `V + k_m² = −Δψ/ψ`.
    pub fn shifted_potential(&self, r: f64) -> Complex64 {
        -self.laplacian() / self.value(r)
    }

    fn sample(mut self) -> Self {
        self.sampled_max = (0..PATCH_SAMPLES)
            .map(|i| self.shifted_potential(self.radius * i as f64 / (PATCH_SAMPLES - 1) as f64).norm())
            .fold(0.0, f64::max);
        self
    }
}

fn solve(value: Complex64, slope: Complex64, radius: f64) -> (Complex64, Complex64) {
    let b = -slope / (2.0 * radius);
    (value + b * (radius * radius), b)
}

fn check(n: usize, radius: f64) -> Result<()> {
    if n < 2 || !(radius > 0.0) {
        return Err(Error::InvalidBoundary(format!("patch needs n ≥ 2 and a positive radius (n = {n}, R = {radius})")));
    }
    Ok(())
}

/// `v(r) = a − br²` for real boundary data with `v(R) > 0`, `v'(R) ≤ 0`;
/// bound `(n−1)|v'(R)|/(R v(R))`.
pub fn parabolic_patch_real(value: f64, slope: f64, n: usize, radius: f64) -> Result<PatchResult> {
    check(n, radius)?;
    if !(value > 0.0) || slope > 0.0 {
        return Err(Error::InvalidBoundary(format!("need v(R) > 0 and v'(R) ≤ 0, got ({value}, {slope})")));
    }
    let (a, b) = solve(Complex64::new(value, 0.0), Complex64::new(slope, 0.0), radius);
    let bound = (n as f64 - 1.0) * slope.abs() / (radius * value);
    Ok(PatchResult { radius, n, a, b, bound, sampled_max: 0.0 }.sample())
}

/// `ψ(r) = A − Br²` for complex boundary data with `Re ψ(R) > 0`; needs `Re B ≥ 0`.
/// Bound `(n−1)|ψ'(R)|/(R Re ψ(R))`.
pub fn parabolic_patch_complex(value: Complex64, slope: Complex64, n: usize, radius: f64) -> Result<PatchResult> {
    check(n, radius)?;
    if !(value.re > 0.0) {
        return Err(Error::InvalidBoundary(format!("need Re ψ(R) > 0, got {value}")));
    }
    let (a, b) = solve(value, slope, radius);
    // Re B = 0 exactly for purely oscillating data; allow rounding below it
    if b.re < -1e-12 * b.norm() {
        return Err(Error::HypothesisViolated(format!("Re B = {} < 0", b.re)));
    }
    let bound = (n as f64 - 1.0) * slope.norm() / (radius * value.re);
    Ok(PatchResult { radius, n, a, b, bound, sampled_max: 0.0 }.sample())
}

/// Unit-modulus factor `c` making `c·ψ` admissible for the complex patch with the
/// largest `Re(cψ(R))`: `Re(c ψ(R)) > 0` and `Re(−c ψ'(R)) ≥ 0`.
pub fn admissible_phase(value: Complex64, slope: Complex64) -> Result<Complex64> {
    let w = slope / value;
    let rotate = |phi: f64| Complex64::from_polar(1.0, phi) / Complex64::from_polar(1.0, value.arg());
    if w.re <= 0.0 {
        return Ok(rotate(0.0));
    }
    // e^{iφ}w must be purely imaginary; keep the φ nearest 0
    let wrap = |x: f64| (x + std::f64::consts::PI).rem_euclid(2.0 * std::f64::consts::PI) - std::f64::consts::PI;
    let candidates = [wrap(std::f64::consts::FRAC_PI_2 - w.arg()), wrap(-std::f64::consts::FRAC_PI_2 - w.arg())];
    let phi = if candidates[0].abs() <= candidates[1].abs() { candidates[0] } else { candidates[1] };
    if phi.cos() <= 1e-12 {
        return Err(Error::HypothesisViolated("no rotation gives Re ψ(R) > 0 and Re B ≥ 0".into()));
    }
    Ok(rotate(phi))
}
