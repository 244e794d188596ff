//! Special functions used by the Green's kernels.
//!
//! Only the orders that the slab kernels need are supported: integer and
//! half-integer Hankel orders, and the real Bessel functions `J0, J1, Y0, Y1`.
//! Three independent routes to `H_s^{(1)}` live here:
//!
//! - the ascending series (small argument),
//! - the Poisson-type integral `I_s` combined with the exponential prefactor (mid range),
//! - the asymptotic expansion of `I_s` (large argument),
//!
//! plus the elementary closed form for half-integer orders, which serves as an oracle.

use num_complex::Complex64;
use std::f64::consts::{FRAC_2_PI, PI};

use crate::error::{Error, Result};
use crate::quadrature::{exp_sinh, QuadratureSpec};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn is_half_integer(x: f64) -> bool {
    let t = 2.0 * x;
    (t - t.round()).abs() < 1e-12
}

fn is_integer(x: f64) -> bool {
    (x - x.round()).abs() < 1e-12
}

/// Γ(x) for `2x` an integer, `x` not a nonpositive integer.
pub fn gamma_half(x: f64) -> Result<f64> {
    if !is_half_integer(x) {
        return Err(Error::DomainError(format!("gamma_half needs 2x integral, got {x}")));
    }
    if x <= 0.0 && is_integer(x) {
        return Err(Error::DomainError(format!("Γ has a pole at {x}")));
    }
    let (mut g, mut a) = if is_integer(x) { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    let target = (2.0 * x).round() / 2.0;
    while a < target - 1e-9 {
        g *= a;
        a += 1.0;
    }
    while a > target + 1e-9 {
        a -= 1.0;
        g /= a;
    }
    Ok(g)
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Digamma at positive integers: ψ(n) = -γ + H_{n-1}.
fn digamma_int(n: u32) -> f64 {
    -EULER_GAMMA + (1..n).map(|k| 1.0 / k as f64).sum::<f64>()
}

/// `J_ν(w)` by the ascending series; `ν` integer or half-integer, not a negative integer.
fn bessel_j_series(nu: f64, w: Complex64) -> Result<Complex64> {
    let half = w * 0.5;
    let q = -(half * half);
    let mut term = half.powf(nu) / gamma_half(nu + 1.0)?;
    let mut sum = term;
    for k in 0..20_000u32 {
        let kf = k as f64;
        term *= q / ((kf + 1.0) * (kf + nu + 1.0));
        sum += term;
        if kf > q.norm().sqrt() && term.norm() <= 1e-17 * sum.norm() {
            return Ok(sum);
        }
    }
    Err(Error::DomainError(format!("J_{nu} series did not converge at {w}")))
}

/// `J_ν(w)` for `w` on the positive real or positive imaginary axis, `ν ≥ 0` integer or half-integer.
///
/// The series has no cancellation on the imaginary axis; on the real axis it is
/// used up to 12 and `Re H_ν` beyond.
pub fn bessel_j(nu: f64, w: Complex64, spec: &QuadratureSpec) -> Result<Complex64> {
    if w.im == 0.0 && w.re > 12.0 {
        Ok(Complex64::new(hankel1(nu, w, spec)?.re, 0.0))
    } else {
        bessel_j_series(nu, w)
    }
}

/// `Y_n(w)` for integer `n ≥ 0` by the ascending series (principal logarithm).
fn bessel_y_int_series(n: u32, w: Complex64) -> Result<Complex64> {
    let half = w * 0.5;
    let mut head = Complex64::new(0.0, 0.0);
    for k in 0..n {
        head += half.powi(2 * k as i32 - n as i32) * (factorial(n - k - 1) / factorial(k));
    }
    let jn = bessel_j_series(n as f64, w)?;
    let q = -(half * half);
    let mut tail = Complex64::new(0.0, 0.0);
    let mut qk = Complex64::new(1.0, 0.0);
    for k in 0..200u32 {
        let coef = (digamma_int(k + 1) + digamma_int(n + k + 1)) / (factorial(k) * factorial(n + k));
        let term = qk * coef;
        tail += term;
        if k > 2 && term.norm() <= 1e-17 * tail.norm().max(1e-300) {
            break;
        }
        qk *= q;
    }
    tail *= half.powi(n as i32);
    Ok(-head / PI + half.ln() * jn * FRAC_2_PI - tail / PI)
}

/// `H_s^{(1)}(w)` by the ascending series. Accurate for moderate `|w|` (≲ 8).
pub fn hankel_series(s: f64, w: Complex64) -> Result<Complex64> {
    if s < 0.0 && !is_half_integer(s) {
        return Err(Error::DomainError(format!("order {s} unsupported")));
    }
    if is_integer(s) {
        let n = s.round().abs() as u32;
        let j = bessel_j_series(n as f64, w)?;
        let y = bessel_y_int_series(n, w)?;
        let sign = if s < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
        return Ok((j + I * y) * sign);
    }
    if !is_half_integer(s) {
        return Err(Error::DomainError(format!("order {s} must be an integer or half-integer")));
    }
    let jm = bessel_j_series(-s, w)?;
    let jp = bessel_j_series(s, w)?;
    let phase = Complex64::from_polar(1.0, -PI * s);
    Ok((jm - phase * jp) / (I * (PI * s).sin()))
}

/// Elementary closed form of `H_s^{(1)}(w)` for half-integer `s ≥ -1/2`, by
/// upward recurrence from `H_{-1/2}` and `H_{1/2}`.
pub fn hankel_half_integer_closed(s: f64, w: Complex64) -> Result<Complex64> {
    if !is_half_integer(s) || is_integer(s) || s < -0.5 {
        return Err(Error::DomainError(format!("closed form needs half-integer order ≥ -1/2, got {s}")));
    }
    let pref = (c(2.0 / PI) / w).sqrt() * (I * w).exp();
    let mut h_prev = pref; // H_{-1/2}
    let mut h_cur = -I * pref; // H_{1/2}
    let mut nu = 0.5;
    if (s + 0.5).abs() < 1e-12 {
        return Ok(h_prev);
    }
    while nu < s - 1e-9 {
        let next = h_cur * (2.0 * nu) / w - h_prev;
        h_prev = h_cur;
        h_cur = next;
        nu += 1.0;
    }
    Ok(h_cur)
}

/// `I_s(z) = ∫_0^∞ e^{-t} t^{s-1/2} (1 + t/(2z))^{s-1/2} dt` by exp-sinh quadrature.
///
/// `z` must lie in the closed right half-plane minus the origin; on the imaginary
/// axis the branch point `t = -2z` stays off the integration path.
pub fn poisson_integral(s: f64, z: Complex64, spec: &QuadratureSpec) -> Result<Complex64> {
    if s < 0.0 {
        return Err(Error::DomainError(format!("I_s needs s ≥ 0, got {s}")));
    }
    if z.norm() == 0.0 || z.re < -1e-12 * z.norm() {
        return Err(Error::DomainError(format!("I_s needs Re z ≥ 0, z ≠ 0, got {z}")));
    }
    let e = s - 0.5;
    if e.abs() < 1e-15 {
        return Ok(c(1.0));
    }
    let two_z = z * 2.0;
    let r = exp_sinh(
        |t| {
            let base = c(1.0) + c(t) / two_z;
            base.powf(e) * ((-t).exp() * t.powf(e))
        },
        spec,
    )?;
    Ok(r.value)
}

/// Large-`|z|` expansion `I_s(z) ~ Σ_j binom(s-1/2, j) Γ(s+1/2+j) (2z)^{-j}`.
/// Exact (finite) for half-integer `s ≥ 1/2`; otherwise summed to its smallest term.
pub fn poisson_integral_asymptotic(s: f64, z: Complex64) -> Result<Complex64> {
    let e = s - 0.5;
    let terminating = e >= 0.0 && is_integer(e);
    let inv = c(1.0) / (z * 2.0);
    let mut gam = gamma_half(s + 0.5)?;
    let mut binom = 1.0;
    let mut pow = c(1.0);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut last = f64::INFINITY;
    for j in 0..400u32 {
        let term = pow * (binom * gam);
        let mag = term.norm();
        if !terminating && mag > last {
            break;
        }
        sum += term;
        if binom == 0.0 || (!terminating && mag <= 1e-17 * sum.norm()) {
            break;
        }
        last = mag;
        binom *= (e - j as f64) / (j as f64 + 1.0);
        gam *= s + 0.5 + j as f64;
        pow *= inv;
    }
    Ok(sum)
}

/// `H_s^{(1)}(w)` from `I_s` via `H_s(iz) = e^{-iπs/2}/(iΓ(s+1/2)) (2/(πz))^{1/2} e^{-z} I_s(z)`.
pub fn hankel_from_poisson(s: f64, w: Complex64, i_s: Complex64) -> Result<Complex64> {
    let z = -I * w;
    let g = gamma_half(s + 0.5)?;
    let pre = Complex64::from_polar(1.0, -PI * s / 2.0) / (I * g);
    Ok(pre * (c(2.0 / PI) / z).sqrt() * (-z).exp() * i_s)
}

/// `H_s^{(1)}(w)` for `w` on the positive real or positive imaginary axis,
/// choosing series, integral or asymptotic route by `|w|`.
pub fn hankel1(s: f64, w: Complex64, spec: &QuadratureSpec) -> Result<Complex64> {
    let a = w.norm();
    if a == 0.0 {
        return Err(Error::DomainError("H_s is singular at 0".into()));
    }
    if a <= 0.1 * (s + 1.0) {
        hankel_series(s, w)
    } else if a >= 30.0 {
        hankel_from_poisson(s, w, poisson_integral_asymptotic(s, -I * w)?)
    } else {
        hankel_from_poisson(s, w, poisson_integral(s, -I * w, spec)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselKind {
    J0,
    J1,
    Y0,
    Y1,
}

/// Real Bessel functions: ascending series for `x ≤ 8`, Hankel integral / asymptotic route beyond.
pub fn bessel(kind: BesselKind, x: f64) -> Result<f64> {
    if x < 0.0 || (x == 0.0 && matches!(kind, BesselKind::Y0 | BesselKind::Y1)) {
        return Err(Error::DomainError(format!("{kind:?}({x})")));
    }
    if x == 0.0 {
        return Ok(if kind == BesselKind::J0 { 1.0 } else { 0.0 });
    }
    let w = c(x);
    if x <= 8.0 {
        return Ok(match kind {
            BesselKind::J0 => bessel_j_series(0.0, w)?.re,
            BesselKind::J1 => bessel_j_series(1.0, w)?.re,
            BesselKind::Y0 => bessel_y_int_series(0, w)?.re,
            BesselKind::Y1 => bessel_y_int_series(1, w)?.re,
        });
    }
    let spec = QuadratureSpec::tight();
    let order = if matches!(kind, BesselKind::J0 | BesselKind::Y0) { 0.0 } else { 1.0 };
    let h = hankel1(order, w, &spec)?;
    Ok(match kind {
        BesselKind::J0 | BesselKind::J1 => h.re,
        BesselKind::Y0 | BesselKind::Y1 => h.im,
    })
}

/// Volume of the unit ball in ℝ^d.
pub fn unit_ball_volume(d: usize) -> f64 {
    PI.powf(d as f64 / 2.0) / gamma_half(d as f64 / 2.0 + 1.0).expect("half-integer")
}

/// Surface measure of the unit sphere S^{d-1} ⊂ ℝ^d.
pub fn unit_sphere_area(d: usize) -> f64 {
    d as f64 * unit_ball_volume(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_half_values() {
        assert!((gamma_half(0.5).unwrap() - PI.sqrt()).abs() < 1e-14);
        assert!((gamma_half(5.0).unwrap() - 24.0).abs() < 1e-12);
        assert!((gamma_half(2.5).unwrap() - 0.75 * PI.sqrt()).abs() < 1e-14);
        assert!((gamma_half(-0.5).unwrap() + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert!(gamma_half(0.0).is_err());
        assert!(gamma_half(0.3).is_err());
    }

    #[test]
    fn bessel_reference_values() {
        // reference values from scipy.special
        let cases = [
            (BesselKind::J0, 1.0, 0.765_197_686_557_966_6),
            (BesselKind::J1, 1.0, 0.440_050_585_744_933_5),
            (BesselKind::Y0, 1.0, 0.088_256_964_215_676_96),
            (BesselKind::Y1, 1.0, -0.781_212_821_300_288_7),
            (BesselKind::J0, 10.0, -0.245_935_764_451_348_3),
            (BesselKind::Y0, 10.0, 0.055_671_167_283_599_39),
            (BesselKind::J1, 10.0, 0.043_472_746_168_861_44),
            (BesselKind::Y1, 10.0, 0.249_015_424_206_953_9),
            (BesselKind::J0, 40.0, 0.007_366_890_584_236_951),
            (BesselKind::Y0, 40.0, 0.125_936_417_058_260_97),
            (BesselKind::J1, 40.0, 0.126_038_318_037_585),
            (BesselKind::Y1, 40.0, -0.005_793_505_821_549_509),
        ];
        for (kind, x, want) in cases {
            let got = bessel(kind, x).unwrap();
            assert!((got - want).abs() < 1e-10, "{kind:?}({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn bessel_continuous_across_route_switch() {
        for kind in [BesselKind::J0, BesselKind::J1, BesselKind::Y0, BesselKind::Y1] {
            let a = bessel(kind, 8.0).unwrap();
            let b = bessel(kind, 8.0 + 1e-12).unwrap();
            assert!((a - b).abs() < 1e-10, "{kind:?}: {a} vs {b}");
        }
    }

    #[test]
    fn series_and_integral_routes_agree() {
        let spec = QuadratureSpec::tight();
        for s in [0.0, 0.5, 1.0, 1.5, 2.0, 2.5] {
            for w in [c(0.7), c(3.0), Complex64::new(0.0, 0.7), Complex64::new(0.0, 2.5)] {
                let a = hankel_series(s, w).unwrap();
                let b = hankel_from_poisson(s, w, poisson_integral(s, -I * w, &spec).unwrap()).unwrap();
                assert!((a - b).norm() <= 1e-11 * a.norm(), "s={s} w={w}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn asymptotic_matches_quadrature_at_switch() {
        let spec = QuadratureSpec::tight();
        for s in [0.0, 1.0, 2.0] {
            for z in [c(30.0), Complex64::new(0.0, -30.0)] {
                let a = poisson_integral_asymptotic(s, z).unwrap();
                let b = poisson_integral(s, z, &spec).unwrap();
                assert!((a - b).norm() <= 1e-13 * b.norm(), "s={s} z={z}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn closed_form_half_integer() {
        let w = c(2.0);
        let h = hankel_half_integer_closed(0.5, w).unwrap();
        let want = -I * (c(2.0 / (PI * 2.0))).sqrt() * (I * w).exp();
        assert!((h - want).norm() < 1e-15);
        for s in [0.5, 1.5, 2.5] {
            let a = hankel_half_integer_closed(s, w).unwrap();
            let b = hankel_series(s, w).unwrap();
            assert!((a - b).norm() < 1e-12 * a.norm(), "s={s}");
        }
    }

    #[test]
    fn terminating_expansion_is_exact_at_small_argument() {
        // I_{3/2}(z) = 1 + 1/z
        let z = c(0.01);
        let v = poisson_integral_asymptotic(1.5, z).unwrap();
        assert!((v.re - 101.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn bessel_j_general() {
        let spec = QuadratureSpec::tight();
        // J_{1/2}(x) = √(2/(πx)) sin x
        for x in [0.3, 5.0, 20.0, 60.0] {
            let v = bessel_j(0.5, c(x), &spec).unwrap();
            let want = (2.0 / (PI * x)).sqrt() * x.sin();
            assert!((v.re - want).abs() < 1e-12, "x={x}: {v} vs {want}");
        }
        // J_0(ix) = I_0(x); I_0(50) from scipy.special.i0
        let v = bessel_j(0.0, Complex64::new(0.0, 50.0), &spec).unwrap();
        assert!((v.re / 2.932_553_783_849_336e20 - 1.0).abs() < 1e-13, "{v}");
        let a = bessel_j(1.0, c(12.0), &spec).unwrap();
        let b = bessel_j(1.0, c(12.0 + 1e-12), &spec).unwrap();
        assert!((a - b).norm() < 1e-11);
    }

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume(1) - 2.0).abs() < 1e-15);
        assert!((unit_ball_volume(2) - PI).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-14);
        assert!((unit_sphere_area(3) - 4.0 * PI).abs() < 1e-13);
    }
}
