//! Fundamental solutions `g_m` of `−Δ_x − k_m²` on `ℝ^{n−1}`.
//!
//! For `n ≥ 3` and `k_m ≠ 0`,
//! `g_m(r) = (i/4)(k_m/2πr)^s H_s^{(1)}(k_m r)` with `s = (n−3)/2`, evaluated
//! through the equivalent form
//! `g_m(r) = c(s)(−ik_m)^{s−1/2} r^{−s−1/2} e^{ik_m r} I_s(−ik_m r)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;
use crate::spectral::{ModeClass, ModeWavenumber};
use crate::special::{
    gamma_half, hankel1, hankel_half_integer_closed, hankel_series, poisson_integral, poisson_integral_asymptotic,
};

pub use crate::special::{bessel, BesselKind, EULER_GAMMA};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum KernelVariant {
    N2,
    N2Resonant,
    HankelRep { s: f64 },
    N3ResonantLog { rho: f64 },
    N4PlusResonant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMethod {
    Closed,
    Series,
    Integral,
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenKernel {
    pub n: usize,
    pub k_m: ModeWavenumber,
    pub variant: KernelVariant,
    pub quadrature: QuadratureSpec,
}

impl GreenKernel {
    /// `rho` is only consulted for the resonant `n = 3` kernel, which needs it.
    pub fn new(n: usize, k_m: ModeWavenumber, rho: Option<f64>) -> Result<Self> {
        let resonant = k_m.class == ModeClass::Resonant;
        let variant = match (n, resonant) {
            (0 | 1, _) => return Err(Error::UnsupportedDimension(n.saturating_sub(1))),
            (2, false) => KernelVariant::N2,
            (2, true) => KernelVariant::N2Resonant,
            (3, true) => match rho {
                Some(rho) if rho > 0.0 => KernelVariant::N3ResonantLog { rho },
                _ => return Err(Error::NotApplicable("resonant n = 3 kernel needs a ball radius".into())),
            },
            (_, true) => KernelVariant::N4PlusResonant,
            (_, false) => KernelVariant::HankelRep { s: (n as f64 - 3.0) / 2.0 },
        };
        Ok(Self { n, k_m, variant, quadrature: QuadratureSpec::tight() })
    }

    pub fn with_quadrature(mut self, quadrature: QuadratureSpec) -> Self {
        self.quadrature = quadrature;
        self
    }

    /// Evaluation route used at radius `r`.
    pub fn method_at(&self, r: f64) -> EvalMethod {
        match self.variant {
            KernelVariant::HankelRep { s } => {
                let x = self.k_m.abs() * r;
                if x <= 0.1 * (s + 1.0) {
                    EvalMethod::Series
                } else if x >= 30.0 {
                    EvalMethod::Asymptotic
                } else {
                    EvalMethod::Integral
                }
            }
            _ => EvalMethod::Closed,
        }
    }

    pub fn eval(&self, r: f64) -> Result<Complex64> {
        self.eval_with(r, self.method_at(r))
    }

    /// Evaluates with a forced route; only meaningful for the Hankel variant.
    pub fn eval_with(&self, r: f64, method: EvalMethod) -> Result<Complex64> {
        if !(r > 0.0) {
            return Err(Error::UnsupportedEvaluation(format!("kernel evaluated at r = {r}")));
        }
        let k = self.k_m.value;
        match self.variant {
            KernelVariant::N2 => Ok(-(I * k * r).exp() / (I * k * 2.0)),
            KernelVariant::N2Resonant => Ok(Complex64::new(-r / 2.0, 0.0)),
            KernelVariant::N3ResonantLog { rho } => Ok(Complex64::new((2.0 * rho / r).ln() / (2.0 * PI), 0.0)),
            KernelVariant::N4PlusResonant => {
                let n = self.n as f64;
                let c = gamma_half((n - 3.0) / 2.0)? / (4.0 * PI.powf((n - 1.0) / 2.0));
                Ok(Complex64::new(c * r.powf(3.0 - n), 0.0))
            }
            KernelVariant::HankelRep { s } => match method {
                EvalMethod::Series | EvalMethod::Closed => {
                    let h = hankel_series(s, k * r)?;
                    Ok(I / 4.0 * (k / (2.0 * PI * r)).powf(s) * h)
                }
                EvalMethod::Integral | EvalMethod::Asymptotic => {
                    let z = -I * k * r;
                    let i_s = if method == EvalMethod::Integral {
                        poisson_integral(s, z, &self.quadrature)?
                    } else {
                        poisson_integral_asymptotic(s, z)?
                    };
                    Ok(poisson_prefactor(s)? * (-I * k).powf(s - 0.5) * r.powf(-s - 0.5) * (I * k * r).exp() * i_s)
                }
            },
        }
    }

    /// `g_m'(r)`; for the Hankel form `d/dr[r^{-s}H_s(kr)] = −k r^{-s}H_{s+1}(kr)`.
    pub fn derivative(&self, r: f64) -> Result<Complex64> {
        if !(r > 0.0) {
            return Err(Error::UnsupportedEvaluation(format!("kernel derivative at r = {r}")));
        }
        let k = self.k_m.value;
        match self.variant {
            KernelVariant::N2 => Ok(I * k * self.eval(r)?),
            KernelVariant::N2Resonant => Ok(Complex64::new(-0.5, 0.0)),
            KernelVariant::N3ResonantLog { .. } => Ok(Complex64::new(-1.0 / (2.0 * PI * r), 0.0)),
            KernelVariant::N4PlusResonant => Ok(self.eval(r)? * ((3.0 - self.n as f64) / r)),
            KernelVariant::HankelRep { s } => {
                let h = hankel1(s + 1.0, k * r, &self.quadrature)?;
                Ok(I / 4.0 * (k / (2.0 * PI * r)).powf(s) * (-k) * h)
            }
        }
    }
}

/// `c(s) = √(2/π) / (4 (2π)^s Γ(s+1/2))`.
pub fn poisson_prefactor(s: f64) -> Result<f64> {
    Ok((2.0 / PI).sqrt() / (4.0 * (2.0 * PI).powf(s) * gamma_half(s + 0.5)?))
}

pub fn eval_g(kernel: &GreenKernel, r: f64) -> Result<Complex64> {
    kernel.eval(r)
}

/// `I_s(z)`.
pub fn i_s_integral(s: f64, z: Complex64, q: &QuadratureSpec) -> Result<Complex64> {
    poisson_integral(s, z, q)
}

/// Relative gap between `H_s(iz)` from an independent evaluation and the
/// right-hand side built from `I_s(z)`.
///
/// Half-integer orders use the elementary closed form; integer orders use the
/// ascending series.
pub fn hankel_identity_check(s: f64, z: f64, q: &QuadratureSpec) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::DomainError(format!("z must be positive, got {z}")));
    }
    let w = Complex64::new(0.0, z);
    let lhs = if (2.0 * s).round() as i64 % 2 != 0 {
        hankel_half_integer_closed(s, w)?
    } else {
        hankel_series(s, w)?
    };
    let g = gamma_half(s + 0.5)?;
    let i_s = poisson_integral(s, Complex64::new(z, 0.0), q)?;
    let rhs = Complex64::from_polar(1.0, -PI * s / 2.0) / (I * g) * (2.0 / (PI * z)).sqrt() * (-z).exp() * i_s;
    Ok((lhs - rhs).norm() / lhs.norm())
}

/// Shape of the pointwise bound without its constant.
pub fn kernel_bound_shape(n: usize, kappa: f64, r: f64) -> f64 {
    let x = kappa * r;
    if n == 3 {
        if 2.0 * x >= 1.0 {
            x.powf(-0.5)
        } else {
            1.0 - (2.0 * x).ln()
        }
    } else {
        let n = n as f64;
        r.powf(3.0 - n) * (x.powf((n - 4.0) / 2.0) + 1.0)
    }
}

const BOUND_SAFETY: f64 = 1.1;

/// Constant `C` in `|g_m(r)| ≤ C·shape(r)`, calibrated once per `n`.
///
/// `|g_m|/shape` depends on `|k_m| r` alone, so the sup is taken over that
/// product on a log grid in `[1e-4, 1e3]` for both propagating and evanescent
/// kernels, then multiplied by 1.1.
pub fn kernel_bound_constant(n: usize) -> Result<f64> {
    static CACHE: OnceLock<Mutex<BTreeMap<usize, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(c) = cache.lock().expect("kernel constant cache").get(&n) {
        return Ok(*c);
    }
    if n < 3 {
        return Err(Error::NotApplicable(format!("no pointwise kernel bound for n = {n}")));
    }
    let mut worst: f64 = 0.0;
    for class in [ModeClass::Propagating, ModeClass::Evanescent] {
        let kernel = GreenKernel::new(n, ModeWavenumber::with_class(class, 1.0), None)?;
        for i in 0..=280 {
            let x = 10f64.powf(-4.0 + 7.0 * i as f64 / 280.0);
            let g = kernel.eval(x)?.norm();
            worst = worst.max(g / kernel_bound_shape(n, 1.0, x));
        }
    }
    let c = BOUND_SAFETY * worst;
    cache.lock().expect("kernel constant cache").insert(n, c);
    Ok(c)
}

/// Pointwise bound on `|g_m(r)|` for `n ≥ 3` and nonresonant `k_m`.
pub fn kernel_bound(n: usize, k_m: &ModeWavenumber, r: f64) -> Result<f64> {
    if n < 3 || k_m.class == ModeClass::Resonant {
        return Err(Error::NotApplicable(format!("kernel bound needs n ≥ 3 and a nonresonant mode (n = {n})")));
    }
    Ok(kernel_bound_constant(n)? * kernel_bound_shape(n, k_m.abs(), r))
}

/// `|g_m'(a)| / |g_m(a)|` by Richardson-extrapolated central differences with `h = 1e-6 a`.
pub fn log_derivative_ratio(n: usize, k_m: &ModeWavenumber, a: f64) -> Result<f64> {
    if k_m.class == ModeClass::Resonant {
        return Err(Error::NotApplicable("log-derivative ratio needs a nonresonant mode".into()));
    }
    let kernel = GreenKernel::new(n, *k_m, None)?;
    let method = kernel.method_at(a);
    let g = |r: f64| kernel.eval_with(r, method);
    let g0 = g(a)?;
    if g0.norm() < 1e-290 {
        return Err(Error::UnsupportedEvaluation(format!("|g_m({a})| underflows")));
    }
    let h = 1e-6 * a;
    let d = |h: f64| -> Result<Complex64> { Ok((g(a + h)? - g(a - h)?) / (2.0 * h)) };
    let deriv = (d(h / 2.0)? * 4.0 - d(h)?) / 3.0;
    Ok(deriv.norm() / g0.norm())
}

/// `|g'' + ((n−2)/r) g' + k_m² g|` relative to `|k_m² g|` (or to `|g''|` for resonant kernels),
/// from a sixth-order stencil with spacing `0.01·min(r, 1/|k_m|)`.
pub fn radial_residual(kernel: &GreenKernel, r: f64) -> Result<f64> {
    let kappa = kernel.k_m.abs();
    let h = 0.01 * if kappa > 0.0 { r.min(1.0 / kappa) } else { r };
    let method = kernel.method_at(r);
    let mut f = [Complex64::new(0.0, 0.0); 7];
    for (j, v) in f.iter_mut().enumerate() {
        *v = kernel.eval_with(r + (j as f64 - 3.0) * h, method)?;
    }
    let d1 = (-f[0] + f[1] * 9.0 - f[2] * 45.0 + f[4] * 45.0 - f[5] * 9.0 + f[6]) / (60.0 * h);
    let d2 = (f[0] * 2.0 - f[1] * 27.0 + f[2] * 270.0 - f[3] * 490.0 + f[4] * 270.0 - f[5] * 27.0 + f[6] * 2.0)
        / (180.0 * h * h);
    let k2 = kernel.k_m.value * kernel.k_m.value;
    let res = d2 + d1 * ((kernel.n as f64 - 2.0) / r) + k2 * f[3];
    let scale = if kernel.k_m.class == ModeClass::Resonant { d2.norm() } else { (k2 * f[3]).norm() };
    Ok(res.norm() / scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(k: f64) -> ModeWavenumber {
        ModeWavenumber::evanescent(k)
    }

    fn pr(k: f64) -> ModeWavenumber {
        ModeWavenumber::propagating(k)
    }

    #[test]
    fn closed_form_examples() {
        let g = eval_g(&GreenKernel::new(2, ev(3.0), None).unwrap(), 1.0).unwrap();
        assert!((g.re - (-3f64).exp() / 6.0).abs() < 1e-16 && g.im.abs() < 1e-16);
        let g = eval_g(&GreenKernel::new(4, ev(2.0), None).unwrap(), 1.0).unwrap();
        assert!((g.re - (-2f64).exp() / (4.0 * PI)).abs() < 1e-15, "{g}");
        let g = eval_g(&GreenKernel::new(2, ModeWavenumber::resonant(), None).unwrap(), 0.4).unwrap();
        assert_eq!(g.re, -0.2);
        assert!(eval_g(&GreenKernel::new(2, ev(1.0), None).unwrap(), 0.0).is_err());
    }

    #[test]
    fn n3_evanescent_is_k0_over_2pi() {
        // K0(x) = (π/2) i H0(ix)
        let kernel = GreenKernel::new(3, ev(1.0), None).unwrap();
        let k0_at_1 = 0.421_024_438_240_708_3;
        let g = kernel.eval(1.0).unwrap();
        assert!((g.re - k0_at_1 / (2.0 * PI)).abs() < 1e-14, "{g}");
    }

    #[test]
    fn resonant_variants() {
        let k = GreenKernel::new(3, ModeWavenumber::resonant(), Some(1.0)).unwrap();
        assert!((k.eval(2.0).unwrap().re).abs() < 1e-16);
        assert!(matches!(GreenKernel::new(3, ModeWavenumber::resonant(), None), Err(Error::NotApplicable(_))));
        let k = GreenKernel::new(5, ModeWavenumber::resonant(), None).unwrap();
        assert!((k.eval(1.0).unwrap().re - 1.0 / (4.0 * PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn routes_agree_at_switch_points() {
        for n in 3..=8 {
            let s = (n as f64 - 3.0) / 2.0;
            for kind in [pr(1.0), ev(1.0)] {
                let kernel = GreenKernel::new(n, kind, None).unwrap();
                for x in [0.1 * (s + 1.0), 30.0] {
                    let a = kernel.eval_with(x, EvalMethod::Integral).unwrap();
                    let b = if x < 1.0 {
                        kernel.eval_with(x, EvalMethod::Series).unwrap()
                    } else {
                        kernel.eval_with(x, EvalMethod::Asymptotic).unwrap()
                    };
                    assert!((a - b).norm() <= 1e-12 * a.norm(), "n={n} {kind:?} x={x}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn ode_residual_small() {
        for n in 2..=6 {
            for kappa in [0.5, 2.0, 10.0] {
                for kind in [pr(kappa), ev(kappa)] {
                    let kernel = GreenKernel::new(n, kind, None).unwrap();
                    for r in [0.05, 0.3, 1.0, 4.0, 20.0] {
                        let Ok(res) = radial_residual(&kernel, r) else { continue };
                        if kernel.eval(r).unwrap().norm() < 1e-250 {
                            continue;
                        }
                        assert!(res < 1e-5, "n={n} {kind:?} r={r}: {res}");
                    }
                }
            }
        }
    }

    #[test]
    fn poisson_integral_half_order_is_one() {
        let q = QuadratureSpec::default();
        for z in [0.1, 1.0, 50.0] {
            assert_eq!(i_s_integral(0.5, Complex64::new(z, 0.0), &q).unwrap(), Complex64::new(1.0, 0.0));
        }
        let big = i_s_integral(0.0, Complex64::new(1e12, 0.0), &QuadratureSpec::tight()).unwrap();
        assert!((big.re - PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn hankel_identity_examples() {
        let q = QuadratureSpec::default();
        assert!(hankel_identity_check(0.5, 1.0, &q).unwrap() <= 1e-9);
        assert!(hankel_identity_check(0.5, 5.0, &q).unwrap() <= 1e-9);
        assert!(hankel_identity_check(1.5, 2.0, &q).unwrap() <= 1e-8);
        assert!(hankel_identity_check(1.0, 2.0, &q).unwrap() <= 1e-8);
    }

    #[test]
    fn bound_dominates_kernel() {
        for n in 3..=6 {
            for kappa in [0.3, 1.0, 7.0] {
                for kind in [pr(kappa), ev(kappa)] {
                    let kernel = GreenKernel::new(n, kind, None).unwrap();
                    for i in 0..60 {
                        let r = 10f64.powf(-3.0 + 5.0 * i as f64 / 59.0);
                        let g = kernel.eval(r).unwrap().norm();
                        assert!(g <= kernel_bound(n, &kind, r).unwrap(), "n={n} {kind:?} r={r}");
                    }
                }
            }
        }
        assert!(kernel_bound(2, &ev(1.0), 1.0).is_err());
        assert!(kernel_bound(3, &ModeWavenumber::resonant(), 1.0).is_err());
    }

    #[test]
    fn bound_shapes() {
        let c3 = kernel_bound_constant(3).unwrap();
        assert!((kernel_bound(3, &pr(1.0), 4.0).unwrap() - c3 * 0.5).abs() < 1e-14);
        // the two n = 3 branches meet at 2|k|r = 1 up to the factor √2
        let above = kernel_bound_shape(3, 1.0, 0.5);
        let below = kernel_bound_shape(3, 1.0, 0.5 - 1e-12);
        assert!((above / below - 2f64.sqrt()).abs() < 1e-9);
        let c5 = kernel_bound_constant(5).unwrap();
        assert!((kernel_bound(5, &ev(1.0), 2.0).unwrap() - c5 * 0.25 * (2f64.sqrt() + 1.0)).abs() < 1e-14);
    }

    #[test]
    fn log_derivative_examples() {
        for a in [0.1, 1.0, 3.0] {
            let v = log_derivative_ratio(2, &ev(5.0), a).unwrap();
            assert!((v - 5.0).abs() < 1e-8, "a={a}: {v}");
        }
        let v = log_derivative_ratio(4, &ev(2.0), 1.0).unwrap();
        assert!((v - 3.0).abs() < 1e-7, "{v}");
        let c: f64 = [0.1, 1.0, 10.0]
            .iter()
            .map(|&a| log_derivative_ratio(3, &ev(1.0), a).unwrap() / (1.0 / a + 1.0))
            .fold(0.0, f64::max);
        assert!(c.is_finite() && c <= 1.0);
    }

    #[test]
    fn derivative_matches_differences() {
        for (n, k_m) in [(2, ev(2.0)), (3, ModeWavenumber::propagating(1.5)), (4, ev(2.0)), (5, ModeWavenumber::propagating(0.7))] {
            let kernel = GreenKernel::new(n, k_m, None).unwrap();
            for r in [0.3, 1.0, 4.0] {
                let h = 1e-5;
                let fd = (kernel.eval(r + h).unwrap() - kernel.eval(r - h).unwrap()) / (2.0 * h);
                let d = kernel.derivative(r).unwrap();
                assert!((d - fd).norm() < 1e-7 * d.norm(), "n={n} r={r}: {d} vs {fd}");
            }
        }
        let yukawa = GreenKernel::new(4, ev(2.0), None).unwrap();
        let ratio = (yukawa.derivative(1.0).unwrap() / yukawa.eval(1.0).unwrap()).norm();
        assert!((ratio - 3.0).abs() < 1e-10);
    }
}
