//! `u = g_m * f` on a grid, treating `f` as constant on each cell.
//!
//! Cartesian grids (`d ≤ 2`) use exact cell integrals of the kernel and a
//! zero-padded FFT. Radial grids (any `d ≥ 2`) use the spherical mean of the
//! kernel, `A·j(r_<)·h(r_>)`, with `j` regular at the origin and `h` outgoing,
//! which reduces the convolution to two running sums.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::{LN_2, PI};
use std::sync::Arc;

use super::grid::{Geometry, Grid, SampledFunction};
use crate::error::{Error, Result};
use crate::kernel::{GreenKernel, KernelVariant};
use crate::quadrature::gauss_legendre;
use crate::special::{bessel_j, hankel1, unit_sphere_area};
use crate::spectral::ModeClass;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Mean of `ln|x|` over the square `[-a, a]²`, minus `ln a`.
pub const LOG_SQUARE_MEAN: f64 = -1.5 + PI / 4.0 + 0.5 * LN_2;

fn gauss_on(a: f64, b: f64, order: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(order);
    x.iter().zip(&w).map(|(x, w)| (a + 0.5 * (b - a) * (x + 1.0), 0.5 * (b - a) * w)).collect()
}

struct FftPlan {
    padded: usize,
    kernel_hat: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

struct RadialPlan {
    a: Complex64,
    j_node: Vec<Complex64>,
    h_node: Vec<Complex64>,
    j_cell: Vec<Complex64>,
    h_cell: Vec<Complex64>,
    /// `∫_{ih}^{r_i} j|S|ρ^{d−1}` and `∫_{r_i}^{(i+1)h} h|S|ρ^{d−1}`.
    j_lower_half: Vec<Complex64>,
    h_upper_half: Vec<Complex64>,
}

enum Inner {
    Fft(FftPlan),
    Radial(RadialPlan),
}

/// A kernel prepared for repeated convolution on one grid.
pub struct ConvolutionPlan {
    pub grid: Grid,
    pub kernel: GreenKernel,
    inner: Inner,
}

impl ConvolutionPlan {
    pub fn new(grid: Grid, kernel: GreenKernel) -> Result<Self> {
        let d = kernel.n - 1;
        if grid.dim() != d {
            return Err(Error::UnsupportedDimension(grid.dim()));
        }
        let inner = match grid.geometry {
            Geometry::Cartesian { dim: 1, nodes } => Inner::Fft(fft_plan_1d(&grid, &kernel, nodes)?),
            Geometry::Cartesian { dim: 2, nodes } => Inner::Fft(fft_plan_2d(&grid, &kernel, nodes)?),
            Geometry::Cartesian { dim, .. } => return Err(Error::UnsupportedDimension(dim)),
            Geometry::Radial { .. } => Inner::Radial(radial_plan(&grid, &kernel)?),
        };
        Ok(Self { grid, kernel, inner })
    }

    pub fn apply(&self, f: &SampledFunction) -> Result<SampledFunction> {
        if f.grid != self.grid {
            return Err(Error::DomainError("function and plan use different grids".into()));
        }
        let values = match &self.inner {
            Inner::Fft(p) => match self.grid.geometry {
                Geometry::Cartesian { dim: 1, nodes } => apply_1d(p, &f.values, nodes),
                Geometry::Cartesian { nodes, .. } => apply_2d(p, &f.values, nodes),
                Geometry::Radial { .. } => unreachable!("radial grids use the radial plan"),
            },
            Inner::Radial(p) => apply_radial(p, &f.values),
        };
        Ok(f.with_values(values))
    }
}

pub fn convolve(f: &SampledFunction, kernel: &GreenKernel) -> Result<SampledFunction> {
    ConvolutionPlan::new(f.grid, *kernel)?.apply(f)
}

fn padded_len(nodes: usize) -> usize {
    (2 * nodes - 1).next_power_of_two()
}

fn fft_plan_1d(grid: &Grid, kernel: &GreenKernel, nodes: usize) -> Result<FftPlan> {
    let h = grid.h;
    let p = padded_len(nodes);
    let mut arr = vec![ZERO; p];
    let g = |x: f64| kernel.eval(x.abs());
    for k in 0..nodes {
        let w = if k == 0 {
            let mut s = ZERO;
            for (x, wt) in gauss_on(0.0, h / 2.0, 8) {
                s += g(x)? * (2.0 * wt);
            }
            s
        } else {
            let c = k as f64 * h;
            let mut s = ZERO;
            for (x, wt) in gauss_on(c - h / 2.0, c + h / 2.0, 8) {
                s += g(x)? * wt;
            }
            s
        };
        arr[k] = w;
        if k > 0 {
            arr[p - k] = w;
        }
    }
    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(p);
    let inverse = planner.plan_fft_inverse(p);
    forward.process(&mut arr);
    Ok(FftPlan { padded: p, kernel_hat: arr, forward, inverse })
}

fn apply_1d(p: &FftPlan, f: &[Complex64], nodes: usize) -> Vec<Complex64> {
    let mut buf = vec![ZERO; p.padded];
    buf[..nodes].copy_from_slice(f);
    p.forward.process(&mut buf);
    for (b, k) in buf.iter_mut().zip(&p.kernel_hat) {
        *b *= k;
    }
    p.inverse.process(&mut buf);
    let scale = 1.0 / p.padded as f64;
    buf[..nodes].iter().map(|v| v * scale).collect()
}

/// `∫` of the kernel over the cell `[(a−½)h, (a+½)h] × [(b−½)h, (b+½)h]`.
fn cell_weight_2d(kernel: &GreenKernel, h: f64, a: usize, b: usize) -> Result<Complex64> {
    let g = |x: f64, y: f64| kernel.eval((x * x + y * y).sqrt());
    let (xa, xb) = ((a as f64 - 0.5) * h, (a as f64 + 0.5) * h);
    let (ya, yb) = ((b as f64 - 0.5) * h, (b as f64 + 0.5) * h);
    if a == 0 && b == 0 {
        // −(1/2π) ln r analytically, the continuous remainder by Gauss on each quadrant
        let half = h / 2.0;
        let singular = -(h * h) * (half.ln() + LOG_SQUARE_MEAN) / (2.0 * PI);
        let pts = gauss_on(0.0, half, 10);
        let mut rem = ZERO;
        for &(x, wx) in &pts {
            for &(y, wy) in &pts {
                let r = (x * x + y * y).sqrt();
                rem += (g(x, y)? + r.ln() / (2.0 * PI)) * (4.0 * wx * wy);
            }
        }
        return Ok(singular + rem);
    }
    let order = if a.max(b) <= 2 { 8 } else { 2 };
    let (px, py) = (gauss_on(xa, xb, order), gauss_on(ya, yb, order));
    let mut s = ZERO;
    for &(x, wx) in &px {
        for &(y, wy) in &py {
            s += g(x, y)? * (wx * wy);
        }
    }
    Ok(s)
}

fn fft2(buf: &mut [Complex64], p: usize, fft: &Arc<dyn Fft<f64>>) {
    for row in buf.chunks_mut(p) {
        fft.process(row);
    }
    let mut col = vec![ZERO; p];
    for j in 0..p {
        for i in 0..p {
            col[i] = buf[i * p + j];
        }
        fft.process(&mut col);
        for i in 0..p {
            buf[i * p + j] = col[i];
        }
    }
}

fn fft_plan_2d(grid: &Grid, kernel: &GreenKernel, nodes: usize) -> Result<FftPlan> {
    if !matches!(kernel.variant, KernelVariant::HankelRep { .. } | KernelVariant::N3ResonantLog { .. }) {
        return Err(Error::SingularityError(format!("no cell rule for {:?} in two dimensions", kernel.variant)));
    }
    let p = padded_len(nodes);
    let mut table = vec![ZERO; nodes * nodes];
    for a in 0..nodes {
        for b in 0..=a {
            let w = cell_weight_2d(kernel, grid.h, a, b)?;
            table[a * nodes + b] = w;
            table[b * nodes + a] = w;
        }
    }
    let mut arr = vec![ZERO; p * p];
    let wrap = |k: isize| if k >= 0 { k as usize } else { (p as isize + k) as usize };
    let span = nodes as isize - 1;
    for a in -span..=span {
        for b in -span..=span {
            arr[wrap(a) * p + wrap(b)] = table[a.unsigned_abs() * nodes + b.unsigned_abs()];
        }
    }
    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(p);
    let inverse = planner.plan_fft_inverse(p);
    fft2(&mut arr, p, &forward);
    Ok(FftPlan { padded: p, kernel_hat: arr, forward, inverse })
}

fn apply_2d(p: &FftPlan, f: &[Complex64], nodes: usize) -> Vec<Complex64> {
    let n = p.padded;
    let mut buf = vec![ZERO; n * n];
    for i in 0..nodes {
        buf[i * n..i * n + nodes].copy_from_slice(&f[i * nodes..(i + 1) * nodes]);
    }
    fft2(&mut buf, n, &p.forward);
    for (b, k) in buf.iter_mut().zip(&p.kernel_hat) {
        *b *= k;
    }
    fft2(&mut buf, n, &p.inverse);
    let scale = 1.0 / (n * n) as f64;
    let mut out = Vec::with_capacity(nodes * nodes);
    for i in 0..nodes {
        out.extend(buf[i * n..i * n + nodes].iter().map(|v| v * scale));
    }
    out
}

/// Regular and outgoing radial solutions with the jump constant `A`.
struct RadialPair<'a> {
    d: usize,
    kernel: &'a GreenKernel,
    a: Complex64,
}

impl RadialPair<'_> {
    fn new(kernel: &GreenKernel) -> Result<RadialPair<'_>> {
        let d = kernel.n - 1;
        let area = unit_sphere_area(d);
        let a = match (kernel.k_m.class, d) {
            (ModeClass::Resonant, 2) => Complex64::new(1.0 / (2.0 * PI), 0.0),
            (ModeClass::Resonant, _) => Complex64::new(1.0 / ((d as f64 - 2.0) * area), 0.0),
            _ => I * (PI / (2.0 * area)),
        };
        if kernel.k_m.class == ModeClass::Resonant && d == 2 && !matches!(kernel.variant, KernelVariant::N3ResonantLog { .. }) {
            return Err(Error::SingularityError("resonant radial kernel in two dimensions needs a radius".into()));
        }
        Ok(RadialPair { d, kernel, a })
    }

    fn nu(&self) -> f64 {
        (self.d as f64 - 2.0) / 2.0
    }

    fn j(&self, r: f64) -> Result<Complex64> {
        if self.kernel.k_m.class == ModeClass::Resonant {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let nu = self.nu();
        Ok(bessel_j(nu, self.kernel.k_m.value * r, &self.kernel.quadrature)? * r.powf(-nu))
    }

    fn h(&self, r: f64) -> Result<Complex64> {
        match self.kernel.variant {
            KernelVariant::N3ResonantLog { rho } => Ok(Complex64::new((2.0 * rho / r).ln(), 0.0)),
            _ if self.kernel.k_m.class == ModeClass::Resonant => Ok(Complex64::new(r.powf(2.0 - self.d as f64), 0.0)),
            _ => {
                let nu = self.nu();
                Ok(hankel1(nu, self.kernel.k_m.value * r, &self.kernel.quadrature)? * r.powf(-nu))
            }
        }
    }

    fn integrate<F: Fn(f64) -> Result<Complex64>>(&self, f: F, a: f64, b: f64) -> Result<Complex64> {
        let area = unit_sphere_area(self.d);
        let mut s = ZERO;
        for (x, w) in gauss_on(a, b, 8) {
            s += f(x)? * (w * area * x.powi(self.d as i32 - 1));
        }
        Ok(s)
    }
}

fn radial_plan(grid: &Grid, kernel: &GreenKernel) -> Result<RadialPlan> {
    let pair = RadialPair::new(kernel)?;
    let h = grid.h;
    let n = grid.nodes();
    if kernel.k_m.class == ModeClass::Evanescent && kernel.k_m.abs() * grid.extent() > 600.0 {
        return Err(Error::DomainError("radial grid too wide for the evanescent scale".into()));
    }
    let mut plan = RadialPlan {
        a: pair.a,
        j_node: Vec::with_capacity(n),
        h_node: Vec::with_capacity(n),
        j_cell: Vec::with_capacity(n),
        h_cell: Vec::with_capacity(n),
        j_lower_half: Vec::with_capacity(n),
        h_upper_half: Vec::with_capacity(n),
    };
    for i in 0..n {
        let (lo, mid, hi) = (i as f64 * h, (i as f64 + 0.5) * h, (i as f64 + 1.0) * h);
        plan.j_node.push(pair.j(mid)?);
        plan.h_node.push(pair.h(mid)?);
        let jl = pair.integrate(|r| pair.j(r), lo, mid)?;
        let ju = pair.integrate(|r| pair.j(r), mid, hi)?;
        plan.j_cell.push(jl + ju);
        plan.j_lower_half.push(jl);
        let hu = pair.integrate(|r| pair.h(r), mid, hi)?;
        let hc = if i == 0 { ZERO } else { pair.integrate(|r| pair.h(r), lo, mid)? + hu };
        plan.h_cell.push(hc);
        plan.h_upper_half.push(hu);
    }
    Ok(plan)
}

fn apply_radial(p: &RadialPlan, f: &[Complex64]) -> Vec<Complex64> {
    let n = f.len();
    let mut below = vec![ZERO; n];
    let mut acc = ZERO;
    for i in 0..n {
        below[i] = acc;
        acc += f[i] * p.j_cell[i];
    }
    let mut above = vec![ZERO; n];
    acc = ZERO;
    for i in (0..n).rev() {
        above[i] = acc;
        acc += f[i] * p.h_cell[i];
    }
    (0..n)
        .map(|i| {
            let own = f[i] * (p.h_node[i] * p.j_lower_half[i] + p.j_node[i] * p.h_upper_half[i]);
            p.a * (p.h_node[i] * below[i] + p.j_node[i] * above[i] + own)
        })
        .collect()
}
