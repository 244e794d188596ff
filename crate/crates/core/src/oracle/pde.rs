//! Finite-difference residual of `−Δu = (k+V)u` in the slab and a heuristic
//! outgoing-wave check for single modes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{Geometry, SampledFunction};
use crate::error::{Error, Result};
use crate::spectral::{ModeClass, ModeWavenumber};

/// Where to evaluate the slab residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualGrid {
    /// Stencil step in every direction.
    pub h: f64,
    /// Horizontal points `x ∈ ℝ^{n−1}` at which stencils are centered.
    pub centers: Vec<Vec<f64>>,
    /// Number of equispaced interior heights `y ∈ (0,1)`.
    pub y_count: usize,
    /// Radii `|x|` across which `u` or `V` is only piecewise smooth; stencils
    /// straddling one are skipped.
    pub interfaces: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// `max |−Δ_h u − (k+V)u| / (1 + |k+V||u|)` over evaluated stencils.
    pub max_relative: f64,
    /// `max |u|` on `y ∈ {0, 1}`.
    pub boundary_max: f64,
    pub stencils: usize,
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn straddles(x: &[f64], h: f64, interfaces: &[f64]) -> bool {
    let r = norm(x);
    interfaces.iter().any(|&a| (r - a).abs() <= h * (x.len() as f64).sqrt() * 1.000_001)
}

pub fn pde_residual<U, W>(u: U, v: W, k: f64, grid: &ResidualGrid) -> Result<ResidualReport>
where
    U: Fn(&[f64], f64) -> Complex64,
    W: Fn(&[f64], f64) -> f64,
{
    let h = grid.h;
    if !(h > 0.0 && h <= 0.05) || grid.y_count == 0 || grid.centers.is_empty() {
        return Err(Error::GridTooCoarse(format!("stencil step {h} with {} heights", grid.y_count)));
    }
    let mut worst: f64 = 0.0;
    let mut boundary: f64 = 0.0;
    let mut stencils = 0;
    for x in &grid.centers {
        boundary = boundary.max(u(x, 0.0).norm()).max(u(x, 1.0).norm());
        if straddles(x, h, &grid.interfaces) {
            continue;
        }
        for j in 0..grid.y_count {
            let y = (j as f64 + 1.0) / (grid.y_count as f64 + 1.0);
            let y = y.clamp(h, 1.0 - h);
            let c = u(x, y);
            let mut lap = (u(x, y + h) + u(x, y - h) - c * 2.0) / (h * h);
            let mut shifted = x.clone();
            for a in 0..x.len() {
                shifted[a] = x[a] + h;
                let p = u(&shifted, y);
                shifted[a] = x[a] - h;
                let m = u(&shifted, y);
                shifted[a] = x[a];
                lap += (p + m - c * 2.0) / (h * h);
            }
            let q = k + v(x, y);
            let res = (-lap - c * q).norm() / (1.0 + q.abs() * c.norm());
            worst = worst.max(res);
            stencils += 1;
        }
    }
    Ok(ResidualReport { max_relative: worst, boundary_max: boundary, stencils })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiationReport {
    pub radii: Vec<f64>,
    /// `r^{(n−2)/2}|(∂_r − ik_m)u_m|` at each radius.
    pub values: Vec<f64>,
    pub decaying: bool,
}

/// Samples along the positive first axis as `(r, u)` pairs.
fn ray(u: &SampledFunction) -> Vec<(f64, Complex64)> {
    let g = &u.grid;
    match g.geometry {
        Geometry::Radial { .. } => (0..g.len()).map(|i| (g.point(i)[0], u.values[i])).collect(),
        Geometry::Cartesian { dim: 1, nodes } => (0..nodes).map(|i| (g.point(i)[0], u.values[i])).filter(|(r, _)| *r > 0.0).collect(),
        Geometry::Cartesian { nodes, .. } => {
            // row through the center along the first axis
            let center = (nodes - 1) / 2;
            (0..nodes)
                .map(|i| (g.point(i * nodes + center), u.values[i * nodes + center]))
                .filter(|(p, _)| p[0] > 0.0 && p[1].abs() < 0.5 * g.h)
                .map(|(p, v)| (p[0], v))
                .collect()
        }
    }
}

pub fn radiation_check(u_m: &SampledFunction, k_m: &ModeWavenumber, radii: &[f64]) -> Result<RadiationReport> {
    if k_m.class != ModeClass::Propagating {
        return Err(Error::NotApplicable("radiation check needs a propagating mode".into()));
    }
    let samples = ray(u_m);
    if samples.len() < 3 {
        return Err(Error::InsufficientExtent(0.0));
    }
    let n = u_m.grid.dim() + 1;
    let kappa = k_m.abs();
    let step = samples[1].0 - samples[0].0;
    let mut values = Vec::with_capacity(radii.len());
    let mut scale: f64 = 0.0;
    for &r in radii {
        let t = (r - samples[0].0) / step;
        if t < 1.0 || t + 2.0 > samples.len() as f64 {
            return Err(Error::InsufficientExtent(r));
        }
        let i = t.floor() as usize;
        let q = |j: usize| {
            let du = (samples[j + 1].1 - samples[j - 1].1) / (2.0 * step);
            let rj = samples[j].0;
            (du - Complex64::new(0.0, kappa) * samples[j].1).norm() * rj.powf((n as f64 - 2.0) / 2.0)
        };
        let frac = t - i as f64;
        values.push(q(i) * (1.0 - frac) + q(i + 1) * frac);
        scale = scale.max(samples[i].1.norm()).max(samples[i + 1].1.norm());
    }
    let negligible = values.iter().all(|v| *v <= 1e-3 * kappa * scale);
    let monotone = values.windows(2).all(|w| w[1] <= w[0]);
    let halved = match (values.first(), values.last()) {
        (Some(a), Some(b)) => *b <= 0.5 * a,
        _ => false,
    };
    Ok(RadiationReport { radii: radii.to_vec(), values, decaying: negligible || (monotone && halved) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::GreenKernel;
    use crate::oracle::grid::Grid;
    use std::f64::consts::PI;

    fn plane_wave_residual(h: f64) -> f64 {
        let k = 12.0;
        let k1 = (k - PI * PI).sqrt();
        let grid = ResidualGrid {
            h,
            centers: (0..5).map(|i| vec![0.3 * i as f64]).collect(),
            y_count: 9,
            interfaces: vec![],
        };
        let r = pde_residual(
            |x, y| Complex64::from_polar(1.0, k1 * x[0]) * (PI * y).sin(),
            |_, _| 0.0,
            k,
            &grid,
        )
        .unwrap();
        assert!(r.boundary_max < 1e-15);
        r.max_relative
    }

    #[test]
    fn plane_wave_converges_at_second_order() {
        let (a, b) = (plane_wave_residual(1e-2), plane_wave_residual(5e-3));
        let order = (a / b).log2();
        assert!((order - 2.0).abs() < 0.05, "{a} {b} {order}");
    }

    #[test]
    fn outgoing_and_incoming_waves_n2() {
        let kappa = 2.0;
        let kernel = GreenKernel::new(2, ModeWavenumber::propagating(kappa), None).unwrap();
        let grid = Grid::cartesian(1, 4000, 0.01).unwrap();
        let out = SampledFunction::from_fn(grid, |x| kernel.eval(x[0].abs()).unwrap(), |_| true).unwrap();
        let inc = out.with_values(out.values.iter().map(|v| v.conj()).collect());
        let radii = [5.0, 10.0, 19.0];
        let k_m = ModeWavenumber::propagating(kappa);
        let a = radiation_check(&out, &k_m, &radii).unwrap();
        assert!(a.decaying && a.values.iter().all(|v| *v < 1e-3), "{a:?}");
        let b = radiation_check(&inc, &k_m, &radii).unwrap();
        assert!(!b.decaying, "{b:?}");
        assert!(matches!(radiation_check(&out, &k_m, &[25.0]), Err(Error::InsufficientExtent(_))));
    }

    #[test]
    fn outgoing_hankel_n3_decays() {
        let k_m = ModeWavenumber::propagating(1.0);
        let kernel = GreenKernel::new(3, k_m, None).unwrap();
        let grid = Grid::radial(2, 4200, 0.01).unwrap();
        let u = SampledFunction::from_fn(grid, |x| kernel.eval(x[0]).unwrap(), |_| true).unwrap();
        let r = radiation_check(&u, &k_m, &[10.0, 20.0, 40.0]).unwrap();
        assert!(r.decaying, "{r:?}");
        let inc = u.with_values(u.values.iter().map(|v| v.conj()).collect());
        assert!(!radiation_check(&inc, &k_m, &[10.0, 20.0, 40.0]).unwrap().decaying);
    }
}
