//! Uniform sample grids on `ℝ^d` and functions sampled on them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::unit_sphere_area;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Geometry {
    /// `nodes` points per axis at `(i − (nodes−1)/2)·h`, each the center of a cube of side `h`.
    Cartesian { dim: usize, nodes: usize },
    /// Radial profile at `r_i = (i + 1/2)·h`, each the midpoint of the shell `[ih, (i+1)h]`.
    Radial { dim: usize, nodes: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub geometry: Geometry,
    pub h: f64,
}

impl Grid {
    pub fn cartesian(dim: usize, nodes: usize, h: f64) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        Self::checked(Geometry::Cartesian { dim, nodes }, h)
    }

    pub fn radial(dim: usize, nodes: usize, h: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::UnsupportedDimension(dim));
        }
        Self::checked(Geometry::Radial { dim, nodes }, h)
    }

    fn checked(geometry: Geometry, h: f64) -> Result<Self> {
        let nodes = match geometry {
            Geometry::Cartesian { nodes, .. } | Geometry::Radial { nodes, .. } => nodes,
        };
        if nodes == 0 || !(h > 0.0 && h.is_finite()) {
            return Err(Error::GridTooCoarse(format!("{nodes} nodes with spacing {h}")));
        }
        Ok(Self { geometry, h })
    }

    /// Cartesian grid with odd node count whose cells cover `[-half_width, half_width]^dim`,
    /// with spacing at most `h_max`.
    pub fn covering(dim: usize, half_width: f64, h_max: f64) -> Result<Self> {
        let mut nodes = (2.0 * half_width / h_max).ceil() as usize;
        if nodes.is_multiple_of(2) {
            nodes += 1;
        }
        Self::cartesian(dim, nodes, 2.0 * half_width / nodes as f64)
    }

    /// Radial grid of `nodes` shells covering `[0, radius]`.
    pub fn radial_covering(dim: usize, radius: f64, h_max: f64) -> Result<Self> {
        let nodes = (radius / h_max).ceil() as usize;
        Self::radial(dim, nodes, radius / nodes as f64)
    }

    pub fn dim(&self) -> usize {
        match self.geometry {
            Geometry::Cartesian { dim, .. } | Geometry::Radial { dim, .. } => dim,
        }
    }

    /// Nodes per axis (Cartesian) or number of shells (radial).
    pub fn nodes(&self) -> usize {
        match self.geometry {
            Geometry::Cartesian { nodes, .. } | Geometry::Radial { nodes, .. } => nodes,
        }
    }

    pub fn is_radial(&self) -> bool {
        matches!(self.geometry, Geometry::Radial { .. })
    }

    pub fn len(&self) -> usize {
        match self.geometry {
            Geometry::Cartesian { dim, nodes } => nodes.pow(dim as u32),
            Geometry::Radial { nodes, .. } => nodes,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Signed index offset of axis position `i` from the center.
    pub fn offset(&self, i: usize) -> f64 {
        i as f64 - (self.nodes() as f64 - 1.0) / 2.0
    }

    /// Cartesian coordinates of node `idx`; radial grids return `[r]`.
    pub fn point(&self, idx: usize) -> Vec<f64> {
        match self.geometry {
            Geometry::Cartesian { dim: 1, .. } => vec![self.offset(idx) * self.h],
            Geometry::Cartesian { nodes, .. } => {
                vec![self.offset(idx / nodes) * self.h, self.offset(idx % nodes) * self.h]
            }
            Geometry::Radial { .. } => vec![(idx as f64 + 0.5) * self.h],
        }
    }

    pub fn radius(&self, idx: usize) -> f64 {
        self.point(idx).iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Measure of the cell around node `idx`.
    pub fn weight(&self, idx: usize) -> f64 {
        match self.geometry {
            Geometry::Cartesian { dim, .. } => self.h.powi(dim as i32),
            Geometry::Radial { dim, .. } => {
                let (a, b) = (idx as f64, idx as f64 + 1.0);
                unit_sphere_area(dim) / dim as f64 * (b.powi(dim as i32) - a.powi(dim as i32)) * self.h.powi(dim as i32)
            }
        }
    }

    /// Radius of the smallest centered ball containing every cell.
    pub fn extent(&self) -> f64 {
        match self.geometry {
            Geometry::Cartesian { dim, nodes } => nodes as f64 * self.h / 2.0 * (dim as f64).sqrt(),
            Geometry::Radial { nodes, .. } => nodes as f64 * self.h,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    pub grid: Grid,
    pub values: Vec<Complex64>,
    /// Nodes inside the support set `I`.
    pub mask: Vec<bool>,
}

impl SampledFunction {
    pub fn new(grid: Grid, values: Vec<Complex64>, mask: Vec<bool>) -> Result<Self> {
        if values.len() != grid.len() || mask.len() != grid.len() {
            return Err(Error::GridTooCoarse(format!(
                "{} values and {} mask entries for a grid of {} nodes",
                values.len(),
                mask.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::DomainError("non-finite sample".into()));
        }
        Ok(Self { grid, values, mask })
    }

    pub fn from_fn<F, M>(grid: Grid, f: F, inside: M) -> Result<Self>
    where
        F: Fn(&[f64]) -> Complex64,
        M: Fn(&[f64]) -> bool,
    {
        let pts: Vec<Vec<f64>> = (0..grid.len()).map(|i| grid.point(i)).collect();
        Self::new(grid, pts.iter().map(|p| f(p)).collect(), pts.iter().map(|p| inside(p)).collect())
    }

    pub fn from_real(grid: Grid, values: &[f64]) -> Result<Self> {
        Self::new(grid, values.iter().map(|v| Complex64::new(*v, 0.0)).collect(), vec![true; values.len()])
    }

    pub fn zeros_like(&self) -> Self {
        Self { grid: self.grid, values: vec![Complex64::new(0.0, 0.0); self.values.len()], mask: self.mask.clone() }
    }

    pub fn with_values(&self, values: Vec<Complex64>) -> Self {
        Self { grid: self.grid, values, mask: self.mask.clone() }
    }

    pub fn scale(&self, a: Complex64) -> Self {
        self.with_values(self.values.iter().map(|v| v * a).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.with_values(self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect())
    }

    /// `|I|` as seen by the grid.
    pub fn support_measure(&self) -> f64 {
        (0..self.grid.len()).filter(|&i| self.mask[i]).map(|i| self.grid.weight(i)).sum()
    }

    /// Half-resolution copy used for discretization-error estimates.
    ///
    /// Cartesian grids keep every other node (the center survives); radial grids merge
    /// neighbouring shells with volume weights.
    pub fn coarsen(&self) -> Result<Self> {
        match self.grid.geometry {
            Geometry::Cartesian { dim, nodes } => {
                if nodes < 5 {
                    return Err(Error::GridTooCoarse("cannot coarsen below 5 nodes".into()));
                }
                let center = (nodes - 1) / 2;
                let start = center % 2;
                let keep: Vec<usize> = (start..nodes).step_by(2).collect();
                let grid = Grid::cartesian(dim, keep.len(), 2.0 * self.grid.h)?;
                let mut values = Vec::with_capacity(grid.len());
                let mut mask = Vec::with_capacity(grid.len());
                if dim == 1 {
                    for &i in &keep {
                        values.push(self.values[i]);
                        mask.push(self.mask[i]);
                    }
                } else {
                    for &i in &keep {
                        for &j in &keep {
                            values.push(self.values[i * nodes + j]);
                            mask.push(self.mask[i * nodes + j]);
                        }
                    }
                }
                Self::new(grid, values, mask)
            }
            Geometry::Radial { dim, nodes } => {
                let coarse = nodes / 2;
                if coarse < 2 {
                    return Err(Error::GridTooCoarse("cannot coarsen below 4 shells".into()));
                }
                let grid = Grid::radial(dim, coarse, 2.0 * self.grid.h)?;
                let mut values = Vec::with_capacity(coarse);
                let mut mask = Vec::with_capacity(coarse);
                for i in 0..coarse {
                    let (a, b) = (2 * i, 2 * i + 1);
                    let (wa, wb) = (self.grid.weight(a), self.grid.weight(b));
                    values.push((self.values[a] * wa + self.values[b] * wb) / (wa + wb));
                    mask.push(self.mask[a] || self.mask[b]);
                }
                Self::new(grid, values, mask)
            }
        }
    }
}
