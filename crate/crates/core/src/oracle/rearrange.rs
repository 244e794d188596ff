//! Symmetric decreasing rearrangement.
//!
//! On a Cartesian grid the rearrangement is a permutation: values sorted in
//! decreasing order are assigned to nodes sorted by `(distance to center, index)`.
//! In one dimension there is also the exact rearrangement of the step function
//! the samples represent, which lives on the half-spacing grid.

use num_complex::Complex64;

use super::grid::{Geometry, SampledFunction};
use crate::error::{Error, Result};

pub(crate) fn nonnegative(f: &SampledFunction) -> Result<Vec<f64>> {
    f.values
        .iter()
        .map(|v| if v.im == 0.0 && v.re >= 0.0 { Ok(v.re) } else { Err(Error::NegativeValues) })
        .collect()
}

/// Integer lattice position of each node: axis index minus `nodes / 2`.
pub(crate) fn lattice_positions(f: &SampledFunction) -> Vec<Vec<i64>> {
    let n = f.grid.nodes();
    let c = (n / 2) as i64;
    (0..f.grid.len())
        .map(|idx| match f.grid.dim() {
            1 => vec![idx as i64 - c],
            _ => vec![(idx / n) as i64 - c, (idx % n) as i64 - c],
        })
        .collect()
}

/// Node indices in rearrangement order.
pub(crate) fn radial_order(f: &SampledFunction) -> Vec<usize> {
    let pos = lattice_positions(f);
    let mut order: Vec<usize> = (0..pos.len()).collect();
    order.sort_by_key(|&i| (pos[i].iter().map(|p| p * p).sum::<i64>(), i));
    order
}

/// Discrete symmetric decreasing rearrangement on a Cartesian grid.
pub fn rearrange(f: &SampledFunction) -> Result<SampledFunction> {
    if !matches!(f.grid.geometry, Geometry::Cartesian { .. }) {
        return Err(Error::UnsupportedDimension(f.grid.dim()));
    }
    let mut vals = nonnegative(f)?;
    vals.sort_by(|a, b| b.total_cmp(a));
    let mut out = vec![Complex64::new(0.0, 0.0); vals.len()];
    for (slot, v) in radial_order(f).into_iter().zip(vals) {
        out[slot] = Complex64::new(v, 0.0);
    }
    Ok(f.with_values(out))
}

/// Each value repeated on two half-cells.
pub fn upsample_1d(values: &[f64]) -> Vec<f64> {
    values.iter().flat_map(|v| [*v, *v]).collect()
}

/// Exact rearrangement of the step function with the given cell values, on the
/// half-spacing grid: the `p`-th largest value occupies the `p`-th symmetric pair of
/// half-cells around the origin.
pub fn rearrange_step_1d(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut sorted = upsample_1d(values);
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut out = vec![0.0; 2 * n];
    for p in 0..n {
        out[n + p] = sorted[2 * p];
        out[n - 1 - p] = sorted[2 * p + 1];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::grid::Grid;
    use crate::oracle::norms::lp_norm;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn real(grid: Grid, v: &[f64]) -> SampledFunction {
        SampledFunction::from_real(grid, v).unwrap()
    }

    #[test]
    fn fixed_point() {
        let grid = Grid::cartesian(1, 7, 1.0).unwrap();
        let f = real(grid, &[0.1, 0.5, 2.0, 3.0, 2.0, 0.5, 0.1]);
        assert_eq!(rearrange(&f).unwrap().values, f.values);
    }

    #[test]
    fn preserves_norms() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let grid = Grid::cartesian(2, 9, 0.3).unwrap();
        let v: Vec<f64> = (0..81).map(|_| rng.gen::<f64>()).collect();
        let f = real(grid, &v);
        let r = rearrange(&f).unwrap();
        for p in [1.0, 2.0, 3.5] {
            assert!((lp_norm(&f, p) - lp_norm(&r, p)).abs() < 1e-12);
        }
    }

    #[test]
    fn two_bumps_become_one() {
        let grid = Grid::cartesian(1, 11, 1.0).unwrap();
        let v = [0.0, 1.0, 3.0, 1.0, 0.0, 0.0, 0.0, 2.0, 4.0, 2.0, 0.0];
        let r = rearrange(&real(grid, &v)).unwrap();
        // brute force: sort the values, then fill 0, -1, +1, -2, +2, ...
        let mut sorted = v.to_vec();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let slots = [5, 4, 6, 3, 7, 2, 8, 1, 9, 0, 10];
        let mut want = [0.0; 11];
        for (s, x) in slots.iter().zip(&sorted) {
            want[*s] = *x;
        }
        let got: Vec<f64> = r.values.iter().map(|c| c.re).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn rejects_negative() {
        let grid = Grid::cartesian(1, 3, 1.0).unwrap();
        assert!(matches!(rearrange(&real(grid, &[1.0, -1.0, 0.0])), Err(Error::NegativeValues)));
    }

    #[test]
    fn step_rearrangement_is_symmetric_and_equimeasurable() {
        let v = [0.3, 0.0, 2.0, 1.0];
        let r = rearrange_step_1d(&v);
        assert_eq!(r, vec![0.0, 0.3, 1.0, 2.0, 2.0, 1.0, 0.3, 0.0]);
        let mut a = upsample_1d(&v);
        let mut b = r.clone();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        assert_eq!(a, b);
    }
}
