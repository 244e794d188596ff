//! Symmetric decreasing rearrangement of a two-bump profile and the rearrangement
//! inequality on random triples.

use slabcert::oracle::suite::hardy_littlewood_rows;
use slabcert::oracle::{rearrange, Grid, SampledFunction};

fn main() -> slabcert::Result<()> {
    let grid = Grid::cartesian(1, 16, 1.0)?;
    let values: Vec<f64> = (0..16).map(|i| if (2..4).contains(&i) { 1.0 } else if (10..13).contains(&i) { 0.5 } else { 0.0 }).collect();
    let f = SampledFunction::from_real(grid, &values)?;
    let r = rearrange(&f)?;
    let show = |g: &SampledFunction| g.values.iter().map(|v| format!("{:.1}", v.re)).collect::<Vec<_>>().join(" ");
    println!("f  : {}", show(&f));
    println!("f* : {}", show(&r));
    for dim in [1, 2] {
        let rows = hardy_littlewood_rows(dim, 16, 200, 7)?;
        let min = rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
        println!("{dim}-d: {} triples, min margin {min:.3e}", rows.len());
    }
    Ok(())
}
