//! Uniqueness certificates for a few slab problems, printed as mode tables.

use std::f64::consts::PI;

use slabcert::bounds::{aggregate, GenericConstants};
use slabcert::report::mode_summary;
use slabcert::spectral::{spectral_gaps, SlabProblem, SupportDescriptor, DEFAULT_RESONANCE_TOLERANCE};

fn main() -> slabcert::Result<()> {
    let pi2 = PI * PI;
    let problems = [
        SlabProblem::new(2, 0.5 * pi2, SupportDescriptor::MeasureOnly { measure: 1.0 })?,
        SlabProblem::new(2, 2.0 * pi2, SupportDescriptor::MeasureOnly { measure: 0.1 })?,
        SlabProblem::new(3, 2.0 * pi2, SupportDescriptor::Ball { center: vec![0.0, 0.0], radius: 1.0, measure: 1.0 })?,
        SlabProblem::new(4, 9.5 * pi2, SupportDescriptor::ball(3, 0.5))?,
    ];
    for p in &problems {
        let gaps = spectral_gaps(p.k, DEFAULT_RESONANCE_TOLERANCE)?;
        println!("n = {}, k = {:.4} (delta+ = {:.4}, delta- = {:.4}), |I| = {:.4}", p.n, p.k, gaps.delta_plus, gaps.delta_minus, p.support.measure());
        let cert = aggregate(p, &GenericConstants::defaults(p.n)?)?;
        println!("{}", mode_summary(&cert));
    }
    Ok(())
}
