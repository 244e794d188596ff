//! Randomized checks of the per-mode inequalities, plus the same run with every
//! constant halved to show that the checks can fail.

use std::collections::BTreeSet;

use slabcert::bounds::CALIBRATION_SEED;
use slabcert::oracle::suite::n2_suite;

fn main() -> slabcert::Result<()> {
    for factor in [1.0, 0.5] {
        let rows = n2_suite(20, CALIBRATION_SEED, factor)?;
        let failed = rows.iter().filter(|r| !r.pass).count();
        let tightest = rows.iter().map(|r| r.lhs / r.rhs).fold(0.0, f64::max);
        println!("c_m x {factor}: {} checks, {failed} failed, largest lhs/rhs {tightest:.4}", rows.len());
        let lemmas: BTreeSet<&str> = rows.iter().map(|r| r.lemma.as_str()).collect();
        for lemma in lemmas {
            let worst = rows.iter().filter(|r| r.lemma == lemma).map(|r| r.lhs / r.rhs).fold(0.0, f64::max);
            println!("  {lemma:<14} max lhs/rhs {worst:.4}");
        }
    }
    Ok(())
}
