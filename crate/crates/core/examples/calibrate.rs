//! Calibrate the unnamed lemma constants for every supported dimension and print
//! them as a table (the values frozen into the default constants).

use slabcert::bounds::{CALIBRATION_SEED, CALIBRATION_TRIALS};
use slabcert::oracle::default_table;

fn main() -> slabcert::Result<()> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(CALIBRATION_TRIALS);
    let start = std::time::Instant::now();
    let table = default_table(trials, CALIBRATION_SEED)?;
    let fmt = |c: Option<slabcert::bounds::Constant>| c.map_or("f64::NAN".to_string(), |c| format!("{:.6}", c.value));
    for row in &table {
        let c = &row.constants;
        println!(
            "({}, [{}, {}, {}, {}, {}]),",
            row.n,
            fmt(c.agmon),
            fmt(c.lorentz),
            fmt(c.small_gap),
            fmt(c.young),
            fmt(c.resonant_power)
        );
    }
    eprintln!("{trials} trials per lemma in {:.1?}", start.elapsed());
    Ok(())
}
