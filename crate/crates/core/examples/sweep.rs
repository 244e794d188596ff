//! Tightness of the evanescent bound as the gap grows, written as CSV and SVG.

use slabcert::report::line_plot;
use slabcert::sharpness::{run_example, write_reports, ExampleParams};

fn main() -> slabcert::Result<()> {
    let mut reports = Vec::new();
    for i in 0..9 {
        let delta = 10.0 * 25f64.powf(i as f64 / 8.0);
        let params = ExampleParams { n: Some(2), delta: Some(delta), ..Default::default() };
        reports.push(run_example("evanescent-sharp", &params, None)?.report);
    }
    write_reports(std::io::stdout(), &reports)?;
    let points: Vec<(f64, f64)> = reports.iter().map(|r| (r.param, r.ratio)).collect();
    let svg = line_plot("evanescent sharpness", "delta+", "bound / achieved", &points, true, false);
    let path = std::env::temp_dir().join("slabcert-sweep.svg");
    std::fs::write(&path, svg)?;
    eprintln!("plot written to {}", path.display());
    Ok(())
}
