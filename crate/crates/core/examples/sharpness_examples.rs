//! Build every sharpness construction and print its tightness row.

use slabcert::sharpness::{run_example, write_reports, ExampleParams};

fn main() -> slabcert::Result<()> {
    let runs = [
        ("dlarge", "n=2,delta=5"),
        ("dlarge", "n=3,delta=1,class=propagating"),
        ("dlarge", "n=4,delta=2"),
        ("evanescent-sharp", "delta=10"),
        ("evanescent-sharp", "delta=50"),
        ("evanescent-sharp", "delta=250"),
        ("evanescent-sharp", "delta=0.1"),
        ("evanescent-sharp", "n=4,delta=0.1"),
        ("evanescent-sharp", "n=4,delta=0.01"),
        ("staircase", "delta=5"),
        ("staircase", "delta=10"),
        ("staircase", "delta=20"),
        ("n3-log", "delta=0.01"),
        ("subcritical", "n=2,k=0,r0=100"),
        ("n2-resonant", "measure=0.03"),
        ("n2-two-mode", "measure=0.03"),
        ("n3-resonant", "measure=0.314159"),
        ("n4-resonant", "n=5,measure=1"),
    ];
    let mut reports = Vec::new();
    for (id, params) in runs {
        let built = run_example(id, &params.parse::<ExampleParams>()?, None)?;
        let s = &built.solution;
        eprintln!("{id:>17} {params:<30} residual {:.1e}  {}", s.residual, s.notes.join("; "));
        reports.push(built.report);
    }
    write_reports(std::io::stdout().lock(), &reports)
}
