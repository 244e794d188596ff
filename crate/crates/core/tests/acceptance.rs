//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::f64::consts::PI;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use slabcert::bounds::{aggregate, best_mode_bound, GenericConstants, CALIBRATION_SEED};
use clap::Parser;
use slabcert::cli::{run, Cli};
use slabcert::kernel::{eval_g, hankel_identity_check, radial_residual, GreenKernel};
use slabcert::oracle::suite::{hardy_littlewood_rows, n2_suite};
use slabcert::quadrature::QuadratureSpec;
use slabcert::sharpness::{
    construct_evanescent_sharp, construct_propagating_staircase, construct_resonant, construct_subcritical, ResonantExample, Staircase,
};
use slabcert::spectral::{classify_k, ModeWavenumber, Resonance, SlabProblem, SupportDescriptor, DEFAULT_RESONANCE_TOLERANCE};

const PI2: f64 = PI * PI;

const SUBCRITICAL_REL: f64 = 1e-12;
const SUITE_TRIALS: usize = 100;
const SUITE_MARGIN_REL: f64 = 1e-6;
const SUITE_BUDGET: Duration = Duration::from_secs(60);
const KERNEL_RESIDUAL: f64 = 1e-5;
const YUKAWA_REL: f64 = 1e-8;
const HANKEL_TOL: f64 = 1e-8;
const HL_MARGIN: f64 = -1e-10;
const HL_BUDGET: Duration = Duration::from_secs(60);
const SUP_V_REL: f64 = 1e-9;
const SLAB_RESIDUAL: f64 = 1e-4;
/// Common bound on `‖V_m‖_∞/δ₋` across the staircase runs.
const STAIRCASE_CONSTANT: f64 = 2.5;
/// Lower edge of the band for the resonant `n = 3` ratio.
const N3_BAND_LOW: f64 = 0.05;
const RANDOM_PROBLEMS: usize = 50;
const TAIL_MODES: u32 = 20;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn subcritical_thresholds() -> Check {
    let mut worst: f64 = 0.0;
    for n in 2..=5 {
        let c = GenericConstants::defaults(n).map_err(err)?;
        for k in [0.0, 0.5 * PI2, 0.9 * PI2] {
            let p = SlabProblem::new(n, k, SupportDescriptor::MeasureOnly { measure: 100.0 }).map_err(err)?;
            let cert = aggregate(&p, &c).map_err(err)?;
            worst = worst.max((cert.threshold - (PI2 - k)).abs() / (PI2 - k));
        }
    }
    ensure(worst <= SUBCRITICAL_REL, format!("max relative error {worst:.2e}"))
}

fn n2_inequality_suite() -> Check {
    let start = Instant::now();
    let rows = n2_suite(SUITE_TRIALS, CALIBRATION_SEED, 1.0).map_err(err)?;
    let elapsed = start.elapsed();
    let bad = rows.iter().filter(|r| r.margin < -SUITE_MARGIN_REL * r.rhs).count();
    let worst = rows.iter().map(|r| r.margin / r.rhs).fold(f64::INFINITY, f64::min);
    ensure(
        bad == 0 && elapsed <= SUITE_BUDGET,
        format!("{} rows, {bad} below margin, min margin/rhs {worst:.3e}, {:.1}s", rows.len(), elapsed.as_secs_f64()),
    )
}

fn kernel_correctness() -> Check {
    let mut worst: f64 = 0.0;
    let radii: Vec<f64> = (0..60).map(|i| 0.05 * (400f64).powf(i as f64 / 59.0)).collect();
    for n in 2..=5 {
        for kappa in [0.5, 2.0, 10.0] {
            for k_m in [ModeWavenumber::evanescent(kappa), ModeWavenumber::propagating(kappa)] {
                let g = GreenKernel::new(n, k_m, None).map_err(err)?;
                for &r in &radii {
                    worst = worst.max(radial_residual(&g, r).map_err(err)?);
                }
            }
        }
    }
    let mut yukawa: f64 = 0.0;
    for kappa in [0.5, 2.0, 10.0] {
        let g = GreenKernel::new(4, ModeWavenumber::evanescent(kappa), None).map_err(err)?;
        for &r in &radii {
            let exact = (-kappa * r).exp() / (4.0 * PI * r);
            yukawa = yukawa.max((eval_g(&g, r).map_err(err)? - exact).norm() / exact);
        }
    }
    ensure(worst <= KERNEL_RESIDUAL && yukawa <= YUKAWA_REL, format!("max ODE residual {worst:.2e}, n = 4 evanescent {yukawa:.2e}"))
}

fn hankel_identity() -> Check {
    let mut worst: f64 = 0.0;
    for s in [0.5, 1.5] {
        for z in [0.5, 1.0, 5.0] {
            worst = worst.max(hankel_identity_check(s, z, &QuadratureSpec::default()).map_err(err)?);
        }
    }
    ensure(worst <= HANKEL_TOL, format!("max discrepancy {worst:.2e}"))
}

fn hardy_littlewood() -> Check {
    let start = Instant::now();
    let mut rows = hardy_littlewood_rows(1, 16, 1000, CALIBRATION_SEED).map_err(err)?;
    rows.extend(hardy_littlewood_rows(2, 16, 200, CALIBRATION_SEED + 1).map_err(err)?);
    let elapsed = start.elapsed();
    let min = rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    ensure(min >= HL_MARGIN && elapsed <= HL_BUDGET, format!("{} triples, min margin {min:.3e}, {:.1}s", rows.len(), elapsed.as_secs_f64()))
}

fn evanescent_bracket() -> Check {
    let c = GenericConstants::defaults(2).map_err(err)?;
    let mut qs = Vec::new();
    let mut inside = true;
    for delta in [10.0, 50.0, 250.0] {
        let built = construct_evanescent_sharp(2, delta, &c).map_err(err)?;
        let q = built.solution.v_norm.ok_or("no potential")? / (delta * delta);
        inside &= q >= 1.0 && q <= 1.0 + (delta + 1.0) / (delta * delta);
        qs.push(q);
    }
    let decreasing = qs.windows(2).all(|w| w[1] < w[0]);
    ensure(inside && decreasing, format!("|V|/delta^2 = {qs:.6?}"))
}

fn subcritical_construction() -> Check {
    let built = construct_subcritical(2, 0.0, 100.0).map_err(err)?;
    let exact = PI2 + PI / 100.0;
    let v = built.solution.v_norm.ok_or("no potential")?;
    let rel = (v - exact).abs() / exact;
    let slab = built.solution.slab_residual.ok_or("no slab residual")?;
    ensure(rel <= SUP_V_REL && slab <= SLAB_RESIDUAL, format!("sup V relative error {rel:.2e}, slab residual {slab:.2e}"))
}

fn staircase() -> Check {
    let c = GenericConstants::defaults(2).map_err(err)?;
    let mut ratios = Vec::new();
    for delta in [5.0, 10.0, 20.0] {
        let s = Staircase::new(delta).map_err(err)?;
        let eps = 1e-9;
        for x in s.breakpoints() {
            let (a, b) = (s.eval(x - eps), s.eval(x + eps));
            if (a.0 - b.0).abs() > 1e-8 || (a.1 - b.1).abs() > 1e-6 {
                return Err(format!("delta = {delta}: jump at x = {x}"));
            }
        }
        let max_dd = (0..=20_000).map(|i| s.eval(1.2 * i as f64 / 20_000.0).2.abs()).fold(0.0, f64::max);
        if max_dd > delta * (1.0 + 1e-12) {
            return Err(format!("delta = {delta}: |phi''| = {max_dd}"));
        }
        let built = construct_propagating_staircase(delta, &c).map_err(err)?;
        let sol = &built.solution;
        if sol.v_outside != 0.0 {
            return Err(format!("delta = {delta}: V = {} beyond B", sol.v_outside));
        }
        let off = sol.samples.iter().filter(|p| (delta * p.r).cos().abs() < 0.5 - 1e-9).map(|p| (p.f / p.u).norm()).fold(0.0, f64::max);
        if off != 0.0 {
            return Err(format!("delta = {delta}: V = {off} where |cos| < 1/2"));
        }
        ratios.push(sol.v_norm.ok_or("no potential")? / delta);
    }
    let max = ratios.iter().copied().fold(0.0, f64::max);
    ensure(max <= STAIRCASE_CONSTANT, format!("|V|/delta = {ratios:.4?}, C1 and |phi''| <= delta"))
}

fn n3_resonant_band() -> Check {
    let c = GenericConstants::defaults(3).map_err(err)?;
    let mut scaled = Vec::new();
    for t in [0.1, 0.03, 0.01] {
        let measure = t * PI;
        let built = construct_resonant(&ResonantExample::N3 { measure }, &c).map_err(err)?;
        let ratio = built.solution.norm_ratio.ok_or("no norm ratio")?;
        scaled.push(ratio / (t * (1.0 + (1.0 / t).ln())));
    }
    let ok = scaled.iter().all(|q| (N3_BAND_LOW..=1.0).contains(q));
    ensure(ok, format!("ratio / shape = {scaled:.4?}, band [{N3_BAND_LOW}, 1]"))
}

fn random_problem(rng: &mut ChaCha8Rng) -> SlabProblem {
    loop {
        let n = rng.gen_range(2..=5);
        let k = rng.gen_range(0.05..30.0) * PI2;
        if !matches!(classify_k(k, DEFAULT_RESONANCE_TOLERANCE), Resonance::NotInK) {
            continue;
        }
        let support = if rng.gen_bool(0.5) {
            SupportDescriptor::ball(n - 1, rng.gen_range(0.1..2.0))
        } else {
            SupportDescriptor::MeasureOnly { measure: rng.gen_range(0.01..5.0) }
        };
        if let Ok(p) = SlabProblem::new(n, k, support) {
            return p;
        }
    }
}

fn certificate_dominance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(CALIBRATION_SEED);
    let mut compared = 0;
    for _ in 0..RANDOM_PROBLEMS {
        let p = random_problem(&mut rng);
        let c = GenericConstants::defaults(p.n).map_err(err)?;
        let cert = aggregate(&p, &c).map_err(|e| format!("{p:?}: {e}"))?;
        for (t, v) in &cert.theorem_comparisons {
            compared += 1;
            if cert.aggregate_c > v * (1.0 + 1e-12) {
                return Err(format!("n = {}, k = {}: aggregate {} above {} = {v}", p.n, p.k, cert.aggregate_c, t.id()));
            }
        }
        for m in cert.m_tail() + 1..=cert.m_tail() + TAIL_MODES {
            let b = best_mode_bound(&p, m, &c).map_err(err)?;
            if b.c_m > cert.tail.c_tail {
                return Err(format!("n = {}, k = {}: mode {m} above the tail bound", p.n, p.k));
            }
        }
    }
    ensure(compared > 0, format!("{RANDOM_PROBLEMS} problems, {compared} theorem comparisons"))
}

fn run_all(out: &Path) -> Result<(), String> {
    let o = out.to_str().ok_or("non-utf8 path")?;
    let runs: [&[&str]; 5] = [
        &["verify"],
        &["sharpness", "--example", "staircase", "--params", "delta=10", "--dump"],
        &["sweep", "--example", "n3-resonant", "--param", "measure", "--from", "0.03", "--to", "0.3", "--points", "4"],
        &["kernel", "--n", "3", "--kappa", "2", "--class", "propagating"],
        &["calibrate", "--n", "5", "--trials", "2"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let dir = format!("{o}/{i}");
        let mut full = vec!["slabcert", "--out", dir.as_str()];
        full.extend_from_slice(args);
        let cli = Cli::try_parse_from(full).map_err(err)?;
        run(&cli).map_err(|f| format!("{args:?} exited with {}: {}", f.code, f.message))?;
    }
    Ok(())
}

fn csv_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files = Vec::new();
    for sub in std::fs::read_dir(dir).into_iter().flatten().flatten() {
        for f in std::fs::read_dir(sub.path()).into_iter().flatten().flatten() {
            let p = f.path();
            if p.extension().is_some_and(|e| e == "csv") {
                let name = p.strip_prefix(dir).unwrap().display().to_string();
                files.push((name, std::fs::read(&p).unwrap_or_default()));
            }
        }
    }
    files.sort();
    files
}

fn determinism() -> Check {
    let a = tempfile::tempdir().map_err(err)?;
    let b = tempfile::tempdir().map_err(err)?;
    run_all(a.path())?;
    run_all(b.path())?;
    let (fa, fb) = (csv_files(a.path()), csv_files(b.path()));
    ensure(!fa.is_empty() && fa == fb, format!("{} CSV files compared", fa.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("subcritical thresholds", subcritical_thresholds),
        ("n = 2 inequality suite", n2_inequality_suite),
        ("kernel correctness", kernel_correctness),
        ("hankel identity", hankel_identity),
        ("hardy-littlewood brute force", hardy_littlewood),
        ("evanescent sharpness bracket", evanescent_bracket),
        ("subcritical construction", subcritical_construction),
        ("staircase construction", staircase),
        ("resonant n = 3 band", n3_resonant_band),
        ("certificate dominance", certificate_dominance),
        ("determinism", determinism),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (tag, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] {:>2} {name}: {detail} ({:.1}s)", i + 1, t.elapsed().as_secs_f64());
    }
    println!("acceptance: {} of {} passed in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
