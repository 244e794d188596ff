//! The `slabcert` command line.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 invalid configuration,
//! 3 no applicable bound, 4 a verification row failed.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::bounds::{aggregate, GenericConstants, CALIBRATION_SEED, CALIBRATION_TRIALS};
use crate::config::{constants_hash, load_constants, ProblemFile, SweepParam, SweepScale, SweepSpec};
use crate::error::{Error, Result};
use crate::kernel::{kernel_bound, GreenKernel};
use crate::oracle::calibrate::calibrated_constants;
use crate::oracle::suite::{check_trials, hardy_littlewood_rows, n2_suite, problem_suite};
use crate::oracle::verify::{write_rows, VerificationRow};
use crate::report::{line_plot, mode_summary, write_mode_table, CertificateDocument, OutputDir};
use crate::sharpness::{run_example, write_reports, write_samples, ExampleParams};
use crate::spectral::ModeWavenumber;

/// Seed used when `--seed` is absent.
pub const DEFAULT_SEED: u64 = CALIBRATION_SEED;
/// Random `f` per lemma and mode in the `verify` suites.
pub const DEFAULT_VERIFY_TRIALS: usize = 10;
/// Hardy–Littlewood triples added to every `verify` run.
pub const HL_TRIPLES: usize = 100;

pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NO_BOUND: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "slabcert", version, about = "Uniqueness thresholds for -Δu = (k+V)u in a slab")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output directory.
    #[arg(long, global = true, default_value = "slabcert-out")]
    pub out: PathBuf,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// TOML file overriding the calibrated constants.
    #[arg(long, global = true)]
    pub constants: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    Evanescent,
    Propagating,
    Resonant,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certificate for a problem file.
    Bound {
        #[arg(long)]
        config: PathBuf,
    },
    /// Randomized inequality checks; the built-in n = 2 suite without --config.
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        trials: Option<usize>,
        /// Halve every c_m.
        #[arg(long)]
        stress: bool,
        /// Extra allowance on the margin, relative to the right-hand side.
        #[arg(long, default_value_t = 0.0)]
        tolerance: f64,
    },
    /// One sharpness construction.
    Sharpness {
        #[arg(long)]
        example: String,
        #[arg(long, default_value = "")]
        params: String,
        /// Also write the sampled profile.
        #[arg(long)]
        dump: bool,
    },
    /// Sharpness construction over a parameter range, from [sweep] in --config or flags.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        example: Option<String>,
        #[arg(long, value_enum)]
        param: Option<SweepParamArg>,
        #[arg(long)]
        from: Option<f64>,
        #[arg(long)]
        to: Option<f64>,
        #[arg(long, default_value_t = 5)]
        points: usize,
        #[arg(long, value_enum, default_value_t = ScaleArg::Geometric)]
        scale: ScaleArg,
        #[arg(long, default_value = "")]
        params: String,
    },
    /// Tabulate a fundamental solution.
    Kernel {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        kappa: f64,
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long, default_value_t = 0.05)]
        r_min: f64,
        #[arg(long, default_value_t = 20.0)]
        r_max: f64,
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
    /// Recalibrate the unnamed constants.
    Calibrate {
        #[arg(long, default_value_t = CALIBRATION_TRIALS)]
        trials: usize,
        /// Single dimension; all of 2..=8 when absent.
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParamArg {
    K,
    Delta,
    Measure,
    Rho,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScaleArg {
    Geometric,
    Linear,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidConfig(_) | Error::SizeViolation(_) => EXIT_CONFIG,
            Error::NoApplicableBound { .. } => EXIT_NO_BOUND,
            _ => EXIT_RUNTIME,
        };
        Self { code, message: e.to_string() }
    }
}

/// Errors while reading inputs count as configuration errors.
fn config_err(e: Error) -> Failure {
    Failure { code: EXIT_CONFIG, message: e.to_string() }
}

type Outcome = std::result::Result<String, Failure>;

fn csv_bytes<F: FnOnce(&mut Vec<u8>) -> Result<()>>(f: F) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

fn run_bound(cli: &Cli, config: &Path) -> Outcome {
    let file = ProblemFile::load(config).map_err(config_err)?;
    let problem = file.problem().map_err(config_err)?;
    let constants = load_constants(cli.constants.as_deref(), problem.n).map_err(config_err)?;
    let cert = aggregate(&problem, &constants)?;
    let hash = constants_hash(&constants);
    let mut out = OutputDir::create(&cli.out, "bound", cli.seed, Some(hash.clone()))?;
    let doc = CertificateDocument { constants_hash: hash, certificate: cert.clone() };
    out.write("certificate.json", &serde_json::to_vec_pretty(&doc).map_err(|e| Error::Io(e.to_string()))?)?;
    out.write("modes.csv", &csv_bytes(|b| write_mode_table(b, &cert))?)?;
    out.finish()?;
    Ok(mode_summary(&cert))
}

fn run_verify(cli: &Cli, config: Option<&Path>, trials: Option<usize>, stress: bool, tolerance: f64) -> Outcome {
    let factor = if stress { 0.5 } else { 1.0 };
    let file = config.map(ProblemFile::load).transpose().map_err(config_err)?;
    let trials = trials.or_else(|| file.as_ref().and_then(|f| f.verify.as_ref().map(|v| v.trials))).unwrap_or(DEFAULT_VERIFY_TRIALS);
    check_trials(trials).map_err(config_err)?;
    if !(tolerance >= 0.0) {
        return Err(config_err(Error::InvalidConfig("tolerance must be nonnegative".into())));
    }
    let (mut rows, hash) = match &file {
        None => (n2_suite(trials, cli.seed, factor)?, None),
        Some(f) => {
            let problem = f.problem().map_err(config_err)?;
            let constants = load_constants(cli.constants.as_deref(), problem.n).map_err(config_err)?;
            (problem_suite(&problem, &constants, trials, cli.seed, factor)?, Some(constants_hash(&constants)))
        }
    };
    rows.extend(hardy_littlewood_rows(1, 16, HL_TRIPLES, cli.seed ^ 0x4c48)?);
    for r in rows.iter_mut() {
        r.pass = r.pass || r.margin >= -tolerance * r.rhs;
    }
    let mut out = OutputDir::create(&cli.out, "verify", cli.seed, hash)?;
    out.write("verify.csv", &csv_bytes(|b| write_rows(b, &rows))?)?;
    out.finish()?;
    let failed: Vec<&VerificationRow> = rows.iter().filter(|r| !r.pass).collect();
    let summary = format!("{} rows, {} failed", rows.len(), failed.len());
    if failed.is_empty() {
        Ok(summary + "\n")
    } else {
        let worst = failed.iter().min_by(|a, b| (a.margin / a.rhs).total_cmp(&(b.margin / b.rhs))).expect("nonempty");
        Err(Failure { code: EXIT_VERIFY, message: format!("{summary}; worst: {} m = {} margin {:e}", worst.lemma, worst.m, worst.margin) })
    }
}

fn constants_for(cli: &Cli, params: &ExampleParams) -> std::result::Result<Option<GenericConstants>, Failure> {
    match &cli.constants {
        None => Ok(None),
        Some(p) => Ok(Some(load_constants(Some(p), params.n.unwrap_or(2)).map_err(config_err)?)),
    }
}

fn run_sharpness(cli: &Cli, example: &str, params: &str, dump: bool) -> Outcome {
    let params: ExampleParams = params.parse().map_err(config_err)?;
    let constants = constants_for(cli, &params)?;
    let built = run_example(example, &params, constants.as_ref())?;
    let mut out = OutputDir::create(&cli.out, "sharpness", cli.seed, constants.as_ref().map(constants_hash))?;
    out.write("sharpness.csv", &csv_bytes(|b| write_reports(b, std::slice::from_ref(&built.report)))?)?;
    if dump {
        out.write("samples.csv", &csv_bytes(|b| write_samples(b, &built.solution))?)?;
    }
    out.finish()?;
    let r = &built.report;
    let mut s = format!("{} param {}: bound {:.6e}, achieved {:.6e}, ratio {:.6}\n", r.example, r.param, r.bound, r.achieved, r.ratio);
    for note in built.solution.notes.iter().chain(std::iter::once(&r.note)) {
        let _ = writeln!(s, "  {note}");
    }
    let _ = writeln!(s, "  mode residual {:.2e}", built.solution.residual);
    Ok(s)
}

fn sweep_from_flags(
    example: Option<&str>,
    param: Option<SweepParamArg>,
    from: Option<f64>,
    to: Option<f64>,
    points: usize,
    scale: ScaleArg,
    params: &str,
) -> Result<SweepSpec> {
    let missing = |what: &str| Error::InvalidConfig(format!("sweep needs --{what} (or a [sweep] table in --config)"));
    Ok(SweepSpec {
        example: example.ok_or_else(|| missing("example"))?.to_string(),
        param: match param.ok_or_else(|| missing("param"))? {
            SweepParamArg::K => SweepParam::K,
            SweepParamArg::Delta => SweepParam::Delta,
            SweepParamArg::Measure => SweepParam::Measure,
            SweepParamArg::Rho => SweepParam::Rho,
        },
        from: from.ok_or_else(|| missing("from"))?,
        to: to.ok_or_else(|| missing("to"))?,
        points,
        scale: match scale {
            ScaleArg::Geometric => SweepScale::Geometric,
            ScaleArg::Linear => SweepScale::Linear,
        },
        params: params.to_string(),
    })
}

fn run_sweep(cli: &Cli, spec: SweepSpec) -> Outcome {
    spec.validate().map_err(config_err)?;
    let base: ExampleParams = spec.params.parse().map_err(config_err)?;
    let constants = constants_for(cli, &base)?;
    let reports = spec
        .values()
        .into_par_iter()
        .map(|v| {
            let mut p = base.clone();
            match spec.param {
                SweepParam::K => p.k = Some(v),
                SweepParam::Delta => p.delta = Some(v),
                SweepParam::Measure => p.measure = Some(v),
                SweepParam::Rho => p.r0 = Some(v),
            }
            run_example(&spec.example, &p, constants.as_ref()).map(|c| c.report)
        })
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<(f64, f64)> = reports.iter().map(|r| (r.param, r.ratio)).collect();
    let svg = line_plot(
        &format!("{}: ratio against {}", spec.example, spec.param.key()),
        spec.param.key(),
        "ratio",
        &points,
        spec.scale == SweepScale::Geometric,
        false,
    );
    let mut out = OutputDir::create(&cli.out, "sweep", cli.seed, constants.as_ref().map(constants_hash))?;
    out.write("sweep.csv", &csv_bytes(|b| write_reports(b, &reports))?)?;
    out.write("sweep.svg", svg.as_bytes())?;
    out.finish()?;
    let mut s = String::new();
    for r in &reports {
        let _ = writeln!(s, "{} = {:<12} ratio {:.6}", spec.param.key(), r.param, r.ratio);
    }
    Ok(s)
}

#[allow(clippy::too_many_arguments)]
fn run_kernel(cli: &Cli, n: usize, kappa: f64, class: ClassArg, rho: Option<f64>, r_min: f64, r_max: f64, points: usize) -> Outcome {
    if points < 2 || !(r_min > 0.0 && r_max > r_min) {
        return Err(config_err(Error::InvalidConfig("kernel table needs points >= 2 and 0 < r_min < r_max".into())));
    }
    let k_m = match class {
        ClassArg::Evanescent => ModeWavenumber::evanescent(kappa),
        ClassArg::Propagating => ModeWavenumber::propagating(kappa),
        ClassArg::Resonant => ModeWavenumber::resonant(),
    };
    let kernel = GreenKernel::new(n, k_m, rho).map_err(config_err)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["r", "re", "im", "bound"]).map_err(io)?;
    for i in 0..points {
        let r = r_min * (r_max / r_min).powf(i as f64 / (points - 1) as f64);
        let g = kernel.eval(r)?;
        let bound = kernel_bound(n, &k_m, r).map_or(String::new(), |b| b.to_string());
        w.write_record([r.to_string(), g.re.to_string(), g.im.to_string(), bound]).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    let mut out = OutputDir::create(&cli.out, "kernel", cli.seed, None)?;
    let path = out.write("kernel.csv", &bytes)?;
    out.finish()?;
    Ok(format!("{points} rows written to {}\n", path.display()))
}

fn run_calibrate(cli: &Cli, trials: usize, n: Option<usize>) -> Outcome {
    check_trials(trials).map_err(config_err)?;
    let dims: Vec<usize> = match n {
        Some(n) if (2..=8).contains(&n) => vec![n],
        Some(n) => return Err(config_err(Error::InvalidConfig(format!("calibration covers 2 <= n <= 8, got {n}")))),
        None => (2..=8).collect(),
    };
    let rows = dims.par_iter().map(|&n| calibrated_constants(n, trials, cli.seed).map(|c| (n, c))).collect::<Result<Vec<_>>>()?;
    let mut out = OutputDir::create(&cli.out, "calibrate", cli.seed, None)?;
    let mut table = String::from("n,agmon,lorentz,small_gap,young,resonant_power\n");
    let mut s = String::new();
    for (n, c) in &rows {
        let mut toml = String::new();
        let mut cells = vec![n.to_string()];
        for (name, v) in c.entries() {
            cells.push(v.map_or(String::new(), |v| v.value.to_string()));
            if let Some(v) = v {
                let _ = writeln!(toml, "{name} = {}", v.value);
            }
        }
        table.push_str(&cells.join(","));
        table.push('\n');
        out.write(&format!("constants_n{n}.toml"), toml.as_bytes())?;
        let _ = writeln!(s, "n = {n}: {}", cells[1..].join(" "));
    }
    out.write("calibration.csv", table.as_bytes())?;
    out.finish()?;
    Ok(s)
}

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Bound { config } => run_bound(cli, config),
        Command::Verify { config, trials, stress, tolerance } => run_verify(cli, config.as_deref(), *trials, *stress, *tolerance),
        Command::Sharpness { example, params, dump } => run_sharpness(cli, example, params, *dump),
        Command::Sweep { config, example, param, from, to, points, scale, params } => {
            let spec = match config {
                Some(path) => {
                    let file = ProblemFile::load(path).map_err(config_err)?;
                    file.sweep.ok_or_else(|| config_err(Error::InvalidConfig("config has no [sweep] table".into())))?
                }
                None => sweep_from_flags(example.as_deref(), *param, *from, *to, *points, *scale, params).map_err(config_err)?,
            };
            run_sweep(cli, spec)
        }
        Command::Kernel { n, kappa, class, rho, r_min, r_max, points } => run_kernel(cli, *n, *kappa, *class, *rho, *r_min, *r_max, *points),
        Command::Calibrate { trials, n } => run_calibrate(cli, *trials, *n),
    }
}

/// Parses `args`, runs the command, prints its output and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { 0 };
        }
    };
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
