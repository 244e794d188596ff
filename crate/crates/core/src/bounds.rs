//! Per-mode constants `c_m`, their aggregate `c = sup_m c_m`, and the resulting
//! uniqueness certificate `‖V‖_∞ < 1/c`.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::spectral::{
    classify_k, first_evanescent, spectral_gaps, ModeClass, ModeWavenumber, Resonance, SlabProblem, SupportDescriptor,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Explicit,
    Calibrated,
    UserSupplied,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constant {
    pub value: f64,
    pub provenance: Provenance,
}

impl Constant {
    pub fn calibrated(value: f64) -> Self {
        Self { value, provenance: Provenance::Calibrated }
    }

    pub fn user(value: f64) -> Self {
        Self { value, provenance: Provenance::UserSupplied }
    }
}

/// Unnamed constants of the non-explicit lemmas, for one dimension `n`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GenericConstants {
    pub agmon: Option<Constant>,
    pub lorentz: Option<Constant>,
    pub small_gap: Option<Constant>,
    pub young: Option<Constant>,
    pub resonant_power: Option<Constant>,
}

/// Frozen output of `oracle::calibrate::default_table` (seed [`CALIBRATION_SEED`],
/// [`CALIBRATION_TRIALS`] trials). Columns: agmon, lorentz, small_gap, young, resonant_power.
const DEFAULT_TABLE: [(usize, [f64; 5]); 7] = [
    (2, [1.098818, f64::NAN, f64::NAN, f64::NAN, f64::NAN]),
    (3, [0.812941, 0.297276, 0.222381, f64::NAN, f64::NAN]),
    (4, [0.746574, f64::NAN, f64::NAN, 0.085768, 0.171565]),
    (5, [0.714018, f64::NAN, f64::NAN, 0.067472, 0.085623]),
    (6, [0.699516, f64::NAN, f64::NAN, 0.053659, 0.057356]),
    (7, [0.697037, f64::NAN, f64::NAN, 0.042632, 0.043336]),
    (8, [0.694904, f64::NAN, f64::NAN, 0.034831, 0.034960]),
];

pub const CALIBRATION_SEED: u64 = 20_240_611;
pub const CALIBRATION_TRIALS: usize = 24;

impl GenericConstants {
    /// Calibrated defaults for `2 ≤ n ≤ 8`.
    pub fn defaults(n: usize) -> Result<Self> {
        let row = DEFAULT_TABLE
            .iter()
            .find(|(d, _)| *d == n)
            .map(|(_, r)| r)
            .ok_or_else(|| Error::InvalidConfig(format!("no default constants for n = {n}; supply a constants file")))?;
        let pick = |v: f64| (!v.is_nan()).then(|| Constant::calibrated(v));
        Ok(Self {
            agmon: pick(row[0]),
            lorentz: pick(row[1]),
            small_gap: pick(row[2]),
            young: pick(row[3]),
            resonant_power: pick(row[4]),
        })
    }

    pub fn validate(&self) -> Result<()> {
        for (name, c) in self.entries() {
            if let Some(c) = c {
                if !(c.value > 0.0 && c.value.is_finite()) {
                    return Err(Error::InvalidConfig(format!("constant {name} must be positive, got {}", c.value)));
                }
            }
        }
        Ok(())
    }

    pub fn entries(&self) -> [(&'static str, Option<Constant>); 5] {
        [
            ("agmon", self.agmon),
            ("lorentz", self.lorentz),
            ("small_gap", self.small_gap),
            ("young", self.young),
            ("resonant_power", self.resonant_power),
        ]
    }

    /// Every constant scaled by `factor`, keeping provenance.
    pub fn scaled(&self, factor: f64) -> Self {
        let s = |c: Option<Constant>| c.map(|c| Constant { value: c.value * factor, ..c });
        Self {
            agmon: s(self.agmon),
            lorentz: s(self.lorentz),
            small_gap: s(self.small_gap),
            young: s(self.young),
            resonant_power: s(self.resonant_power),
        }
    }
}

fn need(c: Option<Constant>, name: &str) -> Result<f64> {
    c.map(|c| c.value).ok_or_else(|| Error::NotApplicable(format!("constant {name} not available")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Lemma {
    Fourier,
    Agmon,
    N2,
    N2Resonant,
    N3Lorentz,
    N3SmallGap,
    N3Resonant,
    N4,
    N4Resonant,
}

impl Lemma {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Fourier => "fourier",
            Self::Agmon => "agmon",
            Self::N2 => "n2",
            Self::N2Resonant => "n2_resonant",
            Self::N3Lorentz => "n3_lorentz",
            Self::N3SmallGap => "n3_small_gap",
            Self::N3Resonant => "n3_resonant",
            Self::N4 => "n4",
            Self::N4Resonant => "n4_resonant",
        }
    }

    /// Whether the constant is proven rather than calibrated.
    pub fn is_explicit(&self) -> bool {
        matches!(self, Self::Fourier | Self::N2 | Self::N2Resonant | Self::N3Resonant)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeBound {
    pub m: u32,
    pub k_m: ModeWavenumber,
    /// `+∞` only when nothing applies.
    pub c_m: f64,
    pub source: Option<Lemma>,
    /// Every lemma whose hypotheses held, with its value.
    pub applicability: Vec<(Lemma, f64)>,
}

impl ModeBound {
    fn single(k_m: &ModeWavenumber, lemma: Lemma, c_m: f64) -> Self {
        Self { m: k_m.m, k_m: *k_m, c_m, source: Some(lemma), applicability: vec![(lemma, c_m)] }
    }
}

fn not_applicable(lemma: Lemma, why: &str) -> Error {
    Error::NotApplicable(format!("{}: {why}", lemma.name()))
}

pub fn cm_fourier(k_m: &ModeWavenumber) -> Result<ModeBound> {
    if k_m.class != ModeClass::Evanescent {
        return Err(not_applicable(Lemma::Fourier, "mode is not evanescent"));
    }
    Ok(ModeBound::single(k_m, Lemma::Fourier, 1.0 / k_m.value.norm_sqr()))
}

pub fn cm_agmon(k_m: &ModeWavenumber, support: &SupportDescriptor, c: &GenericConstants) -> Result<ModeBound> {
    if k_m.class != ModeClass::Propagating {
        return Err(not_applicable(Lemma::Agmon, "mode is not propagating"));
    }
    let rho = support.radius().ok_or_else(|| not_applicable(Lemma::Agmon, "support radius unknown"))?;
    let kappa = k_m.abs();
    if rho * kappa <= 0.1 {
        return Err(not_applicable(Lemma::Agmon, "rho*k_m <= 0.1"));
    }
    Ok(ModeBound::single(k_m, Lemma::Agmon, need(c.agmon, "agmon")? * rho / kappa))
}

pub fn cm_n2(n: usize, k_m: &ModeWavenumber, measure: f64) -> Result<ModeBound> {
    if n != 2 || k_m.class == ModeClass::Resonant {
        return Err(not_applicable(Lemma::N2, "needs n = 2 and a nonresonant mode"));
    }
    Ok(ModeBound::single(k_m, Lemma::N2, measure / (2.0 * k_m.abs())))
}

pub fn cm_n2_resonant(n: usize, k_m: &ModeWavenumber, support: &SupportDescriptor) -> Result<ModeBound> {
    if n != 2 || k_m.class != ModeClass::Resonant {
        return Err(not_applicable(Lemma::N2Resonant, "needs n = 2 and a resonant mode"));
    }
    match support.radius() {
        Some(rho) if rho >= 1.0 => Ok(ModeBound::single(k_m, Lemma::N2Resonant, 2.0 * rho * support.measure())),
        Some(_) => Err(not_applicable(Lemma::N2Resonant, "radius below 1")),
        None => Err(not_applicable(Lemma::N2Resonant, "support radius unknown")),
    }
}

pub fn cm_n3_lorentz(n: usize, k_m: &ModeWavenumber, measure: f64, c: &GenericConstants) -> Result<ModeBound> {
    if n != 3 || k_m.class == ModeClass::Resonant {
        return Err(not_applicable(Lemma::N3Lorentz, "needs n = 3 and a nonresonant mode"));
    }
    let v = need(c.lorentz, "lorentz")? * k_m.abs().powf(-0.5) * measure.powf(0.75);
    Ok(ModeBound::single(k_m, Lemma::N3Lorentz, v))
}

/// `4π^{-1/2}|k_m||I|^{1/2} < 1`.
pub fn small_gap_hypothesis(kappa: f64, measure: f64) -> bool {
    let t = 4.0 / PI.sqrt() * kappa * measure.sqrt();
    t > 0.0 && t < 1.0
}

pub fn cm_n3_smallgap(n: usize, k_m: &ModeWavenumber, measure: f64, c: &GenericConstants) -> Result<ModeBound> {
    if n != 3 || k_m.class == ModeClass::Resonant {
        return Err(not_applicable(Lemma::N3SmallGap, "needs n = 3 and a nonresonant mode"));
    }
    let kappa = k_m.abs();
    if !small_gap_hypothesis(kappa, measure) {
        return Err(not_applicable(Lemma::N3SmallGap, "4|k_m||I|^(1/2)/sqrt(pi) >= 1"));
    }
    let v = need(c.small_gap, "small_gap")? * measure * (1.0 - (measure.sqrt() * kappa).ln());
    Ok(ModeBound::single(k_m, Lemma::N3SmallGap, v))
}

pub fn cm_n3_resonant(n: usize, k_m: &ModeWavenumber, support: &SupportDescriptor) -> Result<ModeBound> {
    if n != 3 || k_m.class != ModeClass::Resonant {
        return Err(not_applicable(Lemma::N3Resonant, "needs n = 3 and a resonant mode"));
    }
    let rho = support.radius().ok_or_else(|| not_applicable(Lemma::N3Resonant, "support radius unknown"))?;
    let measure = support.measure();
    let disk = PI * rho * rho;
    if measure > disk * (1.0 + 1e-12) {
        return Err(not_applicable(Lemma::N3Resonant, "|I| exceeds pi*rho^2"));
    }
    Ok(ModeBound::single(k_m, Lemma::N3Resonant, measure / PI * (1.0 + (disk / measure).ln())))
}

pub fn cm_n4(n: usize, k_m: &ModeWavenumber, measure: f64, c: &GenericConstants) -> Result<ModeBound> {
    if n < 4 || k_m.class == ModeClass::Resonant {
        return Err(not_applicable(Lemma::N4, "needs n >= 4 and a nonresonant mode"));
    }
    let nf = n as f64;
    let shape = measure.powf(nf / (2.0 * (nf - 1.0))) * k_m.abs().powf((nf - 4.0) / 2.0) + measure.powf(2.0 / (nf - 1.0));
    Ok(ModeBound::single(k_m, Lemma::N4, need(c.young, "young")? * shape))
}

pub fn cm_n4_resonant(n: usize, k_m: &ModeWavenumber, measure: f64, c: &GenericConstants) -> Result<ModeBound> {
    if n < 4 || k_m.class != ModeClass::Resonant {
        return Err(not_applicable(Lemma::N4Resonant, "needs n >= 4 and a resonant mode"));
    }
    let v = need(c.resonant_power, "resonant_power")? * measure.powf(2.0 / (n as f64 - 1.0));
    Ok(ModeBound::single(k_m, Lemma::N4Resonant, v))
}

/// Smallest `c_m` over every lemma whose hypotheses hold.
pub fn best_mode_bound(problem: &SlabProblem, m: u32, c: &GenericConstants) -> Result<ModeBound> {
    let k_m = problem.mode(m);
    let n = problem.n;
    let s = &problem.support;
    let measure = s.measure();
    let candidates = [
        cm_fourier(&k_m),
        cm_agmon(&k_m, s, c),
        cm_n2(n, &k_m, measure),
        cm_n2_resonant(n, &k_m, s),
        cm_n3_lorentz(n, &k_m, measure, c),
        cm_n3_smallgap(n, &k_m, measure, c),
        cm_n3_resonant(n, &k_m, s),
        cm_n4(n, &k_m, measure, c),
        cm_n4_resonant(n, &k_m, measure, c),
    ];
    let applicability: Vec<(Lemma, f64)> =
        candidates.into_iter().filter_map(|b| b.ok()).filter_map(|b| b.source.map(|l| (l, b.c_m))).collect();
    let best = applicability.iter().copied().min_by(|a, b| a.1.total_cmp(&b.1));
    match best {
        Some((lemma, c_m)) => Ok(ModeBound { m, k_m, c_m, source: Some(lemma), applicability }),
        None => Err(Error::NoApplicableBound {
            m,
            reason: format!("{:?} mode in n = {n} with the given support", k_m.class),
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    BallSupport,
    N2Nonresonant,
    N2Resonant,
    N2Combined,
    N3Lorentz,
    N3TwoRegime,
    N3SmallGap,
    N3Resonant,
    N3ResonantRefined,
    N4,
    Subcritical,
}

impl Theorem {
    pub fn id(&self) -> &'static str {
        match self {
            Self::BallSupport => "ball-support",
            Self::N2Nonresonant => "n2-nonresonant",
            Self::N2Resonant => "n2-resonant",
            Self::N2Combined => "n2-combined",
            Self::N3Lorentz => "n3-lorentz",
            Self::N3TwoRegime => "n3-two-regime",
            Self::N3SmallGap => "n3-small-gap",
            Self::N3Resonant => "n3-resonant",
            Self::N3ResonantRefined => "n3-resonant-refined",
            Self::N4 => "n4",
            Self::Subcritical => "subcritical",
        }
    }
}

/// Theorem-level constants `c` whose hypotheses hold for `problem`.
pub fn theorem_bounds(problem: &SlabProblem, c: &GenericConstants) -> BTreeMap<Theorem, f64> {
    let mut out = BTreeMap::new();
    let n = problem.n;
    let k = problem.k;
    let d = problem.support.measure();
    let rho = problem.support.radius();
    let resonance = classify_k(k, problem.resonance_tolerance);
    let pi2 = PI * PI;

    if let Ok(g) = spectral_gaps(k, problem.resonance_tolerance) {
        let subcritical = g.delta_minus.is_infinite();
        if subcritical {
            out.insert(Theorem::Subcritical, 1.0 / g.delta_plus.powi(2));
        }
        if let (Some(rho), Some(ca)) = (rho, c.agmon) {
            if subcritical || rho * g.delta_minus > 0.1 {
                let prop = if subcritical { 0.0 } else { ca.value * rho / g.delta_minus };
                out.insert(Theorem::BallSupport, (1.0 / g.delta_plus.powi(2)).max(prop));
            }
        }
        match n {
            2 => {
                out.insert(Theorem::N2Nonresonant, d / (2.0 * g.delta));
                let prop = if subcritical { 0.0 } else { d / (2.0 * g.delta_minus) };
                let ev = (d / (2.0 * g.delta_plus)).min(1.0 / g.delta_plus.powi(2));
                out.insert(Theorem::N2Combined, prop.max(ev));
            }
            3 => {
                if let Some(cl) = c.lorentz {
                    out.insert(Theorem::N3Lorentz, cl.value * d.powf(0.75) / g.delta.sqrt());
                    let prop = if subcritical { 0.0 } else { cl.value * d.powf(0.75) / g.delta_minus.sqrt() };
                    out.insert(Theorem::N3TwoRegime, (1.0 / g.delta_plus.powi(2)).max(prop));
                    if let Some(cs) = c.small_gap {
                        if small_gap_hypothesis(g.delta, d) {
                            // modes outside the small-gap regime are covered by the Lorentz bound at
                            // the regime edge
                            let edge = cl.value * (4.0 / PI.sqrt()).sqrt() * d;
                            let small = cs.value * d * (1.0 - (d.sqrt() * g.delta).ln());
                            out.insert(Theorem::N3SmallGap, small.max(edge));
                        }
                    }
                }
            }
            _ => {}
        }
    }

    if n == 2 && matches!(resonance, Resonance::InK(_)) {
        if let Some(rho) = rho.filter(|r| *r >= 1.0) {
            out.insert(Theorem::N2Resonant, 2.0 * rho * d);
        }
    }
    if n == 3 && matches!(resonance, Resonance::InK(_)) {
        if let Some(rho) = rho {
            let log_term = d / PI * (1.0 + (PI * rho * rho / d).ln());
            if let Some(cl) = c.lorentz {
                out.insert(Theorem::N3Resonant, (cl.value * d.powf(0.75)).max(log_term));
            }
            if let Some(ca) = c.agmon {
                let gap = 3f64.sqrt() * PI;
                if rho * gap > 0.1 {
                    let v = (1.0 / (3.0 * pi2)).max(ca.value * rho / gap).max(log_term);
                    out.insert(Theorem::N3ResonantRefined, v);
                }
            }
        }
    }
    if n >= 4 {
        if let (Some(cy), Some(cr)) = (c.young, c.resonant_power) {
            let nf = n as f64;
            let cc = cy.value.max(cr.value) * ((k - pi2).abs().powf((nf - 4.0) / 4.0) + 1.0);
            let v = cc * (d.powf(nf / (2.0 * (nf - 1.0))) + d.powf(2.0 / (nf - 1.0)));
            out.insert(Theorem::N4, v.max(1.0));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    /// Every mode `m > last_listed` satisfies `c_m ≤ c_tail`.
    pub last_listed: u32,
    pub c_tail: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub problem: SlabProblem,
    pub modes: Vec<ModeBound>,
    pub tail: TailBound,
    pub aggregate_c: f64,
    pub threshold: f64,
    pub theorem_comparisons: BTreeMap<Theorem, f64>,
    pub constants: GenericConstants,
    pub notes: Vec<String>,
}

impl BoundCertificate {
    pub fn m_tail(&self) -> u32 {
        self.tail.last_listed
    }

    /// The per-mode winner that attains the aggregate.
    pub fn dominant_mode(&self) -> &ModeBound {
        self.modes.iter().max_by(|a, b| a.c_m.total_cmp(&b.c_m)).expect("at least one mode")
    }
}

const MAX_MODES: u32 = 1_000_000;

/// `c = sup_m c_m` with the supremum made finite by a tail argument: past the
/// first evanescent mode `c_m ≤ 1/|k_m|²`, which decreases in `m`.
pub fn aggregate(problem: &SlabProblem, c: &GenericConstants) -> Result<BoundCertificate> {
    problem.validate()?;
    c.validate()?;
    let m0 = first_evanescent(problem.k, problem.resonance_tolerance);
    let mut modes: Vec<ModeBound> = Vec::new();
    let mut m = 1;
    let tail = loop {
        if m > MAX_MODES {
            return Err(Error::InvalidConfig(format!("no tail found within {MAX_MODES} modes")));
        }
        let b = best_mode_bound(problem, m, c)?;
        let c_m = b.c_m;
        modes.push(b);
        if m > m0 {
            let next = 1.0 / problem.mode(m + 1).value.norm_sqr();
            if next <= c_m {
                break TailBound { last_listed: m, c_tail: next };
            }
        }
        m += 1;
    };
    let aggregate_c = modes.iter().map(|b| b.c_m).fold(0.0, f64::max);
    let mut notes = Vec::new();
    if problem.support.radius().is_some() && c.agmon.is_some() {
        notes.push("agmon bound applied per mode under rho*k_m > 0.1; the ball-support comparison needs rho*delta_minus > 0.1".into());
    }
    if problem.n == 2 && matches!(classify_k(problem.k, problem.resonance_tolerance), Resonance::InK(_)) {
        notes.push("resonant n = 2 bound requires rho >= 1".into());
    }
    for (name, k) in c.entries() {
        if let Some(k) = k {
            notes.push(format!("constant {name} = {} ({:?})", k.value, k.provenance));
        }
    }
    Ok(BoundCertificate {
        problem: problem.clone(),
        modes,
        tail,
        aggregate_c,
        threshold: 1.0 / aggregate_c,
        theorem_comparisons: theorem_bounds(problem, c),
        constants: c.clone(),
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::mode_wavenumber;

    const PI2: f64 = PI * PI;

    fn consts(v: f64) -> GenericConstants {
        let k = Some(Constant::user(v));
        GenericConstants { agmon: k, lorentz: k, small_gap: k, young: k, resonant_power: k }
    }

    fn measure(n: usize, k: f64, m: f64) -> SlabProblem {
        SlabProblem::new(n, k, SupportDescriptor::MeasureOnly { measure: m }).unwrap()
    }

    #[test]
    fn fourier() {
        let b = cm_fourier(&ModeWavenumber::evanescent(3.0)).unwrap();
        assert!((b.c_m - 1.0 / 9.0).abs() < 1e-16);
        assert!(cm_fourier(&ModeWavenumber::resonant()).is_err());
        assert!(cm_fourier(&ModeWavenumber::propagating(1.0)).is_err());
    }

    #[test]
    fn agmon() {
        let ball = SupportDescriptor::ball(1, 1.0);
        let b = cm_agmon(&ModeWavenumber::propagating(PI), &ball, &consts(2.0)).unwrap();
        assert!((b.c_m - 2.0 / PI).abs() < 1e-15);
        assert!(cm_agmon(&ModeWavenumber::propagating(0.05), &ball, &consts(2.0)).is_err());
        let only = SupportDescriptor::MeasureOnly { measure: 1.0 };
        assert!(cm_agmon(&ModeWavenumber::propagating(PI), &only, &consts(2.0)).is_err());
    }

    #[test]
    fn n2_lemmas() {
        assert_eq!(cm_n2(2, &ModeWavenumber::evanescent(0.5), 2.0).unwrap().c_m, 2.0);
        assert!(cm_n2(2, &ModeWavenumber::resonant(), 2.0).is_err());
        let b = |r: f64, m: f64| SupportDescriptor::Ball { center: vec![0.0], radius: r, measure: m };
        assert_eq!(cm_n2_resonant(2, &ModeWavenumber::resonant(), &b(1.0, 2.0)).unwrap().c_m, 4.0);
        assert_eq!(cm_n2_resonant(2, &ModeWavenumber::resonant(), &b(3.0, 1.0)).unwrap().c_m, 6.0);
        let only = SupportDescriptor::MeasureOnly { measure: 1.0 };
        assert!(cm_n2_resonant(2, &ModeWavenumber::resonant(), &only).is_err());
        assert!(cm_n2_resonant(2, &ModeWavenumber::resonant(), &b(0.5, 1.0)).is_err());
    }

    #[test]
    fn n3_lemmas() {
        let c = consts(1.5);
        assert!((cm_n3_lorentz(3, &ModeWavenumber::evanescent(4.0), 1.0, &c).unwrap().c_m - 0.75).abs() < 1e-15);
        let e = (-1f64).exp();
        assert!((cm_n3_smallgap(3, &ModeWavenumber::evanescent(e), 1.0, &c).unwrap().c_m - 3.0).abs() < 1e-14);
        assert!(cm_n3_smallgap(3, &ModeWavenumber::evanescent(1.0), 1.0, &c).is_err());
        let disk = SupportDescriptor::Ball { center: vec![0.0, 0.0], radius: 1.0, measure: PI };
        assert!((cm_n3_resonant(3, &ModeWavenumber::resonant(), &disk).unwrap().c_m - 1.0).abs() < 1e-15);
        let part = SupportDescriptor::Ball { center: vec![0.0, 0.0], radius: 1.0, measure: PI / 1f64.exp() };
        let v = cm_n3_resonant(3, &ModeWavenumber::resonant(), &part).unwrap().c_m;
        assert!((v - 2.0 / 1f64.exp()).abs() < 1e-15);
    }

    #[test]
    fn n4_lemmas() {
        let c = consts(1.0);
        assert!((cm_n4(4, &ModeWavenumber::evanescent(7.0), 1.0, &c).unwrap().c_m - 2.0).abs() < 1e-15);
        let v = cm_n4(5, &ModeWavenumber::evanescent(4.0), 1.0, &c).unwrap().c_m;
        assert!((v - 3.0).abs() < 1e-15);
        assert!((cm_n4_resonant(5, &ModeWavenumber::resonant(), 16.0, &c).unwrap().c_m - 4.0).abs() < 1e-14);
        assert!(cm_n4_resonant(5, &ModeWavenumber::evanescent(1.0), 16.0, &c).is_err());
    }

    #[test]
    fn best_bound_examples() {
        let c = consts(1.0);
        let b = best_mode_bound(&measure(2, 2.0 * PI2, 10.0), 2, &c).unwrap();
        assert_eq!(b.source, Some(Lemma::Fourier));
        assert!((b.c_m - 1.0 / (2.0 * PI2)).abs() < 1e-15);
        let b = best_mode_bound(&measure(2, 2.0 * PI2, 0.1), 2, &c).unwrap();
        assert_eq!(b.source, Some(Lemma::N2));
        assert!((b.c_m - 0.1 / (2.0 * 2f64.sqrt() * PI)).abs() < 1e-15);
        let err = best_mode_bound(&measure(2, 4.0 * PI2, 1.0), 2, &c).unwrap_err();
        assert!(matches!(err, Error::NoApplicableBound { m: 2, .. }));
    }

    #[test]
    fn subcritical_threshold_is_exact() {
        for k in [0.0, 0.5 * PI2, 0.9 * PI2] {
            for n in 2..=5 {
                let cert = aggregate(&measure(n, k, 100.0), &consts(1.0)).unwrap();
                assert!((cert.threshold - (PI2 - k)).abs() <= 1e-12 * (PI2 - k));
            }
        }
    }

    #[test]
    fn certificate_dominates_theorems() {
        let c = consts(0.7);
        let problems = [
            SlabProblem::new(2, 2.0 * PI2, SupportDescriptor::MeasureOnly { measure: 0.1 }).unwrap(),
            SlabProblem::new(2, 5.3 * PI2, SupportDescriptor::ball(1, 1.5)).unwrap(),
            SlabProblem::new(2, 4.0 * PI2, SupportDescriptor::ball(1, 1.5)).unwrap(),
            SlabProblem::new(3, 2.0 * PI2, SupportDescriptor::ball(2, 1.0)).unwrap(),
            SlabProblem::new(3, 9.0 * PI2, SupportDescriptor::ball(2, 0.7)).unwrap(),
            SlabProblem::new(3, PI2 * (4.0 - 1e-4), SupportDescriptor::MeasureOnly { measure: 0.3 }).unwrap(),
            SlabProblem::new(5, 3.3 * PI2, SupportDescriptor::ball(4, 0.8)).unwrap(),
            SlabProblem::new(4, 4.0 * PI2, SupportDescriptor::MeasureOnly { measure: 0.02 }).unwrap(),
        ];
        for p in &problems {
            let cert = aggregate(p, &c).unwrap();
            assert!(!cert.theorem_comparisons.is_empty(), "{p:?}");
            for (t, v) in &cert.theorem_comparisons {
                assert!(cert.aggregate_c <= *v * (1.0 + 1e-12), "{p:?} {t:?}: {} > {v}", cert.aggregate_c);
            }
            for m in cert.m_tail() + 1..=cert.m_tail() + 20 {
                let b = best_mode_bound(p, m, &c).unwrap();
                assert!(b.c_m <= cert.modes.last().unwrap().c_m);
                assert!(b.c_m <= cert.tail.c_tail);
            }
            assert!((cert.threshold * cert.aggregate_c - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn single_mode_problem() {
        // only m = 1 is propagating and carries the largest constant
        let p = measure(2, 1.5 * PI2, 1.0);
        let cert = aggregate(&p, &consts(1.0)).unwrap();
        let b1 = best_mode_bound(&p, 1, &consts(1.0)).unwrap();
        assert_eq!(cert.aggregate_c, b1.c_m);
    }

    #[test]
    fn n2_dilation_scaling() {
        let lam = 3.0;
        let k = mode_wavenumber(2.5 * PI2, 1, 1e-9);
        let scaled = ModeWavenumber { value: k.value / lam, ..k };
        let a = cm_n2(2, &k, 0.4).unwrap().c_m;
        let b = cm_n2(2, &scaled, 0.4 * lam).unwrap().c_m;
        assert!((b / a - lam * lam).abs() < 1e-12);
    }

    #[test]
    fn defaults_cover_supported_dimensions() {
        for n in 2..=8 {
            GenericConstants::defaults(n).unwrap().validate().unwrap();
        }
        assert!(GenericConstants::defaults(9).is_err());
    }
}
