//! TOML problem files and constants files.
//!
//! ```toml
//! n = 3
//! k = 19.7392088
//! # resonance_tolerance = 1e-9
//!
//! [support]
//! kind = "ball"        # or "measure"
//! radius = 1.0
//! # center = [0.0, 0.0]
//! measure = 1.0        # defaults to the full ball
//!
//! [verify]             # optional
//! trials = 20
//!
//! [sweep]              # optional
//! example = "evanescent-sharp"
//! param = "delta"
//! from = 10.0
//! to = 250.0
//! points = 5
//! scale = "geometric"
//! params = "n=2"
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bounds::{Constant, GenericConstants};
use crate::error::{Error, Result};
use crate::special::unit_ball_volume;
use crate::spectral::{SlabProblem, SupportDescriptor, DEFAULT_RESONANCE_TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SupportKind {
    Ball,
    Measure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupportConfig {
    pub kind: SupportKind,
    pub radius: Option<f64>,
    pub center: Option<Vec<f64>>,
    pub measure: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub trials: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    K,
    Delta,
    Measure,
    Rho,
}

impl SweepParam {
    pub fn key(&self) -> &'static str {
        match self {
            Self::K => "k",
            Self::Delta => "delta",
            Self::Measure => "measure",
            Self::Rho => "r0",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepScale {
    Geometric,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub example: String,
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub scale: SweepScale,
    /// Fixed example parameters, `key=value` pairs separated by commas.
    #[serde(default)]
    pub params: String,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::InvalidConfig(format!("a sweep needs at least 2 points, got {}", self.points)));
        }
        if !(self.from.is_finite() && self.to.is_finite()) {
            return Err(Error::InvalidConfig("sweep endpoints must be finite".into()));
        }
        if self.scale == SweepScale::Geometric && !(self.from > 0.0 && self.to > 0.0) {
            return Err(Error::InvalidConfig("geometric sweep needs positive endpoints".into()));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let t = i as f64 / last;
                match self.scale {
                    SweepScale::Geometric => self.from * (self.to / self.from).powf(t),
                    SweepScale::Linear => self.from + (self.to - self.from) * t,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub n: usize,
    pub k: f64,
    pub resonance_tolerance: Option<f64>,
    pub support: SupportConfig,
    pub verify: Option<VerifyConfig>,
    pub sweep: Option<SweepSpec>,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidConfig(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn support(&self) -> Result<SupportDescriptor> {
        let s = &self.support;
        let d = self.n.checked_sub(1).filter(|d| *d >= 1).ok_or_else(|| Error::InvalidConfig(format!("n = {} < 2", self.n)))?;
        match s.kind {
            SupportKind::Measure => {
                if s.radius.is_some() || s.center.is_some() {
                    return Err(Error::InvalidConfig("a measure-only support takes no radius or center".into()));
                }
                let measure = s.measure.ok_or_else(|| Error::InvalidConfig("support.measure missing".into()))?;
                Ok(SupportDescriptor::MeasureOnly { measure })
            }
            SupportKind::Ball => {
                let radius = s.radius.ok_or_else(|| Error::InvalidConfig("support.radius missing for a ball".into()))?;
                let center = s.center.clone().unwrap_or_else(|| vec![0.0; d]);
                if center.len() != d {
                    return Err(Error::InvalidConfig(format!("support.center needs {d} coordinates")));
                }
                let measure = s.measure.unwrap_or_else(|| unit_ball_volume(d) * radius.powi(d as i32));
                Ok(SupportDescriptor::Ball { center, radius, measure })
            }
        }
    }

    pub fn problem(&self) -> Result<SlabProblem> {
        let tol = self.resonance_tolerance.unwrap_or(DEFAULT_RESONANCE_TOLERANCE);
        SlabProblem::with_tolerance(self.n, self.k, self.support()?, tol)
    }
}

/// Constants file: any subset of `agmon`, `lorentz`, `small_gap`, `young`, `resonant_power`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstantsFile {
    agmon: Option<f64>,
    lorentz: Option<f64>,
    small_gap: Option<f64>,
    young: Option<f64>,
    resonant_power: Option<f64>,
}

/// User constants override the calibrated defaults entry by entry.
pub fn load_constants(path: Option<&Path>, n: usize) -> Result<GenericConstants> {
    let mut c = GenericConstants::defaults(n).or_else(|e| if path.is_some() { Ok(GenericConstants::default()) } else { Err(e) })?;
    if let Some(path) = path {
        let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
        let f: ConstantsFile = toml::from_str(&text).map_err(|e| Error::InvalidConfig(e.message().to_string()))?;
        let set = |slot: &mut Option<Constant>, v: Option<f64>| {
            if let Some(v) = v {
                *slot = Some(Constant::user(v));
            }
        };
        set(&mut c.agmon, f.agmon);
        set(&mut c.lorentz, f.lorentz);
        set(&mut c.small_gap, f.small_gap);
        set(&mut c.young, f.young);
        set(&mut c.resonant_power, f.resonant_power);
    }
    c.validate()?;
    Ok(c)
}

/// Hex SHA-256 of the canonical JSON of `constants`.
pub fn constants_hash(constants: &GenericConstants) -> String {
    let json = serde_json::to_vec(constants).expect("constants serialize");
    hex::encode(Sha256::digest(json))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::Provenance;

    #[test]
    fn parses_ball_and_measure() {
        let p = ProblemFile::parse("n = 3\nk = 19.7\n[support]\nkind = \"ball\"\nradius = 1.0\nmeasure = 1.0\n").unwrap();
        let prob = p.problem().unwrap();
        assert_eq!(prob.support.radius(), Some(1.0));
        assert_eq!(prob.support.measure(), 1.0);
        let q = ProblemFile::parse("n = 2\nk = 1\n[support]\nkind = \"measure\"\nmeasure = 100\n").unwrap();
        assert_eq!(q.support().unwrap(), SupportDescriptor::MeasureOnly { measure: 100.0 });
        let full = ProblemFile::parse("n = 3\nk = 1\n[support]\nkind = \"ball\"\nradius = 2\n").unwrap();
        assert!((full.support().unwrap().measure() - 4.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(ProblemFile::parse("n = 2\n"), Err(Error::InvalidConfig(_))));
        assert!(matches!(ProblemFile::parse("n = 2\nk = 1\nbogus = 3\n[support]\nkind = \"measure\"\nmeasure = 1\n"), Err(Error::InvalidConfig(_))));
        let no_radius = ProblemFile::parse("n = 2\nk = 1\n[support]\nkind = \"ball\"\n").unwrap();
        assert!(no_radius.support().is_err());
        let wrong_center = ProblemFile::parse("n = 3\nk = 1\n[support]\nkind = \"ball\"\nradius = 1\ncenter = [0.0]\n").unwrap();
        assert!(wrong_center.support().is_err());
    }

    #[test]
    fn sweep_values() {
        let s = SweepSpec {
            example: "evanescent-sharp".into(),
            param: SweepParam::Delta,
            from: 10.0,
            to: 250.0,
            points: 3,
            scale: SweepScale::Geometric,
            params: String::new(),
        };
        let v = s.values();
        assert!((v[1] - 50.0).abs() < 1e-12 && (v[2] - 250.0).abs() < 1e-12);
        assert!(SweepSpec { points: 1, ..s.clone() }.validate().is_err());
        assert!(SweepSpec { from: -1.0, ..s }.validate().is_err());
    }

    #[test]
    fn constants_override_and_hash() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "agmon = 2.5\n").unwrap();
        let c = load_constants(Some(&path), 3).unwrap();
        assert_eq!(c.agmon.unwrap(), Constant { value: 2.5, provenance: Provenance::UserSupplied });
        assert_eq!(c.lorentz.unwrap().provenance, Provenance::Calibrated);
        let d = load_constants(None, 3).unwrap();
        assert_ne!(constants_hash(&c), constants_hash(&d));
        assert_eq!(constants_hash(&d), constants_hash(&load_constants(None, 3).unwrap()));
        std::fs::write(&path, "agmon = -1\n").unwrap();
        assert!(load_constants(Some(&path), 3).is_err());
    }
}
