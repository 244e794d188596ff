//! Output artifacts: certificate documents, per-mode tables, SVG line plots and
//! the run manifest.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bounds::BoundCertificate;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub constants_hash: String,
    pub certificate: BoundCertificate,
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// `m,class,abs_k_m,c_m,lemma` followed by one `tail` row.
pub fn write_mode_table<W: Write>(out: W, cert: &BoundCertificate) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["m", "class", "abs_k_m", "c_m", "lemma"]).map_err(csv_err)?;
    for b in &cert.modes {
        let class = format!("{:?}", b.k_m.class).to_lowercase();
        let lemma = b.source.map_or("none", |l| l.name());
        w.write_record([b.m.to_string(), class, b.k_m.abs().to_string(), b.c_m.to_string(), lemma.to_string()]).map_err(csv_err)?;
    }
    w.write_record([format!(">{}", cert.tail.last_listed), "evanescent".into(), String::new(), cert.tail.c_tail.to_string(), "tail".into()])
        .map_err(csv_err)?;
    w.flush()?;
    Ok(())
}

/// Human-readable summary printed by the `bound` command.
pub fn mode_summary(cert: &BoundCertificate) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "threshold = {:.4}", cert.threshold);
    let _ = writeln!(s, "aggregate c = {:.6e}", cert.aggregate_c);
    let _ = writeln!(s, "{:>6}  {:<12} {:>12} {:>14}  lemma", "m", "class", "|k_m|", "c_m");
    for b in &cert.modes {
        let _ = writeln!(
            s,
            "{:>6}  {:<12} {:>12.6} {:>14.6e}  {}",
            b.m,
            format!("{:?}", b.k_m.class).to_lowercase(),
            b.k_m.abs(),
            b.c_m,
            b.source.map_or("none", |l| l.name())
        );
    }
    let _ = writeln!(s, "modes beyond {} satisfy c_m <= {:.6e}", cert.tail.last_listed, cert.tail.c_tail);
    for (t, v) in &cert.theorem_comparisons {
        let _ = writeln!(s, "theorem {}: c = {:.6e}", t.id(), v);
    }
    for n in &cert.notes {
        let _ = writeln!(s, "note: {n}");
    }
    s
}

/// A self-contained SVG line plot; log axes take `log10` of positive data.
pub fn line_plot(title: &str, xlabel: &str, ylabel: &str, points: &[(f64, f64)], log_x: bool, log_y: bool) -> String {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const M: f64 = 60.0;
    let tx = |v: f64| if log_x { v.log10() } else { v };
    let ty = |v: f64| if log_y { v.log10() } else { v };
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (tx(x), ty(y))).filter(|(x, y)| x.is_finite() && y.is_finite()).collect();
    let range = |vals: Vec<f64>| {
        let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !lo.is_finite() {
            (0.0, 1.0)
        } else if hi - lo < 1e-12 * lo.abs().max(1.0) {
            (lo - 0.5, hi + 0.5)
        } else {
            (lo, hi)
        }
    };
    let (x0, x1) = range(pts.iter().map(|p| p.0).collect());
    let (y0, y1) = range(pts.iter().map(|p| p.1).collect());
    let px = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
    let py = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);
    let label = |v: f64, log: bool| if log { format!("{:.3e}", 10f64.powf(v)) } else { format!("{v:.4}") };
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<path d="M{M} {} L{M} {} L{} {}" fill="none" stroke="black"/>"#,
        M,
        H - M,
        W - M,
        H - M
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let _ = writeln!(s, r#"<text x="{:.1}" y="{}" text-anchor="middle">{}</text>"#, px(xv), H - M + 18.0, label(xv, log_x));
        let _ = writeln!(s, r#"<text x="{}" y="{:.1}" text-anchor="end">{}</text>"#, M - 6.0, py(yv) + 4.0, label(yv, log_y));
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, W / 2.0, H - 16.0, escape(xlabel));
    let _ = writeln!(s, r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#, H / 2.0, H / 2.0, escape(ylabel));
    let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
    let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#, path.join(" "));
    for &(x, y) in &pts {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue"/>"#, px(x), py(y));
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Files written by one command, with their SHA-256, plus the constants hash.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub seed: u64,
    pub constants_hash: Option<String>,
    pub files: BTreeMap<String, String>,
}

/// Collects output files in one directory and writes `manifest.json` last.
pub struct OutputDir {
    dir: PathBuf,
    manifest: Manifest,
}

impl OutputDir {
    pub fn create(dir: &Path, command: &str, seed: u64, constants_hash: Option<String>) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), manifest: Manifest { command: command.into(), seed, constants_hash, files: BTreeMap::new() } })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.dir.join(name);
        std::fs::write(&path, bytes)?;
        self.manifest.files.insert(name.into(), hex::encode(Sha256::digest(bytes)));
        Ok(path)
    }

    pub fn finish(self) -> Result<Manifest> {
        let json = serde_json::to_vec_pretty(&self.manifest).map_err(|e| Error::Io(e.to_string()))?;
        std::fs::write(self.dir.join("manifest.json"), json)?;
        Ok(self.manifest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{aggregate, GenericConstants};
    use crate::spectral::{SlabProblem, SupportDescriptor};

    #[test]
    fn mode_table_rows() {
        let p = SlabProblem::new(3, 2.0 * std::f64::consts::PI.powi(2), SupportDescriptor::Ball { center: vec![0.0, 0.0], radius: 1.0, measure: 1.0 }).unwrap();
        let cert = aggregate(&p, &GenericConstants::defaults(3).unwrap()).unwrap();
        let mut buf = Vec::new();
        write_mode_table(&mut buf, &cert).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("m,class,abs_k_m,c_m,lemma\n"));
        assert_eq!(text.lines().count(), cert.modes.len() + 2);
        assert!(mode_summary(&cert).starts_with("threshold = "));
    }

    #[test]
    fn svg_is_well_formed() {
        let svg = line_plot("a<b", "x", "y", &[(1.0, 2.0), (10.0, 3.0), (100.0, 2.5)], true, false);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("a&lt;b") && svg.matches("<circle").count() == 3);
    }

    #[test]
    fn manifest_records_hashes() {
        let dir = tempfile::tempdir().unwrap();
        let mut out = OutputDir::create(dir.path(), "bound", 7, Some("abc".into())).unwrap();
        out.write("x.csv", b"a,b\n").unwrap();
        let m = out.finish().unwrap();
        assert_eq!(m.files["x.csv"], hex::encode(Sha256::digest(b"a,b\n")));
        assert!(dir.path().join("manifest.json").exists());
    }
}
