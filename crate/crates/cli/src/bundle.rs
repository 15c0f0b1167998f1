//! Result bundles: everything a solve produced, in one JSON object, plus the
//! CSV sample tables written beside it.
//!
//! Floats are written in shortest round-trip form, so every value parses back
//! bit-for-bit.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use markov_dubins::{
    build_certificate, eval_switching, sample_path, verify_pmp, AdjointCertificate,
    Error as CoreError, Instance, Normality, PmpReport, SolvedPath, SolverConfig, SwitchingLaw,
    Word,
};
use serde::{Deserialize, Serialize};

/// Minimum sample count used by `verify_pmp`, whatever `--samples` says.
pub const MIN_VERIFY_SAMPLES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Solver,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSummary {
    pub word: Word,
    /// Slot durations of the word `L R S L R`.
    pub durations: [f64; 5],
    /// Times at which the control switches.
    pub switch_times: Vec<f64>,
    pub length: f64,
}

impl From<&SolvedPath> for PathSummary {
    fn from(p: &SolvedPath) -> Self {
        Self {
            word: p.word.clone(),
            durations: p.candidate.durations,
            switch_times: p.segment_switch_times(),
            length: p.length,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub lambda0: f64,
    pub rho: f64,
    pub phi: f64,
    pub normality: Normality,
    pub law: SwitchingLaw,
    pub verdict: String,
    pub report: PmpReport,
}

impl CertificateSummary {
    pub fn new(cert: &AdjointCertificate, report: PmpReport) -> Self {
        Self {
            lambda0: cert.lambda0,
            rho: cert.rho,
            phi: cert.phi,
            normality: cert.normality,
            law: cert.law,
            verdict: report.verdict().to_string(),
            report,
        }
    }
}

/// Certificate outcome for one path: either a verified certificate or the
/// reason none could be built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub word: Word,
    pub length: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CertificateEntry {
    pub fn passed(&self) -> bool {
        self.certificate.as_ref().is_some_and(|c| c.report.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub solver_word: Word,
    pub solver_length: f64,
    pub oracle_word: Word,
    pub oracle_length: f64,
    pub discrepancy: f64,
}

impl Comparison {
    pub fn new(solver: &SolvedPath, oracle: &SolvedPath) -> Self {
        Self {
            solver_word: solver.word.clone(),
            solver_length: solver.length,
            oracle_word: oracle.word.clone(),
            oracle_length: oracle.length,
            discrepancy: (solver.length - oracle.length).abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathRow {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub u: f64,
}

/// One switching-function sample; `(lambda3, lambda3_dot)` is the phase plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwitchingRow {
    pub t: f64,
    pub lambda3: f64,
    pub lambda3_dot: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Samples {
    pub path: Vec<PathRow>,
    pub switching: Vec<SwitchingRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultBundle {
    pub instance: Instance,
    pub source: Source,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<SolverConfig>,
    pub best: PathSummary,
    pub stationary: Vec<PathSummary>,
    pub certificate: CertificateEntry,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub all_certificates: Vec<CertificateEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Comparison>,
    pub samples: Samples,
}

impl ResultBundle {
    pub fn passed(&self) -> bool {
        self.certificate.passed()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("invalid bundle {}", path.display()))
    }

    pub fn paths_csv(&self) -> String {
        let mut s = String::from("t,x,y,theta,u\n");
        for r in &self.samples.path {
            let _ = writeln!(s, "{},{},{},{},{}", r.t, r.x, r.y, r.theta, r.u);
        }
        s
    }

    pub fn switching_csv(&self) -> String {
        let mut s = String::from("t,lambda3,lambda3_dot\n");
        for r in &self.samples.switching {
            let _ = writeln!(s, "{},{},{}", r.t, r.lambda3, r.lambda3_dot);
        }
        s
    }

    /// Writes `<stem>.bundle`, `<stem>.paths.csv` and `<stem>.switching.csv`
    /// where `bundle_path` is `<stem>.bundle`. Returns the written paths.
    pub fn write(&self, bundle_path: &Path) -> Result<Vec<PathBuf>> {
        if let Some(dir) = bundle_path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)
                .with_context(|| format!("cannot create {}", dir.display()))?;
        }
        let stem = bundle_path.with_extension("");
        let files = [
            (bundle_path.to_path_buf(), self.to_json()?),
            (with_suffix(&stem, ".paths.csv"), self.paths_csv()),
            (with_suffix(&stem, ".switching.csv"), self.switching_csv()),
        ];
        files
            .into_iter()
            .map(|(path, text)| {
                std::fs::write(&path, text)
                    .with_context(|| format!("cannot write {}", path.display()))?;
                Ok(path)
            })
            .collect()
    }
}

pub(crate) fn with_suffix(stem: &Path, suffix: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Builds and verifies a certificate. With `prefer_abnormal`, an ineligible
/// path falls back to the normal certificate and the reason is returned.
pub fn certify(
    instance: &Instance,
    path: &SolvedPath,
    prefer_abnormal: bool,
    verify_samples: usize,
) -> (CertificateEntry, Option<AdjointCertificate>, Option<String>) {
    let mut note = None;
    let built = match build_certificate(instance, path, prefer_abnormal) {
        Err(CoreError::AbnormalityUnavailable(reasons)) if prefer_abnormal => {
            note = Some(format!(
                "{} path is not abnormal-eligible ({}); using the normal certificate",
                word_label(&path.word),
                reasons.join("; ")
            ));
            build_certificate(instance, path, false)
        }
        other => other,
    };
    let outcome = built.and_then(|cert| {
        let report = verify_pmp(
            &cert,
            instance,
            path,
            verify_samples.max(MIN_VERIFY_SAMPLES),
        )?;
        Ok((cert, report))
    });
    let mut entry = CertificateEntry {
        word: path.word.clone(),
        length: path.length,
        certificate: None,
        error: None,
    };
    match outcome {
        Ok((cert, report)) => {
            entry.certificate = Some(CertificateSummary::new(&cert, report));
            (entry, Some(cert), note)
        }
        Err(e) => {
            entry.error = Some(e.to_string());
            (entry, None, note)
        }
    }
}

pub(crate) fn word_label(word: &Word) -> String {
    if word.is_empty() {
        "empty".to_string()
    } else {
        word.to_string()
    }
}

/// Path samples and, given a certificate, switching samples at the same times.
pub fn samples(
    instance: &Instance,
    path: &SolvedPath,
    cert: Option<&AdjointCertificate>,
    n: usize,
) -> Result<Samples> {
    let rows = sample_path(instance, &path.candidate, n)?;
    let path_rows = rows
        .iter()
        .map(|s| PathRow {
            t: s.t,
            x: s.point.x,
            y: s.point.y,
            theta: s.point.theta,
            u: s.control,
        })
        .collect();
    let switching = match cert {
        Some(cert) => rows
            .iter()
            .map(|s| {
                let t = s.t.min(path.length);
                let (lambda3, lambda3_dot) = eval_switching(cert, instance, path, t)?;
                Ok(SwitchingRow {
                    t,
                    lambda3,
                    lambda3_dot,
                })
            })
            .collect::<markov_dubins::Result<_>>()?,
        None => Vec::new(),
    };
    Ok(Samples {
        path: path_rows,
        switching,
    })
}
