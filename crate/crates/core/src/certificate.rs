//! Adjoint certificates and maximum-principle verification.
//!
//! Along any extremal the Hamiltonian condition reads
//! `λ₃ u + ρ cos(θ − φ) + λ₀ = 0`, so on a bang arc
//! `λ₃ = −[ρ cos(θ − φ) + λ₀] / u` and on a straight arc `λ₃ ≡ 0`.
//! A [`SwitchingLaw`] fixes `(λ₀, ρ, φ)` from quantities of the path alone
//! (switch headings, straight heading, initial heading); the certificate
//! stores its own copy of `(λ₀, ρ, φ)`, and [`verify_pmp`] checks the stored
//! copy against the switching function the law produces.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::path::{ArcKind, Instance};
use crate::word::{SolvedPath, Word};

const SWEEP_TOL: f64 = 1e-9;

/// Pass thresholds of [`verify_pmp`].
pub const H_TOL: f64 = 1e-8;
pub const ELLIPSE_TOL: f64 = 1e-8;
pub const SWITCH_TOL: f64 = 1e-8;
pub const SIGN_TOL: f64 = 1e-10;
pub const MIN_SAMPLES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normality {
    Normal,
    Abnormal,
}

impl fmt::Display for Normality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normality::Normal => "normal",
            Normality::Abnormal => "abnormal",
        })
    }
}

/// Closed form of the switching function, by path type.
///
/// `sigma` is `+1` when the first arc turns left and `-1` when it turns right.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SwitchingLaw {
    /// Any word with a straight arc at heading `theta_s`.
    Singular { theta_s: f64 },
    /// `CCC` with switch headings `θ₁`, `θ₂`.
    ThreeArc { theta1: f64, theta2: f64 },
    /// Normal `CC`: `φ = θ₁ − σα`, `ρ = −1/cos α`.
    TwoArc { theta1: f64, sigma: f64, alpha: f64 },
    /// Normal `C` with `ρ = 1/2`, `φ = 0`.
    OneArc,
    /// Abnormal `CC`: `φ = θ₁ − σπ/2`.
    TwoArcAbnormal { theta1: f64, sigma: f64 },
    /// Abnormal `C`: `φ = θ₀ + σπ/2`.
    OneArcAbnormal { theta0: f64, sigma: f64 },
}

impl SwitchingLaw {
    /// `(λ₀, ρ, φ)` implied by the law.
    pub fn multipliers(&self) -> (f64, f64, f64) {
        match *self {
            SwitchingLaw::Singular { theta_s } => (1.0, 1.0, theta_s - PI),
            SwitchingLaw::ThreeArc { theta1, theta2 } => (
                1.0,
                -1.0 / ((theta1 - theta2) / 2.0).cos(),
                (theta1 + theta2) / 2.0,
            ),
            SwitchingLaw::TwoArc {
                theta1,
                sigma,
                alpha,
            } => (1.0, -1.0 / alpha.cos(), theta1 - sigma * alpha),
            SwitchingLaw::OneArc => (1.0, 0.5, 0.0),
            SwitchingLaw::TwoArcAbnormal { theta1, sigma } => {
                (0.0, 1.0, theta1 - sigma * FRAC_PI_2)
            }
            SwitchingLaw::OneArcAbnormal { theta0, sigma } => {
                (0.0, 1.0, theta0 + sigma * FRAC_PI_2)
            }
        }
    }

    /// `λ₃` on an arc with control `u` at heading `theta`.
    pub fn lambda3(&self, theta: f64, u: f64) -> f64 {
        if u == 0.0 {
            return 0.0;
        }
        let (l0, rho, phi) = self.multipliers();
        -(rho * (theta - phi).cos() + l0) / u
    }
}

/// Multipliers and switching law certifying a path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjointCertificate {
    pub lambda0: f64,
    pub rho: f64,
    pub phi: f64,
    pub word: Word,
    /// Unwrapped headings at the interior switch times.
    pub theta_switch: Vec<f64>,
    pub normality: Normality,
    pub law: SwitchingLaw,
}

impl AdjointCertificate {
    fn from_law(
        path: &SolvedPath,
        theta_switch: Vec<f64>,
        normality: Normality,
        law: SwitchingLaw,
    ) -> Self {
        let (lambda0, rho, phi) = law.multipliers();
        Self {
            lambda0,
            rho,
            phi,
            word: path.word.clone(),
            theta_switch,
            normality,
            law,
        }
    }

    /// `λ₃ u + ρ cos(θ − φ) + λ₀` with the stored multipliers.
    pub fn hamiltonian(&self, lambda3: f64, theta: f64, u: f64) -> f64 {
        lambda3 * u + self.rho * (theta - self.phi).cos() + self.lambda0
    }

    /// `λ̇₃ = ρ sin(θ − φ)`.
    pub fn lambda3_dot(&self, theta: f64) -> f64 {
        self.rho * (theta - self.phi).sin()
    }
}

/// Diagnostics of [`verify_pmp`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmpReport {
    pub max_abs_h: f64,
    pub sign_law_violations: usize,
    pub ellipse_drift: f64,
    /// Worst one-sided `|λ₃|` at each interior switch time.
    pub switch_zero_errors: Vec<f64>,
    pub n_samples: usize,
    pub passed: bool,
}

impl PmpReport {
    pub fn verdict(&self) -> &'static str {
        if self.passed {
            "pass"
        } else {
            "fail"
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum IneligibilityReason {
    /// The path has a straight arc.
    ContainsStraight,
    /// The word is not `C` or `CC`.
    WrongType { word: Word },
    /// Arc `index` is longer than `π/a`.
    ArcTooLong {
        index: usize,
        length: f64,
        limit: f64,
    },
    /// Heading change across arc `index` exceeds `π`.
    SweepTooLarge { index: usize, sweep: f64 },
}

impl fmt::Display for IneligibilityReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IneligibilityReason::ContainsStraight => write!(f, "path contains a straight arc"),
            IneligibilityReason::WrongType { word } => {
                write!(f, "word `{word}` is not of type C or CC")
            }
            IneligibilityReason::ArcTooLong {
                index,
                length,
                limit,
            } => {
                write!(f, "arc {index} has length {length:.6} > pi/a = {limit:.6}")
            }
            IneligibilityReason::SweepTooLarge { index, sweep } => {
                write!(f, "heading sweep {sweep:.6} of arc {index} exceeds pi")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reasons", rename_all = "snake_case")]
pub enum AbnormalEligibility {
    Eligible,
    Ineligible(Vec<IneligibilityReason>),
}

impl AbnormalEligibility {
    pub fn is_eligible(&self) -> bool {
        matches!(self, AbnormalEligibility::Eligible)
    }
}

/// One point of the `(λ₃, λ̇₃)` phase trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSample {
    pub t: f64,
    pub lambda3: f64,
    pub lambda3_dot: f64,
}

#[derive(Debug, Clone, Copy)]
struct Seg {
    kind: ArcKind,
    t0: f64,
    duration: f64,
    theta0: f64,
}

impl Seg {
    fn theta(&self, t: f64, a: f64) -> f64 {
        self.theta0 + self.kind.turn_sign() * a * (t - self.t0)
    }
}

fn segs(instance: &Instance, path: &SolvedPath) -> Vec<Seg> {
    let a = instance.curvature;
    let mut t = 0.0;
    let mut theta = instance.start.theta;
    path.segments()
        .into_iter()
        .map(|s| {
            let seg = Seg {
                kind: s.kind,
                t0: t,
                duration: s.duration,
                theta0: theta,
            };
            t += s.duration;
            theta += s.kind.turn_sign() * a * s.duration;
            seg
        })
        .collect()
}

fn segment_index(segs: &[Seg], t: f64) -> Option<usize> {
    if segs.is_empty() {
        return None;
    }
    Some(
        segs.iter()
            .position(|s| t < s.t0 + s.duration)
            .unwrap_or(segs.len() - 1),
    )
}

fn check_admissible(path: &SolvedPath) -> Result<()> {
    if !path.word.is_empty() && !path.word.is_admissible() {
        return Err(invalid(format!(
            "word `{}` is not an admissible path type",
            path.word
        )));
    }
    Ok(())
}

/// Abnormal certificates exist only for `C` and `CC` paths whose arcs each
/// sweep at most `π`.
pub fn detect_abnormal_eligibility(instance: &Instance, path: &SolvedPath) -> AbnormalEligibility {
    let a = instance.curvature;
    let mut reasons = Vec::new();
    if path.word.contains_straight() {
        reasons.push(IneligibilityReason::ContainsStraight);
    }
    if path.word.is_empty() || path.word.len() > 2 {
        reasons.push(IneligibilityReason::WrongType {
            word: path.word.clone(),
        });
    }
    let limit = PI / a;
    for (index, s) in path
        .segments()
        .iter()
        .enumerate()
        .filter(|(_, s)| s.kind.is_turn())
    {
        if s.duration > limit + SWEEP_TOL {
            reasons.push(IneligibilityReason::ArcTooLong {
                index,
                length: s.duration,
                limit,
            });
        }
        let sweep = a * s.duration;
        if sweep > PI + SWEEP_TOL {
            reasons.push(IneligibilityReason::SweepTooLarge { index, sweep });
        }
    }
    if reasons.is_empty() {
        AbnormalEligibility::Eligible
    } else {
        AbnormalEligibility::Ineligible(reasons)
    }
}

/// Builds the certificate for an admissible feasible path.
///
/// With `prefer_abnormal` the `λ₀ = 0` variant is returned, or
/// [`Error::AbnormalityUnavailable`] when the path does not qualify.
pub fn build_certificate(
    instance: &Instance,
    path: &SolvedPath,
    prefer_abnormal: bool,
) -> Result<AdjointCertificate> {
    instance.validate()?;
    check_admissible(path)?;
    let a = instance.curvature;
    let segs = segs(instance, path);
    let theta_switch: Vec<f64> = segs.iter().skip(1).map(|s| s.theta0).collect();
    let sigma = segs.first().map_or(1.0, |s| s.kind.turn_sign());

    if prefer_abnormal {
        if let AbnormalEligibility::Ineligible(reasons) =
            detect_abnormal_eligibility(instance, path)
        {
            return Err(Error::AbnormalityUnavailable(
                reasons.iter().map(|r| r.to_string()).collect(),
            ));
        }
        let law = match segs.len() {
            1 => SwitchingLaw::OneArcAbnormal {
                theta0: instance.start.theta,
                sigma,
            },
            _ => SwitchingLaw::TwoArcAbnormal {
                theta1: theta_switch[0],
                sigma,
            },
        };
        return Ok(AdjointCertificate::from_law(
            path,
            theta_switch,
            Normality::Abnormal,
            law,
        ));
    }

    let law = if segs.is_empty() {
        SwitchingLaw::Singular {
            theta_s: instance.start.theta,
        }
    } else if let Some(s) = segs.iter().find(|s| s.kind == ArcKind::S) {
        SwitchingLaw::Singular { theta_s: s.theta0 }
    } else {
        match segs.len() {
            1 => SwitchingLaw::OneArc,
            2 => {
                let max_sweep = segs.iter().map(|s| a * s.duration).fold(0.0, f64::max);
                if max_sweep >= 2.0 * PI - SWEEP_TOL {
                    return Err(Error::Certificate(format!(
                        "CC arc sweep {max_sweep:.6} leaves no admissible amplitude"
                    )));
                }
                let canonical = 2.0 * PI / 3.0;
                let alpha = if max_sweep / 2.0 > canonical {
                    (max_sweep / 2.0 + PI) / 2.0
                } else {
                    canonical
                };
                SwitchingLaw::TwoArc {
                    theta1: theta_switch[0],
                    sigma,
                    alpha,
                }
            }
            _ => {
                let middle = a * segs[1].duration;
                if middle <= PI + SWEEP_TOL {
                    return Err(Error::Certificate(format!(
                        "CCC middle sweep {middle:.6} does not exceed pi"
                    )));
                }
                SwitchingLaw::ThreeArc {
                    theta1: theta_switch[0],
                    theta2: theta_switch[1],
                }
            }
        }
    };
    Ok(AdjointCertificate::from_law(
        path,
        theta_switch,
        Normality::Normal,
        law,
    ))
}

fn eval_on(
    cert: &AdjointCertificate,
    seg: Option<&Seg>,
    theta_start: f64,
    t: f64,
    a: f64,
) -> (f64, f64, f64, f64) {
    let (theta, u) = match seg {
        Some(s) => (s.theta(t, a), s.kind.control(a)),
        None => (theta_start, 0.0),
    };
    let l3 = cert.law.lambda3(theta, u);
    (theta, u, l3, cert.lambda3_dot(theta))
}

fn check_time(path: &SolvedPath, t: f64) -> Result<()> {
    if !(t >= 0.0 && t <= path.length) {
        return Err(invalid(format!("time {t} outside [0, {}]", path.length)));
    }
    Ok(())
}

/// `(λ₃(t), λ̇₃(t))`; at a switch time the arc starting there is used.
pub fn eval_switching(
    cert: &AdjointCertificate,
    instance: &Instance,
    path: &SolvedPath,
    t: f64,
) -> Result<(f64, f64)> {
    check_time(path, t)?;
    let segs = segs(instance, path);
    let seg = segment_index(&segs, t).map(|i| &segs[i]);
    let (_, _, l3, l3d) = eval_on(cert, seg, instance.start.theta, t, instance.curvature);
    Ok((l3, l3d))
}

/// Samples `[0, t_f]` and reports the Hamiltonian, sign-law, ellipse and
/// switch-time diagnostics against the pass thresholds.
pub fn verify_pmp(
    cert: &AdjointCertificate,
    instance: &Instance,
    path: &SolvedPath,
    n_samples: usize,
) -> Result<PmpReport> {
    if n_samples < MIN_SAMPLES {
        return Err(invalid(format!(
            "need at least {MIN_SAMPLES} samples, got {n_samples}"
        )));
    }
    check_admissible(path)?;
    if cert.word != path.word {
        return Err(invalid(format!(
            "certificate word `{}` does not match path word `{}`",
            cert.word, path.word
        )));
    }
    let a = instance.curvature;
    let segs = segs(instance, path);
    let tf = path.length;

    let mut max_abs_h: f64 = 0.0;
    let mut ellipse_drift: f64 = 0.0;
    let mut sign_law_violations = 0;
    let mut record = |u: f64, theta: f64, l3: f64, l3d: f64| {
        max_abs_h = max_abs_h.max(cert.hamiltonian(l3, theta, u).abs());
        let drift = l3d * l3d + (a * l3.abs() - cert.lambda0).powi(2) - cert.rho * cert.rho;
        ellipse_drift = ellipse_drift.max(drift.abs());
        if l3.abs() > SIGN_TOL && u != -a * l3.signum() {
            sign_law_violations += 1;
        }
    };

    for i in 0..n_samples {
        let t = if i + 1 == n_samples {
            tf
        } else {
            tf * i as f64 / (n_samples - 1) as f64
        };
        let seg = segment_index(&segs, t).map(|k| &segs[k]);
        let (theta, u, l3, l3d) = eval_on(cert, seg, instance.start.theta, t, a);
        record(u, theta, l3, l3d);
    }

    let mut switch_zero_errors = Vec::with_capacity(segs.len().saturating_sub(1));
    for w in segs.windows(2) {
        let ts = w[1].t0;
        let left = eval_on(cert, Some(&w[0]), 0.0, ts, a);
        let right = eval_on(cert, Some(&w[1]), 0.0, ts, a);
        for &(theta, u, l3, l3d) in [&left, &right] {
            record(u, theta, l3, l3d);
        }
        let worst = left
            .2
            .abs()
            .max(right.2.abs())
            .max((left.2 - right.2).abs());
        switch_zero_errors.push(worst);
    }

    let passed = max_abs_h <= H_TOL
        && ellipse_drift <= ELLIPSE_TOL
        && sign_law_violations == 0
        && switch_zero_errors.iter().all(|&e| e <= SWITCH_TOL);
    Ok(PmpReport {
        max_abs_h,
        sign_law_violations,
        ellipse_drift,
        switch_zero_errors,
        n_samples,
        passed,
    })
}

/// `n` uniformly spaced phase-plane samples over `[0, t_f]`.
pub fn phase_trajectory(
    cert: &AdjointCertificate,
    instance: &Instance,
    path: &SolvedPath,
    n: usize,
) -> Result<Vec<PhaseSample>> {
    if n < 2 {
        return Err(invalid(format!(
            "phase trajectory needs at least 2 samples, got {n}"
        )));
    }
    let a = instance.curvature;
    let segs = segs(instance, path);
    let tf = path.length;
    Ok((0..n)
        .map(|i| {
            let t = if i + 1 == n {
                tf
            } else {
                tf * i as f64 / (n - 1) as f64
            };
            let seg = segment_index(&segs, t).map(|k| &segs[k]);
            let (_, _, lambda3, lambda3_dot) = eval_on(cert, seg, instance.start.theta, t, a);
            PhaseSample {
                t,
                lambda3,
                lambda3_dot,
            }
        })
        .collect())
}
