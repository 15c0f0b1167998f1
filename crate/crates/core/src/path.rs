//! Oriented points, the five-arc `L R S L R` path family and its closed-form
//! kinematics.
//!
//! A path is driven at unit speed with signed curvature `u ∈ {+a, -a, 0}`:
//!
//! ```text
//!   x' = cos θ,   y' = sin θ,   θ' = u
//! ```
//!
//! Every arc is integrated in closed form, so no ODE solver appears here.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Number of arc slots in the fixed word `L R S L R`.
pub const SLOTS: usize = 5;

/// Planar position plus heading (radians, stored unwrapped).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientedPoint {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl OrientedPoint {
    pub const fn new(x: f64, y: f64, theta: f64) -> Self {
        Self { x, y, theta }
    }

    pub fn distance_to(&self, other: &OrientedPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Heading comparison through `(sin, cos)`, so `θ` and `θ + 2π` agree.
    pub fn heading_gap(&self, other: &OrientedPoint) -> f64 {
        let (s0, c0) = self.theta.sin_cos();
        let (s1, c1) = other.theta.sin_cos();
        (s0 - s1).hypot(c0 - c1)
    }

    /// Max of the position gap and the `(sin, cos)` heading gap.
    pub fn gap(&self, other: &OrientedPoint) -> f64 {
        self.distance_to(other).max(self.heading_gap(other))
    }
}

/// A start/goal pair with curvature bound `a > 0` (units of 1/length).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub start: OrientedPoint,
    pub goal: OrientedPoint,
    #[serde(rename = "a")]
    pub curvature: f64,
}

impl Instance {
    pub fn new(start: OrientedPoint, goal: OrientedPoint, curvature: f64) -> Result<Self> {
        let instance = Self {
            start,
            goal,
            curvature,
        };
        instance.validate()?;
        Ok(instance)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.curvature.is_finite() && self.curvature > 0.0) {
            return Err(invalid(format!(
                "curvature bound must be positive and finite, got {}",
                self.curvature
            )));
        }
        let coords = [
            self.start.x,
            self.start.y,
            self.start.theta,
            self.goal.x,
            self.goal.y,
            self.goal.theta,
        ];
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(invalid("oriented points must have finite coordinates"));
        }
        Ok(())
    }

    /// Straight-line distance between start and goal positions.
    pub fn diameter(&self) -> f64 {
        self.start.distance_to(&self.goal)
    }

    /// Length of a full turning circle, `2π/a`.
    pub fn full_turn(&self) -> f64 {
        std::f64::consts::TAU / self.curvature
    }
}

/// Arc letter. `L` turns left at `+a`, `R` right at `-a`, `S` goes straight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ArcKind {
    L,
    R,
    S,
}

impl ArcKind {
    /// Slot kinds of the five-arc family.
    pub const WORD: [ArcKind; SLOTS] = [ArcKind::L, ArcKind::R, ArcKind::S, ArcKind::L, ArcKind::R];

    /// Signed curvature for bound `a`.
    pub fn control(self, a: f64) -> f64 {
        match self {
            ArcKind::L => a,
            ArcKind::R => -a,
            ArcKind::S => 0.0,
        }
    }

    /// +1 for `L`, -1 for `R`, 0 for `S`.
    pub fn turn_sign(self) -> f64 {
        self.control(1.0)
    }

    pub fn letter(self) -> char {
        match self {
            ArcKind::L => 'L',
            ArcKind::R => 'R',
            ArcKind::S => 'S',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'L' => Some(ArcKind::L),
            'R' => Some(ArcKind::R),
            'S' => Some(ArcKind::S),
            _ => None,
        }
    }

    pub fn is_turn(self) -> bool {
        self != ArcKind::S
    }
}

/// Arc durations `ξ₁..ξ₅` for the word `L R S L R`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PathCandidate {
    pub durations: [f64; SLOTS],
}

impl PathCandidate {
    pub const fn new(durations: [f64; SLOTS]) -> Self {
        Self { durations }
    }

    pub const fn zero() -> Self {
        Self {
            durations: [0.0; SLOTS],
        }
    }

    /// Total length `t_f = Σ ξ_j`.
    pub fn length(&self) -> f64 {
        self.durations.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        for (j, &d) in self.durations.iter().enumerate() {
            if !(d.is_finite() && d >= 0.0) {
                return Err(invalid(format!(
                    "duration ξ{} must be non-negative, got {d}",
                    j + 1
                )));
            }
        }
        Ok(())
    }

    /// Headings `[θ₁, θ₂, θ₄, θ₅]` reached after arcs 1, 2, 4 and 5.
    pub fn headings(&self, theta0: f64, a: f64) -> [f64; 4] {
        let [d1, d2, _, d4, d5] = self.durations;
        let t1 = theta0 + a * d1;
        let t2 = t1 - a * d2;
        let t4 = t2 + a * d4;
        let t5 = t4 - a * d5;
        [t1, t2, t4, t5]
    }

    /// Cumulative switch times `t₁..t₄` (so `t₅ = t_f`).
    pub fn switch_times(&self) -> [f64; SLOTS - 1] {
        let mut out = [0.0; SLOTS - 1];
        let mut acc = 0.0;
        for (slot, d) in out.iter_mut().zip(self.durations) {
            acc += d;
            *slot = acc;
        }
        out
    }
}

/// Advances `start` along one arc of the given kind.
pub fn propagate_arc(
    start: OrientedPoint,
    kind: ArcKind,
    duration: f64,
    a: f64,
) -> Result<OrientedPoint> {
    if !(duration.is_finite() && duration >= 0.0) {
        return Err(invalid(format!(
            "arc duration must be non-negative, got {duration}"
        )));
    }
    if !(a.is_finite() && a > 0.0) {
        return Err(invalid(format!(
            "curvature bound must be positive, got {a}"
        )));
    }
    Ok(advance(start, kind, duration, a))
}

/// Unchecked closed-form arc update.
pub(crate) fn advance(start: OrientedPoint, kind: ArcKind, duration: f64, a: f64) -> OrientedPoint {
    match kind {
        ArcKind::S => {
            let (s, c) = start.theta.sin_cos();
            OrientedPoint::new(start.x + c * duration, start.y + s * duration, start.theta)
        }
        ArcKind::L | ArcKind::R => {
            let u = kind.control(a);
            let theta = start.theta + u * duration;
            let (s0, c0) = start.theta.sin_cos();
            let (s1, c1) = theta.sin_cos();
            // y uses (cos θ₀ - cos θ)/u so that y' = sin θ.
            OrientedPoint::new(start.x + (s1 - s0) / u, start.y + (c0 - c1) / u, theta)
        }
    }
}

/// Terminal point after all five arcs.
pub fn propagate_path(
    start: OrientedPoint,
    candidate: &PathCandidate,
    a: f64,
) -> Result<OrientedPoint> {
    candidate.validate()?;
    let mut p = start;
    for (kind, d) in ArcKind::WORD.into_iter().zip(candidate.durations) {
        p = propagate_arc(p, kind, d, a)?;
    }
    Ok(p)
}

/// Equality residuals of the switching-time program.
///
/// Components are `(x₅ - x_f, y₅ - y_f, sin θ_f - sin θ₅, cos θ_f - cos θ₅)`,
/// where the position terms are the summed closed forms over the five arcs.
pub fn residual(instance: &Instance, candidate: &PathCandidate) -> Result<[f64; 4]> {
    candidate.validate()?;
    Ok(residual_unchecked(instance, &candidate.durations))
}

/// Euclidean norm of [`residual`].
pub fn residual_norm(instance: &Instance, candidate: &PathCandidate) -> Result<f64> {
    residual(instance, candidate).map(|r| norm4(&r))
}

pub(crate) fn norm4(r: &[f64; 4]) -> f64 {
    r.iter().map(|v| v * v).sum::<f64>().sqrt()
}

struct Trig {
    s: [f64; 5],
    c: [f64; 5],
}

// Headings θ₀, θ₁, θ₂, θ₄, θ₅ in that order.
fn trig(instance: &Instance, xi: &[f64; SLOTS]) -> Trig {
    let a = instance.curvature;
    let t0 = instance.start.theta;
    let t1 = t0 + a * xi[0];
    let t2 = t1 - a * xi[1];
    let t4 = t2 + a * xi[3];
    let t5 = t4 - a * xi[4];
    let mut s = [0.0; 5];
    let mut c = [0.0; 5];
    for (k, t) in [t0, t1, t2, t4, t5].into_iter().enumerate() {
        let (sk, ck) = t.sin_cos();
        s[k] = sk;
        c[k] = ck;
    }
    Trig { s, c }
}

pub(crate) fn residual_unchecked(instance: &Instance, xi: &[f64; SLOTS]) -> [f64; 4] {
    let a = instance.curvature;
    let Trig { s, c } = trig(instance, xi);
    let (sf, cf) = instance.goal.theta.sin_cos();
    let (p0, pf) = (instance.start, instance.goal);
    [
        p0.x - pf.x + (-s[0] + 2.0 * s[1] - 2.0 * s[2] + 2.0 * s[3] - s[4]) / a + xi[2] * c[2],
        p0.y - pf.y + (c[0] - 2.0 * c[1] + 2.0 * c[2] - 2.0 * c[3] + c[4]) / a + xi[2] * s[2],
        sf - s[4],
        cf - c[4],
    ]
}

// dθ_k/dξ_j / a for θ₁, θ₂, θ₄, θ₅.
const HEADING_SENS: [[f64; SLOTS]; 4] = [
    [1.0, 0.0, 0.0, 0.0, 0.0],
    [1.0, -1.0, 0.0, 0.0, 0.0],
    [1.0, -1.0, 0.0, 1.0, 0.0],
    [1.0, -1.0, 0.0, 1.0, -1.0],
];

/// Residual together with its analytic Jacobian (`jac[i][j] = ∂r_i/∂ξ_j`).
pub fn residual_with_jacobian(
    instance: &Instance,
    xi: &[f64; SLOTS],
) -> ([f64; 4], [[f64; SLOTS]; 4]) {
    let a = instance.curvature;
    let Trig { s, c } = trig(instance, xi);
    let (sf, cf) = instance.goal.theta.sin_cos();
    let (p0, pf) = (instance.start, instance.goal);
    let r = [
        p0.x - pf.x + (-s[0] + 2.0 * s[1] - 2.0 * s[2] + 2.0 * s[3] - s[4]) / a + xi[2] * c[2],
        p0.y - pf.y + (c[0] - 2.0 * c[1] + 2.0 * c[2] - 2.0 * c[3] + c[4]) / a + xi[2] * s[2],
        sf - s[4],
        cf - c[4],
    ];
    let [k1, k2, k4, k5] = HEADING_SENS;
    let mut jac = [[0.0; SLOTS]; 4];
    for j in 0..SLOTS {
        jac[0][j] = 2.0 * c[1] * k1[j] - 2.0 * c[2] * k2[j] + 2.0 * c[3] * k4[j]
            - c[4] * k5[j]
            - xi[2] * s[2] * a * k2[j];
        jac[1][j] = 2.0 * s[1] * k1[j] - 2.0 * s[2] * k2[j] + 2.0 * s[3] * k4[j] - s[4] * k5[j]
            + xi[2] * c[2] * a * k2[j];
        jac[2][j] = -c[4] * a * k5[j];
        jac[3][j] = s[4] * a * k5[j];
    }
    jac[0][2] += c[2];
    jac[1][2] += s[2];
    (r, jac)
}

/// One sample of a path: arclength, state and active signed curvature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    pub t: f64,
    pub point: OrientedPoint,
    pub control: f64,
}

/// Closed-form arc `j` of a candidate with its start time and start state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ArcSpan {
    pub kind: ArcKind,
    pub t0: f64,
    pub duration: f64,
    pub start: OrientedPoint,
}

pub(crate) fn arc_spans(start: OrientedPoint, candidate: &PathCandidate, a: f64) -> Vec<ArcSpan> {
    let mut out = Vec::with_capacity(SLOTS);
    let mut p = start;
    let mut t = 0.0;
    for (kind, d) in ArcKind::WORD.into_iter().zip(candidate.durations) {
        if d > 0.0 {
            out.push(ArcSpan {
                kind,
                t0: t,
                duration: d,
                start: p,
            });
            p = advance(p, kind, d, a);
            t += d;
        }
    }
    out
}

/// State on a sequence of spans at time `t` (clamped to the covered range).
pub(crate) fn state_at(
    spans: &[ArcSpan],
    start: OrientedPoint,
    t: f64,
    a: f64,
) -> (OrientedPoint, ArcKind) {
    if spans.is_empty() {
        return (start, ArcKind::S);
    }
    let idx = spans
        .iter()
        .position(|s| t < s.t0 + s.duration)
        .unwrap_or(spans.len() - 1);
    let span = &spans[idx];
    let local = (t - span.t0).clamp(0.0, span.duration);
    (advance(span.start, span.kind, local, a), span.kind)
}

/// Samples the path at `n` uniformly spaced times in `[0, t_f]`, with every
/// interior switch time merged into the grid.
pub fn sample_path(
    instance: &Instance,
    candidate: &PathCandidate,
    n: usize,
) -> Result<Vec<PathSample>> {
    if n < 2 {
        return Err(invalid(format!("sample count must be at least 2, got {n}")));
    }
    candidate.validate()?;
    let a = instance.curvature;
    let spans = arc_spans(instance.start, candidate, a);
    let times = sample_times(&spans, candidate.length(), n);
    Ok(times
        .into_iter()
        .map(|t| {
            let (point, kind) = state_at(&spans, instance.start, t, a);
            PathSample {
                t,
                point,
                control: kind.control(a),
            }
        })
        .collect())
}

pub(crate) fn sample_times(spans: &[ArcSpan], length: f64, n: usize) -> Vec<f64> {
    let mut times: Vec<f64> = (0..n)
        .map(|i| {
            if i + 1 == n {
                length
            } else {
                length * i as f64 / (n - 1) as f64
            }
        })
        .collect();
    let eps = 1e-12 * length.max(1.0);
    let switches: Vec<f64> = spans
        .iter()
        .skip(1)
        .map(|s| s.t0)
        .filter(|&ts| times.iter().all(|&t| (t - ts).abs() > eps))
        .collect();
    times.extend(switches);
    times.sort_by(f64::total_cmp);
    times
}
