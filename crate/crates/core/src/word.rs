//! Path words, classification of duration vectors and feasible solved paths.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::path::{residual, ArcKind, Instance, PathCandidate, SLOTS};

/// Durations below `1e-7 · max(1, t_f)` count as absent arcs.
pub fn zero_threshold(length: f64) -> f64 {
    1e-7 * length.max(1.0)
}

/// A sequence of arc letters, e.g. `LSR`. The empty word is the zero-length path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Word(Vec<ArcKind>);

/// The six base words of bounded-curvature shortest paths.
pub const BASE_WORDS: [&str; 6] = ["LRL", "RLR", "LSL", "LSR", "RSL", "RSR"];

/// Every non-empty word that is a base word or obtained from one by dropping arcs.
pub const ADMISSIBLE_WORDS: [&str; 15] = [
    "L", "R", "S", "LR", "RL", "LS", "RS", "SL", "SR", "LRL", "RLR", "LSL", "LSR", "RSL", "RSR",
];

impl Word {
    pub fn new(kinds: Vec<ArcKind>) -> Self {
        Word(kinds)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn arcs(&self) -> &[ArcKind] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains_straight(&self) -> bool {
        self.0.contains(&ArcKind::S)
    }

    /// One of the fifteen admissible types (the empty word is not).
    pub fn is_admissible(&self) -> bool {
        let s = self.to_string();
        ADMISSIBLE_WORDS.contains(&s.as_str())
    }

    /// Three turning arcs, `LRL` or `RLR`.
    pub fn is_ccc(&self) -> bool {
        self.0.len() == 3 && self.0.iter().all(|k| k.is_turn())
    }

    /// All admissible words, shortest first, then lexicographic.
    pub fn admissible() -> impl Iterator<Item = Word> {
        ADMISSIBLE_WORDS
            .iter()
            .map(|w| w.parse().expect("static word"))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in &self.0 {
            write!(f, "{}", k.letter())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| {
                ArcKind::from_letter(c)
                    .ok_or_else(|| invalid(format!("unknown arc letter `{c}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for Word {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// A maximal run of one arc kind after dropping zero-duration slots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub kind: ArcKind,
    pub duration: f64,
}

/// Drops slots shorter than `tol` and merges neighbouring arcs of equal kind.
pub fn segments(candidate: &PathCandidate, tol: f64) -> Vec<Segment> {
    let mut out: Vec<Segment> = Vec::with_capacity(SLOTS);
    for (kind, d) in ArcKind::WORD.into_iter().zip(candidate.durations) {
        if d < tol {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.kind == kind => last.duration += d,
            _ => out.push(Segment { kind, duration: d }),
        }
    }
    out
}

/// Word of a candidate: sub-threshold arcs removed, equal neighbours merged.
pub fn classify(candidate: &PathCandidate, tol: f64) -> Word {
    Word(
        segments(candidate, tol)
            .into_iter()
            .map(|s| s.kind)
            .collect(),
    )
}

/// A feasible path of admissible type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolvedPath {
    pub candidate: PathCandidate,
    pub word: Word,
    pub length: f64,
    /// `t₁..t₄` with `t_j = ξ₁ + … + ξ_j`.
    pub switch_times: [f64; SLOTS - 1],
}

impl SolvedPath {
    /// Snaps sub-threshold durations to zero, classifies, and checks that the
    /// result is admissible (or empty) and feasible to `feasibility_tol`.
    pub fn from_candidate(
        instance: &Instance,
        candidate: PathCandidate,
        feasibility_tol: f64,
    ) -> Result<Self> {
        candidate.validate()?;
        let tol = zero_threshold(candidate.length());
        let mut snapped = candidate;
        for d in snapped.durations.iter_mut() {
            if *d < tol {
                *d = 0.0;
            }
        }
        let word = classify(&snapped, tol);
        if !word.is_empty() && !word.is_admissible() {
            return Err(Error::InadmissibleWord(word.to_string()));
        }
        let r = residual(instance, &snapped)?;
        let norm = crate::path::norm4(&r);
        if !(norm <= feasibility_tol) {
            return Err(invalid(format!(
                "candidate residual {norm:.3e} exceeds feasibility tolerance {feasibility_tol:.1e}"
            )));
        }
        Ok(Self {
            length: snapped.length(),
            switch_times: snapped.switch_times(),
            candidate: snapped,
            word,
        })
    }

    pub fn segments(&self) -> Vec<Segment> {
        segments(&self.candidate, f64::MIN_POSITIVE)
    }

    /// Interior switch times between merged segments.
    pub fn segment_switch_times(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let segs = self.segments();
        let mut out = Vec::with_capacity(segs.len());
        for s in segs.iter().take(segs.len().saturating_sub(1)) {
            acc += s.duration;
            out.push(acc);
        }
        out
    }

    /// Heading swept by each merged segment, `a · duration` (zero for `S`).
    pub fn sweeps(&self, a: f64) -> Vec<f64> {
        self.segments()
            .iter()
            .map(|s| {
                if s.kind.is_turn() {
                    a * s.duration
                } else {
                    0.0
                }
            })
            .collect()
    }

    /// Sweep of the middle arc for `CCC` words.
    pub fn middle_sweep(&self, a: f64) -> Option<f64> {
        self.word.is_ccc().then(|| self.sweeps(a)[1])
    }

    pub fn residual_norm(&self, instance: &Instance) -> f64 {
        crate::path::residual_norm(instance, &self.candidate).unwrap_or(f64::INFINITY)
    }
}
