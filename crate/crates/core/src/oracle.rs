//! Ground-truth shortest paths by enumerating every admissible word.
//!
//! Each word fixes which slots of `L R S L R` are non-zero; the remaining one
//! to three durations are found as roots of the four residual equations by a
//! damped Gauss-Newton iteration started from a uniform grid over the
//! duration box. This path shares nothing with the optimizer in
//! [`crate::solver`] except the residual itself.

use std::f64::consts::PI;

use nalgebra::{Matrix5, Vector5};

use crate::error::{Error, Result};
use crate::path::{
    norm4, residual_unchecked, residual_with_jacobian, ArcKind, Instance, PathCandidate, SLOTS,
};
use crate::word::{zero_threshold, SolvedPath, Word};

/// Grid points per unknown.
pub const GRID_PER_DIM: usize = 16;
/// Residual norm a root must reach.
pub const ROOT_TOL: f64 = 1e-10;
const MAX_NEWTON: usize = 60;
const MAX_HALVINGS: usize = 40;
const STALL_RATIO: f64 = 0.99;

/// An admissible word together with the slots its arcs occupy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordProblem {
    word: Word,
    slots: Vec<usize>,
}

impl WordProblem {
    pub fn new(word: Word) -> Result<Self> {
        if !word.is_admissible() {
            return Err(Error::InadmissibleWord(word.to_string()));
        }
        let mut slots = Vec::with_capacity(word.len());
        let mut next = 0;
        for &kind in word.arcs() {
            let slot = (next..SLOTS)
                .find(|&j| ArcKind::WORD[j] == kind)
                .ok_or_else(|| Error::InadmissibleWord(word.to_string()))?;
            slots.push(slot);
            next = slot + 1;
        }
        Ok(Self { word, slots })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    /// Slot index in `L R S L R` of each unknown duration.
    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    pub fn unknowns(&self) -> usize {
        self.slots.len()
    }

    fn upper_bound(&self, instance: &Instance, k: usize) -> f64 {
        if ArcKind::WORD[self.slots[k]] == ArcKind::S {
            instance.diameter() + 4.0 / instance.curvature
        } else {
            instance.full_turn()
        }
    }

    fn embed(&self, values: &[f64]) -> [f64; SLOTS] {
        let mut xi = [0.0; SLOTS];
        for (&slot, &v) in self.slots.iter().zip(values) {
            xi[slot] = v;
        }
        xi
    }
}

impl std::str::FromStr for WordProblem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WordProblem::new(s.parse()?)
    }
}

/// All duration vectors of `word` that close the path to [`ROOT_TOL`], with
/// every duration strictly positive and inside its box.
pub fn solve_word(instance: &Instance, word: &WordProblem) -> Vec<PathCandidate> {
    let k = word.unknowns();
    let ub: Vec<f64> = (0..k).map(|i| word.upper_bound(instance, i)).collect();
    let total = GRID_PER_DIM.pow(k as u32);
    let mut roots: Vec<[f64; SLOTS]> = Vec::new();

    for flat in 0..total {
        let mut idx = flat;
        let guess: Vec<f64> = (0..k)
            .map(|i| {
                let g = idx % GRID_PER_DIM;
                idx /= GRID_PER_DIM;
                (g as f64 + 0.5) / GRID_PER_DIM as f64 * ub[i]
            })
            .collect();
        let Some(xi) = newton(instance, word, word.embed(&guess)) else {
            continue;
        };
        let Some(xi) = normalize_root(instance, word, xi, &ub) else {
            continue;
        };
        let dup = roots
            .iter()
            .any(|r| r.iter().zip(xi).all(|(u, v)| (u - v).abs() <= 1e-8));
        if !dup {
            roots.push(xi);
        }
    }
    roots.sort_by(|p, q| p.iter().sum::<f64>().total_cmp(&q.iter().sum()));
    roots.into_iter().map(PathCandidate::new).collect()
}

fn newton(instance: &Instance, word: &WordProblem, mut xi: [f64; SLOTS]) -> Option<[f64; SLOTS]> {
    let (mut r, mut jac) = residual_with_jacobian(instance, &xi);
    let mut norm = norm4(&r);
    for _ in 0..MAX_NEWTON {
        if norm <= 1e-14 {
            break;
        }
        let mut normal = Matrix5::<f64>::identity();
        let mut rhs = Vector5::<f64>::zeros();
        for (p, &sp) in word.slots.iter().enumerate() {
            rhs[p] = -(0..4).map(|i| jac[i][sp] * r[i]).sum::<f64>();
            for (q, &sq) in word.slots.iter().enumerate() {
                normal[(p, q)] = (0..4).map(|i| jac[i][sp] * jac[i][sq]).sum();
            }
        }
        let step = normal.lu().solve(&rhs)?;
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let mut trial = xi;
            for (p, &sp) in word.slots.iter().enumerate() {
                trial[sp] += alpha * step[p];
            }
            let nt = norm4(&residual_unchecked(instance, &trial));
            if nt < norm {
                accepted = nt < STALL_RATIO * norm || nt <= ROOT_TOL;
                xi = trial;
                (r, jac) = residual_with_jacobian(instance, &xi);
                norm = nt;
                break;
            }
            alpha *= 0.5;
        }
        // Stalled on a non-zero minimum of the residual norm.
        if !accepted {
            break;
        }
    }
    (norm <= ROOT_TOL).then_some(xi)
}

// Wraps turning durations into one period, rejects negative straights and
// roots that leave the box or have a vanishing arc.
fn normalize_root(
    instance: &Instance,
    word: &WordProblem,
    mut xi: [f64; SLOTS],
    ub: &[f64],
) -> Option<[f64; SLOTS]> {
    let period = instance.full_turn();
    for (k, &slot) in word.slots.iter().enumerate() {
        let v = &mut xi[slot];
        if ArcKind::WORD[slot].is_turn() {
            *v = v.rem_euclid(period);
        }
        if !(*v >= 0.0 && *v <= ub[k]) {
            return None;
        }
    }
    let length: f64 = xi.iter().sum();
    let thr = zero_threshold(length);
    if word.slots.iter().any(|&s| xi[s] < thr) {
        return None;
    }
    let (r, _) = residual_with_jacobian(instance, &xi);
    if norm4(&r) > ROOT_TOL {
        return None;
    }
    // Near a degenerate subword root the residual is flat and Newton stops
    // at a spurious short arc; such roots belong to the subword.
    let short = 1e-4 * length.max(1.0);
    for (k, &slot) in word.slots.iter().enumerate() {
        if xi[slot] >= short || word.slots.len() == 1 {
            continue;
        }
        let mut sub = word.clone();
        sub.slots.remove(k);
        let mut x0 = xi;
        x0[slot] = 0.0;
        if newton(instance, &sub, x0).is_some() {
            return None;
        }
    }
    Some(xi)
}

/// Every feasible candidate over the fifteen words, discarding `CCC` roots
/// whose middle arc is not longer than `π/a`. Sorted by length, then word.
pub fn enumerate_candidates(instance: &Instance) -> Result<Vec<SolvedPath>> {
    instance.validate()?;
    let middle_min = PI / instance.curvature + 1e-9;
    let mut out = Vec::new();
    if let Ok(p) = SolvedPath::from_candidate(instance, PathCandidate::zero(), ROOT_TOL) {
        out.push(p);
    }
    for word in Word::admissible() {
        let problem = WordProblem::new(word)?;
        for cand in solve_word(instance, &problem) {
            let Ok(path) = SolvedPath::from_candidate(instance, cand, ROOT_TOL) else {
                continue;
            };
            if path.word.is_ccc() && path.segments()[1].duration <= middle_min {
                continue;
            }
            out.push(path);
        }
    }
    Ok(crate::solver::merge_duplicates(out))
}

/// Shortest enumerated path; equal lengths (to `1e-9` relative) resolve to
/// the lexicographically smallest word.
pub fn shortest_by_enumeration(instance: &Instance) -> Result<SolvedPath> {
    let all = enumerate_candidates(instance)?;
    pick_shortest(all).ok_or(Error::NoSolution {
        starts: 0,
        best_residual: f64::NAN,
    })
}

pub(crate) fn pick_shortest(all: Vec<SolvedPath>) -> Option<SolvedPath> {
    let min = all.iter().map(|p| p.length).min_by(f64::total_cmp)?;
    let tie = 1e-9 * min.max(1.0);
    all.into_iter()
        .filter(|p| p.length <= min + tie)
        .min_by(|p, q| p.word.cmp(&q.word))
}
