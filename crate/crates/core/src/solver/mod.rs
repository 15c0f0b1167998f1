//! Multistart solution of the switching-time program and the length-bound
//! globalization loop.

mod augmented;
mod config;
mod starts;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub use self::config::{Slack, SolverConfig};
pub use crate::word::classify;

use crate::error::{invalid, Error, Result};
use crate::path::{residual_norm, Instance, PathCandidate};
use crate::word::SolvedPath;

/// Max-norm distance under which two duration vectors are the same solution.
pub const DUPLICATE_TOL: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub best: SolvedPath,
    /// Distinct stationary paths, ascending by length.
    pub all_found: Vec<SolvedPath>,
    pub rounds: usize,
    pub starts_converged: usize,
}

struct RoundResult {
    paths: Vec<SolvedPath>,
    converged: usize,
}

/// Multistart local solves of the switching-time program.
///
/// With `length_bound = Some(B)` the constraint `Σ ξ_j ≤ B + ε` is added,
/// `ε` taken from `config.epsilon_globalize` relative to `B`.
pub fn solve_ps(
    instance: &Instance,
    config: &SolverConfig,
    length_bound: Option<f64>,
) -> Result<Vec<SolvedPath>> {
    instance.validate()?;
    config.validate()?;
    let bound = match length_bound {
        Some(b) if !(b.is_finite() && b > 0.0) => {
            return Err(invalid(format!("length bound must be positive, got {b}")));
        }
        Some(b) => Some(b + config.epsilon_globalize.resolve(b)),
        None => None,
    };
    solve_round(instance, config, bound, 0).map(|r| r.paths)
}

fn identity_path(instance: &Instance, config: &SolverConfig) -> Option<SolvedPath> {
    let zero = PathCandidate::zero();
    let norm = residual_norm(instance, &zero).ok()?;
    (norm <= config.feasibility_tol)
        .then(|| SolvedPath::from_candidate(instance, zero, config.feasibility_tol).ok())
        .flatten()
}

// Arcs of a full turn or more are loops; a shorter path always exists.
fn within_turn_box(path: &SolvedPath, a: f64) -> bool {
    path.sweeps(a).iter().all(|&s| s <= 2.0 * PI + 1e-9)
}

fn solve_round(
    instance: &Instance,
    config: &SolverConfig,
    bound: Option<f64>,
    round: usize,
) -> Result<RoundResult> {
    if let Some(p) = identity_path(instance, config) {
        return Ok(RoundResult {
            paths: vec![p],
            converged: 1,
        });
    }
    let a = instance.curvature;
    let mut converged = 0;
    let mut best_residual = f64::INFINITY;
    let mut paths = Vec::new();
    for start in starts::starts(instance, config.multistart_count, config.seed, round, bound) {
        let out = augmented::run(
            instance,
            start.point,
            start.free,
            bound,
            config.max_inner_iterations,
        );
        best_residual = best_residual.min(out.residual);
        if !(out.residual <= config.feasibility_tol
            && out.optimality <= config.optimality_tol
            && out.bound_excess <= config.feasibility_tol)
        {
            continue;
        }
        converged += 1;
        let Ok(path) = SolvedPath::from_candidate(
            instance,
            PathCandidate::new(out.xi),
            config.feasibility_tol,
        ) else {
            continue;
        };
        if within_turn_box(&path, a) {
            paths.push(path);
        }
    }
    if paths.is_empty() {
        return Err(Error::NoSolution {
            starts: config.multistart_count,
            best_residual,
        });
    }
    Ok(RoundResult {
        paths: merge_duplicates(paths),
        converged,
    })
}

/// Sorts by length and drops paths of the same word whose segment durations
/// are within [`DUPLICATE_TOL`] (max-norm) of an already kept one.
///
/// Comparing merged segments rather than raw slots identifies the same
/// geometric path realized in different slots, e.g. `LR` in slots 1-2 or 1-5.
pub fn merge_duplicates(mut paths: Vec<SolvedPath>) -> Vec<SolvedPath> {
    paths.sort_by(|p, q| {
        p.length
            .total_cmp(&q.length)
            .then_with(|| p.word.cmp(&q.word))
    });
    let mut kept: Vec<SolvedPath> = Vec::with_capacity(paths.len());
    for p in paths {
        let segs = p.segments();
        let dup = kept.iter().any(|k| {
            k.word == p.word
                && k.segments()
                    .iter()
                    .zip(&segs)
                    .all(|(u, v)| (u.duration - v.duration).abs() <= DUPLICATE_TOL)
        });
        if !dup {
            kept.push(p);
        }
    }
    kept
}

/// Repeatedly re-solves under a tightening length bound until no strictly
/// shorter path appears or the round budget is spent.
pub fn globalize(instance: &Instance, config: &SolverConfig) -> Result<SolveReport> {
    instance.validate()?;
    config.validate()?;
    let first = solve_round(instance, config, None, 0)?;
    let mut all = first.paths;
    let mut converged = first.converged;
    let mut best_len = all[0].length;
    let eps = config.epsilon_globalize.resolve(best_len);
    let mut rounds = 1;

    while rounds < config.max_global_rounds && best_len > 0.0 {
        let bound = best_len + eps;
        let round = solve_round(instance, config, Some(bound), rounds);
        rounds += 1;
        let Ok(round) = round else {
            break;
        };
        converged += round.converged;
        let shortest = round.paths[0].length;
        all = merge_duplicates(all.into_iter().chain(round.paths).collect());
        if shortest < best_len - 1e-9 * best_len.max(1.0) {
            best_len = shortest;
        } else {
            break;
        }
    }

    Ok(SolveReport {
        best: all[0].clone(),
        all_found: all,
        rounds,
        starts_converged: converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::OrientedPoint;

    #[test]
    fn identity_instance_returns_zero_path() {
        let p = OrientedPoint::new(1.0, -1.0, 0.4);
        let inst = Instance::new(p, p, 2.0).unwrap();
        let sols = solve_ps(&inst, &SolverConfig::default(), None).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].length, 0.0);
        assert!(sols[0].word.is_empty());
        let report = globalize(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(report.rounds, 1);
        assert_eq!(report.best.length, 0.0);
    }

    #[test]
    fn bad_bound_rejected() {
        let inst = Instance::new(
            OrientedPoint::new(0.0, 0.0, 0.0),
            OrientedPoint::new(1.0, 0.0, 0.0),
            1.0,
        )
        .unwrap();
        assert!(solve_ps(&inst, &SolverConfig::default(), Some(-1.0)).is_err());
    }

    #[test]
    fn straight_segment_found() {
        let inst = Instance::new(
            OrientedPoint::new(0.0, 0.0, 0.0),
            OrientedPoint::new(2.0, 0.0, 0.0),
            1.0,
        )
        .unwrap();
        let report = globalize(&inst, &SolverConfig::default()).unwrap();
        assert_eq!(report.best.word.to_string(), "S");
        assert!((report.best.length - 2.0).abs() < 1e-10);
    }

    #[test]
    fn duplicates_merge_by_max_norm() {
        let inst = Instance::new(
            OrientedPoint::new(0.0, 0.0, 0.0),
            OrientedPoint::new(2.0, 0.0, 0.0),
            1.0,
        )
        .unwrap();
        let mk = |d: f64| {
            SolvedPath::from_candidate(&inst, PathCandidate::new([0.0, 0.0, d, 0.0, 0.0]), 1.0)
                .unwrap()
        };
        let merged = merge_duplicates(vec![mk(2.0), mk(2.0 + 1e-7), mk(2.1)]);
        assert_eq!(merged.len(), 2);
    }
}
