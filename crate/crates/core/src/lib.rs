//! Markov-Dubins shortest paths of bounded curvature.
//!
//! The crate computes shortest planar paths between two oriented points under
//! a curvature bound `a` by optimizing the five arc durations of the fixed word
//! `L R S L R`, cross-checks them against an exhaustive enumeration of the
//! admissible words, and builds adjoint certificates that verify the
//! maximum-principle conditions (normal and abnormal) for a given path.
//!
//! ```
//! use markov_dubins::{globalize, Instance, OrientedPoint, SolverConfig};
//! use std::f64::consts::PI;
//!
//! let inst = Instance::new(
//!     OrientedPoint::new(0.0, 0.0, -PI / 3.0),
//!     OrientedPoint::new(1.0, 1.0, -PI / 6.0),
//!     3.0,
//! ).unwrap();
//! let report = globalize(&inst, &SolverConfig::default()).unwrap();
//! assert_eq!(report.best.word.to_string(), "LSR");
//! ```

pub mod certificate;
pub mod error;
pub mod oracle;
pub mod path;
pub mod solver;
pub mod word;

pub use certificate::{
    build_certificate, detect_abnormal_eligibility, eval_switching, phase_trajectory, verify_pmp,
    AbnormalEligibility, AdjointCertificate, IneligibilityReason, Normality, PhaseSample,
    PmpReport, SwitchingLaw,
};
pub use error::{Error, Result};
pub use oracle::{enumerate_candidates, shortest_by_enumeration, solve_word, WordProblem};
pub use path::{
    propagate_arc, propagate_path, residual, residual_norm, residual_with_jacobian, sample_path,
    ArcKind, Instance, OrientedPoint, PathCandidate, PathSample,
};
pub use solver::{classify, globalize, solve_ps, Slack, SolveReport, SolverConfig};
pub use word::{zero_threshold, SolvedPath, Word};
