//! Generators for exact phase-retrievable frames, frames with a prescribed
//! `d(F)`, and bases carrying a prescribed maximal PR subspace.
//!
//! Random continuous entries are replaced by uniform integers in
//! `[1, RANGE_MAX]`; every output is verified exactly before it is returned,
//! and a failed verification triggers a resample from a derived seed.

mod generate;
mod pattern;
mod plan;
mod steps;

use serde::{Deserialize, Serialize};

pub use generate::{
    admissible_dmax, basis_with_maximal_subspace, compose_direct_sum, generate_exact_pr,
    generate_with_dmax, MaximalSubspaceInstance, DEFAULT_RETRIES, RANGE_MAX,
};
pub use pattern::PatternMatrix;
pub use plan::{plan, ConstructionPlan, Executed, PlanStep};
pub use steps::{base_pattern_36, step_I, step_II, step_III, StepOutput};

use crate::frames::Frame;

/// Verification record attached to generated frames.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: String,
    pub exact_pr: bool,
    pub exact_pr_redundancy: bool,
    pub d: usize,
    pub plan: Vec<String>,
    pub seed: u64,
    pub retries: usize,
}

/// A generated frame with its certificate.
#[derive(Clone, Debug)]
pub struct Certified {
    pub frame: Frame,
    pub certificate: Certificate,
}
