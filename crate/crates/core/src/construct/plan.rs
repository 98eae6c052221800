//! Backward planning of step sequences from the 3 × 6 base to a target size.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::pattern::PatternMatrix;
use super::steps::{base_pattern_36, step_I, step_II, step_III};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PlanStep {
    Base36,
    StepI,
    StepII,
    StepIII,
}

impl PlanStep {
    /// Size after applying the step to an `n × N` pattern.
    pub fn grow(self, n: usize, len: usize) -> (usize, usize) {
        match self {
            PlanStep::Base36 => (3, 6),
            PlanStep::StepI => (n + 1, len + n + 1),
            PlanStep::StepII => (n + 1, len + n),
            PlanStep::StepIII => (n + 1, len + 2),
        }
    }
}

impl fmt::Display for PlanStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PlanStep::Base36 => "Base36",
            PlanStep::StepI => "StepI",
            PlanStep::StepII => "StepII",
            PlanStep::StepIII => "StepIII",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionPlan {
    pub target: (usize, usize),
    pub steps: Vec<PlanStep>,
}

impl ConstructionPlan {
    pub fn names(&self) -> Vec<String> {
        self.steps.iter().map(ToString::to_string).collect()
    }

    /// Replays the sizes; every intermediate `N` stays in `[2n, n(n+1)/2]`.
    pub fn is_valid(&self) -> bool {
        if self.steps.first() != Some(&PlanStep::Base36) {
            return false;
        }
        let mut size = (3, 6);
        for s in &self.steps[1..] {
            if *s == PlanStep::Base36 {
                return false;
            }
            size = s.grow(size.0, size.1);
            if !in_band(size.0, size.1) {
                return false;
            }
        }
        size == self.target
    }

    /// Runs the steps, recording the column arrangement of each.
    pub fn execute(&self) -> Result<Executed> {
        let mut pattern = base_pattern_36();
        let mut arrangements = Vec::new();
        for s in &self.steps[1..] {
            let out = match s {
                PlanStep::StepI => step_I(&pattern)?,
                PlanStep::StepII => step_II(&pattern)?,
                PlanStep::StepIII => step_III(&pattern)?,
                PlanStep::Base36 => unreachable!("base only at the start"),
            };
            pattern = out.pattern;
            arrangements.push(out.arrangement);
        }
        Ok(Executed { pattern, arrangements })
    }
}

#[derive(Clone, Debug)]
pub struct Executed {
    pub pattern: PatternMatrix,
    pub arrangements: Vec<Vec<usize>>,
}

pub(crate) fn in_band(n: usize, len: usize) -> bool {
    n >= 3 && 2 * n <= len && len <= n * (n + 1) / 2
}

/// Finds a step sequence reaching `(n, N)`, preferring step III, then II,
/// then I when walking backwards.
pub fn plan(n: usize, len: usize) -> Result<ConstructionPlan> {
    if !in_band(n, len) {
        return Err(Error::OutOfRange(format!(
            "pattern construction needs n >= 3 and 2n <= N <= n(n+1)/2, got n = {n}, N = {len}"
        )));
    }
    let mut rev = Vec::new();
    if !back(n, len, &mut rev) {
        return Err(Error::OutOfRange(format!("no step sequence reaches ({n}, {len})")));
    }
    rev.push(PlanStep::Base36);
    rev.reverse();
    Ok(ConstructionPlan { target: (n, len), steps: rev })
}

fn back(n: usize, len: usize, acc: &mut Vec<PlanStep>) -> bool {
    if (n, len) == (3, 6) {
        return true;
    }
    if n <= 3 {
        return false;
    }
    let preds = [
        (PlanStep::StepIII, len.checked_sub(2)),
        (PlanStep::StepII, len.checked_sub(n - 1)),
        (PlanStep::StepI, len.checked_sub(n)),
    ];
    for (step, prev) in preds {
        let Some(prev) = prev else { continue };
        if !in_band(n - 1, prev) {
            continue;
        }
        acc.push(step);
        if back(n - 1, prev, acc) {
            return true;
        }
        acc.pop();
    }
    false
}
