// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tier {
    T1,
    T2,
    T3,
}

impl Tier {
    pub const ALL: [Tier; 3] = [Tier::T1, Tier::T2, Tier::T3];
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A problem before tier assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub problem_id: String,
    pub reference_verilog_chars: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemMeta {
    pub problem_id: String,
    pub reference_verilog_chars: u64,
    pub tier: Tier,
}

type Q = Ratio<i128>;

/// Linear-interpolation percentile of sorted data, `p` in [0, 1].
fn percentile(sorted: &[u64], p: Q) -> Q {
    let pos = p * Q::from_integer(sorted.len() as i128 - 1);
    let lo = pos.floor().to_integer() as usize;
    let frac = pos.fract();
    let a = Q::from_integer(sorted[lo] as i128);
    match sorted.get(lo + 1) {
        Some(&b) => a + (Q::from_integer(b as i128) - a) * frac,
        None => a,
    }
}

/// Boundaries at the 1/3 and 2/3 percentiles of the reference lengths.
pub fn tercile_boundaries(chars: &[u64]) -> Option<(Q, Q)> {
    if chars.is_empty() {
        return None;
    }
    let mut sorted = chars.to_vec();
    sorted.sort_unstable();
    Some((percentile(&sorted, Q::new(1, 3)), percentile(&sorted, Q::new(2, 3))))
}

/// Assigns tiers by reference length: `<= b1` is T1, `<= b2` is T2, the rest T3.
/// Without explicit boundaries the corpus terciles are used.
pub fn classify_tiers(problems: &[ProblemSpec], boundaries: Option<(u64, u64)>) -> Result<Vec<ProblemMeta>, EvalError> {
    let mut seen = std::collections::HashSet::new();
    for p in problems {
        if p.reference_verilog_chars == 0 {
            return Err(EvalError::InvalidProblem(p.problem_id.clone()));
        }
        if !seen.insert(p.problem_id.as_str()) {
            return Err(EvalError::DuplicateProblem(p.problem_id.clone()));
        }
    }
    let (b1, b2) = match boundaries {
        Some((b1, b2)) if b1 >= b2 => return Err(EvalError::InvalidBoundaries(b1, b2)),
        Some((b1, b2)) => (Q::from_integer(b1 as i128), Q::from_integer(b2 as i128)),
        None => {
            let chars: Vec<u64> = problems.iter().map(|p| p.reference_verilog_chars).collect();
            match tercile_boundaries(&chars) {
                Some(b) => b,
                None => return Ok(Vec::new()),
            }
        }
    };
    Ok(problems
        .iter()
        .map(|p| {
            let c = Q::from_integer(p.reference_verilog_chars as i128);
            let tier = if c <= b1 {
                Tier::T1
            } else if c <= b2 {
                Tier::T2
            } else {
                Tier::T3
            };
            ProblemMeta {
                problem_id: p.problem_id.clone(),
                reference_verilog_chars: p.reference_verilog_chars,
                tier,
            }
        })
        .collect())
}
