// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{AttemptOutcome, EvalError, Ratio};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    Synth,
    Functional,
}

impl Predicate {
    pub fn holds(&self, o: &AttemptOutcome) -> bool {
        match self {
            Predicate::Synth => o.synth_ok,
            Predicate::Functional => o.functional_ok,
        }
    }
}

/// How a problem's attempts turn into a success value for a given k.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    /// 1 if any of attempts 1..=k succeeds, else 0.
    #[default]
    FirstK,
    /// 1 - C(n-c, k) / C(n, k) over all n attempts with c successes.
    Unbiased,
}

/// Groups outcomes by problem, attempts sorted by index.
pub(crate) fn by_problem(outcomes: &[AttemptOutcome]) -> Result<BTreeMap<&str, Vec<&AttemptOutcome>>, EvalError> {
    let mut groups: BTreeMap<&str, Vec<&AttemptOutcome>> = BTreeMap::new();
    for o in outcomes {
        o.validate()?;
        groups.entry(o.problem_id.as_str()).or_default().push(o);
    }
    for attempts in groups.values_mut() {
        attempts.sort_by_key(|o| o.attempt_idx);
        if let Some(w) = attempts.windows(2).find(|w| w[0].attempt_idx == w[1].attempt_idx) {
            return Err(EvalError::DuplicateAttempt {
                problem_id: w[0].problem_id.clone(),
                attempt_idx: w[0].attempt_idx,
            });
        }
    }
    Ok(groups)
}

/// Success value of one problem; `attempts` sorted by index without duplicates.
pub(crate) fn problem_value(
    attempts: &[&AttemptOutcome],
    k: u32,
    pred: Predicate,
    est: Estimator,
) -> Result<Ratio, EvalError> {
    if k == 0 {
        return Err(EvalError::InvalidK);
    }
    let id = attempts.first().map(|o| o.problem_id.clone()).unwrap_or_default();
    let insufficient = || EvalError::InsufficientAttempts(id.clone(), k);
    match est {
        Estimator::FirstK => {
            // Sorted and unique, so 1..=k are present iff the k-th entry has index k.
            let first_k = attempts.get(..k as usize).ok_or_else(insufficient)?;
            if first_k.last().map(|o| o.attempt_idx) != Some(k) {
                return Err(insufficient());
            }
            Ok(if first_k.iter().any(|o| pred.holds(o)) {
                Ratio::one()
            } else {
                Ratio::zero()
            })
        }
        Estimator::Unbiased => {
            let n = attempts.len() as u128;
            let k = k as u128;
            if n < k {
                return Err(insufficient());
            }
            let c = attempts.iter().filter(|o| pred.holds(o)).count() as u128;
            if n - c < k {
                return Ok(Ratio::one());
            }
            let mut all_fail = Ratio::one();
            for i in 0..k {
                all_fail *= Ratio::new(n - c - i, n - i);
            }
            Ok(Ratio::one() - all_fail)
        }
    }
}

/// Fraction of problems whose first `k` attempts contain a success.
pub fn pass_at_k(outcomes: &[AttemptOutcome], k: u32, pred: Predicate) -> Result<Ratio, EvalError> {
    pass_at_k_with(outcomes, k, pred, Estimator::FirstK)
}

pub fn pass_at_k_with(outcomes: &[AttemptOutcome], k: u32, pred: Predicate, est: Estimator) -> Result<Ratio, EvalError> {
    let groups = by_problem(outcomes)?;
    if groups.is_empty() {
        return Err(EvalError::NoProblems);
    }
    let mut sum = Ratio::zero();
    for attempts in groups.values() {
        sum += problem_value(attempts, k, pred, est)?;
    }
    Ok(sum / Ratio::from_integer(groups.len() as u128))
}

/// Renders a ratio as a percentage with two decimals, rounding half up.
pub fn percent(r: Ratio) -> String {
    let (num, den) = (*r.numer(), *r.denom());
    let hundredths = (2 * num * 10_000 + den) / (2 * den);
    format!("{}.{:02}%", hundredths / 100, hundredths % 100)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outcomes(rows: &[(&str, &[bool])]) -> Vec<AttemptOutcome> {
        rows.iter()
            .flat_map(|(id, attempts)| {
                attempts
                    .iter()
                    .enumerate()
                    .map(move |(i, &ok)| AttemptOutcome::new(*id, i as u32 + 1, ok, 1, ok as u32))
            })
            .collect()
    }

    #[test]
    fn worked_example() {
        let o = outcomes(&[("P1", &[true, false, false]), ("P2", &[false, false, true])]);
        assert_eq!(pass_at_k(&o, 1, Predicate::Functional).unwrap(), Ratio::new(1, 2));
        assert_eq!(pass_at_k(&o, 2, Predicate::Functional).unwrap(), Ratio::new(1, 2));
        assert_eq!(pass_at_k(&o, 3, Predicate::Functional).unwrap(), Ratio::one());
        assert_eq!(
            pass_at_k(&o, 4, Predicate::Synth),
            Err(EvalError::InsufficientAttempts("P1".into(), 4))
        );
    }

    #[test]
    fn gaps_in_numbering_are_insufficient() {
        let mut o = outcomes(&[("P", &[true, true])]);
        o[1].attempt_idx = 3;
        assert!(pass_at_k(&o, 1, Predicate::Synth).is_ok());
        assert!(matches!(pass_at_k(&o, 2, Predicate::Synth), Err(EvalError::InsufficientAttempts(..))));
        o[1].attempt_idx = 1;
        assert!(matches!(pass_at_k(&o, 1, Predicate::Synth), Err(EvalError::DuplicateAttempt { .. })));
    }

    #[test]
    fn rendering_rounds_half_up() {
        assert_eq!(percent(Ratio::new(145, 156)), "92.95%");
        assert_eq!(percent(Ratio::new(1, 8)), "12.50%");
        // 0.000125 -> 0.0125% -> 0.01%
        assert_eq!(percent(Ratio::new(1, 8000)), "0.01%");
        assert_eq!(percent(Ratio::new(1, 80000)), "0.00%");
        assert_eq!(percent(Ratio::one()), "100.00%");
        assert_eq!(percent(Ratio::new(118, 156)), "75.64%");
    }

    #[test]
    fn unbiased_estimator() {
        // n = 4, c = 1, k = 2: 1 - C(3,2)/C(4,2) = 1 - 3/6.
        let o = outcomes(&[("P", &[false, false, true, false])]);
        assert_eq!(
            pass_at_k_with(&o, 2, Predicate::Synth, Estimator::Unbiased).unwrap(),
            Ratio::new(1, 2)
        );
        assert_eq!(
            pass_at_k_with(&o, 1, Predicate::Synth, Estimator::Unbiased).unwrap(),
            Ratio::new(1, 4)
        );
        assert_eq!(
            pass_at_k_with(&o, 4, Predicate::Synth, Estimator::Unbiased).unwrap(),
            Ratio::one()
        );
    }

    #[test]
    fn empty_and_zero_k() {
        assert_eq!(pass_at_k(&[], 1, Predicate::Synth), Err(EvalError::NoProblems));
        let o = outcomes(&[("P", &[true])]);
        assert_eq!(pass_at_k(&o, 0, Predicate::Synth), Err(EvalError::InvalidK));
    }
}
