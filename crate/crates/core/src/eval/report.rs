// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::metrics::{by_problem, percent, problem_value, Estimator, Predicate};
use super::{AttemptOutcome, EvalError, ProblemMeta, Ratio, Tier};

/// An exact ratio with its rendered forms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioValue {
    /// `numerator/denominator`, reduced.
    pub ratio: String,
    pub value: f64,
    pub percent: String,
    #[serde(skip)]
    exact: Ratio,
}

impl RatioValue {
    pub fn new(r: Ratio) -> Self {
        RatioValue {
            ratio: format!("{}/{}", r.numer(), r.denom()),
            value: r.to_f64().unwrap_or(f64::NAN),
            percent: percent(r),
            exact: r,
        }
    }

    pub fn exact(&self) -> Ratio {
        self.exact
    }
}

/// synth@k and pass@k keyed by k.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RatioSet {
    pub problem_count: usize,
    pub synth: BTreeMap<u32, RatioValue>,
    pub pass: BTreeMap<u32, RatioValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelReport {
    pub model: String,
    pub overall: RatioSet,
    /// Only tiers that contain problems.
    pub tiers: BTreeMap<Tier, RatioSet>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub estimator: Estimator,
    pub k_set: Vec<u32>,
    pub problem_count: usize,
    pub tier_counts: BTreeMap<Tier, usize>,
    pub models: Vec<ModelReport>,
}

fn model_list(outcomes: &[AttemptOutcome], models: &[String]) -> Vec<String> {
    if models.is_empty() {
        let set: BTreeSet<&str> = outcomes.iter().map(|o| o.model.as_str()).collect();
        set.into_iter().map(str::to_string).collect()
    } else {
        models.to_vec()
    }
}

/// Overall and per-tier synth@k / pass@k for every model and every k.
///
/// Every (model, problem) pair must have outcomes; outcomes of models not in
/// `models` are ignored. An empty `models` list means all models present.
pub fn aggregate_report(
    outcomes: &[AttemptOutcome],
    metas: &[ProblemMeta],
    models: &[String],
    k_set: &[u32],
    estimator: Estimator,
) -> Result<MetricReport, EvalError> {
    if metas.is_empty() {
        return Err(EvalError::NoProblems);
    }
    if k_set.contains(&0) {
        return Err(EvalError::InvalidK);
    }
    let mut k_set = k_set.to_vec();
    k_set.sort_unstable();
    k_set.dedup();
    let tier_of: HashMap<&str, Tier> = metas.iter().map(|m| (m.problem_id.as_str(), m.tier)).collect();
    if let Some(o) = outcomes.iter().find(|o| !tier_of.contains_key(o.problem_id.as_str())) {
        return Err(EvalError::UnknownProblem(o.problem_id.clone()));
    }
    let mut tier_counts = BTreeMap::new();
    for m in metas {
        *tier_counts.entry(m.tier).or_insert(0) += 1;
    }

    let mut reports = Vec::new();
    for model in model_list(outcomes, models) {
        let mine: Vec<AttemptOutcome> = outcomes.iter().filter(|o| o.model == model).cloned().collect();
        let groups = by_problem(&mine)?;
        for m in metas {
            if !groups.contains_key(m.problem_id.as_str()) {
                return Err(EvalError::MissingOutcomes {
                    model,
                    problem_id: m.problem_id.clone(),
                });
            }
        }
        let mut overall = RatioSet {
            problem_count: metas.len(),
            ..Default::default()
        };
        let mut tiers: BTreeMap<Tier, RatioSet> = tier_counts
            .iter()
            .map(|(&t, &n)| {
                (
                    t,
                    RatioSet {
                        problem_count: n,
                        ..Default::default()
                    },
                )
            })
            .collect();
        for &k in &k_set {
            for pred in [Predicate::Synth, Predicate::Functional] {
                let mut total = Ratio::zero();
                let mut per_tier: BTreeMap<Tier, Ratio> = BTreeMap::new();
                for m in metas {
                    let v = problem_value(&groups[m.problem_id.as_str()], k, pred, estimator)?;
                    total += v;
                    *per_tier.entry(m.tier).or_insert_with(Ratio::zero) += v;
                }
                let pick = |set: &mut RatioSet, r: Ratio| {
                    let slot = match pred {
                        Predicate::Synth => &mut set.synth,
                        Predicate::Functional => &mut set.pass,
                    };
                    slot.insert(k, RatioValue::new(r));
                };
                pick(&mut overall, total / Ratio::from_integer(metas.len() as u128));
                for (tier, sum) in per_tier {
                    let set = tiers.get_mut(&tier).expect("tier counted");
                    let n = set.problem_count as u128;
                    pick(set, sum / Ratio::from_integer(n));
                }
            }
        }
        reports.push(ModelReport { model, overall, tiers });
    }
    Ok(MetricReport {
        estimator,
        k_set,
        problem_count: metas.len(),
        tier_counts,
        models: reports,
    })
}

impl MetricReport {
    /// Plain-text table, one block per model.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        for (i, m) in self.models.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "model: {} ({} problems)", m.model, m.overall.problem_count);
            let mut header = format!("{:<6}{:>6}", "tier", "n");
            for k in &self.k_set {
                let _ = write!(header, "{:>10}", format!("synth@{k}"));
            }
            for k in &self.k_set {
                let _ = write!(header, "{:>10}", format!("pass@{k}"));
            }
            out.push_str(header.trim_end());
            out.push('\n');
            let rows = std::iter::once(("all".to_string(), &m.overall))
                .chain(m.tiers.iter().map(|(t, s)| (t.to_string(), s)));
            for (label, set) in rows {
                let mut line = format!("{:<6}{:>6}", label, set.problem_count);
                for v in set.synth.values().chain(set.pass.values()) {
                    let _ = write!(line, "{:>10}", v.percent);
                }
                out.push_str(&line);
                out.push('\n');
            }
        }
        out
    }
}

/// Per-benchmark first-k verdicts for one model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixRow {
    pub problem_id: String,
    pub synth: Vec<bool>,
    pub pass: Vec<bool>,
}

pub fn benchmark_matrix(outcomes: &[AttemptOutcome], model: &str, k_set: &[u32]) -> Result<Vec<MatrixRow>, EvalError> {
    let mine: Vec<AttemptOutcome> = outcomes.iter().filter(|o| o.model == model).cloned().collect();
    let groups = by_problem(&mine)?;
    let verdicts = |attempts: &[&AttemptOutcome], pred| -> Result<Vec<bool>, EvalError> {
        k_set
            .iter()
            .map(|&k| problem_value(attempts, k, pred, Estimator::FirstK).map(|v| !v.is_zero()))
            .collect()
    };
    groups
        .iter()
        .map(|(id, attempts)| {
            Ok(MatrixRow {
                problem_id: id.to_string(),
                synth: verdicts(attempts, Predicate::Synth)?,
                pass: verdicts(attempts, Predicate::Functional)?,
            })
        })
        .collect()
}

/// Check/cross table of [`benchmark_matrix`] rows.
pub fn render_matrix(rows: &[MatrixRow], k_set: &[u32]) -> String {
    let width = rows.iter().map(|r| r.problem_id.chars().count()).max().unwrap_or(0).max(9);
    let mut out = format!("{:<width$}", "benchmark");
    for k in k_set {
        let _ = write!(out, " synth@{k}");
    }
    for k in k_set {
        let _ = write!(out, " pass@{k}");
    }
    out.push('\n');
    let mark = |b: bool| if b { "\u{2713}" } else { "\u{2717}" };
    for r in rows {
        let mut line = format!("{:<width$}", r.problem_id);
        for (k, &v) in k_set.iter().zip(&r.synth) {
            let w = format!("synth@{k}").len();
            let _ = write!(line, " {:>w$}", mark(v));
        }
        for (k, &v) in k_set.iter().zip(&r.pass) {
            let w = format!("pass@{k}").len();
            let _ = write!(line, " {:>w$}", mark(v));
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}
