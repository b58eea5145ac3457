//! Prediction scoring: exact, execution, and component accuracy.

use crate::{BenchmarkItem, EvalError};
use relational_model::Database;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use vql_core::{ast_equal, component_diff, Component, VqlAst};
use vql_exec::{exec_equal, execute};

/// How one item scored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemOutcome {
    pub id: String,
    /// The prediction parsed.
    pub parsed: bool,
    /// Trees equal after canonicalization.
    pub exact: bool,
    /// Execution results equal on the item's database.
    pub exec: bool,
    /// Components that disagree with the gold tree; all of them when
    /// the prediction did not parse.
    pub mismatched: Vec<String>,
    /// Primary failure label; present exactly when `exec` is false.
    pub category: Option<String>,
}

/// Accuracy over one slice of the items.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Breakdown {
    pub n: usize,
    pub n_ast: usize,
    pub n_exe: usize,
    pub exact_acc: f64,
    pub exec_acc: f64,
}

impl Breakdown {
    fn from_counts(n: usize, n_ast: usize, n_exe: usize) -> Self {
        let rate = |k: usize| if n == 0 { 0.0 } else { k as f64 / n as f64 };
        Breakdown { n, n_ast, n_exe, exact_acc: rate(n_ast), exec_acc: rate(n_exe) }
    }
}

/// Aggregated scores for a prediction set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub n: usize,
    pub n_ast: usize,
    pub n_exe: usize,
    pub exact_acc: f64,
    pub exec_acc: f64,
    /// Per-component share of items whose prediction matches the gold
    /// on that component.
    pub component_acc: BTreeMap<String, f64>,
    /// Share of failed items per primary category; sums to 1 when any
    /// item failed, empty otherwise.
    pub error_histogram: BTreeMap<String, f64>,
    /// Accuracy per item slice (join vs non-join, optionally crossed
    /// with the run's domain setting).
    pub breakdowns: BTreeMap<String, Breakdown>,
}

/// The single headline label for a wrong prediction: the differing
/// component with the highest diagnostic priority (join before
/// nested, conditions, bin, group, axis, type). None when the trees
/// agree everywhere.
pub fn categorize_error(pred: &VqlAst, gold: &VqlAst) -> Option<Component> {
    component_diff(pred, gold).into_iter().next()
}

fn all_components() -> Vec<String> {
    Component::ALL.iter().map(|c| c.to_string()).collect()
}

/// Scores every item: parse the prediction (a missing or unparsable
/// one fails both metrics under the "parse" label), compare trees,
/// and compare execution results on the item's database.
pub fn item_outcomes(
    predictions: &BTreeMap<String, String>,
    items: &[BenchmarkItem],
    dbs: &BTreeMap<String, Database>,
) -> Result<Vec<ItemOutcome>, EvalError> {
    for id in predictions.keys() {
        if !items.iter().any(|item| &item.id == id) {
            return Err(EvalError::UnknownItemId(id.clone()));
        }
    }
    let mut outcomes = Vec::with_capacity(items.len());
    for item in items {
        let db = dbs
            .get(&item.db_id)
            .ok_or_else(|| EvalError::MissingDatabase(item.db_id.clone()))?;
        let gold = vql_core::parse(&item.gold_vql).map_err(|e| EvalError::BadGold {
            id: item.id.clone(),
            message: e.to_string(),
        })?;
        let pred = predictions.get(&item.id).and_then(|text| vql_core::parse(text).ok());
        let outcome = match pred {
            None => ItemOutcome {
                id: item.id.clone(),
                parsed: false,
                exact: false,
                exec: false,
                mismatched: all_components(),
                category: Some("parse".into()),
            },
            Some(pred) => {
                let exact = ast_equal(&pred, &gold);
                let exec = match (execute(&pred, db), execute(&gold, db)) {
                    (Ok(p), Ok(g)) => exec_equal(&p, &g),
                    _ => false,
                };
                let diff = component_diff(&pred, &gold);
                let category = if exec {
                    None
                } else {
                    Some(
                        diff.iter()
                            .next()
                            .map(|c| c.to_string())
                            .unwrap_or_else(|| "exec".into()),
                    )
                };
                ItemOutcome {
                    id: item.id.clone(),
                    parsed: true,
                    exact,
                    exec,
                    mismatched: diff.iter().map(|c| c.to_string()).collect(),
                    category,
                }
            }
        };
        outcomes.push(outcome);
    }
    Ok(outcomes)
}

/// Aggregates outcomes into a report; `items` supplies the join flag
/// for breakdowns and must align with the outcomes by id.
pub fn report_from(outcomes: &[ItemOutcome], items: &[BenchmarkItem]) -> EvalReport {
    let n = outcomes.len();
    let n_ast = outcomes.iter().filter(|o| o.exact).count();
    let n_exe = outcomes.iter().filter(|o| o.exec).count();
    let rate = |k: usize| if n == 0 { 0.0 } else { k as f64 / n as f64 };

    let mut component_acc = BTreeMap::new();
    for component in Component::ALL {
        let name = component.to_string();
        let matched =
            outcomes.iter().filter(|o| !o.mismatched.contains(&name)).count();
        component_acc.insert(name, rate(matched));
    }

    let failed = n - n_exe;
    let mut error_histogram = BTreeMap::new();
    if failed > 0 {
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        for outcome in outcomes {
            if let Some(category) = &outcome.category {
                *counts.entry(category.clone()).or_default() += 1;
            }
        }
        for (category, count) in counts {
            error_histogram.insert(category, count as f64 / failed as f64);
        }
    }

    let mut breakdowns = BTreeMap::new();
    for (label, want_join) in [("join", true), ("non_join", false)] {
        let slice: Vec<&ItemOutcome> = outcomes
            .iter()
            .zip(items)
            .filter(|(_, item)| item.is_join == want_join)
            .map(|(o, _)| o)
            .collect();
        breakdowns.insert(
            label.to_string(),
            Breakdown::from_counts(
                slice.len(),
                slice.iter().filter(|o| o.exact).count(),
                slice.iter().filter(|o| o.exec).count(),
            ),
        );
    }

    EvalReport {
        n,
        n_ast,
        n_exe,
        exact_acc: rate(n_ast),
        exec_acc: rate(n_exe),
        component_acc,
        error_histogram,
        breakdowns,
    }
}

/// Scores predictions against items on their databases and returns
/// the aggregated report.
pub fn evaluate(
    predictions: &BTreeMap<String, String>,
    items: &[BenchmarkItem],
    dbs: &BTreeMap<String, Database>,
) -> Result<EvalReport, EvalError> {
    if items.is_empty() {
        return Err(EvalError::EmptyTestSet);
    }
    let outcomes = item_outcomes(predictions, items, dbs)?;
    Ok(report_from(&outcomes, items))
}
