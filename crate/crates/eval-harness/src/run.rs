//! The full benchmark pipeline, driven by one TOML config.

use crate::score::{item_outcomes, report_from};
use crate::split::split_dataset;
use crate::{BenchmarkItem, EvalError, EvalReport, SplitMode};
use llm_gateway::{extract_vql, Gateway, ModelConfig};
use prompt_builder::{
    assemble, select_demonstrations, DemoPool, DemoSelectionConfig, Demonstration, PromptSpec,
    RepairInput, DEFAULT_INSTRUCTION, PERSONA_LINE, REPAIR_INSTRUCTION,
};
use rayon::prelude::*;
use relational_model::Database;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use table_serialize::SerializationStrategy;
use vql_exec::{exec_equal, execute};

/// Prompt flavor for the main pass.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PromptMode {
    /// Instruction, demonstrations, test item.
    #[default]
    Plain,
    /// Adds the step-by-step sentence and a query sketch per
    /// demonstration.
    Cot,
    /// Prepends the assistant persona line.
    Persona,
}

/// Split section of the run config.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SplitConfig {
    pub mode: SplitMode,
    /// Train, validation, and test weights.
    #[serde(default = "default_ratios")]
    pub ratios: [u32; 3],
    #[serde(default)]
    pub seed: u64,
}

fn default_ratios() -> [u32; 3] {
    [7, 2, 1]
}

/// Demonstration budget: `num_databases` databases, `per_database`
/// items from each. Zero on either axis means zero-shot.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct DemoConfig {
    #[serde(default)]
    pub num_databases: usize,
    #[serde(default)]
    pub per_database: usize,
    /// Which databases may supply demonstrations; defaults to the
    /// setting matching the split mode.
    #[serde(default)]
    pub pool: Option<DemoPool>,
}

/// Prompt section of the run config.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct PromptConfig {
    #[serde(default)]
    pub mode: PromptMode,
    /// Overrides the default instruction line.
    #[serde(default)]
    pub instruction: Option<String>,
}

/// Everything one benchmark run needs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    /// JSON-lines benchmark file.
    pub benchmark: PathBuf,
    /// Directory holding one database directory per `db_id`.
    pub db_root: PathBuf,
    /// Where the report, summary, and per-item records are written.
    pub out_dir: PathBuf,
    pub split: SplitConfig,
    pub strategy: SerializationStrategy,
    #[serde(default)]
    pub demos: DemoConfig,
    #[serde(default)]
    pub prompt: PromptConfig,
    pub model: ModelConfig,
    /// Response cache location.
    pub cache_dir: PathBuf,
    /// Serve every completion from cache; fail on a miss instead of
    /// calling the endpoint.
    #[serde(default)]
    pub replay: bool,
    /// Re-prompt failed items once with a repair prompt.
    #[serde(default)]
    pub repair: bool,
    /// Parallel completion workers.
    #[serde(default = "default_workers")]
    pub workers: usize,
}

fn default_workers() -> usize {
    1
}

/// Reads a TOML run config.
pub fn load_run_config(path: &Path) -> Result<RunConfig, EvalError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| EvalError::Io { path: path.into(), source })?;
    toml::from_str(&text).map_err(|e| EvalError::Config(e.to_string()))
}

/// One line of `items.jsonl`: what the model answered for an item and
/// how it scored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemRecord {
    pub id: String,
    pub db_id: String,
    pub question: String,
    /// Extracted query, after any successful repair.
    pub prediction: Option<String>,
    /// Gateway or extraction failure message, when no query was
    /// obtained.
    pub response_error: Option<String>,
    pub parsed: bool,
    pub exact: bool,
    pub exec: bool,
    pub category: Option<String>,
    /// The prediction was replaced by a successful repair round.
    pub repaired: bool,
}

/// What a run produced, besides the files in `out_dir`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunArtifacts {
    pub report: EvalReport,
    pub records: Vec<ItemRecord>,
}

/// The model's answer for one item; a failed request or extraction
/// leaves the prediction empty and is scored as a parse failure.
#[derive(Debug, Clone)]
struct Attempt {
    prediction: Option<String>,
    response_error: Option<String>,
}

/// Loads every database the items mention from `root/<db_id>/`
/// directories, erroring on the first missing or unreadable one.
pub fn load_database_set<'a>(
    root: &Path,
    items: impl Iterator<Item = &'a BenchmarkItem>,
) -> Result<BTreeMap<String, Database>, EvalError> {
    let mut dbs = BTreeMap::new();
    for item in items {
        if dbs.contains_key(&item.db_id) {
            continue;
        }
        let dir = root.join(&item.db_id);
        if !dir.is_dir() {
            return Err(EvalError::MissingDatabase(item.db_id.clone()));
        }
        let db = relational_model::load_database(&dir)
            .map_err(|e| EvalError::Config(format!("database {:?}: {e}", item.db_id)))?;
        dbs.insert(item.db_id.clone(), db);
    }
    Ok(dbs)
}

/// Turns benchmark items into demonstrations by serializing each
/// item's database under the given strategy.
pub fn build_demo_corpus(
    train: &[BenchmarkItem],
    dbs: &BTreeMap<String, Database>,
    strategy: &SerializationStrategy,
) -> Result<Vec<Demonstration>, EvalError> {
    train
        .iter()
        .map(|item| {
            let db = dbs
                .get(&item.db_id)
                .ok_or_else(|| EvalError::MissingDatabase(item.db_id.clone()))?;
            let serialized_table = table_serialize::serialize(db, strategy, Some(&item.question))
                .map_err(|e| EvalError::Config(e.to_string()))?;
            Ok(Demonstration {
                question: item.question.clone(),
                db_id: item.db_id.clone(),
                serialized_table,
                gold_vql: item.gold_vql.clone(),
            })
        })
        .collect()
}

/// Why the prediction failed, for the repair prompt: the parse or
/// execution error when there is one, nothing when the query ran but
/// produced the wrong chart.
fn failure_note(prediction: &str, db: &Database) -> Option<String> {
    match vql_core::parse(prediction) {
        Err(e) => Some(e.to_string()),
        Ok(ast) => match execute(&ast, db) {
            Err(e) => Some(e.to_string()),
            Ok(_) => None,
        },
    }
}

struct RunContext<'a> {
    cfg: &'a RunConfig,
    dbs: &'a BTreeMap<String, Database>,
    corpus: Vec<Demonstration>,
    selection: DemoSelectionConfig,
    instruction: String,
    gateway: Gateway,
}

impl RunContext<'_> {
    fn serialized_table(&self, item: &BenchmarkItem) -> Result<String, EvalError> {
        let db = self
            .dbs
            .get(&item.db_id)
            .ok_or_else(|| EvalError::MissingDatabase(item.db_id.clone()))?;
        table_serialize::serialize(db, &self.cfg.strategy, Some(&item.question))
            .map_err(|e| EvalError::Config(e.to_string()))
    }

    /// Builds the item's prompt, completes it, and extracts the query.
    fn attempt(&self, item: &BenchmarkItem) -> Result<Attempt, EvalError> {
        let demonstrations = if self.selection.num_databases * self.selection.per_database == 0 {
            Vec::new()
        } else {
            select_demonstrations(&self.corpus, &item.question, &item.db_id, &self.selection)?
        };
        let mode = self.cfg.prompt.mode;
        let spec = PromptSpec {
            instruction: self.instruction.clone(),
            demonstrations,
            test_table: self.serialized_table(item)?,
            test_question: item.question.clone(),
            cot: mode == PromptMode::Cot,
            persona: (mode == PromptMode::Persona).then(|| PERSONA_LINE.to_string()),
            repair_input: None,
        };
        let prompt = assemble(&spec)?;
        Ok(match self.gateway.complete(&prompt, &self.cfg.model) {
            Err(e) => Attempt { prediction: None, response_error: Some(e.to_string()) },
            Ok(text) => match extract_vql(&text) {
                Ok(vql) => Attempt { prediction: Some(vql), response_error: None },
                Err(e) => Attempt { prediction: None, response_error: Some(e.to_string()) },
            },
        })
    }

    /// One repair round for a failed item: re-prompt with the failed
    /// query and return the fix only when it executes to the gold
    /// result, so accepting it can never lower a score.
    fn repair(&self, item: &BenchmarkItem, failed_vql: &str) -> Result<Option<String>, EvalError> {
        let db = self
            .dbs
            .get(&item.db_id)
            .ok_or_else(|| EvalError::MissingDatabase(item.db_id.clone()))?;
        let spec = PromptSpec {
            instruction: REPAIR_INSTRUCTION.to_string(),
            demonstrations: Vec::new(),
            test_table: self.serialized_table(item)?,
            test_question: item.question.clone(),
            cot: false,
            persona: None,
            repair_input: Some(RepairInput {
                failed_vql: failed_vql.to_string(),
                error_note: failure_note(failed_vql, db),
            }),
        };
        let prompt = assemble(&spec)?;
        let Ok(text) = self.gateway.complete(&prompt, &self.cfg.model) else {
            return Ok(None);
        };
        let Ok(vql) = extract_vql(&text) else {
            return Ok(None);
        };
        let Ok(ast) = vql_core::parse(&vql) else {
            return Ok(None);
        };
        let gold = vql_core::parse(&item.gold_vql).map_err(|e| EvalError::BadGold {
            id: item.id.clone(),
            message: e.to_string(),
        })?;
        let (Ok(repaired), Ok(gold)) = (execute(&ast, db), execute(&gold, db)) else {
            return Ok(None);
        };
        Ok(exec_equal(&repaired, &gold).then_some(vql))
    }
}

/// Runs the whole pipeline: load, split, prompt, complete, score,
/// optionally repair, and write `report.json`, `summary.txt`, and
/// `items.jsonl` into the output directory. Completion failures are
/// recorded per item and scored as failures; anything that would
/// corrupt the run (bad config, missing database, unusable
/// demonstration pool) aborts it.
pub fn run_benchmark(cfg: &RunConfig) -> Result<RunArtifacts, EvalError> {
    let items = load_benchmark_checked(cfg)?;
    let [train_w, valid_w, test_w] = cfg.split.ratios;
    let (train, _valid, test) =
        split_dataset(&items, cfg.split.mode, (train_w, valid_w, test_w), cfg.split.seed)?;
    if test.is_empty() {
        return Err(EvalError::EmptyTestSet);
    }
    let dbs = load_database_set(&cfg.db_root, train.iter().chain(&test))?;

    let ctx = RunContext {
        cfg,
        dbs: &dbs,
        corpus: build_demo_corpus(&train, &dbs, &cfg.strategy)?,
        selection: DemoSelectionConfig {
            num_databases: cfg.demos.num_databases,
            per_database: cfg.demos.per_database,
            pool: cfg.demos.pool.unwrap_or(match cfg.split.mode {
                SplitMode::InDomain => DemoPool::InDomain,
                SplitMode::CrossDomain => DemoPool::CrossDomain,
            }),
        },
        instruction: cfg
            .prompt
            .instruction
            .clone()
            .unwrap_or_else(|| DEFAULT_INSTRUCTION.to_string()),
        gateway: if cfg.replay {
            Gateway::replay(&cfg.cache_dir)
        } else {
            Gateway::new(&cfg.cache_dir)
        },
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| EvalError::Config(e.to_string()))?;

    let attempts: Vec<Attempt> =
        pool.install(|| test.par_iter().map(|item| ctx.attempt(item)).collect::<Result<_, _>>())?;

    let mut predictions: BTreeMap<String, String> = test
        .iter()
        .zip(&attempts)
        .filter_map(|(item, a)| Some((item.id.clone(), a.prediction.clone()?)))
        .collect();
    let mut outcomes = item_outcomes(&predictions, &test, &dbs)?;
    let mut repaired_ids = BTreeSet::new();

    if cfg.repair {
        let targets: Vec<usize> = outcomes
            .iter()
            .enumerate()
            .filter(|(i, o)| !o.exec && attempts[*i].prediction.is_some())
            .map(|(i, _)| i)
            .collect();
        let fixes: Vec<Option<String>> = pool.install(|| {
            targets
                .par_iter()
                .map(|&i| {
                    let failed = attempts[i].prediction.as_deref().expect("target has a candidate");
                    ctx.repair(&test[i], failed)
                })
                .collect::<Result<_, _>>()
        })?;
        for (&i, fix) in targets.iter().zip(fixes) {
            if let Some(vql) = fix {
                predictions.insert(test[i].id.clone(), vql);
                repaired_ids.insert(test[i].id.clone());
            }
        }
        if !repaired_ids.is_empty() {
            outcomes = item_outcomes(&predictions, &test, &dbs)?;
        }
    }

    let mut report = report_from(&outcomes, &test);
    let domain = match cfg.split.mode {
        SplitMode::InDomain => "in_domain",
        SplitMode::CrossDomain => "cross_domain",
    };
    report.breakdowns =
        report.breakdowns.into_iter().map(|(k, v)| (format!("{k}/{domain}"), v)).collect();

    let records: Vec<ItemRecord> = test
        .iter()
        .zip(&outcomes)
        .zip(&attempts)
        .map(|((item, outcome), attempt)| ItemRecord {
            id: item.id.clone(),
            db_id: item.db_id.clone(),
            question: item.question.clone(),
            prediction: predictions.get(&item.id).cloned(),
            response_error: attempt.response_error.clone(),
            parsed: outcome.parsed,
            exact: outcome.exact,
            exec: outcome.exec,
            category: outcome.category.clone(),
            repaired: repaired_ids.contains(&item.id),
        })
        .collect();

    write_artifacts(&cfg.out_dir, &report, &records)?;
    Ok(RunArtifacts { report, records })
}

fn load_benchmark_checked(cfg: &RunConfig) -> Result<Vec<BenchmarkItem>, EvalError> {
    let items = crate::items::load_benchmark(&cfg.benchmark)?;
    if items.is_empty() {
        return Err(EvalError::EmptyTestSet);
    }
    Ok(items)
}

/// Renders the stable, timestamp-free summary text.
pub fn render_summary(report: &EvalReport) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(out, "items: {}", report.n);
    let _ = writeln!(out, "exact: {}/{} = {:.4}", report.n_ast, report.n, report.exact_acc);
    let _ = writeln!(out, "exec: {}/{} = {:.4}", report.n_exe, report.n, report.exec_acc);
    let _ = writeln!(out, "\ncomponent accuracy:");
    for (name, acc) in &report.component_acc {
        let _ = writeln!(out, "  {name} {acc:.4}");
    }
    let _ = writeln!(out, "\nerror histogram:");
    for (name, share) in &report.error_histogram {
        let _ = writeln!(out, "  {name} {share:.4}");
    }
    let _ = writeln!(out, "\nbreakdowns:");
    for (name, b) in &report.breakdowns {
        let _ = writeln!(
            out,
            "  {name} n={} exact={:.4} exec={:.4}",
            b.n, b.exact_acc, b.exec_acc
        );
    }
    out
}

fn write_artifacts(
    out_dir: &Path,
    report: &EvalReport,
    records: &[ItemRecord],
) -> Result<(), EvalError> {
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| EvalError::Io { path, source }
    };
    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;

    let report_path = out_dir.join("report.json");
    let json = serde_json::to_string_pretty(report).expect("report serializes");
    std::fs::write(&report_path, json + "\n").map_err(io_err(&report_path))?;

    let summary_path = out_dir.join("summary.txt");
    std::fs::write(&summary_path, render_summary(report)).map_err(io_err(&summary_path))?;

    let items_path = out_dir.join("items.jsonl");
    let mut lines = String::new();
    for record in records {
        lines.push_str(&serde_json::to_string(record).expect("record serializes"));
        lines.push('\n');
    }
    std::fs::write(&items_path, lines).map_err(io_err(&items_path))?;
    Ok(())
}
