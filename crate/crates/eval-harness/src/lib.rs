//! Benchmark evaluation end to end.
//!
//! Loads JSON-lines benchmarks, splits them in-domain (uniform over
//! items) or cross-domain (no database shared between parts), and
//! scores predictions three ways: exact tree equality, execution
//! equality on the item's database, and per-component match rates.
//! Failed items are labeled with one primary error category by fixed
//! priority. [`run_benchmark`] drives the whole pipeline: serialize
//! tables, pick demonstrations, build prompts, call the model
//! gateway, score, and optionally re-prompt failures once for a
//! self-repair round, writing a report, a summary, and per-item
//! records.

mod items;
mod run;
mod score;
mod split;

pub use items::{derive_hardness, load_benchmark, load_predictions, BenchmarkItem, Hardness};
pub use run::{
    build_demo_corpus, load_database_set, load_run_config, render_summary, run_benchmark, DemoConfig, ItemRecord, PromptConfig,
    PromptMode, RunArtifacts, RunConfig, SplitConfig,
};
pub use score::{
    categorize_error, evaluate, item_outcomes, report_from, Breakdown, EvalReport, ItemOutcome,
};
pub use split::{split_dataset, SplitMode};

use std::path::PathBuf;

/// Why evaluation could not proceed.
#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("cross-domain split needs at least 3 databases, found {found}")]
    TooFewDatabases { found: usize },
    #[error("prediction for unknown item id {0:?}")]
    UnknownItemId(String),
    #[error("no database {0:?} in the database set")]
    MissingDatabase(String),
    #[error("test set is empty")]
    EmptyTestSet,
    #[error("gold query of item {id:?} does not parse: {message}")]
    BadGold { id: String, message: String },
    #[error("{path}:{line}: {message}")]
    BadLine { path: PathBuf, line: usize, message: String },
    #[error("bad run config: {0}")]
    Config(String),
    #[error("demonstration selection failed: {0}")]
    Selection(#[from] prompt_builder::PromptError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
