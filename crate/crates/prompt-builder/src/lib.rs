//! Assembles completion prompts for query generation.
//!
//! A prompt is an optional persona line, an instruction, zero to
//! twenty worked demonstrations (serialized table, question, gold
//! query), and the test item with an open answer slot. Chain-of-
//! thought prompts extend each demonstration with a step-by-step
//! sentence and the keyword sketch of its gold query; repair prompts
//! show a failed query and ask for a corrected one.
//!
//! Demonstrations are picked by question-token overlap: first the A
//! most relevant databases, then the B most relevant items within
//! each, emitted least-similar first so the best match sits next to
//! the test question.

mod assemble;
mod select;

pub use assemble::{build_cot_prompt, build_prompt, build_repair_prompt, sketch_of};
pub use select::select_demonstrations;

use serde::{Deserialize, Serialize};

/// Default instruction line for query-generation prompts.
pub const DEFAULT_INSTRUCTION: &str =
    "please generate VQL based on the description of tabular data and question.";

/// Role-play line for the persona prompt variant.
pub const PERSONA_LINE: &str = "You are a data visualization assistant";

/// Step-by-step sentence that precedes each sketch in chain-of-thought
/// prompts.
pub const COT_INSTRUCTION: &str =
    "Let's think step by step. Generate the sketch as an intermediate representation and then the final VQL";

/// Persona line for repair prompts.
pub const REPAIR_PERSONA: &str =
    "You are a helpful programming assistant and expert data visualization assistant.";

/// Fix request that follows the failed query in repair prompts.
pub const REPAIR_INSTRUCTION: &str = "Please fix the given VQL and generate a correct VQL";

/// Most demonstrations a single prompt may carry.
pub const MAX_DEMONSTRATIONS: usize = 20;

/// One worked example: a serialized table, the question asked over
/// it, and the gold query that answers it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Demonstration {
    pub question: String,
    pub db_id: String,
    pub serialized_table: String,
    pub gold_vql: String,
}

/// Which databases may supply demonstrations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DemoPool {
    /// Any database, the test item's own included.
    InDomain,
    /// Every database except the test item's.
    CrossDomain,
}

/// Demonstration budget: A databases, B items from each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemoSelectionConfig {
    pub num_databases: usize,
    pub per_database: usize,
    pub pool: DemoPool,
}

/// A failed attempt carried into a repair prompt.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairInput {
    pub failed_vql: String,
    /// Parser or executor message explaining the failure.
    pub error_note: Option<String>,
}

/// Everything a prompt is built from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptSpec {
    pub instruction: String,
    pub demonstrations: Vec<Demonstration>,
    pub test_table: String,
    pub test_question: String,
    /// Ask for the sketch-then-query reasoning form.
    pub cot: bool,
    pub persona: Option<String>,
    pub repair_input: Option<RepairInput>,
}

impl PromptSpec {
    /// A plain spec with the default instruction and no demonstrations.
    pub fn zero_shot(test_table: impl Into<String>, test_question: impl Into<String>) -> Self {
        PromptSpec {
            instruction: DEFAULT_INSTRUCTION.into(),
            demonstrations: Vec::new(),
            test_table: test_table.into(),
            test_question: test_question.into(),
            cot: false,
            persona: None,
            repair_input: None,
        }
    }
}

/// Why a prompt could not be assembled or demonstrations selected.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PromptError {
    #[error("pool cannot supply {needed} demonstrations: {reason}")]
    InsufficientPool { needed: usize, reason: String },
    #[error("{0} demonstrations exceed the {MAX_DEMONSTRATIONS}-shot ceiling")]
    TooManyDemonstrations(usize),
    #[error("demonstration gold query does not parse: {0}")]
    BadGoldVql(String),
    #[error("repair needs the failed query text")]
    EmptyFailedVql,
}

/// Builds whichever prompt form the spec calls for: repair when a
/// failed query is attached, chain-of-thought when `cot` is set,
/// plain otherwise.
pub fn assemble(spec: &PromptSpec) -> Result<String, PromptError> {
    if let Some(repair) = &spec.repair_input {
        build_repair_prompt(
            &repair.failed_vql,
            &spec.test_table,
            &spec.test_question,
            repair.error_note.as_deref(),
        )
    } else if spec.cot {
        build_cot_prompt(spec)
    } else {
        build_prompt(spec)
    }
}
