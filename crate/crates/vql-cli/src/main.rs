//! Command-line front end over the pipeline crates.
//!
//! Every subcommand is a thin shell around one library operation:
//! `parse` and `exec` cover query handling, `emit` renders Vega-Lite,
//! `serialize` prints a table in any prompt format, `prompt` and
//! `repair` assemble model inputs, `run` drives a whole benchmark
//! from a TOML config, and `eval` scores a predictions file. Exit
//! status is 0 on success, 1 when an evaluation finished but some
//! items failed, and 2 on usage or configuration errors.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use eval_harness::{
    build_demo_corpus, evaluate, load_benchmark, load_database_set, load_predictions,
    load_run_config, render_summary, run_benchmark, EvalReport, PromptMode,
};
use prompt_builder::{
    assemble, build_repair_prompt, select_demonstrations, DemoPool, DemoSelectionConfig,
    PromptSpec, DEFAULT_INSTRUCTION, PERSONA_LINE,
};
use relational_model::{load_database, Database};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use table_serialize::{serialize, Family, RowPick, SerializationStrategy};
use vega_emit::to_vega_lite;
use vql_core::VqlAst;
use vql_exec::execute;

#[derive(Parser)]
#[command(name = "vql", version, about = "Query, prompt, and benchmark tools for VQL charts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a query and print its syntax tree
    Parse {
        /// Query text; read from stdin when omitted
        query: Option<String>,
        /// Print the canonical one-line rendering instead
        #[arg(long)]
        render: bool,
    },
    /// Execute a query against a database directory
    Exec {
        /// Database directory (schema.json plus one CSV per table)
        #[arg(long)]
        db: PathBuf,
        /// Query text; read from stdin when omitted
        query: Option<String>,
    },
    /// Emit the Vega-Lite spec for a query
    Emit {
        /// Database directory; when given, executed data is inlined
        #[arg(long)]
        db: Option<PathBuf>,
        /// Query text; read from stdin when omitted
        query: Option<String>,
    },
    /// Print a database in one of the prompt serialization formats
    Serialize {
        /// Database directory
        #[arg(long)]
        db: PathBuf,
        #[command(flatten)]
        strategy: StrategyArgs,
        /// Question guiding similarity-ranked row picking
        #[arg(long)]
        question: Option<String>,
    },
    /// Assemble the full model prompt for one question
    Prompt {
        /// Directory holding one subdirectory per database
        #[arg(long)]
        db_root: PathBuf,
        /// Database id the question is asked over
        #[arg(long)]
        db: String,
        /// The natural-language question
        #[arg(long)]
        question: String,
        #[command(flatten)]
        strategy: StrategyArgs,
        /// Prompt form: plain, cot, or persona
        #[arg(long, default_value = "plain", value_parser = parse_prompt_mode)]
        mode: PromptMode,
        /// Override the default instruction line
        #[arg(long)]
        instruction: Option<String>,
        /// Benchmark JSON-lines file supplying demonstration items
        #[arg(long)]
        demos: Option<PathBuf>,
        /// Demonstration databases to draw from (A)
        #[arg(long, default_value_t = 1)]
        num_databases: usize,
        /// Demonstrations taken from each database (B)
        #[arg(long, default_value_t = 1)]
        per_database: usize,
        /// Demonstration pool: in_domain or cross_domain
        #[arg(long, default_value = "in_domain", value_parser = parse_demo_pool)]
        pool: DemoPool,
    },
    /// Run a whole benchmark from a TOML config file
    Run {
        /// Run configuration file
        #[arg(long)]
        config: PathBuf,
        /// Answer every model call from the cache; no network
        #[arg(long)]
        replay: bool,
        /// Parallel worker bound, overriding the config
        #[arg(long)]
        workers: Option<usize>,
        /// Add one self-repair round for failed items
        #[arg(long)]
        repair: bool,
    },
    /// Score a predictions file against a gold benchmark
    Eval {
        /// Gold benchmark JSON-lines file
        #[arg(long)]
        gold: PathBuf,
        /// Predictions JSON-lines file, one {id, vql} per line
        #[arg(long)]
        pred: PathBuf,
        /// Directory holding one subdirectory per database
        #[arg(long)]
        db_root: PathBuf,
    },
    /// Assemble the self-repair prompt for a failed query
    Repair {
        /// Database directory
        #[arg(long)]
        db: PathBuf,
        /// The natural-language question
        #[arg(long)]
        question: String,
        #[command(flatten)]
        strategy: StrategyArgs,
        /// The query that failed
        #[arg(long)]
        failed: String,
        /// Parser or executor message explaining the failure
        #[arg(long)]
        error: Option<String>,
    },
}

/// Serialization knobs shared by serialize, prompt, and repair.
#[derive(Args)]
struct StrategyArgs {
    /// Serialization family, e.g. table-column or table2json
    #[arg(long)]
    family: Family,
    /// Append the foreign-key relationship block
    #[arg(long)]
    with_fk: bool,
    /// Value rows embedded per table (0 = schema only)
    #[arg(long, default_value_t = 0)]
    value_rows: usize,
    /// Row choice: first or jaccard
    #[arg(long, default_value = "first", value_parser = parse_row_pick)]
    row_pick: RowPick,
}

impl StrategyArgs {
    fn to_strategy(&self) -> SerializationStrategy {
        SerializationStrategy {
            family: self.family,
            with_fk: self.with_fk,
            value_rows: self.value_rows,
            row_pick: self.row_pick,
        }
    }
}

fn parse_row_pick(s: &str) -> Result<RowPick, String> {
    match s {
        "first" => Ok(RowPick::FirstR),
        "jaccard" => Ok(RowPick::JaccardTop),
        other => Err(format!("unknown row pick {other:?}, expected first or jaccard")),
    }
}

fn parse_prompt_mode(s: &str) -> Result<PromptMode, String> {
    match s {
        "plain" => Ok(PromptMode::Plain),
        "cot" => Ok(PromptMode::Cot),
        "persona" => Ok(PromptMode::Persona),
        other => Err(format!("unknown prompt mode {other:?}, expected plain, cot, or persona")),
    }
}

fn parse_demo_pool(s: &str) -> Result<DemoPool, String> {
    match s {
        "in_domain" | "in-domain" => Ok(DemoPool::InDomain),
        "cross_domain" | "cross-domain" => Ok(DemoPool::CrossDomain),
        other => Err(format!("unknown pool {other:?}, expected in_domain or cross_domain")),
    }
}

/// The query argument, or all of stdin when it is absent.
fn query_text(arg: Option<String>) -> Result<String> {
    match arg {
        Some(q) => Ok(q),
        None => std::io::read_to_string(std::io::stdin()).context("reading query from stdin"),
    }
}

fn parse_query(text: &str) -> Result<VqlAst> {
    vql_core::parse(text).map_err(|e| anyhow::anyhow!("{e}"))
}

fn open_database(dir: &Path) -> Result<Database> {
    load_database(dir).with_context(|| format!("loading database {}", dir.display()))
}

/// Prints text with exactly one final newline. A closed pipe (the
/// reader stopped, e.g. `vql ... | head`) ends the process cleanly
/// instead of panicking.
fn print_text(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let result = if text.ends_with('\n') {
        out.write_all(text.as_bytes())
    } else {
        out.write_all(text.as_bytes()).and_then(|()| out.write_all(b"\n"))
    };
    if let Err(e) = result {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}

/// 0 when every item passed execution, 1 otherwise.
fn score_status(report: &EvalReport) -> ExitCode {
    if report.n_exe == report.n {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Parse { query, render } => {
            let ast = parse_query(&query_text(query)?)?;
            if render {
                print_text(&vql_core::render(&ast));
            } else {
                print_text(&format!("{ast:#?}"));
            }
        }
        Command::Exec { db, query } => {
            let ast = parse_query(&query_text(query)?)?;
            let data = execute(&ast, &open_database(&db)?)?;
            print_text(&serde_json::to_string_pretty(&data)?);
        }
        Command::Emit { db, query } => {
            let ast = parse_query(&query_text(query)?)?;
            let spec = match db {
                Some(dir) => {
                    let data = execute(&ast, &open_database(&dir)?)?;
                    to_vega_lite(&ast, Some(&data))
                }
                None => to_vega_lite(&ast, None),
            };
            print_text(&serde_json::to_string_pretty(&spec)?);
        }
        Command::Serialize { db, strategy, question } => {
            let text = serialize(&open_database(&db)?, &strategy.to_strategy(), question.as_deref())?;
            print_text(&text);
        }
        Command::Prompt {
            db_root,
            db,
            question,
            strategy,
            mode,
            instruction,
            demos,
            num_databases,
            per_database,
            pool,
        } => {
            let strategy = strategy.to_strategy();
            let database = open_database(&db_root.join(&db))?;
            let table = serialize(&database, &strategy, Some(&question))?;
            let mut spec = PromptSpec::zero_shot(table, question.as_str());
            spec.instruction = instruction.unwrap_or_else(|| DEFAULT_INSTRUCTION.to_string());
            spec.cot = mode == PromptMode::Cot;
            spec.persona = (mode == PromptMode::Persona).then(|| PERSONA_LINE.to_string());
            if let Some(bench) = demos {
                if num_databases * per_database == 0 {
                    bail!("--num-databases and --per-database must both be positive with --demos");
                }
                let items = load_benchmark(&bench)?;
                let dbs = load_database_set(&db_root, items.iter())?;
                let corpus = build_demo_corpus(&items, &dbs, &strategy)?;
                let cfg = DemoSelectionConfig { num_databases, per_database, pool };
                spec.demonstrations = select_demonstrations(&corpus, &question, &db, &cfg)?;
            }
            print_text(&assemble(&spec)?);
        }
        Command::Run { config, replay, workers, repair } => {
            let mut cfg = load_run_config(&config)?;
            cfg.replay |= replay;
            cfg.repair |= repair;
            if let Some(n) = workers {
                cfg.workers = n;
            }
            let artifacts = run_benchmark(&cfg)?;
            print_text(&render_summary(&artifacts.report));
            return Ok(score_status(&artifacts.report));
        }
        Command::Eval { gold, pred, db_root } => {
            let items = load_benchmark(&gold)?;
            let predictions = load_predictions(&pred)?;
            let dbs = load_database_set(&db_root, items.iter())?;
            let report = evaluate(&predictions, &items, &dbs)?;
            print_text(&serde_json::to_string_pretty(&report)?);
            return Ok(score_status(&report));
        }
        Command::Repair { db, question, strategy, failed, error } => {
            let table = serialize(&open_database(&db)?, &strategy.to_strategy(), Some(&question))?;
            let prompt = build_repair_prompt(&failed, &table, &question, error.as_deref())?;
            print_text(&prompt);
        }
    }
    Ok(ExitCode::SUCCESS)
}
