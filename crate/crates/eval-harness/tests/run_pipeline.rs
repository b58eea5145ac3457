//! End-to-end pipeline runs against a seeded replay cache.
//!
//! Every test points the gateway at an unreachable endpoint, so a
//! completed run proves the answers came from the cache, and a run
//! scoring 1.0 proves the runner built byte-identical prompts to the
//! ones seeded here through the public building blocks.

use eval_harness::{
    load_benchmark, load_run_config, run_benchmark, split_dataset, BenchmarkItem, DemoConfig,
    EvalError, PromptConfig, PromptMode, RunConfig, SplitConfig, SplitMode,
};
use llm_gateway::{Gateway, ModelConfig};
use prompt_builder::{
    assemble, build_repair_prompt, select_demonstrations, DemoPool, DemoSelectionConfig,
    Demonstration, PromptSpec,
};
use relational_model::{save_database, Database};
use std::collections::BTreeMap;
use std::path::Path;
use table_serialize::{Family, SerializationStrategy};
use vql_testkit::{orders_db, payments_db, technician_db};

const ENDPOINT: &str = "http://127.0.0.1:9/v1/chat/completions";

fn model() -> ModelConfig {
    ModelConfig::new(ENDPOINT, "fixture-model")
}

fn strategy() -> SerializationStrategy {
    SerializationStrategy::schema_only(Family::TableColumn)
}

fn dbs() -> Vec<Database> {
    vec![technician_db(), payments_db(), orders_db()]
}

fn write_db_root(root: &Path) {
    for db in dbs() {
        save_database(&db, &root.join(&db.id)).unwrap();
    }
}

/// Gold query and its executable-but-differently-written twin, per
/// database.
fn gold_and_alt(db_id: &str) -> (&'static str, &'static str) {
    match db_id {
        "technician_db" => (
            "VISUALIZE bar SELECT name, COUNT(name) FROM technician GROUP BY name",
            "VISUALIZE bar SELECT name, COUNT(name) FROM technician GROUP BY name ORDER BY name ASC",
        ),
        "payments_db" => (
            "VISUALIZE line SELECT date, SUM(amount) FROM payments BIN date BY month",
            "VISUALIZE line SELECT date, SUM(amount) FROM payments BIN date BY month ORDER BY date ASC",
        ),
        "orders_db" => (
            "VISUALIZE bar SELECT city, COUNT(*) FROM customers GROUP BY city",
            "VISUALIZE bar SELECT city, COUNT(*) FROM customers GROUP BY city ORDER BY city ASC",
        ),
        other => panic!("no fixture queries for {other}"),
    }
}

/// What the canned model says for an item, keyed by the id suffix:
/// `_ok` echoes the gold, `_alt` answers an equivalent tree, `_bad`
/// flips the chart type, `_junk` contains no query at all.
fn canned_response(item: &BenchmarkItem) -> String {
    let (gold, alt) = gold_and_alt(&item.db_id);
    if item.id.ends_with("_ok") {
        format!("VQL:\n{gold}")
    } else if item.id.ends_with("_alt") {
        alt.to_string()
    } else if item.id.ends_with("_bad") {
        let flipped = if gold.contains("VISUALIZE bar") {
            gold.replace("VISUALIZE bar", "VISUALIZE pie")
        } else {
            gold.replace("VISUALIZE line", "VISUALIZE bar")
        };
        format!("```\n{flipped}\n```")
    } else {
        "Sorry, I cannot find a chart for that.".to_string()
    }
}

/// Twelve items, four per database, one of each answer kind.
fn write_benchmark(path: &Path) {
    let mut lines = String::new();
    for db in dbs() {
        let (gold, _) = gold_and_alt(&db.id);
        for suffix in ["ok", "alt", "bad", "junk"] {
            let obj = serde_json::json!({
                "id": format!("{}_{suffix}", db.id),
                "db_id": db.id,
                "question": format!("Chart the {} counts, attempt {suffix}.", db.id),
                "vql": gold,
            });
            lines.push_str(&obj.to_string());
            lines.push('\n');
        }
    }
    std::fs::write(path, lines).unwrap();
}

fn db_map() -> BTreeMap<String, Database> {
    dbs().into_iter().map(|db| (db.id.clone(), db)).collect()
}

fn zero_shot_prompt(item: &BenchmarkItem) -> String {
    let db = &db_map()[&item.db_id];
    let table = table_serialize::serialize(db, &strategy(), Some(&item.question)).unwrap();
    assemble(&PromptSpec::zero_shot(table, item.question.as_str())).unwrap()
}

/// Seeds the cache with a canned answer for every item's zero-shot
/// prompt.
fn seed_zero_shot(cache_dir: &Path, items: &[BenchmarkItem]) {
    let gateway = Gateway::new(cache_dir);
    for item in items {
        gateway.seed(&zero_shot_prompt(item), &model(), &canned_response(item)).unwrap();
    }
}

fn base_config(root: &Path, out_name: &str) -> RunConfig {
    RunConfig {
        benchmark: root.join("benchmark.jsonl"),
        db_root: root.join("dbs"),
        out_dir: root.join(out_name),
        split: SplitConfig { mode: SplitMode::InDomain, ratios: [7, 2, 1], seed: 5 },
        strategy: strategy(),
        demos: DemoConfig::default(),
        prompt: PromptConfig::default(),
        model: model(),
        cache_dir: root.join("cache"),
        replay: true,
        repair: false,
        workers: 3,
    }
}

/// Lays out benchmark, databases, and seeded cache under one root.
fn fixture(root: &Path) -> Vec<BenchmarkItem> {
    write_db_root(&root.join("dbs"));
    write_benchmark(&root.join("benchmark.jsonl"));
    let items = load_benchmark(&root.join("benchmark.jsonl")).unwrap();
    seed_zero_shot(&root.join("cache"), &items);
    items
}

#[test]
fn replay_run_scores_the_seeded_answers() {
    let dir = tempfile::tempdir().unwrap();
    let items = fixture(dir.path());
    let cfg = base_config(dir.path(), "out");

    let (_, _, test) = split_dataset(&items, SplitMode::InDomain, (7, 2, 1), 5).unwrap();
    let expect_exact = test.iter().filter(|i| i.id.ends_with("_ok")).count();
    let expect_exec =
        test.iter().filter(|i| i.id.ends_with("_ok") || i.id.ends_with("_alt")).count();

    let artifacts = run_benchmark(&cfg).unwrap();
    let report = &artifacts.report;
    assert_eq!(report.n, test.len());
    assert_eq!(report.n, 2, "12 items at 7:2:1 leave 2 for test");
    assert_eq!(report.n_ast, expect_exact);
    assert_eq!(report.n_exe, expect_exec);

    assert_eq!(artifacts.records.len(), test.len());
    for (record, item) in artifacts.records.iter().zip(&test) {
        assert_eq!(record.id, item.id, "records preserve test order");
        assert!(!record.repaired);
        if record.id.ends_with("_ok") {
            let (gold, _) = gold_and_alt(&record.db_id);
            assert_eq!(record.prediction.as_deref(), Some(gold));
            assert!(record.parsed && record.exact && record.exec);
            assert_eq!(record.category, None);
        } else if record.id.ends_with("_alt") {
            assert!(record.parsed && !record.exact && record.exec);
            assert_eq!(record.category, None);
        } else if record.id.ends_with("_bad") {
            assert!(record.parsed && !record.exact && !record.exec);
            assert_eq!(record.category.as_deref(), Some("type"));
        } else {
            assert!(!record.parsed && record.prediction.is_none());
            assert_eq!(record.category.as_deref(), Some("parse"));
            assert_eq!(record.response_error.as_deref(), Some("no VISUALIZE line in model output"));
        }
    }

    let out = dir.path().join("out");
    let report_json = std::fs::read_to_string(out.join("report.json")).unwrap();
    let reread: eval_harness::EvalReport = serde_json::from_str(&report_json).unwrap();
    assert_eq!(&reread, report);
    assert!(report.breakdowns.contains_key("join/in_domain"));
    assert!(report.breakdowns.contains_key("non_join/in_domain"));
    let items_jsonl = std::fs::read_to_string(out.join("items.jsonl")).unwrap();
    assert_eq!(items_jsonl.lines().count(), test.len());
    let summary = std::fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.starts_with(&format!("items: {}\n", report.n)));
}

#[test]
fn reruns_write_byte_identical_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    fixture(dir.path());
    let first = base_config(dir.path(), "out_a");
    let mut second = base_config(dir.path(), "out_b");
    second.workers = 1;

    run_benchmark(&first).unwrap();
    run_benchmark(&second).unwrap();
    for name in ["report.json", "summary.txt", "items.jsonl"] {
        let a = std::fs::read(dir.path().join("out_a").join(name)).unwrap();
        let b = std::fs::read(dir.path().join("out_b").join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between runs");
    }
}

#[test]
fn few_shot_runs_select_and_embed_demonstrations() {
    let dir = tempfile::tempdir().unwrap();
    write_db_root(&dir.path().join("dbs"));
    write_benchmark(&dir.path().join("benchmark.jsonl"));
    let items = load_benchmark(&dir.path().join("benchmark.jsonl")).unwrap();

    let mut cfg = base_config(dir.path(), "out");
    cfg.demos = DemoConfig { num_databases: 1, per_database: 1, pool: None };

    // Rebuild the exact prompts the runner will assemble: demo corpus
    // from the train part, one demonstration per test item.
    let (train, _, test) = split_dataset(&items, SplitMode::InDomain, (7, 2, 1), 5).unwrap();
    let map = db_map();
    let corpus: Vec<Demonstration> = train
        .iter()
        .map(|item| Demonstration {
            question: item.question.clone(),
            db_id: item.db_id.clone(),
            serialized_table: table_serialize::serialize(
                &map[&item.db_id],
                &strategy(),
                Some(&item.question),
            )
            .unwrap(),
            gold_vql: item.gold_vql.clone(),
        })
        .collect();
    let selection =
        DemoSelectionConfig { num_databases: 1, per_database: 1, pool: DemoPool::InDomain };
    let gateway = Gateway::new(dir.path().join("cache"));
    for item in &test {
        let demonstrations =
            select_demonstrations(&corpus, &item.question, &item.db_id, &selection).unwrap();
        assert_eq!(demonstrations.len(), 1);
        let mut spec = PromptSpec::zero_shot(
            table_serialize::serialize(&map[&item.db_id], &strategy(), Some(&item.question))
                .unwrap(),
            item.question.as_str(),
        );
        spec.demonstrations = demonstrations;
        let (gold, _) = gold_and_alt(&item.db_id);
        gateway.seed(&assemble(&spec).unwrap(), &model(), gold).unwrap();
    }

    let artifacts = run_benchmark(&cfg).unwrap();
    assert_eq!(artifacts.report.exec_acc, 1.0, "every few-shot prompt must hit its seed");
    assert_eq!(artifacts.report.exact_acc, 1.0);
}

#[test]
fn repair_round_rescues_only_seeded_fixes_and_never_hurts() {
    let dir = tempfile::tempdir().unwrap();
    write_db_root(&dir.path().join("dbs"));

    // Four same-database items split 1:1:2, so two land in test.
    let gold = "VISUALIZE bar SELECT name, COUNT(name) FROM technician GROUP BY name";
    let wrong = "VISUALIZE bar SELECT team, COUNT(team) FROM technician GROUP BY team";
    let mut lines = String::new();
    for i in 0..4 {
        let obj = serde_json::json!({
            "id": format!("t{i}"),
            "db_id": "technician_db",
            "question": format!("How many technicians share each name? (v{i})"),
            "vql": gold,
        });
        lines.push_str(&obj.to_string());
        lines.push('\n');
    }
    std::fs::write(dir.path().join("benchmark.jsonl"), lines).unwrap();
    let items = load_benchmark(&dir.path().join("benchmark.jsonl")).unwrap();

    let mut cfg = base_config(dir.path(), "out_repair");
    cfg.split.ratios = [1, 1, 2];
    cfg.repair = true;

    // Every first-pass answer is the same wrong query; only the first
    // test item's repair prompt gets a seeded fix.
    let gateway = Gateway::new(dir.path().join("cache"));
    for item in &items {
        gateway.seed(&zero_shot_prompt_for(dir.path(), item), &model(), wrong).unwrap();
    }
    let (_, _, test) = split_dataset(&items, SplitMode::InDomain, (1, 1, 2), 5).unwrap();
    assert_eq!(test.len(), 2);
    let table = table_serialize::serialize(
        &technician_db(),
        &strategy(),
        Some(&test[0].question),
    )
    .unwrap();
    let repair_prompt = build_repair_prompt(wrong, &table, &test[0].question, None).unwrap();
    gateway.seed(&repair_prompt, &model(), gold).unwrap();

    let repaired = run_benchmark(&cfg).unwrap();
    let by_id: BTreeMap<&str, _> =
        repaired.records.iter().map(|r| (r.id.as_str(), r)).collect();
    let fixed = &by_id[test[0].id.as_str()];
    assert!(fixed.repaired && fixed.exec && fixed.exact);
    assert_eq!(fixed.prediction.as_deref(), Some(gold));
    let unfixed = &by_id[test[1].id.as_str()];
    assert!(!unfixed.repaired && !unfixed.exec);
    assert_eq!(unfixed.prediction.as_deref(), Some(wrong));

    let mut plain_cfg = cfg.clone();
    plain_cfg.repair = false;
    plain_cfg.out_dir = dir.path().join("out_plain");
    let plain = run_benchmark(&plain_cfg).unwrap();
    assert!(repaired.report.exec_acc >= plain.report.exec_acc);
    assert!(repaired.report.exact_acc >= plain.report.exact_acc);
    assert_eq!(plain.report.exec_acc, 0.0);
    assert_eq!(repaired.report.exec_acc, 0.5);
}

fn zero_shot_prompt_for(root: &Path, item: &BenchmarkItem) -> String {
    let db = relational_model::load_database(&root.join("dbs").join(&item.db_id)).unwrap();
    let table = table_serialize::serialize(&db, &strategy(), Some(&item.question)).unwrap();
    assemble(&PromptSpec::zero_shot(table, item.question.as_str())).unwrap()
}

#[test]
fn unseeded_replay_records_misses_without_aborting() {
    let dir = tempfile::tempdir().unwrap();
    write_db_root(&dir.path().join("dbs"));
    write_benchmark(&dir.path().join("benchmark.jsonl"));
    let cfg = base_config(dir.path(), "out");

    let artifacts = run_benchmark(&cfg).unwrap();
    assert_eq!(artifacts.report.exec_acc, 0.0);
    assert_eq!(artifacts.report.error_histogram["parse"], 1.0);
    for record in &artifacts.records {
        assert!(record.prediction.is_none());
        let message = record.response_error.as_deref().unwrap();
        assert!(message.contains("replay cache has no entry"), "{message}");
    }
}

#[test]
fn empty_test_split_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    write_db_root(&dir.path().join("dbs"));
    write_benchmark(&dir.path().join("benchmark.jsonl"));
    let mut cfg = base_config(dir.path(), "out");
    cfg.split.ratios = [1, 1, 0];
    assert!(matches!(run_benchmark(&cfg), Err(EvalError::EmptyTestSet)));
}

#[test]
fn missing_database_directory_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    write_db_root(&dir.path().join("dbs"));
    let obj = serde_json::json!({
        "id": "g0", "db_id": "ghost_db", "question": "Q?",
        "vql": "VISUALIZE bar SELECT a, b FROM t",
    });
    let mut lines = String::new();
    for _ in 0..10 {
        lines.push_str(&obj.to_string());
        lines.push('\n');
    }
    std::fs::write(dir.path().join("benchmark.jsonl"), lines).unwrap();
    let cfg = base_config(dir.path(), "out");
    assert!(matches!(
        run_benchmark(&cfg),
        Err(EvalError::MissingDatabase(db)) if db == "ghost_db"
    ));
}

#[test]
fn toml_config_drives_the_same_run() {
    let dir = tempfile::tempdir().unwrap();
    let items = fixture(dir.path());
    let toml_text = format!(
        r#"
        benchmark = {bench:?}
        db_root = {dbs:?}
        out_dir = {out:?}
        cache_dir = {cache:?}
        replay = true
        workers = 3

        [split]
        mode = "in_domain"
        seed = 5

        [strategy]
        family = "table-column"

        [model]
        endpoint = {endpoint:?}
        model = "fixture-model"
        "#,
        bench = dir.path().join("benchmark.jsonl"),
        dbs = dir.path().join("dbs"),
        out = dir.path().join("out_toml"),
        cache = dir.path().join("cache"),
        endpoint = ENDPOINT,
    );
    std::fs::write(dir.path().join("run.toml"), toml_text).unwrap();

    let cfg = load_run_config(&dir.path().join("run.toml")).unwrap();
    assert_eq!(cfg.split.ratios, [7, 2, 1], "ratio default applies");
    let artifacts = run_benchmark(&cfg).unwrap();

    let (_, _, test) = split_dataset(&items, SplitMode::InDomain, (7, 2, 1), 5).unwrap();
    assert_eq!(artifacts.report.n, test.len());
    let direct = run_benchmark(&base_config(dir.path(), "out_direct")).unwrap();
    assert_eq!(artifacts.report, direct.report);
}

#[test]
fn persona_and_cot_modes_change_the_prompt_bytes() {
    // Same item, three prompt modes: if the runner ignored the mode,
    // all three would hit the same cache entry.
    let dir = tempfile::tempdir().unwrap();
    let items = fixture(dir.path());
    let (_, _, test) = split_dataset(&items, SplitMode::InDomain, (7, 2, 1), 5).unwrap();

    let gateway = Gateway::new(dir.path().join("cache"));
    for item in &test {
        let table = table_serialize::serialize(
            &db_map()[&item.db_id],
            &strategy(),
            Some(&item.question),
        )
        .unwrap();
        let mut cot = PromptSpec::zero_shot(table.clone(), item.question.as_str());
        cot.cot = true;
        let mut persona = PromptSpec::zero_shot(table, item.question.as_str());
        persona.persona = Some(prompt_builder::PERSONA_LINE.to_string());
        let (gold, _) = gold_and_alt(&item.db_id);
        for spec in [&cot, &persona] {
            gateway.seed(&assemble(spec).unwrap(), &model(), gold).unwrap();
        }
    }

    for (mode, out) in [(PromptMode::Cot, "out_cot"), (PromptMode::Persona, "out_persona")] {
        let mut cfg = base_config(dir.path(), out);
        cfg.prompt.mode = mode;
        let artifacts = run_benchmark(&cfg).unwrap();
        assert_eq!(artifacts.report.exec_acc, 1.0, "{mode:?} prompts must hit their own seeds");
    }
}
