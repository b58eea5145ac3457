//! Golden Vega-Lite documents and a validation closure property.
//!
//! Golden files live in `tests/golden/`; run with `UPDATE_GOLDEN=1` to
//! regenerate them after an intentional change.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vega_emit::{to_vega_lite, validate_spec};
use vql_core::parse;
use vql_exec::execute;
use vql_testkit::{random_database, random_grammar_ast, random_query_for, technician_db};

fn assert_matches_golden(name: &str, spec: &serde_json::Value) {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    let rendered = format!("{}\n", serde_json::to_string_pretty(spec).unwrap());
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &rendered).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("missing golden file {path}: {e}"));
    assert_eq!(rendered, expected, "golden mismatch for {name}");
}

#[test]
fn bar_chart_with_inline_data_matches_golden() {
    let ast = parse(
        "VISUALIZE bar SELECT name, COUNT(name) FROM technician \
         WHERE team != \"NYY\" GROUP BY name ORDER BY name ASC",
    )
    .unwrap();
    let data = execute(&ast, &technician_db()).unwrap();
    let spec = to_vega_lite(&ast, Some(&data));
    assert!(validate_spec(&spec).is_empty());
    assert_matches_golden("bar_inline.json", &spec);
}

#[test]
fn pie_chart_without_data_matches_golden() {
    let ast = parse("VISUALIZE pie SELECT team, COUNT(*) FROM technician GROUP BY team").unwrap();
    let spec = to_vega_lite(&ast, None);
    assert!(validate_spec(&spec).is_empty());
    assert_matches_golden("pie_placeholder.json", &spec);
}

#[test]
fn binned_line_chart_without_data_matches_golden() {
    let ast =
        parse("VISUALIZE line SELECT date, COUNT(date) FROM payments BIN date BY month").unwrap();
    let spec = to_vega_lite(&ast, None);
    assert!(validate_spec(&spec).is_empty());
    assert_matches_golden("line_binned.json", &spec);
}

#[test]
fn emitted_documents_always_validate() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xE417);
    for _ in 0..500 {
        let ast = random_grammar_ast(&mut rng);
        let spec = to_vega_lite(&ast, None);
        let violations = validate_spec(&spec);
        assert!(violations.is_empty(), "{violations:?}\nfor {spec:#}");
    }
    for _ in 0..300 {
        let db = random_database(&mut rng);
        let ast = random_query_for(&mut rng, &db);
        let data = execute(&ast, &db).expect("generated query should run");
        let spec = to_vega_lite(&ast, Some(&data));
        let violations = validate_spec(&spec);
        assert!(violations.is_empty(), "{violations:?}\nfor {spec:#}");
        let rows = spec.pointer("/data/values").unwrap().as_array().unwrap();
        assert_eq!(rows.len(), data.x.len());
    }
}
