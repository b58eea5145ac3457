//! Benchmark items: JSON-lines ingestion and hardness labels.

use crate::EvalError;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use vql_core::VqlAst;

/// Difficulty label, ingested from the benchmark file when present
/// and otherwise derived from the gold query's shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hardness {
    Easy,
    Medium,
    Hard,
    ExtraHard,
}

/// One benchmark entry: a question over a database with its gold
/// query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchmarkItem {
    pub id: String,
    pub db_id: String,
    pub question: String,
    pub gold_vql: String,
    pub hardness: Hardness,
    pub is_join: bool,
}

/// Grades a query by clause weight: joins and sub-selects count
/// double, each further clause (filter, bin, group, order) once.
/// 0-1 is easy, 2 medium, 3-4 hard, 5 and up extra hard.
pub fn derive_hardness(ast: &VqlAst) -> Hardness {
    let mut score = 2 * ast.joins.len() + 2 * ast.nesting_depth();
    score += usize::from(ast.where_pred.is_some());
    score += usize::from(ast.bin.is_some());
    score += usize::from(ast.group.is_some());
    score += usize::from(ast.order_by.is_some());
    match score {
        0..=1 => Hardness::Easy,
        2 => Hardness::Medium,
        3..=4 => Hardness::Hard,
        _ => Hardness::ExtraHard,
    }
}

#[derive(Deserialize)]
struct RawItem {
    id: String,
    db_id: String,
    question: String,
    vql: String,
    #[serde(default)]
    hardness: Option<Hardness>,
}

/// Builds an item, parsing the gold query to derive the join flag
/// and, when the file does not carry one, the hardness label.
pub fn item_from_parts(
    id: String,
    db_id: String,
    question: String,
    gold_vql: String,
    hardness: Option<Hardness>,
) -> Result<BenchmarkItem, EvalError> {
    let ast = vql_core::parse(&gold_vql)
        .map_err(|e| EvalError::BadGold { id: id.clone(), message: e.to_string() })?;
    Ok(BenchmarkItem {
        hardness: hardness.unwrap_or_else(|| derive_hardness(&ast)),
        is_join: !ast.joins.is_empty(),
        id,
        db_id,
        question,
        gold_vql,
    })
}

/// Reads a JSON-lines benchmark file: one object per line with
/// `id`, `db_id`, `question`, `vql`, and optional `hardness`.
pub fn load_benchmark(path: &Path) -> Result<Vec<BenchmarkItem>, EvalError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| EvalError::Io { path: path.into(), source })?;
    let mut items = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawItem = serde_json::from_str(line).map_err(|e| EvalError::BadLine {
            path: path.into(),
            line: line_no + 1,
            message: e.to_string(),
        })?;
        items.push(item_from_parts(raw.id, raw.db_id, raw.question, raw.vql, raw.hardness)?);
    }
    Ok(items)
}

#[derive(Deserialize)]
struct RawPrediction {
    id: String,
    vql: String,
}

/// Reads a JSON-lines predictions file (`id`, `vql`) into an
/// id-to-query map; a repeated id keeps the last line.
pub fn load_predictions(path: &Path) -> Result<BTreeMap<String, String>, EvalError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| EvalError::Io { path: path.into(), source })?;
    let mut predictions = BTreeMap::new();
    for (line_no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawPrediction =
            serde_json::from_str(line).map_err(|e| EvalError::BadLine {
                path: path.into(),
                line: line_no + 1,
                message: e.to_string(),
            })?;
        predictions.insert(raw.id, raw.vql);
    }
    Ok(predictions)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(q: &str) -> VqlAst {
        vql_core::parse(q).unwrap()
    }

    #[test]
    fn hardness_grows_with_clause_weight() {
        assert_eq!(derive_hardness(&parse("VISUALIZE bar SELECT a, b FROM t")), Hardness::Easy);
        assert_eq!(
            derive_hardness(&parse("VISUALIZE bar SELECT a, b FROM t GROUP BY a")),
            Hardness::Easy
        );
        assert_eq!(
            derive_hardness(&parse(
                "VISUALIZE bar SELECT a, b FROM t WHERE a > 1 GROUP BY a"
            )),
            Hardness::Medium
        );
        assert_eq!(
            derive_hardness(&parse(
                "VISUALIZE bar SELECT a, COUNT(a) FROM t WHERE a > 1 GROUP BY a ORDER BY a ASC"
            )),
            Hardness::Hard
        );
        assert_eq!(
            derive_hardness(&parse(
                "VISUALIZE bar SELECT a, COUNT(a) FROM t JOIN u ON t.a = u.a \
                 WHERE a > 1 GROUP BY a ORDER BY a ASC"
            )),
            Hardness::ExtraHard
        );
    }

    #[test]
    fn join_flag_follows_the_gold_tree() {
        let item = item_from_parts(
            "i1".into(),
            "db".into(),
            "q".into(),
            "VISUALIZE bar SELECT a, b FROM t JOIN u ON t.a = u.a".into(),
            None,
        )
        .unwrap();
        assert!(item.is_join);
        assert_eq!(item.hardness, Hardness::Medium);
    }

    #[test]
    fn explicit_hardness_wins_over_derivation() {
        let item = item_from_parts(
            "i1".into(),
            "db".into(),
            "q".into(),
            "VISUALIZE bar SELECT a, b FROM t".into(),
            Some(Hardness::ExtraHard),
        )
        .unwrap();
        assert_eq!(item.hardness, Hardness::ExtraHard);
    }

    #[test]
    fn unparsable_gold_is_rejected() {
        let err =
            item_from_parts("i1".into(), "db".into(), "q".into(), "VISUALIZE".into(), None)
                .unwrap_err();
        assert!(matches!(err, EvalError::BadGold { .. }));
    }

    #[test]
    fn benchmark_files_round_trip_through_jsonl() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bench.jsonl");
        std::fs::write(
            &path,
            "{\"id\":\"a\",\"db_id\":\"d\",\"question\":\"Q?\",\"vql\":\"VISUALIZE bar SELECT a, b FROM t\"}\n\
             {\"id\":\"b\",\"db_id\":\"d\",\"question\":\"R?\",\"vql\":\"VISUALIZE pie SELECT a, COUNT(*) FROM t GROUP BY a\",\"hardness\":\"hard\"}\n",
        )
        .unwrap();
        let items = load_benchmark(&path).unwrap();
        assert_eq!(items.len(), 2);
        assert_eq!(items[0].hardness, Hardness::Easy);
        assert_eq!(items[1].hardness, Hardness::Hard);
    }

    #[test]
    fn bad_lines_are_reported_with_their_number() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bench.jsonl");
        std::fs::write(&path, "{\"id\":\"a\"}\n").unwrap();
        let err = load_benchmark(&path).unwrap_err();
        assert!(matches!(err, EvalError::BadLine { line: 1, .. }), "{err}");
    }
}
