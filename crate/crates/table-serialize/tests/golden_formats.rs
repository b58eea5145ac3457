//! Golden renderings for every strategy variant, plus format and
//! coverage properties over the fixture databases.
//!
//! Golden files live in `tests/golden/`, one per database, holding
//! every variant under a labeled header. Run with `UPDATE_GOLDEN=1`
//! to regenerate after an intentional template change.

use relational_model::Database;
use table_serialize::{
    content_level, serialize, ContentLevel, Family, RowPick, SerializationStrategy,
};
use vql_testkit::all_fixture_dbs;

const QUESTION: &str = "How many technicians are there for each name?";

fn variant(
    family: Family,
    with_fk: bool,
    value_rows: usize,
    row_pick: RowPick,
) -> SerializationStrategy {
    SerializationStrategy { family, with_fk, value_rows, row_pick }
}

/// Every defined strategy/knob combination, labeled for the goldens.
fn variants() -> Vec<(&'static str, SerializationStrategy)> {
    use Family::*;
    use RowPick::*;
    vec![
        ("schema", variant(Schema, false, 0, FirstR)),
        ("table-column", variant(TableColumn, false, 0, FirstR)),
        ("column-list", variant(ColumnList, false, 0, FirstR)),
        ("column-list+fk", variant(ColumnList, true, 0, FirstR)),
        ("column-list+fk+value3", variant(ColumnList, true, 3, FirstR)),
        ("table2nl", variant(Table2Nl, false, 0, FirstR)),
        ("chat2vis", variant(Chat2Vis, false, 0, FirstR)),
        ("table2json", variant(Table2Json, false, 0, FirstR)),
        ("table2json+row", variant(Table2Json, false, 1, JaccardTop)),
        ("table2csv", variant(Table2Csv, false, 0, FirstR)),
        ("table2csv+row", variant(Table2Csv, false, 1, JaccardTop)),
        ("table2md", variant(Table2Md, false, 0, FirstR)),
        ("table2md+row", variant(Table2Md, false, 1, JaccardTop)),
        ("table2xml", variant(Table2Xml, false, 0, FirstR)),
        ("table2xml+row", variant(Table2Xml, false, 1, JaccardTop)),
        ("table2sql", variant(Table2Sql, false, 0, FirstR)),
        ("table2sql+select3", variant(Table2Sql, false, 3, FirstR)),
        ("table2code", variant(Table2Code, false, 0, FirstR)),
    ]
}

fn render(db: &Database, strategy: &SerializationStrategy) -> String {
    serialize(db, strategy, Some(QUESTION)).expect("defined variant")
}

#[test]
fn every_variant_matches_its_golden() {
    for db in all_fixture_dbs() {
        let mut doc = String::new();
        for (label, strategy) in variants() {
            let level = match content_level(&strategy) {
                ContentLevel::SchemaOnly => "schema_only",
                ContentLevel::PlusRelationship => "plus_relationship",
                ContentLevel::PlusContent => "plus_content",
            };
            doc.push_str(&format!("=== {label} [{level}] ===\n"));
            doc.push_str(&render(&db, &strategy));
            doc.push('\n');
        }
        let path =
            format!("{}/tests/golden/{}.txt", env!("CARGO_MANIFEST_DIR"), db.id);
        if std::env::var_os("UPDATE_GOLDEN").is_some() {
            std::fs::write(&path, &doc).unwrap();
            continue;
        }
        let expected = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("missing golden file {path}: {e}"));
        assert_eq!(doc, expected, "golden mismatch for {}", db.id);
    }
}

#[test]
fn every_variant_covers_all_schema_names() {
    for db in all_fixture_dbs() {
        for (label, strategy) in variants() {
            let text = render(&db, &strategy);
            for table in &db.tables {
                assert!(text.contains(&table.name), "{label} on {} lacks table name", db.id);
                for col in &table.columns {
                    assert!(
                        text.contains(&col.name),
                        "{label} on {} lacks column {}",
                        db.id,
                        col.name
                    );
                }
            }
        }
    }
}

#[test]
fn rendering_is_deterministic() {
    for db in all_fixture_dbs() {
        for (_, strategy) in variants() {
            assert_eq!(render(&db, &strategy), render(&db, &strategy));
        }
    }
}

#[test]
fn json_renderings_parse() {
    for db in all_fixture_dbs() {
        for rows in [0, 1] {
            let s = variant(Family::Table2Json, false, rows, RowPick::FirstR);
            let text = render(&db, &s);
            let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
            assert_eq!(doc["tables"].as_array().unwrap().len(), db.tables.len());
        }
    }
}

#[test]
fn csv_renderings_reparse_with_matching_shape() {
    for db in all_fixture_dbs() {
        let s = variant(Family::Table2Csv, false, 1, RowPick::FirstR);
        let text = render(&db, &s);
        for (block, table) in text.split("\nTable: ").zip(&db.tables) {
            let body = block
                .trim_start_matches("Table: ")
                .splitn(2, '\n')
                .nth(1)
                .expect("csv body");
            let mut reader = csv::ReaderBuilder::new().from_reader(body.as_bytes());
            let headers = reader.headers().unwrap().clone();
            assert_eq!(headers.len(), table.columns.len());
            for record in reader.records() {
                assert_eq!(record.unwrap().len(), table.columns.len());
            }
        }
    }
}

#[test]
fn markdown_tables_have_consistent_widths() {
    for db in all_fixture_dbs() {
        let s = variant(Family::Table2Md, false, 1, RowPick::FirstR);
        let text = render(&db, &s);
        let mut tables_seen = 0;
        for section in text.split("### ").skip(1) {
            let table = &db.tables[tables_seen];
            tables_seen += 1;
            let rows: Vec<&str> =
                section.lines().filter(|l| l.starts_with('|')).collect();
            assert_eq!(rows.len(), 2 + table.rows.len().min(1));
            for row in rows {
                assert_eq!(row.matches('|').count(), table.columns.len() + 1);
            }
        }
        assert_eq!(tables_seen, db.tables.len());
    }
}

#[test]
fn xml_renderings_parse() {
    for db in all_fixture_dbs() {
        for rows in [0, 1] {
            let s = variant(Family::Table2Xml, false, rows, RowPick::FirstR);
            let text = render(&db, &s);
            let doc = roxmltree::Document::parse(&text).unwrap();
            let tables = doc
                .descendants()
                .filter(|n| n.has_tag_name("table"))
                .count();
            assert_eq!(tables, db.tables.len());
        }
    }
}

#[test]
fn content_variants_extend_schema_variants() {
    for db in all_fixture_dbs() {
        let pairs = [
            (Family::ColumnList, 3, RowPick::FirstR),
            (Family::Table2Sql, 3, RowPick::FirstR),
            (Family::Table2Json, 1, RowPick::JaccardTop),
        ];
        for (family, rows, pick) in pairs {
            let bare = render(&db, &variant(family, false, 0, RowPick::FirstR));
            let full = render(&db, &variant(family, false, rows, pick));
            for table in &db.tables {
                assert!(full.contains(&table.name));
                for col in &table.columns {
                    assert!(full.contains(&col.name));
                }
            }
            assert!(full.len() >= bare.len());
        }
    }
}
