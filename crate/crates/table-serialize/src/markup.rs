//! Markup renderings: JSON, CSV, Markdown, and XML documents.

use crate::{cell_json, picked_rows, SerializationStrategy};
use relational_model::Database;
use serde_json::json;

/// One JSON document for the whole database.
pub(crate) fn json(
    db: &Database,
    strategy: &SerializationStrategy,
    question: Option<&str>,
) -> String {
    let tables: Vec<serde_json::Value> = db
        .tables
        .iter()
        .map(|table| {
            let columns: Vec<serde_json::Value> = table
                .columns
                .iter()
                .map(|c| json!({ "name": c.name, "type": c.dtype.as_str() }))
                .collect();
            let rows: Vec<serde_json::Value> = picked_rows(table, strategy, question)
                .into_iter()
                .map(|row| {
                    let mut obj = serde_json::Map::new();
                    for (col, value) in table.columns.iter().zip(&table.rows[row]) {
                        obj.insert(col.name.clone(), cell_json(value));
                    }
                    serde_json::Value::Object(obj)
                })
                .collect();
            json!({ "name": table.name, "columns": columns, "rows": rows })
        })
        .collect();
    let doc = json!({ "id": db.id, "tables": tables });
    format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
}

/// A `Table: name` header followed by a CSV block per table.
pub(crate) fn csv(
    db: &Database,
    strategy: &SerializationStrategy,
    question: Option<&str>,
) -> String {
    let mut out = String::new();
    for (i, table) in db.tables.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("Table: {}\n", table.name));
        let mut writer = ::csv::Writer::from_writer(Vec::new());
        writer
            .write_record(table.columns.iter().map(|c| c.name.as_str()))
            .unwrap();
        for row in picked_rows(table, strategy, question) {
            writer
                .write_record(table.rows[row].iter().map(|v| v.to_cell_string()))
                .unwrap();
        }
        out.push_str(&String::from_utf8(writer.into_inner().unwrap()).unwrap());
    }
    out
}

fn md_cell(text: &str) -> String {
    text.replace('|', "\\|")
}

/// A heading plus a Markdown table per database table.
pub(crate) fn markdown(
    db: &Database,
    strategy: &SerializationStrategy,
    question: Option<&str>,
) -> String {
    let mut out = String::new();
    for (i, table) in db.tables.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("### {}\n\n", table.name));
        let headers: Vec<String> = table.columns.iter().map(|c| md_cell(&c.name)).collect();
        out.push_str(&format!("| {} |\n", headers.join(" | ")));
        out.push_str(&format!("|{}\n", " --- |".repeat(table.columns.len())));
        for row in picked_rows(table, strategy, question) {
            let cells: Vec<String> =
                table.rows[row].iter().map(|v| md_cell(&v.to_cell_string())).collect();
            out.push_str(&format!("| {} |\n", cells.join(" | ")));
        }
    }
    out
}

fn xml_escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// One XML document for the whole database; cells become elements
/// named after their column.
pub(crate) fn xml(
    db: &Database,
    strategy: &SerializationStrategy,
    question: Option<&str>,
) -> String {
    let mut out = format!("<database id=\"{}\">\n", xml_escape(&db.id));
    for table in &db.tables {
        out.push_str(&format!("  <table name=\"{}\">\n", xml_escape(&table.name)));
        for col in &table.columns {
            out.push_str(&format!(
                "    <column name=\"{}\" type=\"{}\" />\n",
                xml_escape(&col.name),
                col.dtype
            ));
        }
        for row in picked_rows(table, strategy, question) {
            out.push_str("    <row>\n");
            for (col, value) in table.columns.iter().zip(&table.rows[row]) {
                out.push_str(&format!(
                    "      <{0}>{1}</{0}>\n",
                    xml_escape(&col.name),
                    xml_escape(&value.to_cell_string())
                ));
            }
            out.push_str("    </row>\n");
        }
        out.push_str("  </table>\n");
    }
    out.push_str("</database>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Family, RowPick, SerializationStrategy};
    use vql_testkit::{orders_db, technician_db};

    fn one_row(family: Family) -> SerializationStrategy {
        SerializationStrategy { family, with_fk: false, value_rows: 1, row_pick: RowPick::FirstR }
    }

    #[test]
    fn json_document_parses_and_carries_typed_cells() {
        let text = json(&orders_db(), &one_row(Family::Table2Json), None);
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["tables"][1]["name"], "orders");
        assert_eq!(doc["tables"][1]["rows"][0]["total"], 5);
    }

    #[test]
    fn csv_blocks_have_headers_and_one_row() {
        let text = csv(&technician_db(), &one_row(Family::Table2Csv), None);
        assert_eq!(text, "Table: technician\nname,team\nAlice,NYY\n");
    }

    #[test]
    fn markdown_tables_align_row_and_header_widths() {
        let text = markdown(&technician_db(), &one_row(Family::Table2Md), None);
        assert!(text.contains("| name | team |"), "{text}");
        assert!(text.contains("| --- | --- |"), "{text}");
        assert!(text.contains("| Alice | NYY |"), "{text}");
    }

    #[test]
    fn xml_escapes_reserved_characters() {
        let mut db = technician_db();
        db.tables[0].rows[0][0] = relational_model::Value::Text("A & B <C>".into());
        let text = xml(&db, &one_row(Family::Table2Xml), None);
        assert!(text.contains("<name>A &amp; B &lt;C&gt;</name>"), "{text}");
    }
}
