//! Program-text renderings: SQL schema dumps and Python-style classes.

use crate::{picked_rows, SerializationStrategy};
use relational_model::{Database, DType, Value};

fn sql_type(dtype: DType) -> &'static str {
    match dtype {
        DType::Text => "TEXT",
        DType::Number => "NUMERIC",
        DType::Time => "DATETIME",
    }
}

/// `CREATE TABLE` statements with primary and foreign keys, each
/// optionally followed by a `SELECT * FROM t LIMIT R;` line and its
/// result as a header line plus R tab-separated data lines.
pub(crate) fn sql(
    db: &Database,
    strategy: &SerializationStrategy,
    question: Option<&str>,
) -> String {
    let mut out = String::new();
    for (i, table) in db.tables.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("CREATE TABLE {} (\n", table.name));
        let mut lines: Vec<String> = table
            .columns
            .iter()
            .map(|c| format!("  {} {}", c.name, sql_type(c.dtype)))
            .collect();
        if !table.primary_key.is_empty() {
            lines.push(format!("  PRIMARY KEY ({})", table.primary_key.join(", ")));
        }
        for fk in &db.foreign_keys {
            if fk.from_table.eq_ignore_ascii_case(&table.name) {
                lines.push(format!(
                    "  FOREIGN KEY ({}) REFERENCES {} ({})",
                    fk.from_column, fk.to_table, fk.to_column
                ));
            }
        }
        out.push_str(&lines.join(",\n"));
        out.push_str("\n);\n");
        if strategy.value_rows > 0 {
            out.push_str(&format!(
                "SELECT * FROM {} LIMIT {};\n",
                table.name, strategy.value_rows
            ));
            let header: Vec<&str> = table.columns.iter().map(|c| c.name.as_str()).collect();
            out.push_str(&header.join("\t"));
            out.push('\n');
            for row in picked_rows(table, strategy, question) {
                let cells: Vec<String> =
                    table.rows[row].iter().map(|v| v.to_cell_string()).collect();
                out.push_str(&cells.join("\t"));
                out.push('\n');
            }
        }
    }
    out
}

fn py_literal(value: &Value) -> String {
    match value {
        Value::Null => "None".into(),
        Value::Number(_) => value.to_cell_string(),
        Value::Text(s) => format!("{s:?}"),
        Value::Time(_) => format!("{:?}", value.to_cell_string()),
    }
}

/// Class-based Python notation: shared class declarations, then one
/// table object per database table with its columns, key constraints,
/// and every row as a record.
pub(crate) fn code(db: &Database) -> String {
    let mut out = String::from(
        "class Column:\n    def __init__(self, name: str, dtype: str): ...\n\n\
         class Constraint:\n    ...\n\n\
         class Primary_Key(Constraint):\n    def __init__(self, columns: list): ...\n\n\
         class Foreign_Key(Constraint):\n    def __init__(self, columns: list, references: str): ...\n\n\
         class Record:\n    def __init__(self, values: list): ...\n\n\
         class Table:\n    def __init__(self, name: str, columns: list, constraints: list, records: list): ...\n",
    );
    for table in &db.tables {
        out.push('\n');
        out.push_str(&format!("{} = Table(\n    name={:?},\n", table.name, table.name));
        let columns: Vec<String> = table
            .columns
            .iter()
            .map(|c| format!("Column(name={:?}, dtype={:?})", c.name, c.dtype.as_str()))
            .collect();
        out.push_str(&format!("    columns=[{}],\n", columns.join(", ")));
        let mut constraints = Vec::new();
        if !table.primary_key.is_empty() {
            let cols: Vec<String> = table.primary_key.iter().map(|c| format!("{c:?}")).collect();
            constraints.push(format!("Primary_Key(columns=[{}])", cols.join(", ")));
        }
        for fk in &db.foreign_keys {
            if fk.from_table.eq_ignore_ascii_case(&table.name) {
                constraints.push(format!(
                    "Foreign_Key(columns=[{:?}], references={:?})",
                    fk.from_column,
                    format!("{}.{}", fk.to_table, fk.to_column)
                ));
            }
        }
        out.push_str(&format!("    constraints=[{}],\n", constraints.join(", ")));
        if table.rows.is_empty() {
            out.push_str("    records=[],\n");
        } else {
            out.push_str("    records=[\n");
            for row in &table.rows {
                let values: Vec<String> = row.iter().map(py_literal).collect();
                out.push_str(&format!("        Record(values=[{}]),\n", values.join(", ")));
            }
            out.push_str("    ],\n");
        }
        out.push_str(")\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Family, RowPick, SerializationStrategy};
    use vql_testkit::{orders_db, technician_db};

    #[test]
    fn create_statements_carry_keys_and_types() {
        let s = SerializationStrategy::schema_only(Family::Table2Sql);
        let text = sql(&orders_db(), &s, None);
        assert!(text.contains("CREATE TABLE customers ("), "{text}");
        assert!(text.contains("  total NUMERIC"), "{text}");
        assert!(text.contains("  PRIMARY KEY (id)"), "{text}");
        assert!(
            text.contains("  FOREIGN KEY (customer_id) REFERENCES customers (id)"),
            "{text}"
        );
    }

    #[test]
    fn select_blocks_render_header_plus_rows() {
        let s = SerializationStrategy {
            family: Family::Table2Sql,
            with_fk: false,
            value_rows: 2,
            row_pick: RowPick::FirstR,
        };
        let text = sql(&technician_db(), &s, None);
        assert!(text.contains("SELECT * FROM technician LIMIT 2;\n"), "{text}");
        assert!(text.contains("name\tteam\nAlice\tNYY\nBob\tBOS\n"), "{text}");
    }

    #[test]
    fn code_instantiates_tables_with_records() {
        let text = code(&orders_db());
        assert!(text.contains("class Table:"), "{text}");
        assert!(text.contains("customers = Table("), "{text}");
        assert!(text.contains("Column(name=\"city\", dtype=\"text\")"), "{text}");
        assert!(text.contains("Primary_Key(columns=[\"id\"])"), "{text}");
        assert!(
            text.contains("Foreign_Key(columns=[\"customer_id\"], references=\"customers.id\")"),
            "{text}"
        );
        assert!(text.contains("Record(values=[1, \"Ann\", \"Oslo\"]),"), "{text}");
    }

    #[test]
    fn null_cells_become_none_in_records() {
        let text = code(&orders_db());
        assert!(text.contains("Record(values=[13, None, 9, \"2021-03-02\"]),"), "{text}");
    }
}
