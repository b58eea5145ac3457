//! Flat schema listings and natural-language summaries.

use crate::{picked_rows, SerializationStrategy};
use relational_model::{Database, Table};

fn column_names(table: &Table) -> Vec<&str> {
    table.columns.iter().map(|c| c.name.as_str()).collect()
}

/// One line per table: `name: col1, col2`.
pub(crate) fn schema(db: &Database) -> String {
    let mut out = String::new();
    for table in &db.tables {
        out.push_str(&format!("{}: {}\n", table.name, column_names(table).join(", ")));
    }
    out
}

/// One line per table: `name(col1, col2)`.
pub(crate) fn table_column(db: &Database) -> String {
    let mut out = String::new();
    for table in &db.tables {
        out.push_str(&format!("{}({})\n", table.name, column_names(table).join(", ")));
    }
    out
}

/// `Table name, columns = [col1, col2]`, optionally followed by value
/// rows per table and foreign-key lines after all tables.
pub(crate) fn column_list(
    db: &Database,
    strategy: &SerializationStrategy,
    question: Option<&str>,
) -> String {
    let mut out = String::new();
    for table in &db.tables {
        out.push_str(&format!("Table {}, columns = [{}]\n", table.name, column_names(table).join(", ")));
        for row in picked_rows(table, strategy, question) {
            let cells: Vec<String> =
                table.rows[row].iter().map(|v| v.to_cell_string()).collect();
            out.push_str(&format!("Row: [{}]\n", cells.join(", ")));
        }
    }
    if strategy.with_fk {
        let keys: Vec<String> = db
            .foreign_keys
            .iter()
            .map(|fk| {
                format!("{}.{} = {}.{}", fk.from_table, fk.from_column, fk.to_table, fk.to_column)
            })
            .collect();
        out.push_str(&format!("Foreign_keys = [{}]\n", keys.join(", ")));
    }
    out
}

/// One sentence-per-column paragraph for each table.
pub(crate) fn table2nl(db: &Database) -> String {
    let mut out = String::new();
    for table in &db.tables {
        let noun = if table.columns.len() == 1 { "column" } else { "columns" };
        out.push_str(&format!("Table {} has {} {noun}.", table.name, table.columns.len()));
        for col in &table.columns {
            out.push_str(&format!(" The column {} of type {}.", col.name, col.dtype));
        }
        out.push('\n');
    }
    out
}

/// A dataframe-style description paragraph for each table.
pub(crate) fn chat2vis(db: &Database) -> String {
    let mut out = String::new();
    for table in &db.tables {
        let quoted: Vec<String> =
            table.columns.iter().map(|c| format!("'{}'", c.name)).collect();
        out.push_str(&format!(
            "Use a dataframe called {} with columns {}.",
            table.name,
            quoted.join(", ")
        ));
        for col in &table.columns {
            out.push_str(&format!(" The column '{}' is of type {}.", col.name, col.dtype));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use vql_testkit::{orders_db, payments_db, technician_db};

    #[test]
    fn schema_lists_every_table_on_its_own_line() {
        let text = schema(&orders_db());
        assert_eq!(text, "customers: id, name, city\norders: id, customer_id, total, placed_at\n");
    }

    #[test]
    fn summaries_name_each_column_with_its_type() {
        let text = table2nl(&payments_db());
        assert!(text.contains("The column date of type time."), "{text}");
        assert!(text.contains("The column amount of type number."), "{text}");
    }

    #[test]
    fn chat2vis_quotes_column_names() {
        let text = chat2vis(&technician_db());
        assert!(text.starts_with("Use a dataframe called technician with columns 'name', 'team'."));
        assert!(text.contains("The column 'name' is of type text."));
    }
}
