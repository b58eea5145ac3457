//! In-memory databases: named tables of typed columns plus declared
//! key relationships. Lookup by name folds ASCII case, matching how
//! queries treat identifiers.

use crate::value::{DType, Value};

/// A column declaration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnDef {
    pub name: String,
    pub dtype: DType,
}

/// One table: declared columns and row data in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<ColumnDef>,
    /// Primary key column names; empty when the table declares none.
    pub primary_key: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name.eq_ignore_ascii_case(name))
    }

    pub fn column(&self, name: &str) -> Option<&ColumnDef> {
        self.column_index(name).map(|i| &self.columns[i])
    }
}

/// Declared link `from_table.from_column` -> `to_table.to_column`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForeignKey {
    pub from_table: String,
    pub from_column: String,
    pub to_table: String,
    pub to_column: String,
}

/// A named database: tables in declaration order plus foreign keys.
#[derive(Debug, Clone, PartialEq)]
pub struct Database {
    pub id: String,
    pub tables: Vec<Table>,
    pub foreign_keys: Vec<ForeignKey>,
}

impl Database {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name.eq_ignore_ascii_case(name))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookups_fold_case() {
        let db = Database {
            id: "d".into(),
            tables: vec![Table {
                name: "Technician".into(),
                columns: vec![ColumnDef { name: "Name".into(), dtype: DType::Text }],
                primary_key: vec![],
                rows: vec![],
            }],
            foreign_keys: vec![],
        };
        assert!(db.table("technician").is_some());
        assert_eq!(db.table("technician").unwrap().column_index("NAME"), Some(0));
        assert!(db.table("missing").is_none());
    }
}
