//! Directory format: one `schema.json` describing tables, columns, and
//! foreign keys, plus one `<table>.csv` per table (UTF-8, header row
//! mandatory, empty cells are nulls).

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::database::{ColumnDef, Database, ForeignKey, Table};
use crate::value::{parse_time, DType, Value};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot parse {path}: {message}")]
    SchemaJson { path: PathBuf, message: String },

    #[error("foreign key reference {key:?} is not of the form table.column")]
    MalformedForeignKey { key: String },

    #[error("table {table:?} has no data file at {path}")]
    MissingTableFile { table: String, path: PathBuf },

    #[error("table {table:?}: CSV header {found:?} does not match declared columns {expected:?}")]
    SchemaMismatch {
        table: String,
        expected: Vec<String>,
        found: Vec<String>,
    },

    #[error("table {table:?}, row {row}, column {column:?}: {value:?} is not a valid {dtype} value")]
    TypeError {
        table: String,
        /// 1-based data row number, not counting the header.
        row: usize,
        column: String,
        value: String,
        dtype: DType,
    },

    #[error("table {table:?}: {source}")]
    Csv {
        table: String,
        #[source]
        source: csv::Error,
    },
}

#[derive(Serialize, Deserialize)]
struct SchemaFile {
    id: String,
    tables: Vec<SchemaTable>,
    #[serde(default)]
    foreign_keys: Vec<SchemaForeignKey>,
}

#[derive(Serialize, Deserialize)]
struct SchemaTable {
    name: String,
    columns: Vec<SchemaColumn>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    primary_key: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct SchemaColumn {
    name: String,
    dtype: DType,
}

#[derive(Serialize, Deserialize)]
struct SchemaForeignKey {
    from: String,
    to: String,
}

/// Loads a database from a directory.
pub fn load_database(dir: &Path) -> Result<Database, LoadError> {
    let schema_path = dir.join("schema.json");
    let raw = fs::read_to_string(&schema_path)
        .map_err(|source| LoadError::Io { path: schema_path.clone(), source })?;
    let schema: SchemaFile = serde_json::from_str(&raw)
        .map_err(|e| LoadError::SchemaJson { path: schema_path, message: e.to_string() })?;

    let mut tables = Vec::with_capacity(schema.tables.len());
    for t in &schema.tables {
        tables.push(load_table(dir, t)?);
    }

    let mut foreign_keys = Vec::with_capacity(schema.foreign_keys.len());
    for fk in &schema.foreign_keys {
        let (from_table, from_column) = split_key(&fk.from)?;
        let (to_table, to_column) = split_key(&fk.to)?;
        foreign_keys.push(ForeignKey { from_table, from_column, to_table, to_column });
    }

    Ok(Database { id: schema.id, tables, foreign_keys })
}

fn split_key(key: &str) -> Result<(String, String), LoadError> {
    match key.split_once('.') {
        Some((t, c)) if !t.is_empty() && !c.is_empty() => Ok((t.to_string(), c.to_string())),
        _ => Err(LoadError::MalformedForeignKey { key: key.to_string() }),
    }
}

fn load_table(dir: &Path, decl: &SchemaTable) -> Result<Table, LoadError> {
    let path = dir.join(format!("{}.csv", decl.name));
    if !path.is_file() {
        return Err(LoadError::MissingTableFile { table: decl.name.clone(), path });
    }
    let mut reader = csv::ReaderBuilder::new()
        .flexible(false)
        .from_path(&path)
        .map_err(|source| LoadError::Csv { table: decl.name.clone(), source })?;

    let headers = reader
        .headers()
        .map_err(|source| LoadError::Csv { table: decl.name.clone(), source })?;
    let found: Vec<String> = headers.iter().map(str::to_string).collect();
    let expected: Vec<String> = decl.columns.iter().map(|c| c.name.clone()).collect();
    if found != expected {
        return Err(LoadError::SchemaMismatch { table: decl.name.clone(), expected, found });
    }

    let mut rows = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let record = record.map_err(|source| LoadError::Csv { table: decl.name.clone(), source })?;
        let mut row = Vec::with_capacity(decl.columns.len());
        for (col, cell) in decl.columns.iter().zip(record.iter()) {
            row.push(parse_cell(cell, col.dtype).ok_or_else(|| LoadError::TypeError {
                table: decl.name.clone(),
                row: idx + 1,
                column: col.name.clone(),
                value: cell.to_string(),
                dtype: col.dtype,
            })?);
        }
        rows.push(row);
    }

    Ok(Table {
        name: decl.name.clone(),
        columns: decl
            .columns
            .iter()
            .map(|c| ColumnDef { name: c.name.clone(), dtype: c.dtype })
            .collect(),
        primary_key: decl.primary_key.clone(),
        rows,
    })
}

fn parse_cell(cell: &str, dtype: DType) -> Option<Value> {
    if cell.is_empty() {
        return Some(Value::Null);
    }
    match dtype {
        DType::Text => Some(Value::Text(cell.to_string())),
        DType::Number => cell.parse::<f64>().ok().filter(|n| n.is_finite()).map(Value::Number),
        DType::Time => parse_time(cell).map(Value::Time),
    }
}

/// Writes a database back out in the same directory format that
/// [`load_database`] reads.
pub fn save_database(db: &Database, dir: &Path) -> Result<(), LoadError> {
    fs::create_dir_all(dir).map_err(|source| LoadError::Io { path: dir.to_path_buf(), source })?;
    let schema = SchemaFile {
        id: db.id.clone(),
        tables: db
            .tables
            .iter()
            .map(|t| SchemaTable {
                name: t.name.clone(),
                columns: t
                    .columns
                    .iter()
                    .map(|c| SchemaColumn { name: c.name.clone(), dtype: c.dtype })
                    .collect(),
                primary_key: t.primary_key.clone(),
            })
            .collect(),
        foreign_keys: db
            .foreign_keys
            .iter()
            .map(|fk| SchemaForeignKey {
                from: format!("{}.{}", fk.from_table, fk.from_column),
                to: format!("{}.{}", fk.to_table, fk.to_column),
            })
            .collect(),
    };
    let schema_path = dir.join("schema.json");
    let json = serde_json::to_string_pretty(&schema).expect("schema serializes");
    fs::write(&schema_path, json).map_err(|source| LoadError::Io { path: schema_path, source })?;

    for t in &db.tables {
        let path = dir.join(format!("{}.csv", t.name));
        let mut writer = csv::Writer::from_path(&path)
            .map_err(|source| LoadError::Csv { table: t.name.clone(), source })?;
        writer
            .write_record(t.columns.iter().map(|c| c.name.as_str()))
            .map_err(|source| LoadError::Csv { table: t.name.clone(), source })?;
        for row in &t.rows {
            writer
                .write_record(row.iter().map(|v| v.to_cell_string()))
                .map_err(|source| LoadError::Csv { table: t.name.clone(), source })?;
        }
        writer
            .flush()
            .map_err(|source| LoadError::Io { path: path.clone(), source })?;
    }
    Ok(())
}
