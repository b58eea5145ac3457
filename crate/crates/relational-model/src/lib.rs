//! Relational data for chart queries: typed in-memory tables loaded
//! from a `schema.json` plus CSV directory layout, written back the
//! same way, and searched by token similarity against questions.

mod database;
mod load;
mod similarity;
mod value;

pub use database::{ColumnDef, Database, ForeignKey, Table};
pub use load::{load_database, save_database, LoadError};
pub use similarity::{jaccard, jaccard_tokens, row_tokens, select_relevant_rows, tokenize};
pub use value::{format_time, parse_time, DType, Value};
