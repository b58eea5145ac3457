//! VQL: a small query language for charts.
//!
//! A query names a chart type and up to two axes over relational data:
//!
//! ```text
//! VISUALIZE bar SELECT name, COUNT(name) FROM technician
//!     WHERE team != "NYY" GROUP BY name ORDER BY name ASC
//! ```
//!
//! This crate owns the textual side of the language: [`parse`] builds a
//! [`VqlAst`] (errors carry byte offsets), [`render`] prints the
//! canonical spelling, [`canonicalize`] and [`ast_equal`] define
//! structural equivalence, and [`component_diff`] explains a mismatch
//! clause by clause.

mod ast;
mod canon;
mod diff;
mod error;
mod lexer;
mod parser;
mod render;

pub use ast::{
    subqueries_of, AggArg, AggExpr, AggFunc, BinInterval, BinSpec, ChartType, ColumnExpr,
    ColumnRef, CompareOp, GroupSpec, JoinClause, Literal, OrderSpec, Predicate, RightHand,
    SelectClause, SortDir, Subquery, VqlAst,
};
pub use canon::{ast_equal, canonicalize};
pub use diff::{component_diff, Component};
pub use error::ParseError;
pub use parser::parse;
pub use render::{format_number, render, render_literal};
