//! Shared test support: fixture databases, random query and database
//! generators, and an independent reference evaluator.
//!
//! Everything here exists for tests in other crates. The generators
//! take a caller-supplied RNG so test runs stay reproducible, and
//! [`reference_execute`] shares no evaluation code with the engine it
//! checks.

mod astgen;
mod datagen;
mod fixtures;
mod oracle;

pub use astgen::random_grammar_ast;
pub use datagen::{random_database, random_query_for};
pub use fixtures::{all_fixture_dbs, orders_db, payments_db, technician_db};
pub use oracle::reference_execute;
