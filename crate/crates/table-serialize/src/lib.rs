//! Renders a [`Database`] into prompt-ready text.
//!
//! Eleven strategies cover four approaches: flat schema listings
//! (`schema`, `table-column`, `column-list` with optional foreign
//! keys and value rows), natural-language summaries (`table2nl`,
//! `chat2vis`), markup documents (`table2json`, `table2csv`,
//! `table2md`, `table2xml`), and program text (`table2sql` with
//! optional `SELECT * .. LIMIT R` result blocks, `table2code` as
//! Python-style class instantiations).
//!
//! Output is deterministic: the same database, strategy, and question
//! always produce byte-identical text. Tables render in declaration
//! order; foreign keys render after all tables. [`content_level`]
//! classifies a strategy by how much of the database it reveals:
//! schema only, plus relationships, or plus row content.

mod flat;
mod markup;
mod program;

use relational_model::{Database, Table, Value};
use serde::{Deserialize, Serialize};

/// The eleven rendering families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Schema,
    TableColumn,
    ColumnList,
    Table2Nl,
    Chat2Vis,
    Table2Json,
    Table2Csv,
    Table2Md,
    Table2Xml,
    Table2Sql,
    Table2Code,
}

impl Family {
    pub const ALL: [Family; 11] = [
        Family::Schema,
        Family::TableColumn,
        Family::ColumnList,
        Family::Table2Nl,
        Family::Chat2Vis,
        Family::Table2Json,
        Family::Table2Csv,
        Family::Table2Md,
        Family::Table2Xml,
        Family::Table2Sql,
        Family::Table2Code,
    ];

    pub fn as_name(&self) -> &'static str {
        match self {
            Family::Schema => "schema",
            Family::TableColumn => "table-column",
            Family::ColumnList => "column-list",
            Family::Table2Nl => "table2nl",
            Family::Chat2Vis => "chat2vis",
            Family::Table2Json => "table2json",
            Family::Table2Csv => "table2csv",
            Family::Table2Md => "table2md",
            Family::Table2Xml => "table2xml",
            Family::Table2Sql => "table2sql",
            Family::Table2Code => "table2code",
        }
    }

    fn is_markup(&self) -> bool {
        matches!(
            self,
            Family::Table2Json | Family::Table2Csv | Family::Table2Md | Family::Table2Xml
        )
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_name() == s)
            .ok_or_else(|| format!("unknown serialization family {s:?}"))
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_name())
    }
}

/// How value rows are chosen when a strategy includes them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowPick {
    /// The first R rows in file order.
    #[default]
    FirstR,
    /// The R rows most similar to the question by Jaccard overlap.
    JaccardTop,
}

/// A fully specified rendering: family plus its knobs. Only the
/// family is required when deserializing; omitted knobs fall back to
/// the schema-only form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerializationStrategy {
    pub family: Family,
    /// Append foreign-key lines (column-list only).
    #[serde(default)]
    pub with_fk: bool,
    /// Number of value rows to include where the family supports them.
    #[serde(default)]
    pub value_rows: usize,
    #[serde(default)]
    pub row_pick: RowPick,
}

impl SerializationStrategy {
    /// Bare schema rendering for the family: no foreign keys, no rows.
    pub fn schema_only(family: Family) -> Self {
        SerializationStrategy { family, with_fk: false, value_rows: 0, row_pick: RowPick::FirstR }
    }

    /// The family's conventional form: markup families carry one
    /// question-relevant row, everything else starts schema-only.
    pub fn default_for(family: Family) -> Self {
        if family.is_markup() {
            SerializationStrategy { family, with_fk: false, value_rows: 1, row_pick: RowPick::JaccardTop }
        } else {
            SerializationStrategy::schema_only(family)
        }
    }
}

/// How much of the database a strategy reveals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContentLevel {
    SchemaOnly,
    PlusRelationship,
    PlusContent,
}

/// Classifies a strategy: row content beats relationships beats bare
/// schema. Table2Code always embeds records and Table2SQL always
/// declares key relationships, so they never classify as schema-only.
pub fn content_level(strategy: &SerializationStrategy) -> ContentLevel {
    if strategy.value_rows > 0 || strategy.family == Family::Table2Code {
        ContentLevel::PlusContent
    } else if strategy.with_fk || strategy.family == Family::Table2Sql {
        ContentLevel::PlusRelationship
    } else {
        ContentLevel::SchemaOnly
    }
}

/// A strategy/knob combination the format does not define.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unsupported combination: {0}")]
pub struct UnsupportedCombination(pub String);

fn validate(strategy: &SerializationStrategy, question: Option<&str>) -> Result<(), UnsupportedCombination> {
    let family = strategy.family;
    if strategy.with_fk && family != Family::ColumnList {
        return Err(UnsupportedCombination(format!("{family} does not take foreign-key lines")));
    }
    if strategy.value_rows > 0 {
        let takes_rows =
            family == Family::ColumnList || family == Family::Table2Sql || family.is_markup();
        if !takes_rows {
            return Err(UnsupportedCombination(format!("{family} does not take value rows")));
        }
        if family.is_markup() && strategy.value_rows > 1 {
            return Err(UnsupportedCombination(format!("{family} carries at most one value row")));
        }
        if strategy.row_pick == RowPick::JaccardTop && question.is_none() {
            return Err(UnsupportedCombination(
                "question-relevant row selection needs a question".into(),
            ));
        }
    }
    Ok(())
}

/// Indices of the rows a strategy includes for one table.
fn picked_rows(table: &Table, strategy: &SerializationStrategy, question: Option<&str>) -> Vec<usize> {
    let r = strategy.value_rows.min(table.rows.len());
    match strategy.row_pick {
        RowPick::FirstR => (0..r).collect(),
        RowPick::JaccardTop => {
            relational_model::select_relevant_rows(table, question.unwrap_or(""), r)
        }
    }
}

/// Renders the database in the given strategy. The question feeds
/// question-relevant row selection and is required exactly when that
/// selection is in effect.
pub fn serialize(
    db: &Database,
    strategy: &SerializationStrategy,
    question: Option<&str>,
) -> Result<String, UnsupportedCombination> {
    validate(strategy, question)?;
    let text = match strategy.family {
        Family::Schema => flat::schema(db),
        Family::TableColumn => flat::table_column(db),
        Family::ColumnList => flat::column_list(db, strategy, question),
        Family::Table2Nl => flat::table2nl(db),
        Family::Chat2Vis => flat::chat2vis(db),
        Family::Table2Json => markup::json(db, strategy, question),
        Family::Table2Csv => markup::csv(db, strategy, question),
        Family::Table2Md => markup::markdown(db, strategy, question),
        Family::Table2Xml => markup::xml(db, strategy, question),
        Family::Table2Sql => program::sql(db, strategy, question),
        Family::Table2Code => program::code(db),
    };
    Ok(text)
}

/// JSON for a cell: null, number (whole numbers without a fraction),
/// or string.
fn cell_json(value: &Value) -> serde_json::Value {
    match value {
        Value::Null => serde_json::Value::Null,
        Value::Number(n) => {
            if n.fract() == 0.0 && n.abs() < 9.0e15 {
                serde_json::json!(*n as i64)
            } else {
                serde_json::json!(*n)
            }
        }
        Value::Text(s) => serde_json::json!(s),
        Value::Time(_) => serde_json::json!(value.to_cell_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use vql_testkit::{orders_db, technician_db};

    fn strategy(family: Family) -> SerializationStrategy {
        SerializationStrategy::schema_only(family)
    }

    #[test]
    fn table_column_wraps_columns_in_parentheses() {
        let text = serialize(&technician_db(), &strategy(Family::TableColumn), None).unwrap();
        assert_eq!(text, "technician(name, team)\n");
    }

    #[test]
    fn column_list_renders_bracketed_columns() {
        let text = serialize(&technician_db(), &strategy(Family::ColumnList), None).unwrap();
        assert_eq!(text, "Table technician, columns = [name, team]\n");
    }

    #[test]
    fn column_list_with_fk_appends_key_lines() {
        let mut s = strategy(Family::ColumnList);
        s.with_fk = true;
        let text = serialize(&orders_db(), &s, None).unwrap();
        assert!(text.contains("Foreign_keys = [orders.customer_id = customers.id]"), "{text}");
    }

    #[test]
    fn sql_rendering_begins_with_create_table() {
        let text = serialize(&technician_db(), &strategy(Family::Table2Sql), None).unwrap();
        assert!(text.starts_with("CREATE TABLE technician"), "{text}");
        assert!(text.contains("name") && text.contains("team"));
    }

    #[test]
    fn jaccard_pick_embeds_the_most_relevant_row() {
        let mut s = strategy(Family::Table2Json);
        s.value_rows = 1;
        s.row_pick = RowPick::JaccardTop;
        let question = "How many technicians are named Bob, grouped by name?";
        let text = serialize(&technician_db(), &s, Some(question)).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["tables"][0]["rows"][0]["name"], "Bob");
    }

    #[test]
    fn foreign_keys_demand_the_column_list_family() {
        let mut s = strategy(Family::Table2Json);
        s.with_fk = true;
        let err = serialize(&orders_db(), &s, None).unwrap_err();
        assert!(err.to_string().contains("foreign-key"));
    }

    #[test]
    fn value_rows_demand_a_row_bearing_family() {
        let mut s = strategy(Family::Table2Nl);
        s.value_rows = 2;
        assert!(serialize(&technician_db(), &s, None).is_err());
    }

    #[test]
    fn markup_families_carry_at_most_one_row() {
        let mut s = strategy(Family::Table2Csv);
        s.value_rows = 2;
        assert!(serialize(&technician_db(), &s, None).is_err());
    }

    #[test]
    fn jaccard_selection_without_a_question_is_rejected() {
        let mut s = strategy(Family::Table2Md);
        s.value_rows = 1;
        s.row_pick = RowPick::JaccardTop;
        assert!(serialize(&technician_db(), &s, None).is_err());
    }

    #[test]
    fn content_levels_follow_the_knobs() {
        assert_eq!(content_level(&strategy(Family::ColumnList)), ContentLevel::SchemaOnly);
        let mut fk = strategy(Family::ColumnList);
        fk.with_fk = true;
        assert_eq!(content_level(&fk), ContentLevel::PlusRelationship);
        let mut rows = strategy(Family::Table2Sql);
        rows.value_rows = 3;
        assert_eq!(content_level(&rows), ContentLevel::PlusContent);
        assert_eq!(content_level(&strategy(Family::Table2Sql)), ContentLevel::PlusRelationship);
        assert_eq!(content_level(&strategy(Family::Table2Code)), ContentLevel::PlusContent);
        assert_eq!(content_level(&strategy(Family::Schema)), ContentLevel::SchemaOnly);
    }

    #[test]
    fn family_names_round_trip() {
        for family in Family::ALL {
            assert_eq!(family.as_name().parse::<Family>().unwrap(), family);
        }
        assert!("tables".parse::<Family>().is_err());
    }
}
