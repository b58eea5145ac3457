//! Cell values and column types.

use chrono::{NaiveDate, NaiveDateTime, Timelike};
use serde::{Deserialize, Serialize};

/// Column type. Time columns hold calendar date-times at second
/// precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DType {
    Text,
    Number,
    Time,
}

impl DType {
    pub fn as_str(&self) -> &'static str {
        match self {
            DType::Text => "text",
            DType::Number => "number",
            DType::Time => "time",
        }
    }
}

impl std::fmt::Display for DType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for DType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(DType::Text),
            "number" => Ok(DType::Number),
            "time" => Ok(DType::Time),
            other => Err(format!("unknown column type {other:?}")),
        }
    }
}

/// One cell. Empty CSV cells load as `Null`.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Null,
    Number(f64),
    Text(String),
    Time(NaiveDateTime),
}

impl Value {
    pub fn is_null(&self) -> bool {
        matches!(self, Value::Null)
    }

    /// Canonical text form: what the value looks like in a CSV cell.
    /// Dates at midnight print without the time part, so a date-only
    /// cell survives a save/load round trip unchanged.
    pub fn to_cell_string(&self) -> String {
        match self {
            Value::Null => String::new(),
            Value::Number(n) => format!("{n}"),
            Value::Text(s) => s.clone(),
            Value::Time(t) => format_time(t),
        }
    }

    /// Total order used for deterministic sorting: null first, then
    /// numbers, text, and times, each compared within their kind.
    pub fn sort_cmp(&self, other: &Value) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self, other) {
            (Value::Null, Value::Null) => Ordering::Equal,
            (Value::Null, _) => Ordering::Less,
            (_, Value::Null) => Ordering::Greater,
            (Value::Number(a), Value::Number(b)) => a.total_cmp(b),
            (Value::Number(_), _) => Ordering::Less,
            (_, Value::Number(_)) => Ordering::Greater,
            (Value::Text(a), Value::Text(b)) => a.cmp(b),
            (Value::Text(_), _) => Ordering::Less,
            (_, Value::Text(_)) => Ordering::Greater,
            (Value::Time(a), Value::Time(b)) => a.cmp(b),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Null => s.serialize_unit(),
            Value::Number(n) => s.serialize_f64(*n),
            Value::Text(t) => s.serialize_str(t),
            Value::Time(t) => s.serialize_str(&format_time(t)),
        }
    }
}

pub fn format_time(t: &NaiveDateTime) -> String {
    if t.hour() == 0 && t.minute() == 0 && t.second() == 0 {
        t.format("%Y-%m-%d").to_string()
    } else {
        t.format("%Y-%m-%dT%H:%M:%S").to_string()
    }
}

/// Accepts `YYYY-MM-DD`, optionally followed by `THH:MM:SS` or
/// ` HH:MM:SS`.
pub fn parse_time(s: &str) -> Option<NaiveDateTime> {
    if let Ok(d) = NaiveDate::parse_from_str(s, "%Y-%m-%d") {
        return d.and_hms_opt(0, 0, 0);
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M:%S"] {
        if let Ok(t) = NaiveDateTime::parse_from_str(s, fmt) {
            return Some(t);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn date_only_round_trips_without_time_part() {
        let t = parse_time("2021-01-05").unwrap();
        assert_eq!(format_time(&t), "2021-01-05");
        let t = parse_time("2021-01-05 10:30:00").unwrap();
        assert_eq!(format_time(&t), "2021-01-05T10:30:00");
        assert_eq!(parse_time(&format_time(&t)), Some(t));
    }

    #[test]
    fn rejects_garbage_times() {
        assert!(parse_time("yesterday").is_none());
        assert!(parse_time("2021-13-40").is_none());
        assert!(parse_time("").is_none());
    }

    #[test]
    fn number_cells_use_minimal_form() {
        assert_eq!(Value::Number(3.0).to_cell_string(), "3");
        assert_eq!(Value::Number(3.25).to_cell_string(), "3.25");
        assert_eq!(Value::Null.to_cell_string(), "");
    }

    #[test]
    fn sort_order_is_total_across_kinds() {
        let mut vals = vec![
            Value::Text("b".into()),
            Value::Null,
            Value::Number(2.0),
            Value::Text("a".into()),
            Value::Number(-1.0),
        ];
        vals.sort_by(|a, b| a.sort_cmp(b));
        assert_eq!(
            vals,
            vec![
                Value::Null,
                Value::Number(-1.0),
                Value::Number(2.0),
                Value::Text("a".into()),
                Value::Text("b".into()),
            ]
        );
    }
}
