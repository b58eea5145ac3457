//! Turns query trees into Vega-Lite v5 documents.
//!
//! [`to_vega_lite`] maps chart types to marks (bar, arc, line, point),
//! picks encoding types from the executed data when it is supplied,
//! and otherwise falls back to what the tree alone reveals: a binned
//! x axis becomes a temporal encoding with a `timeUnit`, everything
//! else defaults to nominal. Executed data is embedded as inline
//! values; without it the document carries a named data placeholder
//! for late binding. Pie charts encode y as `theta` and x as `color`.
//!
//! [`validate_spec`] performs structural checks on any Vega-Lite-like
//! document and returns a list of violations, empty when the document
//! is well formed.

use relational_model::Value;
use serde_json::{json, Map};
use vql_core::{AggArg, BinInterval, ChartType, ColumnExpr, VqlAst};
use vql_exec::VisData;

/// Schema URL written into every emitted document.
pub const VEGA_LITE_SCHEMA: &str = "https://vega.github.io/schema/vega-lite/v5.json";

fn mark(chart: ChartType) -> &'static str {
    match chart {
        ChartType::Bar => "bar",
        ChartType::Pie => "arc",
        ChartType::Line => "line",
        ChartType::Scatter => "point",
    }
}

fn time_unit(interval: BinInterval) -> &'static str {
    match interval {
        BinInterval::Year => "year",
        BinInterval::Month => "yearmonth",
        BinInterval::Day => "yearmonthdate",
        BinInterval::Weekday => "day",
    }
}

fn field_name(expr: &ColumnExpr) -> String {
    match expr {
        ColumnExpr::Column(c) => c.name.to_ascii_lowercase(),
        ColumnExpr::Aggregate(agg) => match &agg.arg {
            AggArg::Star => "count".into(),
            AggArg::Column(c) => {
                format!("{}_{}", c.name.to_ascii_lowercase(), agg.func.alias_suffix())
            }
        },
    }
}

/// JSON for a y value: whole numbers print without a fraction.
fn number_json(n: f64) -> serde_json::Value {
    if n.fract() == 0.0 && n.abs() < 9.0e15 {
        json!(n as i64)
    } else {
        json!(n)
    }
}

fn value_json(v: &Value) -> serde_json::Value {
    match v {
        Value::Null => serde_json::Value::Null,
        Value::Number(n) => number_json(*n),
        Value::Text(s) => json!(s),
        Value::Time(_) => json!(v.to_cell_string()),
    }
}

/// The x axis type: taken from the data when present, from binning
/// otherwise, defaulting to nominal when neither reveals it.
fn x_type(ast: &VqlAst, data: Option<&VisData>) -> &'static str {
    if let Some(data) = data {
        for v in &data.x {
            return match v {
                Value::Number(_) => "quantitative",
                Value::Time(_) => "temporal",
                Value::Text(_) => "nominal",
                Value::Null => continue,
            };
        }
        return "nominal";
    }
    if ast.bin.is_some() {
        return "temporal";
    }
    "nominal"
}

/// Builds a Vega-Lite v5 document for the query, embedding `data` as
/// inline values when given.
pub fn to_vega_lite(ast: &VqlAst, data: Option<&VisData>) -> serde_json::Value {
    let x_field = field_name(&ast.select.x);
    let y_field = field_name(&ast.select.y);
    let x_kind = x_type(ast, data);

    let mut x_enc = Map::new();
    x_enc.insert("field".into(), json!(x_field));
    x_enc.insert("type".into(), json!(x_kind));
    if data.is_none() {
        if let Some(bin) = &ast.bin {
            x_enc.insert("timeUnit".into(), json!(time_unit(bin.interval)));
        }
    }
    let x_enc = serde_json::Value::Object(x_enc);
    let y_enc = json!({ "field": y_field, "type": "quantitative" });

    let series = ast
        .group
        .as_ref()
        .filter(|g| g.columns.len() >= 2)
        .map(|g| g.columns[1].name.to_ascii_lowercase());

    let encoding = if ast.chart_type == ChartType::Pie {
        json!({ "theta": y_enc, "color": x_enc })
    } else {
        let mut enc = Map::new();
        enc.insert("x".into(), x_enc);
        enc.insert("y".into(), y_enc);
        if let Some(series) = &series {
            enc.insert("color".into(), json!({ "field": series, "type": "nominal" }));
        }
        serde_json::Value::Object(enc)
    };

    let data_json = match data {
        Some(data) => {
            let rows: Vec<serde_json::Value> = (0..data.x.len())
                .map(|i| {
                    let mut row = Map::new();
                    row.insert(x_field.clone(), value_json(&data.x[i]));
                    row.insert(y_field.clone(), number_json(data.y[i]));
                    if let (Some(series), Some(z)) = (&series, &data.z) {
                        row.insert(series.clone(), json!(z[i]));
                    }
                    serde_json::Value::Object(row)
                })
                .collect();
            json!({ "values": rows })
        }
        None => json!({ "name": "table" }),
    };

    json!({
        "$schema": VEGA_LITE_SCHEMA,
        "mark": mark(ast.chart_type),
        "encoding": encoding,
        "data": data_json,
    })
}

const ALLOWED_MARKS: &[&str] = &["bar", "arc", "line", "point"];

/// Structurally checks a chart document: known mark, the channels the
/// mark needs (theta and color for arc, x and y otherwise) each with a
/// type, a data or datasets property, and inline rows that carry every
/// encoded field. Returns one message per violation; empty means
/// valid.
pub fn validate_spec(spec: &serde_json::Value) -> Vec<String> {
    let mut violations = Vec::new();

    let mark = spec.get("mark").and_then(|m| m.as_str());
    match mark {
        None => violations.push("mark is missing or not a string".into()),
        Some(m) if !ALLOWED_MARKS.contains(&m) => {
            violations.push(format!("mark {m:?} is not one of {ALLOWED_MARKS:?}"));
        }
        Some(_) => {}
    }

    let encoding = spec.get("encoding").and_then(|e| e.as_object());
    let required: &[&str] = if mark == Some("arc") { &["theta", "color"] } else { &["x", "y"] };
    match encoding {
        None => violations.push("encoding is missing or not an object".into()),
        Some(enc) => {
            for channel in required {
                match enc.get(*channel) {
                    None => violations.push(format!("encoding lacks the {channel} channel")),
                    Some(c) if c.get("type").and_then(|t| t.as_str()).is_none() => {
                        violations.push(format!("{channel} channel has no type"));
                    }
                    Some(_) => {}
                }
            }
        }
    }

    if spec.get("data").is_none() && spec.get("datasets").is_none() {
        violations.push("document has neither data nor datasets".into());
    }

    if let Some(rows) = spec.pointer("/data/values").and_then(|v| v.as_array()) {
        let fields: Vec<&str> = encoding
            .map(|enc| {
                enc.values().filter_map(|c| c.get("field").and_then(|f| f.as_str())).collect()
            })
            .unwrap_or_default();
        for field in fields {
            let missing = rows.iter().any(|row| row.get(field).is_none());
            if missing {
                violations.push(format!("inline rows lack the encoded field {field:?}"));
            }
        }
    }

    violations
}
