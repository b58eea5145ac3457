//! A second, slower query evaluator used as a reference in tests.
//!
//! This is written independently of the main engine so agreement
//! between the two over randomized inputs is meaningful: rows are
//! string-keyed maps instead of positional vectors, predicates are
//! interpreted straight off the tree with no compilation step,
//! grouping is a linear scan over string signatures, and LIKE matching
//! is a dynamic program instead of a recursive walk. Only the shared
//! data model (values, databases) and the output shape are reused.

use std::collections::BTreeMap;
use std::cmp::Ordering;

use relational_model::{parse_time, DType, Database, Value};
use vql_core::{
    AggArg, AggFunc, ColumnExpr, ColumnRef, CompareOp, JoinClause, Literal, Predicate, RightHand,
    Subquery, VqlAst,
};
use vql_exec::VisData;

type Row = BTreeMap<String, Value>;

#[derive(Clone)]
struct Field {
    table: String,
    column: String,
    dtype: DType,
}

impl Field {
    fn key(&self) -> String {
        format!("{}.{}", self.table, self.column)
    }
}

struct Rel {
    fields: Vec<Field>,
    rows: Vec<Row>,
}

impl Rel {
    fn find(&self, r: &ColumnRef) -> Result<Field, String> {
        match &r.table {
            Some(t) => self
                .fields
                .iter()
                .find(|f| {
                    f.table.eq_ignore_ascii_case(t) && f.column.eq_ignore_ascii_case(&r.name)
                })
                .cloned()
                .ok_or_else(|| format!("no column {t}.{}", r.name)),
            None => {
                let hits: Vec<&Field> = self
                    .fields
                    .iter()
                    .filter(|f| f.column.eq_ignore_ascii_case(&r.name))
                    .collect();
                match hits.len() {
                    1 => Ok(hits[0].clone()),
                    0 => Err(format!("no column {}", r.name)),
                    _ => Err(format!("ambiguous column {}", r.name)),
                }
            }
        }
    }
}

fn scan(db: &Database, from: &str, joins: &[JoinClause]) -> Result<Rel, String> {
    let base = db.table(from).ok_or_else(|| format!("no table {from}"))?;
    let field_list = |t: &relational_model::Table| -> Vec<Field> {
        t.columns
            .iter()
            .map(|c| Field {
                table: t.name.to_ascii_lowercase(),
                column: c.name.to_ascii_lowercase(),
                dtype: c.dtype,
            })
            .collect()
    };
    let to_rows = |t: &relational_model::Table, fields: &[Field]| -> Vec<Row> {
        t.rows
            .iter()
            .map(|r| fields.iter().zip(r).map(|(f, v)| (f.key(), v.clone())).collect())
            .collect()
    };
    let mut rel = Rel { fields: field_list(base), rows: to_rows(base, &field_list(base)) };
    for join in joins {
        let right = db.table(&join.table).ok_or_else(|| format!("no table {}", join.table))?;
        let rfields = field_list(right);
        let rrel = Rel { fields: rfields.clone(), rows: to_rows(right, &rfields) };
        let sides = match (rel.find(&join.left), rrel.find(&join.right)) {
            (Ok(l), Ok(r)) => Ok((l, r)),
            (first, _) => match (rel.find(&join.right), rrel.find(&join.left)) {
                (Ok(l), Ok(r)) => Ok((l, r)),
                _ => Err(first.err().unwrap_or_else(|| "join resolution".into())),
            },
        };
        let (lf, rf) = sides?;
        let (lkey, rkey) = (lf.key(), rf.key());
        let mut joined = Vec::new();
        for lrow in &rel.rows {
            for rrow in &rrel.rows {
                if same_kind_equal(&lrow[&lkey], &rrow[&rkey]) {
                    let mut merged = lrow.clone();
                    merged.extend(rrow.clone());
                    joined.push(merged);
                }
            }
        }
        rel.fields.extend(rfields);
        rel.rows = joined;
    }
    Ok(rel)
}

fn same_kind_equal(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => x == y,
        (Value::Text(x), Value::Text(y)) => x == y,
        (Value::Time(x), Value::Time(y)) => x == y,
        _ => false,
    }
}

// ---- predicate interpretation ---------------------------------------

/// Checks every comparison in the tree before any row is looked at,
/// matching the engine's up-front failures: unresolvable columns, a
/// literal that cannot be compared with the column's type, LIKE on a
/// non-text column, and a multi-valued sub-select used as a scalar.
fn validate_pred(pred: &Predicate, rel: &Rel, db: &Database) -> Result<(), String> {
    match pred {
        Predicate::And(a, b) | Predicate::Or(a, b) => {
            validate_pred(a, rel, db)?;
            validate_pred(b, rel, db)
        }
        Predicate::Compare { left, op, right } => {
            let field = rel.find(left)?;
            match right {
                RightHand::Literal(lit) => comparable(field.dtype, lit)?,
                RightHand::List(items) => {
                    for lit in items {
                        comparable(field.dtype, lit)?;
                    }
                }
                RightHand::Subquery(sq) => {
                    let values = sub_values(sq, db)?;
                    if *op != CompareOp::In && values.len() != 1 {
                        return Err(format!("scalar sub-select produced {} values", values.len()));
                    }
                }
            }
            if *op == CompareOp::Like && field.dtype != DType::Text {
                return Err("LIKE on a non-text column".into());
            }
            Ok(())
        }
    }
}

fn comparable(dtype: DType, lit: &Literal) -> Result<(), String> {
    let ok = match (dtype, lit) {
        (DType::Number, Literal::Number(_)) => true,
        (DType::Number, Literal::Text(t)) => t.trim().parse::<f64>().is_ok(),
        (DType::Text, Literal::Text(_)) => true,
        (DType::Time, Literal::Text(t)) => parse_time(t).is_some(),
        (DType::Text | DType::Time, Literal::Number(_)) => false,
    };
    if ok {
        Ok(())
    } else {
        Err(format!("incomparable literal for {dtype} column"))
    }
}

fn holds(pred: &Predicate, row: &Row, rel: &Rel, db: &Database) -> Result<bool, String> {
    match pred {
        Predicate::And(a, b) => Ok(holds(a, row, rel, db)? && holds(b, row, rel, db)?),
        Predicate::Or(a, b) => Ok(holds(a, row, rel, db)? || holds(b, row, rel, db)?),
        Predicate::Compare { left, op, right } => {
            let field = rel.find(left)?;
            let value = &row[&field.key()];
            if value.is_null() {
                return Ok(false);
            }
            match right {
                RightHand::List(items) => Ok(items
                    .iter()
                    .any(|lit| against_literal(value, lit) == Some(Ordering::Equal))),
                RightHand::Subquery(sq) => {
                    let values = sub_values(sq, db)?;
                    if *op == CompareOp::In {
                        Ok(values
                            .iter()
                            .any(|v| against_value(value, v) == Some(Ordering::Equal)))
                    } else {
                        Ok(against_value(value, &values[0])
                            .is_some_and(|o| ordering_satisfies(*op, o)))
                    }
                }
                RightHand::Literal(Literal::Text(pat)) if *op == CompareOp::Like => match value {
                    Value::Text(s) => Ok(like_dp(s, pat)),
                    _ => Ok(false),
                },
                RightHand::Literal(lit) => {
                    Ok(against_literal(value, lit).is_some_and(|o| ordering_satisfies(*op, o)))
                }
            }
        }
    }
}

fn ordering_satisfies(op: CompareOp, o: Ordering) -> bool {
    match op {
        CompareOp::Eq | CompareOp::In | CompareOp::Like => o == Ordering::Equal,
        CompareOp::Ne => o != Ordering::Equal,
        CompareOp::Lt => o == Ordering::Less,
        CompareOp::Le => o != Ordering::Greater,
        CompareOp::Gt => o == Ordering::Greater,
        CompareOp::Ge => o != Ordering::Less,
    }
}

fn against_literal(value: &Value, lit: &Literal) -> Option<Ordering> {
    match (value, lit) {
        (Value::Number(n), Literal::Number(m)) => n.partial_cmp(m),
        (Value::Number(n), Literal::Text(t)) => {
            t.trim().parse::<f64>().ok().and_then(|m| n.partial_cmp(&m))
        }
        (Value::Text(s), Literal::Text(t)) => Some(s.as_str().cmp(t.as_str())),
        (Value::Time(x), Literal::Text(t)) => parse_time(t).map(|y| x.cmp(&y)),
        _ => None,
    }
}

fn against_value(value: &Value, other: &Value) -> Option<Ordering> {
    match (value, other) {
        (Value::Number(a), Value::Number(b)) => a.partial_cmp(b),
        (Value::Text(a), Value::Text(b)) => Some(a.cmp(b)),
        (Value::Time(a), Value::Time(b)) => Some(a.cmp(b)),
        (Value::Number(a), Value::Text(t)) => {
            t.trim().parse::<f64>().ok().and_then(|b| a.partial_cmp(&b))
        }
        _ => None,
    }
}

/// Iterative LIKE matcher: table cell `(i, j)` says whether the first
/// `i` chars of the string match the first `j` chars of the pattern.
fn like_dp(s: &str, pattern: &str) -> bool {
    let s: Vec<char> = s.to_lowercase().chars().collect();
    let p: Vec<char> = pattern.to_lowercase().chars().collect();
    let mut table = vec![vec![false; p.len() + 1]; s.len() + 1];
    table[0][0] = true;
    for j in 1..=p.len() {
        table[0][j] = p[j - 1] == '%' && table[0][j - 1];
    }
    for i in 1..=s.len() {
        for j in 1..=p.len() {
            table[i][j] = match p[j - 1] {
                '%' => table[i][j - 1] || table[i - 1][j],
                '_' => table[i - 1][j - 1],
                c => c == s[i - 1] && table[i - 1][j - 1],
            };
        }
    }
    table[s.len()][p.len()]
}

// ---- select plans ---------------------------------------------------

enum Plan {
    Field(Field),
    Agg { func: AggFunc, arg: Option<Field>, distinct: bool },
}

fn plan_expr(expr: &ColumnExpr, rel: &Rel) -> Result<Plan, String> {
    match expr {
        ColumnExpr::Aggregate(agg) => {
            let arg = match &agg.arg {
                AggArg::Star => {
                    if agg.func != AggFunc::Count {
                        return Err("only COUNT may take *".into());
                    }
                    None
                }
                AggArg::Column(c) => {
                    let f = rel.find(c)?;
                    if matches!(agg.func, AggFunc::Sum | AggFunc::Avg)
                        && f.dtype != DType::Number
                    {
                        return Err(format!("{} over non-number column", agg.func.as_str()));
                    }
                    Some(f)
                }
            };
            Ok(Plan::Agg { func: agg.func, arg, distinct: agg.distinct })
        }
        ColumnExpr::Column(c) => match rel.find(c) {
            Ok(f) => Ok(Plan::Field(f)),
            Err(e) if c.table.is_none() => derived_plan(&c.name, rel).ok_or(e),
            Err(e) => Err(e),
        },
    }
}

fn derived_plan(name: &str, rel: &Rel) -> Option<Plan> {
    if name.eq_ignore_ascii_case("count") {
        return Some(Plan::Agg { func: AggFunc::Count, arg: None, distinct: false });
    }
    let (base, suffix) = name.rsplit_once('_')?;
    let func = match suffix.to_ascii_lowercase().as_str() {
        "count" => AggFunc::Count,
        "sum" => AggFunc::Sum,
        "avg" => AggFunc::Avg,
        _ => return None,
    };
    let f = rel.find(&ColumnRef::bare(base)).ok()?;
    if matches!(func, AggFunc::Sum | AggFunc::Avg) && f.dtype != DType::Number {
        return None;
    }
    Some(Plan::Agg { func, arg: Some(f), distinct: false })
}

// ---- grouping and aggregation ---------------------------------------

fn signature(v: &Value) -> String {
    match v {
        Value::Null => ".".into(),
        Value::Number(n) => format!("n:{n}"),
        Value::Text(s) => format!("t:{s}"),
        Value::Time(t) => format!("d:{t}"),
    }
}

/// Linear-scan grouping: rows with equal key signatures share a
/// bucket, null keys drop the row, buckets keep first-seen row order.
fn bucket(rows: &[Row], keys: &[Field]) -> Vec<Vec<usize>> {
    let mut sigs: Vec<Vec<String>> = Vec::new();
    let mut buckets: Vec<Vec<usize>> = Vec::new();
    'rows: for (i, row) in rows.iter().enumerate() {
        let mut sig = Vec::new();
        for k in keys {
            let v = &row[&k.key()];
            if v.is_null() {
                continue 'rows;
            }
            sig.push(signature(v));
        }
        match sigs.iter().position(|s| *s == sig) {
            Some(b) => buckets[b].push(i),
            None => {
                sigs.push(sig);
                buckets.push(vec![i]);
            }
        }
    }
    buckets
}

fn fold(rows: &[Row], bucket: &[usize], func: AggFunc, arg: &Option<Field>, distinct: bool) -> Result<Option<f64>, String> {
    match (func, arg) {
        (AggFunc::Count, None) => Ok(Some(bucket.len() as f64)),
        (AggFunc::Count, Some(f)) => {
            let key = f.key();
            let mut seen: Vec<String> = Vec::new();
            let mut n = 0usize;
            for &i in bucket {
                let v = &rows[i][&key];
                if v.is_null() {
                    continue;
                }
                if distinct {
                    let sig = signature(v);
                    if !seen.contains(&sig) {
                        seen.push(sig);
                        n += 1;
                    }
                } else {
                    n += 1;
                }
            }
            Ok(Some(n as f64))
        }
        (AggFunc::Sum | AggFunc::Avg, Some(f)) => {
            let key = f.key();
            let mut sum = 0.0;
            let mut n = 0usize;
            for &i in bucket {
                match &rows[i][&key] {
                    Value::Null => {}
                    Value::Number(v) => {
                        sum += v;
                        n += 1;
                    }
                    _ => return Err("sum over non-number cell".into()),
                }
            }
            if n == 0 {
                Ok(None)
            } else if func == AggFunc::Sum {
                Ok(Some(sum))
            } else {
                Ok(Some(sum / n as f64))
            }
        }
        (AggFunc::Sum | AggFunc::Avg, None) => Err("aggregate needs a column".into()),
    }
}

fn sub_values(sq: &Subquery, db: &Database) -> Result<Vec<Value>, String> {
    let mut rel = scan(db, &sq.from_table, &sq.joins)?;
    if let Some(pred) = &sq.where_pred {
        validate_pred(pred, &rel, db)?;
        let view = rel_view(&rel.fields.clone());
        let mut kept = Vec::new();
        for row in rel.rows.drain(..) {
            if holds(pred, &row, &view, db)? {
                kept.push(row);
            }
        }
        rel.rows = kept;
    }
    let plan = plan_expr(&sq.select, &rel)?;
    let mut out = Vec::new();
    match &sq.group {
        Some(g) => {
            let keys: Vec<Field> =
                g.columns.iter().map(|c| rel.find(c)).collect::<Result<_, _>>()?;
            for b in bucket(&rel.rows, &keys) {
                match &plan {
                    Plan::Agg { func, arg, distinct } => {
                        if let Some(n) = fold(&rel.rows, &b, *func, arg, *distinct)? {
                            out.push(Value::Number(n));
                        }
                    }
                    Plan::Field(f) => {
                        let v = &rel.rows[b[0]][&f.key()];
                        if !v.is_null() {
                            out.push(v.clone());
                        }
                    }
                }
            }
        }
        None => match &plan {
            Plan::Agg { func, arg, distinct } => {
                let all: Vec<usize> = (0..rel.rows.len()).collect();
                if let Some(n) = fold(&rel.rows, &all, *func, arg, *distinct)? {
                    out.push(Value::Number(n));
                }
            }
            Plan::Field(f) => {
                let key = f.key();
                for row in &rel.rows {
                    if !row[&key].is_null() {
                        out.push(row[&key].clone());
                    }
                }
            }
        },
    }
    Ok(out)
}

fn rel_view(fields: &[Field]) -> Rel {
    Rel { fields: fields.to_vec(), rows: Vec::new() }
}

// ---- output assembly ------------------------------------------------

fn cell_text(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) => format!("{n}"),
        Value::Text(s) => s.clone(),
        Value::Time(t) => {
            if t.time() == chrono::NaiveTime::MIN {
                t.format("%Y-%m-%d").to_string()
            } else {
                t.format("%Y-%m-%dT%H:%M:%S").to_string()
            }
        }
    }
}

fn value_order(a: &Value, b: &Value) -> Ordering {
    fn rank(v: &Value) -> u8 {
        match v {
            Value::Null => 0,
            Value::Number(_) => 1,
            Value::Text(_) => 2,
            Value::Time(_) => 3,
        }
    }
    rank(a).cmp(&rank(b)).then_with(|| match (a, b) {
        (Value::Number(x), Value::Number(y)) => x.total_cmp(y),
        (Value::Text(x), Value::Text(y)) => x.cmp(y),
        (Value::Time(x), Value::Time(y)) => x.cmp(y),
        _ => Ordering::Equal,
    })
}

fn label(interval: vql_core::BinInterval, t: &chrono::NaiveDateTime) -> String {
    use chrono::Datelike;
    match interval {
        vql_core::BinInterval::Year => format!("{:04}", t.year()),
        vql_core::BinInterval::Month => format!("{:04}-{:02}", t.year(), t.month()),
        vql_core::BinInterval::Day => {
            format!("{:04}-{:02}-{:02}", t.year(), t.month(), t.day())
        }
        vql_core::BinInterval::Weekday => {
            use chrono::Weekday::*;
            match t.weekday() {
                Mon => "Monday",
                Tue => "Tuesday",
                Wed => "Wednesday",
                Thu => "Thursday",
                Fri => "Friday",
                Sat => "Saturday",
                Sun => "Sunday",
            }
            .to_string()
        }
    }
}

/// Evaluates a query the slow way and returns the same result shape as
/// the engine. Any failure comes back as a plain message.
pub fn reference_execute(ast: &VqlAst, db: &Database) -> Result<VisData, String> {
    let depth = ast.nesting_depth();
    if depth > 2 {
        return Err(format!("sub-selects nested {depth} deep"));
    }
    let mut rel = scan(db, &ast.from_table, &ast.joins)?;

    if let Some(pred) = &ast.where_pred {
        validate_pred(pred, &rel, db)?;
        let fields = rel.fields.clone();
        let view = rel_view(&fields);
        let mut kept = Vec::new();
        for row in rel.rows.drain(..) {
            if holds(pred, &row, &view, db)? {
                kept.push(row);
            }
        }
        rel.rows = kept;
    }

    if let Some(bin) = &ast.bin {
        let f = rel.find(&bin.column)?;
        if f.dtype != DType::Time {
            return Err("BIN over a non-time column".into());
        }
        let key = f.key();
        for row in &mut rel.rows {
            let new = match &row[&key] {
                Value::Time(t) => Value::Text(label(bin.interval, t)),
                _ => Value::Null,
            };
            row.insert(key.clone(), new);
        }
        for field in &mut rel.fields {
            if field.key() == key {
                field.dtype = DType::Text;
            }
        }
    }

    let x_field = match &ast.select.x {
        ColumnExpr::Column(c) => rel.find(c)?,
        ColumnExpr::Aggregate(_) => return Err("aggregate x".into()),
    };
    let y_plan = plan_expr(&ast.select.y, &rel)?;

    let keys: Vec<Field> = match &ast.group {
        Some(g) => g.columns.iter().map(|c| rel.find(c)).collect::<Result<_, _>>()?,
        None if matches!(y_plan, Plan::Agg { .. }) => vec![x_field.clone()],
        None => vec![],
    };

    let xkey = x_field.key();
    let mut points: Vec<(Value, f64, Option<String>)> = Vec::new();
    if keys.is_empty() {
        let Plan::Field(yf) = &y_plan else {
            return Err("ungrouped aggregate".into());
        };
        if yf.dtype != DType::Number {
            return Err("plain y over a non-number column".into());
        }
        let ykey = yf.key();
        for row in &rel.rows {
            let (x, y) = (&row[&xkey], &row[&ykey]);
            if x.is_null() || y.is_null() {
                continue;
            }
            match y {
                Value::Number(n) => points.push((x.clone(), *n, None)),
                _ => return Err("non-number cell in y".into()),
            }
        }
    } else {
        let zkey = (keys.len() >= 2).then(|| keys[1].key());
        for b in bucket(&rel.rows, &keys) {
            let first = &rel.rows[b[0]];
            let y = match &y_plan {
                Plan::Agg { func, arg, distinct } => fold(&rel.rows, &b, *func, arg, *distinct)?,
                Plan::Field(yf) => {
                    if yf.dtype != DType::Number {
                        return Err("plain y over a non-number column".into());
                    }
                    match &first[&yf.key()] {
                        Value::Null => None,
                        Value::Number(n) => Some(*n),
                        _ => return Err("non-number cell in y".into()),
                    }
                }
            };
            let Some(y) = y else { continue };
            let x = first[&xkey].clone();
            if x.is_null() {
                continue;
            }
            let z = zkey.as_ref().map(|k| cell_text(&first[k]));
            points.push((x, y, z));
        }
    }

    let has_z = keys.len() >= 2;
    let ordered = match &ast.order_by {
        Some(order) => {
            let key = &order.key;
            let hits = |f: &Field| {
                f.column.eq_ignore_ascii_case(&key.name)
                    && key.table.as_ref().map_or(true, |t| f.table.eq_ignore_ascii_case(t))
            };
            let on_x = hits(&x_field);
            let on_y = !on_x
                && match &y_plan {
                    Plan::Field(f) => hits(f),
                    Plan::Agg { func, arg: Some(f), .. } => {
                        hits(f)
                            || key.name.eq_ignore_ascii_case(&format!(
                                "{}_{}",
                                f.column,
                                func.alias_suffix()
                            ))
                    }
                    Plan::Agg { arg: None, .. } => key.name.eq_ignore_ascii_case("count"),
                };
            if !on_x && !on_y {
                return Err(format!("order key {} not in select", key.name));
            }
            points.sort_by(|a, b| {
                let primary = if on_x { value_order(&a.0, &b.0) } else { a.1.total_cmp(&b.1) };
                let primary = match order.dir {
                    vql_core::SortDir::Asc => primary,
                    vql_core::SortDir::Desc => primary.reverse(),
                };
                primary
                    .then_with(|| value_order(&a.0, &b.0))
                    .then_with(|| a.2.cmp(&b.2))
                    .then_with(|| a.1.total_cmp(&b.1))
            });
            true
        }
        None => {
            points.sort_by(|a, b| {
                value_order(&a.0, &b.0)
                    .then_with(|| a.2.cmp(&b.2))
                    .then_with(|| a.1.total_cmp(&b.1))
            });
            false
        }
    };

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut zs = Vec::new();
    for (x, y, z) in points {
        xs.push(x);
        ys.push(y);
        zs.extend(z);
    }
    Ok(VisData {
        chart_type: ast.chart_type.into(),
        x: xs,
        y: ys,
        z: has_z.then_some(zs),
        ordered,
    })
}
