//! Query evaluation.
//!
//! Pipeline: FROM and JOINs build the working row set, WHERE filters
//! it, BIN rewrites the binned column into bucket labels, grouping
//! aggregates, and ORDER BY (or a default x-ascending sort) fixes the
//! output order.
//!
//! Semantics follow SQL where charts leave room for choice:
//! - joins are inner equality joins; null never joins or compares equal;
//! - with an aggregate y and no explicit grouping, points group by x;
//! - rows with a null grouping key, and points with a null x or y, are
//!   dropped rather than plotted;
//! - `COUNT(c)` counts non-null values, `SUM`/`AVG` skip nulls and
//!   produce no point for an all-null group;
//! - a plain y with grouping takes the group's first value in row
//!   order;
//! - a selected column like `date_count` that exists in no table reads
//!   as the aggregate it abbreviates (`COUNT(date)`), and a bare
//!   `count` as `COUNT(*)`;
//! - text equality is case-sensitive, `LIKE` is case-insensitive with
//!   `%` and `_` wildcards.

use std::cmp::Ordering;

use relational_model::{DType, Database, Table, Value};
use vql_core::{
    canonicalize, AggArg, AggFunc, ColumnExpr, ColumnRef, CompareOp, JoinClause,
    Literal, Predicate, RightHand, SortDir, Subquery, VqlAst,
};

use crate::binning::bin_label;
use crate::error::ExecError;
use crate::visdata::VisData;

pub fn execute(ast: &VqlAst, db: &Database) -> Result<VisData, ExecError> {
    let depth = ast.nesting_depth();
    if depth > 2 {
        return Err(ExecError::DivergentSubquery { depth });
    }
    let ast = canonicalize(ast);

    let mut ws = build_workset(db, &ast.from_table, &ast.joins)?;
    if let Some(pred) = &ast.where_pred {
        let compiled = compile_predicate(pred, &ws, db)?;
        ws.rows.retain(|row| eval_compiled(&compiled, row));
    }
    if let Some(bin) = &ast.bin {
        let idx = ws.resolve(&bin.column)?;
        if ws.cols[idx].dtype != DType::Time {
            return Err(ExecError::TypeMismatch(format!(
                "BIN needs a time column, but {:?} is {}",
                bin.column.name, ws.cols[idx].dtype
            )));
        }
        for row in &mut ws.rows {
            row[idx] = match &row[idx] {
                Value::Time(t) => Value::Text(bin_label(t, bin.interval)),
                _ => Value::Null,
            };
        }
        ws.cols[idx].dtype = DType::Text;
    }

    let x_idx = match &ast.select.x {
        ColumnExpr::Column(c) => ws.resolve(c)?,
        ColumnExpr::Aggregate(_) => {
            return Err(ExecError::TypeMismatch(
                "the x axis must be a plain column".into(),
            ))
        }
    };
    let y_plan = resolve_expr(&ast.select.y, &ws)?;

    let group_cols: Vec<usize> = match &ast.group {
        Some(g) => g.columns.iter().map(|c| ws.resolve(c)).collect::<Result<_, _>>()?,
        None if matches!(y_plan, ExprPlan::Agg { .. }) => vec![x_idx],
        None => vec![],
    };

    let mut points: Vec<(Value, f64, Option<String>)> = Vec::new();
    if group_cols.is_empty() {
        let y_idx = match y_plan {
            ExprPlan::Col(i) => i,
            ExprPlan::Agg { .. } => unreachable!("aggregates always group"),
        };
        require_number(&ws, y_idx, "the y axis")?;
        for row in &ws.rows {
            let x = &row[x_idx];
            let y = &row[y_idx];
            if x.is_null() || y.is_null() {
                continue;
            }
            points.push((x.clone(), number_of(y, &ws.cols[y_idx].name)?, None));
        }
    } else {
        let z_idx = (group_cols.len() >= 2).then(|| group_cols[1]);
        for group in group_rows(&ws.rows, &group_cols) {
            let first = group[0];
            let x = ws.rows[first][x_idx].clone();
            let y = match &y_plan {
                ExprPlan::Agg { func, arg, distinct } => {
                    aggregate(&ws, &group, *func, *arg, *distinct)?
                }
                ExprPlan::Col(i) => {
                    require_number(&ws, *i, "the y axis")?;
                    match &ws.rows[first][*i] {
                        Value::Null => None,
                        v => Some(number_of(v, &ws.cols[*i].name)?),
                    }
                }
            };
            let Some(y) = y else { continue };
            if x.is_null() {
                continue;
            }
            let z = z_idx.map(|zi| ws.rows[first][zi].to_cell_string());
            points.push((x, y, z));
        }
    }

    let has_z = group_cols.len() >= 2;
    let ordered = match &ast.order_by {
        Some(order) => {
            let target = order_target(&order.key, x_idx, &y_plan, &ws)?;
            sort_points(&mut points, Some((target, order.dir)));
            true
        }
        None => {
            sort_points(&mut points, None);
            false
        }
    };

    let (mut xs, mut ys, mut zs) = (Vec::new(), Vec::new(), Vec::new());
    for (x, y, z) in points {
        xs.push(x);
        ys.push(y);
        if let Some(z) = z {
            zs.push(z);
        }
    }
    Ok(VisData {
        chart_type: ast.chart_type.into(),
        x: xs,
        y: ys,
        z: has_z.then_some(zs),
        ordered,
    })
}

// ---- working set ----------------------------------------------------

struct ColInfo {
    table: String,
    name: String,
    dtype: DType,
}

struct WorkSet {
    cols: Vec<ColInfo>,
    rows: Vec<Vec<Value>>,
}

impl WorkSet {
    fn resolve(&self, c: &ColumnRef) -> Result<usize, ExecError> {
        match &c.table {
            Some(t) => self
                .cols
                .iter()
                .position(|col| col.table.eq_ignore_ascii_case(t) && col.name.eq_ignore_ascii_case(&c.name))
                .ok_or_else(|| ExecError::UnknownColumn(format!("{t}.{}", c.name))),
            None => {
                let mut hits = self
                    .cols
                    .iter()
                    .enumerate()
                    .filter(|(_, col)| col.name.eq_ignore_ascii_case(&c.name));
                match (hits.next(), hits.next()) {
                    (Some((i, _)), None) => Ok(i),
                    (Some(_), Some(_)) => Err(ExecError::AmbiguousColumn(c.name.clone())),
                    (None, _) => Err(ExecError::UnknownColumn(c.name.clone())),
                }
            }
        }
    }
}

fn table_of<'a>(db: &'a Database, name: &str) -> Result<&'a Table, ExecError> {
    db.table(name).ok_or_else(|| ExecError::UnknownTable(name.to_string()))
}

fn resolve_in_table(table: &Table, c: &ColumnRef) -> Result<usize, ExecError> {
    if let Some(t) = &c.table {
        if !table.name.eq_ignore_ascii_case(t) {
            return Err(ExecError::UnknownColumn(format!("{t}.{}", c.name)));
        }
    }
    table
        .column_index(&c.name)
        .ok_or_else(|| ExecError::UnknownColumn(c.name.clone()))
}

fn build_workset(db: &Database, from: &str, joins: &[JoinClause]) -> Result<WorkSet, ExecError> {
    let base = table_of(db, from)?;
    let mut ws = WorkSet {
        cols: base
            .columns
            .iter()
            .map(|c| ColInfo { table: base.name.clone(), name: c.name.clone(), dtype: c.dtype })
            .collect(),
        rows: base.rows.clone(),
    };
    for join in joins {
        let right = table_of(db, &join.table)?;
        // The join condition may name its sides in either order.
        let (left_idx, right_idx) = match (ws.resolve(&join.left), resolve_in_table(right, &join.right))
        {
            (Ok(l), Ok(r)) => (l, r),
            (first_l, _) => match (ws.resolve(&join.right), resolve_in_table(right, &join.left)) {
                (Ok(l), Ok(r)) => (l, r),
                _ => return Err(first_l
                    .err()
                    .unwrap_or_else(|| ExecError::UnknownColumn(join.right.name.clone()))),
            },
        };
        let mut rows = Vec::new();
        for row in &ws.rows {
            for rrow in &right.rows {
                if join_eq(&row[left_idx], &rrow[right_idx]) {
                    let mut combined = row.clone();
                    combined.extend(rrow.iter().cloned());
                    rows.push(combined);
                }
            }
        }
        ws.cols.extend(right.columns.iter().map(|c| ColInfo {
            table: right.name.clone(),
            name: c.name.clone(),
            dtype: c.dtype,
        }));
        ws.rows = rows;
    }
    Ok(ws)
}

fn join_eq(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => x == y,
        (Value::Text(x), Value::Text(y)) => x == y,
        (Value::Time(x), Value::Time(y)) => x == y,
        _ => false,
    }
}

// ---- select resolution ----------------------------------------------

#[derive(Debug, Clone, Copy)]
enum AggColArg {
    Star,
    Col(usize),
}

enum ExprPlan {
    Col(usize),
    Agg { func: AggFunc, arg: AggColArg, distinct: bool },
}

fn resolve_expr(expr: &ColumnExpr, ws: &WorkSet) -> Result<ExprPlan, ExecError> {
    match expr {
        ColumnExpr::Aggregate(agg) => {
            let arg = match &agg.arg {
                AggArg::Star => {
                    if agg.func != AggFunc::Count {
                        return Err(ExecError::TypeMismatch(format!(
                            "{} needs a column argument",
                            agg.func.as_str()
                        )));
                    }
                    AggColArg::Star
                }
                AggArg::Column(c) => {
                    let idx = ws.resolve(c)?;
                    if matches!(agg.func, AggFunc::Sum | AggFunc::Avg) {
                        require_number(ws, idx, agg.func.as_str())?;
                    }
                    AggColArg::Col(idx)
                }
            };
            Ok(ExprPlan::Agg { func: agg.func, arg, distinct: agg.distinct })
        }
        ColumnExpr::Column(c) => match ws.resolve(c) {
            Ok(idx) => Ok(ExprPlan::Col(idx)),
            Err(err @ ExecError::UnknownColumn(_)) if c.table.is_none() => {
                alias_plan(&c.name, ws).ok_or(err)
            }
            Err(e) => Err(e),
        },
    }
}

/// Reads derived column names: `count` means `COUNT(*)`, and
/// `<column>_<fn>` (as in `date_count`) means `<FN>(<column>)` when
/// `<column>` exists. Real columns always win; this runs only after
/// direct resolution fails.
fn alias_plan(name: &str, ws: &WorkSet) -> Option<ExprPlan> {
    if name.eq_ignore_ascii_case("count") {
        return Some(ExprPlan::Agg { func: AggFunc::Count, arg: AggColArg::Star, distinct: false });
    }
    let (base, suffix) = name.rsplit_once('_')?;
    let func = match suffix.to_ascii_lowercase().as_str() {
        "count" => AggFunc::Count,
        "sum" => AggFunc::Sum,
        "avg" => AggFunc::Avg,
        _ => return None,
    };
    let idx = ws.resolve(&ColumnRef::bare(base)).ok()?;
    if matches!(func, AggFunc::Sum | AggFunc::Avg) && ws.cols[idx].dtype != DType::Number {
        return None;
    }
    Some(ExprPlan::Agg { func, arg: AggColArg::Col(idx), distinct: false })
}

fn require_number(ws: &WorkSet, idx: usize, what: &str) -> Result<(), ExecError> {
    if ws.cols[idx].dtype != DType::Number {
        return Err(ExecError::TypeMismatch(format!(
            "{what} needs a number column, but {:?} is {}",
            ws.cols[idx].name, ws.cols[idx].dtype
        )));
    }
    Ok(())
}

fn number_of(v: &Value, col: &str) -> Result<f64, ExecError> {
    match v {
        Value::Number(n) => Ok(*n),
        other => Err(ExecError::TypeMismatch(format!(
            "column {col:?} holds {other:?} where a number was expected"
        ))),
    }
}

// ---- grouping and aggregation ---------------------------------------

/// Partitions row indices into groups with equal key tuples. Rows with
/// a null key cell are dropped. Within a group, indices keep row order.
fn group_rows(rows: &[Vec<Value>], key_cols: &[usize]) -> Vec<Vec<usize>> {
    let mut indices: Vec<usize> = (0..rows.len())
        .filter(|&i| key_cols.iter().all(|&k| !rows[i][k].is_null()))
        .collect();
    let key_cmp = |a: usize, b: usize| {
        key_cols
            .iter()
            .map(|&k| rows[a][k].sort_cmp(&rows[b][k]))
            .find(|o| !o.is_eq())
            .unwrap_or(Ordering::Equal)
    };
    indices.sort_by(|&a, &b| key_cmp(a, b).then(a.cmp(&b)));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in indices {
        match groups.last_mut() {
            Some(g) if key_cmp(g[0], i).is_eq() => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    groups
}

fn aggregate(
    ws: &WorkSet,
    group: &[usize],
    func: AggFunc,
    arg: AggColArg,
    distinct: bool,
) -> Result<Option<f64>, ExecError> {
    match (func, arg) {
        (AggFunc::Count, AggColArg::Star) => Ok(Some(group.len() as f64)),
        (AggFunc::Count, AggColArg::Col(idx)) => {
            let mut vals: Vec<&Value> =
                group.iter().map(|&i| &ws.rows[i][idx]).filter(|v| !v.is_null()).collect();
            if distinct {
                vals.sort_by(|a, b| a.sort_cmp(b));
                vals.dedup_by(|a, b| a.sort_cmp(b).is_eq());
            }
            Ok(Some(vals.len() as f64))
        }
        (AggFunc::Sum | AggFunc::Avg, AggColArg::Col(idx)) => {
            let mut sum = 0.0;
            let mut n = 0usize;
            for &i in group {
                match &ws.rows[i][idx] {
                    Value::Null => {}
                    v => {
                        sum += number_of(v, &ws.cols[idx].name)?;
                        n += 1;
                    }
                }
            }
            if n == 0 {
                return Ok(None);
            }
            Ok(Some(if func == AggFunc::Sum { sum } else { sum / n as f64 }))
        }
        (AggFunc::Sum | AggFunc::Avg, AggColArg::Star) => Err(ExecError::TypeMismatch(
            format!("{} needs a column argument", func.as_str()),
        )),
    }
}

// ---- ordering -------------------------------------------------------

#[derive(Clone, Copy)]
enum SortTarget {
    X,
    Y,
}

fn order_target(
    key: &ColumnRef,
    x_idx: usize,
    y_plan: &ExprPlan,
    ws: &WorkSet,
) -> Result<SortTarget, ExecError> {
    let matches_col = |idx: usize| {
        ws.cols[idx].name.eq_ignore_ascii_case(&key.name)
            && key
                .table
                .as_ref()
                .is_none_or(|t| ws.cols[idx].table.eq_ignore_ascii_case(t))
    };
    if matches_col(x_idx) {
        return Ok(SortTarget::X);
    }
    let y_hit = match y_plan {
        ExprPlan::Col(idx) => matches_col(*idx),
        ExprPlan::Agg { func, arg: AggColArg::Col(idx), .. } => {
            matches_col(*idx)
                || key.name.eq_ignore_ascii_case(&format!(
                    "{}_{}",
                    ws.cols[*idx].name,
                    func.alias_suffix()
                ))
        }
        ExprPlan::Agg { arg: AggColArg::Star, .. } => key.name.eq_ignore_ascii_case("count"),
    };
    if y_hit {
        return Ok(SortTarget::Y);
    }
    Err(ExecError::UnknownColumn(format!(
        "ORDER BY key {:?} does not appear in the select clause",
        key.name
    )))
}

fn sort_points(
    points: &mut [(Value, f64, Option<String>)],
    order: Option<(SortTarget, SortDir)>,
) {
    points.sort_by(|a, b| {
        let tie = a.0.sort_cmp(&b.0).then_with(|| a.2.cmp(&b.2)).then_with(|| a.1.total_cmp(&b.1));
        match order {
            None => tie,
            Some((target, dir)) => {
                let primary = match target {
                    SortTarget::X => a.0.sort_cmp(&b.0),
                    SortTarget::Y => a.1.total_cmp(&b.1),
                };
                let primary = match dir {
                    SortDir::Asc => primary,
                    SortDir::Desc => primary.reverse(),
                };
                primary.then(tie)
            }
        }
    });
}

// ---- predicates -----------------------------------------------------

enum CompiledRhs {
    Literal(Literal),
    List(Vec<Literal>),
    /// Evaluated sub-select results; scalar use already checked.
    Values(Vec<Value>),
}

enum Compiled {
    Cmp { col: usize, op: CompareOp, rhs: CompiledRhs },
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
}

fn compile_predicate(pred: &Predicate, ws: &WorkSet, db: &Database) -> Result<Compiled, ExecError> {
    match pred {
        Predicate::And(a, b) => Ok(Compiled::And(
            Box::new(compile_predicate(a, ws, db)?),
            Box::new(compile_predicate(b, ws, db)?),
        )),
        Predicate::Or(a, b) => Ok(Compiled::Or(
            Box::new(compile_predicate(a, ws, db)?),
            Box::new(compile_predicate(b, ws, db)?),
        )),
        Predicate::Compare { left, op, right } => {
            let col = ws.resolve(left)?;
            let col_type = ws.cols[col].dtype;
            let rhs = match right {
                RightHand::Literal(lit) => {
                    check_comparable(col_type, lit, &ws.cols[col].name)?;
                    CompiledRhs::Literal(lit.clone())
                }
                RightHand::List(items) => {
                    for lit in items {
                        check_comparable(col_type, lit, &ws.cols[col].name)?;
                    }
                    CompiledRhs::List(items.clone())
                }
                RightHand::Subquery(sq) => {
                    let values = eval_subquery(sq, db)?;
                    if *op != CompareOp::In && values.len() != 1 {
                        return Err(ExecError::TypeMismatch(format!(
                            "sub-select used as a scalar produced {} values",
                            values.len()
                        )));
                    }
                    CompiledRhs::Values(values)
                }
            };
            if *op == CompareOp::Like && col_type != DType::Text {
                return Err(ExecError::TypeMismatch(format!(
                    "LIKE needs a text column, but {:?} is {}",
                    ws.cols[col].name, col_type
                )));
            }
            Ok(Compiled::Cmp { col, op: *op, rhs })
        }
    }
}

/// Literal comparability is decided while compiling, so a bad literal
/// fails the query instead of silently filtering rows.
fn check_comparable(dtype: DType, lit: &Literal, col: &str) -> Result<(), ExecError> {
    let ok = match (dtype, lit) {
        (DType::Number, Literal::Number(_)) => true,
        (DType::Number, Literal::Text(t)) => t.trim().parse::<f64>().is_ok(),
        (DType::Text, Literal::Text(_)) => true,
        (DType::Text, Literal::Number(_)) => false,
        (DType::Time, Literal::Text(t)) => relational_model::parse_time(t).is_some(),
        (DType::Time, Literal::Number(_)) => false,
    };
    if ok {
        Ok(())
    } else {
        Err(ExecError::TypeMismatch(format!(
            "cannot compare {dtype} column {col:?} with {}",
            vql_core::render_literal(lit)
        )))
    }
}

fn eval_compiled(c: &Compiled, row: &[Value]) -> bool {
    match c {
        Compiled::And(a, b) => eval_compiled(a, row) && eval_compiled(b, row),
        Compiled::Or(a, b) => eval_compiled(a, row) || eval_compiled(b, row),
        Compiled::Cmp { col, op, rhs } => {
            let value = &row[*col];
            if value.is_null() {
                return false;
            }
            match (op, rhs) {
                (CompareOp::In, CompiledRhs::List(items)) => {
                    items.iter().any(|lit| lit_cmp(value, lit).is_some_and(|o| o.is_eq()))
                }
                (CompareOp::In, CompiledRhs::Values(vals)) => {
                    vals.iter().any(|v| value_cmp(value, v).is_some_and(|o| o.is_eq()))
                }
                (CompareOp::Like, CompiledRhs::Literal(Literal::Text(pat))) => match value {
                    Value::Text(s) => like_match(s, pat),
                    _ => false,
                },
                (_, CompiledRhs::Literal(lit)) => {
                    lit_cmp(value, lit).is_some_and(|o| op_accepts(*op, o))
                }
                (_, CompiledRhs::Values(vals)) => {
                    value_cmp(value, &vals[0]).is_some_and(|o| op_accepts(*op, o))
                }
                _ => false,
            }
        }
    }
}

fn op_accepts(op: CompareOp, o: Ordering) -> bool {
    match op {
        CompareOp::Eq => o.is_eq(),
        CompareOp::Ne => o.is_ne(),
        CompareOp::Lt => o.is_lt(),
        CompareOp::Le => o.is_le(),
        CompareOp::Gt => o.is_gt(),
        CompareOp::Ge => o.is_ge(),
        CompareOp::Like | CompareOp::In => o.is_eq(),
    }
}

/// Compares a non-null cell with a literal. Comparability was checked
/// at compile time; `None` covers the remaining null-ish cases.
fn lit_cmp(value: &Value, lit: &Literal) -> Option<Ordering> {
    match (value, lit) {
        (Value::Number(n), Literal::Number(m)) => n.partial_cmp(m),
        (Value::Number(n), Literal::Text(t)) => {
            t.trim().parse::<f64>().ok().and_then(|m| n.partial_cmp(&m))
        }
        (Value::Text(s), Literal::Text(t)) => Some(s.as_str().cmp(t.as_str())),
        (Value::Time(x), Literal::Text(t)) => {
            relational_model::parse_time(t).map(|y| x.cmp(&y))
        }
        _ => None,
    }
}

/// Compares a non-null cell with a sub-select value of matching kind.
fn value_cmp(value: &Value, other: &Value) -> Option<Ordering> {
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

/// SQL LIKE: `%` matches any run, `_` one character, case-insensitive.
fn like_match(s: &str, pattern: &str) -> bool {
    fn rec(s: &[char], p: &[char]) -> bool {
        match p.first() {
            None => s.is_empty(),
            Some('%') => rec(s, &p[1..]) || (!s.is_empty() && rec(&s[1..], p)),
            Some('_') => !s.is_empty() && rec(&s[1..], &p[1..]),
            Some(c) => s.first() == Some(c) && rec(&s[1..], &p[1..]),
        }
    }
    let s: Vec<char> = s.to_lowercase().chars().collect();
    let p: Vec<char> = pattern.to_lowercase().chars().collect();
    rec(&s, &p)
}

// ---- sub-selects ----------------------------------------------------

/// Evaluates a sub-select to its list of values: one per group when
/// grouped, one per row (nulls skipped) for a plain column, one total
/// for an ungrouped aggregate.
fn eval_subquery(sq: &Subquery, db: &Database) -> Result<Vec<Value>, ExecError> {
    let mut ws = build_workset(db, &sq.from_table, &sq.joins)?;
    if let Some(pred) = &sq.where_pred {
        let compiled = compile_predicate(pred, &ws, db)?;
        ws.rows.retain(|row| eval_compiled(&compiled, row));
    }
    let plan = resolve_expr(&sq.select, &ws)?;
    let mut out = Vec::new();
    match &sq.group {
        Some(g) => {
            let keys: Vec<usize> =
                g.columns.iter().map(|c| ws.resolve(c)).collect::<Result<_, _>>()?;
            for group in group_rows(&ws.rows, &keys) {
                match &plan {
                    ExprPlan::Agg { func, arg, distinct } => {
                        if let Some(n) = aggregate(&ws, &group, *func, *arg, *distinct)? {
                            out.push(Value::Number(n));
                        }
                    }
                    ExprPlan::Col(idx) => {
                        let v = &ws.rows[group[0]][*idx];
                        if !v.is_null() {
                            out.push(v.clone());
                        }
                    }
                }
            }
        }
        None => match &plan {
            ExprPlan::Agg { func, arg, distinct } => {
                let all: Vec<usize> = (0..ws.rows.len()).collect();
                if let Some(n) = aggregate(&ws, &all, *func, *arg, *distinct)? {
                    out.push(Value::Number(n));
                }
            }
            ExprPlan::Col(idx) => {
                for row in &ws.rows {
                    if !row[*idx].is_null() {
                        out.push(row[*idx].clone());
                    }
                }
            }
        },
    }
    Ok(out)
}
