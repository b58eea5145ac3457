//! Random databases and queries that are guaranteed to execute.
//!
//! Unlike the grammar generator, these pick columns and literals that
//! fit the schema: aggregates over number columns, binning over time
//! columns, literals that parse for the column's type, and qualified
//! references whenever a join could make a bare name ambiguous.

use rand::seq::SliceRandom;
use rand::Rng;
use relational_model::{ColumnDef, DType, Database, ForeignKey, Table, Value};
use vql_core::{
    AggArg, AggExpr, AggFunc, BinInterval, BinSpec, ChartType, ColumnExpr, ColumnRef, CompareOp,
    GroupSpec, JoinClause, Literal, OrderSpec, Predicate, RightHand, SelectClause, SortDir,
    Subquery, VqlAst,
};

const TEXT_COLS: &[&str] = &["city", "team", "label", "kind"];
const NUM_COLS: &[&str] = &["score", "total", "qty", "price"];
const TIME_COLS: &[&str] = &["logged_at", "stamp"];
const WORDS: &[&str] = &["red", "blue", "green", "teal", "red", "blue", "ochre"];
const NUMBERS: &[f64] = &[0.0, 1.0, 2.0, 2.5, 3.0, 4.0, 5.0, 7.5, 10.0, 12.0];
const DATES: &[&str] = &[
    "2020-02-03", "2020-02-10", "2020-07-04", "2021-01-05", "2021-01-20", "2021-03-01",
    "2021-03-02", "2021-12-31", "2022-06-15", "2022-06-16",
];

fn pick<'a, T>(rng: &mut impl Rng, items: &'a [T]) -> &'a T {
    &items[rng.gen_range(0..items.len())]
}

fn cell(rng: &mut impl Rng, dtype: DType, nullable: bool) -> Value {
    if nullable && rng.gen_bool(0.08) {
        return Value::Null;
    }
    match dtype {
        DType::Text => Value::Text((*pick(rng, WORDS)).into()),
        DType::Number => Value::Number(*pick(rng, NUMBERS)),
        DType::Time => Value::Time(relational_model::parse_time(pick(rng, DATES)).unwrap()),
    }
}

fn make_table(rng: &mut impl Rng, name: &str, extra: Option<ColumnDef>) -> Table {
    let mut columns = Vec::new();
    if let Some(c) = extra {
        columns.push(c);
    }
    let mut texts: Vec<&str> = TEXT_COLS.to_vec();
    let mut nums: Vec<&str> = NUM_COLS.to_vec();
    texts.shuffle(rng);
    nums.shuffle(rng);
    for t in texts.iter().take(rng.gen_range(1..3)) {
        columns.push(ColumnDef { name: (*t).into(), dtype: DType::Text });
    }
    for n in nums.iter().take(rng.gen_range(1..3)) {
        columns.push(ColumnDef { name: (*n).into(), dtype: DType::Number });
    }
    if rng.gen_bool(0.6) {
        columns.push(ColumnDef { name: (*pick(rng, TIME_COLS)).into(), dtype: DType::Time });
    }
    let n_rows = if rng.gen_bool(0.05) { 0 } else { rng.gen_range(3..9) };
    let rows = (0..n_rows)
        .map(|i| {
            columns
                .iter()
                .enumerate()
                .map(|(ci, c)| {
                    if ci == 0 && c.name == "id" {
                        Value::Number(i as f64 + 1.0)
                    } else if c.name == "ref_id" {
                        cell_ref(rng)
                    } else {
                        cell(rng, c.dtype, true)
                    }
                })
                .collect()
        })
        .collect();
    Table { name: name.into(), columns, primary_key: vec![], rows }
}

fn cell_ref(rng: &mut impl Rng) -> Value {
    if rng.gen_bool(0.1) {
        Value::Null
    } else {
        Value::Number(rng.gen_range(0..10) as f64)
    }
}

/// Builds a one- or two-table database with mixed column types,
/// duplicate values to group over, and occasional nulls. Two-table
/// databases always join over `id = ref_id`.
pub fn random_database(rng: &mut impl Rng) -> Database {
    let two = rng.gen_bool(0.55);
    let mut tables = vec![make_table(
        rng,
        "people",
        two.then(|| ColumnDef { name: "id".into(), dtype: DType::Number }),
    )];
    let mut foreign_keys = Vec::new();
    if two {
        tables.push(make_table(
            rng,
            "orders",
            Some(ColumnDef { name: "ref_id".into(), dtype: DType::Number }),
        ));
        foreign_keys.push(ForeignKey {
            from_table: "orders".into(),
            from_column: "ref_id".into(),
            to_table: "people".into(),
            to_column: "id".into(),
        });
    }
    Database { id: format!("gen_{}", rng.gen_range(0..1_000_000)), tables, foreign_keys }
}

struct Scope {
    /// (table name, column) for every reachable column.
    cols: Vec<(String, ColumnDef)>,
    qualify: bool,
}

impl Scope {
    fn make_ref(&self, idx: usize) -> ColumnRef {
        let (table, col) = &self.cols[idx];
        if self.qualify {
            ColumnRef { table: Some(table.clone()), name: col.name.clone() }
        } else {
            ColumnRef::bare(&col.name)
        }
    }

    fn of_type(&self, dtype: DType) -> Vec<usize> {
        (0..self.cols.len()).filter(|&i| self.cols[i].1.dtype == dtype).collect()
    }
}

fn literal_for(rng: &mut impl Rng, dtype: DType) -> Literal {
    match dtype {
        DType::Number => {
            let n = *pick(rng, NUMBERS);
            if rng.gen_bool(0.2) {
                Literal::Text(format!("{n}"))
            } else {
                Literal::Number(n)
            }
        }
        DType::Text => Literal::Text((*pick(rng, WORDS)).into()),
        DType::Time => Literal::Text((*pick(rng, DATES)).into()),
    }
}

fn comparison(rng: &mut impl Rng, scope: &Scope, db: &Database, depth: u32) -> Predicate {
    let idx = rng.gen_range(0..scope.cols.len());
    let dtype = scope.cols[idx].1.dtype;
    let left = scope.make_ref(idx);
    if depth < 2 && rng.gen_bool(0.15) {
        if let Some(p) = subquery_compare(rng, db, left.clone(), dtype, depth) {
            return p;
        }
    }
    match dtype {
        DType::Text if rng.gen_bool(0.25) => {
            let word = *pick(rng, WORDS);
            let pattern = match rng.gen_range(0..3) {
                0 => format!("%{}%", &word[1..word.len() - 1]),
                1 => format!("{}_{}", &word[..1], &word[2..]),
                _ => format!("{}%", &word[..2].to_ascii_uppercase()),
            };
            Predicate::Compare {
                left,
                op: CompareOp::Like,
                right: RightHand::Literal(Literal::Text(pattern)),
            }
        }
        _ if rng.gen_bool(0.15) => Predicate::Compare {
            left,
            op: CompareOp::In,
            right: RightHand::List(
                (0..rng.gen_range(1..4)).map(|_| literal_for(rng, dtype)).collect(),
            ),
        },
        _ => Predicate::Compare {
            left,
            op: *pick(
                rng,
                &[
                    CompareOp::Eq,
                    CompareOp::Ne,
                    CompareOp::Lt,
                    CompareOp::Le,
                    CompareOp::Gt,
                    CompareOp::Ge,
                ],
            ),
            right: RightHand::Literal(literal_for(rng, dtype)),
        },
    }
}

/// A comparison whose right side is a sub-select over any one table of
/// the database. Scalar sub-selects always use COUNT so they produce
/// exactly one value.
fn subquery_compare(
    rng: &mut impl Rng,
    db: &Database,
    left: ColumnRef,
    dtype: DType,
    depth: u32,
) -> Option<Predicate> {
    let inner = pick(rng, &db.tables);
    let inner_scope = Scope {
        cols: inner.columns.iter().map(|c| (inner.name.clone(), c.clone())).collect(),
        qualify: false,
    };
    let scalar = dtype == DType::Number && rng.gen_bool(0.4);
    let select = if scalar {
        ColumnExpr::Aggregate(AggExpr { func: AggFunc::Count, arg: AggArg::Star, distinct: false })
    } else {
        let same: Vec<&ColumnDef> =
            inner.columns.iter().filter(|c| c.dtype == dtype).collect();
        if same.is_empty() {
            return None;
        }
        ColumnExpr::Column(ColumnRef::bare(&pick(rng, &same).name))
    };
    let where_pred = rng
        .gen_bool(0.35)
        .then(|| Box::new(comparison(rng, &inner_scope, db, depth + 1)));
    let group = (!scalar && rng.gen_bool(0.25)).then(|| GroupSpec {
        columns: vec![ColumnRef::bare(&pick(rng, &inner.columns).name)],
    });
    let sub = Subquery {
        select,
        from_table: inner.name.clone(),
        joins: vec![],
        where_pred,
        group,
    };
    let op = if scalar {
        *pick(rng, &[CompareOp::Eq, CompareOp::Ne, CompareOp::Lt, CompareOp::Gt])
    } else {
        CompareOp::In
    };
    Some(Predicate::Compare { left, op, right: RightHand::Subquery(Box::new(sub)) })
}

fn predicate(rng: &mut impl Rng, scope: &Scope, db: &Database) -> Predicate {
    let first = comparison(rng, scope, db, 0);
    if rng.gen_bool(0.35) {
        let second = comparison(rng, scope, db, 0);
        if rng.gen_bool(0.5) {
            Predicate::And(Box::new(first), Box::new(second))
        } else {
            Predicate::Or(Box::new(first), Box::new(second))
        }
    } else {
        first
    }
}

/// Builds a query that executes without error against `db`: every
/// reference resolves unambiguously and every operation is
/// type-correct.
pub fn random_query_for(rng: &mut impl Rng, db: &Database) -> VqlAst {
    let multi = db.tables.len() == 2 && !db.foreign_keys.is_empty() && rng.gen_bool(0.45);
    let involved: Vec<&Table> =
        if multi { db.tables.iter().collect() } else { vec![pick(rng, &db.tables)] };
    let scope = Scope {
        cols: involved
            .iter()
            .flat_map(|t| t.columns.iter().map(|c| (t.name.clone(), c.clone())))
            .collect(),
        qualify: multi,
    };
    let joins = if multi {
        let fk = &db.foreign_keys[0];
        let left = ColumnRef { table: Some(fk.to_table.clone()), name: fk.to_column.clone() };
        let right =
            ColumnRef { table: Some(fk.from_table.clone()), name: fk.from_column.clone() };
        let (left, right) = if rng.gen_bool(0.5) { (left, right) } else { (right, left) };
        vec![JoinClause { table: db.tables[1].name.clone(), left, right }]
    } else {
        vec![]
    };
    let from_table = involved[0].name.clone();

    let time_cols = scope.of_type(DType::Time);
    let bin = (!time_cols.is_empty() && rng.gen_bool(0.3)).then(|| BinSpec {
        column: scope.make_ref(*pick(rng, &time_cols)),
        interval: *pick(
            rng,
            &[BinInterval::Year, BinInterval::Month, BinInterval::Day, BinInterval::Weekday],
        ),
    });
    let x_idx = match &bin {
        Some(b) => scope
            .cols
            .iter()
            .position(|(t, c)| {
                c.name == b.column.name && b.column.table.as_ref().map_or(true, |bt| bt == t)
            })
            .unwrap(),
        None => rng.gen_range(0..scope.cols.len()),
    };
    let x = scope.make_ref(x_idx);

    let num_cols: Vec<usize> = scope.of_type(DType::Number);
    let y = y_expr(rng, &scope, &num_cols, multi);
    let y_aggregates = matches!(
        &y,
        ColumnExpr::Aggregate(_)
    ) || matches!(&y, ColumnExpr::Column(c) if is_alias_name(&c.name));

    let group = if y_aggregates {
        match rng.gen_range(0..100) {
            0..=54 => Some(GroupSpec { columns: vec![x.clone()] }),
            55..=69 => {
                let extra = rng.gen_range(0..scope.cols.len());
                Some(GroupSpec { columns: vec![x.clone(), scope.make_ref(extra)] })
            }
            70..=84 => None,
            _ => {
                let solo = rng.gen_range(0..scope.cols.len());
                Some(GroupSpec { columns: vec![scope.make_ref(solo)] })
            }
        }
    } else if rng.gen_bool(0.2) {
        Some(GroupSpec { columns: vec![x.clone()] })
    } else {
        None
    };

    let where_pred = rng.gen_bool(0.5).then(|| predicate(rng, &scope, db));
    let order_by = rng.gen_bool(0.45).then(|| OrderSpec {
        key: order_key(rng, &scope, x_idx, &y),
        dir: *pick(rng, &[SortDir::Asc, SortDir::Desc]),
    });

    VqlAst {
        chart_type: *pick(
            rng,
            &[ChartType::Bar, ChartType::Pie, ChartType::Line, ChartType::Scatter],
        ),
        select: SelectClause { x: ColumnExpr::Column(x), y },
        from_table,
        joins,
        where_pred,
        bin,
        group,
        order_by,
    }
}

fn is_alias_name(name: &str) -> bool {
    name == "count"
        || name.ends_with("_count")
        || name.ends_with("_sum")
        || name.ends_with("_avg")
}

fn y_expr(rng: &mut impl Rng, scope: &Scope, num_cols: &[usize], multi: bool) -> ColumnExpr {
    let roll = rng.gen_range(0..100);
    if roll < 25 && !num_cols.is_empty() {
        return ColumnExpr::Column(scope.make_ref(*pick(rng, num_cols)));
    }
    if roll >= 80 && !multi {
        // Derived names: `count`, `<col>_count`, `<col>_sum`, `<col>_avg`.
        return ColumnExpr::Column(ColumnRef::bare(&match rng.gen_range(0..3) {
            0 => "count".to_string(),
            1 => format!("{}_count", scope.cols[rng.gen_range(0..scope.cols.len())].1.name),
            _ if !num_cols.is_empty() => {
                let base = &scope.cols[*pick(rng, num_cols)].1.name;
                if rng.gen_bool(0.5) {
                    format!("{base}_sum")
                } else {
                    format!("{base}_avg")
                }
            }
            _ => "count".to_string(),
        }));
    }
    let agg = match rng.gen_range(0..5) {
        0 => AggExpr { func: AggFunc::Count, arg: AggArg::Star, distinct: false },
        1 => AggExpr {
            func: AggFunc::Count,
            arg: AggArg::Column(scope.make_ref(rng.gen_range(0..scope.cols.len()))),
            distinct: false,
        },
        2 => AggExpr {
            func: AggFunc::Count,
            arg: AggArg::Column(scope.make_ref(rng.gen_range(0..scope.cols.len()))),
            distinct: true,
        },
        _ if !num_cols.is_empty() => AggExpr {
            func: if rng.gen_bool(0.5) { AggFunc::Sum } else { AggFunc::Avg },
            arg: AggArg::Column(scope.make_ref(*pick(rng, num_cols))),
            distinct: false,
        },
        _ => AggExpr { func: AggFunc::Count, arg: AggArg::Star, distinct: false },
    };
    ColumnExpr::Aggregate(agg)
}

fn order_key(rng: &mut impl Rng, scope: &Scope, x_idx: usize, y: &ColumnExpr) -> ColumnRef {
    let mut keys = vec![ColumnRef::bare(&scope.cols[x_idx].1.name)];
    match y {
        ColumnExpr::Column(c) => keys.push(ColumnRef::bare(&c.name)),
        ColumnExpr::Aggregate(agg) => match &agg.arg {
            AggArg::Star => keys.push(ColumnRef::bare("count")),
            AggArg::Column(c) => {
                keys.push(ColumnRef::bare(&c.name));
                keys.push(ColumnRef::bare(&format!(
                    "{}_{}",
                    c.name,
                    agg.func.alias_suffix()
                )));
            }
        },
    }
    keys[rng.gen_range(0..keys.len())].clone()
}
