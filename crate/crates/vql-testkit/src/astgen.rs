//! Random query trees drawn from the whole grammar.
//!
//! These trees ignore schemas entirely; they exist to exercise the
//! printer and parser, including keyword-like identifiers, mixed
//! identifier case, awkward literals, and every clause combination.

use rand::Rng;
use vql_core::{
    AggArg, AggExpr, AggFunc, BinInterval, BinSpec, ChartType, ColumnExpr, ColumnRef, CompareOp,
    GroupSpec, JoinClause, Literal, OrderSpec, Predicate, RightHand, SelectClause, SortDir,
    Subquery, VqlAst,
};

const WORDS: &[&str] = &[
    "price", "category", "label", "city", "team", "total", "state", "score", "region", "qty",
    "year_col", "when_it_ran", "order", "group", "count", "date_count", "from_x", "u2",
];

fn pick<'a, T>(rng: &mut impl Rng, items: &'a [T]) -> &'a T {
    &items[rng.gen_range(0..items.len())]
}

fn ident(rng: &mut impl Rng) -> String {
    let mut word = (*pick(rng, WORDS)).to_string();
    if rng.gen_bool(0.3) {
        word.push('_');
        word.push(char::from(b'a' + rng.gen_range(0..26u8)));
    }
    if rng.gen_bool(0.2) {
        word = word.to_ascii_uppercase();
    }
    word
}

fn column(rng: &mut impl Rng) -> ColumnRef {
    if rng.gen_bool(0.25) {
        ColumnRef { table: Some(ident(rng)), name: ident(rng) }
    } else {
        ColumnRef::bare(&ident(rng))
    }
}

fn literal(rng: &mut impl Rng) -> Literal {
    if rng.gen_bool(0.5) {
        let n = match rng.gen_range(0..4) {
            0 => rng.gen_range(-100..1000) as f64,
            1 => rng.gen_range(-100..1000) as f64 + 0.5,
            2 => rng.gen_range(0..100) as f64 / 4.0,
            _ => 0.0,
        };
        Literal::Number(n)
    } else {
        let base = *pick(rng, &["NYY", "low", "a b", "it's", "back\\slash", "say \"hi\"", ""]);
        Literal::Text(base.to_string())
    }
}

fn aggregate(rng: &mut impl Rng) -> AggExpr {
    match rng.gen_range(0..4) {
        0 => AggExpr { func: AggFunc::Count, arg: AggArg::Star, distinct: false },
        1 => AggExpr {
            func: AggFunc::Count,
            arg: AggArg::Column(column(rng)),
            distinct: rng.gen_bool(0.4),
        },
        2 => AggExpr { func: AggFunc::Sum, arg: AggArg::Column(column(rng)), distinct: false },
        _ => AggExpr { func: AggFunc::Avg, arg: AggArg::Column(column(rng)), distinct: false },
    }
}

fn subquery(rng: &mut impl Rng, depth: u32) -> Subquery {
    Subquery {
        select: if rng.gen_bool(0.5) {
            ColumnExpr::Column(column(rng))
        } else {
            ColumnExpr::Aggregate(aggregate(rng))
        },
        from_table: ident(rng),
        joins: (0..rng.gen_range(0..2)).map(|_| join(rng)).collect(),
        where_pred: rng
            .gen_bool(0.4)
            .then(|| Box::new(predicate(rng, 1, depth))),
        group: rng.gen_bool(0.3).then(|| group(rng)),
    }
}

fn predicate(rng: &mut impl Rng, branch_budget: u32, depth: u32) -> Predicate {
    if branch_budget > 0 && rng.gen_bool(0.4) {
        let a = Box::new(predicate(rng, branch_budget - 1, depth));
        let b = Box::new(predicate(rng, branch_budget - 1, depth));
        return if rng.gen_bool(0.5) { Predicate::And(a, b) } else { Predicate::Or(a, b) };
    }
    let left = column(rng);
    match rng.gen_range(0..8) {
        0 => Predicate::Compare {
            left,
            op: CompareOp::Like,
            right: RightHand::Literal(Literal::Text((*pick(rng, &["%a%", "b_b", "N%"])).into())),
        },
        1 => Predicate::Compare {
            left,
            op: CompareOp::In,
            right: RightHand::List((0..rng.gen_range(1..4)).map(|_| literal(rng)).collect()),
        },
        2 if depth < 2 => Predicate::Compare {
            left,
            op: CompareOp::In,
            right: RightHand::Subquery(Box::new(subquery(rng, depth + 1))),
        },
        3 if depth < 2 => Predicate::Compare {
            left,
            op: *pick(rng, &[CompareOp::Gt, CompareOp::Lt, CompareOp::Eq]),
            right: RightHand::Subquery(Box::new(subquery(rng, depth + 1))),
        },
        n => Predicate::Compare {
            left,
            op: [
                CompareOp::Eq,
                CompareOp::Ne,
                CompareOp::Lt,
                CompareOp::Le,
                CompareOp::Gt,
                CompareOp::Ge,
            ][n % 6],
            right: RightHand::Literal(literal(rng)),
        },
    }
}

fn join(rng: &mut impl Rng) -> JoinClause {
    JoinClause { table: ident(rng), left: column(rng), right: column(rng) }
}

fn group(rng: &mut impl Rng) -> GroupSpec {
    GroupSpec { columns: (0..rng.gen_range(1..3)).map(|_| column(rng)).collect() }
}

/// Builds a random query tree covering the full grammar. The result
/// always prints to parseable text; it need not execute against any
/// database.
pub fn random_grammar_ast(rng: &mut impl Rng) -> VqlAst {
    VqlAst {
        chart_type: *pick(
            rng,
            &[ChartType::Bar, ChartType::Pie, ChartType::Line, ChartType::Scatter],
        ),
        select: SelectClause {
            x: ColumnExpr::Column(column(rng)),
            y: if rng.gen_bool(0.55) {
                ColumnExpr::Aggregate(aggregate(rng))
            } else {
                ColumnExpr::Column(column(rng))
            },
        },
        from_table: ident(rng),
        joins: (0..rng.gen_range(0..3)).map(|_| join(rng)).collect(),
        where_pred: rng.gen_bool(0.55).then(|| predicate(rng, 2, 0)),
        bin: rng.gen_bool(0.3).then(|| BinSpec {
            column: column(rng),
            interval: *pick(
                rng,
                &[BinInterval::Year, BinInterval::Month, BinInterval::Day, BinInterval::Weekday],
            ),
        }),
        group: rng.gen_bool(0.4).then(|| group(rng)),
        order_by: rng.gen_bool(0.4).then(|| OrderSpec {
            key: column(rng),
            dir: *pick(rng, &[SortDir::Asc, SortDir::Desc]),
        }),
    }
}
