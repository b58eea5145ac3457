//! Canonical form and structural equality.
//!
//! Canonicalization folds identifier case everywhere a name can appear.
//! Literal text keeps its case: `"NYY"` and `"nyy"` are different
//! values. Numbers are already normal (stored as `f64`), and grouping
//! surface forms collapse at parse time, so case folding is the whole
//! job here.

use crate::ast::*;

/// Returns the query in canonical form.
pub fn canonicalize(ast: &VqlAst) -> VqlAst {
    let mut out = ast.clone();
    fold_query(&mut out);
    out
}

/// Structural equality of canonical forms.
pub fn ast_equal(a: &VqlAst, b: &VqlAst) -> bool {
    canonicalize(a) == canonicalize(b)
}

fn fold_query(ast: &mut VqlAst) {
    fold_ident(&mut ast.from_table);
    fold_column_expr(&mut ast.select.x);
    fold_column_expr(&mut ast.select.y);
    for j in &mut ast.joins {
        fold_join(j);
    }
    if let Some(p) = &mut ast.where_pred {
        fold_predicate(p);
    }
    if let Some(b) = &mut ast.bin {
        fold_column_ref(&mut b.column);
    }
    if let Some(g) = &mut ast.group {
        for c in &mut g.columns {
            fold_column_ref(c);
        }
    }
    if let Some(o) = &mut ast.order_by {
        fold_column_ref(&mut o.key);
    }
}

fn fold_ident(s: &mut String) {
    if s.chars().any(|c| c.is_ascii_uppercase()) {
        *s = s.to_ascii_lowercase();
    }
}

fn fold_column_ref(c: &mut ColumnRef) {
    if let Some(t) = &mut c.table {
        fold_ident(t);
    }
    fold_ident(&mut c.name);
}

fn fold_column_expr(e: &mut ColumnExpr) {
    match e {
        ColumnExpr::Column(c) => fold_column_ref(c),
        ColumnExpr::Aggregate(a) => {
            if let AggArg::Column(c) = &mut a.arg {
                fold_column_ref(c);
            }
        }
    }
}

fn fold_join(j: &mut JoinClause) {
    fold_ident(&mut j.table);
    fold_column_ref(&mut j.left);
    fold_column_ref(&mut j.right);
}

fn fold_predicate(p: &mut Predicate) {
    match p {
        Predicate::Compare { left, right, .. } => {
            fold_column_ref(left);
            if let RightHand::Subquery(sq) = right {
                fold_subquery(sq);
            }
        }
        Predicate::And(a, b) | Predicate::Or(a, b) => {
            fold_predicate(a);
            fold_predicate(b);
        }
    }
}

fn fold_subquery(sq: &mut Subquery) {
    fold_column_expr(&mut sq.select);
    fold_ident(&mut sq.from_table);
    for j in &mut sq.joins {
        fold_join(j);
    }
    if let Some(p) = &mut sq.where_pred {
        fold_predicate(p);
    }
    if let Some(g) = &mut sq.group {
        for c in &mut g.columns {
            fold_column_ref(c);
        }
    }
}
