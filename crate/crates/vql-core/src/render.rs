//! Canonical text form of a query: upper-case keywords, lower-case
//! identifiers, double-quoted strings, minimal numeric literals, single
//! spacing, and `GROUP BY` for grouping. `parse(render(q))` compares
//! equal to `q` under [`crate::ast_equal`].

use crate::ast::*;

pub fn render(ast: &VqlAst) -> String {
    let mut out = String::new();
    out.push_str("VISUALIZE ");
    out.push_str(ast.chart_type.as_str());
    out.push_str(" SELECT ");
    push_column_expr(&mut out, &ast.select.x);
    out.push_str(", ");
    push_column_expr(&mut out, &ast.select.y);
    out.push_str(" FROM ");
    push_ident(&mut out, &ast.from_table);
    for j in &ast.joins {
        push_join(&mut out, j);
    }
    if let Some(pred) = &ast.where_pred {
        out.push_str(" WHERE ");
        push_predicate(&mut out, pred);
    }
    if let Some(bin) = &ast.bin {
        out.push_str(" BIN ");
        push_column_ref(&mut out, &bin.column);
        out.push_str(" BY ");
        out.push_str(bin.interval.as_str());
    }
    if let Some(group) = &ast.group {
        push_group(&mut out, group);
    }
    if let Some(order) = &ast.order_by {
        out.push_str(" ORDER BY ");
        push_column_ref(&mut out, &order.key);
        out.push_str(match order.dir {
            SortDir::Asc => " ASC",
            SortDir::Desc => " DESC",
        });
    }
    out
}

/// Canonical spelling of a literal, as it appears in rendered queries.
pub fn render_literal(lit: &Literal) -> String {
    let mut out = String::new();
    push_literal(&mut out, lit);
    out
}

/// Minimal decimal form of a numeric literal: no trailing zeros, no
/// decimal point on integral values.
pub fn format_number(n: f64) -> String {
    format!("{n}")
}

fn push_ident(out: &mut String, ident: &str) {
    out.push_str(&ident.to_ascii_lowercase());
}

fn push_column_ref(out: &mut String, c: &ColumnRef) {
    if let Some(t) = &c.table {
        push_ident(out, t);
        out.push('.');
    }
    push_ident(out, &c.name);
}

fn push_column_expr(out: &mut String, e: &ColumnExpr) {
    match e {
        ColumnExpr::Column(c) => push_column_ref(out, c),
        ColumnExpr::Aggregate(a) => {
            out.push_str(a.func.as_str());
            out.push('(');
            if a.distinct {
                out.push_str("DISTINCT ");
            }
            match &a.arg {
                AggArg::Star => out.push('*'),
                AggArg::Column(c) => push_column_ref(out, c),
            }
            out.push(')');
        }
    }
}

fn push_join(out: &mut String, j: &JoinClause) {
    out.push_str(" JOIN ");
    push_ident(out, &j.table);
    out.push_str(" ON ");
    push_column_ref(out, &j.left);
    out.push_str(" = ");
    push_column_ref(out, &j.right);
}

fn push_group(out: &mut String, g: &GroupSpec) {
    out.push_str(" GROUP BY ");
    for (i, c) in g.columns.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        push_column_ref(out, c);
    }
}

fn push_literal(out: &mut String, lit: &Literal) {
    match lit {
        Literal::Text(s) => {
            out.push('"');
            for ch in s.chars() {
                if ch == '"' || ch == '\\' {
                    out.push('\\');
                }
                out.push(ch);
            }
            out.push('"');
        }
        Literal::Number(n) => out.push_str(&format_number(*n)),
    }
}

/// Connectives re-associate to the left when reparsed, so a connective
/// in a right operand, and `OR` anywhere under `AND`, must keep parens
/// for the tree shape to survive a round trip.
fn needs_parens(child: &Predicate, parent_is_and: bool, is_right: bool) -> bool {
    match child {
        Predicate::Compare { .. } => false,
        Predicate::And(..) => is_right,
        Predicate::Or(..) => parent_is_and || is_right,
    }
}

fn push_operand(out: &mut String, child: &Predicate, parent_is_and: bool, is_right: bool) {
    if needs_parens(child, parent_is_and, is_right) {
        out.push('(');
        push_predicate(out, child);
        out.push(')');
    } else {
        push_predicate(out, child);
    }
}

fn push_predicate(out: &mut String, p: &Predicate) {
    match p {
        Predicate::Compare { left, op, right } => {
            push_column_ref(out, left);
            out.push(' ');
            out.push_str(op.as_str());
            out.push(' ');
            match right {
                RightHand::Literal(lit) => push_literal(out, lit),
                RightHand::List(items) => {
                    out.push('(');
                    for (i, lit) in items.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        push_literal(out, lit);
                    }
                    out.push(')');
                }
                RightHand::Subquery(sq) => {
                    out.push('(');
                    push_subquery(out, sq);
                    out.push(')');
                }
            }
        }
        Predicate::And(a, b) => {
            push_operand(out, a, true, false);
            out.push_str(" AND ");
            push_operand(out, b, true, true);
        }
        Predicate::Or(a, b) => {
            push_operand(out, a, false, false);
            out.push_str(" OR ");
            push_operand(out, b, false, true);
        }
    }
}

fn push_subquery(out: &mut String, sq: &Subquery) {
    out.push_str("SELECT ");
    push_column_expr(out, &sq.select);
    out.push_str(" FROM ");
    push_ident(out, &sq.from_table);
    for j in &sq.joins {
        push_join(out, j);
    }
    if let Some(pred) = &sq.where_pred {
        out.push_str(" WHERE ");
        push_predicate(out, pred);
    }
    if let Some(group) = &sq.group {
        push_group(out, group);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse;

    #[test]
    fn renders_bar_chart_canonically() {
        let ast = parse(
            "visualize BAR select Name , count(Name) from Technician \
             where Team != 'NYY' transform group Name order by Name",
        )
        .unwrap();
        assert_eq!(
            render(&ast),
            "VISUALIZE bar SELECT name, COUNT(name) FROM technician \
             WHERE team != \"NYY\" GROUP BY name ORDER BY name ASC"
        );
    }

    #[test]
    fn renders_bin_clause_canonically() {
        let ast =
            parse("VISUALIZE line SELECT date, COUNT(date) from payments BIN date by MONTH")
                .unwrap();
        assert_eq!(
            render(&ast),
            "VISUALIZE line SELECT date, COUNT(date) FROM payments BIN date BY month"
        );
    }

    #[test]
    fn numbers_drop_trailing_zeros() {
        assert_eq!(format_number(10.0), "10");
        assert_eq!(format_number(0.50), "0.5");
        assert_eq!(format_number(-3.0), "-3");
    }

    #[test]
    fn string_quotes_normalize_to_double() {
        let ast = parse("VISUALIZE bar SELECT a, b FROM t WHERE a = 'x\"y'").unwrap();
        assert_eq!(
            render(&ast),
            "VISUALIZE bar SELECT a, b FROM t WHERE a = \"x\\\"y\""
        );
    }

    #[test]
    fn right_nested_connectives_keep_parens() {
        use crate::ast::{ColumnRef, CompareOp, Literal, Predicate, RightHand};
        let leaf = |name: &str| Predicate::Compare {
            left: ColumnRef::bare(name),
            op: CompareOp::Eq,
            right: RightHand::Literal(Literal::Number(1.0)),
        };
        let mut ast = parse("VISUALIZE bar SELECT a, b FROM t").unwrap();
        ast.where_pred = Some(Predicate::And(
            Box::new(leaf("a")),
            Box::new(Predicate::And(Box::new(leaf("b")), Box::new(leaf("c")))),
        ));
        let text = render(&ast);
        assert!(text.contains("a = 1 AND (b = 1 AND c = 1)"), "got: {text}");
        let reparsed = parse(&text).unwrap();
        assert_eq!(reparsed.where_pred, ast.where_pred);
    }

    #[test]
    fn or_under_and_keeps_parens() {
        let ast = parse("VISUALIZE bar SELECT a, b FROM t WHERE (a = 1 OR b = 2) AND c = 3").unwrap();
        let text = render(&ast);
        assert!(text.contains("(a = 1 OR b = 2) AND c = 3"), "got: {text}");
        assert_eq!(parse(&text).unwrap().where_pred, ast.where_pred);
    }
}
