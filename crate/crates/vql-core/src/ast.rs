//! Abstract syntax for VQL queries.
//!
//! A query names a chart type, exactly two selected expressions (x and y),
//! a source table, and optional join, filter, bin, group, and order clauses.
//! Identifier case is preserved as written; comparison folds it (see
//! [`crate::canonicalize`]).

/// Chart kind named after `VISUALIZE`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartType {
    Bar,
    Pie,
    Line,
    Scatter,
}

impl ChartType {
    pub fn as_str(&self) -> &'static str {
        match self {
            ChartType::Bar => "bar",
            ChartType::Pie => "pie",
            ChartType::Line => "line",
            ChartType::Scatter => "scatter",
        }
    }
}

impl std::fmt::Display for ChartType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Aggregate function over the y expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AggFunc {
    Count,
    Sum,
    Avg,
}

impl AggFunc {
    pub fn as_str(&self) -> &'static str {
        match self {
            AggFunc::Count => "COUNT",
            AggFunc::Sum => "SUM",
            AggFunc::Avg => "AVG",
        }
    }

    /// Lower-case name used in derived column aliases such as `date_count`.
    pub fn alias_suffix(&self) -> &'static str {
        match self {
            AggFunc::Count => "count",
            AggFunc::Sum => "sum",
            AggFunc::Avg => "avg",
        }
    }
}

/// Calendar granularity for `BIN c BY interval`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinInterval {
    Year,
    Month,
    Day,
    Weekday,
}

impl BinInterval {
    pub fn as_str(&self) -> &'static str {
        match self {
            BinInterval::Year => "year",
            BinInterval::Month => "month",
            BinInterval::Day => "day",
            BinInterval::Weekday => "weekday",
        }
    }
}

/// Sort direction; `ASC` is the default when the query omits it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SortDir {
    Asc,
    Desc,
}

/// Possibly qualified column name (`price` or `orders.price`).
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnRef {
    pub table: Option<String>,
    pub name: String,
}

impl ColumnRef {
    pub fn bare(name: impl Into<String>) -> Self {
        ColumnRef { table: None, name: name.into() }
    }

    pub fn qualified(table: impl Into<String>, name: impl Into<String>) -> Self {
        ColumnRef { table: Some(table.into()), name: name.into() }
    }
}

/// Argument of an aggregate: `*` or a column.
#[derive(Debug, Clone, PartialEq)]
pub enum AggArg {
    Star,
    Column(ColumnRef),
}

/// `COUNT(*)`, `COUNT(DISTINCT c)`, `SUM(c)`, `AVG(c)`.
/// `SUM` and `AVG` always take a column, never `*`; the parser enforces this.
#[derive(Debug, Clone, PartialEq)]
pub struct AggExpr {
    pub func: AggFunc,
    pub arg: AggArg,
    pub distinct: bool,
}

/// One selected expression: a plain column or an aggregate.
#[derive(Debug, Clone, PartialEq)]
pub enum ColumnExpr {
    Column(ColumnRef),
    Aggregate(AggExpr),
}

/// The two selected expressions. The x side is always a plain column
/// (binning is carried by [`BinSpec`]); only y may aggregate.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectClause {
    pub x: ColumnExpr,
    pub y: ColumnExpr,
}

/// `JOIN table ON left = right`; equality joins only.
#[derive(Debug, Clone, PartialEq)]
pub struct JoinClause {
    pub table: String,
    pub left: ColumnRef,
    pub right: ColumnRef,
}

/// Literal comparison value. Numbers are stored as `f64`, so `10`
/// and `10.0` are already the same literal.
#[derive(Debug, Clone, PartialEq)]
pub enum Literal {
    Text(String),
    Number(f64),
}

/// Comparison operator in a predicate leaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Like,
    In,
}

impl CompareOp {
    pub fn as_str(&self) -> &'static str {
        match self {
            CompareOp::Eq => "=",
            CompareOp::Ne => "!=",
            CompareOp::Lt => "<",
            CompareOp::Le => "<=",
            CompareOp::Gt => ">",
            CompareOp::Ge => ">=",
            CompareOp::Like => "LIKE",
            CompareOp::In => "IN",
        }
    }
}

/// Right-hand side of a comparison. `IN` takes a list or a sub-select;
/// every other operator takes a literal or a scalar sub-select.
#[derive(Debug, Clone, PartialEq)]
pub enum RightHand {
    Literal(Literal),
    List(Vec<Literal>),
    Subquery(Box<Subquery>),
}

/// Filter tree. Connectives are binary; `AND` binds tighter than `OR`.
#[derive(Debug, Clone, PartialEq)]
pub enum Predicate {
    Compare {
        left: ColumnRef,
        op: CompareOp,
        right: RightHand,
    },
    And(Box<Predicate>, Box<Predicate>),
    Or(Box<Predicate>, Box<Predicate>),
}

/// Sub-select inside a predicate: one selected expression plus the
/// relational clauses, no chart type. Nesting is capped at two levels.
#[derive(Debug, Clone, PartialEq)]
pub struct Subquery {
    pub select: ColumnExpr,
    pub from_table: String,
    pub joins: Vec<JoinClause>,
    pub where_pred: Option<Box<Predicate>>,
    pub group: Option<GroupSpec>,
}

/// `BIN c BY interval` over a time column.
#[derive(Debug, Clone, PartialEq)]
pub struct BinSpec {
    pub column: ColumnRef,
    pub interval: BinInterval,
}

/// Grouping columns. A second column labels the series (z axis).
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSpec {
    pub columns: Vec<ColumnRef>,
}

/// `ORDER BY key dir`. The key must name a column or aggregate that
/// appears in the select clause; execution checks this.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderSpec {
    pub key: ColumnRef,
    pub dir: SortDir,
}

/// A complete VQL query.
#[derive(Debug, Clone, PartialEq)]
pub struct VqlAst {
    pub chart_type: ChartType,
    pub select: SelectClause,
    pub from_table: String,
    pub joins: Vec<JoinClause>,
    pub where_pred: Option<Predicate>,
    pub bin: Option<BinSpec>,
    pub group: Option<GroupSpec>,
    pub order_by: Option<OrderSpec>,
}

impl VqlAst {
    /// Depth of the deepest sub-select chain; 0 when the filter has none.
    pub fn nesting_depth(&self) -> usize {
        self.where_pred.as_ref().map_or(0, predicate_depth)
    }
}

fn predicate_depth(p: &Predicate) -> usize {
    match p {
        Predicate::Compare { right, .. } => match right {
            RightHand::Subquery(sq) => 1 + sq.where_pred.as_ref().map_or(0, |w| predicate_depth(w)),
            _ => 0,
        },
        Predicate::And(a, b) | Predicate::Or(a, b) => predicate_depth(a).max(predicate_depth(b)),
    }
}

/// Collects every sub-select under a predicate in pre-order.
pub fn subqueries_of(p: &Predicate) -> Vec<&Subquery> {
    let mut out = Vec::new();
    collect_subqueries(p, &mut out);
    out
}

fn collect_subqueries<'a>(p: &'a Predicate, out: &mut Vec<&'a Subquery>) {
    match p {
        Predicate::Compare { right, .. } => {
            if let RightHand::Subquery(sq) = right {
                out.push(sq);
                if let Some(w) = &sq.where_pred {
                    collect_subqueries(w, out);
                }
            }
        }
        Predicate::And(a, b) | Predicate::Or(a, b) => {
            collect_subqueries(a, out);
            collect_subqueries(b, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf(col: &str) -> Predicate {
        Predicate::Compare {
            left: ColumnRef::bare(col),
            op: CompareOp::Eq,
            right: RightHand::Literal(Literal::Number(1.0)),
        }
    }

    #[test]
    fn nesting_depth_counts_chained_subqueries() {
        let inner = Subquery {
            select: ColumnExpr::Column(ColumnRef::bare("a")),
            from_table: "t".into(),
            joins: vec![],
            where_pred: None,
            group: None,
        };
        let outer = Subquery {
            select: ColumnExpr::Column(ColumnRef::bare("b")),
            from_table: "u".into(),
            joins: vec![],
            where_pred: Some(Box::new(Predicate::Compare {
                left: ColumnRef::bare("b"),
                op: CompareOp::In,
                right: RightHand::Subquery(Box::new(inner)),
            })),
            group: None,
        };
        let pred = Predicate::And(
            Box::new(leaf("x")),
            Box::new(Predicate::Compare {
                left: ColumnRef::bare("y"),
                op: CompareOp::In,
                right: RightHand::Subquery(Box::new(outer)),
            }),
        );
        assert_eq!(predicate_depth(&pred), 2);
        assert_eq!(subqueries_of(&pred).len(), 2);
    }
}
