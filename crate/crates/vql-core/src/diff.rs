//! Clause-level comparison of two queries.
//!
//! Each query component maps to one facet of the chart: the mark
//! (type), the selected axes, binning, grouping, joins, conditions
//! (filter plus ordering), and sub-selects. [`component_diff`] reports
//! which facets disagree; the variant order doubles as the severity
//! ranking used when one failure cause must be named.

use std::collections::BTreeSet;

use crate::ast::{subqueries_of, Subquery, VqlAst};
use crate::canon::canonicalize;

/// One comparable facet of a query. Ordering is the diagnostic
/// priority: earlier variants dominate when several differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Component {
    Join,
    Nested,
    Cond,
    Bin,
    Group,
    Axis,
    Type,
}

impl Component {
    pub const ALL: [Component; 7] = [
        Component::Join,
        Component::Nested,
        Component::Cond,
        Component::Bin,
        Component::Group,
        Component::Axis,
        Component::Type,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Component::Join => "join",
            Component::Nested => "nested",
            Component::Cond => "cond",
            Component::Bin => "bin",
            Component::Group => "group",
            Component::Axis => "axis",
            Component::Type => "type",
        }
    }
}

impl std::fmt::Display for Component {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Components whose sub-trees differ between the two queries, after
/// canonicalization. Empty exactly when [`crate::ast_equal`] holds.
pub fn component_diff(a: &VqlAst, b: &VqlAst) -> BTreeSet<Component> {
    let a = canonicalize(a);
    let b = canonicalize(b);
    let mut out = BTreeSet::new();
    if a.chart_type != b.chart_type {
        out.insert(Component::Type);
    }
    if a.select != b.select {
        out.insert(Component::Axis);
    }
    if a.bin != b.bin {
        out.insert(Component::Bin);
    }
    if a.group != b.group {
        out.insert(Component::Group);
    }
    if a.joins != b.joins || a.from_table != b.from_table {
        out.insert(Component::Join);
    }
    if a.where_pred != b.where_pred || a.order_by != b.order_by {
        out.insert(Component::Cond);
    }
    let subs_a: Vec<&Subquery> = a.where_pred.as_ref().map(subqueries_of).unwrap_or_default();
    let subs_b: Vec<&Subquery> = b.where_pred.as_ref().map(subqueries_of).unwrap_or_default();
    if subs_a != subs_b {
        out.insert(Component::Nested);
    }
    out
}
