//! Executed chart data and its comparison.

use serde::Serialize;

use relational_model::Value;
use vql_core::ChartType;

/// Result of executing a query: parallel x and y series, an optional
/// series label per point (z, from a second grouping column), and
/// whether the query fixed the point order with `ORDER BY`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VisData {
    pub chart_type: ChartTypeTag,
    pub x: Vec<Value>,
    pub y: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<Vec<String>>,
    pub ordered: bool,
}

/// Chart type as a lowercase string in serialized output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChartTypeTag(pub ChartType);

impl Serialize for ChartTypeTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.0.as_str())
    }
}

impl From<ChartType> for ChartTypeTag {
    fn from(c: ChartType) -> Self {
        ChartTypeTag(c)
    }
}

impl VisData {
    pub fn chart_type(&self) -> ChartType {
        self.chart_type.0
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

/// Relative tolerance applied when comparing y values.
pub const Y_RELATIVE_TOLERANCE: f64 = 1e-9;

fn y_close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= Y_RELATIVE_TOLERANCE * a.abs().max(b.abs())
}

/// Whether two results draw the same chart.
///
/// Chart types and z presence must match. When either side was ordered
/// the point sequences are compared positionally; otherwise the point
/// multisets are compared. Numeric y values match within a relative
/// tolerance of 1e-9; x and z must match exactly.
pub fn exec_equal(a: &VisData, b: &VisData) -> bool {
    if a.chart_type != b.chart_type
        || a.len() != b.len()
        || a.z.is_some() != b.z.is_some()
    {
        return false;
    }
    let mut pa = points(a);
    let mut pb = points(b);
    if !(a.ordered || b.ordered) {
        sort_points(&mut pa);
        sort_points(&mut pb);
    }
    pa.iter().zip(pb.iter()).all(|(p, q)| {
        p.0.sort_cmp(q.0).is_eq() && y_close(p.1, q.1) && p.2 == q.2
    })
}

type Point<'a> = (&'a Value, f64, Option<&'a str>);

fn points(v: &VisData) -> Vec<Point<'_>> {
    (0..v.len())
        .map(|i| {
            (
                &v.x[i],
                v.y[i],
                v.z.as_ref().map(|z| z[i].as_str()),
            )
        })
        .collect()
}

fn sort_points(points: &mut [Point<'_>]) {
    points.sort_by(|a, b| {
        a.0.sort_cmp(b.0).then_with(|| a.2.cmp(&b.2)).then_with(|| a.1.total_cmp(&b.1))
    });
}
