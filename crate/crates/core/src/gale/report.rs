use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use super::{ColumnClass, GaleReport, Markings, RowLabel};
use crate::bundles::DegreeMatrix;
use crate::fan::CrepantFan;
use crate::group::JuniorPoint;
use crate::zmat::{to_csv, to_json_value};

/// Markings with fan indices replaced by lattice points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MarkingsView {
    pub points: Vec<PointMark>,
    pub segments: Vec<SegmentMark>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointMark {
    pub row: usize,
    pub characters: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SegmentMark {
    pub character: usize,
    pub curves: Vec<(JuniorPoint, JuniorPoint)>,
}

impl MarkingsView {
    pub fn new(m: &Markings, degrees: &DegreeMatrix, fan: &CrepantFan) -> Self {
        let points = m
            .points
            .iter()
            .enumerate()
            .map(|(row, c)| PointMark {
                row,
                characters: c.clone(),
            })
            .collect();
        let segments = m
            .segments
            .iter()
            .map(|(chi, curves)| SegmentMark {
                character: *chi,
                curves: curves
                    .iter()
                    .map(|&c| {
                        let (a, b) = degrees.endpoints[c];
                        (*fan.point(a), *fan.point(b))
                    })
                    .collect(),
            })
            .collect();
        MarkingsView { points, segments }
    }
}

fn big(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => Value::String(x.to_string()),
    }
}

impl GaleReport {
    /// The report body. Keys are emitted in sorted order and nothing depends
    /// on time or thread scheduling, so equal inputs give equal bytes.
    pub fn to_json(&self) -> Value {
        let label = |j: usize| self.labels[j].clone();
        let rows_entries = |v: &[(usize, BigInt)], key: &str| -> Value {
            Value::Array(
                v.iter()
                    .map(|(i, x)| json!({"row": i, key: big(x)}))
                    .collect(),
            )
        };
        let mut plus = Vec::new();
        let mut zero = Vec::new();
        let mut minus = Vec::new();
        let mut incoherent = Vec::new();
        for (j, c) in self.trichotomy.columns.iter().enumerate() {
            match c {
                ColumnClass::Plus(v) => {
                    plus.push(json!({"column": label(j), "entries": rows_entries(v, "entry")}))
                }
                ColumnClass::Zero => {
                    let curves = self
                        .case0
                        .iter()
                        .find(|(col, _)| *col == j)
                        .map(|(_, c)| json!(c))
                        .unwrap_or_else(|| json!([]));
                    zero.push(json!({"column": label(j), "curves": curves}))
                }
                ColumnClass::Minus(v) => minus.push(
                    json!({"column": label(j), "multiplicities": rows_entries(v, "multiplicity")}),
                ),
                ColumnClass::Incoherent(v) => incoherent
                    .push(json!({"column": label(j), "entries": rows_entries(v, "entry")})),
            }
        }
        json!({
            "mode": self.mode,
            "group": self.group.map(|g| g.to_json()),
            "ns_rank": self.ns_rank,
            "reid_basis": self.reid_basis_characters(),
            "columns": self.labels,
            "L": to_json_value(&self.l),
            "Lt": to_json_value(&self.lt),
            "K": to_json_value(&self.k),
            "Kt": to_json_value(&self.kt),
            "kt_rows": self.kt_rows.iter().map(row_value).collect::<Vec<_>>(),
            "theta0": self.theta0.iter().map(big).collect::<Vec<_>>(),
            "trichotomy": {
                "plus": plus,
                "zero": zero,
                "minus": minus,
                "incoherent": incoherent,
                "sign_coherent": self.trichotomy.is_sign_coherent(),
            },
            "markings": self.markings,
            "cht_check": self.cht_check,
            "exactness": self.exactness,
            "diagnostics": self.diagnostics,
        })
    }

    /// Named CSV side files: `L`, `Lt`, `K`, `Kt`.
    pub fn matrices_csv(&self) -> Vec<(&'static str, String)> {
        vec![
            ("L", to_csv(&self.l)),
            ("Lt", to_csv(&self.lt)),
            ("K", to_csv(&self.k)),
            ("Kt", to_csv(&self.kt)),
        ]
    }
}

fn row_value(r: &RowLabel) -> Value {
    match r {
        RowLabel::Point(p) => json!({"point": p}),
        RowLabel::Relation(k) => json!({"relation": k}),
    }
}
