//! The end objects: `L` in the Reid basis, the canonical kernel
//! `K`, its transpose `K^t` in the divisor basis, the sign trichotomy and
//! the markings.
//!
//! Rows of `K^t` are identified with exceptional divisors through the Euler
//! pairing; the combinatorial recipe is then read back off the result and
//! checked, never assumed.

mod kernel;
mod matrix;
mod recipe;
mod report;

use serde::Serialize;

use crate::bundles::{DegreeMatrix, SupportTable};
use crate::fan::CrepantFan;
use crate::group::{DimensionVector, JuniorPoint};
use crate::surfaces::{projected_self_intersections, surface, EulerTable};
use crate::zmat::{verify_short_exact, ExactnessReport, ZmatError};
use crate::{Error, ZMatrix};

pub use kernel::{canonical_kernel, lift_theta, ns_and_raw_kernel, pairing_matrix, RawKernel};
pub use matrix::matrix_mode;
pub use recipe::{
    case0_supports, markings_and_cht_check, divisor_row_ordering, reid_basis, trichotomy,
    trichotomy_diagnostics, ChtCheck, ChtEntry, ColumnClass, Markings, ReidBasis, Trichotomy,
};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum GaleError {
    #[error(
        "kernel rank {kernel_rank} does not match the {divisors} compact divisors (NS rank {ns_rank})"
    )]
    RankMismatch {
        ns_rank: usize,
        kernel_rank: usize,
        divisors: usize,
    },
    #[error("Euler pairing matrix is not unimodular (det {det})")]
    NotUnimodular { det: String },
    #[error("characters {characters:?} do not give a Z-basis of NS")]
    NotABasis { characters: Vec<usize> },
    #[error("L is not surjective: invariant factors {factors:?} for {rows} rows")]
    NotSurjective { factors: Vec<String>, rows: usize },
    #[error("supplied K is not a kernel basis of L: {0}")]
    NotAKernelBasis(String),
    #[error("invalid matrix-mode input: {0}")]
    Input(String),
    #[error(transparent)]
    Zmat(#[from] ZmatError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Info,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
}

impl Diagnostic {
    pub fn info(code: &'static str, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Info,
            code,
            message: message.into(),
        }
    }

    pub fn warning(code: &'static str, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            code,
            message: message.into(),
        }
    }
}

/// What a row of `K^t` stands for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowLabel {
    /// An interior lattice point, i.e. a compact exceptional divisor.
    Point(JuniorPoint),
    /// The `k`-th kernel basis vector in matrix mode.
    Relation(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Toric,
    Matrix,
}

/// The end product of either pipeline. Column `j` of `L`, `K^t` is labelled
/// `labels[j]`; in the toric pipeline that is character `j + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaleReport {
    pub mode: Mode,
    pub group: Option<crate::group::CyclicAction>,
    pub ns_rank: usize,
    pub labels: Vec<String>,
    /// Column indices of the NS basis (toric pipeline only).
    pub reid_basis: Option<Vec<usize>>,
    pub l: ZMatrix,
    pub k: ZMatrix,
    pub kt: ZMatrix,
    pub lt: ZMatrix,
    pub kt_rows: Vec<RowLabel>,
    /// `θ_0` of each `K^t` row after the lift `Σ v_i θ_i = 0`.
    pub theta0: Vec<num_bigint::BigInt>,
    pub trichotomy: Trichotomy,
    /// `(0)` columns with their degree-1 curves as endpoint pairs.
    pub case0: Vec<(usize, Vec<(JuniorPoint, JuniorPoint)>)>,
    pub markings: Option<report::MarkingsView>,
    pub cht_check: Option<ChtCheck>,
    pub exactness: ExactnessReport,
    pub diagnostics: Vec<Diagnostic>,
}

impl GaleReport {
    pub fn has_warnings(&self) -> bool {
        self.diagnostics
            .iter()
            .any(|d| d.severity == Severity::Warning)
    }

    /// Character numbers of the NS basis.
    pub fn reid_basis_characters(&self) -> Option<Vec<usize>> {
        self.reid_basis
            .as_ref()
            .map(|b| b.iter().map(|j| j + 1).collect())
    }

    /// Label sets of the three sign classes.
    pub fn class_labels(&self) -> (Vec<String>, Vec<String>, Vec<String>) {
        let names = |cols: Vec<usize>| cols.into_iter().map(|j| self.labels[j].clone()).collect();
        (
            names(self.trichotomy.plus()),
            names(self.trichotomy.zero()),
            names(self.trichotomy.minus()),
        )
    }
}

/// Everything computed on the way to the report, for dumps and tests.
#[derive(Clone, Debug)]
pub struct ToricAnalysis {
    pub supports: SupportTable,
    pub degrees: DegreeMatrix,
    pub euler: EulerTable,
    /// Canonical kernel, columns in canonical interior-point order.
    pub canonical_k: ZMatrix,
    pub report: GaleReport,
}

/// Runs the full toric pipeline on a validated fan.
pub fn analyze_fan(fan: &CrepantFan) -> Result<ToricAnalysis, Error> {
    let action = *fan.action();
    let r = action.characters();
    let labels: Vec<String> = (1..r).map(|i| i.to_string()).collect();
    let interior = fan.interior_points();
    let mut diagnostics = Vec::new();

    let supports = SupportTable::compute(fan)?;
    let degrees = DegreeMatrix::compute(fan, &supports)?;
    let negative = degrees.negative_entries();
    if !negative.is_empty() {
        diagnostics.push(Diagnostic::warning(
            "negative_degree",
            format!(
                "{} (character, curve) pairs have negative degree",
                negative.len()
            ),
        ));
    }
    let above_one = degrees.entries_above_one();
    if !above_one.is_empty() {
        diagnostics.push(Diagnostic::info(
            "degree_above_one",
            format!(
                "{} (character, curve) pairs have degree above 1",
                above_one.len()
            ),
        ));
    }
    for &rho in &interior {
        let direct = surface(fan, rho)?.surface.self_intersections;
        if projected_self_intersections(fan, rho).as_ref() != Some(&direct) {
            diagnostics.push(Diagnostic::warning(
                "self_intersection_mismatch",
                format!(
                    "self-intersections of E at {} disagree with the projected star",
                    fan.point(rho)
                ),
            ));
        }
    }
    let euler = EulerTable::compute(fan, &degrees)?;

    let degree_map: ZMatrix = degrees.to_matrix();
    let raw = ns_and_raw_kernel(&degree_map, interior.len())?;
    let v = DimensionVector::ones(r);
    let canonical_k = canonical_kernel(&raw.kernel, &euler.to_matrix(), &v)?;

    let kt_canonical = canonical_k.transpose();
    let (perm, unmarked) = divisor_row_ordering(&trichotomy(&kt_canonical), interior.len());
    for &row in &unmarked {
        diagnostics.push(Diagnostic::warning(
            "unmarked_divisor_row",
            format!(
                "row of point {} carries no positive (+) entry",
                fan.point(interior[row])
            ),
        ));
    }
    let kt = kt_canonical.select_rows(&perm);
    let points: Vec<usize> = perm.iter().map(|&i| interior[i]).collect();
    let tri = trichotomy(&kt);
    diagnostics.extend(trichotomy_diagnostics(&tri, &labels));

    let basis = reid_basis(&tri, kt.rows(), &degree_map)?;
    let k = kt.transpose();
    let exactness = verify_short_exact(&k, &basis.l)?;
    if !exactness.passed() {
        diagnostics.push(Diagnostic::warning(
            "exactness_failed",
            format!(
                "0 -> K -> Theta -> NS -> 0 fails: {:?}",
                exactness.failures()
            ),
        ));
    }

    let (markings, cht) = markings_and_cht_check(&degrees, &kt, &points, &tri);
    if !cht.pass {
        diagnostics.push(Diagnostic::warning(
            "cht_mismatch",
            format!("{} multiplicity checks failed", cht.failures.len()),
        ));
    }
    let (case0, case0_diags) = case0_supports(&tri, &degrees);
    diagnostics.extend(case0_diags);
    let endpoint_points = |c: usize| {
        let (a, b) = degrees.endpoints[c];
        (*fan.point(a), *fan.point(b))
    };
    let case0 = case0
        .into_iter()
        .map(|(chi, curves)| (chi - 1, curves.into_iter().map(endpoint_points).collect()))
        .collect();
    let markings = report::MarkingsView::new(&markings, &degrees, fan);

    let theta0 = lift_theta(&k, &v).row(0).to_vec();
    let report = GaleReport {
        mode: Mode::Toric,
        group: Some(action),
        ns_rank: raw.ns_rank,
        labels,
        reid_basis: Some(basis.columns),
        lt: basis.l.transpose(),
        l: basis.l,
        k,
        kt,
        kt_rows: points
            .iter()
            .map(|&p| RowLabel::Point(*fan.point(p)))
            .collect(),
        theta0,
        trichotomy: tri,
        case0,
        markings: Some(markings),
        cht_check: Some(cht),
        exactness,
        diagnostics,
    };
    Ok(ToricAnalysis {
        supports,
        degrees,
        euler,
        canonical_k,
        report,
    })
}
