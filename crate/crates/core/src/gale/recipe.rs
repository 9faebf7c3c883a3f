//! Sign trichotomy, the NS basis of Reid's recipe, markings and the
//! multiplicity cross-check.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{Diagnostic, GaleError};
use crate::bundles::DegreeMatrix;
use crate::zmat::{hermite_normal_form, same_column_lattice, solve_integral_columns};
use crate::ZMatrix;

/// Sign class of one column of `K^t`. Row indices refer to rows of the
/// matrix that was classified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColumnClass {
    /// Nonnegative, not zero: `(row, entry)` of each positive entry.
    Plus(Vec<(usize, BigInt)>),
    Zero,
    /// Nonpositive, not zero: `(row, -entry)` of each negative entry.
    Minus(Vec<(usize, BigInt)>),
    /// Mixed signs: every nonzero `(row, entry)`.
    Incoherent(Vec<(usize, BigInt)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trichotomy {
    pub columns: Vec<ColumnClass>,
}

impl Trichotomy {
    fn select(&self, pred: impl Fn(&ColumnClass) -> bool) -> Vec<usize> {
        (0..self.columns.len())
            .filter(|&j| pred(&self.columns[j]))
            .collect()
    }

    pub fn plus(&self) -> Vec<usize> {
        self.select(|c| matches!(c, ColumnClass::Plus(_)))
    }

    pub fn zero(&self) -> Vec<usize> {
        self.select(|c| matches!(c, ColumnClass::Zero))
    }

    pub fn minus(&self) -> Vec<usize> {
        self.select(|c| matches!(c, ColumnClass::Minus(_)))
    }

    pub fn incoherent(&self) -> Vec<usize> {
        self.select(|c| matches!(c, ColumnClass::Incoherent(_)))
    }

    pub fn is_sign_coherent(&self) -> bool {
        self.incoherent().is_empty()
    }

    pub fn is_plus(&self, j: usize) -> bool {
        matches!(self.columns[j], ColumnClass::Plus(_))
    }

    /// Same classification with rows renumbered by `perm` (new row `k` is
    /// old row `perm[k]`).
    pub fn permute_rows(&self, perm: &[usize]) -> Trichotomy {
        let mut inverse = vec![0; perm.len()];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let remap = |v: &[(usize, BigInt)]| {
            let mut out: Vec<(usize, BigInt)> =
                v.iter().map(|(i, x)| (inverse[*i], x.clone())).collect();
            out.sort();
            out
        };
        let columns = self
            .columns
            .iter()
            .map(|c| match c {
                ColumnClass::Plus(v) => ColumnClass::Plus(remap(v)),
                ColumnClass::Zero => ColumnClass::Zero,
                ColumnClass::Minus(v) => ColumnClass::Minus(remap(v)),
                ColumnClass::Incoherent(v) => ColumnClass::Incoherent(remap(v)),
            })
            .collect();
        Trichotomy { columns }
    }
}

pub fn trichotomy(kt: &ZMatrix) -> Trichotomy {
    let columns = (0..kt.cols())
        .map(|j| {
            let nonzero: Vec<(usize, BigInt)> = (0..kt.rows())
                .filter(|&i| !kt.get(i, j).is_zero())
                .map(|i| (i, kt.get(i, j).clone()))
                .collect();
            let pos = nonzero.iter().any(|(_, x)| x.is_positive());
            let neg = nonzero.iter().any(|(_, x)| x.is_negative());
            match (pos, neg) {
                (false, false) => ColumnClass::Zero,
                (true, false) => ColumnClass::Plus(nonzero),
                (false, true) => {
                    ColumnClass::Minus(nonzero.into_iter().map(|(i, x)| (i, -x)).collect())
                }
                (true, true) => ColumnClass::Incoherent(nonzero),
            }
        })
        .collect();
    Trichotomy { columns }
}

/// Warnings for mixed-sign columns and for `(+)` columns that are not a
/// single `+1`. `labels[j]` names column `j`.
pub fn trichotomy_diagnostics(tri: &Trichotomy, labels: &[String]) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (j, c) in tri.columns.iter().enumerate() {
        match c {
            ColumnClass::Incoherent(entries) => out.push(Diagnostic::warning(
                "sign_incoherent",
                format!(
                    "column {} of K^t has entries of both signs: {}",
                    labels[j],
                    format_entries(entries)
                ),
            )),
            ColumnClass::Plus(entries) if entries.len() != 1 || !entries[0].1.is_one() => {
                out.push(Diagnostic::warning(
                    "non_unit_plus_column",
                    format!(
                        "(+) column {} is not a single entry 1: {}",
                        labels[j],
                        format_entries(entries)
                    ),
                ))
            }
            _ => {}
        }
    }
    out
}

fn format_entries(entries: &[(usize, BigInt)]) -> String {
    let parts: Vec<String> = entries
        .iter()
        .map(|(i, x)| format!("row {i}: {x}"))
        .collect();
    parts.join(", ")
}

/// Rows of `K^t` carrying a positive entry of each `(+)` column.
fn plus_rows(tri: &Trichotomy, rows: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); rows];
    for (j, c) in tri.columns.iter().enumerate() {
        if let ColumnClass::Plus(entries) = c {
            for (i, _) in entries {
                out[*i].push(j);
            }
        }
    }
    out
}

/// NS basis of Reid's recipe, as column indices (character `j + 1`), and
/// every `T_i` expressed in it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReidBasis {
    pub columns: Vec<usize>,
    /// Basis x characters `1..r-1`; basis columns are unit vectors.
    pub l: ZMatrix,
}

/// All columns outside `(+)`, plus the smallest `(+)` column on every row
/// that carries two or more; then checks these degree columns are a
/// Z-basis of the NS lattice and solves for `L`.
pub fn reid_basis(
    tri: &Trichotomy,
    rows: usize,
    degree_map: &ZMatrix,
) -> Result<ReidBasis, GaleError> {
    let mut chosen: BTreeSet<usize> = (0..tri.columns.len())
        .filter(|&j| !tri.is_plus(j))
        .collect();
    for marks in plus_rows(tri, rows) {
        if marks.len() >= 2 {
            chosen.insert(*marks.iter().min().expect("nonempty"));
        }
    }
    let columns: Vec<usize> = chosen.into_iter().collect();
    let not_a_basis = || GaleError::NotABasis {
        characters: columns.iter().map(|j| j + 1).collect(),
    };
    let db = degree_map.select_columns(&columns);
    if hermite_normal_form(&db.transpose()).rank() != columns.len()
        || !same_column_lattice(&db, degree_map)
    {
        return Err(not_a_basis());
    }
    let l = solve_integral_columns(&db, degree_map).ok_or_else(not_a_basis)?;
    Ok(ReidBasis { columns, l })
}

/// Row order of the printed `K^t`: ascending by the smallest `(+)` column
/// marking each row. Returns the permutation and the rows with no mark,
/// which keep their relative order at the end.
pub fn divisor_row_ordering(tri: &Trichotomy, rows: usize) -> (Vec<usize>, Vec<usize>) {
    let marks = plus_rows(tri, rows);
    let mut keyed: Vec<(usize, usize)> = Vec::new();
    let mut unmarked = Vec::new();
    for (i, m) in marks.iter().enumerate() {
        match m.iter().min() {
            Some(&j) => keyed.push((j, i)),
            None => unmarked.push(i),
        }
    }
    keyed.sort();
    let mut perm: Vec<usize> = keyed.into_iter().map(|(_, i)| i).collect();
    perm.extend(&unmarked);
    (perm, unmarked)
}

/// Geometric markings recovered from `K^t` and the degree matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Markings {
    /// For each row of `K^t`, the `(+)` characters marking its point.
    pub points: Vec<Vec<usize>>,
    /// For each character outside `(+)`, the compact curves (degree rows)
    /// of degree exactly 1.
    pub segments: Vec<(usize, Vec<usize>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChtEntry {
    pub character: usize,
    /// Row of `K^t`.
    pub row: usize,
    pub entry: i64,
    /// Marked segments touching the point.
    pub n: usize,
    /// `max(0, n - 1)`; for `(+)` characters the expected entry bound.
    pub expected: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChtCheck {
    pub pass: bool,
    pub checked: usize,
    pub failures: Vec<ChtEntry>,
}

/// Marks segments by their ratio character (when it has degree 1) and checks
/// `|K^t[ρ][i]| = max(0, n(i,ρ) - 1)` for every character outside `(+)`
/// and `K^t[ρ][i] ∈ {0, 1}` for `(+)` characters. `points[k]` is the fan
/// point of row `k` of `kt`.
pub fn markings_and_cht_check(
    degrees: &DegreeMatrix,
    kt: &ZMatrix,
    points: &[usize],
    tri: &Trichotomy,
) -> (Markings, ChtCheck) {
    let marks = plus_rows(tri, kt.rows());
    let point_marks: Vec<Vec<usize>> = marks
        .iter()
        .map(|m| m.iter().map(|j| j + 1).collect())
        .collect();
    let mut segments = Vec::new();
    let mut failures = Vec::new();
    let mut checked = 0;
    for j in 0..kt.cols() {
        let chi = j + 1;
        let entry = |row: usize| kt.get(row, j).to_i64().unwrap_or(i64::MAX);
        if tri.is_plus(j) {
            for row in 0..kt.rows() {
                checked += 1;
                let e = entry(row);
                if e != 0 && e != 1 {
                    failures.push(ChtEntry {
                        character: chi,
                        row,
                        entry: e,
                        n: 0,
                        expected: 1,
                    });
                }
            }
            continue;
        }
        let curves: Vec<usize> = (0..degrees.curves())
            .filter(|&c| degrees.marks(c, chi))
            .collect();
        for (row, &rho) in points.iter().enumerate() {
            checked += 1;
            let n = curves
                .iter()
                .filter(|&&c| {
                    let (a, b) = degrees.endpoints[c];
                    a == rho || b == rho
                })
                .count();
            let expected = n.saturating_sub(1);
            let e = entry(row);
            if e.unsigned_abs() != expected as u64 {
                failures.push(ChtEntry {
                    character: chi,
                    row,
                    entry: e,
                    n,
                    expected,
                });
            }
        }
        segments.push((chi, curves));
    }
    (
        Markings {
            points: point_marks,
            segments,
        },
        ChtCheck {
            pass: failures.is_empty(),
            checked,
            failures,
        },
    )
}

/// Curves marked by each `(0)` character, with a warning when the
/// support is not a single curve or another character is nonzero on it.
pub fn case0_supports(
    tri: &Trichotomy,
    degrees: &DegreeMatrix,
) -> (Vec<(usize, Vec<usize>)>, Vec<Diagnostic>) {
    let mut supports = Vec::new();
    let mut diags = Vec::new();
    for j in tri.zero() {
        let chi = j + 1;
        let curves: Vec<usize> = (0..degrees.curves())
            .filter(|&c| degrees.marks(c, chi))
            .collect();
        if curves.len() != 1 {
            diags.push(Diagnostic::warning(
                "non_unique_case0_support",
                format!(
                    "(0) character {chi} marks {} curves, expected exactly one",
                    curves.len()
                ),
            ));
        }
        for &c in &curves {
            let others: Vec<usize> = (1..=degrees.characters())
                .filter(|&i| i != chi && degrees.degree(c, i) != 0)
                .collect();
            if !others.is_empty() {
                diags.push(Diagnostic::info(
                    "case0_curve_shared",
                    format!(
                        "curve {:?} of (0) character {chi} also has nonzero degree for characters {:?}",
                        degrees.endpoints[c], others
                    ),
                ));
            }
        }
        supports.push((chi, curves));
    }
    (supports, diags)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classifies_columns() {
        let kt = ZMatrix::from_i64_rows(&[&[-2, 1, 0, 1], &[0, 0, 0, -1]]);
        let tri = trichotomy(&kt);
        assert_eq!(tri.minus(), vec![0]);
        assert_eq!(tri.plus(), vec![1]);
        assert_eq!(tri.zero(), vec![2]);
        assert_eq!(tri.incoherent(), vec![3]);
        assert_eq!(
            tri.columns[0],
            ColumnClass::Minus(vec![(0, BigInt::from(2))])
        );
        let labels: Vec<String> = ["1", "2", "3", "4"].map(String::from).to_vec();
        let d = trichotomy_diagnostics(&tri, &labels);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, "sign_incoherent");
    }

    #[test]
    fn p2_basis() {
        let kt = ZMatrix::from_i64_rows(&[&[-2, 1]]);
        let tri = trichotomy(&kt);
        let d = ZMatrix::from_i64_rows(&[&[1, 2], &[1, 2], &[1, 2]]);
        let b = reid_basis(&tri, 1, &d).unwrap();
        assert_eq!(b.columns, vec![0]);
        assert_eq!(b.l, ZMatrix::from_i64_rows(&[&[1, 2]]));
    }

    #[test]
    fn tie_break_takes_smaller_character() {
        // one row carries the +1 of columns 1 and 2
        let kt = ZMatrix::from_i64_rows(&[&[-1, 1, 1]]);
        let tri = trichotomy(&kt);
        let d = ZMatrix::from_i64_rows(&[&[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(reid_basis(&tri, 1, &d).unwrap().columns, vec![0, 1]);
    }

    #[test]
    fn not_a_basis_detected() {
        let kt = ZMatrix::from_i64_rows(&[&[-1, 1]]);
        let tri = trichotomy(&kt);
        // column 0 spans 2Z while NS is Z
        let d = ZMatrix::from_i64_rows(&[&[2, 1]]);
        assert!(matches!(
            reid_basis(&tri, 1, &d),
            Err(GaleError::NotABasis { .. })
        ));
    }

    #[test]
    fn ordering_flags_unmarked_rows() {
        let kt = ZMatrix::from_i64_rows(&[&[0, 0, 1], &[1, 0, 0], &[0, -1, 0]]);
        let tri = trichotomy(&kt);
        let (perm, unmarked) = divisor_row_ordering(&tri, 3);
        assert_eq!(perm, vec![1, 0, 2]);
        assert_eq!(unmarked, vec![2]);
        let single = trichotomy(&ZMatrix::from_i64_rows(&[&[-2, 1]]));
        assert_eq!(divisor_row_ordering(&single, 1), (vec![0], vec![]));
    }

    #[test]
    fn case0_needs_a_unique_curve() {
        let tri = trichotomy(&ZMatrix::from_i64_rows(&[&[0, 1]]));
        let degrees = DegreeMatrix {
            walls: vec![0, 1],
            endpoints: vec![(0, 3), (1, 3)],
            entries: vec![vec![1, 0], vec![1, 0]],
            ratio: vec![1, 1],
        };
        let (supports, diags) = case0_supports(&tri, &degrees);
        assert_eq!(supports, vec![(1, vec![0, 1])]);
        assert!(diags.iter().any(|d| d.code == "non_unique_case0_support"));
    }
}
