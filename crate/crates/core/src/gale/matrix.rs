//! The linear-algebra half of the recipe on a user-supplied `L`.

use super::{
    lift_theta, trichotomy, trichotomy_diagnostics, Diagnostic, GaleError, GaleReport, Mode,
    RowLabel,
};
use crate::group::DimensionVector;
use crate::zmat::{
    hermite_normal_form, kernel_basis, same_column_lattice, smith_normal_form, verify_short_exact,
};
use crate::ZMatrix;

/// Runs the reduced pipeline on `l` (NS rank x nonzero vertices).
///
/// `v` has one entry per vertex including vertex 0 (default all ones);
/// `labels` names the columns (default `1..n`). A supplied `k_user`
/// (vertices x relations) must be a basis of `ker L`; it is then kept as is,
/// so its columns become the rows of `K^t` in the given order.
pub fn matrix_mode(
    l: &ZMatrix,
    v: Option<DimensionVector>,
    labels: Option<Vec<String>>,
    k_user: Option<&ZMatrix>,
) -> Result<GaleReport, GaleError> {
    let n = l.cols();
    let v = v.unwrap_or_else(|| DimensionVector::ones(n + 1));
    if v.len() != n + 1 {
        return Err(GaleError::Input(format!(
            "dimension vector has {} entries, expected {} (vertex 0 plus {n} columns)",
            v.len(),
            n + 1
        )));
    }
    let labels = labels.unwrap_or_else(|| (1..=n).map(|i| i.to_string()).collect());
    if labels.len() != n {
        return Err(GaleError::Input(format!(
            "{} labels for {n} columns",
            labels.len()
        )));
    }

    let snf = smith_normal_form(l);
    let factors = snf.invariant_factors();
    if factors.len() != l.rows() || !snf.has_unit_factors() {
        return Err(GaleError::NotSurjective {
            factors: factors.iter().map(|d| d.to_string()).collect(),
            rows: l.rows(),
        });
    }
    let kernel = kernel_basis(l);
    let mut diagnostics = Vec::new();

    let k = match k_user {
        Some(k) => {
            if k.rows() != n {
                return Err(GaleError::NotAKernelBasis(format!(
                    "K has {} rows, L has {n} columns",
                    k.rows()
                )));
            }
            if !l.checked_mul(k)?.is_zero() {
                return Err(GaleError::NotAKernelBasis("L K is not zero".into()));
            }
            if hermite_normal_form(&k.transpose()).rank() != k.cols()
                || !same_column_lattice(k, &kernel)
            {
                return Err(GaleError::NotAKernelBasis(format!(
                    "columns span a different lattice than the rank-{} kernel",
                    kernel.cols()
                )));
            }
            k.clone()
        }
        None => {
            if kernel.cols() > 0 {
                diagnostics.push(Diagnostic::info(
                    "non_canonical_rows",
                    "no K supplied: rows of K^t are in Hermite order, not identified with divisors",
                ));
            }
            kernel
        }
    };
    if k.cols() == 0 {
        diagnostics.push(Diagnostic::info(
            "kernel_trivial",
            "ker L = 0, so K and K^t are empty",
        ));
    }

    let kt = k.transpose();
    let tri = trichotomy(&kt);
    diagnostics.extend(trichotomy_diagnostics(&tri, &labels));
    let exactness = verify_short_exact(&k, l)?;
    let theta0 = lift_theta(&k, &v).row(0).to_vec();

    Ok(GaleReport {
        mode: Mode::Matrix,
        group: None,
        ns_rank: l.rows(),
        labels,
        reid_basis: None,
        l: l.clone(),
        lt: l.transpose(),
        k,
        kt_rows: (0..kt.rows()).map(RowLabel::Relation).collect(),
        kt,
        theta0,
        trichotomy: tri,
        case0: Vec::new(),
        markings: None,
        cht_check: None,
        exactness,
        diagnostics,
    })
}
