use num_rational::Ratio;
use num_traits::Zero;
use serde::Serialize;

use super::{hermite_normal_form, smith_normal_form, IntMatrix, IntScalar, ZmatError};

/// Canonical basis of the lattice spanned by the columns of `a`.
///
/// The basis is returned as columns. With coordinates read bottom-up the
/// basis is in column Hermite form, so every basis vector has a positive
/// trailing pivot and entries below earlier pivots are reduced. Two matrices
/// span the same column lattice iff their canonical bases are equal.
pub fn column_lattice_basis<T: IntScalar>(a: &IntMatrix<T>) -> IntMatrix<T> {
    let reversed = a.reverse_rows().transpose();
    let hnf = hermite_normal_form(&reversed);
    hnf.basis().transpose().reverse_rows()
}

pub fn same_column_lattice<T: IntScalar>(a: &IntMatrix<T>, b: &IntMatrix<T>) -> bool {
    a.rows() == b.rows() && column_lattice_basis(a) == column_lattice_basis(b)
}

pub fn same_row_lattice<T: IntScalar>(a: &IntMatrix<T>, b: &IntMatrix<T>) -> bool {
    same_column_lattice(&a.transpose(), &b.transpose())
}

/// Saturated basis (as columns) of `{x in Z^n : M x = 0}`, in the canonical
/// form of [`column_lattice_basis`]. An `n x 0` matrix when the kernel is
/// trivial.
pub fn kernel_basis<T: IntScalar>(m: &IntMatrix<T>) -> IntMatrix<T> {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let free: Vec<usize> = (rank..m.cols()).collect();
    let raw = snf.v.select_columns(&free);
    column_lattice_basis(&raw)
}

/// Finds an integer `x` with `A x = b`, if one exists.
pub fn solve_integral<T: IntScalar>(a: &IntMatrix<T>, b: &[T]) -> Option<Vec<T>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length must match rows");
    let snf = smith_normal_form(a);
    let ub = snf.u.mul_vec(b);
    let factors = snf.invariant_factors();
    let mut y = vec![T::zero(); a.cols()];
    for (i, value) in ub.iter().enumerate() {
        match factors.get(i) {
            Some(d) => {
                let (q, r) = value.div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            }
            None => {
                if !value.is_zero() {
                    return None;
                }
            }
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// Solves `A X = B` column by column over the integers.
pub fn solve_integral_columns<T: IntScalar>(
    a: &IntMatrix<T>,
    b: &IntMatrix<T>,
) -> Option<IntMatrix<T>> {
    if a.rows() != b.rows() {
        return None;
    }
    let cols = (0..b.cols())
        .map(|j| solve_integral(a, &b.column(j)))
        .collect::<Option<Vec<_>>>()?;
    IntMatrix::from_columns(&cols, a.cols()).ok()
}

fn divide_out_content<T: IntScalar>(row: &mut [T]) {
    let g = row.iter().fold(T::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = x.clone() / g.clone();
        }
    }
}

/// Finds a rational solution of `A x = b` (free variables set to zero).
///
/// Elimination runs fraction-free on the integer augmented matrix; rationals
/// appear only in back substitution. Returns `None` when the system is
/// inconsistent.
pub fn solve_rational<T: IntScalar>(a: &IntMatrix<T>, b: &[T]) -> Option<Vec<Ratio<T>>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length must match rows");
    let (rows, cols) = a.shape();
    let mut aug: Vec<Vec<T>> = (0..rows)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut p = 0;
    for c in 0..cols {
        if p == rows {
            break;
        }
        let Some(pr) = (p..rows).find(|&i| !aug[i][c].is_zero()) else {
            continue;
        };
        aug.swap(p, pr);
        for i in p + 1..rows {
            if aug[i][c].is_zero() {
                continue;
            }
            let lead = aug[p][c].clone();
            let factor = aug[i][c].clone();
            for j in c..=cols {
                aug[i][j] = lead.clone() * aug[i][j].clone() - factor.clone() * aug[p][j].clone();
            }
            divide_out_content(&mut aug[i]);
        }
        pivots.push((p, c));
        p += 1;
    }
    if aug[p..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Ratio::zero(); cols];
    for &(r, c) in pivots.iter().rev() {
        let mut acc = Ratio::from_integer(aug[r][cols].clone());
        for j in c + 1..cols {
            if !aug[r][j].is_zero() {
                acc = acc - Ratio::from_integer(aug[r][j].clone()) * x[j].clone();
            }
        }
        x[c] = acc / Ratio::from_integer(aug[r][c].clone());
    }
    Some(x)
}

/// Inverse of a unimodular square matrix; `None` otherwise.
pub fn inverse_unimodular<T: IntScalar>(p: &IntMatrix<T>) -> Option<IntMatrix<T>> {
    if p.rows() != p.cols() {
        return None;
    }
    let hnf = hermite_normal_form(p);
    hnf.h.is_identity().then_some(hnf.u)
}

/// Itemized check that `0 -> Z^k --K--> Z^n --L--> Z^m -> 0` is exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    /// `L K = 0`
    pub composition_zero: bool,
    /// `K` has full column rank.
    pub kernel_injective: bool,
    /// The columns of `K` span exactly `ker L` (hence a saturated sublattice).
    pub image_is_kernel: bool,
    /// `L` has full row rank and unit invariant factors.
    pub surjective: bool,
    /// `cols(K) + rank(L) = cols(L)`
    pub rank_count: bool,
}

impl ExactnessReport {
    pub fn passed(&self) -> bool {
        self.composition_zero
            && self.kernel_injective
            && self.image_is_kernel
            && self.surjective
            && self.rank_count
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.composition_zero {
            out.push("composition_zero");
        }
        if !self.kernel_injective {
            out.push("kernel_injective");
        }
        if !self.image_is_kernel {
            out.push("image_is_kernel");
        }
        if !self.surjective {
            out.push("surjective");
        }
        if !self.rank_count {
            out.push("rank_count");
        }
        out
    }
}

pub fn verify_short_exact<T: IntScalar>(
    k: &IntMatrix<T>,
    l: &IntMatrix<T>,
) -> Result<ExactnessReport, ZmatError> {
    if k.rows() != l.cols() {
        return Err(ZmatError::DimensionMismatch(format!(
            "K has {} rows but L has {} columns",
            k.rows(),
            l.cols()
        )));
    }
    let composition_zero = l.checked_mul(k)?.is_zero();
    let k_rank = hermite_normal_form(k).rank();
    let snf = smith_normal_form(l);
    let l_rank = snf.rank();
    let kernel = kernel_basis(l);
    Ok(ExactnessReport {
        composition_zero,
        kernel_injective: k_rank == k.cols(),
        image_is_kernel: same_column_lattice(k, &kernel),
        surjective: l_rank == l.rows() && snf.has_unit_factors(),
        rank_count: k.cols() + l_rank == l.cols(),
    })
}

/// Gale dual of a surjective configuration: the transpose of the canonical
/// kernel basis of `L`.
pub fn gale_dual<T: IntScalar>(l: &IntMatrix<T>) -> Result<IntMatrix<T>, ZmatError> {
    let snf = smith_normal_form(l);
    let factors = snf.invariant_factors();
    if factors.len() != l.rows() || factors.iter().any(|d| !d.abs().is_one()) {
        return Err(ZmatError::NotSurjective {
            factors: factors.iter().map(|d| d.to_string()).collect(),
            rows: l.rows(),
        });
    }
    Ok(kernel_basis(l).transpose())
}
