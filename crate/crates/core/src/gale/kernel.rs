use num_bigint::BigInt;
use num_traits::Zero;

use super::GaleError;
use crate::group::DimensionVector;
use crate::zmat::{hermite_normal_form, inverse_unimodular, kernel_basis};
use crate::ZMatrix;

/// NS as the column lattice of the degree map, and the saturated kernel of
/// that map on `Z^{Q_0 \ 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawKernel {
    pub ns_rank: usize,
    /// Curves x characters `1..r-1`.
    pub degree_map: ZMatrix,
    /// Characters `1..r-1` x kernel rank, canonical column form.
    pub kernel: ZMatrix,
}

/// Computes the NS rank and raw kernel. The kernel rows of `K^t` must
/// biject with the compact exceptional divisors, so the kernel rank has to
/// equal `divisors`.
pub fn ns_and_raw_kernel(degree_map: &ZMatrix, divisors: usize) -> Result<RawKernel, GaleError> {
    let ns_rank = hermite_normal_form(degree_map).rank();
    let kernel = kernel_basis(degree_map);
    if kernel.cols() != divisors {
        return Err(GaleError::RankMismatch {
            ns_rank,
            kernel_rank: kernel.cols(),
            divisors,
        });
    }
    Ok(RawKernel {
        ns_rank,
        degree_map: degree_map.clone(),
        kernel,
    })
}

/// Lifts kernel columns on characters `1..n` to full `θ` vectors with
/// `θ_0 = -Σ v_i θ_i` (so `Σ v_i θ_i = 0`). Row 0 of the result is `θ_0`.
pub fn lift_theta(kernel: &ZMatrix, v: &DimensionVector) -> ZMatrix {
    assert_eq!(v.len(), kernel.rows() + 1, "one dimension per vertex");
    ZMatrix::from_fn(kernel.rows() + 1, kernel.cols(), |i, j| {
        if i == 0 {
            (0..kernel.rows()).fold(BigInt::zero(), |acc, t| {
                acc - BigInt::from(v.get(t + 1)) * kernel.get(t, j)
            })
        } else {
            kernel.get(i - 1, j).clone()
        }
    })
}

/// Pairing matrix `P[ρ][j] = Σ_i θ_j[i] X[ρ][i]` of lifted kernel columns
/// against the Euler table.
pub fn pairing_matrix(kernel: &ZMatrix, euler: &ZMatrix, v: &DimensionVector) -> ZMatrix {
    let theta = lift_theta(kernel, v);
    euler
        .checked_mul(&theta)
        .expect("Euler table has one column per character")
}

/// Rebases the kernel so that it is dual to the classes `[O_{E_ρ}]` under
/// the Euler pairing: column `ρ` of the result pairs to 1 with `E_ρ` and to
/// 0 with the others. `euler` is interior points x characters `0..r-1`.
pub fn canonical_kernel(
    kernel: &ZMatrix,
    euler: &ZMatrix,
    v: &DimensionVector,
) -> Result<ZMatrix, GaleError> {
    let p = pairing_matrix(kernel, euler, v);
    let inverse = inverse_unimodular(&p).ok_or_else(|| GaleError::NotUnimodular {
        det: if p.rows() == p.cols() {
            p.determinant().map(|d| d.to_string()).unwrap_or_default()
        } else {
            format!("non-square {}x{}", p.rows(), p.cols())
        },
    })?;
    Ok(kernel.checked_mul(&inverse).expect("shapes agree"))
}
