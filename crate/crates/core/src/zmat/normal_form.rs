use super::{IntMatrix, IntScalar};

/// Row-style Hermite normal form `H = U * M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hermite<T> {
    pub h: IntMatrix<T>,
    pub u: IntMatrix<T>,
    /// Pivot column of each nonzero row of `h`.
    pub pivots: Vec<usize>,
}

impl<T: IntScalar> Hermite<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The nonzero rows of `h`.
    pub fn basis(&self) -> IntMatrix<T> {
        let idx: Vec<usize> = (0..self.rank()).collect();
        self.h.select_rows(&idx)
    }
}

/// Smith decomposition `U * M * V = D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition<T> {
    pub u: IntMatrix<T>,
    pub d: IntMatrix<T>,
    pub v: IntMatrix<T>,
}

impl<T: IntScalar> SmithDecomposition<T> {
    /// Nonzero diagonal entries of `D`, in order. Each divides the next.
    pub fn invariant_factors(&self) -> Vec<T> {
        let n = self.d.rows().min(self.d.cols());
        (0..n)
            .map(|i| self.d.get(i, i).clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// True when every invariant factor is 1.
    pub fn has_unit_factors(&self) -> bool {
        self.invariant_factors().iter().all(|x| x.is_one())
    }
}

fn smallest_nonzero_in_column<T: IntScalar>(
    m: &IntMatrix<T>,
    col: usize,
    from_row: usize,
) -> Option<usize> {
    (from_row..m.rows())
        .filter(|&i| !m.get(i, col).is_zero())
        .min_by(|&a, &b| m.get(a, col).abs().cmp(&m.get(b, col).abs()))
}

/// Computes the row Hermite normal form: `H` is in row echelon form with
/// positive pivots and every entry above a pivot reduced into `[0, pivot)`.
/// Zero rows are collected at the bottom.
pub fn hermite_normal_form<T: IntScalar>(m: &IntMatrix<T>) -> Hermite<T> {
    let rows = m.rows();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut pivots = Vec::new();
    let mut p = 0;

    for c in 0..m.cols() {
        if p == rows {
            break;
        }
        let mut found = false;
        while let Some(best) = smallest_nonzero_in_column(&h, c, p) {
            found = true;
            h.swap_rows(p, best);
            u.swap_rows(p, best);
            let mut clean = true;
            for i in p + 1..rows {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = -h.get(i, c).div_floor(h.get(p, c));
                h.add_row_multiple(i, p, &q);
                u.add_row_multiple(i, p, &q);
                if !h.get(i, c).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if !found {
            continue;
        }
        if h.get(p, c).is_negative() {
            h.negate_row(p);
            u.negate_row(p);
        }
        for i in 0..p {
            let q = -h.get(i, c).div_floor(h.get(p, c));
            h.add_row_multiple(i, p, &q);
            u.add_row_multiple(i, p, &q);
        }
        pivots.push(c);
        p += 1;
    }
    Hermite { h, u, pivots }
}

/// Smallest-absolute-value pivot in the trailing block `[t.., t..]`.
fn smallest_nonzero_in_block<T: IntScalar>(m: &IntMatrix<T>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.rows() {
        for j in t..m.cols() {
            let x = m.get(i, j);
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if m.get(bi, bj).abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Computes the Smith normal form `U * M * V = D` with a nonnegative
/// diagonal satisfying the divisibility chain.
pub fn smith_normal_form<T: IntScalar>(m: &IntMatrix<T>) -> SmithDecomposition<T> {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = smallest_nonzero_in_block(&a, t) else {
                return SmithDecomposition { u, d: a, v };
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = -a.get(i, t).div_floor(a.get(t, t));
                a.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= a.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = -a.get(t, j).div_floor(a.get(t, t));
                a.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= a.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            let pivot = a.get(t, t).clone();
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a.get(i, j).mod_floor(&pivot).is_zero()));
            match offender {
                Some(i) => {
                    let one = T::one();
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithDecomposition { u, d: a, v }
}
