//! Compact exceptional surfaces `E_ρ` and Riemann–Roch on them.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bundles::DegreeMatrix;
use crate::fan::{relation_coefficient, CrepantFan, FanError};
use crate::group::CyclicAction;
use crate::zmat::{hermite_normal_form, solve_integral, solve_rational, IntMatrix, IntScalar};
use crate::ZMatrix;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("curve degrees {degrees:?} are not those of any divisor class")]
    InconsistentDegrees { degrees: Vec<String> },
    #[error("Euler characteristic {value} is not an integer")]
    NonIntegralChi { value: String },
    #[error("a compact surface needs at least 3 boundary curves, got {0}")]
    TooFewCurves(usize),
}

/// A smooth projective toric surface described by its cycle of boundary
/// curves and their self-intersections.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToricSurface {
    pub self_intersections: Vec<i64>,
}

impl ToricSurface {
    pub fn new(self_intersections: Vec<i64>) -> Result<Self, SurfaceError> {
        if self_intersections.len() < 3 {
            return Err(SurfaceError::TooFewCurves(self_intersections.len()));
        }
        Ok(ToricSurface { self_intersections })
    }

    pub fn curves(&self) -> usize {
        self.self_intersections.len()
    }

    /// `C_j^2 = s_j`, `C_j C_{j±1} = 1` cyclically, zero otherwise.
    pub fn intersection_matrix<T: IntScalar>(&self) -> IntMatrix<T> {
        let k = self.curves();
        IntMatrix::from_fn(k, k, |i, j| {
            if i == j {
                T::from_i64(self.self_intersections[i]).expect("fits")
            } else if (i + 1) % k == j || (j + 1) % k == i {
                T::one()
            } else {
                T::zero()
            }
        })
    }
}

/// `E_ρ` together with where its boundary curves live in the fan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExceptionalSurface {
    pub center: usize,
    /// Star of the center, counterclockwise.
    pub neighbours: Vec<usize>,
    /// Wall index of `(center, neighbours[j])`.
    pub walls: Vec<usize>,
    pub surface: ToricSurface,
}

/// Builds `E_ρ`; `s_j` is minus the coefficient of `v_j` in the relation of
/// the wall `(ρ, v_j)`, whose opposite vertices are `v_{j-1}, v_{j+1}`.
pub fn surface(fan: &CrepantFan, rho: usize) -> Result<ExceptionalSurface, SurfaceError> {
    if !fan.point(rho).is_interior() {
        return Err(FanError::NotInterior(rho).into());
    }
    let star = fan
        .stars()
        .star(rho)
        .ok_or(FanError::OpenStar { point: rho })?;
    let mut walls = Vec::with_capacity(star.cycle.len());
    let mut s = Vec::with_capacity(star.cycle.len());
    for &v in &star.cycle {
        let w = fan
            .wall_index(rho, v)
            .ok_or(FanError::OpenStar { point: rho })?;
        walls.push(w);
        s.push(-relation_coefficient(&fan.walls()[w], v));
    }
    Ok(ExceptionalSurface {
        center: rho,
        neighbours: star.cycle.clone(),
        walls,
        surface: ToricSurface::new(s)?,
    })
}

/// `χ(E, L)` for the class `L` with curve degrees `d`, by Riemann–Roch:
/// `1 + (L² - L·K)/2`, where `L² = λ·d` for any rational `λ` with
/// `(C·C) λ = d` and `-L·K = Σ d_j`.
pub fn euler_char<T: IntScalar>(surface: &ToricSurface, d: &[T]) -> Result<T, SurfaceError> {
    assert_eq!(d.len(), surface.curves(), "one degree per boundary curve");
    let to_big = |x: &T| BigInt::from(x.to_i128().expect("degree fits i128"));
    let d: Vec<BigInt> = d.iter().map(to_big).collect();
    let m: ZMatrix = surface.intersection_matrix();
    let lambda = solve_rational(&m, &d).ok_or_else(|| SurfaceError::InconsistentDegrees {
        degrees: d.iter().map(|x| x.to_string()).collect(),
    })?;
    let square = lambda
        .iter()
        .zip(&d)
        .fold(Ratio::<BigInt>::zero(), |acc, (l, x)| acc + l * x);
    let sum: BigInt = d.iter().sum();
    let chi = Ratio::from_integer(BigInt::from(1))
        + (square + Ratio::from_integer(sum)) / Ratio::from_integer(BigInt::from(2));
    if !chi.is_integer() {
        return Err(SurfaceError::NonIntegralChi {
            value: chi.to_string(),
        });
    }
    chi.to_integer()
        .to_i128()
        .and_then(T::from_i128)
        .ok_or_else(|| SurfaceError::NonIntegralChi {
            value: chi.to_string(),
        })
}

/// `X[ρ][χ] = χ(E_ρ, T_χ|E_ρ)` for interior points `ρ` (canonical order)
/// and all characters `χ = 0..r-1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerTable {
    pub points: Vec<usize>,
    pub values: Vec<Vec<i64>>,
}

impl EulerTable {
    pub fn compute(fan: &CrepantFan, degrees: &DegreeMatrix) -> Result<Self, SurfaceError> {
        let points = fan.interior_points();
        let r = fan.action().characters();
        let values = points
            .par_iter()
            .map(|&rho| {
                let e = surface(fan, rho)?;
                let rows: Vec<usize> = e
                    .neighbours
                    .iter()
                    .map(|&v| degrees.row_of(rho, v).expect("star walls are compact"))
                    .collect();
                (0..r)
                    .map(|chi| {
                        let d: Vec<i64> =
                            rows.iter().map(|&row| degrees.degree(row, chi)).collect();
                        euler_char(&e.surface, &d)
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(EulerTable { points, values })
    }

    pub fn to_matrix(&self) -> ZMatrix {
        let cols = self.values.first().map_or(0, |r| r.len());
        IntMatrix::from_fn(self.values.len(), cols, |i, j| {
            BigInt::from(self.values[i][j])
        })
    }

    pub fn to_csv(&self, fan: &CrepantFan) -> String {
        let cols = self.values.first().map_or(0, |r| r.len());
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["point".to_string()];
        header.extend((0..cols).map(|chi| format!("T{chi}")));
        w.write_record(&header).expect("in-memory write");
        for (row, &p) in self.points.iter().enumerate() {
            let mut record = vec![fan.point(p).to_string()];
            record.extend(self.values[row].iter().map(|x| x.to_string()));
            w.write_record(&record).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }
}

/// Basis (rows) of `N = r Z^3 + Z (a,b,c)` in numerator coordinates.
pub fn lattice_basis(action: &CyclicAction) -> ZMatrix {
    let r = action.order();
    let [a, b, c] = action.weights();
    let gens = IntMatrix::from_i64_rows(&[&[r, 0, 0], &[0, r, 0], &[0, 0, r], &[a, b, c]]);
    hermite_normal_form(&gens).basis()
}

/// Recomputes each `s_j` of `E_ρ` in the quotient `N / Z v_ρ`: the images
/// `w_j` of the star satisfy `w_{j-1} + w_{j+1} = k_j w_j`, and `s_j = -k_j`.
/// Returns `None` when some relation fails to hold.
pub fn projected_self_intersections(fan: &CrepantFan, rho: usize) -> Option<Vec<i64>> {
    let basis = lattice_basis(fan.action()).transpose();
    let coords = |i: usize| -> Vec<BigInt> {
        let p: Vec<BigInt> = fan
            .point(i)
            .numerators
            .iter()
            .map(|&x| BigInt::from(x))
            .collect();
        solve_integral(&basis, &p).expect("fan points lie in N")
    };
    // a unimodular U with U v_ρ = e_1 completes v_ρ to a basis
    let v = IntMatrix::from_columns(&[coords(rho)], 3).ok()?;
    let hnf = hermite_normal_form(&v);
    if !hnf.h.get(0, 0).to_i64().is_some_and(|x| x == 1) {
        return None;
    }
    let project = |i: usize| -> [BigInt; 2] {
        let y = hnf.u.mul_vec(&coords(i));
        [y[1].clone(), y[2].clone()]
    };
    let star = &fan.stars().star(rho)?.cycle;
    let w: Vec<[BigInt; 2]> = star.iter().map(|&i| project(i)).collect();
    let k = w.len();
    (0..k)
        .map(|j| {
            let prev = &w[(j + k - 1) % k];
            let next = &w[(j + 1) % k];
            let sum = [&prev[0] + &next[0], &prev[1] + &next[1]];
            let cur = &w[j];
            // w_j is primitive, so one coordinate is nonzero
            let idx = if cur[0].is_zero() { 1 } else { 0 };
            let kj = &sum[idx] / &cur[idx];
            let ok = (0..2).all(|t| sum[t] == &kj * &cur[t]);
            ok.then(|| -kj.to_i64().expect("small"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundles::SupportTable;
    use crate::fan::FanFile;

    fn p2() -> CrepantFan {
        CrepantFan::from_file(&FanFile {
            r: 3,
            weights: [1, 1, 1],
            points: vec![[3, 0, 0], [0, 3, 0], [0, 0, 3], [1, 1, 1]],
            triangles: vec![[0, 1, 3], [1, 2, 3], [0, 2, 3]],
        })
        .unwrap()
    }

    #[test]
    fn p2_values() {
        let s = ToricSurface::new(vec![1, 1, 1]).unwrap();
        assert_eq!(euler_char(&s, &[1i64, 1, 1]).unwrap(), 3);
        assert_eq!(euler_char(&s, &[2i64, 2, 2]).unwrap(), 6);
        assert_eq!(euler_char(&s, &[0i64, 0, 0]).unwrap(), 1);
        assert!(matches!(
            euler_char(&s, &[1i64, 0, 0]),
            Err(SurfaceError::InconsistentDegrees { .. })
        ));
        // not the cycle of any real surface, so RR may leave Z
        let fake = ToricSurface::new(vec![2, 2, 2]).unwrap();
        assert!(matches!(
            euler_char(&fake, &[1i64, 0, 0]),
            Err(SurfaceError::NonIntegralChi { .. })
        ));
    }

    #[test]
    fn hirzebruch_surface() {
        // F_1: self-intersections 0, -1, 0, 1 around the cycle
        let s = ToricSurface::new(vec![0, -1, 0, 1]).unwrap();
        assert_eq!(euler_char(&s, &[0i64, 0, 0, 0]).unwrap(), 1);
        // fibre class F: degree 1 on the two sections, 0 on the fibres
        assert_eq!(euler_char(&s, &[0i64, 1, 0, 1]).unwrap(), 2);
        // inconsistent degrees are caught
        assert!(matches!(
            euler_char(
                &ToricSurface::new(vec![0, 0, 0, 0]).unwrap(),
                &[1i64, 0, 0, 0]
            ),
            Err(SurfaceError::InconsistentDegrees { .. })
        ));
    }

    #[test]
    fn p2_fan_surface_and_table() {
        let fan = p2();
        let e = surface(&fan, 3).unwrap();
        assert_eq!(e.surface.self_intersections, vec![1, 1, 1]);
        assert_eq!(e.neighbours, vec![0, 1, 2]);
        assert_eq!(
            projected_self_intersections(&fan, 3).unwrap(),
            vec![1, 1, 1]
        );
        let table = SupportTable::compute(&fan).unwrap();
        let deg = DegreeMatrix::compute(&fan, &table).unwrap();
        let x = EulerTable::compute(&fan, &deg).unwrap();
        assert_eq!(x.values, vec![vec![1, 3, 6]]);
        assert!(matches!(
            surface(&fan, 0),
            Err(SurfaceError::Fan(FanError::NotInterior(0)))
        ));
    }

    #[test]
    fn lattice_basis_index() {
        let g = CyclicAction::new(19, 1, 3, 15).unwrap();
        let b = lattice_basis(&g);
        assert_eq!(b.determinant().unwrap(), BigInt::from(19 * 19));
    }
}
