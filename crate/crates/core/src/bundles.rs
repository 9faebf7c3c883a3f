//! Tautological line bundles as toric support data.
//!
//! For a character `χ`, `ψ_χ(v) = min ⟨v, m⟩` over monomials `m ≥ 0` of
//! weight `χ`, and `T_χ = O(-Σ ψ_χ(v_ρ) D_ρ)`. All values are stored as
//! numerators `n_χ(ρ) = r ψ_χ(v_ρ)`, which are integers.

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::fan::{relation_coefficient, CrepantFan};
use crate::group::{Character, CyclicAction};
use crate::zmat::IntMatrix;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum BundleError {
    #[error("T_{character} is not locally free on triangle {triangle}: no simultaneous minimizer")]
    NotLocallyFree {
        character: Character,
        triangle: usize,
    },
    #[error("support of T_{character} disagrees between cones at point {point}")]
    InconsistentSupport { character: Character, point: usize },
    #[error("degree of T_{character} on wall {wall:?} is not an integer")]
    NonIntegralDegree {
        character: Character,
        wall: (usize, usize),
    },
}

/// Every monomial of the box `[0, r)^3`, bucketed by weight.
#[derive(Clone, Debug)]
pub struct WeightedMonomials {
    buckets: Vec<Vec<[i64; 3]>>,
}

impl WeightedMonomials {
    pub fn new(action: &CyclicAction) -> Self {
        let r = action.order();
        let mut buckets = vec![Vec::new(); action.characters()];
        for x in 0..r {
            for y in 0..r {
                for z in 0..r {
                    let m = [x, y, z];
                    buckets[action.weight(m)].push(m);
                }
            }
        }
        WeightedMonomials { buckets }
    }

    pub fn of_weight(&self, chi: Character) -> &[[i64; 3]] {
        &self.buckets[chi]
    }
}

/// Minimum of `⟨v, m⟩` over the weight-`χ` box monomials, as a numerator.
/// Reducing any exponent by `r` keeps the weight and never raises the
/// pairing, so the box minimum is the global one.
pub fn support_numerator(monomials: &WeightedMonomials, chi: Character, v: [i64; 3]) -> i64 {
    monomials
        .of_weight(chi)
        .iter()
        .map(|&m| pair(v, m))
        .min()
        .expect("every character has a box monomial")
}

fn pair(v: [i64; 3], m: [i64; 3]) -> i64 {
    v[0] * m[0] + v[1] * m[1] + v[2] * m[2]
}

/// The generator of `T_χ` on the chart of triangle `sigma`: the weight-`χ`
/// monomial whose three pairings are simultaneously minimal.
pub fn local_generator(
    fan: &CrepantFan,
    monomials: &WeightedMonomials,
    chi: Character,
    sigma: usize,
) -> Result<[i64; 3], BundleError> {
    let rays = fan.triangles()[sigma].map(|i| fan.point(i).numerators);
    let minima = rays.map(|v| support_numerator(monomials, chi, v));
    let total: [i64; 3] = std::array::from_fn(|k| rays[0][k] + rays[1][k] + rays[2][k]);
    // the argmin of the summed pairing is the only possible candidate
    let best = monomials
        .of_weight(chi)
        .iter()
        .min_by_key(|&&m| (pair(total, m), m))
        .copied()
        .expect("every character has a box monomial");
    if (0..3).all(|k| pair(rays[k], best) == minima[k]) {
        Ok(best)
    } else {
        Err(BundleError::NotLocallyFree {
            character: chi,
            triangle: sigma,
        })
    }
}

/// The curve through rays `p`, `q` is cut out by `M1 = M2` where `M1/M2` is
/// the primitive invariant Laurent monomial orthogonal to both; this is the
/// common character of `M1` and `M2`.
pub fn ratio_character(action: &CyclicAction, p: [i64; 3], q: [i64; 3]) -> Character {
    let cross = [
        p[1] * q[2] - p[2] * q[1],
        p[2] * q[0] - p[0] * q[2],
        p[0] * q[1] - p[1] * q[0],
    ];
    let g = cross.iter().fold(0, |g, &x| g.gcd(&x));
    let u = if g == 0 { cross } else { cross.map(|x| x / g) };
    // smallest multiple of u that is invariant
    let k = (1..=action.order())
        .find(|&k| action.weight(u.map(|x| k * x)) == 0)
        .unwrap_or(1);
    action.weight(u.map(|x| (k * x).max(0)))
}

/// Per-ray numerators of `T_χ`, read off the local generators and checked
/// for cone independence.
pub fn support_values(
    fan: &CrepantFan,
    chi: Character,
    generators: &[[i64; 3]],
) -> Result<Vec<i64>, BundleError> {
    let mut values: Vec<Option<i64>> = vec![None; fan.points().len()];
    for (t, tri) in fan.triangles().iter().enumerate() {
        for &i in tri {
            let n = fan.point(i).pair(generators[t]);
            match values[i] {
                Some(old) if old != n => {
                    return Err(BundleError::InconsistentSupport {
                        character: chi,
                        point: i,
                    })
                }
                _ => values[i] = Some(n),
            }
        }
    }
    Ok(values
        .into_iter()
        .map(|v| v.expect("validated fans use every point"))
        .collect())
}

/// Support data of every character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportTable {
    pub r: i64,
    /// `generators[χ][σ]`
    pub generators: Vec<Vec<[i64; 3]>>,
    /// `numerators[χ][ρ] = r ψ_χ(v_ρ)`
    pub numerators: Vec<Vec<i64>>,
}

impl SupportTable {
    /// Computes all characters in parallel; the result is independent of
    /// the thread count.
    pub fn compute(fan: &CrepantFan) -> Result<Self, BundleError> {
        let monomials = WeightedMonomials::new(fan.action());
        let per_char: Vec<(Vec<[i64; 3]>, Vec<i64>)> = (0..fan.action().characters())
            .into_par_iter()
            .map(|chi| {
                let generators = (0..fan.triangles().len())
                    .map(|t| local_generator(fan, &monomials, chi, t))
                    .collect::<Result<Vec<_>, _>>()?;
                let values = support_values(fan, chi, &generators)?;
                Ok((generators, values))
            })
            .collect::<Result<_, BundleError>>()?;
        let (generators, numerators) = per_char.into_iter().unzip();
        Ok(SupportTable {
            r: fan.action().order(),
            generators,
            numerators,
        })
    }

    pub fn numerator(&self, chi: Character, point: usize) -> i64 {
        self.numerators[chi][point]
    }
}

/// `deg(T_χ | C)` for every compact curve `C` and every `χ ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeMatrix {
    /// Wall index (into `fan.walls()`) of each row.
    pub walls: Vec<usize>,
    /// Endpoints of each row's wall, for reports.
    pub endpoints: Vec<(usize, usize)>,
    /// `entries[row][χ - 1]`
    pub entries: Vec<Vec<i64>>,
    /// Character of the ratio monomials cutting out each row's curve.
    pub ratio: Vec<Character>,
}

impl DegreeMatrix {
    pub fn compute(fan: &CrepantFan, supports: &SupportTable) -> Result<Self, BundleError> {
        let r = fan.action().order();
        let walls = fan.compact_walls();
        let mut endpoints = Vec::with_capacity(walls.len());
        let mut entries = Vec::with_capacity(walls.len());
        let mut ratio = Vec::with_capacity(walls.len());
        for &w in &walls {
            let wall = &fan.walls()[w];
            let (a, b) = wall.endpoints;
            let (c, d) = (wall.opposite[0], wall.opposite[1]);
            let alpha = relation_coefficient(wall, a);
            let beta = relation_coefficient(wall, b);
            let row = (1..fan.action().characters())
                .map(|chi| {
                    let n = |i| supports.numerator(chi, i);
                    let num = alpha * n(a) + beta * n(b) - n(c) - n(d);
                    if num % r == 0 {
                        Ok(num / r)
                    } else {
                        Err(BundleError::NonIntegralDegree {
                            character: chi,
                            wall: (a, b),
                        })
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            endpoints.push((a, b));
            entries.push(row);
            ratio.push(ratio_character(
                fan.action(),
                fan.point(a).numerators,
                fan.point(b).numerators,
            ));
        }
        Ok(DegreeMatrix {
            walls,
            endpoints,
            entries,
            ratio,
        })
    }

    /// Whether `χ` marks the curve: it is the ratio character and
    /// `T_χ` has degree 1 there.
    pub fn marks(&self, curve: usize, chi: Character) -> bool {
        chi != 0 && self.ratio[curve] == chi && self.degree(curve, chi) == 1
    }

    pub fn curves(&self) -> usize {
        self.entries.len()
    }

    /// Number of characters `χ ≠ 0`, i.e. columns.
    pub fn characters(&self) -> usize {
        self.entries.first().map_or(0, |r| r.len())
    }

    pub fn degree(&self, curve: usize, chi: Character) -> i64 {
        if chi == 0 {
            0
        } else {
            self.entries[curve][chi - 1]
        }
    }

    /// Row of the compact wall with the given endpoints.
    pub fn row_of(&self, a: usize, b: usize) -> Option<usize> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.endpoints.iter().position(|&e| e == key)
    }

    pub fn to_matrix<T: crate::IntScalar>(&self) -> IntMatrix<T> {
        IntMatrix::from_fn(self.curves(), self.characters(), |i, j| {
            T::from_i64(self.entries[i][j]).expect("degrees fit")
        })
    }

    /// `(χ, row)` pairs with a negative degree; global generation predicts
    /// there are none.
    pub fn negative_entries(&self) -> Vec<(Character, usize)> {
        self.scan(|d| d < 0)
    }

    /// `(χ, row)` pairs with degree above 1.
    pub fn entries_above_one(&self) -> Vec<(Character, usize)> {
        self.scan(|d| d > 1)
    }

    fn scan(&self, pred: impl Fn(i64) -> bool) -> Vec<(Character, usize)> {
        let mut out = Vec::new();
        for (row, line) in self.entries.iter().enumerate() {
            for (j, &d) in line.iter().enumerate() {
                if pred(d) {
                    out.push((j + 1, row));
                }
            }
        }
        out
    }

    /// CSV with a header; each row is prefixed by its wall endpoints.
    pub fn to_csv(&self, fan: &CrepantFan) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["v1".to_string(), "v2".to_string()];
        header.extend((1..=self.characters()).map(|chi| format!("T{chi}")));
        w.write_record(&header).expect("in-memory write");
        for (row, &(a, b)) in self.endpoints.iter().enumerate() {
            let mut record = vec![fan.point(a).to_string(), fan.point(b).to_string()];
            record.extend(self.entries[row].iter().map(|d| d.to_string()));
            w.write_record(&record).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
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

    fn triangle_with(fan: &CrepantFan, pts: [usize; 3]) -> usize {
        let mut want = pts;
        want.sort();
        fan.triangles()
            .iter()
            .position(|t| {
                let mut t = *t;
                t.sort();
                t == want
            })
            .unwrap()
    }

    #[test]
    fn p2_local_generators() {
        let fan = p2();
        let mons = WeightedMonomials::new(fan.action());
        let sigma = triangle_with(&fan, [0, 1, 3]);
        assert_eq!(local_generator(&fan, &mons, 0, sigma).unwrap(), [0, 0, 0]);
        assert_eq!(local_generator(&fan, &mons, 1, sigma).unwrap(), [0, 0, 1]);
        assert_eq!(local_generator(&fan, &mons, 2, sigma).unwrap(), [0, 0, 2]);
    }

    #[test]
    fn p2_support_and_degrees() {
        let fan = p2();
        let table = SupportTable::compute(&fan).unwrap();
        assert_eq!(table.numerators[0], vec![0, 0, 0, 0]);
        assert_eq!(table.numerators[1], vec![0, 0, 0, 1]);
        assert_eq!(table.numerators[2], vec![0, 0, 0, 2]);
        let deg = DegreeMatrix::compute(&fan, &table).unwrap();
        assert_eq!(deg.entries, vec![vec![1, 2]; 3]);
        assert!(deg.negative_entries().is_empty());
        assert_eq!(deg.entries_above_one().len(), 3);
        assert_eq!(deg.degree(0, 0), 0);
    }

    #[test]
    fn csv_dump_has_header_and_rows() {
        let fan = p2();
        let table = SupportTable::compute(&fan).unwrap();
        let deg = DegreeMatrix::compute(&fan, &table).unwrap();
        let csv = deg.to_csv(&fan);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "v1,v2,T1,T2");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].ends_with(",1,2"));
    }

    #[test]
    fn ratio_characters() {
        let g = CyclicAction::new(19, 1, 3, 15).unwrap();
        // y^5 = z along (19,0,0)-(13,1,5), x^7 = z^3 along (0,19,0)-(3,9,7)
        assert_eq!(ratio_character(&g, [19, 0, 0], [13, 1, 5]), 15);
        assert_eq!(ratio_character(&g, [0, 19, 0], [3, 9, 7]), 7);
        assert_eq!(ratio_character(&g, [0, 0, 19], [13, 1, 5]), 1);
        let d = DegreeMatrix::compute(&p2(), &SupportTable::compute(&p2()).unwrap()).unwrap();
        assert_eq!(d.ratio, vec![1, 1, 1]);
        assert!((0..3).all(|c| d.marks(c, 1) && !d.marks(c, 2)));
    }
}
