//! The cyclic group `1/r(a,b,c) ⊂ SL(3)`, its characters and the lattice
//! points of its junior simplex.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group order must be at least 2, got {0}")]
    OrderTooSmall(i64),
    #[error("action 1/{r}({a},{b},{c}) is not in SL(3): weights sum to {sum}, not 0 mod {r}", sum = .a + .b + .c)]
    NotSL { r: i64, a: i64, b: i64, c: i64 },
    #[error("action 1/{r}({a},{b},{c}) is not faithful: gcd is {gcd}")]
    NotFaithful {
        r: i64,
        a: i64,
        b: i64,
        c: i64,
        gcd: i64,
    },
    #[error("weight {weight} is 0 mod {r}")]
    DegenerateWeight { r: i64, weight: i64 },
    #[error("cannot parse group {0:?}: expected r,a,b,c")]
    Parse(String),
    #[error("dimension vector invalid: {0}")]
    DimensionVector(String),
}

/// `Z/r` acting on `A^3` with weights `(a, b, c)`, validated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CyclicAction {
    r: i64,
    weights: [i64; 3],
}

/// A character of `Z/r`, represented by its residue in `0..r`.
pub type Character = usize;

impl CyclicAction {
    pub fn new(r: i64, a: i64, b: i64, c: i64) -> Result<Self, GroupError> {
        validate_action(r, a, b, c)
    }

    pub fn order(&self) -> i64 {
        self.r
    }

    pub fn characters(&self) -> usize {
        self.r as usize
    }

    pub fn weights(&self) -> [i64; 3] {
        self.weights
    }

    /// Character of the monomial `x^m y^n z^p`. Negative exponents allowed.
    pub fn weight(&self, m: [i64; 3]) -> Character {
        let s: i64 = m.iter().zip(self.weights).map(|(e, w)| e * w).sum();
        s.rem_euclid(self.r) as Character
    }

    /// Age of `g^k` times `r`: `(ka mod r) + (kb mod r) + (kc mod r)`.
    pub fn age_numerator(&self, k: i64) -> i64 {
        self.weights
            .iter()
            .map(|w| (k * w).rem_euclid(self.r))
            .sum()
    }

    /// Every lattice point of the junior simplex, sorted lexicographically by
    /// numerators.
    pub fn junior_points(&self) -> Vec<JuniorPoint> {
        let r = self.r;
        let mut points = vec![
            JuniorPoint::new([r, 0, 0]),
            JuniorPoint::new([0, r, 0]),
            JuniorPoint::new([0, 0, r]),
        ];
        for k in 1..r {
            if self.age_numerator(k) == r {
                let n = self.weights.map(|w| (k * w).rem_euclid(r));
                points.push(JuniorPoint::new(n));
            }
        }
        points.sort();
        points.dedup();
        points
    }

    /// Whether `p` lies in `N = Z^3 + Z (a,b,c)/r` at height one.
    pub fn contains(&self, p: &JuniorPoint) -> bool {
        let n = p.numerators;
        if n.iter().any(|&x| x < 0) || n.iter().sum::<i64>() != self.r {
            return false;
        }
        (0..self.r).any(|k| {
            self.weights
                .iter()
                .zip(n)
                .all(|(w, x)| (k * w - x).rem_euclid(self.r) == 0)
        })
    }
}

impl fmt::Display for CyclicAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.weights;
        write!(f, "1/{}({},{},{})", self.r, a, b, c)
    }
}

/// JSON echo `{"r":19,"weights":[1,3,15]}` used in every report.
impl CyclicAction {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({"r": self.r, "weights": self.weights})
    }
}

pub fn validate_action(r: i64, a: i64, b: i64, c: i64) -> Result<CyclicAction, GroupError> {
    if r < 2 {
        return Err(GroupError::OrderTooSmall(r));
    }
    for w in [a, b, c] {
        if w.rem_euclid(r) == 0 {
            return Err(GroupError::DegenerateWeight { r, weight: w });
        }
    }
    if (a + b + c).rem_euclid(r) != 0 {
        return Err(GroupError::NotSL { r, a, b, c });
    }
    let gcd = r.gcd(&a).gcd(&b).gcd(&c);
    if gcd > 1 {
        return Err(GroupError::NotFaithful { r, a, b, c, gcd });
    }
    Ok(CyclicAction {
        r,
        weights: [a, b, c].map(|w| w.rem_euclid(r)),
    })
}

/// Parses `r,a,b,c`.
pub fn parse_group(spec: &str) -> Result<CyclicAction, GroupError> {
    let parts: Vec<i64> = spec
        .split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| GroupError::Parse(spec.to_string()))?;
    match parts[..] {
        [r, a, b, c] => validate_action(r, a, b, c),
        _ => Err(GroupError::Parse(spec.to_string())),
    }
}

/// The lattice vector `(p1,p2,p3)/r` stored by its integer numerators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JuniorPoint {
    pub numerators: [i64; 3],
}

impl JuniorPoint {
    pub fn new(numerators: [i64; 3]) -> Self {
        JuniorPoint { numerators }
    }

    pub fn is_corner(&self) -> bool {
        self.numerators.iter().filter(|&&x| x == 0).count() == 2
    }

    /// On the boundary of the simplex (corners included).
    pub fn is_boundary(&self) -> bool {
        self.numerators.contains(&0)
    }

    pub fn is_interior(&self) -> bool {
        !self.is_boundary()
    }

    /// `r * <v, m>`
    pub fn pair(&self, m: [i64; 3]) -> i64 {
        self.numerators.iter().zip(m).map(|(p, e)| p * e).sum()
    }
}

impl fmt::Display for JuniorPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.numerators;
        write!(f, "({a},{b},{c})")
    }
}

/// Dimension vector `v`, one entry per vertex; `v_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionVector(Vec<i64>);

impl DimensionVector {
    pub fn ones(vertices: usize) -> Self {
        DimensionVector(vec![1; vertices])
    }

    pub fn new(entries: Vec<i64>) -> Result<Self, GroupError> {
        match entries.first() {
            None => return Err(GroupError::DimensionVector("empty".into())),
            Some(&v0) if v0 != 1 => {
                return Err(GroupError::DimensionVector(format!(
                    "v_0 = {v0}, expected 1"
                )))
            }
            _ => {}
        }
        if let Some(bad) = entries.iter().find(|&&x| x < 1) {
            return Err(GroupError::DimensionVector(format!(
                "entry {bad} is not positive"
            )));
        }
        Ok(DimensionVector(entries))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> i64 {
        self.0[i]
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_examples() {
        assert!(validate_action(19, 1, 3, 15).is_ok());
        assert!(validate_action(3, 1, 1, 1).is_ok());
        assert!(matches!(
            validate_action(5, 1, 1, 1),
            Err(GroupError::NotSL { .. })
        ));
        assert!(matches!(
            validate_action(4, 2, 2, 4),
            Err(GroupError::DegenerateWeight { .. })
        ));
        assert!(matches!(
            validate_action(6, 2, 2, 2),
            Err(GroupError::NotFaithful { gcd: 2, .. })
        ));
    }

    #[test]
    fn weights_of_monomials() {
        let g = validate_action(19, 1, 3, 15).unwrap();
        assert_eq!(g.weight([1, 0, 0]), 1);
        assert_eq!(g.weight([0, 1, 1]), 18);
        assert_eq!(g.weight([0, 0, -1]), 4);
        let p2 = validate_action(3, 1, 1, 1).unwrap();
        assert_eq!(p2.weight([2, 0, 0]), 2);
    }

    #[test]
    fn junior_points_of_small_actions() {
        let p2 = validate_action(3, 1, 1, 1).unwrap();
        let pts = p2.junior_points();
        assert_eq!(pts.len(), 4);
        let interior: Vec<_> = pts.iter().filter(|p| p.is_interior()).collect();
        assert_eq!(interior, vec![&JuniorPoint::new([1, 1, 1])]);

        let g = validate_action(6, 1, 1, 4).unwrap();
        let pts = g.junior_points();
        let interior: Vec<[i64; 3]> = pts
            .iter()
            .filter(|p| p.is_interior())
            .map(|p| p.numerators)
            .collect();
        assert_eq!(interior, vec![[1, 1, 4], [2, 2, 2]]);
        let boundary: Vec<[i64; 3]> = pts
            .iter()
            .filter(|p| p.is_boundary() && !p.is_corner())
            .map(|p| p.numerators)
            .collect();
        assert_eq!(boundary, vec![[3, 3, 0]]);
    }

    #[test]
    fn junior_points_1315() {
        let g = validate_action(19, 1, 3, 15).unwrap();
        let pts = g.junior_points();
        assert_eq!(pts.iter().filter(|p| p.is_interior()).count(), 9);
        assert_eq!(
            pts.iter()
                .filter(|p| p.is_boundary() && !p.is_corner())
                .count(),
            0
        );
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn parse_group_spec() {
        let g = parse_group("19,1,3,15").unwrap();
        assert_eq!(g.to_json(), serde_json::json!({"r":19,"weights":[1,3,15]}));
        assert!(matches!(parse_group("19,1,3"), Err(GroupError::Parse(_))));
        assert!(matches!(parse_group("a,b,c,d"), Err(GroupError::Parse(_))));
    }

    #[test]
    fn dimension_vectors() {
        assert!(DimensionVector::new(vec![1, 2, 1]).is_ok());
        assert!(DimensionVector::new(vec![2, 1]).is_err());
        assert!(DimensionVector::new(vec![]).is_err());
        assert_eq!(DimensionVector::ones(4).entries(), &[1, 1, 1, 1]);
    }
}
