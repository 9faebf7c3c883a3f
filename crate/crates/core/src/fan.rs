//! Crepant triangulations of the junior simplex.
//!
//! A fan is read from JSON, validated (every check is itemized so that
//! `validate-fan` can print them all), and indexed into walls and stars.
//! Points are kept in a canonical order: the corners `e1, e2, e3` first,
//! then every other point in ascending lexicographic order of numerators.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::group::{validate_action, CyclicAction, JuniorPoint};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("I/O error: {0}")]
    Io(String),
    #[error("fan schema error: {0}")]
    Schema(String),
    #[error("fan validation failed [{check}]: {detail}")]
    Validation { check: String, detail: String },
    #[error("wall {wall:?} has no integral relation")]
    NonIntegralRelation { wall: (usize, usize) },
    #[error("star of point {point} does not close up")]
    OpenStar { point: usize },
    #[error("point {0} is not an interior point")]
    NotInterior(usize),
}

/// On-disk fan description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanFile {
    pub r: i64,
    pub weights: [i64; 3],
    pub points: Vec<[i64; 3]>,
    pub triangles: Vec<[usize; 3]>,
}

impl FanFile {
    pub fn parse(text: &str) -> Result<Self, FanError> {
        serde_json::from_str(text).map_err(|e| FanError::Schema(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self, FanError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| FanError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanCheck {
    pub check: &'static str,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

/// Itemized result of validating a [`FanFile`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FanDiagnostics {
    pub valid: bool,
    pub checks: Vec<FanCheck>,
}

impl FanDiagnostics {
    pub fn first_failure(&self) -> Option<&FanCheck> {
        self.checks.iter().find(|c| c.status == CheckStatus::Fail)
    }

    pub fn status(&self, check: &str) -> Option<CheckStatus> {
        self.checks
            .iter()
            .find(|c| c.check == check)
            .map(|c| c.status)
    }
}

/// An edge of the triangulation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Wall {
    /// Point indices, ascending.
    pub endpoints: (usize, usize),
    /// Adjacent triangles (one for boundary walls, two for interior walls).
    pub sides: Vec<usize>,
    /// Vertex opposite the wall in each adjacent triangle.
    pub opposite: Vec<usize>,
    /// `(alpha, beta)` with `v3 + v4 = alpha v1 + beta v2`; interior walls only.
    pub relation: Option<(i64, i64)>,
}

impl Wall {
    /// Interior walls are exactly the proper torus-invariant curves.
    pub fn is_compact(&self) -> bool {
        self.sides.len() == 2
    }

    pub fn touches(&self, point: usize) -> bool {
        self.endpoints.0 == point || self.endpoints.1 == point
    }

    pub fn other_end(&self, point: usize) -> usize {
        if self.endpoints.0 == point {
            self.endpoints.1
        } else {
            self.endpoints.0
        }
    }
}

/// Cyclically ordered neighbours of one interior point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Star {
    pub center: usize,
    pub cycle: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InteriorPointIndex {
    pub stars: Vec<Star>,
}

impl InteriorPointIndex {
    pub fn star(&self, center: usize) -> Option<&Star> {
        self.stars.iter().find(|s| s.center == center)
    }
}

/// A validated crepant triangulation.
#[derive(Clone, Debug)]
pub struct CrepantFan {
    action: CyclicAction,
    points: Vec<JuniorPoint>,
    triangles: Vec<[usize; 3]>,
    walls: Vec<Wall>,
    wall_lookup: HashMap<(usize, usize), usize>,
    stars: InteriorPointIndex,
    file_index: Vec<usize>,
}

pub fn det3(a: [i64; 3], b: [i64; 3], c: [i64; 3]) -> i64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// Solves `target = alpha p1 + beta p2` exactly over the integers.
pub fn solve_pair(p1: [i64; 3], p2: [i64; 3], target: [i64; 3]) -> Option<(i64, i64)> {
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let det = p1[i] * p2[j] - p1[j] * p2[i];
        if det == 0 {
            continue;
        }
        let a_num = target[i] * p2[j] - target[j] * p2[i];
        let b_num = p1[i] * target[j] - p1[j] * target[i];
        if a_num % det != 0 || b_num % det != 0 {
            return None;
        }
        let (alpha, beta) = (a_num / det, b_num / det);
        return (0..3)
            .all(|k| alpha * p1[k] + beta * p2[k] == target[k])
            .then_some((alpha, beta));
    }
    None
}

fn canonical_key(p: &[i64; 3], r: i64) -> (u8, [i64; 3]) {
    match *p {
        [x, 0, 0] if x == r => (0, [0; 3]),
        [0, x, 0] if x == r => (1, [0; 3]),
        [0, 0, x] if x == r => (2, [0; 3]),
        _ => (3, *p),
    }
}

/// Collects the itemized checks; returns the canonical data when every
/// structural check passed.
struct Validator {
    checks: Vec<FanCheck>,
    first_error: Option<FanError>,
}

impl Validator {
    fn new() -> Self {
        Validator {
            checks: vec![],
            first_error: None,
        }
    }

    fn fail_with(&mut self, err: FanError) {
        self.first_error.get_or_insert(err);
    }

    fn record(&mut self, check: &'static str, failures: Vec<String>) -> bool {
        let passed = failures.is_empty();
        let detail = if failures.len() > 3 {
            format!(
                "{}; ... ({} violations)",
                failures[..3].join("; "),
                failures.len()
            )
        } else {
            failures.join("; ")
        };
        self.checks.push(FanCheck {
            check,
            status: if passed {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            detail: detail.clone(),
        });
        if !passed {
            self.fail_with(FanError::Validation {
                check: check.to_string(),
                detail,
            });
        }
        passed
    }

    fn skip(&mut self, names: &[&'static str]) {
        for &check in names {
            self.checks.push(FanCheck {
                check,
                status: CheckStatus::Skipped,
                detail: String::new(),
            });
        }
    }
}

const STRUCTURAL: &[&str] = &[
    "points_on_simplex",
    "distinct_points",
    "corners_present",
    "all_lattice_points",
    "triangle_indices",
];
const GEOMETRIC: &[&str] = &[
    "total_volume",
    "unimodular",
    "wall_sides",
    "opposite_sides",
    "boundary_covered",
    "points_used",
    "wall_relations",
    "stars_closed",
];

fn build(file: &FanFile, v: &mut Validator) -> Option<CrepantFan> {
    let action = match validate_action(file.r, file.weights[0], file.weights[1], file.weights[2]) {
        Ok(a) => {
            v.record("action", vec![]);
            a
        }
        Err(e) => {
            v.record("action", vec![e.to_string()]);
            v.skip(STRUCTURAL);
            v.skip(GEOMETRIC);
            return None;
        }
    };
    let r = action.order();

    let bad_points: Vec<String> = file
        .points
        .iter()
        .enumerate()
        .filter(|(_, p)| !action.contains(&JuniorPoint::new(**p)))
        .map(|(i, p)| format!("point {i} {p:?} is not a junior lattice point of {action}"))
        .collect();
    let mut ok = v.record("points_on_simplex", bad_points);

    let mut seen: BTreeMap<[i64; 3], usize> = BTreeMap::new();
    let mut dups = Vec::new();
    for (i, p) in file.points.iter().enumerate() {
        if let Some(j) = seen.insert(*p, i) {
            dups.push(format!("points {j} and {i} coincide"));
        }
    }
    ok &= v.record("distinct_points", dups);

    let corners = [[r, 0, 0], [0, r, 0], [0, 0, r]];
    let missing: Vec<String> = corners
        .iter()
        .filter(|c| !seen.contains_key(*c))
        .map(|c| format!("corner {c:?} missing"))
        .collect();
    ok &= v.record("corners_present", missing);

    let absent: Vec<String> = action
        .junior_points()
        .iter()
        .filter(|p| !seen.contains_key(&p.numerators))
        .map(|p| format!("lattice point {p} is not a vertex"))
        .collect();
    ok &= v.record("all_lattice_points", absent);

    let n = file.points.len();
    let bad_tris: Vec<String> = file
        .triangles
        .iter()
        .enumerate()
        .filter(|(_, t)| t.iter().any(|&x| x >= n) || t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
        .map(|(i, t)| format!("triangle {i} {t:?} has invalid vertex indices"))
        .collect();
    ok &= v.record("triangle_indices", bad_tris);

    if !ok {
        v.skip(GEOMETRIC);
        return None;
    }

    // canonical order
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| canonical_key(&file.points[i], r));
    let mut to_canonical = vec![0; n];
    for (c, &f) in order.iter().enumerate() {
        to_canonical[f] = c;
    }
    let points: Vec<JuniorPoint> = order
        .iter()
        .map(|&f| JuniorPoint::new(file.points[f]))
        .collect();
    let mut triangles: Vec<[usize; 3]> = file
        .triangles
        .iter()
        .map(|t| {
            let mut c = t.map(|x| to_canonical[x]);
            c.sort_unstable();
            c
        })
        .collect();
    let file_triangle: Vec<usize> = {
        let mut idx: Vec<usize> = (0..triangles.len()).collect();
        idx.sort_by_key(|&i| triangles[i]);
        idx
    };
    triangles.sort_unstable();
    let num = |i: usize| points[i].numerators;

    let count_ok = triangles.len() as i64 == r;
    let mut geometric_ok = v.record(
        "total_volume",
        if count_ok {
            vec![]
        } else {
            vec![format!(
                "{} triangles but the junior simplex has normalized volume {r}",
                triangles.len()
            )]
        },
    );

    let non_unimodular: Vec<String> = triangles
        .iter()
        .enumerate()
        .filter_map(|(i, t)| {
            let d = det3(num(t[0]), num(t[1]), num(t[2]));
            (d.abs() != r * r).then(|| {
                format!(
                    "triangle {} (file index {}) has |det| {} != r^2 = {}",
                    i,
                    file_triangle[i],
                    d.abs(),
                    r * r
                )
            })
        })
        .collect();
    geometric_ok &= v.record("unimodular", non_unimodular);

    // edges
    let mut edges: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for (ti, t) in triangles.iter().enumerate() {
        for (a, b, c) in [(t[0], t[1], t[2]), (t[0], t[2], t[1]), (t[1], t[2], t[0])] {
            edges.entry((a, b)).or_default().push((ti, c));
        }
    }
    let on_common_face = |a: usize, b: usize| (0..3).any(|k| num(a)[k] == 0 && num(b)[k] == 0);
    let mut side_failures = Vec::new();
    let mut orientation_failures = Vec::new();
    for (&(a, b), uses) in &edges {
        let expected = if on_common_face(a, b) { 1 } else { 2 };
        if uses.len() != expected {
            side_failures.push(format!(
                "wall ({a},{b}) bounds {} triangles, expected {expected}",
                uses.len()
            ));
        } else if expected == 2 {
            let s1 = det3(num(a), num(b), num(uses[0].1)).signum();
            let s2 = det3(num(a), num(b), num(uses[1].1)).signum();
            if s1 * s2 >= 0 {
                orientation_failures.push(format!("triangles on wall ({a},{b}) overlap"));
            }
        }
    }
    geometric_ok &= v.record("wall_sides", side_failures);
    geometric_ok &= v.record("opposite_sides", orientation_failures);

    let mut covered = [0i64; 3];
    for &(a, b) in edges.keys() {
        for k in 0..3 {
            if num(a)[k] == 0 && num(b)[k] == 0 {
                let other = (k + 1) % 3;
                covered[k] += (num(a)[other] - num(b)[other]).abs();
            }
        }
    }
    let uncovered: Vec<String> = (0..3)
        .filter(|&k| covered[k] != r)
        .map(|k| {
            format!(
                "simplex edge x{}=0 covered with length {} of {r}",
                k + 1,
                covered[k]
            )
        })
        .collect();
    geometric_ok &= v.record("boundary_covered", uncovered);

    let mut used = vec![false; n];
    for t in &triangles {
        for &x in t {
            used[x] = true;
        }
    }
    let unused: Vec<String> = (0..n)
        .filter(|&i| !used[i])
        .map(|i| format!("point {} is in no triangle", points[i]))
        .collect();
    geometric_ok &= v.record("points_used", unused);

    if !geometric_ok {
        v.skip(&["wall_relations", "stars_closed"]);
        return None;
    }

    let mut walls = Vec::with_capacity(edges.len());
    let mut relation_failures = Vec::new();
    for (&(a, b), uses) in &edges {
        let mut wall = Wall {
            endpoints: (a, b),
            sides: uses.iter().map(|u| u.0).collect(),
            opposite: uses.iter().map(|u| u.1).collect(),
            relation: None,
        };
        if wall.is_compact() {
            let (c, d) = (num(wall.opposite[0]), num(wall.opposite[1]));
            let target = [c[0] + d[0], c[1] + d[1], c[2] + d[2]];
            match solve_pair(num(a), num(b), target) {
                Some(rel) => wall.relation = Some(rel),
                None => {
                    v.fail_with(FanError::NonIntegralRelation { wall: (a, b) });
                    relation_failures.push(format!("wall ({a},{b}) has no integral relation"));
                }
            }
        }
        walls.push(wall);
    }
    let relations_ok = v.record("wall_relations", relation_failures);
    let wall_lookup = walls
        .iter()
        .enumerate()
        .map(|(i, w)| (w.endpoints, i))
        .collect();

    let mut fan = CrepantFan {
        action,
        points,
        triangles,
        walls,
        wall_lookup,
        stars: InteriorPointIndex { stars: vec![] },
        file_index: order,
    };
    match stars(&fan) {
        Ok(index) => {
            v.record("stars_closed", vec![]);
            fan.stars = index;
        }
        Err(e) => {
            v.fail_with(e.clone());
            v.record("stars_closed", vec![e.to_string()]);
            return None;
        }
    }
    relations_ok.then_some(fan)
}

/// Evaluates every fan invariant without stopping at the first failure
/// (later checks are skipped when their inputs are malformed).
pub fn validate_fan_file(file: &FanFile) -> FanDiagnostics {
    let mut v = Validator::new();
    let built = build(file, &mut v);
    FanDiagnostics {
        valid: built.is_some(),
        checks: v.checks,
    }
}

pub fn load_fan(path: &Path) -> Result<CrepantFan, FanError> {
    CrepantFan::from_file(&FanFile::read(path)?)
}

/// Walks the triangles around `rho` and returns its neighbours in
/// counterclockwise order (viewed from the positive octant), starting from
/// the smallest index.
pub fn walk_star(
    points: &[JuniorPoint],
    triangles: &[[usize; 3]],
    rho: usize,
) -> Result<Vec<usize>, FanError> {
    let center = points[rho].numerators;
    let mut next: HashMap<usize, usize> = HashMap::new();
    for t in triangles.iter().filter(|t| t.contains(&rho)) {
        let others: Vec<usize> = t.iter().copied().filter(|&x| x != rho).collect();
        let (u, w) = (others[0], others[1]);
        let (from, to) = if det3(center, points[u].numerators, points[w].numerators) > 0 {
            (u, w)
        } else {
            (w, u)
        };
        if next.insert(from, to).is_some() {
            return Err(FanError::OpenStar { point: rho });
        }
    }
    let Some(&start) = next.keys().min() else {
        return Err(FanError::OpenStar { point: rho });
    };
    let mut cycle = vec![start];
    let mut cur = start;
    loop {
        let Some(&nxt) = next.get(&cur) else {
            return Err(FanError::OpenStar { point: rho });
        };
        if nxt == start {
            break;
        }
        if cycle.len() > next.len() {
            return Err(FanError::OpenStar { point: rho });
        }
        cycle.push(nxt);
        cur = nxt;
    }
    if cycle.len() != next.len() || cycle.len() < 3 {
        return Err(FanError::OpenStar { point: rho });
    }
    Ok(cycle)
}

/// Star of every interior point, in canonical interior order.
pub fn stars(fan: &CrepantFan) -> Result<InteriorPointIndex, FanError> {
    let stars = fan
        .interior_points()
        .into_iter()
        .map(|rho| {
            walk_star(&fan.points, &fan.triangles, rho).map(|cycle| Star { center: rho, cycle })
        })
        .collect::<Result<_, _>>()?;
    Ok(InteriorPointIndex { stars })
}

impl CrepantFan {
    pub fn from_file(file: &FanFile) -> Result<Self, FanError> {
        let mut v = Validator::new();
        match build(file, &mut v) {
            Some(fan) => Ok(fan),
            None => Err(v
                .first_error
                .expect("a failed build records its first error")),
        }
    }

    pub fn action(&self) -> &CyclicAction {
        &self.action
    }

    pub fn points(&self) -> &[JuniorPoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &JuniorPoint {
        &self.points[i]
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn wall(&self, a: usize, b: usize) -> Option<&Wall> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.wall_lookup.get(&key).map(|&i| &self.walls[i])
    }

    pub fn wall_index(&self, a: usize, b: usize) -> Option<usize> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.wall_lookup.get(&key).copied()
    }

    /// Indices of interior walls, in wall order. These are the compact curves.
    pub fn compact_walls(&self) -> Vec<usize> {
        (0..self.walls.len())
            .filter(|&i| self.walls[i].is_compact())
            .collect()
    }

    /// Interior points in canonical (ascending lexicographic) order.
    pub fn interior_points(&self) -> Vec<usize> {
        (0..self.points.len())
            .filter(|&i| self.points[i].is_interior())
            .collect()
    }

    pub fn stars(&self) -> &InteriorPointIndex {
        &self.stars
    }

    /// Maps a canonical point index back to its index in the input file.
    pub fn file_index(&self, canonical: usize) -> usize {
        self.file_index[canonical]
    }

    /// Recomputes `(alpha, beta)` for an interior wall.
    pub fn wall_relation(&self, wall: &Wall) -> Result<(i64, i64), FanError> {
        wall_relation(self, wall)
    }
}

/// Solves the wall relation `v3 + v4 = alpha v1 + beta v2` where `v1 < v2`
/// are the wall endpoints and `v3, v4` the opposite vertices.
pub fn wall_relation(fan: &CrepantFan, wall: &Wall) -> Result<(i64, i64), FanError> {
    if !wall.is_compact() {
        return Err(FanError::NonIntegralRelation {
            wall: wall.endpoints,
        });
    }
    let p = |i: usize| fan.points[i].numerators;
    let (c, d) = (p(wall.opposite[0]), p(wall.opposite[1]));
    let target = [c[0] + d[0], c[1] + d[1], c[2] + d[2]];
    solve_pair(p(wall.endpoints.0), p(wall.endpoints.1), target).ok_or(
        FanError::NonIntegralRelation {
            wall: wall.endpoints,
        },
    )
}

/// Coefficient of `point` in the relation of an interior wall through it.
pub fn relation_coefficient(wall: &Wall, point: usize) -> i64 {
    let (alpha, beta) = wall.relation.expect("interior wall carries a relation");
    if wall.endpoints.0 == point {
        alpha
    } else {
        beta
    }
}
