use std::path::PathBuf;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use reid_gale::bundles::{support_numerator, DegreeMatrix, SupportTable, WeightedMonomials};
use reid_gale::fan::{det3, load_fan, validate_fan_file, wall_relation, CheckStatus, FanFile};
use reid_gale::gale::{analyze_fan, canonical_kernel, matrix_mode, ns_and_raw_kernel};
use reid_gale::group::{validate_action, CyclicAction, DimensionVector};
use reid_gale::surfaces::{euler_char, EulerTable, ToricSurface};
use reid_gale::zmat::{
    gale_dual, hermite_normal_form, kernel_basis, same_row_lattice, smith_normal_form,
    solve_integral, verify_short_exact,
};
use reid_gale::ZMatrix;

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(rel)
}

const VALID_FANS: [&str; 4] = [
    "fans/fan_1_19_1_3_15.json",
    "fans/fan_1_3_1_1_1.json",
    "fans/fan_1_6_1_1_4.json",
    "fans/fan_1_19_flipped.json",
];

fn small_matrix(rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = ZMatrix> {
    prop::collection::vec(-bound..=bound, rows * cols)
        .prop_map(move |v| ZMatrix::from_fn(rows, cols, |i, j| BigInt::from(v[i * cols + j])))
}

fn any_matrix(max_rows: usize, max_cols: usize, bound: i64) -> impl Strategy<Value = ZMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| small_matrix(r, c, bound))
}

fn is_surjective(l: &ZMatrix) -> bool {
    let snf = smith_normal_form(l);
    snf.invariant_factors().len() == l.rows() && snf.has_unit_factors()
}

/// A unimodular matrix built from elementary column operations.
fn unimodular(n: usize, ops: &[(usize, usize, i64, bool)]) -> ZMatrix {
    let mut u = ZMatrix::identity(n);
    for &(a, b, k, neg) in ops {
        let (a, b) = (a % n, b % n);
        if a != b {
            u.add_col_multiple(a, b, &BigInt::from(k));
        } else if neg {
            u.negate_col(a);
        }
    }
    u
}

fn ops() -> impl Strategy<Value = Vec<(usize, usize, i64, bool)>> {
    prop::collection::vec((0usize..16, 0usize..16, -3i64..=3, any::<bool>()), 0..24)
}

fn actions() -> impl Strategy<Value = CyclicAction> {
    (2i64..40, 1i64..40, 1i64..40).prop_filter_map("not a valid SL(3) action", |(r, a, b)| {
        let c = (-a - b).rem_euclid(r);
        validate_action(r, a % r, b % r, c).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hermite_is_a_unimodular_reduction(m in any_matrix(5, 6, 6)) {
        let h = hermite_normal_form(&m);
        prop_assert!(h.u.is_unimodular());
        prop_assert_eq!(h.u.checked_mul(&m).unwrap(), h.h.clone());
        for (row, &p) in h.pivots.iter().enumerate() {
            prop_assert!(h.h.get(row, p).is_positive());
            for above in 0..row {
                let x = h.h.get(above, p);
                prop_assert!(!x.is_negative() && x < h.h.get(row, p));
            }
        }
    }

    #[test]
    fn smith_diagonalises(m in any_matrix(4, 5, 6)) {
        let s = smith_normal_form(&m);
        prop_assert!(s.u.is_unimodular() && s.v.is_unimodular());
        prop_assert_eq!(s.u.checked_mul(&m).unwrap().checked_mul(&s.v).unwrap(), s.d.clone());
        let f = s.invariant_factors();
        for w in f.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn kernel_is_saturated(m in small_matrix(2, 4, 3)) {
        let k = kernel_basis(&m);
        prop_assert!(m.checked_mul(&k).unwrap().is_zero());
        let range = -3i64..=3;
        for a in range.clone() {
            for b in range.clone() {
                for c in range.clone() {
                    for d in range.clone() {
                        let x: Vec<BigInt> = [a, b, c, d].iter().map(|&e| BigInt::from(e)).collect();
                        if m.mul_vec(&x).iter().all(Zero::is_zero) {
                            prop_assert!(solve_integral(&k, &x).is_some(), "{:?} not in lattice", x);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gale_involution(l in any_matrix(6, 10, 3)) {
        prop_assume!(is_surjective(&l));
        let g = gale_dual(&l).unwrap();
        prop_assert!(l.checked_mul(&g.transpose()).unwrap().is_zero());
        prop_assert!(verify_short_exact(&kernel_basis(&l), &l).unwrap().passed());
        if g.rows() > 0 {
            let back = gale_dual(&g).unwrap();
            prop_assert!(same_row_lattice(&back, &l));
        }
    }

    #[test]
    fn lifted_theta_is_weighted_zero(
        l in any_matrix(4, 7, 3),
        v in prop::collection::vec(1i64..5, 8),
    ) {
        prop_assume!(is_surjective(&l));
        let v = DimensionVector::new([1].into_iter().chain(v[..l.cols()].iter().copied()).collect()).unwrap();
        let rep = matrix_mode(&l, Some(v.clone()), None, None).unwrap();
        prop_assert!(rep.exactness.passed());
        prop_assert!(rep.lt.transpose() == rep.l);
        prop_assert!(rep.kt.checked_mul(&rep.lt).map_or(true, |p| p.is_zero()));
        for (row, t0) in rep.theta0.iter().enumerate() {
            let s: BigInt = rep.kt.row(row).iter().enumerate()
                .map(|(i, x)| x * BigInt::from(v.get(i + 1)))
                .sum::<BigInt>() + t0 * BigInt::from(v.get(0));
            prop_assert!(s.is_zero());
        }
        // every column is in exactly one class
        let t = &rep.trichotomy;
        let mut seen = vec![0; l.cols()];
        for j in t.plus().into_iter().chain(t.zero()).chain(t.minus()).chain(t.incoherent()) {
            seen[j] += 1;
        }
        prop_assert!(seen.iter().all(|&s| s == 1));
    }

    #[test]
    fn weight_is_a_homomorphism(g in actions(), m in prop::array::uniform3(-50i64..50), n in prop::array::uniform3(-50i64..50)) {
        let sum = [m[0] + n[0], m[1] + n[1], m[2] + n[2]];
        let r = g.characters();
        prop_assert_eq!(g.weight(sum), (g.weight(m) + g.weight(n)) % r);
    }

    #[test]
    fn junior_points_pair_integrally(g in actions(), m in prop::array::uniform3(-30i64..30)) {
        let pts = g.junior_points();
        let interior_or_edge = pts.iter().filter(|p| !p.is_corner()).count();
        let age_two = (1..g.order()).filter(|&k| g.age_numerator(k) == 2 * g.order()).count();
        prop_assert_eq!(interior_or_edge + age_two, g.characters() - 1);
        if g.weight(m) == 0 {
            for p in &pts {
                prop_assert_eq!(p.pair(m).rem_euclid(g.order()), 0);
            }
        }
    }

    #[test]
    fn box_reduction_is_sound(g in actions(), raw in prop::array::uniform3(0i64..1000), pick in 0usize..1000) {
        let r = g.order();
        let m = raw.map(|x| x % (3 * r));
        let mons = WeightedMonomials::new(&g);
        let pts = g.junior_points();
        let p = pts[pick % pts.len()];
        prop_assert!(support_numerator(&mons, g.weight(m), p.numerators) <= p.pair(m));
    }
}

/// Self-intersections of a random compact toric surface: P^2 or a
/// Hirzebruch surface, blown up at torus-fixed points.
fn toric_surfaces() -> impl Strategy<Value = Vec<i64>> {
    (
        0i64..5,
        any::<bool>(),
        prop::collection::vec(0usize..64, 0..6),
    )
        .prop_map(|(n, p2, blowups)| {
            let mut s = if p2 { vec![1, 1, 1] } else { vec![-n, 0, n, 0] };
            for b in blowups {
                let j = b % s.len();
                let k = (j + 1) % s.len();
                s[j] -= 1;
                s[k] -= 1;
                s.insert(j + 1, -1);
            }
            s
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn euler_char_is_quadratic_riemann_roch(
        s in toric_surfaces(),
        lam in prop::collection::vec(-4i64..=4, 12),
        mu in prop::collection::vec(-4i64..=4, 12),
        shift in prop::collection::vec(-3i64..=3, 12),
    ) {
        let surf = ToricSurface::new(s.clone()).unwrap();
        let k = surf.curves();
        let m: ZMatrix = surf.intersection_matrix();
        let big = |v: &[i64]| v[..k].iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let (lam, mu) = (big(&lam), big(&mu));
        let d = m.mul_vec(&lam);
        let e = m.mul_vec(&mu);
        let dot = |a: &[BigInt], b: &[BigInt]| a.iter().zip(b).map(|(x, y)| x * y).sum::<BigInt>();
        let rr = |l: &[BigInt], d: &[BigInt]| {
            BigInt::one() + (dot(l, d) + d.iter().sum::<BigInt>()) / BigInt::from(2)
        };

        let chi = euler_char(&surf, &d).unwrap();
        prop_assert_eq!(&chi, &rr(&lam, &d));
        // a second solution of (C.C) λ = d gives the same value
        let ker = kernel_basis(&m);
        prop_assert_eq!(ker.cols(), 2);
        let other: Vec<BigInt> = (0..k)
            .map(|i| &lam[i] + ker.get(i, 0) * BigInt::from(shift[0]) + ker.get(i, 1) * BigInt::from(shift[1]))
            .collect();
        prop_assert_eq!(&chi, &rr(&other, &d));

        let zero = vec![BigInt::zero(); k];
        prop_assert_eq!(euler_char(&surf, &zero).unwrap(), BigInt::one());

        let sum: Vec<BigInt> = d.iter().zip(&e).map(|(x, y)| x + y).collect();
        let cross = euler_char(&surf, &sum).unwrap() - &chi - euler_char(&surf, &e).unwrap() + 1;
        prop_assert_eq!(&cross, &dot(&lam, &e));
        prop_assert_eq!(&cross, &dot(&mu, &d));
    }
}

fn fan_inputs(rel: &str) -> (ZMatrix, ZMatrix, usize) {
    let fan = load_fan(&fixture(rel)).unwrap();
    let supports = SupportTable::compute(&fan).unwrap();
    let degrees = DegreeMatrix::compute(&fan, &supports).unwrap();
    let euler = EulerTable::compute(&fan, &degrees).unwrap();
    let raw = ns_and_raw_kernel(&degrees.to_matrix(), fan.interior_points().len()).unwrap();
    (raw.kernel, euler.to_matrix(), fan.action().characters())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn canonical_kernel_ignores_the_basis(ops_19 in ops(), ops_6 in ops()) {
        for (rel, ops) in [("fans/fan_1_19_1_3_15.json", &ops_19), ("fans/fan_1_6_1_1_4.json", &ops_6)] {
            let (raw, euler, r) = fan_inputs(rel);
            let v = DimensionVector::ones(r);
            let base = canonical_kernel(&raw, &euler, &v).unwrap();
            let u = unimodular(raw.cols(), ops);
            let moved = canonical_kernel(&raw.checked_mul(&u).unwrap(), &euler, &v).unwrap();
            prop_assert_eq!(&moved, &base);
            // idempotent
            prop_assert_eq!(canonical_kernel(&base, &euler, &v).unwrap(), base);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn report_ignores_file_order(seed in prop::collection::vec(any::<u32>(), 64)) {
        let file = FanFile::read(&fixture("fans/fan_1_19_1_3_15.json")).unwrap();
        // permute points, triangles and the vertices inside each triangle
        let n = file.points.len();
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, seed[i] as usize % (i + 1));
        }
        let mut inverse = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let mut triangles: Vec<[usize; 3]> = file
            .triangles
            .iter()
            .enumerate()
            .map(|(t, tri)| {
                let mut tri = tri.map(|i| inverse[i]);
                tri.rotate_left(seed[t % 64] as usize % 3);
                tri
            })
            .collect();
        triangles.reverse();
        let shuffled = FanFile {
            points: perm.iter().map(|&i| file.points[i]).collect(),
            triangles,
            ..file.clone()
        };
        let a = analyze_fan(&reid_gale::fan::CrepantFan::from_file(&file).unwrap()).unwrap();
        let b = analyze_fan(&reid_gale::fan::CrepantFan::from_file(&shuffled).unwrap()).unwrap();
        prop_assert_eq!(a.report.to_json(), b.report.to_json());
        prop_assert_eq!(a.degrees, b.degrees);
    }
}

#[test]
fn exactness_on_every_fixture_run() {
    for rel in VALID_FANS {
        let fan = load_fan(&fixture(rel)).unwrap();
        if let Ok(a) = analyze_fan(&fan) {
            assert!(a.report.exactness.passed(), "{rel}");
            assert!(a.report.k.transpose() == a.report.kt);
            assert!(a.report.l.checked_mul(&a.report.k).unwrap().is_zero());
            assert!(a.report.kt.checked_mul(&a.report.lt).unwrap().is_zero());
            // (+) columns carry a single +1
            for j in a.report.trichotomy.plus() {
                let col = a.report.kt.column(j);
                assert_eq!(
                    col.iter().filter(|x| !x.is_zero()).count(),
                    1,
                    "{rel} column {j}"
                );
                assert!(col.iter().all(|x| x.is_zero() || x.is_one()));
            }
            // T_0 is trivial
            assert!((0..a.degrees.curves()).all(|c| a.degrees.degree(c, 0) == 0));
        }
    }
}

#[test]
fn wall_relations_and_volume_on_fixtures() {
    for rel in VALID_FANS {
        let file = FanFile::read(&fixture(rel)).unwrap();
        let diag = validate_fan_file(&file);
        assert!(diag.valid, "{rel}");
        assert_eq!(diag.status("total_volume"), Some(CheckStatus::Pass));
        assert_eq!(diag.status("boundary_covered"), Some(CheckStatus::Pass));
        let fan = load_fan(&fixture(rel)).unwrap();
        let r = fan.action().order();
        assert_eq!(fan.triangles().len() as i64, r);
        for t in fan.triangles() {
            let p = t.map(|i| fan.point(i).numerators);
            assert_eq!(det3(p[0], p[1], p[2]).abs(), r * r, "{rel}");
        }
        for w in fan.walls().iter().filter(|w| w.is_compact()) {
            let mut swapped = w.clone();
            swapped.opposite.reverse();
            swapped.sides.reverse();
            let rel_ab = wall_relation(&fan, w).unwrap();
            assert_eq!(wall_relation(&fan, &swapped).unwrap(), rel_ab);
            assert_eq!(w.relation, Some(rel_ab));
            let p = |i: usize| fan.point(i).numerators;
            let (a, b) = w.endpoints;
            let (c, d) = (w.opposite[0], w.opposite[1]);
            for k in 0..3 {
                assert_eq!(rel_ab.0 * p(a)[k] + rel_ab.1 * p(b)[k], p(c)[k] + p(d)[k]);
            }
        }
        // interior points are the centres of closed stars
        let interior = fan.interior_points();
        let boundary = fan
            .points()
            .iter()
            .filter(|p| p.is_boundary() && !p.is_corner())
            .count();
        assert_eq!(interior.len(), fan.points().len() - 3 - boundary);
        for &rho in &interior {
            let star = fan.stars().star(rho).unwrap();
            let touching = fan.triangles().iter().filter(|t| t.contains(&rho)).count();
            assert_eq!(star.cycle.len(), touching);
        }
    }
}

#[test]
fn deterministic_across_thread_counts() {
    let fan = load_fan(&fixture("fans/fan_1_19_1_3_15.json")).unwrap();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| analyze_fan(&fan).unwrap())
    };
    let one = run(1);
    let many = run(6);
    assert_eq!(
        serde_json::to_string(&one.report.to_json()).unwrap(),
        serde_json::to_string(&many.report.to_json()).unwrap()
    );
    assert_eq!(one.supports.numerators, many.supports.numerators);
    assert_eq!(one.euler, many.euler);
}
