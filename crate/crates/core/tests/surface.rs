mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use flatveech::billiard::{enumerate_generalized_diagonals, shortest_generalized_diagonal};
use flatveech::fixtures::{equilateral, irrational_triangle, l_shape, right_isosceles, thirty_sixty, unit_square};
use flatveech::geometry::{Isometry, Point};
use flatveech::numerics::{rat, rat_int, rotation_matrix, AngleValue, Exact, Mat2, Rational};
use flatveech::polygon::Polygon;
use flatveech::surface::{
    holonomy_around_vertex, holonomy_product, katok_zemljakov, project_to_billiard, saddle_connections, ConeKind,
    KzMode, TranslationSurface,
};

use common::{pow2_inv, random_polygon};

fn pi_over_8() -> Polygon {
    let r2 = Exact::sqrt_int(2);
    let pts = vec![Point::int(0, 0), Point::int(1, 0), Point::new(Exact::zero(), &r2 - &Exact::one())];
    let angles = vec![AngleValue::rational(1, 2), AngleValue::rational(1, 8), AngleValue::rational(3, 8)];
    Polygon::with_angles(pts, Some(angles), 256).unwrap()
}

fn rational_fixtures() -> Vec<Polygon> {
    vec![unit_square(), right_isosceles(), equilateral(), thirty_sixty(), l_shape(), pi_over_8()]
}

fn agrees(m: &Mat2, r: &Mat2) -> bool {
    match m.exact_eq(r) {
        Some(eq) => eq,
        None => m.max_deviation(r) <= pow2_inv(200),
    }
}

/// `χ = V − E + F` counted from the surface's own incidence data.
fn euler_characteristic(s: &TranslationSurface) -> i64 {
    let glued: usize = s.partner.iter().map(|edges| edges.iter().filter(|p| p.is_some()).count()).sum();
    s.cone_points.len() as i64 - (glued / 2) as i64 + s.copies.len() as i64
}

/// Each cone angle as the sum of the table angles at its corners, in units
/// of `2π`.
fn corner_angle_sum(s: &TranslationSurface, k: usize) -> Rational {
    let cp = &s.cone_points[k];
    let lam = s.polygon.angle(cp.polygon_vertex).as_rational().unwrap().clone();
    lam * rat_int(cp.corners.len() as i64) / rat_int(2)
}

fn check_gluings(s: &TranslationSurface) {
    for g in &s.gluings {
        let (a, b) = s.polygon.edge(g.edge);
        let on_a = [s.copies[g.copy_a].placement.apply(a), s.copies[g.copy_a].placement.apply(b)];
        let on_b = [s.copies[g.copy_b].placement.apply(a), s.copies[g.copy_b].placement.apply(b)];
        let moved: BTreeSet<String> = on_b.iter().map(|p| (p + &g.translation).to_string()).collect();
        let target: BTreeSet<String> = on_a.iter().map(|p| p.to_string()).collect();
        assert_eq!(moved, target);
        let pa = &s.copies[g.copy_a].placement;
        let pb = &s.copies[g.copy_b].placement;
        let flip = Isometry::reflection(a, b);
        let diff = pa.compose(&flip).compose(&pb.inverse());
        assert!(diff.linear.is_identity(), "glued copies differ by more than a translation");
        assert_eq!(diff.translation, g.translation);
    }
}

#[test]
fn holonomy_of_fifty_random_tables() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..50 {
        let p = random_polygon(&mut rng);
        for j in 0..p.n() {
            let m = holonomy_around_vertex(&p, j);
            assert!(agrees(&m, &rotation_matrix(p.angle(j), 256)), "vertex {j} of {:?}", p.vertices());
        }
        let prod = holonomy_product(&p);
        assert!(agrees(&prod, &Mat2::identity()));
        if p.angles().iter().all(|a| a.as_rational().is_some()) {
            assert_eq!(prod.exact_eq(&Mat2::identity()), Some(true));
        }
    }
}

#[test]
fn gauss_bonnet_on_rational_fixtures() {
    for p in rational_fixtures() {
        let s = katok_zemljakov(&p, KzMode::Exact).unwrap();
        assert!(!s.is_truncated);
        let chi = euler_characteristic(&s);
        assert_eq!(Some(chi), s.euler_characteristic);
        assert_eq!(chi % 2, 0);
        let genus = (2 - chi) / 2;
        assert_eq!(s.genus, Some(genus));
        let mut curvature = rat_int(0);
        for (k, cp) in s.cone_points.iter().enumerate() {
            assert_eq!(cp.kind, ConeKind::Finite);
            let total = corner_angle_sum(&s, k);
            assert_eq!(cp.angle_over_2pi.as_ref().unwrap().as_rational(), Some(&total));
            assert!(total.is_integer(), "cone angle must be a multiple of 2π");
            curvature += (total - rat_int(1)) * rat_int(2);
        }
        assert_eq!(curvature, rat_int(2 * (2 * genus - 2)));
        check_gluings(&s);
    }
}

#[test]
fn known_genera() {
    let genus = |p: &Polygon| katok_zemljakov(p, KzMode::Exact).unwrap().genus.unwrap();
    assert_eq!(genus(&unit_square()), 1);
    assert_eq!(genus(&right_isosceles()), 1);
    assert_eq!(genus(&equilateral()), 1);
    assert_eq!(genus(&pi_over_8()), 2);
    assert_eq!(katok_zemljakov(&pi_over_8(), KzMode::Exact).unwrap().copies.len(), 16);
}

#[test]
fn truncated_unfoldings_keep_growing() {
    let p = irrational_triangle();
    let counts: Vec<usize> =
        (1..=6).map(|d| katok_zemljakov(&p, KzMode::Truncated(d)).unwrap().copies.len()).collect();
    assert!(counts.windows(2).all(|w| w[0] < w[1]), "{counts:?}");
    let s = katok_zemljakov(&p, KzMode::Truncated(4)).unwrap();
    assert!(s.is_truncated && s.genus.is_none());
    check_gluings(&s);
    assert!(katok_zemljakov(&p, KzMode::Exact).is_err());
}

#[test]
fn saddle_connections_fold_onto_diagonals() {
    let p = unit_square();
    let s = katok_zemljakov(&p, KzMode::Exact).unwrap();
    let bound = Exact::int(5);
    let saddles = saddle_connections(&s, &bound).unwrap();
    let lengths: BTreeSet<Exact> =
        enumerate_generalized_diagonals(&p, &bound).unwrap().into_iter().map(|d| d.length_sq).collect();
    let c = shortest_generalized_diagonal(&p).unwrap().length_sq;
    assert!(!saddles.is_empty());
    for sc in &saddles {
        assert!(lengths.contains(&sc.length_squared));
        assert!(sc.length_squared >= c);
        assert_eq!(sc.holonomy.norm_sq(), sc.length_squared);
        let folded = project_to_billiard(&s, &sc.path).unwrap();
        assert_eq!(folded.length_squared, sc.length_squared);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn octagonal_unfoldings_satisfy_gauss_bonnet(seed in any::<u64>()) {
        let p = common::random_octagonal(&mut ChaCha8Rng::seed_from_u64(seed));
        let s = katok_zemljakov(&p, KzMode::Exact).unwrap();
        let chi = euler_characteristic(&s);
        let genus = (2 - chi) / 2;
        let curvature = (0..s.cone_points.len())
            .fold(rat_int(0), |acc, k| acc + (corner_angle_sum(&s, k) - rat_int(1)) * rat_int(2));
        prop_assert_eq!(curvature, rat_int(2 * (2 * genus - 2)));
        prop_assert!(s.copies.len() <= 8);
        check_gluings(&s);
    }

    #[test]
    fn twelfth_turns_are_exact(k in -30i64..30, q in prop::sample::select(vec![1i64, 2, 3, 4, 6, 8, 12, 24])) {
        let r = rotation_matrix(&AngleValue::rational(k, q), 256);
        prop_assert_eq!(r.is_exact(), (rat(k, q) * rat_int(12)).is_integer());
        prop_assert!(agrees(&r.mul(&r.transpose()), &Mat2::identity()));
    }
}
