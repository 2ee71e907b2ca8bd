mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use flatveech::numerics::{AngleValue, Ball, Exact};
use flatveech::polygon::{
    classify_polygon, interior_angles, search_resonance_free_prefix, unbounded_polygon, Classification, Polygon,
    SearchOptions, UnboundedPolygonSpec, VertexKind,
};

use common::{pow2_inv, random_polygon};

fn angle_sum_is(p: &Polygon, expected: i64) -> bool {
    let total = p.angles().iter().skip(1).fold(p.angles()[0].clone(), |acc, a| acc.add(a));
    match total.as_exact() {
        Some(e) => e == Exact::int(expected),
        None => (&total.to_ball(256) - &Ball::from_int(expected, 256)).abs_upper() <= pow2_inv(200),
    }
}

fn same_angle(a: &AngleValue, b: &AngleValue) -> bool {
    match (a.as_exact(), b.as_exact()) {
        (Some(x), Some(y)) => x == y,
        _ => a.to_ball(256).overlaps(&b.to_ball(256)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn angles_sum_to_n_minus_two(seed in any::<u64>()) {
        let p = random_polygon(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert!(angle_sum_is(&p, p.n() as i64 - 2));
        prop_assert!(p.angles().iter().all(|a| a.strictly_between(0, 2) != Some(false)));
    }

    #[test]
    fn reversal_keeps_angles(seed in any::<u64>()) {
        let p = random_polygon(&mut ChaCha8Rng::seed_from_u64(seed));
        let mut verts = p.vertices().to_vec();
        verts.reverse();
        let mut angles = p.angles().to_vec();
        angles.reverse();
        let declared = p.angles().iter().any(|a| matches!(a, AngleValue::Quadratic(_)));
        let q = Polygon::with_angles(verts, declared.then_some(angles), 256).unwrap();
        for (v, a) in p.vertices().iter().zip(interior_angles(&p)) {
            let k = q.vertices().iter().position(|w| w == v).unwrap();
            prop_assert!(same_angle(&a, q.angle(k)));
        }
    }

    #[test]
    fn unbounded_tables_are_symmetric(n in 1u32..3, gaps in prop::collection::vec((1001i64..3000, 1000i64..1001), 2..5)) {
        let mut xs = vec![Exact::zero()];
        for (p, q) in &gaps {
            xs.push(xs.last().unwrap() + &Exact::frac(*p, *q));
        }
        let depth = gaps.len();
        let t = unbounded_polygon(&UnboundedPolygonSpec { n, xs, truncation_depth: depth }).unwrap();
        for j in 0..=depth {
            let (r, l) = (t.right_index[j], t.left_index[j]);
            prop_assert!(same_angle(t.polygon.angle(r), t.polygon.angle(l)));
            prop_assert_eq!(&t.polygon.vertex(r).x, &-t.polygon.vertex(l).x.clone());
            prop_assert_eq!(&t.polygon.vertex(r).y, &t.polygon.vertex(l).y);
        }
        for a in &t.chain_angles {
            prop_assert_eq!(a.strictly_between(0, 1), Some(true));
        }
        for j in t.polygon.real_vertices() {
            prop_assert_eq!(t.polygon.vertex_kind(j), VertexKind::Real);
            prop_assert_eq!(t.polygon.angle(j).strictly_between(0, 1), Some(true));
        }
    }
}

#[test]
fn apex_angle_of_a_parabola_table() {
    let xs = vec![Exact::int(0), Exact::int(2), Exact::int(4)];
    let t = unbounded_polygon(&UnboundedPolygonSpec { n: 1, xs, truncation_depth: 2 }).unwrap();
    let apex = t.chain_angles[0].to_f64();
    let expected = (std::f64::consts::PI - 2.0 * 2f64.atan()) / std::f64::consts::PI;
    assert!((apex - expected).abs() < 1e-12);
    let right: Vec<_> = t.right_index.iter().map(|&i| t.polygon.vertex(i).to_f64()).collect();
    assert_eq!(right, vec![[0.0, 0.0], [2.0, 4.0], [4.0, 16.0]]);
}

#[test]
fn close_abscissae_are_rejected() {
    let xs = vec![Exact::int(0), Exact::int(1), Exact::int(3)];
    assert!(unbounded_polygon(&UnboundedPolygonSpec { n: 1, xs, truncation_depth: 2 }).is_err());
}

#[test]
fn search_is_deterministic() {
    let opts = SearchOptions::default();
    let a = search_resonance_free_prefix(1, 3, 11, &opts).unwrap();
    let b = search_resonance_free_prefix(1, 3, 11, &opts).unwrap();
    assert_eq!(a.spec, b.spec);
    let t = unbounded_polygon(&a.spec).unwrap();
    assert!(matches!(classify_polygon(&t.polygon), Classification::UndecidedNumeric { .. }));
}
