use proptest::prelude::*;

use flatveech::billiard::shortest_generalized_diagonal;
use flatveech::fixtures::{irrational_triangle, unit_square};
use flatveech::geometry::Point;
use flatveech::numerics::{rat, subgroup_of_circle_rank, AngleValue, Exact, Mat2};
use flatveech::polygon::{search_resonance_free_prefix, unbounded_polygon, SearchOptions, UnboundedPolygonSpec};
use flatveech::Error;
use flatveech::veech::{orbit_density_witness, rotation_group, theorem1_report, Conclusion, Status};

fn commute(a: &Mat2, b: &Mat2) -> bool {
    let (ab, ba) = (a.mul(b), b.mul(a));
    match ab.exact_eq(&ba) {
        Some(eq) => eq,
        None => ab.overlaps(&ba),
    }
}

/// Largest gap between the points `{kα}`, `0 ≤ k ≤ k_max`, on the unit
/// circle, and the number of distinct gap lengths.
fn float_gaps(alpha: f64, k_max: usize) -> (f64, usize) {
    let mut pts: Vec<f64> = (0..=k_max).map(|k| (k as f64 * alpha).rem_euclid(1.0)).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut gaps: Vec<f64> = pts.windows(2).map(|w| w[1] - w[0]).collect();
    gaps.push(1.0 - pts.last().unwrap() + pts[0]);
    let max = gaps.iter().cloned().fold(0.0, f64::max);
    gaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    gaps.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    (max, gaps.len())
}

#[test]
fn orbit_gaps_shrink_within_the_three_distance_bound() {
    let lambda = AngleValue::from_exact(&Exact::sqrt_int(2) * &Exact::frac(1, 4));
    let alpha = lambda.to_f64();
    let v = Point::int(3, 4);
    let mut previous = f64::INFINITY;
    for k_max in [10, 100, 1000] {
        let w = orbit_density_witness(&lambda, &v, k_max).unwrap();
        assert!(w.within_bound());
        let (oracle, distinct) = float_gaps(alpha, k_max);
        assert!(distinct <= 3);
        let gap = w.max_gap.to_f64();
        assert!((gap - oracle * std::f64::consts::TAU).abs() < 1e-9, "{gap} vs {oracle}");
        assert!(gap < previous);
        previous = gap;
        assert!((w.radius.to_f64() - 5.0).abs() < 1e-12);
    }
}

#[test]
fn apex_only_truncation_has_no_diagonal() {
    let spec = UnboundedPolygonSpec { n: 1, xs: vec![Exact::int(0), Exact::frac(1123, 500)], truncation_depth: 1 };
    let t = unbounded_polygon(&spec).unwrap();
    assert!(matches!(shortest_generalized_diagonal(&t.polygon), Err(Error::NoDiagonalFound { .. })));
    let report = theorem1_report(&t.polygon, &Exact::int(2)).unwrap();
    assert_eq!(report.item("diagonal-lengths-bounded-below").unwrap().status, Status::Skipped);
    assert_eq!(report.item("veech-group-in-so2").unwrap().status, Status::Fail);
}

#[test]
fn rational_angles_have_no_orbit_witness() {
    assert!(orbit_density_witness(&AngleValue::rational(1, 3), &Point::int(1, 0), 10).is_err());
}

#[test]
fn rotation_group_of_the_irrational_triangle() {
    let r = rotation_group(&irrational_triangle()).unwrap();
    assert_eq!(r.generators.len(), 3);
    assert_eq!(r.free_rank, 1);
    assert_eq!(r.conclusion, Conclusion::ContainedInSo2);
    for a in &r.generators {
        for b in &r.generators {
            assert!(commute(a, b));
        }
    }
    let sq = rotation_group(&unit_square()).unwrap();
    assert_eq!(sq.free_rank, 0);
    assert!(matches!(sq.conclusion, Conclusion::NotApplicable { .. }));
}

#[test]
fn theorem_checklist_for_the_irrational_triangle() {
    let report = theorem1_report(&irrational_triangle(), &Exact::int(3)).unwrap();
    assert!(report.all_pass());
    assert!(report.truncation_caveat.is_none());
    assert_eq!(report.item("veech-group-in-so2").unwrap().status, Status::Pass);
    assert_eq!(report.item("rotation-subgroup-maximal-rank").unwrap().status, Status::Cited);
    assert_eq!(report.item("hypothesis-irrational-angle").unwrap().status, Status::Pass);
    let sq = theorem1_report(&unit_square(), &Exact::int(3)).unwrap();
    assert_eq!(sq.item("hypothesis-irrational-angle").unwrap().status, Status::Fail);
}

#[test]
fn resonance_free_prefixes_have_full_rank() {
    for k in 1..=5 {
        let found = search_resonance_free_prefix(1, k, 3, &SearchOptions::default()).unwrap();
        let t = unbounded_polygon(&found.spec).unwrap();
        let rank = subgroup_of_circle_rank(&t.chain_angles, 50, 256).unwrap();
        assert_eq!(rank.free_rank, k);
        let report = theorem1_report(&t.polygon, &Exact::int(2)).unwrap();
        assert!(report.truncation_caveat.is_some());
        assert_eq!(report.rotation_group.free_rank, k);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn free_rank_never_drops_when_generators_are_added(
        specs in prop::collection::vec((-6i64..6, 1i64..8, 0i64..4, 1i64..6, prop::sample::select(vec![2u64, 3])), 1..6),
    ) {
        let values: Vec<AngleValue> = specs
            .iter()
            .map(|&(a, p, b, q, d)| AngleValue::from_exact(Exact::quadratic(rat(a, p), rat(b, q), d)))
            .collect();
        let mut last = 0;
        for k in 1..=values.len() {
            let r = subgroup_of_circle_rank(&values[..k], 50, 256).unwrap().free_rank;
            prop_assert!(r >= last && r <= last + 1);
            last = r;
        }
        prop_assert!(last <= 2);
    }
}
