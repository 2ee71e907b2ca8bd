mod common;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use flatveech::numerics::syntax::{format_exact, parse_exact};
use flatveech::numerics::{
    find_integer_relation, rat, rotation_matrix, subgroup_of_circle_rank, AngleValue, Ball, Certificate, Exact,
    RelationOutcome,
};

use common::pow2_inv;

fn exact_strategy() -> impl Strategy<Value = Exact> {
    (-50i64..50, 1i64..30, -50i64..50, 1i64..30, prop::sample::select(vec![2u64, 3, 5, 6, 7]))
        .prop_map(|(a, p, b, q, d)| Exact::quadratic(rat(a, p), rat(b, q), d))
}

fn same_field(x: Exact, y: Exact) -> (Exact, Exact) {
    let d = if x.is_rational() { y.radicand() } else { x.radicand() };
    let y = Exact::quadratic(y.rational_part().clone(), y.surd_coefficient().clone(), d.max(2));
    (x, y)
}

fn angle_strategy() -> impl Strategy<Value = AngleValue> {
    prop_oneof![
        (-24i64..24, prop::sample::select(vec![1i64, 2, 3, 4, 6, 12])).prop_map(|(p, q)| AngleValue::rational(p, q)),
        (-40i64..40, 1i64..60).prop_map(|(p, q)| AngleValue::rational(p, q)),
        (-30i64..30, 1i64..20, 1i64..30, 1i64..20, prop::sample::select(vec![2u64, 3, 5]))
            .prop_map(|(a, p, b, q, d)| AngleValue::from_exact(Exact::quadratic(rat(a, p), rat(b, q), d))),
    ]
}

fn prime(k: usize) -> u64 {
    [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29][k]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_operations_invert(x in exact_strategy(), y in exact_strategy()) {
        let (x, y) = same_field(x, y);
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        prop_assert_eq!(&x + &(-&x), Exact::zero());
        if !y.is_zero() {
            prop_assert_eq!(&(&x * &y) / &y, x.clone());
        }
        prop_assert_eq!((&x * &x).signum(), if x.is_zero() { 0 } else { 1 });
    }

    #[test]
    fn scalar_syntax_round_trips(x in exact_strategy()) {
        prop_assert_eq!(parse_exact(&format_exact(&x)).unwrap(), x.clone());
        prop_assert_eq!(parse_exact(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn ordering_agrees_with_balls(x in exact_strategy(), y in exact_strategy()) {
        let (x, y) = same_field(x, y);
        let d = &Ball::from_exact(&x, 128) - &Ball::from_exact(&y, 128);
        if let Some(s) = d.sign() {
            prop_assert_eq!(s, (&x - &y).signum());
        }
    }

    #[test]
    fn rotations_add(a in angle_strategy(), b in angle_strategy()) {
        let prec = 256;
        let lhs = rotation_matrix(&a, prec).mul(&rotation_matrix(&b, prec));
        let rhs = rotation_matrix(&a.add(&b), prec);
        match lhs.exact_eq(&rhs) {
            Some(eq) => prop_assert!(eq),
            None => prop_assert!(lhs.max_deviation(&rhs) <= pow2_inv(200)),
        }
        let det = rotation_matrix(&a, prec).det();
        match det.as_exact() {
            Some(e) => prop_assert_eq!(e.clone(), Exact::one()),
            None => prop_assert!(det.to_ball(prec).overlaps(&Ball::from_int(1, prec))),
        }
    }

    #[test]
    fn rotation_is_periodic(a in angle_strategy(), k in -3i64..3) {
        let r = rotation_matrix(&a, 256);
        let s = rotation_matrix(&a.add_int(k), 256);
        match r.exact_eq(&s) {
            Some(eq) => prop_assert!(eq),
            None => prop_assert!(r.max_deviation(&s) <= pow2_inv(200)),
        }
    }

    #[test]
    fn exact_relations_substitute_to_zero(values in prop::collection::vec(angle_strategy(), 1..5)) {
        if let RelationOutcome::Found { relation } = find_integer_relation(&values, 20, 256).unwrap() {
            let mut total = Exact::zero();
            for (c, v) in relation.coefficients.iter().zip(&values) {
                let c: i64 = c.try_into().unwrap();
                total = &total + &(&Exact::int(c) * &v.as_exact().unwrap());
            }
            let m: i64 = (&relation.m).try_into().unwrap();
            prop_assert_eq!(total, Exact::int(m));
            prop_assert!(relation.residual.is_zero());
            prop_assert!(relation.max_coeff() <= BigInt::from(20));
            prop_assert!(relation.coefficients.iter().any(|c| !c.is_zero()));
        }
    }

    #[test]
    fn independent_surds_have_no_relation(
        k in 1usize..5,
        coeffs in prop::collection::vec((1i64..20, 1i64..20, -10i64..10, 1i64..10), 5),
    ) {
        let values: Vec<AngleValue> = (0..k)
            .map(|j| {
                let (b, q, a, p) = coeffs[j];
                AngleValue::from_exact(Exact::quadratic(rat(a, p), rat(b, q), [2, 3, 5, 7, 11][j]))
            })
            .collect();
        let out = find_integer_relation(&values, 50, 256).unwrap();
        prop_assert_eq!(out, RelationOutcome::None { certificate: Certificate::Exact });
        prop_assert_eq!(subgroup_of_circle_rank(&values, 50, 256).unwrap().free_rank, k);
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn planted_numeric_relations_are_recovered(
        k in 2usize..6,
        planted in prop::collection::vec(-10i64..=10, 6),
        m in -5i64..5,
        denoms in prop::collection::vec(2i64..9, 6),
    ) {
        let prec = 256;
        let mut coeffs: Vec<i64> = planted[..k].to_vec();
        if coeffs[k - 1] == 0 {
            coeffs[k - 1] = 1;
        }
        let mut balls: Vec<Ball> = (0..k - 1)
            .map(|j| &Ball::sqrt_int(prime(j), prec + 64) / &Ball::from_int(denoms[j], prec + 64))
            .collect();
        let mut rest = Ball::from_int(m, prec + 64);
        for (c, b) in coeffs.iter().zip(&balls) {
            rest = &rest - &b.mul_int(*c);
        }
        balls.push(&rest / &Ball::from_int(coeffs[k - 1], prec + 64));
        let values: Vec<AngleValue> =
            balls.iter().map(|b| AngleValue::NumericBall(b.with_precision(prec))).collect();
        let out = find_integer_relation(&values, 10, prec).unwrap();
        let found = out.relation().expect("planted relation found");
        let sum = found
            .coefficients
            .iter()
            .zip(&values)
            .fold(Ball::from_bigint(&(-&found.m), prec), |acc, (c, v)| &acc + &v.to_ball(prec).mul_bigint(c));
        prop_assert!(sum.abs_upper() <= found.residual);
        prop_assert!(found.residual <= pow2_inv(200));
        let g = found.coefficients.iter().zip(&coeffs).find(|(_, &p)| p != 0).map(|(f, &p)| (f.clone(), p)).unwrap();
        for (f, &p) in found.coefficients.iter().zip(&coeffs) {
            prop_assert_eq!(f * BigInt::from(g.1), &g.0 * BigInt::from(p));
        }
    }

    #[test]
    fn rank_ignores_order_and_integer_shifts(values in prop::collection::vec(angle_strategy(), 1..5), seed in 0u64..1000) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let base = subgroup_of_circle_rank(&values, 50, 256).unwrap();
        let mut shuffled = values.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let shifted: Vec<AngleValue> = shuffled.iter().enumerate().map(|(j, v)| v.add_int(j as i64 % 3)).collect();
        let other = subgroup_of_circle_rank(&shifted, 50, 256).unwrap();
        prop_assert_eq!(base.free_rank, other.free_rank);
        prop_assert_eq!(base.torsion_order, other.torsion_order);
    }
}

#[test]
fn rank_of_mixed_family() {
    let r2 = Exact::sqrt_int(2);
    let values = vec![
        AngleValue::rational(1, 2),
        AngleValue::from_exact(&r2 * &Exact::frac(1, 4)),
        AngleValue::from_exact(&r2 * &Exact::frac(1, 2)),
    ];
    let rank = subgroup_of_circle_rank(&values, 50, 256).unwrap();
    assert_eq!(rank.free_rank, 1);
    assert_eq!(rank.torsion_order, BigInt::from(2));
    assert_eq!(rank.certificate, Certificate::Exact);
    assert!(rank.relations.iter().all(|r| r.residual.is_zero()));
}
