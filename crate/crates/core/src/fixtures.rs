//! Reference tables used by tests, examples and the command line.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::geometry::Point;
use crate::numerics::{rat, AngleValue, Ball, Exact, Rational, DEFAULT_PRECISION_BITS};
use crate::polygon::Polygon;

pub fn rectangle(a: i64, b: i64) -> Polygon {
    Polygon::new(vec![Point::int(0, 0), Point::int(a, 0), Point::int(a, b), Point::int(0, b)]).unwrap()
}

pub fn unit_square() -> Polygon {
    rectangle(1, 1)
}

pub fn right_isosceles() -> Polygon {
    Polygon::new(vec![Point::int(0, 0), Point::int(1, 0), Point::int(0, 1)]).unwrap()
}

/// Equilateral triangle with unit sides.
pub fn equilateral() -> Polygon {
    let h = Exact::quadratic(crate::numerics::rat(0, 1), crate::numerics::rat(1, 2), 3);
    Polygon::new(vec![Point::int(0, 0), Point::int(1, 0), Point::new(Exact::frac(1, 2), h)]).unwrap()
}

/// Right triangle with angles `(1/2, 1/3, 1/6)·π`.
pub fn thirty_sixty() -> Polygon {
    Polygon::new(vec![Point::int(0, 0), Point::int(1, 0), Point::new(Exact::zero(), Exact::sqrt_int(3))]).unwrap()
}

/// L-shaped table made of three unit squares.
pub fn l_shape() -> Polygon {
    let pts = [(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)];
    Polygon::new(pts.iter().map(|&(x, y)| Point::int(x, y)).collect()).unwrap()
}

/// Right triangle with angles `(1/2, √2/4, 1/2 − √2/4)·π`. The leg ratio is
/// a rational approximation of `tan(√2π/4)` good to about 1e-14, and the
/// angles are declared exactly.
pub fn irrational_triangle() -> Polygon {
    let r2 = Exact::sqrt_int(2);
    let lam = &r2 * &Exact::frac(1, 4);
    let angles = vec![
        AngleValue::rational(1, 2),
        AngleValue::from_exact(lam.clone()),
        AngleValue::from_exact(&Exact::frac(1, 2) - &lam),
    ];
    let pts = vec![Point::int(0, 0), Point::int(1, 0), Point::new(Exact::zero(), Exact::frac(1107676, 548901))];
    Polygon::with_angles(pts, Some(angles), DEFAULT_PRECISION_BITS).unwrap()
}

const DIRS8: [(i64, i64); 8] = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)];

/// Convex lattice polygon whose edges point in directions `kπ/4`; every
/// angle is rational with denominator dividing 4.
pub fn random_octagonal<R: Rng>(rng: &mut R) -> Polygon {
    loop {
        let mut len = [0i64; 8];
        for l in len.iter_mut().take(4) {
            *l = rng.gen_range(0..5);
        }
        let (d1, d3) = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
        let delta = [d3 - d1, d1, -d1 - d3, d3];
        for k in 0..4 {
            len[k + 4] = len[k] - delta[k];
        }
        if len.iter().any(|&l| l < 0) || len.iter().filter(|&&l| l > 0).count() < 3 {
            continue;
        }
        let mut pts = vec![Point::int(0, 0)];
        let (mut x, mut y) = (0, 0);
        for k in 0..8 {
            if len[k] == 0 {
                continue;
            }
            x += DIRS8[k].0 * len[k];
            y += DIRS8[k].1 * len[k];
            pts.push(Point::int(x, y));
        }
        pts.pop();
        if let Ok(p) = Polygon::new(pts) {
            return p;
        }
    }
}

/// Star-shaped polygon with integer vertices at random radii and angles;
/// most angles come out as balls.
pub fn random_star<R: Rng>(rng: &mut R) -> Polygon {
    loop {
        let n = rng.gen_range(3..=7);
        let mut turns: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        turns.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let pts: Vec<Point> = turns
            .iter()
            .map(|t| {
                let r = rng.gen_range(5.0..30.0);
                let a = t * std::f64::consts::TAU;
                Point::int((r * a.cos()).round() as i64, (r * a.sin()).round() as i64)
            })
            .collect();
        if let Ok(p) = Polygon::new(pts) {
            return p;
        }
    }
}

/// `tan(λπ)` as a rational good to about `2⁻⁶⁰`.
fn tan_pi(lambda: &Exact) -> Rational {
    let prec = 200;
    let theta = &Ball::pi(prec) * &Ball::from_exact(lambda, prec);
    let (s, c) = theta.sin_cos();
    let t = (&s / &c).scale_pow2(60);
    Rational::new(t.round_mid(), num_bigint::BigInt::from(1u64) << 60)
}

/// Right triangle with declared angles `(1/2, q√d, 1/2 − q√d)`.
pub fn random_quadratic_triangle<R: Rng>(rng: &mut R) -> Polygon {
    let d = *[2u64, 3, 5, 7].choose(rng).unwrap();
    loop {
        let q = rat(rng.gen_range(1..40), rng.gen_range(20..200));
        let lam = Exact::quadratic(rat(0, 1), q, d);
        let lf = lam.to_f64();
        if !(0.05..0.45).contains(&lf) {
            continue;
        }
        let leg = Exact::from_rational(tan_pi(&lam));
        let angles = vec![
            AngleValue::rational(1, 2),
            AngleValue::from_exact(lam.clone()),
            AngleValue::from_exact(&Exact::frac(1, 2) - &lam),
        ];
        let pts = vec![Point::int(0, 0), Point::int(1, 0), Point::new(Exact::zero(), leg)];
        return Polygon::with_angles(pts, Some(angles), DEFAULT_PRECISION_BITS).unwrap();
    }
}

/// A random simple polygon of one of the three kinds above.
pub fn random_polygon<R: Rng>(rng: &mut R) -> Polygon {
    match rng.gen_range(0..3) {
        0 => random_octagonal(rng),
        1 => random_star(rng),
        _ => random_quadratic_triangle(rng),
    }
}
