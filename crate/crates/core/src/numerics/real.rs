//! A real scalar that is either exact or a certified ball, and 2×2 matrices
//! over it.
//!
//! Promotion rule: any operation that mixes an exact value with a ball (or
//! two exact values from different quadratic fields) produces a ball.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use super::ball::Ball;
use super::exact::{Exact, Rational};

#[derive(Clone, Debug)]
pub enum Real {
    Exact(Exact),
    Ball(Ball),
}

impl Real {
    pub fn int(n: i64) -> Real {
        Real::Exact(Exact::int(n))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&Exact> {
        match self {
            Real::Exact(e) => Some(e),
            Real::Ball(_) => None,
        }
    }

    pub fn to_ball(&self, prec: u32) -> Ball {
        match self {
            Real::Exact(e) => Ball::from_exact(e, prec),
            Real::Ball(b) => b.clone(),
        }
    }

    fn ball_prec(&self) -> Option<u32> {
        match self {
            Real::Exact(_) => None,
            Real::Ball(b) => Some(b.precision()),
        }
    }

    /// Upper bound on `|self|`.
    pub fn abs_upper(&self) -> Rational {
        match self {
            Real::Exact(e) => match e.as_rational() {
                Some(r) => r.abs(),
                None => Ball::from_exact(e, 128).abs_upper(),
            },
            Real::Ball(b) => b.abs_upper(),
        }
    }

    pub fn is_certainly_zero(&self) -> bool {
        match self {
            Real::Exact(e) => e.is_zero(),
            Real::Ball(_) => false,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(e) => e.to_f64(),
            Real::Ball(b) => b.to_f64(),
        }
    }
}

/// Precision used when an exact value must be promoted to meet a ball.
const PROMOTION_PRECISION: u32 = 256;

fn combine(
    x: &Real,
    y: &Real,
    exact: impl Fn(&Exact, &Exact) -> Exact,
    ball: impl Fn(&Ball, &Ball) -> Ball,
) -> Real {
    match (x, y) {
        (Real::Exact(a), Real::Exact(b)) if a.compatible(b) => Real::Exact(exact(a, b)),
        _ => {
            let p = x.ball_prec().or(y.ball_prec()).unwrap_or(PROMOTION_PRECISION);
            let p = y.ball_prec().map_or(p, |q| q.min(p));
            Real::Ball(ball(&x.to_ball(p), &y.to_ball(p)))
        }
    }
}

impl<'a, 'b> Add<&'b Real> for &'a Real {
    type Output = Real;
    fn add(self, rhs: &'b Real) -> Real {
        combine(self, rhs, |a, b| a + b, |a, b| a + b)
    }
}

impl<'a, 'b> Sub<&'b Real> for &'a Real {
    type Output = Real;
    fn sub(self, rhs: &'b Real) -> Real {
        combine(self, rhs, |a, b| a - b, |a, b| a - b)
    }
}

impl<'a, 'b> Mul<&'b Real> for &'a Real {
    type Output = Real;
    fn mul(self, rhs: &'b Real) -> Real {
        combine(self, rhs, |a, b| a * b, |a, b| a * b)
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        match self {
            Real::Exact(e) => Real::Exact(-e),
            Real::Ball(b) => Real::Ball(-b),
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(e) => write!(f, "{e}"),
            Real::Ball(b) => write!(f, "{b}"),
        }
    }
}

/// `{"exact", "value", "radius"}` for exact values, `{"value", "radius"}`
/// for balls.
impl serde::Serialize for Real {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        match self {
            Real::Exact(e) => {
                let (value, mut radius) = Ball::from_exact(e, 256).to_decimal(30);
                if super::syntax::parse_exact(&value).is_ok_and(|v| v == *e) {
                    radius = "0".into();
                }
                m.serialize_entry("exact", &e.to_string())?;
                m.serialize_entry("value", &value)?;
                m.serialize_entry("radius", &radius)?;
            }
            Real::Ball(b) => {
                let (value, radius) = b.to_decimal(30);
                m.serialize_entry("value", &value)?;
                m.serialize_entry("radius", &radius)?;
            }
        }
        m.end()
    }
}

/// Row-major 2×2 matrix `(a, b; c, d)`.
#[derive(Clone, Debug)]
pub struct Mat2 {
    pub a: Real,
    pub b: Real,
    pub c: Real,
    pub d: Real,
}

impl serde::Serialize for Mat2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&[[&self.a, &self.b], [&self.c, &self.d]], s)
    }
}

impl Mat2 {
    pub fn new(a: Real, b: Real, c: Real, d: Real) -> Mat2 {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Mat2 {
        Mat2::new(Real::int(1), Real::int(0), Real::int(0), Real::int(1))
    }

    pub fn from_exact(m: [[Exact; 2]; 2]) -> Mat2 {
        let [[a, b], [c, d]] = m;
        Mat2::new(Real::Exact(a), Real::Exact(b), Real::Exact(c), Real::Exact(d))
    }

    pub fn entries(&self) -> [&Real; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn is_exact(&self) -> bool {
        self.entries().iter().all(|e| e.is_exact())
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            &(&self.a * &o.a) + &(&self.b * &o.c),
            &(&self.a * &o.b) + &(&self.b * &o.d),
            &(&self.c * &o.a) + &(&self.d * &o.c),
            &(&self.c * &o.b) + &(&self.d * &o.d),
        )
    }

    pub fn det(&self) -> Real {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.a.clone(), self.c.clone(), self.b.clone(), self.d.clone())
    }

    /// Upper bound on the largest entrywise deviation `max |self − other|`;
    /// exactly zero when both are exact and equal.
    pub fn max_deviation(&self, other: &Mat2) -> Rational {
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(x, y)| (*x - y).abs_upper_or_zero())
            .fold(Rational::zero(), |acc, v| if v > acc { v } else { acc })
    }

    /// Exact equality, or `None` when some entry is a ball.
    pub fn exact_eq(&self, other: &Mat2) -> Option<bool> {
        let mut all = true;
        for (x, y) in self.entries().iter().zip(other.entries()) {
            match (x.as_exact(), y.as_exact()) {
                (Some(p), Some(q)) if p.compatible(q) => all &= p == q,
                _ => return None,
            }
        }
        Some(all)
    }

    /// Whether every entry enclosure is consistent with `other`'s.
    pub fn overlaps(&self, other: &Mat2) -> bool {
        self.entries().iter().zip(other.entries()).all(|(x, y)| match *x - y {
            Real::Exact(e) => e.is_zero(),
            Real::Ball(b) => b.contains_zero(),
        })
    }
}

impl Real {
    fn abs_upper_or_zero(&self) -> Rational {
        match self {
            Real::Exact(e) if e.is_zero() => Rational::zero(),
            _ => self.abs_upper(),
        }
    }
}
