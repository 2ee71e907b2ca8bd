//! Exact planar geometry over a quadratic field.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::Serialize;

use crate::numerics::{Exact, Mat2, Real};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Exact,
    pub y: Exact,
}

pub type Vector = Point;

impl Point {
    pub fn new(x: Exact, y: Exact) -> Point {
        Point { x, y }
    }

    pub fn int(x: i64, y: i64) -> Point {
        Point::new(Exact::int(x), Exact::int(y))
    }

    pub fn frac(x: (i64, i64), y: (i64, i64)) -> Point {
        Point::new(Exact::frac(x.0, x.1), Exact::frac(y.0, y.1))
    }

    pub fn origin() -> Point {
        Point::int(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn dot(&self, o: &Point) -> Exact {
        &(&self.x * &o.x) + &(&self.y * &o.y)
    }

    pub fn cross(&self, o: &Point) -> Exact {
        &(&self.x * &o.y) - &(&self.y * &o.x)
    }

    pub fn norm_sq(&self) -> Exact {
        self.dot(self)
    }

    pub fn scale(&self, s: &Exact) -> Point {
        Point::new(&self.x * s, &self.y * s)
    }

    /// Counterclockwise quarter turn.
    pub fn perp(&self) -> Point {
        Point::new(-self.y.clone(), self.x.clone())
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [self.x.to_f64(), self.y.to_f64()]
    }

    /// Radicand of the field the coordinates live in (1 if rational).
    pub fn field(&self) -> u64 {
        let d = self.x.radicand().max(self.y.radicand());
        d.max(1)
    }

    pub fn compatible(&self, o: &Point) -> bool {
        let (a, b) = (self.field(), o.field());
        a == 1 || b == 1 || a == b
    }

    /// Exact length when `|v|²` is a rational square, else `None`.
    pub fn exact_length(&self) -> Option<Exact> {
        self.norm_sq().sqrt()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq([self.x.to_string(), self.y.to_string()])
    }
}

impl<'a, 'b> Add<&'b Point> for &'a Point {
    type Output = Point;
    fn add(self, o: &'b Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl<'a, 'b> Sub<&'b Point> for &'a Point {
    type Output = Point;
    fn sub(self, o: &'b Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Sign of the turn `a → b → c`: positive for a left turn.
pub fn orient(a: &Point, b: &Point, c: &Point) -> i32 {
    (b - a).cross(&(c - a)).signum()
}

/// Whether `p` lies on the closed segment `[a, b]`.
pub fn on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    orient(a, b, p) == 0 && (p - a).dot(&(p - b)).signum() <= 0
}

/// Whether closed segments `[a, b]` and `[c, d]` share a point.
pub fn segments_intersect(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d)
}

/// Exact 2×2 matrix `(a, b; c, d)` over the coordinate field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactMat {
    pub a: Exact,
    pub b: Exact,
    pub c: Exact,
    pub d: Exact,
}

impl ExactMat {
    pub fn new(a: Exact, b: Exact, c: Exact, d: Exact) -> ExactMat {
        ExactMat { a, b, c, d }
    }

    pub fn identity() -> ExactMat {
        ExactMat::new(Exact::one(), Exact::zero(), Exact::zero(), Exact::one())
    }

    /// Linear reflection fixing the line spanned by `dir`.
    pub fn reflection_along(dir: &Vector) -> ExactMat {
        let (dx, dy) = (&dir.x, &dir.y);
        let n = dir.norm_sq().recip();
        let c2 = &(&(dx * dx) - &(dy * dy)) * &n;
        let s2 = &(&(dx * dy) * &Exact::int(2)) * &n;
        ExactMat::new(c2.clone(), s2.clone(), s2, -c2)
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        Point::new(&(&self.a * &v.x) + &(&self.b * &v.y), &(&self.c * &v.x) + &(&self.d * &v.y))
    }

    pub fn mul(&self, o: &ExactMat) -> ExactMat {
        ExactMat::new(
            &(&self.a * &o.a) + &(&self.b * &o.c),
            &(&self.a * &o.b) + &(&self.b * &o.d),
            &(&self.c * &o.a) + &(&self.d * &o.c),
            &(&self.c * &o.b) + &(&self.d * &o.d),
        )
    }

    pub fn det(&self) -> Exact {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn is_identity(&self) -> bool {
        *self == ExactMat::identity()
    }

    /// Inverse of an orthogonal matrix (its transpose).
    pub fn orthogonal_inverse(&self) -> ExactMat {
        ExactMat::new(self.a.clone(), self.c.clone(), self.b.clone(), self.d.clone())
    }

    pub fn to_mat2(&self) -> Mat2 {
        Mat2::new(
            Real::Exact(self.a.clone()),
            Real::Exact(self.b.clone()),
            Real::Exact(self.c.clone()),
            Real::Exact(self.d.clone()),
        )
    }

    pub fn entries(&self) -> [&Exact; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

impl Serialize for ExactMat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq([
            [self.a.to_string(), self.b.to_string()],
            [self.c.to_string(), self.d.to_string()],
        ])
    }
}

/// Exact isometry `x ↦ m·x + t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Isometry {
    pub linear: ExactMat,
    pub translation: Vector,
}

impl Isometry {
    pub fn identity() -> Isometry {
        Isometry { linear: ExactMat::identity(), translation: Point::origin() }
    }

    pub fn translation(t: Vector) -> Isometry {
        Isometry { linear: ExactMat::identity(), translation: t }
    }

    /// Reflection across the line through `a` and `b`.
    pub fn reflection(a: &Point, b: &Point) -> Isometry {
        let m = ExactMat::reflection_along(&(b - a));
        let t = a - &m.apply(a);
        Isometry { linear: m, translation: t }
    }

    pub fn apply(&self, p: &Point) -> Point {
        &self.linear.apply(p) + &self.translation
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            linear: self.linear.mul(&other.linear),
            translation: self.apply(&other.translation),
        }
    }

    pub fn inverse(&self) -> Isometry {
        let inv = self.linear.orthogonal_inverse();
        let t = -inv.apply(&self.translation);
        Isometry { linear: inv, translation: t }
    }

    pub fn is_orientation_preserving(&self) -> bool {
        self.linear.det().signum() > 0
    }
}

/// Area of a polygon given by its vertices, positive when counterclockwise.
pub fn signed_area2(vertices: &[Point]) -> Exact {
    let n = vertices.len();
    (0..n).fold(Exact::zero(), |acc, i| &acc + &vertices[i].cross(&vertices[(i + 1) % n]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflection_across_hypotenuse() {
        let r = Isometry::reflection(&Point::int(1, 0), &Point::int(0, 1));
        assert_eq!(r.apply(&Point::int(0, 0)), Point::int(1, 1));
        assert!(r.compose(&r) == Isometry::identity());
        assert!(!r.is_orientation_preserving());
    }

    #[test]
    fn segment_predicates() {
        assert!(segments_intersect(&Point::int(0, 0), &Point::int(2, 2), &Point::int(0, 2), &Point::int(2, 0)));
        assert!(!segments_intersect(&Point::int(0, 0), &Point::int(1, 0), &Point::int(0, 1), &Point::int(1, 1)));
        assert!(segments_intersect(&Point::int(0, 0), &Point::int(2, 0), &Point::int(1, 0), &Point::int(1, 5)));
        assert!(on_segment(&Point::int(1, 1), &Point::int(0, 0), &Point::int(2, 2)));
    }

    #[test]
    fn isometry_inverse() {
        let r = Isometry::reflection(&Point::int(1, 0), &Point::int(1, 1))
            .compose(&Isometry::translation(Point::frac((1, 3), (2, 1))));
        let p = Point::frac((5, 7), (-1, 2));
        assert_eq!(r.inverse().apply(&r.apply(&p)), p);
    }
}
