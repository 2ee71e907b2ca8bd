//! Exact scalars in a real quadratic field `Q(√d)`.
//!
//! A value is `a + b·√d` with rational `a`, `b` and square-free `d ≥ 2`, or a
//! plain rational (`d = 1`, `b = 0`). Arithmetic between two values is only
//! defined when they live in the same field; a rational operand adopts the
//! field of the other side.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> Rational {
    BigRational::from_integer(BigInt::from(p))
}

/// Largest `k` with `k² | n` removed: returns `(square-free part, k)` so that
/// `n = k² · part`.
pub fn square_free_decompose(n: u64) -> (u64, u64) {
    let mut part = n;
    let mut k = 1u64;
    let mut f = 2u64;
    while f * f <= part {
        while part % (f * f) == 0 {
            part /= f * f;
            k *= f;
        }
        f += 1;
    }
    (part, k)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Exact {
    a: Rational,
    b: Rational,
    /// 1 for rationals, otherwise a square-free integer ≥ 2.
    d: u64,
}

impl Exact {
    pub fn from_rational(a: Rational) -> Self {
        Exact { a, b: Rational::zero(), d: 1 }
    }

    pub fn int(n: i64) -> Self {
        Self::from_rational(rat_int(n))
    }

    pub fn frac(p: i64, q: i64) -> Self {
        Self::from_rational(rat(p, q))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    /// `a + b·√n` for any positive integer `n`; square factors of `n` are
    /// pulled into `b` and perfect squares collapse to a rational.
    pub fn quadratic(a: Rational, b: Rational, n: u64) -> Self {
        assert!(n >= 1, "radicand must be positive");
        let (d, k) = square_free_decompose(n);
        let b = b * Rational::from_integer(BigInt::from(k));
        if d == 1 {
            return Self::from_rational(a + b);
        }
        Exact { a, b, d }.normalized()
    }

    /// `√n` exactly.
    pub fn sqrt_int(n: u64) -> Self {
        Self::quadratic(Rational::zero(), Rational::one(), n)
    }

    fn normalized(self) -> Self {
        if self.b.is_zero() {
            Exact { a: self.a, b: self.b, d: 1 }
        } else {
            self
        }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn surd_coefficient(&self) -> &Rational {
        &self.b
    }

    /// Field radicand, 1 when the value is rational.
    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.d == 1
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn common_field(&self, other: &Exact) -> u64 {
        match (self.d, other.d) {
            (1, d) | (d, 1) => d,
            (d, e) if d == e => d,
            (d, e) => panic!("mixed quadratic fields Q(√{d}) and Q(√{e})"),
        }
    }

    /// Whether `self` and `other` can be combined without leaving a single
    /// quadratic field.
    pub fn compatible(&self, other: &Exact) -> bool {
        self.d == 1 || other.d == 1 || self.d == other.d
    }

    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // Opposite signs: compare a² with b²·d.
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * Rational::from_integer(BigInt::from(self.d));
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn abs(&self) -> Exact {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn conjugate(&self) -> Exact {
        Exact { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    /// Field norm `a² − d·b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(BigInt::from(self.d))
    }

    pub fn recip(&self) -> Exact {
        assert!(!self.is_zero(), "division by zero");
        if self.is_rational() {
            return Exact::from_rational(self.a.recip());
        }
        let n = self.norm();
        Exact {
            a: &self.a / &n,
            b: -&self.b / &n,
            d: self.d,
        }
        .normalized()
    }

    pub fn square(&self) -> Exact {
        self * self
    }

    /// Exact square root when the value is the square of a rational or a
    /// rational multiple of a square root of a rational; `None` otherwise.
    pub fn sqrt(&self) -> Option<Exact> {
        let r = self.as_rational()?;
        match r.signum().to_i32() {
            Some(0) => return Some(Exact::zero()),
            Some(-1) => return None,
            _ => {}
        }
        // √(p/q) = √(p·q)/q
        let num = r.numer() * r.denom();
        let n = num.to_u64()?;
        let (part, k) = square_free_decompose(n);
        let coeff = Rational::new(BigInt::from(k), r.denom().clone());
        if part == 1 {
            Some(Exact::from_rational(coeff))
        } else {
            Some(Exact::quadratic(Rational::zero(), coeff, part))
        }
    }

    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.a.floor().to_integer();
        }
        let mut prec = 128;
        loop {
            let ball = super::ball::Ball::from_exact(self, prec);
            if let Some(f) = ball.floor_exact() {
                return f;
            }
            prec *= 2;
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.d == 1 {
            a
        } else {
            a + self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
        }
    }

    pub fn cmp_exact(&self, other: &Exact) -> Ordering {
        match (self - other).signum() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    pub fn min(self, other: Exact) -> Exact {
        if self.cmp_exact(&other) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Exact) -> Exact {
        if self.cmp_exact(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }
}

fn sign_of(r: &Rational) -> i32 {
    match r.numer().sign() {
        Sign::Plus => 1,
        Sign::Minus => -1,
        Sign::NoSign => 0,
    }
}

impl PartialOrd for Exact {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exact {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

impl From<Rational> for Exact {
    fn from(r: Rational) -> Self {
        Exact::from_rational(r)
    }
}

impl From<i64> for Exact {
    fn from(n: i64) -> Self {
        Exact::int(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr<Exact> for Exact {
            type Output = Exact;
            fn $method(self, rhs: Exact) -> Exact {
                $imp(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a Exact> for Exact {
            type Output = Exact;
            fn $method(self, rhs: &'a Exact) -> Exact {
                $imp(&self, rhs)
            }
        }
        impl<'a> $tr<Exact> for &'a Exact {
            type Output = Exact;
            fn $method(self, rhs: Exact) -> Exact {
                $imp(self, &rhs)
            }
        }
        impl<'a, 'b> $tr<&'b Exact> for &'a Exact {
            type Output = Exact;
            fn $method(self, rhs: &'b Exact) -> Exact {
                $imp(self, rhs)
            }
        }
    };
}

fn add_impl(x: &Exact, y: &Exact) -> Exact {
    let d = x.common_field(y);
    Exact { a: &x.a + &y.a, b: &x.b + &y.b, d }.normalized()
}

fn sub_impl(x: &Exact, y: &Exact) -> Exact {
    let d = x.common_field(y);
    Exact { a: &x.a - &y.a, b: &x.b - &y.b, d }.normalized()
}

fn mul_impl(x: &Exact, y: &Exact) -> Exact {
    let d = x.common_field(y);
    let dd = Rational::from_integer(BigInt::from(d));
    let a = &x.a * &y.a + &x.b * &y.b * dd;
    let b = &x.a * &y.b + &x.b * &y.a;
    Exact { a, b, d }.normalized()
}

fn div_impl(x: &Exact, y: &Exact) -> Exact {
    if y.is_rational() {
        let r = &y.a;
        assert!(!r.is_zero(), "division by zero");
        return Exact { a: &x.a / r, b: &x.b / r, d: x.d }.normalized();
    }
    mul_impl(x, &y.recip())
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, div_impl);

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        Exact { a: -self.a, b: -self.b, d: self.d }
    }
}

impl<'a> Neg for &'a Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        -(self.clone())
    }
}

fn fmt_rational(r: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Canonical scalar syntax: `p`, `p/q`, or `a+b*sqrt(d)` with `a`, `b` in
/// the first two forms. Parsing this output reproduces the value exactly.
impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 1 {
            return fmt_rational(&self.a, f);
        }
        fmt_rational(&self.a, f)?;
        if self.b.is_negative() {
            f.write_str("-")?;
            fmt_rational(&-self.b.clone(), f)?;
        } else {
            f.write_str("+")?;
            fmt_rational(&self.b, f)?;
        }
        write!(f, "*sqrt({})", self.d)
    }
}

impl serde::Serialize for Exact {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Exact({self})")
    }
}

/// Least common multiple of rational denominators.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_normalizes_square_factors() {
        let x = Exact::sqrt_int(8);
        assert_eq!(x.radicand(), 2);
        assert_eq!(x.surd_coefficient(), &rat_int(2));
        assert!(Exact::sqrt_int(9).is_rational());
    }

    #[test]
    fn sign_of_mixed_terms() {
        // 3 - 2√2 > 0, 1 - √2 < 0
        let a = Exact::quadratic(rat_int(3), rat_int(-2), 2);
        assert_eq!(a.signum(), 1);
        let b = Exact::quadratic(rat_int(1), rat_int(-1), 2);
        assert_eq!(b.signum(), -1);
    }

    #[test]
    fn field_operations() {
        let s = Exact::sqrt_int(3);
        assert_eq!(&s * &s, Exact::int(3));
        let x = Exact::quadratic(rat_int(1), rat_int(1), 2);
        let y = x.recip();
        assert_eq!(&x * &y, Exact::one());
        assert_eq!((&x / &x), Exact::one());
    }

    #[test]
    fn exact_sqrt_of_rationals() {
        assert_eq!(Exact::frac(9, 4).sqrt(), Some(Exact::frac(3, 2)));
        let h = Exact::frac(1, 2).sqrt().unwrap();
        assert_eq!(&h * &h, Exact::frac(1, 2));
        assert_eq!(Exact::int(-1).sqrt(), None);
    }

    #[test]
    #[should_panic]
    fn mixing_fields_panics() {
        let _ = Exact::sqrt_int(2) + Exact::sqrt_int(3);
    }
}
