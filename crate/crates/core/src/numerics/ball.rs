//! Midpoint-radius ball arithmetic on binary fixed-point numbers.
//!
//! A [`Ball`] at precision `p` encloses every real in
//! `[(mid − rad)·2⁻ᵖ, (mid + rad)·2⁻ᵖ]`. Every operation rounds outward, so
//! the enclosure property is preserved through arbitrary expressions,
//! including the transcendental functions used for angles.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::exact::{Exact, Rational};

/// Extra bits carried internally by the transcendental functions.
const GUARD_BITS: u32 = 64;

#[derive(Clone, PartialEq, Eq)]
pub struct Ball {
    mid: BigInt,
    rad: BigInt,
    prec: u32,
}

fn floor_shr(x: &BigInt, k: u32) -> BigInt {
    // BigInt >> rounds toward negative infinity.
    x >> (k as usize)
}

fn ceil_shr(x: &BigInt, k: u32) -> BigInt {
    -((-x) >> (k as usize))
}

impl Ball {
    pub fn new(mid: BigInt, rad: BigInt, prec: u32) -> Self {
        debug_assert!(!rad.is_negative());
        Ball { mid, rad, prec }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn mid_raw(&self) -> &BigInt {
        &self.mid
    }

    pub fn rad_raw(&self) -> &BigInt {
        &self.rad
    }

    pub fn zero(prec: u32) -> Self {
        Ball::new(BigInt::zero(), BigInt::zero(), prec)
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        Ball::new(BigInt::from(n) << (prec as usize), BigInt::zero(), prec)
    }

    pub fn from_bigint(n: &BigInt, prec: u32) -> Self {
        Ball::new(n << (prec as usize), BigInt::zero(), prec)
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        let scaled = r.numer() << (prec as usize);
        let (q, rem) = scaled.div_mod_floor(r.denom());
        let rad = if rem.is_zero() { BigInt::zero() } else { BigInt::one() };
        Ball::new(q, rad, prec)
    }

    /// Enclosure of `√n` for a nonnegative integer `n`.
    pub fn sqrt_int(n: u64, prec: u32) -> Self {
        let scaled = BigInt::from(n) << (2 * prec as usize);
        let s = scaled.sqrt();
        let rad = if &s * &s == scaled { BigInt::zero() } else { BigInt::one() };
        Ball::new(s, rad, prec)
    }

    pub fn from_exact(x: &Exact, prec: u32) -> Self {
        let a = Ball::from_rational(x.rational_part(), prec + GUARD_BITS);
        let out = if x.is_rational() {
            a
        } else {
            let b = Ball::from_rational(x.surd_coefficient(), prec + GUARD_BITS);
            let s = Ball::sqrt_int(x.radicand(), prec + GUARD_BITS);
            a + b * s
        };
        out.with_precision(prec)
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        let r = Rational::from_float(x).expect("finite float");
        Ball::from_rational(&r, prec)
    }

    /// Re-express at a different precision, rounding outward when bits drop.
    pub fn with_precision(&self, prec: u32) -> Ball {
        use std::cmp::Ordering::*;
        match prec.cmp(&self.prec) {
            Equal => self.clone(),
            Greater => {
                let k = (prec - self.prec) as usize;
                Ball::new(&self.mid << k, &self.rad << k, prec)
            }
            Less => {
                let k = self.prec - prec;
                let mid = floor_shr(&self.mid, k);
                let rad = ceil_shr(&self.rad, k) + 1;
                Ball::new(mid, rad, prec)
            }
        }
    }

    fn aligned(&self, other: &Ball) -> (Ball, Ball) {
        let p = self.prec.min(other.prec);
        (self.with_precision(p), other.with_precision(p))
    }

    pub fn lower_raw(&self) -> BigInt {
        &self.mid - &self.rad
    }

    pub fn upper_raw(&self) -> BigInt {
        &self.mid + &self.rad
    }

    pub fn contains_zero(&self) -> bool {
        !self.lower_raw().is_positive() && !self.upper_raw().is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lower_raw().is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.upper_raw().is_negative()
    }

    /// Sign when decided by the enclosure.
    pub fn sign(&self) -> Option<i32> {
        if self.is_positive() {
            Some(1)
        } else if self.is_negative() {
            Some(-1)
        } else if self.mid.is_zero() && self.rad.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    /// Whether `other`'s enclosure lies in this one.
    pub fn contains(&self, other: &Ball) -> bool {
        let (a, b) = self.aligned(other);
        a.lower_raw() <= b.lower_raw() && b.upper_raw() <= a.upper_raw()
    }

    pub fn overlaps(&self, other: &Ball) -> bool {
        (self - other).contains_zero()
    }

    pub fn abs(&self) -> Ball {
        if self.mid.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Upper bound of `|x|` as a rational.
    pub fn abs_upper(&self) -> Rational {
        let v = self.mid.abs() + &self.rad;
        Rational::new(v, BigInt::one() << (self.prec as usize))
    }

    pub fn radius(&self) -> Rational {
        Rational::new(self.rad.clone(), BigInt::one() << (self.prec as usize))
    }

    /// The midpoint as an exact dyadic rational.
    pub fn midpoint(&self) -> Rational {
        Rational::new(self.mid.clone(), BigInt::one() << (self.prec as usize))
    }

    /// `log₂` of an upper bound on the radius; `None` for exact balls.
    pub fn radius_log2(&self) -> Option<i64> {
        if self.rad.is_zero() {
            None
        } else {
            Some(self.rad.bits() as i64 - self.prec as i64)
        }
    }

    pub fn to_f64(&self) -> f64 {
        let shift = self.mid.bits().saturating_sub(60);
        let top = (&self.mid >> (shift as usize)).to_f64().unwrap_or(f64::NAN);
        top * 2f64.powi(shift as i32 - self.prec as i32)
    }

    pub fn mul_int(&self, k: i64) -> Ball {
        Ball::new(&self.mid * k, &self.rad * k.abs(), self.prec)
    }

    pub fn mul_bigint(&self, k: &BigInt) -> Ball {
        Ball::new(&self.mid * k, &self.rad * k.abs(), self.prec)
    }

    /// Multiply by `2^k` (`k` may be negative).
    pub fn scale_pow2(&self, k: i32) -> Ball {
        if k >= 0 {
            Ball::new(&self.mid << (k as usize), &self.rad << (k as usize), self.prec)
        } else {
            let s = (-k) as u32;
            Ball::new(floor_shr(&self.mid, s), ceil_shr(&self.rad, s) + 1, self.prec)
        }
    }

    pub fn square(&self) -> Ball {
        self * self
    }

    /// Square root; the enclosure is clipped at zero from below.
    pub fn sqrt(&self) -> Ball {
        let p = self.prec as usize;
        let lo = self.lower_raw();
        assert!(!self.is_negative(), "square root of a negative ball");
        if !lo.is_positive() {
            let hi = self.upper_raw();
            let s = (hi << p).sqrt() + 1;
            let half: BigInt = (&s + 1u32) >> 1usize;
            return Ball::new(half.clone(), half, self.prec);
        }
        let m = (&self.mid << p).sqrt();
        let s_lo = (&lo << p).sqrt();
        // |√x − √m| ≤ rad / (√lo + √mid), both scaled by 2^p.
        let denom = &s_lo + &m;
        let num = &self.rad << p;
        let rad = num.div_ceil(&denom) + 1;
        Ball::new(m, rad, self.prec)
    }

    pub fn recip(&self) -> Ball {
        Ball::from_int(1, self.prec) / self
    }

    pub fn pi(prec: u32) -> Ball {
        let wp = prec + GUARD_BITS;
        // Machin: π = 16·atan(1/5) − 4·atan(1/239)
        let a = atan_series(&Ball::from_rational(&Rational::new(1.into(), 5.into()), wp));
        let b = atan_series(&Ball::from_rational(&Rational::new(1.into(), 239.into()), wp));
        (a.mul_int(16) - b.mul_int(4)).with_precision(prec)
    }

    pub fn atan(&self) -> Ball {
        let prec = self.prec;
        let mut x = self.with_precision(prec + GUARD_BITS);
        let wp = x.prec;
        let one = Ball::from_int(1, wp);
        let mut doublings = 0;
        // atan(x) = 2·atan(x / (1 + √(1 + x²)))
        while x.abs_upper() > Rational::new(1.into(), 1024.into()) {
            let s = (&one + x.square()).sqrt();
            x = &x / &(&one + &s);
            doublings += 1;
        }
        atan_series(&x).scale_pow2(doublings).with_precision(prec)
    }

    /// Angle of the vector `(x, y)`, valued in `(−π/2, 3π/2]`.
    ///
    /// Returns `None` when neither coordinate has a decided sign.
    pub fn direction_angle(x: &Ball, y: &Ball) -> Option<Ball> {
        let (x, y) = x.aligned(y);
        let prec = x.prec;
        let wp = prec + GUARD_BITS;
        let (xw, yw) = (x.with_precision(wp), y.with_precision(wp));
        let pi = Ball::pi(wp);
        let out = if x.is_positive() {
            (&yw / &xw).atan()
        } else if x.is_negative() {
            (&yw / &xw).atan() + pi
        } else if y.is_positive() {
            pi.scale_pow2(-1) - (&xw / &yw).atan()
        } else if y.is_negative() {
            pi.mul_int(3).scale_pow2(-1) - (&xw / &yw).atan()
        } else {
            return None;
        };
        Some(out.with_precision(prec))
    }

    /// `(sin θ, cos θ)`.
    pub fn sin_cos(&self) -> (Ball, Ball) {
        let prec = self.prec;
        let wp = prec + GUARD_BITS;
        let x = self.with_precision(wp);
        let two_pi = Ball::pi(wp).mul_int(2);
        let k = (&x / &two_pi).round_mid();
        let r = &x - &two_pi.mul_bigint(&k);
        let (s, c) = sin_cos_series(&r);
        (s.with_precision(prec), c.with_precision(prec))
    }

    /// Nearest integer to the midpoint.
    pub fn round_mid(&self) -> BigInt {
        let half = BigInt::one() << (self.prec as usize).saturating_sub(1);
        floor_shr(&(&self.mid + half), self.prec)
    }

    /// Floor of the enclosure when it does not straddle an integer.
    pub fn floor_exact(&self) -> Option<BigInt> {
        let lo = floor_shr(&self.lower_raw(), self.prec);
        let hi = floor_shr(&self.upper_raw(), self.prec);
        (lo == hi).then_some(lo)
    }

    /// Decimal rendering: midpoint rounded to `digits` fractional digits and
    /// a radius that also covers the rounding of the midpoint.
    pub fn to_decimal(&self, digits: u32) -> (String, String) {
        let ten = BigInt::from(10).pow(digits);
        let denom = BigInt::one() << (self.prec as usize);
        let scaled = &self.mid * &ten;
        let (q, rem) = scaled.div_mod_floor(&denom);
        let q = if (&rem << 1usize) >= denom { q + 1 } else { q };
        let rad_scaled = (&self.rad * &ten).div_ceil(&denom) + 1;
        let value = format_fixed(&q, digits);
        let radius = format_radius(&rad_scaled, digits);
        (value, radius)
    }
}

fn format_fixed(q: &BigInt, digits: u32) -> String {
    let neg = q.is_negative();
    let s = q.abs().to_string();
    let d = digits as usize;
    let s = if s.len() <= d { format!("{}{}", "0".repeat(d + 1 - s.len()), s) } else { s };
    let (int, frac) = s.split_at(s.len() - d);
    let frac = frac.trim_end_matches('0');
    let sign = if neg && (int != "0" || !frac.is_empty()) { "-" } else { "" };
    if frac.is_empty() {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// Radius `r·10^-digits` rendered as `m·e-k` with a one-digit mantissa
/// rounded up.
fn format_radius(r: &BigInt, digits: u32) -> String {
    let s = r.to_string();
    let len = s.len() as i64;
    let lead: u32 = s[..1].parse().unwrap();
    let rest_nonzero = s[1..].bytes().any(|b| b != b'0');
    let mut mant = lead + u32::from(rest_nonzero);
    let mut exp = len - 1 - digits as i64;
    if mant == 10 {
        mant = 1;
        exp += 1;
    }
    format!("{mant}e{exp}")
}

/// Alternating Taylor series for `atan` on a ball with `|x| < 1/2`.
fn atan_series(x: &Ball) -> Ball {
    let p = x.prec;
    let bound = x.abs_upper();
    assert!(bound < Rational::new(1.into(), 2.into()));
    // |x| ≤ 2^-e
    let e = bound_exponent(&bound).max(1);
    let x2 = x.square();
    let mut term = x.clone();
    let mut sum = x.clone();
    let mut k: i64 = 0;
    loop {
        k += 1;
        // Remainder after the last included term is ≤ |x|^(2k+1).
        if e * (2 * k as u64 + 1) > p as u64 + 4 {
            break;
        }
        term = &term * &x2;
        let t = &term / &Ball::from_int(2 * k + 1, p);
        if k % 2 == 1 {
            sum = &sum - &t;
        } else {
            sum = &sum + &t;
        }
    }
    sum.rad += 1;
    sum
}

/// Largest `e` with `bound ≤ 2^-e`, for `0 < bound < 1`.
fn bound_exponent(bound: &Rational) -> u64 {
    if bound.is_zero() {
        return u64::MAX / 4;
    }
    let num_bits = bound.numer().bits();
    let den_bits = bound.denom().bits();
    // bound < 2^(num_bits) / 2^(den_bits - 1)
    (den_bits - 1).saturating_sub(num_bits)
}

fn sin_cos_series(r: &Ball) -> (Ball, Ball) {
    let p = r.prec;
    let bound = r.abs_upper().to_f64().unwrap_or(8.0).max(1e-300);
    let x2 = r.square();
    let mut sin = r.clone();
    let mut cos = Ball::from_int(1, p);
    let mut term_s = r.clone();
    let mut term_c = Ball::from_int(1, p);
    let mut n: i64 = 1;
    let mut log2_rem;
    loop {
        // next sine term index 2n+1, cosine 2n
        term_c = &(&term_c * &x2) / &Ball::from_int((2 * n - 1) * (2 * n), p);
        term_s = &(&term_s * &x2) / &Ball::from_int((2 * n) * (2 * n + 1), p);
        if n % 2 == 1 {
            cos = &cos - &term_c;
            sin = &sin - &term_s;
        } else {
            cos = &cos + &term_c;
            sin = &sin + &term_s;
        }
        n += 1;
        // remainder ≤ |x|^(2n)/(2n)! for both series
        log2_rem = (2 * n) as f64 * bound.log2() - ln_factorial(2 * n) / std::f64::consts::LN_2;
        if log2_rem < -(p as f64) - 8.0 {
            break;
        }
    }
    sin.rad += 2;
    cos.rad += 2;
    (sin, cos)
}

fn ln_factorial(n: i64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (v, r) = self.to_decimal(20);
        write!(f, "Ball({v} ± {r})")
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (v, r) = self.to_decimal(30);
        write!(f, "{v} ± {r}")
    }
}

fn add_impl(x: &Ball, y: &Ball) -> Ball {
    let (x, y) = x.aligned(y);
    Ball::new(&x.mid + &y.mid, &x.rad + &y.rad, x.prec)
}

fn sub_impl(x: &Ball, y: &Ball) -> Ball {
    let (x, y) = x.aligned(y);
    Ball::new(&x.mid - &y.mid, &x.rad + &y.rad, x.prec)
}

fn mul_impl(x: &Ball, y: &Ball) -> Ball {
    let (x, y) = x.aligned(y);
    let p = x.prec;
    let prod = &x.mid * &y.mid;
    let exact_prod = prod.clone() == (floor_shr(&prod, p) << (p as usize));
    let mid = floor_shr(&prod, p);
    let err = x.mid.abs() * &y.rad + y.mid.abs() * &x.rad + &x.rad * &y.rad;
    let mut rad = ceil_shr(&err, p);
    if !exact_prod || !err.is_zero() {
        rad += 1;
    }
    Ball::new(mid, rad, p)
}

fn div_impl(x: &Ball, y: &Ball) -> Ball {
    let (x, y) = x.aligned(y);
    assert!(!y.contains_zero(), "division by a ball containing zero");
    let p = x.prec as usize;
    let num = &x.mid << p;
    let (q, rem) = num.div_mod_floor(&y.mid);
    let denom = y.mid.abs() - &y.rad;
    let err_num = (&x.rad << p) + q.abs() * &y.rad;
    let mut rad = err_num.div_ceil(&denom);
    if !rem.is_zero() || !rad.is_zero() {
        rad += 1;
    }
    Ball::new(q, rad, x.prec)
}

macro_rules! forward_ball {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl $tr<Ball> for Ball {
            type Output = Ball;
            fn $method(self, rhs: Ball) -> Ball {
                $imp(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a Ball> for Ball {
            type Output = Ball;
            fn $method(self, rhs: &'a Ball) -> Ball {
                $imp(&self, rhs)
            }
        }
        impl<'a> $tr<Ball> for &'a Ball {
            type Output = Ball;
            fn $method(self, rhs: Ball) -> Ball {
                $imp(self, &rhs)
            }
        }
        impl<'a, 'b> $tr<&'b Ball> for &'a Ball {
            type Output = Ball;
            fn $method(self, rhs: &'b Ball) -> Ball {
                $imp(self, rhs)
            }
        }
    };
}

forward_ball!(Add, add, add_impl);
forward_ball!(Sub, sub, sub_impl);
forward_ball!(Mul, mul, mul_impl);
forward_ball!(Div, div, div_impl);

impl Neg for Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball::new(-self.mid, self.rad, self.prec)
    }
}

impl<'a> Neg for &'a Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        -(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 256;

    #[test]
    fn pi_digits() {
        let pi = Ball::pi(P);
        let (v, _) = pi.to_decimal(40);
        assert!(v.starts_with("3.14159265358979323846264338327950288419"));
        assert!(pi.radius_log2().unwrap() < -240);
    }

    #[test]
    fn atan_one_is_quarter_pi() {
        let a = Ball::from_int(1, P).atan();
        let q = Ball::pi(P).scale_pow2(-2);
        assert!(a.overlaps(&q));
        assert!(a.radius_log2().unwrap() < -230);
    }

    #[test]
    fn sin_cos_identities() {
        let x = Ball::from_rational(&Rational::new(7.into(), 3.into()), P);
        let (s, c) = x.sin_cos();
        let one = &s * &s + &c * &c;
        assert!(one.overlaps(&Ball::from_int(1, P)));
        let (s6, c6) = (Ball::pi(P) / Ball::from_int(6, P)).sin_cos();
        assert!(s6.overlaps(&Ball::from_rational(&Rational::new(1.into(), 2.into()), P)));
        assert!((c6.square()).overlaps(&Ball::from_rational(&Rational::new(3.into(), 4.into()), P)));
    }

    #[test]
    fn sqrt_and_exact_conversion() {
        let s = Ball::sqrt_int(2, P);
        assert!(s.square().overlaps(&Ball::from_int(2, P)));
        let q = Exact::quadratic(Rational::new(1.into(), 2.into()), Rational::new((-1).into(), 4.into()), 2);
        let b = Ball::from_exact(&q, P);
        assert!(b.is_positive());
        assert!((b.to_f64() - (0.5 - 2f64.sqrt() / 4.0)).abs() < 1e-15);
    }

    #[test]
    fn direction_angles_cover_all_quadrants() {
        let pi = Ball::pi(P);
        let cases = [((1, 0), 0.0), ((0, 1), 0.5), ((-1, 0), 1.0), ((0, -1), 1.5), ((-1, -1), 1.25)];
        for ((x, y), turns) in cases {
            let a = Ball::direction_angle(&Ball::from_int(x, P), &Ball::from_int(y, P)).unwrap();
            let expect = pi.clone() * Ball::from_f64(turns, P);
            assert!(a.overlaps(&expect), "{x},{y}: {a:?}");
        }
    }

    #[test]
    fn decimal_rendering_covers_value() {
        let third = Ball::from_rational(&Rational::new(1.into(), 3.into()), P);
        let (v, r) = third.to_decimal(10);
        assert_eq!(v, "0.3333333333");
        assert_eq!(r, "2e-10");
        let (v, _) = Ball::from_int(-2, P).to_decimal(5);
        assert_eq!(v, "-2");
    }
}

/// `{"value", "radius"}` as decimal strings.
impl serde::Serialize for Ball {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let (value, radius) = self.to_decimal(30);
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("value", &value)?;
        m.serialize_entry("radius", &radius)?;
        m.end()
    }
}
