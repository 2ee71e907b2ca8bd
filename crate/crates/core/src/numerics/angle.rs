//! Angle coefficients `λ` (the angle is `λπ`) and the rotations they define.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::ball::Ball;
use super::exact::{rat_int, Exact, Rational};
use super::real::{Mat2, Real};

#[derive(Clone, Debug)]
pub enum AngleValue {
    Rational(Rational),
    /// `a + b·√d` with `b ≠ 0`.
    Quadratic(Exact),
    NumericBall(Ball),
}

impl AngleValue {
    pub fn rational(p: i64, q: i64) -> AngleValue {
        AngleValue::Rational(Rational::new(p.into(), q.into()))
    }

    pub fn from_exact(x: Exact) -> AngleValue {
        match x.as_rational() {
            Some(r) => AngleValue::Rational(r.clone()),
            None => AngleValue::Quadratic(x),
        }
    }

    pub fn from_real(x: Real) -> AngleValue {
        match x {
            Real::Exact(e) => AngleValue::from_exact(e),
            Real::Ball(b) => AngleValue::NumericBall(b),
        }
    }

    pub fn as_exact(&self) -> Option<Exact> {
        match self {
            AngleValue::Rational(r) => Some(Exact::from_rational(r.clone())),
            AngleValue::Quadratic(q) => Some(q.clone()),
            AngleValue::NumericBall(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, AngleValue::NumericBall(_))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            AngleValue::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn to_real(&self) -> Real {
        match self.as_exact() {
            Some(e) => Real::Exact(e),
            None => match self {
                AngleValue::NumericBall(b) => Real::Ball(b.clone()),
                _ => unreachable!(),
            },
        }
    }

    pub fn to_ball(&self, prec: u32) -> Ball {
        match self {
            AngleValue::NumericBall(b) => b.with_precision(prec.min(b.precision())),
            other => Ball::from_exact(&other.as_exact().unwrap(), prec),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_real().to_f64()
    }

    pub fn add(&self, other: &AngleValue) -> AngleValue {
        AngleValue::from_real(&self.to_real() + &other.to_real())
    }

    pub fn sub(&self, other: &AngleValue) -> AngleValue {
        AngleValue::from_real(&self.to_real() - &other.to_real())
    }

    pub fn add_int(&self, k: i64) -> AngleValue {
        self.add(&AngleValue::Rational(rat_int(k)))
    }

    /// Exact decomposition over `{1} ∪ {√d}`; `None` for balls.
    pub fn lin_comb(&self) -> Option<LinComb> {
        self.as_exact().map(|e| LinComb::from_exact(&e))
    }

    /// Whether the value is in `(lo, hi)`, decided exactly or by the
    /// enclosure. `None` when a ball straddles a bound.
    pub fn strictly_between(&self, lo: i64, hi: i64) -> Option<bool> {
        match self.as_exact() {
            Some(e) => Some(e > Exact::int(lo) && e < Exact::int(hi)),
            None => {
                let b = self.to_ball(256);
                let above = (&b - &Ball::from_int(lo, b.precision())).sign()?;
                let below = (&Ball::from_int(hi, b.precision()) - &b).sign()?;
                Some(above > 0 && below > 0)
            }
        }
    }
}

impl fmt::Display for AngleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AngleValue::Rational(r) => write!(f, "{}", Exact::from_rational(r.clone())),
            AngleValue::Quadratic(q) => write!(f, "{q}"),
            AngleValue::NumericBall(b) => write!(f, "{b}"),
        }
    }
}

/// `{"exact", "value", "radius"}` for exact angles, `{"value", "radius"}`
/// for balls. Values are decimal strings in units of π.
impl Serialize for AngleValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            AngleValue::NumericBall(b) => Real::Ball(b.clone()).serialize(s),
            AngleValue::Rational(r) => Real::Exact(Exact::from_rational(r.clone())).serialize(s),
            AngleValue::Quadratic(e) => Real::Exact(e.clone()).serialize(s),
        }
    }
}

/// Tables of `cos(kπ/6)` and `sin(kπ/6)` for `k = 0..12`.
fn twelfth_turn(k: u32) -> (Exact, Exact) {
    let half = Exact::frac(1, 2);
    let r3 = Exact::quadratic(Rational::zero(), Rational::new(1.into(), 2.into()), 3);
    let z = Exact::zero();
    let one = Exact::one();
    let table = [
        (one.clone(), z.clone()),
        (r3.clone(), half.clone()),
        (half.clone(), r3.clone()),
        (z.clone(), one.clone()),
        (-half.clone(), r3.clone()),
        (-r3.clone(), half.clone()),
        (-one.clone(), z.clone()),
        (-r3.clone(), -half.clone()),
        (-half.clone(), -r3.clone()),
        (z.clone(), -one.clone()),
        (half.clone(), -r3.clone()),
        (r3.clone(), -half.clone()),
    ];
    table[(k % 12) as usize].clone()
}

/// Exact `(cos 2λπ, sin 2λπ)` when `λ`'s denominator divides 12 after
/// doubling, i.e. `λ` has denominator in `{1, 2, 3, 4, 6}`.
pub fn exact_cos_sin(lambda: &Rational) -> Option<(Exact, Exact)> {
    let t = lambda - lambda.floor();
    let k = &t * rat_int(12);
    if !k.is_integer() {
        return None;
    }
    Some(twelfth_turn(k.to_integer().to_u32()?))
}

/// Rotation by `2λπ`.
pub fn rotation_matrix(lambda: &AngleValue, prec: u32) -> Mat2 {
    if let Some(r) = lambda.as_rational() {
        if let Some((c, s)) = exact_cos_sin(r) {
            return Mat2::from_exact([[c.clone(), -s.clone()], [s, c]]);
        }
    }
    let wp = prec + 32;
    let theta = Ball::pi(wp).mul_int(2) * lambda.to_ball(wp);
    let (s, c) = theta.sin_cos();
    let (s, c) = (s.with_precision(prec), c.with_precision(prec));
    Mat2::new(Real::Ball(c.clone()), Real::Ball(-s.clone()), Real::Ball(s), Real::Ball(c))
}

/// Basis elements for exact linear combinations of angles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Basis {
    /// `√d` for square-free `d ≥ 2`.
    Sqrt(u64),
    /// An opaque numeric generator, identified by index.
    Generator(usize),
}

/// `q₀ + Σ qᵢ·eᵢ` with rational coefficients over [`Basis`] elements
/// (taken to be linearly independent over `Q` together with 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LinComb {
    pub rational: Rational,
    pub terms: BTreeMap<Basis, Rational>,
}

impl LinComb {
    pub fn rational(r: Rational) -> LinComb {
        LinComb { rational: r, terms: BTreeMap::new() }
    }

    pub fn generator(j: usize) -> LinComb {
        let mut terms = BTreeMap::new();
        terms.insert(Basis::Generator(j), rat_int(1));
        LinComb { rational: Rational::zero(), terms }
    }

    pub fn from_exact(e: &Exact) -> LinComb {
        let mut terms = BTreeMap::new();
        if !e.is_rational() {
            terms.insert(Basis::Sqrt(e.radicand()), e.surd_coefficient().clone());
        }
        LinComb { rational: e.rational_part().clone(), terms }
    }

    pub fn is_rational(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &LinComb) -> LinComb {
        let mut out = self.clone();
        out.rational += &o.rational;
        for (k, v) in &o.terms {
            let e = out.terms.entry(*k).or_insert_with(Rational::zero);
            *e += v;
            if e.is_zero() {
                out.terms.remove(k);
            }
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> LinComb {
        if s.is_zero() {
            return LinComb::default();
        }
        LinComb {
            rational: &self.rational * s,
            terms: self.terms.iter().map(|(k, v)| (*k, v * s)).collect(),
        }
    }

    pub fn neg(&self) -> LinComb {
        self.scale(&rat_int(-1))
    }

    pub fn sub(&self, o: &LinComb) -> LinComb {
        self.add(&o.neg())
    }

    /// Reduce the rational part into `[0, m)`.
    pub fn reduce_mod(&self, m: i64) -> LinComb {
        let m = rat_int(m);
        let q = (&self.rational / &m).floor();
        LinComb { rational: &self.rational - q * m, terms: self.terms.clone() }
    }

    pub fn denominator_lcm(&self) -> BigInt {
        self.terms
            .values()
            .chain(std::iter::once(&self.rational))
            .fold(BigInt::from(1), |acc, r| acc.lcm(r.denom()))
    }

    pub fn is_negative_rational(&self) -> bool {
        self.is_rational() && self.rational.is_negative()
    }
}

impl fmt::Display for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Exact::from_rational(self.rational.clone()))?;
        for (b, q) in &self.terms {
            let q = Exact::from_rational(q.clone());
            match b {
                Basis::Sqrt(d) => write!(f, " + ({q})*sqrt({d})")?,
                Basis::Generator(j) => write!(f, " + ({q})*g{j}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(m: &Mat2) -> [Exact; 4] {
        let e = m.entries();
        [0, 1, 2, 3].map(|i| e[i].as_exact().unwrap().clone())
    }

    #[test]
    fn rotation_half_turn() {
        let m = rotation_matrix(&AngleValue::rational(1, 2), 256);
        assert_eq!(exact(&m), [Exact::int(-1), Exact::int(0), Exact::int(0), Exact::int(-1)]);
    }

    #[test]
    fn rotation_quarter_turn() {
        let m = rotation_matrix(&AngleValue::rational(1, 4), 256);
        assert_eq!(exact(&m), [Exact::int(0), Exact::int(-1), Exact::int(1), Exact::int(0)]);
    }

    #[test]
    fn rotation_third_turn() {
        let m = rotation_matrix(&AngleValue::rational(1, 3), 256);
        let r3 = Exact::quadratic(Rational::zero(), Rational::new(1.into(), 2.into()), 3);
        assert_eq!(
            exact(&m),
            [Exact::frac(-1, 2), -r3.clone(), r3, Exact::frac(-1, 2)]
        );
    }

    #[test]
    fn non_table_rotation_is_a_ball() {
        let m = rotation_matrix(&AngleValue::rational(1, 8), 256);
        assert!(!m.is_exact());
        let h = Ball::sqrt_int(2, 256).scale_pow2(-1);
        assert!(m.a.to_ball(256).overlaps(&h));
    }

    #[test]
    fn lin_comb_arithmetic() {
        let a = LinComb::from_exact(&Exact::quadratic(rat_int(1), Rational::new(1.into(), 4.into()), 2));
        let b = a.scale(&rat_int(4));
        assert_eq!(b.terms[&Basis::Sqrt(2)], rat_int(1));
        assert!(b.sub(&b).is_rational());
        assert_eq!(LinComb::rational(Rational::new(7.into(), 2.into())).reduce_mod(2).rational, Rational::new(3.into(), 2.into()));
    }
}
