//! Integer relations among `(μ_1, …, μ_N, 1)` and the rank of the subgroup
//! of the circle `R/Z` generated by the classes `μ_k mod 1`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::angle::{AngleValue, Basis, LinComb};
use super::ball::Ball;
use super::exact::Rational;
use super::lattice::{integer_kernel, lll, short_vectors, torsion_order, IVec};
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION_BITS: u32 = 256;
pub const DEFAULT_MAX_COEFF: u64 = 50;

/// `Σ n_k μ_k − m`, bounded in absolute value by `residual`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegerRelation {
    #[serde(serialize_with = "ser_bigints")]
    pub coefficients: Vec<BigInt>,
    #[serde(serialize_with = "ser_bigint")]
    pub m: BigInt,
    #[serde(serialize_with = "ser_rational")]
    pub residual: Rational,
}

impl IntegerRelation {
    pub fn max_coeff(&self) -> BigInt {
        self.coefficients.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_rational<S: serde::Serializer>(v: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// How a "no relation" answer, or a rank, was established.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Decided by exact linear algebra over `Q(√d₁, …)`.
    Exact,
    /// No relation with `max |n_k| ≤ max_coeff` outside the reported ones,
    /// certified at `precision_bits` by a lattice norm bound.
    Bounded { max_coeff: u64, precision_bits: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RelationOutcome {
    Found { relation: IntegerRelation },
    None { certificate: Certificate },
}

impl RelationOutcome {
    pub fn relation(&self) -> Option<&IntegerRelation> {
        match self {
            RelationOutcome::Found { relation } => Some(relation),
            RelationOutcome::None { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CircleRank {
    pub free_rank: usize,
    #[serde(serialize_with = "ser_bigint")]
    pub torsion_order: BigInt,
    /// A basis of the relation lattice (exact) or of the certified part of it.
    pub relations: Vec<IntegerRelation>,
    pub certificate: Certificate,
}

/// Search for `Σ n_k μ_k = m` with `max |n_k| ≤ max_coeff`.
pub fn find_integer_relation(
    values: &[AngleValue],
    max_coeff: u64,
    precision_bits: u32,
) -> Result<RelationOutcome> {
    assert!(!values.is_empty() && max_coeff >= 1);
    let bound = BigInt::from(max_coeff);
    match exact_kernel(values) {
        Some(kernel) => {
            let n = values.len();
            let best = smallest_in_box(&kernel, n, &bound)?;
            Ok(match best {
                Some(v) => RelationOutcome::Found { relation: exact_relation(values, v) },
                None => RelationOutcome::None { certificate: Certificate::Exact },
            })
        }
        None => {
            let search = NumericSearch::run(values, max_coeff, precision_bits)?;
            Ok(match search.best_relation(&bound) {
                Some(r) => RelationOutcome::Found { relation: r },
                None => RelationOutcome::None {
                    certificate: Certificate::Bounded { max_coeff, precision_bits },
                },
            })
        }
    }
}

/// Free rank and torsion of the subgroup of `R/Z` generated by `λ_k mod 1`.
pub fn subgroup_of_circle_rank(
    lambdas: &[AngleValue],
    max_coeff: u64,
    precision_bits: u32,
) -> Result<CircleRank> {
    assert!(!lambdas.is_empty());
    let n = lambdas.len();
    match exact_kernel(lambdas) {
        Some(kernel) => {
            let parts: Vec<IVec> = kernel.iter().map(|v| v[..n].to_vec()).collect();
            let reduced = if kernel.is_empty() { vec![] } else { lll(kernel.clone()).basis };
            let torsion = torsion_order(&parts);
            Ok(CircleRank {
                free_rank: n - kernel.len(),
                torsion_order: torsion,
                relations: reduced.into_iter().map(|v| exact_relation(lambdas, v)).collect(),
                certificate: Certificate::Exact,
            })
        }
        None => {
            let search = NumericSearch::run(lambdas, max_coeff, precision_bits)?;
            let parts: Vec<IVec> = search.relations.iter().map(|r| r.coefficients.clone()).collect();
            Ok(CircleRank {
                free_rank: n - parts.len(),
                torsion_order: torsion_order(&parts),
                relations: search.relations,
                certificate: Certificate::Bounded { max_coeff, precision_bits },
            })
        }
    }
}

/// Exact relation lattice as vectors `(n_1, …, n_N, m)`; `None` when some
/// value is a ball.
fn exact_kernel(values: &[AngleValue]) -> Option<Vec<IVec>> {
    let combs: Vec<LinComb> = values.iter().map(|v| v.lin_comb()).collect::<Option<_>>()?;
    let basis: BTreeSet<Basis> = combs.iter().flat_map(|c| c.terms.keys().copied()).collect();
    let n = values.len();
    let mut rows: Vec<Vec<Rational>> = basis
        .iter()
        .map(|b| {
            let mut row: Vec<Rational> =
                combs.iter().map(|c| c.terms.get(b).cloned().unwrap_or_else(Rational::zero)).collect();
            row.push(Rational::zero());
            row
        })
        .collect();
    let mut last: Vec<Rational> = combs.iter().map(|c| c.rational.clone()).collect();
    last.push(-Rational::one());
    rows.push(last);
    let int_rows: Vec<IVec> = rows
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            row.iter().map(|r| (r * Rational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    Some(integer_kernel(&int_rows, n + 1))
}

/// Canonical sign: first nonzero coefficient positive.
fn normalize_sign(mut v: IVec) -> IVec {
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in v.iter_mut() {
            *x = -x.clone();
        }
    }
    v
}

fn inf_norm(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_default()
}

/// Kernel vector with the smallest `max |n_k|`, if that is ≤ `bound`.
fn smallest_in_box(kernel: &[IVec], n: usize, bound: &BigInt) -> Result<Option<IVec>> {
    if kernel.is_empty() {
        return Ok(None);
    }
    // LLL on the n-parts; m is recovered from the full vectors by linearity.
    let full: Vec<IVec> = lll(kernel.to_vec()).basis;
    let radius = (n as f64) * bound.to_f64().unwrap().powi(2);
    let mut candidates: Vec<IVec> = full.clone();
    let nparts: Vec<IVec> = full.iter().map(|v| v[..n].to_vec()).collect();
    let nparts_reduced = lll(nparts);
    const LIMIT: usize = 200_000;
    let short = short_vectors(&nparts_reduced.basis, radius, LIMIT);
    if short.len() >= LIMIT {
        return Err(Error::PrecisionInsufficient(
            "relation lattice too dense to enumerate within the coefficient box".into(),
        ));
    }
    // Lift n-parts back: solve for m from any kernel vector via linearity.
    for s in short {
        candidates.push(lift_m(&full, n, &s));
    }
    Ok(candidates
        .into_iter()
        .filter(|v| inf_norm(&v[..n]) <= *bound)
        .map(normalize_sign)
        .min_by(|a, b| {
            inf_norm(&a[..n])
                .cmp(&inf_norm(&b[..n]))
                .then_with(|| a.iter().map(|x| x * x).sum::<BigInt>().cmp(&b.iter().map(|x| x * x).sum()))
                .then_with(|| b.cmp(a))
        }))
}

/// Append the `m` coordinate to an `n`-part lying in the projection of the
/// full kernel lattice.
fn lift_m(full: &[IVec], n: usize, npart: &[BigInt]) -> IVec {
    // The projection is injective, so solve npart = Σ c_i full_i[..n] over Q.
    let k = full.len();
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|r| {
            let mut row: Vec<Rational> = (0..k).map(|i| Rational::from_integer(full[i][r].clone())).collect();
            row.push(Rational::from_integer(npart[r].clone()));
            row
        })
        .collect();
    let mut pivots = vec![];
    let mut row = 0;
    for col in 0..k {
        let Some(p) = (row..n).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let src = a[row].clone();
                for (x, y) in a[r].iter_mut().zip(&src) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let mut m = Rational::zero();
    for (r, &col) in pivots.iter().enumerate() {
        m += &a[r][k] * Rational::from_integer(full[col][n].clone());
    }
    let mut out = npart.to_vec();
    out.push(m.to_integer());
    out
}

fn exact_relation(values: &[AngleValue], v: IVec) -> IntegerRelation {
    let v = normalize_sign(v);
    let n = values.len();
    debug_assert!({
        let s = values
            .iter()
            .zip(&v)
            .fold(LinComb::default(), |acc, (x, c)| acc.add(&x.lin_comb().unwrap().scale(&Rational::from_integer(c.clone()))));
        s.is_rational() && s.rational == Rational::from_integer(v[n].clone())
    });
    IntegerRelation { coefficients: v[..n].to_vec(), m: v[n].clone(), residual: Rational::zero() }
}

/// Lattice-reduction search over ball approximations.
struct NumericSearch {
    balls: Vec<Ball>,
    precision_bits: u32,
    /// Relations whose residual ball contains zero; every relation with
    /// small coefficients lies in their span.
    relations: Vec<IntegerRelation>,
}

impl NumericSearch {
    fn run(values: &[AngleValue], max_coeff: u64, precision_bits: u32) -> Result<NumericSearch> {
        let n = values.len();
        let balls: Vec<Ball> = values.iter().map(|v| v.to_ball(precision_bits)).collect();
        let worst_rad = balls.iter().filter_map(|b| b.radius_log2()).max();
        let usable = match worst_rad {
            Some(e) => (-e).min(precision_bits as i64),
            None => precision_bits as i64,
        };
        let scale_bits = usable - 16;
        if scale_bits < 8 {
            return Err(Error::PrecisionInsufficient("input enclosures too wide for a relation search".into()));
        }
        let c = BigInt::one() << scale_bits as usize;
        // rows e_k ⊕ round(C·μ_k), and e_m ⊕ (−C)
        let mut rows: Vec<IVec> = Vec::with_capacity(n + 1);
        for (k, b) in balls.iter().enumerate() {
            let mut row = vec![BigInt::zero(); n + 2];
            row[k] = BigInt::one();
            row[n + 1] = b.mul_bigint(&c).round_mid();
            rows.push(row);
        }
        let mut last = vec![BigInt::zero(); n + 2];
        last[n] = BigInt::one();
        last[n + 1] = -c.clone();
        rows.push(last);
        let reduced = lll(rows);

        let mut search = NumericSearch { balls, precision_bits, relations: vec![] };
        let flags: Vec<Option<IntegerRelation>> = reduced.basis.iter().map(|v| search.check(&v[..=n])).collect();
        let r = flags.iter().take_while(|f| f.is_some()).count();
        if flags[r..].iter().any(|f| f.is_some()) {
            return Err(Error::PrecisionInsufficient(
                "candidate relations are not separated from non-relations".into(),
            ));
        }
        // Any relation with |n_k| ≤ M lies in a lattice vector of norm ≤ B.
        let balls = &search.balls;
        let m_bound: f64 = balls.iter().map(|b| b.abs_upper().to_f64().unwrap_or(f64::INFINITY)).sum::<f64>()
            * max_coeff as f64
            + 1.0;
        let rad_scaled: f64 = balls
            .iter()
            .map(|b| (b.radius() * Rational::from_integer(c.clone())).to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max);
        let tail = (n as f64) * (max_coeff as f64) * (0.5 + rad_scaled);
        let bound_sq = (n as f64) * (max_coeff as f64).powi(2) + m_bound * m_bound + tail * tail;
        let separated = match reduced.min_gs_norm_sq(r) {
            Some(g) => g > bound_sq * (1.0 + 1e-6),
            None => true,
        };
        if !separated {
            return Err(Error::PrecisionInsufficient(format!(
                "lattice bound does not separate relations with coefficients up to {max_coeff} at {precision_bits} bits"
            )));
        }
        search.relations = flags.into_iter().take(r).map(Option::unwrap).collect();
        Ok(search)
    }

    /// The relation `(n, m)` with its certified residual, if the residual
    /// ball contains zero.
    fn check(&self, v: &[BigInt]) -> Option<IntegerRelation> {
        let n = self.balls.len();
        if v[..n].iter().all(|x| x.is_zero()) {
            return None;
        }
        let mut s = Ball::from_bigint(&(-&v[n]), self.precision_bits);
        for (b, x) in self.balls.iter().zip(&v[..n]) {
            s = &s + &b.mul_bigint(x);
        }
        s.contains_zero().then(|| {
            let v = normalize_sign(v.to_vec());
            IntegerRelation { coefficients: v[..n].to_vec(), m: v[n].clone(), residual: s.abs_upper() }
        })
    }

    fn best_relation(&self, bound: &BigInt) -> Option<IntegerRelation> {
        if self.relations.is_empty() {
            return None;
        }
        let n = self.relations[0].coefficients.len();
        let full: Vec<IVec> = self
            .relations
            .iter()
            .map(|r| {
                let mut v = r.coefficients.clone();
                v.push(r.m.clone());
                v
            })
            .collect();
        let mut candidates = full.clone();
        let radius = n as f64 * bound.to_f64().unwrap().powi(2);
        let nparts: Vec<IVec> = full.iter().map(|v| v[..n].to_vec()).collect();
        for s in short_vectors(&lll(nparts).basis, radius, 200_000) {
            candidates.push(lift_m(&full, n, &s));
        }
        candidates
            .into_iter()
            .filter(|v| inf_norm(&v[..n]) <= *bound)
            .filter_map(|v| self.check(&v))
            .min_by(|a, b| {
                a.max_coeff()
                    .cmp(&b.max_coeff())
                    .then_with(|| b.coefficients.cmp(&a.coefficients))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::exact::{rat, Exact};

    fn q(a: i64, b: i64, d: u64) -> AngleValue {
        AngleValue::from_exact(Exact::quadratic(rat(0, 1), rat(a, b), d))
    }

    #[test]
    fn sqrt2_quarter_and_half() {
        let out = find_integer_relation(&[q(1, 4, 2), q(1, 2, 2)], 2, 256).unwrap();
        let r = out.relation().unwrap();
        assert_eq!(r.coefficients, vec![BigInt::from(2), BigInt::from(-1)]);
        assert_eq!(r.m, BigInt::zero());
        assert!(r.residual.is_zero());
    }

    #[test]
    fn one_third() {
        let out = find_integer_relation(&[AngleValue::rational(1, 3)], 3, 256).unwrap();
        let r = out.relation().unwrap();
        assert_eq!(r.coefficients, vec![BigInt::from(3)]);
        assert_eq!(r.m, BigInt::one());
        let out = find_integer_relation(&[AngleValue::rational(1, 3)], 2, 256).unwrap();
        assert!(out.relation().is_none());
    }

    #[test]
    fn numeric_path_matches_exact() {
        let vals = [q(1, 4, 2), q(1, 2, 2)];
        let balls: Vec<AngleValue> = vals.iter().map(|v| AngleValue::NumericBall(v.to_ball(256))).collect();
        let out = find_integer_relation(&balls, 2, 256).unwrap();
        let r = out.relation().unwrap();
        assert_eq!(r.coefficients, vec![BigInt::from(2), BigInt::from(-1)]);
        assert!(r.residual > Rational::zero());
        let out = find_integer_relation(&[balls[0].clone(), AngleValue::NumericBall(q(1, 4, 3).to_ball(256))], 100, 256)
            .unwrap();
        assert!(out.relation().is_none());
    }

    #[test]
    fn rank_examples() {
        let sq = vec![AngleValue::rational(1, 2); 4];
        let r = subgroup_of_circle_rank(&sq, 50, 256).unwrap();
        assert_eq!((r.free_rank, r.torsion_order.clone()), (0, BigInt::from(2)));
        let r = subgroup_of_circle_rank(&[AngleValue::rational(1, 2), q(1, 4, 2), q(1, 2, 2)], 50, 256).unwrap();
        assert_eq!((r.free_rank, r.torsion_order.clone()), (1, BigInt::from(2)));
    }
}
