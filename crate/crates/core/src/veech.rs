//! Rotations in the Veech group of an irrational billiard surface, their
//! rank, and the density argument that confines the Veech group to SO(2).

use num_bigint::BigInt;
use serde::Serialize;

use crate::billiard::{enumerate_with_options, shortest_generalized_diagonal, GeneralizedDiagonal};
use crate::corridor::WalkOptions;
use crate::error::{Error, Result};
use crate::geometry::Vector;
use crate::numerics::{
    find_integer_relation, rat, subgroup_of_circle_rank, AngleValue, Ball, Certificate, Exact, IntegerRelation, Mat2,
    Rational, Real, RelationOutcome, DEFAULT_MAX_COEFF,
};
use crate::polygon::{classify_polygon, Classification, Polygon};
use crate::surface::{holonomy_around_vertex, holonomy_product, is_identity_within};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Conclusion {
    ContainedInSo2,
    NotApplicable { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct RotationGroupReport {
    /// Polygon vertices contributing a generator.
    pub vertices: Vec<usize>,
    pub angles: Vec<AngleValue>,
    pub generators: Vec<Mat2>,
    pub free_rank: usize,
    #[serde(serialize_with = "ser_bigint")]
    pub torsion_order: BigInt,
    pub relations: Vec<IntegerRelation>,
    pub resonance_certificate: Certificate,
    pub classification: Classification,
    pub conclusion: Conclusion,
}

fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// `R(S)`: the rotations `M_j` around the genuine vertices, with the rank
/// of the group they generate.
pub fn rotation_group(polygon: &Polygon) -> Result<RotationGroupReport> {
    rotation_group_with(polygon, DEFAULT_MAX_COEFF, polygon.precision_bits())
}

pub fn rotation_group_with(polygon: &Polygon, max_coeff: u64, precision_bits: u32) -> Result<RotationGroupReport> {
    let vertices = polygon.real_vertices();
    let angles: Vec<AngleValue> = vertices.iter().map(|&j| polygon.angle(j).clone()).collect();
    let generators: Vec<Mat2> = vertices.iter().map(|&j| holonomy_around_vertex(polygon, j)).collect();
    let rank = subgroup_of_circle_rank(&angles, max_coeff, precision_bits)?;
    let classification = classify_polygon(polygon);
    let conclusion = match (&classification, &rank.certificate) {
        (Classification::Irrational { .. }, _) => Conclusion::ContainedInSo2,
        (Classification::UndecidedNumeric { .. }, Certificate::Bounded { .. }) if rank.free_rank > 0 => {
            Conclusion::ContainedInSo2
        }
        (Classification::Rational, _) => Conclusion::NotApplicable { reason: "every angle is a rational multiple of pi".into() },
        _ => Conclusion::NotApplicable { reason: "no angle is certified irrational".into() },
    };
    Ok(RotationGroupReport {
        vertices,
        angles,
        generators,
        free_rank: rank.free_rank,
        torsion_order: rank.torsion_order,
        relations: rank.relations,
        resonance_certificate: rank.certificate,
        classification,
        conclusion,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitWitness {
    pub k_max: usize,
    /// `|v|`, the radius of the orbit circle.
    pub radius: Ball,
    /// Largest gap between consecutive orbit points, in radians.
    pub max_gap: Ball,
    /// Three-distance bound on the gap, in radians.
    pub bound: Ball,
    /// Convergent denominators `q_{i−1}, q_i` fixing the bound.
    pub denominators: (u64, u64),
}

fn frac(x: &Ball) -> Result<Ball> {
    let f = x.floor_exact().ok_or_else(|| Error::PrecisionInsufficient("fractional part straddles an integer".into()))?;
    Ok(x - &Ball::from_bigint(&f, x.precision()))
}

/// Distance to the nearest integer.
fn dist_to_int(x: &Ball) -> Ball {
    let r = x.round_mid();
    (x - &Ball::from_bigint(&r, x.precision())).abs()
}

fn ensure_irrational(lambda: &AngleValue) -> Result<()> {
    match lambda {
        AngleValue::Rational(_) => Err(Error::RationalAngle),
        AngleValue::Quadratic(_) => Ok(()),
        AngleValue::NumericBall(b) => match find_integer_relation(&[lambda.clone()], DEFAULT_MAX_COEFF, b.precision())? {
            RelationOutcome::Found { .. } => Err(Error::RationalAngle),
            RelationOutcome::None { .. } => Ok(()),
        },
    }
}

/// `θ_{i−1} + θ_i` for the largest convergent denominator `q_i ≤ points`,
/// where `θ_i = |q_i α − p_i|`: no gap among `points` orbit points exceeds it.
fn three_distance_bound(alpha: &Ball, points: u64) -> Result<(Ball, (u64, u64))> {
    let prec = alpha.precision();
    let (mut q_prev, mut q) = (0u64, 1u64);
    let mut x = alpha.clone();
    loop {
        let inv = x.recip();
        let a = inv
            .floor_exact()
            .ok_or_else(|| Error::PrecisionInsufficient("continued fraction digit undecided".into()))?;
        let a: u64 = a.try_into().map_err(|_| Error::PrecisionInsufficient("continued fraction digit too large".into()))?;
        let q_next = a.saturating_mul(q).saturating_add(q_prev);
        if q_next > points {
            break;
        }
        x = &inv - &Ball::from_int(a as i64, prec);
        (q_prev, q) = (q, q_next);
    }
    let theta = |qq: u64| -> Ball {
        if qq == 0 {
            Ball::from_int(1, prec)
        } else {
            dist_to_int(&alpha.mul_int(qq as i64))
        }
    };
    Ok((&theta(q_prev) + &theta(q), (q_prev, q)))
}

/// The orbit of `v` under rotation by `2λπ`, for `0 ≤ k ≤ k_max`: its
/// largest angular gap, checked against the three-distance bound.
pub fn orbit_density_witness(lambda: &AngleValue, v: &Vector, k_max: usize) -> Result<OrbitWitness> {
    ensure_irrational(lambda)?;
    if v.norm_sq().is_zero() {
        return Err(Error::InvalidPolygon("orbit vector must be nonzero".into()));
    }
    let prec = match lambda {
        AngleValue::NumericBall(b) => b.precision(),
        _ => 512,
    };
    let alpha = frac(&lambda.to_ball(prec))?;
    let mut turns: Vec<Ball> = (0..=k_max).map(|k| frac(&alpha.mul_int(k as i64))).collect::<Result<_>>()?;
    turns.sort_by(|a, b| a.midpoint().cmp(&b.midpoint()));
    let mut gaps: Vec<Ball> = turns.windows(2).map(|w| &w[1] - &w[0]).collect();
    gaps.push(&(&Ball::from_int(1, prec) - turns.last().unwrap()) + &turns[0]);
    if gaps.iter().any(|g| !g.is_positive()) {
        return Err(Error::PrecisionInsufficient("orbit points not separated".into()));
    }
    let max_turn = gaps.into_iter().max_by(|a, b| a.midpoint().cmp(&b.midpoint())).unwrap();
    let (bound_turn, denominators) = three_distance_bound(&alpha, k_max as u64 + 1)?;
    let two_pi = Ball::pi(prec).mul_int(2);
    Ok(OrbitWitness {
        k_max,
        radius: Ball::from_exact(&v.norm_sq(), prec).sqrt(),
        max_gap: &max_turn * &two_pi,
        bound: &bound_turn * &two_pi,
        denominators,
    })
}

impl OrbitWitness {
    /// Whether the gap is certainly within the bound.
    pub fn within_bound(&self) -> bool {
        (&self.bound - &self.max_gap).sign().is_some_and(|s| s >= 0) || self.bound.overlaps(&self.max_gap)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    /// Stated by the theorem, not computed.
    Cited,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChecklistItem {
    pub anchor: &'static str,
    pub claim: &'static str,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem1Report {
    pub rotation_group: RotationGroupReport,
    pub shortest_diagonal: Option<GeneralizedDiagonal>,
    pub diagonal_bound: Exact,
    pub census_size: usize,
    pub census_partial: bool,
    pub orbit: Option<OrbitWitness>,
    pub checklist: Vec<ChecklistItem>,
    pub truncation_caveat: Option<String>,
    pub conclusion: Conclusion,
}

impl Theorem1Report {
    pub fn all_pass(&self) -> bool {
        self.checklist.iter().all(|c| matches!(c.status, Status::Pass | Status::Cited))
    }

    pub fn item(&self, anchor: &str) -> Option<&ChecklistItem> {
        self.checklist.iter().find(|c| c.anchor == anchor)
    }
}

pub const ORBIT_STEPS: usize = 1000;

/// The argument of the theorem, step by step, on one polygon.
pub fn theorem1_report(polygon: &Polygon, diagonal_bound: &Exact) -> Result<Theorem1Report> {
    theorem1_report_with(polygon, diagonal_bound, &WalkOptions::default())
}

pub fn theorem1_report_with(polygon: &Polygon, diagonal_bound: &Exact, opts: &WalkOptions) -> Result<Theorem1Report> {
    let rotation = rotation_group(polygon)?;
    let hypothesis = rotation.conclusion == Conclusion::ContainedInSo2;
    let mut checklist = vec![];
    let cert = match &rotation.resonance_certificate {
        Certificate::Exact => "exact".to_string(),
        Certificate::Bounded { max_coeff, precision_bits } => {
            format!("no relation with coefficients up to {max_coeff} at {precision_bits} bits")
        }
    };
    checklist.push(ChecklistItem {
        anchor: "hypothesis-irrational-angle",
        claim: "some interior angle is an irrational multiple of pi",
        status: if hypothesis { Status::Pass } else { Status::Fail },
        detail: format!("{:?}; {cert}", rotation.classification),
    });

    let product = holonomy_product(polygon);
    let full_product_is_id = is_identity_within(&product, -200);
    let tol = rat(1, 1) / Rational::from_integer(BigInt::from(1) << 200usize);
    let rotations = rotation.generators.iter().all(|m| {
        (&m.det() - &Real::int(1)).abs_upper() <= tol && is_identity_within(&m.mul(&m.transpose()), -200)
    });
    checklist.push(ChecklistItem {
        anchor: "vertex-holonomy-rotations",
        claim: "the derivative of the holonomy around each vertex is the rotation by twice its angle, and these rotations lie in the Veech group",
        status: if rotations && (full_product_is_id || !polygon.is_bounded()) { Status::Pass } else { Status::Fail },
        detail: format!("{} generators, product of all is identity: {full_product_is_id}", rotation.generators.len()),
    });

    let mut not_found = None;
    let shortest = if hypothesis {
        match shortest_generalized_diagonal(polygon) {
            Ok(d) => Some(d),
            Err(Error::NoDiagonalFound { bound }) => {
                not_found = Some(format!("no generalized diagonal up to length {bound}"));
                None
            }
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    checklist.push(ChecklistItem {
        anchor: "diagonal-lengths-bounded-below",
        claim: "generalized diagonal lengths are bounded below by a positive constant",
        status: match &shortest {
            Some(d) if d.length_sq.signum() > 0 => Status::Pass,
            Some(_) => Status::Fail,
            None => Status::Skipped,
        },
        detail: shortest
            .as_ref()
            .map(|d| format!("shortest length squared {}", d.length_sq))
            .or(not_found)
            .unwrap_or_else(|| "not evaluated".into()),
    });

    let census = enumerate_with_options(polygon, diagonal_bound, opts)?;
    checklist.push(ChecklistItem {
        anchor: "bounded-diagonals-finite",
        claim: "only finitely many generalized diagonals have bounded length",
        status: if census.partial { Status::Fail } else { Status::Pass },
        detail: format!(
            "{} diagonals up to length {}{}",
            census.diagonals.len(),
            diagonal_bound,
            if census.partial { " (search budget exhausted)" } else { "" }
        ),
    });

    let orbit = match (&shortest, &rotation.classification) {
        (Some(d), _) if hypothesis => {
            let j = match rotation.classification {
                Classification::Irrational { witness_index } => {
                    rotation.vertices.iter().position(|&v| v == witness_index).unwrap_or(0)
                }
                _ => 0,
            };
            Some(orbit_density_witness(&rotation.angles[j], &(&d.end - &d.start), ORBIT_STEPS)?)
        }
        _ => None,
    };
    checklist.push(ChecklistItem {
        anchor: "holonomy-orbit-dense",
        claim: "the orbit of a holonomy vector under an irrational rotation is dense in its circle",
        status: match &orbit {
            Some(o) if o.within_bound() => Status::Pass,
            Some(_) => Status::Fail,
            None => Status::Skipped,
        },
        detail: orbit
            .as_ref()
            .map(|o| format!("largest gap after {} steps: {}", o.k_max, o.max_gap.to_decimal(12).0))
            .unwrap_or_else(|| "not evaluated".into()),
    });

    let conclusion_holds = hypothesis && checklist.iter().all(|c| c.status == Status::Pass);
    checklist.push(ChecklistItem {
        anchor: "veech-group-in-so2",
        claim: "a dense holonomy orbit and a discrete set of holonomy vectors force every affine derivative to be a rotation",
        status: if conclusion_holds { Status::Pass } else if hypothesis { Status::Fail } else { Status::Skipped },
        detail: "follows from the items above".into(),
    });
    checklist.push(ChecklistItem {
        anchor: "rotation-subgroup-maximal-rank",
        claim: "the group generated by the vertex rotations has maximal rank",
        status: if hypothesis { Status::Cited } else { Status::Skipped },
        detail: format!(
            "free rank {} and torsion order {} computed; maximality inside the Veech group is not computable here",
            rotation.free_rank, rotation.torsion_order
        ),
    });

    let truncation_caveat = (!polygon.is_bounded()).then(|| {
        "finite truncation of an unbounded polygon: angles, rank and diagonals concern the truncated table only".to_string()
    });
    let conclusion = if conclusion_holds {
        Conclusion::ContainedInSo2
    } else {
        match &rotation.conclusion {
            Conclusion::NotApplicable { reason } => Conclusion::NotApplicable { reason: reason.clone() },
            Conclusion::ContainedInSo2 => Conclusion::NotApplicable { reason: "a checklist item failed".into() },
        }
    };
    Ok(Theorem1Report {
        rotation_group: rotation,
        shortest_diagonal: shortest,
        diagonal_bound: diagonal_bound.clone(),
        census_size: census.diagonals.len(),
        census_partial: census.partial,
        orbit,
        checklist,
        truncation_caveat,
        conclusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    #[test]
    fn square_is_not_applicable() {
        let sq = Polygon::new(vec![Point::int(0, 0), Point::int(1, 0), Point::int(1, 1), Point::int(0, 1)]).unwrap();
        let r = rotation_group(&sq).unwrap();
        assert_eq!(r.free_rank, 0);
        assert_eq!(r.torsion_order, BigInt::from(2));
        assert!(matches!(r.conclusion, Conclusion::NotApplicable { .. }));
    }

    #[test]
    fn rational_angle_has_no_witness() {
        let v = Point::int(1, 0);
        assert!(matches!(orbit_density_witness(&AngleValue::rational(1, 4), &v, 10), Err(Error::RationalAngle)));
    }

    #[test]
    fn golden_bound() {
        // α = (√5 − 1)/2: convergent denominators are Fibonacci numbers
        let alpha = Ball::from_exact(&(&(&Exact::sqrt_int(5) - &Exact::one()) * &Exact::frac(1, 2)), 256);
        let (b, (q0, q1)) = three_distance_bound(&alpha, 5).unwrap();
        assert_eq!((q0, q1), (3, 5));
        // θ₃ + θ₄ = (2 − 3α) + (5α − 3) = 2α − 1
        assert!((b.to_f64() - (5f64.sqrt() - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn irrational_triangle_passes_every_item() {
        let t = crate::fixtures::irrational_triangle();
        let r = theorem1_report(&t, &Exact::int(3)).unwrap();
        assert_eq!(r.rotation_group.free_rank, 1);
        assert!(r.all_pass(), "{:#?}", r.checklist);
        assert_eq!(r.conclusion, Conclusion::ContainedInSo2);
        assert!(r.census_size > 0);
    }

    #[test]
    fn square_checklist_fails_hypothesis() {
        let r = theorem1_report(&crate::fixtures::unit_square(), &Exact::int(3)).unwrap();
        assert_eq!(r.item("hypothesis-irrational-angle").unwrap().status, Status::Fail);
        assert!(matches!(r.conclusion, Conclusion::NotApplicable { .. }));
    }
}
