//! Polygons, interior angles, rationality classification and the
//! parabola-like unbounded polygons.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{orient, segments_intersect, signed_area2, Point, Vector};
use crate::numerics::{
    find_integer_relation, rat, AngleValue, Ball, Certificate, Exact, Rational, RelationOutcome,
    DEFAULT_MAX_COEFF, DEFAULT_PRECISION_BITS,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    /// A vertex of the actual table.
    Real,
    /// Where a truncated chain meets its terminal ray.
    Truncation,
    /// A corner of the cap closing a truncation window.
    Artificial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Wall,
    /// Transparent: trajectories crossing it escape.
    Open,
}

/// A simple polygon with counterclockwise vertices. Edge `j` runs from
/// vertex `j` to vertex `j + 1`.
#[derive(Clone, Debug)]
pub struct Polygon {
    vertices: Vec<Point>,
    angles: Vec<AngleValue>,
    vertex_kinds: Vec<VertexKind>,
    edge_kinds: Vec<EdgeKind>,
    precision_bits: u32,
}

/// Largest allowed gap between a supplied angle and the coordinate-derived
/// one.
const OVERRIDE_TOLERANCE_LOG2: i32 = -20;

impl Polygon {
    /// Polygon from vertices in either orientation; angles from coordinates.
    pub fn new(vertices: Vec<Point>) -> Result<Polygon> {
        Polygon::with_angles(vertices, None, DEFAULT_PRECISION_BITS)
    }

    /// Polygon with optional supplied angles (same order as `vertices`),
    /// checked against the coordinates at ball precision.
    pub fn with_angles(vertices: Vec<Point>, angles: Option<Vec<AngleValue>>, precision_bits: u32) -> Result<Polygon> {
        let n = vertices.len();
        Polygon::build(vertices, angles, vec![VertexKind::Real; n], vec![EdgeKind::Wall; n], precision_bits)
    }

    pub(crate) fn build(
        mut vertices: Vec<Point>,
        mut angles: Option<Vec<AngleValue>>,
        mut vertex_kinds: Vec<VertexKind>,
        mut edge_kinds: Vec<EdgeKind>,
        precision_bits: u32,
    ) -> Result<Polygon> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidPolygon(format!("{n} vertices; at least 3 required")));
        }
        if angles.as_ref().is_some_and(|a| a.len() != n) {
            return Err(Error::InvalidPolygon("angle count differs from vertex count".into()));
        }
        let field = vertices.iter().map(Point::field).max().unwrap();
        if vertices.iter().any(|p| p.field() != 1 && p.field() != field) {
            return Err(Error::InvalidPolygon("coordinates mix different square roots".into()));
        }
        for j in 0..n {
            let (a, b, c) = (&vertices[(j + n - 1) % n], &vertices[j], &vertices[(j + 1) % n]);
            if a == b || b == c || orient(a, b, c) == 0 {
                return Err(Error::DegenerateVertex(j));
            }
        }
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a, b) = (&vertices[i], &vertices[(i + 1) % n]);
                let (c, d) = (&vertices[j], &vertices[(j + 1) % n]);
                if segments_intersect(a, b, c, d) {
                    return Err(Error::InvalidPolygon(format!("edges {i} and {j} intersect")));
                }
            }
        }
        if signed_area2(&vertices).signum() < 0 {
            vertices.reverse();
            vertex_kinds.reverse();
            if let Some(a) = angles.as_mut() {
                a.reverse();
            }
            // old edge k joins old vertices k, k+1 = new vertices n-1-k, n-2-k
            let old = edge_kinds.clone();
            for (i, e) in edge_kinds.iter_mut().enumerate() {
                *e = old[(2 * n - 2 - i) % n];
            }
        }
        let computed = compute_angles(&vertices, precision_bits)?;
        let angles = match angles {
            None => computed,
            Some(given) => {
                for (j, (g, c)) in given.iter().zip(&computed).enumerate() {
                    check_override(g, c, precision_bits)
                        .map_err(|msg| Error::InvalidPolygon(format!("angle at vertex {j}: {msg}")))?;
                }
                given
            }
        };
        let polygon = Polygon { vertices, angles, vertex_kinds, edge_kinds, precision_bits };
        polygon.check_angle_sum()?;
        Ok(polygon)
    }

    fn check_angle_sum(&self) -> Result<()> {
        let n = self.n() as i64;
        let total = self.angles.iter().skip(1).fold(self.angles[0].clone(), |acc, a| acc.add(a));
        let ok = match total.as_exact() {
            Some(e) => e == Exact::int(n - 2),
            None => {
                let diff = &total.to_ball(self.precision_bits) - &Ball::from_int(n - 2, self.precision_bits);
                diff.contains_zero() || diff.abs_upper() < rat(1, 1 << 20)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidPolygon(format!("angles sum to {total}, expected {}", n - 2)))
        }
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, j: usize) -> &Point {
        &self.vertices[j % self.n()]
    }

    pub fn angles(&self) -> &[AngleValue] {
        &self.angles
    }

    pub fn angle(&self, j: usize) -> &AngleValue {
        &self.angles[j % self.n()]
    }

    pub fn vertex_kind(&self, j: usize) -> VertexKind {
        self.vertex_kinds[j % self.n()]
    }

    pub fn vertex_kinds(&self) -> &[VertexKind] {
        &self.vertex_kinds
    }

    pub fn edge_kind(&self, j: usize) -> EdgeKind {
        self.edge_kinds[j % self.n()]
    }

    pub fn edge_kinds(&self) -> &[EdgeKind] {
        &self.edge_kinds
    }

    pub fn edge(&self, j: usize) -> (&Point, &Point) {
        (self.vertex(j), self.vertex(j + 1))
    }

    pub fn edge_vector(&self, j: usize) -> Vector {
        self.vertex(j + 1) - self.vertex(j)
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub fn is_bounded(&self) -> bool {
        self.vertex_kinds.iter().all(|k| *k == VertexKind::Real)
    }

    pub fn real_vertices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&j| self.vertex_kinds[j] == VertexKind::Real).collect()
    }

    /// Twice the area, exactly.
    pub fn area2(&self) -> Exact {
        signed_area2(&self.vertices)
    }

    /// For a truncated unbounded polygon, the same table with its cap moved
    /// to height `h` (never lower than the current cap).
    pub fn with_cap_height(&self, h: &Exact) -> Polygon {
        let mut out = self.clone();
        for (j, k) in self.vertex_kinds.iter().enumerate() {
            if *k == VertexKind::Artificial && *h > out.vertices[j].y {
                out.vertices[j].y = h.clone();
            }
        }
        out
    }

    /// Largest y-coordinate over non-artificial vertices.
    pub fn top_of_table(&self) -> Exact {
        (0..self.n())
            .filter(|&j| self.vertex_kinds[j] != VertexKind::Artificial)
            .map(|j| self.vertices[j].y.clone())
            .max()
            .unwrap()
    }
}

fn check_override(given: &AngleValue, computed: &AngleValue, prec: u32) -> std::result::Result<(), String> {
    if let (Some(g), Some(c)) = (given.as_exact(), computed.as_exact()) {
        if g.compatible(&c) {
            return if g == c { Ok(()) } else { Err(format!("supplied {g}, coordinates give {c}")) };
        }
    }
    let diff = &given.to_ball(prec) - &computed.to_ball(prec);
    let tol = Rational::new(1.into(), num_bigint::BigInt::from(1) << (-OVERRIDE_TOLERANCE_LOG2) as usize);
    if diff.contains_zero() || diff.abs_upper() <= tol {
        Ok(())
    } else {
        Err(format!("supplied {given}, coordinates give {computed}"))
    }
}

/// Directions `kπ/12`, `k = 0..24`, as exact (non-unit) vectors.
fn twelfth_directions() -> Vec<Vector> {
    let r3 = Exact::sqrt_int(3);
    let t15 = &Exact::int(2) - &r3;
    let first = [
        Point::int(1, 0),
        Point::new(Exact::one(), t15.clone()),
        Point::new(r3.clone(), Exact::one()),
        Point::int(1, 1),
        Point::new(Exact::one(), r3.clone()),
        Point::new(t15, Exact::one()),
    ];
    let mut out = Vec::with_capacity(24);
    for q in 0..4 {
        for v in &first {
            let mut w = v.clone();
            for _ in 0..q {
                w = w.perp();
            }
            out.push(w);
        }
    }
    out
}

/// Index `k` with `v` pointing in direction `kπ/12`, decided exactly.
fn twelfth_index(v: &Vector, table: &[Vector]) -> Option<i64> {
    table.iter().position(|u| u.compatible(v) && u.cross(v).is_zero() && u.dot(v).signum() > 0).map(|k| k as i64)
}

/// Interior angle coefficients of a counterclockwise polygon.
pub fn compute_angles(vertices: &[Point], prec: u32) -> Result<Vec<AngleValue>> {
    let n = vertices.len();
    let table = twelfth_directions();
    (0..n)
        .map(|j| {
            let v = &vertices[j];
            let prev = &vertices[(j + n - 1) % n] - v;
            let next = &vertices[(j + 1) % n] - v;
            if let (Some(kp), Some(kn)) = (twelfth_index(&prev, &table), twelfth_index(&next, &table)) {
                return Ok(AngleValue::Rational(Rational::new((kp - kn).rem_euclid(24).into(), 12.into())));
            }
            corner_angle_ball(&prev, &next, prec).map(AngleValue::NumericBall)
        })
        .collect()
}

/// `θ/π` where `θ ∈ (0, 2π)` is the counterclockwise angle from `next` to
/// `prev`.
fn corner_angle_ball(prev: &Vector, next: &Vector, prec: u32) -> Result<Ball> {
    let wp = prec + 32;
    let dir = |v: &Vector| {
        Ball::direction_angle(&Ball::from_exact(&v.x, wp), &Ball::from_exact(&v.y, wp))
            .ok_or_else(|| Error::PrecisionInsufficient("edge direction undecided".into()))
    };
    let pi = Ball::pi(wp);
    let mut d = &dir(prev)? - &dir(next)?;
    match d.sign() {
        Some(1) => {}
        Some(-1) => d = &d + &pi.mul_int(2),
        _ => return Err(Error::PrecisionInsufficient("corner angle undecided".into())),
    }
    Ok((&d * &pi.recip()).with_precision(prec))
}

/// Interior angle coefficients `λ_j` (angle `λ_jπ`).
pub fn interior_angles(polygon: &Polygon) -> Vec<AngleValue> {
    polygon.angles().to_vec()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Classification {
    Rational,
    Irrational { witness_index: usize },
    UndecidedNumeric { max_coeff: u64, precision_bits: u32 },
}

/// Rationality of the table's angles (truncation artefacts excluded).
pub fn classify_polygon(polygon: &Polygon) -> Classification {
    let real = polygon.real_vertices();
    if let Some(&j) = real.iter().find(|&&j| matches!(polygon.angle(j), AngleValue::Quadratic(_))) {
        return Classification::Irrational { witness_index: j };
    }
    if real.iter().any(|&j| !polygon.angle(j).is_exact()) {
        return Classification::UndecidedNumeric {
            max_coeff: DEFAULT_MAX_COEFF,
            precision_bits: polygon.precision_bits(),
        };
    }
    Classification::Rational
}

/// Parabola-like polygon through `(±x_j, x_j^{2n})`, `j ≤ truncation_depth`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnboundedPolygonSpec {
    pub n: u32,
    pub xs: Vec<Exact>,
    pub truncation_depth: usize,
}

/// A truncation of an unbounded polygon: the working polygon closed by two
/// vertical terminal rays and a transparent cap.
#[derive(Clone, Debug)]
pub struct UnboundedPolygon {
    pub spec: UnboundedPolygonSpec,
    pub polygon: Polygon,
    /// `λ_0` (apex) through `λ_{depth-1}`, one per `x_j`.
    pub chain_angles: Vec<AngleValue>,
    /// Polygon vertex indices of `(x_j, y_j)` and `(−x_j, y_j)`.
    pub right_index: Vec<usize>,
    pub left_index: Vec<usize>,
}

pub fn validate_spec(spec: &UnboundedPolygonSpec) -> Result<()> {
    if spec.n == 0 || spec.truncation_depth == 0 {
        return Err(Error::InvalidPolygon("n and truncation depth must be positive".into()));
    }
    if spec.xs.first() != Some(&Exact::zero()) {
        return Err(Error::InvalidPolygon("x_0 must be 0".into()));
    }
    for (j, w) in spec.xs.windows(2).enumerate() {
        if !w[0].compatible(&w[1]) {
            return Err(Error::InvalidPolygon("xs mix different square roots".into()));
        }
        let gap = &w[1] - &w[0];
        if gap <= Exact::one() {
            return Err(Error::SpacingViolated { index: j, gap: gap.to_string() });
        }
    }
    if spec.xs.len() <= spec.truncation_depth {
        return Err(Error::InvalidPolygon(format!(
            "truncation depth {} needs {} abscissae",
            spec.truncation_depth,
            spec.truncation_depth + 1
        )));
    }
    Ok(())
}

pub fn unbounded_polygon(spec: &UnboundedPolygonSpec) -> Result<UnboundedPolygon> {
    unbounded_polygon_with_precision(spec, DEFAULT_PRECISION_BITS)
}

pub fn unbounded_polygon_with_precision(spec: &UnboundedPolygonSpec, prec: u32) -> Result<UnboundedPolygon> {
    validate_spec(spec)?;
    let d = spec.truncation_depth;
    let pow = |x: &Exact| (0..2 * spec.n).fold(Exact::one(), |acc, _| &acc * x);
    let ys: Vec<Exact> = spec.xs[..=d].iter().map(pow).collect();
    let cap = &ys[d] + &Exact::one();
    // counterclockwise: left cap corner, down the left chain, apex, up the
    // right chain, right cap corner
    let mut vertices = vec![Point::new(-spec.xs[d].clone(), cap.clone())];
    let mut kinds = vec![VertexKind::Artificial];
    let mut left_index = vec![0; d + 1];
    let mut right_index = vec![0; d + 1];
    for j in (1..=d).rev() {
        left_index[j] = vertices.len();
        vertices.push(Point::new(-spec.xs[j].clone(), ys[j].clone()));
        kinds.push(if j == d { VertexKind::Truncation } else { VertexKind::Real });
    }
    left_index[0] = vertices.len();
    right_index[0] = vertices.len();
    vertices.push(Point::origin());
    kinds.push(VertexKind::Real);
    for j in 1..=d {
        right_index[j] = vertices.len();
        vertices.push(Point::new(spec.xs[j].clone(), ys[j].clone()));
        kinds.push(if j == d { VertexKind::Truncation } else { VertexKind::Real });
    }
    vertices.push(Point::new(spec.xs[d].clone(), cap));
    kinds.push(VertexKind::Artificial);
    let m = vertices.len();
    let mut edges = vec![EdgeKind::Wall; m];
    edges[m - 1] = EdgeKind::Open;
    let mut polygon = Polygon::build(vertices, None, kinds, edges, prec)?;
    // make the mirror pairs bit-identical
    for j in 1..=d {
        polygon.angles[left_index[j]] = polygon.angles[right_index[j]].clone();
    }
    let chain_angles = (0..d).map(|j| polygon.angles[right_index[j]].clone()).collect();
    Ok(UnboundedPolygon { spec: spec.clone(), polygon, chain_angles, right_index, left_index })
}

/// Outcome of a resonance-free search.
#[derive(Clone, Debug, Serialize)]
pub struct ResonanceFreeSearch {
    pub spec: UnboundedPolygonSpec,
    pub certificate: Certificate,
    pub attempts: usize,
    /// Candidates rejected because a relation was found or undecided.
    pub rejected: usize,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub max_coeff: u64,
    pub precision_bits: u32,
    pub attempt_budget: usize,
    /// Abscissa lists tried before any random candidate.
    pub forced_candidates: Vec<Vec<Exact>>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_coeff: DEFAULT_MAX_COEFF,
            precision_bits: DEFAULT_PRECISION_BITS,
            attempt_budget: 64,
            forced_candidates: vec![],
        }
    }
}

/// Random rational abscissae with gaps in `(1, 3]`.
fn random_xs(rng: &mut ChaCha8Rng, count: usize) -> Vec<Exact> {
    let mut xs = vec![Exact::zero()];
    for _ in 0..count {
        let k: i64 = rng.gen_range(1..=2000);
        let gap = Exact::frac(1000 + k, 1000);
        xs.push(xs.last().unwrap() + &gap);
    }
    xs
}

/// Find a spec whose first `count` chain angles admit no integer relation
/// up to the coefficient bound.
pub fn search_resonance_free_prefix(n: u32, count: usize, seed: u64, opts: &SearchOptions) -> Result<ResonanceFreeSearch> {
    assert!(count >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut forced = opts.forced_candidates.iter();
    let mut rejected = 0;
    for attempt in 1..=opts.attempt_budget {
        let xs = match forced.next() {
            Some(xs) => xs.clone(),
            None => random_xs(&mut rng, count),
        };
        let spec = UnboundedPolygonSpec { n, xs, truncation_depth: count };
        let Ok(poly) = unbounded_polygon_with_precision(&spec, opts.precision_bits) else {
            rejected += 1;
            continue;
        };
        match find_integer_relation(&poly.chain_angles, opts.max_coeff, opts.precision_bits) {
            Ok(RelationOutcome::None { certificate }) => {
                return Ok(ResonanceFreeSearch { spec, certificate, attempts: attempt, rejected });
            }
            _ => rejected += 1,
        }
    }
    Err(Error::SearchExhausted { attempts: opts.attempt_budget })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Polygon {
        Polygon::new(vec![Point::int(0, 0), Point::int(1, 0), Point::int(1, 1), Point::int(0, 1)]).unwrap()
    }

    #[test]
    fn square_and_triangle_angles() {
        let s = square();
        assert!(s.angles().iter().all(|a| a.as_rational() == Some(&rat(1, 2))));
        let t = Polygon::new(vec![Point::int(0, 0), Point::int(1, 0), Point::int(0, 1)]).unwrap();
        let a: Vec<_> = t.angles().iter().map(|a| a.as_rational().unwrap().clone()).collect();
        assert_eq!(a, vec![rat(1, 2), rat(1, 4), rat(1, 4)]);
    }

    #[test]
    fn l_shape_has_reflex_corner() {
        let p = Polygon::new(
            [(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)].iter().map(|&(x, y)| Point::int(x, y)).collect(),
        )
        .unwrap();
        assert_eq!(p.angle(3).as_rational(), Some(&rat(3, 2)));
    }

    #[test]
    fn clockwise_input_is_normalized() {
        let p = Polygon::new(vec![Point::int(0, 0), Point::int(0, 1), Point::int(1, 0)]).unwrap();
        assert!(p.area2().signum() > 0);
    }

    #[test]
    fn degenerate_and_self_intersecting_inputs() {
        let e = Polygon::new(vec![Point::int(0, 0), Point::int(1, 0), Point::int(2, 0), Point::int(0, 1)]);
        assert!(matches!(e, Err(Error::DegenerateVertex(1))));
        let bow = Polygon::new(vec![Point::int(0, 0), Point::int(1, 1), Point::int(1, 0), Point::int(0, 1)]);
        assert!(matches!(bow, Err(Error::InvalidPolygon(_))));
    }

    #[test]
    fn thirty_degree_corner_is_exact() {
        let r3 = Exact::sqrt_int(3);
        let t = Polygon::new(vec![Point::int(0, 0), Point::new(r3, Exact::zero()), Point::int(0, 1)]).unwrap();
        assert_eq!(t.angle(1).as_rational(), Some(&rat(1, 6)));
        assert_eq!(t.angle(2).as_rational(), Some(&rat(1, 3)));
    }

    #[test]
    fn spacing_rule() {
        let spec = |xs: Vec<Exact>| UnboundedPolygonSpec { n: 1, xs, truncation_depth: 1 };
        assert!(unbounded_polygon(&spec(vec![Exact::zero(), Exact::frac(3, 2)])).is_ok());
        assert!(matches!(
            unbounded_polygon(&spec(vec![Exact::zero(), Exact::frac(1, 2)])),
            Err(Error::SpacingViolated { .. })
        ));
    }
}
