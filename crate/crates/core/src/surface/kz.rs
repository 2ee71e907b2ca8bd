use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Isometry, Point, Vector};
use crate::numerics::{rat, rat_int, AngleValue, Exact, LinComb, Rational, Real};
use crate::polygon::{classify_polygon, Classification, EdgeKind, Polygon, VertexKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", content = "depth", rename_all = "snake_case")]
pub enum KzMode {
    Exact,
    Truncated(usize),
}

/// Element of the group generated by the edge reflections: a rotation by
/// `angle·π` (angle mod 2) or a reflection across the line at `angle·π`
/// (angle mod 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct GroupKey {
    reflect: bool,
    angle: LinComb,
}

impl GroupKey {
    fn rotation(a: LinComb) -> GroupKey {
        GroupKey { reflect: false, angle: a.reduce_mod(2) }
    }

    fn reflection(phi: LinComb) -> GroupKey {
        GroupKey { reflect: true, angle: phi.reduce_mod(1) }
    }

    fn identity() -> GroupKey {
        GroupKey::rotation(LinComb::default())
    }

    /// `self ∘ other`.
    fn compose(&self, other: &GroupKey) -> GroupKey {
        let half = rat(1, 2);
        match (self.reflect, other.reflect) {
            (false, false) => GroupKey::rotation(self.angle.add(&other.angle)),
            (true, true) => GroupKey::rotation(self.angle.sub(&other.angle).scale(&rat_int(2))),
            (false, true) => GroupKey::reflection(other.angle.add(&self.angle.scale(&half))),
            (true, false) => GroupKey::reflection(self.angle.sub(&other.angle.scale(&half))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CopyPlacement {
    /// Isometry placing the polygon as this copy.
    pub placement: Isometry,
    pub orientation_reversing: bool,
    /// Linear part as a group element, in the frame where edge 0 is
    /// horizontal.
    pub group_element: String,
    /// Length of the shortest reflection word reaching this copy.
    pub word_length: usize,
}

/// Edge `edge` of `copy_b` is mapped onto edge `edge` of `copy_a` by
/// `x ↦ x + translation`.
#[derive(Clone, Debug, Serialize)]
pub struct Gluing {
    pub copy_a: usize,
    pub copy_b: usize,
    pub edge: usize,
    pub translation: Vector,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeKind {
    Finite,
    Infinite,
    BoundaryTruncation,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConePoint {
    pub polygon_vertex: usize,
    /// `(copy, vertex)` corners meeting at the point.
    pub corners: Vec<(usize, usize)>,
    /// Total angle as a multiple of 2π; absent for infinite-angle classes.
    pub angle_over_2pi: Option<AngleValue>,
    pub kind: ConeKind,
}

impl ConePoint {
    /// Whether the point is a genuine singularity (angle other than 2π).
    pub fn is_singular(&self) -> bool {
        match (&self.kind, &self.angle_over_2pi) {
            (ConeKind::Finite, Some(a)) => a.as_rational() != Some(&rat_int(1)),
            _ => true,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TranslationSurface {
    #[serde(skip)]
    pub polygon: Polygon,
    pub copies: Vec<CopyPlacement>,
    pub gluings: Vec<Gluing>,
    pub cone_points: Vec<ConePoint>,
    pub is_truncated: bool,
    pub euler_characteristic: Option<i64>,
    pub genus: Option<i64>,
    /// Gauss-Bonnet residue `Σ(angle − 2π) − 2π(2g − 2)` in units of π;
    /// zero for every complete surface.
    #[serde(skip)]
    pub gauss_bonnet_defect: Option<Rational>,
    /// `partner[c][e]`: copy glued to edge `e` of copy `c`, with the
    /// translation from the partner's coordinates to `c`'s.
    #[serde(skip)]
    pub partner: Vec<Vec<Option<(usize, Vector)>>>,
    /// `corner_class[c][v]`: index into `cone_points`.
    #[serde(skip)]
    pub corner_class: Vec<Vec<usize>>,
}

impl TranslationSurface {
    pub fn copy_vertices(&self, c: usize) -> Vec<Point> {
        self.polygon.vertices().iter().map(|p| self.copies[c].placement.apply(p)).collect()
    }

    /// Sum over cone points of `(angle − 2π)`, in units of π.
    pub fn curvature_sum(&self) -> Option<Rational> {
        curvature(&self.cone_points)
    }
}

fn curvature(points: &[ConePoint]) -> Option<Rational> {
    let mut total = rat_int(0);
    for cp in points {
        let a = cp.angle_over_2pi.as_ref()?.as_rational()?;
        total += (a - rat_int(1)) * rat_int(2);
    }
    Some(total)
}

/// Angle coefficients as exact linear combinations. Ball angles become
/// formal generators, except the last, which is fixed by `Σλ = N − 2`.
fn symbolic_angles(polygon: &Polygon) -> Vec<LinComb> {
    let n = polygon.n();
    let balls: Vec<usize> = (0..n).filter(|&j| !polygon.angle(j).is_exact()).collect();
    let mut out: Vec<LinComb> = (0..n)
        .map(|j| match polygon.angle(j).lin_comb() {
            Some(l) => l,
            None => LinComb::generator(j),
        })
        .collect();
    if let Some(&last) = balls.last() {
        let others = (0..n).filter(|&j| j != last).fold(LinComb::default(), |acc, j| acc.add(&out[j]));
        out[last] = LinComb::rational(rat_int(n as i64 - 2)).sub(&others);
    }
    out
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// The Katok-Zemljakov surface: exact for rational polygons, otherwise the
/// copies reached by reflection words of bounded length.
pub fn katok_zemljakov(polygon: &Polygon, mode: KzMode) -> Result<TranslationSurface> {
    let depth_limit = match mode {
        KzMode::Exact => {
            if classify_polygon(polygon) != Classification::Rational {
                return Err(Error::ExactModeOnIrrational);
            }
            None
        }
        KzMode::Truncated(d) => Some(d),
    };
    let n = polygon.n();
    let lambdas = symbolic_angles(polygon);
    let mut phi = vec![LinComb::default()];
    for i in 1..n {
        phi.push(phi[i - 1].add(&LinComb::rational(rat_int(1)).sub(&lambdas[i])));
    }
    let gens: Vec<GroupKey> = phi.iter().map(|p| GroupKey::reflection(p.clone())).collect();
    let walls: Vec<usize> = (0..n).filter(|&e| polygon.edge_kind(e) == EdgeKind::Wall).collect();
    let refl: Vec<Isometry> = (0..n)
        .map(|e| {
            let (a, b) = polygon.edge(e);
            Isometry::reflection(a, b)
        })
        .collect();

    // breadth-first over reflection words
    let mut keys: Vec<GroupKey> = vec![GroupKey::identity()];
    let mut index: HashMap<GroupKey, usize> = HashMap::from([(GroupKey::identity(), 0)]);
    let mut placements: Vec<Isometry> = vec![Isometry::identity()];
    let mut word_len: Vec<usize> = vec![0];
    let mut queue = VecDeque::from([0usize]);
    const MAX_COPIES: usize = 100_000;
    while let Some(c) = queue.pop_front() {
        if depth_limit.is_some_and(|d| word_len[c] >= d) {
            continue;
        }
        for &e in &walls {
            let key = keys[c].compose(&gens[e]);
            let placement = placements[c].compose(&refl[e]);
            match index.get(&key) {
                Some(&other) => {
                    if mode == KzMode::Exact && placements[other].linear != placement.linear {
                        return Err(Error::InconsistentAngles(format!(
                            "reflection words reach one group element with different linear parts (copy {other})"
                        )));
                    }
                }
                None => {
                    if keys.len() >= MAX_COPIES {
                        return Err(Error::BudgetExceeded { budget: MAX_COPIES as u64 });
                    }
                    index.insert(key.clone(), keys.len());
                    keys.push(key);
                    placements.push(placement);
                    word_len.push(word_len[c] + 1);
                    queue.push_back(keys.len() - 1);
                }
            }
        }
    }
    let m = keys.len();

    // gluings: copy c edge e ↔ copy c·r_e edge e
    let mut partner: Vec<Vec<Option<(usize, Vector)>>> = vec![vec![None; n]; m];
    let mut gluings = vec![];
    for c in 0..m {
        for &e in &walls {
            let Some(&d) = index.get(&keys[c].compose(&gens[e])) else { continue };
            let v = polygon.vertex(e);
            let t = &placements[c].apply(v) - &placements[d].apply(v);
            debug_assert_eq!(
                &placements[c].apply(polygon.vertex(e + 1)) - &placements[d].apply(polygon.vertex(e + 1)),
                t
            );
            partner[c][e] = Some((d, t.clone()));
            if c < d {
                gluings.push(Gluing { copy_a: c, copy_b: d, edge: e, translation: t });
            }
        }
    }

    // vertex classes
    let mut uf = UnionFind((0..m * n).collect());
    for c in 0..m {
        for e in 0..n {
            if let Some((d, _)) = partner[c][e] {
                uf.union(c * n + e, d * n + e);
                uf.union(c * n + (e + 1) % n, d * n + (e + 1) % n);
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for c in 0..m {
        for v in 0..n {
            classes.entry(uf.find(c * n + v)).or_default().push((c, v));
        }
    }
    let mut corner_class = vec![vec![0; n]; m];
    let mut cone_points = vec![];
    for corners in classes.into_values() {
        let j = corners[0].1;
        let complete = corners.iter().all(|&(c, v)| partner[c][v].is_some() && partner[c][(v + n - 1) % n].is_some());
        let lambda = polygon.angle(j);
        let kind = if polygon.vertex_kind(j) != VertexKind::Real || (!complete && lambda.as_rational().is_some()) {
            ConeKind::BoundaryTruncation
        } else if lambda.as_rational().is_none() {
            ConeKind::Infinite
        } else {
            ConeKind::Finite
        };
        let angle_over_2pi = match kind {
            ConeKind::Infinite => None,
            _ => Some(AngleValue::from_real(
                &lambda.to_real() * &Real::Exact(Exact::frac(corners.len() as i64, 2)),
            )),
        };
        for &(c, v) in &corners {
            corner_class[c][v] = cone_points.len();
        }
        cone_points.push(ConePoint { polygon_vertex: j, corners, angle_over_2pi, kind });
    }

    let complete = partner.iter().all(|row| walls.iter().all(|&e| row[e].is_some())) && walls.len() == n;
    let is_truncated = !complete || mode != KzMode::Exact;
    let (euler, genus, defect) = if complete {
        let chi = cone_points.len() as i64 - gluings.len() as i64 + m as i64;
        let genus = (2 - chi) / 2;
        let defect = curvature(&cone_points).map(|k| k - rat_int(2 * (2 * genus - 2)));
        (Some(chi), Some(genus), defect)
    } else {
        (None, None, None)
    };
    let copies = (0..m)
        .map(|c| CopyPlacement {
            orientation_reversing: !placements[c].is_orientation_preserving(),
            group_element: format!("{} {}", if keys[c].reflect { "reflection" } else { "rotation" }, keys[c].angle),
            placement: placements[c].clone(),
            word_length: word_len[c],
        })
        .collect();
    Ok(TranslationSurface {
        polygon: polygon.clone(),
        copies,
        gluings,
        cone_points,
        is_truncated,
        euler_characteristic: euler,
        genus,
        gauss_bonnet_defect: defect,
        partner,
        corner_class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(pts: &[(i64, i64)]) -> Polygon {
        Polygon::new(pts.iter().map(|&(x, y)| Point::int(x, y)).collect()).unwrap()
    }

    #[test]
    fn square_gives_torus() {
        let s = katok_zemljakov(&poly(&[(0, 0), (1, 0), (1, 1), (0, 1)]), KzMode::Exact).unwrap();
        assert_eq!(s.copies.len(), 4);
        assert_eq!(s.euler_characteristic, Some(0));
        assert_eq!(s.genus, Some(1));
        assert!(s.cone_points.iter().all(|c| !c.is_singular()));
        assert_eq!(s.gauss_bonnet_defect, Some(rat_int(0)));
        assert!(!s.is_truncated);
    }

    #[test]
    fn right_isosceles_triangle() {
        let s = katok_zemljakov(&poly(&[(0, 0), (1, 0), (0, 1)]), KzMode::Exact).unwrap();
        assert_eq!(s.copies.len(), 8);
        assert_eq!(s.genus, Some(1));
        assert_eq!(s.gauss_bonnet_defect, Some(rat_int(0)));
    }

    fn pi_over_eight(angles: Option<Vec<AngleValue>>) -> Polygon {
        let r2 = Exact::sqrt_int(2);
        let pts = vec![Point::int(0, 0), Point::int(1, 0), Point::new(Exact::one(), &r2 - &Exact::one())];
        Polygon::with_angles(pts, angles, 256).unwrap()
    }

    #[test]
    fn pi_over_eight_triangle_has_genus_two() {
        assert!(matches!(katok_zemljakov(&pi_over_eight(None), KzMode::Exact), Err(Error::ExactModeOnIrrational)));
        let angles = vec![AngleValue::rational(1, 8), AngleValue::rational(1, 2), AngleValue::rational(3, 8)];
        let s = katok_zemljakov(&pi_over_eight(Some(angles)), KzMode::Exact).unwrap();
        assert_eq!(s.copies.len(), 16);
        assert_eq!(s.genus, Some(2));
        assert_eq!(s.gauss_bonnet_defect, Some(rat_int(0)));
        let singular: Vec<_> = s.cone_points.iter().filter(|c| c.is_singular()).collect();
        assert_eq!(singular.len(), 1);
        assert_eq!(singular[0].angle_over_2pi.as_ref().unwrap().as_rational(), Some(&rat_int(3)));
    }

    #[test]
    fn truncation_keeps_short_words() {
        let s = katok_zemljakov(&pi_over_eight(None), KzMode::Truncated(2)).unwrap();
        assert!(s.is_truncated);
        assert!(s.genus.is_none());
        assert!(s.copies.iter().all(|c| c.word_length <= 2));
        // the two legs meet at a right angle, so their reflections commute
        assert_eq!(s.copies.len(), 9);
    }

    #[test]
    fn group_key_rules() {
        let f = |q: (i64, i64)| GroupKey::reflection(LinComb::rational(rat(q.0, q.1)));
        let r = f((0, 1)).compose(&f((1, 4)));
        assert_eq!(r, GroupKey::rotation(LinComb::rational(rat(-1, 2))));
        assert_eq!(f((1, 3)).compose(&f((1, 3))), GroupKey::identity());
    }
}
