use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{segments_intersect, signed_area2, ExactMat, Point, Vector};
use crate::numerics::syntax::parse_exact;
use crate::numerics::{Exact, DEFAULT_PRECISION_BITS};
use crate::polygon::compute_angles;

/// A straight boundary segment shared by two sides: a cylinder boundary and
/// either another cylinder boundary or an edge of a core piece.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub label: String,
    /// Displacement from its start point to its end point.
    pub vector: Vector,
}

/// How an edge or boundary position is attached.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeLink {
    /// Glued by translation to an edge of a core piece.
    Glued { piece: usize, edge: usize },
    /// Lies on the segment, traversed forward or backward.
    Segment { segment: usize, forward: bool },
}

/// A polygon of the finite-area core, counterclockwise, in its own chart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorePiece {
    pub vertices: Vec<Point>,
    pub edges: Vec<EdgeLink>,
}

/// Occurrence of a segment in a boundary word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Occurrence {
    pub segment: usize,
    pub forward: bool,
}

/// A half-infinite cylinder. The boundary word is read with the cylinder
/// on the left; its total displacement is the circumference vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HalfCylinder {
    pub name: String,
    pub boundary: Vec<Occurrence>,
}

/// A point of the core or of a segment end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointRef {
    Corner { piece: usize, vertex: usize },
    SegmentEnd { segment: usize, end: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Node {
    /// The two cusps are the ends of these cylinders. The residue at the
    /// node is the circumference of `cylinders.0`; the other branch carries
    /// its negative.
    Polar { cylinders: (usize, usize) },
    NonPolar { points: (PointRef, PointRef) },
}

/// A point class of the complex, with its cone angle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularPoint {
    pub members: Vec<PointRef>,
    /// Cone angle as a multiple of 2π.
    pub angle_over_2pi: i64,
    pub on_node: bool,
}

impl SingularPoint {
    pub fn is_singular(&self) -> bool {
        self.angle_over_2pi != 1 || self.on_node
    }
}

/// An irreducible stable differential with simple poles at polar nodes:
/// a finite-area core with half-infinite cylinders attached along segments.
#[derive(Clone, Debug, Serialize)]
pub struct StableSurface {
    pub segments: Vec<Segment>,
    pub pieces: Vec<CorePiece>,
    pub cylinders: Vec<HalfCylinder>,
    pub nodes: Vec<Node>,
    /// Point classes, computed.
    pub points: Vec<SingularPoint>,
    pub genus: i64,
    pub irreducible: bool,
    #[serde(skip)]
    class_of: HashMap<PointRef, usize>,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidStableSurface(msg.into())
}

impl StableSurface {
    pub fn new(segments: Vec<Segment>, pieces: Vec<CorePiece>, cylinders: Vec<HalfCylinder>, nodes: Vec<Node>) -> Result<Self> {
        let mut s = StableSurface {
            segments,
            pieces,
            cylinders,
            nodes,
            points: vec![],
            genus: 0,
            irreducible: false,
            class_of: HashMap::new(),
        };
        s.validate()?;
        s.build_points()?;
        Ok(s)
    }

    fn occurrence_vector(&self, o: &Occurrence) -> Vector {
        let v = self.segments[o.segment].vector.clone();
        if o.forward {
            v
        } else {
            -v
        }
    }

    /// Circumference vector of a cylinder.
    pub fn circumference(&self, c: usize) -> Vector {
        self.cylinders[c].boundary.iter().fold(Point::origin(), |acc, o| &acc + &self.occurrence_vector(o))
    }

    /// One residue per polar node, with the node index.
    pub fn residues(&self) -> Vec<(usize, Vector)> {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(i, n)| match n {
                Node::Polar { cylinders } => Some((i, self.circumference(cylinders.0))),
                Node::NonPolar { .. } => None,
            })
            .collect()
    }

    pub fn polar_nodes(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Polar { .. })).count()
    }

    pub fn point_class(&self, p: &PointRef) -> usize {
        self.class_of[p]
    }

    /// Twice the area of the core.
    pub fn core_area2(&self) -> Exact {
        self.pieces.iter().fold(Exact::zero(), |acc, p| &acc + &signed_area2(&p.vertices))
    }

    fn edge_vector(&self, p: usize, e: usize) -> Vector {
        let v = &self.pieces[p].vertices;
        &v[(e + 1) % v.len()] - &v[e]
    }

    fn validate(&self) -> Result<()> {
        if self.segments.iter().any(|s| s.vector.norm_sq().is_zero()) {
            return Err(invalid("zero-length segment"));
        }
        let mut uses = vec![(0usize, 0usize); self.segments.len()];
        let mut count = |seg: usize, forward: bool| -> Result<()> {
            let u = uses.get_mut(seg).ok_or_else(|| invalid(format!("segment {seg} does not exist")))?;
            if forward {
                u.0 += 1
            } else {
                u.1 += 1
            }
            Ok(())
        };
        for (pi, piece) in self.pieces.iter().enumerate() {
            let v = &piece.vertices;
            let n = v.len();
            if n < 3 || piece.edges.len() != n {
                return Err(invalid(format!("piece {pi} needs at least 3 vertices and one link per edge")));
            }
            if signed_area2(v).signum() <= 0 {
                return Err(invalid(format!("piece {pi} is not counterclockwise")));
            }
            for i in 0..n {
                if v[i] == v[(i + 1) % n] {
                    return Err(invalid(format!("piece {pi} has a repeated vertex")));
                }
                for j in i + 2..n {
                    if i == 0 && j == n - 1 {
                        continue;
                    }
                    if segments_intersect(&v[i], &v[(i + 1) % n], &v[j], &v[(j + 1) % n]) {
                        return Err(invalid(format!("piece {pi} is not simple")));
                    }
                }
            }
            for (e, link) in piece.edges.iter().enumerate() {
                match link {
                    EdgeLink::Segment { segment, forward } => {
                        count(*segment, *forward)?;
                        let o = Occurrence { segment: *segment, forward: *forward };
                        if self.edge_vector(pi, e) != self.occurrence_vector(&o) {
                            return Err(invalid(format!("edge {e} of piece {pi} differs from its segment")));
                        }
                    }
                    EdgeLink::Glued { piece: q, edge: f } => {
                        let back = self
                            .pieces
                            .get(*q)
                            .and_then(|p| p.edges.get(*f))
                            .ok_or_else(|| invalid(format!("edge {e} of piece {pi} is glued to nothing")))?;
                        if *back != (EdgeLink::Glued { piece: pi, edge: e }) || (*q, *f) == (pi, e) {
                            return Err(invalid(format!("gluing of edge {e} of piece {pi} is not symmetric")));
                        }
                        if self.edge_vector(pi, e) != -self.edge_vector(*q, *f) {
                            return Err(invalid(format!("edge {e} of piece {pi} is not a translate of its partner")));
                        }
                    }
                }
            }
        }
        for (ci, c) in self.cylinders.iter().enumerate() {
            if c.boundary.is_empty() {
                return Err(invalid(format!("cylinder {ci} has an empty boundary")));
            }
            for o in &c.boundary {
                count(o.segment, o.forward)?;
            }
            let circ = self.circumference(ci);
            if circ.norm_sq().is_zero() {
                return Err(invalid(format!("cylinder {ci} has zero circumference")));
            }
            for o in &c.boundary {
                let v = self.occurrence_vector(o);
                if v.cross(&circ).signum() != 0 || v.dot(&circ).signum() <= 0 {
                    return Err(invalid(format!("boundary of cylinder {ci} is not a straight closed curve")));
                }
            }
        }
        if let Some(i) = uses.iter().position(|&u| u != (1, 1)) {
            return Err(invalid(format!("segment {i} must be used once forward and once backward")));
        }
        let mut seen = vec![0; self.cylinders.len()];
        for node in &self.nodes {
            match node {
                Node::Polar { cylinders: (a, b) } => {
                    if *a >= seen.len() || *b >= seen.len() || a == b {
                        return Err(invalid("polar node must join two distinct cylinders"));
                    }
                    seen[*a] += 1;
                    seen[*b] += 1;
                    if self.circumference(*a) != -self.circumference(*b) {
                        return Err(invalid(format!("residues at the node of cylinders {a} and {b} are not opposite")));
                    }
                }
                Node::NonPolar { points: (p, q) } => {
                    for r in [p, q] {
                        let ok = match *r {
                            PointRef::Corner { piece, vertex } => {
                                self.pieces.get(piece).is_some_and(|pc| vertex < pc.vertices.len())
                            }
                            PointRef::SegmentEnd { segment, .. } => segment < self.segments.len(),
                        };
                        if !ok {
                            return Err(invalid("non-polar node refers to a missing point"));
                        }
                    }
                }
            }
        }
        if seen.iter().any(|&k| k != 1) {
            return Err(invalid("every cylinder must end at exactly one polar node"));
        }
        Ok(())
    }

    fn build_points(&mut self) -> Result<()> {
        // indices: segment ends first, then piece corners
        let ns = self.segments.len();
        let mut offsets = vec![];
        let mut total = 2 * ns;
        for p in &self.pieces {
            offsets.push(total);
            total += p.vertices.len();
        }
        let idx = |r: &PointRef| match *r {
            PointRef::SegmentEnd { segment, end } => 2 * segment + end as usize,
            PointRef::Corner { piece, vertex } => offsets[piece] + vertex,
        };
        let seg_end = |o: &Occurrence, head: bool| PointRef::SegmentEnd { segment: o.segment, end: o.forward == head };
        let mut dsu = Dsu((0..total).collect());
        let mut junctions: Vec<PointRef> = vec![];
        for c in &self.cylinders {
            let k = c.boundary.len();
            for i in 0..k {
                let (o, next) = (&c.boundary[i], &c.boundary[(i + 1) % k]);
                dsu.union(idx(&seg_end(o, true)), idx(&seg_end(next, false)));
                junctions.push(seg_end(o, true));
            }
        }
        for (pi, piece) in self.pieces.iter().enumerate() {
            let n = piece.vertices.len();
            for (e, link) in piece.edges.iter().enumerate() {
                let (a, b) = (PointRef::Corner { piece: pi, vertex: e }, PointRef::Corner { piece: pi, vertex: (e + 1) % n });
                match link {
                    EdgeLink::Segment { segment, forward } => {
                        let o = Occurrence { segment: *segment, forward: *forward };
                        dsu.union(idx(&a), idx(&seg_end(&o, false)));
                        dsu.union(idx(&b), idx(&seg_end(&o, true)));
                    }
                    EdgeLink::Glued { piece: q, edge: f } => {
                        let m = self.pieces[*q].vertices.len();
                        dsu.union(idx(&a), idx(&PointRef::Corner { piece: *q, vertex: (f + 1) % m }));
                        dsu.union(idx(&b), idx(&PointRef::Corner { piece: *q, vertex: *f }));
                    }
                }
            }
        }
        let mut refs: Vec<PointRef> = (0..ns)
            .flat_map(|s| [false, true].map(|end| PointRef::SegmentEnd { segment: s, end }))
            .collect();
        for (pi, p) in self.pieces.iter().enumerate() {
            refs.extend((0..p.vertices.len()).map(|v| PointRef::Corner { piece: pi, vertex: v }));
        }
        // angles in units of π
        let mut angle: HashMap<usize, f64> = HashMap::new();
        for r in &junctions {
            *angle.entry(dsu.find(idx(r))).or_default() += 1.0;
        }
        for (pi, p) in self.pieces.iter().enumerate() {
            let lam = compute_angles(&p.vertices, DEFAULT_PRECISION_BITS)?;
            for (v, l) in lam.iter().enumerate() {
                *angle.entry(dsu.find(idx(&PointRef::Corner { piece: pi, vertex: v }))).or_default() += l.to_f64();
            }
        }
        let node_points: Vec<usize> = self
            .nodes
            .iter()
            .flat_map(|n| match n {
                Node::NonPolar { points: (p, q) } => vec![idx(p), idx(q)],
                Node::Polar { .. } => vec![],
            })
            .map(|i| dsu.find(i))
            .collect();
        let mut roots: Vec<usize> = vec![];
        let mut class_of = HashMap::new();
        let mut points: Vec<SingularPoint> = vec![];
        for r in &refs {
            let root = dsu.find(idx(r));
            let k = match roots.iter().position(|&x| x == root) {
                Some(k) => k,
                None => {
                    let a = angle.get(&root).copied().unwrap_or(0.0) / 2.0;
                    let turns = a.round();
                    if (a - turns).abs() > 1e-6 || turns < 1.0 {
                        return Err(invalid(format!("cone angle {a}·2π is not a positive multiple of 2π")));
                    }
                    roots.push(root);
                    points.push(SingularPoint {
                        members: vec![],
                        angle_over_2pi: turns as i64,
                        on_node: node_points.contains(&root),
                    });
                    roots.len() - 1
                }
            };
            points[k].members.push(*r);
            class_of.insert(*r, k);
        }
        // Euler characteristic of the closed normalization: cylinders are discs
        let glued = self.pieces.iter().flat_map(|p| &p.edges).filter(|l| matches!(l, EdgeLink::Glued { .. })).count() / 2;
        let chi = points.len() as i64 - (self.segments.len() + glued) as i64 + (self.pieces.len() + self.cylinders.len()) as i64;
        // connectivity of the normalization: pieces and cylinders linked by segments and gluings
        let mut comp = Dsu((0..self.pieces.len() + self.cylinders.len()).collect());
        let mut owner: Vec<Vec<usize>> = vec![vec![]; ns];
        for (pi, p) in self.pieces.iter().enumerate() {
            for l in &p.edges {
                match l {
                    EdgeLink::Segment { segment, .. } => owner[*segment].push(pi),
                    EdgeLink::Glued { piece, .. } => comp.union(pi, *piece),
                }
            }
        }
        for (ci, c) in self.cylinders.iter().enumerate() {
            for o in &c.boundary {
                owner[o.segment].push(self.pieces.len() + ci);
            }
        }
        for w in &owner {
            comp.union(w[0], w[1]);
        }
        let parts = (0..comp.0.len()).filter(|&i| comp.find(i) == i).count();
        self.irreducible = parts == 1;
        if chi % 2 != 0 {
            return Err(invalid(format!("odd Euler characteristic {chi}")));
        }
        let normalization_genus = (2 - chi) / 2;
        self.genus = normalization_genus + self.nodes.len() as i64;
        let cusps = self.nodes.len() as i64 * 2;
        if self.irreducible && chi - cusps >= 0 {
            return Err(invalid("the part has nonnegative Euler characteristic"));
        }
        self.points = points;
        self.class_of = class_of;
        Ok(())
    }

    /// Image under a linear map applied to every chart.
    pub fn transformed(&self, m: &ExactMat) -> Result<StableSurface> {
        let segments = self.segments.iter().map(|s| Segment { label: s.label.clone(), vector: m.apply(&s.vector) }).collect();
        let pieces = self
            .pieces
            .iter()
            .map(|p| CorePiece { vertices: p.vertices.iter().map(|v| m.apply(v)).collect(), edges: p.edges.clone() })
            .collect();
        StableSurface::new(segments, pieces, self.cylinders.clone(), self.nodes.clone())
    }

    /// The same surface with nodes, cylinders and pieces listed in another
    /// order: `node_perm[i]` is the new position of node `i`, and so on.
    pub fn relabeled(&self, node_perm: &[usize], cyl_perm: &[usize], piece_perm: &[usize]) -> Result<StableSurface> {
        let mut nodes = self.nodes.clone();
        let remap_point = |r: &PointRef| match *r {
            PointRef::Corner { piece, vertex } => PointRef::Corner { piece: piece_perm[piece], vertex },
            other => other,
        };
        for (i, n) in self.nodes.iter().enumerate() {
            nodes[node_perm[i]] = match n {
                Node::Polar { cylinders: (a, b) } => Node::Polar { cylinders: (cyl_perm[*a], cyl_perm[*b]) },
                Node::NonPolar { points: (p, q) } => Node::NonPolar { points: (remap_point(p), remap_point(q)) },
            };
        }
        let mut cylinders = self.cylinders.clone();
        for (i, c) in self.cylinders.iter().enumerate() {
            cylinders[cyl_perm[i]] = c.clone();
        }
        let mut pieces = self.pieces.clone();
        for (i, p) in self.pieces.iter().enumerate() {
            let edges = p
                .edges
                .iter()
                .map(|l| match l {
                    EdgeLink::Glued { piece, edge } => EdgeLink::Glued { piece: piece_perm[*piece], edge: *edge },
                    other => other.clone(),
                })
                .collect();
            pieces[piece_perm[i]] = CorePiece { vertices: p.vertices.clone(), edges };
        }
        StableSurface::new(self.segments.clone(), pieces, cylinders, nodes)
    }
}

// ---- input format ----

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct SegmentSpec {
    pub label: String,
    pub vector: [String; 2],
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeSpec {
    Segment { segment: String, forward: bool },
    Glued { piece: usize, edge: usize },
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct PieceSpec {
    pub vertices: Vec<[String; 2]>,
    pub edges: Vec<EdgeSpec>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct OccurrenceSpec {
    pub segment: String,
    pub forward: bool,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct CylinderSpec {
    pub name: String,
    pub boundary: Vec<OccurrenceSpec>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointSpec {
    Corner { piece: usize, vertex: usize },
    SegmentStart { segment: String },
    SegmentEnd { segment: String },
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeSpec {
    Polar {
        cylinders: [String; 2],
        /// Optional declared residue, checked against the geometry.
        #[serde(default)]
        residue: Option<[String; 2]>,
    },
    NonPolar { points: [PointSpec; 2] },
}

/// Serialized form of a stable surface; scalars use the exact syntax.
#[derive(Clone, Debug, Default, Deserialize, Serialize)]
pub struct StableSurfaceSpec {
    pub segments: Vec<SegmentSpec>,
    #[serde(default)]
    pub pieces: Vec<PieceSpec>,
    pub cylinders: Vec<CylinderSpec>,
    pub nodes: Vec<NodeSpec>,
}

fn parse_point(p: &[String; 2]) -> Result<Point> {
    Ok(Point::new(parse_exact(&p[0])?, parse_exact(&p[1])?))
}

impl StableSurfaceSpec {
    pub fn build(&self) -> Result<StableSurface> {
        let seg_index: HashMap<&str, usize> = self.segments.iter().enumerate().map(|(i, s)| (s.label.as_str(), i)).collect();
        let seg = |l: &str| seg_index.get(l).copied().ok_or_else(|| Error::Parse(format!("unknown segment {l:?}")));
        let cyl_index: HashMap<&str, usize> = self.cylinders.iter().enumerate().map(|(i, c)| (c.name.as_str(), i)).collect();
        let cyl = |l: &str| cyl_index.get(l).copied().ok_or_else(|| Error::Parse(format!("unknown cylinder {l:?}")));
        let segments = self
            .segments
            .iter()
            .map(|s| Ok(Segment { label: s.label.clone(), vector: parse_point(&s.vector)? }))
            .collect::<Result<Vec<_>>>()?;
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                Ok(CorePiece {
                    vertices: p.vertices.iter().map(parse_point).collect::<Result<_>>()?,
                    edges: p
                        .edges
                        .iter()
                        .map(|e| {
                            Ok(match e {
                                EdgeSpec::Segment { segment, forward } => {
                                    EdgeLink::Segment { segment: seg(segment)?, forward: *forward }
                                }
                                EdgeSpec::Glued { piece, edge } => EdgeLink::Glued { piece: *piece, edge: *edge },
                            })
                        })
                        .collect::<Result<_>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let cylinders = self
            .cylinders
            .iter()
            .map(|c| {
                Ok(HalfCylinder {
                    name: c.name.clone(),
                    boundary: c
                        .boundary
                        .iter()
                        .map(|o| Ok(Occurrence { segment: seg(&o.segment)?, forward: o.forward }))
                        .collect::<Result<_>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let point = |p: &PointSpec| -> Result<PointRef> {
            Ok(match p {
                PointSpec::Corner { piece, vertex } => PointRef::Corner { piece: *piece, vertex: *vertex },
                PointSpec::SegmentStart { segment } => PointRef::SegmentEnd { segment: seg(segment)?, end: false },
                PointSpec::SegmentEnd { segment } => PointRef::SegmentEnd { segment: seg(segment)?, end: true },
            })
        };
        let mut declared = vec![];
        let nodes = self
            .nodes
            .iter()
            .map(|n| {
                Ok(match n {
                    NodeSpec::Polar { cylinders: [a, b], residue } => {
                        let (a, b) = (cyl(a)?, cyl(b)?);
                        if let Some(r) = residue {
                            declared.push((a, parse_point(r)?));
                        }
                        Node::Polar { cylinders: (a, b) }
                    }
                    NodeSpec::NonPolar { points: [p, q] } => Node::NonPolar { points: (point(p)?, point(q)?) },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let surface = StableSurface::new(segments, pieces, cylinders, nodes)?;
        for (c, r) in declared {
            if surface.circumference(c) != r {
                return Err(invalid(format!("declared residue differs from the circumference of cylinder {c}")));
            }
        }
        Ok(surface)
    }
}
