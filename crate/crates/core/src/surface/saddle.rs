use std::cmp::Ordering;

use serde::Serialize;

use crate::billiard::ReflectionItinerary;
use crate::corridor::{ccw_cmp, walk, Net, WalkOptions};
use crate::error::{Error, Result};
use crate::geometry::{orient, Isometry, Point, Vector};
use crate::numerics::Exact;
use crate::polygon::VertexKind;

use super::kz::TranslationSurface;

/// A straight path on the surface, from a corner of `start_copy` to a
/// corner, crossing the listed polygon edges in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfacePath {
    pub start_copy: usize,
    pub start_vertex: usize,
    pub end_vertex: usize,
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaddleConnection {
    pub start_cone: usize,
    pub end_cone: usize,
    pub end_copy: usize,
    pub path: SurfacePath,
    /// Developed displacement, in the start copy's coordinates.
    pub holonomy: Vector,
    pub length_squared: Exact,
}

#[derive(Clone, Debug, Serialize)]
pub struct SaddleCensus {
    pub max_length: Exact,
    pub connections: Vec<SaddleConnection>,
    pub partial: bool,
    pub nodes: u64,
}

/// The image of a surface path on the table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Projection {
    pub itinerary: ReflectionItinerary,
    pub start: Point,
    pub end: Point,
    pub length_squared: Exact,
}

struct SurfaceNet<'a> {
    surface: &'a TranslationSurface,
    pieces: Vec<Vec<Point>>,
}

impl<'a> SurfaceNet<'a> {
    fn new(surface: &'a TranslationSurface) -> Self {
        let n = surface.polygon.n();
        let pieces = (0..surface.copies.len())
            .map(|c| {
                let placed = surface.copy_vertices(c);
                (0..n).map(|k| placed[polygon_vertex(surface, c, k)].clone()).collect()
            })
            .collect();
        SurfaceNet { surface, pieces }
    }
}

fn reversed(s: &TranslationSurface, c: usize) -> bool {
    s.copies[c].orientation_reversing
}

/// Piece vertex `k` of copy `c` as a polygon vertex (an involution).
fn polygon_vertex(s: &TranslationSurface, c: usize, k: usize) -> usize {
    let n = s.polygon.n();
    if reversed(s, c) {
        (n - k) % n
    } else {
        k
    }
}

/// Piece edge `k` of copy `c` as a polygon edge (an involution).
fn polygon_edge(s: &TranslationSurface, c: usize, k: usize) -> usize {
    let n = s.polygon.n();
    if reversed(s, c) {
        n - 1 - k
    } else {
        k
    }
}

impl Net for SurfaceNet<'_> {
    fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    fn vertices(&self, piece: usize) -> &[Point] {
        &self.pieces[piece]
    }

    fn is_start(&self, piece: usize, v: usize) -> bool {
        self.surface.polygon.vertex_kind(polygon_vertex(self.surface, piece, v)) == VertexKind::Real
    }

    fn is_end(&self, piece: usize, v: usize) -> bool {
        self.is_start(piece, v)
    }

    fn traverse(&self, piece: usize, edge: usize) -> Option<(usize, usize, Isometry)> {
        let e = polygon_edge(self.surface, piece, edge);
        let (d, t) = self.surface.partner[piece][e].clone()?;
        Some((d, polygon_edge(self.surface, d, e), Isometry::translation(t)))
    }
}

fn check_field(surface: &TranslationSurface, max_sq: &Exact) -> Result<()> {
    let field = surface.polygon.vertices().iter().map(Point::field).max().unwrap_or(1);
    if max_sq.is_rational() || max_sq.radicand() == field {
        Ok(())
    } else {
        Err(Error::InvalidPolygon("length bound lies outside the coordinate field".into()))
    }
}

/// Census of saddle connections of length ≤ `max_length`, one per starting
/// direction, sorted by length then by angle from the positive x-axis.
pub fn saddle_connections_with_options(
    surface: &TranslationSurface,
    max_length: &Exact,
    opts: &WalkOptions,
) -> Result<SaddleCensus> {
    if surface.is_truncated || surface.genus.is_none() {
        return Err(Error::TruncatedSurface("saddle connections need a complete surface".into()));
    }
    if max_length.signum() <= 0 {
        return Ok(SaddleCensus { max_length: max_length.clone(), connections: vec![], partial: false, nodes: 0 });
    }
    let max_sq = max_length.square();
    check_field(surface, &max_sq)?;
    let net = SurfaceNet::new(surface);
    let result = walk(&net, &max_sq, opts);
    let mut connections: Vec<SaddleConnection> = result
        .hits
        .into_iter()
        .map(|h| {
            let start_vertex = polygon_vertex(surface, h.start_piece, h.start_vertex);
            let end_vertex = polygon_vertex(surface, h.end_piece, h.end_vertex);
            SaddleConnection {
                start_cone: surface.corner_class[h.start_piece][start_vertex],
                end_cone: surface.corner_class[h.end_piece][end_vertex],
                end_copy: h.end_piece,
                holonomy: &h.end - &h.start,
                path: SurfacePath {
                    start_copy: h.start_piece,
                    start_vertex,
                    end_vertex,
                    edges: h.crossings.iter().map(|&(p, e)| polygon_edge(surface, p, e)).collect(),
                },
                length_squared: h.length_sq,
            }
        })
        .collect();
    let east = Point::int(1, 0);
    connections.sort_by(|a, b| {
        a.length_squared
            .cmp(&b.length_squared)
            .then_with(|| angle_cmp(&east, &a.holonomy, &b.holonomy))
            .then_with(|| a.path.start_copy.cmp(&b.path.start_copy))
            .then_with(|| a.path.start_vertex.cmp(&b.path.start_vertex))
    });
    Ok(SaddleCensus { max_length: max_length.clone(), connections, partial: result.partial, nodes: result.nodes })
}

fn angle_cmp(base: &Vector, a: &Vector, b: &Vector) -> Ordering {
    match (a.cross(base).signum() == 0 && a.dot(base).signum() > 0, b.cross(base).signum() == 0 && b.dot(base).signum() > 0) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => ccw_cmp(base, a, b),
    }
}

/// Every saddle connection of length ≤ `max_length`.
pub fn saddle_connections(surface: &TranslationSurface, max_length: &Exact) -> Result<Vec<SaddleConnection>> {
    let opts = WalkOptions::default();
    let census = saddle_connections_with_options(surface, max_length, &opts)?;
    if census.partial {
        return Err(Error::BudgetExceeded { budget: opts.node_budget });
    }
    Ok(census.connections)
}

/// Folds a surface path onto the table and checks that the unfolded
/// billiard segment meets each listed edge in its interior.
pub fn project_to_billiard(surface: &TranslationSurface, path: &SurfacePath) -> Result<Projection> {
    let poly = &surface.polygon;
    let n = poly.n();
    if path.start_copy >= surface.copies.len() || path.start_vertex >= n || path.end_vertex >= n {
        return Err(Error::InvalidPolygon("surface path index out of range".into()));
    }
    // develop on the surface and in the billiard unfolding side by side
    let mut copy = path.start_copy;
    let mut offset = Vector::int(0, 0);
    let mut iso = surface.copies[copy].placement.clone();
    let mut frames = vec![iso.clone()];
    for &e in &path.edges {
        if e >= n {
            return Err(Error::InvalidPolygon(format!("edge {e} out of range")));
        }
        let Some((d, t)) = surface.partner[copy][e].clone() else {
            return Err(Error::InvalidPolygon(format!("edge {e} of copy {copy} is not glued")));
        };
        offset = &offset + &t;
        let (a, b) = poly.edge(e);
        iso = iso.compose(&Isometry::reflection(a, b));
        frames.push(iso.clone());
        copy = d;
    }
    let surf_start = surface.copies[path.start_copy].placement.apply(poly.vertex(path.start_vertex));
    let surf_end = &surface.copies[copy].placement.apply(poly.vertex(path.end_vertex)) + &offset;
    let start = frames[0].apply(poly.vertex(path.start_vertex));
    let end = frames.last().unwrap().apply(poly.vertex(path.end_vertex));
    let length_squared = (&end - &start).norm_sq();
    if length_squared != (&surf_end - &surf_start).norm_sq() {
        return Err(Error::InconsistentAngles("unfolded length differs from the surface length".into()));
    }
    if length_squared.is_zero() {
        return Err(Error::InvalidPolygon("degenerate path".into()));
    }
    // vertices strictly inside the segment
    for f in &frames {
        for v in poly.vertices() {
            let p = f.apply(v);
            if p != start && p != end && orient(&start, &end, &p) == 0 && strictly_between(&start, &end, &p) {
                return Err(Error::ConePointInInterior);
            }
        }
    }
    for (k, &e) in path.edges.iter().enumerate() {
        let (a, b) = poly.edge(e);
        let (a, b) = (frames[k].apply(a), frames[k].apply(b));
        let crosses = orient(&start, &end, &a) * orient(&start, &end, &b) < 0
            && orient(&a, &b, &start) * orient(&a, &b, &end) < 0;
        if !crosses {
            return Err(Error::InvalidPolygon(format!("path does not cross edge {e} at step {k}")));
        }
    }
    Ok(Projection {
        itinerary: ReflectionItinerary {
            start_vertex: path.start_vertex,
            edge_indices: path.edges.clone(),
            end_vertex: path.end_vertex,
        },
        start,
        end,
        length_squared,
    })
}

fn strictly_between(a: &Point, b: &Point, p: &Point) -> bool {
    let d = b - a;
    let t = (p - a).dot(&d);
    t.signum() > 0 && t < d.norm_sq()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::Polygon;
    use crate::surface::{katok_zemljakov, KzMode};

    fn square() -> Polygon {
        Polygon::new(vec![Point::int(0, 0), Point::int(1, 0), Point::int(1, 1), Point::int(0, 1)]).unwrap()
    }

    #[test]
    fn torus_from_square() {
        let s = katok_zemljakov(&square(), KzMode::Exact).unwrap();
        let sc = saddle_connections(&s, &Exact::int(2)).unwrap();
        // the doubled square torus is 2x2 with four marked points
        assert!(!sc.is_empty());
        assert!(sc.iter().all(|c| c.length_squared != Exact::int(1)));
        assert_eq!(sc[0].length_squared, Exact::int(2));
        for c in &sc {
            let p = project_to_billiard(&s, &c.path).unwrap();
            assert_eq!(p.length_squared, c.length_squared);
        }
    }

    #[test]
    fn truncated_surface_is_refused() {
        let s = katok_zemljakov(&square(), KzMode::Truncated(1)).unwrap();
        assert!(matches!(saddle_connections(&s, &Exact::int(2)), Err(Error::TruncatedSurface(_))));
    }
}
