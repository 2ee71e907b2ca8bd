//! Straight-line development through a net of polygons glued along edges.
//!
//! From every start corner, the open cone of directions is split at the
//! developed vertices it sees; each sub-cone is followed through the edge
//! it exits by, until its window leaves the disc of the length bound.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering as AtomicOrdering};

use rayon::prelude::*;

use crate::geometry::{Isometry, Point, Vector};
use crate::numerics::Exact;

/// Polygons glued along edges by isometries.
pub trait Net: Sync {
    fn piece_count(&self) -> usize;
    /// Counterclockwise vertices in the piece's own coordinates.
    fn vertices(&self, piece: usize) -> &[Point];
    /// Whether a segment may start at this corner.
    fn is_start(&self, piece: usize, vertex: usize) -> bool;
    /// Whether a segment reaching this corner is recorded.
    fn is_end(&self, piece: usize, vertex: usize) -> bool;
    /// The piece across `edge` (edge `j` joins vertices `j` and `j+1`), the
    /// matching edge there, and the map from its coordinates to `piece`'s.
    /// `None` when the edge does not continue.
    fn traverse(&self, piece: usize, edge: usize) -> Option<(usize, usize, Isometry)>;
}

/// A developed segment from a start corner to an end corner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hit {
    pub start_piece: usize,
    pub start_vertex: usize,
    pub end_piece: usize,
    pub end_vertex: usize,
    /// Start corner, in the start piece's coordinates.
    pub start: Point,
    /// Developed end point, same coordinates.
    pub end: Point,
    pub length_sq: Exact,
    /// `(piece, edge)` crossed, in order.
    pub crossings: Vec<(usize, usize)>,
    /// Placement of the final piece.
    pub placement: Isometry,
}

impl Hit {
    pub fn vector(&self) -> Vector {
        &self.end - &self.start
    }
}

#[derive(Clone, Debug)]
pub struct WalkResult {
    pub hits: Vec<Hit>,
    pub partial: bool,
    pub nodes: u64,
}

#[derive(Clone, Debug)]
pub struct WalkOptions {
    pub node_budget: u64,
}

impl Default for WalkOptions {
    fn default() -> Self {
        WalkOptions { node_budget: 2_000_000 }
    }
}

/// Counterclockwise order of directions measured from `base`.
pub fn ccw_cmp(base: &Vector, a: &Vector, b: &Vector) -> Ordering {
    let half = |d: &Vector| {
        let c = base.cross(d).signum();
        if c > 0 || (c == 0 && base.dot(d).signum() > 0) {
            0
        } else {
            1
        }
    };
    let same_as_base = |d: &Vector| base.cross(d).is_zero() && base.dot(d).signum() > 0;
    match (same_as_base(a), same_as_base(b)) {
        (true, true) => return Ordering::Equal,
        (true, false) => return Ordering::Less,
        (false, true) => return Ordering::Greater,
        _ => {}
    }
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&a.cross(b).signum()))
}

/// Whether `d` lies strictly inside the counterclockwise cone `(lo, hi)`.
fn strictly_inside(lo: &Vector, hi: &Vector, d: &Vector) -> bool {
    let zero_lo = lo.cross(d).is_zero() && lo.dot(d).signum() > 0;
    !zero_lo && ccw_cmp(lo, d, hi) == Ordering::Less
}

/// A direction strictly between `a` and `b` (counterclockwise from `a`).
fn between(a: &Vector, b: &Vector) -> Vector {
    if a.cross(b).signum() > 0 {
        a + b
    } else {
        a.perp()
    }
}

/// Parameter `t` where `s + t·u` meets the line through `a`, `b`, and the
/// position `σ` along `a → b`; `None` when parallel.
fn ray_line(s: &Point, u: &Vector, a: &Point, b: &Point) -> Option<(Exact, Exact)> {
    let e = b - a;
    let den = u.cross(&e);
    if den.is_zero() {
        return None;
    }
    let inv = den.recip();
    let w = a - s;
    Some((&w.cross(&e) * &inv, &w.cross(u) * &inv))
}

/// Squared distance from `p` to the segment `[a, b]`.
fn dist_sq_to_segment(p: &Point, a: &Point, b: &Point) -> Exact {
    let e = b - a;
    let w = p - a;
    let t = w.dot(&e);
    if t.signum() <= 0 {
        return w.norm_sq();
    }
    let ee = e.norm_sq();
    if t >= ee {
        return (p - b).norm_sq();
    }
    let c = w.cross(&e);
    &(&c * &c) * &ee.recip()
}

struct Node {
    piece: usize,
    placement: Isometry,
    /// Entry edge of `piece`; `None` at the start corner.
    entry: Option<usize>,
    lo: Vector,
    hi: Vector,
    crossings: Vec<(usize, usize)>,
}

struct Walker<'a, N: Net> {
    net: &'a N,
    max_sq: Exact,
    budget: u64,
    nodes: &'a AtomicU64,
    exhausted: &'a AtomicBool,
}

impl<'a, N: Net> Walker<'a, N> {
    fn run(&self, start_piece: usize, start_vertex: usize, out: &mut Vec<Hit>) {
        let verts = self.net.vertices(start_piece);
        let n = verts.len();
        let s = verts[start_vertex].clone();
        let next = &verts[(start_vertex + 1) % n] - &s;
        let prev = &verts[(start_vertex + n - 1) % n] - &s;
        let mut stack = vec![Node {
            piece: start_piece,
            placement: Isometry::identity(),
            entry: None,
            lo: next,
            hi: prev,
            crossings: vec![],
        }];
        while let Some(node) = stack.pop() {
            if self.nodes.fetch_add(1, AtomicOrdering::Relaxed) >= self.budget {
                self.exhausted.store(true, AtomicOrdering::Relaxed);
                return;
            }
            self.expand(start_piece, start_vertex, &s, node, out, &mut stack);
        }
    }

    fn expand(
        &self,
        start_piece: usize,
        start_vertex: usize,
        s: &Point,
        node: Node,
        out: &mut Vec<Hit>,
        stack: &mut Vec<Node>,
    ) {
        let local = self.net.vertices(node.piece);
        let n = local.len();
        let dev: Vec<Point> = local.iter().map(|p| node.placement.apply(p)).collect();
        let entry_pts = node.entry.map(|e| (dev[e].clone(), dev[(e + 1) % n].clone()));
        // parameter along the ray where it crosses the entry window
        let t_win = |u: &Vector| -> Exact {
            match &entry_pts {
                None => Exact::zero(),
                Some((a, b)) => ray_line(s, u, a, b).map(|(t, _)| t).unwrap_or_else(Exact::zero),
            }
        };
        let beyond = |p: &Point| -> bool {
            match &entry_pts {
                None => p != s,
                Some((a, b)) => {
                    let side_s = (b - a).cross(&(s - a)).signum();
                    let side_p = (b - a).cross(&(p - a)).signum();
                    side_p != 0 && side_p != side_s
                }
            }
        };
        let is_entry_or_start = |v: usize| match node.entry {
            Some(e) => v == e || v == (e + 1) % n,
            None => v == start_vertex && node.piece == start_piece,
        };

        // critical vertices: strictly inside the cone and beyond the window
        let mut critical: Vec<(usize, Vector)> = (0..n)
            .filter(|&v| !is_entry_or_start(v))
            .filter_map(|v| {
                let d = &dev[v] - s;
                (beyond(&dev[v]) && strictly_inside(&node.lo, &node.hi, &d)).then_some((v, d))
            })
            .collect();
        critical.sort_by(|(_, a), (_, b)| {
            ccw_cmp(&node.lo, a, b).then_with(|| a.norm_sq().cmp(&b.norm_sq()))
        });

        // blocked: does an edge cross the open segment s → s + u before it ends
        let edge_blocks = |u: &Vector, t_min: &Exact, target: usize| -> bool {
            (0..n).any(|e| {
                if Some(e) == node.entry || e == target || (e + 1) % n == target {
                    return false;
                }
                match ray_line(s, u, &dev[e], &dev[(e + 1) % n]) {
                    Some((t, sigma)) => {
                        t > *t_min && t < Exact::one() && sigma.signum() >= 0 && sigma <= Exact::one()
                    }
                    None => false,
                }
            })
        };

        let mut i = 0;
        while i < critical.len() {
            // group vertices in the same direction; only the nearest may be seen
            let mut j = i + 1;
            while j < critical.len() && ccw_cmp(&node.lo, &critical[i].1, &critical[j].1) == Ordering::Equal {
                j += 1;
            }
            let (v, d) = &critical[i];
            let len_sq = d.norm_sq();
            if len_sq <= self.max_sq && self.net.is_end(node.piece, *v) {
                let tw = t_win(d);
                if !edge_blocks(d, &tw, *v) {
                    out.push(Hit {
                        start_piece,
                        start_vertex,
                        end_piece: node.piece,
                        end_vertex: *v,
                        start: s.clone(),
                        end: dev[*v].clone(),
                        length_sq: len_sq,
                        crossings: node.crossings.clone(),
                        placement: node.placement.clone(),
                    });
                }
            }
            i = j;
        }

        // sub-cones between consecutive critical directions
        let mut bounds: Vec<Vector> = vec![node.lo.clone()];
        for (k, (_, d)) in critical.iter().enumerate() {
            if k == 0 || ccw_cmp(&node.lo, &critical[k - 1].1, d) != Ordering::Equal {
                bounds.push(d.clone());
            }
        }
        bounds.push(node.hi.clone());
        for w in bounds.windows(2) {
            let (lo, hi) = (&w[0], &w[1]);
            let u = between(lo, hi);
            let tw = t_win(&u);
            let mut best: Option<(Exact, usize)> = None;
            for e in 0..n {
                if Some(e) == node.entry {
                    continue;
                }
                if let Some((t, sigma)) = ray_line(s, &u, &dev[e], &dev[(e + 1) % n]) {
                    if t > tw && sigma.signum() > 0 && sigma < Exact::one() && best.as_ref().is_none_or(|(bt, _)| t < *bt) {
                        best = Some((t, e));
                    }
                }
            }
            let Some((_, exit)) = best else { continue };
            let (a, b) = (&dev[exit], &dev[(exit + 1) % n]);
            // clip the exit edge to the sub-cone
            let p_lo = ray_line(s, lo, a, b).map(|(t, _)| s + &lo.scale(&t));
            let p_hi = ray_line(s, hi, a, b).map(|(t, _)| s + &hi.scale(&t));
            let (Some(p_lo), Some(p_hi)) = (p_lo, p_hi) else { continue };
            if dist_sq_to_segment(s, &p_lo, &p_hi) > self.max_sq {
                continue;
            }
            let Some((next_piece, next_edge, iso)) = self.net.traverse(node.piece, exit) else { continue };
            let mut crossings = node.crossings.clone();
            crossings.push((node.piece, exit));
            stack.push(Node {
                piece: next_piece,
                placement: node.placement.compose(&iso),
                entry: Some(next_edge),
                lo: lo.clone(),
                hi: hi.clone(),
                crossings,
            });
        }
    }
}

/// Every developed segment of squared length ≤ `max_len_sq` between
/// corners, from every start corner, in a deterministic order.
pub fn walk<N: Net>(net: &N, max_len_sq: &Exact, opts: &WalkOptions) -> WalkResult {
    let starts: Vec<(usize, usize)> = (0..net.piece_count())
        .flat_map(|p| (0..net.vertices(p).len()).map(move |v| (p, v)))
        .filter(|&(p, v)| net.is_start(p, v))
        .collect();
    let nodes = AtomicU64::new(0);
    let exhausted = AtomicBool::new(false);
    if max_len_sq.signum() <= 0 {
        return WalkResult { hits: vec![], partial: false, nodes: 0 };
    }
    let walker = Walker { net, max_sq: max_len_sq.clone(), budget: opts.node_budget, nodes: &nodes, exhausted: &exhausted };
    let mut hits: Vec<Hit> = starts
        .par_iter()
        .map(|&(p, v)| {
            let mut out = vec![];
            walker.run(p, v, &mut out);
            out
        })
        .flatten()
        .collect();
    hits.sort_by(|a, b| {
        a.length_sq
            .cmp(&b.length_sq)
            .then_with(|| (a.start_piece, a.start_vertex).cmp(&(b.start_piece, b.start_vertex)))
            .then_with(|| a.crossings.cmp(&b.crossings))
            .then_with(|| (a.end_piece, a.end_vertex).cmp(&(b.end_piece, b.end_vertex)))
    });
    WalkResult { hits, partial: exhausted.load(AtomicOrdering::Relaxed), nodes: nodes.load(AtomicOrdering::Relaxed) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ccw_order() {
        let base = Point::int(1, 0);
        let dirs = [Point::int(1, 1), Point::int(0, 1), Point::int(-1, 0), Point::int(0, -1), Point::int(1, -1)];
        for w in dirs.windows(2) {
            assert_eq!(ccw_cmp(&base, &w[0], &w[1]), Ordering::Less);
        }
        assert_eq!(ccw_cmp(&base, &Point::int(2, 0), &Point::int(0, 1)), Ordering::Less);
        assert!(strictly_inside(&Point::int(1, 0), &Point::int(0, 1), &Point::int(3, 1)));
        assert!(!strictly_inside(&Point::int(1, 0), &Point::int(0, 1), &Point::int(1, 0)));
        assert!(strictly_inside(&Point::int(1, 0), &Point::int(0, -1), &Point::int(-1, 0)));
    }

    #[test]
    fn segment_distance() {
        let d = dist_sq_to_segment(&Point::int(0, 0), &Point::int(1, -1), &Point::int(1, 1));
        assert_eq!(d, Exact::one());
        let d = dist_sq_to_segment(&Point::int(0, 0), &Point::int(1, 1), &Point::int(1, 2));
        assert_eq!(d, Exact::int(2));
    }
}
