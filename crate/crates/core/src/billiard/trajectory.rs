use serde::Serialize;

use crate::error::{Error, Result};
use crate::polygon::{EdgeKind, Polygon};

const VERTEX_TOLERANCE: f64 = 1e-9;
const MAX_BOUNCES: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Termination {
    MaxFlight,
    VertexHit { vertex: usize },
    Escaped { edge: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub points: Vec<[f64; 2]>,
    pub reflections: usize,
    pub flight: f64,
    pub termination: Termination,
}

fn inside(poly: &[[f64; 2]], p: [f64; 2]) -> bool {
    let mut wn = false;
    let n = poly.len();
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if p[0] < x {
                wn = !wn;
            }
        }
    }
    wn
}

/// Straight flight with specular reflection, in floating point.
pub fn billiard_trajectory(polygon: &Polygon, start: [f64; 2], direction: [f64; 2], max_flight: f64) -> Result<Trajectory> {
    let verts: Vec<[f64; 2]> = polygon.vertices().iter().map(|p| p.to_f64()).collect();
    let n = verts.len();
    if !inside(&verts, start) {
        return Err(Error::InvalidPolygon("trajectory start is not inside the polygon".into()));
    }
    let norm = direction[0].hypot(direction[1]);
    if norm == 0.0 || max_flight <= 0.0 {
        return Err(Error::InvalidPolygon("direction must be nonzero and flight positive".into()));
    }
    let mut u = [direction[0] / norm, direction[1] / norm];
    let mut p = start;
    let mut points = vec![p];
    let mut flight = 0.0;
    let mut reflections = 0;
    let mut last_edge: Option<usize> = None;
    for _ in 0..MAX_BOUNCES {
        let mut best: Option<(f64, usize)> = None;
        for e in 0..n {
            if Some(e) == last_edge {
                continue;
            }
            let (a, b) = (verts[e], verts[(e + 1) % n]);
            let ed = [b[0] - a[0], b[1] - a[1]];
            let den = u[0] * ed[1] - u[1] * ed[0];
            if den.abs() < 1e-300 {
                continue;
            }
            let w = [a[0] - p[0], a[1] - p[1]];
            let t = (w[0] * ed[1] - w[1] * ed[0]) / den;
            let s = (w[0] * u[1] - w[1] * u[0]) / den;
            if t > 1e-12 && (-1e-12..=1.0 + 1e-12).contains(&s) && best.is_none_or(|(bt, _)| t < bt) {
                best = Some((t, e));
            }
        }
        let Some((t, e)) = best else {
            return Err(Error::PrecisionInsufficient("trajectory lost the boundary".into()));
        };
        let remaining = max_flight - flight;
        if t >= remaining {
            points.push([p[0] + remaining * u[0], p[1] + remaining * u[1]]);
            return Ok(Trajectory { points, reflections, flight: max_flight, termination: Termination::MaxFlight });
        }
        let q = [p[0] + t * u[0], p[1] + t * u[1]];
        flight += t;
        if let Some(v) = (0..n).find(|&v| (verts[v][0] - q[0]).hypot(verts[v][1] - q[1]) < VERTEX_TOLERANCE) {
            points.push(verts[v]);
            return Ok(Trajectory { points, reflections, flight, termination: Termination::VertexHit { vertex: v } });
        }
        points.push(q);
        if polygon.edge_kind(e) == EdgeKind::Open {
            return Ok(Trajectory { points, reflections, flight, termination: Termination::Escaped { edge: e } });
        }
        let (a, b) = (verts[e], verts[(e + 1) % n]);
        let len = (b[0] - a[0]).hypot(b[1] - a[1]);
        let nrm = [-(b[1] - a[1]) / len, (b[0] - a[0]) / len];
        let dot = u[0] * nrm[0] + u[1] * nrm[1];
        u = [u[0] - 2.0 * dot * nrm[0], u[1] - 2.0 * dot * nrm[1]];
        p = q;
        reflections += 1;
        last_edge = Some(e);
    }
    Ok(Trajectory { points, reflections, flight, termination: Termination::MaxFlight })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn square() -> Polygon {
        Polygon::new(vec![Point::int(0, 0), Point::int(1, 0), Point::int(1, 1), Point::int(0, 1)]).unwrap()
    }

    #[test]
    fn back_and_forth() {
        let t = billiard_trajectory(&square(), [0.5, 0.5], [1.0, 0.0], 4.0).unwrap();
        assert_eq!(t.termination, Termination::MaxFlight);
        assert_eq!(t.reflections, 4);
        let end = t.points.last().unwrap();
        assert!((end[0] - 0.5).abs() < 1e-12 && (end[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn corner_hit() {
        let s = 0.5f64.sqrt();
        let t = billiard_trajectory(&square(), [0.5, 0.5], [s, s], 4.0).unwrap();
        assert_eq!(t.termination, Termination::VertexHit { vertex: 2 });
        assert!((t.flight - s).abs() < 1e-12);
    }
}
