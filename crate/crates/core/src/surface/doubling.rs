use serde::Serialize;

use crate::geometry::Isometry;
use crate::numerics::{rotation_matrix, AngleValue, Mat2};
use crate::polygon::Polygon;

/// The flat sphere made of two copies of the polygon glued along
/// corresponding edges.
#[derive(Clone, Debug, Serialize)]
pub struct DoubledPolygon {
    /// Placement of each copy; copy 1 is the mirror image across edge 0.
    pub copies: [Isometry; 2],
    /// Edge `j` of copy 0 is glued to edge `j` of copy 1.
    pub glued_edges: Vec<usize>,
    /// One puncture above each vertex, with cone angle `2λ_jπ` given as
    /// `λ_j` (multiple of 2π).
    pub punctures: Vec<AngleValue>,
    pub euler_characteristic: i64,
    /// Per copy, the map back onto the polygon (the folding map).
    pub folding: [Isometry; 2],
}

pub fn double_polygon(polygon: &Polygon) -> DoubledPolygon {
    let (a, b) = polygon.edge(0);
    let mirror = Isometry::reflection(a, b);
    let n = polygon.n();
    let (v, e, f) = (n as i64, n as i64, 2);
    DoubledPolygon {
        copies: [Isometry::identity(), mirror.clone()],
        glued_edges: (0..n).collect(),
        punctures: polygon.angles().to_vec(),
        euler_characteristic: v - e + f,
        folding: [Isometry::identity(), mirror.inverse()],
    }
}

/// Angles `φ_e` (units of π) of the edge lines in the frame where edge 0
/// is horizontal: `φ_e = Σ_{1≤i≤e} (1 − λ_i)`.
pub fn edge_line_angles(polygon: &Polygon) -> Vec<AngleValue> {
    let mut out = vec![AngleValue::rational(0, 1)];
    for i in 1..polygon.n() {
        let turn = AngleValue::rational(1, 1).sub(polygon.angle(i));
        out.push(out[i - 1].add(&turn));
    }
    out
}

/// Linear reflection across the line at angle `φπ`.
fn reflection_matrix(phi: &AngleValue, prec: u32) -> Mat2 {
    let r = rotation_matrix(phi, prec);
    Mat2::new(r.a.clone(), r.c.clone(), r.c.clone(), -r.a)
}

/// `M_j`, the derivative of the holonomy of a loop around vertex `j`: the
/// product of the reflections in the two edges at `j`.
pub fn holonomy_around_vertex(polygon: &Polygon, j: usize) -> Mat2 {
    let n = polygon.n();
    let phi = edge_line_angles(polygon);
    let prec = polygon.precision_bits();
    let r_in = reflection_matrix(&phi[(j + n - 1) % n], prec);
    let r_out = reflection_matrix(&phi[j % n], prec);
    r_in.mul(&r_out)
}

#[derive(Clone, Debug)]
pub struct HolonomyRep {
    /// Vertex index encircled by each generator loop `B_j`.
    pub generators: Vec<usize>,
    /// Affine holonomy of each loop: rotation about the vertex, from exact
    /// coordinates.
    pub images: Vec<Isometry>,
    pub derivative_images: Vec<Mat2>,
}

pub fn holonomy_representation(polygon: &Polygon) -> HolonomyRep {
    let n = polygon.n();
    let images = (0..n)
        .map(|j| {
            let (p, v, q) = (polygon.vertex(j + n - 1), polygon.vertex(j), polygon.vertex(j + 1));
            Isometry::reflection(p, v).compose(&Isometry::reflection(v, q))
        })
        .collect();
    HolonomyRep {
        generators: (0..n).collect(),
        images,
        derivative_images: (0..n).map(|j| holonomy_around_vertex(polygon, j)).collect(),
    }
}

/// Product `M_0 M_1 ⋯ M_{N−1}`.
pub fn holonomy_product(polygon: &Polygon) -> Mat2 {
    (0..polygon.n()).fold(Mat2::identity(), |acc, j| acc.mul(&holonomy_around_vertex(polygon, j)))
}

impl HolonomyRep {
    pub fn product(&self) -> Mat2 {
        self.derivative_images.iter().fold(Mat2::identity(), |acc, m| acc.mul(m))
    }
}

pub(crate) fn is_identity_within(m: &Mat2, tol_log2: i32) -> bool {
    let id = Mat2::identity();
    match m.exact_eq(&id) {
        Some(eq) => eq,
        None => {
            let dev = m.max_deviation(&id);
            dev <= crate::numerics::Rational::new(1.into(), num_bigint::BigInt::from(1) << (-tol_log2) as usize)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::numerics::Exact;

    fn fixed(p: &Point, iso: &Isometry) -> bool {
        iso.apply(p) == *p
    }

    #[test]
    fn square_vertex_is_minus_identity() {
        let sq = Polygon::new(vec![Point::int(0, 0), Point::int(1, 0), Point::int(1, 1), Point::int(0, 1)]).unwrap();
        let m = holonomy_around_vertex(&sq, 2);
        let minus = Mat2::from_exact([[Exact::int(-1), Exact::int(0)], [Exact::int(0), Exact::int(-1)]]);
        assert_eq!(m.exact_eq(&minus), Some(true));
        assert!(is_identity_within(&holonomy_product(&sq), -200));
        let d = double_polygon(&sq);
        assert_eq!(d.euler_characteristic, 2);
        assert_eq!(d.punctures.len(), 4);
    }

    #[test]
    fn affine_holonomy_fixes_its_vertex() {
        let t = Polygon::new(vec![Point::int(0, 0), Point::int(1, 0), Point::int(0, 1)]).unwrap();
        let h = holonomy_representation(&t);
        for j in 0..3 {
            assert!(fixed(t.vertex(j), &h.images[j]));
            assert!(h.images[j].is_orientation_preserving());
        }
        let quarter = rotation_matrix(&AngleValue::rational(1, 4), 256);
        assert_eq!(h.derivative_images[1].exact_eq(&quarter), Some(true));
    }
}
