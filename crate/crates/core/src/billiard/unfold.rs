use serde::Serialize;

use crate::geometry::{Isometry, Point};
use crate::polygon::Polygon;

/// A developed copy of the polygon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnfoldingNode {
    pub isometry: Isometry,
    pub parent_edge: Option<usize>,
    pub depth: usize,
}

impl UnfoldingNode {
    pub fn root() -> UnfoldingNode {
        UnfoldingNode { isometry: Isometry::identity(), parent_edge: None, depth: 0 }
    }

    pub fn developed_vertices(&self, polygon: &Polygon) -> Vec<Point> {
        polygon.vertices().iter().map(|p| self.isometry.apply(p)).collect()
    }
}

/// The copy obtained by reflecting `node` across its developed edge `edge`.
pub fn reflect_across_edge(node: &UnfoldingNode, polygon: &Polygon, edge: usize) -> UnfoldingNode {
    let (a, b) = polygon.edge(edge);
    UnfoldingNode {
        isometry: node.isometry.compose(&Isometry::reflection(a, b)),
        parent_edge: Some(edge % polygon.n()),
        depth: node.depth + 1,
    }
}
