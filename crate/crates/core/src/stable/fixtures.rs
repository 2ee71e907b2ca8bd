//! Reference stable surfaces.

use super::model::{
    CylinderSpec, EdgeSpec, NodeSpec, OccurrenceSpec, PieceSpec, PointSpec, SegmentSpec, StableSurface,
    StableSurfaceSpec,
};

fn seg(label: &str, x: &str, y: &str) -> SegmentSpec {
    SegmentSpec { label: label.into(), vector: [x.into(), y.into()] }
}

fn occ(segment: &str, forward: bool) -> OccurrenceSpec {
    OccurrenceSpec { segment: segment.into(), forward }
}

fn cyl(name: &str, boundary: Vec<OccurrenceSpec>) -> CylinderSpec {
    CylinderSpec { name: name.into(), boundary }
}

fn polar(a: &str, b: &str) -> NodeSpec {
    NodeSpec::Polar { cylinders: [a.into(), b.into()], residue: None }
}

fn on(segment: &str, forward: bool) -> EdgeSpec {
    EdgeSpec::Segment { segment: segment.into(), forward }
}

fn pts(v: &[(i64, i64)]) -> Vec<[String; 2]> {
    v.iter().map(|(x, y)| [x.to_string(), y.to_string()]).collect()
}

/// Genus two, two polar nodes with residues ±1 and ±(1+i), two zeros of
/// angle 4π. The core is a hexagon with one pair of sides glued.
pub fn figure2_spec() -> StableSurfaceSpec {
    StableSurfaceSpec {
        segments: vec![seg("a", "1", "0"), seg("b", "1", "1"), seg("c", "-1", "0"), seg("d", "-1", "-1")],
        pieces: vec![PieceSpec {
            vertices: pts(&[(0, 0), (1, 0), (2, 1), (2, 2), (1, 2), (0, 1)]),
            edges: vec![
                on("a", true),
                on("b", true),
                EdgeSpec::Glued { piece: 0, edge: 5 },
                on("c", true),
                on("d", true),
                EdgeSpec::Glued { piece: 0, edge: 2 },
            ],
        }],
        cylinders: vec![
            cyl("A", vec![occ("a", false)]),
            cyl("B", vec![occ("b", false)]),
            cyl("C", vec![occ("c", false)]),
            cyl("D", vec![occ("d", false)]),
        ],
        nodes: vec![
            NodeSpec::Polar { cylinders: ["C".into(), "A".into()], residue: Some(["1".into(), "0".into()]) },
            NodeSpec::Polar { cylinders: ["D".into(), "B".into()], residue: Some(["1".into(), "1".into()]) },
        ],
    }
}

/// Genus two, four horizontal half-infinite cylinders of circumference 1
/// glued along four segments of length 1/2; the complement is empty.
pub fn equals_n_spec() -> StableSurfaceSpec {
    StableSurfaceSpec {
        segments: ["a", "b", "c", "d"].iter().map(|l| seg(l, "1/2", "0")).collect(),
        pieces: vec![],
        cylinders: vec![
            cyl("U1", vec![occ("a", true), occ("b", true)]),
            cyl("U2", vec![occ("c", true), occ("d", true)]),
            cyl("D1", vec![occ("a", false), occ("c", false)]),
            cyl("D2", vec![occ("b", false), occ("d", false)]),
        ],
        nodes: vec![polar("U1", "D1"), polar("U2", "D2")],
    }
}

/// Genus two: a unit square with its vertical sides glued, a horizontal
/// cylinder on each of its other sides joined at a polar node, and a
/// non-polar node joining the bottom and top corners.
pub fn discrete_in_n_spec() -> StableSurfaceSpec {
    StableSurfaceSpec {
        segments: vec![seg("s", "1", "0"), seg("t", "1", "0")],
        pieces: vec![PieceSpec {
            vertices: pts(&[(0, 0), (1, 0), (1, 1), (0, 1)]),
            edges: vec![
                on("s", true),
                EdgeSpec::Glued { piece: 0, edge: 3 },
                on("t", false),
                EdgeSpec::Glued { piece: 0, edge: 1 },
            ],
        }],
        cylinders: vec![cyl("U", vec![occ("t", true)]), cyl("D", vec![occ("s", false)])],
        nodes: vec![
            polar("U", "D"),
            NodeSpec::NonPolar {
                points: [PointSpec::Corner { piece: 0, vertex: 0 }, PointSpec::Corner { piece: 0, vertex: 3 }],
            },
        ],
    }
}

pub fn figure2() -> StableSurface {
    figure2_spec().build().expect("fixture is valid")
}

pub fn equals_n() -> StableSurface {
    equals_n_spec().build().expect("fixture is valid")
}

pub fn discrete_in_n() -> StableSurface {
    discrete_in_n_spec().build().expect("fixture is valid")
}
