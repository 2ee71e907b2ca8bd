use serde::Serialize;

use crate::corridor::{walk, Net, WalkOptions};
use crate::error::{Error, Result};
use crate::geometry::{Isometry, Point, Vector};
use crate::numerics::Exact;

use super::model::{EdgeLink, Node, StableSurface};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Parallelism {
    AllParallel,
    Witness { i: usize, j: usize },
}

/// Whether all residues are real multiples of one another.
pub fn residue_parallelism(residues: &[Vector]) -> Result<Parallelism> {
    if residues.is_empty() {
        return Err(Error::NoPolarNodes);
    }
    if residues.iter().any(Point::is_zero) {
        return Err(Error::InvalidStableSurface("zero residue".into()));
    }
    for j in 1..residues.len() {
        if residues[0].cross(&residues[j]).signum() != 0 {
            return Ok(Parallelism::Witness { i: 0, j });
        }
    }
    Ok(Parallelism::AllParallel)
}

/// One half-infinite cylinder of the decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CylinderInfo {
    pub cylinder: usize,
    pub node: usize,
    /// Circumference vector; equals the residue up to sign.
    pub circumference: Vector,
    pub circumference_squared: Exact,
    /// Exact length when it lies in the coordinate field.
    pub length: Option<Exact>,
}

/// Cylinders sharing a direction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CylinderFamily {
    /// Representative direction with positive y, or along the positive x-axis.
    pub direction: Vector,
    /// Angle of `direction` in units of π, in [0, 1).
    pub angle_over_pi: f64,
    pub cylinders: Vec<CylinderInfo>,
}

/// The part of the surface outside the cylinders.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Complement {
    pub pieces: usize,
    pub area: Exact,
    pub is_empty: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CylinderDecomposition {
    pub families: Vec<CylinderFamily>,
    pub complement: Complement,
}

fn canonical_direction(v: &Vector) -> Vector {
    if v.y.signum() < 0 || (v.y.is_zero() && v.x.signum() < 0) {
        -v.clone()
    } else {
        v.clone()
    }
}

pub fn cylinder_decomposition(surface: &StableSurface) -> Result<CylinderDecomposition> {
    if surface.polar_nodes() == 0 {
        return Err(Error::NoPolarNodes);
    }
    let mut families: Vec<CylinderFamily> = vec![];
    for (ni, node) in surface.nodes.iter().enumerate() {
        let Node::Polar { cylinders: (a, b) } = node else { continue };
        for c in [*a, *b] {
            let circ = surface.circumference(c);
            let sq = circ.norm_sq();
            let info = CylinderInfo {
                cylinder: c,
                node: ni,
                length: sq.sqrt(),
                circumference_squared: sq,
                circumference: circ.clone(),
            };
            match families.iter_mut().find(|f| f.direction.cross(&circ).signum() == 0) {
                Some(f) => f.cylinders.push(info),
                None => {
                    let direction = canonical_direction(&circ);
                    let [x, y] = direction.to_f64();
                    let angle_over_pi = y.atan2(x) / std::f64::consts::PI;
                    families.push(CylinderFamily { direction, angle_over_pi, cylinders: vec![info] });
                }
            }
        }
    }
    families.sort_by(|a, b| a.angle_over_pi.total_cmp(&b.angle_over_pi));
    let area = &surface.core_area2() * &Exact::frac(1, 2);
    Ok(CylinderDecomposition {
        families,
        complement: Complement { pieces: surface.pieces.len(), is_empty: surface.pieces.is_empty(), area },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum VeechClassification {
    /// Two polar nodes with non-parallel residues.
    Finite { nodes: (usize, usize), residues: (Vector, Vector) },
    /// A saddle connection whose holonomy is not parallel to the residues.
    DiscreteInN { holonomy: Vector, residue: Vector },
    /// Every cylinder boundary is parallel to the residues and the
    /// complement is empty; saddle connections checked up to length²
    /// `bound_squared`.
    EqualsN { bound_squared: Exact, residue: Vector },
}

impl VeechClassification {
    pub fn name(&self) -> &'static str {
        match self {
            VeechClassification::Finite { .. } => "Finite",
            VeechClassification::DiscreteInN { .. } => "DiscreteInN",
            VeechClassification::EqualsN { .. } => "EqualsN",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ClassifyOptions {
    /// Length bound for the saddle-connection census; defaults to twice the
    /// largest of the residue lengths and core piece diameters.
    pub max_length: Option<Exact>,
    pub walk: WalkOptions,
}

struct CoreNet<'a> {
    surface: &'a StableSurface,
}

impl Net for CoreNet<'_> {
    fn piece_count(&self) -> usize {
        self.surface.pieces.len()
    }

    fn vertices(&self, piece: usize) -> &[Point] {
        &self.surface.pieces[piece].vertices
    }

    fn is_start(&self, piece: usize, vertex: usize) -> bool {
        let r = super::model::PointRef::Corner { piece, vertex };
        self.surface.points[self.surface.point_class(&r)].is_singular()
    }

    fn is_end(&self, piece: usize, vertex: usize) -> bool {
        self.is_start(piece, vertex)
    }

    fn traverse(&self, piece: usize, edge: usize) -> Option<(usize, usize, Isometry)> {
        match self.surface.pieces[piece].edges[edge] {
            EdgeLink::Glued { piece: q, edge: f } => {
                let here = &self.surface.pieces[piece].vertices[edge];
                let there = &self.surface.pieces[q].vertices;
                Some((q, f, Isometry::translation(here - &there[(f + 1) % there.len()])))
            }
            EdgeLink::Segment { .. } => None,
        }
    }
}

fn default_bound_sq(surface: &StableSurface) -> Exact {
    let mut m = Exact::zero();
    for (_, r) in surface.residues() {
        m = m.max(r.norm_sq());
    }
    for p in &surface.pieces {
        for a in &p.vertices {
            for b in &p.vertices {
                m = m.max((a - b).norm_sq());
            }
        }
    }
    &m * &Exact::int(4)
}

pub fn classify_veech_group(surface: &StableSurface) -> Result<VeechClassification> {
    classify_veech_group_with(surface, &ClassifyOptions::default())
}

pub fn classify_veech_group_with(surface: &StableSurface, opts: &ClassifyOptions) -> Result<VeechClassification> {
    if !surface.irreducible {
        return Err(Error::NotIrreducible("the normalization is disconnected".into()));
    }
    let residues = surface.residues();
    let vectors: Vec<Vector> = residues.iter().map(|(_, r)| r.clone()).collect();
    if let Parallelism::Witness { i, j } = residue_parallelism(&vectors)? {
        return Ok(VeechClassification::Finite {
            nodes: (residues[i].0, residues[j].0),
            residues: (vectors[i].clone(), vectors[j].clone()),
        });
    }
    let r0 = canonical_direction(&vectors[0]);
    let bound_sq = match &opts.max_length {
        Some(l) if l.signum() > 0 => l.square(),
        Some(_) => return Err(Error::InvalidStableSurface("census bound must be positive".into())),
        None => default_bound_sq(surface),
    };
    // boundary segments lie on cylinder boundaries, parallel to the residues
    let result = walk(&CoreNet { surface }, &bound_sq, &opts.walk);
    let mut off: Vec<Vector> = result.hits.iter().map(|h| h.vector()).filter(|v| v.cross(&r0).signum() != 0).collect();
    off.sort_by(|a, b| a.norm_sq().cmp(&b.norm_sq()).then_with(|| a.x.cmp(&b.x)).then_with(|| a.y.cmp(&b.y)));
    if let Some(h) = off.into_iter().next() {
        return Ok(VeechClassification::DiscreteInN { holonomy: h, residue: r0 });
    }
    if surface.pieces.is_empty() {
        return Ok(VeechClassification::EqualsN { bound_squared: bound_sq, residue: r0 });
    }
    Err(Error::Inconclusive(format!(
        "no transverse saddle connection up to length² {bound_sq}{}, but the complement of the cylinders is not empty",
        if result.partial { " (census partial)" } else { "" }
    )))
}
