use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{ExactMat, Vector};
use crate::numerics::{Exact, Rational};

use super::classify::{classify_veech_group, VeechClassification};
use super::model::{Node, Occurrence, PointRef, StableSurface};

/// An element of N, written `epsilon · (1, shear; 0, stretch)` with
/// `stretch > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NElement {
    pub epsilon: i32,
    pub shear: Exact,
    pub stretch: Exact,
}

impl NElement {
    pub fn from_matrix(g: &ExactMat) -> Result<NElement> {
        if !g.c.is_zero() {
            return Err(Error::NotInN("lower-left entry is not zero".into()));
        }
        let epsilon = g.a.signum();
        if g.a.abs() != Exact::one() {
            return Err(Error::NotInN("upper-left entry is not ±1".into()));
        }
        let e = Exact::int(epsilon as i64);
        let stretch = &g.d * &e;
        if stretch.signum() <= 0 {
            return Err(Error::NotInN("lower-right entry has the wrong sign".into()));
        }
        Ok(NElement { epsilon, shear: &g.b * &e, stretch })
    }

    pub fn matrix(&self) -> ExactMat {
        let e = Exact::int(self.epsilon as i64);
        ExactMat::new(e.clone(), &self.shear * &e, Exact::zero(), &self.stretch * &e)
    }
}

/// A cylinder-wise affine map with derivative in N. In the frame of a
/// cylinder (`u` along its boundary in reading order, `h` the distance
/// from it) the point `(u, h)` of cylinder `i` goes to
/// `(u + shear·h + offsets[i], stretch·h)` of cylinder `cylinder_map[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NWitness {
    pub element: NElement,
    pub cylinder_map: Vec<usize>,
    /// Offsets reduced modulo the circumference.
    pub offsets: Vec<Exact>,
    /// Image of each boundary segment.
    pub segment_map: Vec<usize>,
}

impl NWitness {
    pub fn derivative(&self) -> ExactMat {
        self.element.matrix()
    }

    /// The map `self ∘ other`.
    pub fn compose(&self, other: &NWitness, surface: &StableSurface) -> NWitness {
        let (g, h) = (&self.element, &other.element);
        let element = NElement {
            epsilon: g.epsilon * h.epsilon,
            shear: &h.shear + &(&g.shear * &h.stretch),
            stretch: &g.stretch * &h.stretch,
        };
        let cylinder_map = other.cylinder_map.iter().map(|&j| self.cylinder_map[j]).collect();
        let offsets = (0..other.offsets.len())
            .map(|i| {
                let c = length(surface, i);
                reduce(&(&other.offsets[i] + &self.offsets[other.cylinder_map[i]]), &c)
            })
            .collect();
        let segment_map = other.segment_map.iter().map(|&x| self.segment_map[x]).collect();
        NWitness { element, cylinder_map, offsets, segment_map }
    }

    /// Checks that the data defines an affine homeomorphism with derivative
    /// `self.derivative()`: boundaries match segment by segment, nodes go to
    /// nodes, and each cylinder's charts transform by the derivative.
    pub fn verify(&self, surface: &StableSurface) -> Result<()> {
        let n = surface.cylinders.len();
        let fail = |m: String| Err(Error::NotEqualsNSurface(m));
        if self.cylinder_map.len() != n || self.offsets.len() != n || self.segment_map.len() != surface.segments.len() {
            return fail("witness has the wrong size".into());
        }
        if !is_permutation(&self.cylinder_map) || !is_permutation(&self.segment_map) {
            return fail("cylinder or segment map is not a bijection".into());
        }
        let g = self.derivative();
        let mut image_occurrence: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        for i in 0..n {
            let j = self.cylinder_map[i];
            let (ci, cj) = (surface.circumference(i), surface.circumference(j));
            if g.apply(&ci) != cj {
                return fail(format!("derivative does not carry cylinder {i} onto cylinder {j}"));
            }
            let c = length(surface, i);
            let (oi, oj) = (offsets(surface, i), offsets(surface, j));
            for (k, occ) in surface.cylinders[i].boundary.iter().enumerate() {
                let u = reduce(&(&oi[k] + &self.offsets[i]), &c);
                let Some(m) = oj.iter().position(|x| *x == u) else {
                    return fail(format!("occurrence {k} of cylinder {i} lands inside a segment"));
                };
                let img = surface.cylinders[j].boundary[m];
                if self.segment_map[occ.segment] != img.segment {
                    return fail(format!("segment {} is not sent to its image", occ.segment));
                }
                if g.apply(&occ_vector(surface, occ)) != occ_vector(surface, &img) {
                    return fail(format!("segment {} changes length or direction", occ.segment));
                }
                image_occurrence.insert((i, k), (j, m));
            }
        }
        let mut seen: Vec<Vec<(usize, usize)>> = vec![vec![]; surface.segments.len()];
        for (&(i, k), &(j, m)) in &image_occurrence {
            let x = surface.cylinders[i].boundary[k].segment;
            seen[x].push((j, m));
        }
        if seen.iter().any(|v| v.len() == 2 && v[0] == v[1]) {
            return fail("both sides of a segment go to the same side".into());
        }
        // nodes
        let polar: Vec<(usize, usize)> = surface
            .nodes
            .iter()
            .filter_map(|nd| match nd {
                Node::Polar { cylinders } => Some(*cylinders),
                Node::NonPolar { .. } => None,
            })
            .collect();
        for &(a, b) in &polar {
            let (fa, fb) = (self.cylinder_map[a], self.cylinder_map[b]);
            if !polar.iter().any(|&(p, q)| (p, q) == (fa, fb) || (p, q) == (fb, fa)) {
                return fail(format!("polar node of cylinders {a} and {b} is not sent to a polar node"));
            }
        }
        let mut point_map: HashMap<usize, usize> = HashMap::new();
        for (&(i, k), &(j, m)) in &image_occurrence {
            let tail = |cyl: usize, idx: usize| {
                let o = surface.cylinders[cyl].boundary[idx];
                surface.point_class(&PointRef::SegmentEnd { segment: o.segment, end: !o.forward })
            };
            let (p, q) = (tail(i, k), tail(j, m));
            if *point_map.entry(p).or_insert(q) != q {
                return fail("map on points is not well defined".into());
            }
        }
        let nonpolar: Vec<(usize, usize)> = surface
            .nodes
            .iter()
            .filter_map(|nd| match nd {
                Node::NonPolar { points: (p, q) } => Some((surface.point_class(p), surface.point_class(q))),
                Node::Polar { .. } => None,
            })
            .collect();
        for &(p, q) in &nonpolar {
            let (Some(&fp), Some(&fq)) = (point_map.get(&p), point_map.get(&q)) else {
                return fail("non-polar node away from the cylinder boundaries".into());
            };
            if !nonpolar.iter().any(|&(a, b)| (a, b) == (fp, fq) || (a, b) == (fq, fp)) {
                return fail("non-polar node is not sent to a non-polar node".into());
            }
        }
        Ok(())
    }
}

fn is_permutation(v: &[usize]) -> bool {
    let mut s = v.to_vec();
    s.sort_unstable();
    s.iter().enumerate().all(|(i, &x)| i == x)
}

fn occ_vector(surface: &StableSurface, o: &Occurrence) -> Vector {
    let v = surface.segments[o.segment].vector.clone();
    if o.forward {
        v
    } else {
        -v
    }
}

fn length(surface: &StableSurface, c: usize) -> Exact {
    surface.circumference(c).x.abs()
}

fn reduce(x: &Exact, c: &Exact) -> Exact {
    let q = Exact::from_rational(Rational::from_integer((x / c).floor()));
    x - &(&q * c)
}

/// Positions of the occurrence starts along a horizontal cylinder boundary.
fn offsets(surface: &StableSurface, c: usize) -> Vec<Exact> {
    let mut u = Exact::zero();
    surface.cylinders[c]
        .boundary
        .iter()
        .map(|o| {
            let start = u.clone();
            u = &u + &surface.segments[o.segment].vector.x.abs();
            start
        })
        .collect()
}

fn is_up(surface: &StableSurface, c: usize) -> bool {
    surface.circumference(c).x.signum() > 0
}

/// An affine self-map of an EqualsN surface with derivative `g`.
pub fn n_witness(surface: &StableSurface, g: &ExactMat) -> Result<NWitness> {
    let element = NElement::from_matrix(g)?;
    match classify_veech_group(surface)? {
        VeechClassification::EqualsN { .. } => {}
        other => return Err(Error::NotEqualsNSurface(format!("verdict is {}", other.name()))),
    }
    if surface.residues().iter().any(|(_, r)| !r.y.is_zero()) {
        return Err(Error::NotEqualsNSurface("residues are not horizontal".into()));
    }
    let n = surface.cylinders.len();
    if element.epsilon > 0 {
        let w = NWitness {
            element,
            cylinder_map: (0..n).collect(),
            offsets: vec![Exact::zero(); n],
            segment_map: (0..surface.segments.len()).collect(),
        };
        w.verify(surface)?;
        return Ok(w);
    }
    let mut state = Search {
        surface,
        element,
        cylinder_map: vec![usize::MAX; n],
        offsets: vec![Exact::zero(); n],
        segment_map: vec![None; surface.segments.len()],
        used: vec![false; n],
    };
    state.run(0).ok_or_else(|| Error::NotEqualsNSurface("no cylinder matching realizes the flip".into()))
}

struct Search<'a> {
    surface: &'a StableSurface,
    element: NElement,
    cylinder_map: Vec<usize>,
    offsets: Vec<Exact>,
    segment_map: Vec<Option<usize>>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn run(&mut self, i: usize) -> Option<NWitness> {
        let s = self.surface;
        if i == s.cylinders.len() {
            let w = NWitness {
                element: self.element.clone(),
                cylinder_map: self.cylinder_map.clone(),
                offsets: self.offsets.clone(),
                segment_map: self.segment_map.iter().map(|x| x.unwrap_or(usize::MAX)).collect(),
            };
            return w.verify(s).is_ok().then_some(w);
        }
        let up = is_up(s, i) == (self.element.epsilon > 0);
        let c = length(s, i);
        let oi = offsets(s, i);
        let bi = &s.cylinders[i].boundary;
        for j in 0..s.cylinders.len() {
            if self.used[j] || is_up(s, j) != up || length(s, j) != c || s.cylinders[j].boundary.len() != bi.len() {
                continue;
            }
            let oj = offsets(s, j);
            let bj = &s.cylinders[j].boundary;
            let k = bi.len();
            for shift in 0..k {
                let tau = reduce(&(&oj[shift] - &oi[0]), &c);
                let saved = self.segment_map.clone();
                let mut ok = true;
                for (a, occ) in bi.iter().enumerate() {
                    let img = bj[(a + shift) % k];
                    let same_len = s.segments[occ.segment].vector.x.abs() == s.segments[img.segment].vector.x.abs();
                    let consistent = match self.segment_map[occ.segment] {
                        Some(y) => y == img.segment,
                        None => !self.segment_map.iter().any(|&y| y == Some(img.segment)),
                    };
                    if !same_len || !consistent {
                        ok = false;
                        break;
                    }
                    self.segment_map[occ.segment] = Some(img.segment);
                }
                if ok {
                    self.used[j] = true;
                    self.cylinder_map[i] = j;
                    self.offsets[i] = tau;
                    if let Some(w) = self.run(i + 1) {
                        return Some(w);
                    }
                    self.used[j] = false;
                }
                self.segment_map = saved;
            }
        }
        None
    }
}
