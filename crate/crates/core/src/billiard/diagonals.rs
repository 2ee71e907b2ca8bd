use serde::{Serialize, Serializer};

use crate::corridor::{walk, Net, WalkOptions};
use crate::error::{Error, Result};
use crate::geometry::{Isometry, Point};
use crate::numerics::{Ball, Exact};
use crate::polygon::{EdgeKind, Polygon, VertexKind};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ReflectionItinerary {
    pub start_vertex: usize,
    pub edge_indices: Vec<usize>,
    pub end_vertex: usize,
}

/// A billiard path from a vertex to a vertex, developed into a straight
/// segment. Length comparisons are exact on `length_sq`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedDiagonal {
    pub itinerary: ReflectionItinerary,
    pub start: Point,
    pub end: Point,
    pub length_sq: Exact,
}

impl GeneralizedDiagonal {
    pub fn length_ball(&self, prec: u32) -> Ball {
        Ball::from_exact(&self.length_sq, prec).sqrt()
    }

    pub fn length_f64(&self) -> f64 {
        self.length_sq.to_f64().sqrt()
    }

    /// The length as an exact value when it lies in the coordinate field.
    pub fn exact_length(&self) -> Option<Exact> {
        self.length_sq.sqrt()
    }
}

/// `(value, radius)` decimal strings for `√x`.
pub fn length_decimal(length_sq: &Exact, digits: u32) -> (String, String) {
    match length_sq.sqrt() {
        Some(e) if e.is_rational() => Ball::from_exact(&e, 256).to_decimal(digits),
        _ => Ball::from_exact(length_sq, 256).sqrt().to_decimal(digits),
    }
}

impl Serialize for GeneralizedDiagonal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let (value, radius) = length_decimal(&self.length_sq, 30);
        let mut st = s.serialize_struct("GeneralizedDiagonal", 6)?;
        st.serialize_field("itinerary", &self.itinerary)?;
        st.serialize_field("start", &self.start)?;
        st.serialize_field("end", &self.end)?;
        st.serialize_field("length_squared", &self.length_sq)?;
        st.serialize_field("length", &value)?;
        st.serialize_field("length_radius", &radius)?;
        st.end()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagonalCensus {
    pub max_length: Exact,
    pub diagonals: Vec<GeneralizedDiagonal>,
    pub partial: bool,
    pub nodes: u64,
}

/// The polygon as a single piece reflected across its walls.
pub struct BilliardNet<'a> {
    pub polygon: &'a Polygon,
}

impl Net for BilliardNet<'_> {
    fn piece_count(&self) -> usize {
        1
    }

    fn vertices(&self, _piece: usize) -> &[Point] {
        self.polygon.vertices()
    }

    fn is_start(&self, _piece: usize, v: usize) -> bool {
        self.polygon.vertex_kind(v) == VertexKind::Real
    }

    fn is_end(&self, _piece: usize, v: usize) -> bool {
        self.polygon.vertex_kind(v) == VertexKind::Real
    }

    fn traverse(&self, _piece: usize, edge: usize) -> Option<(usize, usize, Isometry)> {
        if self.polygon.edge_kind(edge) == EdgeKind::Open {
            return None;
        }
        let (a, b) = self.polygon.edge(edge);
        Some((0, edge, Isometry::reflection(a, b)))
    }
}

/// Working copy of the table: truncation caps are lifted out of reach of
/// every path of length ≤ `max_length`.
fn working_polygon(polygon: &Polygon, max_length: &Exact) -> Polygon {
    if polygon.is_bounded() {
        return polygon.clone();
    }
    let reach = max_length.to_f64().ceil().max(0.0) as i64 + 1;
    polygon.with_cap_height(&(&polygon.top_of_table() + &Exact::int(reach)))
}

fn check_field(polygon: &Polygon, max_len_sq: &Exact) -> Result<()> {
    let field = polygon.vertices().iter().map(Point::field).max().unwrap_or(1);
    if max_len_sq.is_rational() || max_len_sq.radicand() == field {
        Ok(())
    } else {
        Err(Error::InvalidPolygon("length bound lies outside the coordinate field".into()))
    }
}

/// Census of generalized diagonals of length ≤ `max_length`; partial
/// results are flagged rather than raised.
pub fn enumerate_with_options(polygon: &Polygon, max_length: &Exact, opts: &WalkOptions) -> Result<DiagonalCensus> {
    if max_length.signum() <= 0 {
        return Ok(DiagonalCensus { max_length: max_length.clone(), diagonals: vec![], partial: false, nodes: 0 });
    }
    let max_sq = max_length.square();
    check_field(polygon, &max_sq)?;
    let work = working_polygon(polygon, max_length);
    let result = walk(&BilliardNet { polygon: &work }, &max_sq, opts);
    let diagonals = result
        .hits
        .into_iter()
        .map(|h| GeneralizedDiagonal {
            itinerary: ReflectionItinerary {
                start_vertex: h.start_vertex,
                edge_indices: h.crossings.iter().map(|&(_, e)| e).collect(),
                end_vertex: h.end_vertex,
            },
            start: h.start,
            end: h.end,
            length_sq: h.length_sq,
        })
        .collect();
    Ok(DiagonalCensus { max_length: max_length.clone(), diagonals, partial: result.partial, nodes: result.nodes })
}

/// Every generalized diagonal of length ≤ `max_length`, counted once per
/// starting vertex (so each unoriented segment appears from both ends),
/// sorted by length then itinerary.
pub fn enumerate_generalized_diagonals(polygon: &Polygon, max_length: &Exact) -> Result<Vec<GeneralizedDiagonal>> {
    let opts = WalkOptions::default();
    let census = enumerate_with_options(polygon, max_length, &opts)?;
    if census.partial {
        return Err(Error::BudgetExceeded { budget: opts.node_budget });
    }
    Ok(census.diagonals)
}

/// Doublings of the search bound before giving up; tables with open ends
/// may have no generalized diagonal at all.
const MAX_DOUBLINGS: usize = 8;

/// A generalized diagonal of minimal length, by doubling the search bound
/// from the longest edge.
pub fn shortest_generalized_diagonal(polygon: &Polygon) -> Result<GeneralizedDiagonal> {
    let opts = WalkOptions::default();
    let longest_edge = (0..polygon.n()).map(|j| polygon.edge_vector(j).norm_sq().to_f64()).fold(0.0, f64::max);
    let mut bound = Exact::int(longest_edge.sqrt().ceil().max(1.0) as i64);
    for step in 0..=MAX_DOUBLINGS {
        let census = enumerate_with_options(polygon, &bound, &opts)?;
        if census.partial {
            return Err(Error::BudgetExceeded { budget: opts.node_budget });
        }
        if let Some(d) = census.diagonals.into_iter().next() {
            return Ok(d);
        }
        if step < MAX_DOUBLINGS {
            bound = &bound * &Exact::int(2);
        }
    }
    Err(Error::NoDiagonalFound { bound: bound.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect(a: i64, b: i64) -> Polygon {
        Polygon::new(vec![Point::int(0, 0), Point::int(a, 0), Point::int(a, b), Point::int(0, b)]).unwrap()
    }

    #[test]
    fn square_short_bounds() {
        let sq = rect(1, 1);
        assert!(enumerate_generalized_diagonals(&sq, &Exact::frac(9, 10)).unwrap().is_empty());
        assert!(enumerate_generalized_diagonals(&sq, &Exact::zero()).unwrap().is_empty());
        let d = enumerate_generalized_diagonals(&sq, &Exact::frac(3, 2)).unwrap();
        assert_eq!(d.len(), 4);
        assert!(d.iter().all(|g| g.length_sq == Exact::int(2) && g.itinerary.edge_indices.is_empty()));
        let from0: Vec<_> = d.iter().filter(|g| g.itinerary.start_vertex == 0).collect();
        assert_eq!(from0.len(), 1);
        assert_eq!(from0[0].itinerary.end_vertex, 2);
    }

    #[test]
    fn shortest_on_rectangle() {
        let d = shortest_generalized_diagonal(&rect(2, 1)).unwrap();
        assert_eq!(d.length_sq, Exact::int(5));
    }
}
