use std::path::Path;

use serde::Deserialize;

use flatveech::geometry::Point;
use flatveech::numerics::syntax::parse_exact;
use flatveech::numerics::{AngleValue, Exact};
use flatveech::polygon::{unbounded_polygon_with_precision, Polygon, UnboundedPolygon, UnboundedPolygonSpec};
use flatveech::stable::{StableSurface, StableSurfaceSpec};
use flatveech::{Error, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct UnboundedInput {
    n: u32,
    xs: Vec<String>,
    truncation_depth: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolygonInput {
    #[serde(default)]
    vertices: Option<Vec<[String; 2]>>,
    #[serde(default)]
    angles: Option<Vec<String>>,
    #[serde(default)]
    unbounded: Option<UnboundedInput>,
}

/// A table read from disk: a bounded polygon or a truncated unbounded one.
pub enum Table {
    Bounded(Polygon),
    Unbounded(Box<UnboundedPolygon>),
}

impl Table {
    pub fn polygon(&self) -> &Polygon {
        match self {
            Table::Bounded(p) => p,
            Table::Unbounded(u) => &u.polygon,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn parse_scalars(xs: &[String]) -> Result<Vec<Exact>> {
    xs.iter().map(|s| parse_exact(s)).collect()
}

pub fn read_table(path: &Path, precision_bits: u32) -> Result<Table> {
    let input: PolygonInput = json(path)?;
    match (input.vertices, input.unbounded) {
        (Some(vs), None) => {
            let vertices = vs
                .iter()
                .map(|[x, y]| Ok(Point::new(parse_exact(x)?, parse_exact(y)?)))
                .collect::<Result<Vec<_>>>()?;
            let angles = match input.angles {
                Some(a) => Some(parse_scalars(&a)?.into_iter().map(AngleValue::from_exact).collect()),
                None => None,
            };
            Ok(Table::Bounded(Polygon::with_angles(vertices, angles, precision_bits)?))
        }
        (None, Some(u)) => {
            if input.angles.is_some() {
                return Err(Error::Parse("angles are derived for unbounded tables".into()));
            }
            let spec = UnboundedPolygonSpec { n: u.n, xs: parse_scalars(&u.xs)?, truncation_depth: u.truncation_depth };
            Ok(Table::Unbounded(Box::new(unbounded_polygon_with_precision(&spec, precision_bits)?)))
        }
        _ => Err(Error::Parse("expected exactly one of \"vertices\" and \"unbounded\"".into())),
    }
}

pub fn read_stable(path: &Path) -> Result<StableSurface> {
    json::<StableSurfaceSpec>(path)?.build()
}
