//! JSON files for polygons, structures and classifications, plus the fixed-width class table.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::{GoodStructure, Host, Provenance, TGoodReport};
use crate::field::{Fe, FieldSpec};
use crate::geometry::ProjectiveSubspace;
use crate::permgroup::{PermGroup, Permutation};
use crate::polygon::{Family, IncidencePolygon};
use crate::search::{SearchStats, SolutionClass};

pub const POLYGON_FORMAT: &str = "polyforge-polygon/1";
pub const STRUCTURE_FORMAT: &str = "polyforge-structure/1";
pub const CLASSIFICATION_FORMAT: &str = "polyforge-classification/1";
pub const GROUP_FORMAT: &str = "polyforge-group/1";
pub const SOLUTIONS_FORMAT: &str = "polyforge-solutions/1";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: line {line}, column {column}: {msg}")]
    Json { path: String, line: usize, column: usize, msg: String },
    #[error("{path}: field `{field}`: {msg}")]
    Field { path: String, field: String, msg: String },
}

fn field_err(path: &str, field: impl Into<String>, msg: impl Into<String>) -> IoError {
    IoError::Field { path: path.to_string(), field: field.into(), msg: msg.into() }
}

/// Reads and parses a JSON file, reporting parse errors with line and column.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    let p = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| IoError::Io { path: p.clone(), source })?;
    serde_json::from_str(&text).map_err(|e| {
        let msg = e.to_string();
        let msg = msg.rsplit_once(" at line ").map_or(msg.as_str(), |(m, _)| m).to_string();
        IoError::Json { path: p, line: e.line(), column: e.column(), msg }
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    fs::write(path, to_json_string(value)).map_err(|source| IoError::Io { path: path.display().to_string(), source })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub p: u32,
    pub e: u32,
    /// monic modulus, constant term first
    pub modulus: Vec<u16>,
}

/// A polygon as coordinates: points are vectors of field element indices, lines list the indices
/// of their points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonFile {
    pub format: String,
    pub family: Family,
    pub q: u32,
    pub gon: u32,
    pub field: FieldInfo,
    pub points: Vec<Vec<u16>>,
    pub lines: Vec<Vec<u32>>,
}

impl PolygonFile {
    pub fn from_polygon(polygon: &IncidencePolygon) -> Self {
        let f = polygon.field();
        PolygonFile {
            format: POLYGON_FORMAT.to_string(),
            family: polygon.family(),
            q: polygon.q(),
            gon: polygon.gon(),
            field: FieldInfo { p: f.p(), e: f.e(), modulus: f.modulus().to_vec() },
            points: polygon.points().iter().map(|v| v.iter().map(|c| c.0).collect()).collect(),
            lines: (0..polygon.num_lines()).map(|l| polygon.points_on(l).to_vec()).collect(),
        }
    }

    /// Rebuilds the polygon, checking every field; `path` only labels errors.
    pub fn into_polygon(self, path: &str) -> Result<IncidencePolygon, IoError> {
        if self.format != POLYGON_FORMAT {
            return Err(field_err(path, "format", format!("expected {POLYGON_FORMAT}, got {}", self.format)));
        }
        if self.gon != self.family.gon() {
            return Err(field_err(path, "gon", format!("{} is a {}-gon family", self.family, self.family.gon())));
        }
        let field = FieldSpec::of_order(self.q).map_err(|e| field_err(path, "q", e.to_string()))?;
        if field.p() != self.field.p || field.e() != self.field.e || field.modulus() != self.field.modulus.as_slice() {
            return Err(field_err(path, "field", "does not match the field of this order"));
        }
        let field = Arc::new(field);
        let dim = self.family.ambient() + 1;
        let mut points = Vec::with_capacity(self.points.len());
        for (i, v) in self.points.iter().enumerate() {
            if v.len() != dim {
                return Err(field_err(path, format!("points[{i}]"), format!("expected {dim} coordinates")));
            }
            if let Some(j) = v.iter().position(|&c| c as u32 >= self.q) {
                return Err(field_err(path, format!("points[{i}][{j}]"), "not a field element"));
            }
            points.push(v.iter().map(|&c| Fe(c)).collect::<Vec<Fe>>());
        }
        let mut lines = Vec::with_capacity(self.lines.len());
        for (i, l) in self.lines.iter().enumerate() {
            let name = format!("lines[{i}]");
            if l.len() != self.q as usize + 1 {
                return Err(field_err(path, name, format!("expected {} points", self.q + 1)));
            }
            if let Some(&p) = l.iter().find(|&&p| p as usize >= points.len()) {
                return Err(field_err(path, name, format!("no point {p}")));
            }
            let span = vec![points[l[0] as usize].clone(), points[l[1] as usize].clone()];
            let sub = ProjectiveSubspace::from_vectors(&field, self.family.ambient(), span)
                .map_err(|e| field_err(path, name.clone(), e.to_string()))?;
            if sub.dim() != 1 || !l.iter().all(|&p| sub.contains_vector(&field, &points[p as usize])) {
                return Err(field_err(path, name, "points are not collinear"));
            }
            lines.push(sub);
        }
        let polygon = IncidencePolygon::from_parts(self.family, field, points, lines)
            .map_err(|e| field_err(path, "points", e.to_string()))?;
        for (i, l) in self.lines.iter().enumerate() {
            let mut want = l.clone();
            want.sort_unstable();
            if polygon.points_on(i) != want.as_slice() {
                return Err(field_err(path, format!("lines[{i}]"), "line holds points not listed"));
            }
        }
        Ok(polygon)
    }
}

pub fn read_polygon(path: &Path) -> Result<IncidencePolygon, IoError> {
    let file: PolygonFile = read_json(path)?;
    file.into_polygon(&path.display().to_string())
}

pub fn write_polygon(path: &Path, polygon: &IncidencePolygon) -> Result<(), IoError> {
    write_json(path, &PolygonFile::from_polygon(polygon))
}

/// A structure with where it came from and, optionally, its verification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureFile {
    pub format: String,
    pub host: Host,
    pub t: u32,
    pub points: Vec<usize>,
    pub lines: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<TGoodReport>,
}

impl StructureFile {
    pub fn new(g: &GoodStructure, provenance: Option<Provenance>, report: Option<TGoodReport>) -> Self {
        StructureFile {
            format: STRUCTURE_FORMAT.to_string(),
            host: g.host,
            t: g.t,
            points: g.points.clone(),
            lines: g.lines.clone(),
            provenance,
            report,
        }
    }

    /// The structure, checked against the polygon it claims to live in.
    pub fn structure(&self, polygon: &IncidencePolygon, path: &str) -> Result<GoodStructure, IoError> {
        if self.format != STRUCTURE_FORMAT {
            return Err(field_err(path, "format", format!("expected {STRUCTURE_FORMAT}, got {}", self.format)));
        }
        if self.host != Host::of(polygon) {
            return Err(field_err(path, "host", "does not match the polygon"));
        }
        if let Some(&p) = self.points.iter().find(|&&p| p >= polygon.num_points()) {
            return Err(field_err(path, "points", format!("no point {p}")));
        }
        if let Some(&l) = self.lines.iter().find(|&&l| l >= polygon.num_lines()) {
            return Err(field_err(path, "lines", format!("no line {l}")));
        }
        Ok(GoodStructure::new(self.host, self.t, self.points.clone(), self.lines.clone()))
    }
}

/// Group generators as image arrays over the combined point+line domain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    pub format: String,
    pub degree: usize,
    pub generators: Vec<Vec<u32>>,
}

impl GroupFile {
    pub fn from_group(g: &PermGroup) -> Self {
        GroupFile {
            format: GROUP_FORMAT.to_string(),
            degree: g.degree(),
            generators: g.generators().iter().map(|p| p.images().to_vec()).collect(),
        }
    }

    pub fn group(&self, path: &str) -> Result<PermGroup, IoError> {
        let mut gens = Vec::with_capacity(self.generators.len());
        for (i, g) in self.generators.iter().enumerate() {
            if g.len() != self.degree {
                return Err(field_err(path, format!("generators[{i}]"), format!("expected {} images", self.degree)));
            }
            gens.push(
                Permutation::from_images(g.clone())
                    .map_err(|e| field_err(path, format!("generators[{i}]"), e.to_string()))?,
            );
        }
        PermGroup::new(self.degree, gens).map_err(|e| field_err(path, "generators", e.to_string()))
    }
}

/// Every structure a search found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionsFile {
    pub format: String,
    pub host: Host,
    pub t: u32,
    pub complete: bool,
    pub symmetry_breaking: bool,
    pub stats: SearchStats,
    pub solutions: Vec<GoodStructure>,
}

impl SolutionsFile {
    pub fn check(&self, polygon: &IncidencePolygon, path: &str) -> Result<(), IoError> {
        if self.format != SOLUTIONS_FORMAT {
            return Err(field_err(path, "format", format!("expected {SOLUTIONS_FORMAT}, got {}", self.format)));
        }
        if self.host != Host::of(polygon) {
            return Err(field_err(path, "host", "does not match the polygon"));
        }
        for (i, s) in self.solutions.iter().enumerate() {
            let bad = s.host != self.host
                || s.points.iter().any(|&p| p >= polygon.num_points())
                || s.lines.iter().any(|&l| l >= polygon.num_lines());
            if bad {
                return Err(field_err(path, format!("solutions[{i}]"), "not a structure of this polygon"));
            }
        }
        Ok(())
    }
}

/// A classification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationFile {
    pub format: String,
    pub host: Host,
    pub t: u32,
    pub group_order: u128,
    /// whether every branch of the search finished
    pub complete: bool,
    pub solutions: usize,
    pub stats: SearchStats,
    pub classes: Vec<SolutionClass>,
    /// classes merged with their duals, when a duality exists
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes_up_to_duality: Option<Vec<SolutionClass>>,
}

/// Fixed-width table: size of the subgraph, stabiliser order, orbits on the subgraph and on the
/// structure, and a mark for classes containing a lift.
pub fn render_class_table(classes: &[SolutionClass]) -> String {
    let rows: Vec<[String; 5]> = classes
        .iter()
        .map(|c| {
            [
                c.subgraph_size.to_string(),
                c.stabilizer_order.to_string(),
                c.subgraph_orbits.to_string(),
                c.structure_orbits.to_string(),
                if c.from_lift { "yes".into() } else { String::new() },
            ]
        })
        .collect();
    let head = ["Size", "Stabiliser", "Orbits (subgraph)", "Orbits (structure)", "Lift"];
    let mut width = head.map(str::len);
    for r in &rows {
        for (w, cell) in width.iter_mut().zip(r) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, cells: [&str; 5]| {
        let _ = writeln!(
            out,
            "{:>w0$}  {:>w1$}  {:<w2$}  {:<w3$}  {}",
            cells[0],
            cells[1],
            cells[2],
            cells[3],
            cells[4],
            w0 = width[0],
            w1 = width[1],
            w2 = width[2],
            w3 = width[3]
        );
    };
    line(&mut out, head);
    for r in &rows {
        line(&mut out, [&r[0], &r[1], &r[2], &r[3], &r[4]]);
    }
    out.lines().map(str::trim_end).collect::<Vec<_>>().join("\n") + "\n"
}
