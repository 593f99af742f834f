//! Generalized polygons as explicit point-line incidence structures.
//!
//! Elements are numbered in one combined domain: points `0..np`, then lines `np..np+nl`.
//! The permutation groups and the search use the same numbering.

mod builders;
mod graph;
mod hexagon;
mod registry;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldError, FieldSpec};
use crate::geometry::{ProjectiveSpace, ProjectiveSubspace, Vector};
pub use builders::{build_pg2, build_w3, PlaneFrame};
pub use graph::{graph_metrics, BipartiteGraph, GraphMetrics};
pub use hexagon::{build_hexagon, collinear_set, HexagonAnnotations};
pub use registry::{HexagonFamily, Pg2Family, PolygonFamily, PolygonRegistry, W3Family};

#[derive(Debug, Error)]
pub enum PolygonError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("{family} over GF({q}) fails the polygon axioms: {reason}")]
    AxiomFailure { family: Family, q: u32, reason: String },
    #[error("unknown polygon family `{0}`")]
    UnknownFamily(String),
    #[error("malformed polygon data: {0}")]
    Malformed(String),
}

/// Which classical polygon an incidence structure is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Pg2,
    W3,
    Hexagon,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Pg2 => "pg2",
            Family::W3 => "w3",
            Family::Hexagon => "hexagon",
        }
    }

    pub fn gon(self) -> u32 {
        match self {
            Family::Pg2 => 3,
            Family::W3 => 4,
            Family::Hexagon => 6,
        }
    }

    pub fn ambient(self) -> usize {
        match self {
            Family::Pg2 => 2,
            Family::W3 => 3,
            Family::Hexagon => 6,
        }
    }

    pub fn parse(name: &str) -> Result<Family, PolygonError> {
        match name {
            "pg2" => Ok(Family::Pg2),
            "w3" => Ok(Family::W3),
            "hexagon" | "h" => Ok(Family::Hexagon),
            other => Err(PolygonError::UnknownFamily(other.to_string())),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Number of points of a generalized n-gon of order q.
pub fn theta(gon: u32, q: u64) -> u64 {
    match gon {
        3 => q * q + q + 1,
        4 => (q + 1) * (q * q + 1),
        6 => (q + 1) * (q.pow(4) + q * q + 1),
        _ => panic!("no generalized {gon}-gon of order q >= 2"),
    }
}

#[derive(Debug, Clone)]
struct BitMatrix {
    cols: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        BitMatrix { cols, words, bits: vec![0; rows * words] }
    }

    fn set(&mut self, r: usize, c: usize) {
        self.bits[r * self.words + c / 64] |= 1 << (c % 64);
    }

    fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(c < self.cols);
        self.bits[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }
}

/// A finite point-line geometry embedded in a projective space.
#[derive(Debug, Clone)]
pub struct IncidencePolygon {
    family: Family,
    field: Arc<FieldSpec>,
    order: (u32, u32),
    space: ProjectiveSpace,
    points: Vec<Vector>,
    lines: Vec<ProjectiveSubspace>,
    point_lines: Vec<Vec<u32>>,
    line_points: Vec<Vec<u32>>,
    incidence: BitMatrix,
    /// ambient point index -> polygon point index
    ambient_to_point: Vec<u32>,
}

impl IncidencePolygon {
    /// Assembles a polygon from its points and lines; incidence is read off the coordinates.
    pub fn from_parts(
        family: Family,
        field: Arc<FieldSpec>,
        points: Vec<Vector>,
        lines: Vec<ProjectiveSubspace>,
    ) -> Result<Self, PolygonError> {
        let ambient = family.ambient();
        let space = ProjectiveSpace::new(ambient, field.clone());
        let mut ambient_to_point = vec![u32::MAX; space.len()];
        for (i, p) in points.iter().enumerate() {
            let a = space
                .index_of(p)
                .ok_or_else(|| PolygonError::Malformed(format!("point {i} is not a point of PG({ambient},q)")))?;
            if ambient_to_point[a] != u32::MAX {
                return Err(PolygonError::Malformed(format!("point {i} is listed twice")));
            }
            ambient_to_point[a] = i as u32;
        }
        let mut line_points = Vec::with_capacity(lines.len());
        for (li, line) in lines.iter().enumerate() {
            if line.ambient() != ambient {
                return Err(PolygonError::Malformed(format!("line {li} lives in the wrong ambient space")));
            }
            let mut on: Vec<u32> = line
                .points(&field)
                .iter()
                .filter_map(|v| space.index_of(v))
                .map(|a| ambient_to_point[a])
                .filter(|&p| p != u32::MAX)
                .collect();
            on.sort_unstable();
            line_points.push(on);
        }
        Ok(Self::with_incidence(family, field, space, points, lines, line_points, ambient_to_point))
    }

    fn with_incidence(
        family: Family,
        field: Arc<FieldSpec>,
        space: ProjectiveSpace,
        points: Vec<Vector>,
        lines: Vec<ProjectiveSubspace>,
        line_points: Vec<Vec<u32>>,
        ambient_to_point: Vec<u32>,
    ) -> Self {
        let mut point_lines = vec![Vec::new(); points.len()];
        let mut incidence = BitMatrix::new(points.len(), lines.len());
        for (l, pts) in line_points.iter().enumerate() {
            for &p in pts {
                point_lines[p as usize].push(l as u32);
                incidence.set(p as usize, l);
            }
        }
        let s = line_points.first().map_or(0, |v| v.len().saturating_sub(1)) as u32;
        let t = point_lines.first().map_or(0, |v| v.len().saturating_sub(1)) as u32;
        IncidencePolygon {
            family,
            field,
            order: (s, t),
            space,
            points,
            lines,
            point_lines,
            line_points,
            incidence,
            ambient_to_point,
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn gon(&self) -> u32 {
        self.family.gon()
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// `(s, t)`: points per line minus one, lines per point minus one.
    pub fn order(&self) -> (u32, u32) {
        self.order
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    /// Size of the combined point+line domain.
    pub fn num_elements(&self) -> usize {
        self.points.len() + self.lines.len()
    }

    pub fn point(&self, i: usize) -> &Vector {
        &self.points[i]
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn line(&self, i: usize) -> &ProjectiveSubspace {
        &self.lines[i]
    }

    pub fn lines(&self) -> &[ProjectiveSubspace] {
        &self.lines
    }

    pub fn ambient_space(&self) -> &ProjectiveSpace {
        &self.space
    }

    pub fn lines_through(&self, p: usize) -> &[u32] {
        &self.point_lines[p]
    }

    pub fn points_on(&self, l: usize) -> &[u32] {
        &self.line_points[l]
    }

    pub fn incident(&self, p: usize, l: usize) -> bool {
        self.incidence.get(p, l)
    }

    /// Polygon point with the given coordinates (any scalar multiple).
    pub fn point_index(&self, v: &[crate::field::Fe]) -> Option<usize> {
        let a = self.space.index_of(v)?;
        let p = self.ambient_to_point[a];
        (p != u32::MAX).then_some(p as usize)
    }

    pub fn line_index(&self, line: &ProjectiveSubspace) -> Option<usize> {
        let pts = line.basis();
        if pts.len() != 2 {
            return None;
        }
        let a = self.point_index(&pts[0])?;
        let b = self.point_index(&pts[1])?;
        self.line_through(a, b)
    }

    /// The line joining two distinct points, if they are collinear in the polygon.
    pub fn line_through(&self, a: usize, b: usize) -> Option<usize> {
        if a == b {
            return None;
        }
        self.point_lines[a].iter().copied().find(|&l| self.incidence.get(b, l as usize)).map(|l| l as usize)
    }

    /// Incidence graph on the combined domain.
    pub fn graph(&self) -> BipartiteGraph {
        BipartiteGraph::from_left_adjacency(self.lines.len(), &self.point_lines)
    }

    /// Neighbours of an element of the combined domain, also in combined numbering.
    pub fn neighbours(&self, element: usize) -> Vec<u32> {
        let np = self.points.len();
        if element < np {
            self.point_lines[element].iter().map(|&l| l + np as u32).collect()
        } else {
            self.line_points[element - np].clone()
        }
    }

    /// Combined-domain adjacency lists.
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        (0..self.num_elements()).map(|e| self.neighbours(e)).collect()
    }

    /// Checks regularity, element counts, girth `2n` and diameter `n`.
    pub fn verify_axioms(&self) -> Result<GraphMetrics, PolygonError> {
        let q = self.q();
        let fail = |reason: String| PolygonError::AxiomFailure { family: self.family, q, reason };
        let n = self.gon();
        let expected = theta(n, q as u64) as usize;
        if self.points.len() != expected || self.lines.len() != expected {
            return Err(fail(format!(
                "{} points and {} lines, expected {expected} of each",
                self.points.len(),
                self.lines.len()
            )));
        }
        if let Some(l) = self.line_points.iter().position(|v| v.len() != q as usize + 1) {
            return Err(fail(format!("line {l} has {} points", self.line_points[l].len())));
        }
        if let Some(p) = self.point_lines.iter().position(|v| v.len() != q as usize + 1) {
            return Err(fail(format!("point {p} is on {} lines", self.point_lines[p].len())));
        }
        let metrics = self.graph().metrics();
        if metrics.girth != Some(2 * n) || metrics.diameter != Some(n) {
            return Err(fail(format!(
                "incidence graph has girth {:?} and diameter {:?}",
                metrics.girth, metrics.diameter
            )));
        }
        Ok(metrics)
    }

    /// Degree histogram keyed by side, for reporting.
    pub fn degree_profile(&self) -> BTreeMap<&'static str, BTreeMap<usize, usize>> {
        let mut out = BTreeMap::new();
        let mut pts = BTreeMap::new();
        for v in &self.point_lines {
            *pts.entry(v.len()).or_insert(0) += 1;
        }
        let mut lns = BTreeMap::new();
        for v in &self.line_points {
            *lns.entry(v.len()).or_insert(0) += 1;
        }
        out.insert("points", pts);
        out.insert("lines", lns);
        out
    }
}

/// Builds the polygon of the given family and order with the default registry.
pub fn build(family: Family, q: u32) -> Result<IncidencePolygon, PolygonError> {
    match family {
        Family::Pg2 => build_pg2(q),
        Family::W3 => build_w3(q),
        Family::Hexagon => build_hexagon(q).map(|(h, _)| h),
    }
}
