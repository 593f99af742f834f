//! t-good structures: the verifier and the known constructions.

mod hexagon;
mod lift;
mod planar;
mod registry;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::GeometryError;
use crate::polygon::{Family, IncidencePolygon, PolygonError};
pub use hexagon::{
    achievable_sizes, all_four_spaces, classify_case, hexagon_good, random_four_space, HexCase, HexCaseReport,
    HexagonContext, Section,
};
pub use lift::{lift_w3, lift_w3_with_frame, perp_frame};
pub use planar::{planar_one_good, PlanarAnchor, PlanarKind};
pub use registry::{
    Construction, ConstructionParams, ConstructionRegistry, HexagonConstruction, LiftConstruction, PlanarConstruction,
    Provenance,
};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Polygon(#[from] PolygonError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("expected a {expected} host, got {got}")]
    WrongFamily { expected: Family, got: Family },
    #[error("Baer subplanes need a square order, got q = {0}")]
    NotSquare(u32),
    #[error("{0}")]
    BadAnchor(String),
    #[error("the planar structure is not 1-good")]
    PlanarInvalid,
    #[error("point is not on the quadric or not in the 4-space")]
    PointNotInSection,
    #[error("unexpected quadric section: {0}")]
    UnexpectedSection(String),
    #[error("unknown construction `{0}`")]
    Unknown(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// Which polygon a structure lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Host {
    pub family: Family,
    pub q: u32,
}

impl Host {
    pub fn of(polygon: &IncidencePolygon) -> Self {
        Host { family: polygon.family(), q: polygon.q() }
    }
}

/// A point set and a line set of a polygon, meant to be t-good.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GoodStructure {
    pub host: Host,
    pub t: u32,
    pub points: Vec<usize>,
    pub lines: Vec<usize>,
}

impl GoodStructure {
    pub fn new(host: Host, t: u32, mut points: Vec<usize>, mut lines: Vec<usize>) -> Self {
        points.sort_unstable();
        points.dedup();
        lines.sort_unstable();
        lines.dedup();
        GoodStructure { host, t, points, lines }
    }

    /// From membership masks.
    pub fn from_masks(host: Host, t: u32, points: &[bool], lines: &[bool]) -> Self {
        let pick = |m: &[bool]| m.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect();
        GoodStructure { host, t, points: pick(points), lines: pick(lines) }
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    /// Sorted indices in the combined point+line domain.
    pub fn elements(&self, num_points: usize) -> Vec<usize> {
        self.points.iter().copied().chain(self.lines.iter().map(|&l| l + num_points)).collect()
    }

    pub fn from_elements(host: Host, t: u32, num_points: usize, elements: &[usize]) -> Self {
        let points = elements.iter().copied().filter(|&e| e < num_points).collect();
        let lines = elements.iter().filter(|&&e| e >= num_points).map(|&e| e - num_points).collect();
        GoodStructure::new(host, t, points, lines)
    }

    /// Vertices of the incidence graph outside the structure.
    pub fn subgraph_size(&self, polygon: &IncidencePolygon) -> usize {
        polygon.num_elements() - self.points.len() - self.lines.len()
    }
}

/// Outcome of checking the t-good conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TGoodReport {
    pub valid: bool,
    pub t: u32,
    pub size: usize,
    pub balanced: bool,
    /// (point outside, number of chosen lines through it) where that number is not t
    pub point_violations: Vec<(usize, usize)>,
    pub line_violations: Vec<(usize, usize)>,
    pub subgraph_vertices: usize,
    pub expected_degree: i64,
    pub subgraph_regular: bool,
    pub subgraph_girth: Option<u32>,
}

/// Checks both t-good conditions and the regularity and girth of the complement subgraph.
pub fn verify_tgood(polygon: &IncidencePolygon, g: &GoodStructure) -> TGoodReport {
    let np = polygon.num_points();
    let nl = polygon.num_lines();
    let t = g.t as usize;
    let mut p_in = vec![false; np];
    let mut l_in = vec![false; nl];
    for &p in &g.points {
        p_in[p] = true;
    }
    for &l in &g.lines {
        l_in[l] = true;
    }
    let point_violations: Vec<(usize, usize)> = (0..np)
        .filter(|&p| !p_in[p])
        .map(|p| (p, polygon.lines_through(p).iter().filter(|&&l| l_in[l as usize]).count()))
        .filter(|&(_, c)| c != t)
        .collect();
    let line_violations: Vec<(usize, usize)> = (0..nl)
        .filter(|&l| !l_in[l])
        .map(|l| (l, polygon.points_on(l).iter().filter(|&&p| p_in[p as usize]).count()))
        .filter(|&(_, c)| c != t)
        .collect();
    let keep: Vec<bool> = p_in.iter().chain(l_in.iter()).map(|&b| !b).collect();
    let sub = polygon.graph().induced(&keep);
    let expected_degree = polygon.order().0 as i64 + 1 - t as i64;
    let subgraph_regular = (0..sub.len()).all(|v| sub.neighbours(v).len() as i64 == expected_degree);
    let balanced = g.points.len() == g.lines.len();
    TGoodReport {
        valid: balanced && point_violations.is_empty() && line_violations.is_empty(),
        t: g.t,
        size: g.points.len(),
        balanced,
        point_violations,
        line_violations,
        subgraph_vertices: sub.len(),
        expected_degree,
        subgraph_regular,
        subgraph_girth: sub.girth(),
    }
}
