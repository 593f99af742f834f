use serde::{Deserialize, Serialize};

use super::{ConstructionError, GoodStructure, Host};
use crate::polygon::{Family, IncidencePolygon};

/// The three kinds of 1-good structure in PG(2,q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlanarKind {
    /// points of a line, lines through a point on it: size q+1
    PointOnLine,
    /// points of a line plus a point off it, lines through that point plus the line: size q+2
    PointOffLine,
    /// points and extended lines of the subfield subplane: size q+√q+1
    Baer,
}

impl PlanarKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "point-on-line" => Some(PlanarKind::PointOnLine),
            "point-off-line" => Some(PlanarKind::PointOffLine),
            "baer" => Some(PlanarKind::Baer),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PlanarKind::PointOnLine => "point-on-line",
            PlanarKind::PointOffLine => "point-off-line",
            PlanarKind::Baer => "baer",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarAnchor {
    pub point: usize,
    pub line: usize,
}

/// A 1-good structure of the plane. Without an anchor, line 0 is used together with its first
/// point (on-line) or the first point off it (off-line). The Baer kind ignores the anchor.
pub fn planar_one_good(
    plane: &IncidencePolygon,
    kind: PlanarKind,
    anchor: Option<PlanarAnchor>,
) -> Result<GoodStructure, ConstructionError> {
    if plane.family() != Family::Pg2 {
        return Err(ConstructionError::WrongFamily { expected: Family::Pg2, got: plane.family() });
    }
    let host = Host::of(plane);
    let line = anchor.map_or(0, |a| a.line);
    if line >= plane.num_lines() {
        return Err(ConstructionError::BadAnchor(format!("no line {line}")));
    }
    let default_point = || match kind {
        PlanarKind::PointOnLine => plane.points_on(line)[0] as usize,
        _ => (0..plane.num_points()).find(|&p| !plane.incident(p, line)).expect("a line is not the whole plane"),
    };
    let point = anchor.map_or_else(default_point, |a| a.point);
    if point >= plane.num_points() {
        return Err(ConstructionError::BadAnchor(format!("no point {point}")));
    }
    let mut points: Vec<usize> = plane.points_on(line).iter().map(|&p| p as usize).collect();
    let mut lines: Vec<usize> = plane.lines_through(point).iter().map(|&l| l as usize).collect();
    match kind {
        PlanarKind::PointOnLine => {
            if !plane.incident(point, line) {
                return Err(ConstructionError::BadAnchor(format!("point {point} is not on line {line}")));
            }
        }
        PlanarKind::PointOffLine => {
            if plane.incident(point, line) {
                return Err(ConstructionError::BadAnchor(format!("point {point} is on line {line}")));
            }
            points.push(point);
            lines.push(line);
        }
        PlanarKind::Baer => return baer(plane),
    }
    Ok(GoodStructure::new(host, 1, points, lines))
}

fn baer(plane: &IncidencePolygon) -> Result<GoodStructure, ConstructionError> {
    let field = plane.field();
    let e = field.e();
    if !e.is_multiple_of(2) {
        return Err(ConstructionError::NotSquare(plane.q()));
    }
    let in_subfield = |a| field.frobenius(a, e / 2) == a;
    let points: Vec<usize> =
        (0..plane.num_points()).filter(|&p| plane.point(p).iter().all(|&c| in_subfield(c))).collect();
    let mut mark = vec![false; plane.num_points()];
    for &p in &points {
        mark[p] = true;
    }
    let lines = (0..plane.num_lines())
        .filter(|&l| plane.points_on(l).iter().filter(|&&p| mark[p as usize]).count() >= 2)
        .collect();
    Ok(GoodStructure::new(Host::of(plane), 1, points, lines))
}
