//! The split Cayley hexagon H(q) inside the parabolic quadric Q(6,q).

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::{Family, IncidencePolygon, PolygonError};
use crate::field::{Fe, FieldSpec};
use crate::geometry::{linalg, ProjectiveSpace, ProjectiveSubspace, QuadraticForm, Vector};

/// Extra geometry of the hexagon inside its quadric.
#[derive(Debug, Clone)]
pub struct HexagonAnnotations {
    quadric: QuadraticForm,
    /// `hex_planes[p]`: the plane spanned by the hexagon lines through point `p`.
    hex_planes: Vec<ProjectiveSubspace>,
    ideal_planes: Vec<ProjectiveSubspace>,
    /// Quadric lines that are not hexagon lines, each with the centre of its unique hexagon plane.
    ideal_lines: Vec<(ProjectiveSubspace, usize)>,
}

impl HexagonAnnotations {
    pub fn quadric(&self) -> &QuadraticForm {
        &self.quadric
    }

    pub fn hex_plane(&self, p: usize) -> &ProjectiveSubspace {
        &self.hex_planes[p]
    }

    pub fn hex_planes(&self) -> &[ProjectiveSubspace] {
        &self.hex_planes
    }

    pub fn ideal_planes(&self) -> &[ProjectiveSubspace] {
        &self.ideal_planes
    }

    pub fn ideal_lines(&self) -> &[(ProjectiveSubspace, usize)] {
        &self.ideal_lines
    }
}

/// `p_ij = x_i y_j - x_j y_i` for any ordered pair of indices.
fn pl(field: &FieldSpec, x: &[Fe], y: &[Fe], i: usize, j: usize) -> Fe {
    field.sub(field.mul(x[i], y[j]), field.mul(x[j], y[i]))
}

/// The six linear Grassmann conditions singling out hexagon lines among the lines of
/// `x0 x4 + x1 x5 + x2 x6 = x3^2`.
pub(crate) fn is_hexagon_line(field: &FieldSpec, x: &[Fe], y: &[Fe]) -> bool {
    let p = |i, j| pl(field, x, y, i, j);
    p(1, 2) == p(3, 4)
        && p(5, 4) == p(3, 2)
        && p(2, 0) == p(3, 5)
        && p(6, 5) == p(3, 0)
        && p(0, 1) == p(3, 6)
        && p(4, 6) == p(3, 1)
}

/// Builds H(q) and verifies the polygon axioms together with the standard properties of the
/// embedding (hexagon planes, ideal planes and lines, tangent-space description of distance 4).
/// Any failure aborts the build.
pub fn build_hexagon(q: u32) -> Result<(IncidencePolygon, HexagonAnnotations), PolygonError> {
    let field = Arc::new(FieldSpec::of_order(q)?);
    let quadric = QuadraticForm::hexagon_quadric(&field);
    let space = ProjectiveSpace::new(6, field.clone());
    let points: Vec<Vector> = space.all_coords().iter().filter(|v| quadric.is_singular(&field, v)).cloned().collect();
    let polar = quadric.polar_matrix(&field);
    let probes: Vec<Vector> = points.iter().map(|v| linalg::vec_mat(&field, v, &polar)).collect();

    let mut quadric_lines = BTreeSet::new();
    let mut hex_lines = BTreeSet::new();
    for a in 0..points.len() {
        for b in (a + 1)..points.len() {
            if !linalg::dot(&field, &probes[a], &points[b]).is_zero() {
                continue;
            }
            let line = ProjectiveSubspace::from_vectors(&field, 6, vec![points[a].clone(), points[b].clone()])
                .expect("points of PG(6,q)");
            if is_hexagon_line(&field, &points[a], &points[b]) {
                hex_lines.insert(line.clone());
            }
            quadric_lines.insert(line);
        }
    }
    let hex = IncidencePolygon::from_parts(Family::Hexagon, field.clone(), points, hex_lines.into_iter().collect())?;
    hex.verify_axioms()?;
    let annotations = annotate(&hex, quadric, &quadric_lines)?;
    Ok((hex, annotations))
}

fn annotate(
    hex: &IncidencePolygon,
    quadric: QuadraticForm,
    quadric_lines: &BTreeSet<ProjectiveSubspace>,
) -> Result<HexagonAnnotations, PolygonError> {
    let field = hex.field().clone();
    let q = hex.q() as usize;
    let fail = |reason: String| PolygonError::AxiomFailure { family: Family::Hexagon, q: q as u32, reason };
    let np = hex.num_points();

    // P2: the lines through a point span a totally singular plane
    let mut hex_planes = Vec::with_capacity(np);
    for p in 0..np {
        let vs: Vec<Vector> =
            hex.lines_through(p).iter().flat_map(|&l| hex.line(l as usize).basis().to_vec()).collect();
        let plane = ProjectiveSubspace::from_vectors(&field, 6, vs).expect("same ambient");
        if plane.dim() != 2 || !quadric.is_totally_singular(&field, &plane) {
            return Err(fail(format!("lines through point {p} do not span a totally singular plane")));
        }
        hex_planes.push(plane);
    }
    let centre_of: BTreeMap<&ProjectiveSubspace, usize> = hex_planes.iter().enumerate().map(|(i, p)| (p, i)).collect();
    if centre_of.len() != np {
        return Err(fail("two points share a hexagon plane".into()));
    }

    // planes of the quadric through each quadric line
    let polar = quadric.polar_matrix(&field);
    let mut planes_on_line: BTreeMap<&ProjectiveSubspace, BTreeSet<ProjectiveSubspace>> = BTreeMap::new();
    for line in quadric_lines {
        let probes: Vec<Vector> = line.basis().iter().map(|v| linalg::vec_mat(&field, v, &polar)).collect();
        let mut planes = BTreeSet::new();
        for x in hex.points() {
            if probes.iter().all(|h| linalg::dot(&field, h, x).is_zero()) && !line.contains_vector(&field, x) {
                let mut vs = line.basis().to_vec();
                vs.push(x.clone());
                planes.insert(ProjectiveSubspace::from_vectors(&field, 6, vs).expect("same ambient"));
            }
        }
        planes_on_line.insert(line, planes);
    }

    let mut all_planes = BTreeSet::new();
    let mut ideal_lines = Vec::new();
    for (line, planes) in &planes_on_line {
        // P5
        if planes.len() != q + 1 {
            return Err(fail(format!("a quadric line lies in {} quadric planes", planes.len())));
        }
        let on_hex = planes.iter().filter(|p| centre_of.contains_key(p)).count();
        if hex.line_index(line).is_some() {
            if on_hex != q + 1 {
                return Err(fail("a hexagon line lies in an ideal plane".into()));
            }
        } else {
            // P6
            if on_hex != 1 {
                return Err(fail(format!("an ideal line lies in {on_hex} hexagon planes")));
            }
            let centre = planes.iter().find_map(|p| centre_of.get(p)).copied().expect("counted above");
            ideal_lines.push(((*line).clone(), centre));
        }
        all_planes.extend(planes.iter().cloned());
    }

    // P3
    let mut ideal_planes = Vec::new();
    for plane in &all_planes {
        let mut inside = BTreeSet::new();
        for v in plane.points(&field) {
            let p = hex.point_index(&v).expect("plane is totally singular");
            for &l in hex.lines_through(p) {
                if plane.contains(&field, hex.line(l as usize)) {
                    inside.insert(l);
                }
            }
        }
        match centre_of.get(plane) {
            Some(&c) => {
                let expected: BTreeSet<u32> = hex.lines_through(c).iter().copied().collect();
                if inside != expected {
                    return Err(fail(format!("hexagon plane of point {c} contains other hexagon lines")));
                }
            }
            None if inside.is_empty() => ideal_planes.push(plane.clone()),
            None => return Err(fail("a quadric plane contains hexagon lines without being a hexagon plane".into())),
        }
    }

    // P4: distance at most 4 from P in the hexagon equals collinearity in the quadric
    let graph = hex.graph();
    let probes: Vec<Vector> = hex.points().iter().map(|v| linalg::vec_mat(&field, v, &polar)).collect();
    for p in 0..np {
        let d = graph.distances_from(p);
        for x in 0..np {
            let near = d[x] <= 4;
            let perp = linalg::dot(&field, &probes[p], hex.point(x)).is_zero();
            if near != perp {
                return Err(fail(format!(
                    "points {p} and {x}: hexagon distance {} vs quadric collinearity {perp}",
                    d[x]
                )));
            }
        }
    }

    Ok(HexagonAnnotations { quadric, hex_planes, ideal_planes, ideal_lines })
}

/// Points other than `x` on the hexagon lines through `x`.
pub fn collinear_set(hex: &IncidencePolygon, x: usize) -> Vec<usize> {
    let mut out: Vec<usize> = hex
        .lines_through(x)
        .iter()
        .flat_map(|&l| hex.points_on(l as usize).iter().map(|&p| p as usize))
        .filter(|&p| p != x)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}
