use std::collections::BTreeSet;
use std::sync::Arc;

use super::{Family, IncidencePolygon, PolygonError};
use crate::field::{Fe, FieldSpec};
use crate::geometry::{linalg, ProjectiveSpace, ProjectiveSubspace, SymplecticForm, Vector};

/// The Desarguesian plane PG(2,q). Line `i` is the kernel of the `i`-th point of the dual plane.
pub fn build_pg2(q: u32) -> Result<IncidencePolygon, PolygonError> {
    let field = Arc::new(FieldSpec::of_order(q)?);
    let space = ProjectiveSpace::new(2, field.clone());
    let points: Vec<Vector> = space.all_coords().to_vec();
    let mut lines = Vec::with_capacity(points.len());
    let mut line_points = Vec::with_capacity(points.len());
    for h in &points {
        lines.push(ProjectiveSubspace::from_equations(&field, 2, std::slice::from_ref(h)));
        let on: Vec<u32> = points
            .iter()
            .enumerate()
            .filter(|(_, x)| linalg::dot(&field, h, x).is_zero())
            .map(|(i, _)| i as u32)
            .collect();
        line_points.push(on);
    }
    let ambient_to_point = (0..points.len() as u32).collect();
    let polygon =
        IncidencePolygon::with_incidence(Family::Pg2, field, space, points, lines, line_points, ambient_to_point);
    polygon.verify_axioms()?;
    Ok(polygon)
}

/// The symplectic quadrangle W(3,q): all points of PG(3,q) and the totally isotropic lines of
/// `x0 y1 - x1 y0 + x2 y3 - x3 y2`, lines sorted by canonical basis.
pub fn build_w3(q: u32) -> Result<IncidencePolygon, PolygonError> {
    let field = Arc::new(FieldSpec::of_order(q)?);
    let beta = SymplecticForm::standard(&field);
    let space = ProjectiveSpace::new(3, field.clone());
    let points: Vec<Vector> = space.all_coords().to_vec();
    let mut lines = BTreeSet::new();
    for a in 0..points.len() {
        for b in (a + 1)..points.len() {
            if beta.eval(&field, &points[a], &points[b]).is_zero() {
                let line = ProjectiveSubspace::from_vectors(&field, 3, vec![points[a].clone(), points[b].clone()])
                    .expect("points of PG(3,q)");
                lines.insert(line);
            }
        }
    }
    let polygon = IncidencePolygon::from_parts(Family::W3, field, points, lines.into_iter().collect())?;
    polygon.verify_axioms()?;
    Ok(polygon)
}

/// A coordinate frame identifying PG(2,q) with a plane of a larger projective space:
/// the abstract point `u` maps to `u · rows`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneFrame {
    rows: Vec<Vector>,
}

impl PlaneFrame {
    /// Uses the canonical basis of `plane` as frame.
    pub fn of_plane(plane: &ProjectiveSubspace) -> Option<Self> {
        (plane.dim() == 2).then(|| PlaneFrame { rows: plane.basis().to_vec() })
    }

    /// A frame from three independent vectors of a common ambient space.
    pub fn from_rows(field: &FieldSpec, rows: Vec<Vector>) -> Option<Self> {
        (rows.len() == 3 && linalg::rank(field, &rows) == 3).then_some(PlaneFrame { rows })
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn map_vector(&self, field: &FieldSpec, u: &[Fe]) -> Vector {
        let mut v = linalg::vec_mat(field, u, &self.rows);
        linalg::normalize(field, &mut v);
        v
    }

    pub fn map_subspace(&self, field: &FieldSpec, s: &ProjectiveSubspace) -> ProjectiveSubspace {
        let ambient = self.rows[0].len() - 1;
        let vs = s.basis().iter().map(|u| self.map_vector(field, u)).collect();
        ProjectiveSubspace::from_vectors(field, ambient, vs).expect("frame rows share an ambient space")
    }

    pub fn plane(&self, field: &FieldSpec) -> ProjectiveSubspace {
        ProjectiveSubspace::from_vectors(field, self.rows[0].len() - 1, self.rows.clone()).expect("frame rows")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pg2_small_orders() {
        let fano = build_pg2(2).unwrap();
        assert_eq!((fano.num_points(), fano.num_lines()), (7, 7));
        let m = fano.graph().metrics();
        assert_eq!((m.girth, m.diameter, m.regular_degree()), (Some(6), Some(3), Some(3)));
        let p3 = build_pg2(3).unwrap();
        assert_eq!((p3.num_points(), p3.num_lines()), (13, 13));
        let p4 = build_pg2(4).unwrap();
        assert_eq!(p4.num_lines(), 21);
        assert!((0..21).all(|l| p4.points_on(l).len() == 5));
        assert_eq!(p4.order(), (4, 4));
    }

    #[test]
    fn w3_small_orders() {
        let w2 = build_w3(2).unwrap();
        assert_eq!((w2.num_points(), w2.num_lines()), (15, 15));
        let m = w2.graph().metrics();
        assert_eq!((m.vertices, m.girth, m.regular_degree()), (30, Some(8), Some(3)));
        let w3 = build_w3(3).unwrap();
        let m = w3.graph().metrics();
        assert_eq!((m.vertices, m.girth, m.diameter, m.regular_degree()), (80, Some(8), Some(4), Some(4)));
        assert_eq!(build_w3(4).unwrap().num_points(), 85);
    }

    #[test]
    fn w3_lines_are_totally_isotropic() {
        let w = build_w3(3).unwrap();
        let f = w.field().clone();
        let beta = SymplecticForm::standard(&f);
        for l in w.lines() {
            assert!(beta.is_totally_isotropic(&f, l));
        }
        // every line through a point lies in its perp
        for p in 0..w.num_points() {
            let perp = beta.perp(&f, &ProjectiveSubspace::point(&f, w.point(p)).unwrap());
            for &l in w.lines_through(p) {
                assert!(perp.contains(&f, w.line(l as usize)));
            }
        }
    }

    #[test]
    fn unsupported_order() {
        assert!(matches!(build_pg2(6), Err(PolygonError::Field(_))));
    }

    #[test]
    fn line_lookup_roundtrip() {
        let w = build_w3(3).unwrap();
        for (i, l) in w.lines().iter().enumerate() {
            assert_eq!(w.line_index(l), Some(i));
        }
        let pts = w.points_on(5);
        assert_eq!(w.line_through(pts[0] as usize, pts[1] as usize), Some(5));
    }
}
