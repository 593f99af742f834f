use std::collections::BTreeSet;

use super::{verify_tgood, ConstructionError, GoodStructure, Host};
use crate::geometry::{ProjectiveSubspace, SymplecticForm, Vector};
use crate::polygon::{Family, IncidencePolygon, PlaneFrame};

/// A frame of the plane `P^⊥` of W(3,q) sending the abstract point `u` to `P`.
pub fn perp_frame(w: &IncidencePolygon, p: usize, u: &[crate::field::Fe]) -> Result<PlaneFrame, ConstructionError> {
    let field = w.field();
    let beta = SymplecticForm::standard(field);
    let pv = w.point(p).clone();
    let pi = beta.perp(field, &ProjectiveSubspace::point(field, &pv)?);
    // two vectors completing P to a basis of the plane
    let mut others: Vec<Vector> = Vec::new();
    let mut acc = vec![pv.clone()];
    for b in pi.basis() {
        let mut trial = acc.clone();
        trial.push(b.clone());
        if crate::geometry::linalg::rank(field, &trial) == trial.len() {
            acc = trial;
            others.push(b.clone());
        }
    }
    let lead = u.iter().position(|c| !c.is_zero()).ok_or_else(|| ConstructionError::BadAnchor("zero anchor".into()))?;
    let scale = field.inv_unchecked(u[lead]);
    let mut rows = vec![Vec::new(); 3];
    let mut it = others.into_iter();
    for (j, row) in rows.iter_mut().enumerate() {
        if j != lead {
            *row = it.next().expect("plane has dimension 2");
        }
    }
    // row[lead] = (P - sum_{j != lead} u_j row_j) / u_lead
    let mut r = pv;
    for j in (0..3).filter(|&j| j != lead) {
        for (k, x) in r.iter_mut().enumerate() {
            *x = field.sub(*x, field.mul(u[j], rows[j][k]));
        }
    }
    for x in r.iter_mut() {
        *x = field.mul(*x, scale);
    }
    rows[lead] = r;
    PlaneFrame::from_rows(field, rows).ok_or_else(|| ConstructionError::BadAnchor("degenerate frame".into()))
}

/// Lifts a 1-good structure of PG(2,q) to W(3,q) through the point `p`, identifying the plane
/// with `p^⊥` so that the abstract point `anchor` lands on `p`.
pub fn lift_w3(
    w: &IncidencePolygon,
    p: usize,
    plane: &IncidencePolygon,
    planar: &GoodStructure,
    anchor: usize,
) -> Result<GoodStructure, ConstructionError> {
    if anchor >= plane.num_points() || p >= w.num_points() {
        return Err(ConstructionError::BadAnchor(format!("no point {p} of the quadrangle or {anchor} of the plane")));
    }
    let frame = perp_frame(w, p, plane.point(anchor))?;
    lift_w3_with_frame(w, p, plane, planar, &frame)
}

pub fn lift_w3_with_frame(
    w: &IncidencePolygon,
    p: usize,
    plane: &IncidencePolygon,
    planar: &GoodStructure,
    frame: &PlaneFrame,
) -> Result<GoodStructure, ConstructionError> {
    if w.family() != Family::W3 {
        return Err(ConstructionError::WrongFamily { expected: Family::W3, got: w.family() });
    }
    if plane.family() != Family::Pg2 {
        return Err(ConstructionError::WrongFamily { expected: Family::Pg2, got: plane.family() });
    }
    if plane.q() != w.q() || planar.t != 1 || !verify_tgood(plane, planar).valid {
        return Err(ConstructionError::PlanarInvalid);
    }
    let field = w.field();
    let beta = SymplecticForm::standard(field);
    let pi = frame.plane(field);
    let p_perp = beta.perp(field, &ProjectiveSubspace::point(field, w.point(p))?);
    if pi != p_perp {
        return Err(ConstructionError::BadAnchor("frame does not span the perp of the point".into()));
    }

    let mut planar_points = vec![false; w.num_points()];
    for &x in &planar.points {
        let v = frame.map_vector(field, plane.point(x));
        planar_points[w.point_index(&v).expect("every point of PG(3,q) is a point of W(3,q)")] = true;
    }
    let planar_lines: BTreeSet<ProjectiveSubspace> =
        planar.lines.iter().map(|&l| frame.map_subspace(field, plane.line(l))).collect();

    let mut points = vec![p];
    for x in 0..w.num_points() {
        if planar_points[x] {
            points.push(x);
        } else if x != p {
            // for X in π this is the line PX
            let trace = beta.perp(field, &ProjectiveSubspace::point(field, w.point(x))?).meet(field, &pi)?;
            if planar_lines.contains(&trace) {
                points.push(x);
            }
        }
    }
    let mut lines: Vec<usize> = w.lines_through(p).iter().map(|&l| l as usize).collect();
    for l in 0..w.num_lines() {
        let line = w.line(l);
        if pi.contains(field, line) {
            continue;
        }
        let meet = line.meet(field, &pi)?;
        let x = w.point_index(&meet.basis()[0]).expect("a point of PG(3,q)");
        if planar_points[x] {
            lines.push(l);
        }
    }
    Ok(GoodStructure::new(Host::of(w), 1, points, lines))
}
