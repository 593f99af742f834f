use super::{PermGroup, PermGroupError, Permutation};
use crate::field::{Fe, FieldSpec};
use crate::geometry::{SymplecticForm, Vector};
use crate::polygon::{Family, IncidencePolygon};

/// The permutation of the combined domain induced by a map on point coordinates. Fails when an
/// image is not a point of the polygon or two collinear points are sent to non-collinear ones.
pub fn permutation_from_point_map(polygon: &IncidencePolygon, f: impl Fn(&[Fe]) -> Vector) -> Option<Permutation> {
    let np = polygon.num_points();
    let mut images = Vec::with_capacity(polygon.num_elements());
    for p in 0..np {
        images.push(polygon.point_index(&f(polygon.point(p)))? as u32);
    }
    for l in 0..polygon.num_lines() {
        let on = polygon.points_on(l);
        let a = images[on[0] as usize] as usize;
        let b = images[on[1] as usize] as usize;
        images.push((polygon.line_through(a, b)? + np) as u32);
    }
    let g = Permutation::from_images(images).ok()?;
    g.preserves_incidence(polygon).then_some(g)
}

/// Additive generators of the field: 1, x, ..., x^{e-1}.
fn additive_basis(field: &FieldSpec) -> Vec<Fe> {
    (0..field.e() as usize)
        .map(|i| {
            let mut c = vec![0u16; field.e() as usize];
            c[i] = 1;
            field.from_coeffs(&c)
        })
        .collect()
}

fn unit(n: usize, field: &FieldSpec, i: usize) -> Vector {
    let mut v = vec![Fe(0); n];
    v[i] = field.from_int(1);
    v
}

fn axpy(field: &FieldSpec, a: Fe, x: &[Fe], y: &[Fe]) -> Vector {
    x.iter().zip(y).map(|(&xi, &yi)| field.add(field.mul(a, xi), yi)).collect()
}

fn coordinate_maps(polygon: &IncidencePolygon) -> Result<Vec<Box<dyn Fn(&[Fe]) -> Vector + '_>>, PermGroupError> {
    let field = polygon.field().as_ref();
    let basis = additive_basis(field);
    let mut maps: Vec<Box<dyn Fn(&[Fe]) -> Vector + '_>> = Vec::new();
    let mu = field.primitive();
    match polygon.family() {
        Family::W3 => {
            let beta = SymplecticForm::standard(field);
            let mut roots: Vec<Vector> = (0..4).map(|i| unit(4, field, i)).collect();
            for i in 0..4 {
                for j in i + 1..4 {
                    roots.push(axpy(field, field.from_int(1), &unit(4, field, i), &unit(4, field, j)));
                }
            }
            for v in roots {
                for &a in &basis {
                    let v = v.clone();
                    let beta = beta.clone();
                    // x -> x + a β(x,v) v
                    maps.push(Box::new(move |x| axpy(field, field.mul(a, beta.eval(field, x, &v)), &v, x)));
                }
            }
            if field.q() > 2 {
                maps.push(Box::new(move |x| vec![x[0], field.mul(mu, x[1]), x[2], field.mul(mu, x[3])]));
            }
        }
        Family::Pg2 => {
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        for &a in &basis {
                            // x_j += a x_i
                            maps.push(Box::new(move |x| {
                                let mut y = x.to_vec();
                                y[j] = field.add(y[j], field.mul(a, x[i]));
                                y
                            }));
                        }
                    }
                }
            }
            if field.q() > 2 {
                maps.push(Box::new(move |x| vec![field.mul(mu, x[0]), x[1], x[2]]));
            }
        }
        other => return Err(PermGroupError::Unsupported(other)),
    }
    if field.e() > 1 {
        maps.push(Box::new(move |x| x.iter().map(|&c| field.frobenius(c, 1)).collect()));
    }
    Ok(maps)
}

/// The collineation group of W(3,q) or PG(2,q) acting on point and line indices: root elations
/// (symplectic transvections for W(3,q)), a diagonal similitude, and the Frobenius map.
pub fn collineation_generators(polygon: &IncidencePolygon) -> Result<PermGroup, PermGroupError> {
    let maps = coordinate_maps(polygon)?;
    let mut gens = Vec::with_capacity(maps.len());
    for (i, f) in maps.iter().enumerate() {
        let g = permutation_from_point_map(polygon, f).ok_or(PermGroupError::NotIncidencePreserving(i))?;
        if !g.is_identity() && !gens.contains(&g) {
            gens.push(g);
        }
    }
    PermGroup::new(polygon.num_elements(), gens)
}

/// A duality of W(3,q) for even q, as a permutation swapping points and lines. The Plücker
/// coordinates of a totally isotropic line lie on a parabolic quadric of PG(4,q), and projecting
/// from its nucleus gives a point of PG(3,q); lines through a point go to a totally isotropic
/// line. `None` for odd q or other families.
pub fn w3_duality(polygon: &IncidencePolygon) -> Option<Permutation> {
    let field = polygon.field().as_ref();
    if polygon.family() != Family::W3 || field.p() != 2 {
        return None;
    }
    let np = polygon.num_points();
    let mut line_to_point = Vec::with_capacity(polygon.num_lines());
    for l in 0..polygon.num_lines() {
        let b = polygon.line(l).basis();
        let (x, y) = (&b[0], &b[1]);
        let p = |i: usize, j: usize| field.sub(field.mul(x[i], y[j]), field.mul(x[j], y[i]));
        let z = vec![p(0, 2), p(1, 3), p(0, 3), p(1, 2)];
        line_to_point.push(polygon.point_index(&z)?);
    }
    let mut images = vec![0u32; polygon.num_elements()];
    for pt in 0..np {
        let through = polygon.lines_through(pt);
        let a = line_to_point[through[0] as usize];
        let b = line_to_point[through[1] as usize];
        images[pt] = (polygon.line_through(a, b)? + np) as u32;
    }
    for (l, &pt) in line_to_point.iter().enumerate() {
        images[l + np] = pt as u32;
    }
    let d = Permutation::from_images(images).ok()?;
    is_duality(polygon, &d).then_some(d)
}

/// Sends points to lines, lines to points, and incident pairs to incident pairs.
pub fn is_duality(polygon: &IncidencePolygon, d: &Permutation) -> bool {
    let np = polygon.num_points();
    if d.degree() != polygon.num_elements() || polygon.num_lines() != np {
        return false;
    }
    (0..np).all(|p| d.apply(p as u32) as usize >= np)
        && (0..polygon.num_lines()).all(|l| {
            let dl = d.apply((l + np) as u32) as usize;
            dl < np && polygon.points_on(l).iter().all(|&p| polygon.incident(dl, d.apply(p) as usize - np))
        })
}
