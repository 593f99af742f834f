use serde::{Deserialize, Serialize};

use super::linalg::{self, Vector};
use super::{GeometryError, ProjectiveSubspace};
use crate::field::{Fe, FieldSpec};

/// An alternating bilinear form given by its Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticForm {
    gram: Vec<Vector>,
}

impl SymplecticForm {
    /// `x0 y1 - x1 y0 + x2 y3 - x3 y2` on PG(3,q).
    pub fn standard(field: &FieldSpec) -> Self {
        let one = Fe::ONE;
        let minus = field.neg(one);
        let mut gram = vec![vec![Fe::ZERO; 4]; 4];
        gram[0][1] = one;
        gram[1][0] = minus;
        gram[2][3] = one;
        gram[3][2] = minus;
        SymplecticForm { gram }
    }

    pub fn gram(&self) -> &[Vector] {
        &self.gram
    }

    pub fn eval(&self, field: &FieldSpec, x: &[Fe], y: &[Fe]) -> Fe {
        linalg::dot(field, &linalg::vec_mat(field, x, &self.gram), y)
    }

    /// `{Y : β(X, Y) = 0 for all X in s}`.
    pub fn perp(&self, field: &FieldSpec, s: &ProjectiveSubspace) -> ProjectiveSubspace {
        perp_by_matrix(field, &self.gram, s)
    }

    pub fn is_totally_isotropic(&self, field: &FieldSpec, s: &ProjectiveSubspace) -> bool {
        let b = s.basis();
        b.iter().all(|x| b.iter().all(|y| self.eval(field, x, y).is_zero()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadricKind {
    Parabolic,
    Hyperbolic,
    Elliptic,
}

/// `Q(x) = sum_{i <= j} c_ij x_i x_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    coeffs: Vec<Vector>,
    kind: QuadricKind,
}

impl QuadraticForm {
    pub fn from_upper(coeffs: Vec<Vector>, kind: QuadricKind) -> Self {
        QuadraticForm { coeffs, kind }
    }

    /// `x0 x4 + x1 x5 + x2 x6 - x3^2` on PG(6,q); the host quadric of the split Cayley hexagon.
    pub fn hexagon_quadric(field: &FieldSpec) -> Self {
        let mut c = vec![vec![Fe::ZERO; 7]; 7];
        c[0][4] = Fe::ONE;
        c[1][5] = Fe::ONE;
        c[2][6] = Fe::ONE;
        c[3][3] = field.neg(Fe::ONE);
        QuadraticForm { coeffs: c, kind: QuadricKind::Parabolic }
    }

    /// `x0^2 + x1 x2 + ... + x_{2m-1} x_{2m}` on PG(2m,q).
    pub fn parabolic(_field: &FieldSpec, m: usize) -> Self {
        let n = 2 * m + 1;
        let mut c = vec![vec![Fe::ZERO; n]; n];
        c[0][0] = Fe::ONE;
        for k in 0..m {
            c[2 * k + 1][2 * k + 2] = Fe::ONE;
        }
        QuadraticForm { coeffs: c, kind: QuadricKind::Parabolic }
    }

    /// `x0 x1 + ... + x_{2m-2} x_{2m-1}` on PG(2m-1,q).
    pub fn hyperbolic(_field: &FieldSpec, m: usize) -> Self {
        let n = 2 * m;
        let mut c = vec![vec![Fe::ZERO; n]; n];
        for k in 0..m {
            c[2 * k][2 * k + 1] = Fe::ONE;
        }
        QuadraticForm { coeffs: c, kind: QuadricKind::Hyperbolic }
    }

    /// `f(x0, x1) + x2 x3 + ... ` on PG(2m-1,q) with `f` irreducible.
    pub fn elliptic(field: &FieldSpec, m: usize) -> Self {
        let n = 2 * m;
        let mut c = vec![vec![Fe::ZERO; n]; n];
        let (a, b) = irreducible_binary_quadratic(field);
        c[0][0] = Fe::ONE;
        c[0][1] = a;
        c[1][1] = b;
        for k in 1..m {
            c[2 * k][2 * k + 1] = Fe::ONE;
        }
        QuadraticForm { coeffs: c, kind: QuadricKind::Elliptic }
    }

    pub fn kind(&self) -> QuadricKind {
        self.kind
    }

    pub fn ambient(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, field: &FieldSpec, x: &[Fe]) -> Fe {
        let n = self.coeffs.len();
        let mut acc = Fe::ZERO;
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in i..n {
                let c = self.coeffs[i][j];
                if !c.is_zero() && !x[j].is_zero() {
                    acc = field.add(acc, field.mul(c, field.mul(x[i], x[j])));
                }
            }
        }
        acc
    }

    pub fn is_singular(&self, field: &FieldSpec, x: &[Fe]) -> bool {
        self.eval(field, x).is_zero()
    }

    /// Matrix of the polar form `b(x,y) = Q(x+y) - Q(x) - Q(y)`.
    pub fn polar_matrix(&self, field: &FieldSpec) -> Vec<Vector> {
        let n = self.coeffs.len();
        let mut b = vec![vec![Fe::ZERO; n]; n];
        for i in 0..n {
            for j in i..n {
                let c = self.coeffs[i][j];
                if i == j {
                    b[i][i] = field.add(c, c);
                } else {
                    b[i][j] = field.add(b[i][j], c);
                    b[j][i] = field.add(b[j][i], c);
                }
            }
        }
        b
    }

    pub fn polar(&self, field: &FieldSpec, x: &[Fe], y: &[Fe]) -> Fe {
        linalg::dot(field, &linalg::vec_mat(field, x, &self.polar_matrix(field)), y)
    }

    /// Polar subspace with respect to `b`. For a singular point this is its tangent hyperplane.
    /// In characteristic 2 the polar form of a parabolic quadric is degenerate; the result
    /// then always contains the nucleus.
    pub fn perp(&self, field: &FieldSpec, s: &ProjectiveSubspace) -> ProjectiveSubspace {
        perp_by_matrix(field, &self.polar_matrix(field), s)
    }

    /// Radical of the polar form: the nucleus for parabolic quadrics in even characteristic,
    /// empty otherwise.
    pub fn nucleus(&self, field: &FieldSpec) -> ProjectiveSubspace {
        let n = self.ambient();
        ProjectiveSubspace::from_equations(field, n, &self.polar_matrix(field))
    }

    pub fn is_totally_singular(&self, field: &FieldSpec, s: &ProjectiveSubspace) -> bool {
        let b = s.basis();
        b.iter().all(|x| self.is_singular(field, x))
            && b.iter().enumerate().all(|(i, x)| b[i + 1..].iter().all(|y| self.polar(field, x, y).is_zero()))
    }
}

fn perp_by_matrix(field: &FieldSpec, m: &[Vector], s: &ProjectiveSubspace) -> ProjectiveSubspace {
    let rows: Vec<Vector> = s.basis().iter().map(|x| linalg::vec_mat(field, x, m)).collect();
    ProjectiveSubspace::from_equations(field, s.ambient(), &rows)
}

/// `(a, b)` with `t^2 + a t + b` irreducible over the field.
fn irreducible_binary_quadratic(field: &FieldSpec) -> (Fe, Fe) {
    for a in field.elements() {
        for b in field.nonzero() {
            let has_root =
                field.elements().any(|t| field.add(field.add(field.mul(t, t), field.mul(a, t)), b).is_zero());
            if !has_root {
                return (a, b);
            }
        }
    }
    unreachable!("every finite field has an irreducible quadratic")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SectionTag {
    NondegenerateParabolic,
    NondegenerateHyperbolic,
    NondegenerateElliptic,
    ConePointOverQ,
    ConeLineOverQ,
    TotallySingular,
    OtherDegenerate,
}

/// How a subspace meets a quadric: a nondegenerate section or a cone over one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadricSectionClass {
    pub tag: SectionTag,
    pub vertex: Option<ProjectiveSubspace>,
    pub base: Option<QuadricKind>,
    /// Number of quadric points in the subspace.
    pub points: u64,
}

impl QuadricSectionClass {
    pub fn is_cone(&self) -> bool {
        matches!(self.tag, SectionTag::ConePointOverQ | SectionTag::ConeLineOverQ)
    }
}

/// Classifies the section of the quadric `q6` of PG(6,q) by the 4-space `s`.
///
/// The singular radical (singular points of `s` orthogonal to all of `s`) gives the vertex;
/// the base type is read off the section of a complement of the vertex inside `s`.
pub fn classify_section(
    field: &FieldSpec,
    q6: &QuadraticForm,
    s: &ProjectiveSubspace,
) -> Result<QuadricSectionClass, GeometryError> {
    if s.dim() != 4 {
        return Err(GeometryError::WrongDimension { expected: 4, got: s.dim() });
    }
    let q = field.q() as u64;
    let singular: Vec<Vector> = s.points(field).into_iter().filter(|v| q6.is_singular(field, v)).collect();
    let x = singular.len() as u64;
    let polar = q6.polar_matrix(field);
    let probes: Vec<Vector> = s.basis().iter().map(|b| linalg::vec_mat(field, b, &polar)).collect();
    let radical_pts: Vec<Vector> =
        singular.iter().filter(|v| probes.iter().all(|h| linalg::dot(field, h, v).is_zero())).cloned().collect();
    let radical = ProjectiveSubspace::from_vectors(field, s.ambient(), radical_pts)?;
    let complement = complement_in(field, s, &radical);
    let base_count = complement.points(field).into_iter().filter(|v| q6.is_singular(field, v)).count() as u64;

    let (tag, base) = match radical.dim() {
        -1 if x == q * q * q + q * q + q + 1 => (SectionTag::NondegenerateParabolic, Some(QuadricKind::Parabolic)),
        0 if base_count == (q + 1) * (q + 1) => (SectionTag::ConePointOverQ, Some(QuadricKind::Hyperbolic)),
        0 if base_count == q * q + 1 => (SectionTag::ConePointOverQ, Some(QuadricKind::Elliptic)),
        1 if base_count == q + 1 => (SectionTag::ConeLineOverQ, Some(QuadricKind::Parabolic)),
        _ if x == s.point_count(q) => (SectionTag::TotallySingular, None),
        _ => (SectionTag::OtherDegenerate, None),
    };
    let vertex = matches!(tag, SectionTag::ConePointOverQ | SectionTag::ConeLineOverQ).then_some(radical);
    Ok(QuadricSectionClass { tag, vertex, base, points: x })
}

/// Oracle-style classification from (radical dimension, point count) alone; only meaningful
/// for 4-spaces of PG(6,q).
pub fn classify_section_by_count(q: u64, radical_dim: i32, points: u64) -> (SectionTag, Option<QuadricKind>) {
    let q2 = q * q;
    let q3 = q2 * q;
    match (radical_dim, points) {
        (-1, x) if x == q3 + q2 + q + 1 => (SectionTag::NondegenerateParabolic, Some(QuadricKind::Parabolic)),
        (0, x) if x == q3 + q + 1 => (SectionTag::ConePointOverQ, Some(QuadricKind::Elliptic)),
        (0, x) if x == q3 + 2 * q2 + q + 1 => (SectionTag::ConePointOverQ, Some(QuadricKind::Hyperbolic)),
        (1, x) if x == q3 + q2 + q + 1 => (SectionTag::ConeLineOverQ, Some(QuadricKind::Parabolic)),
        _ => (SectionTag::OtherDegenerate, None),
    }
}

/// A subspace of `s` meeting `inner` trivially and spanning `s` together with it.
fn complement_in(field: &FieldSpec, s: &ProjectiveSubspace, inner: &ProjectiveSubspace) -> ProjectiveSubspace {
    let mut acc: Vec<Vector> = inner.basis().to_vec();
    let mut chosen = Vec::new();
    for b in s.basis() {
        let mut trial = acc.clone();
        trial.push(b.clone());
        if linalg::rank(field, &trial) > acc.len() {
            acc = trial;
            chosen.push(b.clone());
        }
    }
    ProjectiveSubspace::from_vectors(field, s.ambient(), chosen).expect("same ambient")
}
