//! Points and subspaces of PG(n,q), bilinear and quadratic forms, and quadric sections.

mod forms;
pub mod linalg;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Fe, FieldSpec};
pub use forms::{
    classify_section, classify_section_by_count, QuadraticForm, QuadricKind, QuadricSectionClass, SectionTag,
    SymplecticForm,
};
pub use linalg::Vector;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("subspaces live in different ambient spaces (PG({0},q) and PG({1},q))")]
    MixedAmbient(usize, usize),
    #[error("expected a subspace of projective dimension {expected}, got {got}")]
    WrongDimension { expected: i32, got: i32 },
    #[error("vector has length {got}, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("zero vector does not define a point")]
    ZeroVector,
}

/// A point of PG(n,q): canonical coordinates plus its position in the enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProjectivePoint {
    pub index: usize,
    pub coords: Vector,
}

/// The points of PG(n,q) in lexicographic order of canonical coordinates.
#[derive(Debug, Clone)]
pub struct ProjectiveSpace {
    n: usize,
    field: Arc<FieldSpec>,
    points: Vec<Vector>,
    lookup: Vec<u32>,
}

impl ProjectiveSpace {
    pub fn new(n: usize, field: Arc<FieldSpec>) -> Self {
        assert!(n >= 1, "projective dimension must be at least 1");
        let q = field.q() as usize;
        let total = q.pow(n as u32 + 1);
        let mut points = Vec::with_capacity((total - 1) / (q - 1));
        for code in 1..total {
            let v = unpack_vector(code, q, n + 1);
            if v.iter().find(|x| !x.is_zero()) == Some(&Fe::ONE) {
                points.push(v);
            }
        }
        points.sort();
        let mut lookup = vec![u32::MAX; total];
        for (i, p) in points.iter().enumerate() {
            lookup[pack_vector(p, q)] = i as u32;
        }
        ProjectiveSpace { n, field, points, lookup }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn coords(&self, index: usize) -> &Vector {
        &self.points[index]
    }

    pub fn points(&self) -> impl Iterator<Item = ProjectivePoint> + '_ {
        self.points.iter().enumerate().map(|(index, c)| ProjectivePoint { index, coords: c.clone() })
    }

    pub fn all_coords(&self) -> &[Vector] {
        &self.points
    }

    /// Index of the point spanned by `v` (any nonzero representative).
    pub fn index_of(&self, v: &[Fe]) -> Option<usize> {
        if v.len() != self.n + 1 {
            return None;
        }
        let mut w = v.to_vec();
        if !linalg::normalize(&self.field, &mut w) {
            return None;
        }
        let i = self.lookup[pack_vector(&w, self.field.q() as usize)];
        (i != u32::MAX).then_some(i as usize)
    }
}

/// Enumerates PG(n,q) as an ordered list of canonical points.
pub fn enumerate_points(n: usize, field: Arc<FieldSpec>) -> Vec<ProjectivePoint> {
    ProjectiveSpace::new(n, field).points().collect()
}

fn pack_vector(v: &[Fe], q: usize) -> usize {
    v.iter().fold(0, |acc, x| acc * q + x.index())
}

fn unpack_vector(mut code: usize, q: usize, len: usize) -> Vector {
    let mut v = vec![Fe::ZERO; len];
    for slot in v.iter_mut().rev() {
        *slot = Fe((code % q) as u16);
        code /= q;
    }
    v
}

/// A subspace of PG(n,q), stored as the RREF of a spanning set so that equal subspaces have
/// identical representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjectiveSubspace {
    ambient: usize,
    basis: Vec<Vector>,
}

impl ProjectiveSubspace {
    pub fn empty(ambient: usize) -> Self {
        ProjectiveSubspace { ambient, basis: Vec::new() }
    }

    pub fn whole(field: &FieldSpec, ambient: usize) -> Self {
        let basis = (0..=ambient)
            .map(|i| {
                let mut v = vec![Fe::ZERO; ambient + 1];
                v[i] = Fe::ONE;
                v
            })
            .collect();
        Self::from_vectors(field, ambient, basis).expect("unit vectors have the right length")
    }

    pub fn from_vectors(field: &FieldSpec, ambient: usize, mut vectors: Vec<Vector>) -> Result<Self, GeometryError> {
        if let Some(bad) = vectors.iter().find(|v| v.len() != ambient + 1) {
            return Err(GeometryError::WrongLength { expected: ambient + 1, got: bad.len() });
        }
        linalg::rref(field, &mut vectors);
        Ok(ProjectiveSubspace { ambient, basis: vectors })
    }

    pub fn point(field: &FieldSpec, v: &[Fe]) -> Result<Self, GeometryError> {
        if v.iter().all(|x| x.is_zero()) {
            return Err(GeometryError::ZeroVector);
        }
        Self::from_vectors(field, v.len() - 1, vec![v.to_vec()])
    }

    /// Equations `{x : h · x = 0}` given by the rows of `dual`.
    pub fn from_equations(field: &FieldSpec, ambient: usize, dual: &[Vector]) -> Self {
        ProjectiveSubspace { ambient, basis: linalg::null_space(field, dual, ambient + 1) }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// Projective dimension; the empty subspace has dimension -1.
    pub fn dim(&self) -> i32 {
        self.basis.len() as i32 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Linear functionals vanishing on the subspace.
    pub fn equations(&self, field: &FieldSpec) -> Vec<Vector> {
        if self.basis.is_empty() {
            return ProjectiveSubspace::whole(field, self.ambient).basis;
        }
        linalg::null_space(field, &self.basis, self.ambient + 1)
    }

    fn check_ambient(&self, other: &Self) -> Result<(), GeometryError> {
        if self.ambient != other.ambient {
            Err(GeometryError::MixedAmbient(self.ambient, other.ambient))
        } else {
            Ok(())
        }
    }

    pub fn join(&self, field: &FieldSpec, other: &Self) -> Result<Self, GeometryError> {
        self.check_ambient(other)?;
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Self::from_vectors(field, self.ambient, rows)
    }

    pub fn meet(&self, field: &FieldSpec, other: &Self) -> Result<Self, GeometryError> {
        self.check_ambient(other)?;
        if self.is_empty() || other.is_empty() {
            return Ok(Self::empty(self.ambient));
        }
        let mut eqs = self.equations(field);
        eqs.extend(other.equations(field));
        Ok(Self::from_equations(field, self.ambient, &eqs))
    }

    pub fn contains_vector(&self, field: &FieldSpec, v: &[Fe]) -> bool {
        // reduce v against the RREF rows
        let mut w = v.to_vec();
        for row in &self.basis {
            let pivot = row.iter().position(|x| !x.is_zero()).expect("rref rows are nonzero");
            let c = w[pivot];
            if c.is_zero() {
                continue;
            }
            for j in 0..w.len() {
                w[j] = field.sub(w[j], field.mul(c, row[j]));
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    pub fn contains(&self, field: &FieldSpec, other: &Self) -> bool {
        other.basis.iter().all(|v| self.contains_vector(field, v))
    }

    /// Canonical coordinates of every point of the subspace.
    pub fn points(&self, field: &FieldSpec) -> Vec<Vector> {
        linalg::projective_points_of(field, &self.basis)
    }

    /// Number of points, `(q^(d+1) - 1)/(q - 1)`.
    pub fn point_count(&self, q: u64) -> u64 {
        (q.pow(self.basis.len() as u32) - 1) / (q - 1)
    }
}

/// Span of a set of points given by coordinates.
pub fn span(field: &FieldSpec, ambient: usize, pts: &[Vector]) -> Result<ProjectiveSubspace, GeometryError> {
    ProjectiveSubspace::from_vectors(field, ambient, pts.to_vec())
}

/// Grassmann coordinates `p_ij = x_i y_j - x_j y_i` (i < j) of a line, normalized so that
/// the first nonzero entry is 1.
pub fn plucker(field: &FieldSpec, line: &ProjectiveSubspace) -> Result<Vector, GeometryError> {
    if line.dim() != 1 {
        return Err(GeometryError::WrongDimension { expected: 1, got: line.dim() });
    }
    let mut p = raw_plucker(field, &line.basis[0], &line.basis[1]);
    linalg::normalize(field, &mut p);
    Ok(p)
}

/// Unnormalized Plücker vector of the pair `(x, y)`, indices in lexicographic `(i, j)` order.
pub fn raw_plucker(field: &FieldSpec, x: &[Fe], y: &[Fe]) -> Vector {
    let n = x.len();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(field.sub(field.mul(x[i], y[j]), field.mul(x[j], y[i])));
        }
    }
    out
}

/// Position of `p_ij` in the output of [`plucker`] for a vector of length `n`.
pub fn plucker_index(n: usize, i: usize, j: usize) -> usize {
    assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn field(q: u32) -> Arc<FieldSpec> {
        Arc::new(FieldSpec::of_order(q).unwrap())
    }

    fn random_vector(f: &FieldSpec, len: usize, rng: &mut impl Rng) -> Vector {
        loop {
            let v: Vector = (0..len).map(|_| Fe(rng.gen_range(0..f.q()) as u16)).collect();
            if v.iter().any(|x| !x.is_zero()) {
                return v;
            }
        }
    }

    fn random_subspace(f: &FieldSpec, n: usize, k: usize, rng: &mut impl Rng) -> ProjectiveSubspace {
        loop {
            let vs: Vec<Vector> = (0..k).map(|_| random_vector(f, n + 1, rng)).collect();
            let s = ProjectiveSubspace::from_vectors(f, n, vs).unwrap();
            if s.basis().len() == k {
                return s;
            }
        }
    }

    #[test]
    fn point_counts() {
        assert_eq!(enumerate_points(2, field(2)).len(), 7);
        assert_eq!(enumerate_points(3, field(3)).len(), 40);
        assert_eq!(enumerate_points(6, field(2)).len(), 127);
        assert_eq!(enumerate_points(2, field(4)).len(), 21);
    }

    #[test]
    fn enumeration_is_lexicographic_and_indexed() {
        let space = ProjectiveSpace::new(3, field(3));
        let pts = space.all_coords();
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        for (i, p) in pts.iter().enumerate() {
            assert_eq!(space.index_of(p), Some(i));
            let f = space.field();
            let scaled: Vector = p.iter().map(|&x| f.mul(x, Fe(2))).collect();
            assert_eq!(space.index_of(&scaled), Some(i));
        }
        assert_eq!(space.index_of(&[Fe::ZERO; 4]), None);
    }

    #[test]
    fn span_and_meet_basics() {
        let f = field(3);
        let space = ProjectiveSpace::new(3, f.clone());
        let a = space.coords(0).clone();
        let b = space.coords(5).clone();
        let line = span(&f, 3, &[a.clone(), b.clone()]).unwrap();
        assert_eq!(line.dim(), 1);
        assert_eq!(line.points(&f).len(), 4);
        assert!(line.contains_vector(&f, &a));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let p1 = random_subspace(&f, 3, 3, &mut rng);
            let p2 = random_subspace(&f, 3, 3, &mut rng);
            assert!(p1.meet(&f, &p2).unwrap().dim() >= 1);
        }
        let other = ProjectiveSubspace::empty(4);
        assert_eq!(line.meet(&f, &other), Err(GeometryError::MixedAmbient(3, 4)));
    }

    #[test]
    fn meet_of_disjoint_is_empty() {
        let f = field(2);
        let e = |i: usize| {
            let mut v = vec![Fe::ZERO; 4];
            v[i] = Fe::ONE;
            v
        };
        let l1 = span(&f, 3, &[e(0), e(1)]).unwrap();
        let l2 = span(&f, 3, &[e(2), e(3)]).unwrap();
        let m = l1.meet(&f, &l2).unwrap();
        assert_eq!(m.dim(), -1);
        assert!(m.is_empty());
    }

    #[test]
    fn grassmann_identity_in_pg62() {
        // dim(span) + dim(meet) = dim(a) + dim(b); the dimension formula is an independent
        // check on join and meet.
        let f = field(2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let ka = rng.gen_range(1..=5);
            let kb = rng.gen_range(1..=5);
            let a = random_subspace(&f, 6, ka, &mut rng);
            let b = random_subspace(&f, 6, kb, &mut rng);
            let j = a.join(&f, &b).unwrap();
            let m = a.meet(&f, &b).unwrap();
            assert_eq!(j.dim() + m.dim(), a.dim() + b.dim());
            assert!(j.contains(&f, &a) && j.contains(&f, &b));
            assert!(a.contains(&f, &m) && b.contains(&f, &m));
            // meet by brute force over points
            let brute = a.points(&f).into_iter().filter(|p| b.contains_vector(&f, p)).count() as u64;
            assert_eq!(brute, if m.is_empty() { 0 } else { m.point_count(2) });
        }
    }

    #[test]
    fn canonical_form_is_injective() {
        let f = field(3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let s = random_subspace(&f, 4, 3, &mut rng);
            // a different spanning set of the same subspace
            let pts = s.points(&f);
            let mut picks = Vec::new();
            while ProjectiveSubspace::from_vectors(&f, 4, picks.clone()).unwrap().basis().len() < 3 {
                picks.push(pts[rng.gen_range(0..pts.len())].clone());
            }
            assert_eq!(ProjectiveSubspace::from_vectors(&f, 4, picks).unwrap(), s);
        }
    }

    #[test]
    fn plucker_of_coordinate_line() {
        let f = field(3);
        let e0 = vec![Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ZERO];
        let e1 = vec![Fe::ZERO, Fe::ONE, Fe::ZERO, Fe::ZERO];
        let line = span(&f, 3, &[e0.clone(), e1]).unwrap();
        let p = plucker(&f, &line).unwrap();
        assert_eq!(p, vec![Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ZERO]);
        let point = ProjectiveSubspace::point(&f, &e0).unwrap();
        assert_eq!(plucker(&f, &point), Err(GeometryError::WrongDimension { expected: 1, got: 0 }));
    }

    #[test]
    fn plucker_invariant_under_rebasing() {
        let f = field(5);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let line = random_subspace(&f, 3, 2, &mut rng);
        let canon = plucker(&f, &line).unwrap();
        let b = line.basis();
        let mut seen = 0;
        while seen < 100 {
            let (a, c, d, e) =
                (Fe(rng.gen_range(0..5)), Fe(rng.gen_range(0..5)), Fe(rng.gen_range(0..5)), Fe(rng.gen_range(0..5)));
            if f.sub(f.mul(a, e), f.mul(c, d)).is_zero() {
                continue;
            }
            let x: Vector = (0..4).map(|j| f.add(f.mul(a, b[0][j]), f.mul(c, b[1][j]))).collect();
            let y: Vector = (0..4).map(|j| f.add(f.mul(d, b[0][j]), f.mul(e, b[1][j]))).collect();
            let mut raw = raw_plucker(&f, &x, &y);
            linalg::normalize(&f, &mut raw);
            assert_eq!(raw, canon);
            seen += 1;
        }
    }

    #[test]
    fn plucker_quadric_relation_pg33() {
        let f = field(3);
        let space = ProjectiveSpace::new(3, f.clone());
        let pts = space.all_coords();
        let idx = |i, j| plucker_index(4, i, j);
        let mut lines = std::collections::BTreeSet::new();
        for a in 0..pts.len() {
            for b in (a + 1)..pts.len() {
                lines.insert(span(&f, 3, &[pts[a].clone(), pts[b].clone()]).unwrap());
            }
        }
        assert_eq!(lines.len(), 130);
        for line in &lines {
            let p = plucker(&f, line).unwrap();
            let rel = f.add(
                f.sub(f.mul(p[idx(0, 1)], p[idx(2, 3)]), f.mul(p[idx(0, 2)], p[idx(1, 3)])),
                f.mul(p[idx(0, 3)], p[idx(1, 2)]),
            );
            assert!(rel.is_zero());
        }
    }
}
