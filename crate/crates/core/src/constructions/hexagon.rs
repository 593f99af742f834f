//! 1-good structures of H(q) from a 4-space `S` of PG(6,q) and a quadric point `A` in `S`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{ConstructionError, GoodStructure, Host};
use crate::field::FieldSpec;
use crate::geometry::{
    classify_section, linalg, ProjectiveSpace, ProjectiveSubspace, QuadraticForm, QuadricKind, QuadricSectionClass,
    SectionTag, Vector,
};
use crate::polygon::{Family, IncidencePolygon};

/// How `S` meets the hexagon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HexCase {
    /// `S ∩ Q ≅ Q(4,q)`
    #[serde(rename = "a")]
    A,
    /// `S ∩ Q ≅ P·Q⁻(3,q)`
    #[serde(rename = "b")]
    B,
    /// `S ∩ Q ≅ P·Q⁺(3,q)`, hexagon plane of `P` inside `S`
    #[serde(rename = "c(i)")]
    CI,
    /// `S ∩ Q ≅ P·Q⁺(3,q)`, hexagon plane of `P` not inside `S`
    #[serde(rename = "c(ii)")]
    CII,
    /// `S ∩ Q ≅ m·Q(2,q)`, `m` not a hexagon line
    #[serde(rename = "d(i)")]
    DI,
    /// `S ∩ Q ≅ m·Q(2,q)`, `m` a hexagon line
    #[serde(rename = "d(ii)")]
    DII,
}

impl HexCase {
    pub fn name(self) -> &'static str {
        match self {
            HexCase::A => "a",
            HexCase::B => "b",
            HexCase::CI => "c(i)",
            HexCase::CII => "c(ii)",
            HexCase::DI => "d(i)",
            HexCase::DII => "d(ii)",
        }
    }

    /// The letter, ignoring the sub-case.
    pub fn letter(self) -> char {
        self.name().chars().next().unwrap()
    }
}

impl fmt::Display for HexCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Counts attached to a pair `(S, A)`. Filled either from the closed formulas ([`classify_case`])
/// or by direct enumeration ([`hexagon_good`]); the two must agree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HexCaseReport {
    pub case: HexCase,
    pub dim_pi_a_meet_s: i32,
    /// only for the `c` cases
    pub a_in_pi_p: Option<bool>,
    pub l2_subset_l1: bool,
    /// quadric points in `S`
    pub x: u64,
    /// hexagon lines inside `S`
    pub y: u64,
    pub l1: u64,
    pub l2: u64,
    pub l1_cap_l2: u64,
    /// `alpha`, `beta`, `gamma` are only defined when `L2` is not inside `L1`
    pub alpha: Option<u64>,
    pub beta: Option<u64>,
    pub gamma: Option<u64>,
    pub size: u64,
}

/// Per-4-space data shared by all choices of `A`.
#[derive(Debug, Clone)]
pub struct Section {
    pub space: ProjectiveSubspace,
    pub class: QuadricSectionClass,
    pub case: HexCase,
    /// the cone vertex when it is a point
    pub vertex_point: Option<usize>,
    in_s: Vec<bool>,
}

impl Section {
    /// Hexagon points lying in `S`.
    pub fn points(&self) -> Vec<usize> {
        (0..self.in_s.len()).filter(|&p| self.in_s[p]).collect()
    }

    pub fn contains_point(&self, p: usize) -> bool {
        self.in_s[p]
    }
}

/// Precomputed hexagon data for repeated constructions.
pub struct HexagonContext<'a> {
    hex: &'a IncidencePolygon,
    quadric: QuadraticForm,
    probes: Vec<Vector>,
    hex_planes: Vec<ProjectiveSubspace>,
    /// incidence-graph distance from each point to every element
    dist: Vec<Vec<u8>>,
}

impl<'a> HexagonContext<'a> {
    pub fn new(hex: &'a IncidencePolygon) -> Result<Self, ConstructionError> {
        if hex.family() != Family::Hexagon {
            return Err(ConstructionError::WrongFamily { expected: Family::Hexagon, got: hex.family() });
        }
        let field = hex.field();
        let quadric = QuadraticForm::hexagon_quadric(field);
        let polar = quadric.polar_matrix(field);
        let probes = hex.points().iter().map(|v| linalg::vec_mat(field, v, &polar)).collect();
        let hex_planes = (0..hex.num_points())
            .map(|p| {
                let vs = hex.lines_through(p).iter().flat_map(|&l| hex.line(l as usize).basis().to_vec()).collect();
                ProjectiveSubspace::from_vectors(field, 6, vs).expect("same ambient")
            })
            .collect();
        let graph = hex.graph();
        let dist = (0..hex.num_points())
            .map(|p| graph.distances_from(p).into_iter().map(|d| d.min(255) as u8).collect())
            .collect();
        Ok(HexagonContext { hex, quadric, probes, hex_planes, dist })
    }

    pub fn hex(&self) -> &IncidencePolygon {
        self.hex
    }

    pub fn field(&self) -> &FieldSpec {
        self.hex.field()
    }

    pub fn hex_plane(&self, p: usize) -> &ProjectiveSubspace {
        &self.hex_planes[p]
    }

    pub fn distance(&self, p: usize, element: usize) -> u8 {
        self.dist[p][element]
    }

    fn orthogonal(&self, a: usize, v: &[crate::field::Fe]) -> bool {
        linalg::dot(self.field(), &self.probes[a], v).is_zero()
    }

    /// Classifies `S` and records which hexagon points it contains.
    pub fn section(&self, s: &ProjectiveSubspace) -> Result<Section, ConstructionError> {
        let field = self.field();
        let class = classify_section(field, &self.quadric, s)?;
        let in_s: Vec<bool> = self.hex.points().iter().map(|v| s.contains_vector(field, v)).collect();
        let vertex_point = match (&class.vertex, class.tag) {
            (Some(v), SectionTag::ConePointOverQ) => self.hex.point_index(&v.basis()[0]),
            _ => None,
        };
        let case = match (class.tag, class.base) {
            (SectionTag::NondegenerateParabolic, _) => HexCase::A,
            (SectionTag::ConePointOverQ, Some(QuadricKind::Elliptic)) => HexCase::B,
            (SectionTag::ConePointOverQ, Some(QuadricKind::Hyperbolic)) => {
                let p = vertex_point.expect("cone vertex is a quadric point");
                if s.contains(field, &self.hex_planes[p]) {
                    HexCase::CI
                } else {
                    HexCase::CII
                }
            }
            (SectionTag::ConeLineOverQ, _) => {
                let m = class.vertex.as_ref().expect("cone has a vertex");
                if self.hex.line_index(m).is_some() {
                    HexCase::DII
                } else {
                    HexCase::DI
                }
            }
            (tag, base) => return Err(ConstructionError::UnexpectedSection(format!("{tag:?} over {base:?}"))),
        };
        Ok(Section { space: s.clone(), class, case, vertex_point, in_s })
    }

    /// `(dim(π_A ∩ S), A ∈ π_P, S ⊆ T_A)` for a point `A` of `S`.
    fn position(&self, sec: &Section, a: usize) -> Result<(i32, Option<bool>, bool), ConstructionError> {
        if !sec.in_s[a] {
            return Err(ConstructionError::PointNotInSection);
        }
        let field = self.field();
        let dim = self.hex_planes[a].meet(field, &sec.space)?.dim();
        let a_in_pi_p = match sec.case {
            HexCase::CI | HexCase::CII => {
                let p = sec.vertex_point.expect("c cases have a point vertex");
                Some(self.hex_planes[p].contains_vector(field, self.hex.point(a)))
            }
            _ => None,
        };
        let in_tangent = sec.space.basis().iter().all(|v| self.orthogonal(a, v));
        Ok((dim, a_in_pi_p, in_tangent))
    }

    /// Counts predicted by the case analysis.
    pub fn predict(&self, sec: &Section, a: usize) -> Result<HexCaseReport, ConstructionError> {
        let (dim, a_in_pi_p, in_tangent) = self.position(sec, a)?;
        let q = self.hex.q() as u64;
        let (q2, q3) = (q * q, q * q * q);
        let x = match sec.case {
            HexCase::A | HexCase::DI | HexCase::DII => q3 + q2 + q + 1,
            HexCase::B => q3 + q + 1,
            HexCase::CI | HexCase::CII => q3 + 2 * q2 + q + 1,
        };
        let y = match sec.case {
            HexCase::A | HexCase::DI => q + 1,
            HexCase::B => 1,
            HexCase::CI => (q + 1) * (q + 1),
            HexCase::CII => 2 * q + 1,
            HexCase::DII => q2 + q + 1,
        };
        let l1 = x * (q + 1) - y * q;
        let l2 = q3 + q2 + q + 1;
        let subset = dim == 2 || in_tangent;
        let (alpha, gamma, beta) = if subset {
            (None, None, None)
        } else {
            let (al, ga, be) = match (sec.case.letter(), dim, a_in_pi_p) {
                ('a', 1, _) => (q2, q, q2),
                ('a', 0, _) => (0, q + 1, q2 + q),
                ('b', 1, _) => (q2, 0, 0),
                ('b', 0, _) => (0, 1, q),
                ('c', 0, _) => (0, 2 * q + 1, 2 * q2 + q),
                ('c', 1, Some(false)) => (q2, 2 * q, q2),
                // every ideal line through A in S here lies in a hexagon plane on the hexagon line
                // through A, so none of them adds to beta
                ('c', 1, Some(true)) => (q2, 2 * q, 0),
                ('d', 0, _) => (0, q + 1, q2 + q),
                ('d', 1, _) => (q2, q, 0),
                other => return Err(ConstructionError::UnexpectedSection(format!("no count for {other:?}"))),
            };
            (Some(al), Some(ga), Some(be))
        };
        let l1_cap_l2 = match (alpha, beta) {
            (Some(al), Some(be)) => q + 1 + al + be,
            _ => l2,
        };
        Ok(HexCaseReport {
            case: sec.case,
            dim_pi_a_meet_s: dim,
            a_in_pi_p,
            l2_subset_l1: subset,
            x,
            y,
            l1,
            l2,
            l1_cap_l2,
            alpha,
            beta,
            gamma,
            size: l1 + l2 - l1_cap_l2,
        })
    }

    /// Builds the structure and counts everything directly.
    pub fn construct(&self, sec: &Section, a: usize) -> Result<(GoodStructure, HexCaseReport), ConstructionError> {
        let (dim, a_in_pi_p, _) = self.position(sec, a)?;
        let hex = self.hex;
        let field = self.field();
        let np = hex.num_points();
        let nl = hex.num_lines();
        let q = hex.q() as u64;
        let d = &self.dist[a];
        let in_s = &sec.in_s;
        let on_pi_a: Vec<bool> = hex.points().iter().map(|v| self.hex_planes[a].contains_vector(field, v)).collect();

        let mut p_in = vec![false; np];
        for x in 0..np {
            let in_p1 = d[x] <= 4;
            let in_p3 = !in_s[x] && {
                let seen: usize = hex
                    .lines_through(x)
                    .iter()
                    .map(|&l| {
                        hex.points_on(l as usize).iter().filter(|&&y| y as usize != x && in_s[y as usize]).count()
                    })
                    .sum();
                seen != 1
            };
            p_in[x] = in_p1 || in_s[x] || in_p3;
        }
        let meets = |l: usize, mask: &[bool]| hex.points_on(l).iter().any(|&y| mask[y as usize]);
        let l1: Vec<bool> = (0..nl).map(|l| meets(l, in_s)).collect();
        let l2: Vec<bool> = (0..nl).map(|l| meets(l, &on_pi_a)).collect();
        let l_in: Vec<bool> = (0..nl).map(|l| l1[l] || l2[l]).collect();
        let count = |m: &[bool]| m.iter().filter(|&&b| b).count() as u64;
        let both: Vec<bool> = (0..nl).map(|l| l1[l] && l2[l]).collect();
        let subset = (0..nl).all(|l| !l2[l] || l1[l]);

        let x = count(in_s);
        let y = (0..nl).filter(|&l| hex.points_on(l).iter().all(|&p| in_s[p as usize])).count() as u64;
        let (alpha, beta, gamma) = if subset {
            (None, None, None)
        } else {
            let corner: Vec<bool> = (0..np).map(|p| p != a && on_pi_a[p] && in_s[p]).collect();
            let type2: Vec<bool> = (0..nl).map(|l| !hex.incident(a, l) && meets(l, &corner)).collect();
            let alpha = count(&type2);
            let ideal_points = (0..np)
                .filter(|&p| p != a && in_s[p] && self.orthogonal(a, hex.point(p)) && hex.line_through(a, p).is_none())
                .count() as u64;
            let type3: BTreeSet<usize> = (0..np)
                .filter(|&p| in_s[p] && d[p] == 4)
                .map(|p| {
                    hex.lines_through(p)
                        .iter()
                        .map(|&l| l as usize)
                        .find(|&l| d[np + l] == 3)
                        .expect("a point at distance 4 has a line at distance 3")
                })
                .filter(|&l| !hex.incident(a, l) && !type2[l])
                .collect();
            (Some(alpha), Some(type3.len() as u64), Some(ideal_points / q))
        };
        let report = HexCaseReport {
            case: sec.case,
            dim_pi_a_meet_s: dim,
            a_in_pi_p,
            l2_subset_l1: subset,
            x,
            y,
            l1: count(&l1),
            l2: count(&l2),
            l1_cap_l2: count(&both),
            alpha,
            beta,
            gamma,
            size: count(&p_in),
        };
        Ok((GoodStructure::from_masks(Host::of(hex), 1, &p_in, &l_in), report))
    }
}

/// The structure built from `(S, A)`, with directly counted case data.
pub fn hexagon_good(
    hex: &IncidencePolygon,
    s: &ProjectiveSubspace,
    a: usize,
) -> Result<(GoodStructure, HexCaseReport), ConstructionError> {
    let ctx = HexagonContext::new(hex)?;
    let sec = ctx.section(s)?;
    ctx.construct(&sec, a)
}

/// Case data for `(S, A)` predicted from the case analysis alone.
pub fn classify_case(
    hex: &IncidencePolygon,
    s: &ProjectiveSubspace,
    a: usize,
) -> Result<HexCaseReport, ConstructionError> {
    let ctx = HexagonContext::new(hex)?;
    let sec = ctx.section(s)?;
    ctx.predict(&sec, a)
}

/// Sizes `q⁴+q³+q²+q+1+k` obtainable from the hexagon construction.
pub fn achievable_sizes(q: u64) -> BTreeSet<u64> {
    let (q2, q3) = (q * q, q * q * q);
    let base = q2 * q2 + q3 + q2 + q + 1;
    [0, q3 - q, q3, q3 + q2 - q, 2 * q3 - q2 - q, 2 * q3 - q2, 2 * q3 - q, 2 * q3, 3 * q3 - q2 - q, 3 * q3 - q2, 3 * q3]
        .into_iter()
        .map(|k| base + k)
        .collect()
}

/// All 4-spaces of PG(6,q), as kernels of the lines of the dual space, in canonical order.
pub fn all_four_spaces(field: &FieldSpec) -> Vec<ProjectiveSubspace> {
    let space = ProjectiveSpace::new(6, std::sync::Arc::new(field.clone()));
    let pts = space.all_coords();
    let mut lines: HashSet<ProjectiveSubspace> = HashSet::new();
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let l =
                ProjectiveSubspace::from_vectors(field, 6, vec![pts[i].clone(), pts[j].clone()]).expect("same ambient");
            lines.insert(l);
        }
    }
    let mut spaces: Vec<ProjectiveSubspace> =
        lines.into_iter().map(|l| ProjectiveSubspace::from_equations(field, 6, l.basis())).collect();
    spaces.sort();
    spaces
}

/// A uniformly random 4-space of PG(6,q).
pub fn random_four_space<R: Rng>(field: &FieldSpec, rng: &mut R) -> ProjectiveSubspace {
    loop {
        let eqs: Vec<Vector> =
            (0..2).map(|_| (0..7).map(|_| crate::field::Fe(rng.gen_range(0..field.q()) as u16)).collect()).collect();
        if linalg::rank(field, &eqs) == 2 {
            return ProjectiveSubspace::from_equations(field, 6, &eqs);
        }
    }
}
