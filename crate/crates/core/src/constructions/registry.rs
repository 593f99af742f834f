use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    lift_w3, planar_one_good, random_four_space, ConstructionError, GoodStructure, HexagonContext, PlanarAnchor,
    PlanarKind,
};
use crate::field::Fe;
use crate::geometry::{linalg, ProjectiveSubspace, Vector};
use crate::polygon::{build_pg2, Family, IncidencePolygon};

/// Parameters shared by all constructions; each reads the fields it needs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<PlanarKind>,
    /// planar anchor point, lift point `P`, or hexagon point `A`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<usize>,
    /// planar anchor line
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    /// lift: the point of the abstract plane sent to `P`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<usize>,
    /// hexagon: two independent linear forms cutting out `S`, as field element indices
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equations: Option<Vec<Vec<u16>>>,
    #[serde(default)]
    pub seed: u64,
}

/// Where a structure came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub construction: String,
    pub params: ConstructionParams,
}

/// A named construction of 1-good structures in one polygon family.
pub trait Construction: Send + Sync {
    fn name(&self) -> &'static str;
    fn family(&self) -> Family;
    /// Builds the structure; the returned parameters have every default made explicit.
    fn build(
        &self,
        host: &IncidencePolygon,
        params: &ConstructionParams,
    ) -> Result<(GoodStructure, ConstructionParams), ConstructionError>;
}

fn check_family(c: &dyn Construction, host: &IncidencePolygon) -> Result<(), ConstructionError> {
    if host.family() != c.family() {
        return Err(ConstructionError::WrongFamily { expected: c.family(), got: host.family() });
    }
    Ok(())
}

#[derive(Debug, Default, Clone, Copy)]
pub struct PlanarConstruction;

impl Construction for PlanarConstruction {
    fn name(&self) -> &'static str {
        "planar"
    }

    fn family(&self) -> Family {
        Family::Pg2
    }

    fn build(
        &self,
        host: &IncidencePolygon,
        params: &ConstructionParams,
    ) -> Result<(GoodStructure, ConstructionParams), ConstructionError> {
        check_family(self, host)?;
        let kind = params.kind.unwrap_or(PlanarKind::PointOnLine);
        let anchor = match (params.point, params.line) {
            (Some(point), Some(line)) => Some(PlanarAnchor { point, line }),
            (None, None) => None,
            _ => return Err(ConstructionError::InvalidParams("give both point and line, or neither".into())),
        };
        let g = planar_one_good(host, kind, anchor)?;
        Ok((g, ConstructionParams { kind: Some(kind), ..params.clone() }))
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct LiftConstruction;

impl Construction for LiftConstruction {
    fn name(&self) -> &'static str {
        "lift"
    }

    fn family(&self) -> Family {
        Family::W3
    }

    fn build(
        &self,
        host: &IncidencePolygon,
        params: &ConstructionParams,
    ) -> Result<(GoodStructure, ConstructionParams), ConstructionError> {
        check_family(self, host)?;
        let plane = build_pg2(host.q())?;
        let kind = params.kind.unwrap_or(PlanarKind::PointOnLine);
        let planar = planar_one_good(&plane, kind, None)?;
        let p = params.point.unwrap_or(0);
        let a = params.anchor.unwrap_or(planar.points[0]);
        let g = lift_w3(host, p, &plane, &planar, a)?;
        Ok((g, ConstructionParams { kind: Some(kind), point: Some(p), anchor: Some(a), ..params.clone() }))
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct HexagonConstruction;

impl Construction for HexagonConstruction {
    fn name(&self) -> &'static str {
        "hexagon"
    }

    fn family(&self) -> Family {
        Family::Hexagon
    }

    fn build(
        &self,
        host: &IncidencePolygon,
        params: &ConstructionParams,
    ) -> Result<(GoodStructure, ConstructionParams), ConstructionError> {
        check_family(self, host)?;
        let ctx = HexagonContext::new(host)?;
        let field = ctx.field();
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let s = match &params.equations {
            Some(eqs) => {
                let rows: Vec<Vector> = eqs.iter().map(|r| r.iter().map(|&c| Fe(c)).collect()).collect();
                let ok = rows.len() == 2
                    && rows.iter().all(|r| r.len() == 7 && r.iter().all(|c| (c.0 as u32) < field.q()))
                    && linalg::rank(field, &rows) == 2;
                if !ok {
                    return Err(ConstructionError::InvalidParams("need two independent forms of length 7".into()));
                }
                ProjectiveSubspace::from_equations(field, 6, &rows)
            }
            None => random_four_space(field, &mut rng),
        };
        let sec = ctx.section(&s)?;
        let a = match params.point {
            Some(a) => a,
            None => *sec.points().choose(&mut rng).expect("every 4-space meets the quadric"),
        };
        let (g, _) = ctx.construct(&sec, a)?;
        let eqs = s.equations(field).iter().map(|r| r.iter().map(|c| c.0).collect()).collect();
        Ok((g, ConstructionParams { point: Some(a), equations: Some(eqs), ..params.clone() }))
    }
}

/// Constructions by name.
#[derive(Clone, Default)]
pub struct ConstructionRegistry {
    entries: BTreeMap<&'static str, Arc<dyn Construction>>,
}

impl ConstructionRegistry {
    pub fn standard() -> Self {
        let mut r = ConstructionRegistry::default();
        r.register(Arc::new(PlanarConstruction));
        r.register(Arc::new(LiftConstruction));
        r.register(Arc::new(HexagonConstruction));
        r
    }

    pub fn register(&mut self, c: Arc<dyn Construction>) {
        self.entries.insert(c.name(), c);
    }

    pub fn get(&self, name: &str) -> Result<&Arc<dyn Construction>, ConstructionError> {
        self.entries.get(name).ok_or_else(|| ConstructionError::Unknown(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }

    /// Runs a construction and records its provenance.
    pub fn run(
        &self,
        name: &str,
        host: &IncidencePolygon,
        params: &ConstructionParams,
    ) -> Result<(GoodStructure, Provenance), ConstructionError> {
        let c = self.get(name)?;
        let (g, params) = c.build(host, params)?;
        Ok((g, Provenance { construction: c.name().to_string(), params }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::verify_tgood;
    use crate::polygon::{build_hexagon, build_w3};

    #[test]
    fn registry_runs_each_construction() {
        let r = ConstructionRegistry::standard();
        assert_eq!(r.names(), vec!["hexagon", "lift", "planar"]);
        let w = build_w3(3).unwrap();
        let (g, prov) = r.run("lift", &w, &ConstructionParams::default()).unwrap();
        assert_eq!(g.size(), 13);
        assert_eq!(prov.params.point, Some(0));
        assert!(verify_tgood(&w, &g).valid);
        let (h, _) = build_hexagon(2).unwrap();
        let (g, prov) = r.run("hexagon", &h, &ConstructionParams { seed: 3, ..Default::default() }).unwrap();
        assert!(verify_tgood(&h, &g).valid);
        // replaying the recorded parameters gives the same structure
        let (again, _) = r.run("hexagon", &h, &prov.params).unwrap();
        assert_eq!(g, again);
        assert!(matches!(
            r.run("planar", &w, &ConstructionParams::default()),
            Err(ConstructionError::WrongFamily { .. })
        ));
    }
}
