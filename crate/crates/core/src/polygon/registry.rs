use std::collections::BTreeMap;
use std::sync::Arc;

use super::{build_hexagon, build_pg2, build_w3, Family, IncidencePolygon, PolygonError};

/// A named way of building a family of generalized polygons.
pub trait PolygonFamily: Send + Sync {
    fn name(&self) -> &'static str;
    fn family(&self) -> Family;
    fn build(&self, q: u32) -> Result<IncidencePolygon, PolygonError>;

    fn gon(&self) -> u32 {
        self.family().gon()
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct Pg2Family;

impl PolygonFamily for Pg2Family {
    fn name(&self) -> &'static str {
        "pg2"
    }

    fn family(&self) -> Family {
        Family::Pg2
    }

    fn build(&self, q: u32) -> Result<IncidencePolygon, PolygonError> {
        build_pg2(q)
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct W3Family;

impl PolygonFamily for W3Family {
    fn name(&self) -> &'static str {
        "w3"
    }

    fn family(&self) -> Family {
        Family::W3
    }

    fn build(&self, q: u32) -> Result<IncidencePolygon, PolygonError> {
        build_w3(q)
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct HexagonFamily;

impl PolygonFamily for HexagonFamily {
    fn name(&self) -> &'static str {
        "hexagon"
    }

    fn family(&self) -> Family {
        Family::Hexagon
    }

    fn build(&self, q: u32) -> Result<IncidencePolygon, PolygonError> {
        build_hexagon(q).map(|(h, _)| h)
    }
}

/// Polygon families by name.
#[derive(Clone, Default)]
pub struct PolygonRegistry {
    entries: BTreeMap<&'static str, Arc<dyn PolygonFamily>>,
}

impl PolygonRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The three classical families.
    pub fn standard() -> Self {
        let mut r = Self::empty();
        r.register(Arc::new(Pg2Family));
        r.register(Arc::new(W3Family));
        r.register(Arc::new(HexagonFamily));
        r
    }

    pub fn register(&mut self, family: Arc<dyn PolygonFamily>) {
        self.entries.insert(family.name(), family);
    }

    pub fn get(&self, name: &str) -> Result<&Arc<dyn PolygonFamily>, PolygonError> {
        self.entries.get(name).ok_or_else(|| PolygonError::UnknownFamily(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}
