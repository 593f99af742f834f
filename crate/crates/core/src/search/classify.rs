use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::constructions::{lift_w3, planar_one_good, GoodStructure, Host, PlanarKind};
use crate::permgroup::{OrbitMultiset, PermGroup, PermGroupError, Permutation, StabilizerMethod};
use crate::polygon::{build_pg2, Family, IncidencePolygon};

/// One orbit of structures under the group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionClass {
    /// the lexicographically least member, as points and lines
    pub representative: GoodStructure,
    pub size: usize,
    /// vertices of the complement subgraph
    pub subgraph_size: usize,
    pub stabilizer_order: u128,
    pub orbit_length: u128,
    pub subgraph_orbits: OrbitMultiset,
    pub structure_orbits: OrbitMultiset,
    /// some lift of a planar structure lies in this orbit
    pub from_lift: bool,
    /// how many of the input solutions fell in this class
    pub hits: usize,
    /// index of the class holding the dual structures, when a duality was given and that class
    /// was among the solutions; the class's own index when it is self-dual
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_class: Option<usize>,
    /// stabilizer order in the group extended by the duality
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full_stabilizer_order: Option<u128>,
}

/// Lifts of every planar 1-good structure through point 0 of W(3,q), one per anchor point.
/// Empty for other families.
pub fn lift_structures(polygon: &IncidencePolygon) -> Vec<GoodStructure> {
    if polygon.family() != Family::W3 {
        return Vec::new();
    }
    let Ok(plane) = build_pg2(polygon.q()) else { return Vec::new() };
    let mut out = Vec::new();
    for kind in [PlanarKind::PointOnLine, PlanarKind::PointOffLine, PlanarKind::Baer] {
        let Ok(planar) = planar_one_good(&plane, kind, None) else { continue };
        for anchor in 0..plane.num_points() {
            if let Ok(g) = lift_w3(polygon, 0, &plane, &planar, anchor) {
                out.push(g);
            }
        }
    }
    out.sort_by(|a, b| (&a.points, &a.lines).cmp(&(&b.points, &b.lines)));
    out.dedup();
    out
}

/// Groups solutions into orbits of `g` and describes each orbit. Classes come sorted by subgraph
/// size, stabilizer order, orbit data, and representative. With a duality, each class also
/// records which class holds its dual structures.
pub fn classify_solutions(
    polygon: &IncidencePolygon,
    solutions: &[GoodStructure],
    g: &PermGroup,
    lifts: &[GoodStructure],
    duality: Option<&Permutation>,
) -> Result<Vec<SolutionClass>, PermGroupError> {
    let np = polygon.num_points();
    let n = polygon.num_elements();
    let limit = usize::try_from(g.ceiling()).unwrap_or(usize::MAX);
    let key = |s: &GoodStructure| s.elements(np).into_iter().map(|e| e as u32).collect::<Vec<u32>>();
    let mut orbits: Vec<HashSet<Vec<u32>>> = Vec::new();
    let mut classes: Vec<SolutionClass> = Vec::new();
    for s in solutions {
        let k = key(s);
        if let Some(i) = orbits.iter().position(|o| o.contains(&k)) {
            classes[i].hits += 1;
            continue;
        }
        let elements = s.elements(np);
        let orbit = g.set_orbit(&elements, limit)?;
        let min = orbit.iter().min().expect("nonempty").iter().map(|&e| e as usize).collect::<Vec<_>>();
        let stab = g.set_stabilizer(&elements, StabilizerMethod::Auto)?;
        debug_assert_eq!(orbit.len() as u128 * stab.order(), g.order());
        let mut inside = vec![false; n];
        for &e in &elements {
            inside[e] = true;
        }
        let outside: Vec<usize> = (0..n).filter(|&e| !inside[e]).collect();
        classes.push(SolutionClass {
            representative: GoodStructure::from_elements(Host::of(polygon), s.t, np, &min),
            size: s.size(),
            subgraph_size: outside.len(),
            stabilizer_order: stab.order(),
            orbit_length: orbit.len() as u128,
            subgraph_orbits: stab.orbit_multiset(&outside),
            structure_orbits: stab.orbit_multiset(&elements),
            from_lift: lifts.iter().any(|l| orbit.contains(&key(l))),
            hits: 1,
            dual_class: None,
            full_stabilizer_order: None,
        });
        orbits.push(orbit);
    }
    let mut order: Vec<usize> = (0..classes.len()).collect();
    let sort_key = |c: &SolutionClass| {
        (
            c.subgraph_size,
            c.stabilizer_order,
            c.subgraph_orbits.clone(),
            c.structure_orbits.clone(),
            c.representative.clone(),
        )
    };
    order.sort_by_key(|&i| sort_key(&classes[i]));
    let mut classes: Vec<SolutionClass> = order.iter().map(|&i| classes[i].clone()).collect();
    let orbits: Vec<HashSet<Vec<u32>>> = order.iter().map(|&i| std::mem::take(&mut orbits[i])).collect();
    if let Some(d) = duality {
        for c in classes.iter_mut() {
            let image = d.image_of_set(&key(&c.representative));
            c.dual_class = orbits.iter().position(|o| o.contains(&image));
        }
        for (i, c) in classes.iter_mut().enumerate() {
            c.full_stabilizer_order = Some(c.stabilizer_order * if c.dual_class == Some(i) { 2 } else { 1 });
        }
    }
    Ok(classes)
}

/// One class per pair of mutually dual classes (the first of the pair, marked as a lift when
/// either is, with hits summed). Classes without a known dual are kept as they are.
pub fn merge_dual_pairs(classes: &[SolutionClass]) -> Vec<SolutionClass> {
    let mut out = Vec::new();
    for (i, c) in classes.iter().enumerate() {
        match c.dual_class {
            Some(j) if j < i => continue,
            Some(j) if j > i => {
                let mut m = c.clone();
                m.from_lift |= classes[j].from_lift;
                m.hits += classes[j].hits;
                out.push(m);
            }
            _ => out.push(c.clone()),
        }
    }
    out
}
