//! Exhaustive search for t-good structures by propagation and backtracking.

mod brute;
mod checkpoint;
mod classify;
mod state;

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::{GoodStructure, Host};
use crate::permgroup::{collineation_generators, PermGroup, PermGroupError, StabilizerMethod};
use crate::polygon::IncidencePolygon;
pub use brute::brute_force_tgood;
pub use checkpoint::{Checkpoint, CheckpointedSearch};
pub use classify::{classify_solutions, lift_structures, merge_dual_pairs, SolutionClass};
pub use state::{naive_propagate, Conflict, Model, SearchState, SearchStats, Status};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error(transparent)]
    Group(#[from] PermGroupError),
    #[error("the group does not preserve incidence")]
    NotIncidencePreserving,
    #[error("group of degree {got} on a polygon with {expected} elements")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("checkpoint does not match this search: {0}")]
    CheckpointMismatch(String),
    #[error("checkpoint i/o: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SearchOptions {
    pub t: u32,
    /// root case split under the collineation group (W(3,q) and PG(2,q) only)
    pub symmetry_breaking: bool,
    /// also emit the structure containing every element
    pub include_full: bool,
    pub min_size: Option<usize>,
    pub max_size: Option<usize>,
    /// stop after this many nodes; the outcome is then marked incomplete
    pub node_limit: Option<u64>,
    /// decisions made before the search is split into parallel branches
    pub split_depth: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            t: 1,
            symmetry_breaking: true,
            include_full: false,
            min_size: None,
            max_size: None,
            node_limit: None,
            split_depth: 8,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchOutcome {
    /// sorted by (size, points, lines)
    pub solutions: Vec<GoodStructure>,
    pub stats: SearchStats,
    pub complete: bool,
    pub symmetry_breaking: bool,
}

/// A partial assignment to replay from the root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub decisions: Vec<(u32, Status)>,
}

/// What the search is over: a model on variables, and how variables expand to elements.
pub(crate) struct Problem<'a> {
    polygon: &'a IncidencePolygon,
    model: Model,
    /// elements making up each variable
    members: Vec<Vec<u32>>,
    roots: Vec<Branch>,
    opts: SearchOptions,
}

impl<'a> Problem<'a> {
    fn plain(polygon: &'a IncidencePolygon, opts: &SearchOptions, roots: Vec<Branch>) -> Self {
        Problem {
            polygon,
            model: Model::from_polygon(polygon, opts.t),
            members: (0..polygon.num_elements() as u32).map(|e| vec![e]).collect(),
            roots,
            opts: opts.clone(),
        }
    }

    fn with_group(polygon: &'a IncidencePolygon, h: &PermGroup, opts: &SearchOptions) -> Result<Self, SearchError> {
        if h.degree() != polygon.num_elements() {
            return Err(SearchError::DegreeMismatch { expected: polygon.num_elements(), got: h.degree() });
        }
        if !h.preserves_incidence(polygon) {
            return Err(SearchError::NotIncidencePreserving);
        }
        let all: Vec<usize> = (0..polygon.num_elements()).collect();
        let orbits = h.orbits(&all);
        let mut var_of = vec![0u32; polygon.num_elements()];
        for (i, o) in orbits.iter().enumerate() {
            for &e in o {
                var_of[e] = i as u32;
            }
        }
        let adjacency = polygon.adjacency();
        let mut adj = Vec::with_capacity(orbits.len());
        for o in &orbits {
            let weights = |e: usize| {
                let mut w = std::collections::BTreeMap::<u32, u32>::new();
                for &u in &adjacency[e] {
                    *w.entry(var_of[u as usize]).or_insert(0) += 1;
                }
                w
            };
            let w = weights(o[0]);
            if o.iter().any(|&e| weights(e) != w) {
                return Err(SearchError::NotIncidencePreserving);
            }
            adj.push(w.into_iter().collect());
        }
        Ok(Problem {
            polygon,
            model: Model::new(opts.t, adj),
            members: orbits.into_iter().map(|o| o.into_iter().map(|e| e as u32).collect()).collect(),
            roots: vec![Branch { decisions: Vec::new() }],
            opts: opts.clone(),
        })
    }

    fn structure(&self, status: &[Status]) -> GoodStructure {
        let np = self.polygon.num_points();
        let mut elements: Vec<usize> = Vec::new();
        for (v, &s) in status.iter().enumerate() {
            if s == Status::In {
                elements.extend(self.members[v].iter().map(|&e| e as usize));
            }
        }
        GoodStructure::from_elements(Host::of(self.polygon), self.opts.t, np, &elements)
    }

    fn accept(&self, g: &GoodStructure) -> bool {
        let full = g.points.len() == self.polygon.num_points() && g.lines.len() == self.polygon.num_lines();
        (self.opts.include_full || !full)
            && self.opts.min_size.is_none_or(|m| g.size() >= m)
            && self.opts.max_size.is_none_or(|m| g.size() <= m)
    }

    /// Replays a branch; `None` if it propagates to a conflict.
    fn replay(&self, branch: &Branch) -> Option<SearchState<'_>> {
        let mut st = SearchState::new(&self.model);
        st.enqueue_all();
        st.propagate().ok()?;
        for &(v, s) in &branch.decisions {
            st.decide(v as usize, s).ok()?;
        }
        Some(st)
    }

    /// Expands the roots to `split_depth` decisions. Complete assignments met on the way are
    /// returned as branches too.
    pub(crate) fn frontier(&self) -> Vec<Branch> {
        let mut out = Vec::new();
        for root in &self.roots {
            let Some(mut st) = self.replay(root) else { continue };
            let mut path = root.decisions.clone();
            self.expand(&mut st, &mut path, self.opts.split_depth, &mut out);
        }
        out
    }

    fn expand(&self, st: &mut SearchState<'_>, path: &mut Vec<(u32, Status)>, depth: usize, out: &mut Vec<Branch>) {
        let Some(v) = st.branch_variable().filter(|_| depth > 0) else {
            out.push(Branch { decisions: path.clone() });
            return;
        };
        for s in [Status::In, Status::Out] {
            let mark = st.mark();
            if st.decide(v, s).is_ok() {
                path.push((v as u32, s));
                self.expand(st, path, depth - 1, out);
                path.pop();
                st.undo_to(mark);
            }
        }
    }

    /// Solves one branch. Returns solutions, statistics, and whether it finished within `budget`.
    pub(crate) fn solve(&self, branch: &Branch, budget: &NodeBudget) -> (Vec<GoodStructure>, SearchStats, bool) {
        let mut sols = Vec::new();
        let Some(mut st) = self.replay(branch) else {
            return (sols, SearchStats { conflicts: 1, ..Default::default() }, true);
        };
        let done = self.dfs(&mut st, &mut sols, budget);
        (sols, st.stats, done)
    }

    fn dfs(&self, st: &mut SearchState<'_>, sols: &mut Vec<GoodStructure>, budget: &NodeBudget) -> bool {
        st.stats.nodes += 1;
        if !budget.spend() {
            return false;
        }
        let Some(v) = st.branch_variable() else {
            assert!(st.satisfied(), "complete assignment violates a constraint");
            let g = self.structure(st.status());
            if self.accept(&g) {
                debug_assert!(crate::constructions::verify_tgood(self.polygon, &g).valid);
                sols.push(g);
            }
            return true;
        };
        for s in [Status::In, Status::Out] {
            let mark = st.mark();
            if st.decide(v, s).is_ok() {
                let done = self.dfs(st, sols, budget);
                st.undo_to(mark);
                if !done {
                    return false;
                }
            }
        }
        true
    }

    pub(crate) fn run(&self, branches: &[Branch]) -> (Vec<GoodStructure>, SearchStats, bool) {
        let budget = NodeBudget::new(self.opts.node_limit);
        let stats = Mutex::new(SearchStats::default());
        let complete = AtomicBool::new(true);
        let mut sols: Vec<GoodStructure> = branches
            .par_iter()
            .flat_map_iter(|b| {
                let (s, st, done) = self.solve(b, &budget);
                stats.lock().expect("unpoisoned").merge(&st);
                if !done {
                    complete.store(false, Ordering::Relaxed);
                }
                s
            })
            .collect();
        sort_solutions(&mut sols);
        (sols, stats.into_inner().expect("unpoisoned"), complete.into_inner())
    }
}

pub(crate) fn sort_solutions(sols: &mut Vec<GoodStructure>) {
    sols.sort_by(|a, b| (a.size(), &a.points, &a.lines).cmp(&(b.size(), &b.points, &b.lines)));
    sols.dedup();
}

/// Shared node counter for the optional limit.
pub(crate) struct NodeBudget {
    limit: Option<u64>,
    used: AtomicU64,
}

impl NodeBudget {
    pub(crate) fn new(limit: Option<u64>) -> Self {
        NodeBudget { limit, used: AtomicU64::new(0) }
    }

    fn spend(&self) -> bool {
        match self.limit {
            None => true,
            Some(l) => self.used.fetch_add(1, Ordering::Relaxed) < l,
        }
    }
}

/// Root case split: some point is in every structure except degenerate ones, and the group is
/// transitive on points, so point 0 may be taken in. Its stabilizer is transitive on the lines
/// through it, so either its first line is in or none of its lines are.
fn symmetry_roots(polygon: &IncidencePolygon, g: &PermGroup) -> Result<Option<Vec<Branch>>, SearchError> {
    let np = polygon.num_points();
    if g.orbit(0).len() != np {
        return Ok(None);
    }
    let stab = g.set_stabilizer(&[0], StabilizerMethod::Auto)?;
    let through: Vec<u32> = polygon.lines_through(0).to_vec();
    let l0 = through[0] as usize + np;
    let orbit = stab.orbit(l0);
    if !through.iter().all(|&l| orbit.binary_search(&(l as usize + np)).is_ok()) {
        return Ok(Some(vec![Branch { decisions: vec![(0, Status::In)] }]));
    }
    let with_line = Branch { decisions: vec![(0, Status::In), (l0 as u32, Status::In)] };
    let mut without = vec![(0, Status::In)];
    without.extend(through.iter().map(|&l| (l + np as u32, Status::Out)));
    Ok(Some(vec![with_line, Branch { decisions: without }]))
}

fn plain_problem<'a>(polygon: &'a IncidencePolygon, opts: &SearchOptions) -> Result<(Problem<'a>, bool), SearchError> {
    let mut roots = None;
    // the full structure contains point 0, so it survives the split when asked for
    if opts.symmetry_breaking && opts.t >= 1 && opts.t <= polygon.order().0 {
        if let Ok(g) = collineation_generators(polygon) {
            roots = symmetry_roots(polygon, &g)?;
        }
    }
    let applied = roots.is_some();
    let roots = roots.unwrap_or_else(|| vec![Branch { decisions: Vec::new() }]);
    Ok((Problem::plain(polygon, opts, roots), applied))
}

/// Every t-good structure of the polygon, up to the root symmetry split when enabled. Without the
/// split every structure is emitted.
pub fn enumerate_one_good(polygon: &IncidencePolygon, opts: &SearchOptions) -> Result<SearchOutcome, SearchError> {
    let (problem, applied) = plain_problem(polygon, opts)?;
    let frontier = problem.frontier();
    let (solutions, stats, complete) = problem.run(&frontier);
    Ok(SearchOutcome { solutions, stats, complete, symmetry_breaking: applied })
}

/// Every t-good structure that is a union of orbits of `h`.
pub fn enumerate_with_group(
    polygon: &IncidencePolygon,
    h: &PermGroup,
    opts: &SearchOptions,
) -> Result<SearchOutcome, SearchError> {
    let problem = Problem::with_group(polygon, h, opts)?;
    let frontier = problem.frontier();
    let (solutions, stats, complete) = problem.run(&frontier);
    Ok(SearchOutcome { solutions, stats, complete, symmetry_breaking: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::verify_tgood;
    use crate::polygon::{build_pg2, build_w3};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn forced_in_is_a_vacuous_fixpoint() {
        let p = build_pg2(2).unwrap();
        let m = Model::from_polygon(&p, 1);
        let mut st = SearchState::new(&m);
        for v in 0..m.len() {
            st.decide(v, Status::In).unwrap();
        }
        assert!(st.is_complete() && st.satisfied());
    }

    #[test]
    fn point_with_no_line_conflicts() {
        let p = build_pg2(2).unwrap();
        let m = Model::from_polygon(&p, 1);
        let mut st = SearchState::new(&m);
        for &l in p.lines_through(0) {
            st.assign(l as usize + 7, Status::Out).unwrap();
        }
        st.assign(0, Status::Out).unwrap();
        assert_eq!(st.propagate(), Err(Conflict));
    }

    #[test]
    fn propagation_matches_naive_rescans() {
        let w = build_w3(3).unwrap();
        let m = Model::from_polygon(&w, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let mut seed = vec![Status::Undecided; m.len()];
            for s in seed.iter_mut() {
                *s = match rng.gen_range(0..12) {
                    0 => Status::In,
                    1 => Status::Out,
                    _ => Status::Undecided,
                };
            }
            let mut st = SearchState::new(&m);
            let mut ok = true;
            for (v, &s) in seed.iter().enumerate() {
                if s != Status::Undecided {
                    ok &= st.assign(v, s).is_ok();
                }
            }
            let fast = st.propagate().ok().map(|_| st.status().to_vec());
            assert!(ok);
            assert_eq!(fast, naive_propagate(&m, &seed));
        }
    }

    #[test]
    fn pg22_sizes() {
        let p = build_pg2(2).unwrap();
        let opts = SearchOptions { symmetry_breaking: false, ..Default::default() };
        let out = enumerate_one_good(&p, &opts).unwrap();
        assert!(out.complete);
        let sizes: std::collections::BTreeSet<usize> = out.solutions.iter().map(|g| g.size()).collect();
        assert_eq!(sizes, [3, 4].into());
        assert!(out.solutions.iter().all(|g| verify_tgood(&p, g).valid));
        // 7 lines x 3 points, and 7 lines x 4 points off them
        assert_eq!(out.solutions.len(), 21 + 28);
    }

    #[test]
    fn node_limit_marks_incomplete() {
        let w = build_w3(3).unwrap();
        let opts = SearchOptions { node_limit: Some(50), ..Default::default() };
        assert!(!enumerate_one_good(&w, &opts).unwrap().complete);
    }

    #[test]
    fn group_mode_extremes() {
        let w = build_w3(3).unwrap();
        let g = collineation_generators(&w).unwrap();
        let opts = SearchOptions { include_full: true, ..Default::default() };
        let out = enumerate_with_group(&w, &g, &opts).unwrap();
        assert_eq!(out.solutions.len(), 1);
        assert_eq!(out.solutions[0].size(), 40);
        let trivial = PermGroup::trivial(w.num_elements());
        let p = build_pg2(2).unwrap();
        let a = enumerate_with_group(&p, &PermGroup::trivial(14), &SearchOptions::default()).unwrap();
        let b = enumerate_one_good(&p, &SearchOptions { symmetry_breaking: false, ..Default::default() }).unwrap();
        assert_eq!(a.solutions, b.solutions);
        assert!(matches!(enumerate_with_group(&p, &trivial, &opts), Err(SearchError::DegreeMismatch { .. })));
    }
}
