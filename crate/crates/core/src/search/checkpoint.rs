use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{plain_problem, sort_solutions, Branch, NodeBudget, Problem, SearchError, SearchOptions, SearchOutcome};
use crate::constructions::{GoodStructure, Host};
use crate::permgroup::PermGroup;
use crate::polygon::IncidencePolygon;

/// Progress of a split search: the branch queue, which branches finished, and what they found.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Checkpoint {
    pub host: Host,
    pub options: SearchOptions,
    /// generators of the orbit group, as image arrays, when searching over orbits
    pub group: Option<Vec<Vec<u32>>>,
    pub symmetry_breaking: bool,
    pub branches: Vec<Branch>,
    pub done: Vec<bool>,
    pub solutions: Vec<GoodStructure>,
    pub stats: super::SearchStats,
}

/// A search that saves its branch queue after every batch and resumes from a saved file.
pub struct CheckpointedSearch<'a> {
    problem: Problem<'a>,
    state: Checkpoint,
    path: Option<PathBuf>,
}

impl<'a> CheckpointedSearch<'a> {
    pub fn new(
        polygon: &'a IncidencePolygon,
        opts: &SearchOptions,
        group: Option<&PermGroup>,
        path: Option<&Path>,
    ) -> Result<Self, SearchError> {
        let (problem, applied) = match group {
            Some(h) => (Problem::with_group(polygon, h, opts)?, false),
            None => plain_problem(polygon, opts)?,
        };
        let group_key = group.map(|h| h.generators().iter().map(|g| g.images().to_vec()).collect());
        let host = Host::of(polygon);
        if let Some(p) = path.filter(|p| p.exists()) {
            let text = fs::read_to_string(p).map_err(|e| SearchError::Io(format!("{}: {e}", p.display())))?;
            let state: Checkpoint =
                serde_json::from_str(&text).map_err(|e| SearchError::Io(format!("{}: {e}", p.display())))?;
            if state.host != host || state.options.t != opts.t || state.group != group_key {
                return Err(SearchError::CheckpointMismatch(p.display().to_string()));
            }
            if state.options.symmetry_breaking != opts.symmetry_breaking
                || state.options.split_depth != opts.split_depth
            {
                return Err(SearchError::CheckpointMismatch("branching options differ".into()));
            }
            return Ok(CheckpointedSearch { problem, state, path: Some(p.to_path_buf()) });
        }
        let branches = problem.frontier();
        let state = Checkpoint {
            host,
            options: opts.clone(),
            group: group_key,
            symmetry_breaking: applied,
            done: vec![false; branches.len()],
            branches,
            solutions: Vec::new(),
            stats: Default::default(),
        };
        Ok(CheckpointedSearch { problem, state, path: path.map(Path::to_path_buf) })
    }

    pub fn checkpoint(&self) -> &Checkpoint {
        &self.state
    }

    pub fn pending(&self) -> usize {
        self.state.done.iter().filter(|d| !**d).count()
    }

    fn save(&self) -> Result<(), SearchError> {
        let Some(path) = &self.path else { return Ok(()) };
        let tmp = path.with_extension("tmp");
        let text = serde_json::to_string(&self.state).map_err(|e| SearchError::Io(e.to_string()))?;
        fs::write(&tmp, text).map_err(|e| SearchError::Io(format!("{}: {e}", tmp.display())))?;
        fs::rename(&tmp, path).map_err(|e| SearchError::Io(format!("{}: {e}", path.display())))
    }

    /// Runs pending branches in batches of `batch`, saving after each. Branches cut short by the
    /// node limit stay pending and contribute nothing.
    pub fn run(&mut self, batch: usize) -> Result<SearchOutcome, SearchError> {
        use rayon::prelude::*;
        let budget = NodeBudget::new(self.problem.opts.node_limit);
        let pending: Vec<usize> = (0..self.state.branches.len()).filter(|&i| !self.state.done[i]).collect();
        for chunk in pending.chunks(batch.max(1)) {
            let results: Vec<_> =
                chunk.par_iter().map(|&i| (i, self.problem.solve(&self.state.branches[i], &budget))).collect();
            for (i, (sols, stats, finished)) in results {
                self.state.stats.merge(&stats);
                if finished {
                    self.state.done[i] = true;
                    self.state.solutions.extend(sols);
                }
            }
            sort_solutions(&mut self.state.solutions);
            self.save()?;
        }
        Ok(SearchOutcome {
            solutions: self.state.solutions.clone(),
            stats: self.state.stats,
            complete: self.pending() == 0,
            symmetry_breaking: self.state.symmetry_breaking,
        })
    }
}
