use serde::{Deserialize, Serialize};

use crate::polygon::IncidencePolygon;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Undecided,
    In,
    Out,
}

/// Variables with weighted adjacency. An `Out` variable needs its `In` neighbours to weigh exactly
/// `t`. Plain search has one variable per element and unit weights; orbit search has one
/// variable per orbit, weighted by the number of neighbours a member has in the other orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub t: u32,
    /// `(u, w)`: `v` sees weight `w` from `u`
    pub adj: Vec<Vec<(u32, u32)>>,
    /// `(u, w)`: `u` sees weight `w` from `v`
    rev: Vec<Vec<(u32, u32)>>,
}

impl Model {
    pub fn new(t: u32, adj: Vec<Vec<(u32, u32)>>) -> Self {
        let mut rev = vec![Vec::new(); adj.len()];
        for (v, ns) in adj.iter().enumerate() {
            for &(u, w) in ns {
                rev[u as usize].push((v as u32, w));
            }
        }
        Model { t, adj, rev }
    }

    pub fn from_polygon(polygon: &IncidencePolygon, t: u32) -> Self {
        let adj = polygon.adjacency().into_iter().map(|ns| ns.into_iter().map(|u| (u, 1)).collect()).collect();
        Model::new(t, adj)
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Conflict;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub propagations: u64,
    pub conflicts: u64,
}

impl SearchStats {
    pub fn merge(&mut self, other: &SearchStats) {
        self.nodes += other.nodes;
        self.propagations += other.propagations;
        self.conflicts += other.conflicts;
    }
}

/// Statuses plus per-variable counters: weight of `In` neighbours, weight and number of
/// undecided neighbours. Assignments are trailed for backtracking.
#[derive(Debug, Clone)]
pub struct SearchState<'m> {
    model: &'m Model,
    status: Vec<Status>,
    chosen: Vec<u32>,
    open: Vec<u32>,
    open_count: Vec<u32>,
    trail: Vec<u32>,
    queue: Vec<u32>,
    queued: Vec<bool>,
    pub stats: SearchStats,
}

impl<'m> SearchState<'m> {
    pub fn new(model: &'m Model) -> Self {
        let n = model.len();
        SearchState {
            model,
            status: vec![Status::Undecided; n],
            chosen: vec![0; n],
            open: model.adj.iter().map(|ns| ns.iter().map(|&(_, w)| w).sum()).collect(),
            open_count: model.adj.iter().map(|ns| ns.len() as u32).collect(),
            trail: Vec::new(),
            queue: Vec::new(),
            queued: vec![false; n],
            stats: SearchStats::default(),
        }
    }

    pub fn model(&self) -> &'m Model {
        self.model
    }

    pub fn status(&self) -> &[Status] {
        &self.status
    }

    /// Weight of `In` neighbours.
    pub fn chosen(&self, v: usize) -> u32 {
        self.chosen[v]
    }

    /// Weight of undecided neighbours.
    pub fn open(&self, v: usize) -> u32 {
        self.open[v]
    }

    pub fn open_count(&self, v: usize) -> u32 {
        self.open_count[v]
    }

    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    pub fn is_complete(&self) -> bool {
        self.status.iter().all(|&s| s != Status::Undecided)
    }

    fn enqueue(&mut self, v: u32) {
        if !self.queued[v as usize] {
            self.queued[v as usize] = true;
            self.queue.push(v);
        }
    }

    /// Queues every variable, for the root propagation.
    pub fn enqueue_all(&mut self) {
        for v in 0..self.status.len() {
            self.enqueue(v as u32);
        }
    }

    /// Sets an undecided variable and queues everything whose constraint it touches.
    pub fn assign(&mut self, v: usize, s: Status) -> Result<(), Conflict> {
        match self.status[v] {
            Status::Undecided => {}
            cur if cur == s => return Ok(()),
            _ => return Err(Conflict),
        }
        self.status[v] = s;
        self.trail.push(v as u32);
        for &(u, w) in &self.model.rev[v] {
            let u = u as usize;
            self.open[u] -= w;
            self.open_count[u] -= 1;
            if s == Status::In {
                self.chosen[u] += w;
            }
        }
        for i in 0..self.model.rev[v].len() {
            let u = self.model.rev[v][i].0;
            self.enqueue(u);
        }
        self.enqueue(v as u32);
        Ok(())
    }

    pub fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().expect("above mark") as usize;
            let s = std::mem::replace(&mut self.status[v], Status::Undecided);
            for &(u, w) in &self.model.rev[v] {
                let u = u as usize;
                self.open[u] += w;
                self.open_count[u] += 1;
                if s == Status::In {
                    self.chosen[u] -= w;
                }
            }
        }
        for &v in &self.queue {
            self.queued[v as usize] = false;
        }
        self.queue.clear();
    }

    /// Runs the rules to a fixpoint:
    /// - `Out` with `In` weight above `t`, or unable to reach `t`: conflict;
    /// - `Out`: an undecided neighbour heavier than the remaining slack goes `Out`;
    /// - `Out` that needs every undecided neighbour to reach `t`: they all go `In`;
    /// - undecided that could not be `Out` (too much or too little reachable weight): `In`.
    pub fn propagate(&mut self) -> Result<(), Conflict> {
        let t = self.model.t;
        while let Some(v) = self.queue.pop() {
            let v = v as usize;
            self.queued[v] = false;
            let (c, o) = (self.chosen[v], self.open[v]);
            match self.status[v] {
                Status::In => {}
                Status::Undecided => {
                    if c > t || c + o < t {
                        self.stats.propagations += 1;
                        self.assign(v, Status::In)?;
                    }
                }
                Status::Out => {
                    if c > t || c + o < t {
                        return self.fail();
                    }
                    if o == 0 {
                        continue;
                    }
                    let slack = t - c;
                    let all_in = c + o == t;
                    for i in 0..self.model.adj[v].len() {
                        let (u, w) = self.model.adj[v][i];
                        let u = u as usize;
                        if self.status[u] != Status::Undecided {
                            continue;
                        }
                        let s = if w > slack {
                            Status::Out
                        } else if all_in {
                            Status::In
                        } else {
                            continue;
                        };
                        self.stats.propagations += 1;
                        self.assign(u, s)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn fail(&mut self) -> Result<(), Conflict> {
        self.stats.conflicts += 1;
        for &v in &self.queue {
            self.queued[v as usize] = false;
        }
        self.queue.clear();
        Err(Conflict)
    }

    /// Assigns and propagates; on conflict the state is rolled back to before the call.
    pub fn decide(&mut self, v: usize, s: Status) -> Result<(), Conflict> {
        let mark = self.mark();
        let r = self.assign(v, s).and_then(|_| self.propagate());
        if r.is_err() {
            self.undo_to(mark);
        }
        r
    }

    /// Undecided variable with the fewest undecided neighbours, lowest index on ties.
    pub fn branch_variable(&self) -> Option<usize> {
        let mut best: Option<(u32, usize)> = None;
        for (v, &s) in self.status.iter().enumerate() {
            if s == Status::Undecided && best.is_none_or(|(c, _)| self.open_count[v] < c) {
                best = Some((self.open_count[v], v));
            }
        }
        best.map(|(_, v)| v)
    }

    /// Whether every `Out` variable sees exactly `t` (only meaningful when complete).
    pub fn satisfied(&self) -> bool {
        (0..self.status.len()).all(|v| self.status[v] != Status::Out || self.chosen[v] == self.model.t)
    }
}

/// Reference propagator: rescans every variable with counts recomputed from scratch until nothing
/// changes. `None` on conflict.
pub fn naive_propagate(model: &Model, status: &[Status]) -> Option<Vec<Status>> {
    let t = model.t;
    let mut st = status.to_vec();
    loop {
        let mut changed = false;
        for v in 0..st.len() {
            let weigh = |want: Status, st: &[Status]| -> u32 {
                model.adj[v].iter().filter(|&&(u, _)| st[u as usize] == want).map(|&(_, w)| w).sum()
            };
            let c = weigh(Status::In, &st);
            let o = weigh(Status::Undecided, &st);
            match st[v] {
                Status::In => {}
                Status::Undecided => {
                    if c > t || c + o < t {
                        st[v] = Status::In;
                        changed = true;
                    }
                }
                Status::Out => {
                    if c > t || c + o < t {
                        return None;
                    }
                    for &(u, w) in &model.adj[v] {
                        let u = u as usize;
                        if st[u] != Status::Undecided {
                            continue;
                        }
                        if w > t - c {
                            st[u] = Status::Out;
                            changed = true;
                        } else if c + o == t {
                            st[u] = Status::In;
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            return Some(st);
        }
    }
}
