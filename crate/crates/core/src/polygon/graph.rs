//! Bipartite incidence graphs and their girth, diameter and degree profile.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

/// An undirected bipartite graph; vertices `0..left` form one side, `left..left+right` the other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    adj: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphMetrics {
    pub vertices: usize,
    pub edges: usize,
    /// `None` for an acyclic graph.
    pub girth: Option<u32>,
    /// `None` for a disconnected graph.
    pub diameter: Option<u32>,
    /// degree -> number of vertices with that degree
    pub degrees: BTreeMap<usize, usize>,
}

impl GraphMetrics {
    /// The common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        match self.degrees.len() {
            1 => self.degrees.keys().next().copied(),
            _ => None,
        }
    }
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize, adj: Vec<Vec<u32>>) -> Self {
        assert_eq!(adj.len(), left + right);
        BipartiteGraph { left, right, adj }
    }

    /// Builds the graph from the left side's neighbour lists (right vertices numbered from 0).
    pub fn from_left_adjacency(right: usize, left_adj: &[Vec<u32>]) -> Self {
        let left = left_adj.len();
        let mut adj = vec![Vec::new(); left + right];
        for (u, ns) in left_adj.iter().enumerate() {
            for &w in ns {
                adj[u].push(left as u32 + w);
                adj[left + w as usize].push(u as u32);
            }
        }
        BipartiteGraph { left, right, adj }
    }

    /// A cycle on `2m` vertices, alternating sides.
    pub fn cycle(m: usize) -> Self {
        let left_adj: Vec<Vec<u32>> = (0..m).map(|i| vec![i as u32, ((i + m - 1) % m) as u32]).collect();
        Self::from_left_adjacency(m, &left_adj)
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbours(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn edge_count(&self) -> usize {
        self.adj[..self.left].iter().map(Vec::len).sum()
    }

    /// Subgraph induced by the vertices with `keep[v]`, renumbered in increasing order.
    pub fn induced(&self, keep: &[bool]) -> BipartiteGraph {
        let mut renum = vec![u32::MAX; self.adj.len()];
        let mut next = 0u32;
        for (v, &k) in keep.iter().enumerate() {
            if k {
                renum[v] = next;
                next += 1;
            }
        }
        let left = keep[..self.left].iter().filter(|&&k| k).count();
        let adj = (0..self.adj.len())
            .filter(|&v| keep[v])
            .map(|v| self.adj[v].iter().filter(|&&w| keep[w as usize]).map(|&w| renum[w as usize]).collect())
            .collect();
        BipartiteGraph { left, right: next as usize - left, adj }
    }

    /// Breadth-first distances from `root`; unreachable vertices get `u32::MAX`.
    pub fn distances_from(&self, root: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.adj.len()];
        let mut queue = VecDeque::new();
        dist[root] = 0;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                let w = w as usize;
                if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Length of the shortest cycle through the BFS tree rooted at `root`, if any.
    fn shortest_cycle_from(&self, root: usize) -> Option<u32> {
        let n = self.adj.len();
        let mut dist = vec![u32::MAX; n];
        let mut parent = vec![u32::MAX; n];
        let mut queue = VecDeque::new();
        dist[root] = 0;
        queue.push_back(root);
        let mut best: Option<u32> = None;
        while let Some(u) = queue.pop_front() {
            if let Some(b) = best {
                if 2 * dist[u] + 1 >= b {
                    break;
                }
            }
            for &w in &self.adj[u] {
                let w = w as usize;
                if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u as u32;
                    queue.push_back(w);
                } else if parent[u] != w as u32 {
                    let len = dist[u] + dist[w] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
        best
    }

    pub fn girth(&self) -> Option<u32> {
        (0..self.adj.len()).filter_map(|v| self.shortest_cycle_from(v)).min()
    }

    pub fn diameter(&self) -> Option<u32> {
        if self.adj.is_empty() {
            return Some(0);
        }
        let mut diam = 0;
        for v in 0..self.adj.len() {
            let d = self.distances_from(v);
            let ecc = *d.iter().max().unwrap();
            if ecc == u32::MAX {
                return None;
            }
            diam = diam.max(ecc);
        }
        Some(diam)
    }

    pub fn metrics(&self) -> GraphMetrics {
        let mut degrees = BTreeMap::new();
        for ns in &self.adj {
            *degrees.entry(ns.len()).or_insert(0) += 1;
        }
        GraphMetrics {
            vertices: self.adj.len(),
            edges: self.edge_count(),
            girth: self.girth(),
            diameter: self.diameter(),
            degrees,
        }
    }
}

/// Exact girth, diameter and degree histogram.
pub fn graph_metrics(g: &BipartiteGraph) -> GraphMetrics {
    g.metrics()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_cycle() {
        let m = BipartiteGraph::cycle(6).metrics();
        assert_eq!(m.vertices, 12);
        assert_eq!(m.girth, Some(12));
        assert_eq!(m.diameter, Some(6));
        assert_eq!(m.regular_degree(), Some(2));
    }

    #[test]
    fn path_is_acyclic() {
        let g = BipartiteGraph::from_left_adjacency(2, &[vec![0], vec![0, 1]]);
        let m = g.metrics();
        assert_eq!(m.girth, None);
        assert_eq!(m.diameter, Some(3));
        assert_eq!(m.regular_degree(), None);
    }

    #[test]
    fn disconnected_has_no_diameter() {
        let g = BipartiteGraph::from_left_adjacency(2, &[vec![0], vec![1]]);
        assert_eq!(g.diameter(), None);
    }

    #[test]
    fn complete_bipartite_girth_four() {
        let g = BipartiteGraph::from_left_adjacency(3, &[vec![0, 1, 2], vec![0, 1, 2], vec![0, 1, 2]]);
        assert_eq!(g.girth(), Some(4));
        assert_eq!(g.diameter(), Some(2));
        let keep = [true, true, false, true, true, false];
        let sub = g.induced(&keep);
        assert_eq!(sub.left(), 2);
        assert_eq!(sub.metrics().regular_degree(), Some(2));
    }
}
