//! CORE-cluster detection.
//!
//! Both variants grow node groups by merging the endpoints of edges taken
//! one at a time. A group whose size lands in `[tau, 2*tau - 1]` right after
//! a merge is frozen: it becomes a CORE-cluster and no later edge touching it
//! is applied. Unfrozen groups therefore always have fewer than `tau`
//! members, and a merge of two of them can never skip past the window.
//!
//! The standard variant feeds the edges of the maximum spanning forest in
//! increasing weight order. The greedy variant feeds only the `floor(gamma *
//! tau)` heaviest edges of the full similarity graph, heaviest first.

use crate::error::{Error, Result};
use crate::graph::{Edge, LabelArray, NodeId, WeightedGraph};
use crate::spanning::{sort_heaviest_first, sort_lightest_first};
use crate::unionfind::DisjointSet;

pub const DEFAULT_GAMMA: f64 = 400.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterParams {
    /// Granularity: clusters have between `tau` and `2*tau - 1` members.
    pub tau: usize,
    /// Greedy scan factor; the greedy variant examines `floor(gamma * tau)` edges.
    pub gamma: f64,
}

impl ClusterParams {
    pub fn standard(tau: usize) -> Result<Self> {
        let params = ClusterParams {
            tau,
            gamma: DEFAULT_GAMMA,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn greedy(tau: usize, gamma: f64) -> Result<Self> {
        let params = ClusterParams { tau, gamma };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.tau < 2 {
            return Err(Error::param(format!(
                "tau must be at least 2, got {}",
                self.tau
            )));
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::param(format!(
                "gamma must be a finite non-negative number, got {}",
                self.gamma
            )));
        }
        Ok(())
    }

    pub fn max_size(&self) -> usize {
        2 * self.tau - 1
    }

    pub fn in_window(&self, size: usize) -> bool {
        size >= self.tau && size <= self.max_size()
    }

    /// Number of edges the greedy variant examines.
    pub fn scan_budget(&self) -> usize {
        (self.gamma * self.tau as f64).floor() as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanStep {
    /// Endpoints already in the same group.
    SameGroup,
    /// An endpoint belongs to a frozen core.
    FrozenEndpoint,
    /// Groups merged; the new group has `size` members and is not frozen.
    Merged { size: usize },
    /// Groups merged and the result was frozen as core `id`.
    Frozen { id: usize, size: usize },
}

/// Incremental merge-and-freeze state over `p` nodes.
///
/// Within a group every node shares a root; a frozen group records its core
/// id on the root. Core ids are handed out in freeze order starting at 1.
#[derive(Debug, Clone)]
pub struct CoreScan {
    groups: DisjointSet,
    core_of_root: Vec<usize>,
    tau: usize,
    frozen: usize,
}

impl CoreScan {
    pub fn new(node_count: usize, tau: usize) -> Self {
        CoreScan {
            groups: DisjointSet::new(node_count),
            core_of_root: vec![0; node_count],
            tau,
            frozen: 0,
        }
    }

    pub fn frozen_count(&self) -> usize {
        self.frozen
    }

    pub fn offer(&mut self, u: NodeId, v: NodeId) -> ScanStep {
        let ru = self.groups.find(u);
        let rv = self.groups.find(v);
        if ru == rv {
            return ScanStep::SameGroup;
        }
        if self.core_of_root[ru] != 0 || self.core_of_root[rv] != 0 {
            return ScanStep::FrozenEndpoint;
        }
        let root = self.groups.union_roots(ru, rv);
        let size = self.groups.root_size(root);
        if size >= self.tau && size < 2 * self.tau {
            debug_assert!(size <= 2 * self.tau - 2);
            self.frozen += 1;
            self.core_of_root[root] = self.frozen;
            ScanStep::Frozen {
                id: self.frozen,
                size,
            }
        } else {
            ScanStep::Merged { size }
        }
    }

    /// Core id of `node`'s group, 0 if the group is not frozen.
    pub fn core_of(&mut self, node: NodeId) -> usize {
        let root = self.groups.find(node);
        self.core_of_root[root]
    }

    /// Frozen groups keep their core id, everything else gets label 0.
    pub fn finish(mut self) -> LabelArray {
        let p = self.core_of_root.len();
        let labels = (0..p).map(|n| self.core_of(n)).collect();
        LabelArray::from_raw(labels)
    }
}

/// Runs a scan over `edges` in the order given.
pub fn scan_edges<'a>(
    node_count: usize,
    tau: usize,
    edges: impl IntoIterator<Item = &'a Edge>,
) -> LabelArray {
    let mut scan = CoreScan::new(node_count, tau);
    for e in edges {
        scan.offer(e.u, e.v);
    }
    scan.finish()
}

/// Standard CORE-clustering on a maximum spanning forest.
///
/// Forest edges are taken lightest first. If `tau` exceeds the node count no
/// group can reach the window and every label is 0.
pub fn core_clustering(tree: &WeightedGraph, params: &ClusterParams) -> Result<LabelArray> {
    params.validate()?;
    let p = tree.node_count();
    if params.tau > p {
        return Ok(LabelArray::unclustered(p));
    }
    let mut order = tree.edges().to_vec();
    sort_lightest_first(&mut order);
    Ok(scan_edges(p, params.tau, &order))
}

/// The `count` heaviest edges of `graph`, heaviest first, ties in canonical
/// order. Equal to the first `count` entries of a full sort.
pub fn heaviest_edges(graph: &WeightedGraph, count: usize) -> Vec<Edge> {
    let mut edges = graph.edges().to_vec();
    if count == 0 {
        return Vec::new();
    }
    if count < edges.len() {
        edges.select_nth_unstable_by(count - 1, Edge::cmp_heaviest_first);
        edges.truncate(count);
    }
    sort_heaviest_first(&mut edges);
    edges
}

/// Greedy CORE-clustering directly on the similarity graph.
///
/// Only the `floor(gamma * tau)` heaviest edges are examined, heaviest first.
/// A zero budget leaves every node unclustered.
pub fn core_clustering_greedy(graph: &WeightedGraph, params: &ClusterParams) -> Result<LabelArray> {
    params.validate()?;
    let p = graph.node_count();
    let budget = params.scan_budget();
    if params.tau > p || budget == 0 {
        return Ok(LabelArray::unclustered(p));
    }
    let order = heaviest_edges(graph, budget);
    Ok(scan_edges(p, params.tau, &order))
}
