//! Undirected weighted graphs, node labels and the cluster view built on top
//! of them.
//!
//! Edges are kept in canonical order: each edge stores `u < v` and the list is
//! sorted by `(u, v)`. Every downstream sort that needs a tie-break relies on
//! this order.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub weight: f64,
}

impl Edge {
    pub fn new(u: NodeId, v: NodeId, weight: f64) -> Self {
        let (u, v) = if u <= v { (u, v) } else { (v, u) };
        Edge { u, v, weight }
    }

    /// Total order: decreasing weight, then canonical `(u, v)`.
    pub fn cmp_heaviest_first(&self, other: &Edge) -> Ordering {
        other
            .weight
            .total_cmp(&self.weight)
            .then(self.u.cmp(&other.u))
            .then(self.v.cmp(&other.v))
    }

    /// Total order: increasing weight, then canonical `(u, v)`.
    pub fn cmp_lightest_first(&self, other: &Edge) -> Ordering {
        self.weight
            .total_cmp(&other.weight)
            .then(self.u.cmp(&other.u))
            .then(self.v.cmp(&other.v))
    }
}

/// Undirected weighted graph over `node_count` nodes, weights in (0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    node_count: usize,
    edges: Vec<Edge>,
    node_names: Option<Vec<String>>,
}

impl WeightedGraph {
    /// Builds a graph, validating the edge list and sorting it canonically.
    pub fn from_edges(node_count: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::input("graph must have at least one node"));
        }
        let mut edges: Vec<Edge> = edges
            .into_iter()
            .map(|e| Edge::new(e.u, e.v, e.weight))
            .collect();
        for e in &edges {
            if e.v >= node_count {
                return Err(Error::input(format!(
                    "edge ({}, {}) references a node outside 0..{}",
                    e.u, e.v, node_count
                )));
            }
            if e.u == e.v {
                return Err(Error::input(format!("self-loop on node {}", e.u)));
            }
            if !(e.weight > 0.0 && e.weight <= 1.0) {
                return Err(Error::input(format!(
                    "edge ({}, {}) has weight {} outside (0, 1]",
                    e.u, e.v, e.weight
                )));
            }
        }
        edges.sort_unstable_by_key(|e| (e.u, e.v));
        if let Some(w) = edges
            .windows(2)
            .find(|w| (w[0].u, w[0].v) == (w[1].u, w[1].v))
        {
            return Err(Error::input(format!(
                "duplicate edge ({}, {})",
                w[0].u, w[0].v
            )));
        }
        Ok(WeightedGraph {
            node_count,
            edges,
            node_names: None,
        })
    }

    /// Edges must already be canonical, sorted, unique and valid.
    pub(crate) fn from_canonical_unchecked(node_count: usize, edges: Vec<Edge>) -> Self {
        debug_assert!(edges
            .windows(2)
            .all(|w| (w[0].u, w[0].v) < (w[1].u, w[1].v)));
        WeightedGraph {
            node_count,
            edges,
            node_names: None,
        }
    }

    pub fn edgeless(node_count: usize) -> Result<Self> {
        Self::from_edges(node_count, std::iter::empty())
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.node_count {
            return Err(Error::input(format!(
                "{} node names given for {} nodes",
                names.len(),
                self.node_count
            )));
        }
        self.node_names = Some(names);
        Ok(self)
    }

    pub(crate) fn set_names(&mut self, names: Option<Vec<String>>) {
        self.node_names = names;
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_names(&self) -> Option<&[String]> {
        self.node_names.as_deref()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn max_weight(&self) -> Option<f64> {
        self.edges.iter().map(|e| e.weight).reduce(f64::max)
    }

    /// Neighbour lists, each sorted by neighbour id.
    pub fn adjacency(&self) -> Vec<Vec<(NodeId, f64)>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for e in &self.edges {
            adj[e.u].push((e.v, e.weight));
            adj[e.v].push((e.u, e.weight));
        }
        for list in &mut adj {
            list.sort_unstable_by_key(|&(n, _)| n);
        }
        adj
    }

    /// Connected component index for every node, numbered by smallest member.
    pub fn components(&self) -> Vec<usize> {
        let mut dsu = crate::unionfind::DisjointSet::new(self.node_count);
        for e in &self.edges {
            dsu.union(e.u, e.v);
        }
        let mut ids = vec![usize::MAX; self.node_count];
        let mut next = 0;
        let mut comp = vec![0; self.node_count];
        for (node, slot) in comp.iter_mut().enumerate() {
            let root = dsu.find(node);
            if ids[root] == usize::MAX {
                ids[root] = next;
                next += 1;
            }
            *slot = ids[root];
        }
        comp
    }
}

/// Per-node cluster assignment: 0 is unclustered, `1..=K` are cluster ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelArray {
    labels: Vec<usize>,
}

impl LabelArray {
    /// Validates that the nonzero labels form the contiguous range `1..=K`.
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        let max = labels.iter().copied().max().unwrap_or(0);
        let mut seen = vec![false; max + 1];
        for &l in &labels {
            seen[l] = true;
        }
        if let Some(missing) = (1..=max).find(|&k| !seen[k]) {
            return Err(Error::input(format!(
                "cluster labels must be contiguous from 1; label {missing} is missing"
            )));
        }
        Ok(LabelArray { labels })
    }

    pub(crate) fn from_raw(labels: Vec<usize>) -> Self {
        LabelArray { labels }
    }

    pub fn unclustered(node_count: usize) -> Self {
        LabelArray {
            labels: vec![0; node_count],
        }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, node: NodeId) -> usize {
        self.labels[node]
    }

    pub fn cluster_count(&self) -> usize {
        self.labels.iter().copied().max().unwrap_or(0)
    }

    /// Sizes of clusters `1..=K`, indexed from 0.
    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.cluster_count()];
        for &l in &self.labels {
            if l > 0 {
                sizes[l - 1] += 1;
            }
        }
        sizes
    }

    /// Checks the `[tau, 2*tau - 1]` size window on every cluster.
    pub fn check_size_window(&self, tau: usize) -> Result<()> {
        for (i, &s) in self.cluster_sizes().iter().enumerate() {
            if s < tau || s > 2 * tau - 1 {
                return Err(Error::input(format!(
                    "cluster {} has {} members, outside [{}, {}]",
                    i + 1,
                    s,
                    tau,
                    2 * tau - 1
                )));
            }
        }
        Ok(())
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.labels
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoreCluster {
    pub id: usize,
    pub members: Vec<NodeId>,
    pub center: Option<NodeId>,
    pub ic_score: Option<f64>,
}

impl CoreCluster {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CoreClusterSet {
    pub clusters: Vec<CoreCluster>,
}

impl CoreClusterSet {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CoreCluster> {
        self.clusters.iter()
    }

    pub fn get(&self, id: usize) -> Option<&CoreCluster> {
        self.clusters.iter().find(|c| c.id == id)
    }

    /// Flattens back into a label array of length `node_count`.
    pub fn to_labels(&self, node_count: usize) -> LabelArray {
        let mut labels = vec![0; node_count];
        for c in &self.clusters {
            for &m in &c.members {
                labels[m] = c.id;
            }
        }
        LabelArray::from_raw(labels)
    }

    pub fn is_center(&self, node: NodeId) -> bool {
        self.clusters.iter().any(|c| c.center == Some(node))
    }
}

/// Groups nodes by label; clusters are ordered by id, members by node id.
pub fn clusters_from_labels(labels: &LabelArray) -> CoreClusterSet {
    let mut groups: BTreeMap<usize, Vec<NodeId>> = BTreeMap::new();
    for (node, &l) in labels.as_slice().iter().enumerate() {
        if l > 0 {
            groups.entry(l).or_default().push(node);
        }
    }
    CoreClusterSet {
        clusters: groups
            .into_iter()
            .map(|(id, members)| CoreCluster {
                id,
                members,
                center: None,
                ic_score: None,
            })
            .collect(),
    }
}
