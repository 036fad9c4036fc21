//! Central variable of each cluster: the member with the lowest mean
//! shortest-path distance to the other members.
//!
//! Paths stay inside the subgraph induced by the cluster's members, and an
//! edge of weight `w` has length `1 - w` unless another transform is given.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{clusters_from_labels, CoreClusterSet, LabelArray, NodeId, WeightedGraph};

/// Default edge length for a similarity weight.
pub fn one_minus_weight(w: f64) -> f64 {
    1.0 - w
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct HeapEntry {
    dist: f64,
    node: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Adjacency of an induced subgraph with members renumbered `0..m`.
struct InducedSubgraph {
    members: Vec<NodeId>,
    adj: Vec<Vec<(usize, f64)>>,
}

impl InducedSubgraph {
    fn build(
        adjacency: &[Vec<(NodeId, f64)>],
        members: &[NodeId],
        length: &(impl Fn(f64) -> f64 + ?Sized),
    ) -> Result<Self> {
        let mut members = members.to_vec();
        members.sort_unstable();
        members.dedup();
        let mut adj = vec![Vec::new(); members.len()];
        for (local, &node) in members.iter().enumerate() {
            let neighbours = adjacency
                .get(node)
                .ok_or_else(|| Error::param(format!("node {node} is not in the graph")))?;
            for &(nb, w) in neighbours {
                if let Ok(other) = members.binary_search(&nb) {
                    let d = length(w);
                    if d.is_nan() || d < 0.0 {
                        return Err(Error::param(format!(
                            "edge ({node}, {nb}) has negative or undefined length {d}"
                        )));
                    }
                    adj[local].push((other, d));
                }
            }
        }
        Ok(InducedSubgraph { members, adj })
    }

    fn local_index(&self, node: NodeId) -> Option<usize> {
        self.members.binary_search(&node).ok()
    }

    fn shortest_from(&self, source: usize) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.members.len()];
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(HeapEntry {
            dist: 0.0,
            node: source,
        });
        while let Some(HeapEntry { dist: d, node }) = heap.pop() {
            if d > dist[node] {
                continue;
            }
            for &(next, len) in &self.adj[node] {
                let candidate = d + len;
                if candidate < dist[next] {
                    dist[next] = candidate;
                    heap.push(HeapEntry {
                        dist: candidate,
                        node: next,
                    });
                }
            }
        }
        dist
    }

    /// Member with the smallest finite mean distance to the others, lowest id
    /// on ties.
    fn center(&self) -> Option<NodeId> {
        let m = self.members.len();
        if m == 1 {
            return Some(self.members[0]);
        }
        let mut best: Option<(f64, NodeId)> = None;
        for local in 0..m {
            let dist = self.shortest_from(local);
            let mean = dist.iter().sum::<f64>() / (m - 1) as f64;
            if !mean.is_finite() {
                continue;
            }
            if best.is_none_or(|(b, _)| mean < b) {
                best = Some((mean, self.members[local]));
            }
        }
        best.map(|(_, node)| node)
    }
}

/// Shortest distances from `source` to every member, using only edges
/// between members. Unreachable members map to `+inf`.
pub fn dijkstra_distances(
    graph: &WeightedGraph,
    members: &[NodeId],
    source: NodeId,
) -> Result<BTreeMap<NodeId, f64>> {
    dijkstra_distances_with(graph, members, source, one_minus_weight)
}

pub fn dijkstra_distances_with(
    graph: &WeightedGraph,
    members: &[NodeId],
    source: NodeId,
    length: impl Fn(f64) -> f64,
) -> Result<BTreeMap<NodeId, f64>> {
    let sub = InducedSubgraph::build(&graph.adjacency(), members, &length)?;
    let local = sub
        .local_index(source)
        .ok_or_else(|| Error::param(format!("source {source} is not one of the members")))?;
    let dist = sub.shortest_from(local);
    Ok(sub.members.iter().copied().zip(dist).collect())
}

/// Clusters of `labels` with their central variable filled in.
///
/// A cluster whose induced subgraph is disconnected has no member with a
/// finite mean distance; its center is left empty and a warning is logged.
pub fn cluster_centers(graph: &WeightedGraph, labels: &LabelArray) -> Result<CoreClusterSet> {
    cluster_centers_with(graph, labels, one_minus_weight)
}

pub fn cluster_centers_with(
    graph: &WeightedGraph,
    labels: &LabelArray,
    length: impl Fn(f64) -> f64 + Sync,
) -> Result<CoreClusterSet> {
    if labels.len() != graph.node_count() {
        return Err(Error::input(format!(
            "{} labels for a graph of {} nodes",
            labels.len(),
            graph.node_count()
        )));
    }
    let adjacency = graph.adjacency();
    let mut set = clusters_from_labels(labels);
    let centers: Vec<Option<NodeId>> = set
        .clusters
        .par_iter()
        .map(|c| InducedSubgraph::build(&adjacency, &c.members, &length).map(|s| s.center()))
        .collect::<Result<_>>()?;
    for (cluster, center) in set.clusters.iter_mut().zip(centers) {
        if center.is_none() {
            log::warn!(
                "cluster {} is disconnected in the similarity graph; no center selected",
                cluster.id
            );
        }
        cluster.center = center;
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn graph(p: usize, edges: &[(usize, usize, f64)]) -> WeightedGraph {
        WeightedGraph::from_edges(p, edges.iter().map(|&(u, v, w)| Edge::new(u, v, w))).unwrap()
    }

    #[test]
    fn single_edge_distance() {
        let g = graph(2, &[(0, 1, 0.8)]);
        let d = dijkstra_distances(&g, &[0, 1], 0).unwrap();
        assert_eq!(d[&0], 0.0);
        assert!((d[&1] - 0.2).abs() < 1e-12);
    }

    #[test]
    fn star_leaves_are_two_hops_apart() {
        let g = graph(4, &[(0, 1, 0.5), (0, 2, 0.5), (0, 3, 0.5)]);
        let d = dijkstra_distances(&g, &[0, 1, 2, 3], 1).unwrap();
        assert!((d[&2] - 1.0).abs() < 1e-12);
        assert!((d[&0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn paths_do_not_leave_the_members() {
        // 0 - 2 - 1 is short, but 2 is not a member.
        let g = graph(3, &[(0, 2, 0.99), (1, 2, 0.99), (0, 1, 0.1)]);
        let d = dijkstra_distances(&g, &[0, 1], 0).unwrap();
        assert!((d[&1] - 0.9).abs() < 1e-12);
        let g = graph(3, &[(0, 2, 0.99), (1, 2, 0.99)]);
        let d = dijkstra_distances(&g, &[0, 1], 0).unwrap();
        assert_eq!(d[&1], f64::INFINITY);
    }

    #[test]
    fn source_outside_members_is_rejected() {
        let g = graph(3, &[(0, 1, 0.5)]);
        assert!(matches!(
            dijkstra_distances(&g, &[0, 1], 2),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn hub_is_center_of_star() {
        let g = graph(5, &[(3, 0, 0.9), (3, 1, 0.9), (3, 2, 0.9), (3, 4, 0.9)]);
        let labels = LabelArray::new(vec![1; 5]).unwrap();
        let set = cluster_centers(&g, &labels).unwrap();
        assert_eq!(set.clusters[0].center, Some(3));
    }

    #[test]
    fn pair_center_is_lower_id() {
        let g = graph(4, &[(1, 3, 0.6), (0, 2, 0.4)]);
        let labels = LabelArray::new(vec![0, 1, 0, 1]).unwrap();
        let set = cluster_centers(&g, &labels).unwrap();
        assert_eq!(set.clusters[0].center, Some(1));
    }

    #[test]
    fn disconnected_cluster_has_no_center() {
        let g = graph(4, &[(0, 1, 0.6), (2, 3, 0.4)]);
        let labels = LabelArray::new(vec![1, 1, 1, 1]).unwrap();
        let set = cluster_centers(&g, &labels).unwrap();
        assert_eq!(set.clusters[0].center, None);
    }

    #[test]
    fn custom_length_transform() {
        let g = graph(3, &[(0, 1, 0.5), (1, 2, 0.25)]);
        let d = dijkstra_distances_with(&g, &[0, 1, 2], 0, |w| 1.0 / w).unwrap();
        assert!((d[&2] - 6.0).abs() < 1e-12);
        let bad = dijkstra_distances_with(&g, &[0, 1, 2], 0, |w| w - 1.0);
        assert!(bad.is_err());
    }

    #[test]
    fn label_length_mismatch_is_rejected() {
        let g = graph(3, &[(0, 1, 0.5)]);
        assert!(cluster_centers(&g, &LabelArray::new(vec![1, 1]).unwrap()).is_err());
    }
}
