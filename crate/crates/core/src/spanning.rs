//! Maximum spanning forest by Kruskal's algorithm.

use rayon::slice::ParallelSliceMut;

use crate::graph::{Edge, WeightedGraph};
use crate::unionfind::DisjointSet;

/// Below this many edges the sort runs on the calling thread.
const PARALLEL_SORT_MIN: usize = 1 << 15;

/// Sorts edges heaviest first, ties in canonical `(u, v)` order.
pub fn sort_heaviest_first(edges: &mut [Edge]) {
    if edges.len() >= PARALLEL_SORT_MIN {
        edges.par_sort_unstable_by(Edge::cmp_heaviest_first);
    } else {
        edges.sort_unstable_by(Edge::cmp_heaviest_first);
    }
}

/// Sorts edges lightest first, ties in canonical `(u, v)` order.
pub fn sort_lightest_first(edges: &mut [Edge]) {
    if edges.len() >= PARALLEL_SORT_MIN {
        edges.par_sort_unstable_by(Edge::cmp_lightest_first);
    } else {
        edges.sort_unstable_by(Edge::cmp_lightest_first);
    }
}

/// Maximum-weight spanning forest of `graph`: one tree per connected
/// component, `p - components` edges in total.
///
/// Edges are scanned by decreasing weight and an edge is kept whenever its
/// endpoints are still in different trees. Equal weights are resolved in
/// canonical edge order, so the result is deterministic.
pub fn maximum_spanning_tree(graph: &WeightedGraph) -> WeightedGraph {
    let p = graph.node_count();
    let mut order = graph.edges().to_vec();
    sort_heaviest_first(&mut order);

    let mut forest = DisjointSet::new(p);
    let mut tree = Vec::with_capacity(p.saturating_sub(1));
    for e in order {
        if forest.union(e.u, e.v).is_some() {
            tree.push(e);
            if tree.len() + 1 == p {
                break;
            }
        }
    }
    tree.sort_unstable_by_key(|e| (e.u, e.v));
    let mut out = WeightedGraph::from_canonical_unchecked(p, tree);
    out.set_names(graph.node_names().map(<[String]>::to_vec));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triples(g: &WeightedGraph) -> Vec<(usize, usize, f64)> {
        g.edges().iter().map(|e| (e.u, e.v, e.weight)).collect()
    }

    #[test]
    fn drops_lightest_cycle_edge() {
        let g = WeightedGraph::from_edges(
            3,
            vec![
                Edge::new(0, 1, 0.9),
                Edge::new(0, 2, 0.5),
                Edge::new(1, 2, 0.7),
            ],
        )
        .unwrap();
        let t = maximum_spanning_tree(&g);
        assert_eq!(triples(&t), vec![(0, 1, 0.9), (1, 2, 0.7)]);
    }

    #[test]
    fn tree_input_is_returned_unchanged() {
        let g = WeightedGraph::from_edges(
            5,
            vec![
                Edge::new(0, 1, 0.2),
                Edge::new(1, 2, 0.9),
                Edge::new(1, 3, 0.4),
                Edge::new(3, 4, 0.6),
            ],
        )
        .unwrap();
        assert_eq!(maximum_spanning_tree(&g), g);
    }

    #[test]
    fn edgeless_input_gives_edgeless_forest() {
        let g = WeightedGraph::edgeless(4).unwrap();
        assert_eq!(maximum_spanning_tree(&g).edge_count(), 0);
    }

    #[test]
    fn disconnected_input_gives_one_tree_per_component() {
        let g = WeightedGraph::from_edges(
            6,
            vec![
                Edge::new(0, 1, 0.3),
                Edge::new(1, 2, 0.4),
                Edge::new(0, 2, 0.5),
                Edge::new(3, 4, 0.8),
            ],
        )
        .unwrap();
        let t = maximum_spanning_tree(&g);
        assert_eq!(triples(&t), vec![(0, 2, 0.5), (1, 2, 0.4), (3, 4, 0.8)]);
        assert_eq!(t.components(), g.components());
    }

    #[test]
    fn equal_weights_break_ties_canonically() {
        let g = WeightedGraph::from_edges(
            3,
            vec![
                Edge::new(1, 2, 0.5),
                Edge::new(0, 2, 0.5),
                Edge::new(0, 1, 0.5),
            ],
        )
        .unwrap();
        let t = maximum_spanning_tree(&g);
        assert_eq!(triples(&t), vec![(0, 1, 0.5), (0, 2, 0.5)]);
    }
}
