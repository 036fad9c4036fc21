//! Independent reference implementations used by the integration tests and
//! the acceptance suite. None of them share code with the library beyond the
//! public data types.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use coreclust::{Edge, SimilarityMatrix, WeightedGraph};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random graph on `p` nodes where each pair is present with probability
/// `density`. Weights are distinct multiples of 1/1024 so that sums are exact.
pub fn random_graph_distinct(rng: &mut impl Rng, p: usize, density: f64) -> WeightedGraph {
    let mut pairs = Vec::new();
    for u in 0..p {
        for v in u + 1..p {
            if rng.random_bool(density) {
                pairs.push((u, v));
            }
        }
    }
    let mut ticks: Vec<u32> = (1..=1024).collect();
    ticks.shuffle(rng);
    let edges = pairs
        .into_iter()
        .zip(ticks)
        .map(|((u, v), t)| Edge::new(u, v, t as f64 / 1024.0));
    WeightedGraph::from_edges(p, edges).unwrap()
}

/// Random graph whose weights come from a small set, so ties are common.
pub fn random_graph_tied(rng: &mut impl Rng, p: usize, density: f64) -> WeightedGraph {
    let mut edges = Vec::new();
    for u in 0..p {
        for v in u + 1..p {
            if rng.random_bool(density) {
                let w = rng.random_range(1..=4) as f64 / 4.0;
                edges.push(Edge::new(u, v, w));
            }
        }
    }
    WeightedGraph::from_edges(p, edges).unwrap()
}

/// Random graph with continuous weights in (0, 1].
pub fn random_graph(rng: &mut impl Rng, p: usize, density: f64) -> WeightedGraph {
    let mut edges = Vec::new();
    for u in 0..p {
        for v in u + 1..p {
            if rng.random_bool(density) {
                let w = 1.0 - rng.random::<f64>();
                edges.push(Edge::new(u, v, w));
            }
        }
    }
    WeightedGraph::from_edges(p, edges).unwrap()
}

/// Random symmetric similarity matrix with unit diagonal.
pub fn random_similarity(rng: &mut impl Rng, p: usize) -> SimilarityMatrix {
    let mut values = vec![0.0; p * p];
    for i in 0..p {
        values[i * p + i] = 1.0;
        for j in i + 1..p {
            let s = rng.random::<f64>();
            values[i * p + j] = s;
            values[j * p + i] = s;
        }
    }
    SimilarityMatrix::from_dense(p, values).unwrap()
}

/// Connected components by repeated label relabelling.
pub fn component_labels(p: usize, edges: &[Edge]) -> Vec<usize> {
    let mut label: Vec<usize> = (0..p).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for e in edges {
            let m = label[e.u].min(label[e.v]);
            if label[e.u] != m || label[e.v] != m {
                label[e.u] = m;
                label[e.v] = m;
                changed = true;
            }
        }
    }
    label
}

pub fn component_count(p: usize, edges: &[Edge]) -> usize {
    component_labels(p, edges)
        .into_iter()
        .collect::<BTreeSet<_>>()
        .len()
}

/// Largest total weight over every spanning forest, by backtracking over all
/// acyclic edge subsets of the right size. Returns the weight and the number
/// of forests visited.
pub fn brute_force_max_forest_weight(graph: &WeightedGraph) -> (f64, usize) {
    let p = graph.node_count();
    let edges = graph.edges();
    let target = p - component_count(p, edges);
    let mut best = f64::NEG_INFINITY;
    let mut visited = 0usize;
    let mut label: Vec<usize> = (0..p).collect();

    #[allow(clippy::too_many_arguments)]
    fn rec(
        edges: &[Edge],
        idx: usize,
        chosen: usize,
        target: usize,
        weight: f64,
        label: &mut Vec<usize>,
        best: &mut f64,
        visited: &mut usize,
    ) {
        if chosen == target {
            *visited += 1;
            if weight > *best {
                *best = weight;
            }
            return;
        }
        if idx == edges.len() || edges.len() - idx < target - chosen {
            return;
        }
        let e = edges[idx];
        let (lu, lv) = (label[e.u], label[e.v]);
        if lu != lv {
            let saved = label.clone();
            for l in label.iter_mut() {
                if *l == lv {
                    *l = lu;
                }
            }
            rec(
                edges,
                idx + 1,
                chosen + 1,
                target,
                weight + e.weight,
                label,
                best,
                visited,
            );
            *label = saved;
        }
        rec(edges, idx + 1, chosen, target, weight, label, best, visited);
    }

    rec(
        edges,
        0,
        0,
        target,
        0.0,
        &mut label,
        &mut best,
        &mut visited,
    );
    (if target == 0 { 0.0 } else { best }, visited)
}

/// Kruskal with explicit label propagation for the connectivity test.
pub fn label_propagation_forest(graph: &WeightedGraph) -> Vec<Edge> {
    let p = graph.node_count();
    let mut order = graph.edges().to_vec();
    order.sort_by(Edge::cmp_heaviest_first);
    let mut label: Vec<usize> = (0..p).collect();
    let mut forest = Vec::new();
    for e in order {
        let (lu, lv) = (label[e.u], label[e.v]);
        if lu != lv {
            for l in label.iter_mut() {
                if *l == lv {
                    *l = lu;
                }
            }
            forest.push(e);
        }
    }
    forest.sort_by_key(|e| (e.u, e.v));
    forest
}

/// Merge/freeze scan written with signed group labels: positive labels are
/// open groups, negative labels are frozen cores, and the final pass flips
/// cores positive and clears open groups.
pub fn label_propagation_scan(p: usize, tau: usize, edges: &[Edge]) -> Vec<usize> {
    let mut label: Vec<i64> = (1..=p as i64).collect();
    let mut core: i64 = -1;
    for e in edges {
        let (lu, lv) = (label[e.u], label[e.v]);
        if lu == lv || lu < 0 || lv < 0 {
            continue;
        }
        for l in label.iter_mut() {
            if *l == lv {
                *l = lu;
            }
        }
        let size = label.iter().filter(|&&l| l == lu).count();
        if (tau..=2 * tau - 1).contains(&size) {
            for l in label.iter_mut() {
                if *l == lu {
                    *l = core;
                }
            }
            core -= 1;
        }
    }
    label
        .into_iter()
        .map(|l| if l < 0 { (-l) as usize } else { 0 })
        .collect()
}

pub fn standard_oracle(graph: &WeightedGraph, tau: usize) -> Vec<usize> {
    let mut forest = label_propagation_forest(graph);
    forest.sort_by(Edge::cmp_lightest_first);
    label_propagation_scan(graph.node_count(), tau, &forest)
}

pub fn greedy_oracle(graph: &WeightedGraph, tau: usize, budget: usize) -> Vec<usize> {
    let mut edges = graph.edges().to_vec();
    edges.sort_by(Edge::cmp_heaviest_first);
    edges.truncate(budget);
    label_propagation_scan(graph.node_count(), tau, &edges)
}

/// All-pairs shortest paths restricted to `members`, edge length `1 - w`.
pub fn floyd_warshall(graph: &WeightedGraph, members: &[usize]) -> Vec<Vec<f64>> {
    let m = members.len();
    let index: BTreeMap<usize, usize> = members.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let mut d = vec![vec![f64::INFINITY; m]; m];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for e in graph.edges() {
        if let (Some(&a), Some(&b)) = (index.get(&e.u), index.get(&e.v)) {
            let len = 1.0 - e.weight;
            if len < d[a][b] {
                d[a][b] = len;
                d[b][a] = len;
            }
        }
    }
    for k in 0..m {
        for i in 0..m {
            for j in 0..m {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Member with the smallest mean distance to the others, lowest id on ties.
pub fn brute_force_center(graph: &WeightedGraph, members: &[usize]) -> Option<usize> {
    let d = floyd_warshall(graph, members);
    let mut best: Option<(f64, usize)> = None;
    for (i, &node) in members.iter().enumerate() {
        let total: f64 = d[i].iter().sum();
        if !total.is_finite() {
            continue;
        }
        let mean = if members.len() > 1 {
            total / (members.len() - 1) as f64
        } else {
            0.0
        };
        if best.is_none_or(|(b, _)| mean < b) {
            best = Some((mean, node));
        }
    }
    best.map(|(_, n)| n)
}

/// Sets of nodes per nonzero label.
pub fn label_sets(labels: &[usize]) -> BTreeMap<usize, BTreeSet<usize>> {
    let mut sets: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (node, &l) in labels.iter().enumerate() {
        if l != 0 {
            sets.entry(l).or_default().insert(node);
        }
    }
    sets
}

/// External score computed from explicit set intersections.
pub fn brute_force_external(truth: &[usize], predicted: &[usize]) -> f64 {
    let truth_sets = label_sets(truth);
    let pred_sets = label_sets(predicted);
    let total: usize = pred_sets
        .values()
        .map(|c_hat| {
            truth_sets
                .values()
                .map(|c| c.intersection(c_hat).count())
                .max()
                .unwrap_or(0)
        })
        .sum();
    total as f64 / truth.len() as f64
}

/// Internal score per cluster in label order, from direct matrix scans.
pub fn brute_force_internal(sim: &SimilarityMatrix, predicted: &[usize]) -> Vec<f64> {
    let p = sim.size();
    let mut global = 0.0f64;
    for i in 0..p {
        for j in 0..p {
            if i != j {
                global = global.max(sim.get(i, j));
            }
        }
    }
    label_sets(predicted)
        .values()
        .map(|members| {
            let mut weakest = f64::INFINITY;
            for &i in members {
                let mut strongest = 0.0f64;
                for &k in members {
                    if k != i {
                        strongest = strongest.max(sim.get(i, k));
                    }
                }
                weakest = weakest.min(strongest);
            }
            if global > 0.0 {
                weakest / global
            } else {
                0.0
            }
        })
        .collect()
}

pub fn sample_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// First and third quartiles by linear interpolation.
pub fn quartiles(values: &mut [f64]) -> (f64, f64) {
    values.sort_by(f64::total_cmp);
    let q = |f: f64| {
        let pos = f * (values.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        values[lo] + (values[hi] - values[lo]) * (pos - lo as f64)
    };
    (q(0.25), q(0.75))
}
