mod common;

use common::*;
use coreclust::centrality::cluster_centers;
use coreclust::clustering::{core_clustering, core_clustering_greedy, ClusterParams};
use coreclust::synthgen::{simulate_cluster, simulate_dataset, SimConfig, SimRng};
use coreclust::{
    dijkstra_distances, external_score, internal_score, maximum_spanning_tree, pearson_abs_matrix,
    GroundTruth, LabelArray,
};
use rand::{Rng, SeedableRng};

fn rng(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

#[test]
fn forest_weight_matches_enumeration() {
    let mut r = rng(1);
    for _ in 0..50 {
        let p = r.random_range(1..=9);
        let g = random_graph_distinct(&mut r, p, 0.5);
        let forest = maximum_spanning_tree(&g);
        let (best, _) = brute_force_max_forest_weight(&g);
        assert_eq!(forest.total_weight(), best);
    }
}

#[test]
fn forest_matches_label_propagation_kruskal() {
    let mut r = rng(2);
    for i in 0..200 {
        let p = r.random_range(1..=30);
        let g = if i % 2 == 0 {
            random_graph_tied(&mut r, p, 0.3)
        } else {
            random_graph(&mut r, p, 0.3)
        };
        assert_eq!(
            maximum_spanning_tree(&g).edges(),
            label_propagation_forest(&g).as_slice()
        );
    }
}

#[test]
fn forest_preserves_components_and_cut_property() {
    let mut r = rng(3);
    for _ in 0..100 {
        let p = r.random_range(2..=25);
        let g = random_graph(&mut r, p, 0.2);
        let forest = maximum_spanning_tree(&g);
        assert_eq!(forest.edge_count(), p - component_count(p, g.edges()));
        let a = component_labels(p, g.edges());
        let b = component_labels(p, forest.edges());
        for u in 0..p {
            for v in 0..p {
                assert_eq!(a[u] == a[v], b[u] == b[v]);
            }
        }
        let adjacency = forest.adjacency();
        for e in g.edges() {
            if forest.edges().contains(e) {
                continue;
            }
            let lightest = path_min_weight(&adjacency, e.u, e.v).expect("endpoints connected");
            assert!(
                e.weight <= lightest,
                "{e:?} beats tree path minimum {lightest}"
            );
        }
    }
}

/// Smallest weight on the unique forest path from `from` to `to`.
fn path_min_weight(adjacency: &[Vec<(usize, f64)>], from: usize, to: usize) -> Option<f64> {
    let mut stack = vec![(from, usize::MAX, f64::INFINITY)];
    while let Some((node, parent, lightest)) = stack.pop() {
        if node == to {
            return Some(lightest);
        }
        for &(next, w) in &adjacency[node] {
            if next != parent {
                stack.push((next, node, lightest.min(w)));
            }
        }
    }
    None
}

#[test]
fn clustering_matches_signed_label_scan() {
    let mut r = rng(4);
    for i in 0..300 {
        let p = r.random_range(2..=40);
        let g = if i % 3 == 0 {
            random_graph_tied(&mut r, p, 0.3)
        } else {
            random_graph(&mut r, p, 0.3)
        };
        let tau = r.random_range(2..=8);
        let gamma = r.random_range(0.0..6.0);
        let params = ClusterParams::greedy(tau, gamma).unwrap();
        let forest = maximum_spanning_tree(&g);
        let standard = core_clustering(&forest, &params).unwrap();
        let greedy = core_clustering_greedy(&g, &params).unwrap();
        let expected_standard = if tau > p {
            vec![0; p]
        } else {
            standard_oracle(&g, tau)
        };
        let expected_greedy = if tau > p {
            vec![0; p]
        } else {
            greedy_oracle(&g, tau, params.scan_budget())
        };
        assert_eq!(standard.as_slice(), expected_standard.as_slice());
        assert_eq!(greedy.as_slice(), expected_greedy.as_slice());
    }
}

#[test]
fn dijkstra_matches_floyd_warshall() {
    let mut r = rng(5);
    for _ in 0..100 {
        let p = r.random_range(2..=20);
        let g = random_graph(&mut r, p, 0.4);
        let m = r.random_range(1..=p.min(10));
        let mut members: Vec<usize> = (0..p).collect();
        rand::seq::SliceRandom::shuffle(members.as_mut_slice(), &mut r);
        members.truncate(m);
        let fw = floyd_warshall(&g, &members);
        for (i, &source) in members.iter().enumerate() {
            let dist = dijkstra_distances(&g, &members, source).unwrap();
            assert_eq!(dist.len(), m);
            for (j, &target) in members.iter().enumerate() {
                let (a, b) = (dist[&target], fw[i][j]);
                if b.is_infinite() {
                    assert!(a.is_infinite());
                } else {
                    assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
                }
            }
        }
    }
}

#[test]
fn centers_minimise_mean_distance() {
    let mut r = rng(6);
    for _ in 0..100 {
        let p = r.random_range(2..=24);
        let g = random_graph(&mut r, p, 0.5);
        let labels: Vec<usize> = (0..p).map(|_| r.random_range(0..=3)).collect();
        let Ok(labels) = relabel(labels) else {
            continue;
        };
        let set = cluster_centers(&g, &labels).unwrap();
        for c in set.iter() {
            let expected = brute_force_center(&g, &c.members);
            match (c.center, expected) {
                (None, None) => {}
                (Some(got), Some(want)) => {
                    let d = floyd_warshall(&g, &c.members);
                    let mean = |n: usize| {
                        let i = c.members.iter().position(|&m| m == n).unwrap();
                        d[i].iter().sum::<f64>()
                    };
                    assert!((mean(got) - mean(want)).abs() <= 1e-12);
                    assert!(c.members.contains(&got));
                }
                other => panic!("center mismatch {other:?}"),
            }
        }
    }
}

/// Compacts arbitrary labels to 1..k in order of first appearance.
fn relabel(raw: Vec<usize>) -> coreclust::Result<LabelArray> {
    let mut map = std::collections::BTreeMap::new();
    let labels = raw
        .into_iter()
        .map(|l| {
            if l == 0 {
                0
            } else {
                let next = map.len() + 1;
                *map.entry(l).or_insert(next)
            }
        })
        .collect();
    LabelArray::new(labels)
}

#[test]
fn scores_match_brute_force() {
    let mut r = rng(7);
    for _ in 0..100 {
        let p = r.random_range(2..=15);
        let sim = random_similarity(&mut r, p);
        let k = r.random_range(1..=p);
        let truth_raw: Vec<usize> = (0..p).map(|_| r.random_range(1..=k)).collect();
        let truth_labels = relabel(truth_raw).unwrap();
        let truth = GroundTruth::new(truth_labels.as_slice().to_vec()).unwrap();
        let pred = relabel((0..p).map(|_| r.random_range(0..=4)).collect()).unwrap();
        let s = external_score(&truth, &pred).unwrap();
        assert!((s - brute_force_external(truth.assignment(), pred.as_slice())).abs() <= 1e-12);
        if pred.cluster_count() > 0 {
            let ic = internal_score(&sim, &pred).unwrap();
            let want = brute_force_internal(&sim, pred.as_slice());
            assert_eq!(ic.per_cluster.len(), want.len());
            for ((_, got), want) in ic.per_cluster.iter().zip(&want) {
                assert!((got - want).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn pearson_matches_two_pass_formula() {
    let mut r = rng(8);
    for _ in 0..20 {
        let n = r.random_range(2..=30);
        let p = r.random_range(1..=12);
        let columns: Vec<Vec<f64>> = (0..p)
            .map(|_| (0..n).map(|_| r.random_range(-5.0..5.0)).collect())
            .collect();
        let sim =
            pearson_abs_matrix(&coreclust::ObservationMatrix::from_columns(&columns).unwrap())
                .unwrap();
        for i in 0..p {
            for j in 0..p {
                let want = if i == j {
                    1.0
                } else {
                    sample_pearson(&columns[i], &columns[j]).abs()
                };
                assert!((sim.get(i, j) - want).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn noiseless_center_is_the_hub() {
    let mut hits = 0;
    for seed in 0..30 {
        let data = simulate_dataset(&SimConfig {
            n_obs: 100,
            cluster_sizes: vec![9],
            r_min: 0.5,
            r_max: 1.0,
            alpha: 0.0,
            seed,
        })
        .unwrap();
        let sim = pearson_abs_matrix(&data.observations).unwrap();
        let graph = coreclust::build_graph(&sim, 0.0).unwrap();
        let params = ClusterParams::standard(9).unwrap();
        let labels = core_clustering(&maximum_spanning_tree(&graph), &params).unwrap();
        let set = cluster_centers(&graph, &labels).unwrap();
        if set.iter().any(|c| c.center == Some(data.hubs[0])) {
            hits += 1;
        }
    }
    assert!(hits >= 27, "{hits}/30");
}

#[test]
fn truth_cluster_center_is_the_hub_under_noise() {
    let mut hits = 0;
    for seed in 0..30 {
        let mut r = rng(seed);
        let block = simulate_cluster(200, 10, 0.5, 1.0, 0.2, &mut r).unwrap();
        let sim = pearson_abs_matrix(&block.observations).unwrap();
        let graph = coreclust::build_graph(&sim, 0.0).unwrap();
        let labels = LabelArray::new(vec![1; 10]).unwrap();
        let set = cluster_centers(&graph, &labels).unwrap();
        if set.get(1).unwrap().center == Some(block.hub) {
            hits += 1;
        }
    }
    assert!(hits >= 27, "{hits}/30");
}
