//! End-to-end clustering run: similarity graph, CORE-clusters, centers and
//! internal scores.

use crate::centrality::cluster_centers;
use crate::clustering::{core_clustering, core_clustering_greedy, ClusterParams, DEFAULT_GAMMA};
use crate::error::Result;
use crate::evaluation::{attach_internal_scores, internal_score};
use crate::graph::{CoreClusterSet, LabelArray, WeightedGraph};
use crate::similarity::{build_graph, SimilarityMatrix};
use crate::spanning::maximum_spanning_tree;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub tau: usize,
    /// `None` runs the standard variant, `Some(gamma)` the greedy one.
    pub gamma: Option<f64>,
    pub threshold: f64,
}

impl PipelineConfig {
    pub fn standard(tau: usize) -> Self {
        PipelineConfig {
            tau,
            gamma: None,
            threshold: 0.0,
        }
    }

    pub fn greedy(tau: usize, gamma: f64) -> Self {
        PipelineConfig {
            tau,
            gamma: Some(gamma),
            threshold: 0.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineResult {
    pub graph: WeightedGraph,
    /// Maximum spanning forest; only built by the standard variant.
    pub forest: Option<WeightedGraph>,
    pub labels: LabelArray,
    pub clusters: CoreClusterSet,
    pub mean_ic: Option<f64>,
}

impl PipelineResult {
    /// The graph the clusters were grown on.
    pub fn substrate(&self) -> &WeightedGraph {
        self.forest.as_ref().unwrap_or(&self.graph)
    }
}

pub fn run_pipeline(sim: &SimilarityMatrix, config: &PipelineConfig) -> Result<PipelineResult> {
    let params = ClusterParams {
        tau: config.tau,
        gamma: config.gamma.unwrap_or(DEFAULT_GAMMA),
    };
    params.validate()?;
    let graph = build_graph(sim, config.threshold)?;
    let (labels, forest) = match config.gamma {
        None => {
            let forest = maximum_spanning_tree(&graph);
            (core_clustering(&forest, &params)?, Some(forest))
        }
        Some(_) => (core_clustering_greedy(&graph, &params)?, None),
    };
    let mut clusters = cluster_centers(&graph, &labels)?;
    let mean_ic = if clusters.is_empty() {
        None
    } else {
        let scores = internal_score(sim, &labels)?;
        attach_internal_scores(&mut clusters, &scores);
        Some(scores.mean)
    };
    Ok(PipelineResult {
        graph,
        forest,
        labels,
        clusters,
        mean_ic,
    })
}
