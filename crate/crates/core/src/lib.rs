//! Detection of CORE-clusters: groups of between `tau` and `2*tau - 1`
//! variables in which every member is strongly similar to at least one other
//! member, together with each group's central variable.
//!
//! The usual pipeline is
//!
//! 1. [`similarity::pearson_abs_matrix`] on the observations,
//! 2. [`similarity::build_graph`] to get the similarity graph,
//! 3. either [`spanning::maximum_spanning_tree`] followed by
//!    [`clustering::core_clustering`], or [`clustering::core_clustering_greedy`]
//!    directly on the graph,
//! 4. [`centrality::cluster_centers`] and the scores in [`evaluation`].
//!
//! [`pipeline::run_pipeline`] strings these together.

pub mod centrality;
pub mod clustering;
pub mod error;
pub mod evaluation;
pub mod graph;
pub mod io;
pub mod pipeline;
pub mod similarity;
pub mod spanning;
pub mod synthgen;
pub mod unionfind;

pub use centrality::{cluster_centers, dijkstra_distances};
pub use clustering::{core_clustering, core_clustering_greedy, ClusterParams, DEFAULT_GAMMA};
pub use error::{Error, Result};
pub use evaluation::{external_score, internal_score, GroundTruth, InternalScores};
pub use graph::{
    clusters_from_labels, CoreCluster, CoreClusterSet, Edge, LabelArray, NodeId, WeightedGraph,
};
pub use pipeline::{run_pipeline, PipelineConfig, PipelineResult};
pub use similarity::{build_graph, pearson_abs_matrix, ObservationMatrix, SimilarityMatrix};
pub use spanning::maximum_spanning_tree;
pub use synthgen::{
    run_scenario, simulate_cluster, simulate_dataset, Scenario, ScenarioOptions, SimConfig,
};
