//! Cluster quality scores.
//!
//! The external score compares predicted clusters with a ground truth and
//! does not penalise unlabelled nodes beyond the missing overlap. The internal
//! score only needs the similarity matrix.

use crate::error::{Error, Result};
use crate::graph::{clusters_from_labels, CoreClusterSet, LabelArray};
use crate::similarity::SimilarityMatrix;

/// Ground-truth assignment: every node belongs to a cluster `1..=K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    assignment: Vec<usize>,
    cluster_count: usize,
}

impl GroundTruth {
    pub fn new(assignment: Vec<usize>) -> Result<Self> {
        if let Some(node) = assignment.iter().position(|&c| c == 0) {
            return Err(Error::input(format!(
                "ground truth leaves node {node} unassigned"
            )));
        }
        let cluster_count = assignment.iter().copied().max().unwrap_or(0);
        Ok(GroundTruth {
            assignment,
            cluster_count,
        })
    }

    /// Consecutive blocks of the given sizes, numbered from 1.
    pub fn from_block_sizes(sizes: &[usize]) -> Self {
        let assignment = sizes
            .iter()
            .enumerate()
            .flat_map(|(k, &s)| std::iter::repeat_n(k + 1, s))
            .collect();
        GroundTruth {
            assignment,
            cluster_count: sizes.len(),
        }
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn cluster_count(&self) -> usize {
        self.cluster_count
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }
}

/// `S = (1/p) * sum_j max_k |C_k ∩ Ĉ_j|` over predicted clusters `Ĉ_j`.
pub fn external_score(truth: &GroundTruth, predicted: &LabelArray) -> Result<f64> {
    let p = truth.len();
    if predicted.len() != p {
        return Err(Error::input(format!(
            "ground truth covers {p} nodes but {} labels were predicted",
            predicted.len()
        )));
    }
    if p == 0 {
        return Ok(0.0);
    }
    let k_hat = predicted.cluster_count();
    let k = truth.cluster_count();
    let mut overlap = vec![0usize; k_hat * k];
    for (&pred, &t) in predicted.as_slice().iter().zip(truth.assignment()) {
        if pred > 0 {
            overlap[(pred - 1) * k + (t - 1)] += 1;
        }
    }
    let total: usize = overlap
        .chunks(k.max(1))
        .take(k_hat)
        .map(|row| row.iter().copied().max().unwrap_or(0))
        .sum();
    Ok(total as f64 / p as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InternalScores {
    /// `(cluster id, IC)` in cluster-id order.
    pub per_cluster: Vec<(usize, f64)>,
    pub mean: f64,
}

/// Strength of each cluster's weakest member.
///
/// For every member the strongest similarity to another member is taken; the
/// smallest of those is divided by the largest off-diagonal similarity of the
/// whole matrix.
pub fn internal_score(sim: &SimilarityMatrix, predicted: &LabelArray) -> Result<InternalScores> {
    if predicted.len() != sim.size() {
        return Err(Error::input(format!(
            "{} labels for a {}x{} similarity matrix",
            predicted.len(),
            sim.size(),
            sim.size()
        )));
    }
    let set = clusters_from_labels(predicted);
    if set.is_empty() {
        return Err(Error::input("internal score needs at least one cluster"));
    }
    let global = sim.max_off_diagonal();
    let per_cluster: Vec<(usize, f64)> = set
        .iter()
        .map(|c| {
            let weakest = c
                .members
                .iter()
                .map(|&i| {
                    c.members
                        .iter()
                        .filter(|&&k| k != i)
                        .map(|&k| sim.get(i, k))
                        .fold(0.0f64, f64::max)
                })
                .fold(f64::INFINITY, f64::min);
            let ic = if global > 0.0 && weakest.is_finite() {
                weakest / global
            } else {
                0.0
            };
            (c.id, ic)
        })
        .collect();
    let mean = per_cluster.iter().map(|&(_, s)| s).sum::<f64>() / per_cluster.len() as f64;
    Ok(InternalScores { per_cluster, mean })
}

/// Copies internal scores onto the matching clusters of `set`.
pub fn attach_internal_scores(set: &mut CoreClusterSet, scores: &InternalScores) {
    for (id, ic) in &scores.per_cluster {
        if let Some(c) = set.clusters.iter_mut().find(|c| c.id == *id) {
            c.ic_score = Some(*ic);
        }
    }
}
