use std::collections::BTreeMap;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use coreclust::synthgen::{self, Scenario, ScenarioOptions};
use coreclust::{centrality, clustering, evaluation, pipeline, similarity, spanning};
use coreclust::{ClusterParams, Edge, Error, GroundTruth, LabelArray, DEFAULT_GAMMA};

type SimulatedRows = (Vec<Vec<f64>>, Vec<usize>, Vec<usize>);
type ScenarioTuple = (String, String, usize, f64, f64, f64);

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn labels_from(values: Vec<usize>) -> PyResult<LabelArray> {
    LabelArray::new(values).map_err(to_py)
}

/// Symmetric similarity matrix with entries in [0, 1] and a unit diagonal.
#[pyclass(frozen, skip_from_py_object, module = "pycoreclust")]
#[derive(Clone)]
struct SimilarityMatrix {
    inner: coreclust::SimilarityMatrix,
}

#[pymethods]
impl SimilarityMatrix {
    #[new]
    fn new(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        let p = rows.len();
        if rows.iter().any(|r| r.len() != p) {
            return Err(PyValueError::new_err("similarity matrix must be square"));
        }
        let values = rows.into_iter().flatten().collect();
        let inner = coreclust::SimilarityMatrix::from_dense(p, values).map_err(to_py)?;
        Ok(SimilarityMatrix { inner })
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    fn get(&self, i: usize, j: usize) -> PyResult<f64> {
        let p = self.inner.size();
        if i >= p || j >= p {
            return Err(PyValueError::new_err(format!(
                "index ({i}, {j}) out of range for size {p}"
            )));
        }
        Ok(self.inner.get(i, j))
    }

    fn to_list(&self) -> Vec<Vec<f64>> {
        (0..self.inner.size())
            .map(|i| self.inner.row(i).to_vec())
            .collect()
    }

    fn __len__(&self) -> usize {
        self.inner.size()
    }

    fn __repr__(&self) -> String {
        format!("SimilarityMatrix(size={})", self.inner.size())
    }
}

/// Undirected graph with weights in (0, 1].
#[pyclass(frozen, skip_from_py_object, module = "pycoreclust")]
#[derive(Clone)]
struct WeightedGraph {
    inner: coreclust::WeightedGraph,
}

#[pymethods]
impl WeightedGraph {
    #[new]
    fn new(node_count: usize, edges: Vec<(usize, usize, f64)>) -> PyResult<Self> {
        let edges = edges.into_iter().map(|(u, v, w)| Edge::new(u, v, w));
        let inner = coreclust::WeightedGraph::from_edges(node_count, edges).map_err(to_py)?;
        Ok(WeightedGraph { inner })
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn edges(&self) -> Vec<(usize, usize, f64)> {
        self.inner
            .edges()
            .iter()
            .map(|e| (e.u, e.v, e.weight))
            .collect()
    }

    fn total_weight(&self) -> f64 {
        self.inner.total_weight()
    }

    fn __repr__(&self) -> String {
        format!(
            "WeightedGraph(node_count={}, edge_count={})",
            self.inner.node_count(),
            self.inner.edge_count()
        )
    }
}

/// A detected cluster with its central variable and internal score.
#[pyclass(frozen, get_all, skip_from_py_object, module = "pycoreclust")]
#[derive(Clone)]
struct CoreCluster {
    id: usize,
    members: Vec<usize>,
    center: Option<usize>,
    ic_score: Option<f64>,
}

#[pymethods]
impl CoreCluster {
    fn __len__(&self) -> usize {
        self.members.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "CoreCluster(id={}, size={}, center={:?})",
            self.id,
            self.members.len(),
            self.center
        )
    }
}

fn convert_clusters(set: coreclust::CoreClusterSet) -> Vec<CoreCluster> {
    set.clusters
        .into_iter()
        .map(|c| CoreCluster {
            id: c.id,
            members: c.members,
            center: c.center,
            ic_score: c.ic_score,
        })
        .collect()
}

/// Result of `run_pipeline`.
#[pyclass(frozen, get_all, module = "pycoreclust")]
struct PipelineResult {
    graph: WeightedGraph,
    forest: Option<WeightedGraph>,
    labels: Vec<usize>,
    clusters: Vec<CoreCluster>,
    mean_ic: Option<f64>,
}

/// Absolute Pearson correlation between the columns of `rows` (one row per
/// observation).
#[pyfunction]
fn pearson_abs_matrix(rows: Vec<Vec<f64>>) -> PyResult<SimilarityMatrix> {
    let obs = coreclust::ObservationMatrix::from_rows(&rows).map_err(to_py)?;
    let inner = similarity::pearson_abs_matrix(&obs).map_err(to_py)?;
    Ok(SimilarityMatrix { inner })
}

#[pyfunction]
#[pyo3(signature = (sim, threshold = 0.0))]
fn build_graph(sim: &SimilarityMatrix, threshold: f64) -> PyResult<WeightedGraph> {
    let inner = similarity::build_graph(&sim.inner, threshold).map_err(to_py)?;
    Ok(WeightedGraph { inner })
}

#[pyfunction]
fn maximum_spanning_tree(graph: &WeightedGraph) -> WeightedGraph {
    WeightedGraph {
        inner: spanning::maximum_spanning_tree(&graph.inner),
    }
}

/// Standard variant on a spanning forest; returns one label per node.
#[pyfunction]
fn core_clustering(py: Python<'_>, tree: &WeightedGraph, tau: usize) -> PyResult<Vec<usize>> {
    let params = ClusterParams::standard(tau).map_err(to_py)?;
    let labels = py
        .detach(|| clustering::core_clustering(&tree.inner, &params))
        .map_err(to_py)?;
    Ok(labels.into_vec())
}

/// Greedy variant on the full similarity graph.
#[pyfunction]
#[pyo3(signature = (graph, tau, gamma = DEFAULT_GAMMA))]
fn core_clustering_greedy(
    py: Python<'_>,
    graph: &WeightedGraph,
    tau: usize,
    gamma: f64,
) -> PyResult<Vec<usize>> {
    let params = ClusterParams::greedy(tau, gamma).map_err(to_py)?;
    let labels = py
        .detach(|| clustering::core_clustering_greedy(&graph.inner, &params))
        .map_err(to_py)?;
    Ok(labels.into_vec())
}

#[pyfunction]
fn cluster_centers(graph: &WeightedGraph, labels: Vec<usize>) -> PyResult<Vec<CoreCluster>> {
    let labels = labels_from(labels)?;
    let set = centrality::cluster_centers(&graph.inner, &labels).map_err(to_py)?;
    Ok(convert_clusters(set))
}

#[pyfunction]
fn dijkstra_distances(
    graph: &WeightedGraph,
    members: Vec<usize>,
    source: usize,
) -> PyResult<BTreeMap<usize, f64>> {
    centrality::dijkstra_distances(&graph.inner, &members, source).map_err(to_py)
}

/// External score of predicted labels against 1-based ground-truth labels.
#[pyfunction]
fn external_score(truth: Vec<usize>, labels: Vec<usize>) -> PyResult<f64> {
    let truth = GroundTruth::new(truth).map_err(to_py)?;
    evaluation::external_score(&truth, &labels_from(labels)?).map_err(to_py)
}

/// Internal score per cluster as `(cluster_id, ic)` pairs, plus their mean.
#[pyfunction]
fn internal_score(
    sim: &SimilarityMatrix,
    labels: Vec<usize>,
) -> PyResult<(Vec<(usize, f64)>, f64)> {
    let scores = evaluation::internal_score(&sim.inner, &labels_from(labels)?).map_err(to_py)?;
    Ok((scores.per_cluster, scores.mean))
}

/// Simulated clustered observations: `(rows, truth, hubs)`.
#[pyfunction]
#[pyo3(signature = (cluster_sizes, n_obs = 100, r_min = 0.5, r_max = 1.0, alpha = 0.0, seed = 0))]
fn simulate_dataset(
    cluster_sizes: Vec<usize>,
    n_obs: usize,
    r_min: f64,
    r_max: f64,
    alpha: f64,
    seed: u64,
) -> PyResult<SimulatedRows> {
    let data = synthgen::simulate_dataset(&coreclust::SimConfig {
        n_obs,
        cluster_sizes,
        r_min,
        r_max,
        alpha,
        seed,
    })
    .map_err(to_py)?;
    let obs = &data.observations;
    let rows = (0..obs.n_obs())
        .map(|i| (0..obs.n_vars()).map(|j| obs.get(i, j)).collect())
        .collect();
    Ok((rows, data.truth.assignment().to_vec(), data.hubs))
}

/// Benchmark scenario rows as `(scenario, variant, rep, parameter, score, wall_time_ms)`.
#[pyfunction]
#[pyo3(signature = (scenario, reps = 30, seed = 0, clusters = 2, alpha = None, gamma = DEFAULT_GAMMA, timing = false))]
#[allow(clippy::too_many_arguments)]
fn run_scenario(
    py: Python<'_>,
    scenario: &str,
    reps: usize,
    seed: u64,
    clusters: usize,
    alpha: Option<f64>,
    gamma: f64,
    timing: bool,
) -> PyResult<Vec<ScenarioTuple>> {
    let scenario: Scenario = scenario.parse().map_err(to_py)?;
    let opts = ScenarioOptions {
        reps,
        seed,
        clusters,
        alpha,
        gamma,
        record_timing: timing,
    };
    let rows = py
        .detach(|| synthgen::run_scenario(scenario, &opts))
        .map_err(to_py)?;
    Ok(rows
        .into_iter()
        .map(|r| {
            (
                r.scenario.to_string(),
                r.variant.name().to_string(),
                r.rep,
                r.parameter,
                r.score,
                r.wall_time_ms,
            )
        })
        .collect())
}

/// Graph, clustering, centers and internal scores in one call. `gamma=None`
/// runs the standard variant.
#[pyfunction]
#[pyo3(signature = (sim, tau, gamma = None, threshold = 0.0))]
fn run_pipeline(
    py: Python<'_>,
    sim: &SimilarityMatrix,
    tau: usize,
    gamma: Option<f64>,
    threshold: f64,
) -> PyResult<PipelineResult> {
    let config = pipeline::PipelineConfig {
        tau,
        gamma,
        threshold,
    };
    let out = py
        .detach(|| pipeline::run_pipeline(&sim.inner, &config))
        .map_err(to_py)?;
    Ok(PipelineResult {
        graph: WeightedGraph { inner: out.graph },
        forest: out.forest.map(|inner| WeightedGraph { inner }),
        labels: out.labels.into_vec(),
        clusters: convert_clusters(out.clusters),
        mean_ic: out.mean_ic,
    })
}

#[pymodule]
fn pycoreclust(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DEFAULT_GAMMA", DEFAULT_GAMMA)?;
    m.add_class::<SimilarityMatrix>()?;
    m.add_class::<WeightedGraph>()?;
    m.add_class::<CoreCluster>()?;
    m.add_class::<PipelineResult>()?;
    m.add_function(wrap_pyfunction!(pearson_abs_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(build_graph, m)?)?;
    m.add_function(wrap_pyfunction!(maximum_spanning_tree, m)?)?;
    m.add_function(wrap_pyfunction!(core_clustering, m)?)?;
    m.add_function(wrap_pyfunction!(core_clustering_greedy, m)?)?;
    m.add_function(wrap_pyfunction!(cluster_centers, m)?)?;
    m.add_function(wrap_pyfunction!(dijkstra_distances, m)?)?;
    m.add_function(wrap_pyfunction!(external_score, m)?)?;
    m.add_function(wrap_pyfunction!(internal_score, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_dataset, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(run_pipeline, m)?)?;
    Ok(())
}
