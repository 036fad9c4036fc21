//! Synthetic correlated datasets with known cluster structure, and the
//! benchmark scenarios built on them.
//!
//! Each cluster has a hub column drawn from a standard normal; satellite `j`
//! (`2 <= j <= n_C`) is the hub plus scaled gaussian noise
//! `sqrt(1/r_j^2 - 1) * eps` with `eps ~ N(0, alpha)` and
//! `r_j = r_min + (r_max - r_min) * (1 - j / n_C)`. With `alpha = 1` the
//! expected correlation between hub and satellite is exactly `r_j`.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::clustering::{core_clustering, core_clustering_greedy, ClusterParams, DEFAULT_GAMMA};
use crate::error::{Error, Result};
use crate::evaluation::{external_score, GroundTruth};
use crate::similarity::{build_graph, pearson_abs_matrix, ObservationMatrix};
use crate::spanning::maximum_spanning_tree;

/// Generator used everywhere in this module.
pub type SimRng = ChaCha8Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n_obs: usize,
    pub cluster_sizes: Vec<usize>,
    pub r_min: f64,
    pub r_max: f64,
    /// Standard deviation of the satellite noise.
    pub alpha: f64,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_obs == 0 {
            return Err(Error::param("n_obs must be positive"));
        }
        if self.cluster_sizes.is_empty() || self.cluster_sizes.contains(&0) {
            return Err(Error::param("every cluster needs at least one variable"));
        }
        validate_correlation_range(self.r_min, self.r_max)?;
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::param(format!(
                "alpha must be finite and non-negative, got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

fn validate_correlation_range(r_min: f64, r_max: f64) -> Result<()> {
    if !(r_min > 0.0 && r_min <= r_max && r_max <= 1.0) {
        return Err(Error::param(format!(
            "need 0 < r_min <= r_max <= 1, got r_min = {r_min}, r_max = {r_max}"
        )));
    }
    Ok(())
}

/// Target hub correlation of satellite `j` (1-based, `2..=n_c`).
pub fn target_correlation(j: usize, n_c: usize, r_min: f64, r_max: f64) -> f64 {
    r_min + (r_max - r_min) * (1.0 - j as f64 / n_c as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterBlock {
    pub observations: ObservationMatrix,
    /// Column of the hub inside the block.
    pub hub: usize,
}

/// One cluster: the hub in column 0 followed by `n_c - 1` satellites.
pub fn simulate_cluster(
    n_obs: usize,
    n_c: usize,
    r_min: f64,
    r_max: f64,
    alpha: f64,
    rng: &mut impl Rng,
) -> Result<ClusterBlock> {
    if n_obs == 0 || n_c == 0 {
        return Err(Error::param(
            "cluster needs at least one observation and one variable",
        ));
    }
    validate_correlation_range(r_min, r_max)?;
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::param(format!(
            "alpha must be finite and non-negative, got {alpha}"
        )));
    }
    let hub: Vec<f64> = (0..n_obs).map(|_| rng.sample(StandardNormal)).collect();
    let mut columns = Vec::with_capacity(n_c);
    columns.push(hub);
    for j in 2..=n_c {
        let r = target_correlation(j, n_c, r_min, r_max);
        let scale = (1.0 / (r * r) - 1.0).max(0.0).sqrt();
        let satellite = columns[0]
            .iter()
            .map(|&h| {
                let z: f64 = rng.sample(StandardNormal);
                h + scale * alpha * z
            })
            .collect();
        columns.push(satellite);
    }
    Ok(ClusterBlock {
        observations: ObservationMatrix::from_columns(&columns)?,
        hub: 0,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedDataset {
    pub observations: ObservationMatrix,
    pub truth: GroundTruth,
    /// Global column index of every cluster's hub.
    pub hubs: Vec<usize>,
}

/// Independent cluster blocks placed side by side. Deterministic in `seed`.
pub fn simulate_dataset(config: &SimConfig) -> Result<SimulatedDataset> {
    config.validate()?;
    let mut rng = SimRng::seed_from_u64(config.seed);
    let mut blocks = Vec::with_capacity(config.cluster_sizes.len());
    let mut hubs = Vec::with_capacity(config.cluster_sizes.len());
    let mut names = Vec::new();
    let mut offset = 0;
    for (k, &size) in config.cluster_sizes.iter().enumerate() {
        let block = simulate_cluster(
            config.n_obs,
            size,
            config.r_min,
            config.r_max,
            config.alpha,
            &mut rng,
        )?;
        hubs.push(offset + block.hub);
        names.extend((1..=size).map(|j| format!("c{}_v{}", k + 1, j)));
        offset += size;
        blocks.push(block.observations);
    }
    let observations = ObservationMatrix::hstack(&blocks)?.with_names(names)?;
    Ok(SimulatedDataset {
        observations,
        truth: GroundTruth::from_block_sizes(&config.cluster_sizes),
        hubs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// Noiseless recovery, 2 clusters of 2 or 5 clusters of 7.
    A,
    /// Same layouts over a grid of noise levels.
    B,
    /// 5 clusters of 50 or 60 variables over a grid of tau values.
    C,
    /// 5 clusters of 50 or 60 variables over a grid of sample sizes.
    D,
}

impl Scenario {
    pub fn tag(self) -> char {
        match self {
            Scenario::A => 'a',
            Scenario::B => 'b',
            Scenario::C => 'c',
            Scenario::D => 'd',
        }
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" => Ok(Scenario::A),
            "b" => Ok(Scenario::B),
            "c" => Ok(Scenario::C),
            "d" => Ok(Scenario::D),
            other => Err(Error::param(format!(
                "unknown scenario '{other}', expected one of a, b, c, d"
            ))),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Standard,
    Greedy,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Standard => "standard",
            Variant::Greedy => "greedy",
        }
    }
}

pub const R_MIN: f64 = 0.5;
pub const R_MAX: f64 = 1.0;
pub const DEFAULT_N_OBS: usize = 100;
pub const NOISE_GRID: [f64; 6] = [0.25, 0.5, 0.75, 1.0, 1.25, 1.5];
pub const TAU_GRID: [usize; 4] = [20, 30, 40, 50];
pub const SAMPLE_SIZE_GRID: [usize; 4] = [5, 10, 15, 30];
pub const GRANULARITY_NOISE: f64 = 0.5;
pub const SAMPLE_SIZE_NOISE: f64 = 3.0;
pub const SAMPLE_SIZE_TAU: usize = 20;
const LARGE_CLUSTER_SIZES: [usize; 2] = [50, 60];

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOptions {
    pub reps: usize,
    pub seed: u64,
    /// Cluster count for scenarios a and b: 2 (sizes 2) or 5 (sizes 7).
    pub clusters: usize,
    /// Overrides the scenario's noise level (a, c, d) or restricts b to it.
    pub alpha: Option<f64>,
    pub gamma: f64,
    pub record_timing: bool,
}

impl Default for ScenarioOptions {
    fn default() -> Self {
        ScenarioOptions {
            reps: 30,
            seed: 0,
            clusters: 2,
            alpha: None,
            gamma: DEFAULT_GAMMA,
            record_timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioRow {
    pub scenario: Scenario,
    pub variant: Variant,
    pub rep: usize,
    /// Swept value: K for a, alpha for b, tau for c, N for d.
    pub parameter: f64,
    pub score: f64,
    pub wall_time_ms: f64,
}

/// One point of a scenario grid.
#[derive(Debug, Clone, PartialEq)]
struct GridPoint {
    parameter: f64,
    n_obs: usize,
    alpha: f64,
    tau: Option<usize>,
    large_clusters: bool,
}

fn grid(scenario: Scenario, opts: &ScenarioOptions) -> Result<Vec<GridPoint>> {
    let small = |alpha: f64| GridPoint {
        parameter: alpha,
        n_obs: DEFAULT_N_OBS,
        alpha,
        tau: None,
        large_clusters: false,
    };
    Ok(match scenario {
        Scenario::A => vec![GridPoint {
            parameter: opts.clusters as f64,
            ..small(opts.alpha.unwrap_or(0.0))
        }],
        Scenario::B => match opts.alpha {
            Some(a) => vec![small(a)],
            None => NOISE_GRID.iter().map(|&a| small(a)).collect(),
        },
        Scenario::C => TAU_GRID
            .iter()
            .map(|&tau| GridPoint {
                parameter: tau as f64,
                n_obs: DEFAULT_N_OBS,
                alpha: opts.alpha.unwrap_or(GRANULARITY_NOISE),
                tau: Some(tau),
                large_clusters: true,
            })
            .collect(),
        Scenario::D => SAMPLE_SIZE_GRID
            .iter()
            .map(|&n| GridPoint {
                parameter: n as f64,
                n_obs: n,
                alpha: opts.alpha.unwrap_or(SAMPLE_SIZE_NOISE),
                tau: Some(SAMPLE_SIZE_TAU),
                large_clusters: true,
            })
            .collect(),
    })
}

fn small_layout(clusters: usize) -> Result<Vec<usize>> {
    match clusters {
        2 => Ok(vec![2, 2]),
        5 => Ok(vec![7; 5]),
        k => Err(Error::param(format!(
            "scenarios a and b use 2 or 5 clusters, got {k}"
        ))),
    }
}

/// SplitMix64 step, used to derive independent per-rep seeds.
fn mix_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of rep `rep`; shared by every grid point so that a rep sees the same
/// underlying draws across the sweep.
pub fn rep_seed(seed: u64, rep: usize) -> u64 {
    mix_seed(seed, rep as u64)
}

/// Dataset used by `scenario` at grid position `point` for `rep`.
fn scenario_dataset(
    point: &GridPoint,
    opts: &ScenarioOptions,
    rep: usize,
) -> Result<SimulatedDataset> {
    let seed = rep_seed(opts.seed, rep);
    let cluster_sizes = if point.large_clusters {
        let mut rng = SimRng::seed_from_u64(mix_seed(seed, u64::MAX));
        (0..5)
            .map(|_| *LARGE_CLUSTER_SIZES.choose(&mut rng).expect("non-empty"))
            .collect()
    } else {
        small_layout(opts.clusters)?
    };
    simulate_dataset(&SimConfig {
        n_obs: point.n_obs,
        cluster_sizes,
        r_min: R_MIN,
        r_max: R_MAX,
        alpha: point.alpha,
        seed,
    })
}

fn run_point(
    scenario: Scenario,
    point: &GridPoint,
    opts: &ScenarioOptions,
    rep: usize,
) -> Result<[ScenarioRow; 2]> {
    let data = scenario_dataset(point, opts, rep)?;
    let sim = pearson_abs_matrix(&data.observations)?;
    let graph = build_graph(&sim, 0.0)?;
    let tau = point
        .tau
        .unwrap_or_else(|| data.truth.len() / data.truth.cluster_count());
    let params = ClusterParams::greedy(tau, opts.gamma)?;

    let start = Instant::now();
    let standard = core_clustering(&maximum_spanning_tree(&graph), &params)?;
    let standard_ms = start.elapsed().as_secs_f64() * 1e3;

    let start = Instant::now();
    let greedy = core_clustering_greedy(&graph, &params)?;
    let greedy_ms = start.elapsed().as_secs_f64() * 1e3;

    let row = |variant, labels, ms: f64| -> Result<ScenarioRow> {
        Ok(ScenarioRow {
            scenario,
            variant,
            rep,
            parameter: point.parameter,
            score: external_score(&data.truth, labels)?,
            wall_time_ms: if opts.record_timing { ms } else { 0.0 },
        })
    };
    Ok([
        row(Variant::Standard, &standard, standard_ms)?,
        row(Variant::Greedy, &greedy, greedy_ms)?,
    ])
}

/// Runs every grid point of `scenario` for `opts.reps` repetitions.
///
/// Rows are ordered by grid point, then rep, then variant (standard first).
pub fn run_scenario(scenario: Scenario, opts: &ScenarioOptions) -> Result<Vec<ScenarioRow>> {
    if opts.reps == 0 {
        return Err(Error::param("reps must be positive"));
    }
    if matches!(scenario, Scenario::A | Scenario::B) {
        small_layout(opts.clusters)?;
    }
    let points = grid(scenario, opts)?;
    let jobs: Vec<(usize, usize)> = (0..points.len())
        .flat_map(|p| (0..opts.reps).map(move |r| (p, r)))
        .collect();
    let rows: Vec<[ScenarioRow; 2]> = jobs
        .par_iter()
        .map(|&(p, r)| run_point(scenario, &points[p], opts, r))
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}
