use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use coreclust::io::{self as cio, Summary};
use coreclust::synthgen::{run_scenario, simulate_dataset, Scenario, ScenarioOptions, SimConfig};
use coreclust::{
    external_score, internal_score, pearson_abs_matrix, run_pipeline, PipelineConfig,
    SimilarityMatrix, DEFAULT_GAMMA,
};

#[derive(Parser, Debug)]
#[command(
    name = "coreclust",
    version,
    about = "Detect CORE-clusters and their central variables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum InputKind {
    /// Observation CSV: header of variable names, one row per observation.
    Obs,
    /// Square symmetric similarity CSV.
    Sim,
    /// Sparse observation triplets `row,col,value`.
    Sparse,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ExportFormat {
    Dot,
    Graphml,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cluster a dataset and write labels, centers and a summary.
    Cluster {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        tau: usize,
        /// Label CSV; centers and summary are written next to it.
        #[arg(long)]
        output: PathBuf,
        /// Run the greedy variant with this scan factor.
        #[arg(long)]
        gamma: Option<f64>,
        /// Run the greedy variant with the default scan factor.
        #[arg(long, conflicts_with = "gamma")]
        greedy: bool,
        #[arg(long, default_value_t = 0.0)]
        threshold: f64,
        #[arg(long, value_enum, default_value_t = InputKind::Sim)]
        input_kind: InputKind,
        #[arg(long, value_enum)]
        export: Option<ExportFormat>,
        /// Also write the similarity matrix that was clustered.
        #[arg(long)]
        dump_similarity: Option<PathBuf>,
        #[arg(long)]
        centers: Option<PathBuf>,
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Run a synthetic benchmark scenario and write per-rep scores.
    Simulate {
        #[arg(long)]
        scenario: String,
        #[arg(long, default_value_t = 30)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
        /// Cluster layout for scenarios a and b: 2 or 5.
        #[arg(long, default_value_t = 2)]
        clusters: usize,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_GAMMA)]
        gamma: f64,
        /// Record wall time per run (makes the output nondeterministic).
        #[arg(long)]
        timing: bool,
    },
    /// Score a label file against a ground truth and/or a similarity matrix.
    Evaluate {
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long)]
        similarity: Option<PathBuf>,
        /// Defaults to standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write a synthetic observation CSV and its ground-truth labels.
    Generate {
        /// Comma-separated cluster sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        n_obs: usize,
        #[arg(long, default_value_t = 0.5)]
        r_min: f64,
        #[arg(long, default_value_t = 1.0)]
        r_max: f64,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        truth: PathBuf,
    },
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(file))
}

fn sibling(output: &Path, suffix: &str) -> PathBuf {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "coreclust".into());
    output.with_file_name(format!("{stem}{suffix}"))
}

/// Every output is rendered before any file is touched.
fn write_all(files: Vec<(PathBuf, Vec<u8>)>) -> Result<()> {
    for (path, bytes) in files {
        fs::write(&path, bytes).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

fn load_similarity(path: &Path, kind: InputKind) -> Result<SimilarityMatrix> {
    let reader = open(path)?;
    let sim = match kind {
        InputKind::Sim => cio::read_similarity_csv(reader)?,
        InputKind::Obs => pearson_abs_matrix(&cio::read_observation_csv(reader)?)?,
        InputKind::Sparse => pearson_abs_matrix(&cio::read_sparse_triplets(reader)?)?,
    };
    Ok(sim)
}

#[allow(clippy::too_many_arguments)]
fn cmd_cluster(
    input: &Path,
    tau: usize,
    output: &Path,
    gamma: Option<f64>,
    threshold: f64,
    kind: InputKind,
    export: Option<ExportFormat>,
    dump_similarity: Option<&Path>,
    centers: Option<PathBuf>,
    summary: Option<PathBuf>,
) -> Result<()> {
    if tau < 2 {
        bail!("--tau must be at least 2, got {tau}");
    }
    let sim = load_similarity(input, kind)?;
    let config = PipelineConfig {
        tau,
        gamma,
        threshold,
    };
    let result = run_pipeline(&sim, &config)?;
    let names = sim.names();

    let mut files = Vec::new();
    let mut labels_csv = Vec::new();
    cio::write_labels(&mut labels_csv, &result.labels, &result.clusters, names)?;
    files.push((output.to_path_buf(), labels_csv));

    let mut centers_csv = Vec::new();
    cio::write_cluster_report(&mut centers_csv, &result.clusters, names)?;
    files.push((
        centers.unwrap_or_else(|| sibling(output, ".centers.csv")),
        centers_csv,
    ));

    let mut summary_csv = Vec::new();
    let summary_row = Summary {
        clusters: result.clusters.len(),
        external_score: None,
        mean_ic: result.mean_ic,
    };
    cio::write_summary(&mut summary_csv, &summary_row)?;
    files.push((
        summary.unwrap_or_else(|| sibling(output, ".summary.csv")),
        summary_csv.clone(),
    ));

    if let Some(format) = export {
        let mut buf = Vec::new();
        let path = match format {
            ExportFormat::Dot => {
                cio::write_dot(&mut buf, result.substrate(), &result.labels)?;
                sibling(output, ".dot")
            }
            ExportFormat::Graphml => {
                cio::write_graphml(&mut buf, result.substrate(), &result.labels)?;
                sibling(output, ".graphml")
            }
        };
        files.push((path, buf));
    }
    if let Some(path) = dump_similarity {
        let mut buf = Vec::new();
        cio::write_similarity_csv(&mut buf, &sim)?;
        files.push((path.to_path_buf(), buf));
    }
    write_all(files)?;
    io::stdout().write_all(&summary_csv)?;
    Ok(())
}

fn cmd_simulate(scenario: &str, opts: ScenarioOptions, output: &Path) -> Result<()> {
    let scenario: Scenario = scenario.parse()?;
    let rows = run_scenario(scenario, &opts)?;
    let mut buf = Vec::new();
    cio::write_scenario_rows(&mut buf, &rows)?;
    write_all(vec![(output.to_path_buf(), buf)])
}

fn cmd_evaluate(
    labels: &Path,
    truth: Option<&Path>,
    similarity: Option<&Path>,
    output: Option<&Path>,
) -> Result<()> {
    if truth.is_none() && similarity.is_none() {
        bail!("evaluate needs --truth, --similarity or both");
    }
    let labels = cio::read_labels(open(labels)?)?;
    let mut buf = Vec::new();
    let mut summary = Summary {
        clusters: labels.cluster_count(),
        external_score: None,
        mean_ic: None,
    };
    if let Some(path) = similarity {
        let sim = cio::read_similarity_csv(open(path)?)?;
        let scores = internal_score(&sim, &labels)?;
        cio::write_internal_scores(&mut buf, &labels, &scores)?;
        buf.push(b'\n');
        summary.mean_ic = Some(scores.mean);
    }
    if let Some(path) = truth {
        let truth = cio::read_truth(open(path)?)?;
        summary.external_score = Some(external_score(&truth, &labels)?);
    }
    cio::write_summary(&mut buf, &summary)?;
    match output {
        Some(path) => write_all(vec![(path.to_path_buf(), buf)]),
        None => Ok(io::stdout().write_all(&buf)?),
    }
}

fn cmd_generate(config: SimConfig, output: &Path, truth_path: &Path) -> Result<()> {
    let data = simulate_dataset(&config)?;
    let mut obs = Vec::new();
    cio::write_observation_csv(&mut obs, &data.observations)?;
    let mut truth = Vec::new();
    cio::write_truth(&mut truth, &data.truth, data.observations.variable_names())?;
    write_all(vec![
        (output.to_path_buf(), obs),
        (truth_path.to_path_buf(), truth),
    ])
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Cluster {
            input,
            tau,
            output,
            gamma,
            greedy,
            threshold,
            input_kind,
            export,
            dump_similarity,
            centers,
            summary,
        } => {
            let gamma = gamma.or(greedy.then_some(DEFAULT_GAMMA));
            cmd_cluster(
                &input,
                tau,
                &output,
                gamma,
                threshold,
                input_kind,
                export,
                dump_similarity.as_deref(),
                centers,
                summary,
            )
        }
        Command::Simulate {
            scenario,
            reps,
            seed,
            output,
            clusters,
            alpha,
            gamma,
            timing,
        } => cmd_simulate(
            &scenario,
            ScenarioOptions {
                reps,
                seed,
                clusters,
                alpha,
                gamma,
                record_timing: timing,
            },
            &output,
        ),
        Command::Evaluate {
            labels,
            truth,
            similarity,
            output,
        } => cmd_evaluate(
            &labels,
            truth.as_deref(),
            similarity.as_deref(),
            output.as_deref(),
        ),
        Command::Generate {
            sizes,
            n_obs,
            r_min,
            r_max,
            alpha,
            seed,
            output,
            truth,
        } => cmd_generate(
            SimConfig {
                n_obs,
                cluster_sizes: sizes,
                r_min,
                r_max,
                alpha,
                seed,
            },
            &output,
            &truth,
        ),
    }
}
