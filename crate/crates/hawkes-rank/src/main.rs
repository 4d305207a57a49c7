//! Command-line interface: reproducible simulation, intensity
//! evaluation, static rankings, likelihood fitting, lead-lag networks,
//! and the full ranking benchmark.
//!
//! Exit codes: 0 success, 2 unreadable/unparseable input, 3 invalid
//! model (spectral radius >= 1), 4 insufficient data, 1 anything else.
//! Outputs are staged and renamed only on success, so a failed command
//! leaves no partial files. Every command writes a run manifest with a
//! stable hash of its resolved configuration.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use hawkes_rank::io::{
    bench_summary, benchmark_to_csv, centrality_to_csv, config_hash, events_from_csv,
    events_to_csv, matrix_to_csv, model_from_json, model_to_json, sweep_report,
    trace_to_csv, BenchConfigFile, StagedWriter, SCHEMA_VERSION,
};
use hawkes_rank::trace::uniform_grid;
use hawkes_rank::{
    eigenvector_centrality, evaluate_intensity, first_moment_rank, fit_mle, katz, pagerank,
    run_benchmark, sensitivity_sweep, simulate, AdjacencyMatrix, EventStream, FitConfig,
    HawkesError, HawkesModel, MuMode,
};

#[derive(Parser)]
#[command(
    name = "hawkes-rank",
    version,
    about = "Self-exciting point process simulation and dynamic ranking toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate an event stream and its intensity trace from a model file.
    Simulate(SimulateArgs),
    /// Evaluate intensities of an existing event stream under a model.
    Intensity(IntensityArgs),
    /// Static centralities of a model's interaction matrix.
    Rank(RankArgs),
    /// Maximum-likelihood fit of model parameters to an event stream.
    Fit(FitArgs),
    /// Lead-lag correlation adjacency from binned event counts.
    Leadlag(LeadlagArgs),
    /// Lead-lag construction sensitivity over a (bin width, lag) grid.
    Sweep(SweepArgs),
    /// The ranking benchmark: static centralities vs dynamic intensity.
    Bench(BenchArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Model JSON file.
    #[arg(long)]
    model: PathBuf,
    /// Observation horizon T.
    #[arg(long)]
    horizon: f64,
    /// RNG seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Intensity grid step.
    #[arg(long, default_value_t = 0.1)]
    grid_step: f64,
    /// Output CSV for the event stream.
    #[arg(long)]
    out_events: PathBuf,
    /// Output CSV for the intensity trace.
    #[arg(long)]
    out_intensity: PathBuf,
    /// Manifest path (default: <out-events>.manifest.json).
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct IntensityArgs {
    #[arg(long)]
    model: PathBuf,
    /// Event CSV file.
    #[arg(long)]
    events: PathBuf,
    /// Observation horizon (default: last event timestamp).
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    grid_step: f64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum RankMethod {
    Katz,
    Eigenvector,
    Pagerank,
    FirstMoment,
}

#[derive(Args)]
struct RankArgs {
    /// Model JSON file; the branching matrix is the network.
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, value_enum)]
    method: RankMethod,
    /// Katz attenuation (default 0.85 / lambda_max).
    #[arg(long)]
    alpha: Option<f64>,
    /// Homogeneous Katz exogenous weight.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// PageRank damping.
    #[arg(long, default_value_t = 0.85)]
    damping: f64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// Event CSV file.
    #[arg(long)]
    events: PathBuf,
    /// Fit configuration JSON (defaults used when omitted).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Observation horizon (default: last event timestamp).
    #[arg(long)]
    horizon: Option<f64>,
    /// Cap on optimizer iterations (overrides the config file).
    #[arg(long)]
    max_iterations: Option<usize>,
    /// Exit 0 even when the optimizer did not converge.
    #[arg(long)]
    allow_nonconverged: bool,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct LeadlagArgs {
    #[arg(long)]
    events: PathBuf,
    #[arg(long)]
    horizon: Option<f64>,
    /// Bin width b.
    #[arg(long, default_value_t = 0.5)]
    bin_width: f64,
    /// Integer lag in bins.
    #[arg(long, default_value_t = 2)]
    lag: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    events: PathBuf,
    #[arg(long)]
    horizon: Option<f64>,
    /// Bin widths, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.25, 0.5, 1.0])]
    bin_widths: Vec<f64>,
    /// Lags, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = vec![1, 2, 4])]
    lags: Vec<usize>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Benchmark configuration JSON (experiment defaults when omitted).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Disable the exogenous shock regardless of the config.
    #[arg(long)]
    no_shock: bool,
    /// Use this many sequential seeds 0..n (overrides the config list).
    #[arg(long)]
    seeds: Option<u64>,
    /// Tidy correlation CSV output.
    #[arg(long)]
    out_csv: PathBuf,
    /// JSON summary output.
    #[arg(long)]
    out_summary: PathBuf,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

/// Versioned fit configuration document.
#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FitConfigFile {
    #[serde(default = "schema_default")]
    schema_version: u32,
    #[serde(default)]
    max_iterations: Option<usize>,
    #[serde(default)]
    gradient_tolerance: Option<f64>,
    #[serde(default)]
    tau_shared: Option<bool>,
    #[serde(default)]
    mu_mode: Option<MuModeFile>,
    #[serde(default)]
    horizon: Option<f64>,
    /// Inline model document used as the optimizer's starting point.
    #[serde(default)]
    initial_guess: Option<serde_json::Value>,
}

fn schema_default() -> u32 {
    SCHEMA_VERSION
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum MuModeFile {
    Constant,
    Piecewise { boundaries: Vec<f64> },
}

#[derive(Serialize)]
struct FitResultFile {
    schema_version: u32,
    model: serde_json::Value,
    log_likelihood: f64,
    spectral_radius: f64,
    converged: bool,
    iterations: usize,
    stationarity_warning: bool,
}

#[derive(Serialize)]
struct RunManifest {
    schema_version: u32,
    command: String,
    config_hash: String,
    seeds: Vec<u64>,
    tool_version: String,
    outputs: Vec<String>,
    duration_seconds: f64,
    config: serde_json::Value,
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            exit_code(&e)
        }
    };
    std::process::exit(code);
}

fn exit_code(e: &HawkesError) -> i32 {
    match e {
        HawkesError::Io(_)
        | HawkesError::Json(_)
        | HawkesError::CsvParse { .. }
        | HawkesError::InvalidInput(_)
        | HawkesError::DimensionMismatch(_)
        | HawkesError::AlphaOutOfRange { .. } => 2,
        HawkesError::NotStationary { .. } => 3,
        HawkesError::InsufficientData(_) => 4,
        HawkesError::NoConvergence { .. } | HawkesError::NonFinite(_) => 1,
    }
}

fn read_file(path: &Path) -> Result<String, HawkesError> {
    std::fs::read_to_string(path).map_err(|e| {
        HawkesError::InvalidInput(format!("cannot read {}: {}", path.display(), e))
    })
}

fn read_model(path: &Path) -> Result<HawkesModel, HawkesError> {
    model_from_json(&read_file(path)?)
}

fn read_events(path: &Path, horizon: Option<f64>) -> Result<EventStream, HawkesError> {
    events_from_csv(&read_file(path)?, horizon)
}

fn default_manifest(primary: &Path) -> PathBuf {
    let mut name = primary.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    primary.with_file_name(name)
}

/// Commit the staged outputs, then write a manifest describing the run.
fn finish(
    staged: StagedWriter,
    manifest_path: PathBuf,
    command: &str,
    config: serde_json::Value,
    seeds: Vec<u64>,
    started: Instant,
) -> Result<(), HawkesError> {
    let outputs = staged.commit()?;
    let canonical = serde_json::to_string(&config)?;
    let manifest = RunManifest {
        schema_version: SCHEMA_VERSION,
        command: command.to_string(),
        config_hash: config_hash(&canonical),
        seeds,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        duration_seconds: started.elapsed().as_secs_f64(),
        config,
    };
    let mut w = StagedWriter::new();
    w.stage(&manifest_path, &serde_json::to_string_pretty(&manifest)?)?;
    w.commit()?;
    Ok(())
}

fn dispatch(command: Command) -> Result<i32, HawkesError> {
    match command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Intensity(args) => cmd_intensity(args),
        Command::Rank(args) => cmd_rank(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Leadlag(args) => cmd_leadlag(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<i32, HawkesError> {
    let started = Instant::now();
    let model = read_model(&args.model)?;
    model.require_stationary()?;
    let events = simulate(&model, args.horizon, args.seed)?;
    let grid = uniform_grid(args.horizon, args.grid_step);
    let trace = evaluate_intensity(&model, &events, &grid)?;

    let mut staged = StagedWriter::new();
    staged.stage(&args.out_events, &events_to_csv(&events))?;
    staged.stage(&args.out_intensity, &trace_to_csv(&trace))?;
    let manifest = args
        .manifest
        .unwrap_or_else(|| default_manifest(&args.out_events));
    let config = serde_json::json!({
        "model": args.model.display().to_string(),
        "horizon": args.horizon,
        "seed": args.seed,
        "grid_step": args.grid_step,
    });
    finish(staged, manifest, "simulate", config, vec![args.seed], started)?;
    Ok(0)
}

fn cmd_intensity(args: IntensityArgs) -> Result<i32, HawkesError> {
    let started = Instant::now();
    let model = read_model(&args.model)?;
    let events = read_events(&args.events, args.horizon)?;
    let grid = uniform_grid(events.horizon(), args.grid_step);
    let trace = evaluate_intensity(&model, &events, &grid)?;

    let mut staged = StagedWriter::new();
    staged.stage(&args.out, &trace_to_csv(&trace))?;
    let manifest = args.manifest.unwrap_or_else(|| default_manifest(&args.out));
    let config = serde_json::json!({
        "model": args.model.display().to_string(),
        "events": args.events.display().to_string(),
        "horizon": events.horizon(),
        "grid_step": args.grid_step,
    });
    finish(staged, manifest, "intensity", config, vec![], started)?;
    Ok(0)
}

fn cmd_rank(args: RankArgs) -> Result<i32, HawkesError> {
    let started = Instant::now();
    let model = read_model(&args.matrix)?;
    let branching = model.branching();
    let adjacency = AdjacencyMatrix::from_branching(branching);
    let vector = match args.method {
        RankMethod::Katz => {
            let alpha = args.alpha.unwrap_or_else(|| {
                if adjacency.lambda_max() > 0.0 {
                    0.85 / adjacency.lambda_max()
                } else {
                    0.85
                }
            });
            katz(&adjacency, alpha, &vec![args.beta; model.dim()])?
        }
        RankMethod::Eigenvector => eigenvector_centrality(&adjacency)?,
        RankMethod::Pagerank => pagerank(&adjacency, args.damping)?,
        RankMethod::FirstMoment => {
            // Exogenous weights from the model's initial segment.
            first_moment_rank(branching, &model.exo().rates()[0])?
        }
    };
    if vector.warning {
        eprintln!("warning: reducible matrix; deterministic fallback direction reported");
    }

    let mut staged = StagedWriter::new();
    staged.stage(&args.out, &centrality_to_csv(&vector))?;
    let manifest = args.manifest.unwrap_or_else(|| default_manifest(&args.out));
    let config = serde_json::json!({
        "matrix": args.matrix.display().to_string(),
        "method": vector.method.label(),
        "alpha": args.alpha,
        "beta": args.beta,
        "damping": args.damping,
    });
    finish(staged, manifest, "rank", config, vec![], started)?;
    Ok(0)
}

fn cmd_fit(args: FitArgs) -> Result<i32, HawkesError> {
    let started = Instant::now();
    let file: FitConfigFile = match &args.config {
        Some(path) => {
            let parsed: FitConfigFile = serde_json::from_str(&read_file(path)?)?;
            if parsed.schema_version != SCHEMA_VERSION {
                return Err(HawkesError::InvalidInput(format!(
                    "unsupported schema_version {}",
                    parsed.schema_version
                )));
            }
            parsed
        }
        None => FitConfigFile::default(),
    };
    let events = read_events(&args.events, args.horizon.or(file.horizon))?;

    let mut config = FitConfig::default();
    if let Some(n) = file.max_iterations {
        config.max_iterations = n;
    }
    if let Some(n) = args.max_iterations {
        config.max_iterations = n;
    }
    if let Some(tol) = file.gradient_tolerance {
        config.gradient_tolerance = tol;
    }
    if let Some(shared) = file.tau_shared {
        config.tau_shared = shared;
    }
    config.mu_mode = match file.mu_mode {
        Some(MuModeFile::Piecewise { boundaries }) => MuMode::Piecewise(boundaries),
        Some(MuModeFile::Constant) | None => MuMode::Constant,
    };
    if let Some(guess) = &file.initial_guess {
        config.initial_guess = Some(model_from_json(&serde_json::to_string(guess)?)?);
    }

    let fit = fit_mle(&events, &config)?;
    if fit.stationarity_warning {
        eprintln!(
            "warning: fitted spectral radius {:.4} >= 1 (endogeneity pushed to criticality)",
            fit.model.spectral_radius()
        );
    }
    let result = FitResultFile {
        schema_version: SCHEMA_VERSION,
        model: serde_json::from_str(&model_to_json(&fit.model))?,
        log_likelihood: fit.log_likelihood,
        spectral_radius: fit.model.spectral_radius(),
        converged: fit.converged,
        iterations: fit.iterations,
        stationarity_warning: fit.stationarity_warning,
    };

    let mut staged = StagedWriter::new();
    staged.stage(&args.out, &serde_json::to_string_pretty(&result)?)?;
    let manifest = args.manifest.unwrap_or_else(|| default_manifest(&args.out));
    let config_echo = serde_json::json!({
        "events": args.events.display().to_string(),
        "horizon": events.horizon(),
        "max_iterations": config.max_iterations,
        "gradient_tolerance": config.gradient_tolerance,
        "allow_nonconverged": args.allow_nonconverged,
    });
    finish(staged, manifest, "fit", config_echo, vec![], started)?;

    if !fit.converged && !args.allow_nonconverged {
        eprintln!(
            "fit did not converge in {} iterations (rerun with --allow-nonconverged to accept)",
            fit.iterations
        );
        return Ok(1);
    }
    Ok(0)
}

fn cmd_leadlag(args: LeadlagArgs) -> Result<i32, HawkesError> {
    let started = Instant::now();
    let events = read_events(&args.events, args.horizon)?;
    let series = hawkes_rank::bin_events(&events, args.bin_width)?;
    let result = hawkes_rank::leadlag_adjacency(&series, args.lag)?;
    if !result.zero_variance_types.is_empty() {
        eprintln!(
            "warning: zero-variance types {:?}; their correlations were set to 0",
            result.zero_variance_types
        );
    }

    let mut staged = StagedWriter::new();
    staged.stage(&args.out, &matrix_to_csv(result.adjacency.matrix()))?;
    let manifest = args.manifest.unwrap_or_else(|| default_manifest(&args.out));
    let config = serde_json::json!({
        "events": args.events.display().to_string(),
        "bin_width": args.bin_width,
        "lag": args.lag,
    });
    finish(staged, manifest, "leadlag", config, vec![], started)?;
    Ok(0)
}

fn cmd_sweep(args: SweepArgs) -> Result<i32, HawkesError> {
    let started = Instant::now();
    let events = read_events(&args.events, args.horizon)?;
    let sweep = sensitivity_sweep(&events, &args.bin_widths, &args.lags)?;
    let report = sweep_report(&sweep);

    let mut staged = StagedWriter::new();
    staged.stage(&args.out, &serde_json::to_string_pretty(&report)?)?;
    let manifest = args.manifest.unwrap_or_else(|| default_manifest(&args.out));
    let config = serde_json::json!({
        "events": args.events.display().to_string(),
        "bin_widths": args.bin_widths,
        "lags": args.lags,
    });
    finish(staged, manifest, "sweep", config, vec![], started)?;
    Ok(0)
}

fn cmd_bench(args: BenchArgs) -> Result<i32, HawkesError> {
    let started = Instant::now();
    let mut file = match &args.config {
        Some(path) => BenchConfigFile::parse(&read_file(path)?)?,
        None => BenchConfigFile::default(),
    };
    if args.no_shock {
        file.shock.enabled = false;
    }
    if let Some(n) = args.seeds {
        file.seeds = (0..n).collect();
    }
    let config = file.to_config();
    let result = run_benchmark(&config)?;
    let summary = bench_summary(&config, &result);

    let mut staged = StagedWriter::new();
    staged.stage(&args.out_csv, &benchmark_to_csv(&result))?;
    staged.stage(&args.out_summary, &serde_json::to_string_pretty(&summary)?)?;
    let manifest = args
        .manifest
        .unwrap_or_else(|| default_manifest(&args.out_csv));
    let mut config_echo = serde_json::to_value(&file)?;
    if !config.shock.enabled {
        // A disabled shock plays no part in the run; keep it out of the
        // manifest so the hash reflects the effective configuration.
        if let Some(map) = config_echo.as_object_mut() {
            map.remove("shock");
        }
    }
    finish(
        staged,
        manifest,
        "bench",
        config_echo,
        config.seeds.clone(),
        started,
    )?;
    Ok(0)
}
