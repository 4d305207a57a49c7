//! Wire formats: the model JSON document, event-stream CSV, result CSV
//! emitters, and the staged atomic writer the CLI uses so failed runs
//! leave no partial outputs.
//!
//! Model JSON:
//!
//! ```json
//! {
//!   "M": 2,
//!   "tau": 1.0,
//!   "mu_segments": [{"t_start": 0.0, "rates": [0.2, 0.3]}],
//!   "N": [[0.4, 0.15], [0.2, 0.3]]
//! }
//! ```
//!
//! `N` is row-major source-to-target: `N[j][i]` is the expected number
//! of type-i events triggered by one type-j event. Event CSV has the
//! header `type_index,timestamp` and is sorted by timestamp. All CSV
//! output uses '.' decimals, UTF-8 and LF line endings.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::centrality::{rank_order, CentralityVector};
use crate::error::HawkesError;
use crate::experiments::{BenchmarkConfig, BenchmarkResult, ShockSpec};
use crate::leadlag::SweepResult;
use crate::linalg::Matrix;
use crate::model::{BranchingMatrix, EventStream, ExoSchedule, HawkesModel, Kernel};
use crate::trace::IntensityTrace;

/// Schema version stamped into every JSON document this crate writes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MuSegmentFile {
    t_start: f64,
    rates: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    #[serde(rename = "M")]
    m: usize,
    tau: f64,
    mu_segments: Vec<MuSegmentFile>,
    #[serde(rename = "N")]
    n: Vec<Vec<f64>>,
}

/// Serialize a model to the JSON document format.
pub fn model_to_json(model: &HawkesModel) -> String {
    let file = ModelFile {
        m: model.dim(),
        tau: model.tau(),
        mu_segments: model
            .exo()
            .starts()
            .iter()
            .zip(model.exo().rates())
            .map(|(&t_start, rates)| MuSegmentFile {
                t_start,
                rates: rates.clone(),
            })
            .collect(),
        n: (0..model.dim())
            .map(|j| (0..model.dim()).map(|i| model.branching().entry(j, i)).collect())
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("model serializes")
}

/// Parse a model from the JSON document format.
pub fn model_from_json(text: &str) -> Result<HawkesModel, HawkesError> {
    let file: ModelFile = serde_json::from_str(text)?;
    if file.n.len() != file.m || file.n.iter().any(|row| row.len() != file.m) {
        return Err(HawkesError::DimensionMismatch(format!(
            "N must be {m} x {m}",
            m = file.m
        )));
    }
    let starts: Vec<f64> = file.mu_segments.iter().map(|s| s.t_start).collect();
    let rates: Vec<Vec<f64>> = file.mu_segments.into_iter().map(|s| s.rates).collect();
    if rates.iter().any(|r| r.len() != file.m) {
        return Err(HawkesError::DimensionMismatch(format!(
            "every rate vector must have length {}",
            file.m
        )));
    }
    HawkesModel::new(
        ExoSchedule::piecewise(starts, rates)?,
        BranchingMatrix::new(&file.n)?,
        Kernel::exponential(file.tau)?,
    )
}

/// Event stream to CSV: header `type_index,timestamp`, rows sorted by
/// timestamp (ties by type index).
pub fn events_to_csv(events: &EventStream) -> String {
    let mut out = String::from("type_index,timestamp\n");
    for (ty, t) in events.merged() {
        out.push_str(&format!("{},{}\n", ty, fmt_float(t)));
    }
    out
}

/// Parse an event CSV. The observation window ends at `horizon` when
/// given, otherwise at the last event timestamp.
pub fn events_from_csv(text: &str, horizon: Option<f64>) -> Result<EventStream, HawkesError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "type_index,timestamp" => {}
        Some((_, header)) => {
            return Err(HawkesError::CsvParse {
                line: 1,
                message: format!(
                    "expected header 'type_index,timestamp', got '{}'",
                    header.trim()
                ),
            })
        }
        None => {
            return Err(HawkesError::CsvParse {
                line: 1,
                message: "empty file".to_string(),
            })
        }
    }
    let mut pairs: Vec<(usize, f64)> = Vec::new();
    let mut max_type = 0usize;
    let mut max_time = 0.0_f64;
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split(',');
        let (ty_str, t_str) = match (cols.next(), cols.next(), cols.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(HawkesError::CsvParse {
                    line: idx + 1,
                    message: "expected exactly two columns".to_string(),
                })
            }
        };
        let ty: usize = ty_str.trim().parse().map_err(|e| HawkesError::CsvParse {
            line: idx + 1,
            message: format!("bad type index '{}': {}", ty_str, e),
        })?;
        let t: f64 = t_str.trim().parse().map_err(|e| HawkesError::CsvParse {
            line: idx + 1,
            message: format!("bad timestamp '{}': {}", t_str, e),
        })?;
        max_type = max_type.max(ty);
        max_time = max_time.max(t);
        pairs.push((ty, t));
    }
    if pairs.is_empty() {
        return Err(HawkesError::InsufficientData(
            "event CSV contains no events".to_string(),
        ));
    }
    let horizon = horizon.unwrap_or(max_time);
    EventStream::from_pairs(max_type + 1, &pairs, horizon)
}

/// Intensity trace to tidy CSV: time, type_index, intensity, exo, endo.
pub fn trace_to_csv(trace: &IntensityTrace) -> String {
    let mut out = String::from("time,type_index,intensity,exo,endo\n");
    for (k, &t) in trace.grid().iter().enumerate() {
        for i in 0..trace.dim() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt_float(t),
                i,
                fmt_float(trace.values()[k][i]),
                fmt_float(trace.exo_part()[k][i]),
                fmt_float(trace.endo_part()[k][i]),
            ));
        }
    }
    out
}

/// Centrality scores to CSV: node_index, score, rank (1 = best).
pub fn centrality_to_csv(vector: &CentralityVector) -> String {
    let order = rank_order(&vector.scores);
    let mut rank = vec![0usize; vector.scores.len()];
    for (position, &node) in order.iter().enumerate() {
        rank[node] = position + 1;
    }
    let mut out = String::from("node_index,score,rank\n");
    for (i, score) in vector.scores.iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", i, fmt_float(*score), rank[i]));
    }
    out
}

/// Square matrix to a CSV grid with a row-index column.
pub fn matrix_to_csv(matrix: &Matrix) -> String {
    let dim = matrix.dim();
    let mut out = String::from("node");
    for j in 0..dim {
        out.push_str(&format!(",{}", j));
    }
    out.push('\n');
    for i in 0..dim {
        out.push_str(&i.to_string());
        for j in 0..dim {
            out.push_str(&format!(",{}", fmt_float(matrix.get(i, j))));
        }
        out.push('\n');
    }
    out
}

/// Benchmark correlation series to tidy CSV: time, method, raw, smoothed.
pub fn benchmark_to_csv(result: &BenchmarkResult) -> String {
    let mut out = String::from("time,method,raw,smoothed\n");
    for series in &result.methods {
        for (k, &t) in result.grid.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                fmt_float(t),
                series.method.label(),
                fmt_float(series.raw[k]),
                fmt_float(series.smoothed[k]),
            ));
        }
    }
    out
}

fn fmt_float(v: f64) -> String {
    // Round-trippable, locale-independent ('.' decimal separator).
    format!("{}", v)
}

/// Versioned benchmark configuration document. Missing fields take the
/// defaults of the synthetic ranking experiment; unknown fields are
/// rejected.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfigFile {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    #[serde(rename = "M", default = "default_types")]
    pub m: usize,
    #[serde(default = "default_eta")]
    pub eta: usize,
    #[serde(default = "default_target_n")]
    pub target_n: f64,
    #[serde(default = "default_tau")]
    pub tau: f64,
    #[serde(default = "default_horizon")]
    pub horizon: f64,
    #[serde(default = "default_grid_step")]
    pub grid_step: f64,
    #[serde(default)]
    pub shock: ShockFile,
    #[serde(default = "default_window")]
    pub smoothing_window: usize,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_burn_in")]
    pub burn_in_multiplier: f64,
    #[serde(default = "default_damping")]
    pub pagerank_damping: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShockFile {
    #[serde(default = "default_shock_time")]
    pub time: f64,
    #[serde(default = "default_shock_target")]
    pub target_type: usize,
    #[serde(default = "default_shock_factor")]
    pub factor: f64,
    #[serde(default = "default_shock_duration")]
    pub duration: f64,
    #[serde(default = "default_true")]
    pub enabled: bool,
}

fn default_schema() -> u32 {
    SCHEMA_VERSION
}
fn default_types() -> usize {
    10
}
fn default_eta() -> usize {
    5
}
fn default_target_n() -> f64 {
    0.6
}
fn default_tau() -> f64 {
    1.0
}
fn default_horizon() -> f64 {
    200.0
}
fn default_grid_step() -> f64 {
    0.1
}
fn default_window() -> usize {
    50
}
fn default_seeds() -> Vec<u64> {
    (0..20).collect()
}
fn default_burn_in() -> f64 {
    10.0
}
fn default_damping() -> f64 {
    0.85
}
fn default_shock_time() -> f64 {
    150.0
}
fn default_shock_target() -> usize {
    9
}
fn default_shock_factor() -> f64 {
    10.0
}
fn default_shock_duration() -> f64 {
    50.0
}
fn default_true() -> bool {
    true
}

impl Default for ShockFile {
    fn default() -> Self {
        Self {
            time: default_shock_time(),
            target_type: default_shock_target(),
            factor: default_shock_factor(),
            duration: default_shock_duration(),
            enabled: true,
        }
    }
}

impl Default for BenchConfigFile {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults parse")
    }
}

impl BenchConfigFile {
    pub fn parse(text: &str) -> Result<Self, HawkesError> {
        let file: Self = serde_json::from_str(text)?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(HawkesError::InvalidInput(format!(
                "unsupported schema_version {} (this build reads {})",
                file.schema_version, SCHEMA_VERSION
            )));
        }
        Ok(file)
    }

    pub fn to_config(&self) -> BenchmarkConfig {
        BenchmarkConfig {
            types: self.m,
            eta: self.eta,
            target_n: self.target_n,
            tau: self.tau,
            horizon: self.horizon,
            grid_step: self.grid_step,
            shock: ShockSpec {
                time: self.shock.time,
                target_type: self.shock.target_type,
                factor: self.shock.factor,
                duration: self.shock.duration,
                enabled: self.shock.enabled,
            },
            smoothing_window: self.smoothing_window,
            seeds: self.seeds.clone(),
            burn_in_multiplier: self.burn_in_multiplier,
            pagerank_damping: self.pagerank_damping,
        }
    }
}

/// Benchmark summary document: per-method window means and the implied
/// ordering, written next to the tidy CSV.
#[derive(Debug, Serialize)]
pub struct BenchSummary {
    pub schema_version: u32,
    pub burn_in: f64,
    pub shock_enabled: bool,
    pub methods: Vec<MethodSummary>,
    /// Method labels sorted by descending post-burn-in mean.
    pub ordering: Vec<String>,
    pub degenerate_points: usize,
}

#[derive(Debug, Serialize)]
pub struct MethodSummary {
    pub method: String,
    pub post_burn_in_mean: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pre_shock_mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shock_window_mean: Option<f64>,
}

/// Build the summary from a benchmark run.
pub fn bench_summary(config: &BenchmarkConfig, result: &BenchmarkResult) -> BenchSummary {
    let mut methods = Vec::new();
    for series in &result.methods {
        let post = result
            .post_burn_in_mean(series.method)
            .unwrap_or(f64::NAN);
        let (pre_shock, shock_window) = if config.shock.enabled {
            (
                result.window_mean(series.method, result.burn_in, config.shock.time),
                result.window_mean(series.method, config.shock.time, config.shock.end()),
            )
        } else {
            (None, None)
        };
        methods.push(MethodSummary {
            method: series.method.label().to_string(),
            post_burn_in_mean: post,
            pre_shock_mean: pre_shock,
            shock_window_mean: shock_window,
        });
    }
    let mut ordering: Vec<(String, f64)> = methods
        .iter()
        .map(|m| (m.method.clone(), m.post_burn_in_mean))
        .collect();
    ordering.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("finite means"));
    BenchSummary {
        schema_version: SCHEMA_VERSION,
        burn_in: result.burn_in,
        shock_enabled: config.shock.enabled,
        methods,
        ordering: ordering.into_iter().map(|(m, _)| m).collect(),
        degenerate_points: result.degenerate_points,
    }
}

/// Sweep report document.
#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub entries: Vec<SweepReportEntry>,
    pub distances: Vec<Vec<f64>>,
    pub max_distance: f64,
}

#[derive(Debug, Serialize)]
pub struct SweepReportEntry {
    pub bin_width: f64,
    pub lag: usize,
    pub raw_frobenius: f64,
    pub zero_variance_types: Vec<usize>,
    pub adjacency: Vec<Vec<f64>>,
}

pub fn sweep_report(sweep: &SweepResult) -> SweepReport {
    SweepReport {
        schema_version: SCHEMA_VERSION,
        entries: sweep
            .entries
            .iter()
            .map(|e| {
                let dim = e.result.adjacency.dim();
                SweepReportEntry {
                    bin_width: e.bin_width,
                    lag: e.lag,
                    raw_frobenius: e.result.raw_frobenius,
                    zero_variance_types: e.result.zero_variance_types.clone(),
                    adjacency: (0..dim)
                        .map(|i| (0..dim).map(|j| e.result.adjacency.entry(i, j)).collect())
                        .collect(),
                }
            })
            .collect(),
        distances: sweep.distances.clone(),
        max_distance: sweep.max_distance(),
    }
}

/// Stages files in temporaries next to their destinations and renames
/// them all only when the whole command succeeded.
#[derive(Debug, Default)]
pub struct StagedWriter {
    staged: Vec<(PathBuf, PathBuf)>,
}

impl StagedWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Stage `content` for `path`; nothing is visible until `commit`.
    pub fn stage(&mut self, path: &Path, content: &str) -> Result<(), HawkesError> {
        let tmp = path.with_extension(format!(
            "{}.tmp-{}",
            path.extension()
                .map(|e| e.to_string_lossy().to_string())
                .unwrap_or_default(),
            std::process::id()
        ));
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                fs::create_dir_all(parent)?;
            }
        }
        fs::write(&tmp, content)?;
        self.staged.push((tmp, path.to_path_buf()));
        Ok(())
    }

    /// Atomically rename every staged file into place.
    pub fn commit(mut self) -> Result<Vec<PathBuf>, HawkesError> {
        let mut written = Vec::new();
        for (tmp, path) in self.staged.drain(..) {
            fs::rename(&tmp, &path)?;
            written.push(path);
        }
        Ok(written)
    }
}

impl Drop for StagedWriter {
    fn drop(&mut self) {
        for (tmp, _) in &self.staged {
            let _ = fs::remove_file(tmp);
        }
    }
}

/// Stable FNV-1a hash of a canonical config string, hex-encoded; used by
/// the run manifest so identical configs hash identically across runs.
pub fn config_hash(canonical: &str) -> String {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in canonical.as_bytes() {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(0x1000_0000_01b3);
    }
    format!("{:016x}", hash)
}
