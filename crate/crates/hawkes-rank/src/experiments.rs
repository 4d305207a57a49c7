//! The ranking benchmark: how well do static centralities track the
//! instantaneous intensity ranking of a simulated process?
//!
//! Pipeline per seed: generate a preferential-attachment branching
//! matrix, simulate the process, evaluate intensities on a grid, then
//! correlate each static score vector with the realized intensities at
//! every grid time (Spearman). Four static benchmarks are compared:
//!
//! 1. first-moment ranking with the true exogenous rates,
//! 2. Katz with a homogeneous unit exogenous vector (alpha = 1, A = N),
//! 3. eigenvector centrality as the Katz limit alpha -> 1/lambda_max,
//! 4. PageRank on the out-weight-normalized matrix (d = 0.85).
//!
//! An optional step shock multiplies one type's exogenous rate for a
//! fixed duration, which static rankings cannot follow.

use crate::centrality::{
    first_moment_rank, katz, pagerank, AdjacencyMatrix, CentralityMethod,
};
use crate::error::HawkesError;
use crate::model::{ExoSchedule, HawkesModel, Kernel};
use crate::netgen::{generate_ba_branching, powerlaw_exo, BaGraphConfig};
use crate::simulate::simulate;
use crate::trace::{evaluate_intensity, uniform_grid, IntensityTrace};

/// Spearman rank correlation with a degeneracy flag: an all-equal input
/// vector makes the correlation undefined and yields the sentinel 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spearman {
    pub rho: f64,
    pub degenerate: bool,
}

/// Fractional (average) ranks; ties share the mean of their positions.
fn fractional_ranks(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| x[a].partial_cmp(&x[b]).expect("finite scores"));
    let mut ranks = vec![0.0; n];
    let mut pos = 0;
    while pos < n {
        let mut end = pos;
        while end + 1 < n && x[order[end + 1]] == x[order[pos]] {
            end += 1;
        }
        // positions pos..=end are tied; 1-based ranks average
        let avg = (pos + end) as f64 / 2.0 + 1.0;
        for k in pos..=end {
            ranks[order[k]] = avg;
        }
        pos = end + 1;
    }
    ranks
}

/// Spearman correlation of two score vectors: fractional ranks for ties,
/// then the Pearson correlation of the rank vectors.
pub fn spearman(a: &[f64], b: &[f64]) -> Result<Spearman, HawkesError> {
    if a.len() != b.len() {
        return Err(HawkesError::DimensionMismatch(format!(
            "score vectors of length {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.len() < 2 {
        return Err(HawkesError::InvalidInput(
            "rank correlation needs at least two entries".to_string(),
        ));
    }
    if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
        return Err(HawkesError::InvalidInput(
            "scores must be finite".to_string(),
        ));
    }
    let all_equal = |v: &[f64]| v.iter().all(|&x| x == v[0]);
    if all_equal(a) || all_equal(b) {
        return Ok(Spearman {
            rho: 0.0,
            degenerate: true,
        });
    }
    let ra = fractional_ranks(a);
    let rb = fractional_ranks(b);
    let n = ra.len() as f64;
    let ma = ra.iter().sum::<f64>() / n;
    let mb = rb.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in ra.iter().zip(&rb) {
        sxy += (x - ma) * (y - mb);
        sxx += (x - ma) * (x - ma);
        syy += (y - mb) * (y - mb);
    }
    Ok(Spearman {
        rho: sxy / (sxx * syy).sqrt(),
        degenerate: false,
    })
}

/// Centered moving average. `window` is interpreted as a centered radius
/// of `window / 2` samples (so an even window covers window+1 points);
/// at the boundaries the radius shrinks symmetrically to what is
/// available. Output length equals input length.
pub fn smooth(series: &[f64], window: usize) -> Result<Vec<f64>, HawkesError> {
    if series.is_empty() {
        return Err(HawkesError::InvalidInput(
            "cannot smooth an empty series".to_string(),
        ));
    }
    if window < 1 {
        return Err(HawkesError::InvalidInput(
            "window must be >= 1".to_string(),
        ));
    }
    let len = series.len();
    let radius = window / 2;
    let out = (0..len)
        .map(|k| {
            let r = radius.min(k).min(len - 1 - k);
            let slice = &series[k - r..=k + r];
            slice.iter().sum::<f64>() / slice.len() as f64
        })
        .collect();
    Ok(out)
}

/// A step shock: multiply one type's exogenous rate by `factor` on
/// `[time, time + duration)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockSpec {
    pub time: f64,
    pub target_type: usize,
    pub factor: f64,
    pub duration: f64,
    pub enabled: bool,
}

impl ShockSpec {
    /// End of the shock interval.
    pub fn end(&self) -> f64 {
        self.time + self.duration
    }
}

/// Apply a shock to a schedule inside the observation window.
///
/// Rates outside `[time, time + duration)` are preserved exactly; the
/// boundaries become breakpoints of the returned schedule.
pub fn apply_shock(
    schedule: &ExoSchedule,
    shock: &ShockSpec,
    horizon: f64,
) -> Result<ExoSchedule, HawkesError> {
    if shock.target_type >= schedule.dim() {
        return Err(HawkesError::InvalidInput(format!(
            "shock target {} out of range for {} types",
            shock.target_type,
            schedule.dim()
        )));
    }
    if !(shock.factor >= 0.0) || !shock.factor.is_finite() {
        return Err(HawkesError::InvalidInput(format!(
            "shock factor must be finite and >= 0, got {}",
            shock.factor
        )));
    }
    if !(shock.duration > 0.0) || shock.time < 0.0 || shock.end() > horizon {
        return Err(HawkesError::InvalidInput(format!(
            "shock interval [{}, {}) outside window [0, {}]",
            shock.time,
            shock.end(),
            horizon
        )));
    }
    let mut starts: Vec<f64> = schedule.starts().to_vec();
    for boundary in [shock.time, shock.end()] {
        if let Err(pos) = starts.binary_search_by(|s| s.partial_cmp(&boundary).unwrap()) {
            starts.insert(pos, boundary);
        }
    }
    let rates: Vec<Vec<f64>> = starts
        .iter()
        .map(|&s| {
            let mut r = schedule.rates_at(s).to_vec();
            if s >= shock.time && s < shock.end() {
                r[shock.target_type] *= shock.factor;
            }
            r
        })
        .collect();
    ExoSchedule::piecewise(starts, rates)
}

/// Per-time rank permutations induced by an intensity trace: rank 1 is
/// the most intense type, ties break stably by type index.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingSeries {
    grid: Vec<f64>,
    /// `ranks[k][i]` = rank (1-based) of type `i` at grid point `k`.
    ranks: Vec<Vec<usize>>,
    scores: Vec<Vec<f64>>,
}

impl RankingSeries {
    pub fn from_trace(trace: &IntensityTrace) -> Self {
        let ranks = trace
            .values()
            .iter()
            .map(|scores| {
                let mut order: Vec<usize> = (0..scores.len()).collect();
                order.sort_by(|&a, &b| {
                    scores[b]
                        .partial_cmp(&scores[a])
                        .expect("finite intensities")
                        .then(a.cmp(&b))
                });
                let mut rank = vec![0usize; scores.len()];
                for (position, &ty) in order.iter().enumerate() {
                    rank[ty] = position + 1;
                }
                rank
            })
            .collect();
        Self {
            grid: trace.grid().to_vec(),
            ranks,
            scores: trace.values().to_vec(),
        }
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn ranks(&self) -> &[Vec<usize>] {
        &self.ranks
    }

    pub fn scores(&self) -> &[Vec<f64>] {
        &self.scores
    }
}

/// Full benchmark configuration. Defaults reproduce the synthetic
/// ranking experiment: ten types, powerlaw exogenous rates, target
/// branching ratio 0.6, horizon 200, and a ten-fold shock to the
/// weakest type at t = 150 lasting 50 time units.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    pub types: usize,
    pub eta: usize,
    pub target_n: f64,
    pub tau: f64,
    pub horizon: f64,
    pub grid_step: f64,
    pub shock: ShockSpec,
    pub smoothing_window: usize,
    pub seeds: Vec<u64>,
    /// Burn-in discarded before averaging, in units of the effective
    /// memory tau/(1-n).
    pub burn_in_multiplier: f64,
    pub pagerank_damping: f64,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            types: 10,
            eta: 5,
            target_n: 0.6,
            tau: 1.0,
            horizon: 200.0,
            grid_step: 0.1,
            shock: ShockSpec {
                time: 150.0,
                target_type: 9,
                factor: 10.0,
                duration: 50.0,
                enabled: true,
            },
            smoothing_window: 50,
            seeds: (0..20).collect(),
            burn_in_multiplier: 10.0,
            pagerank_damping: 0.85,
        }
    }
}

impl BenchmarkConfig {
    /// Burn-in time in raw units.
    pub fn burn_in(&self) -> f64 {
        self.burn_in_multiplier * self.tau / (1.0 - self.target_n)
    }

    fn validate(&self) -> Result<(), HawkesError> {
        if self.types < 2 {
            return Err(HawkesError::InvalidInput(
                "benchmark needs at least two types (rank correlation undefined for one)"
                    .to_string(),
            ));
        }
        if self.seeds.is_empty() {
            return Err(HawkesError::InvalidInput("no seeds given".to_string()));
        }
        if !(self.grid_step > 0.0) || self.grid_step >= self.horizon {
            return Err(HawkesError::InvalidInput(format!(
                "grid step {} incompatible with horizon {}",
                self.grid_step, self.horizon
            )));
        }
        if self.smoothing_window < 1 {
            return Err(HawkesError::InvalidInput(
                "smoothing window must be >= 1".to_string(),
            ));
        }
        if self.shock.enabled {
            if self.shock.target_type >= self.types {
                return Err(HawkesError::InvalidInput(format!(
                    "shock target {} out of range for {} types",
                    self.shock.target_type, self.types
                )));
            }
            if self.shock.time < 0.0 || self.shock.end() > self.horizon {
                return Err(HawkesError::InvalidInput(format!(
                    "shock interval [{}, {}) outside horizon {}",
                    self.shock.time,
                    self.shock.end(),
                    self.horizon
                )));
            }
        }
        Ok(())
    }
}

/// Correlation series for one static method, seed-averaged.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSeries {
    pub method: CentralityMethod,
    pub raw: Vec<f64>,
    pub smoothed: Vec<f64>,
}

/// Benchmark output: per-method correlation time series on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkResult {
    pub grid: Vec<f64>,
    pub methods: Vec<MethodSeries>,
    pub burn_in: f64,
    /// Count of (seed, grid point) Spearman evaluations that were
    /// degenerate and contributed the sentinel 0.
    pub degenerate_points: usize,
}

impl BenchmarkResult {
    pub fn series(&self, method: CentralityMethod) -> Option<&MethodSeries> {
        self.methods.iter().find(|m| m.method == method)
    }

    /// Mean of the raw seed-averaged correlation over grid times in
    /// `[from, to)`.
    pub fn window_mean(&self, method: CentralityMethod, from: f64, to: f64) -> Option<f64> {
        let series = self.series(method)?;
        let mut sum = 0.0;
        let mut count = 0usize;
        for (t, v) in self.grid.iter().zip(&series.raw) {
            if *t >= from && *t < to {
                sum += v;
                count += 1;
            }
        }
        (count > 0).then(|| sum / count as f64)
    }

    /// Mean over everything after the burn-in.
    pub fn post_burn_in_mean(&self, method: CentralityMethod) -> Option<f64> {
        self.window_mean(method, self.burn_in, f64::INFINITY)
    }
}

/// Independent sub-streams per seed so the graph, its weights, and the
/// simulation draw from unrelated randomness.
fn sub_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The four static score vectors for a given network and exogenous rates.
fn static_benchmarks(
    branching: &crate::model::BranchingMatrix,
    base_mu: &[f64],
    damping: f64,
) -> Result<Vec<(CentralityMethod, Vec<f64>)>, HawkesError> {
    let adjacency = AdjacencyMatrix::from_branching(branching);
    let ones = vec![1.0; branching.dim()];
    let first_moment = first_moment_rank(branching, base_mu)?.scores;
    let katz_scores = katz(&adjacency, 1.0, &ones)?.scores;
    // Eigenvector as the Katz limit alpha -> 1/lambda_max, beta -> 0: a
    // single linear solve, well-defined also on reducible matrices.
    let eps = 1e-9;
    let eig_scores = katz(
        &adjacency,
        (1.0 - eps) / adjacency.lambda_max(),
        &vec![eps; branching.dim()],
    )?
    .scores;
    let pagerank_scores = pagerank(&adjacency, damping)?.scores;
    Ok(vec![
        (CentralityMethod::FirstMoment, first_moment),
        (CentralityMethod::Katz, katz_scores),
        (CentralityMethod::Eigenvector, eig_scores),
        (CentralityMethod::PageRank, pagerank_scores),
    ])
}

/// One seed's contribution: per-method correlation series plus the
/// count of degenerate Spearman evaluations.
struct SeedOutcome {
    methods: Vec<CentralityMethod>,
    rho: Vec<Vec<f64>>,
    degenerate: usize,
}

fn run_seed(
    config: &BenchmarkConfig,
    grid: &[f64],
    base_mu: &[f64],
    kernel: Kernel,
    seed: u64,
) -> Result<SeedOutcome, HawkesError> {
    let graph_config = BaGraphConfig::new(config.types, config.eta, sub_seed(seed, 1));
    let branching = generate_ba_branching(&graph_config, config.target_n, sub_seed(seed, 2))?;

    let base_schedule = ExoSchedule::constant(base_mu.to_vec())?;
    let schedule = if config.shock.enabled {
        apply_shock(&base_schedule, &config.shock, config.horizon)?
    } else {
        base_schedule
    };
    let model = HawkesModel::new(schedule, branching.clone(), kernel)?;
    let stream = simulate(&model, config.horizon, sub_seed(seed, 3))?;
    let trace = evaluate_intensity(&model, &stream, grid)?;

    // Static scores always use the base (pre-shock) exogenous rates: a
    // static method cannot know about the intervention.
    let statics = static_benchmarks(&branching, base_mu, config.pagerank_damping)?;
    let mut rho = vec![vec![0.0; grid.len()]; statics.len()];
    let mut degenerate = 0usize;
    for (mi, (_, scores)) in statics.iter().enumerate() {
        for (k, lambda) in trace.values().iter().enumerate() {
            let s = spearman(scores, lambda)?;
            if s.degenerate {
                degenerate += 1;
            }
            rho[mi][k] = s.rho;
        }
    }
    Ok(SeedOutcome {
        methods: statics.into_iter().map(|(m, _)| m).collect(),
        rho,
        degenerate,
    })
}

/// Run the benchmark: simulate per seed, rank by realized intensity, and
/// correlate each static benchmark with the dynamic ranking over time.
///
/// Seeds run on parallel threads; results are merged in seed order, so
/// the output is identical to a sequential run.
pub fn run_benchmark(config: &BenchmarkConfig) -> Result<BenchmarkResult, HawkesError> {
    config.validate()?;
    let grid = uniform_grid(config.horizon, config.grid_step);
    let base_mu = powerlaw_exo(config.types)?;
    let kernel = Kernel::exponential(config.tau)?;

    let outcomes: Vec<Result<SeedOutcome, HawkesError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = config
            .seeds
            .iter()
            .map(|&seed| {
                let grid = &grid;
                let base_mu = &base_mu;
                scope.spawn(move || run_seed(config, grid, base_mu, kernel, seed))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("seed worker panicked"))
            .collect()
    });

    let mut sums: Vec<Vec<f64>> = vec![vec![0.0; grid.len()]; 4];
    let mut methods_order: Vec<CentralityMethod> = Vec::new();
    let mut degenerate_points = 0usize;
    for outcome in outcomes {
        let outcome = outcome?;
        methods_order = outcome.methods;
        degenerate_points += outcome.degenerate;
        for (sum, rho) in sums.iter_mut().zip(&outcome.rho) {
            for (s, r) in sum.iter_mut().zip(rho) {
                *s += r;
            }
        }
    }

    let n_seeds = config.seeds.len() as f64;
    let methods = methods_order
        .into_iter()
        .zip(sums)
        .map(|(method, sum)| {
            let raw: Vec<f64> = sum.into_iter().map(|v| v / n_seeds).collect();
            let smoothed = smooth(&raw, config.smoothing_window)?;
            Ok(MethodSeries {
                method,
                raw,
                smoothed,
            })
        })
        .collect::<Result<Vec<_>, HawkesError>>()?;

    Ok(BenchmarkResult {
        grid,
        methods,
        burn_in: config.burn_in(),
        degenerate_points,
    })
}
