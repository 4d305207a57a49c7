//! Python bindings: the model plus the simulation, ranking, estimation
//! and benchmark entry points, all over plain lists and tuples.
//!
//! Usage from Python:
//!
//!     import hawkes_rank_py as hr
//!     model = hr.HawkesModel([0.2, 0.3], [[0.4, 0.15], [0.2, 0.3]], 1.0)
//!     events = model.simulate(1000.0, seed=1)
//!     fit = hr.fit_mle(events, model.dim(), 1000.0)

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use hawkes_rank as core;
use hawkes_rank::HawkesError;

fn to_py_err(e: HawkesError) -> PyErr {
    match e {
        HawkesError::NoConvergence { .. } | HawkesError::NonFinite(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        other => PyValueError::new_err(other.to_string()),
    }
}

fn build_model(
    mu: Vec<f64>,
    branching: Vec<Vec<f64>>,
    tau: f64,
) -> Result<core::HawkesModel, HawkesError> {
    core::HawkesModel::new(
        core::ExoSchedule::constant(mu)?,
        core::BranchingMatrix::new(&branching)?,
        core::Kernel::exponential(tau)?,
    )
}

/// A self-exciting model with a constant exogenous rate vector, a
/// branching matrix (entry [j][i] = expected type-i offspring per
/// type-j event) and a shared exponential memory scale.
#[pyclass]
#[derive(Clone)]
struct HawkesModel {
    inner: core::HawkesModel,
}

#[pymethods]
impl HawkesModel {
    #[new]
    fn new(mu: Vec<f64>, branching: Vec<Vec<f64>>, tau: f64) -> PyResult<Self> {
        Ok(Self {
            inner: build_model(mu, branching, tau).map_err(to_py_err)?,
        })
    }

    /// Parse the model JSON document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: core::io::model_from_json(text).map_err(to_py_err)?,
        })
    }

    fn to_json(&self) -> String {
        core::io::model_to_json(&self.inner)
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn tau(&self) -> f64 {
        self.inner.tau()
    }

    fn spectral_radius(&self) -> f64 {
        self.inner.spectral_radius()
    }

    /// Cascade-amplified memory scale tau / (1 - n).
    fn effective_memory(&self) -> PyResult<f64> {
        core::effective_memory(&self.inner).map_err(to_py_err)
    }

    /// Stationary expected rate per type (constant schedule only).
    fn stationary_mean(&self) -> PyResult<Vec<f64>> {
        core::stationary_mean(&self.inner).map_err(to_py_err)
    }

    /// Exact thinning simulation over [0, horizon); returns sorted
    /// (type_index, timestamp) pairs. Deterministic given the seed.
    #[pyo3(signature = (horizon, seed = 0))]
    fn simulate(&self, horizon: f64, seed: u64) -> PyResult<Vec<(usize, f64)>> {
        let stream = core::simulate(&self.inner, horizon, seed).map_err(to_py_err)?;
        Ok(stream.merged())
    }

    /// Intensities on a time grid given past events. Returns
    /// (values, exo, endo), each a list of per-type lists.
    fn intensity(
        &self,
        events: Vec<(usize, f64)>,
        horizon: f64,
        grid: Vec<f64>,
    ) -> PyResult<(Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<Vec<f64>>)> {
        let stream = core::EventStream::from_pairs(self.inner.dim(), &events, horizon)
            .map_err(to_py_err)?;
        let trace =
            core::evaluate_intensity(&self.inner, &stream, &grid).map_err(to_py_err)?;
        Ok((
            trace.values().to_vec(),
            trace.exo_part().to_vec(),
            trace.endo_part().to_vec(),
        ))
    }

    /// Expected response to one event of every type at t=0 (background
    /// silenced), evaluated on the grid.
    fn impulse_response(&self, grid: Vec<f64>) -> PyResult<Vec<Vec<f64>>> {
        core::impulse_response(&self.inner, &grid).map_err(to_py_err)
    }

    /// Log-likelihood of (type, time) events observed on [0, horizon].
    fn log_likelihood(&self, events: Vec<(usize, f64)>, horizon: f64) -> PyResult<f64> {
        let stream = core::EventStream::from_pairs(self.inner.dim(), &events, horizon)
            .map_err(to_py_err)?;
        core::log_likelihood(&self.inner, &stream).map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "HawkesModel(dim={}, tau={}, spectral_radius={:.4})",
            self.inner.dim(),
            self.inner.tau(),
            self.inner.spectral_radius()
        )
    }
}

/// Maximum-likelihood fit outcome.
#[pyclass]
struct FitOutcome {
    #[pyo3(get)]
    mu: Vec<f64>,
    #[pyo3(get)]
    branching: Vec<Vec<f64>>,
    #[pyo3(get)]
    tau: f64,
    #[pyo3(get)]
    log_likelihood: f64,
    #[pyo3(get)]
    spectral_radius: f64,
    #[pyo3(get)]
    converged: bool,
    #[pyo3(get)]
    iterations: usize,
    #[pyo3(get)]
    stationarity_warning: bool,
}

#[pymethods]
impl FitOutcome {
    fn model(&self) -> PyResult<HawkesModel> {
        Ok(HawkesModel {
            inner: build_model(self.mu.clone(), self.branching.clone(), self.tau)
                .map_err(to_py_err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "FitOutcome(ll={:.3}, radius={:.4}, converged={}, iterations={})",
            self.log_likelihood, self.spectral_radius, self.converged, self.iterations
        )
    }
}

/// Fit model parameters to observed events by maximum likelihood.
#[pyfunction]
#[pyo3(signature = (events, dim, horizon, max_iterations = 1000))]
fn fit_mle(
    events: Vec<(usize, f64)>,
    dim: usize,
    horizon: f64,
    max_iterations: usize,
) -> PyResult<FitOutcome> {
    let stream = core::EventStream::from_pairs(dim, &events, horizon).map_err(to_py_err)?;
    let config = core::FitConfig {
        max_iterations,
        ..core::FitConfig::default()
    };
    let fit = core::fit_mle(&stream, &config).map_err(to_py_err)?;
    let d = fit.model.dim();
    Ok(FitOutcome {
        mu: fit.model.exo().rates()[0].clone(),
        branching: (0..d)
            .map(|j| (0..d).map(|i| fit.model.branching().entry(j, i)).collect())
            .collect(),
        tau: fit.model.tau(),
        log_likelihood: fit.log_likelihood,
        spectral_radius: fit.model.spectral_radius(),
        converged: fit.converged,
        iterations: fit.iterations,
        stationarity_warning: fit.stationarity_warning,
    })
}

fn adjacency_from_rows(rows: Vec<Vec<f64>>) -> PyResult<core::AdjacencyMatrix> {
    core::AdjacencyMatrix::new(&rows).map_err(to_py_err)
}

/// Katz centrality (I - alpha A)^{-1} beta; A[i][j] is influence j -> i.
#[pyfunction]
fn katz(adjacency: Vec<Vec<f64>>, alpha: f64, beta: Vec<f64>) -> PyResult<Vec<f64>> {
    Ok(core::katz(&adjacency_from_rows(adjacency)?, alpha, &beta)
        .map_err(to_py_err)?
        .scores)
}

/// Leading-eigenvector centrality; returns (scores, reducible_warning).
#[pyfunction]
fn eigenvector_centrality(adjacency: Vec<Vec<f64>>) -> PyResult<(Vec<f64>, bool)> {
    let out = core::eigenvector_centrality(&adjacency_from_rows(adjacency)?).map_err(to_py_err)?;
    Ok((out.scores, out.warning))
}

/// PageRank on the out-weight-normalized graph.
#[pyfunction]
#[pyo3(signature = (adjacency, damping = 0.85))]
fn pagerank(adjacency: Vec<Vec<f64>>, damping: f64) -> PyResult<Vec<f64>> {
    Ok(core::pagerank(&adjacency_from_rows(adjacency)?, damping)
        .map_err(to_py_err)?
        .scores)
}

/// Stationary first-moment ranking (I - N^T)^{-1} mu.
#[pyfunction]
fn first_moment_rank(branching: Vec<Vec<f64>>, mu: Vec<f64>) -> PyResult<Vec<f64>> {
    let b = core::BranchingMatrix::new(&branching).map_err(to_py_err)?;
    Ok(core::first_moment_rank(&b, &mu).map_err(to_py_err)?.scores)
}

/// Spearman rank correlation; returns (rho, degenerate_flag).
#[pyfunction]
fn spearman(a: Vec<f64>, b: Vec<f64>) -> PyResult<(f64, bool)> {
    let s = core::spearman(&a, &b).map_err(to_py_err)?;
    Ok((s.rho, s.degenerate))
}

/// Preferential-attachment branching matrix rescaled to spectral radius
/// `target_n`.
#[pyfunction]
#[pyo3(signature = (nodes, eta, target_n, seed = 0, weight_seed = 1))]
fn generate_ba_branching(
    nodes: usize,
    eta: usize,
    target_n: f64,
    seed: u64,
    weight_seed: u64,
) -> PyResult<Vec<Vec<f64>>> {
    let config = core::BaGraphConfig::new(nodes, eta, seed);
    let b = core::generate_ba_branching(&config, target_n, weight_seed).map_err(to_py_err)?;
    Ok((0..nodes)
        .map(|j| (0..nodes).map(|i| b.entry(j, i)).collect())
        .collect())
}

/// Exogenous rates mu_i = i^(-1/2), i = 1..m.
#[pyfunction]
fn powerlaw_exo(m: usize) -> PyResult<Vec<f64>> {
    core::powerlaw_exo(m).map_err(to_py_err)
}

/// Lead-lag correlation adjacency from (type, time) events.
/// Returns (normalized_matrix, raw_frobenius).
#[pyfunction]
#[pyo3(signature = (events, dim, horizon, bin_width = 0.5, lag = 2))]
fn leadlag_adjacency(
    events: Vec<(usize, f64)>,
    dim: usize,
    horizon: f64,
    bin_width: f64,
    lag: usize,
) -> PyResult<(Vec<Vec<f64>>, f64)> {
    let stream = core::EventStream::from_pairs(dim, &events, horizon).map_err(to_py_err)?;
    let series = core::bin_events(&stream, bin_width).map_err(to_py_err)?;
    let out = core::leadlag_adjacency(&series, lag).map_err(to_py_err)?;
    let m = out.adjacency.dim();
    Ok((
        (0..m)
            .map(|i| (0..m).map(|j| out.adjacency.entry(i, j)).collect())
            .collect(),
        out.raw_frobenius,
    ))
}

/// Run the ranking benchmark; returns (method, post_burn_in_mean) pairs
/// sorted best first.
#[pyfunction]
#[pyo3(signature = (types = 10, eta = 5, target_n = 0.6, tau = 1.0, horizon = 200.0,
                    grid_step = 0.1, shock = true, seeds = None))]
#[allow(clippy::too_many_arguments)]
fn run_benchmark(
    types: usize,
    eta: usize,
    target_n: f64,
    tau: f64,
    horizon: f64,
    grid_step: f64,
    shock: bool,
    seeds: Option<Vec<u64>>,
) -> PyResult<Vec<(String, f64)>> {
    let mut config = core::BenchmarkConfig {
        types,
        eta,
        target_n,
        tau,
        horizon,
        grid_step,
        seeds: seeds.unwrap_or_else(|| (0..20).collect()),
        ..core::BenchmarkConfig::default()
    };
    config.shock.enabled = shock;
    if shock && config.shock.end() > horizon {
        // keep the default shock shape proportional on short horizons
        config.shock.time = 0.75 * horizon;
        config.shock.duration = 0.25 * horizon;
    }
    if config.shock.target_type >= types {
        config.shock.target_type = types - 1;
    }
    let result = core::run_benchmark(&config).map_err(to_py_err)?;
    let mut means: Vec<(String, f64)> = result
        .methods
        .iter()
        .map(|m| {
            (
                m.method.label().to_string(),
                result.post_burn_in_mean(m.method).unwrap_or(f64::NAN),
            )
        })
        .collect();
    means.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("finite means"));
    Ok(means)
}

#[pymodule]
fn hawkes_rank_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<HawkesModel>()?;
    m.add_class::<FitOutcome>()?;
    m.add_function(wrap_pyfunction!(fit_mle, m)?)?;
    m.add_function(wrap_pyfunction!(katz, m)?)?;
    m.add_function(wrap_pyfunction!(eigenvector_centrality, m)?)?;
    m.add_function(wrap_pyfunction!(pagerank, m)?)?;
    m.add_function(wrap_pyfunction!(first_moment_rank, m)?)?;
    m.add_function(wrap_pyfunction!(spearman, m)?)?;
    m.add_function(wrap_pyfunction!(generate_ba_branching, m)?)?;
    m.add_function(wrap_pyfunction!(powerlaw_exo, m)?)?;
    m.add_function(wrap_pyfunction!(leadlag_adjacency, m)?)?;
    m.add_function(wrap_pyfunction!(run_benchmark, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
