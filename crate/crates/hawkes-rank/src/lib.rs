//! HawkesRank: event-driven dynamic ranking built on multivariate
//! self-exciting (Hawkes) point processes.
//!
//! The crate provides:
//!
//! - a generative model ([`HawkesModel`]) combining a piecewise-constant
//!   exogenous rate schedule, a branching matrix of pairwise excitation
//!   strengths, and a shared exponential memory kernel;
//! - exact thinning simulation and fast recursive intensity evaluation
//!   with an endogenous/exogenous decomposition;
//! - classical static centralities (Katz, eigenvector, PageRank) and the
//!   stationary first-moment ranking that links them to the process;
//! - maximum-likelihood parameter estimation from event streams;
//! - synthetic network generation (preferential attachment) and the
//!   benchmark comparing static rankings against the instantaneous
//!   intensity ranking, with and without exogenous shocks;
//! - the lead-lag correlation baseline and its parameter-sensitivity sweep.

pub mod centrality;
pub mod error;
pub mod estimation;
pub mod experiments;
pub mod io;
pub mod leadlag;
pub mod linalg;
pub mod model;
pub mod netgen;
pub mod simulate;
pub mod trace;

pub use centrality::{
    eigenvector_centrality, first_moment_rank, katz, pagerank, rank_order, AdjacencyMatrix,
    CentralityMethod, CentralityVector,
};
pub use error::HawkesError;
pub use estimation::{
    fit_mle, log_likelihood, log_likelihood_with_gradient, FitConfig, FitResult,
    LogLikelihoodGradient, MuMode,
};
pub use experiments::{
    apply_shock, run_benchmark, smooth, spearman, BenchmarkConfig, BenchmarkResult, MethodSeries,
    RankingSeries, ShockSpec, Spearman,
};
pub use leadlag::{
    bin_events, leadlag_adjacency, sensitivity_sweep, BinnedSeries, LeadLagResult, SweepEntry,
    SweepResult,
};
pub use model::{BranchingMatrix, EventStream, ExoSchedule, HawkesModel, Kernel};
pub use netgen::{generate_ba_branching, powerlaw_exo, BaGraphConfig};
pub use simulate::simulate;
pub use trace::{
    effective_memory, endo_exo_ratio, evaluate_intensity, impulse_response, stationary_mean,
    uniform_grid, EndoExoRatio, IntensityTrace,
};

/// Crate result alias.
pub type Result<T> = std::result::Result<T, HawkesError>;
