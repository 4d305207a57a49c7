//! Model types: exogenous rate schedule, branching matrix, memory kernel,
//! the assembled generative model, and observed event streams.
//!
//! The intensity of event type `i` at time `t` is
//!
//! ```text
//! lambda_i(t) = mu_i(t) + sum_j sum_{t_k^j < t} n[j][i] * phi(t - t_k^j)
//! ```
//!
//! with `phi(u) = exp(-u/tau)/tau` for `u > 0`. The first term is the
//! exogenous (background) rate; the double sum is the endogenous part fed
//! by past events. `n[j][i]` is the expected number of type-`i` events
//! directly triggered by one type-`j` event; the spectral radius of that
//! matrix must stay below 1 for the process to be stable.

use crate::error::HawkesError;
use crate::linalg::Matrix;

/// Piecewise-constant exogenous rate schedule.
///
/// Segment `k` applies on `[start_k, start_{k+1})`; the last segment
/// extends to infinity. Rates are per-type, nonnegative, in events per
/// unit time.
#[derive(Debug, Clone, PartialEq)]
pub struct ExoSchedule {
    starts: Vec<f64>,
    rates: Vec<Vec<f64>>,
}

impl ExoSchedule {
    /// Constant schedule: a single segment starting at 0.
    pub fn constant(rates: Vec<f64>) -> Result<Self, HawkesError> {
        Self::piecewise(vec![0.0], vec![rates])
    }

    /// General piecewise schedule. The first segment must start at 0 and
    /// starts must be strictly increasing.
    pub fn piecewise(starts: Vec<f64>, rates: Vec<Vec<f64>>) -> Result<Self, HawkesError> {
        if starts.is_empty() || starts.len() != rates.len() {
            return Err(HawkesError::InvalidInput(
                "schedule needs matching, non-empty segment starts and rates".to_string(),
            ));
        }
        if starts[0] != 0.0 {
            return Err(HawkesError::InvalidInput(format!(
                "first segment must start at 0, got {}",
                starts[0]
            )));
        }
        for w in starts.windows(2) {
            if !(w[1] > w[0]) {
                return Err(HawkesError::InvalidInput(
                    "segment starts must be strictly increasing".to_string(),
                ));
            }
        }
        let dim = rates[0].len();
        if dim == 0 {
            return Err(HawkesError::InvalidInput(
                "rate vectors must be non-empty".to_string(),
            ));
        }
        for seg in &rates {
            if seg.len() != dim {
                return Err(HawkesError::DimensionMismatch(
                    "all rate vectors must have the same length".to_string(),
                ));
            }
            for &r in seg {
                if !(r >= 0.0) || !r.is_finite() {
                    return Err(HawkesError::InvalidInput(format!(
                        "rates must be finite and >= 0, got {}",
                        r
                    )));
                }
            }
        }
        Ok(Self { starts, rates })
    }

    /// Number of event types.
    pub fn dim(&self) -> usize {
        self.rates[0].len()
    }

    /// Number of segments.
    pub fn segments(&self) -> usize {
        self.starts.len()
    }

    /// Segment start times.
    pub fn starts(&self) -> &[f64] {
        &self.starts
    }

    /// Per-segment rate vectors.
    pub fn rates(&self) -> &[Vec<f64>] {
        &self.rates
    }

    /// Index of the segment containing time `t` (t >= 0).
    pub fn segment_at(&self, t: f64) -> usize {
        match self
            .starts
            .binary_search_by(|s| s.partial_cmp(&t).expect("finite times"))
        {
            Ok(k) => k,
            Err(k) => k.saturating_sub(1),
        }
    }

    /// Rate vector in force at time `t`.
    pub fn rates_at(&self, t: f64) -> &[f64] {
        &self.rates[self.segment_at(t)]
    }

    /// Exogenous rate of one type at time `t`.
    pub fn rate_at(&self, type_index: usize, t: f64) -> f64 {
        self.rates_at(t)[type_index]
    }

    /// Next segment boundary strictly after `t`, if any.
    pub fn next_breakpoint_after(&self, t: f64) -> Option<f64> {
        self.starts.iter().copied().find(|&s| s > t)
    }

    /// Integral of the rate of `type_index` over `[0, horizon]`.
    pub fn integral(&self, type_index: usize, horizon: f64) -> f64 {
        let mut total = 0.0;
        for (k, &start) in self.starts.iter().enumerate() {
            if start >= horizon {
                break;
            }
            let end = self
                .starts
                .get(k + 1)
                .copied()
                .unwrap_or(f64::INFINITY)
                .min(horizon);
            total += self.rates[k][type_index] * (end - start);
        }
        total
    }

    /// True when the schedule is a single constant segment.
    pub fn is_constant(&self) -> bool {
        self.starts.len() == 1
    }
}

/// Normalized exponential memory kernel `phi(u) = exp(-u/tau)/tau`,
/// `u > 0`. Integrates to one, so branching entries carry all the mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    tau: f64,
}

impl Kernel {
    pub fn exponential(tau: f64) -> Result<Self, HawkesError> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(HawkesError::InvalidInput(format!(
                "memory scale tau must be finite and > 0, got {}",
                tau
            )));
        }
        Ok(Self { tau })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Kernel density at lag `u` (zero for u <= 0).
    pub fn evaluate(&self, u: f64) -> f64 {
        if u > 0.0 {
            (-u / self.tau).exp() / self.tau
        } else {
            0.0
        }
    }

    /// Trailing kernel mass `integral_u^inf phi = exp(-u/tau)` for u >= 0.
    pub fn tail_mass(&self, u: f64) -> f64 {
        (-u / self.tau).exp()
    }
}

/// Branching matrix: `entry(j, i)` is the expected number of type-`i`
/// events directly triggered by a single type-`j` event. The spectral
/// radius is cached at construction; entries are immutable afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchingMatrix {
    entries: Matrix,
    spectral_radius: f64,
}

impl BranchingMatrix {
    pub fn new(rows: &[Vec<f64>]) -> Result<Self, HawkesError> {
        let entries = Matrix::from_rows(rows)?;
        Self::from_matrix(entries)
    }

    pub fn from_matrix(entries: Matrix) -> Result<Self, HawkesError> {
        for &v in entries.as_slice() {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(HawkesError::InvalidInput(format!(
                    "branching entries must be finite and >= 0, got {}",
                    v
                )));
            }
        }
        let spectral_radius = entries.spectral_radius();
        Ok(Self {
            entries,
            spectral_radius,
        })
    }

    /// All-zero matrix (pure Poisson process).
    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: Matrix::zeros(dim),
            spectral_radius: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.dim()
    }

    /// Expected type-`target` offspring per type-`source` event.
    pub fn entry(&self, source: usize, target: usize) -> f64 {
        self.entries.get(source, target)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.entries
    }

    /// Cached spectral radius.
    pub fn spectral_radius(&self) -> f64 {
        self.spectral_radius
    }

    /// True when the cascade is sub-critical (radius < 1).
    pub fn is_stationary(&self) -> bool {
        self.spectral_radius < 1.0
    }
}

/// The full generative specification.
#[derive(Debug, Clone, PartialEq)]
pub struct HawkesModel {
    exo: ExoSchedule,
    branching: BranchingMatrix,
    kernel: Kernel,
}

impl HawkesModel {
    pub fn new(
        exo: ExoSchedule,
        branching: BranchingMatrix,
        kernel: Kernel,
    ) -> Result<Self, HawkesError> {
        if exo.dim() != branching.dim() {
            return Err(HawkesError::DimensionMismatch(format!(
                "schedule dimension {} vs branching dimension {}",
                exo.dim(),
                branching.dim()
            )));
        }
        Ok(Self {
            exo,
            branching,
            kernel,
        })
    }

    /// Number of event types.
    pub fn dim(&self) -> usize {
        self.branching.dim()
    }

    pub fn exo(&self) -> &ExoSchedule {
        &self.exo
    }

    pub fn branching(&self) -> &BranchingMatrix {
        &self.branching
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn tau(&self) -> f64 {
        self.kernel.tau()
    }

    /// Spectral radius of the branching matrix.
    pub fn spectral_radius(&self) -> f64 {
        self.branching.spectral_radius()
    }

    /// Errors unless the branching radius is < 1.
    pub fn require_stationary(&self) -> Result<(), HawkesError> {
        if self.branching.is_stationary() {
            Ok(())
        } else {
            Err(HawkesError::NotStationary {
                radius: self.branching.spectral_radius(),
            })
        }
    }
}

/// Observed (or simulated) events: per-type strictly increasing
/// timestamps inside the observation window `[0, horizon]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EventStream {
    times: Vec<Vec<f64>>,
    horizon: f64,
}

impl EventStream {
    pub fn new(times: Vec<Vec<f64>>, horizon: f64) -> Result<Self, HawkesError> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(HawkesError::InvalidInput(format!(
                "horizon must be finite and > 0, got {}",
                horizon
            )));
        }
        if times.is_empty() {
            return Err(HawkesError::InvalidInput(
                "event stream needs at least one type".to_string(),
            ));
        }
        for (i, list) in times.iter().enumerate() {
            for &t in list {
                if !t.is_finite() || t < 0.0 || t > horizon {
                    return Err(HawkesError::InvalidInput(format!(
                        "type {} timestamp {} outside [0, {}]",
                        i, t, horizon
                    )));
                }
            }
            for w in list.windows(2) {
                if !(w[1] > w[0]) {
                    return Err(HawkesError::InvalidInput(format!(
                        "type {} timestamps must be strictly increasing ({} then {})",
                        i, w[0], w[1]
                    )));
                }
            }
        }
        Ok(Self { times, horizon })
    }

    /// Empty stream with `dim` types.
    pub fn empty(dim: usize, horizon: f64) -> Result<Self, HawkesError> {
        Self::new(vec![Vec::new(); dim], horizon)
    }

    /// Build from (type, time) pairs in any order.
    pub fn from_pairs(
        dim: usize,
        pairs: &[(usize, f64)],
        horizon: f64,
    ) -> Result<Self, HawkesError> {
        let mut times = vec![Vec::new(); dim];
        for &(ty, t) in pairs {
            if ty >= dim {
                return Err(HawkesError::InvalidInput(format!(
                    "type index {} out of range for dimension {}",
                    ty, dim
                )));
            }
            times[ty].push(t);
        }
        for list in &mut times {
            list.sort_by(|a, b| a.partial_cmp(b).expect("finite timestamps"));
        }
        Self::new(times, horizon)
    }

    pub fn dim(&self) -> usize {
        self.times.len()
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Timestamps of one type.
    pub fn times(&self, type_index: usize) -> &[f64] {
        &self.times[type_index]
    }

    /// Per-type timestamp lists.
    pub fn all_times(&self) -> &[Vec<f64>] {
        &self.times
    }

    /// Event count of one type.
    pub fn count(&self, type_index: usize) -> usize {
        self.times[type_index].len()
    }

    /// Total event count.
    pub fn total_count(&self) -> usize {
        self.times.iter().map(Vec::len).sum()
    }

    /// All events merged into (type, time) pairs sorted by time, ties
    /// broken by type index.
    pub fn merged(&self) -> Vec<(usize, f64)> {
        let mut out: Vec<(usize, f64)> = self
            .times
            .iter()
            .enumerate()
            .flat_map(|(ty, list)| list.iter().map(move |&t| (ty, t)))
            .collect();
        out.sort_by(|a, b| {
            a.1.partial_cmp(&b.1)
                .expect("finite timestamps")
                .then(a.0.cmp(&b.0))
        });
        out
    }
}
