//! Lead-lag correlation networks: the heuristic baseline that infers an
//! adjacency from binned activity counts.
//!
//! Edge j -> i is the Pearson correlation between the count series of j
//! and the series of i shifted `ell` bins later; negative correlations
//! are floored at zero and the matrix is normalized by its Frobenius
//! norm. The construction depends on the two free parameters (bin width,
//! lag), which `sensitivity_sweep` quantifies.

use crate::centrality::AdjacencyMatrix;
use crate::error::HawkesError;
use crate::linalg::Matrix;
use crate::model::EventStream;

/// Per-type event counts over consecutive time bins.
///
/// Values are integer counts when produced by [`bin_events`]; the
/// correlation machinery accepts any nonnegative series.
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedSeries {
    bin_width: f64,
    counts: Vec<Vec<f64>>,
}

impl BinnedSeries {
    pub fn from_counts(bin_width: f64, counts: Vec<Vec<f64>>) -> Result<Self, HawkesError> {
        if !(bin_width > 0.0) {
            return Err(HawkesError::InvalidInput(format!(
                "bin width must be > 0, got {}",
                bin_width
            )));
        }
        if counts.is_empty() {
            return Err(HawkesError::InvalidInput("no series".to_string()));
        }
        let len = counts[0].len();
        for series in &counts {
            if series.len() != len {
                return Err(HawkesError::DimensionMismatch(
                    "all series must have the same length".to_string(),
                ));
            }
            if series.iter().any(|&v| v < 0.0 || !v.is_finite()) {
                return Err(HawkesError::InvalidInput(
                    "counts must be finite and >= 0".to_string(),
                ));
            }
        }
        Ok(Self { bin_width, counts })
    }

    pub fn bin_width(&self) -> f64 {
        self.bin_width
    }

    /// Number of event types.
    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    /// Number of bins.
    pub fn len(&self) -> usize {
        self.counts[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn counts(&self) -> &[Vec<f64>] {
        &self.counts
    }

    pub fn total(&self) -> f64 {
        self.counts.iter().flatten().sum()
    }
}

/// Aggregate an event stream into bins `[k b, (k+1) b)`; the final
/// partial bin is included. An event at exactly the horizon lands in the
/// last bin.
pub fn bin_events(events: &EventStream, bin_width: f64) -> Result<BinnedSeries, HawkesError> {
    if !(bin_width > 0.0) || !bin_width.is_finite() {
        return Err(HawkesError::InvalidInput(format!(
            "bin width must be > 0, got {}",
            bin_width
        )));
    }
    let bins = (events.horizon() / bin_width).ceil().max(1.0) as usize;
    let mut counts = vec![vec![0.0_f64; bins]; events.dim()];
    for (ty, list) in events.all_times().iter().enumerate() {
        for &t in list {
            let k = ((t / bin_width).floor() as usize).min(bins - 1);
            counts[ty][k] += 1.0;
        }
    }
    BinnedSeries::from_counts(bin_width, counts)
}

/// Lead-lag adjacency plus construction metadata.
#[derive(Debug, Clone)]
pub struct LeadLagResult {
    /// Frobenius-normalized nonnegative adjacency (entry (i, j) = j -> i).
    pub adjacency: AdjacencyMatrix,
    /// Frobenius norm of the clipped correlation matrix before
    /// normalization; multiply entries by this to recover raw values.
    pub raw_frobenius: f64,
    /// Types whose restricted series had zero variance; their
    /// correlations were defined as 0.
    pub zero_variance_types: Vec<usize>,
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        None
    } else {
        Some(sxy / (sxx * syy).sqrt())
    }
}

/// Build the lead-lag adjacency at integer lag `ell`.
///
/// `A[i][j]` correlates `x_j` over bins `0 .. L-ell` with `x_i` over bins
/// `ell .. L`. Requires `len > ell + 2`. Zero-variance series yield zero
/// correlations and are reported in the result.
pub fn leadlag_adjacency(
    series: &BinnedSeries,
    ell: usize,
) -> Result<LeadLagResult, HawkesError> {
    let len = series.len();
    if len <= ell + 2 {
        return Err(HawkesError::InsufficientData(format!(
            "series length {} too short for lag {}",
            len, ell
        )));
    }
    let dim = series.dim();
    let overlap = len - ell;
    let mut clipped = Matrix::zeros(dim);
    let mut flagged = vec![false; dim];
    for i in 0..dim {
        let lagged = &series.counts()[i][ell..];
        for j in 0..dim {
            let lead = &series.counts()[j][..overlap];
            match pearson(lead, lagged) {
                Some(corr) => clipped.set(i, j, corr.max(0.0)),
                None => {
                    // Constant slice: leave the entry at zero and flag
                    // whichever side is degenerate.
                    let lead_var = pearson(lead, lead).is_none();
                    let lag_var = pearson(lagged, lagged).is_none();
                    if lead_var {
                        flagged[j] = true;
                    }
                    if lag_var {
                        flagged[i] = true;
                    }
                }
            }
        }
    }
    let raw_frobenius = clipped.frobenius();
    let normalized = if raw_frobenius > 0.0 {
        clipped.scaled(1.0 / raw_frobenius)
    } else {
        clipped
    };
    Ok(LeadLagResult {
        adjacency: AdjacencyMatrix::from_matrix(normalized)?,
        raw_frobenius,
        zero_variance_types: flagged
            .iter()
            .enumerate()
            .filter_map(|(i, &f)| f.then_some(i))
            .collect(),
    })
}

/// One cell of the sensitivity sweep.
#[derive(Debug, Clone)]
pub struct SweepEntry {
    pub bin_width: f64,
    pub lag: usize,
    pub result: LeadLagResult,
}

/// Sweep output: one adjacency per (bin width, lag) combination plus the
/// pairwise Frobenius distances between the normalized matrices.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub entries: Vec<SweepEntry>,
    /// `distances[p][q]` = Frobenius norm of the matrix difference
    /// between entries p and q (row-major over the (b, ell) grid).
    pub distances: Vec<Vec<f64>>,
}

impl SweepResult {
    /// Largest pairwise distance in the grid.
    pub fn max_distance(&self) -> f64 {
        self.distances
            .iter()
            .flatten()
            .fold(0.0, |acc, &v| acc.max(v))
    }
}

/// Rebuild the adjacency across a (bin width, lag) grid and measure how
/// strongly the inferred network depends on those choices.
pub fn sensitivity_sweep(
    events: &EventStream,
    bin_widths: &[f64],
    lags: &[usize],
) -> Result<SweepResult, HawkesError> {
    if bin_widths.is_empty() || lags.is_empty() {
        return Err(HawkesError::InvalidInput(
            "sweep needs at least one bin width and one lag".to_string(),
        ));
    }
    let mut entries = Vec::new();
    for &b in bin_widths {
        let series = bin_events(events, b)?;
        for &ell in lags {
            entries.push(SweepEntry {
                bin_width: b,
                lag: ell,
                result: leadlag_adjacency(&series, ell)?,
            });
        }
    }
    let n = entries.len();
    let mut distances = vec![vec![0.0_f64; n]; n];
    for p in 0..n {
        for q in (p + 1)..n {
            let a = entries[p].result.adjacency.matrix();
            let b = entries[q].result.adjacency.matrix();
            let mut sum = 0.0;
            for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
                sum += (x - y) * (x - y);
            }
            let d = sum.sqrt();
            distances[p][q] = d;
            distances[q][p] = d;
        }
    }
    Ok(SweepResult { entries, distances })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn binning_counts_simple_cases() {
        let events = EventStream::new(vec![vec![0.3]], 0.5).unwrap();
        let series = bin_events(&events, 0.5).unwrap();
        assert_eq!(series.counts()[0], vec![1.0]);

        let events = EventStream::new(vec![vec![0.1, 0.6, 0.7]], 1.0).unwrap();
        let series = bin_events(&events, 0.5).unwrap();
        assert_eq!(series.counts()[0], vec![1.0, 2.0]);
    }

    #[test]
    fn binning_conserves_total_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let pairs: Vec<(usize, f64)> = (0..200)
                .map(|_| (rng.gen_range(0..3), rng.gen::<f64>() * 37.0))
                .collect();
            let events = EventStream::from_pairs(3, &pairs, 37.0).unwrap();
            let b = 0.1 + rng.gen::<f64>() * 3.0;
            let series = bin_events(&events, b).unwrap();
            assert_eq!(series.total(), events.total_count() as f64);
        }
    }

    #[test]
    fn event_at_horizon_lands_in_last_bin() {
        let events = EventStream::new(vec![vec![1.0]], 1.0).unwrap();
        let series = bin_events(&events, 0.5).unwrap();
        assert_eq!(series.counts()[0], vec![0.0, 1.0]);
    }

    #[test]
    fn shifted_copy_has_unit_correlation() {
        // x_1 is x_0 delayed by exactly 2 bins.
        let base = vec![1.0, 5.0, 2.0, 8.0, 3.0, 9.0, 4.0, 7.0, 2.0, 6.0];
        let mut shifted = vec![0.0, 0.0];
        shifted.extend_from_slice(&base[..8]);
        let series = BinnedSeries::from_counts(1.0, vec![base, shifted]).unwrap();
        let out = leadlag_adjacency(&series, 2).unwrap();
        // edge 0 -> 1 carries the perfect lagged correlation
        let raw = out.adjacency.entry(1, 0) * out.raw_frobenius;
        assert!((raw - 1.0).abs() < 1e-12);
    }

    #[test]
    fn white_noise_has_small_raw_correlations() {
        let mut rng = ChaCha8Rng::seed_from_u64(88);
        let counts: Vec<Vec<f64>> = (0..3)
            .map(|_| (0..10_000).map(|_| rng.gen_range(0..6) as f64).collect())
            .collect();
        let series = BinnedSeries::from_counts(1.0, counts).unwrap();
        let out = leadlag_adjacency(&series, 2).unwrap();
        let max_raw = out
            .adjacency
            .matrix()
            .as_slice()
            .iter()
            .fold(0.0_f64, |acc, &v| acc.max(v * out.raw_frobenius));
        assert!(max_raw < 0.1, "max raw correlation {}", max_raw);
    }

    #[test]
    fn output_frobenius_norm_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let counts: Vec<Vec<f64>> = (0..4)
            .map(|_| (0..100).map(|_| rng.gen::<f64>() * 10.0).collect())
            .collect();
        let series = BinnedSeries::from_counts(0.5, counts).unwrap();
        let out = leadlag_adjacency(&series, 1).unwrap();
        assert!((out.adjacency.matrix().frobenius() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_series_flagged_with_zero_row() {
        let counts = vec![
            vec![3.0; 20],
            (0..20).map(|k| (k % 5) as f64).collect::<Vec<f64>>(),
        ];
        let series = BinnedSeries::from_counts(1.0, counts).unwrap();
        let out = leadlag_adjacency(&series, 1).unwrap();
        assert_eq!(out.zero_variance_types, vec![0]);
        for k in 0..2 {
            assert_eq!(out.adjacency.entry(0, k) * out.raw_frobenius, 0.0);
            assert_eq!(out.adjacency.entry(k, 0) * out.raw_frobenius, 0.0);
        }
    }

    #[test]
    fn too_short_series_rejected() {
        let series = BinnedSeries::from_counts(1.0, vec![vec![1.0, 2.0, 3.0]]).unwrap();
        assert!(leadlag_adjacency(&series, 1).is_err());
        assert!(leadlag_adjacency(&series, 5).is_err());
    }

    #[test]
    fn pearson_is_affine_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let a: Vec<f64> = (0..60).map(|_| rng.gen::<f64>() * 4.0).collect();
        let b: Vec<f64> = (0..60).map(|_| rng.gen::<f64>() * 4.0).collect();
        let rescaled: Vec<f64> = a.iter().map(|v| 7.25 * v + 3.0).collect();
        let s1 = BinnedSeries::from_counts(1.0, vec![a, b.clone()]).unwrap();
        let s2 = BinnedSeries::from_counts(1.0, vec![rescaled, b]).unwrap();
        let o1 = leadlag_adjacency(&s1, 2).unwrap();
        let o2 = leadlag_adjacency(&s2, 2).unwrap();
        for (x, y) in o1
            .adjacency
            .matrix()
            .as_slice()
            .iter()
            .zip(o2.adjacency.matrix().as_slice())
        {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn sweep_single_pair_and_duplicates() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pairs: Vec<(usize, f64)> = (0..500)
            .map(|_| (rng.gen_range(0..2), rng.gen::<f64>() * 50.0))
            .collect();
        let events = EventStream::from_pairs(2, &pairs, 50.0).unwrap();

        let single = sensitivity_sweep(&events, &[0.5], &[2]).unwrap();
        assert_eq!(single.entries.len(), 1);
        assert_eq!(single.distances, vec![vec![0.0]]);

        let dup = sensitivity_sweep(&events, &[0.5, 0.5], &[2]).unwrap();
        assert_eq!(dup.distances[0][1], 0.0);
    }

    #[test]
    fn sweep_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let pairs: Vec<(usize, f64)> = (0..400)
            .map(|_| (rng.gen_range(0..3), rng.gen::<f64>() * 40.0))
            .collect();
        let events = EventStream::from_pairs(3, &pairs, 40.0).unwrap();
        let a = sensitivity_sweep(&events, &[0.25, 1.0], &[1, 4]).unwrap();
        let b = sensitivity_sweep(&events, &[0.25, 1.0], &[1, 4]).unwrap();
        assert_eq!(a.distances, b.distances);
    }
}
