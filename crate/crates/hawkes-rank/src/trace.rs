//! Intensity evaluation and the moment-level operations derived from it.
//!
//! `evaluate_intensity` walks events and grid points in one merged pass,
//! keeping a per-type decay state
//!
//! ```text
//! endo_i(t) = exp(-(t - t_prev)/tau) * endo_i(t_prev)   between events
//! endo_i(s+) = endo_i(s) + n[j][i] / tau                at a type-j event
//! ```
//!
//! which is mathematically identical to the double sum over all past
//! events but costs O(events + grid) instead of O(events * grid).

use crate::error::HawkesError;
use crate::linalg::Matrix;
use crate::model::{EventStream, HawkesModel};

/// Per-type intensity values on a time grid, split into exogenous and
/// endogenous parts. `values = exo_part + endo_part` holds exactly at
/// every grid point because values are stored as that sum.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityTrace {
    grid: Vec<f64>,
    values: Vec<Vec<f64>>,
    exo_part: Vec<Vec<f64>>,
    endo_part: Vec<Vec<f64>>,
}

impl IntensityTrace {
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Number of event types.
    pub fn dim(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    /// Total intensity vectors, one per grid point.
    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn exo_part(&self) -> &[Vec<f64>] {
        &self.exo_part
    }

    pub fn endo_part(&self) -> &[Vec<f64>] {
        &self.endo_part
    }
}

/// Uniform grid over `[0, horizon]` with the given step (default 0.1).
pub fn uniform_grid(horizon: f64, step: f64) -> Vec<f64> {
    let n = (horizon / step).floor() as usize;
    let mut grid: Vec<f64> = (0..=n).map(|k| k as f64 * step).collect();
    if let Some(&last) = grid.last() {
        if last < horizon - 1e-12 * horizon.max(1.0) {
            grid.push(horizon);
        }
    }
    grid
}

/// Evaluate `lambda_i(t)` on `grid` given past events.
///
/// Events at exactly a grid time do not contribute there (the endogenous
/// sum runs over strictly earlier events only).
pub fn evaluate_intensity(
    model: &HawkesModel,
    events: &EventStream,
    grid: &[f64],
) -> Result<IntensityTrace, HawkesError> {
    let dim = model.dim();
    if events.dim() != dim {
        return Err(HawkesError::DimensionMismatch(format!(
            "model dimension {} vs event stream dimension {}",
            dim,
            events.dim()
        )));
    }
    for w in grid.windows(2) {
        if !(w[1] > w[0]) {
            return Err(HawkesError::InvalidInput(
                "grid must be strictly increasing".to_string(),
            ));
        }
    }
    for &g in grid {
        if !g.is_finite() || g < 0.0 || g > events.horizon() {
            return Err(HawkesError::InvalidInput(format!(
                "grid point {} outside window [0, {}]",
                g,
                events.horizon()
            )));
        }
    }

    let tau = model.tau();
    let branching = model.branching();
    let merged = events.merged();

    let mut endo = vec![0.0_f64; dim];
    let mut last_t = 0.0_f64;
    let mut next_event = 0usize;

    let mut values = Vec::with_capacity(grid.len());
    let mut exo_out = Vec::with_capacity(grid.len());
    let mut endo_out = Vec::with_capacity(grid.len());

    for &g in grid {
        // Fold in events strictly before this grid point.
        while next_event < merged.len() && merged[next_event].1 < g {
            let (ty, s) = merged[next_event];
            let decay = (-(s - last_t) / tau).exp();
            for e in endo.iter_mut() {
                *e *= decay;
            }
            for i in 0..dim {
                endo[i] += branching.entry(ty, i) / tau;
            }
            last_t = s;
            next_event += 1;
        }
        let decay = (-(g - last_t) / tau).exp();
        for e in endo.iter_mut() {
            *e *= decay;
        }
        last_t = g;

        let exo = model.exo().rates_at(g).to_vec();
        let value: Vec<f64> = exo.iter().zip(&endo).map(|(a, b)| a + b).collect();
        for &v in &value {
            if !v.is_finite() {
                return Err(HawkesError::NonFinite("intensity evaluation".to_string()));
            }
        }
        exo_out.push(exo);
        endo_out.push(endo.clone());
        values.push(value);
    }

    Ok(IntensityTrace {
        grid: grid.to_vec(),
        values,
        exo_part: exo_out,
        endo_part: endo_out,
    })
}

/// Endogenous share of the total intensity, per type and grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct EndoExoRatio {
    pub grid: Vec<f64>,
    /// `ratio[k][i] = endo_i(t_k) / lambda_i(t_k)`, in [0, 1].
    pub ratio: Vec<Vec<f64>>,
    /// Number of (time, type) entries where the total intensity was zero
    /// and the ratio was defined as 0 by convention.
    pub silent_points: usize,
}

/// Fraction of intensity due to self- and cross-excitation at each grid
/// point. Zero total intensity yields ratio 0 and is counted in
/// `silent_points`.
pub fn endo_exo_ratio(trace: &IntensityTrace) -> EndoExoRatio {
    let mut ratio = Vec::with_capacity(trace.len());
    let mut silent = 0usize;
    for (vals, endo) in trace.values().iter().zip(trace.endo_part()) {
        let row: Vec<f64> = vals
            .iter()
            .zip(endo)
            .map(|(&v, &e)| {
                if v > 0.0 {
                    e / v
                } else {
                    silent += 1;
                    0.0
                }
            })
            .collect();
        ratio.push(row);
    }
    EndoExoRatio {
        grid: trace.grid().to_vec(),
        ratio,
        silent_points: silent,
    }
}

/// Stationary expected intensity vector: the solution of
/// `x = mu + N^T x`, i.e. a direct solve of `(I - N^T) x = mu`.
///
/// Defined only for a sub-critical process with a constant schedule.
pub fn stationary_mean(model: &HawkesModel) -> Result<Vec<f64>, HawkesError> {
    model.require_stationary()?;
    if !model.exo().is_constant() {
        return Err(HawkesError::InvalidInput(
            "stationary mean undefined for a time-varying schedule".to_string(),
        ));
    }
    let mu = &model.exo().rates()[0];
    solve_resolvent(model.branching().matrix(), mu)
}

/// Solve `(I - B^T) x = rhs` for a matrix with spectral radius < 1.
/// Shared by the stationary mean and the first-moment ranking.
pub(crate) fn solve_resolvent(b: &Matrix, rhs: &[f64]) -> Result<Vec<f64>, HawkesError> {
    let dim = b.dim();
    if rhs.len() != dim {
        return Err(HawkesError::DimensionMismatch(format!(
            "matrix dim {} vs vector len {}",
            dim,
            rhs.len()
        )));
    }
    let mut system = Matrix::identity(dim);
    for i in 0..dim {
        for j in 0..dim {
            system.set(i, j, system.get(i, j) - b.get(j, i));
        }
    }
    system.solve(rhs)
}

/// Cascade-amplified memory scale `tau / (1 - n)` where `n` is the
/// spectral radius of the branching matrix.
pub fn effective_memory(model: &HawkesModel) -> Result<f64, HawkesError> {
    model.require_stationary()?;
    Ok(model.tau() / (1.0 - model.spectral_radius()))
}

/// Expected intensity after a single source event of every type at t=0
/// with no background rate afterwards; the t=0 spike itself is excluded.
///
/// For one type this is the closed form `(n/tau) exp(-(1-n) t / tau)`.
/// For several types the first-moment convolution equation is integrated
/// numerically on `grid` (trapezoid on the exponentially weighted
/// integrand, implicit in the current point).
pub fn impulse_response(
    model: &HawkesModel,
    grid: &[f64],
) -> Result<Vec<Vec<f64>>, HawkesError> {
    model.require_stationary()?;
    for w in grid.windows(2) {
        if !(w[1] > w[0]) {
            return Err(HawkesError::InvalidInput(
                "grid must be strictly increasing".to_string(),
            ));
        }
    }
    if grid.iter().any(|&g| !(g > 0.0)) {
        return Err(HawkesError::InvalidInput(
            "impulse response grid times must be > 0".to_string(),
        ));
    }
    let tau = model.tau();
    let dim = model.dim();

    if dim == 1 {
        let n = model.branching().entry(0, 0);
        return Ok(grid
            .iter()
            .map(|&t| vec![n / tau * (-(1.0 - n) * t / tau).exp()])
            .collect());
    }

    // response(t) = phi(t) c0 + integral_0^t phi(t-s) N^T response(s) ds,
    // c0 = N^T 1. Stepping with the decayed running integral keeps the
    // cost linear in grid length.
    let nt = model.branching().matrix();
    let c0 = nt.tr_matvec(&vec![1.0; dim]);
    let mut response_prev: Vec<f64> = c0.iter().map(|v| v / tau).collect();
    let mut weighted_integral = vec![0.0_f64; dim];
    let mut t_prev = 0.0_f64;
    let mut out = Vec::with_capacity(grid.len());

    for &t in grid {
        let h = t - t_prev;
        let decay = (-h / tau).exp();
        let lhs_scale = h / (2.0 * tau);
        // (I - lhs_scale * N^T) response = rhs
        let mut system = Matrix::identity(dim);
        for i in 0..dim {
            for j in 0..dim {
                system.set(i, j, system.get(i, j) - lhs_scale * nt.get(j, i));
            }
        }
        let prev_flow = nt.tr_matvec(&response_prev);
        let mut rhs = vec![0.0_f64; dim];
        for i in 0..dim {
            weighted_integral[i] = decay * (weighted_integral[i] + 0.5 * h * prev_flow[i]);
            rhs[i] = (-t / tau).exp() * c0[i] / tau + weighted_integral[i] / tau;
        }
        let response = system.solve(&rhs)?;
        let new_flow = nt.tr_matvec(&response);
        for i in 0..dim {
            weighted_integral[i] += 0.5 * h * new_flow[i];
        }
        t_prev = t;
        response_prev = response.clone();
        out.push(response);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BranchingMatrix, ExoSchedule, Kernel};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn model_1d(mu: f64, n: f64, tau: f64) -> HawkesModel {
        HawkesModel::new(
            ExoSchedule::constant(vec![mu]).unwrap(),
            BranchingMatrix::new(&[vec![n]]).unwrap(),
            Kernel::exponential(tau).unwrap(),
        )
        .unwrap()
    }

    fn random_model(rng: &mut ChaCha8Rng, dim: usize) -> HawkesModel {
        let mu: Vec<f64> = (0..dim).map(|_| 0.1 + rng.gen::<f64>()).collect();
        loop {
            let rows: Vec<Vec<f64>> = (0..dim)
                .map(|_| (0..dim).map(|_| rng.gen::<f64>() * 0.4).collect())
                .collect();
            let b = BranchingMatrix::new(&rows).unwrap();
            if b.is_stationary() {
                return HawkesModel::new(
                    ExoSchedule::constant(mu.clone()).unwrap(),
                    b,
                    Kernel::exponential(0.5 + rng.gen::<f64>()).unwrap(),
                )
                .unwrap();
            }
        }
    }

    fn random_stream(rng: &mut ChaCha8Rng, dim: usize, horizon: f64, count: usize) -> EventStream {
        let pairs: Vec<(usize, f64)> = (0..count)
            .map(|_| (rng.gen_range(0..dim), rng.gen::<f64>() * horizon))
            .collect();
        EventStream::from_pairs(dim, &pairs, horizon).unwrap()
    }

    /// Direct double sum over all past events; the independent route the
    /// recursive evaluator is checked against.
    fn brute_force_intensity(
        model: &HawkesModel,
        events: &EventStream,
        t: f64,
        type_index: usize,
    ) -> f64 {
        let mut lambda = model.exo().rate_at(type_index, t);
        for (source, list) in events.all_times().iter().enumerate() {
            for &s in list {
                if s < t {
                    lambda += model.branching().entry(source, type_index)
                        * model.kernel().evaluate(t - s);
                }
            }
        }
        lambda
    }

    #[test]
    fn no_events_gives_pure_exo() {
        let model = model_1d(0.7, 0.3, 1.0);
        let events = EventStream::empty(1, 10.0).unwrap();
        let grid = uniform_grid(10.0, 0.5);
        let trace = evaluate_intensity(&model, &events, &grid).unwrap();
        for (v, e) in trace.values().iter().zip(trace.endo_part()) {
            assert_eq!(v[0], 0.7);
            assert_eq!(e[0], 0.0);
        }
    }

    #[test]
    fn single_event_hand_value() {
        // mu=0, n=0.5, tau=1, event at 0: lambda(1) = 0.5 * exp(-1)
        let model = model_1d(0.0, 0.5, 1.0);
        let events = EventStream::new(vec![vec![0.0]], 2.0).unwrap();
        let trace = evaluate_intensity(&model, &events, &[1.0]).unwrap();
        assert!((trace.values()[0][0] - 0.5 * (-1.0_f64).exp()).abs() < 1e-12);
        assert!((trace.values()[0][0] - 0.18394).abs() < 1e-5);
    }

    #[test]
    fn event_at_grid_time_is_excluded() {
        let model = model_1d(0.2, 0.5, 1.0);
        let events = EventStream::new(vec![vec![1.0]], 2.0).unwrap();
        let trace = evaluate_intensity(&model, &events, &[1.0, 1.5]).unwrap();
        // At t = 1.0 the event has not yet contributed.
        assert_eq!(trace.values()[0][0], 0.2);
        assert!(trace.values()[1][0] > 0.2);
    }

    #[test]
    fn recursive_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10 {
            let dim = rng.gen_range(1..4);
            let count = rng.gen_range(10..200);
            let model = random_model(&mut rng, dim);
            let events = random_stream(&mut rng, dim, 20.0, count);
            let grid = uniform_grid(20.0, 0.25);
            let trace = evaluate_intensity(&model, &events, &grid).unwrap();
            for (k, &g) in grid.iter().enumerate() {
                for i in 0..dim {
                    let direct = brute_force_intensity(&model, &events, g, i);
                    assert!(
                        (trace.values()[k][i] - direct).abs() < 1e-10,
                        "mismatch at t={} type {}: {} vs {}",
                        g,
                        i,
                        trace.values()[k][i],
                        direct
                    );
                }
            }
        }
    }

    #[test]
    fn decomposition_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let model = random_model(&mut rng, 3);
        let events = random_stream(&mut rng, 3, 15.0, 120);
        let trace =
            evaluate_intensity(&model, &events, &uniform_grid(15.0, 0.1)).unwrap();
        for k in 0..trace.len() {
            for i in 0..3 {
                let sum = trace.exo_part()[k][i] + trace.endo_part()[k][i];
                assert_eq!(trace.values()[k][i], sum);
                assert!(trace.values()[k][i] >= 0.0);
            }
        }
    }

    #[test]
    fn intensity_decays_between_events() {
        let model = model_1d(0.3, 0.8, 0.7);
        let events = EventStream::new(vec![vec![1.0]], 10.0).unwrap();
        let grid: Vec<f64> = (0..80).map(|k| 1.05 + k as f64 * 0.1).collect();
        let trace = evaluate_intensity(&model, &events, &grid).unwrap();
        for w in trace.values().windows(2) {
            assert!(w[1][0] < w[0][0]);
        }
    }

    #[test]
    fn grid_outside_window_rejected() {
        let model = model_1d(0.3, 0.2, 1.0);
        let events = EventStream::empty(1, 5.0).unwrap();
        assert!(evaluate_intensity(&model, &events, &[4.0, 6.0]).is_err());
        assert!(evaluate_intensity(&model, &events, &[2.0, 2.0]).is_err());
    }

    #[test]
    fn ratio_zero_without_events_one_without_exo() {
        let model = model_1d(0.5, 0.5, 1.0);
        let empty = EventStream::empty(1, 5.0).unwrap();
        let trace = evaluate_intensity(&model, &empty, &uniform_grid(5.0, 0.5)).unwrap();
        let r = endo_exo_ratio(&trace);
        assert!(r.ratio.iter().all(|row| row[0] == 0.0));
        assert_eq!(r.silent_points, 0);

        // mu = 0 with a past event: ratio 1 after the event.
        let silent_model = model_1d(0.0, 0.5, 1.0);
        let events = EventStream::new(vec![vec![0.5]], 5.0).unwrap();
        let trace =
            evaluate_intensity(&silent_model, &events, &[1.0, 2.0, 3.0]).unwrap();
        let r = endo_exo_ratio(&trace);
        for row in &r.ratio {
            assert_eq!(row[0], 1.0);
        }
        // before the event everything is silent
        let trace0 = evaluate_intensity(&silent_model, &events, &[0.25]).unwrap();
        let r0 = endo_exo_ratio(&trace0);
        assert_eq!(r0.ratio[0][0], 0.0);
        assert_eq!(r0.silent_points, 1);
    }

    #[test]
    fn ratio_times_value_recovers_endo() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let model = random_model(&mut rng, 2);
        let events = random_stream(&mut rng, 2, 12.0, 60);
        let trace =
            evaluate_intensity(&model, &events, &uniform_grid(12.0, 0.2)).unwrap();
        let r = endo_exo_ratio(&trace);
        for k in 0..trace.len() {
            for i in 0..2 {
                let back = r.ratio[k][i] * trace.values()[k][i];
                assert!((back - trace.endo_part()[k][i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn stationary_mean_univariate_and_identity() {
        let m = model_1d(0.5, 0.5, 1.0);
        assert!((stationary_mean(&m).unwrap()[0] - 1.0).abs() < 1e-14);

        let exo = ExoSchedule::constant(vec![0.3, 0.9]).unwrap();
        let model = HawkesModel::new(
            exo,
            BranchingMatrix::zeros(2),
            Kernel::exponential(1.0).unwrap(),
        )
        .unwrap();
        let m = stationary_mean(&model).unwrap();
        assert_eq!(m, vec![0.3, 0.9]);
    }

    #[test]
    fn stationary_mean_matches_neumann_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let model = random_model(&mut rng, 3);
            let direct = stationary_mean(&model).unwrap();
            // Truncated series sum_k (N^T)^k mu.
            let mu = model.exo().rates()[0].clone();
            let mut total = mu.clone();
            let mut term = mu;
            for _ in 0..10_000 {
                term = model.branching().matrix().tr_matvec(&term);
                for (t, v) in total.iter_mut().zip(&term) {
                    *t += v;
                }
                if term.iter().map(|v| v.abs()).fold(0.0, f64::max) < 1e-12 {
                    break;
                }
            }
            for (d, s) in direct.iter().zip(&total) {
                assert!((d - s).abs() < 1e-9, "solve {} vs series {}", d, s);
            }
        }
    }

    #[test]
    fn stationary_mean_refuses_multi_segment_and_critical() {
        let exo =
            ExoSchedule::piecewise(vec![0.0, 1.0], vec![vec![0.1], vec![0.2]]).unwrap();
        let model = HawkesModel::new(
            exo,
            BranchingMatrix::new(&[vec![0.5]]).unwrap(),
            Kernel::exponential(1.0).unwrap(),
        )
        .unwrap();
        assert!(stationary_mean(&model).is_err());
        let hot = model_1d(0.1, 1.0, 1.0);
        assert!(matches!(
            stationary_mean(&hot),
            Err(HawkesError::NotStationary { .. })
        ));
    }

    #[test]
    fn effective_memory_values() {
        assert!((effective_memory(&model_1d(0.1, 0.5, 2.0)).unwrap() - 4.0).abs() < 1e-12);
        assert!((effective_memory(&model_1d(0.1, 0.9, 2.0)).unwrap() - 20.0).abs() < 1e-9);
        assert!((effective_memory(&model_1d(0.1, 0.0, 2.0)).unwrap() - 2.0).abs() < 1e-15);
        assert!(effective_memory(&model_1d(0.1, 1.2, 2.0)).is_err());
    }

    #[test]
    fn impulse_response_closed_form() {
        let model = model_1d(0.0, 0.5, 2.0);
        let grid = vec![1.0, 4.0, 8.0];
        let h = impulse_response(&model, &grid).unwrap();
        // (n/tau) exp(-(1-n) t / tau) at t=4: 0.25 * exp(-1)
        assert!((h[1][0] - 0.25 * (-1.0_f64).exp()).abs() < 1e-12);
        assert!((h[1][0] - 0.09197).abs() < 1e-5);

        let zero = model_1d(0.0, 0.0, 2.0);
        for row in impulse_response(&zero, &grid).unwrap() {
            assert_eq!(row[0], 0.0);
        }
    }

    #[test]
    fn impulse_response_log_is_affine() {
        let model = model_1d(0.0, 0.6, 1.5);
        let grid: Vec<f64> = (1..200).map(|k| k as f64 * 0.1).collect();
        let h = impulse_response(&model, &grid).unwrap();
        let logs: Vec<f64> = h.iter().map(|r| r[0].ln()).collect();
        let slope_expected = -(1.0 - 0.6) / 1.5;
        // Least-squares line through (t, log h).
        let n = grid.len() as f64;
        let sx: f64 = grid.iter().sum();
        let sy: f64 = logs.iter().sum();
        let sxx: f64 = grid.iter().map(|t| t * t).sum();
        let sxy: f64 = grid.iter().zip(&logs).map(|(t, l)| t * l).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        let intercept = (sy - slope * sx) / n;
        assert!((slope - slope_expected).abs() < 1e-10);
        let max_residual = grid
            .iter()
            .zip(&logs)
            .map(|(t, l)| (l - (slope * t + intercept)).abs())
            .fold(0.0, f64::max);
        assert!(max_residual < 1e-8);
    }

    #[test]
    fn impulse_response_multivariate_matches_ode_oracle() {
        // Oracle: fine Runge-Kutta on g' = (N^T - I) g / tau with
        // g(0) = N^T 1 / tau, an independent route to the same response.
        let rows = vec![
            vec![0.30, 0.15, 0.05],
            vec![0.10, 0.25, 0.20],
            vec![0.05, 0.10, 0.35],
        ];
        let model = HawkesModel::new(
            ExoSchedule::constant(vec![0.0, 0.0, 0.0]).unwrap(),
            BranchingMatrix::new(&rows).unwrap(),
            Kernel::exponential(1.2).unwrap(),
        )
        .unwrap();
        let tau = 1.2;
        let grid: Vec<f64> = (1..=600).map(|k| k as f64 * 0.01).collect();
        let h = impulse_response(&model, &grid).unwrap();

        let nt = model.branching().matrix();
        let deriv = |g: &[f64]| -> Vec<f64> {
            let flow = nt.tr_matvec(g);
            g.iter()
                .zip(&flow)
                .map(|(gi, fi)| (fi - gi) / tau)
                .collect()
        };
        let mut g: Vec<f64> = nt
            .tr_matvec(&[1.0, 1.0, 1.0])
            .iter()
            .map(|v| v / tau)
            .collect();
        let dt = 1e-4;
        let mut t = 0.0;
        let mut check = Vec::new();
        for &target in &grid {
            while t < target - dt / 2.0 {
                let k1 = deriv(&g);
                let g2: Vec<f64> = g.iter().zip(&k1).map(|(a, b)| a + 0.5 * dt * b).collect();
                let k2 = deriv(&g2);
                let g3: Vec<f64> = g.iter().zip(&k2).map(|(a, b)| a + 0.5 * dt * b).collect();
                let k3 = deriv(&g3);
                let g4: Vec<f64> = g.iter().zip(&k3).map(|(a, b)| a + dt * b).collect();
                let k4 = deriv(&g4);
                for i in 0..3 {
                    g[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                }
                t += dt;
            }
            check.push(g.clone());
        }
        for (ours, oracle) in h.iter().zip(&check) {
            for i in 0..3 {
                assert!(
                    (ours[i] - oracle[i]).abs() < 5e-4,
                    "{} vs {}",
                    ours[i],
                    oracle[i]
                );
            }
        }
    }
}
