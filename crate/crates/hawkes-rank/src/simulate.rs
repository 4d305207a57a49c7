//! Exact simulation by thinning.
//!
//! Candidates are proposed at the current total intensity, which upper
//! bounds the true intensity until the next event or schedule breakpoint:
//! the exponential kernel only decays and the exogenous rate is constant
//! within a segment. Candidate horizons never cross a breakpoint; the
//! bound is re-established there instead. Accepted candidates are typed
//! proportionally to the per-type intensities at the candidate time.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::HawkesError;
use crate::model::{EventStream, HawkesModel};

/// Simulate an event stream over `[0, horizon)`.
///
/// Deterministic given `(model, horizon, seed)`. Requires a sub-critical
/// branching matrix (spectral radius < 1).
pub fn simulate(
    model: &HawkesModel,
    horizon: f64,
    seed: u64,
) -> Result<EventStream, HawkesError> {
    model.require_stationary()?;
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(HawkesError::InvalidInput(format!(
            "horizon must be finite and > 0, got {}",
            horizon
        )));
    }

    let dim = model.dim();
    let tau = model.tau();
    let branching = model.branching();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut events: Vec<Vec<f64>> = vec![Vec::new(); dim];
    // Endogenous intensity per type just after the current time.
    let mut endo = vec![0.0_f64; dim];
    let mut t = 0.0_f64;

    loop {
        let rates = model.exo().rates_at(t);
        let bound: f64 = rates.iter().sum::<f64>() + endo.iter().sum::<f64>();
        if !bound.is_finite() {
            return Err(HawkesError::NonFinite("thinning bound".to_string()));
        }
        let next_break = model
            .exo()
            .next_breakpoint_after(t)
            .filter(|&b| b < horizon);

        if bound <= 0.0 {
            // Nothing can fire in this segment; skip to the next one.
            match next_break {
                Some(b) => {
                    t = b;
                    continue;
                }
                None => break,
            }
        }

        let u: f64 = rng.gen();
        let wait = -(1.0 - u).ln() / bound;
        if !(wait > 0.0) {
            continue; // u landed on 0; redraw
        }
        let candidate = t + wait;

        if let Some(b) = next_break {
            if candidate >= b {
                // Re-establish the bound at the breakpoint; memoryless
                // waiting times make this restart exact.
                let decay = (-(b - t) / tau).exp();
                for e in endo.iter_mut() {
                    *e *= decay;
                }
                t = b;
                continue;
            }
        }
        if candidate >= horizon {
            break;
        }

        let decay = (-wait / tau).exp();
        for e in endo.iter_mut() {
            *e *= decay;
        }
        // Same segment as t, so the exogenous rates are unchanged.
        let lambda: Vec<f64> = rates.iter().zip(&endo).map(|(m, e)| m + e).collect();
        let total: f64 = lambda.iter().sum();
        debug_assert!(
            total <= bound * (1.0 + 1e-12),
            "thinning bound violated: {} > {}",
            total,
            bound
        );

        t = candidate;
        let accept: f64 = rng.gen();
        if accept * bound < total {
            let pick: f64 = rng.gen::<f64>() * total;
            let mut cumulative = 0.0;
            let mut ty = dim - 1;
            for (i, &l) in lambda.iter().enumerate() {
                cumulative += l;
                if pick < cumulative {
                    ty = i;
                    break;
                }
            }
            events[ty].push(candidate);
            for (k, e) in endo.iter_mut().enumerate() {
                *e += branching.entry(ty, k) / tau;
            }
        }
    }

    EventStream::new(events, horizon)
}
