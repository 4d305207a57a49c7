//! Property-level checks of the ranking benchmark across structural
//! parameters: the first-moment ranking stays the best static method on
//! seed-averaged means over a (eta, branching ratio) subgrid.

use hawkes_rank::centrality::CentralityMethod;
use hawkes_rank::*;

#[test]
fn first_moment_leads_across_structural_subgrid() {
    for eta in [1usize, 5, 8] {
        for target_n in [0.3_f64, 0.6, 0.9] {
            let config = BenchmarkConfig {
                eta,
                target_n,
                shock: ShockSpec {
                    enabled: false,
                    ..BenchmarkConfig::default().shock
                },
                ..BenchmarkConfig::default()
            };
            assert!(config.seeds.len() >= 20);
            let result = run_benchmark(&config).unwrap();
            let fm = result
                .post_burn_in_mean(CentralityMethod::FirstMoment)
                .unwrap();
            for other in [
                CentralityMethod::Katz,
                CentralityMethod::Eigenvector,
                CentralityMethod::PageRank,
            ] {
                let mean = result.post_burn_in_mean(other).unwrap();
                assert!(
                    fm >= mean,
                    "eta={} n={}: first moment {:.4} behind {} {:.4}",
                    eta,
                    target_n,
                    fm,
                    other.label(),
                    mean
                );
            }
        }
    }
}

#[test]
fn poisson_reduction_rate_law_large_horizon() {
    // n = 0 reduces the process to Poisson: count within 4 sigma of
    // mu*T on a T=1e4 run.
    let model = HawkesModel::new(
        ExoSchedule::constant(vec![2.0]).unwrap(),
        BranchingMatrix::zeros(1),
        Kernel::exponential(1.0).unwrap(),
    )
    .unwrap();
    let horizon = 10_000.0;
    let stream = simulate(&model, horizon, 424).unwrap();
    let expected = 2.0 * horizon;
    let sigma = expected.sqrt();
    let count = stream.total_count() as f64;
    assert!(
        (count - expected).abs() < 4.0 * sigma,
        "count {} vs {} +- {}",
        count,
        expected,
        4.0 * sigma
    );
}
