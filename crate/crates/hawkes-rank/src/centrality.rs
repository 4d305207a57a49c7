//! Static centrality benchmarks: Katz, eigenvector, PageRank, and the
//! stationary first-moment ranking of the point process.
//!
//! Conventions. `AdjacencyMatrix` stores `entry(i, j)` = strength of the
//! directed influence j -> i, so scores accumulate along incoming edges:
//!
//! ```text
//! katz:   c = alpha A c + beta          solved as (I - alpha A) c = beta
//! eig:    A c = lambda_max c            (the alpha -> 1/lambda_max limit)
//! pr:     PR_i = (1-d)/M + d sum_j A[i][j] PR_j / out_j
//! ```
//!
//! where `out_j` is the total outgoing weight of node j (column sum).
//! A branching matrix stores the same edges source-major, so converting
//! it to an adjacency transposes the layout; with that identification
//! `first_moment_rank(N, mu)` and `katz(N/alpha, alpha, mu)` are the same
//! linear system.

use crate::error::HawkesError;
use crate::linalg::{is_irreducible, power_iteration, Matrix};
use crate::model::BranchingMatrix;
use crate::trace::solve_resolvent;

const EIG_TOL: f64 = 1e-10;
const EIG_MAX_ITER: usize = 100_000;
const PR_TOL: f64 = 1e-12;
const PR_MAX_ITER: usize = 100_000;

/// Nonnegative influence matrix; `entry(i, j)` is the strength of the
/// directed edge j -> i. The largest eigenvalue modulus is cached.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyMatrix {
    entries: Matrix,
    lambda_max: f64,
}

impl AdjacencyMatrix {
    pub fn new(rows: &[Vec<f64>]) -> Result<Self, HawkesError> {
        Self::from_matrix(Matrix::from_rows(rows)?)
    }

    pub fn from_matrix(entries: Matrix) -> Result<Self, HawkesError> {
        for &v in entries.as_slice() {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(HawkesError::InvalidInput(format!(
                    "adjacency entries must be finite and >= 0, got {}",
                    v
                )));
            }
        }
        let lambda_max = entries.spectral_radius();
        Ok(Self {
            entries,
            lambda_max,
        })
    }

    /// View a branching matrix as an adjacency: same edges, transposed
    /// storage (branching is source-major, adjacency target-major).
    pub fn from_branching(branching: &BranchingMatrix) -> Self {
        Self {
            entries: branching.matrix().transposed(),
            lambda_max: branching.spectral_radius(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.dim()
    }

    /// Influence j -> i.
    pub fn entry(&self, target: usize, source: usize) -> f64 {
        self.entries.get(target, source)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.entries
    }

    /// Cached spectral radius.
    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }
}

/// Which operator produced a score vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CentralityMethod {
    Katz,
    Eigenvector,
    PageRank,
    FirstMoment,
}

impl CentralityMethod {
    pub fn label(&self) -> &'static str {
        match self {
            CentralityMethod::Katz => "katz",
            CentralityMethod::Eigenvector => "eigenvector",
            CentralityMethod::PageRank => "pagerank",
            CentralityMethod::FirstMoment => "first_moment",
        }
    }
}

/// Scores plus the method tag. `warning` is set when the input was
/// degenerate (reducible matrix for the eigenvector method) and the
/// returned direction is the documented deterministic fallback.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityVector {
    pub scores: Vec<f64>,
    pub method: CentralityMethod,
    pub warning: bool,
}

/// Katz centrality `(I - alpha A)^{-1} beta`, direct linear solve.
///
/// Requires `0 < alpha < 1 / lambda_max` (any positive alpha when the
/// matrix is nilpotent).
pub fn katz(
    a: &AdjacencyMatrix,
    alpha: f64,
    beta: &[f64],
) -> Result<CentralityVector, HawkesError> {
    let dim = a.dim();
    if beta.len() != dim {
        return Err(HawkesError::DimensionMismatch(format!(
            "adjacency dim {} vs beta len {}",
            dim,
            beta.len()
        )));
    }
    if beta.iter().any(|v| !v.is_finite()) {
        return Err(HawkesError::InvalidInput("beta must be finite".to_string()));
    }
    let bound = if a.lambda_max() > 0.0 {
        1.0 / a.lambda_max()
    } else {
        f64::INFINITY
    };
    if !(alpha > 0.0 && alpha < bound) {
        return Err(HawkesError::AlphaOutOfRange { alpha, bound });
    }
    let mut system = Matrix::identity(dim);
    for i in 0..dim {
        for j in 0..dim {
            system.set(i, j, system.get(i, j) - alpha * a.entry(i, j));
        }
    }
    let scores = system.solve(beta)?;
    Ok(CentralityVector {
        scores,
        method: CentralityMethod::Katz,
        warning: false,
    })
}

/// Leading eigenvector of the adjacency, L1-normalized and nonnegative.
///
/// Reducible matrices are accepted with `warning = true`: the returned
/// direction is the deterministic limit of power iteration from the
/// uniform start, and downstream rank ties break by lowest index.
pub fn eigenvector_centrality(a: &AdjacencyMatrix) -> Result<CentralityVector, HawkesError> {
    if a.lambda_max() == 0.0 {
        return Err(HawkesError::InvalidInput(
            "eigenvector centrality undefined for a zero spectral radius".to_string(),
        ));
    }
    let out = power_iteration(a.matrix(), EIG_TOL, EIG_MAX_ITER)?;
    Ok(CentralityVector {
        scores: out.vector,
        method: CentralityMethod::Eigenvector,
        warning: !is_irreducible(a.matrix()),
    })
}

/// PageRank with damping `d` on the out-weight-normalized graph.
///
/// Dangling nodes (zero outgoing weight) redistribute their mass
/// uniformly. Power iteration to an L1 tolerance of 1e-12; the output is
/// a probability vector.
pub fn pagerank(a: &AdjacencyMatrix, d: f64) -> Result<CentralityVector, HawkesError> {
    if !(d > 0.0 && d < 1.0) {
        return Err(HawkesError::InvalidInput(format!(
            "damping factor must be in (0, 1), got {}",
            d
        )));
    }
    let dim = a.dim();
    let uniform = 1.0 / dim as f64;
    // Outgoing weight of node j is the j-th column sum of the
    // target-major adjacency.
    let mut out_weight = vec![0.0_f64; dim];
    for j in 0..dim {
        for i in 0..dim {
            out_weight[j] += a.entry(i, j);
        }
    }
    let mut pr = vec![uniform; dim];
    for iteration in 1..=PR_MAX_ITER {
        let mut dangling_mass = 0.0;
        let mut pushed = vec![0.0_f64; dim];
        for j in 0..dim {
            if out_weight[j] > 0.0 {
                let share = pr[j] / out_weight[j];
                for (i, p) in pushed.iter_mut().enumerate() {
                    *p += a.entry(i, j) * share;
                }
            } else {
                dangling_mass += pr[j];
            }
        }
        let mut next = vec![0.0_f64; dim];
        let mut delta = 0.0;
        for i in 0..dim {
            next[i] = (1.0 - d) * uniform + d * (pushed[i] + dangling_mass * uniform);
            delta += (next[i] - pr[i]).abs();
        }
        pr = next;
        if delta < PR_TOL {
            let total: f64 = pr.iter().sum();
            for v in pr.iter_mut() {
                *v /= total;
            }
            return Ok(CentralityVector {
                scores: pr,
                method: CentralityMethod::PageRank,
                warning: false,
            });
        }
        if iteration == PR_MAX_ITER {
            break;
        }
    }
    Err(HawkesError::NoConvergence {
        what: "pagerank power iteration".to_string(),
        iterations: PR_MAX_ITER,
    })
}

/// Stationary first-moment ranking `(I - N^T)^{-1} mu`: the expected
/// event rates of the stable process, exposed as a centrality.
pub fn first_moment_rank(
    branching: &BranchingMatrix,
    mu: &[f64],
) -> Result<CentralityVector, HawkesError> {
    if !branching.is_stationary() {
        return Err(HawkesError::NotStationary {
            radius: branching.spectral_radius(),
        });
    }
    if mu.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
        return Err(HawkesError::InvalidInput(
            "mu must be finite and >= 0".to_string(),
        ));
    }
    let scores = solve_resolvent(branching.matrix(), mu)?;
    Ok(CentralityVector {
        scores,
        method: CentralityMethod::FirstMoment,
        warning: false,
    })
}

/// Rank order (indices sorted by descending score, ties by lowest index).
pub fn rank_order(scores: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .expect("finite scores")
            .then(a.cmp(&b))
    });
    idx
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn katz_without_network_returns_beta() {
        let a = AdjacencyMatrix::new(&[vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let c = katz(&a, 0.7, &[1.0, 1.0]).unwrap();
        assert_eq!(c.scores, vec![1.0, 1.0]);
    }

    #[test]
    fn katz_two_node_hand_solve() {
        // Single edge 2 -> 1 (entry (1,2) in 1-based indexing), so node 1
        // collects node 2's score: c = (1 + alpha, 1).
        let a = AdjacencyMatrix::new(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let c = katz(&a, 0.5, &[1.0, 1.0]).unwrap();
        assert!(approx(c.scores[0], 1.5, 1e-14));
        assert!(approx(c.scores[1], 1.0, 1e-14));
    }

    #[test]
    fn katz_alpha_bound_enforced() {
        let a = AdjacencyMatrix::new(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(katz(&a, 0.999, &[1.0, 1.0]).is_ok());
        assert!(matches!(
            katz(&a, 1.0, &[1.0, 1.0]),
            Err(HawkesError::AlphaOutOfRange { .. })
        ));
        assert!(katz(&a, 0.0, &[1.0, 1.0]).is_err());
        assert!(katz(&a, -0.2, &[1.0, 1.0]).is_err());
        // Nilpotent matrix: any positive alpha is fine.
        let nil = AdjacencyMatrix::new(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(katz(&nil, 5.0, &[1.0, 1.0]).is_ok());
    }

    #[test]
    fn katz_matches_fixed_point_iteration() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..25 {
            let n = rng.gen_range(2..8);
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen::<f64>()).collect())
                .collect();
            let a = AdjacencyMatrix::new(&rows).unwrap();
            let alpha = 0.9 / a.lambda_max();
            let beta: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let closed = katz(&a, alpha, &beta).unwrap();
            // Fixed point of c <- alpha A c + beta.
            let mut c = beta.clone();
            for _ in 0..100_000 {
                let ac = a.matrix().matvec(&c);
                let mut delta = 0.0;
                for i in 0..n {
                    let next = alpha * ac[i] + beta[i];
                    delta += (next - c[i]).abs();
                    c[i] = next;
                }
                if delta < 1e-14 {
                    break;
                }
            }
            for (x, y) in closed.scores.iter().zip(&c) {
                assert!(approx(*x, *y, 1e-10), "{} vs {}", x, y);
            }
        }
    }

    #[test]
    fn katz_matches_neumann_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let rows: Vec<Vec<f64>> = (0..5)
            .map(|_| (0..5).map(|_| rng.gen::<f64>()).collect())
            .collect();
        let a = AdjacencyMatrix::new(&rows).unwrap();
        let alpha = 0.5 / a.lambda_max();
        let beta = vec![1.0; 5];
        let closed = katz(&a, alpha, &beta).unwrap();
        let mut total = beta.clone();
        let mut term = beta;
        loop {
            term = a.matrix().matvec(&term).iter().map(|v| alpha * v).collect();
            for (t, v) in total.iter_mut().zip(&term) {
                *t += v;
            }
            if term.iter().map(|v| v.abs()).fold(0.0, f64::max) < 1e-13 {
                break;
            }
        }
        for (x, y) in closed.scores.iter().zip(&total) {
            assert!(approx(*x, *y, 1e-10));
        }
    }

    #[test]
    fn katz_rank_order_is_scale_invariant_in_beta() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let rows: Vec<Vec<f64>> = (0..6)
            .map(|_| (0..6).map(|_| rng.gen::<f64>()).collect())
            .collect();
        let a = AdjacencyMatrix::new(&rows).unwrap();
        let alpha = 0.4 / a.lambda_max();
        let beta: Vec<f64> = (0..6).map(|_| 0.2 + rng.gen::<f64>()).collect();
        let beta_scaled: Vec<f64> = beta.iter().map(|v| 37.5 * v).collect();
        let c1 = katz(&a, alpha, &beta).unwrap();
        let c2 = katz(&a, alpha, &beta_scaled).unwrap();
        assert_eq!(rank_order(&c1.scores), rank_order(&c2.scores));
    }

    #[test]
    fn eigenvector_symmetric_cycle_is_uniform() {
        let a = AdjacencyMatrix::new(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let c = eigenvector_centrality(&a).unwrap();
        assert!(approx(c.scores[0], 0.5, 1e-9));
        assert!(approx(c.scores[1], 0.5, 1e-9));
        assert!(!c.warning);
    }

    #[test]
    fn eigenvector_identity_flags_reducible_and_is_deterministic() {
        let a = AdjacencyMatrix::new(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        let c = eigenvector_centrality(&a).unwrap();
        assert!(c.warning);
        // Degenerate spectrum: the documented fallback is the limit from
        // the uniform start, identical on every call.
        let again = eigenvector_centrality(&a).unwrap();
        assert_eq!(c.scores, again.scores);
        for s in &c.scores {
            assert!(approx(*s, 1.0 / 3.0, 1e-12));
        }
    }

    #[test]
    fn eigenvector_rejects_zero_matrix() {
        let a = AdjacencyMatrix::new(&[vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(eigenvector_centrality(&a).is_err());
    }

    #[test]
    fn katz_limit_recovers_eigenvector_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..20 {
            let n = rng.gen_range(3..9);
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..n).map(|_| 0.05 + rng.gen::<f64>()).collect())
                .collect();
            let a = AdjacencyMatrix::new(&rows).unwrap();
            let eps = 1e-6;
            let alpha = (1.0 - eps) / a.lambda_max();
            let beta = vec![eps; n];
            let k = katz(&a, alpha, &beta).unwrap();
            let e = eigenvector_centrality(&a).unwrap();
            assert!(!e.warning);
            assert_eq!(rank_order(&k.scores), rank_order(&e.scores));
        }
    }

    #[test]
    fn pagerank_single_node_and_ring() {
        let single = AdjacencyMatrix::new(&[vec![0.0]]).unwrap();
        let pr = pagerank(&single, 0.85).unwrap();
        assert!(approx(pr.scores[0], 1.0, 1e-12));

        // Directed 4-ring: symmetry forces uniform scores.
        let mut rows = vec![vec![0.0; 4]; 4];
        for j in 0..4 {
            rows[(j + 1) % 4][j] = 1.0;
        }
        let ring = AdjacencyMatrix::new(&rows).unwrap();
        let pr = pagerank(&ring, 0.85).unwrap();
        for s in &pr.scores {
            assert!(approx(*s, 0.25, 1e-10));
        }
    }

    #[test]
    fn pagerank_three_node_matches_recursion_oracle() {
        // Edges 1->2, 1->3, 2->3, 3->1 (1-based).
        let mut rows = vec![vec![0.0; 3]; 3];
        rows[1][0] = 1.0;
        rows[2][0] = 1.0;
        rows[2][1] = 1.0;
        rows[0][2] = 1.0;
        let a = AdjacencyMatrix::new(&rows).unwrap();
        let d = 0.85;
        let pr = pagerank(&a, d).unwrap();

        // Oracle: 10^4 sweeps of the defining recursion.
        let out = [2.0, 1.0, 1.0];
        let mut p = [1.0 / 3.0; 3];
        for _ in 0..10_000 {
            let mut next = [0.0; 3];
            for i in 0..3 {
                let mut acc = 0.0;
                for j in 0..3 {
                    if rows[i][j] > 0.0 {
                        acc += p[j] / out[j];
                    }
                }
                next[i] = (1.0 - d) / 3.0 + d * acc;
            }
            p = next;
        }
        for i in 0..3 {
            assert!(approx(pr.scores[i], p[i], 1e-10), "{} vs {}", pr.scores[i], p[i]);
        }
        let total: f64 = pr.scores.iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
        assert!(pagerank(&a, 0.0).is_err());
        assert!(pagerank(&a, 1.0).is_err());
    }

    #[test]
    fn pagerank_dangling_mass_is_redistributed() {
        // Node 1 dangles; solve the 2x2 fixed point directly as oracle.
        let mut rows = vec![vec![0.0; 2]; 2];
        rows[1][0] = 1.0; // edge 0 -> 1
        let a = AdjacencyMatrix::new(&rows).unwrap();
        let d = 0.85;
        let pr = pagerank(&a, d).unwrap();
        // p0 = (1-d)/2 + d p1/2 ; p1 = (1-d)/2 + d (p0 + p1/2)
        let system = Matrix::from_rows(&[vec![1.0, -d / 2.0], vec![-d, 1.0 - d / 2.0]]).unwrap();
        let rhs = vec![(1.0 - d) / 2.0, (1.0 - d) / 2.0];
        let oracle = system.solve(&rhs).unwrap();
        assert!(approx(pr.scores[0], oracle[0], 1e-10));
        assert!(approx(pr.scores[1], oracle[1], 1e-10));
        assert!((pr.scores.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn first_moment_trivial_cases() {
        let zero = BranchingMatrix::zeros(3);
        let c = first_moment_rank(&zero, &[0.4, 0.1, 0.6]).unwrap();
        assert_eq!(c.scores, vec![0.4, 0.1, 0.6]);

        let uni = BranchingMatrix::new(&[vec![0.6]]).unwrap();
        let c = first_moment_rank(&uni, &[0.05]).unwrap();
        assert!(approx(c.scores[0], 0.125, 1e-14));

        let hot = BranchingMatrix::new(&[vec![1.5]]).unwrap();
        assert!(first_moment_rank(&hot, &[0.1]).is_err());
    }

    #[test]
    fn first_moment_equals_katz_under_identification() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for &alpha in &[0.5_f64, 0.25, 1.0] {
            let rows: Vec<Vec<f64>> = (0..5)
                .map(|_| (0..5).map(|_| rng.gen::<f64>() * 0.15).collect())
                .collect();
            let branching = BranchingMatrix::new(&rows).unwrap();
            let mu: Vec<f64> = (0..5).map(|_| rng.gen::<f64>()).collect();
            let fm = first_moment_rank(&branching, &mu).unwrap();

            // A = N / alpha with the branching -> adjacency transpose.
            let scaled = BranchingMatrix::from_matrix(
                branching.matrix().scaled(1.0 / alpha),
            )
            .unwrap();
            let a = AdjacencyMatrix::from_branching(&scaled);
            let k = katz(&a, alpha, &mu).unwrap();
            // Same linear system bit for bit when alpha divides exactly.
            assert_eq!(fm.scores, k.scores);
        }
    }

    #[test]
    fn first_moment_order_is_scale_invariant_in_mu() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let rows: Vec<Vec<f64>> = (0..6)
            .map(|_| (0..6).map(|_| rng.gen::<f64>() * 0.15).collect())
            .collect();
        let b = BranchingMatrix::new(&rows).unwrap();
        let mu: Vec<f64> = (0..6).map(|_| rng.gen::<f64>()).collect();
        let scaled: Vec<f64> = mu.iter().map(|v| 1000.0 * v).collect();
        let c1 = first_moment_rank(&b, &mu).unwrap();
        let c2 = first_moment_rank(&b, &scaled).unwrap();
        assert_eq!(rank_order(&c1.scores), rank_order(&c2.scores));
    }
}
