//! Shared helpers for integration tests: deterministic random instances and
//! the finite-difference gradient oracle.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use partsage::graph::{build_graph, Graph, Split};

/// Erdos-Renyi-style random graph with random features and labels.
pub fn random_graph(n: usize, edge_prob: f64, dim: usize, classes: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen::<f64>() < edge_prob {
                edges.push((u, v));
            }
        }
    }
    let features = Array2::from_shape_fn((n, dim), |_| rng.gen_range(-1.0..1.0));
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..classes)).collect();
    let split: Vec<Split> = (0..n)
        .map(|_| match rng.gen_range(0..3) {
            0 => Split::Train,
            1 => Split::Val,
            _ => Split::Test,
        })
        .collect();
    build_graph(&edges, n, features, labels, split).unwrap()
}

/// Central finite difference of a scalar function at every entry of `x`.
pub fn finite_difference<FEval>(x: &Array2<f64>, h: f64, mut eval: FEval) -> Array2<f64>
where
    FEval: FnMut(&Array2<f64>) -> f64,
{
    let mut grad = Array2::zeros(x.dim());
    for idx in 0..x.len() {
        let (r, c) = (idx / x.ncols(), idx % x.ncols());
        let mut plus = x.clone();
        plus[[r, c]] += h;
        let mut minus = x.clone();
        minus[[r, c]] -= h;
        grad[[r, c]] = (eval(&plus) - eval(&minus)) / (2.0 * h);
    }
    grad
}

/// Max relative error between an analytic gradient and its FD estimate.
pub fn max_rel_error(analytic: &Array2<f64>, fd: &Array2<f64>) -> f64 {
    analytic
        .iter()
        .zip(fd.iter())
        .map(|(&a, &f)| (a - f).abs() / a.abs().max(f.abs()).max(1e-6))
        .fold(0.0, f64::max)
}
