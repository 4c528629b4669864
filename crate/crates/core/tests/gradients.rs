//! Finite-difference checks of every analytic gradient path: the mean
//! aggregation layer (weights and input rows, with and without halo scaling,
//! ReLU, and dropout) and the softmax cross-entropy loss.

mod common;

use common::{finite_difference, max_rel_error, random_graph};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use partsage::graph::induced_subgraph;
use partsage::nn::loss::softmax_xent;
use partsage::nn::sage::{sage_backward, sage_forward, LayerParams};
use partsage::partition::partition_greedy;
use partsage::plan::build_plan;
use partsage::sample::sample_boundary;

const FD_H: f64 = 1e-6;
const TOL: f64 = 1e-4;

/// Build a random two-partition instance with a sampled halo at rate `p`,
/// returning the owner-0 subgraph, an input stack, and a projection used to
/// collapse the layer output to a scalar for differentiation.
struct Instance {
    sub: partsage::graph::SubgraphWithHalo,
    h_stack: Array2<f64>,
    params: LayerParams<f64>,
    proj: Array2<f64>,
    p: f64,
}

fn make_instance(seed: u64, p: f64, d_in: usize, d_out: usize) -> Instance {
    let graph = random_graph(20, 0.25, d_in, 3, seed);
    let assignment = partition_greedy(&graph, 2, 0.1, seed).unwrap();
    let plan = build_plan(&graph, &assignment);
    let sampled = sample_boundary(&plan, p, 0, seed);
    let sub = induced_subgraph(&graph, 0, &plan.inner[0], &sampled.selected[0]).unwrap();
    if p > 0.0 {
        assert!(!sub.halo_ids.is_empty(), "instance should exercise halo rows");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xfd);
    let rows = sub.num_inner() + sub.num_halo();
    let h_stack = Array2::from_shape_fn((rows, d_in), |_| rng.gen_range(-1.0..1.0));
    let weight = Array2::from_shape_fn((2 * d_in, d_out), |_| rng.gen_range(-0.8..0.8));
    let proj = Array2::from_shape_fn((sub.num_inner(), d_out), |_| rng.gen_range(-1.0..1.0));
    Instance { sub, h_stack, params: LayerParams { weight, bias: None }, proj, p }
}

/// Scalar objective: projection-weighted sum of the layer output.
fn layer_scalar(inst: &Instance, h: &Array2<f64>, w: &Array2<f64>, relu: bool, drop: f64) -> f64 {
    let params = LayerParams { weight: w.clone(), bias: None };
    let mut rng = ChaCha8Rng::seed_from_u64(777);
    let (out, _) =
        sage_forward(&inst.sub, h, &params, inst.p, relu, drop, drop > 0.0, &mut rng).unwrap();
    (&out * &inst.proj).sum()
}

fn check_layer(seed: u64, p: f64, relu: bool, drop: f64) {
    let inst = make_instance(seed, p, 3, 2);
    let params = &inst.params;
    let mut rng = ChaCha8Rng::seed_from_u64(777);
    let (_, cache) = sage_forward(
        &inst.sub,
        &inst.h_stack,
        params,
        inst.p,
        relu,
        drop,
        drop > 0.0,
        &mut rng,
    )
    .unwrap();
    let grads = sage_backward(&inst.sub, &cache, params, &inst.proj).unwrap();

    let fd_w = finite_difference(&params.weight, FD_H, |w| {
        layer_scalar(&inst, &inst.h_stack, w, relu, drop)
    });
    let err_w = max_rel_error(&grads.g_weight, &fd_w);
    assert!(err_w < TOL, "weight grad rel error {err_w} (seed {seed}, p {p})");

    let fd_h = finite_difference(&inst.h_stack, FD_H, |h| {
        layer_scalar(&inst, h, &params.weight, relu, drop)
    });
    let err_h = max_rel_error(&grads.g_h_stack, &fd_h);
    assert!(err_h < TOL, "input grad rel error {err_h} (seed {seed}, p {p})");
}

#[test]
fn layer_gradients_full_halo_linear() {
    for seed in [1, 2, 3] {
        check_layer(seed, 1.0, false, 0.0);
    }
}

#[test]
fn layer_gradients_sampled_halo() {
    // p = 0.5 rescales the halo contribution by 2; the input-row gradient on
    // halo rows must carry the same factor.
    for seed in [4, 5, 6] {
        check_layer(seed, 0.5, false, 0.0);
    }
}

#[test]
fn layer_gradients_with_relu() {
    for seed in [7, 8] {
        check_layer(seed, 1.0, true, 0.0);
        check_layer(seed, 0.5, true, 0.0);
    }
}

#[test]
fn layer_gradients_through_dropout() {
    // The dropout mask is a function of the rng seed only, so re-seeding per
    // evaluation makes the perturbed objective differentiable.
    for seed in [9, 10] {
        check_layer(seed, 1.0, false, 0.4);
        check_layer(seed, 0.5, true, 0.3);
    }
}

#[test]
fn loss_gradient_matches_finite_difference() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let n = 12;
    let c = 4;
    let logits = Array2::from_shape_fn((n, c), |_| rng.gen_range(-2.0..2.0));
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..c)).collect();
    let mask: Vec<bool> = (0..n).map(|i| i % 3 != 0).collect();
    let out = softmax_xent(&logits, &labels, &mask);
    let fd = finite_difference(&logits, FD_H, |x| {
        softmax_xent(x, &labels, &mask).loss
    });
    let err = max_rel_error(&out.grad, &fd);
    assert!(err < 1e-6, "loss grad rel error {err}");
}
