//! Model container: a stack of GraphSAGE layers plus deterministic init and
//! full-graph inference.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{induced_subgraph, Graph, Split};

use super::sage::{sage_forward, LayerParams};
use super::{real, Real};

#[derive(Clone, Debug)]
pub struct Model<F: Real> {
    pub layers: Vec<LayerParams<F>>,
    /// Feature widths `d^(0) .. d^(L)`; the last entry is the class count.
    pub dims: Vec<usize>,
}

impl<F: Real> Model<F> {
    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn weight_shapes(&self) -> Vec<(usize, usize)> {
        self.layers.iter().map(|l| l.weight.dim()).collect()
    }
}

/// Glorot-uniform init, identical for every caller with the same seed.
pub fn init_model<F: Real>(dims: &[usize], seed: u64) -> Model<F> {
    assert!(dims.len() >= 2, "need at least input and output dims");
    let layers = dims
        .windows(2)
        .enumerate()
        .map(|(l, w)| {
            let (d_in, d_out) = (w[0], w[1]);
            let fan_in = 2 * d_in;
            let limit = (6.0 / (fan_in + d_out) as f64).sqrt();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0x6d6f_6465_6c00 + l as u64));
            let weight = Array2::from_shape_fn((fan_in, d_out), |_| {
                real::<F>(rng.gen_range(-limit..limit))
            });
            LayerParams { weight, bias: None }
        })
        .collect();
    Model { layers, dims: dims.to_vec() }
}

/// Full-graph logits with p = 1 semantics: no sampling, no dropout.
pub fn forward_full<F: Real>(graph: &Graph, model: &Model<F>) -> Array2<F> {
    let all: Vec<usize> = (0..graph.num_nodes).collect();
    let sub = induced_subgraph(graph, 0, &all, &[]).expect("full graph subgraph");
    let mut rng = ChaCha8Rng::seed_from_u64(0); // unused: eval never drops
    let mut h: Array2<F> = graph.features.mapv(real::<F>);
    let last = model.num_layers() - 1;
    for (l, params) in model.layers.iter().enumerate() {
        let (out, _) = sage_forward(&sub, &h, params, 1.0, l != last, 0.0, false, &mut rng)
            .expect("full-graph forward");
        h = out;
    }
    h
}

/// Argmax accuracy over one split, from full-graph inference.
pub fn evaluate<F: Real>(graph: &Graph, model: &Model<F>, split: Split) -> f64 {
    let logits = forward_full(graph, model);
    let ids = graph.mask_ids(split);
    if ids.is_empty() {
        return 0.0;
    }
    let correct = ids
        .iter()
        .filter(|&&v| {
            let row = logits.row(v);
            let mut best = 0;
            for c in 1..row.len() {
                if row[c] > row[best] {
                    best = c;
                }
            }
            best == graph.labels[v]
        })
        .count();
    correct as f64 / ids.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use ndarray::arr2;

    #[test]
    fn init_is_deterministic() {
        let a: Model<f64> = init_model(&[3, 4, 2], 7);
        let b: Model<f64> = init_model(&[3, 4, 2], 7);
        for (x, y) in a.layers.iter().zip(&b.layers) {
            assert_eq!(x.weight, y.weight);
        }
        assert_eq!(a.layers[0].weight.dim(), (6, 4));
        assert_eq!(a.layers[1].weight.dim(), (8, 2));
    }

    #[test]
    fn perfect_logit_model_scores_one() {
        // 2 isolated nodes, feature = one-hot of the label; a weight that
        // copies the self half of the concat is a perfect classifier
        let g = build_graph(
            &[],
            2,
            arr2(&[[1.0, 0.0], [0.0, 1.0]]),
            vec![0, 1],
            vec![Split::Test, Split::Test],
        )
        .unwrap();
        let mut w = Array2::zeros((4, 2));
        w[[2, 0]] = 1.0;
        w[[3, 1]] = 1.0;
        let model = Model::<f64> {
            layers: vec![LayerParams { weight: w, bias: None }],
            dims: vec![2, 2],
        };
        assert_eq!(evaluate(&g, &model, Split::Test), 1.0);
    }

    #[test]
    fn random_weights_score_near_chance() {
        // labels independent of features: accuracy ≈ 1/C
        let n = 4000;
        let c = 4;
        let mut feats = Array2::zeros((n, 3));
        for v in 0..n {
            for d in 0..3 {
                feats[[v, d]] = ((v * 31 + d * 17) % 97) as f64 / 97.0;
            }
        }
        let labels: Vec<usize> = (0..n).map(|v| (v * 7919 + 13) % c).collect();
        let g = build_graph(&[], n, feats, labels, vec![Split::Test; n]).unwrap();
        let model: Model<f64> = init_model(&[3, c], 3);
        let acc = evaluate(&g, &model, Split::Test);
        let sigma = (0.25 * 0.75 / n as f64).sqrt();
        assert!((acc - 0.25).abs() < 4.0 * sigma + 0.05, "acc {acc}");
    }
}
