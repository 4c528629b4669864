//! Single-process full-graph trainer: no partitions, no sampling, no
//! exchange. Serves as the correctness oracle for the partition-parallel
//! runtime at p = 1.

use ndarray::Array2;

use crate::error::Result;
use crate::graph::{induced_subgraph, Graph, Split};
use crate::nn::loss::softmax_xent;
use crate::nn::model::{init_model, Model};
use crate::nn::optim::{adam_step, AdamConfig, AdamState};
use crate::nn::sage::{sage_backward, sage_forward};
use crate::nn::{real, Real};

use super::{dropout_rng, TrainConfig};

pub struct ReferenceOutput<F: Real> {
    pub model: Model<F>,
    pub losses: Vec<f64>,
}

pub fn train_reference<F: Real>(graph: &Graph, config: &TrainConfig) -> Result<ReferenceOutput<F>> {
    config.validate()?;
    let dims = config.dims(graph);
    let mut model: Model<F> = init_model(&dims, config.seed);
    let mut adam = AdamState::new(&model.weight_shapes());
    let adam_cfg = AdamConfig::with_lr(config.lr);

    let all: Vec<usize> = (0..graph.num_nodes).collect();
    let sub = induced_subgraph(graph, 0, &all, &[])?;
    let features: Array2<F> = graph.features.mapv(real::<F>);
    let train_mask: Vec<bool> = graph.split.iter().map(|&s| s == Split::Train).collect();

    let mut losses = Vec::with_capacity(config.epochs);
    for epoch in 0..config.epochs {
        let mut h = features.clone();
        let mut caches = Vec::with_capacity(config.num_layers);
        for layer in 0..config.num_layers {
            let mut rng = dropout_rng(config.seed, epoch, layer, 0);
            let (out, cache) = sage_forward(
                &sub,
                &h,
                &model.layers[layer],
                1.0,
                layer != config.num_layers - 1,
                config.dropout,
                true,
                &mut rng,
            )?;
            caches.push(cache);
            h = out;
        }
        let out = softmax_xent(&h, &graph.labels, &train_mask);
        losses.push(out.loss.to_f64().unwrap());
        let mut g_out = out.grad;
        let mut weight_grads = Vec::with_capacity(config.num_layers);
        for layer in (0..config.num_layers).rev() {
            let grads = sage_backward(&sub, &caches[layer], &model.layers[layer], &g_out)?;
            weight_grads.push(grads.g_weight);
            g_out = grads.g_h_stack;
        }
        weight_grads.reverse();
        let mut params: Vec<Array2<F>> = model.layers.iter().map(|l| l.weight.clone()).collect();
        adam_step(&mut params, &weight_grads, &mut adam, &adam_cfg);
        for (layer, w) in model.layers.iter_mut().zip(params) {
            layer.weight = w;
        }
    }
    Ok(ReferenceOutput { model, losses })
}
