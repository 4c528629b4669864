//! Synchronous partition-parallel training: m in-process workers exchange
//! sampled boundary features forward, boundary gradients backward, and
//! AllReduce weight gradients every epoch.

pub mod reference;
pub mod wire;

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::mpsc::{Receiver, RecvTimeoutError, Sender};
use std::sync::Barrier;
use std::time::{Duration, Instant};

use ndarray::{s, Array2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, Graph, Split};
use crate::nn::loss::softmax_xent;
use crate::nn::model::{evaluate, init_model, Model};
use crate::nn::optim::{adam_step, AdamConfig, AdamState};
use crate::nn::sage::sage_forward;
use crate::nn::sage::sage_backward;
use crate::nn::{real, Real};
use crate::plan::{memory_estimate, PartitionPlan};
use crate::sample::boundary_uniform;

use wire::{index_message_bytes, rows_message_bytes, Tag};

#[derive(Clone, Debug)]
pub struct TrainConfig {
    pub num_layers: usize,
    pub hidden_dim: usize,
    pub dropout: f64,
    pub lr: f64,
    pub epochs: usize,
    /// Boundary sampling rate p.
    pub rate: f64,
    pub seed: u64,
    /// Evaluate val/test accuracy every this many epochs; 0 disables.
    pub eval_interval: usize,
    /// Watchdog for cross-worker receives.
    pub phase_timeout_ms: u64,
    /// Zero out wall-time fields in the metrics, making output byte-stable.
    pub zero_times: bool,
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_layers == 0 || self.epochs == 0 || !(0.0..=1.0).contains(&self.rate) {
            return Err(Error::ShapeMismatch {
                context: format!(
                    "invalid config: layers {}, epochs {}, rate {}",
                    self.num_layers, self.epochs, self.rate
                ),
            });
        }
        Ok(())
    }

    /// Feature widths `d^(0) .. d^(L)` for a given graph.
    pub fn dims(&self, graph: &Graph) -> Vec<usize> {
        let mut dims = vec![graph.feature_dim()];
        for _ in 1..self.num_layers {
            dims.push(self.hidden_dim);
        }
        dims.push(graph.num_classes());
        dims
    }
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            num_layers: 2,
            hidden_dim: 16,
            dropout: 0.0,
            lr: 0.01,
            epochs: 10,
            rate: 1.0,
            seed: 0,
            eval_interval: 0,
            phase_timeout_ms: 30_000,
            zero_times: false,
        }
    }
}

/// One JSONL record per epoch.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct EpochMetrics {
    pub epoch: usize,
    pub loss: f64,
    pub val_acc: Option<f64>,
    pub test_acc: Option<f64>,
    pub floats_sent: u64,
    pub bytes_sent: u64,
    pub t_comp_ms: f64,
    pub t_comm_ms: f64,
    pub t_reduce_ms: f64,
    pub t_sample_ms: f64,
    pub mem_est_scalars_max: f64,
    pub mem_est_scalars_min: f64,
}

pub struct TrainOutput<F: Real> {
    pub model: Model<F>,
    pub metrics: Vec<EpochMetrics>,
}

enum Payload<F: Real> {
    Indices(Vec<usize>),
    Rows(Array2<F>),
    Reduce { grads: Vec<Array2<F>>, loss: F },
}

struct Msg<F: Real> {
    tag: Tag,
    epoch: u32,
    layer: u16,
    src: u16,
    payload: Payload<F>,
}

/// Barrier plus per-worker phase counters; a mismatch after a wait means a
/// worker skipped or repeated a phase.
struct PhaseSync {
    barrier: Barrier,
    counters: Vec<AtomicU64>,
}

impl PhaseSync {
    fn new(m: usize) -> Self {
        PhaseSync {
            barrier: Barrier::new(m),
            counters: (0..m).map(|_| AtomicU64::new(0)).collect(),
        }
    }

    fn advance(&self, me: usize) {
        let mine = self.counters[me].fetch_add(1, Ordering::SeqCst) + 1;
        self.barrier.wait();
        for c in &self.counters {
            let seen = c.load(Ordering::SeqCst);
            assert_eq!(seen, mine, "phase skew: worker at {seen}, expected {mine}");
        }
        self.barrier.wait();
    }
}

struct WorkerEpochRecord {
    loss: f64,
    val_acc: Option<f64>,
    test_acc: Option<f64>,
    floats_sent: u64,
    bytes_sent: u64,
    t_comp_ms: f64,
    t_comm_ms: f64,
    t_reduce_ms: f64,
    t_sample_ms: f64,
}

struct WorkerOutput<F: Real> {
    model: Model<F>,
    epochs: Vec<WorkerEpochRecord>,
}

struct Mailbox<F: Real> {
    me: usize,
    senders: Vec<Option<Sender<Msg<F>>>>,
    receivers: Vec<Option<Receiver<Msg<F>>>>,
    timeout: Duration,
}

impl<F: Real> Mailbox<F> {
    fn send(&self, dst: usize, msg: Msg<F>) {
        // a closed peer surfaces as a timeout on our next receive
        let _ = self.senders[dst].as_ref().expect("no self sends").send(msg);
    }

    fn recv(&self, src: usize, epoch: usize, phase: &'static str) -> Result<Msg<F>> {
        let rx = self.receivers[src].as_ref().expect("no self receives");
        let msg = rx.recv_timeout(self.timeout).map_err(|e| match e {
            RecvTimeoutError::Timeout | RecvTimeoutError::Disconnected => Error::PhaseTimeout {
                millis: self.timeout.as_millis() as u64,
                epoch,
                part: self.me,
                phase,
            },
        })?;
        if msg.src as usize != src || msg.epoch as usize != epoch {
            return Err(Error::ShapeMismatch {
                context: format!(
                    "stale message during {phase}: src {} epoch {}, expected src {src} epoch {epoch}",
                    msg.src, msg.epoch
                ),
            });
        }
        Ok(msg)
    }

    /// Receive and additionally require a tag/layer match.
    fn recv_expect(
        &self,
        src: usize,
        epoch: usize,
        tag: Tag,
        layer: usize,
        phase: &'static str,
    ) -> Result<Msg<F>> {
        let msg = self.recv(src, epoch, phase)?;
        if msg.tag != tag || msg.layer as usize != layer {
            return Err(Error::ShapeMismatch {
                context: format!(
                    "unexpected message during {phase}: tag {:?} layer {}",
                    msg.tag, msg.layer
                ),
            });
        }
        Ok(msg)
    }
}

fn dropout_rng(seed: u64, epoch: usize, layer: usize, part: usize) -> ChaCha8Rng {
    let k = seed
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add((epoch as u64) << 32)
        .wrapping_add((layer as u64) << 16)
        .wrapping_add(part as u64);
    ChaCha8Rng::seed_from_u64(k)
}

/// Intersection of two sorted id lists.
fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn worker_loop<F: Real>(
    me: usize,
    graph: &Graph,
    plan: &PartitionPlan,
    config: &TrainConfig,
    dims: &[usize],
    mailbox: Mailbox<F>,
    sync: &PhaseSync,
    n_train_total: usize,
) -> Result<WorkerOutput<F>> {
    let m = plan.num_parts;
    let num_layers = config.num_layers;
    let inner = &plan.inner[me];
    let n_inner = inner.len();
    let scalar_width = std::mem::size_of::<F>();

    let mut model: Model<F> = init_model(dims, config.seed);
    let mut adam = AdamState::new(&model.weight_shapes());
    let adam_cfg = AdamConfig::with_lr(config.lr);

    let local_labels: Vec<usize> = inner.iter().map(|&v| graph.labels[v]).collect();
    let local_train: Vec<bool> = inner.iter().map(|&v| graph.split[v] == Split::Train).collect();
    let n_train_local = local_train.iter().filter(|&&t| t).count();
    let loss_scale = if n_train_total == 0 {
        0.0
    } else {
        n_train_local as f64 * m as f64 / n_train_total as f64
    };

    let features_inner: Array2<F> = {
        let mut x = Array2::zeros((n_inner, graph.feature_dim()));
        for (r, &v) in inner.iter().enumerate() {
            for (c, &f) in graph.features.row(v).iter().enumerate() {
                x[[r, c]] = real::<F>(f);
            }
        }
        x
    };

    let mut epochs = Vec::with_capacity(config.epochs);
    for epoch in 0..config.epochs {
        let mut t_comp = 0.0f64;
        let mut t_comm = 0.0f64;
        let mut t_sample = 0.0f64;
        let mut floats_sent = 0u64;
        let mut bytes_sent = 0u64;

        // ---- line 4: sample own boundary set ----
        let t = Instant::now();
        let selected: Vec<usize> = plan.boundary[me]
            .iter()
            .copied()
            .filter(|&b| boundary_uniform(config.seed, epoch, me, b) < config.rate)
            .collect();
        // ---- line 5: induced subgraph over V_i ∪ U_i ----
        let sub = induced_subgraph(graph, me, inner, &selected)?;
        t_sample += t.elapsed().as_secs_f64() * 1e3;

        // ---- line 6: broadcast U_i, receive U_j ----
        let t = Instant::now();
        for j in 0..m {
            if j != me {
                bytes_sent += index_message_bytes(selected.len());
                mailbox.send(
                    j,
                    Msg {
                        tag: Tag::IndexSets,
                        epoch: epoch as u32,
                        layer: 0,
                        src: me as u16,
                        payload: Payload::Indices(selected.clone()),
                    },
                );
            }
        }
        let mut selected_of: Vec<Vec<usize>> = vec![Vec::new(); m];
        selected_of[me] = selected.clone();
        for j in 0..m {
            if j == me {
                continue;
            }
            let msg = mailbox.recv_expect(j, epoch, Tag::IndexSets, 0, "index broadcast")?;
            match msg.payload {
                Payload::Indices(ids) => selected_of[j] = ids,
                _ => {
                    return Err(Error::ShapeMismatch {
                        context: "unexpected payload during index broadcast".into(),
                    })
                }
            }
        }
        // ---- line 7: S_{me,j} = U_j ∩ V_me; received sets must agree with
        // local recomputation from the shared RNG stream ----
        let send_lists: Vec<Vec<usize>> = (0..m)
            .map(|j| {
                if j == me {
                    return Vec::new();
                }
                let s = intersect_sorted(&selected_of[j], &plan.demand[j][me]);
                debug_assert_eq!(
                    s,
                    plan.demand[j][me]
                        .iter()
                        .copied()
                        .filter(|&b| boundary_uniform(config.seed, epoch, j, b) < config.rate)
                        .collect::<Vec<_>>()
                );
                s
            })
            .collect();
        // halo rows expected from each owner, in (source partition, id) order
        let expect_from: Vec<Vec<usize>> = (0..m)
            .map(|j| {
                if j == me {
                    Vec::new()
                } else {
                    intersect_sorted(&selected, &plan.demand[me][j])
                }
            })
            .collect();
        t_comm += t.elapsed().as_secs_f64() * 1e3;
        sync.advance(me);

        // map local inner index lookups for send lists once per epoch
        let local_inner_index = |g: usize| inner.binary_search(&g).expect("send list is inner");

        // ---- forward: lines 8-9 ----
        let mut h: Array2<F> = features_inner.clone();
        let mut stacks: Vec<Array2<F>> = Vec::with_capacity(num_layers);
        let mut caches = Vec::with_capacity(num_layers);
        for layer in 0..num_layers {
            let d = dims[layer];
            let t = Instant::now();
            for j in 0..m {
                if j == me {
                    continue;
                }
                let rows_ids = &send_lists[j];
                let mut rows: Array2<F> = Array2::zeros((rows_ids.len(), d));
                for (r, &g) in rows_ids.iter().enumerate() {
                    rows.row_mut(r).assign(&h.row(local_inner_index(g)));
                }
                floats_sent += (rows_ids.len() * d) as u64;
                bytes_sent += rows_message_bytes(rows_ids.len(), d, scalar_width);
                mailbox.send(
                    j,
                    Msg {
                        tag: Tag::LayerFeatures,
                        epoch: epoch as u32,
                        layer: layer as u16,
                        src: me as u16,
                        payload: Payload::Rows(rows),
                    },
                );
            }
            let mut h_stack: Array2<F> = Array2::zeros((n_inner + selected.len(), d));
            h_stack.slice_mut(s![..n_inner, ..]).assign(&h);
            for j in 0..m {
                if j == me {
                    continue;
                }
                let msg =
                    mailbox.recv_expect(j, epoch, Tag::LayerFeatures, layer, "feature exchange")?;
                let rows = match msg.payload {
                    Payload::Rows(r) => r,
                    _ => {
                        return Err(Error::ShapeMismatch {
                            context: "unexpected payload during feature exchange".into(),
                        })
                    }
                };
                if rows.nrows() != expect_from[j].len() {
                    return Err(Error::RowCountMismatch {
                        src: j,
                        got: rows.nrows(),
                        expected: expect_from[j].len(),
                    });
                }
                for (r, &g) in expect_from[j].iter().enumerate() {
                    let halo_pos = n_inner + selected.binary_search(&g).expect("halo id");
                    h_stack.row_mut(halo_pos).assign(&rows.row(r));
                }
            }
            t_comm += t.elapsed().as_secs_f64() * 1e3;

            let t = Instant::now();
            let mut rng = dropout_rng(config.seed, epoch, layer, me);
            let (out, cache) = sage_forward(
                &sub,
                &h_stack,
                &model.layers[layer],
                config.rate,
                layer != num_layers - 1,
                config.dropout,
                true,
                &mut rng,
            )?;
            stacks.push(h_stack);
            caches.push(cache);
            h = out;
            t_comp += t.elapsed().as_secs_f64() * 1e3;
            sync.advance(me);
        }

        // ---- line 11: loss over this partition's train-masked inner nodes ----
        let t = Instant::now();
        let out = softmax_xent(&h, &local_labels, &local_train);
        let scale = real::<F>(loss_scale);
        let local_loss = out.loss * scale;
        let mut g_out: Array2<F> = out.grad.mapv(|g| g * scale);
        t_comp += t.elapsed().as_secs_f64() * 1e3;

        // ---- line 12: backward with per-layer halo gradient exchange ----
        let mut weight_grads: Vec<Array2<F>> = Vec::with_capacity(num_layers);
        for layer in (0..num_layers).rev() {
            let t = Instant::now();
            let grads = sage_backward(&sub, &caches[layer], &model.layers[layer], &g_out)?;
            weight_grads.push(grads.g_weight);
            t_comp += t.elapsed().as_secs_f64() * 1e3;

            let d = dims[layer];
            let t = Instant::now();
            for j in 0..m {
                if j == me {
                    continue;
                }
                let ids = &expect_from[j];
                let mut rows: Array2<F> = Array2::zeros((ids.len(), d));
                for (r, &g) in ids.iter().enumerate() {
                    let halo_pos = n_inner + selected.binary_search(&g).expect("halo id");
                    rows.row_mut(r).assign(&grads.g_h_stack.row(halo_pos));
                }
                floats_sent += (ids.len() * d) as u64;
                bytes_sent += rows_message_bytes(ids.len(), d, scalar_width);
                mailbox.send(
                    j,
                    Msg {
                        tag: Tag::LayerGrads,
                        epoch: epoch as u32,
                        layer: layer as u16,
                        src: me as u16,
                        payload: Payload::Rows(rows),
                    },
                );
            }
            let mut g_inner = grads.g_h_stack.slice(s![..n_inner, ..]).to_owned();
            for j in 0..m {
                if j == me {
                    continue;
                }
                let msg =
                    mailbox.recv_expect(j, epoch, Tag::LayerGrads, layer, "gradient exchange")?;
                let rows = match msg.payload {
                    Payload::Rows(r) => r,
                    _ => {
                        return Err(Error::ShapeMismatch {
                            context: "unexpected payload during gradient exchange".into(),
                        })
                    }
                };
                if rows.nrows() != send_lists[j].len() {
                    return Err(Error::RowCountMismatch {
                        src: j,
                        got: rows.nrows(),
                        expected: send_lists[j].len(),
                    });
                }
                for (r, &g) in send_lists[j].iter().enumerate() {
                    g_inner
                        .row_mut(local_inner_index(g))
                        .scaled_add(F::one(), &rows.row(r));
                }
            }
            t_comm += t.elapsed().as_secs_f64() * 1e3;
            g_out = g_inner;
            sync.advance(me);
        }
        weight_grads.reverse();

        // ---- lines 13-14: AllReduce mean, then the identical update ----
        let t = Instant::now();
        let reduce_scalars: usize = weight_grads.iter().map(|g| g.len()).sum::<usize>() + 1;
        for j in 0..m {
            if j == me {
                continue;
            }
            bytes_sent += rows_message_bytes(reduce_scalars, 1, scalar_width);
            mailbox.send(
                j,
                Msg {
                    tag: Tag::ReduceChunk,
                    epoch: epoch as u32,
                    layer: 0,
                    src: me as u16,
                    payload: Payload::Reduce { grads: weight_grads.clone(), loss: local_loss },
                },
            );
        }
        let mut all_grads: Vec<Option<Vec<Array2<F>>>> = (0..m).map(|_| None).collect();
        let mut all_losses: Vec<F> = vec![F::zero(); m];
        all_grads[me] = Some(weight_grads);
        all_losses[me] = local_loss;
        for j in 0..m {
            if j == me {
                continue;
            }
            let msg = mailbox.recv_expect(j, epoch, Tag::ReduceChunk, 0, "allreduce")?;
            match msg.payload {
                Payload::Reduce { grads, loss } => {
                    all_grads[j] = Some(grads);
                    all_losses[j] = loss;
                }
                _ => {
                    return Err(Error::ShapeMismatch {
                        context: "unexpected payload during allreduce".into(),
                    })
                }
            }
        }
        // fixed partition-id summation order keeps every worker bit-identical
        let inv_m = real::<F>(1.0 / m as f64);
        let mut mean_grads: Vec<Array2<F>> = model
            .weight_shapes()
            .iter()
            .map(|&shape| Array2::zeros(shape))
            .collect();
        let mut mean_loss = F::zero();
        for j in 0..m {
            let gj = all_grads[j].as_ref().unwrap();
            for (acc, g) in mean_grads.iter_mut().zip(gj) {
                if acc.dim() != g.dim() {
                    return Err(Error::ShapeMismatch {
                        context: format!("allreduce {:?} vs {:?}", acc.dim(), g.dim()),
                    });
                }
                acc.scaled_add(inv_m, g);
            }
            mean_loss = mean_loss + all_losses[j] * inv_m;
        }
        let epoch_loss = mean_loss.to_f64().unwrap();
        if !epoch_loss.is_finite() {
            return Err(Error::Divergence { epoch, part: me });
        }
        let mut params: Vec<Array2<F>> = model.layers.iter().map(|l| l.weight.clone()).collect();
        adam_step(&mut params, &mean_grads, &mut adam, &adam_cfg);
        for (layer, w) in model.layers.iter_mut().zip(params) {
            layer.weight = w;
        }
        let t_reduce = t.elapsed().as_secs_f64() * 1e3;
        sync.advance(me);

        // centralized evaluation on worker 0 (desk scale)
        let (mut val_acc, mut test_acc) = (None, None);
        if me == 0 && config.eval_interval > 0 && (epoch + 1) % config.eval_interval == 0 {
            val_acc = Some(evaluate(graph, &model, Split::Val));
            test_acc = Some(evaluate(graph, &model, Split::Test));
        }
        epochs.push(WorkerEpochRecord {
            loss: epoch_loss,
            val_acc: val_acc.take(),
            test_acc: test_acc.take(),
            floats_sent,
            bytes_sent,
            t_comp_ms: t_comp,
            t_comm_ms: t_comm,
            t_reduce_ms: t_reduce,
            t_sample_ms: t_sample,
        });
    }
    Ok(WorkerOutput { model, epochs })
}

/// Run Algorithm-1 style training across `plan.num_parts` workers and merge
/// their per-epoch records. Weights come back identical on every worker; the
/// returned model is worker 0's.
pub fn train<F: Real>(
    graph: &Graph,
    plan: &PartitionPlan,
    config: &TrainConfig,
) -> Result<TrainOutput<F>> {
    config.validate()?;
    let m = plan.num_parts;
    let dims = config.dims(graph);
    let n_train_total = graph.mask_ids(Split::Train).len();

    // one channel per ordered pair
    let mut senders: Vec<Vec<Option<Sender<Msg<F>>>>> = (0..m).map(|_| (0..m).map(|_| None).collect()).collect();
    let mut receivers: Vec<Vec<Option<Receiver<Msg<F>>>>> =
        (0..m).map(|_| (0..m).map(|_| None).collect()).collect();
    for src in 0..m {
        for dst in 0..m {
            if src != dst {
                let (tx, rx) = std::sync::mpsc::channel();
                senders[src][dst] = Some(tx);
                receivers[dst][src] = Some(rx);
            }
        }
    }
    let sync = PhaseSync::new(m);
    let timeout = Duration::from_millis(config.phase_timeout_ms);

    let mut outputs: Vec<Result<WorkerOutput<F>>> = std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(m);
        // channel endpoints move into their worker
        let mut sender_rows = senders.drain(..);
        let mut receiver_rows = receivers.drain(..);
        for me in 0..m {
            let mailbox = Mailbox {
                me,
                senders: sender_rows.next().unwrap(),
                receivers: receiver_rows.next().unwrap(),
                timeout,
            };
            let dims = &dims;
            let sync = &sync;
            handles.push(scope.spawn(move || {
                worker_loop::<F>(me, graph, plan, config, dims, mailbox, sync, n_train_total)
            }));
        }
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });

    let mut workers = Vec::with_capacity(m);
    for out in outputs.drain(..) {
        workers.push(out?);
    }
    // AllReduce plus identical updates must leave every worker bit-identical
    for w in &workers[1..] {
        for (a, b) in workers[0].model.layers.iter().zip(&w.model.layers) {
            assert_eq!(a.weight, b.weight, "weight desync across workers");
        }
    }

    let layer_input_dims = &dims[..config.num_layers];
    let mem = memory_estimate(plan, layer_input_dims, config.rate);
    let mem_totals: Vec<f64> = mem.iter().map(|per_layer| per_layer.iter().sum()).collect();
    let mem_max = mem_totals.iter().cloned().fold(f64::MIN, f64::max);
    let mem_min = mem_totals.iter().cloned().fold(f64::MAX, f64::min);

    let mut metrics = Vec::with_capacity(config.epochs);
    for e in 0..config.epochs {
        let mut rec = EpochMetrics {
            epoch: e,
            loss: workers[0].epochs[e].loss,
            val_acc: workers[0].epochs[e].val_acc,
            test_acc: workers[0].epochs[e].test_acc,
            floats_sent: 0,
            bytes_sent: 0,
            t_comp_ms: 0.0,
            t_comm_ms: 0.0,
            t_reduce_ms: 0.0,
            t_sample_ms: 0.0,
            mem_est_scalars_max: mem_max,
            mem_est_scalars_min: mem_min,
        };
        for w in &workers {
            let we = &w.epochs[e];
            rec.floats_sent += we.floats_sent;
            rec.bytes_sent += we.bytes_sent;
            // synchronous epochs run at the pace of the slowest worker
            rec.t_comp_ms = rec.t_comp_ms.max(we.t_comp_ms);
            rec.t_comm_ms = rec.t_comm_ms.max(we.t_comm_ms);
            rec.t_reduce_ms = rec.t_reduce_ms.max(we.t_reduce_ms);
            rec.t_sample_ms = rec.t_sample_ms.max(we.t_sample_ms);
        }
        if config.zero_times {
            rec.t_comp_ms = 0.0;
            rec.t_comm_ms = 0.0;
            rec.t_reduce_ms = 0.0;
            rec.t_sample_ms = 0.0;
        }
        metrics.push(rec);
    }
    let model = workers.swap_remove(0).model;
    Ok(TrainOutput { model, metrics })
}
