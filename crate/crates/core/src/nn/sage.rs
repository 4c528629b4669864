//! GraphSAGE mean layer over a halo-augmented subgraph.
//!
//! For each inner node v:
//!   z_v  = (Σ_{u ∈ N(v) ∩ inner} h_u + (1/p) Σ_{u ∈ N(v) ∩ halo} h_u) / |N(v)|
//!   h'_v = σ(W · [z_v ; h_v])
//!
//! The denominator is the node's full-graph degree, so dropped boundary
//! neighbors contribute exactly zero and the 1/p rescaling makes z_v an
//! unbiased estimate of the exact mean. The node's own feature passes through
//! the concat unscaled.

use ndarray::{s, Array1, Array2, Axis};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::SubgraphWithHalo;

use super::{real, Real};

/// Weights of one layer: `(2 d_in) x d_out` for the concat halves, plus an
/// optional bias.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerParams<F: Real> {
    pub weight: Array2<F>,
    pub bias: Option<Array1<F>>,
}

impl<F: Real> LayerParams<F> {
    pub fn d_in(&self) -> usize {
        self.weight.nrows() / 2
    }

    pub fn d_out(&self) -> usize {
        self.weight.ncols()
    }
}

/// Inverse-scaled dropout: kept entries are divided by `1 - rate`. Returns
/// the dropped matrix and the elementwise scale mask (0 or 1/(1-rate)),
/// which is also the backward multiplier.
pub fn dropout<F: Real>(
    h: &Array2<F>,
    rate: f64,
    train_mode: bool,
    rng: &mut ChaCha8Rng,
) -> (Array2<F>, Option<Array2<F>>) {
    if !train_mode || rate == 0.0 {
        return (h.clone(), None);
    }
    let keep = 1.0 - rate;
    let scale = real::<F>(1.0 / keep);
    let mask = Array2::from_shape_fn(h.dim(), |_| {
        if rng.gen::<f64>() < keep {
            scale
        } else {
            F::zero()
        }
    });
    (h * &mask, Some(mask))
}

/// Everything backward needs from one forward call.
pub struct SageCache<F: Real> {
    /// Post-dropout input stack, inner rows then halo rows.
    pub h_stack: Array2<F>,
    pub dropout_mask: Option<Array2<F>>,
    /// Aggregated neighbor means, one row per inner node.
    pub z: Array2<F>,
    /// Pre-activation `[z ; h] W (+ b)`.
    pub preact: Array2<F>,
    pub rate: f64,
    pub relu: bool,
}

/// Forward pass over one subgraph. `h_stack` rows follow the inner-then-halo
/// layout; `relu` is off for the final layer (raw logits).
#[allow(clippy::too_many_arguments)]
pub fn sage_forward<F: Real>(
    sub: &SubgraphWithHalo,
    h_stack: &Array2<F>,
    params: &LayerParams<F>,
    p: f64,
    relu: bool,
    dropout_rate: f64,
    train_mode: bool,
    rng: &mut ChaCha8Rng,
) -> Result<(Array2<F>, SageCache<F>)> {
    let n_inner = sub.num_inner();
    let n_halo = sub.num_halo();
    if h_stack.nrows() != n_inner + n_halo {
        return Err(Error::ShapeMismatch {
            context: format!(
                "h_stack has {} rows, subgraph has {} inner + {} halo",
                h_stack.nrows(),
                n_inner,
                n_halo
            ),
        });
    }
    if p == 0.0 && n_halo > 0 {
        return Err(Error::ZeroRateWithHalo);
    }
    let d_in = h_stack.ncols();
    if params.d_in() != d_in {
        return Err(Error::ShapeMismatch {
            context: format!("weight expects d_in {}, features have {}", params.d_in(), d_in),
        });
    }
    let (h, dropout_mask) = dropout(h_stack, dropout_rate, train_mode, rng);

    let halo_scale = if n_halo > 0 { real::<F>(1.0 / p) } else { F::one() };
    let mut z: Array2<F> = Array2::zeros((n_inner, d_in));
    for v in 0..n_inner {
        let deg = sub.full_degree[v];
        if deg == 0 {
            continue; // isolated node: z_v stays zero
        }
        let inv_deg = real::<F>(1.0 / deg as f64);
        let mut row = z.row_mut(v);
        for &u in sub.local_neighbors(v) {
            let w = if u < n_inner { inv_deg } else { inv_deg * halo_scale };
            row.scaled_add(w, &h.row(u));
        }
    }
    let h_inner = h.slice(s![..n_inner, ..]);
    let mut concat: Array2<F> = Array2::zeros((n_inner, 2 * d_in));
    concat.slice_mut(s![.., ..d_in]).assign(&z);
    concat.slice_mut(s![.., d_in..]).assign(&h_inner);
    let mut preact = concat.dot(&params.weight);
    if let Some(b) = &params.bias {
        preact += b;
    }
    let out = if relu { preact.mapv(|x| x.max(F::zero())) } else { preact.clone() };
    let cache = SageCache { h_stack: h, dropout_mask, z, preact, rate: p, relu };
    Ok((out, cache))
}

/// Gradients produced by one backward call. `g_h_stack` covers inner and
/// halo rows; the halo rows are what the runtime ships back to owners.
pub struct SageGrads<F: Real> {
    pub g_weight: Array2<F>,
    pub g_bias: Option<Array1<F>>,
    pub g_h_stack: Array2<F>,
}

pub fn sage_backward<F: Real>(
    sub: &SubgraphWithHalo,
    cache: &SageCache<F>,
    params: &LayerParams<F>,
    g_out: &Array2<F>,
) -> Result<SageGrads<F>> {
    let n_inner = sub.num_inner();
    let n_halo = sub.num_halo();
    let d_in = params.d_in();
    if g_out.dim() != cache.preact.dim() {
        return Err(Error::ShapeMismatch {
            context: format!("g_out {:?} vs preact {:?}", g_out.dim(), cache.preact.dim()),
        });
    }
    let g_a = if cache.relu {
        let mut g = g_out.clone();
        g.zip_mut_with(&cache.preact, |g, &a| {
            if a <= F::zero() {
                *g = F::zero();
            }
        });
        g
    } else {
        g_out.clone()
    };

    let h_inner = cache.h_stack.slice(s![..n_inner, ..]);
    let mut concat: Array2<F> = Array2::zeros((n_inner, 2 * d_in));
    concat.slice_mut(s![.., ..d_in]).assign(&cache.z);
    concat.slice_mut(s![.., d_in..]).assign(&h_inner);

    let g_weight = concat.t().dot(&g_a);
    let g_bias = params.bias.as_ref().map(|_| g_a.sum_axis(Axis(0)));

    let g_concat = g_a.dot(&params.weight.t());
    let g_z = g_concat.slice(s![.., ..d_in]);
    let g_hself = g_concat.slice(s![.., d_in..]);

    let halo_scale = if n_halo > 0 { real::<F>(1.0 / cache.rate) } else { F::one() };
    let mut g_h: Array2<F> = Array2::zeros((n_inner + n_halo, d_in));
    for v in 0..n_inner {
        g_h.row_mut(v).scaled_add(F::one(), &g_hself.row(v));
        let deg = sub.full_degree[v];
        if deg == 0 {
            continue;
        }
        let inv_deg = real::<F>(1.0 / deg as f64);
        for &u in sub.local_neighbors(v) {
            let w = if u < n_inner { inv_deg } else { inv_deg * halo_scale };
            g_h.row_mut(u).scaled_add(w, &g_z.row(v));
        }
    }
    if let Some(mask) = &cache.dropout_mask {
        g_h *= mask;
    }
    Ok(SageGrads { g_weight, g_bias, g_h_stack: g_h })
}
