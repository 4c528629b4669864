//! Per-epoch random boundary selection (BNS) and the edge-based ablation
//! samplers (boundary-edge sampling, global DropEdge).
//!
//! Every decision is a pure function of `(seed, epoch, ids)` through a
//! counter-style hash, so workers can sample independently and any selection
//! can be re-derived for verification.

use crate::plan::PartitionPlan;

const DOMAIN_NODE: u64 = 0x626e_735f_6e6f_6465;
const DOMAIN_EDGE: u64 = 0x626e_735f_6564_6765;
const DOMAIN_DROP: u64 = 0x626e_735f_6472_6f70;

fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform in [0, 1) from a hashed key; the same key always yields the same
/// value, which also couples selections across different rates.
fn unit_uniform(seed: u64, domain: u64, a: u64, b: u64, c: u64) -> f64 {
    let mut h = mix64(seed ^ domain);
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    h = mix64(h ^ c);
    (h >> 11) as f64 / (1u64 << 53) as f64
}

/// The uniform driving partition `part`'s keep/drop decision for boundary
/// node `node` at `epoch`.
pub fn boundary_uniform(seed: u64, epoch: usize, part: usize, node: usize) -> f64 {
    unit_uniform(seed, DOMAIN_NODE, epoch as u64, part as u64, node as u64)
}

fn edge_uniform(seed: u64, domain: u64, epoch: usize, u: usize, v: usize) -> f64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    unit_uniform(seed, domain, epoch as u64, a as u64, b as u64)
}

/// One epoch's boundary selection: per partition the kept set `U_i ⊆ B_i`,
/// and per ordered pair the send list `S_{i,j} = U_j ∩ V_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct EpochSamplePlan {
    pub epoch: usize,
    pub rate: f64,
    /// `selected[i]` = U_i, sorted ascending.
    pub selected: Vec<Vec<usize>>,
    /// `send[i][j]` = S_{i,j}: rows partition i ships to partition j, sorted.
    pub send: Vec<Vec<Vec<usize>>>,
}

impl EpochSamplePlan {
    /// Rows partition `i` sends in one propagation = Σ_j |S_{i,j}|.
    pub fn send_rows(&self, i: usize) -> usize {
        self.send[i].iter().map(Vec::len).sum()
    }

    pub fn total_selected(&self) -> usize {
        self.selected.iter().map(Vec::len).sum()
    }
}

/// Keep each boundary node of each partition independently with probability
/// `p`. At `p = 1` the full boundary survives; at `p = 0` nothing does.
pub fn sample_boundary(plan: &PartitionPlan, p: f64, epoch: usize, seed: u64) -> EpochSamplePlan {
    assert!((0.0..=1.0).contains(&p), "sampling rate must lie in [0,1]");
    let m = plan.num_parts;
    let selected: Vec<Vec<usize>> = (0..m)
        .map(|i| {
            plan.boundary[i]
                .iter()
                .copied()
                .filter(|&b| boundary_uniform(seed, epoch, i, b) < p)
                .collect()
        })
        .collect();
    // S_{i,j} = U_j ∩ V_i; demand[j][i] = B_j ∩ V_i already holds the candidates
    let send: Vec<Vec<Vec<usize>>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    plan.demand[j][i]
                        .iter()
                        .copied()
                        .filter(|&b| boundary_uniform(seed, epoch, j, b) < p)
                        .collect()
                })
                .collect()
        })
        .collect();
    EpochSamplePlan { epoch, rate: p, selected, send }
}

/// Result of an edge-based sampler: surviving cross-partition edges per
/// partition and the boundary nodes that must still be communicated (those
/// with at least one surviving incident cross edge).
#[derive(Clone, Debug)]
pub struct EdgeSamplePlan {
    pub epoch: usize,
    pub rate: f64,
    /// `kept_cross[i]`: surviving (inner, boundary) edges of partition i,
    /// global ids, sorted.
    pub kept_cross: Vec<Vec<(usize, usize)>>,
    /// `communicated[i]`: boundary nodes of partition i that still travel.
    pub communicated: Vec<Vec<usize>>,
}

impl EdgeSamplePlan {
    pub fn total_communicated(&self) -> usize {
        self.communicated.iter().map(Vec::len).sum()
    }
}

fn edge_plan_from_keep<F: Fn(usize, usize) -> bool>(
    graph: &crate::graph::Graph,
    plan: &PartitionPlan,
    epoch: usize,
    rate: f64,
    keep: F,
) -> EdgeSamplePlan {
    let m = plan.num_parts;
    let mut kept_cross: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m];
    for v in 0..graph.num_nodes {
        let pv = plan.part_of[v];
        for &u in graph.neighbors(v) {
            let pu = plan.part_of[u];
            if pu != pv && keep(v, u) {
                // v inner in pv, u is a boundary node pv must fetch
                kept_cross[pv].push((v, u));
            }
        }
    }
    let mut communicated: Vec<Vec<usize>> = Vec::with_capacity(m);
    for k in kept_cross.iter_mut() {
        k.sort_unstable();
        let mut nodes: Vec<usize> = k.iter().map(|&(_, u)| u).collect();
        nodes.sort_unstable();
        nodes.dedup();
        communicated.push(nodes);
    }
    EdgeSamplePlan { epoch, rate, kept_cross, communicated }
}

/// Boundary Edge Sampling: keep each cross-partition edge independently with
/// probability `q` (one symmetric decision per undirected edge). A boundary
/// node travels iff at least one of its incident cross edges survives.
pub fn sample_boundary_edges(
    graph: &crate::graph::Graph,
    plan: &PartitionPlan,
    q: f64,
    epoch: usize,
    seed: u64,
) -> EdgeSamplePlan {
    assert!((0.0..=1.0).contains(&q));
    edge_plan_from_keep(graph, plan, epoch, q, |v, u| {
        edge_uniform(seed, DOMAIN_EDGE, epoch, v, u) < q
    })
}

/// Global DropEdge: keep every edge of the graph (intra- and cross-partition)
/// with probability `q`. Returns the surviving undirected edge list.
pub fn drop_edge_global(
    graph: &crate::graph::Graph,
    q: f64,
    epoch: usize,
    seed: u64,
) -> Vec<(usize, usize)> {
    assert!((0.0..=1.0).contains(&q));
    graph
        .edge_set()
        .into_iter()
        .filter(|&(u, v)| edge_uniform(seed, DOMAIN_DROP, epoch, u, v) < q)
        .collect()
}

/// Communication view of a DropEdge epoch under a given plan.
pub fn drop_edge_comm(
    graph: &crate::graph::Graph,
    plan: &PartitionPlan,
    q: f64,
    epoch: usize,
    seed: u64,
) -> EdgeSamplePlan {
    edge_plan_from_keep(graph, plan, epoch, q, |v, u| {
        edge_uniform(seed, DOMAIN_DROP, epoch, v, u) < q
    })
}
