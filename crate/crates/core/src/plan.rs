//! Boundary sets, pairwise demand sets, and the communication/memory cost
//! models implied by a partition assignment.

use serde::Serialize;

use crate::graph::Graph;
use crate::partition::Assignment;

/// Per-partition inner/boundary structure plus, for every ordered pair
/// `(i, j)`, the demand set `D_{j→i} = B_i ∩ V_j` (nodes partition `i` needs
/// from partition `j`). All id lists are sorted ascending so wire order is
/// canonical.
#[derive(Clone, Debug)]
pub struct PartitionPlan {
    pub num_parts: usize,
    /// Owner partition of each node.
    pub part_of: Vec<usize>,
    /// `inner[i]` = V_i, sorted.
    pub inner: Vec<Vec<usize>>,
    /// `boundary[i]` = B_i, sorted: nodes owned elsewhere with a neighbor in V_i.
    pub boundary: Vec<Vec<usize>>,
    /// `demand[i][j]` = D_{j→i} = B_i ∩ V_j, sorted.
    pub demand: Vec<Vec<Vec<usize>>>,
}

pub fn build_plan(graph: &Graph, assignment: &Assignment) -> PartitionPlan {
    let m = assignment.num_parts;
    let inner = assignment.members();
    let mut boundary: Vec<Vec<usize>> = vec![Vec::new(); m];
    for v in 0..graph.num_nodes {
        let pv = assignment.part_of[v];
        let mut touched: Vec<usize> = graph
            .neighbors(v)
            .iter()
            .map(|&u| assignment.part_of[u])
            .filter(|&p| p != pv)
            .collect();
        touched.sort_unstable();
        touched.dedup();
        for p in touched {
            boundary[p].push(v); // v is a boundary node of partition p
        }
    }
    for b in boundary.iter_mut() {
        b.sort_unstable();
    }
    let mut demand: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); m]; m];
    for i in 0..m {
        for &b in &boundary[i] {
            demand[i][assignment.part_of[b]].push(b);
        }
    }
    PartitionPlan {
        num_parts: m,
        part_of: assignment.part_of.clone(),
        inner,
        boundary,
        demand,
    }
}

/// Total communication volume and per-partition send volumes.
/// Total = Σ_i |B_i|; partition i sends Σ_j |D_{i→j}| rows per propagation.
pub fn comm_volume(plan: &PartitionPlan) -> (usize, Vec<usize>) {
    let total = plan.boundary.iter().map(Vec::len).sum();
    let send: Vec<usize> = (0..plan.num_parts)
        .map(|i| (0..plan.num_parts).map(|j| plan.demand[j][i].len()).sum())
        .collect();
    debug_assert_eq!(send.iter().sum::<usize>(), total);
    (total, send)
}

/// Per-layer memory requirement of partition i in scalar counts:
/// `(3 n_in + p * n_bd) * d`. At `p = 1` this is the exact formula
/// `(3 n_in + n_bd) d`; at lower rates the boundary term is the expectation.
pub fn memory_estimate(plan: &PartitionPlan, layer_dims: &[usize], p: f64) -> Vec<Vec<f64>> {
    (0..plan.num_parts)
        .map(|i| {
            let n_in = plan.inner[i].len() as f64;
            let n_bd = plan.boundary[i].len() as f64;
            layer_dims
                .iter()
                .map(|&d| (3.0 * n_in + p * n_bd) * d as f64)
                .collect()
        })
        .collect()
}

/// Spread statistics for straggler analysis.
#[derive(Clone, Debug, Serialize)]
pub struct RatioStats {
    pub ratios: Vec<f64>,
    pub min: f64,
    pub max: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
}

/// `|B_i| / |V_i|` per partition, with min/max/quartiles.
pub fn boundary_inner_ratios(plan: &PartitionPlan) -> RatioStats {
    let ratios: Vec<f64> = (0..plan.num_parts)
        .map(|i| plan.boundary[i].len() as f64 / plan.inner[i].len() as f64)
        .collect();
    let mut sorted = ratios.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let q = |f: f64| -> f64 {
        let pos = f * (sorted.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        let frac = pos - lo as f64;
        sorted[lo] * (1.0 - frac) + sorted[hi] * frac
    };
    RatioStats {
        min: sorted[0],
        max: *sorted.last().unwrap(),
        q1: q(0.25),
        median: q(0.5),
        q3: q(0.75),
        ratios,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, Graph, Split};
    use crate::partition::Assignment;
    use ndarray::Array2;
    use proptest::prelude::*;

    fn path4() -> Graph {
        build_graph(&[(0, 1), (1, 2), (2, 3)], 4, Array2::zeros((4, 1)), vec![0; 4], vec![Split::Train; 4]).unwrap()
    }

    fn p4_plan() -> PartitionPlan {
        let g = path4();
        build_plan(&g, &Assignment { part_of: vec![0, 0, 1, 1], num_parts: 2 })
    }

    /// Independent Eq.-3 route: Σ_v D(v) computed edge-wise.
    pub(crate) fn volume_edgewise(g: &Graph, part_of: &[usize]) -> usize {
        (0..g.num_nodes)
            .map(|v| {
                let mut parts: Vec<usize> = g
                    .neighbors(v)
                    .iter()
                    .map(|&u| part_of[u])
                    .filter(|&p| p != part_of[v])
                    .collect();
                parts.sort_unstable();
                parts.dedup();
                parts.len()
            })
            .sum()
    }

    #[test]
    fn p4_boundary_and_demand() {
        let plan = p4_plan();
        assert_eq!(plan.boundary[0], vec![2]);
        assert_eq!(plan.boundary[1], vec![1]);
        assert_eq!(plan.demand[0][1], vec![2]); // partition 0 needs node 2 from 1
        assert_eq!(plan.demand[1][0], vec![1]);
        let (total, send) = comm_volume(&plan);
        assert_eq!(total, 2);
        assert_eq!(send, vec![1, 1]);
    }

    #[test]
    fn single_part_no_boundary() {
        let g = path4();
        let plan = build_plan(&g, &Assignment { part_of: vec![0; 4], num_parts: 1 });
        assert!(plan.boundary[0].is_empty());
        assert_eq!(comm_volume(&plan).0, 0);
        assert_eq!(boundary_inner_ratios(&plan).ratios, vec![0.0]);
    }

    #[test]
    fn star_graph_asymmetry() {
        // K_{1,5}: center 0 in part 0, leaves 1..=5 in part 1
        let edges: Vec<(usize, usize)> = (1..=5).map(|v| (0, v)).collect();
        let g = build_graph(&edges, 6, Array2::zeros((6, 1)), vec![0; 6], vec![Split::Train; 6]).unwrap();
        let plan = build_plan(&g, &Assignment { part_of: vec![0, 1, 1, 1, 1, 1], num_parts: 2 });
        assert_eq!(plan.boundary[0], vec![1, 2, 3, 4, 5]);
        assert_eq!(plan.boundary[1], vec![0]);
        assert_eq!(comm_volume(&plan).0, 6);
        assert_eq!(volume_edgewise(&g, &plan.part_of), 6);
    }

    #[test]
    fn memory_formula_values() {
        let plan = p4_plan();
        // partition 0: (3*2 + 1) * 4 = 28
        let mem = memory_estimate(&plan, &[4], 1.0);
        assert_eq!(mem[0][0], 28.0);
        let mem0 = memory_estimate(&plan, &[1], 1.0);
        // zero-boundary case collapses to 3 n_in
        let g = path4();
        let solo = build_plan(&g, &Assignment { part_of: vec![0; 4], num_parts: 1 });
        assert_eq!(memory_estimate(&solo, &[1], 1.0)[0][0], 12.0);
        assert_eq!(mem0[0][0], 7.0);
    }

    #[test]
    fn p4_ratios() {
        let stats = boundary_inner_ratios(&p4_plan());
        assert_eq!(stats.ratios, vec![0.5, 0.5]);
        assert_eq!(stats.max, 0.5);
    }

    fn arb_graph_and_assignment() -> impl Strategy<Value = (Graph, Assignment)> {
        (4usize..40, any::<u64>()).prop_flat_map(|(n, seed)| {
            (
                proptest::collection::vec((0..n, 0..n), 0..3 * n),
                proptest::collection::vec(0usize..4, n),
                Just((n, seed)),
            )
                .prop_map(|(edges, mut part_raw, (n, _))| {
                    let g = build_graph(&edges, n, Array2::zeros((n, 1)), vec![0; n], vec![Split::Train; n]).unwrap();
                    // make every partition id in 0..num_parts appear
                    part_raw[0] = 0;
                    let num_parts = part_raw.iter().copied().max().unwrap() + 1;
                    let mut present = vec![false; num_parts];
                    for &p in &part_raw {
                        present[p] = true;
                    }
                    let remap: Vec<usize> = {
                        let mut next = 0;
                        present
                            .iter()
                            .map(|&ok| {
                                if ok {
                                    let r = next;
                                    next += 1;
                                    r
                                } else {
                                    usize::MAX
                                }
                            })
                            .collect()
                    };
                    let part_of: Vec<usize> = part_raw.iter().map(|&p| remap[p]).collect();
                    let num_parts = part_of.iter().copied().max().unwrap() + 1;
                    (g, Assignment { part_of, num_parts })
                })
        })
    }

    proptest! {
        #[test]
        fn volume_identity_two_routes((g, a) in arb_graph_and_assignment()) {
            let plan = build_plan(&g, &a);
            prop_assert_eq!(comm_volume(&plan).0, volume_edgewise(&g, &a.part_of));
        }

        #[test]
        fn demand_sets_partition_boundary((g, a) in arb_graph_and_assignment()) {
            let plan = build_plan(&g, &a);
            for i in 0..plan.num_parts {
                let mut union: Vec<usize> = plan.demand[i].iter().flatten().copied().collect();
                union.sort_unstable();
                prop_assert_eq!(&union, &plan.boundary[i]);
            }
        }

        #[test]
        fn refinement_never_decreases_volume((g, a) in arb_graph_and_assignment()) {
            let plan = build_plan(&g, &a);
            let before = comm_volume(&plan).0;
            // split partition 0 by parity of node id
            let mut part_of = a.part_of.clone();
            let mut changed = false;
            for v in 0..g.num_nodes {
                if part_of[v] == 0 && v % 2 == 1 {
                    part_of[v] = a.num_parts;
                    changed = true;
                }
            }
            if changed {
                let refined = Assignment { part_of, num_parts: a.num_parts + 1 };
                let after = comm_volume(&build_plan(&g, &refined)).0;
                prop_assert!(after >= before);
            }
        }
    }
}
