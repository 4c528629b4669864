//! Empirical check of the sampled-propagation variance bound: per partition,
//! E‖Z̃_{V_i} − Z_{V_i}‖²_F ≤ γ² ‖P_{V_i,B_i}‖²_F / p, where γ bounds the
//! row norms of HW.

use ndarray::Array2;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::nn::propagate::{build_propagation, gcn_propagate, PropagationMatrix};
use crate::plan::PartitionPlan;
use crate::sample::boundary_uniform;

#[derive(Clone, Debug, Serialize)]
pub struct PartitionVariance {
    pub partition: usize,
    /// Monte-Carlo (or enumerated) E‖Z̃ − Z‖²_F over the partition's rows.
    pub empirical_mse: f64,
    /// γ² ‖P_{V_i,B_i}‖²_F / p.
    pub bound: f64,
    pub boundary_size: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VarianceReport {
    pub p: f64,
    pub trials: usize,
    pub gamma: f64,
    pub per_partition: Vec<PartitionVariance>,
    /// Σ_i E‖Z̃_{V_i} − Z_{V_i}‖²_F / |V| (per-node form).
    pub global_empirical_per_node: f64,
    /// γ² ‖P‖²_F / (p |V|).
    pub global_bound_per_node: f64,
}

fn row_norm_bound(hw: &Array2<f64>) -> f64 {
    (0..hw.nrows())
        .map(|r| hw.row(r).iter().map(|&x| x * x).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

fn scale_vec(plan: &PartitionPlan, i: usize, num_nodes: usize, p: f64, selected: &[usize]) -> Vec<f64> {
    let mut s = vec![0.0; num_nodes];
    for &v in &plan.inner[i] {
        s[v] = 1.0;
    }
    for &b in selected {
        s[b] = 1.0 / p;
    }
    s
}

fn exact_rows(
    pmat: &PropagationMatrix,
    plan: &PartitionPlan,
    i: usize,
    hw: &Array2<f64>,
) -> Result<Array2<f64>> {
    let n = pmat.num_nodes;
    let mut s = vec![0.0; n];
    for &v in &plan.inner[i] {
        s[v] = 1.0;
    }
    for &b in &plan.boundary[i] {
        s[b] = 1.0;
    }
    gcn_propagate(pmat, &plan.inner[i], &s, hw)
}

/// Monte-Carlo estimate over `trials` independent epochs. Uses the same
/// hash-stream sampler as training, with the trial index as the epoch.
pub fn estimate_variance(
    graph: &Graph,
    plan: &PartitionPlan,
    h: &Array2<f64>,
    w: &Array2<f64>,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<VarianceReport> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidVarianceRate { p });
    }
    assert!(trials >= 1);
    let pmat = build_propagation(graph);
    let hw = h.dot(w);
    let gamma = row_norm_bound(&hw);
    let n = graph.num_nodes;

    let mut per_partition = Vec::with_capacity(plan.num_parts);
    for i in 0..plan.num_parts {
        let exact = exact_rows(&pmat, plan, i, &hw)?;
        let mut acc = 0.0;
        for t in 0..trials {
            let selected: Vec<usize> = plan.boundary[i]
                .iter()
                .copied()
                .filter(|&b| boundary_uniform(seed, t, i, b) < p)
                .collect();
            let s = scale_vec(plan, i, n, p, &selected);
            let approx = gcn_propagate(&pmat, &plan.inner[i], &s, &hw)?;
            acc += (&approx - &exact).iter().map(|&x| x * x).sum::<f64>();
        }
        let inner_set: std::collections::HashSet<usize> = plan.inner[i].iter().copied().collect();
        let fro_sq = pmat.frobenius_sq(&plan.inner[i], |u| !inner_set.contains(&u));
        per_partition.push(PartitionVariance {
            partition: i,
            empirical_mse: acc / trials as f64,
            bound: gamma * gamma * fro_sq / p,
            boundary_size: plan.boundary[i].len(),
        });
    }
    let global_empirical: f64 = per_partition.iter().map(|r| r.empirical_mse).sum();
    let full_fro_sq: f64 = pmat.values.iter().map(|&x| x * x).sum();
    Ok(VarianceReport {
        p,
        trials,
        gamma,
        global_empirical_per_node: global_empirical / n as f64,
        global_bound_per_node: gamma * gamma * full_fro_sq / (p * n as f64),
        per_partition,
    })
}

/// Exact E‖Z̃_{V_i} − Z_{V_i}‖²_F by enumerating all 2^|B_i| selections.
/// Only feasible for small boundary sets; pair it with `estimate_variance`
/// as an oracle.
pub fn enumerate_variance(
    graph: &Graph,
    plan: &PartitionPlan,
    h: &Array2<f64>,
    w: &Array2<f64>,
    p: f64,
    partition: usize,
) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidVarianceRate { p });
    }
    let b = &plan.boundary[partition];
    assert!(b.len() <= 20, "enumeration over 2^{} subsets is infeasible", b.len());
    let pmat = build_propagation(graph);
    let hw = h.dot(w);
    let exact = exact_rows(&pmat, plan, partition, &hw)?;
    let n = graph.num_nodes;
    let mut mse = 0.0;
    for mask in 0u64..(1 << b.len()) {
        let selected: Vec<usize> = b
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        let prob = p.powi(selected.len() as i32)
            * (1.0 - p).powi((b.len() - selected.len()) as i32);
        if prob == 0.0 {
            continue;
        }
        let s = scale_vec(plan, partition, n, p, &selected);
        let approx = gcn_propagate(&pmat, &plan.inner[partition], &s, &hw)?;
        mse += prob * (&approx - &exact).iter().map(|&x| x * x).sum::<f64>();
    }
    Ok(mse)
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub p: f64,
    pub empirical: f64,
    pub bound: f64,
    pub gamma: f64,
}

/// Per-node empirical MSE and bound across a list of rates; the shared
/// (seed, trial) uniform stream couples selections so the empirical column
/// decreases in p.
pub fn variance_sweep(
    graph: &Graph,
    plan: &PartitionPlan,
    h: &Array2<f64>,
    w: &Array2<f64>,
    p_list: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    p_list
        .iter()
        .map(|&p| {
            let r = estimate_variance(graph, plan, h, w, p, trials, seed)?;
            Ok(SweepRow {
                p,
                empirical: r.global_empirical_per_node,
                bound: r.global_bound_per_node,
                gamma: r.gamma,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, Split};
    use crate::partition::Assignment;
    use crate::plan::build_plan;
    use ndarray::arr2;

    fn p4_setup() -> (Graph, PartitionPlan, Array2<f64>, Array2<f64>) {
        let g = build_graph(&[(0, 1), (1, 2), (2, 3)], 4, Array2::zeros((4, 1)), vec![0; 4], vec![Split::Train; 4]).unwrap();
        let plan = build_plan(&g, &Assignment { part_of: vec![0, 0, 1, 1], num_parts: 2 });
        let h = arr2(&[[1.0], [2.0], [3.0], [4.0]]);
        let w = arr2(&[[1.0]]);
        (g, plan, h, w)
    }

    #[test]
    fn full_rate_has_zero_error() {
        let (g, plan, h, w) = p4_setup();
        let r = estimate_variance(&g, &plan, &h, &w, 1.0, 5, 3).unwrap();
        for pp in &r.per_partition {
            assert_eq!(pp.empirical_mse, 0.0);
        }
    }

    #[test]
    fn zero_rate_rejected() {
        let (g, plan, h, w) = p4_setup();
        assert!(matches!(
            estimate_variance(&g, &plan, &h, &w, 0.0, 5, 3),
            Err(Error::InvalidVarianceRate { .. })
        ));
    }

    #[test]
    fn monte_carlo_matches_enumeration_on_p4() {
        let (g, plan, h, w) = p4_setup();
        let trials = 20_000;
        let r = estimate_variance(&g, &plan, &h, &w, 0.5, trials, 7).unwrap();
        for i in 0..2 {
            let exact = enumerate_variance(&g, &plan, &h, &w, 0.5, i).unwrap();
            // single Bernoulli outcome per partition: sd of one draw ≤ the
            // larger of the two squared deviations
            let mc = r.per_partition[i].empirical_mse;
            let slack = 3.0 * exact / (trials as f64).sqrt() + 1e-9;
            assert!((mc - exact).abs() < slack.max(0.05 * exact), "part {i}: {mc} vs {exact}");
            assert!(exact <= r.per_partition[i].bound + 1e-12);
        }
    }

    #[test]
    fn closed_form_bernoulli_variance_on_p4() {
        // exact MSE = ((1-p)/p) Σ_v Σ_u∈B ‖P_{v,u} (HW)_u‖²
        let (g, plan, h, w) = p4_setup();
        let pmat = build_propagation(&g);
        let hw = h.dot(&w);
        for &p in &[0.25, 0.5, 0.8] {
            for i in 0..2 {
                let mut expect = 0.0;
                let bset: std::collections::HashSet<usize> =
                    plan.boundary[i].iter().copied().collect();
                for &v in &plan.inner[i] {
                    let (cols, vals) = pmat.row(v);
                    for (&u, &pvu) in cols.iter().zip(vals) {
                        if bset.contains(&u) {
                            expect += (1.0 - p) / p
                                * (pvu * hw[[u, 0]]).powi(2);
                        }
                    }
                }
                let enumerated = enumerate_variance(&g, &plan, &h, &w, p, i).unwrap();
                assert!((enumerated - expect).abs() < 1e-12, "p={p} i={i}");
            }
        }
    }

    #[test]
    fn variance_scales_as_one_minus_p_over_p() {
        let (g, plan, h, w) = p4_setup();
        let a = enumerate_variance(&g, &plan, &h, &w, 0.25, 0).unwrap();
        let b = enumerate_variance(&g, &plan, &h, &w, 0.5, 0).unwrap();
        assert!((a / b - 3.0).abs() < 1e-9); // (0.75/0.25) / (0.5/0.5)
    }

    #[test]
    fn sweep_is_monotone_and_bounded() {
        let (g, plan, h, w) = p4_setup();
        let rows = variance_sweep(&g, &plan, &h, &w, &[0.2, 0.5, 1.0], 4000, 5).unwrap();
        assert!(rows[0].empirical >= rows[1].empirical);
        assert!(rows[1].empirical >= rows[2].empirical);
        assert_eq!(rows[2].empirical, 0.0);
        for r in &rows {
            assert!(r.empirical <= r.bound * (1.0 + 3.0 / (4000f64).sqrt()) + 1e-12);
        }
    }
}
