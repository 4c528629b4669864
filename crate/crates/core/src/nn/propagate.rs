//! Symmetric-normalized GCN propagation, used by the variance harness.
//!
//! P = D̃^{-1/2} Ã D̃^{-1/2} with Ã = A + I, so P_{u,v} = 1/√(d̃_u d̃_v) on
//! edges and the diagonal.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Sparse CSR form of the propagation matrix over the full graph. Rows
/// include the self-loop entry.
#[derive(Clone, Debug)]
pub struct PropagationMatrix {
    pub num_nodes: usize,
    pub offsets: Vec<usize>,
    pub targets: Vec<usize>,
    pub values: Vec<f64>,
}

impl PropagationMatrix {
    pub fn row(&self, v: usize) -> (&[usize], &[f64]) {
        let r = self.offsets[v]..self.offsets[v + 1];
        (&self.targets[r.clone()], &self.values[r])
    }

    /// Squared Frobenius norm of the submatrix with the given rows and a
    /// column filter.
    pub fn frobenius_sq<F: Fn(usize) -> bool>(&self, rows: &[usize], col: F) -> f64 {
        rows.iter()
            .map(|&v| {
                let (cols, vals) = self.row(v);
                cols.iter()
                    .zip(vals)
                    .filter(|(&u, _)| col(u))
                    .map(|(_, &x)| x * x)
                    .sum::<f64>()
            })
            .sum()
    }
}

pub fn build_propagation(graph: &Graph) -> PropagationMatrix {
    let d_tilde: Vec<f64> = (0..graph.num_nodes).map(|v| graph.degree(v) as f64 + 1.0).collect();
    let inv_sqrt: Vec<f64> = d_tilde.iter().map(|&d| 1.0 / d.sqrt()).collect();
    let mut offsets = Vec::with_capacity(graph.num_nodes + 1);
    let mut targets = Vec::new();
    let mut values = Vec::new();
    offsets.push(0);
    for v in 0..graph.num_nodes {
        // merged ascending column order: neighbors plus the self-loop
        let mut cols: Vec<usize> = graph.neighbors(v).to_vec();
        let pos = cols.binary_search(&v).unwrap_err();
        cols.insert(pos, v);
        for &u in &cols {
            targets.push(u);
            values.push(inv_sqrt[v] * inv_sqrt[u]);
        }
        offsets.push(targets.len());
    }
    PropagationMatrix { num_nodes: graph.num_nodes, offsets, targets, values }
}

/// Compute rows `rows` of `P · diag(scale) · (HW)`. With `scale` all ones
/// this is the exact propagation `Z`; the variance harness passes 1/p on
/// sampled boundary nodes and 0 on dropped ones.
pub fn gcn_propagate(
    pmat: &PropagationMatrix,
    rows: &[usize],
    scale: &[f64],
    hw: &Array2<f64>,
) -> Result<Array2<f64>> {
    if scale.len() != pmat.num_nodes || hw.nrows() != pmat.num_nodes {
        return Err(Error::ShapeMismatch {
            context: format!(
                "scale {} / hw rows {} vs {} nodes",
                scale.len(),
                hw.nrows(),
                pmat.num_nodes
            ),
        });
    }
    let d = hw.ncols();
    let mut out = Array2::zeros((rows.len(), d));
    for (r, &v) in rows.iter().enumerate() {
        let (cols, vals) = pmat.row(v);
        let mut row = out.row_mut(r);
        for (&u, &pvu) in cols.iter().zip(vals) {
            let s = scale[u];
            if s != 0.0 {
                row.scaled_add(pvu * s, &hw.row(u));
            }
        }
    }
    Ok(out)
}
