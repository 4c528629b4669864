//! Immutable CSR graph storage and halo-augmented subgraph extraction.

use ndarray::Array2;

use crate::error::{Error, Result};

/// Train/val/test membership for one node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Split {
    Train,
    Val,
    Test,
}

/// An undirected graph in CSR form with per-node features, labels and split
/// masks. Adjacency is symmetric and stores no self-loops; neighbor lists are
/// sorted ascending.
#[derive(Clone, Debug)]
pub struct Graph {
    pub num_nodes: usize,
    /// Row pointers, length `num_nodes + 1`, nondecreasing.
    pub csr_offsets: Vec<usize>,
    /// Flattened neighbor lists.
    pub csr_targets: Vec<usize>,
    /// Dense `num_nodes x d0` feature matrix.
    pub features: Array2<f64>,
    /// Class id per node.
    pub labels: Vec<usize>,
    /// Split per node.
    pub split: Vec<Split>,
}

impl Graph {
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.csr_targets[self.csr_offsets[v]..self.csr_offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.csr_offsets[v + 1] - self.csr_offsets[v]
    }

    pub fn feature_dim(&self) -> usize {
        self.features.ncols()
    }

    pub fn num_classes(&self) -> usize {
        self.labels.iter().copied().max().map_or(0, |c| c + 1)
    }

    /// Undirected edge count (each edge counted once).
    pub fn num_edges(&self) -> usize {
        self.csr_targets.len() / 2
    }

    /// Enumerate undirected edges as (u, v) with u < v.
    pub fn edge_set(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for u in 0..self.num_nodes {
            for &v in self.neighbors(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn mask_ids(&self, which: Split) -> Vec<usize> {
        (0..self.num_nodes).filter(|&v| self.split[v] == which).collect()
    }
}

/// Build a symmetric CSR graph from an edge list. Duplicate edges and
/// self-loops are dropped; neighbor lists come out sorted ascending.
pub fn build_graph(
    edges: &[(usize, usize)],
    num_nodes: usize,
    features: Array2<f64>,
    labels: Vec<usize>,
    split: Vec<Split>,
) -> Result<Graph> {
    if features.nrows() != num_nodes {
        return Err(Error::FeatureRowMismatch { rows: features.nrows(), num_nodes });
    }
    if labels.len() != num_nodes {
        return Err(Error::LengthMismatch { len: labels.len(), num_nodes });
    }
    if split.len() != num_nodes {
        return Err(Error::LengthMismatch { len: split.len(), num_nodes });
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); num_nodes];
    for &(u, v) in edges {
        if u >= num_nodes {
            return Err(Error::NodeIdOutOfRange { id: u, num_nodes });
        }
        if v >= num_nodes {
            return Err(Error::NodeIdOutOfRange { id: v, num_nodes });
        }
        if u == v {
            continue;
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut csr_offsets = Vec::with_capacity(num_nodes + 1);
    let mut csr_targets = Vec::new();
    csr_offsets.push(0);
    for list in adj.iter_mut() {
        list.sort_unstable();
        list.dedup();
        csr_targets.extend_from_slice(list);
        csr_offsets.push(csr_targets.len());
    }
    Ok(Graph { num_nodes, csr_offsets, csr_targets, features, labels, split })
}

/// A partition's working subgraph: rows for inner nodes only, columns over
/// inner and currently selected halo nodes.
///
/// Local index layout: inner nodes first (ascending global id), then halo
/// nodes (ascending global id), so the stacked feature matrix `[H; H_halo]`
/// is contiguous.
#[derive(Clone, Debug)]
pub struct SubgraphWithHalo {
    pub owner_partition: usize,
    /// Global ids, sorted ascending.
    pub inner_ids: Vec<usize>,
    /// Global ids of selected boundary nodes, sorted ascending.
    pub halo_ids: Vec<usize>,
    /// Row pointers over inner rows (length `inner_ids.len() + 1`).
    pub local_offsets: Vec<usize>,
    /// Local column indices; `< inner_ids.len()` means inner, otherwise halo.
    pub local_targets: Vec<usize>,
    /// Full-graph degree of each inner node, used as the mean denominator.
    pub full_degree: Vec<usize>,
}

impl SubgraphWithHalo {
    pub fn num_inner(&self) -> usize {
        self.inner_ids.len()
    }

    pub fn num_halo(&self) -> usize {
        self.halo_ids.len()
    }

    pub fn local_neighbors(&self, local_row: usize) -> &[usize] {
        &self.local_targets[self.local_offsets[local_row]..self.local_offsets[local_row + 1]]
    }

    /// Map a global id to its local index, if present.
    pub fn local_index(&self, global: usize) -> Option<usize> {
        if let Ok(i) = self.inner_ids.binary_search(&global) {
            return Some(i);
        }
        self.halo_ids.binary_search(&global).ok().map(|i| self.num_inner() + i)
    }
}

/// Extract the node-induced subgraph over `inner ∪ halo`, keeping adjacency
/// rows only for inner nodes. Edges to boundary nodes outside `halo` are
/// dropped.
pub fn induced_subgraph(
    graph: &Graph,
    owner_partition: usize,
    inner_ids: &[usize],
    halo_ids: &[usize],
) -> Result<SubgraphWithHalo> {
    debug_assert!(inner_ids.windows(2).all(|w| w[0] < w[1]));
    debug_assert!(halo_ids.windows(2).all(|w| w[0] < w[1]));
    for &h in halo_ids {
        if inner_ids.binary_search(&h).is_ok() {
            return Err(Error::InnerHaloOverlap { id: h });
        }
    }
    let n_inner = inner_ids.len();
    let mut local_of = std::collections::HashMap::with_capacity(n_inner + halo_ids.len());
    for (i, &g) in inner_ids.iter().enumerate() {
        local_of.insert(g, i);
    }
    for (i, &g) in halo_ids.iter().enumerate() {
        local_of.insert(g, n_inner + i);
    }
    let mut halo_touched = vec![false; halo_ids.len()];
    let mut local_offsets = Vec::with_capacity(n_inner + 1);
    let mut local_targets = Vec::new();
    let mut full_degree = Vec::with_capacity(n_inner);
    local_offsets.push(0);
    for &g in inner_ids {
        full_degree.push(graph.degree(g));
        for &u in graph.neighbors(g) {
            if let Some(&lu) = local_of.get(&u) {
                local_targets.push(lu);
                if lu >= n_inner {
                    halo_touched[lu - n_inner] = true;
                }
            }
        }
        local_offsets.push(local_targets.len());
    }
    if let Some(i) = halo_touched.iter().position(|&t| !t) {
        return Err(Error::HaloNotAdjacent { id: halo_ids[i] });
    }
    Ok(SubgraphWithHalo {
        owner_partition,
        inner_ids: inner_ids.to_vec(),
        halo_ids: halo_ids.to_vec(),
        local_offsets,
        local_targets,
        full_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    pub(crate) fn path4() -> Graph {
        let feats = Array2::zeros((4, 1));
        build_graph(
            &[(0, 1), (1, 2), (2, 3)],
            4,
            feats,
            vec![0; 4],
            vec![Split::Train; 4],
        )
        .unwrap()
    }

    #[test]
    fn p4_csr_offsets() {
        let g = path4();
        assert_eq!(g.csr_offsets, vec![0, 1, 3, 5, 6]);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert_eq!((0..4).map(|v| g.degree(v)).collect::<Vec<_>>(), vec![1, 2, 2, 1]);
    }

    #[test]
    fn dedup_and_self_loop_removed() {
        let g = build_graph(
            &[(0, 1), (1, 0), (1, 1)],
            2,
            Array2::zeros((2, 1)),
            vec![0, 0],
            vec![Split::Train, Split::Train],
        )
        .unwrap();
        assert_eq!(g.edge_set(), vec![(0, 1)]);
    }

    #[test]
    fn id_out_of_range_rejected() {
        let r = build_graph(&[(0, 5)], 2, Array2::zeros((2, 1)), vec![0, 0], vec![Split::Train; 2]);
        assert!(matches!(r, Err(Error::NodeIdOutOfRange { id: 5, .. })));
    }

    #[test]
    fn induced_p4_with_halo() {
        let g = path4();
        let sub = induced_subgraph(&g, 0, &[0, 1], &[2]).unwrap();
        // node 0 (local 0): neighbor 1 (local 1); node 1: neighbors 0 and halo 2 (local 2)
        assert_eq!(sub.local_neighbors(0), &[1]);
        assert_eq!(sub.local_neighbors(1), &[0, 2]);
        assert_eq!(sub.full_degree, vec![1, 2]);
    }

    #[test]
    fn induced_p4_without_halo_drops_boundary_edge() {
        let g = path4();
        let sub = induced_subgraph(&g, 0, &[0, 1], &[]).unwrap();
        assert_eq!(sub.local_neighbors(1), &[0]);
        // full degree is still 2 even though the boundary neighbor is dropped
        assert_eq!(sub.full_degree[1], 2);
    }

    #[test]
    fn induced_all_inner_is_identity() {
        let g = path4();
        let sub = induced_subgraph(&g, 0, &[0, 1, 2, 3], &[]).unwrap();
        assert_eq!(sub.local_offsets, g.csr_offsets);
        assert_eq!(sub.local_targets, g.csr_targets);
    }

    #[test]
    fn halo_not_adjacent_rejected() {
        let g = path4();
        let r = induced_subgraph(&g, 0, &[0], &[3]);
        assert!(matches!(r, Err(Error::HaloNotAdjacent { id: 3 })));
    }
}
