//! Node-to-partition assignment: random, streaming greedy, and file import.

use std::io::{BufRead, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A complete node-to-partition map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub part_of: Vec<usize>,
    pub num_parts: usize,
}

impl Assignment {
    /// Inner node ids of each partition, sorted ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_parts];
        for (v, &p) in self.part_of.iter().enumerate() {
            out[p].push(v);
        }
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.num_parts];
        for &p in &self.part_of {
            s[p] += 1;
        }
        s
    }
}

fn check_parts(m: usize, num_nodes: usize) -> Result<()> {
    if m == 0 || m > num_nodes {
        return Err(Error::PartCountOutOfRange { m, num_nodes });
    }
    Ok(())
}

/// Shuffle nodes and deal them round-robin; sizes differ by at most one.
pub fn partition_random(graph: &Graph, m: usize, seed: u64) -> Result<Assignment> {
    check_parts(m, graph.num_nodes)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7061_7274_5f72_6e64);
    let mut order: Vec<usize> = (0..graph.num_nodes).collect();
    order.shuffle(&mut rng);
    let mut part_of = vec![0; graph.num_nodes];
    for (i, &v) in order.iter().enumerate() {
        part_of[v] = i % m;
    }
    Ok(Assignment { part_of, num_parts: m })
}

/// Streaming greedy partitioner. Nodes are visited in BFS order from random
/// roots; each node goes to the partition maximizing
/// `placed_neighbors - size/capacity`, ties broken by lowest partition id,
/// subject to the cap `ceil((1+slack) * n / m)`. A floor of `floor(n/m)` is
/// enforced so no partition ends up starved.
pub fn partition_greedy(graph: &Graph, m: usize, slack: f64, seed: u64) -> Result<Assignment> {
    check_parts(m, graph.num_nodes)?;
    let n = graph.num_nodes;
    let cap = (((1.0 + slack) * n as f64) / m as f64).ceil() as usize;
    if cap * m < n {
        return Err(Error::InfeasibleCap { cap, m, num_nodes: n });
    }
    let floor = n / m;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7061_7274_5f67_7264);

    const UNASSIGNED: usize = usize::MAX;
    let mut part_of = vec![UNASSIGNED; n];
    let mut sizes = vec![0usize; m];
    let mut visited = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    let mut placed = 0usize;

    while placed < n {
        if queue.is_empty() {
            // new component: draw a random node, then hop to a
            // pseudo-peripheral root so the stream walks inward from an end
            let probe = loop {
                let r = rng.gen_range(0..n);
                if !visited[r] {
                    break r;
                }
            };
            let root = farthest_unvisited(graph, probe, &visited);
            visited[root] = true;
            queue.push_back(root);
        }
        let v = queue.pop_front().unwrap();

        // if the stragglers must absorb every remaining node, restrict to them
        let deficit: usize = sizes.iter().map(|&s| floor.saturating_sub(s)).sum();
        let remaining = n - placed;
        let force_needy = deficit >= remaining;

        let mut best: Option<(f64, usize)> = None;
        for q in 0..m {
            if sizes[q] >= cap {
                continue;
            }
            if force_needy && sizes[q] >= floor {
                continue;
            }
            let placed_neighbors = graph
                .neighbors(v)
                .iter()
                .filter(|&&u| part_of[u] == q)
                .count();
            let score = placed_neighbors as f64 - sizes[q] as f64 / cap as f64;
            let better = match best {
                None => true,
                Some((b, _)) => score > b,
            };
            if better {
                best = Some((score, q));
            }
        }
        let (_, q) = best.expect("cap feasibility guarantees a candidate");
        part_of[v] = q;
        sizes[q] += 1;
        placed += 1;
        for &u in graph.neighbors(v) {
            if !visited[u] {
                visited[u] = true;
                queue.push_back(u);
            }
        }
    }
    Ok(Assignment { part_of, num_parts: m })
}

/// Last node reached by a BFS from `start` over not-yet-placed nodes.
fn farthest_unvisited(graph: &Graph, start: usize, visited: &[bool]) -> usize {
    let mut seen = vec![false; graph.num_nodes];
    let mut queue = std::collections::VecDeque::new();
    seen[start] = true;
    queue.push_back(start);
    let mut last = start;
    while let Some(v) = queue.pop_front() {
        last = v;
        for &u in graph.neighbors(v) {
            if !seen[u] && !visited[u] {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    last
}

/// Read one partition id per line; `num_parts` becomes `1 + max id`.
pub fn load_assignment(path: &Path, num_nodes: usize) -> Result<Assignment> {
    let file = std::fs::File::open(path)?;
    let mut part_of = Vec::with_capacity(num_nodes);
    for (i, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let p: usize = t.parse().map_err(|_| Error::Parse {
            file: path.display().to_string(),
            line: i + 1,
            reason: format!("not a nonnegative integer: {t:?}"),
        })?;
        part_of.push(p);
    }
    if part_of.len() != num_nodes {
        return Err(Error::AssignmentLineCount { got: part_of.len(), expected: num_nodes });
    }
    let num_parts = part_of.iter().copied().max().unwrap_or(0) + 1;
    Ok(Assignment { part_of, num_parts })
}

pub fn save_assignment(path: &Path, assignment: &Assignment) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    for &p in &assignment.part_of {
        writeln!(f, "{p}")?;
    }
    Ok(())
}
