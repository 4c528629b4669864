//! Synthetic stochastic-block-model graphs and the on-disk dataset format.
//!
//! Dataset directory layout:
//!   edges.tsv    — two whitespace-separated node ids per line
//!   features.csv — one comma-separated row per node
//!   labels.txt   — one class id per line
//!   split.txt    — one of {train,val,test} per line

use std::io::{BufRead, Write};
use std::path::Path;

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{build_graph, Graph, Split};

/// Stochastic block model with block-mean Gaussian features: nodes in the
/// same block share a mean feature vector, labels are block ids.
#[derive(Clone, Debug)]
pub struct SbmSpec {
    pub blocks: usize,
    pub nodes_per_block: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub feature_dim: usize,
    /// Distance between block means; larger separates classes more cleanly.
    pub mean_scale: f64,
    /// Fractions (train, val, test); must sum to 1.
    pub split_fractions: (f64, f64, f64),
}

impl SbmSpec {
    pub fn num_nodes(&self) -> usize {
        self.blocks * self.nodes_per_block
    }
}

impl Default for SbmSpec {
    fn default() -> Self {
        SbmSpec {
            blocks: 2,
            nodes_per_block: 100,
            p_in: 0.05,
            p_out: 0.005,
            feature_dim: 8,
            mean_scale: 2.0,
            split_fractions: (0.6, 0.2, 0.2),
        }
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn generate_sbm(spec: &SbmSpec, seed: u64) -> Graph {
    assert!((0.0..=1.0).contains(&spec.p_in) && (0.0..=1.0).contains(&spec.p_out));
    let (ft, fv, fs) = spec.split_fractions;
    assert!((ft + fv + fs - 1.0).abs() < 1e-9, "split fractions must sum to 1");
    let n = spec.num_nodes();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7362_6d5f_6765_6e00);

    let block_of = |v: usize| v / spec.nodes_per_block;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let p = if block_of(u) == block_of(v) { spec.p_in } else { spec.p_out };
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }

    let means: Vec<Vec<f64>> = (0..spec.blocks)
        .map(|_| (0..spec.feature_dim).map(|_| gaussian(&mut rng) * spec.mean_scale).collect())
        .collect();
    let mut features = Array2::zeros((n, spec.feature_dim));
    for v in 0..n {
        let mean = &means[block_of(v)];
        for d in 0..spec.feature_dim {
            features[[v, d]] = mean[d] + gaussian(&mut rng);
        }
    }

    let labels: Vec<usize> = (0..n).map(block_of).collect();
    let split: Vec<Split> = (0..n)
        .map(|_| {
            let r: f64 = rng.gen();
            if r < ft {
                Split::Train
            } else if r < ft + fv {
                Split::Val
            } else {
                Split::Test
            }
        })
        .collect();
    build_graph(&edges, n, features, labels, split).expect("SBM edges are in range")
}

pub fn save_dataset(dir: &Path, graph: &Graph) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut ef = std::io::BufWriter::new(std::fs::File::create(dir.join("edges.tsv"))?);
    for (u, v) in graph.edge_set() {
        writeln!(ef, "{u}\t{v}")?;
    }
    let mut ff = std::io::BufWriter::new(std::fs::File::create(dir.join("features.csv"))?);
    for v in 0..graph.num_nodes {
        let row: Vec<String> = graph.features.row(v).iter().map(|x| format!("{x:?}")).collect();
        writeln!(ff, "{}", row.join(","))?;
    }
    let mut lf = std::io::BufWriter::new(std::fs::File::create(dir.join("labels.txt"))?);
    for &l in &graph.labels {
        writeln!(lf, "{l}")?;
    }
    let mut sf = std::io::BufWriter::new(std::fs::File::create(dir.join("split.txt"))?);
    for s in &graph.split {
        let name = match s {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        };
        writeln!(sf, "{name}")?;
    }
    Ok(())
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let f = std::fs::File::open(path)?;
    let mut out = Vec::new();
    for line in std::io::BufReader::new(f).lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(line);
        }
    }
    Ok(out)
}

pub fn load_dataset(dir: &Path) -> Result<Graph> {
    let parse_err = |file: &Path, line: usize, reason: String| Error::Parse {
        file: file.display().to_string(),
        line,
        reason,
    };

    let feat_path = dir.join("features.csv");
    let feat_lines = read_lines(&feat_path)?;
    let num_nodes = feat_lines.len();
    let dim = feat_lines
        .first()
        .map(|l| l.split(',').count())
        .unwrap_or(0);
    let mut features = Array2::zeros((num_nodes, dim));
    for (i, line) in feat_lines.iter().enumerate() {
        let vals: Vec<&str> = line.split(',').collect();
        if vals.len() != dim {
            return Err(parse_err(&feat_path, i + 1, format!("expected {dim} columns, got {}", vals.len())));
        }
        for (d, v) in vals.iter().enumerate() {
            features[[i, d]] = v
                .trim()
                .parse()
                .map_err(|_| parse_err(&feat_path, i + 1, format!("bad float {v:?}")))?;
        }
    }

    let edge_path = dir.join("edges.tsv");
    let mut edges = Vec::new();
    for (i, line) in read_lines(&edge_path)?.iter().enumerate() {
        let mut it = line.split_whitespace();
        let (u, v) = match (it.next(), it.next(), it.next()) {
            (Some(u), Some(v), None) => (u, v),
            _ => return Err(parse_err(&edge_path, i + 1, "expected two ids".into())),
        };
        let u: usize = u.parse().map_err(|_| parse_err(&edge_path, i + 1, format!("bad id {u:?}")))?;
        let v: usize = v.parse().map_err(|_| parse_err(&edge_path, i + 1, format!("bad id {v:?}")))?;
        edges.push((u, v));
    }

    let label_path = dir.join("labels.txt");
    let label_lines = read_lines(&label_path)?;
    if label_lines.len() != num_nodes {
        return Err(Error::LengthMismatch { len: label_lines.len(), num_nodes });
    }
    let labels: Vec<usize> = label_lines
        .iter()
        .enumerate()
        .map(|(i, l)| {
            l.trim()
                .parse()
                .map_err(|_| parse_err(&label_path, i + 1, format!("bad label {l:?}")))
        })
        .collect::<Result<_>>()?;

    let split_path = dir.join("split.txt");
    let split_lines = read_lines(&split_path)?;
    if split_lines.len() != num_nodes {
        return Err(Error::LengthMismatch { len: split_lines.len(), num_nodes });
    }
    let split: Vec<Split> = split_lines
        .iter()
        .enumerate()
        .map(|(i, l)| match l.trim() {
            "train" => Ok(Split::Train),
            "val" => Ok(Split::Val),
            "test" => Ok(Split::Test),
            other => Err(parse_err(&split_path, i + 1, format!("bad split {other:?}"))),
        })
        .collect::<Result<_>>()?;

    build_graph(&edges, num_nodes, features, labels, split)
}
