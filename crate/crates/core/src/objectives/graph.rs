use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::ElementId;

/// Undirected graph with non-negative edge weights, stored both as an edge
/// list and in compressed adjacency form.
#[derive(Clone, Debug)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<(ElementId, ElementId, f64)>,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    weights: Vec<f64>,
    weighted_degree: Vec<f64>,
}

impl WeightedGraph {
    /// Validates and builds a graph: no self loops, no repeated undirected
    /// pairs, finite non-negative weights, ids below `n`.
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        for &(u, v, w) in &edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInstance(format!(
                    "edge ({u}, {v}) references a node outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidInstance(format!("self loop on node {u}")));
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::Data(format!(
                    "edge ({u}, {v}) has weight {w}; weights must be finite and non-negative"
                )));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidInstance(format!("duplicate edge ({u}, {v})")));
            }
        }
        Ok(Self::from_unique_edges(n, edges))
    }

    fn from_unique_edges(n: usize, edges: Vec<(usize, usize, f64)>) -> Self {
        let mut degree = vec![0usize; n];
        for &(u, v, _) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + degree[i];
        }
        let mut cursor = offsets.clone();
        let mut neighbors = vec![0usize; offsets[n]];
        let mut weights = vec![0.0; offsets[n]];
        let mut weighted_degree = vec![0.0; n];
        for &(u, v, w) in &edges {
            for (a, b) in [(u, v), (v, u)] {
                neighbors[cursor[a]] = b;
                weights[cursor[a]] = w;
                cursor[a] += 1;
                weighted_degree[a] += w;
            }
        }
        WeightedGraph {
            n,
            edges: edges
                .into_iter()
                .map(|(u, v, w)| (ElementId(u), ElementId(v), w))
                .collect(),
            offsets,
            neighbors,
            weights,
            weighted_degree,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(ElementId, ElementId, f64)] {
        &self.edges
    }

    /// `(neighbor, weight)` pairs of node `u`.
    pub fn neighbors(&self, u: ElementId) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[u.index()]..self.offsets[u.index() + 1];
        self.neighbors[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    /// `Σ_v w(u, v)`.
    pub fn weighted_degree(&self, u: ElementId) -> f64 {
        self.weighted_degree[u.index()]
    }
}

/// A generated Erdős–Rényi graph together with its node costs.
#[derive(Clone, Debug)]
pub struct RandomGraph {
    pub graph: WeightedGraph,
    pub costs: Vec<f64>,
}

/// Uniform draw from the open interval (0, 1).
pub(crate) fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let x: f64 = rng.random();
        if x > 0.0 {
            return x;
        }
    }
}

/// `n` costs uniform on (0, 1), for instances whose data carries no costs.
pub fn uniform_costs(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| open_unit(&mut rng)).collect()
}

/// `G(n, p)` with edge weights and node costs uniform on (0, 1).
///
/// Node costs are drawn first, then every pair `u < v` in lexicographic order
/// flips its own coin; an included edge draws its weight immediately.
pub fn gen_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<RandomGraph> {
    if n < 2 {
        return Err(Error::param(format!("need at least 2 nodes, got {n}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let costs: Vec<f64> = (0..n).map(|_| open_unit(&mut rng)).collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random::<f64>() < p {
                edges.push((u, v, open_unit(&mut rng)));
            }
        }
    }
    Ok(RandomGraph {
        graph: WeightedGraph::from_unique_edges(n, edges),
        costs,
    })
}

/// Reads a whitespace-separated `u v w` edge list. `#` lines and blank lines
/// are skipped; the node count is one more than the largest id.
pub fn load_edge_list(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_edge_list(BufReader::new(file), path)
}

pub fn parse_edge_list<R: BufRead>(reader: R, path: &Path) -> Result<WeightedGraph> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut n = 0usize;
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(
                lineno,
                format!("expected `<u> <v> <w>`, found {} fields", fields.len()),
            ));
        }
        let u: usize = fields[0]
            .parse()
            .map_err(|_| parse_err(lineno, format!("bad node id `{}`", fields[0])))?;
        let v: usize = fields[1]
            .parse()
            .map_err(|_| parse_err(lineno, format!("bad node id `{}`", fields[1])))?;
        let w: f64 = fields[2]
            .parse()
            .map_err(|_| parse_err(lineno, format!("bad weight `{}`", fields[2])))?;
        if !w.is_finite() {
            return Err(Error::Data(format!(
                "{}:{lineno}: non-finite weight {w}",
                path.display()
            )));
        }
        if w < 0.0 {
            return Err(Error::Data(format!(
                "{}:{lineno}: negative weight {w}",
                path.display()
            )));
        }
        if u == v {
            return Err(parse_err(lineno, format!("self loop on node {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(parse_err(lineno, format!("duplicate edge ({u}, {v})")));
        }
        n = n.max(u + 1).max(v + 1);
        edges.push((u, v, w));
    }
    Ok(WeightedGraph::from_unique_edges(n, edges))
}
