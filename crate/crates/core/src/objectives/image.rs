use std::fs::File;
use std::io::Read;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{ElementId, ElementSet};
use crate::oracle::{Evaluator, Objective};

/// Dense symmetric similarity matrix with unit diagonal.
#[derive(Clone, Debug)]
pub struct SimilarityMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SimilarityMatrix {
    /// Row-major `n × n` data. Must be finite, symmetric, with `sim[u][u] = 1`.
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Data(format!(
                "similarity matrix needs {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        for u in 0..n {
            if data[u * n + u] != 1.0 {
                return Err(Error::Data(format!("sim[{u}][{u}] must be 1")));
            }
            for v in 0..u {
                let a = data[u * n + v];
                if !a.is_finite() || a != data[v * n + u] {
                    return Err(Error::Data(format!("sim[{u}][{v}] is not symmetric and finite")));
                }
            }
        }
        Ok(SimilarityMatrix { n, data })
    }

    /// Cosine similarities between feature rows.
    pub fn from_features(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let dim = rows.first().map_or(0, Vec::len);
        let mut norms = Vec::with_capacity(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Data(format!(
                    "feature row {i} has {} values, expected {dim}",
                    row.len()
                )));
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::Data(format!("feature row {i} has a non-finite value")));
            }
            let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(Error::Data(format!("feature row {i} has zero norm")));
            }
            norms.push(norm);
        }
        let mut data = vec![0.0; n * n];
        for u in 0..n {
            data[u * n + u] = 1.0;
            for v in 0..u {
                let dot: f64 = rows[u].iter().zip(&rows[v]).map(|(a, b)| a * b).sum();
                let cos = (dot / (norms[u] * norms[v])).clamp(-1.0, 1.0);
                data[u * n + v] = cos;
                data[v * n + u] = cos;
            }
        }
        Ok(SimilarityMatrix { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.data[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[f64] {
        &self.data[u * self.n..(u + 1) * self.n]
    }
}

/// Reads a headerless CSV of feature rows and returns their cosine-similarity matrix.
pub fn load_features(path: impl AsRef<Path>) -> Result<SimilarityMatrix> {
    let path = path.as_ref();
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
    let rows = parse_features(&text, path)?;
    SimilarityMatrix::from_features(&rows)
}

pub fn parse_features(text: &str, path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    let mut width = None;
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let row = record
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|_| Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("bad feature value `{field}`"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("row has {} values, expected {w}", row.len()),
                })
            }
            _ => {}
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Random non-negative feature vectors, uniform on [0, 1) per coordinate.
pub fn gen_features(n: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (0..dim).map(|_| rng.random::<f64>()).collect())
        .collect()
}

/// Image summarization
/// `f(S) = Σ_u max_{v ∈ S} sim(u, v) - (1/n) Σ_u Σ_{v ∈ S} sim(u, v)`,
/// with the max over an empty set taken as 0.
#[derive(Clone, Debug)]
pub struct ImageSummarization {
    sim: SimilarityMatrix,
    column_sums: Vec<f64>,
}

impl ImageSummarization {
    pub fn new(sim: SimilarityMatrix) -> Self {
        let column_sums = (0..sim.n()).map(|v| sim.row(v).iter().sum()).collect();
        ImageSummarization { sim, column_sums }
    }

    pub fn similarity(&self) -> &SimilarityMatrix {
        &self.sim
    }
}

impl Objective for ImageSummarization {
    fn ground_size(&self) -> usize {
        self.sim.n()
    }

    fn value(&self, set: &ElementSet) -> f64 {
        if set.is_empty() {
            return 0.0;
        }
        let n = self.sim.n();
        let coverage: f64 = (0..n)
            .map(|u| {
                set.iter()
                    .map(|v| self.sim.get(u, v.index()))
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .sum();
        let penalty: f64 = (0..n)
            .map(|u| set.iter().map(|v| self.sim.get(u, v.index())).sum::<f64>())
            .sum();
        coverage - penalty / n as f64
    }

    fn evaluator(&self, base: &ElementSet) -> Box<dyn Evaluator + '_> {
        let n = self.sim.n();
        let mut eval = ImageEvaluator {
            objective: self,
            inside: vec![false; n],
            best: vec![f64::NEG_INFINITY; n],
            coverage: 0.0,
            penalty: 0.0,
            empty: true,
        };
        for e in base {
            eval.insert(e);
        }
        Box::new(eval)
    }
}

struct ImageEvaluator<'a> {
    objective: &'a ImageSummarization,
    inside: Vec<bool>,
    /// `max_{v ∈ S} sim(u, v)`; −∞ while S is empty.
    best: Vec<f64>,
    coverage: f64,
    penalty: f64,
    empty: bool,
}

impl ImageEvaluator<'_> {
    fn coverage_with(&self, e: ElementId) -> f64 {
        self.objective
            .sim
            .row(e.index())
            .iter()
            .zip(&self.best)
            .map(|(&s, &b)| s.max(b))
            .sum()
    }
}

impl Evaluator for ImageEvaluator<'_> {
    fn value(&self) -> f64 {
        if self.empty {
            0.0
        } else {
            self.coverage - self.penalty / self.objective.sim.n() as f64
        }
    }

    fn gain(&self, e: ElementId) -> f64 {
        if self.inside[e.index()] {
            return 0.0;
        }
        let n = self.objective.sim.n() as f64;
        let new_value =
            self.coverage_with(e) - (self.penalty + self.objective.column_sums[e.index()]) / n;
        new_value - self.value()
    }

    fn insert(&mut self, e: ElementId) {
        if self.inside[e.index()] {
            return;
        }
        self.inside[e.index()] = true;
        self.empty = false;
        for (b, &s) in self.best.iter_mut().zip(self.objective.sim.row(e.index())) {
            *b = b.max(s);
        }
        self.coverage = self.best.iter().sum();
        self.penalty += self.objective.column_sums[e.index()];
    }
}
