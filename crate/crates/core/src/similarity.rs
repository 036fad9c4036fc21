//! Absolute Pearson similarity between variables and the similarity graph.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Edge, WeightedGraph};

/// Symmetry tolerance applied to similarity matrices read from outside.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
enum Storage {
    /// Column-major, `n * p` values.
    Dense(Vec<f64>),
    /// `(row, col, value)` with implicit zeros, sorted by `(col, row)`.
    Sparse(Vec<(usize, usize, f64)>),
}

/// `n` observations of `p` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationMatrix {
    n: usize,
    p: usize,
    storage: Storage,
    variable_names: Option<Vec<String>>,
}

impl ObservationMatrix {
    /// One inner vector per observation.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let p = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != p) {
            return Err(Error::input(format!(
                "observation {i} has {} values, expected {p}",
                r.len()
            )));
        }
        let mut values = vec![0.0; n * p];
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                values[j * n + i] = x;
            }
        }
        Self::dense(n, p, values)
    }

    /// One inner vector per variable.
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let p = columns.len();
        let n = columns.first().map_or(0, Vec::len);
        if let Some((j, c)) = columns.iter().enumerate().find(|(_, c)| c.len() != n) {
            return Err(Error::input(format!(
                "variable {j} has {} observations, expected {n}",
                c.len()
            )));
        }
        Self::dense(n, p, columns.concat())
    }

    fn dense(n: usize, p: usize, values: Vec<f64>) -> Result<Self> {
        if p == 0 {
            return Err(Error::input("observation matrix has no variables"));
        }
        if let Some(x) = values.iter().find(|x| !x.is_finite()) {
            return Err(Error::input(format!("non-finite observation value {x}")));
        }
        Ok(ObservationMatrix {
            n,
            p,
            storage: Storage::Dense(values),
            variable_names: None,
        })
    }

    /// Sparse matrix from zero-based `(row, col, value)` triplets.
    pub fn from_triplets(n: usize, p: usize, triplets: Vec<(usize, usize, f64)>) -> Result<Self> {
        if p == 0 {
            return Err(Error::input("observation matrix has no variables"));
        }
        let mut triplets = triplets;
        for &(r, c, x) in &triplets {
            if r >= n || c >= p {
                return Err(Error::input(format!(
                    "triplet ({r}, {c}) outside a {n}x{p} matrix"
                )));
            }
            if !x.is_finite() {
                return Err(Error::input(format!("non-finite value at ({r}, {c})")));
            }
        }
        triplets.sort_unstable_by_key(|&(r, c, _)| (c, r));
        if let Some(w) = triplets
            .windows(2)
            .find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1))
        {
            return Err(Error::input(format!(
                "duplicate triplet at ({}, {})",
                w[0].0, w[0].1
            )));
        }
        Ok(ObservationMatrix {
            n,
            p,
            storage: Storage::Sparse(triplets),
            variable_names: None,
        })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.p {
            return Err(Error::input(format!(
                "{} variable names for {} variables",
                names.len(),
                self.p
            )));
        }
        self.variable_names = Some(names);
        Ok(self)
    }

    pub fn n_obs(&self) -> usize {
        self.n
    }

    pub fn n_vars(&self) -> usize {
        self.p
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse(_))
    }

    pub fn variable_names(&self) -> Option<&[String]> {
        self.variable_names.as_deref()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        match &self.storage {
            Storage::Dense(v) => v[col * self.n + row],
            Storage::Sparse(t) => t
                .binary_search_by_key(&(col, row), |&(r, c, _)| (c, r))
                .map_or(0.0, |i| t[i].2),
        }
    }

    /// All columns materialised densely, column-major.
    pub fn to_dense_columns(&self) -> Vec<f64> {
        match &self.storage {
            Storage::Dense(v) => v.clone(),
            Storage::Sparse(t) => {
                let mut v = vec![0.0; self.n * self.p];
                for &(r, c, x) in t {
                    v[c * self.n + r] = x;
                }
                v
            }
        }
    }

    /// Dense copy of this matrix.
    pub fn to_dense(&self) -> ObservationMatrix {
        ObservationMatrix {
            n: self.n,
            p: self.p,
            storage: Storage::Dense(self.to_dense_columns()),
            variable_names: self.variable_names.clone(),
        }
    }

    /// Concatenates matrices with the same number of observations side by side.
    pub fn hstack(blocks: &[ObservationMatrix]) -> Result<Self> {
        let n = blocks
            .first()
            .ok_or_else(|| Error::input("no blocks to concatenate"))?
            .n;
        if blocks.iter().any(|b| b.n != n) {
            return Err(Error::input("blocks differ in observation count"));
        }
        let p = blocks.iter().map(|b| b.p).sum();
        let mut values = Vec::with_capacity(n * p);
        for b in blocks {
            values.extend(b.to_dense_columns());
        }
        Self::dense(n, p, values)
    }
}

/// Symmetric `p x p` matrix of similarities in [0, 1] with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    p: usize,
    values: Vec<f64>,
    names: Option<Vec<String>>,
}

impl SimilarityMatrix {
    /// Validates a row-major square matrix. The diagonal is overwritten with 1.
    pub fn from_dense(p: usize, mut values: Vec<f64>) -> Result<Self> {
        if p == 0 {
            return Err(Error::input("similarity matrix is empty"));
        }
        if values.len() != p * p {
            return Err(Error::input(format!(
                "similarity matrix has {} entries, expected {}x{}",
                values.len(),
                p,
                p
            )));
        }
        for i in 0..p {
            for j in (i + 1)..p {
                let a = values[i * p + j];
                let b = values[j * p + i];
                for x in [a, b] {
                    if !(0.0..=1.0).contains(&x) {
                        return Err(Error::input(format!(
                            "similarity ({i}, {j}) = {x} outside [0, 1]"
                        )));
                    }
                }
                if (a - b).abs() > SYMMETRY_TOLERANCE {
                    return Err(Error::input(format!(
                        "similarity matrix is not symmetric at ({i}, {j}): {a} vs {b}"
                    )));
                }
            }
            values[i * p + i] = 1.0;
        }
        Ok(SimilarityMatrix {
            p,
            values,
            names: None,
        })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.p {
            return Err(Error::input(format!(
                "{} names for a {}x{} similarity matrix",
                names.len(),
                self.p,
                self.p
            )));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.p + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.p..(i + 1) * self.p]
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Largest off-diagonal entry; 0 when `p == 1`.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.p {
            for j in (i + 1)..self.p {
                best = best.max(self.get(i, j));
            }
        }
        best
    }
}

/// Rows of the output computed per parallel task.
const ROW_BLOCK: usize = 16;

/// Centred column scaled to unit norm, or `None` for a constant column.
fn unit_centred(column: &[f64]) -> Option<Vec<f64>> {
    let first = column[0];
    if column.iter().all(|&x| x == first) {
        return None;
    }
    let mean = column.iter().sum::<f64>() / column.len() as f64;
    let centred: Vec<f64> = column.iter().map(|&x| x - mean).collect();
    let norm = centred.iter().map(|d| d * d).sum::<f64>().sqrt();
    if norm == 0.0 {
        return None;
    }
    Some(centred.into_iter().map(|d| d / norm).collect())
}

/// `|pearson(x_i, x_j)|` for every variable pair.
///
/// Columns with zero variance have similarity 0 with every other column.
/// Sparse inputs are materialised column by column and go through the same
/// kernel as dense ones, so both paths agree exactly.
pub fn pearson_abs_matrix(obs: &ObservationMatrix) -> Result<SimilarityMatrix> {
    let n = obs.n_obs();
    let p = obs.n_vars();
    if n < 2 {
        return Err(Error::input(format!(
            "correlation needs at least 2 observations, got {n}"
        )));
    }
    let columns = obs.to_dense_columns();
    let units: Vec<Option<Vec<f64>>> = columns.par_chunks(n).map(unit_centred).collect();

    let mut values = vec![0.0; p * p];
    values
        .par_chunks_mut(p * ROW_BLOCK)
        .enumerate()
        .for_each(|(block, rows)| {
            for (offset, row) in rows.chunks_mut(p).enumerate() {
                let i = block * ROW_BLOCK + offset;
                row[i] = 1.0;
                let Some(zi) = &units[i] else { continue };
                for j in (i + 1)..p {
                    if let Some(zj) = &units[j] {
                        let dot: f64 = zi.iter().zip(zj).map(|(a, b)| a * b).sum();
                        row[j] = dot.abs().min(1.0);
                    }
                }
            }
        });
    for i in 0..p {
        for j in (i + 1)..p {
            values[j * p + i] = values[i * p + j];
        }
    }
    let mut sim = SimilarityMatrix {
        p,
        values,
        names: None,
    };
    sim.names = obs.variable_names().map(<[String]>::to_vec);
    Ok(sim)
}

/// Similarity graph: an edge for every pair with similarity above `threshold`.
pub fn build_graph(sim: &SimilarityMatrix, threshold: f64) -> Result<WeightedGraph> {
    if !(0.0..1.0).contains(&threshold) {
        return Err(Error::param(format!(
            "threshold must lie in [0, 1), got {threshold}"
        )));
    }
    let p = sim.size();
    let edges: Vec<Edge> = (0..p)
        .into_par_iter()
        .flat_map_iter(|i| {
            let row = sim.row(i);
            ((i + 1)..p)
                .filter(move |&j| row[j] > threshold)
                .map(move |j| Edge {
                    u: i,
                    v: j,
                    weight: row[j],
                })
        })
        .collect();
    let mut graph = WeightedGraph::from_canonical_unchecked(p, edges);
    graph.set_names(sim.names().map(<[String]>::to_vec));
    Ok(graph)
}
