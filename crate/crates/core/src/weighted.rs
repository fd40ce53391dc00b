//! Real-weighted symmetric graphs with a marked input and output vertex.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    pub size: usize,
    pub input: usize,
    pub output: usize,
    #[serde(default)]
    pub labels: Vec<String>,
    /// Dense, symmetric, zero diagonal.
    pub weights: Vec<Vec<f64>>,
}

impl WeightedGraph {
    pub fn new(size: usize, input: usize, output: usize) -> Self {
        WeightedGraph { size, input, output, labels: Vec::new(), weights: vec![vec![0.0; size]; size] }
    }

    /// A path `0 - 1 - ... - n` with the given couplings, ends marked.
    pub fn path(couplings: &[f64]) -> Self {
        let n = couplings.len() + 1;
        let mut g = WeightedGraph::new(n, 0, n - 1);
        for (i, &w) in couplings.iter().enumerate() {
            g.set_weight(i, i + 1, w);
        }
        g
    }

    pub fn set_weight(&mut self, i: usize, j: usize, w: f64) {
        assert_ne!(i, j, "no self loops in a weighted graph");
        self.weights[i][j] = w;
        self.weights[j][i] = w;
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i][j]
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.size, self.size, |i, j| self.weights[i][j])
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size)
            .all(|i| self.weights[i][i] == 0.0 && (0..i).all(|j| self.weights[i][j] == self.weights[j][i] && self.weights[i][j] >= 0.0))
    }

    /// Max absolute row sum; bounds the spectral radius.
    pub fn norm_bound(&self) -> f64 {
        self.weights.iter().map(|r| r.iter().map(|w| w.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// Relabel so that old vertex `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut g = WeightedGraph::new(self.size, perm[self.input], perm[self.output]);
        for i in 0..self.size {
            for j in 0..self.size {
                g.weights[perm[i]][perm[j]] = self.weights[i][j];
            }
        }
        if !self.labels.is_empty() {
            g.labels = vec![String::new(); self.size];
            for (i, l) in self.labels.iter().enumerate() {
                g.labels[perm[i]] = l.clone();
            }
        }
        g
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(move |&j| self.weights[v][j] != 0.0)
    }

    /// Unweighted BFS distances from `src`.
    pub fn bfs_distances(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.size];
        dist[src] = Some(0);
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for w in self.neighbours(u) {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn eccentricity(&self, v: usize) -> Option<usize> {
        self.bfs_distances(v).into_iter().try_fold(0, |m, d| d.map(|d| m.max(d)))
    }
}
