//! Explicit simple graphs, plus the plain edge-list and DOT formats.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::partition::GraphError;
use crate::weighted::WeightedGraph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitGraph {
    pub n: usize,
    /// Sorted, `u < v`, no duplicates.
    pub edges: Vec<(usize, usize)>,
    pub input: usize,
    pub output: usize,
    /// Node index of every vertex.
    pub membership: Vec<usize>,
    pub node_ids: Vec<String>,
}

impl ExplicitGraph {
    /// Builds a graph in which every vertex is its own node.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>, input: usize, output: usize) -> Result<Self, GraphError> {
        let mut list: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::Parse(format!("self loop at vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(GraphError::Parse(format!("edge ({a}, {b}) out of range for {n} vertices")));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        if list.windows(2).any(|w| w[0] == w[1]) {
            return Err(GraphError::Parse("duplicate edge".into()));
        }
        if input >= n || output >= n {
            return Err(GraphError::Parse("input/output out of range".into()));
        }
        Ok(ExplicitGraph {
            n,
            edges: list,
            input,
            output,
            membership: (0..n).collect(),
            node_ids: (0..n).map(|v| format!("v{v}")).collect(),
        })
    }

    /// `N <count> IN <idx> OUT <idx>` followed by one `u v` line per edge.
    pub fn to_edges_format(&self) -> String {
        let mut s = format!("N {} IN {} OUT {}\n", self.n, self.input, self.output);
        for &(u, v) in &self.edges {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    pub fn parse_edges_format(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| GraphError::Parse("empty edge list".into()))?;
        let tok: Vec<&str> = header.split_whitespace().collect();
        let field = |i: usize, name: &str| -> Result<usize, GraphError> {
            if tok.get(i) != Some(&name) {
                return Err(GraphError::Parse(format!("expected `{name}` in header `{header}`")));
            }
            tok.get(i + 1)
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| GraphError::Parse(format!("bad value for `{name}` in header `{header}`")))
        };
        let (n, input, output) = (field(0, "N")?, field(2, "IN")?, field(4, "OUT")?);
        let mut edges = Vec::new();
        for line in lines {
            let mut it = line.split_whitespace().map(str::parse::<usize>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(a)), Some(Ok(b)), None) => edges.push((a, b)),
                _ => return Err(GraphError::Parse(format!("bad edge line `{line}`"))),
            }
        }
        Self::from_edges(n, edges, input, output)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for v in 0..self.n {
            let shape = if v == self.input || v == self.output { "doublecircle" } else { "circle" };
            let _ = writeln!(s, "  {v} [shape={shape}, group=\"{}\"];", self.node_ids[self.membership[v]]);
        }
        for &(u, v) in &self.edges {
            let _ = writeln!(s, "  {u} -- {v};");
        }
        s.push_str("}\n");
        s
    }

    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency_lists().iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn bfs_distances(&self, src: usize) -> Vec<Option<usize>> {
        let adj = self.adjacency_lists();
        let mut dist = vec![None; self.n];
        dist[src] = Some(0);
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn to_weighted(&self) -> WeightedGraph {
        let mut g = WeightedGraph::new(self.n, self.input, self.output);
        for &(u, v) in &self.edges {
            g.set_weight(u, v, 1.0);
        }
        g
    }

    /// Cartesian product; vertex `(i, j)` gets index `i * other.n + j`.
    pub fn cartesian_product(&self, other: &ExplicitGraph) -> ExplicitGraph {
        let m = other.n;
        let mut edges = Vec::new();
        for i in 0..self.n {
            for &(a, b) in &other.edges {
                edges.push((i * m + a, i * m + b));
            }
        }
        for &(a, b) in &self.edges {
            for j in 0..m {
                edges.push((a * m + j, b * m + j));
            }
        }
        let mut g = ExplicitGraph::from_edges(self.n * m, edges, self.input * m + other.input, self.output * m + other.output)
            .expect("product of simple graphs is simple");
        g.node_ids = (0..g.n).map(|v| format!("({},{})", v / m, v % m)).collect();
        g
    }
}
