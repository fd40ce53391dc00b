//! Equitable distance partitions.
//!
//! A [`PartitionedGraph`] groups the vertices of a simple graph into nodes.
//! Every vertex of node `u` has exactly `du` neighbours in node `v` and every
//! vertex of `v` has `dv` neighbours in `u`, so `N_u * du = N_v * dv` must hold
//! on every edge. The quotient over uniform superpositions is a weighted path-
//! like graph with couplings `sqrt(du * dv)`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::arith::BigInt;
use crate::explicit::ExplicitGraph;
use crate::weighted::WeightedGraph;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("invalid partitioned graph: {0}")]
    InvalidGraph(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("node `{0}` is not reachable from the input")]
    Disconnected(String),
    #[error("malformed graph file: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub occupancy: u64,
}

/// `du` is the number of neighbours each vertex of `u` has in `v`, and vice versa.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: String,
    pub v: String,
    pub du: u64,
    pub dv: u64,
}

impl Edge {
    pub fn new(u: impl Into<String>, v: impl Into<String>, du: u64, dv: u64) -> Self {
        Edge { u: u.into(), v: v.into(), du, dv }
    }

    /// Degree on the side of `node`, and on the far side.
    pub fn degrees_from(&self, node: &str) -> Option<(u64, u64)> {
        if self.u == node {
            Some((self.du, self.dv))
        } else if self.v == node {
            Some((self.dv, self.du))
        } else {
            None
        }
    }

    pub fn other(&self, node: &str) -> Option<&str> {
        if self.u == node {
            Some(&self.v)
        } else if self.v == node {
            Some(&self.u)
        } else {
            None
        }
    }

    pub fn coupling_square(&self) -> u64 {
        self.du * self.dv
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionedGraph {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<u64>,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    pub input: String,
    pub output: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    DuplicateNode { id: String },
    ZeroOccupancy { id: String },
    UnknownEndpoint { id: String },
    SelfLoop { id: String },
    DuplicateEdge { u: String, v: String },
    ZeroDegree { u: String, v: String },
    Inconsistent { u: String, v: String, lhs: u64, rhs: u64 },
    DegreeExceedsOccupancy { from: String, to: String, degree: u64, occupancy: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateNode { id } => write!(f, "node `{id}` declared twice"),
            Violation::ZeroOccupancy { id } => write!(f, "node `{id}` has zero occupancy"),
            Violation::UnknownEndpoint { id } => write!(f, "`{id}` is not a declared node"),
            Violation::SelfLoop { id } => write!(f, "edge joins node `{id}` to itself"),
            Violation::DuplicateEdge { u, v } => write!(f, "more than one edge between `{u}` and `{v}`"),
            Violation::ZeroDegree { u, v } => write!(f, "edge `{u}`-`{v}` has a zero degree"),
            Violation::Inconsistent { u, v, lhs, rhs } => {
                write!(f, "edge `{u}`-`{v}`: N_u*d_u = {lhs} but N_v*d_v = {rhs}")
            }
            Violation::DegreeExceedsOccupancy { from, to, degree, occupancy } => {
                write!(f, "vertices of `{from}` need {degree} neighbours in `{to}` which only holds {occupancy}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub input_single: bool,
    pub output_single: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Valid, and both ends are single vertices as transfer certification needs.
    pub fn is_transfer_ready(&self) -> bool {
        self.is_valid() && self.input_single && self.output_single
    }
}

impl PartitionedGraph {
    pub fn new(nodes: Vec<Node>, edges: Vec<Edge>, input: impl Into<String>, output: impl Into<String>) -> Self {
        PartitionedGraph { delta: None, nodes, edges, input: input.into(), output: output.into() }
    }

    pub fn with_delta(mut self, delta: u64) -> Self {
        self.delta = Some(delta);
        self
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))
    }

    /// Pretty JSON. Deterministic, so it doubles as the byte-level identity of a graph.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("graph serialises");
        s.push('\n');
        s
    }

    pub fn content_hash(&self) -> String {
        let compact = serde_json::to_vec(self).expect("graph serialises");
        Sha256::digest(&compact).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn occupancy(&self, id: &str) -> Option<u64> {
        self.node(id).map(|n| n.occupancy)
    }

    pub fn incident_edges<'a>(&'a self, id: &'a str) -> impl Iterator<Item = (usize, &'a Edge)> + 'a {
        self.edges.iter().enumerate().filter(move |(_, e)| e.u == id || e.v == id)
    }

    pub fn vertex_count(&self) -> BigInt {
        self.nodes.iter().fold(BigInt::zero(), |acc, n| acc + n.occupancy)
    }

    /// Number of edges of the underlying simple graph, `sum N_u * du`.
    pub fn explicit_edge_count(&self) -> BigInt {
        let occ: HashMap<&str, u64> = self.nodes.iter().map(|n| (n.id.as_str(), n.occupancy)).collect();
        self.edges.iter().fold(BigInt::zero(), |acc, e| acc + BigInt::from(occ.get(e.u.as_str()).copied().unwrap_or(0)) * e.du)
    }

    /// Largest vertex degree in the underlying graph.
    pub fn max_degree(&self) -> u64 {
        let mut deg: HashMap<&str, u64> = HashMap::new();
        for e in &self.edges {
            *deg.entry(&e.u).or_default() += e.du;
            *deg.entry(&e.v).or_default() += e.dv;
        }
        deg.values().copied().max().unwrap_or(0)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut occ: HashMap<&str, u64> = HashMap::new();
        for n in &self.nodes {
            if occ.insert(&n.id, n.occupancy).is_some() {
                violations.push(Violation::DuplicateNode { id: n.id.clone() });
            }
            if n.occupancy == 0 {
                violations.push(Violation::ZeroOccupancy { id: n.id.clone() });
            }
        }
        for id in [&self.input, &self.output] {
            if !occ.contains_key(id.as_str()) {
                violations.push(Violation::UnknownEndpoint { id: id.clone() });
            }
        }

        let mut seen_pairs = BTreeSet::new();
        for e in &self.edges {
            let (Some(&nu), Some(&nv)) = (occ.get(e.u.as_str()), occ.get(e.v.as_str())) else {
                for id in [&e.u, &e.v] {
                    if !occ.contains_key(id.as_str()) {
                        violations.push(Violation::UnknownEndpoint { id: id.clone() });
                    }
                }
                continue;
            };
            if e.u == e.v {
                violations.push(Violation::SelfLoop { id: e.u.clone() });
                continue;
            }
            let key = if e.u < e.v { (e.u.clone(), e.v.clone()) } else { (e.v.clone(), e.u.clone()) };
            if !seen_pairs.insert(key) {
                violations.push(Violation::DuplicateEdge { u: e.u.clone(), v: e.v.clone() });
            }
            if e.du == 0 || e.dv == 0 {
                violations.push(Violation::ZeroDegree { u: e.u.clone(), v: e.v.clone() });
            }
            let (lhs, rhs) = (nu as u128 * e.du as u128, nv as u128 * e.dv as u128);
            if lhs != rhs {
                violations.push(Violation::Inconsistent { u: e.u.clone(), v: e.v.clone(), lhs: lhs as u64, rhs: rhs as u64 });
            }
            if e.du > nv {
                violations.push(Violation::DegreeExceedsOccupancy { from: e.u.clone(), to: e.v.clone(), degree: e.du, occupancy: nv });
            }
            if e.dv > nu {
                violations.push(Violation::DegreeExceedsOccupancy { from: e.v.clone(), to: e.u.clone(), degree: e.dv, occupancy: nu });
            }
        }

        ValidationReport {
            violations,
            input_single: occ.get(self.input.as_str()) == Some(&1),
            output_single: occ.get(self.output.as_str()) == Some(&1),
        }
    }

    pub(crate) fn ensure_valid(&self) -> Result<(), GraphError> {
        let report = self.validate();
        match report.violations.first() {
            None => Ok(()),
            Some(v) => Err(GraphError::InvalidGraph(format!(
                "{v}{}",
                if report.violations.len() > 1 { format!(" (and {} more)", report.violations.len() - 1) } else { String::new() }
            ))),
        }
    }

    /// `(u, v, du * dv)` per edge, in node-index order. Exact squared couplings.
    pub fn coupling_squares(&self) -> Vec<(usize, usize, u64)> {
        self.edges
            .iter()
            .map(|e| (self.node_index(&e.u).expect("validated"), self.node_index(&e.v).expect("validated"), e.coupling_square()))
            .collect()
    }

    pub fn quotient(&self) -> Result<WeightedGraph, GraphError> {
        self.ensure_valid()?;
        let mut q = WeightedGraph::new(
            self.nodes.len(),
            self.node_index(&self.input).expect("validated"),
            self.node_index(&self.output).expect("validated"),
        );
        q.labels = self.nodes.iter().map(|n| n.id.clone()).collect();
        for (u, v, sq) in self.coupling_squares() {
            q.set_weight(u, v, (sq as f64).sqrt());
        }
        Ok(q)
    }

    /// Canonical realisation: vertex `i` of `u` meets the `du` consecutive
    /// vertices `(i*du + k) mod N_v` of `v`.
    pub fn expand(&self) -> Result<ExplicitGraph, GraphError> {
        self.ensure_valid()?;
        let mut offsets = Vec::with_capacity(self.nodes.len());
        let mut total: u64 = 0;
        for n in &self.nodes {
            offsets.push(total);
            total = total.checked_add(n.occupancy).ok_or_else(|| GraphError::InvalidGraph("vertex count overflows".into()))?;
        }
        let total = usize::try_from(total).map_err(|_| GraphError::InvalidGraph("too many vertices".into()))?;
        let mut membership = vec![0usize; total];
        for (k, n) in self.nodes.iter().enumerate() {
            for i in 0..n.occupancy {
                membership[(offsets[k] + i) as usize] = k;
            }
        }

        let mut edges = Vec::new();
        for e in &self.edges {
            let ui = self.node_index(&e.u).expect("validated");
            let vi = self.node_index(&e.v).expect("validated");
            let nv = self.nodes[vi].occupancy;
            for i in 0..self.nodes[ui].occupancy {
                for k in 0..e.du {
                    let j = (i * e.du + k) % nv;
                    let a = (offsets[ui] + i) as usize;
                    let b = (offsets[vi] + j) as usize;
                    edges.push((a.min(b), a.max(b)));
                }
            }
        }
        edges.sort_unstable();

        let input = offsets[self.node_index(&self.input).expect("validated")] as usize;
        let output = offsets[self.node_index(&self.output).expect("validated")] as usize;
        Ok(ExplicitGraph { n: total, edges, input, output, membership, node_ids: self.nodes.iter().map(|n| n.id.clone()).collect() })
    }

    /// BFS distance of every node from the input node, over the node graph.
    pub fn node_distances(&self) -> Result<NodeDistances, GraphError> {
        if self.node_index(&self.input).is_none() {
            return Err(GraphError::UnknownNode(self.input.clone()));
        }
        let adj = self.adjacency();
        let mut dist: BTreeMap<String, u64> = BTreeMap::new();
        dist.insert(self.input.clone(), 0);
        let mut queue = VecDeque::from([self.input.as_str()]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u];
            for &w in adj.get(u).into_iter().flatten() {
                if !dist.contains_key(w) {
                    dist.insert(w.to_string(), du + 1);
                    queue.push_back(w);
                }
            }
        }
        if let Some(n) = self.nodes.iter().find(|n| !dist.contains_key(&n.id)) {
            return Err(GraphError::Disconnected(n.id.clone()));
        }
        let transfer_distance = dist[&self.output];
        Ok(NodeDistances { distances: dist, transfer_distance })
    }

    pub(crate) fn adjacency(&self) -> HashMap<&str, Vec<&str>> {
        let mut adj: HashMap<&str, Vec<&str>> = HashMap::new();
        for e in &self.edges {
            adj.entry(&e.u).or_default().push(&e.v);
            adj.entry(&e.v).or_default().push(&e.u);
        }
        adj
    }

    /// Two-colouring of the node graph with the input on side 0, if one exists.
    pub fn bipartite_labels(&self) -> Option<BTreeMap<String, u8>> {
        let adj = self.adjacency();
        let mut label: BTreeMap<String, u8> = BTreeMap::new();
        for start in std::iter::once(self.input.as_str()).chain(self.nodes.iter().map(|n| n.id.as_str())) {
            if label.contains_key(start) {
                continue;
            }
            label.insert(start.to_string(), 0);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let lu = label[u];
                for &w in adj.get(u).into_iter().flatten() {
                    match label.get(w) {
                        Some(&lw) if lw == lu => return None,
                        Some(_) => {}
                        None => {
                            label.insert(w.to_string(), 1 - lu);
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        Some(label)
    }

    /// Nodes on the odd side of the bipartition (those the Δ-doubling lift scales).
    pub fn odd_side(&self) -> Option<BTreeSet<String>> {
        self.bipartite_labels().map(|l| l.into_iter().filter(|(_, s)| *s == 1).map(|(id, _)| id).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDistances {
    pub distances: BTreeMap<String, u64>,
    /// Distance of the output node, `D`.
    pub transfer_distance: u64,
}

/// Nodes whose vertices sit at a different BFS distance in `explicit` than
/// the node itself does in `g`. Empty for a genuine distance partition.
pub fn distance_mismatches(g: &PartitionedGraph, explicit: &ExplicitGraph) -> Result<Vec<String>, GraphError> {
    let nd = g.node_distances()?;
    let dist = explicit.bfs_distances(explicit.input);
    let mut bad = BTreeSet::new();
    for (v, &k) in explicit.membership.iter().enumerate() {
        let id = &explicit.node_ids[k];
        if dist[v] != Some(nd.distances[id] as usize) {
            bad.insert(id.clone());
        }
    }
    Ok(bad.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_node(n1: u64, d1: u64, n2: u64, d2: u64) -> PartitionedGraph {
        PartitionedGraph::new(
            vec![Node { id: "a".into(), occupancy: n1 }, Node { id: "b".into(), occupancy: n2 }],
            vec![Edge::new("a", "b", d1, d2)],
            "a",
            "b",
        )
    }

    fn chain(occ: &[u64], degs: &[(u64, u64)]) -> PartitionedGraph {
        let nodes = occ.iter().enumerate().map(|(i, &o)| Node { id: i.to_string(), occupancy: o }).collect();
        let edges = degs.iter().enumerate().map(|(i, &(a, b))| Edge::new(i.to_string(), (i + 1).to_string(), a, b)).collect();
        PartitionedGraph::new(nodes, edges, "0", (occ.len() - 1).to_string())
    }

    #[test]
    fn d6_chain_is_valid() {
        let g = chain(&[1, 6, 15, 20, 15, 6, 1], &[(6, 1), (5, 2), (4, 3), (3, 4), (2, 5), (1, 6)]);
        let r = g.validate();
        assert!(r.is_valid(), "{:?}", r.violations);
        assert!(r.is_transfer_ready());
        assert_eq!(g.vertex_count(), BigInt::from(64));
    }

    #[test]
    fn single_edge_validation() {
        assert!(two_node(2, 3, 3, 2).validate().is_valid());
        let r = two_node(4, 1, 3, 1).validate();
        assert!(matches!(r.violations.as_slice(), [Violation::Inconsistent { lhs: 4, rhs: 3, .. }]));
        assert!(!r.input_single);
        let r = two_node(1, 4, 2, 2).validate();
        assert!(r.violations.iter().any(|v| matches!(v, Violation::DegreeExceedsOccupancy { degree: 4, occupancy: 2, .. })));
    }

    #[test]
    fn structural_violations() {
        let mut g = two_node(1, 1, 1, 1);
        g.edges.push(Edge::new("b", "a", 1, 1));
        g.edges.push(Edge::new("a", "a", 1, 1));
        g.edges.push(Edge::new("a", "zz", 1, 1));
        let r = g.validate();
        assert!(r.violations.iter().any(|v| matches!(v, Violation::DuplicateEdge { .. })));
        assert!(r.violations.iter().any(|v| matches!(v, Violation::SelfLoop { .. })));
        assert!(r.violations.iter().any(|v| matches!(v, Violation::UnknownEndpoint { id } if id == "zz")));
        assert!(g.quotient().is_err());
        assert!(g.expand().is_err());
    }

    #[test]
    fn quotient_of_unit_edge() {
        let q = two_node(1, 1, 1, 1).quotient().unwrap();
        assert_eq!(q.size, 2);
        assert_eq!(q.weight(0, 1), 1.0);
    }

    #[test]
    fn reduced_d6_chain_count() {
        let g = chain(&[1, 6, 15, 5, 15, 6, 1], &[(6, 1), (5, 2), (2, 6), (6, 2), (2, 5), (1, 6)]);
        assert!(g.validate().is_valid());
        assert_eq!(g.vertex_count(), BigInt::from(49));
    }

    #[test]
    fn expand_star_and_k22() {
        let star = two_node(1, 4, 4, 1).expand().unwrap();
        assert_eq!(star.n, 5);
        assert_eq!(star.edges, vec![(0, 1), (0, 2), (0, 3), (0, 4)]);

        let k22 = two_node(2, 2, 2, 2).expand().unwrap();
        assert_eq!(k22.edges, vec![(0, 2), (0, 3), (1, 2), (1, 3)]);
    }

    #[test]
    fn expansion_is_biregular_per_edge() {
        // awkward but valid: 6 vertices of degree 2 onto 4 of degree 3
        let g = two_node(6, 2, 4, 3);
        let x = g.expand().unwrap();
        let mut deg = vec![0; x.n];
        for &(a, b) in &x.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        assert_eq!(&deg[..6], &[2; 6]);
        assert_eq!(&deg[6..], &[3; 4]);
        let mut dedup = x.edges.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), x.edges.len());
    }

    #[test]
    fn distances_on_chain() {
        let g = chain(&[1, 3, 3, 1], &[(3, 1), (2, 2), (1, 3)]);
        let d = g.node_distances().unwrap();
        assert_eq!(d.transfer_distance, 3);
        assert_eq!(d.distances.values().copied().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        let x = g.expand().unwrap();
        assert!(distance_mismatches(&g, &x).unwrap().is_empty());
    }

    #[test]
    fn disconnected_node_is_reported() {
        let mut g = two_node(1, 1, 1, 1);
        g.nodes.push(Node { id: "lost".into(), occupancy: 3 });
        assert_eq!(g.node_distances(), Err(GraphError::Disconnected("lost".into())));
    }

    #[test]
    fn json_shape_is_stable() {
        let g = two_node(1, 1, 1, 1).with_delta(4);
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(
            text,
            r#"{"delta":4,"nodes":[{"id":"a","occupancy":1},{"id":"b","occupancy":1}],"edges":[{"u":"a","v":"b","du":1,"dv":1}],"input":"a","output":"b"}"#
        );
        let back = PartitionedGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
        let no_delta = PartitionedGraph::from_json(r#"{"nodes":[],"edges":[],"input":"a","output":"b"}"#).unwrap();
        assert_eq!(no_delta.delta, None);
    }

    #[test]
    fn bipartite_labelling() {
        let g = chain(&[1, 1, 1], &[(1, 1), (1, 1)]);
        let odd = g.odd_side().unwrap();
        assert_eq!(odd.into_iter().collect::<Vec<_>>(), vec!["1".to_string()]);
        let mut tri = g.clone();
        tri.edges.push(Edge::new("0", "2", 1, 1));
        assert!(tri.bipartite_labels().is_none());
    }
}
