//! Constructors for the named graph families.

mod fig6;

use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::multinomial;
use crate::explicit::ExplicitGraph;
use crate::partition::{Edge, Node, PartitionedGraph};
use crate::weighted::WeightedGraph;

pub use fig6::{fig6_grid, infer_degrees};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("occupancies {n1} and {n2} with squared coupling {jsq} give non-integral degrees")]
    NonIntegralDegrees { n1: u64, n2: u64, jsq: u64 },
    #[error("{family} does not accept parameter {param:?}")]
    BadParameter { family: Family, param: Option<u64> },
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    P2Chain,
    P3Grid,
    StandardChain,
    Coutinho,
    Fig6Grid,
    Stevanovic,
}

impl Family {
    pub const ALL: [Family; 6] =
        [Family::P2Chain, Family::P3Grid, Family::StandardChain, Family::Coutinho, Family::Fig6Grid, Family::Stevanovic];

    pub fn name(self) -> &'static str {
        match self {
            Family::P2Chain => "p2-chain",
            Family::P3Grid => "p3-grid",
            Family::StandardChain => "standard-chain",
            Family::Coutinho => "coutinho",
            Family::Fig6Grid => "fig6-grid",
            Family::Stevanovic => "stevanovic",
        }
    }

    fn takes_parameter(self) -> bool {
        !matches!(self, Family::Coutinho | Family::Fig6Grid)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| CatalogError::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    /// Distance for the chains, half the distance for `p3-grid`, the pair count for `stevanovic`.
    pub param: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Built {
    Partitioned(PartitionedGraph),
    Weighted(WeightedGraph),
}

impl FamilySpec {
    pub fn new(family: Family, param: Option<u64>) -> Self {
        FamilySpec { family, param }
    }

    pub fn build(&self) -> Result<Built, CatalogError> {
        let bad = || CatalogError::BadParameter { family: self.family, param: self.param };
        let p = match (self.family.takes_parameter(), self.param) {
            (true, Some(p)) if p >= 1 => p,
            (false, None) => 0,
            _ => return Err(bad()),
        };
        Ok(match self.family {
            Family::P2Chain if p <= 62 => Built::Partitioned(p2_hypercube_chain(p)),
            Family::P3Grid if p <= 40 => Built::Partitioned(p3_grid(p)),
            Family::StandardChain => Built::Weighted(standard_chain(p)),
            Family::Stevanovic => Built::Partitioned(stevanovic(p)),
            Family::Coutinho => Built::Partitioned(coutinho_graph()),
            Family::Fig6Grid => Built::Partitioned(fig6_grid()),
            _ => return Err(bad()),
        })
    }
}

fn chain_nodes(occ: &[u64]) -> Vec<Node> {
    occ.iter().enumerate().map(|(i, &o)| Node { id: i.to_string(), occupancy: o }).collect()
}

/// Distance partition of the `d`-cube: occupancies `C(d, n)`.
pub fn p2_hypercube_chain(d: u64) -> PartitionedGraph {
    assert!(d >= 1);
    let occ: Vec<u64> = (0..=d).map(|n| multinomial(d, &[n]).expect("n <= d").to_u64().expect("fits for d <= 62")).collect();
    let edges = (0..d).map(|n| Edge::new(n.to_string(), (n + 1).to_string(), d - n, n + 1)).collect();
    PartitionedGraph::new(chain_nodes(&occ), edges, "0", d.to_string()).with_delta(4)
}

pub(crate) fn grid_id(n0: u64, n2: u64) -> String {
    format!("({n0},{n2})")
}

/// Half-lattice partition of the `h`-fold power of P3, transfer distance `2h`.
///
/// Node `(n0, n2)` holds the vertices with `n0` coordinates at the input end
/// and `n2` at the output end.
pub fn p3_grid(h: u64) -> PartitionedGraph {
    assert!(h >= 1);
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for n0 in 0..=h {
        for n2 in 0..=h - n0 {
            let occupancy = multinomial(h, &[n0, n2]).expect("n0 + n2 <= h").to_u64().expect("fits for h <= 40");
            nodes.push(Node { id: grid_id(n0, n2), occupancy });
            let n1 = h - n0 - n2;
            if n0 > 0 {
                edges.push(Edge::new(grid_id(n0, n2), grid_id(n0 - 1, n2), n0, n1 + 1));
            }
            if n1 > 0 {
                edges.push(Edge::new(grid_id(n0, n2), grid_id(n0, n2 + 1), n1, n2 + 1));
            }
        }
    }
    PartitionedGraph::new(nodes, edges, grid_id(h, 0), grid_id(0, h)).with_delta(2)
}

/// Path on `d + 1` vertices with couplings `sqrt((n + 1)(d - n))`.
pub fn standard_chain(d: u64) -> WeightedGraph {
    assert!(d >= 1);
    let w: Vec<f64> = (0..d).map(|n| (((n + 1) * (d - n)) as f64).sqrt()).collect();
    WeightedGraph::path(&w)
}

/// The 13-vertex distance-4 transfer graph: the 4-cube chain with its middle
/// node split into parts of 2 and 1 vertices.
pub fn coutinho_graph() -> PartitionedGraph {
    let nodes = [("0", 1), ("1", 4), ("2#0", 2), ("2#1", 1), ("3", 4), ("4", 1)]
        .into_iter()
        .map(|(id, occupancy)| Node { id: id.into(), occupancy })
        .collect();
    let edges = vec![
        Edge::new("0", "1", 4, 1),
        Edge::new("1", "2#0", 1, 2),
        Edge::new("1", "2#1", 1, 4),
        Edge::new("2#0", "3", 2, 1),
        Edge::new("2#1", "3", 4, 1),
        Edge::new("3", "4", 1, 4),
    ];
    PartitionedGraph::new(nodes, edges, "0", "4").with_delta(4)
}

/// Chain of `2p` nodes with occupancies `p, 1, p-1, 2, ..., 1, p`.
///
/// Extrapolated from the ten-node member (`p = 5`), whose integer spectrum
/// `±1, ..., ±p` gives perfect revival but not transfer.
pub fn stevanovic(p: u64) -> PartitionedGraph {
    assert!(p >= 1);
    let occ: Vec<u64> = (0..2 * p).map(|i| if i % 2 == 0 { p - i / 2 } else { i / 2 + 1 }).collect();
    let mut edges = Vec::new();
    for i in 0..2 * p - 1 {
        let m = i / 2;
        let (du, dv) = if i % 2 == 0 { (m + 1, p - m) } else { (p - m - 1, m + 1) };
        edges.push(Edge::new(i.to_string(), (i + 1).to_string(), du, dv));
    }
    PartitionedGraph::new(chain_nodes(&occ), edges, "0", (2 * p - 1).to_string())
}

/// The explicit `d`-cube with input `0` and output `2^d - 1`.
pub fn hypercube(d: u32) -> ExplicitGraph {
    let n = 1usize << d;
    let edges = (0..n).flat_map(|v| (0..d).map(move |b| (v, v ^ (1 << b)))).filter(|(a, b)| a < b);
    ExplicitGraph::from_edges(n, edges, 0, n - 1).expect("cube edges are simple")
}
