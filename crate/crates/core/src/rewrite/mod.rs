//! Vertex-count changing transformations of partitioned graphs.
//!
//! Every rule here leaves the quotient couplings `sqrt(du * dv)` untouched
//! (or, for the Δ-doubling lift, scales all of them by `sqrt(2)`), so the
//! transfer properties of the quotient carry over.

mod lift;
mod product;
mod rules;
mod search;
mod split;
mod trace;

pub use lift::delta_double;
pub use product::{cartesian_product, symmetrize_square};
pub use rules::{reduce_node, reduce_node_reverse, reduce_subgraph, reduce_subgraph_reverse};
pub use search::{reduce_search, SearchOptions, SearchOutcome, Strategy};
pub use split::{apply_split, split_node, SplitCandidate, SplitPart};
pub use trace::{replay, RewriteStep, RewriteTrace, Rule};

use thiserror::Error;

use crate::partition::GraphError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RewriteError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("node graph is not bipartite")]
    NotBipartite,
    #[error("input and output must both lie on the even side of the bipartition")]
    EndsOnOddSide,
    #[error("factors transfer with different delta ({0:?} vs {1:?})")]
    DeltaMismatch(Option<u64>, Option<u64>),
    #[error("trace does not match: {0}")]
    TraceMismatch(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
