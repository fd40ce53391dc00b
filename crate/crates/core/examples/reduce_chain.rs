//! Shrink binomial chains with the manipulation rule.
//!
//! `cargo run --release --example reduce_chain -- 12` for a larger distance.

use pstgraph::bounds::efficiency;
use pstgraph::catalog::p2_hypercube_chain;
use pstgraph::rewrite::{reduce_search, SearchOptions};

fn main() {
    let d: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(8);
    let g = p2_hypercube_chain(d);
    for factors in [vec![2], vec![2, 3]] {
        let opts = SearchOptions { factors: factors.clone(), ..Default::default() };
        let out = reduce_search(&g, &opts).expect("chain is valid");
        let n = out.graph.vertex_count();
        println!(
            "D={d} factors {factors:?}: {} -> {n} vertices (eta {:.4}), {} steps, {} states, complete={}",
            g.vertex_count(),
            efficiency(&n, d),
            out.trace.steps.len(),
            out.states_explored,
            out.complete
        );
        let occ: Vec<u64> = out.graph.nodes.iter().map(|n| n.occupancy).collect();
        println!("  occupancies {occ:?}");
    }
}
