//! Squares of transfer graphs, with and without merging the swap pairs.

use pstgraph::catalog::p2_hypercube_chain;
use pstgraph::rewrite::{cartesian_product, reduce_search, symmetrize_square, SearchOptions};

fn main() {
    for d in 1..=4 {
        let g = p2_hypercube_chain(d);
        let sq = cartesian_product(&g, &g).unwrap();
        let sym = symmetrize_square(&g).unwrap();
        let reduced = reduce_search(&sym, &SearchOptions { factors: vec![2, 3], ..Default::default() }).unwrap();
        println!(
            "D={d}: square has {} nodes, merged {} nodes; {} vertices, merged and reduced {}",
            sq.nodes.len(),
            sym.nodes.len(),
            sq.vertex_count(),
            reduced.graph.vertex_count()
        );
    }
}
