//! Node splitting on the D=4 chain, then the product with a single edge.

use pstgraph::catalog::p2_hypercube_chain;
use pstgraph::rewrite::{cartesian_product, split_node};
use pstgraph::spectral::certify;

fn main() {
    let g = p2_hypercube_chain(4);
    let cands = split_node(&g, "2", 3).unwrap();
    for c in cands.iter().take(4) {
        let parts: Vec<String> = c.parts.iter().map(|p| format!("(N={}, d={})", p.occupancy, p.degree)).collect();
        println!("total {:>2}: {}", c.total, parts.join(" + "));
    }
    let best = &cands[0].graph;
    let ex = best.expand().unwrap();
    let r = certify(&ex.to_weighted()).unwrap();
    println!("best split: {} vertices, {} edges, explicit verdict {:?}", ex.n, ex.edges.len(), r.verdict);

    let prod = cartesian_product(best, &p2_hypercube_chain(1)).unwrap();
    let dist = prod.node_distances().unwrap().transfer_distance;
    println!("times an edge: {} vertices at distance {dist}", prod.vertex_count());
}
