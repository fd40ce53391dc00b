//! The distance-32 grid: certify it, lift it, reduce and split.

use pstgraph::bounds::{efficiency, stats};
use pstgraph::catalog::fig6_grid;
use pstgraph::rewrite::{delta_double, reduce_search, split_node, SearchOptions, Strategy};
use pstgraph::spectral::certify;

fn main() {
    let g = fig6_grid();
    let s = stats(&g).unwrap();
    println!("{} vertices over {} nodes, eta {:.3}, verdict {:?}", s.vertices, g.nodes.len(), s.efficiency, s.verdict);

    let lifted = delta_double(&g).unwrap();
    let opts = SearchOptions { strategy: Strategy::Greedy, scope: lifted.odd_side(), ..Default::default() };
    let mut cur = reduce_search(&lifted, &opts).unwrap().graph;
    println!("lifted {} -> reduced {} (eta {:.3})", lifted.vertex_count(), cur.vertex_count(), efficiency(&cur.vertex_count(), 32));

    for id in ["(0,8)", "(8,0)", "(8,8)"] {
        let best = split_node(&cur, id, 3).unwrap().remove(0);
        println!("  split {id}: {:?}", best.parts.iter().map(|p| p.occupancy).collect::<Vec<_>>());
        cur = best.graph;
    }
    let n = cur.vertex_count();
    let r = certify(&cur.quotient().unwrap()).unwrap();
    println!("after splitting: {n} vertices (eta {:.3}), verdict {:?}, delta {:?}", efficiency(&n, 32), r.verdict, r.fit.map(|f| f.delta));
}
