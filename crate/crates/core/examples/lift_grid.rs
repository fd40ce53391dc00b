//! Reduce the D=10 grid, double its delta, reduce again.

use pstgraph::catalog::p3_grid;
use pstgraph::rewrite::{delta_double, reduce_search, SearchOptions};
use pstgraph::spectral::certify;

fn main() {
    let g = p3_grid(5);
    let opts = SearchOptions::default();
    let reduced = reduce_search(&g, &opts).unwrap().graph;
    let lifted = delta_double(&reduced).unwrap();
    let again = reduce_search(&lifted, &opts).unwrap().graph;
    println!(
        "grid {} -> reduced {} -> lifted {} -> reduced {}",
        g.vertex_count(),
        reduced.vertex_count(),
        lifted.vertex_count(),
        again.vertex_count()
    );
    for (name, h) in [("reduced", &reduced), ("lifted and reduced", &again)] {
        let r = certify(&h.quotient().unwrap()).unwrap();
        println!(
            "{name}: delta {:?}, t0 {:.6}, F {:.12}",
            r.fit.map(|f| f.delta),
            r.transfer_time.unwrap(),
            r.fidelity_at_transfer.unwrap()
        );
    }
}
