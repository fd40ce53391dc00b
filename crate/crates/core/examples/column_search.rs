//! Smallest middle columns for distances 4 and 5, assembled into graphs.

use pstgraph::bounds::{assemble_column_graph, minimal_column_count};
use pstgraph::spectral::certify;

fn main() {
    for d in [3, 4, 5] {
        let s = minimal_column_count(d, 8);
        let rows: Vec<String> = s.witness.iter().flatten().map(|r| format!("{r:0d$b}")).collect();
        println!("D={d}: k = {:?}, rows {rows:?}", s.k);
        if d >= 4 {
            let g = assemble_column_graph(&s).unwrap();
            let r = certify(&g.to_weighted()).unwrap();
            println!("  assembled: {} vertices, {} edges, verdict {:?}", g.n, g.edges.len(), r.verdict);
        }
    }
}
