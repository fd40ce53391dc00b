//! Build catalog graphs, validate them and look at their quotients.

use pstgraph::catalog::{coutinho_graph, p2_hypercube_chain, p3_grid, stevanovic};

fn main() {
    let graphs = [
        ("p2 chain, D=4", p2_hypercube_chain(4)),
        ("p3 grid, D=6", p3_grid(3)),
        ("coutinho", coutinho_graph()),
        ("stevanovic p=5", stevanovic(5)),
    ];
    for (name, g) in graphs {
        let report = g.validate();
        let q = g.quotient().expect("valid graphs have a quotient");
        let weights: Vec<String> = g
            .coupling_squares()
            .iter()
            .map(|&(a, b, jsq)| format!("{}-{}: sqrt({jsq}) = {:.4}", g.nodes[a].id, g.nodes[b].id, q.weight(a, b)))
            .collect();
        println!(
            "{name}: {} nodes, {} vertices, valid={}, transfer-ready={}",
            g.nodes.len(),
            g.vertex_count(),
            report.is_valid(),
            report.is_transfer_ready()
        );
        for w in weights.iter().take(4) {
            println!("  {w}");
        }
    }
}
