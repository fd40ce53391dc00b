//! Spectral certificates: transfer, revival-only, and an explicit graph.

use pstgraph::catalog::{coutinho_graph, hypercube, stevanovic};
use pstgraph::spectral::{certify, k_formula_check};

fn main() {
    let cases = [
        ("coutinho quotient", coutinho_graph().quotient().unwrap()),
        ("coutinho explicit", coutinho_graph().expand().unwrap().to_weighted()),
        ("stevanovic p=5", stevanovic(5).quotient().unwrap()),
        ("4-cube explicit", hypercube(4).to_weighted()),
    ];
    for (name, g) in cases {
        let r = certify(&g).expect("eigensolver converges");
        println!("{name}: verdict {:?}", r.verdict);
        if let Some(fit) = &r.fit {
            println!("  alpha {} delta {} betas {:?}", fit.alpha, fit.delta, fit.betas);
        }
        if let (Some(t), Some(f)) = (r.transfer_time, r.fidelity_at_transfer) {
            println!("  t0 = {t:.6}, F(t0) = {f:.12}");
        }
        println!("  best transfer fidelity {:.6} at t = {:.4}", r.max_fidelity, r.max_fidelity_time);
    }
    let k = k_formula_check(&hypercube(4).to_weighted()).unwrap();
    println!("4-cube walk count {} squared against formula {}: {}", k.path_count, k.formula_k_squared, k.holds);
}
