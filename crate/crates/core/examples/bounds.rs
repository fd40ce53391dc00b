//! Bound checks and the helper quantity R.

use pstgraph::bounds::{admissible_sets, degree_distance_bound, edge_lower_bound, helper_r, parity_theorem_check};

fn main() {
    for d in [4u64, 5, 16, 32] {
        let b = edge_lower_bound(d);
        println!("D={d}: m >= {}, N >= {} (any degree), N >= {} (degree D)", b.min_edges, b.min_vertices_simple, b.min_vertices_by_degree);
    }
    println!("degree 6, delta 4: D <= {}", degree_distance_bound(6, 4));
    for (delta, dist) in [(2, 32), (2, 5), (4, 5)] {
        let v = parity_theorem_check(delta, dist, true);
        println!("delta {delta}, D={dist}: {} ({})", v.accepted, v.reason);
    }
    for set in [vec![0, 1, 2, 3], vec![0, 1, 4, 5], vec![0, 1, 2, 3, 4, 5]] {
        let r = helper_r(&set).unwrap();
        println!("R({set:?}) = {}, 2-adic valuation {}", r.r, r.valuation);
    }
    println!("{} admissible sets inside 0..=10", admissible_sets(10).count());
}
