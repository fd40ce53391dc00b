//! Record a rewrite by hand, serialise it and replay it.

use pstgraph::catalog::p2_hypercube_chain;
use pstgraph::rewrite::{replay, RewriteTrace, Rule};

fn main() {
    let g = p2_hypercube_chain(6);
    let mut trace = RewriteTrace::start(&g);
    let mut cur = trace.apply(&g, Rule::Reduce, vec!["3".into()], Some(2), None).unwrap();
    cur = trace.apply(&cur, Rule::DeltaDouble, vec![], None, None).unwrap();
    let text = trace.to_jsonl();
    print!("{text}");
    let back = RewriteTrace::from_jsonl(&text).unwrap();
    let again = replay(&g, &back).unwrap();
    println!("replayed {} vertices, identical: {}", again.vertex_count(), again == cur);
}
