use crate::partition::PartitionedGraph;

use super::RewriteError;

/// Doubles every odd-side occupancy and every even-side degree.
///
/// Quotient couplings all grow by `sqrt(2)`, so `delta` doubles. Odd-side
/// nodes usually pick up a factor of 4 they can then shed by reduction.
pub fn delta_double(g: &PartitionedGraph) -> Result<PartitionedGraph, RewriteError> {
    g.ensure_valid()?;
    let labels = g.bipartite_labels().ok_or(RewriteError::NotBipartite)?;
    if labels[&g.output] != 0 {
        return Err(RewriteError::EndsOnOddSide);
    }
    let mut out = g.clone();
    for n in &mut out.nodes {
        if labels[&n.id] == 1 {
            n.occupancy = n.occupancy.checked_mul(2).ok_or_else(|| RewriteError::PreconditionFailed("occupancy overflow".into()))?;
        }
    }
    for e in &mut out.edges {
        if labels[&e.u] == 0 {
            e.du *= 2;
        } else {
            e.dv *= 2;
        }
    }
    out.delta = g.delta.map(|d| d * 2);
    debug_assert!(out.validate().is_valid());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{Edge, Node};

    fn node(id: &str, occupancy: u64) -> Node {
        Node { id: id.into(), occupancy }
    }

    #[test]
    fn lifted_p3() {
        let g = PartitionedGraph::new(
            vec![node("a", 1), node("b", 2), node("c", 1)],
            vec![Edge::new("a", "b", 2, 1), Edge::new("b", "c", 1, 2)],
            "a",
            "c",
        )
        .with_delta(2);
        let l = delta_double(&g).unwrap();
        assert_eq!(l.delta, Some(4));
        assert_eq!(l.occupancy("b"), Some(4));
        assert_eq!(l.edges[0], Edge::new("a", "b", 4, 1));
        assert_eq!(l.edges[1], Edge::new("b", "c", 1, 4));
        for ((_, _, a), (_, _, b)) in g.coupling_squares().into_iter().zip(l.coupling_squares()) {
            assert_eq!(2 * a, b);
        }
    }

    #[test]
    fn rejects_triangles_and_odd_ends() {
        let tri = PartitionedGraph::new(
            vec![node("a", 1), node("b", 1), node("c", 1)],
            vec![Edge::new("a", "b", 1, 1), Edge::new("b", "c", 1, 1), Edge::new("a", "c", 1, 1)],
            "a",
            "c",
        );
        assert_eq!(delta_double(&tri), Err(RewriteError::NotBipartite));
        let p2 = PartitionedGraph::new(vec![node("a", 1), node("b", 1)], vec![Edge::new("a", "b", 1, 1)], "a", "b");
        assert_eq!(delta_double(&p2), Err(RewriteError::EndsOnOddSide));
    }
}
