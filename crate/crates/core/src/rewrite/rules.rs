//! The node-preserving manipulation rule and its variants.
//!
//! Reducing a set `S` of nodes by a factor `n` divides every occupancy in `S`
//! by `n^2`, multiplies the `S`-side degree of every boundary edge by `n` and
//! divides the far-side degree by `n`. Edges inside `S` keep their degrees.
//! `du * dv` is invariant on every edge.

use std::collections::BTreeSet;

use crate::partition::PartitionedGraph;

use super::RewriteError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    Reduce,
    Grow,
}

fn fail(msg: String) -> RewriteError {
    RewriteError::PreconditionFailed(msg)
}

fn scale_set(g: &PartitionedGraph, set: &BTreeSet<String>, n: u64, dir: Direction) -> Result<PartitionedGraph, RewriteError> {
    g.ensure_valid()?;
    if n < 2 {
        return Err(fail(format!("factor must be at least 2, got {n}")));
    }
    if set.is_empty() {
        return Err(fail("empty node set".into()));
    }
    let sq = n * n;
    for id in set {
        let occ = g.occupancy(id).ok_or_else(|| fail(format!("unknown node `{id}`")))?;
        match dir {
            Direction::Reduce if occ % sq != 0 => {
                return Err(fail(format!("occupancy {occ} of `{id}` is not divisible by {sq}")));
            }
            Direction::Grow if occ.checked_mul(sq).is_none() => {
                return Err(fail(format!("occupancy of `{id}` overflows")));
            }
            _ => {}
        }
    }
    let new_occ = |id: &str| -> u64 {
        let o = g.occupancy(id).expect("checked");
        if !set.contains(id) {
            o
        } else if dir == Direction::Reduce {
            o / sq
        } else {
            o * sq
        }
    };

    let mut out = g.clone();
    for node in &mut out.nodes {
        node.occupancy = new_occ(&node.id);
    }
    for e in &mut out.edges {
        let (in_u, in_v) = (set.contains(&e.u), set.contains(&e.v));
        if in_u && in_v {
            if dir == Direction::Reduce && (e.du > new_occ(&e.v) || e.dv > new_occ(&e.u)) {
                return Err(fail(format!(
                    "internal edge `{}`-`{}` keeps degrees ({}, {}) that no longer fit occupancies ({}, {})",
                    e.u,
                    e.v,
                    e.du,
                    e.dv,
                    new_occ(&e.u),
                    new_occ(&e.v)
                )));
            }
            continue;
        }
        if !in_u && !in_v {
            continue;
        }
        // (inner degree, outer degree, inner id, outer id)
        let (inner, outer, inner_id, outer_id) =
            if in_u { (&mut e.du, &mut e.dv, e.u.clone(), e.v.clone()) } else { (&mut e.dv, &mut e.du, e.v.clone(), e.u.clone()) };
        match dir {
            Direction::Reduce => {
                if *outer % n != 0 {
                    return Err(fail(format!("degree {} of `{outer_id}` towards `{inner_id}` is not divisible by {n}", *outer)));
                }
                let grown = inner.checked_mul(n).ok_or_else(|| fail("degree overflow".into()))?;
                if grown > new_occ(&outer_id) {
                    return Err(fail(format!(
                        "{n} x degree {} of `{inner_id}` exceeds occupancy {} of `{outer_id}`",
                        *inner,
                        new_occ(&outer_id)
                    )));
                }
                *inner = grown;
                *outer /= n;
            }
            Direction::Grow => {
                if *inner % n != 0 {
                    return Err(fail(format!("degree {} of `{inner_id}` towards `{outer_id}` is not divisible by {n}", *inner)));
                }
                let grown = outer.checked_mul(n).ok_or_else(|| fail("degree overflow".into()))?;
                if grown > new_occ(&inner_id) {
                    return Err(fail(format!(
                        "{n} x degree {} of `{outer_id}` exceeds the grown occupancy {} of `{inner_id}`",
                        *outer,
                        new_occ(&inner_id)
                    )));
                }
                *outer = grown;
                *inner /= n;
            }
        }
    }
    debug_assert!(out.validate().is_valid(), "rule produced an invalid graph");
    Ok(out)
}

fn single(node: &str) -> BTreeSet<String> {
    BTreeSet::from([node.to_string()])
}

/// Divide the occupancy of `node` by `n^2`.
pub fn reduce_node(g: &PartitionedGraph, node: &str, n: u64) -> Result<PartitionedGraph, RewriteError> {
    scale_set(g, &single(node), n, Direction::Reduce)
}

/// Multiply the occupancy of `node` by `n^2`; the inverse of [`reduce_node`].
pub fn reduce_node_reverse(g: &PartitionedGraph, node: &str, n: u64) -> Result<PartitionedGraph, RewriteError> {
    scale_set(g, &single(node), n, Direction::Grow)
}

/// Reduce every node of `set` at once. Internal edges keep their degrees.
pub fn reduce_subgraph(g: &PartitionedGraph, set: &BTreeSet<String>, n: u64) -> Result<PartitionedGraph, RewriteError> {
    scale_set(g, set, n, Direction::Reduce)
}

pub fn reduce_subgraph_reverse(g: &PartitionedGraph, set: &BTreeSet<String>, n: u64) -> Result<PartitionedGraph, RewriteError> {
    scale_set(g, set, n, Direction::Grow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{Edge, Node};

    fn chain(occ: &[u64], degs: &[(u64, u64)]) -> PartitionedGraph {
        let nodes = occ.iter().enumerate().map(|(i, &o)| Node { id: i.to_string(), occupancy: o }).collect();
        let edges = degs.iter().enumerate().map(|(i, &(a, b))| Edge::new(i.to_string(), (i + 1).to_string(), a, b)).collect();
        PartitionedGraph::new(nodes, edges, "0", (occ.len() - 1).to_string())
    }

    fn occupancies(g: &PartitionedGraph) -> Vec<u64> {
        g.nodes.iter().map(|n| n.occupancy).collect()
    }

    fn degrees(g: &PartitionedGraph) -> Vec<(u64, u64)> {
        g.edges.iter().map(|e| (e.du, e.dv)).collect()
    }

    #[test]
    fn d6_center_reduction() {
        let g = chain(&[1, 6, 15, 20, 15, 6, 1], &[(6, 1), (5, 2), (4, 3), (3, 4), (2, 5), (1, 6)]);
        let r = reduce_node(&g, "3", 2).unwrap();
        assert_eq!(occupancies(&r), vec![1, 6, 15, 5, 15, 6, 1]);
        assert_eq!(degrees(&r), vec![(6, 1), (5, 2), (2, 6), (6, 2), (2, 5), (1, 6)]);
        assert_eq!(g.coupling_squares(), r.coupling_squares());
    }

    #[test]
    fn seventeen_to_eight() {
        let g = PartitionedGraph::new(
            vec![Node { id: "a".into(), occupancy: 1 }, Node { id: "b".into(), occupancy: 16 }],
            vec![Edge::new("a", "b", 16, 1)],
            "a",
            "b",
        );
        // b cannot be reduced directly: 2 * 1 <= 1 fails and 1 is odd
        assert!(reduce_node(&g, "b", 2).is_err());
        let grown = reduce_node_reverse(&g, "a", 2).unwrap();
        assert_eq!(occupancies(&grown), vec![4, 16]);
        assert_eq!(degrees(&grown), vec![(8, 2)]);
        let done = reduce_node(&grown, "b", 2).unwrap();
        assert_eq!(occupancies(&done), vec![4, 4]);
        assert_eq!(degrees(&done), vec![(4, 4)]);
        assert_eq!(done.vertex_count(), 8u32.into());
    }

    #[test]
    fn odd_occupancy_is_rejected() {
        let g = chain(&[1, 3, 3, 1], &[(3, 1), (2, 2), (1, 3)]);
        let err = reduce_node(&g, "1", 2).unwrap_err();
        assert!(matches!(err, RewriteError::PreconditionFailed(ref m) if m.contains("not divisible by 4")), "{err}");
        assert!(reduce_node(&g, "1", 1).is_err());
        assert!(reduce_node(&g, "nope", 2).is_err());
    }

    #[test]
    fn reverse_then_reduce_is_identity() {
        let g = chain(&[1, 6, 15, 20, 15, 6, 1], &[(6, 1), (5, 2), (4, 3), (3, 4), (2, 5), (1, 6)]);
        let r = reduce_node(&g, "3", 2).unwrap();
        let back = reduce_node_reverse(&r, "3", 2).unwrap();
        assert_eq!(back, g);
        assert_eq!(reduce_node(&back, "3", 2).unwrap(), r);
    }

    #[test]
    fn subgraph_of_one_is_single_rule() {
        let g = chain(&[1, 6, 15, 20, 15, 6, 1], &[(6, 1), (5, 2), (4, 3), (3, 4), (2, 5), (1, 6)]);
        assert_eq!(reduce_subgraph(&g, &single("3"), 2).unwrap(), reduce_node(&g, "3", 2).unwrap());
        let bad: BTreeSet<String> = ["2", "3"].iter().map(|s| s.to_string()).collect();
        assert!(reduce_subgraph(&g, &bad, 2).is_err());
    }

    #[test]
    fn subgraph_moves_where_single_nodes_cannot() {
        // 1 -(4,1)- 4 -(2,2)- 4 -(1,4)- 1: neither 4 alone can shrink
        // (the far-side degree 1 towards the input is odd), but the pair can
        // only if the boundary to the ends allows it; here it does not.
        let g = chain(&[1, 4, 4, 1], &[(4, 1), (2, 2), (1, 4)]);
        assert!(reduce_node(&g, "1", 2).is_err());
        let pair: BTreeSet<String> = ["1", "2"].iter().map(|s| s.to_string()).collect();
        assert!(reduce_subgraph(&g, &pair, 2).is_err());

        // 16 -(2,2)- 16 both sitting between degree-8 hubs of occupancy 4
        let g = chain(&[4, 16, 16, 4], &[(8, 2), (2, 2), (2, 8)]);
        let pair: BTreeSet<String> = ["1", "2"].iter().map(|s| s.to_string()).collect();
        let r = reduce_subgraph(&g, &pair, 2).unwrap();
        assert_eq!(occupancies(&r), vec![4, 4, 4, 4]);
        assert_eq!(degrees(&r), vec![(4, 4), (2, 2), (4, 4)]);
        assert_eq!(reduce_subgraph_reverse(&r, &pair, 2).unwrap(), g);
    }

    #[test]
    fn internal_edges_must_still_fit() {
        let g = chain(&[4, 16, 16, 4], &[(8, 2), (16, 16), (2, 8)]);
        let pair: BTreeSet<String> = ["1", "2"].iter().map(|s| s.to_string()).collect();
        let err = reduce_subgraph(&g, &pair, 2).unwrap_err();
        assert!(format!("{err}").contains("internal edge"), "{err}");
    }
}
