use std::collections::BTreeMap;

use crate::partition::{Edge, Node, PartitionedGraph};

use super::RewriteError;

type Class = (usize, usize);

fn pair_id(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

/// Node-level Cartesian product. Node `(a, b)` holds `N_a * N_b` vertices.
pub fn cartesian_product(g1: &PartitionedGraph, g2: &PartitionedGraph) -> Result<PartitionedGraph, RewriteError> {
    g1.ensure_valid()?;
    g2.ensure_valid()?;
    if g1.delta != g2.delta {
        return Err(RewriteError::DeltaMismatch(g1.delta, g2.delta));
    }
    let mut nodes = Vec::new();
    for a in &g1.nodes {
        for b in &g2.nodes {
            let occupancy =
                a.occupancy.checked_mul(b.occupancy).ok_or_else(|| RewriteError::PreconditionFailed("occupancy overflow".into()))?;
            nodes.push(Node { id: pair_id(&a.id, &b.id), occupancy });
        }
    }
    let mut edges = Vec::new();
    for e in &g1.edges {
        for b in &g2.nodes {
            edges.push(Edge::new(pair_id(&e.u, &b.id), pair_id(&e.v, &b.id), e.du, e.dv));
        }
    }
    for a in &g1.nodes {
        for e in &g2.edges {
            edges.push(Edge::new(pair_id(&a.id, &e.u), pair_id(&a.id, &e.v), e.du, e.dv));
        }
    }
    let mut out = PartitionedGraph::new(nodes, edges, pair_id(&g1.input, &g2.input), pair_id(&g1.output, &g2.output));
    out.delta = g1.delta;
    Ok(out)
}

/// `g □ g` with the swap `(x, y) <-> (y, x)` quotiented out.
///
/// Diagonal classes keep the id `(a,a)`, off-diagonal ones become `{a,b}`
/// with `a` the earlier node.
pub fn symmetrize_square(g: &PartitionedGraph) -> Result<PartitionedGraph, RewriteError> {
    g.ensure_valid()?;
    let n = g.nodes.len();
    let class_of = |i: usize, j: usize| -> (usize, usize) { (i.min(j), i.max(j)) };
    let class_id = |(i, j): (usize, usize)| -> String {
        if i == j {
            pair_id(&g.nodes[i].id, &g.nodes[i].id)
        } else {
            format!("{{{},{}}}", g.nodes[i].id, g.nodes[j].id)
        }
    };
    // neighbours of node i as (other index, degree from i)
    let mut nbrs: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
    for e in &g.edges {
        let (u, v) = (g.node_index(&e.u).expect("validated"), g.node_index(&e.v).expect("validated"));
        nbrs[u].push((v, e.du));
        nbrs[v].push((u, e.dv));
    }

    let mut nodes = Vec::new();
    // (from class, to class) -> degree
    let mut degree: BTreeMap<(Class, Class), u64> = BTreeMap::new();
    for i in 0..n {
        for j in i..n {
            let (ni, nj) = (g.nodes[i].occupancy, g.nodes[j].occupancy);
            let occupancy = if i == j { ni.checked_mul(ni) } else { ni.checked_mul(nj).and_then(|x| x.checked_mul(2)) }
                .ok_or_else(|| RewriteError::PreconditionFailed("occupancy overflow".into()))?;
            nodes.push(Node { id: class_id((i, j)), occupancy });
            for &(i2, c) in &nbrs[i] {
                *degree.entry(((i, j), class_of(i2, j))).or_default() += c;
            }
            for &(j2, c) in &nbrs[j] {
                *degree.entry(((i, j), class_of(i, j2))).or_default() += c;
            }
        }
    }
    let mut edges = Vec::new();
    for (&(a, b), &d) in &degree {
        if a < b {
            edges.push(Edge::new(class_id(a), class_id(b), d, degree[&(b, a)]));
        }
    }
    let (s, t) = (g.node_index(&g.input).expect("validated"), g.node_index(&g.output).expect("validated"));
    let mut out = PartitionedGraph::new(nodes, edges, class_id((s, s)), class_id((t, t)));
    out.delta = g.delta;
    debug_assert!(out.validate().is_valid(), "{:?}", out.validate());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn p2() -> PartitionedGraph {
        PartitionedGraph::new(
            vec![Node { id: "a".into(), occupancy: 1 }, Node { id: "b".into(), occupancy: 1 }],
            vec![Edge::new("a", "b", 1, 1)],
            "a",
            "b",
        )
        .with_delta(4)
    }

    #[test]
    fn square_of_p2_is_a_four_cycle() {
        let sq = cartesian_product(&p2(), &p2()).unwrap();
        assert!(sq.validate().is_valid());
        assert_eq!(sq.nodes.len(), 4);
        assert_eq!(sq.edges.len(), 4);
        assert_eq!(sq.input, "(a,a)");
        assert_eq!(sq.output, "(b,b)");
        assert_eq!(sq.delta, Some(4));
    }

    #[test]
    fn symmetrized_square_of_p2_is_the_hypercube_chain() {
        let s = symmetrize_square(&p2()).unwrap();
        let occ: Vec<u64> = s.nodes.iter().map(|n| n.occupancy).collect();
        assert_eq!(occ, vec![1, 2, 1]);
        assert_eq!(s.edges, vec![Edge::new("(a,a)", "{a,b}", 2, 1), Edge::new("{a,b}", "(b,b)", 1, 2)]);
    }

    #[test]
    fn symmetrized_square_keeps_vertices() {
        let g = PartitionedGraph::new(
            vec![Node { id: "0".into(), occupancy: 1 }, Node { id: "1".into(), occupancy: 3 }, Node { id: "2".into(), occupancy: 1 }],
            vec![Edge::new("0", "1", 3, 1), Edge::new("1", "2", 1, 3)],
            "0",
            "2",
        );
        let s = symmetrize_square(&g).unwrap();
        let n = g.vertex_count().to_u64().unwrap();
        // merging (i,j) with (j,i) coarsens the partition but keeps every vertex
        assert_eq!(s.vertex_count().to_u64().unwrap(), n * n);
        assert_eq!(s.nodes.len(), 6);
        assert!(s.validate().is_transfer_ready());
    }

    #[test]
    fn delta_mismatch() {
        let mut other = p2();
        other.delta = Some(2);
        assert_eq!(cartesian_product(&p2(), &other), Err(RewriteError::DeltaMismatch(Some(4), Some(2))));
    }
}
