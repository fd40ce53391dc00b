//! Splitting one node into several smaller ones with the same quotient dynamics.
//!
//! A node of occupancy `N` whose first neighbour edge has node-side degree
//! `c_1` may be replaced by parts `(N_i, x_i)` with `sum N_i x_i^2 = N c_1^2`.
//! Part `i` sees neighbour `j` with degree `c_j x_i / c_1`.

use std::collections::HashMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::partition::{Edge, Node, PartitionedGraph};

use super::RewriteError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SplitPart {
    pub occupancy: u64,
    /// Degree towards the node's first neighbour.
    pub degree: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitCandidate {
    pub parts: Vec<SplitPart>,
    /// Sum of part occupancies.
    pub total: u64,
    pub graph: PartitionedGraph,
}

struct Neighbourhood {
    occupancy: u64,
    /// (edge index, neighbour occupancy, degree from the node)
    links: Vec<(usize, u64, u64)>,
}

fn neighbourhood(g: &PartitionedGraph, node: &str) -> Result<Neighbourhood, RewriteError> {
    g.ensure_valid()?;
    let occupancy = g.occupancy(node).ok_or_else(|| RewriteError::PreconditionFailed(format!("unknown node `{node}`")))?;
    if node == g.input || node == g.output {
        return Err(RewriteError::PreconditionFailed(format!("`{node}` is an end of the transfer and cannot be split")));
    }
    let links = g
        .incident_edges(node)
        .map(|(k, e)| {
            let far = e.other(node).expect("incident");
            (k, g.occupancy(far).expect("validated"), e.degrees_from(node).expect("incident").0)
        })
        .collect();
    Ok(Neighbourhood { occupancy, links })
}

/// Degrees of a part with first-neighbour degree `x`, if every one is admissible.
fn part_degrees(nb: &Neighbourhood, x: u64) -> Option<Vec<u64>> {
    let c1 = nb.links[0].2;
    nb.links
        .iter()
        .map(|&(_, m, c)| {
            let num = c as u128 * x as u128;
            (num.is_multiple_of(c1 as u128) && num / c1 as u128 <= m as u128).then(|| (num / c1 as u128) as u64)
        })
        .collect()
}

/// Replace `node` by the given parts. Part `i` is named `{node}#{i}`.
pub fn apply_split(g: &PartitionedGraph, node: &str, parts: &[SplitPart]) -> Result<PartitionedGraph, RewriteError> {
    let nb = neighbourhood(g, node)?;
    let bad = |m: String| RewriteError::PreconditionFailed(m);
    if parts.is_empty() {
        return Err(bad("no parts given".into()));
    }
    if nb.links.is_empty() {
        return Err(bad(format!("`{node}` has no neighbours")));
    }
    let c1 = nb.links[0].2 as u128;
    let target = nb.occupancy as u128 * c1 * c1;
    let weight: u128 = parts.iter().map(|p| p.occupancy as u128 * p.degree as u128 * p.degree as u128).sum();
    if weight != target {
        return Err(bad(format!("parts weigh {weight} but the node weighs {target}")));
    }
    let mut part_degs = Vec::with_capacity(parts.len());
    for p in parts {
        if p.occupancy == 0 || p.degree == 0 {
            return Err(bad("parts must be non-empty".into()));
        }
        let degs = part_degrees(&nb, p.degree).ok_or_else(|| bad(format!("part degree {} is not admissible", p.degree)))?;
        for (&(_, m, _), &d) in nb.links.iter().zip(&degs) {
            if !(p.occupancy as u128 * d as u128).is_multiple_of(m as u128) {
                return Err(bad(format!("part ({}, {}) gives a fractional far-side degree", p.occupancy, p.degree)));
            }
        }
        part_degs.push(degs);
    }

    let part_id = |i: usize| format!("{node}#{i}");
    let mut out = g.clone();
    out.nodes = Vec::with_capacity(g.nodes.len() + parts.len());
    for n in &g.nodes {
        if n.id == node {
            out.nodes.extend(parts.iter().enumerate().map(|(i, p)| Node { id: part_id(i), occupancy: p.occupancy }));
        } else {
            out.nodes.push(n.clone());
        }
    }
    out.edges = Vec::with_capacity(g.edges.len() + parts.len() * nb.links.len());
    let link_of: HashMap<usize, usize> = nb.links.iter().enumerate().map(|(j, l)| (l.0, j)).collect();
    for (k, e) in g.edges.iter().enumerate() {
        let Some(&j) = link_of.get(&k) else {
            out.edges.push(e.clone());
            continue;
        };
        let m = nb.links[j].1;
        for (i, p) in parts.iter().enumerate() {
            let d = part_degs[i][j];
            let far = p.occupancy * d / m;
            out.edges.push(if e.u == node {
                Edge::new(part_id(i), e.v.clone(), d, far)
            } else {
                Edge::new(e.u.clone(), part_id(i), far, d)
            });
        }
    }
    debug_assert!(out.validate().is_valid(), "{:?}", out.validate());
    Ok(out)
}

/// All nontrivial splits into at most `max_parts` parts, smallest total first.
pub fn split_node(g: &PartitionedGraph, node: &str, max_parts: usize) -> Result<Vec<SplitCandidate>, RewriteError> {
    let nb = neighbourhood(g, node)?;
    if nb.links.is_empty() || max_parts < 2 {
        return Ok(Vec::new());
    }
    let c1 = nb.links[0].2 as u128;
    let target = nb.occupancy as u128 * c1 * c1;

    let mut options: Vec<(u128, SplitPart)> = Vec::new();
    for x in 1..=nb.links[0].1 {
        let sq = x as u128 * x as u128;
        if sq > target {
            break;
        }
        let Some(degs) = part_degrees(&nb, x) else { continue };
        // N_i must make every N_i * d_j a multiple of M_j
        let step = nb.links.iter().zip(&degs).fold(1u128, |acc, (&(_, m, _), &d)| acc.lcm(&((m / m.gcd(&d)) as u128)));
        let mut occ = step;
        while occ * sq <= target {
            options.push((occ * sq, SplitPart { occupancy: occ as u64, degree: x }));
            occ += step;
        }
    }
    options.sort();

    let mut found: Vec<Vec<SplitPart>> = Vec::new();
    let mut stack: Vec<SplitPart> = Vec::new();
    collect(&options, 0, target, max_parts, &mut stack, &mut found);

    let trivial = SplitPart { occupancy: nb.occupancy, degree: nb.links[0].2 };
    let mut out = Vec::new();
    for parts in found {
        if parts == [trivial] {
            continue;
        }
        let graph = apply_split(g, node, &parts)?;
        let total = parts.iter().map(|p| p.occupancy).sum();
        out.push(SplitCandidate { parts, total, graph });
    }
    out.sort_by(|a, b| (a.total, &a.parts).cmp(&(b.total, &b.parts)));
    Ok(out)
}

/// Multisets of options (non-decreasing index) summing exactly to `left`.
fn collect(
    options: &[(u128, SplitPart)],
    from: usize,
    left: u128,
    slots: usize,
    stack: &mut Vec<SplitPart>,
    found: &mut Vec<Vec<SplitPart>>,
) {
    if left == 0 {
        found.push(stack.clone());
        return;
    }
    if slots == 0 {
        return;
    }
    for k in from..options.len() {
        let (w, part) = options[k];
        if w > left {
            break;
        }
        // even the heaviest option cannot fill what is left
        if options[options.len() - 1].0 * (slots as u128) < left {
            return;
        }
        stack.push(part);
        collect(options, k, left - w, slots - 1, stack, found);
        stack.pop();
    }
}
