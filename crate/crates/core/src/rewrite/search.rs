//! Searching for small vertex counts with the manipulation rules.
//!
//! A move picks a seed node and a factor. Starting from the seed, the move
//! set absorbs any neighbour whose shared edge blocks the move, until every
//! boundary edge admits it. The move fails if the set would need the input,
//! the output, a node outside the scope, or a node that cannot take the factor.
//!
//! States are keyed on the occupancy vector: since `du * dv` is fixed and
//! `N_u du = N_v dv`, occupancies determine every degree.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_integer::Roots;

use crate::partition::PartitionedGraph;

use super::trace::{count, RewriteTrace, Rule};
use super::RewriteError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Always take the forward move that removes the most vertices.
    Greedy,
    /// Breadth-first over all forward and reverse moves, memoised.
    #[default]
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOptions {
    pub strategy: Strategy,
    pub factors: Vec<u64>,
    /// States expanded (exhaustive) or moves taken (greedy).
    pub budget: usize,
    /// A reverse move may grow a node to at most this multiple of its starting occupancy.
    pub reverse_cap: u64,
    pub allow_reverse: bool,
    /// Only these nodes may change. `None` allows every node but the ends.
    pub scope: Option<BTreeSet<String>>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            strategy: Strategy::Exhaustive,
            factors: vec![2],
            budget: 2_000_000,
            reverse_cap: 64,
            allow_reverse: true,
            scope: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub graph: PartitionedGraph,
    pub trace: RewriteTrace,
    /// False if the budget ran out before the search did.
    pub complete: bool,
    pub states_explored: usize,
}

#[derive(Clone, Copy, Debug)]
struct Move {
    seed: u32,
    factor: u64,
    reverse: bool,
}

struct Space {
    start: Vec<u64>,
    /// (u, v, du0 * dv0)
    edges: Vec<(usize, usize, u128)>,
    /// (edge index, other node, this node is `u`)
    adj: Vec<Vec<(usize, usize, bool)>>,
    movable: Vec<bool>,
    cap: u64,
}

impl Space {
    fn new(g: &PartitionedGraph, opts: &SearchOptions) -> Result<Self, RewriteError> {
        g.ensure_valid()?;
        if let Some(&n) = opts.factors.iter().find(|&&n| n < 2) {
            return Err(RewriteError::PreconditionFailed(format!("factor {n} is below 2")));
        }
        if let Some(scope) = &opts.scope {
            if let Some(id) = scope.iter().find(|id| g.node_index(id).is_none()) {
                return Err(RewriteError::PreconditionFailed(format!("scope names unknown node `{id}`")));
            }
        }
        let idx = |id: &str| g.node_index(id).expect("validated");
        let edges: Vec<_> = g.edges.iter().map(|e| (idx(&e.u), idx(&e.v), e.du as u128 * e.dv as u128)).collect();
        let mut adj = vec![Vec::new(); g.nodes.len()];
        for (k, &(u, v, _)) in edges.iter().enumerate() {
            adj[u].push((k, v, true));
            adj[v].push((k, u, false));
        }
        let movable =
            g.nodes.iter().map(|n| n.id != g.input && n.id != g.output && opts.scope.as_ref().is_none_or(|s| s.contains(&n.id))).collect();
        Ok(Space { start: g.nodes.iter().map(|n| n.occupancy).collect(), edges, adj, movable, cap: opts.reverse_cap })
    }

    /// Degree from `a` towards `b` across an edge with squared coupling `j2`.
    fn degree(occ: &[u64], a: usize, b: usize, j2: u128) -> u128 {
        (j2 * occ[b] as u128 / occ[a] as u128).sqrt()
    }

    fn node_ok(&self, occ: &[u64], v: usize, n: u64, reverse: bool) -> bool {
        let sq = n * n;
        self.movable[v]
            && if reverse { (occ[v] as u128) * (sq as u128) <= self.start[v] as u128 * self.cap as u128 } else { occ[v].is_multiple_of(sq) }
    }

    /// The node set a move needs, or `None` if it cannot be made valid.
    fn closure(&self, occ: &[u64], mv: Move) -> Option<Vec<usize>> {
        let (n, reverse) = (mv.factor, mv.reverse);
        let seed = mv.seed as usize;
        if !self.node_ok(occ, seed, n, reverse) {
            return None;
        }
        let mut inside = vec![false; occ.len()];
        inside[seed] = true;
        let mut members = vec![seed];
        let sq = (n * n) as u128;
        'grow: loop {
            for &u in &members {
                for &(k, w, _) in &self.adj[u] {
                    if inside[w] {
                        continue;
                    }
                    let j2 = self.edges[k].2;
                    let a = Self::degree(occ, u, w, j2);
                    let b = Self::degree(occ, w, u, j2);
                    let fine = if reverse {
                        a % n as u128 == 0 && b * n as u128 <= occ[u] as u128 * sq
                    } else {
                        b % n as u128 == 0 && a * n as u128 <= occ[w] as u128
                    };
                    if !fine {
                        if !self.node_ok(occ, w, n, reverse) {
                            return None;
                        }
                        inside[w] = true;
                        members.push(w);
                        continue 'grow;
                    }
                }
            }
            break;
        }
        if !reverse && members.len() > 1 {
            for &u in &members {
                for &(k, w, _) in &self.adj[u] {
                    if inside[w] && Self::degree(occ, u, w, self.edges[k].2) * sq > occ[w] as u128 {
                        return None;
                    }
                }
            }
        }
        members.sort_unstable();
        Some(members)
    }

    fn apply(occ: &[u64], members: &[usize], mv: Move) -> Vec<u64> {
        let mut next = occ.to_vec();
        let sq = mv.factor * mv.factor;
        for &v in members {
            next[v] = if mv.reverse { next[v] * sq } else { next[v] / sq };
        }
        next
    }
}

fn total(occ: &[u64]) -> u64 {
    occ.iter().sum()
}

/// Turns a move list into a trace by applying the public rules to `g`.
fn record(g: &PartitionedGraph, space: &Space, moves: &[Move]) -> Result<(PartitionedGraph, RewriteTrace), RewriteError> {
    let mut trace = RewriteTrace::start(g);
    let mut cur = g.clone();
    let mut occ = space.start.clone();
    for &mv in moves {
        let members = space.closure(&occ, mv).expect("moves come from the search");
        let rule = match (members.len(), mv.reverse) {
            (1, false) => Rule::Reduce,
            (1, true) => Rule::ReduceReverse,
            (_, false) => Rule::ReduceSubgraph,
            (_, true) => Rule::ReduceSubgraphReverse,
        };
        let targets = members.iter().map(|&v| g.nodes[v].id.clone()).collect();
        cur = trace.apply(&cur, rule, targets, Some(mv.factor), None)?;
        occ = Space::apply(&occ, &members, mv);
    }
    debug_assert_eq!(count(&cur), total(&occ));
    Ok((cur, trace))
}

pub fn reduce_search(g: &PartitionedGraph, opts: &SearchOptions) -> Result<SearchOutcome, RewriteError> {
    let space = Space::new(g, opts)?;
    let mut factors = opts.factors.clone();
    factors.sort_unstable();
    factors.dedup();
    // seeds in node-id order so that ties break the same way everywhere
    let mut seeds: Vec<u32> = (0..g.nodes.len() as u32).filter(|&v| space.movable[v as usize]).collect();
    seeds.sort_by(|&a, &b| g.nodes[a as usize].id.cmp(&g.nodes[b as usize].id));

    let (moves, complete, explored) = match opts.strategy {
        Strategy::Greedy => greedy(&space, &seeds, &factors, opts.budget),
        Strategy::Exhaustive => exhaustive(&space, &seeds, &factors, opts.budget, opts.allow_reverse),
    };
    let (graph, trace) = record(g, &space, &moves)?;
    Ok(SearchOutcome { graph, trace, complete, states_explored: explored })
}

fn candidate_moves<'a>(seeds: &'a [u32], factors: &'a [u64], reverse: bool) -> impl Iterator<Item = Move> + 'a {
    let dirs: &'static [bool] = if reverse { &[false, true] } else { &[false] };
    dirs.iter().flat_map(move |&r| seeds.iter().flat_map(move |&seed| factors.iter().map(move |&factor| Move { seed, factor, reverse: r })))
}

fn greedy(space: &Space, seeds: &[u32], factors: &[u64], budget: usize) -> (Vec<Move>, bool, usize) {
    let mut occ = space.start.clone();
    let mut moves = Vec::new();
    loop {
        let mut best: Option<(u64, Move, Vec<usize>)> = None;
        for mv in candidate_moves(seeds, factors, false) {
            let Some(members) = space.closure(&occ, mv) else { continue };
            let sq = mv.factor * mv.factor;
            let gain: u64 = members.iter().map(|&v| occ[v] - occ[v] / sq).sum();
            if best.as_ref().is_none_or(|b| gain > b.0) {
                best = Some((gain, mv, members));
            }
        }
        let Some((_, mv, members)) = best else {
            let n = moves.len();
            return (moves, true, n);
        };
        if moves.len() >= budget {
            return (moves, false, budget);
        }
        occ = Space::apply(&occ, &members, mv);
        moves.push(mv);
    }
}

fn exhaustive(space: &Space, seeds: &[u32], factors: &[u64], budget: usize, reverse: bool) -> (Vec<Move>, bool, usize) {
    // arena of (occupancies, parent, move from parent)
    let mut arena: Vec<(Box<[u64]>, u32, Option<Move>)> = vec![(space.start.clone().into_boxed_slice(), 0, None)];
    let mut seen: HashMap<Box<[u64]>, u32> = HashMap::from([(space.start.clone().into_boxed_slice(), 0)]);
    let mut queue = VecDeque::from([0u32]);
    let mut best = (total(&space.start), 0u32);
    let mut explored = 0;
    while let Some(id) = queue.pop_front() {
        if explored >= budget {
            queue.push_front(id);
            break;
        }
        explored += 1;
        let occ = arena[id as usize].0.clone();
        for mv in candidate_moves(seeds, factors, reverse) {
            let Some(members) = space.closure(&occ, mv) else { continue };
            let next = Space::apply(&occ, &members, mv).into_boxed_slice();
            if seen.contains_key(&next) {
                continue;
            }
            let nid = arena.len() as u32;
            let t = total(&next);
            if t < best.0 {
                best = (t, nid);
            }
            seen.insert(next.clone(), nid);
            arena.push((next, id, Some(mv)));
            queue.push_back(nid);
        }
    }
    let mut moves = Vec::new();
    let mut at = best.1;
    while let Some(mv) = arena[at as usize].2 {
        moves.push(mv);
        at = arena[at as usize].1;
    }
    moves.reverse();
    (moves, queue.is_empty(), explored)
}
