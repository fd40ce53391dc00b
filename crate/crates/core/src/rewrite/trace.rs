//! Replayable rewrite traces, stored as JSON lines.

use std::collections::BTreeSet;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::partition::PartitionedGraph;

use super::split::{apply_split, SplitPart};
use super::{delta_double, reduce_node, reduce_node_reverse, reduce_subgraph, reduce_subgraph_reverse, symmetrize_square, RewriteError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Reduce,
    ReduceReverse,
    ReduceSubgraph,
    ReduceSubgraphReverse,
    DeltaDouble,
    NodeSplit,
    Symmetrize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteStep {
    pub rule: Rule,
    #[serde(default)]
    pub targets: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parts: Option<Vec<SplitPart>>,
    /// Vertex counts around the step.
    pub before: u64,
    pub after: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Header {
    initial_hash: String,
    final_vertex_count: u64,
    steps: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RewriteTrace {
    pub initial_hash: String,
    pub steps: Vec<RewriteStep>,
    pub final_vertex_count: u64,
}

pub(crate) fn count(g: &PartitionedGraph) -> u64 {
    g.vertex_count().to_u64().unwrap_or(u64::MAX)
}

impl RewriteTrace {
    pub fn start(g: &PartitionedGraph) -> Self {
        RewriteTrace { initial_hash: g.content_hash(), steps: Vec::new(), final_vertex_count: count(g) }
    }

    /// Applies `step` to `g` and records it on success.
    pub fn apply(
        &mut self,
        g: &PartitionedGraph,
        rule: Rule,
        targets: Vec<String>,
        factor: Option<u64>,
        parts: Option<Vec<SplitPart>>,
    ) -> Result<PartitionedGraph, RewriteError> {
        let mut step = RewriteStep { rule, targets, factor, parts, before: count(g), after: 0 };
        let next = apply_step(g, &step)?;
        step.after = count(&next);
        self.final_vertex_count = step.after;
        self.steps.push(step);
        Ok(next)
    }

    /// Header line, then one line per step.
    pub fn to_jsonl(&self) -> String {
        let header =
            Header { initial_hash: self.initial_hash.clone(), final_vertex_count: self.final_vertex_count, steps: self.steps.len() };
        let mut out = serde_json::to_string(&header).expect("serializable");
        out.push('\n');
        for s in &self.steps {
            out.push_str(&serde_json::to_string(s).expect("serializable"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self, RewriteError> {
        let bad = |e: serde_json::Error| RewriteError::TraceMismatch(format!("malformed trace: {e}"));
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Header =
            serde_json::from_str(lines.next().ok_or_else(|| RewriteError::TraceMismatch("empty trace".into()))?).map_err(bad)?;
        let steps = lines.map(|l| serde_json::from_str(l).map_err(bad)).collect::<Result<Vec<RewriteStep>, _>>()?;
        if steps.len() != header.steps {
            return Err(RewriteError::TraceMismatch(format!("header announces {} steps, found {}", header.steps, steps.len())));
        }
        Ok(RewriteTrace { initial_hash: header.initial_hash, steps, final_vertex_count: header.final_vertex_count })
    }
}

fn apply_step(g: &PartitionedGraph, step: &RewriteStep) -> Result<PartitionedGraph, RewriteError> {
    let factor = || step.factor.ok_or_else(|| RewriteError::TraceMismatch(format!("{:?} step without a factor", step.rule)));
    let target = || match step.targets.as_slice() {
        [t] => Ok(t.as_str()),
        _ => Err(RewriteError::TraceMismatch(format!("{:?} step needs exactly one target", step.rule))),
    };
    let set = || step.targets.iter().cloned().collect::<BTreeSet<String>>();
    match step.rule {
        Rule::Reduce => reduce_node(g, target()?, factor()?),
        Rule::ReduceReverse => reduce_node_reverse(g, target()?, factor()?),
        Rule::ReduceSubgraph => reduce_subgraph(g, &set(), factor()?),
        Rule::ReduceSubgraphReverse => reduce_subgraph_reverse(g, &set(), factor()?),
        Rule::DeltaDouble => delta_double(g),
        Rule::Symmetrize => symmetrize_square(g),
        Rule::NodeSplit => {
            let parts = step.parts.as_deref().ok_or_else(|| RewriteError::TraceMismatch("split step without parts".into()))?;
            apply_split(g, target()?, parts)
        }
    }
}

/// Re-applies every step of `trace` to `g`, checking the recorded counts.
pub fn replay(g: &PartitionedGraph, trace: &RewriteTrace) -> Result<PartitionedGraph, RewriteError> {
    if g.content_hash() != trace.initial_hash {
        return Err(RewriteError::TraceMismatch("initial graph hash differs".into()));
    }
    let mut cur = g.clone();
    for (i, step) in trace.steps.iter().enumerate() {
        if count(&cur) != step.before {
            return Err(RewriteError::TraceMismatch(format!("step {i}: expected {} vertices before, have {}", step.before, count(&cur))));
        }
        cur = apply_step(&cur, step)?;
        if count(&cur) != step.after {
            return Err(RewriteError::TraceMismatch(format!("step {i}: expected {} vertices after, have {}", step.after, count(&cur))));
        }
    }
    if count(&cur) != trace.final_vertex_count {
        return Err(RewriteError::TraceMismatch("final vertex count differs".into()));
    }
    Ok(cur)
}
