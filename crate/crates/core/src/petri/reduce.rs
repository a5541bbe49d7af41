//! Silent-transition reduction rules for workflow nets.
//!
//! Rules are tried in [`NetRuleId::ALL`] order and each applies to its first
//! match in element-id order. Every rule removes at least one node, so
//! reduction takes at most `|P| + |T|` steps. Source and sink are never
//! removed: when a place fusion involves one of them the fused place keeps
//! its id, and fusions that would give the source an incoming arc or the sink
//! an outgoing arc are skipped.

use std::fmt;

use serde::Serialize;

use super::{Arcs, PetriNet, WorkflowNet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum NetRuleId {
    /// Fusion of series places, the place before the transition has it as
    /// its only output.
    #[serde(rename = "FSP1")]
    Fsp1,
    /// Fusion of series places, the place after the transition has it as its
    /// only input.
    #[serde(rename = "FSP2")]
    Fsp2,
    /// Fusion of a silent transition into its single successor transition.
    #[serde(rename = "FST1")]
    Fst1,
    /// Fusion of a silent transition into its single predecessor transition.
    #[serde(rename = "FST2")]
    Fst2,
    /// Fusion of silent transitions with equal pre- and post-sets.
    #[serde(rename = "FRT")]
    Frt,
    /// Fusion of places with equal pre- and post-sets.
    #[serde(rename = "FRP")]
    Frp,
    /// Removal of a silent transition whose post-set equals its pre-set.
    #[serde(rename = "SLT")]
    Slt,
}

impl NetRuleId {
    pub const ALL: [NetRuleId; 7] = [
        NetRuleId::Fsp1,
        NetRuleId::Fsp2,
        NetRuleId::Fst1,
        NetRuleId::Fst2,
        NetRuleId::Frt,
        NetRuleId::Frp,
        NetRuleId::Slt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NetRuleId::Fsp1 => "FSP1",
            NetRuleId::Fsp2 => "FSP2",
            NetRuleId::Fst1 => "FST1",
            NetRuleId::Fst2 => "FST2",
            NetRuleId::Frt => "FRT",
            NetRuleId::Frp => "FRP",
            NetRuleId::Slt => "SLT",
        }
    }
}

impl fmt::Display for NetRuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NetStep {
    pub rule: NetRuleId,
    /// Matched elements in pattern order, e.g. `[p1, t, p2]` for FSP1.
    pub elements: Vec<String>,
}

/// Applies net rules until none matches.
pub fn reduce_net(wf: &WorkflowNet) -> (WorkflowNet, Vec<NetStep>) {
    let mut current = wf.clone();
    let mut steps = Vec::new();
    while let Some((next, step)) = reduce_net_step(&current) {
        current = next;
        steps.push(step);
    }
    (current, steps)
}

/// The first applicable rule at its first match.
pub fn reduce_net_step(wf: &WorkflowNet) -> Option<(WorkflowNet, NetStep)> {
    NetRuleId::ALL.into_iter().find_map(|rule| apply_net_rule(wf, rule))
}

/// Applies `rule` at its first match, if any.
pub fn apply_net_rule(wf: &WorkflowNet, rule: NetRuleId) -> Option<(WorkflowNet, NetStep)> {
    let elements = find(wf, rule)?;
    let mut next = wf.clone();
    let n = &mut next.net;
    match rule {
        NetRuleId::Fsp1 | NetRuleId::Fsp2 => {
            let (p1, t, p2) = (&elements[0], &elements[1], &elements[2]);
            let keep = if *p2 == wf.sink { p2 } else { p1 };
            let drop = if keep == p1 { p2 } else { p1 };
            let mut inputs = without(n.preset(p1), t);
            merge(&mut inputs, &without(n.preset(p2), t));
            let mut outputs = without(n.postset(p1), t);
            merge(&mut outputs, &without(n.postset(p2), t));
            n.remove_node(t);
            n.remove_node(drop);
            n.remove_node(keep);
            n.add_place(keep).expect("place id is free");
            connect(n, keep, &inputs, &outputs);
        }
        NetRuleId::Fst1 => {
            let (t1, p, t2) = (&elements[0], &elements[1], &elements[2]);
            let mut inputs = n.preset(t1).clone();
            merge(&mut inputs, &without(n.preset(t2), p));
            let outputs = n.postset(t2).clone();
            let label = n.label(t2).cloned();
            for id in [t1, p, t2] {
                n.remove_node(id);
            }
            n.add_transition(t2, label).expect("transition id is free");
            connect(n, t2, &inputs, &outputs);
        }
        NetRuleId::Fst2 => {
            let (t1, p, t2) = (&elements[0], &elements[1], &elements[2]);
            let inputs = n.preset(t1).clone();
            let mut outputs = without(n.postset(t1), p);
            merge(&mut outputs, n.postset(t2));
            let label = n.label(t1).cloned();
            for id in [t1, p, t2] {
                n.remove_node(id);
            }
            n.add_transition(t1, label).expect("transition id is free");
            connect(n, t1, &inputs, &outputs);
        }
        NetRuleId::Frt | NetRuleId::Frp => n.remove_node(&elements[1]),
        NetRuleId::Slt => n.remove_node(&elements[0]),
    }
    Some((
        next,
        NetStep {
            rule,
            elements: elements.clone(),
        },
    ))
}

fn without(arcs: &Arcs, id: &str) -> Arcs {
    let mut out = arcs.clone();
    out.remove(id);
    out
}

fn merge(into: &mut Arcs, from: &Arcs) {
    for (id, w) in from {
        *into.entry(id.clone()).or_default() += w;
    }
}

fn connect(net: &mut PetriNet, node: &str, inputs: &Arcs, outputs: &Arcs) {
    for (from, w) in inputs {
        net.add_arc(from, node, *w).expect("neighbour still present");
    }
    for (to, w) in outputs {
        net.add_arc(node, to, *w).expect("neighbour still present");
    }
}

fn single(arcs: &Arcs) -> Option<(&str, u32)> {
    (arcs.len() == 1).then(|| arcs.iter().next().map(|(id, w)| (id.as_str(), *w)))?
}

fn find(wf: &WorkflowNet, rule: NetRuleId) -> Option<Vec<String>> {
    let net = &wf.net;
    let silent = || net.transitions().keys().filter(|t| net.is_silent(t));
    let ids = |items: &[&str]| Some(items.iter().map(|s| s.to_string()).collect());
    match rule {
        NetRuleId::Fsp1 | NetRuleId::Fsp2 => {
            for t in silent() {
                let (Some((p1, 1)), Some((p2, 1))) = (single(net.preset(t)), single(net.postset(t))) else {
                    continue;
                };
                if p1 == p2 || (p1 == wf.source && p2 == wf.sink) {
                    continue;
                }
                let p1_only_t = single(net.postset(p1)).is_some_and(|(x, _)| x == t);
                let p2_only_t = single(net.preset(p2)).is_some_and(|(x, _)| x == t);
                let ok = match rule {
                    NetRuleId::Fsp1 => p1_only_t && (p1 != wf.source || p2_only_t),
                    _ => p2_only_t && (p2 != wf.sink || p1_only_t),
                };
                if ok {
                    return ids(&[p1, t, p2]);
                }
            }
            None
        }
        NetRuleId::Fst1 => {
            for t1 in silent() {
                let Some((p, w1)) = single(net.postset(t1)) else { continue };
                let Some((from, _)) = single(net.preset(p)) else { continue };
                let Some((t2, w2)) = single(net.postset(p)) else { continue };
                // Only the ratio one: a larger ratio would let one firing of
                // t1 stand in for several of t2.
                if from == t1 && t2 != t1 && w1 == w2 {
                    return ids(&[t1, p, t2]);
                }
            }
            None
        }
        NetRuleId::Fst2 => {
            for t2 in silent() {
                let Some((p, w2)) = single(net.preset(t2)) else { continue };
                let Some((t1, w1)) = single(net.preset(p)) else { continue };
                let Some((to, _)) = single(net.postset(p)) else { continue };
                if to == t2 && t1 != t2 && w1 == w2 {
                    return ids(&[t1, p, t2]);
                }
            }
            None
        }
        NetRuleId::Frt => {
            let all: Vec<&String> = silent().collect();
            for (i, t1) in all.iter().enumerate() {
                for t2 in &all[i + 1..] {
                    if net.preset(t1) == net.preset(t2) && net.postset(t1) == net.postset(t2) {
                        return ids(&[t1, t2]);
                    }
                }
            }
            None
        }
        NetRuleId::Frp => {
            let all: Vec<&String> = net
                .places()
                .iter()
                .filter(|p| **p != wf.source && **p != wf.sink)
                .collect();
            for (i, p1) in all.iter().enumerate() {
                for p2 in &all[i + 1..] {
                    if net.preset(p1) == net.preset(p2) && net.postset(p1) == net.postset(p2) {
                        return ids(&[p1, p2]);
                    }
                }
            }
            None
        }
        NetRuleId::Slt => silent()
            .find(|t| net.preset(t) == net.postset(t))
            .and_then(|t| ids(&[t])),
    }
}
