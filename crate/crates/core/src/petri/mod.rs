//! Labelled Petri nets with weighted arcs, workflow nets and their firing rule.

mod export;
mod language;
mod reduce;
mod translate;

pub use export::{export_dot, NetJson};
pub use language::{enumerate_net_language, DEFAULT_STATE_CAP};
pub use reduce::{apply_net_rule, reduce_net, reduce_net_step, NetRuleId, NetStep};
pub use translate::tree_to_net;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::NetError;
use crate::tree::Activity;

/// Weighted inputs or outputs of one node, keyed by the neighbour id.
pub type Arcs = BTreeMap<String, u32>;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PetriNet {
    places: BTreeSet<String>,
    /// Transition id to label; `None` is a silent transition.
    transitions: BTreeMap<String, Option<Activity>>,
    inputs: BTreeMap<String, Arcs>,
    outputs: BTreeMap<String, Arcs>,
}

impl PetriNet {
    pub fn new() -> Self {
        PetriNet::default()
    }

    pub fn add_place(&mut self, id: &str) -> Result<(), NetError> {
        if self.transitions.contains_key(id) {
            return Err(NetError::Invalid(format!("{id} is already a transition")));
        }
        self.places.insert(id.to_string());
        self.inputs.entry(id.to_string()).or_default();
        self.outputs.entry(id.to_string()).or_default();
        Ok(())
    }

    pub fn add_transition(&mut self, id: &str, label: Option<Activity>) -> Result<(), NetError> {
        if self.places.contains(id) {
            return Err(NetError::Invalid(format!("{id} is already a place")));
        }
        self.transitions.insert(id.to_string(), label);
        self.inputs.entry(id.to_string()).or_default();
        self.outputs.entry(id.to_string()).or_default();
        Ok(())
    }

    /// Adds `weight` to the arc `from -> to`, creating it if needed.
    pub fn add_arc(&mut self, from: &str, to: &str, weight: u32) -> Result<(), NetError> {
        let place_to_transition = self.places.contains(from) && self.transitions.contains_key(to);
        let transition_to_place = self.transitions.contains_key(from) && self.places.contains(to);
        if !self.contains(from) {
            return Err(NetError::UnknownNode(from.to_string()));
        }
        if !self.contains(to) {
            return Err(NetError::UnknownNode(to.to_string()));
        }
        if !(place_to_transition || transition_to_place) {
            return Err(NetError::Invalid(format!("arc {from} -> {to} must join a place and a transition")));
        }
        if weight == 0 {
            return Err(NetError::Invalid(format!("arc {from} -> {to} has weight 0")));
        }
        *self.outputs.get_mut(from).expect("node exists").entry(to.to_string()).or_default() += weight;
        *self.inputs.get_mut(to).expect("node exists").entry(from.to_string()).or_default() += weight;
        Ok(())
    }

    /// Removes a node and every arc touching it.
    pub fn remove_node(&mut self, id: &str) {
        self.places.remove(id);
        self.transitions.remove(id);
        for neighbour in self.inputs.remove(id).unwrap_or_default().keys() {
            if let Some(out) = self.outputs.get_mut(neighbour) {
                out.remove(id);
            }
        }
        for neighbour in self.outputs.remove(id).unwrap_or_default().keys() {
            if let Some(inp) = self.inputs.get_mut(neighbour) {
                inp.remove(id);
            }
        }
    }

    pub fn contains(&self, id: &str) -> bool {
        self.places.contains(id) || self.transitions.contains_key(id)
    }

    pub fn is_place(&self, id: &str) -> bool {
        self.places.contains(id)
    }

    pub fn is_transition(&self, id: &str) -> bool {
        self.transitions.contains_key(id)
    }

    pub fn places(&self) -> &BTreeSet<String> {
        &self.places
    }

    pub fn transitions(&self) -> &BTreeMap<String, Option<Activity>> {
        &self.transitions
    }

    pub fn label(&self, transition: &str) -> Option<&Activity> {
        self.transitions.get(transition).and_then(Option::as_ref)
    }

    pub fn is_silent(&self, transition: &str) -> bool {
        matches!(self.transitions.get(transition), Some(None))
    }

    /// Pre-set `•x` with arc weights.
    pub fn preset(&self, id: &str) -> &Arcs {
        static EMPTY: Arcs = BTreeMap::new();
        self.inputs.get(id).unwrap_or(&EMPTY)
    }

    /// Post-set `x•` with arc weights.
    pub fn postset(&self, id: &str) -> &Arcs {
        static EMPTY: Arcs = BTreeMap::new();
        self.outputs.get(id).unwrap_or(&EMPTY)
    }

    /// Every arc as `(from, to, weight)`, ordered by source then target.
    pub fn arcs(&self) -> impl Iterator<Item = (&str, &str, u32)> {
        self.outputs
            .iter()
            .flat_map(|(from, outs)| outs.iter().map(move |(to, w)| (from.as_str(), to.as_str(), *w)))
    }

    pub fn arc_count(&self) -> usize {
        self.outputs.values().map(BTreeMap::len).sum()
    }

    /// Labelled transition ids.
    pub fn labelled_transitions(&self) -> BTreeSet<String> {
        self.transitions
            .iter()
            .filter(|(_, l)| l.is_some())
            .map(|(id, _)| id.clone())
            .collect()
    }
}

/// Token counts per place; places without tokens are absent.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Marking(BTreeMap<String, u32>);

impl Marking {
    pub fn new() -> Self {
        Marking::default()
    }

    pub fn single(place: &str) -> Self {
        Marking(BTreeMap::from([(place.to_string(), 1)]))
    }

    pub fn tokens(&self, place: &str) -> u32 {
        self.0.get(place).copied().unwrap_or(0)
    }

    pub fn add(&mut self, place: &str, count: u32) {
        if count > 0 {
            *self.0.entry(place.to_string()).or_default() += count;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> {
        self.0.iter().map(|(p, n)| (p.as_str(), *n))
    }
}

pub fn is_enabled(net: &PetriNet, m: &Marking, transition: &str) -> bool {
    net.is_transition(transition) && net.preset(transition).iter().all(|(p, w)| m.tokens(p) >= *w)
}

pub fn enabled(net: &PetriNet, m: &Marking) -> BTreeSet<String> {
    net.transitions()
        .keys()
        .filter(|t| is_enabled(net, m, t))
        .cloned()
        .collect()
}

pub fn fire(net: &PetriNet, m: &Marking, transition: &str) -> Result<Marking, NetError> {
    if !net.is_transition(transition) {
        return Err(NetError::UnknownNode(transition.to_string()));
    }
    if !is_enabled(net, m, transition) {
        return Err(NetError::NotEnabled(transition.to_string()));
    }
    let mut next = m.clone();
    for (p, w) in net.preset(transition) {
        let left = next.tokens(p) - w;
        if left == 0 {
            next.0.remove(p);
        } else {
            next.0.insert(p.clone(), left);
        }
    }
    for (p, w) in net.postset(transition) {
        next.add(p, *w);
    }
    Ok(next)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkflowNet {
    pub net: PetriNet,
    pub source: String,
    pub sink: String,
}

impl WorkflowNet {
    pub fn initial_marking(&self) -> Marking {
        Marking::single(&self.source)
    }

    pub fn final_marking(&self) -> Marking {
        Marking::single(&self.sink)
    }
}

/// `|P| + |T| + |arcs|`, arc weights not counted.
pub fn net_size(wf: &WorkflowNet) -> usize {
    wf.net.places().len() + wf.net.transitions().len() + wf.net.arc_count()
}

/// Checks the workflow-net conditions; an empty result means the net is valid.
pub fn validate_workflow(net: &PetriNet, source: &str, sink: &str) -> Vec<String> {
    let mut violations = Vec::new();
    for (role, id) in [("source", source), ("sink", sink)] {
        if !net.is_place(id) {
            violations.push(format!("{role} {id} is not a place"));
        }
    }
    if !violations.is_empty() {
        return violations;
    }
    if source == sink {
        violations.push("source and sink coincide".into());
    }
    if !net.preset(source).is_empty() {
        violations.push(format!("source {source} has incoming arcs"));
    }
    if !net.postset(sink).is_empty() {
        violations.push(format!("sink {sink} has outgoing arcs"));
    }
    let forward = reachable(source, |n| net.postset(n));
    let backward = reachable(sink, |n| net.preset(n));
    for id in net.places().iter().chain(net.transitions().keys()) {
        if !forward.contains(id.as_str()) {
            violations.push(format!("{id} is not reachable from the source"));
        } else if !backward.contains(id.as_str()) {
            violations.push(format!("{id} does not reach the sink"));
        }
    }
    violations
}

fn reachable<'a>(start: &'a str, next: impl Fn(&str) -> &'a Arcs) -> BTreeSet<&'a str> {
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(node) = queue.pop_front() {
        for neighbour in next(node).keys() {
            if seen.insert(neighbour.as_str()) {
                queue.push_back(neighbour.as_str());
            }
        }
    }
    seen
}
