//! Bounded enumeration of workflow-net languages.

use std::collections::hash_map::Entry;
use std::collections::BTreeMap;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{NetError, ResourceError};
use crate::semantics::{Trace, TraceSet};
use crate::tree::Activity;

use super::WorkflowNet;

/// Default cap on distinct (marking, visible length) states.
pub const DEFAULT_STATE_CAP: usize = 2_000_000;

/// Label code, inputs and outputs as (place index, weight).
type CompiledTransition = (Option<u16>, Vec<(usize, u32)>, Vec<(usize, u32)>);

struct Compiled {
    transitions: Vec<CompiledTransition>,
    labels: Vec<Activity>,
    /// Per place: transitions consuming from it.
    consumers: Vec<Vec<usize>>,
    /// Silent transitions that are the only consumer of each input place.
    eager: Vec<bool>,
    source: usize,
    sink: usize,
}

fn compile(wf: &WorkflowNet) -> Result<Compiled, NetError> {
    let index: BTreeMap<&str, usize> = wf
        .net
        .places()
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_str(), i))
        .collect();
    let lookup = |p: &str| index.get(p).copied().ok_or_else(|| NetError::UnknownNode(p.to_string()));
    let labels: Vec<Activity> = {
        let mut l: Vec<Activity> = wf.net.transitions().values().flatten().cloned().collect();
        l.sort();
        l.dedup();
        l
    };
    let mut transitions: Vec<CompiledTransition> = Vec::new();
    for (t, label) in wf.net.transitions() {
        let code = label
            .as_ref()
            .map(|a| labels.binary_search(a).expect("label collected") as u16);
        let pre = wf.net.preset(t).iter().map(|(p, w)| Ok((lookup(p)?, *w))).collect::<Result<_, NetError>>()?;
        let post = wf.net.postset(t).iter().map(|(p, w)| Ok((lookup(p)?, *w))).collect::<Result<_, NetError>>()?;
        transitions.push((code, pre, post));
    }
    let mut consumers: Vec<Vec<usize>> = vec![Vec::new(); index.len()];
    for (i, (_, pre, _)) in transitions.iter().enumerate() {
        for &(p, _) in pre {
            consumers[p].push(i);
        }
    }
    let sink = lookup(&wf.sink)?;
    let eager = transitions
        .iter()
        .enumerate()
        .map(|(i, (code, pre, _))| {
            code.is_none() && !pre.is_empty() && pre.iter().all(|&(p, _)| p != sink && consumers[p] == [i])
        })
        .collect();
    Ok(Compiled {
        transitions,
        consumers,
        eager,
        labels,
        source: lookup(&wf.source)?,
        sink,
    })
}

/// Sparse marking: (place, tokens) pairs with tokens > 0, sorted by place.
type Mark = Box<[(u32, u32)]>;
/// Trace ids per marking; ids index into a [`Trie`].
type Layer = FxHashMap<Mark, FxHashSet<u32>>;

/// Interned traces. Id 0 is the empty trace.
struct Trie {
    parent: Vec<(u32, u16)>,
    child: FxHashMap<(u32, u16), u32>,
}

impl Trie {
    fn new() -> Self {
        Trie {
            parent: vec![(0, 0)],
            child: FxHashMap::default(),
        }
    }

    fn extend(&mut self, id: u32, code: u16) -> u32 {
        let next = self.parent.len() as u32;
        *self.child.entry((id, code)).or_insert_with(|| {
            self.parent.push((id, code));
            next
        })
    }

    fn codes(&self, mut id: u32) -> Vec<u16> {
        let mut out = Vec::new();
        while id != 0 {
            let (p, c) = self.parent[id as usize];
            out.push(c);
            id = p;
        }
        out.reverse();
        out
    }
}

/// Visible traces of firing sequences from `[source]` to exactly `[sink]` with
/// at most `max_len` visible events.
///
/// Markings in which some place holds more than `marking_cap` tokens are
/// pruned. More than `state_cap` distinct (marking, visible length) states
/// give a resource error.
pub fn enumerate_net_language(
    wf: &WorkflowNet,
    max_len: usize,
    marking_cap: u32,
    state_cap: usize,
) -> Result<TraceSet, NetError> {
    let net = compile(wf)?;
    let initial: Mark = net.settle(Box::new([(net.source as u32, 1)]), marking_cap);
    let final_marking: Mark = Box::new([(net.sink as u32, 1)]);

    let mut trie = Trie::new();
    let mut states = 0usize;
    let mut out: FxHashSet<u32> = FxHashSet::default();
    let mut layer: Layer = FxHashMap::default();
    layer.insert(initial, FxHashSet::from_iter([0]));
    for length in 0..=max_len {
        silent_closure(&net, &mut layer, marking_cap, state_cap.saturating_sub(states))?;
        states += layer.len();
        if states > state_cap {
            return Err(state_error(state_cap));
        }
        if let Some(done) = layer.get(&final_marking) {
            out.extend(done.iter().copied());
        }
        if length == max_len {
            break;
        }
        let mut next: Layer = FxHashMap::default();
        let mut cands = Vec::new();
        for (m, traces) in &layer {
            net.candidates(m, &mut cands);
            for &t in &cands {
                let (code, pre, post) = &net.transitions[t];
                let Some(code) = code else { continue };
                let Some(m2) = fire(m, pre, post, marking_cap) else {
                    continue;
                };
                let m2 = net.settle(m2, marking_cap);
                let bucket = next.entry(m2).or_default();
                for &trace in traces {
                    bucket.insert(trie.extend(trace, *code));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        layer = next;
    }
    Ok(out
        .into_iter()
        .map(|id| Trace(trie.codes(id).into_iter().map(|c| net.labels[c as usize].clone()).collect()))
        .collect())
}

impl Compiled {
    /// Transitions with at least one input place marked in `m`, ascending.
    fn candidates(&self, m: &[(u32, u32)], out: &mut Vec<usize>) {
        out.clear();
        for &(p, _) in m {
            out.extend_from_slice(&self.consumers[p as usize]);
        }
        out.sort_unstable();
        out.dedup();
    }
}

impl Compiled {
    /// Fires eager transitions until none is enabled.
    ///
    /// An eager transition keeps its tokens until it fires and must fire in
    /// every run that reaches the final marking, so it can be moved to the
    /// front of any such run: the settled marking has the same language.
    fn settle(&self, mut m: Mark, cap: u32) -> Mark {
        let mut cands = Vec::new();
        let mut seen: Vec<Mark> = Vec::new();
        'outer: loop {
            self.candidates(&m, &mut cands);
            for &t in &cands {
                if !self.eager[t] {
                    continue;
                }
                let (_, pre, post) = &self.transitions[t];
                if let Some(next) = fire(&m, pre, post, cap) {
                    // A silent cycle of eager transitions: stop anywhere on it.
                    if seen.contains(&next) {
                        return m;
                    }
                    seen.push(m);
                    m = next;
                    continue 'outer;
                }
            }
            return m;
        }
    }
}

fn state_error(cap: usize) -> NetError {
    ResourceError { what: "net states", cap }.into()
}

fn tokens(m: &[(u32, u32)], place: usize) -> u32 {
    m.binary_search_by_key(&(place as u32), |e| e.0).map_or(0, |i| m[i].1)
}

fn fire(m: &Mark, pre: &[(usize, u32)], post: &[(usize, u32)], cap: u32) -> Option<Mark> {
    if pre.iter().any(|&(p, w)| tokens(m, p) < w) {
        return None;
    }
    let mut dense: Vec<(u32, u32)> = m.to_vec();
    for &(p, w) in pre {
        let i = dense.binary_search_by_key(&(p as u32), |e| e.0).expect("enabled");
        dense[i].1 -= w;
    }
    for &(p, w) in post {
        match dense.binary_search_by_key(&(p as u32), |e| e.0) {
            Ok(i) => dense[i].1 += w,
            Err(i) => dense.insert(i, (p as u32, w)),
        }
    }
    dense.retain(|e| e.1 > 0);
    if dense.iter().any(|e| e.1 > cap) {
        return None;
    }
    Some(dense.into_boxed_slice())
}

/// Propagates trace sets along silent firings until nothing new arrives.
/// Trace ids not yet pushed on from a marking are kept per marking, so each
/// marking is expanded once per batch.
fn silent_closure(net: &Compiled, layer: &mut Layer, cap: u32, state_cap: usize) -> Result<(), NetError> {
    let mut pending: FxHashMap<Mark, Vec<u32>> = layer
        .iter()
        .map(|(m, ts)| (m.clone(), ts.iter().copied().collect()))
        .collect();
    let mut queue: Vec<Mark> = pending.keys().cloned().collect();
    let mut cands = Vec::new();
    while let Some(m) = queue.pop() {
        let Some(delta) = pending.remove(&m) else { continue };
        net.candidates(&m, &mut cands);
        for &t in &cands {
            let (code, pre, post) = &net.transitions[t];
            if code.is_some() {
                continue;
            }
            let Some(m2) = fire(&m, pre, post, cap) else {
                continue;
            };
            let m2 = net.settle(m2, cap);
            let fresh: Vec<u32> = match layer.entry(m2.clone()) {
                Entry::Occupied(mut e) => delta.iter().copied().filter(|t| e.get_mut().insert(*t)).collect(),
                Entry::Vacant(e) => {
                    e.insert(delta.iter().copied().collect());
                    delta.clone()
                }
            };
            if layer.len() > state_cap {
                return Err(state_error(state_cap));
            }
            if fresh.is_empty() {
                continue;
            }
            match pending.entry(m2) {
                Entry::Occupied(mut e) => e.get_mut().extend(fresh),
                Entry::Vacant(e) => {
                    queue.push(e.key().clone());
                    e.insert(fresh);
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_tree;
    use crate::petri::tree_to_net;
    use crate::semantics::{enumerate_language, LangBound};

    fn net_lang(text: &str, len: usize) -> TraceSet {
        enumerate_net_language(&tree_to_net(&parse_tree(text).unwrap()), len, 4, DEFAULT_STATE_CAP).unwrap()
    }

    #[test]
    fn small_languages() {
        assert_eq!(net_lang("a", 4), [Trace::of(&["a"])].into_iter().collect());
        assert_eq!(net_lang("xor(tau,a)", 4), [Trace::empty(), Trace::of(&["a"])].into_iter().collect());
        assert_eq!(
            net_lang("loop(f,g)", 5),
            [Trace::of(&["f"]), Trace::of(&["f", "g", "f"]), Trace::of(&["f", "g", "f", "g", "f"])]
                .into_iter()
                .collect()
        );
    }

    #[test]
    fn agrees_with_tree_language() {
        for text in [
            "xor(and(int(a,b),c),seq(d,e),loop(f,g))",
            "or(a,int(b,c),tau)",
            "int(seq(a,b),c,loop(tau,d))",
            "loop(tau,or(a,b),tau)",
            "and(loop(a,tau),xor(b,tau))",
        ] {
            let tree = parse_tree(text).unwrap();
            let expected = enumerate_language(&tree, LangBound::saturated(6)).unwrap();
            assert_eq!(net_lang(text, 6), expected, "{text}");
        }
    }

    #[test]
    fn state_cap_is_enforced() {
        let wf = tree_to_net(&parse_tree("and(a,b,c,d)").unwrap());
        assert!(matches!(
            enumerate_net_language(&wf, 4, 4, 5),
            Err(NetError::Resource(_))
        ));
    }
}
