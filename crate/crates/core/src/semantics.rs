//! Trace-language semantics of process trees.
//!
//! Languages of trees with loops are infinite, so [`enumerate_language`] works
//! under a [`LangBound`]: traces longer than `max_trace_len` are dropped and each
//! execution of a loop performs at most `loop_unroll_depth` redo iterations.
//! Inside those limits enumeration is exact. A bound whose unroll depth is at
//! least its length limit loses nothing to the unroll limit (every redo
//! iteration that adds no event can be dropped from a derivation), see
//! [`LangBound::saturated`].
//!
//! The structural predicates ([`admits_empty_trace`], [`max_trace_length`],
//! [`start_activities`], [`end_activities`]) never enumerate.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Add;

use rustc_hash::FxHashSet;
use serde::{Serialize, Serializer};

use crate::error::ResourceError;
use crate::tree::{alphabet, Activity, Operator, ProcessTree};

/// Default cap on the number of traces held by one intermediate set.
pub const DEFAULT_TRACE_CAP: usize = 2_000_000;

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trace(pub Vec<Activity>);

impl Trace {
    pub fn empty() -> Self {
        Trace(Vec::new())
    }

    /// Builds a trace from activity names; panics on invalid names.
    pub fn of(names: &[&str]) -> Self {
        Trace(names.iter().map(|n| Activity::new(n).expect("valid activity")).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn events(&self) -> &[Activity] {
        &self.0
    }
}

/// Renders as `<a,b,c>`; the empty trace is `<>`.
impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(a.name())?;
        }
        f.write_str(">")
    }
}

impl Serialize for Trace {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

/// Finite set of traces; iterates and serializes in sorted order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct TraceSet(BTreeSet<Trace>);

impl TraceSet {
    pub fn new() -> Self {
        TraceSet(BTreeSet::new())
    }

    pub fn insert(&mut self, trace: Trace) -> bool {
        self.0.insert(trace)
    }

    pub fn contains(&self, trace: &Trace) -> bool {
        self.0.contains(trace)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Trace> {
        self.0.iter()
    }

    pub fn max_len(&self) -> Option<usize> {
        self.0.iter().map(Trace::len).max()
    }

    pub fn is_subset(&self, other: &TraceSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Traces in exactly one of the two sets.
    pub fn symmetric_difference<'a>(&'a self, other: &'a TraceSet) -> impl Iterator<Item = &'a Trace> {
        self.0.symmetric_difference(&other.0)
    }
}

impl FromIterator<Trace> for TraceSet {
    fn from_iter<I: IntoIterator<Item = Trace>>(iter: I) -> Self {
        TraceSet(iter.into_iter().collect())
    }
}

impl IntoIterator for TraceSet {
    type Item = Trace;
    type IntoIter = std::collections::btree_set::IntoIter<Trace>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl fmt::Display for TraceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LangBound {
    pub max_trace_len: usize,
    /// Redo iterations expanded per loop execution.
    pub loop_unroll_depth: usize,
}

impl LangBound {
    pub fn new(max_trace_len: usize, loop_unroll_depth: usize) -> Self {
        LangBound {
            max_trace_len,
            loop_unroll_depth,
        }
    }

    /// Bound whose unroll limit never cuts a trace within the length limit, so
    /// enumeration yields exactly the traces of length at most `max_trace_len`.
    pub fn saturated(max_trace_len: usize) -> Self {
        LangBound::new(max_trace_len, max_trace_len)
    }

    pub fn is_saturated(&self) -> bool {
        self.loop_unroll_depth >= self.max_trace_len
    }
}

impl fmt::Display for LangBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.max_trace_len, self.loop_unroll_depth)
    }
}

/// Natural number extended with infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtNat {
    Finite(u64),
    Infinite,
}

impl ExtNat {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtNat::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Finite(n) => Some(n),
            ExtNat::Infinite => None,
        }
    }
}

impl Add for ExtNat {
    type Output = ExtNat;

    fn add(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => ExtNat::Finite(a + b),
            _ => ExtNat::Infinite,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(n) => write!(f, "{n}"),
            ExtNat::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtNat::Finite(n) => serializer.serialize_u64(*n),
            ExtNat::Infinite => serializer.serialize_str("inf"),
        }
    }
}

/// Whether the empty trace is in the language, by structural recursion.
pub fn admits_empty_trace(tree: &ProcessTree) -> bool {
    match tree {
        ProcessTree::Activity(_) => false,
        ProcessTree::Tau => true,
        ProcessTree::Node(op, children) => match op {
            Operator::Xor | Operator::Or => children.iter().any(admits_empty_trace),
            Operator::Seq | Operator::Interleaved | Operator::Concurrent => {
                children.iter().all(admits_empty_trace)
            }
            Operator::Loop => children.first().is_some_and(admits_empty_trace),
        },
    }
}

/// Length of the longest trace; infinite for loops with any visible child.
pub fn max_trace_length(tree: &ProcessTree) -> ExtNat {
    match tree {
        ProcessTree::Activity(_) => ExtNat::Finite(1),
        ProcessTree::Tau => ExtNat::Finite(0),
        ProcessTree::Node(op, children) => {
            let lengths = children.iter().map(max_trace_length);
            match op {
                Operator::Xor => lengths.max().unwrap_or(ExtNat::Finite(0)),
                Operator::Seq | Operator::Interleaved | Operator::Concurrent | Operator::Or => {
                    lengths.fold(ExtNat::Finite(0), Add::add)
                }
                Operator::Loop => {
                    if lengths.max().unwrap_or(ExtNat::Finite(0)) >= ExtNat::Finite(1) {
                        ExtNat::Infinite
                    } else {
                        ExtNat::Finite(0)
                    }
                }
            }
        }
    }
}

/// Whether the language contains a non-empty trace.
pub fn exceeds_empty(tree: &ProcessTree) -> bool {
    max_trace_length(tree) >= ExtNat::Finite(1)
}

/// Activities that begin at least one non-empty trace.
pub fn start_activities(tree: &ProcessTree) -> BTreeSet<Activity> {
    boundary_activities(tree, Side::Start)
}

/// Activities that end at least one non-empty trace.
pub fn end_activities(tree: &ProcessTree) -> BTreeSet<Activity> {
    boundary_activities(tree, Side::End)
}

#[derive(Clone, Copy)]
enum Side {
    Start,
    End,
}

fn boundary_activities(tree: &ProcessTree, side: Side) -> BTreeSet<Activity> {
    match tree {
        ProcessTree::Activity(a) => BTreeSet::from([a.clone()]),
        ProcessTree::Tau => BTreeSet::new(),
        ProcessTree::Node(op, children) => match op {
            Operator::Xor | Operator::Or | Operator::Concurrent | Operator::Interleaved => children
                .iter()
                .flat_map(|c| boundary_activities(c, side))
                .collect(),
            Operator::Seq => {
                let mut out = BTreeSet::new();
                let ordered: Box<dyn Iterator<Item = &ProcessTree>> = match side {
                    Side::Start => Box::new(children.iter()),
                    Side::End => Box::new(children.iter().rev()),
                };
                for child in ordered {
                    out.extend(boundary_activities(child, side));
                    if !admits_empty_trace(child) {
                        break;
                    }
                }
                out
            }
            Operator::Loop => {
                let body = &children[0];
                let mut out = boundary_activities(body, side);
                if admits_empty_trace(body) {
                    for redo in &children[1..] {
                        out.extend(boundary_activities(redo, side));
                    }
                }
                out
            }
        },
    }
}

/// All interleavings of `left` and `right` preserving each one's order.
pub fn interleavings<T: Clone>(left: &[T], right: &[T], mut emit: impl FnMut(Vec<T>)) {
    fn go<T: Clone>(left: &[T], right: &[T], prefix: &mut Vec<T>, emit: &mut impl FnMut(Vec<T>)) {
        match (left.split_first(), right.split_first()) {
            (None, _) => {
                let mut out = prefix.clone();
                out.extend_from_slice(right);
                emit(out);
            }
            (_, None) => {
                let mut out = prefix.clone();
                out.extend_from_slice(left);
                emit(out);
            }
            (Some((l, left_rest)), Some((r, right_rest))) => {
                prefix.push(l.clone());
                go(left_rest, right, prefix, emit);
                prefix.pop();
                prefix.push(r.clone());
                go(left, right_rest, prefix, emit);
                prefix.pop();
            }
        }
    }
    go(left, right, &mut Vec::with_capacity(left.len() + right.len()), &mut emit);
}

/// Language shuffle of two trace sets, dropping results longer than `cap`.
pub fn shuffle(s1: &TraceSet, s2: &TraceSet, cap: usize) -> TraceSet {
    let mut out = TraceSet::new();
    for t1 in s1.iter() {
        for t2 in s2.iter() {
            if t1.len() + t2.len() <= cap {
                interleavings(t1.events(), t2.events(), |t| {
                    out.insert(Trace(t));
                });
            }
        }
    }
    out
}

/// Traces of the tree within `bound`, with the default set-size cap.
pub fn enumerate_language(tree: &ProcessTree, bound: LangBound) -> Result<TraceSet, ResourceError> {
    enumerate_language_capped(tree, bound, DEFAULT_TRACE_CAP)
}

/// Traces of the tree within `bound`; fails once any intermediate set holds
/// more than `trace_cap` traces.
pub fn enumerate_language_capped(
    tree: &ProcessTree,
    bound: LangBound,
    trace_cap: usize,
) -> Result<TraceSet, ResourceError> {
    let symbols: Vec<Activity> = alphabet(tree).into_iter().collect();
    let enumerator = Enumerator {
        symbols: &symbols,
        bound,
        cap: trace_cap,
    };
    let words = enumerator.language(tree)?;
    Ok(words
        .into_iter()
        .map(|w| Trace(w.into_iter().map(|s| symbols[s as usize].clone()).collect()))
        .collect())
}

type Word = Vec<u16>;
type Words = FxHashSet<Word>;

/// Words grouped by length, dropping those longer than `limit`.
fn by_length(words: &Words, limit: usize) -> Vec<Vec<&Word>> {
    let mut out = vec![Vec::new(); limit + 1];
    for w in words {
        if w.len() <= limit {
            out[w.len()].push(w);
        }
    }
    out
}

struct Enumerator<'a> {
    symbols: &'a [Activity],
    bound: LangBound,
    cap: usize,
}

impl Enumerator<'_> {
    fn check(&self, words: &Words) -> Result<(), ResourceError> {
        if words.len() > self.cap {
            Err(ResourceError {
                what: "trace set",
                cap: self.cap,
            })
        } else {
            Ok(())
        }
    }

    fn epsilon() -> Words {
        Words::from_iter([Word::new()])
    }

    fn language(&self, tree: &ProcessTree) -> Result<Words, ResourceError> {
        let limit = self.bound.max_trace_len;
        match tree {
            ProcessTree::Tau => Ok(Self::epsilon()),
            ProcessTree::Activity(a) => {
                let code = self
                    .symbols
                    .binary_search(a)
                    .expect("symbol table covers the alphabet") as u16;
                Ok(if limit >= 1 {
                    Words::from_iter([vec![code]])
                } else {
                    Words::default()
                })
            }
            ProcessTree::Node(op, children) => {
                let langs = children
                    .iter()
                    .map(|c| self.language(c))
                    .collect::<Result<Vec<_>, _>>()?;
                match op {
                    Operator::Xor => {
                        let mut out = Words::default();
                        for lang in langs {
                            out.extend(lang);
                            self.check(&out)?;
                        }
                        Ok(out)
                    }
                    Operator::Seq => {
                        let mut out = Self::epsilon();
                        for lang in &langs {
                            out = self.concat(&out, lang)?;
                        }
                        Ok(out)
                    }
                    Operator::Concurrent => {
                        let mut out = Self::epsilon();
                        for lang in &langs {
                            out = self.shuffle(&out, lang)?;
                        }
                        Ok(out)
                    }
                    Operator::Interleaved => self.interleaved(&langs),
                    Operator::Or => self.inclusive(&langs),
                    Operator::Loop => self.repeat(&langs[0], &langs[1..]),
                }
            }
        }
    }

    fn concat(&self, left: &Words, right: &Words) -> Result<Words, ResourceError> {
        let limit = self.bound.max_trace_len;
        let by_len = by_length(right, limit);
        let mut out = Words::default();
        for l in left {
            for r in by_len.iter().take(limit + 1 - l.len().min(limit + 1)).flatten() {
                let mut w = Vec::with_capacity(l.len() + r.len());
                w.extend_from_slice(l);
                w.extend_from_slice(r);
                out.insert(w);
            }
            self.check(&out)?;
        }
        Ok(out)
    }

    fn shuffle(&self, left: &Words, right: &Words) -> Result<Words, ResourceError> {
        let limit = self.bound.max_trace_len;
        let by_len = by_length(right, limit);
        let mut out = Words::default();
        for l in left {
            for r in by_len.iter().take(limit + 1 - l.len().min(limit + 1)).flatten() {
                interleavings(l, r, |w| {
                    out.insert(w);
                });
            }
            self.check(&out)?;
        }
        Ok(out)
    }

    /// Union over child orders of their sequential composition, computed over
    /// subsets: `I(S) = ⋃_{i ∈ S} L_i · I(S \ {i})`.
    fn interleaved(&self, langs: &[Words]) -> Result<Words, ResourceError> {
        let n = langs.len();
        let mut by_subset: Vec<Words> = vec![Words::default(); 1 << n];
        by_subset[0] = Self::epsilon();
        for subset in 1usize..(1 << n) {
            let mut acc = Words::default();
            for (i, lang) in langs.iter().enumerate() {
                if subset & (1 << i) != 0 {
                    acc.extend(self.concat(lang, &by_subset[subset & !(1 << i)])?);
                    self.check(&acc)?;
                }
            }
            by_subset[subset] = acc;
        }
        Ok(by_subset.pop().expect("full subset"))
    }

    /// Union over non-empty child subsets of their concurrent composition.
    fn inclusive(&self, langs: &[Words]) -> Result<Words, ResourceError> {
        let n = langs.len();
        let mut by_subset: Vec<Words> = vec![Words::default(); 1 << n];
        by_subset[0] = Self::epsilon();
        let mut out = Words::default();
        for subset in 1usize..(1 << n) {
            let lowest = subset.trailing_zeros() as usize;
            let shuffled = self.shuffle(&by_subset[subset & !(1 << lowest)], &langs[lowest])?;
            out.extend(shuffled.iter().cloned());
            self.check(&out)?;
            by_subset[subset] = shuffled;
        }
        Ok(out)
    }

    /// `body · (redo · body)^k` for `k` up to the unroll depth, stopping early
    /// once another iteration adds nothing. Each iteration only extends the
    /// words first produced by the previous one.
    fn repeat(&self, body: &Words, redos: &[Words]) -> Result<Words, ResourceError> {
        let mut redo = Words::default();
        for lang in redos {
            redo.extend(lang.iter().cloned());
        }
        let step = self.concat(&redo, body)?;
        let mut current = body.clone();
        let mut frontier = body.clone();
        for _ in 0..self.bound.loop_unroll_depth {
            let extended = self.concat(&frontier, &step)?;
            frontier = extended.into_iter().filter(|w| !current.contains(w)).collect();
            if frontier.is_empty() {
                break;
            }
            current.extend(frontier.iter().cloned());
            self.check(&current)?;
        }
        Ok(current)
    }
}
