//! Class-C membership and language-preserving inflation.
//!
//! Class C is the set of reduced trees for which normal forms are canonical:
//! two members with equal languages reduce to the same tree up to child order.
//! [`inflate`] runs reduction rules backwards to produce larger trees with the
//! same language, which is what the completeness checks feed to the engine.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::CompletenessError;
use crate::rewrite::apply_once;
use crate::semantics::{
    admits_empty_trace, end_activities, exceeds_empty, max_trace_length, start_activities, ExtNat,
};
use crate::tree::{alphabet, Activity, Operator, ProcessTree, TreePath};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Condition {
    #[serde(rename = "dup-activities")]
    DupActivities,
    #[serde(rename = "i.start-end")]
    StartEnd,
    #[serde(rename = "ii.nested-int")]
    NestedInt,
    #[serde(rename = "iii.optional-int")]
    OptionalInt,
    #[serde(rename = "iv.con-or-child")]
    ConOrChild,
    #[serde(rename = "l.i.con-body")]
    ConBody,
    #[serde(rename = "l.ii.redo-empty")]
    RedoEmpty,
}

impl Condition {
    pub fn id(self) -> &'static str {
        match self {
            Condition::DupActivities => "dup-activities",
            Condition::StartEnd => "i.start-end",
            Condition::NestedInt => "ii.nested-int",
            Condition::OptionalInt => "iii.optional-int",
            Condition::ConOrChild => "iv.con-or-child",
            Condition::ConBody => "l.i.con-body",
            Condition::RedoEmpty => "l.ii.redo-empty",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassCViolation {
    pub path: TreePath,
    pub condition: Condition,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassCVerdict {
    pub member: bool,
    pub violations: Vec<ClassCViolation>,
}

/// Checks class-C membership of a tree in normal form.
pub fn in_class_c(tree: &ProcessTree) -> Result<ClassCVerdict, CompletenessError> {
    if let Some((_, step)) = apply_once(tree) {
        return Err(CompletenessError::NotReduced {
            rule: step.rule.to_string(),
            path: step.position.to_string(),
        });
    }
    Ok(class_c_violations(tree))
}

/// The membership check without the normal-form precondition.
pub fn class_c_violations(tree: &ProcessTree) -> ClassCVerdict {
    let mut violations = Vec::new();
    for path in tree.positions() {
        check_node(tree.get(&path).expect("valid position"), &path, &mut violations);
    }
    ClassCVerdict {
        member: violations.is_empty(),
        violations,
    }
}

fn disjoint_start_end(tree: &ProcessTree) -> bool {
    start_activities(tree).is_disjoint(&end_activities(tree))
}

fn check_node(tree: &ProcessTree, path: &TreePath, out: &mut Vec<ClassCViolation>) {
    let ProcessTree::Node(op, children) = tree else {
        return;
    };
    let mut push = |path: TreePath, condition: Condition, message: String| {
        out.push(ClassCViolation {
            path,
            condition,
            message,
        })
    };

    let alphabets: Vec<BTreeSet<Activity>> = children.iter().map(alphabet).collect();
    for i in 0..children.len() {
        for j in i + 1..children.len() {
            let shared: Vec<&str> = alphabets[i].intersection(&alphabets[j]).map(Activity::name).collect();
            if !shared.is_empty() {
                push(
                    path.clone(),
                    Condition::DupActivities,
                    format!("children {i} and {j} share {}", shared.join(",")),
                );
            }
        }
    }

    match op {
        Operator::Interleaved => {
            if !children.iter().any(disjoint_start_end) {
                push(
                    path.clone(),
                    Condition::StartEnd,
                    "no child has disjoint start and end activities".into(),
                );
            }
            for (i, child) in children.iter().enumerate() {
                match child {
                    ProcessTree::Node(Operator::Interleaved, _) => push(
                        path.child(i),
                        Condition::NestedInt,
                        "interleaved child of an interleaved node".into(),
                    ),
                    ProcessTree::Node(Operator::Xor, inner)
                        if inner.len() == 2
                            && inner.iter().any(ProcessTree::is_tau)
                            && inner.iter().any(|c| c.is_op(Operator::Interleaved)) =>
                    {
                        push(
                            path.child(i),
                            Condition::OptionalInt,
                            "optional interleaved child of an interleaved node".into(),
                        )
                    }
                    ProcessTree::Node(Operator::Concurrent | Operator::Or, inner)
                        if !inner.iter().any(disjoint_start_end) =>
                    {
                        push(
                            path.child(i),
                            Condition::ConOrChild,
                            "no grandchild has disjoint start and end activities".into(),
                        )
                    }
                    _ => {}
                }
            }
        }
        Operator::Loop => {
            if children[0].is_op(Operator::Concurrent) {
                push(path.child(0), Condition::ConBody, "loop body is concurrent".into());
            }
            for (i, redo) in children.iter().enumerate().skip(1) {
                if admits_empty_trace(redo) {
                    push(path.child(i), Condition::RedoEmpty, "redo child admits the empty trace".into());
                }
            }
        }
        _ => {}
    }
}

/// The inverse moves [`inflate`] draws from, one per reduction rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Move {
    WrapSingleton,
    Nest,
    NestLoopBody,
    NestRedos,
    InsertTau,
    LoopOfTaus,
    InsertSkip,
    PushTauIntoOr,
    PushTauIntoOrXor,
    UnpullLoop,
    ToInterleaved,
    SplitOr,
}

const MOVES: [Move; 12] = [
    Move::WrapSingleton,
    Move::Nest,
    Move::NestLoopBody,
    Move::NestRedos,
    Move::InsertTau,
    Move::LoopOfTaus,
    Move::InsertSkip,
    Move::PushTauIntoOr,
    Move::PushTauIntoOrXor,
    Move::UnpullLoop,
    Move::ToInterleaved,
    Move::SplitOr,
];

/// Applies `steps` random inverse rule applications, each preserving the
/// language. Steps without an applicable move at the drawn position are
/// skipped. Deterministic for a given seed.
pub fn inflate(tree: &ProcessTree, seed: u64, steps: usize) -> ProcessTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = tree.clone();
    for _ in 0..steps {
        current = inflate_step(&current, &mut rng).unwrap_or(current);
    }
    current
}

/// One random inverse rule application, if the drawn position admits one.
pub fn inflate_step(tree: &ProcessTree, rng: &mut impl Rng) -> Option<ProcessTree> {
    let positions = tree.positions();
    let position = positions.choose(rng)?;
    let subtree = tree.get(position)?;
    let mut moves = MOVES.to_vec();
    moves.shuffle(rng);
    moves
        .into_iter()
        .find_map(|m| inverse(m, subtree, rng))
        .and_then(|replacement| tree.replaced(position, replacement))
}

fn inverse(m: Move, tree: &ProcessTree, rng: &mut impl Rng) -> Option<ProcessTree> {
    let children = tree.children();
    let op = tree.operator();
    match m {
        Move::WrapSingleton => {
            let wrappers = [
                Operator::Xor,
                Operator::Seq,
                Operator::Interleaved,
                Operator::Concurrent,
                Operator::Or,
            ];
            let wrapper = *wrappers.choose(rng)?;
            Some(ProcessTree::Node(wrapper, vec![tree.clone()]))
        }
        Move::Nest => {
            let op = op.filter(|o| {
                matches!(o, Operator::Xor | Operator::Seq | Operator::Concurrent | Operator::Or)
            })?;
            let n = children.len();
            if op == Operator::Seq {
                let start = rng.gen_range(0..n);
                let end = rng.gen_range(start + 1..=n);
                let mut out = children[..start].to_vec();
                out.push(ProcessTree::Node(op, children[start..end].to_vec()));
                out.extend_from_slice(&children[end..]);
                Some(ProcessTree::Node(op, out))
            } else {
                let (inner, mut rest) = random_split(children, 1, n, rng);
                let at = rng.gen_range(0..=rest.len());
                rest.insert(at, ProcessTree::Node(op, inner));
                Some(ProcessTree::Node(op, rest))
            }
        }
        Move::NestLoopBody => {
            if op != Some(Operator::Loop) || children.len() < 3 {
                return None;
            }
            let redos = &children[1..];
            let (inner, outer) = random_split(redos, 1, redos.len() - 1, rng);
            let mut body = vec![children[0].clone()];
            body.extend(inner);
            let mut out = vec![ProcessTree::Node(Operator::Loop, body)];
            out.extend(outer);
            Some(ProcessTree::Node(Operator::Loop, out))
        }
        Move::NestRedos => {
            if op != Some(Operator::Loop) {
                return None;
            }
            let redos = &children[1..];
            let (inner, mut rest) = random_split(redos, 1, redos.len(), rng);
            let at = rng.gen_range(0..=rest.len());
            rest.insert(at, ProcessTree::Node(Operator::Xor, inner));
            let mut out = vec![children[0].clone()];
            out.extend(rest);
            Some(ProcessTree::Node(Operator::Loop, out))
        }
        Move::InsertTau => {
            let op = op.filter(|o| matches!(o, Operator::Seq | Operator::Concurrent | Operator::Interleaved))?;
            let mut out = children.to_vec();
            out.insert(rng.gen_range(0..=out.len()), ProcessTree::Tau);
            Some(ProcessTree::Node(op, out))
        }
        Move::LoopOfTaus => tree
            .is_tau()
            .then(|| ProcessTree::Node(Operator::Loop, vec![ProcessTree::Tau, ProcessTree::Tau])),
        Move::InsertSkip => match op? {
            Operator::Xor if children.iter().any(admits_empty_trace) => {
                let mut out = children.to_vec();
                out.insert(rng.gen_range(0..=out.len()), ProcessTree::Tau);
                Some(ProcessTree::Node(Operator::Xor, out))
            }
            Operator::Loop if children[1..].iter().any(admits_empty_trace) => {
                let mut out = children.to_vec();
                out.insert(rng.gen_range(1..=out.len()), ProcessTree::Tau);
                Some(ProcessTree::Node(Operator::Loop, out))
            }
            _ => None,
        },
        Move::PushTauIntoOr => {
            let or_children = optional_or(tree)?;
            let mut out = or_children.to_vec();
            out.insert(rng.gen_range(0..=out.len()), ProcessTree::Tau);
            Some(ProcessTree::Node(Operator::Or, out))
        }
        Move::PushTauIntoOrXor => {
            let or_children = optional_or(tree)?;
            let xors: Vec<usize> = (0..or_children.len())
                .filter(|&i| or_children[i].is_op(Operator::Xor))
                .collect();
            let &i = xors.choose(rng)?;
            let mut inner = or_children[i].children().to_vec();
            inner.insert(rng.gen_range(0..=inner.len()), ProcessTree::Tau);
            let mut out = or_children.to_vec();
            out[i] = ProcessTree::Node(Operator::Xor, inner);
            Some(ProcessTree::Node(Operator::Or, out))
        }
        Move::UnpullLoop => {
            let loop_node = optional_child(tree)?;
            match loop_node {
                ProcessTree::Node(Operator::Loop, lc) if lc.len() == 2 && lc[1].is_tau() => {
                    let ProcessTree::Node(Operator::Xor, redos) = &lc[0] else {
                        return None;
                    };
                    if !redos.iter().any(exceeds_empty) {
                        return None;
                    }
                    let mut out = vec![ProcessTree::Tau];
                    out.extend_from_slice(redos);
                    Some(ProcessTree::Node(Operator::Loop, out))
                }
                _ => None,
            }
        }
        Move::ToInterleaved => {
            let short = |c: &ProcessTree| max_trace_length(c) <= ExtNat::Finite(1);
            (op == Some(Operator::Concurrent) && children.iter().all(short))
                .then(|| ProcessTree::Node(Operator::Interleaved, children.to_vec()))
        }
        Move::SplitOr => {
            if op != Some(Operator::Concurrent) {
                return None;
            }
            let candidates: Vec<usize> = (0..children.len())
                .filter(|&i| match &children[i] {
                    ProcessTree::Node(Operator::Or, q) => q.len() == 2 && q.iter().all(admits_empty_trace),
                    _ => false,
                })
                .collect();
            let &i = candidates.choose(rng)?;
            let mut out = children.to_vec();
            let pair = out.remove(i).children().to_vec();
            out.extend(pair);
            Some(ProcessTree::Node(Operator::Concurrent, out))
        }
    }
}

/// For `xor(tau, X)` returns `X`.
fn optional_child(tree: &ProcessTree) -> Option<&ProcessTree> {
    match tree {
        ProcessTree::Node(Operator::Xor, c) if c.len() == 2 => match (&c[0], &c[1]) {
            (ProcessTree::Tau, other) | (other, ProcessTree::Tau) => Some(other),
            _ => None,
        },
        _ => None,
    }
}

/// For `xor(tau, or(…))` returns the children of the or-node.
fn optional_or(tree: &ProcessTree) -> Option<&[ProcessTree]> {
    optional_child(tree)
        .filter(|c| c.is_op(Operator::Or))
        .map(ProcessTree::children)
}

/// Random split of `items` into a chosen part of size `lo..=hi` and the rest,
/// both keeping their relative order.
fn random_split(
    items: &[ProcessTree],
    lo: usize,
    hi: usize,
    rng: &mut impl Rng,
) -> (Vec<ProcessTree>, Vec<ProcessTree>) {
    let count = rng.gen_range(lo..=hi);
    let mut picked: Vec<usize> = rand::seq::index::sample(rng, items.len(), count).into_vec();
    picked.sort_unstable();
    let (mut chosen, mut rest) = (Vec::new(), Vec::new());
    for (i, item) in items.iter().enumerate() {
        if picked.binary_search(&i).is_ok() {
            chosen.push(item.clone());
        } else {
            rest.push(item.clone());
        }
    }
    (chosen, rest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_tree;
    use crate::rewrite::normal_form;
    use crate::semantics::{enumerate_language, LangBound};
    use crate::tree::{canonicalize, validate};

    fn t(text: &str) -> ProcessTree {
        parse_tree(text).unwrap()
    }

    fn conditions(text: &str) -> Vec<&'static str> {
        in_class_c(&t(text))
            .unwrap()
            .violations
            .iter()
            .map(|v| v.condition.id())
            .collect()
    }

    #[test]
    fn verdicts() {
        assert_eq!(conditions("loop(a,tau)"), vec!["l.ii.redo-empty"]);
        assert!(conditions("int(int(seq(a,b),c),d)").contains(&"ii.nested-int"));
        assert!(conditions("xor(and(a,b,c),seq(d,e),loop(f,g))").is_empty());
        assert_eq!(conditions("and(a,a)"), vec!["dup-activities"]);
        assert_eq!(conditions("loop(and(a,b),c)"), vec!["l.i.con-body"]);
        assert_eq!(conditions("int(loop(a,b),seq(c,d))"), Vec::<&str>::new());
        assert_eq!(conditions("int(loop(a,b),loop(c,d))"), vec!["i.start-end"]);
        assert!(conditions("int(seq(a,b),xor(tau,int(seq(c,d),e)))").contains(&"iii.optional-int"));
        assert!(conditions("int(seq(a,b),and(loop(c,d),loop(e,f)))").contains(&"iv.con-or-child"));
    }

    #[test]
    fn verdict_json() {
        let v = in_class_c(&t("xor(a,loop(b,tau))")).unwrap();
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["member"], false);
        assert_eq!(json["violations"][0]["path"], "1/1");
        assert_eq!(json["violations"][0]["condition"], "l.ii.redo-empty");
    }

    #[test]
    fn unchecked_verdict_on_reducible_tree() {
        // C_Int applies to this tree, so only the unchecked entry point takes it.
        let tree = t("int(int(a,b),c)");
        assert!(in_class_c(&tree).is_err());
        let v = class_c_violations(&tree);
        assert!(!v.member);
        assert!(v.violations.iter().any(|v| v.condition == Condition::NestedInt));
    }

    #[test]
    fn requires_normal_form() {
        assert!(matches!(
            in_class_c(&t("xor(a)")),
            Err(CompletenessError::NotReduced { .. })
        ));
    }

    #[test]
    fn inflation_preserves_language_and_normal_form() {
        let base = t("xor(and(a,b,c),seq(d,e),loop(f,g))");
        let bound = LangBound::saturated(6);
        let lang = enumerate_language(&base, bound).unwrap();
        for seed in 0..40 {
            let big = inflate(&base, seed, 25);
            assert!(validate(&big).is_empty());
            assert_eq!(enumerate_language(&big, bound).unwrap(), lang, "seed {seed}: {big}");
            assert_eq!(canonicalize(&normal_form(&big)), canonicalize(&base), "seed {seed}: {big}");
        }
    }

    #[test]
    fn inflation_is_deterministic() {
        let base = t("seq(a,b)");
        assert_eq!(inflate(&base, 3, 10), inflate(&base, 3, 10));
        assert_eq!(inflate(&base, 3, 0), base);
    }
}
