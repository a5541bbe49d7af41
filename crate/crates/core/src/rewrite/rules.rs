//! The eighteen reduction rules and their left-hand-side matching.
//!
//! In the rule patterns `…` stands for any number of further children. For
//! order-insensitive parents (xor, and, or, int and the redo children of a
//! loop) pattern roles may be filled by children at any position. Sequence
//! patterns are positional, except that a silent child of a sequence may be
//! removed wherever it sits.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::semantics::{admits_empty_trace, exceeds_empty, max_trace_length, ExtNat};
use crate::tree::{Operator, ProcessTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    /// `⊕(M) ⇒ M` for every operator but loop.
    S,
    /// `xor(…₁, xor(…₂)) ⇒ xor(…₁, …₂)`
    #[serde(rename = "A_Xor")]
    AXor,
    /// `seq(…₁, seq(…₂), …₃) ⇒ seq(…₁, …₂, …₃)`
    #[serde(rename = "A_Seq")]
    ASeq,
    /// `and(…₁, and(…₂)) ⇒ and(…₁, …₂)`
    #[serde(rename = "A_Con")]
    ACon,
    /// `or(…₁, or(…₂)) ⇒ or(…₁, …₂)`
    #[serde(rename = "A_Or")]
    AOr,
    /// `loop(loop(M, …₁), …₂) ⇒ loop(M, …₁, …₂)`
    #[serde(rename = "A_LoopB")]
    ALoopB,
    /// `loop(M, …₁, xor(…₂)) ⇒ loop(M, …₁, …₂)`
    #[serde(rename = "A_LoopR")]
    ALoopR,
    /// `seq(…, M, tau) ⇒ seq(…, M)`
    #[serde(rename = "T_Seq")]
    TSeq,
    /// `and(…, M, tau) ⇒ and(…, M)`
    #[serde(rename = "T_Con")]
    TCon,
    /// `int(…, M, tau) ⇒ int(…, M)`
    #[serde(rename = "T_Int")]
    TInt,
    /// `loop(tau, tau) ⇒ tau`
    #[serde(rename = "T_LoopBR")]
    TLoopBR,
    /// `xor(…, Q, tau) ⇒ xor(…, Q)` where Q admits the empty trace.
    #[serde(rename = "T_Xor")]
    TXor,
    /// `loop(M, …, Q, tau) ⇒ loop(M, …, Q)` where redo Q admits the empty trace.
    #[serde(rename = "T_LoopR")]
    TLoopR,
    /// `or(…, M, tau) ⇒ xor(tau, or(…, M))`
    #[serde(rename = "T_Or")]
    TOr,
    /// `or(…₁, xor(…₂, M, tau)) ⇒ xor(tau, or(…₁, xor(…₂, M)))`
    #[serde(rename = "T_OrXor")]
    TOrXor,
    /// `loop(tau, …, P) ⇒ xor(tau, loop(xor(…, P), tau))` where P has a
    /// non-empty trace.
    #[serde(rename = "T_LoopB")]
    TLoopB,
    /// `int(S₁, …, Sₙ) ⇒ and(S₁, …, Sₙ)` where no child has a trace longer
    /// than one event.
    #[serde(rename = "C_Int")]
    CInt,
    /// `and(…, Q₁, Q₂) ⇒ and(…, or(Q₁, Q₂))` where both Q admit the empty trace.
    #[serde(rename = "C_Or")]
    COr,
}

impl RuleId {
    /// Every rule, in the order the deterministic engine tries them.
    pub const ALL: [RuleId; 18] = [
        RuleId::S,
        RuleId::AXor,
        RuleId::ASeq,
        RuleId::ACon,
        RuleId::AOr,
        RuleId::ALoopB,
        RuleId::ALoopR,
        RuleId::TSeq,
        RuleId::TCon,
        RuleId::TInt,
        RuleId::TLoopBR,
        RuleId::TXor,
        RuleId::TLoopR,
        RuleId::TOr,
        RuleId::TOrXor,
        RuleId::TLoopB,
        RuleId::CInt,
        RuleId::COr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::S => "S",
            RuleId::AXor => "A_Xor",
            RuleId::ASeq => "A_Seq",
            RuleId::ACon => "A_Con",
            RuleId::AOr => "A_Or",
            RuleId::ALoopB => "A_LoopB",
            RuleId::ALoopR => "A_LoopR",
            RuleId::TSeq => "T_Seq",
            RuleId::TCon => "T_Con",
            RuleId::TInt => "T_Int",
            RuleId::TLoopBR => "T_LoopBR",
            RuleId::TXor => "T_Xor",
            RuleId::TLoopR => "T_LoopR",
            RuleId::TOr => "T_Or",
            RuleId::TOrXor => "T_OrXor",
            RuleId::TLoopB => "T_LoopB",
            RuleId::CInt => "C_Int",
            RuleId::COr => "C_Or",
        }
    }

    /// Rules that restructure loop nodes.
    pub fn touches_loops(self) -> bool {
        matches!(
            self,
            RuleId::ALoopB | RuleId::ALoopR | RuleId::TLoopBR | RuleId::TLoopR | RuleId::TLoopB
        )
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown rule {s:?}"))
    }
}

/// Every distinct right-hand side `rule` produces at the root of `tree`.
///
/// Several results arise when pattern roles can be filled in more than one
/// way, e.g. which nested xor child an associativity step flattens.
pub fn rewrites(rule: RuleId, tree: &ProcessTree) -> Vec<ProcessTree> {
    let ProcessTree::Node(op, children) = tree else {
        return Vec::new();
    };
    let op = *op;
    let mut out = Vec::new();
    let mut push = |candidate: ProcessTree| {
        if !out.contains(&candidate) {
            out.push(candidate);
        }
    };
    match rule {
        RuleId::S => {
            if op != Operator::Loop && children.len() == 1 {
                push(children[0].clone());
            }
        }
        RuleId::AXor | RuleId::ASeq | RuleId::ACon | RuleId::AOr => {
            let target = match rule {
                RuleId::AXor => Operator::Xor,
                RuleId::ASeq => Operator::Seq,
                RuleId::ACon => Operator::Concurrent,
                _ => Operator::Or,
            };
            if op == target {
                for (i, child) in children.iter().enumerate() {
                    if child.is_op(target) {
                        push(ProcessTree::Node(op, splice(children, i, child.children())));
                    }
                }
            }
        }
        RuleId::ALoopB => {
            if op == Operator::Loop && children[0].is_op(Operator::Loop) {
                let mut flat = children[0].children().to_vec();
                flat.extend_from_slice(&children[1..]);
                push(ProcessTree::Node(Operator::Loop, flat));
            }
        }
        RuleId::ALoopR => {
            if op == Operator::Loop {
                for (i, child) in children.iter().enumerate().skip(1) {
                    if child.is_op(Operator::Xor) {
                        push(ProcessTree::Node(op, splice(children, i, child.children())));
                    }
                }
            }
        }
        RuleId::TSeq | RuleId::TCon | RuleId::TInt => {
            let target = match rule {
                RuleId::TSeq => Operator::Seq,
                RuleId::TCon => Operator::Concurrent,
                _ => Operator::Interleaved,
            };
            if op == target && children.len() >= 2 {
                for (i, child) in children.iter().enumerate() {
                    if child.is_tau() {
                        push(ProcessTree::Node(op, without(children, i)));
                    }
                }
            }
        }
        RuleId::TLoopBR => {
            if op == Operator::Loop && children.len() == 2 && children.iter().all(ProcessTree::is_tau) {
                push(ProcessTree::Tau);
            }
        }
        RuleId::TXor => {
            if op == Operator::Xor {
                for (i, child) in children.iter().enumerate() {
                    let other_skip = children
                        .iter()
                        .enumerate()
                        .any(|(j, q)| j != i && admits_empty_trace(q));
                    if child.is_tau() && other_skip {
                        push(ProcessTree::Node(op, without(children, i)));
                    }
                }
            }
        }
        RuleId::TLoopR => {
            if op == Operator::Loop {
                for (i, child) in children.iter().enumerate().skip(1) {
                    let other_skip = children
                        .iter()
                        .enumerate()
                        .skip(1)
                        .any(|(j, q)| j != i && admits_empty_trace(q));
                    if child.is_tau() && other_skip {
                        push(ProcessTree::Node(op, without(children, i)));
                    }
                }
            }
        }
        RuleId::TOr => {
            if op == Operator::Or && children.len() >= 2 {
                for (i, child) in children.iter().enumerate() {
                    if child.is_tau() {
                        push(skip(ProcessTree::Node(Operator::Or, without(children, i))));
                    }
                }
            }
        }
        RuleId::TOrXor => {
            if op == Operator::Or {
                for (i, child) in children.iter().enumerate() {
                    let ProcessTree::Node(Operator::Xor, inner) = child else {
                        continue;
                    };
                    if inner.len() < 2 {
                        continue;
                    }
                    for (j, grandchild) in inner.iter().enumerate() {
                        if grandchild.is_tau() {
                            let mut outer = children.clone();
                            outer[i] = ProcessTree::Node(Operator::Xor, without(inner, j));
                            push(skip(ProcessTree::Node(Operator::Or, outer)));
                        }
                    }
                }
            }
        }
        RuleId::TLoopB => {
            if op == Operator::Loop && children[0].is_tau() && children[1..].iter().any(exceeds_empty) {
                let body = ProcessTree::Node(Operator::Xor, children[1..].to_vec());
                push(skip(ProcessTree::Node(
                    Operator::Loop,
                    vec![body, ProcessTree::Tau],
                )));
            }
        }
        RuleId::CInt => {
            let short = |c: &ProcessTree| max_trace_length(c) <= ExtNat::Finite(1);
            if op == Operator::Interleaved && children.iter().all(short) {
                push(ProcessTree::Node(Operator::Concurrent, children.clone()));
            }
        }
        RuleId::COr => {
            if op == Operator::Concurrent {
                let skippable: Vec<usize> = (0..children.len())
                    .filter(|&i| admits_empty_trace(&children[i]))
                    .collect();
                for (x, &i) in skippable.iter().enumerate() {
                    for &j in &skippable[x + 1..] {
                        let mut rest: Vec<ProcessTree> = children
                            .iter()
                            .enumerate()
                            .filter(|(k, _)| *k != i && *k != j)
                            .map(|(_, c)| c.clone())
                            .collect();
                        rest.push(ProcessTree::Node(
                            Operator::Or,
                            vec![children[i].clone(), children[j].clone()],
                        ));
                        push(ProcessTree::Node(op, rest));
                    }
                }
            }
        }
    }
    out
}

fn skip(tree: ProcessTree) -> ProcessTree {
    ProcessTree::Node(Operator::Xor, vec![ProcessTree::Tau, tree])
}

fn without(children: &[ProcessTree], index: usize) -> Vec<ProcessTree> {
    let mut out = children.to_vec();
    out.remove(index);
    out
}

fn splice(children: &[ProcessTree], index: usize, inner: &[ProcessTree]) -> Vec<ProcessTree> {
    let mut out = Vec::with_capacity(children.len() + inner.len());
    out.extend_from_slice(&children[..index]);
    out.extend_from_slice(inner);
    out.extend_from_slice(&children[index + 1..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_tree;
    use crate::tree::canonicalize;

    fn t(text: &str) -> ProcessTree {
        parse_tree(text).unwrap()
    }

    fn first(rule: RuleId, text: &str) -> Option<ProcessTree> {
        rewrites(rule, &t(text)).into_iter().next()
    }

    #[test]
    fn singularity() {
        assert_eq!(first(RuleId::S, "xor(seq(a))"), Some(t("seq(a)")));
        assert_eq!(first(RuleId::S, "int(a)"), Some(t("a")));
        assert_eq!(first(RuleId::S, "loop(a,b)"), None);
        assert_eq!(first(RuleId::S, "xor(a,b)"), None);
    }

    #[test]
    fn associativity() {
        assert_eq!(first(RuleId::AXor, "xor(a,xor(b,c))"), Some(t("xor(a,b,c)")));
        assert_eq!(first(RuleId::ASeq, "seq(a,seq(b,c),d)"), Some(t("seq(a,b,c,d)")));
        assert_eq!(first(RuleId::ACon, "and(and(a,b),c)"), Some(t("and(a,b,c)")));
        assert_eq!(first(RuleId::AOr, "or(a,or(b))"), Some(t("or(a,b)")));
        assert_eq!(first(RuleId::ALoopB, "loop(loop(a,b),c)"), Some(t("loop(a,b,c)")));
        assert_eq!(first(RuleId::ALoopR, "loop(a,xor(c,d),b)"), Some(t("loop(a,c,d,b)")));
        assert_eq!(first(RuleId::ALoopR, "loop(xor(a,b),c)"), None);
        assert_eq!(rewrites(RuleId::AXor, &t("xor(xor(a),xor(b))")).len(), 2);
    }

    #[test]
    fn silent_removal() {
        assert_eq!(first(RuleId::TSeq, "seq(a,tau)"), Some(t("seq(a)")));
        assert_eq!(first(RuleId::TSeq, "seq(tau,a)"), Some(t("seq(a)")));
        assert_eq!(first(RuleId::TSeq, "seq(tau)"), None);
        assert_eq!(first(RuleId::TCon, "and(a,tau)"), Some(t("and(a)")));
        assert_eq!(first(RuleId::TInt, "int(tau,tau)"), Some(t("int(tau)")));
        assert_eq!(first(RuleId::TLoopBR, "loop(tau,tau)"), Some(t("tau")));
        assert_eq!(first(RuleId::TLoopBR, "loop(tau,tau,tau)"), None);
    }

    #[test]
    fn double_skips() {
        assert_eq!(first(RuleId::TXor, "xor(a,tau)"), None);
        assert_eq!(first(RuleId::TXor, "xor(loop(tau,a),tau,b)"), Some(t("xor(loop(tau,a),b)")));
        assert_eq!(first(RuleId::TXor, "xor(tau,tau)"), Some(t("xor(tau)")));
        assert_eq!(first(RuleId::TLoopR, "loop(tau,a,tau,tau)"), Some(t("loop(tau,a,tau)")));
        assert_eq!(first(RuleId::TLoopR, "loop(tau,a,tau)"), None);
        // The body does not count as a skipping redo.
        assert_eq!(first(RuleId::TLoopR, "loop(tau,tau,a)"), None);
    }

    #[test]
    fn pulling_up() {
        assert_eq!(first(RuleId::TOr, "or(a,tau)"), Some(t("xor(tau,or(a))")));
        assert_eq!(first(RuleId::TOr, "or(tau)"), None);
        assert_eq!(
            first(RuleId::TOrXor, "or(b,xor(a,tau))"),
            Some(t("xor(tau,or(b,xor(a)))"))
        );
        assert_eq!(first(RuleId::TOrXor, "or(b,xor(tau))"), None);
        assert_eq!(
            first(RuleId::TLoopB, "loop(tau,a)"),
            Some(t("xor(tau,loop(xor(a),tau))"))
        );
        assert_eq!(first(RuleId::TLoopB, "loop(tau,tau)"), None);
        assert_eq!(first(RuleId::TLoopB, "loop(a,b)"), None);
    }

    #[test]
    fn implicit_concurrency() {
        assert_eq!(first(RuleId::CInt, "int(a,xor(tau,b))"), Some(t("and(a,xor(tau,b))")));
        assert_eq!(first(RuleId::CInt, "int(a,seq(b,c))"), None);
        assert_eq!(first(RuleId::CInt, "int(a,loop(b,tau))"), None);
        assert_eq!(
            first(RuleId::COr, "and(xor(tau,a),xor(tau,b))").map(|r| canonicalize(&r)),
            Some(canonicalize(&t("and(or(xor(tau,a),xor(tau,b)))")))
        );
        assert_eq!(first(RuleId::COr, "and(xor(tau,a),b)"), None);
        assert_eq!(rewrites(RuleId::COr, &t("and(tau,tau,tau)")).len(), 1);
        assert_eq!(rewrites(RuleId::COr, &t("and(tau,xor(tau,a),loop(tau,b))")).len(), 3);
    }

    #[test]
    fn names_round_trip() {
        for rule in RuleId::ALL {
            assert_eq!(rule.name().parse::<RuleId>().unwrap(), rule);
            let json = serde_json::to_string(&rule).unwrap();
            assert_eq!(json, format!("\"{}\"", rule.name()));
        }
    }
}
