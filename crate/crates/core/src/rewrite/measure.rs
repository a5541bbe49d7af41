//! The termination measure φ and its structural counters.

use serde::Serialize;

use crate::semantics::admits_empty_trace;
use crate::tree::{size, Operator, ProcessTree};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Helpers {
    /// Node count.
    pub n: u64,
    /// Pairs of an or-node and a τ leaf somewhere below it.
    pub c_or: u64,
    /// Loop nodes whose body admits the empty trace.
    pub lbe: u64,
    /// Interleaved nodes.
    pub o_int: u64,
    /// Nodes whose parent is a concurrent node.
    pub p_con: u64,
}

pub fn count_helpers(tree: &ProcessTree) -> Helpers {
    let mut h = Helpers::default();
    walk(tree, 0, false, &mut h);
    h
}

fn walk(tree: &ProcessTree, or_above: u64, parent_con: bool, h: &mut Helpers) {
    h.n += 1;
    if parent_con {
        h.p_con += 1;
    }
    match tree {
        ProcessTree::Activity(_) => {}
        ProcessTree::Tau => h.c_or += or_above,
        ProcessTree::Node(op, children) => {
            match op {
                Operator::Interleaved => h.o_int += 1,
                Operator::Loop if admits_empty_trace(&children[0]) => h.lbe += 1,
                _ => {}
            }
            let below = or_above + u64::from(*op == Operator::Or);
            for child in children {
                walk(child, below, *op == Operator::Concurrent, h);
            }
        }
    }
}

/// The weight base used for a reduction starting from `tree`.
pub fn default_k(tree: &ProcessTree) -> u128 {
    let n = size(tree) as u128 + 2;
    n * n
}

/// `N + C_or·k + LBE·k³ + O_int·k⁴ + P_con·k⁵`, saturating at `u128::MAX`.
pub fn phi(k: u128, tree: &ProcessTree) -> u128 {
    phi_of(k, &count_helpers(tree))
}

pub fn phi_of(k: u128, h: &Helpers) -> u128 {
    let terms = [
        (h.n, 0u32),
        (h.c_or, 1),
        (h.lbe, 3),
        (h.o_int, 4),
        (h.p_con, 5),
    ];
    terms.iter().fold(0u128, |acc, &(count, exp)| {
        let weight = k.checked_pow(exp).unwrap_or(u128::MAX);
        acc.saturating_add(u128::from(count).saturating_mul(weight))
    })
}
