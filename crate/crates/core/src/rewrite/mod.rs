//! Rule matching, single-step application and exhaustive reduction.
//!
//! The deterministic strategy scans positions in depth-first, left-to-right
//! pre-order and, at each position, tries rules in [`RuleId::ALL`] order. The
//! first match is applied, taking the first variant [`rewrites`] yields.

mod measure;
mod rules;

pub use measure::{count_helpers, default_k, phi, phi_of, Helpers};
pub use rules::{rewrites, RuleId};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::RewriteError;
use crate::tree::{size, ProcessTree, TreePath};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RewriteStep {
    pub rule: RuleId,
    #[serde(rename = "path")]
    pub position: TreePath,
    pub size_before: usize,
    pub size_after: usize,
    pub phi_before: u128,
    pub phi_after: u128,
}

impl RewriteStep {
    pub fn phi_decreased(&self) -> bool {
        self.phi_after < self.phi_before
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<RewriteStep>,
    pub k_used: u128,
}

impl ReductionTrace {
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }
}

/// `{"steps": [...], "summary": {"steps": n, "k": k}}`
impl Serialize for ReductionTrace {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Summary {
            steps: usize,
            k: u128,
        }
        let mut s = serializer.serialize_struct("ReductionTrace", 2)?;
        s.serialize_field("steps", &self.steps)?;
        s.serialize_field(
            "summary",
            &Summary {
                steps: self.steps.len(),
                k: self.k_used,
            },
        )?;
        s.end()
    }
}

/// The replacement for the subtree at `position` if `rule` matches there.
pub fn match_at(rule: RuleId, tree: &ProcessTree, position: &TreePath) -> Option<ProcessTree> {
    rewrites(rule, tree.get(position)?).into_iter().next()
}

/// One possible rewrite of a tree: the rule, where it applies and the result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Redex {
    pub rule: RuleId,
    pub position: TreePath,
    pub replacement: ProcessTree,
}

/// Every applicable (rule, position, variant) triple, in engine order.
pub fn redexes(tree: &ProcessTree) -> Vec<Redex> {
    let mut out = Vec::new();
    for position in tree.positions() {
        let subtree = tree.get(&position).expect("position from positions()");
        for rule in RuleId::ALL {
            for replacement in rewrites(rule, subtree) {
                out.push(Redex {
                    rule,
                    position: position.clone(),
                    replacement,
                });
            }
        }
    }
    out
}

pub fn is_normal_form(tree: &ProcessTree) -> bool {
    first_redex(tree).is_none()
}

fn first_redex(tree: &ProcessTree) -> Option<Redex> {
    for position in tree.positions() {
        let subtree = tree.get(&position).expect("position from positions()");
        for rule in RuleId::ALL {
            if let Some(replacement) = rewrites(rule, subtree).into_iter().next() {
                return Some(Redex {
                    rule,
                    position,
                    replacement,
                });
            }
        }
    }
    None
}

/// Applies `redex` to `tree`, recording sizes and φ under weight base `k`.
pub fn apply_redex(tree: &ProcessTree, redex: &Redex, k: u128) -> (ProcessTree, RewriteStep) {
    let next = tree
        .replaced(&redex.position, redex.replacement.clone())
        .expect("redex position is valid");
    let step = RewriteStep {
        rule: redex.rule,
        position: redex.position.clone(),
        size_before: size(tree),
        size_after: size(&next),
        phi_before: phi(k, tree),
        phi_after: phi(k, &next),
    };
    (next, step)
}

/// One deterministic rewrite step; `None` iff `tree` is in normal form.
///
/// φ values in the step use the weight base derived from `tree` itself.
pub fn apply_once(tree: &ProcessTree) -> Option<(ProcessTree, RewriteStep)> {
    let redex = first_redex(tree)?;
    Some(apply_redex(tree, &redex, default_k(tree)))
}

/// Rewrites to normal form with the deterministic strategy.
///
/// φ is recorded per step with `k = (size(input) + 2)²`. The only error is a
/// step count above `φ(k, input)`, which would mean non-termination.
pub fn reduce(tree: &ProcessTree) -> Result<(ProcessTree, ReductionTrace), RewriteError> {
    run(tree, false)
}

/// Like [`reduce`] but fails as soon as a step does not strictly decrease φ.
pub fn reduce_strict(tree: &ProcessTree) -> Result<(ProcessTree, ReductionTrace), RewriteError> {
    run(tree, true)
}

fn run(tree: &ProcessTree, strict: bool) -> Result<(ProcessTree, ReductionTrace), RewriteError> {
    let k = default_k(tree);
    let budget = phi(k, tree);
    let mut current = tree.clone();
    let mut trace = ReductionTrace {
        steps: Vec::new(),
        k_used: k,
    };
    while let Some(redex) = first_redex(&current) {
        if trace.steps.len() as u128 >= budget {
            return Err(RewriteError::StepBudgetExceeded { budget });
        }
        let (next, step) = apply_redex(&current, &redex, k);
        if strict && !step.phi_decreased() {
            return Err(RewriteError::MeasureNotDecreasing {
                step: trace.steps.len(),
                rule: step.rule.to_string(),
                before: step.phi_before,
                after: step.phi_after,
            });
        }
        trace.steps.push(step);
        current = next;
    }
    Ok((current, trace))
}

/// Normal form only; panics if the step budget is exceeded.
pub fn normal_form(tree: &ProcessTree) -> ProcessTree {
    reduce(tree).expect("reduction terminates").0
}
