//! Brute-force checks of the reduction rules on random trees.
//!
//! Everything here is deterministic given its seed. Trials run in parallel,
//! each with its own generator seeded from the probe seed and the trial index,
//! and failures are sorted before reporting.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{ResourceError, RewriteError};
use crate::rewrite::{default_k, phi, redexes, reduce, rewrites, RuleId};
use crate::semantics::{
    admits_empty_trace, enumerate_language, enumerate_language_capped, exceeds_empty, max_trace_length,
    ExtNat, LangBound, TraceSet,
};
use crate::tree::{canonicalize, Activity, Operator, ProcessTree, TreePath};

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub max_depth: usize,
    pub max_children: usize,
    pub alphabet_size: usize,
    pub operator_weights: BTreeMap<Operator, u32>,
    pub tau_probability: f64,
    pub unique_activities: bool,
    /// Chance that a position above the depth limit still becomes a leaf.
    pub leaf_probability: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_depth: 4,
            max_children: 3,
            alphabet_size: 4,
            operator_weights: Operator::ALL.into_iter().map(|op| (op, 1)).collect(),
            tau_probability: 0.25,
            unique_activities: false,
            leaf_probability: 0.3,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.max_depth == 0 {
            return Err("max_depth must be at least 1".into());
        }
        if self.max_children == 0 {
            return Err("max_children must be at least 1".into());
        }
        if self.operator_weights.values().all(|w| *w == 0) {
            return Err("operator weights must not all be zero".into());
        }
        for (name, p) in [("tau_probability", self.tau_probability), ("leaf_probability", self.leaf_probability)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(format!("{name} must lie in [0, 1]"));
            }
        }
        Ok(())
    }
}

/// Name of the `i`-th generated activity: `a`..`z`, then `a26`, `a27`, ...
pub fn activity_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("a{i}")
    }
}

/// Per-trial seed derived from a probe seed.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index.wrapping_add(1).wrapping_mul(0xD1B5_4A32_D192_ED03)
}

pub fn random_tree(config: &GenConfig, seed: u64) -> ProcessTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_tree_with(config, &mut rng)
}

pub fn random_tree_with(config: &GenConfig, rng: &mut impl Rng) -> ProcessTree {
    let mut pool: Vec<usize> = (0..config.alphabet_size).collect();
    pool.shuffle(rng);
    let weighted: Vec<(Operator, u32)> = config
        .operator_weights
        .iter()
        .filter(|(_, w)| **w > 0)
        .map(|(op, w)| (*op, *w))
        .collect();
    generate(config, &weighted, config.max_depth, &mut pool, rng)
}

fn generate(
    config: &GenConfig,
    weighted: &[(Operator, u32)],
    depth: usize,
    pool: &mut Vec<usize>,
    rng: &mut impl Rng,
) -> ProcessTree {
    let leaf = depth <= 1 || weighted.is_empty() || rng.gen_bool(config.leaf_probability);
    if leaf {
        if config.alphabet_size == 0 || rng.gen_bool(config.tau_probability) {
            return ProcessTree::Tau;
        }
        let index = if config.unique_activities {
            match pool.pop() {
                Some(i) => i,
                None => return ProcessTree::Tau,
            }
        } else {
            rng.gen_range(0..config.alphabet_size)
        };
        return ProcessTree::Activity(Activity::new(&activity_name(index)).expect("generated name"));
    }
    let op = weighted
        .choose_weighted(rng, |(_, w)| *w)
        .expect("positive weights")
        .0;
    let low = op.min_children();
    let high = config.max_children.max(low);
    let n = rng.gen_range(low..=high);
    let children = (0..n)
        .map(|_| generate(config, weighted, depth - 1, pool, rng))
        .collect();
    ProcessTree::Node(op, children)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Failure {
    pub tree: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub trials: usize,
    pub seed: u64,
    pub failures: Vec<Failure>,
    /// Trials abandoned because an enumeration outgrew its cap.
    pub skipped: usize,
}

impl ProbeReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn from_parts(trials: usize, seed: u64, parts: Vec<Result<Vec<Failure>, ResourceError>>) -> Self {
        let mut failures = Vec::new();
        let mut skipped = 0;
        for part in parts {
            match part {
                Ok(f) => failures.extend(f),
                Err(_) => skipped += 1,
            }
        }
        failures.sort();
        ProbeReport {
            trials,
            seed,
            failures,
            skipped,
        }
    }

    /// Combines reports, e.g. of one probe over many trees.
    pub fn merge(reports: impl IntoIterator<Item = ProbeReport>, seed: u64) -> ProbeReport {
        let mut out = ProbeReport {
            trials: 0,
            seed,
            failures: Vec::new(),
            skipped: 0,
        };
        for r in reports {
            out.trials += r.trials;
            out.failures.extend(r.failures);
            out.skipped += r.skipped;
        }
        out.failures.sort();
        out
    }
}

/// Set equality of the bounded languages.
pub fn bounded_equiv(t1: &ProcessTree, t2: &ProcessTree, bound: LangBound) -> Result<bool, ResourceError> {
    Ok(enumerate_language(t1, bound)? == enumerate_language(t2, bound)?)
}

/// Trace-set cap used by the probes; larger sets count as skipped trials.
pub const PROBE_TRACE_CAP: usize = 200_000;

fn compare_with(l1: &TraceSet, t2: &ProcessTree, bound: LangBound) -> Result<Option<String>, ResourceError> {
    let l2 = enumerate_language_capped(t2, bound, PROBE_TRACE_CAP)?;
    if *l1 == l2 {
        return Ok(None);
    }
    let diff: Vec<String> = l1.symmetric_difference(&l2).take(3).map(|t| t.to_string()).collect();
    Ok(Some(format!("languages differ at {bound}, e.g. {}", diff.join(" "))))
}

/// The generator configuration the rule probes draw context trees from.
pub fn rule_probe_config() -> GenConfig {
    GenConfig {
        max_depth: 4,
        max_children: 3,
        alphabet_size: 3,
        ..GenConfig::default()
    }
}

/// Small tree used to fill pattern roles in planted redexes.
fn filler(rng: &mut impl Rng) -> ProcessTree {
    let config = GenConfig {
        max_depth: 2,
        max_children: 2,
        alphabet_size: 3,
        ..GenConfig::default()
    };
    random_tree_with(&config, rng)
}

fn skippable(rng: &mut impl Rng) -> ProcessTree {
    let inner = filler(rng);
    match rng.gen_range(0..3) {
        0 => ProcessTree::Tau,
        1 => ProcessTree::Node(Operator::Xor, vec![ProcessTree::Tau, inner]),
        _ => ProcessTree::Node(Operator::Loop, vec![ProcessTree::Tau, inner]),
    }
}

fn visible(rng: &mut impl Rng) -> ProcessTree {
    let inner = filler(rng);
    if exceeds_empty(&inner) {
        inner
    } else {
        ProcessTree::Node(Operator::Seq, vec![inner, ProcessTree::leaf("a")])
    }
}

fn short(rng: &mut impl Rng) -> ProcessTree {
    let leaf = |rng: &mut dyn rand::RngCore| {
        if rng.gen_bool(0.2) {
            ProcessTree::Tau
        } else {
            ProcessTree::Activity(Activity::new(&activity_name(rng.gen_range(0..3))).unwrap())
        }
    };
    match rng.gen_range(0..4) {
        0 | 1 => leaf(rng),
        2 => ProcessTree::Node(Operator::Xor, vec![leaf(rng), leaf(rng)]),
        _ => ProcessTree::Node(Operator::Or, vec![leaf(rng)]),
    }
}

fn shuffled(mut children: Vec<ProcessTree>, rng: &mut impl Rng) -> Vec<ProcessTree> {
    children.shuffle(rng);
    children
}

/// A random instance of the left-hand side of `rule`.
pub fn plant_redex(rule: RuleId, rng: &mut impl Rng) -> ProcessTree {
    use Operator::*;
    use ProcessTree::{Node, Tau};
    let mut f = || filler(rng);
    let (a, b, c) = (f(), f(), f());
    match rule {
        RuleId::S => {
            let ops = [Xor, Seq, Interleaved, Concurrent, Or];
            Node(*ops.choose(rng).unwrap(), vec![a])
        }
        RuleId::AXor => Node(Xor, shuffled(vec![a, Node(Xor, vec![b, c])], rng)),
        RuleId::ASeq => Node(Seq, vec![a, Node(Seq, vec![b, c]), f()]),
        RuleId::ACon => Node(Concurrent, shuffled(vec![a, Node(Concurrent, vec![b, c])], rng)),
        RuleId::AOr => Node(Or, shuffled(vec![a, Node(Or, vec![b, c])], rng)),
        RuleId::ALoopB => Node(Loop, vec![Node(Loop, vec![a, b]), c]),
        RuleId::ALoopR => Node(Loop, vec![a, Node(Xor, vec![b, c]), f()]),
        RuleId::TSeq => Node(Seq, shuffled(vec![a, b, Tau], rng)),
        RuleId::TCon => Node(Concurrent, shuffled(vec![a, Tau], rng)),
        RuleId::TInt => Node(Interleaved, shuffled(vec![a, b, Tau], rng)),
        RuleId::TLoopBR => Node(Loop, vec![Tau, Tau]),
        RuleId::TXor => Node(Xor, shuffled(vec![a, skippable(rng), Tau], rng)),
        RuleId::TLoopR => {
            let mut redos = shuffled(vec![skippable(rng), Tau, b], rng);
            redos.insert(0, a);
            Node(Loop, redos)
        }
        RuleId::TOr => Node(Or, shuffled(vec![a, b, Tau], rng)),
        RuleId::TOrXor => Node(Or, shuffled(vec![a, Node(Xor, shuffled(vec![b, Tau], rng))], rng)),
        RuleId::TLoopB => Node(Loop, vec![Tau, a, visible(rng)]),
        RuleId::CInt => {
            let n = rng.gen_range(2..=3);
            Node(Interleaved, (0..n).map(|_| short(rng)).collect())
        }
        RuleId::COr => Node(Concurrent, shuffled(vec![a, skippable(rng), skippable(rng)], rng)),
    }
}

/// Random context tree with a planted redex at a random position.
fn planted(rule: RuleId, rng: &mut impl Rng) -> ProcessTree {
    let context = random_tree_with(&rule_probe_config(), rng);
    let redex = plant_redex(rule, rng);
    let positions = context.positions();
    let at = positions.choose(rng).expect("tree has a root");
    context.replaced(at, redex).expect("valid position")
}

/// Bounds for the rule-preservation probe: saturated bounds of lengths 8 and,
/// for rules restructuring loops, 10.
pub fn preservation_bounds(rule: RuleId) -> Vec<LangBound> {
    if rule.touches_loops() {
        vec![LangBound::saturated(8), LangBound::saturated(10)]
    } else {
        vec![LangBound::saturated(8)]
    }
}

/// Checks that every application of `rule` on random trees preserves the
/// bounded language.
///
/// Each trial draws a random tree; if `rule` does not match anywhere a random
/// instance of its left-hand side is planted inside the tree. All matches are
/// checked.
pub fn check_rule_preservation(rule: RuleId, trials: usize, bound: LangBound, seed: u64) -> ProbeReport {
    check_rewriter(
        rule.name(),
        &|t: &ProcessTree| rewrites(rule, t),
        &|rng: &mut ChaCha8Rng| planted(rule, rng),
        trials,
        &[bound],
        seed,
    )
}

/// [`check_rule_preservation`] at several bounds.
pub fn check_rule_preservation_at(rule: RuleId, trials: usize, bounds: &[LangBound], seed: u64) -> ProbeReport {
    check_rewriter(
        rule.name(),
        &|t: &ProcessTree| rewrites(rule, t),
        &|rng: &mut ChaCha8Rng| planted(rule, rng),
        trials,
        bounds,
        seed,
    )
}

/// Preservation probe for an arbitrary rewriter, e.g. a deliberately broken
/// rule. `make_tree` draws the tree of each trial.
pub fn check_rewriter(
    name: &str,
    rewriter: &(dyn Fn(&ProcessTree) -> Vec<ProcessTree> + Sync),
    make_tree: &(dyn Fn(&mut ChaCha8Rng) -> ProcessTree + Sync),
    trials: usize,
    bounds: &[LangBound],
    seed: u64,
) -> ProbeReport {
    let parts = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, i));
            let tree = make_tree(&mut rng);
            let failing = first_failure(&tree, rewriter, bounds)?;
            Ok(match failing {
                None => Vec::new(),
                Some(_) => {
                    let small = shrink(tree, |t| matches!(first_failure(t, rewriter, bounds), Ok(Some(_))));
                    let detail = first_failure(&small, rewriter, bounds)
                        .ok()
                        .flatten()
                        .unwrap_or_default();
                    vec![Failure {
                        tree: small.to_string(),
                        detail: format!("{name}: {detail}"),
                    }]
                }
            })
        })
        .collect();
    ProbeReport::from_parts(trials, seed, parts)
}

fn first_failure(
    tree: &ProcessTree,
    rewriter: &(dyn Fn(&ProcessTree) -> Vec<ProcessTree> + Sync),
    bounds: &[LangBound],
) -> Result<Option<String>, ResourceError> {
    // Languages of `tree`, computed on first use.
    let mut base: Vec<Option<TraceSet>> = vec![None; bounds.len()];
    for position in tree.positions() {
        let subtree = tree.get(&position).expect("valid position");
        for replacement in rewriter(subtree) {
            let after = tree.replaced(&position, replacement).expect("valid position");
            for (bound, lang) in bounds.iter().zip(base.iter_mut()) {
                let lang = match lang {
                    Some(l) => l,
                    None => lang.insert(enumerate_language_capped(tree, *bound, PROBE_TRACE_CAP)?),
                };
                if let Some(diff) = compare_with(lang, &after, *bound)? {
                    return Ok(Some(format!("at \"{position}\" gives {after}; {diff}")));
                }
            }
        }
    }
    Ok(None)
}

/// Greedy shrinking: repeatedly delete a child or replace a node by one of
/// its children while `fails` still holds.
pub fn shrink(mut tree: ProcessTree, fails: impl Fn(&ProcessTree) -> bool) -> ProcessTree {
    'outer: loop {
        for position in tree.positions() {
            for candidate in smaller_at(&tree, &position) {
                if fails(&candidate) {
                    tree = candidate;
                    continue 'outer;
                }
            }
        }
        return tree;
    }
}

fn smaller_at(tree: &ProcessTree, position: &TreePath) -> Vec<ProcessTree> {
    let Some(ProcessTree::Node(op, children)) = tree.get(position) else {
        return Vec::new();
    };
    let mut out: Vec<ProcessTree> = children
        .iter()
        .map(|c| tree.replaced(position, c.clone()).expect("valid position"))
        .collect();
    if children.len() > op.min_children() {
        for i in 0..children.len() {
            let mut fewer = children.clone();
            fewer.remove(i);
            out.push(tree.replaced(position, ProcessTree::Node(*op, fewer)).expect("valid position"));
        }
    }
    out
}

/// Reduces `tree` along `orders` random strategies and compares every normal
/// form with the deterministic one, up to child order.
pub fn confluence_probe(tree: &ProcessTree, orders: usize, seed: u64) -> ProbeReport {
    let expected = match reduce(tree) {
        Ok((nf, _)) => canonicalize(&nf),
        Err(e) => {
            return ProbeReport {
                trials: orders,
                seed,
                failures: vec![Failure {
                    tree: tree.to_string(),
                    detail: e.to_string(),
                }],
                skipped: 0,
            }
        }
    };
    let parts = (0..orders as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, i));
            Ok(match random_reduction(tree, &mut rng) {
                Ok(nf) if canonicalize(&nf) == expected => Vec::new(),
                Ok(nf) => vec![Failure {
                    tree: tree.to_string(),
                    detail: format!("order {i} reached {} instead of {expected}", canonicalize(&nf)),
                }],
                Err(e) => vec![Failure {
                    tree: tree.to_string(),
                    detail: format!("order {i}: {e}"),
                }],
            })
        })
        .collect();
    ProbeReport::from_parts(orders, seed, parts)
}

/// Reduces by picking a uniformly random redex at every step.
pub fn random_reduction(tree: &ProcessTree, rng: &mut impl Rng) -> Result<ProcessTree, RewriteError> {
    let budget = phi(default_k(tree), tree);
    let mut current = tree.clone();
    let mut steps: u128 = 0;
    loop {
        let options = redexes(&current);
        let Some(redex) = options.choose(rng) else {
            return Ok(current);
        };
        if steps >= budget {
            return Err(RewriteError::StepBudgetExceeded { budget });
        }
        current = current
            .replaced(&redex.position, redex.replacement.clone())
            .expect("valid position");
        steps += 1;
    }
}

/// Reduces `tree` and reports every step at which φ fails to strictly
/// decrease, and a step count above `φ(k, tree)`.
pub fn phi_audit(tree: &ProcessTree) -> ProbeReport {
    let mut failures = Vec::new();
    match reduce(tree) {
        Ok((_, trace)) => {
            for (i, step) in trace.steps.iter().enumerate() {
                if !step.phi_decreased() {
                    failures.push(Failure {
                        tree: tree.to_string(),
                        detail: format!(
                            "step {i} ({} at \"{}\") took phi from {} to {}",
                            step.rule, step.position, step.phi_before, step.phi_after
                        ),
                    });
                }
            }
            let budget = phi(trace.k_used, tree);
            if trace.steps.len() as u128 > budget {
                failures.push(Failure {
                    tree: tree.to_string(),
                    detail: format!("{} steps exceed phi(k, input) = {budget}", trace.steps.len()),
                });
            }
        }
        Err(e) => failures.push(Failure {
            tree: tree.to_string(),
            detail: e.to_string(),
        }),
    }
    ProbeReport {
        trials: 1,
        seed: 0,
        failures,
        skipped: 0,
    }
}

/// `count` random trees, the `i`-th drawn from `derive_seed(seed, i)`.
pub fn random_trees(config: &GenConfig, count: usize, seed: u64) -> Vec<ProcessTree> {
    (0..count as u64)
        .map(|i| random_tree(config, derive_seed(seed, i)))
        .collect()
}

/// Renames every activity to `a`; trace lengths are unchanged.
pub fn collapse_alphabet(tree: &ProcessTree) -> ProcessTree {
    match tree {
        ProcessTree::Activity(_) => ProcessTree::leaf("a"),
        ProcessTree::Tau => ProcessTree::Tau,
        ProcessTree::Node(op, children) => ProcessTree::Node(*op, children.iter().map(collapse_alphabet).collect()),
    }
}

/// Compares the structural empty-trace and maximum-length functions with
/// enumeration. Lengths are read from the enumeration of the tree with all
/// activities renamed to one, which has the same trace lengths and far fewer
/// traces.
pub fn check_semantics_oracles(tree: &ProcessTree) -> Result<Vec<String>, ResourceError> {
    const EXACT: usize = 12;
    const GROWTH: usize = 16;
    let mut problems = Vec::new();
    let unary = collapse_alphabet(tree);
    let lengths = |l: usize| -> Result<Option<usize>, ResourceError> {
        Ok(enumerate_language_capped(&unary, LangBound::saturated(l), PROBE_TRACE_CAP)?.max_len())
    };
    let small = enumerate_language_capped(tree, LangBound::new(4, 2), PROBE_TRACE_CAP)?;
    let has_empty = small.contains(&crate::semantics::Trace::empty());
    if has_empty != admits_empty_trace(tree) {
        problems.push(format!("empty trace: predicate {} but enumeration {has_empty}", !has_empty));
    }
    match max_trace_length(tree) {
        ExtNat::Finite(m) => {
            let m = m as usize;
            let observed = lengths(EXACT.max(1))?;
            if m <= EXACT {
                if observed != Some(m) {
                    problems.push(format!("max length {m} but enumeration gives {observed:?}"));
                }
            } else if observed.is_some_and(|x| x > m) {
                problems.push(format!("max length {m} but enumeration found {observed:?}"));
            }
        }
        ExtNat::Infinite => {
            let base = lengths(GROWTH / 2)?;
            let grown = lengths(GROWTH)?;
            if grown <= base {
                problems.push(format!(
                    "max length inf but enumeration stalls: {base:?} at {} and {grown:?} at {GROWTH}",
                    GROWTH / 2
                ));
            }
        }
    }
    Ok(problems)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_tree;

    fn t(text: &str) -> ProcessTree {
        parse_tree(text).unwrap()
    }

    #[test]
    fn generator_is_deterministic_and_valid() {
        let config = GenConfig::default();
        assert_eq!(random_tree(&config, 9), random_tree(&config, 9));
        for seed in 0..200 {
            let tree = random_tree(&config, seed);
            assert!(crate::tree::validate(&tree).is_empty());
            assert!(tree.depth() <= config.max_depth);
        }
        let flat = GenConfig { max_depth: 1, ..GenConfig::default() };
        assert!(random_tree(&flat, 3).operator().is_none());
    }

    #[test]
    fn unique_activities() {
        let config = GenConfig {
            alphabet_size: 3,
            unique_activities: true,
            tau_probability: 0.0,
            ..GenConfig::default()
        };
        for seed in 0..100 {
            let tree = random_tree(&config, seed);
            let leaves: Vec<&Activity> = tree
                .subtrees()
                .filter_map(|s| match s {
                    ProcessTree::Activity(a) => Some(a),
                    _ => None,
                })
                .collect();
            assert!(leaves.len() <= 3);
            let distinct: std::collections::BTreeSet<_> = leaves.iter().collect();
            assert_eq!(distinct.len(), leaves.len());
        }
    }

    #[test]
    fn config_validation() {
        assert!(GenConfig::default().validate().is_ok());
        let zero = GenConfig {
            operator_weights: Operator::ALL.into_iter().map(|op| (op, 0)).collect(),
            ..GenConfig::default()
        };
        assert!(zero.validate().is_err());
        assert!(GenConfig { max_depth: 0, ..GenConfig::default() }.validate().is_err());
    }

    #[test]
    fn equivalence_examples() {
        let b = LangBound::new(8, 3);
        assert!(bounded_equiv(&t("and(a,a)"), &t("seq(a,a)"), b).unwrap());
        assert!(bounded_equiv(&t("xor(a,a)"), &t("a"), b).unwrap());
        assert!(!bounded_equiv(&t("xor(a,b)"), &t("a"), b).unwrap());
    }

    #[test]
    fn planted_redexes_match() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for rule in RuleId::ALL {
            for _ in 0..50 {
                let tree = plant_redex(rule, &mut rng);
                assert!(!rewrites(rule, &tree).is_empty(), "{rule} on {tree}");
            }
        }
    }

    #[test]
    fn sabotaged_rule_is_caught() {
        let broken = |tree: &ProcessTree| -> Vec<ProcessTree> {
            match tree {
                ProcessTree::Node(Operator::Xor, c) if c.len() >= 2 => (0..c.len())
                    .filter(|&i| c[i].is_tau())
                    .map(|i| {
                        let mut rest = c.clone();
                        rest.remove(i);
                        ProcessTree::Node(Operator::Xor, rest)
                    })
                    .collect(),
                _ => Vec::new(),
            }
        };
        let make = |rng: &mut ChaCha8Rng| {
            ProcessTree::Node(Operator::Xor, vec![filler(rng), ProcessTree::Tau])
        };
        let report = check_rewriter("T_Xor unguarded", &broken, &make, 50, &[LangBound::new(8, 3)], 5);
        assert!(!report.passed());
        assert!(report.failures.iter().any(|f| f.tree == "xor(a,tau)" || f.tree.len() <= 12));
    }

    #[test]
    fn probes_pass_on_examples() {
        assert!(check_rule_preservation(RuleId::TLoopBR, 30, LangBound::saturated(8), 1).passed());
        assert!(confluence_probe(&t("xor(or(a,tau),or(b,tau))"), 20, 3).passed());
        assert!(confluence_probe(&t("a"), 5, 3).passed());
        assert!(phi_audit(&t("a")).passed());
        assert!(phi_audit(&t("and(xor(tau,a),xor(tau,b))")).passed());
        assert!(!phi_audit(&t("int(a,b)")).passed());
    }

    #[test]
    fn reports_are_reproducible() {
        let a = check_rule_preservation(RuleId::COr, 20, LangBound::saturated(6), 11);
        let b = check_rule_preservation(RuleId::COr, 20, LangBound::saturated(6), 11);
        assert_eq!(a, b);
        let json = serde_json::to_value(&a).unwrap();
        assert_eq!(json["trials"], 20);
        assert!(json["failures"].is_array());
    }

    #[test]
    fn semantics_oracles_on_examples() {
        for text in ["tau", "loop(tau,a)", "seq(a,tau)", "loop(seq(a,b,c,d,e,f,g,h,i),tau)", "or(a,b,loop(tau,tau))"] {
            assert_eq!(check_semantics_oracles(&t(text)).unwrap(), Vec::<String>::new(), "{text}");
        }
    }
}
