//! Invariants over generated trees.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use treereduce::completeness::inflate_step;
use treereduce::oracle::{bounded_equiv, confluence_probe, random_tree, GenConfig};
use treereduce::petri::{
    enumerate_net_language, reduce_net_step, tree_to_net, validate_workflow, WorkflowNet, DEFAULT_STATE_CAP,
};
use treereduce::rewrite::{default_k, phi};
use treereduce::semantics::{admits_empty_trace, end_activities, max_trace_length, shuffle, start_activities};
use treereduce::tree::validate;
use treereduce::{
    apply_once, canonicalize, enumerate_language, format_tree, parse_tree, reduce, size, ExtNat, LangBound, Operator,
    ProcessTree, Trace, TraceSet,
};

fn leaf() -> impl Strategy<Value = ProcessTree> {
    prop_oneof![
        1 => Just(ProcessTree::Tau),
        3 => prop::sample::select(vec!["a", "b", "c", "d"]).prop_map(ProcessTree::leaf),
    ]
}

fn node(inner: BoxedStrategy<ProcessTree>, loops: bool) -> BoxedStrategy<ProcessTree> {
    let plain = (
        prop::sample::select(vec![
            Operator::Xor,
            Operator::Seq,
            Operator::Interleaved,
            Operator::Concurrent,
            Operator::Or,
        ]),
        prop::collection::vec(inner.clone(), 1..=3),
    )
        .prop_map(|(op, cs)| ProcessTree::node(op, cs));
    if loops {
        prop_oneof![
            3 => plain,
            1 => prop::collection::vec(inner, 2..=3).prop_map(|cs| ProcessTree::node(Operator::Loop, cs)),
        ]
        .boxed()
    } else {
        plain.boxed()
    }
}

/// Trees of depth at most 4 with up to a dozen leaves.
fn tree() -> impl Strategy<Value = ProcessTree> {
    leaf().prop_recursive(3, 12, 3, |inner| node(inner.boxed(), true))
}

fn small_tree() -> impl Strategy<Value = ProcessTree> {
    leaf().prop_recursive(2, 6, 3, |inner| node(inner.boxed(), true))
}

fn loop_free_tree() -> impl Strategy<Value = ProcessTree> {
    leaf().prop_recursive(3, 8, 3, |inner| node(inner.boxed(), false))
}

fn lang(t: &ProcessTree, bound: LangBound) -> TraceSet {
    enumerate_language(t, bound).unwrap()
}

fn net_lang(wf: &WorkflowNet, len: usize) -> TraceSet {
    enumerate_net_language(wf, len, 4, DEFAULT_STATE_CAP).unwrap()
}

fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, i| acc * (n - k + i) / i)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn format_then_parse_is_identity(t in tree()) {
        prop_assert_eq!(parse_tree(&format_tree(&t)).unwrap(), t);
    }

    #[test]
    fn canonical_form_is_stable(t in tree()) {
        let c = canonicalize(&t);
        prop_assert_eq!(canonicalize(&c), c.clone());
        prop_assert_eq!(lang(&t, LangBound::saturated(6)), lang(&c, LangBound::saturated(6)));
    }

    #[test]
    fn size_counts_every_node(t in tree()) {
        let children: usize = t.children().iter().map(size).sum();
        prop_assert!(size(&t) >= 1);
        prop_assert_eq!(size(&t), 1 + children);
    }

    #[test]
    fn empty_trace_agrees_with_enumeration(t in tree()) {
        let has_empty = lang(&t, LangBound::new(0, 2)).contains(&Trace::empty());
        prop_assert_eq!(admits_empty_trace(&t), has_empty);
    }

    #[test]
    fn longest_trace_agrees_on_loop_free_trees(t in loop_free_tree()) {
        let ExtNat::Finite(m) = max_trace_length(&t) else {
            return Err(TestCaseError::fail("loop-free tree with unbounded traces"));
        };
        let l = lang(&t, LangBound::saturated(m as usize + 1));
        prop_assert_eq!(l.max_len(), Some(m as usize));
    }

    #[test]
    fn larger_bounds_never_lose_traces(t in small_tree()) {
        let base = lang(&t, LangBound::new(4, 1));
        prop_assert!(base.is_subset(&lang(&t, LangBound::new(5, 1))));
        prop_assert!(base.is_subset(&lang(&t, LangBound::new(4, 2))));
    }

    #[test]
    fn shuffle_of_distinct_events(n1 in 0usize..5, n2 in 0usize..5) {
        let names = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"];
        let left: TraceSet = [Trace::of(&names[..n1])].into_iter().collect();
        let right: TraceSet = [Trace::of(&names[5..5 + n2])].into_iter().collect();
        let out = shuffle(&left, &right, 10);
        prop_assert_eq!(out.len() as u64, binomial((n1 + n2) as u64, n1 as u64));
    }

    #[test]
    fn start_and_end_agree_on_loop_free_trees(t in loop_free_tree()) {
        let m = max_trace_length(&t).finite().unwrap() as usize;
        let l = lang(&t, LangBound::saturated(m));
        let firsts: std::collections::BTreeSet<_> = l.iter().filter_map(|tr| tr.events().first().cloned()).collect();
        let lasts: std::collections::BTreeSet<_> = l.iter().filter_map(|tr| tr.events().last().cloned()).collect();
        prop_assert_eq!(start_activities(&t), firsts);
        prop_assert_eq!(end_activities(&t), lasts);
    }

    #[test]
    fn reduction_reaches_a_fixpoint(t in tree()) {
        let (nf, trace) = reduce(&t).unwrap();
        prop_assert!(apply_once(&nf).is_none());
        prop_assert!(reduce(&nf).unwrap().1.is_empty());
        prop_assert!(trace.len() as u128 <= phi(default_k(&t), &t));
        prop_assert!(validate(&nf).is_empty());
    }

    #[test]
    fn reduction_preserves_language(t in small_tree()) {
        let nf = reduce(&t).unwrap().0;
        prop_assert_eq!(lang(&t, LangBound::saturated(7)), lang(&nf, LangBound::saturated(7)));
    }

    #[test]
    fn random_orders_agree(t in small_tree(), seed in any::<u64>()) {
        let report = confluence_probe(&t, 5, seed);
        prop_assert!(report.passed(), "{:?}", report.failures);
    }

    #[test]
    fn inflation_preserves_language_stepwise(t in small_tree(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let expected = lang(&t, LangBound::saturated(6));
        let mut current = t;
        for _ in 0..6 {
            let Some(next) = inflate_step(&current, &mut rng) else { break };
            prop_assert!(validate(&next).is_empty());
            prop_assert_eq!(&lang(&next, LangBound::saturated(6)), &expected, "{}", next);
            current = next;
        }
    }

    #[test]
    fn translation_is_a_faithful_workflow_net(t in small_tree()) {
        let wf = tree_to_net(&t);
        prop_assert!(validate_workflow(&wf.net, &wf.source, &wf.sink).is_empty());
        prop_assert_eq!(net_lang(&wf, 5), lang(&t, LangBound::saturated(5)));
        prop_assert_eq!(WorkflowNet::from_json(&wf.to_json().to_string()).unwrap(), wf);
    }

    #[test]
    fn net_rules_preserve_language_and_labels(t in small_tree()) {
        let mut wf = tree_to_net(&t);
        let expected = net_lang(&wf, 5);
        let labelled = wf.net.labelled_transitions();
        while let Some((next, _)) = reduce_net_step(&wf) {
            prop_assert!(next.net.places().len() + next.net.transitions().len()
                < wf.net.places().len() + wf.net.transitions().len());
            prop_assert_eq!(next.net.labelled_transitions(), labelled.clone());
            prop_assert!(next.net.is_place(&next.source) && next.net.is_place(&next.sink));
            prop_assert_eq!(net_lang(&next, 5), expected.clone());
            wf = next;
        }
    }

    #[test]
    fn bounded_equivalence_is_an_equivalence(t in small_tree()) {
        let bound = LangBound::new(6, 2);
        let c = canonicalize(&t);
        let nf = reduce(&t).unwrap().0;
        prop_assert!(bounded_equiv(&t, &t, bound).unwrap());
        prop_assert_eq!(bounded_equiv(&t, &c, bound).unwrap(), bounded_equiv(&c, &t, bound).unwrap());
        if bounded_equiv(&t, &c, bound).unwrap() && bounded_equiv(&c, &nf, bound).unwrap() {
            prop_assert!(bounded_equiv(&t, &nf, bound).unwrap());
        }
    }

    #[test]
    fn generator_yields_valid_trees(seed in any::<u64>(), depth in 1usize..6, unique in any::<bool>()) {
        let config = GenConfig { max_depth: depth, unique_activities: unique, ..GenConfig::default() };
        let t = random_tree(&config, seed);
        prop_assert!(validate(&t).is_empty());
        prop_assert!(t.depth() <= depth);
        prop_assert_eq!(random_tree(&config, seed), t);
    }
}
