//! Fixed examples across the public API.

use treereduce::completeness::{class_c_violations, in_class_c, Condition};
use treereduce::oracle::{bounded_equiv, confluence_probe, phi_audit};
use treereduce::petri::{enumerate_net_language, net_size, reduce_net, tree_to_net, DEFAULT_STATE_CAP};
use treereduce::pipeline::run_pipeline;
use treereduce::rewrite::{count_helpers, is_normal_form};
use treereduce::semantics::{admits_empty_trace, max_trace_length, start_activities};
use treereduce::tree::alphabet;
use treereduce::{
    apply_once, canonicalize, enumerate_language, parse_tree, reduce, size, ExtNat, LangBound, ProcessTree, RuleId,
    Trace,
};

fn t(text: &str) -> ProcessTree {
    parse_tree(text).unwrap()
}

fn nf(text: &str) -> ProcessTree {
    canonicalize(&reduce(&t(text)).unwrap().0)
}

const FIG1: &str = "xor(and(int(a,b),c),seq(d,e),loop(f,g))";

#[test]
fn chains_reach_their_targets() {
    assert_eq!(nf("xor(or(a,tau),or(b,tau))"), canonicalize(&t("xor(a,b,tau)")));
    assert_eq!(nf("and(xor(tau,a),xor(tau,b))"), canonicalize(&t("xor(tau,or(a,b))")));
}

#[test]
fn figure_two_reductions() {
    assert_eq!(nf("xor(seq(a))"), t("a"));
    assert_eq!(nf("loop(loop(a,b),xor(c,d))"), canonicalize(&t("loop(a,b,c,d)")));
    assert_eq!(nf("int(loop(tau,tau),a,b,tau)"), canonicalize(&t("and(a,b)")));
    let (step_tree, step) = apply_once(&t("or(loop(tau,a),b)")).unwrap();
    assert_eq!(step.rule, RuleId::TLoopB);
    assert_eq!(step_tree.get(&step.position.child(0)), Some(&ProcessTree::Tau));
    assert_eq!(nf("or(loop(tau,a),b)"), canonicalize(&t("xor(tau,or(b,loop(a,tau)))")));
}

#[test]
fn figure_one_tree() {
    let tree = t(FIG1);
    assert_eq!(size(&tree), 12);
    let names: Vec<String> = alphabet(&tree).iter().map(|a| a.name().to_string()).collect();
    assert_eq!(names, ["a", "b", "c", "d", "e", "f", "g"]);
    assert_eq!(nf(FIG1), canonicalize(&t("xor(and(a,b,c),seq(d,e),loop(f,g))")));
    assert!(in_class_c(&t("xor(and(a,b,c),seq(d,e),loop(f,g))")).unwrap().member);

    let lang = enumerate_language(&tree, LangBound::new(5, 2)).unwrap();
    for trace in [&["a", "b", "c"][..], &["c", "b", "a"], &["d", "e"], &["f"], &["f", "g", "f"]] {
        assert!(lang.contains(&Trace::of(trace)), "{trace:?}");
    }
    assert!(lang.contains(&Trace::of(&["a", "c", "b"])));
    assert!(!lang.contains(&Trace::of(&["d"])));

    let net = tree_to_net(&tree);
    let net_lang = enumerate_net_language(&net, 6, 4, DEFAULT_STATE_CAP).unwrap();
    assert_eq!(net_lang, enumerate_language(&tree, LangBound::saturated(6)).unwrap());
}

#[test]
fn milestone_place_survives_net_reduction_only() {
    let report = run_pipeline(&t(FIG1)).unwrap();
    assert!(report.net_size_ptpn < report.net_size_pn, "{report:?}");
    assert_eq!(report.tree_size_before, 12);
    assert_eq!(report.tree_size_after, 11);
    let leaf = run_pipeline(&t("a")).unwrap();
    assert_eq!((leaf.tree_size_before, leaf.tree_size_after), (1, 1));
    assert_eq!(leaf.net_size_pn, leaf.net_size_unreduced);
}

#[test]
fn translation_sizes() {
    assert_eq!(net_size(&tree_to_net(&t("a"))), 5);
    assert_eq!(net_size(&tree_to_net(&t("seq(a,b)"))), 9);
    let loop_lang = enumerate_net_language(&tree_to_net(&t("loop(f,g)")), 5, 4, DEFAULT_STATE_CAP).unwrap();
    assert_eq!(loop_lang.len(), 3);
    let unreduced = tree_to_net(&t("seq(a,b,c)"));
    let (reduced, steps) = reduce_net(&unreduced);
    assert_eq!(reduced.net.labelled_transitions(), unreduced.net.labelled_transitions());
    assert!(net_size(&reduced) <= net_size(&unreduced) && (steps.is_empty() || net_size(&reduced) < net_size(&unreduced)));
}

#[test]
fn helper_examples() {
    let h = count_helpers(&t("xor(seq(a,b),c)"));
    assert_eq!(h.n, 5);
    assert_eq!(count_helpers(&t("or(or(tau,tau))")).c_or, 4);
    assert_eq!(count_helpers(&t("loop(loop(loop(tau,a),b),c)")).lbe, 3);
    assert_eq!(count_helpers(&t("int(int(a,b),c)")).o_int, 2);
    assert_eq!(count_helpers(&t("and(and(a,b),c)")).p_con, 4);
}

#[test]
fn appendix_functions() {
    assert!(admits_empty_trace(&t("loop(tau,a)")));
    assert!(!admits_empty_trace(&t("seq(a,tau)")));
    assert_eq!(max_trace_length(&t("loop(tau,tau)")), ExtNat::Finite(0));
    assert_eq!(max_trace_length(&t("loop(a,tau)")), ExtNat::Infinite);
    assert_eq!(max_trace_length(&t("or(a,b)")), ExtNat::Finite(2));
    let starts: Vec<String> = start_activities(&t("seq(xor(tau,a),b)"))
        .iter()
        .map(|a| a.name().to_string())
        .collect();
    assert_eq!(starts, ["a", "b"]);
}

const PAIRS: [(&str, &str); 4] = [
    ("loop(seq(xor(tau,a),loop(b,tau)),tau)", "loop(seq(xor(tau,a),b),tau)"),
    ("and(a,a)", "seq(a,a)"),
    ("xor(a,a)", "a"),
    ("xor(seq(a,b),seq(b,a))", "and(a,b)"),
];

#[test]
fn pairs_outside_class_c() {
    for (left, right) in PAIRS {
        for side in [left, right] {
            assert!(is_normal_form(&t(side)), "{side}");
        }
        assert_ne!(canonicalize(&t(left)), canonicalize(&t(right)));
        assert!(bounded_equiv(&t(left), &t(right), LangBound::saturated(8)).unwrap(), "{left} {right}");
    }
    assert!(bounded_equiv(&t("xor(a,a)"), &t("a"), LangBound::new(8, 3)).unwrap());
    assert!(!bounded_equiv(&t("xor(a,b)"), &t("a"), LangBound::new(8, 3)).unwrap());
}

#[test]
fn class_c_examples() {
    let verdict = in_class_c(&t("loop(a,tau)")).unwrap();
    assert!(!verdict.member);
    assert_eq!(verdict.violations[0].condition, Condition::RedoEmpty);
    let nested = class_c_violations(&t("int(int(a,b),c)"));
    assert!(nested.violations.iter().any(|v| v.condition == Condition::NestedInt));
    assert!(in_class_c(&t("int(int(a,b),c)")).is_err());
}

#[test]
fn chain_probes() {
    assert!(confluence_probe(&t("xor(or(a,tau),or(b,tau))"), 20, 3).passed());
    assert!(phi_audit(&t("and(xor(tau,a),xor(tau,b))")).passed());
    assert!(phi_audit(&t("a")).passed());
}
