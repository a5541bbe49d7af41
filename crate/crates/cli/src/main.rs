use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use treereduce::completeness::in_class_c;
use treereduce::oracle::{
    check_rule_preservation_at, confluence_probe, derive_seed, phi_audit, preservation_bounds, random_tree,
    random_trees, GenConfig, ProbeReport,
};
use treereduce::petri::{export_dot, tree_to_net, DEFAULT_STATE_CAP};
use treereduce::pipeline::run_pipeline;
use treereduce::semantics::enumerate_language_capped;
use treereduce::{canonicalize, format_tree, format_tree_glyphs, parse_tree, reduce, LangBound, ProcessTree, RuleId};

const STATE_CAP_VAR: &str = "TREEREDUCE_STATE_CAP";

#[derive(Parser)]
#[command(name = "treereduce", version, about = "Reduce process trees and compare their workflow nets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite a tree to its canonical normal form.
    Reduce {
        /// Tree text; read from stdin when omitted or "-".
        tree: Option<String>,
        /// Also print the reduction trace as JSON.
        #[arg(long)]
        trace: bool,
        /// Print operators as glyphs.
        #[arg(long)]
        glyphs: bool,
    },
    /// Net sizes with tree reduction, net reduction, and both.
    Pipeline { tree: Option<String> },
    /// Translate a tree to a workflow net.
    Translate {
        tree: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Draw a random tree.
    Gen {
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 4)]
        alphabet: usize,
        /// Use every activity at most once.
        #[arg(long)]
        unique: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a probe; exit status 1 on failure.
    #[command(subcommand)]
    Check(Check),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

#[derive(Args)]
struct Probe {
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct Bound {
    /// Maximum trace length.
    #[arg(long)]
    len: Option<usize>,
    /// Loop iterations per loop execution; unlimited when omitted.
    #[arg(long)]
    unroll: Option<usize>,
}

#[derive(Subcommand)]
enum Check {
    /// Language preservation of every rule application on random trees.
    Rules {
        /// Only this rule, e.g. T_LoopB.
        #[arg(long)]
        rule: Option<RuleId>,
        #[command(flatten)]
        probe: Probe,
        #[command(flatten)]
        bound: Bound,
    },
    /// Random application orders reach one normal form. Probes the given
    /// tree, or `--trials` random trees with 20 orders each.
    Confluence {
        tree: Option<String>,
        #[command(flatten)]
        probe: Probe,
        #[arg(long, default_value_t = 20)]
        orders: usize,
    },
    /// The termination measure along the reduction of a tree, or of random trees.
    Phi {
        tree: Option<String>,
        #[command(flatten)]
        probe: Probe,
    },
    /// Membership of a reduced tree in the class where normal forms are unique.
    Classc {
        tree: Option<String>,
        /// Reduce the input first.
        #[arg(long)]
        reduce: bool,
    },
    /// Bounded language equality of two trees.
    Equiv {
        left: String,
        right: String,
        #[command(flatten)]
        bound: Bound,
    },
}

/// Failures that end the command with exit status 2.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<bool, UsageError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn read_tree(arg: Option<String>) -> Result<ProcessTree, UsageError> {
    let text = match arg.as_deref() {
        None | Some("-") => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            buf
        }
        Some(text) => text.to_string(),
    };
    Ok(parse_tree(text.trim())?)
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn print_json(value: &Value) {
    emit(&format!("{}\n", serde_json::to_string_pretty(value).expect("json values serialize")));
}

fn trace_cap() -> Result<usize, UsageError> {
    match std::env::var(STATE_CAP_VAR) {
        Ok(v) => v
            .parse()
            .map_err(|_| UsageError(format!("{STATE_CAP_VAR} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_STATE_CAP),
    }
}

fn bound_of(bound: &Bound, default_len: usize) -> LangBound {
    let len = bound.len.unwrap_or(default_len);
    match bound.unroll {
        Some(u) => LangBound::new(len, u),
        None => LangBound::saturated(len),
    }
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Reduce { tree, trace, glyphs } => {
            let tree = read_tree(tree)?;
            let (nf, steps) = reduce(&tree)?;
            let nf = canonicalize(&nf);
            emit(&format!("{}\n", if glyphs { format_tree_glyphs(&nf) } else { format_tree(&nf) }));
            if trace {
                emit(&format!("{}\n", serde_json::to_string(&steps)?));
            }
            Ok(true)
        }
        Command::Pipeline { tree } => {
            let report = run_pipeline(&read_tree(tree)?)?;
            print_json(&serde_json::to_value(report)?);
            Ok(true)
        }
        Command::Translate { tree, format } => {
            let net = tree_to_net(&read_tree(tree)?);
            match format {
                Format::Dot => emit(&export_dot(&net)),
                Format::Json => print_json(&net.to_json()),
            }
            Ok(true)
        }
        Command::Gen {
            depth,
            alphabet,
            unique,
            seed,
        } => {
            let config = GenConfig {
                max_depth: depth,
                alphabet_size: alphabet,
                unique_activities: unique,
                ..GenConfig::default()
            };
            config.validate().map_err(UsageError)?;
            emit(&format!("{}\n", random_tree(&config, seed)));
            Ok(true)
        }
        Command::Check(check) => run_check(check),
    }
}

fn report_json(report: &ProbeReport) -> Value {
    json!({
        "trials": report.trials,
        "seed": report.seed,
        "skipped": report.skipped,
        "failures": report.failures,
    })
}

fn run_check(check: Check) -> CmdResult {
    match check {
        Check::Rules { rule, probe, bound } => {
            let rules: Vec<RuleId> = rule.map_or(RuleId::ALL.to_vec(), |r| vec![r]);
            let mut passed = true;
            let mut out = Vec::new();
            for (i, rule) in rules.into_iter().enumerate() {
                let bounds = match bound.len {
                    None if bound.unroll.is_none() => preservation_bounds(rule),
                    _ => vec![bound_of(&bound, 8)],
                };
                let report =
                    check_rule_preservation_at(rule, probe.trials, &bounds, derive_seed(probe.seed, i as u64));
                passed &= report.passed();
                out.push(json!({
                    "rule": rule,
                    "bounds": bounds.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
                    "report": report_json(&report),
                }));
            }
            print_json(&json!({ "passed": passed, "rules": out }));
            Ok(passed)
        }
        Check::Confluence { tree, probe, orders } => {
            let report = match tree {
                Some(text) => confluence_probe(&read_tree(Some(text))?, orders, probe.seed),
                None => {
                    let trees = random_trees(&GenConfig::default(), probe.trials, probe.seed);
                    let parts = trees
                        .iter()
                        .enumerate()
                        .map(|(i, t)| confluence_probe(t, orders, derive_seed(probe.seed, i as u64)));
                    ProbeReport::merge(parts, probe.seed)
                }
            };
            print_json(&json!({ "passed": report.passed(), "report": report_json(&report) }));
            Ok(report.passed())
        }
        Check::Phi { tree, probe } => {
            let trees = match tree {
                Some(text) => vec![read_tree(Some(text))?],
                None => {
                    let config = GenConfig {
                        max_depth: 5,
                        ..GenConfig::default()
                    };
                    random_trees(&config, probe.trials, probe.seed)
                }
            };
            let report = ProbeReport::merge(trees.iter().map(phi_audit), probe.seed);
            print_json(&json!({ "passed": report.passed(), "report": report_json(&report) }));
            Ok(report.passed())
        }
        Check::Classc { tree, reduce: first } => {
            let mut tree = read_tree(tree)?;
            if first {
                tree = reduce(&tree)?.0;
            }
            let verdict = in_class_c(&tree).map_err(|e| UsageError(format!("{e}; pass --reduce to reduce it first")))?;
            let violations: Vec<Value> = verdict
                .violations
                .iter()
                .map(|v| json!({ "path": v.path.to_string(), "condition": v.condition.id(), "message": v.message }))
                .collect();
            print_json(&json!({ "tree": tree.to_string(), "member": verdict.member, "violations": violations }));
            Ok(verdict.member)
        }
        Check::Equiv { left, right, bound } => {
            let (l, r) = (read_tree(Some(left))?, read_tree(Some(right))?);
            let bound = bound_of(&bound, 8);
            let cap = trace_cap()?;
            let ll = enumerate_language_capped(&l, bound, cap)?;
            let lr = enumerate_language_capped(&r, bound, cap)?;
            let only = |a: &treereduce::TraceSet, b: &treereduce::TraceSet| -> Vec<String> {
                a.iter().filter(|t| !b.contains(t)).take(5).map(|t| t.to_string()).collect()
            };
            let equivalent = ll == lr;
            print_json(&json!({
                "equivalent": equivalent,
                "bound": { "maxTraceLen": bound.max_trace_len, "loopUnrollDepth": bound.loop_unroll_depth },
                "leftTraces": ll.len(),
                "rightTraces": lr.len(),
                "onlyLeft": only(&ll, &lr),
                "onlyRight": only(&lr, &ll),
            }));
            Ok(equivalent)
        }
    }
}
