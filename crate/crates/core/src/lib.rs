//! Language-preserving reduction of process trees and their workflow nets.
//!
//! * [`tree`] and [`parse`]: the term algebra and its text syntax.
//! * [`semantics`]: bounded trace languages and structural predicates.
//! * [`rewrite`]: the reduction rules, the engine and the φ measure.
//! * [`completeness`]: class-C membership and inverse-rule inflation.
//! * [`petri`]: workflow nets, translation from trees and net reduction.
//! * [`oracle`]: random generation and brute-force property probes.
//! * [`pipeline`]: size comparison of tree-level and net-level reduction.

pub mod completeness;
pub mod error;
pub mod oracle;
pub mod parse;
pub mod petri;
pub mod pipeline;
pub mod rewrite;
pub mod semantics;
pub mod tree;

pub use error::{CompletenessError, NetError, ParseError, ResourceError, RewriteError, TreeError};
pub use parse::{format_tree, format_tree_glyphs, parse_tree};
pub use rewrite::{apply_once, match_at, phi, reduce, ReductionTrace, RewriteStep, RuleId};
pub use semantics::{enumerate_language, ExtNat, LangBound, Trace, TraceSet};
pub use tree::{canonicalize, size, Activity, Operator, ProcessTree, TreePath};
