//! Net sizes after tree-level reduction, net-level reduction, or both.

use serde::Serialize;

use crate::error::RewriteError;
use crate::petri::{net_size, reduce_net, tree_to_net};
use crate::rewrite::reduce;
use crate::tree::{size, ProcessTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PipelineReport {
    pub tree_size_before: usize,
    pub tree_size_after: usize,
    /// Net of the input tree, unreduced.
    pub net_size_unreduced: usize,
    /// Net of the reduced tree.
    pub net_size_pt: usize,
    /// Net of the input tree after net reduction.
    pub net_size_pn: usize,
    /// Net of the reduced tree after net reduction.
    pub net_size_ptpn: usize,
}

pub fn run_pipeline(tree: &ProcessTree) -> Result<PipelineReport, RewriteError> {
    let (reduced, _) = reduce(tree)?;
    let plain = tree_to_net(tree);
    let pt = tree_to_net(&reduced);
    Ok(PipelineReport {
        tree_size_before: size(tree),
        tree_size_after: size(&reduced),
        net_size_unreduced: net_size(&plain),
        net_size_pt: net_size(&pt),
        net_size_pn: net_size(&reduce_net(&plain).0),
        net_size_ptpn: net_size(&reduce_net(&pt).0),
    })
}
