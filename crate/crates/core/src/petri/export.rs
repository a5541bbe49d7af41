//! DOT rendering and the JSON net format.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::NetError;
use crate::tree::Activity;

use super::{PetriNet, WorkflowNet};

/// Graphviz source: places are circles, labelled transitions are boxes with
/// their activity, silent transitions are small filled boxes.
pub fn export_dot(wf: &WorkflowNet) -> String {
    let mut out = String::from("digraph workflow {\n  rankdir=LR;\n");
    for p in wf.net.places() {
        let label = if *p == wf.source {
            "source"
        } else if *p == wf.sink {
            "sink"
        } else {
            ""
        };
        writeln!(out, "  \"{p}\" [shape=circle, label=\"{label}\"];").unwrap();
    }
    for (t, label) in wf.net.transitions() {
        match label {
            Some(a) => writeln!(out, "  \"{t}\" [shape=box, label=\"{}\"];", a.name()).unwrap(),
            None => writeln!(
                out,
                "  \"{t}\" [shape=box, style=filled, fillcolor=black, label=\"\", width=0.15];"
            )
            .unwrap(),
        }
    }
    for (from, to, w) in wf.net.arcs() {
        if w == 1 {
            writeln!(out, "  \"{from}\" -> \"{to}\";").unwrap();
        } else {
            writeln!(out, "  \"{from}\" -> \"{to}\" [label=\"{w}\"];").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetJson {
    pub places: Vec<String>,
    pub transitions: Vec<TransitionJson>,
    pub arcs: Vec<ArcJson>,
    pub source: String,
    pub sink: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionJson {
    pub id: String,
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcJson {
    pub from: String,
    pub to: String,
    pub weight: u32,
}

impl From<&WorkflowNet> for NetJson {
    fn from(wf: &WorkflowNet) -> Self {
        NetJson {
            places: wf.net.places().iter().cloned().collect(),
            transitions: wf
                .net
                .transitions()
                .iter()
                .map(|(id, l)| TransitionJson {
                    id: id.clone(),
                    label: l.as_ref().map(|a| a.name().to_string()),
                })
                .collect(),
            arcs: wf
                .net
                .arcs()
                .map(|(from, to, weight)| ArcJson {
                    from: from.to_string(),
                    to: to.to_string(),
                    weight,
                })
                .collect(),
            source: wf.source.clone(),
            sink: wf.sink.clone(),
        }
    }
}

impl TryFrom<NetJson> for WorkflowNet {
    type Error = NetError;

    fn try_from(json: NetJson) -> Result<Self, NetError> {
        let mut net = PetriNet::new();
        for p in &json.places {
            net.add_place(p)?;
        }
        for t in &json.transitions {
            let label = t
                .label
                .as_deref()
                .map(Activity::new)
                .transpose()
                .map_err(|e| NetError::Invalid(e.to_string()))?;
            net.add_transition(&t.id, label)?;
        }
        for a in &json.arcs {
            net.add_arc(&a.from, &a.to, a.weight)?;
        }
        for id in [&json.source, &json.sink] {
            if !net.is_place(id) {
                return Err(NetError::UnknownNode(id.clone()));
            }
        }
        Ok(WorkflowNet {
            net,
            source: json.source,
            sink: json.sink,
        })
    }
}

impl WorkflowNet {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(NetJson::from(self)).expect("net serializes")
    }

    pub fn from_json(text: &str) -> Result<WorkflowNet, NetError> {
        let json: NetJson = serde_json::from_str(text).map_err(|e| NetError::Invalid(e.to_string()))?;
        json.try_into()
    }
}
