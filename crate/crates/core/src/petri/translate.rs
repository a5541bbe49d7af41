//! Block-wise translation of process trees into workflow nets.
//!
//! Every subtree becomes a block between an entry and an exit place. Blocks of
//! xor children share their parent's entry and exit; no block ever feeds back
//! into its own entry place, so the sharing is safe.

use crate::tree::{Operator, ProcessTree};

use super::{PetriNet, WorkflowNet};

pub fn tree_to_net(tree: &ProcessTree) -> WorkflowNet {
    let mut b = Builder::default();
    let source = b.place();
    let sink = b.place();
    b.block(tree, &source, &sink);
    WorkflowNet {
        net: b.net,
        source,
        sink,
    }
}

#[derive(Default)]
struct Builder {
    net: PetriNet,
    next_place: usize,
    next_transition: usize,
}

impl Builder {
    fn place(&mut self) -> String {
        let id = format!("p{}", self.next_place);
        self.next_place += 1;
        self.net.add_place(&id).expect("fresh id");
        id
    }

    fn transition(&mut self, label: Option<crate::tree::Activity>) -> String {
        let id = format!("t{}", self.next_transition);
        self.next_transition += 1;
        self.net.add_transition(&id, label).expect("fresh id");
        id
    }

    /// A silent transition consuming one token from each of `from` and
    /// producing one on each of `to`.
    fn silent(&mut self, from: &[&str], to: &[&str]) -> String {
        let t = self.transition(None);
        for p in from {
            self.net.add_arc(p, &t, 1).expect("valid arc");
        }
        for p in to {
            self.net.add_arc(&t, p, 1).expect("valid arc");
        }
        t
    }

    fn block(&mut self, tree: &ProcessTree, entry: &str, exit: &str) {
        match tree {
            ProcessTree::Activity(a) => {
                let t = self.transition(Some(a.clone()));
                self.net.add_arc(entry, &t, 1).expect("valid arc");
                self.net.add_arc(&t, exit, 1).expect("valid arc");
            }
            ProcessTree::Tau => {
                self.silent(&[entry], &[exit]);
            }
            ProcessTree::Node(op, children) => match op {
                Operator::Xor => {
                    for child in children {
                        self.block(child, entry, exit);
                    }
                }
                Operator::Seq => {
                    let mut from = entry.to_string();
                    for (i, child) in children.iter().enumerate() {
                        let to = if i + 1 == children.len() {
                            exit.to_string()
                        } else {
                            self.place()
                        };
                        self.block(child, &from, &to);
                        from = to;
                    }
                }
                Operator::Concurrent => {
                    let (ins, outs) = self.child_places(children);
                    let ins_ref: Vec<&str> = ins.iter().map(String::as_str).collect();
                    let outs_ref: Vec<&str> = outs.iter().map(String::as_str).collect();
                    self.silent(&[entry], &ins_ref);
                    for (child, (i, o)) in children.iter().zip(ins.iter().zip(&outs)) {
                        self.block(child, i, o);
                    }
                    self.silent(&outs_ref, &[exit]);
                }
                Operator::Loop => {
                    let body_entry = self.place();
                    let body_exit = self.place();
                    self.silent(&[entry], &[&body_entry]);
                    self.block(&children[0], &body_entry, &body_exit);
                    for redo in &children[1..] {
                        self.block(redo, &body_exit, &body_entry);
                    }
                    self.silent(&[&body_exit], &[exit]);
                }
                Operator::Interleaved => {
                    // One milestone token: a child holds it from grab to release.
                    let milestone = self.place();
                    let ready: Vec<String> = children.iter().map(|_| self.place()).collect();
                    let done: Vec<String> = children.iter().map(|_| self.place()).collect();
                    let mut split_out = vec![milestone.as_str()];
                    split_out.extend(ready.iter().map(String::as_str));
                    self.silent(&[entry], &split_out);
                    for (i, child) in children.iter().enumerate() {
                        let cin = self.place();
                        let cout = self.place();
                        self.silent(&[&milestone, &ready[i]], &[&cin]);
                        self.block(child, &cin, &cout);
                        self.silent(&[&cout], &[&milestone, &done[i]]);
                    }
                    let mut join_in = vec![milestone.as_str()];
                    join_in.extend(done.iter().map(String::as_str));
                    self.silent(&join_in, &[exit]);
                }
                Operator::Or => {
                    // `none` until the first child starts, `some` afterwards.
                    let none = self.place();
                    let some = self.place();
                    let choice: Vec<String> = children.iter().map(|_| self.place()).collect();
                    let done: Vec<String> = children.iter().map(|_| self.place()).collect();
                    let mut split_out = vec![none.as_str()];
                    split_out.extend(choice.iter().map(String::as_str));
                    self.silent(&[entry], &split_out);
                    for (i, child) in children.iter().enumerate() {
                        let cin = self.place();
                        self.silent(&[&choice[i], &none], &[&cin, &some]);
                        self.silent(&[&choice[i], &some], &[&cin, &some]);
                        self.silent(&[&choice[i], &some], &[&done[i], &some]);
                        self.block(child, &cin, &done[i]);
                    }
                    let mut join_in = vec![some.as_str()];
                    join_in.extend(done.iter().map(String::as_str));
                    self.silent(&join_in, &[exit]);
                }
            },
        }
    }

    fn child_places(&mut self, children: &[ProcessTree]) -> (Vec<String>, Vec<String>) {
        children.iter().map(|_| (self.place(), self.place())).unzip()
    }
}
