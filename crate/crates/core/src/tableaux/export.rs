use std::fmt::Write;
use std::str::FromStr;

use super::{BranchStatus, TruthTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeFormat {
    Ascii,
    Dot,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown tree format `{0}` (expected `ascii` or `dot`)")]
pub struct UnknownFormat(pub String);

impl FromStr for TreeFormat {
    type Err = UnknownFormat;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ascii" => Ok(TreeFormat::Ascii),
            "dot" => Ok(TreeFormat::Dot),
            other => Err(UnknownFormat(other.to_string())),
        }
    }
}

/// Renders a finished tree. Both formats are deterministic.
pub fn export_tree(tree: &TruthTree, format: TreeFormat) -> String {
    match format {
        TreeFormat::Ascii => ascii(tree),
        TreeFormat::Dot => dot(tree),
    }
}

fn line(tree: &TruthTree, id: usize) -> String {
    let node = &tree.nodes[id];
    match node.leaf {
        Some(status) => format!("{} {}", node.content, status.marker()),
        None => node.content.to_string(),
    }
}

fn ascii(tree: &TruthTree) -> String {
    let mut out = String::new();
    out.push_str(&line(tree, 0));
    out.push('\n');
    ascii_children(tree, 0, "", &mut out);
    out
}

fn ascii_children(tree: &TruthTree, id: usize, indent: &str, out: &mut String) {
    let children = &tree.nodes[id].children;
    for (i, &child) in children.iter().enumerate() {
        let last = i + 1 == children.len();
        let (branch, next) = if last {
            ("`-- ", "    ")
        } else {
            ("+-- ", "|   ")
        };
        let _ = writeln!(out, "{indent}{branch}{}", line(tree, child));
        ascii_children(tree, child, &format!("{indent}{next}"), out);
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn dot(tree: &TruthTree) -> String {
    let mut out =
        String::from("digraph truth_tree {\n    node [shape=box, fontname=\"monospace\"];\n");
    for (id, node) in tree.nodes.iter().enumerate() {
        let attrs = match node.leaf {
            Some(BranchStatus::Closed) => ", peripheries=2, color=red",
            Some(BranchStatus::Open) => ", peripheries=1, color=darkgreen",
            None => "",
        };
        let _ = writeln!(
            out,
            "    n{id} [label=\"{}\"{attrs}];",
            escape(&line(tree, id))
        );
    }
    for (id, node) in tree.nodes.iter().enumerate() {
        for child in &node.children {
            let _ = writeln!(out, "    n{id} -> n{child};");
        }
    }
    out.push_str("}\n");
    out
}
