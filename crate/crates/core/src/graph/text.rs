use std::fmt::Write as _;

use super::{is_node_id, Attributes, GraphError, NodeLabel, WorldGraph};

enum Record<'a> {
    Node {
        id: &'a str,
        label: &'a str,
        attrs: Vec<&'a str>,
    },
    Edge {
        src: &'a str,
        dst: &'a str,
        label: &'a str,
        attrs: Vec<&'a str>,
    },
}

fn parse_record(line: usize, text: &str) -> Result<Option<Record<'_>>, GraphError> {
    let text = text.split('#').next().unwrap_or("").trim();
    if text.is_empty() {
        return Ok(None);
    }
    let words: Vec<&str> = text.split_whitespace().collect();
    let syntax = |message: String| GraphError::Syntax { line, message };
    if words.get(1) == Some(&"->") {
        if words.len() < 4 {
            return Err(syntax(format!(
                "edge record needs `<src> -> <dst> <label>`, got `{text}`"
            )));
        }
        return Ok(Some(Record::Edge {
            src: words[0],
            dst: words[2],
            label: words[3],
            attrs: words[4..].to_vec(),
        }));
    }
    if words.len() < 2 {
        return Err(syntax(format!(
            "node record needs `<id> <label>`, got `{text}`"
        )));
    }
    if !is_node_id(words[0]) {
        return Err(syntax(format!("invalid node id `{}`", words[0])));
    }
    Ok(Some(Record::Node {
        id: words[0],
        label: words[1],
        attrs: words[2..].to_vec(),
    }))
}

fn parse_attrs(line: usize, words: &[&str]) -> Result<Attributes, GraphError> {
    let mut attrs = Attributes::new();
    for word in words {
        let (key, value) = match word.split_once('=') {
            Some((k, v)) => (k, Some(v.to_string())),
            None => (*word, None),
        };
        if key.is_empty() {
            return Err(GraphError::Syntax {
                line,
                message: format!("attribute `{word}` has no name"),
            });
        }
        if attrs.insert(key.to_string(), value).is_some() {
            return Err(GraphError::Syntax {
                line,
                message: format!("attribute `{key}` given twice"),
            });
        }
    }
    Ok(attrs)
}

/// Parses the line format: `<id> <label> [key=value ...]` for nodes,
/// `<src> -> <dst> <label> [key=value ...]` for edges, `#` starts a comment.
/// Edges may refer to nodes declared later in the text. The result must
/// satisfy the parking invariants.
pub fn load_graph(text: &str) -> Result<WorldGraph, GraphError> {
    let records = text
        .lines()
        .enumerate()
        .filter_map(|(i, l)| {
            parse_record(i + 1, l)
                .transpose()
                .map(|r| r.map(|r| (i + 1, r)))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut g = WorldGraph::new();
    let mut canon = std::collections::BTreeMap::new();
    for (line, rec) in &records {
        if let Record::Node { id, label, attrs } = rec {
            let label: NodeLabel = label.parse().map_err(|_| GraphError::UnknownLabel {
                line: *line,
                label: label.to_string(),
            })?;
            if g.contains(id) {
                return Err(GraphError::DuplicateNode {
                    line: *line,
                    id: id.to_string(),
                });
            }
            if let Some(other) = canon.insert(super::canonical_key(id), *id) {
                return Err(GraphError::Syntax {
                    line: *line,
                    message: format!("node id `{id}` collides with `{other}` after normalization"),
                });
            }
            g.insert_node(*id, label, parse_attrs(*line, attrs)?);
        }
    }
    for (line, rec) in &records {
        if let Record::Edge {
            src,
            dst,
            label,
            attrs,
        } = rec
        {
            for end in [src, dst] {
                if !g.contains(end) {
                    return Err(GraphError::DanglingEdge {
                        line: *line,
                        id: end.to_string(),
                    });
                }
            }
            if g.edge(src, dst).is_some() {
                return Err(GraphError::DuplicateEdge {
                    line: *line,
                    src: src.to_string(),
                    dst: dst.to_string(),
                });
            }
            g.insert_edge(src, dst, *label, parse_attrs(*line, attrs)?)?;
        }
    }
    g.check_invariants()?;
    Ok(g)
}

fn write_attrs(out: &mut String, attrs: &Attributes) {
    for (k, v) in attrs {
        match v {
            Some(v) => write!(out, " {k}={v}").unwrap(),
            None => write!(out, " {k}").unwrap(),
        }
    }
}

/// Nodes sorted by id, a blank line, then edges sorted by endpoints.
pub fn save_graph(g: &WorldGraph) -> String {
    let mut out = String::new();
    for (id, node) in g.nodes() {
        write!(out, "{id} {}", node.label).unwrap();
        write_attrs(&mut out, &node.attrs);
        out.push('\n');
    }
    if g.edge_count() > 0 {
        out.push('\n');
    }
    for ((s, d), e) in g.edges() {
        write!(out, "{s} -> {d} {}", e.label).unwrap();
        write_attrs(&mut out, &e.attrs);
        out.push('\n');
    }
    out
}

fn dot_label(id: &str, label: impl std::fmt::Display, attrs: &Attributes) -> String {
    let mut s = format!("{id} [{label}]");
    for (k, v) in attrs {
        match v {
            Some(v) => write!(s, "\\n{k}={v}").unwrap(),
            None => write!(s, "\\n{k}").unwrap(),
        }
    }
    s.replace('"', "\\\"")
}

/// Graphviz rendering with the same content as [`save_graph`].
pub fn to_dot(g: &WorldGraph) -> String {
    let mut out = String::from("digraph world {\n");
    for (id, node) in g.nodes() {
        let shape = match node.label {
            NodeLabel::Gate => "diamond",
            NodeLabel::Road => "box",
            NodeLabel::Place => "ellipse",
            NodeLabel::Car => "octagon",
        };
        writeln!(
            out,
            "  \"{id}\" [shape={shape}, label=\"{}\"];",
            dot_label(id, node.label, &node.attrs)
        )
        .unwrap();
    }
    for ((s, d), e) in g.edges() {
        let mut label = e.label.clone();
        for (k, v) in &e.attrs {
            match v {
                Some(v) => write!(label, "\\n{k}={v}").unwrap(),
                None => write!(label, "\\n{k}").unwrap(),
            }
        }
        let style = if e.label == super::AT {
            ", style=dashed"
        } else {
            ""
        };
        writeln!(out, "  \"{s}\" -> \"{d}\" [label=\"{label}\"{style}];").unwrap();
    }
    out.push_str("}\n");
    out
}
