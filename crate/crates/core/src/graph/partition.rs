//! Splitting a world graph into complementary subgraphs and gluing them back.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use super::{load_graph, save_graph, GraphError, NodeId, WorldGraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphPartition {
    pub parts: Vec<WorldGraph>,
    /// Nodes present in two or more parts.
    pub border_nodes: BTreeSet<NodeId>,
    /// Index of the part that owns each node.
    pub provenance: BTreeMap<NodeId, usize>,
}

/// Splits `g` into `k` parts by breadth-first growth from `k` seeds spread
/// evenly over the sorted node ids. Each edge goes to the part owning its
/// source; a destination owned elsewhere is replicated as a border node.
pub fn split(g: &WorldGraph, k: usize) -> Result<GraphPartition, GraphError> {
    let ids: Vec<&NodeId> = g.nodes().map(|(id, _)| id).collect();
    if k == 0 || k > ids.len() {
        return Err(GraphError::InvalidPartCount {
            parts: k,
            nodes: ids.len(),
        });
    }
    let mut neighbours: BTreeMap<&NodeId, BTreeSet<&NodeId>> = BTreeMap::new();
    for ((s, d), _) in g.edges() {
        neighbours.entry(s).or_default().insert(d);
        neighbours.entry(d).or_default().insert(s);
    }

    let mut owner: BTreeMap<NodeId, usize> = BTreeMap::new();
    let mut sizes = vec![0usize; k];
    let mut queue = VecDeque::new();
    for (part, size) in sizes.iter_mut().enumerate() {
        let seed = ids[part * ids.len() / k];
        owner.insert(seed.clone(), part);
        *size += 1;
        queue.push_back(seed);
    }
    loop {
        while let Some(node) = queue.pop_front() {
            let part = owner[node];
            for next in neighbours.get(node).into_iter().flatten() {
                if !owner.contains_key(*next) {
                    owner.insert((*next).clone(), part);
                    sizes[part] += 1;
                    queue.push_back(next);
                }
            }
        }
        // Components without a seed go to the currently smallest part.
        let Some(rest) = ids.iter().find(|id| !owner.contains_key(**id)) else {
            break;
        };
        let part = (0..k).min_by_key(|&p| (sizes[p], p)).unwrap();
        owner.insert((*rest).clone(), part);
        sizes[part] += 1;
        queue.push_back(rest);
    }

    let mut parts = vec![WorldGraph::new(); k];
    for (id, node) in g.nodes() {
        parts[owner[id]].insert_node(id.clone(), node.label, node.attrs.clone());
    }
    for ((s, d), e) in g.edges() {
        let part = &mut parts[owner[s]];
        if !part.contains(d) {
            let node = g.node(d).expect("edge endpoints exist");
            part.insert_node(d.clone(), node.label, node.attrs.clone());
        }
        part.insert_edge(s, d, e.label.clone(), e.attrs.clone())?;
    }
    let border_nodes = owner
        .keys()
        .filter(|id| parts.iter().filter(|p| p.contains(id)).count() > 1)
        .cloned()
        .collect();
    Ok(GraphPartition {
        parts,
        border_nodes,
        provenance: owner,
    })
}

/// Union of all parts. Replicated nodes and edges must agree everywhere.
pub fn glue(p: &GraphPartition) -> Result<WorldGraph, GraphError> {
    if p.parts.is_empty() {
        return Err(GraphError::EmptyPartition);
    }
    let mut g = WorldGraph::new();
    for part in &p.parts {
        for (id, node) in part.nodes() {
            match g.node(id) {
                Some(seen) if seen != node => {
                    return Err(GraphError::InconsistentReplica(id.clone()))
                }
                Some(_) => {}
                None => g.insert_node(id.clone(), node.label, node.attrs.clone()),
            }
        }
    }
    for part in &p.parts {
        for ((s, d), e) in part.edges() {
            match g.edge(s, d) {
                Some(seen) if seen != e => {
                    return Err(GraphError::InconsistentReplica(format!("{s}->{d}")))
                }
                Some(_) => {}
                None => g.insert_edge(s, d, e.label.clone(), e.attrs.clone())?,
            }
        }
    }
    Ok(g)
}

/// Text form: a `[part N]` section per part holding that part in the graph
/// line format, then an `[owner]` section of `<node> <part>` lines.
pub fn save_partition(p: &GraphPartition) -> String {
    let mut out = String::new();
    for (i, part) in p.parts.iter().enumerate() {
        writeln!(out, "[part {i}]").unwrap();
        out.push_str(&save_graph(part));
    }
    out.push_str("[owner]\n");
    for (id, part) in &p.provenance {
        writeln!(out, "{id} {part}").unwrap();
    }
    out
}

pub fn load_partition(text: &str) -> Result<GraphPartition, GraphError> {
    let mut sections: Vec<(usize, String, String)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.starts_with('[') && trimmed.ends_with(']') {
            sections.push((
                i + 1,
                trimmed[1..trimmed.len() - 1].trim().to_string(),
                String::new(),
            ));
        } else if let Some((_, _, body)) = sections.last_mut() {
            body.push_str(line);
            body.push('\n');
        } else if !trimmed.is_empty() && !trimmed.starts_with('#') {
            return Err(GraphError::Syntax {
                line: i + 1,
                message: "content before the first section".into(),
            });
        }
    }
    let mut parts = Vec::new();
    let mut provenance = BTreeMap::new();
    for (start, name, body) in sections {
        let offset = |e: GraphError| match e {
            GraphError::Syntax { line, message } => GraphError::Syntax {
                line: line + start,
                message,
            },
            GraphError::DuplicateNode { line, id } => GraphError::DuplicateNode {
                line: line + start,
                id,
            },
            GraphError::DanglingEdge { line, id } => GraphError::DanglingEdge {
                line: line + start,
                id,
            },
            GraphError::UnknownLabel { line, label } => GraphError::UnknownLabel {
                line: line + start,
                label,
            },
            other => other,
        };
        if let Some(index) = name.strip_prefix("part ") {
            if index.trim().parse::<usize>().ok() != Some(parts.len()) {
                return Err(GraphError::Syntax {
                    line: start,
                    message: format!("expected `[part {}]`", parts.len()),
                });
            }
            parts.push(load_graph(&body).map_err(offset)?);
        } else if name == "owner" {
            for (j, line) in body.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let bad = || GraphError::Syntax {
                    line: start + j + 1,
                    message: format!("expected `<node> <part>`, got `{line}`"),
                };
                let (id, part) = line.split_once(char::is_whitespace).ok_or_else(bad)?;
                let part: usize = part.trim().parse().map_err(|_| bad())?;
                provenance.insert(id.to_string(), part);
            }
        } else {
            return Err(GraphError::Syntax {
                line: start,
                message: format!("unknown section `[{name}]`"),
            });
        }
    }
    for (id, &part) in &provenance {
        if !parts.get(part).is_some_and(|p| p.contains(id)) {
            return Err(GraphError::Invariant(format!(
                "owner of `{id}` is part {part}, which lacks it"
            )));
        }
    }
    let border_nodes = provenance
        .keys()
        .filter(|id| parts.iter().filter(|p| p.contains(id)).count() > 1)
        .cloned()
        .collect();
    Ok(GraphPartition {
        parts,
        border_nodes,
        provenance,
    })
}
