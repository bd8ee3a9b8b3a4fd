//! Labeled, attributed, instantiated digraph describing a parking space.
//!
//! Nodes are gateways (`G`), road segments (`R`), parking places (`P`) and
//! cars (`C`). A car's position is its single outgoing `at` edge; occupancy
//! of a place is derived from incoming `at` edges only.

mod partition;
mod text;
mod transform;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

pub use partition::{glue, load_partition, save_partition, split, GraphPartition};
pub use text::{load_graph, save_graph, to_dot};
pub use transform::{car_enters, car_exits, car_moves};

pub type NodeId = String;

/// Edge label used for car positions.
pub const AT: &str = "at";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeLabel {
    Gate,
    Road,
    Place,
    Car,
}

impl NodeLabel {
    pub fn code(self) -> char {
        match self {
            NodeLabel::Gate => 'G',
            NodeLabel::Road => 'R',
            NodeLabel::Place => 'P',
            NodeLabel::Car => 'C',
        }
    }
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

impl FromStr for NodeLabel {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "G" => Ok(NodeLabel::Gate),
            "R" => Ok(NodeLabel::Road),
            "P" => Ok(NodeLabel::Place),
            "C" => Ok(NodeLabel::Car),
            _ => Err(()),
        }
    }
}

/// Declared attributes and, where instantiated, their values. Values are
/// kept as uninterpreted text.
pub type Attributes = BTreeMap<String, Option<String>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeData {
    pub label: NodeLabel,
    pub attrs: Attributes,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeData {
    pub label: String,
    pub attrs: Attributes,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate node id `{id}`")]
    DuplicateNode { line: usize, id: NodeId },
    #[error("line {line}: duplicate edge `{src} -> {dst}`")]
    DuplicateEdge {
        line: usize,
        src: NodeId,
        dst: NodeId,
    },
    #[error("line {line}: edge endpoint `{id}` is not a node")]
    DanglingEdge { line: usize, id: NodeId },
    #[error("line {line}: unknown node label `{label}` (expected G, R, P or C)")]
    UnknownLabel { line: usize, label: String },
    #[error("node `{0}` does not exist")]
    MissingNode(NodeId),
    #[error("node `{id}` is labeled {found}, expected {expected}")]
    WrongLabel {
        id: NodeId,
        expected: &'static str,
        found: NodeLabel,
    },
    #[error("car `{0}` is already in the parking space")]
    CarPresent(NodeId),
    #[error("car `{0}` is not in the parking space")]
    CarAbsent(NodeId),
    #[error("parking place `{spot}` is occupied by `{car}`")]
    SpotOccupied { spot: NodeId, car: NodeId },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("cannot split {nodes} nodes into {parts} parts")]
    InvalidPartCount { parts: usize, nodes: usize },
    #[error("partition has no parts")]
    EmptyPartition,
    #[error("replicas of `{0}` disagree")]
    InconsistentReplica(NodeId),
}

/// Node ids are `[A-Za-z0-9_]+`.
pub fn is_node_id(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Key under which spellings of the same id compare equal: leading zeros of
/// a numeric suffix are dropped, so `p0018` and `p018` share `p18`.
pub fn canonical_key(id: &str) -> String {
    let split = id.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let (prefix, digits) = id.split_at(split);
    if digits.is_empty() || prefix.is_empty() {
        return id.to_string();
    }
    let trimmed = digits.trim_start_matches('0');
    format!("{prefix}{}", if trimmed.is_empty() { "0" } else { trimmed })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WorldGraph {
    nodes: BTreeMap<NodeId, NodeData>,
    edges: BTreeMap<(NodeId, NodeId), EdgeData>,
}

impl WorldGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: &str) -> Option<&NodeData> {
        self.nodes.get(id)
    }

    pub fn label(&self, id: &str) -> Option<NodeLabel> {
        self.nodes.get(id).map(|n| n.label)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.nodes.contains_key(id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&NodeId, &NodeData)> {
        self.nodes.iter()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&(NodeId, NodeId), &EdgeData)> {
        self.edges.iter()
    }

    pub fn edge(&self, src: &str, dst: &str) -> Option<&EdgeData> {
        self.edges.get(&(src.to_string(), dst.to_string()))
    }

    pub fn nodes_with(&self, label: NodeLabel) -> impl Iterator<Item = &NodeId> {
        self.nodes
            .iter()
            .filter(move |(_, n)| n.label == label)
            .map(|(id, _)| id)
    }

    /// Inserts or replaces a node.
    pub fn insert_node(&mut self, id: impl Into<NodeId>, label: NodeLabel, attrs: Attributes) {
        self.nodes.insert(id.into(), NodeData { label, attrs });
    }

    /// Inserts or replaces an edge. Both endpoints must exist.
    pub fn insert_edge(
        &mut self,
        src: &str,
        dst: &str,
        label: impl Into<String>,
        attrs: Attributes,
    ) -> Result<(), GraphError> {
        for end in [src, dst] {
            if !self.contains(end) {
                return Err(GraphError::MissingNode(end.to_string()));
            }
        }
        self.edges.insert(
            (src.to_string(), dst.to_string()),
            EdgeData {
                label: label.into(),
                attrs,
            },
        );
        Ok(())
    }

    /// Removes a node together with every incident edge.
    pub fn remove_node(&mut self, id: &str) -> Option<NodeData> {
        let data = self.nodes.remove(id)?;
        self.edges.retain(|(s, d), _| s != id && d != id);
        Some(data)
    }

    pub fn remove_edge(&mut self, src: &str, dst: &str) -> Option<EdgeData> {
        self.edges.remove(&(src.to_string(), dst.to_string()))
    }

    /// Graph id matching `raw` exactly, or else by [`canonical_key`].
    pub fn resolve(&self, raw: &str) -> Option<&NodeId> {
        if let Some((id, _)) = self.nodes.get_key_value(raw) {
            return Some(id);
        }
        let key = canonical_key(raw);
        self.nodes.keys().find(|id| canonical_key(id) == key)
    }

    /// Where a car currently is.
    pub fn position(&self, car: &str) -> Option<&NodeId> {
        self.edges
            .range((car.to_string(), String::new())..)
            .take_while(|((s, _), _)| s == car)
            .find(|(_, e)| e.label == AT)
            .map(|((_, d), _)| d)
    }

    /// The car parked at `spot`, if any.
    pub fn occupant(&self, spot: &str) -> Option<&NodeId> {
        self.edges
            .iter()
            .find(|((_, d), e)| d == spot && e.label == AT)
            .map(|((s, _), _)| s)
    }

    pub fn cars(&self) -> impl Iterator<Item = &NodeId> {
        self.nodes_with(NodeLabel::Car)
    }

    /// True iff `spot` is a parking place with no car at it.
    pub fn is_free(&self, spot: &str) -> Result<bool, GraphError> {
        self.expect_label(spot, NodeLabel::Place, "P")?;
        Ok(self.occupant(spot).is_none())
    }

    pub(crate) fn expect_label(
        &self,
        id: &str,
        label: NodeLabel,
        expected: &'static str,
    ) -> Result<&NodeData, GraphError> {
        let node = self
            .nodes
            .get(id)
            .ok_or_else(|| GraphError::MissingNode(id.to_string()))?;
        if node.label != label {
            return Err(GraphError::WrongLabel {
                id: id.to_string(),
                expected,
                found: node.label,
            });
        }
        Ok(node)
    }

    /// Successors over topology edges (everything except `at`), skipping cars.
    fn road_successors<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a NodeId> + 'a {
        self.edges
            .range((id.to_string(), String::new())..)
            .take_while(move |((s, _), _)| s == id)
            .filter(|(_, e)| e.label != AT)
            .map(|((_, d), _)| d)
            .filter(|d| self.label(d) != Some(NodeLabel::Car))
    }

    /// Hop distances from `from` over topology edges.
    pub fn hop_distances(&self, from: &str) -> Result<BTreeMap<NodeId, usize>, GraphError> {
        if !self.contains(from) {
            return Err(GraphError::MissingNode(from.to_string()));
        }
        let mut dist = BTreeMap::new();
        dist.insert(from.to_string(), 0);
        let mut queue = VecDeque::from([from.to_string()]);
        while let Some(node) = queue.pop_front() {
            let d = dist[&node];
            for next in self.road_successors(&node) {
                if !dist.contains_key(next) {
                    dist.insert(next.clone(), d + 1);
                    queue.push_back(next.clone());
                }
            }
        }
        Ok(dist)
    }

    /// Free parking place with the fewest hops from `from`; ties go to the
    /// smallest id.
    pub fn nearest_free_spot(&self, from: &str) -> Result<Option<NodeId>, GraphError> {
        let dist = self.hop_distances(from)?;
        Ok(dist
            .into_iter()
            .filter(|(id, _)| {
                self.label(id) == Some(NodeLabel::Place) && self.occupant(id).is_none()
            })
            .min_by(|(a, da), (b, db)| da.cmp(db).then_with(|| a.cmp(b)))
            .map(|(id, _)| id))
    }

    /// Shortest topology path `from → to` whose inner nodes are road
    /// segments. Ties are broken towards smaller ids.
    pub fn road_path(&self, from: &str, to: &str) -> Option<Vec<NodeId>> {
        let mut prev: BTreeMap<NodeId, NodeId> = BTreeMap::new();
        let mut queue = VecDeque::from([from.to_string()]);
        let mut seen = BTreeSet::from([from.to_string()]);
        while let Some(node) = queue.pop_front() {
            if node == to {
                let mut path = vec![node];
                while let Some(p) = prev.get(path.last().unwrap()) {
                    path.push(p.clone());
                }
                path.reverse();
                return Some(path);
            }
            if node != from && self.label(&node) != Some(NodeLabel::Road) {
                continue;
            }
            for next in self.road_successors(&node) {
                if seen.insert(next.clone()) {
                    prev.insert(next.clone(), node.clone());
                    queue.push_back(next.clone());
                }
            }
        }
        None
    }

    /// Checks the parking invariants: every car has exactly one `at` edge
    /// into a G, R or P node, no car has other outgoing edges, and no
    /// parking place holds two cars.
    pub fn check_invariants(&self) -> Result<(), GraphError> {
        for car in self.cars() {
            let outgoing: Vec<_> = self.edges.iter().filter(|((s, _), _)| s == car).collect();
            let at: Vec<_> = outgoing.iter().filter(|(_, e)| e.label == AT).collect();
            if at.len() != 1 || outgoing.len() != 1 {
                return Err(GraphError::Invariant(format!(
                    "car `{car}` has {} position edges and {} other outgoing edges",
                    at.len(),
                    outgoing.len() - at.len()
                )));
            }
            let target = &at[0].0 .1;
            if self.label(target) == Some(NodeLabel::Car) {
                return Err(GraphError::Invariant(format!(
                    "car `{car}` is at car `{target}`"
                )));
            }
        }
        let mut parked: BTreeMap<&NodeId, usize> = BTreeMap::new();
        for ((s, d), e) in &self.edges {
            if e.label == AT {
                if self.label(s) != Some(NodeLabel::Car) {
                    return Err(GraphError::Invariant(format!(
                        "`at` edge from non-car `{s}`"
                    )));
                }
                if self.label(d) == Some(NodeLabel::Place) {
                    *parked.entry(d).or_default() += 1;
                }
            }
        }
        if let Some((spot, n)) = parked.into_iter().find(|(_, n)| *n > 1) {
            return Err(GraphError::Invariant(format!("{n} cars at `{spot}`")));
        }
        Ok(())
    }
}

/// The bundled sample parking space (3 gates, 8 road segments, 30 places).
pub fn parking_fixture() -> WorldGraph {
    load_graph(PARKING_FIXTURE).expect("bundled fixture parses")
}

/// Text of [`parking_fixture`].
pub const PARKING_FIXTURE: &str = include_str!("../../fixtures/parking.graph");
