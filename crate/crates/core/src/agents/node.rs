use chrono::NaiveDateTime;

use super::AgentError;
use crate::graph::{car_enters, car_exits, car_moves, GraphError, NodeId, NodeLabel, WorldGraph};
use crate::knowledge::EventRecord;

/// Graph change requested by a node agent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Transformation {
    Enter { car: NodeId, gate: NodeId },
    Move { car: NodeId, node: NodeId },
    Exit { car: NodeId },
}

impl Transformation {
    pub fn apply(&self, g: &WorldGraph) -> Result<WorldGraph, GraphError> {
        match self {
            Transformation::Enter { car, gate } => car_enters(g, car, gate),
            Transformation::Move { car, node } => car_moves(g, car, node),
            Transformation::Exit { car } => car_exits(g, car),
        }
    }

    pub fn car(&self) -> &NodeId {
        match self {
            Transformation::Enter { car, .. }
            | Transformation::Move { car, .. }
            | Transformation::Exit { car } => car,
        }
    }
}

/// A detection of `user` at `node`. A gate detection is an entry when the
/// car is outside and an exit when it is already inside; any other node
/// means the car moved there. The node id is resolved to the graph's
/// spelling before it is recorded.
pub fn a1_detect(
    g: &WorldGraph,
    node: &str,
    user: &str,
    timestamp: NaiveDateTime,
) -> Result<(EventRecord, Transformation), AgentError> {
    let node = g
        .resolve(node)
        .ok_or_else(|| AgentError::UnknownNode(node.to_string()))?
        .clone();
    let inside = g.label(user) == Some(NodeLabel::Car);
    let t = match (g.label(&node), inside) {
        (Some(NodeLabel::Gate), false) => Transformation::Enter {
            car: user.to_string(),
            gate: node.clone(),
        },
        (Some(NodeLabel::Gate), true) => Transformation::Exit {
            car: user.to_string(),
        },
        _ => Transformation::Move {
            car: user.to_string(),
            node: node.clone(),
        },
    };
    Ok((EventRecord::new(user, node, timestamp), t))
}
