//! The three agent tiers: node agents (A1) turn detections into graph
//! transformations, follower agents (A2) track one car through a visit, and
//! the decision agent (A3) owns the specification store and answers
//! preference requests at the gates.

mod decide;
mod follower;
mod node;

use std::fmt;

pub use decide::{a3_decide, DecisionAgent, DecisionConfig, PreferenceDecision, Rationale};
pub use follower::{a2_finalize, a2_spawn, a2_update, FollowerState};
pub use node::{a1_detect, Transformation};

use crate::graph::{GraphError, NodeId};
use crate::knowledge::{EventRecord, KnowledgeError, Trip, UserId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AgentRole {
    Node,
    Follower,
    Decision,
}

impl fmt::Display for AgentRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AgentRole::Node => "A1",
            AgentRole::Follower => "A2",
            AgentRole::Decision => "A3",
        })
    }
}

#[derive(Debug, Clone)]
pub enum MessageKind {
    Detection(EventRecord),
    FollowUpdate { user: UserId, node: NodeId },
    TripReport(Trip),
    DecisionRequest { user: UserId, gate: NodeId },
    Decision(Box<PreferenceDecision>),
}

impl MessageKind {
    fn name(&self) -> &'static str {
        match self {
            MessageKind::Detection(_) => "Detection",
            MessageKind::FollowUpdate { .. } => "FollowUpdate",
            MessageKind::TripReport(_) => "TripReport",
            MessageKind::DecisionRequest { .. } => "DecisionRequest",
            MessageKind::Decision(_) => "Decision",
        }
    }

    fn allowed_from(&self, role: AgentRole) -> bool {
        match self {
            MessageKind::Detection(_) | MessageKind::FollowUpdate { .. } => role == AgentRole::Node,
            MessageKind::TripReport(_) => role == AgentRole::Follower,
            MessageKind::DecisionRequest { .. } => role != AgentRole::Decision,
            MessageKind::Decision(_) => role == AgentRole::Decision,
        }
    }
}

/// A message between agents. Construction checks that the sender tier is
/// allowed to emit that kind of message.
#[derive(Debug, Clone)]
pub struct AgentMessage {
    sender: AgentRole,
    kind: MessageKind,
}

impl AgentMessage {
    pub fn new(sender: AgentRole, kind: MessageKind) -> Result<Self, AgentError> {
        if !kind.allowed_from(sender) {
            return Err(AgentError::WrongSender {
                kind: kind.name(),
                sender,
            });
        }
        Ok(AgentMessage { sender, kind })
    }

    pub fn sender(&self) -> AgentRole {
        self.sender
    }

    pub fn kind(&self) -> &MessageKind {
        &self.kind
    }

    pub fn into_kind(self) -> MessageKind {
        self.kind
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AgentError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Knowledge(#[from] KnowledgeError),
    #[error("detection at unknown node `{0}`")]
    UnknownNode(String),
    #[error("`{0}` is not a gate")]
    NotAGate(NodeId),
    #[error("follower of `{0}` has already reported its trip")]
    DefunctFollower(UserId),
    #[error("follower of `{0}` has not seen its car leave")]
    IncompleteTrip(UserId),
    #[error("follower of `{expected}` received an event for `{found}`")]
    WrongUser { expected: UserId, found: UserId },
    #[error("{sender} may not send {kind} messages")]
    WrongSender {
        kind: &'static str,
        sender: AgentRole,
    },
}
