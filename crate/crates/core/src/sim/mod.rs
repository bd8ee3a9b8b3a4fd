//! Deterministic simulation of a parking space driven by a timeline of
//! detections, plus a seeded scenario generator.

mod generate;
mod report;
mod run;
mod scenario;

pub use generate::{generate, GenParams};
pub use report::{DecisionRecord, SimStats, SimulationReport};
pub use run::{run, run_observed, DecisionContext};
pub use scenario::{load_scenario, save_scenario, Detection, Scenario, SimConfig};

use crate::agents::AgentError;
use crate::graph::GraphError;
use crate::knowledge::KnowledgeError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("scenario line {line}: {message}")]
    Scenario { line: usize, message: String },
    #[error("scenario graph: {0}")]
    Graph(#[from] GraphError),
    #[error("detection {index} ({user} at {node}): {source}")]
    Step {
        index: usize,
        user: String,
        node: String,
        source: Box<AgentError>,
    },
    #[error(transparent)]
    Knowledge(#[from] KnowledgeError),
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error("simulation invariant violated: {0}")]
    Invariant(String),
}
