//! Event log, per-user specification store, trip mining and contradiction
//! resolution.

mod events;
mod reason;
mod store;
mod trips;

pub use events::{format_timestamp, parse_timestamp, EventLog, EventRecord, UserId};
pub use reason::{
    infer_never_gates, mine_log, relevant_formulas, resolve_contradiction, spec_formula,
    Resolution, DEFAULT_NEVER_GATE_THRESHOLD,
};
pub use store::{SpecStore, SpecTriple};
pub use trips::{mine_trip, reconstruct_trips, Trip};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KnowledgeError {
    #[error("event for `{user}` at {timestamp} is earlier than its previous event at {previous}")]
    OutOfOrder {
        user: UserId,
        previous: String,
        timestamp: String,
    },
    #[error("invalid timestamp `{0}` (expected YYYY-MM-DDTHH:MM:SS)")]
    Timestamp(String),
    #[error("event CSV line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("specification line {line}: {message}")]
    Tsv { line: usize, message: String },
    #[error("`{user}` already has a triple for `{formula}`")]
    DuplicateTriple { user: UserId, formula: String },
    #[error("occurrence count of `{0}` must be at least 1")]
    ZeroCount(String),
    #[error("malformed trip: {0}")]
    MalformedTrip(String),
    #[error("event refers to unknown node `{0}`")]
    UnknownNode(String),
    #[error("specification of `{user}` does not contradict `{observation}`")]
    NoContradiction { user: UserId, observation: String },
}
