//! Context-aware preference engine for smart parking spaces.
//!
//! User detections at graph nodes are mined into temporal-logic
//! specifications; when a user reaches a gate the specification is checked
//! with a labeled semantic-tableaux prover and the open branches name the
//! parking spots worth suggesting.
//!
//! * [`ltl`] formulas, parser, printer, negation normal form
//! * [`tableaux`] truth trees and the satisfiability/validity decisions
//! * [`graph`] the labeled attributed world graph and its transformations
//! * [`knowledge`] events, specification triples, mining and contradiction
//!   resolution
//! * [`agents`] node, follower and decision agents
//! * [`sim`] scenario files, the deterministic simulator and the generator

pub mod agents;
pub mod graph;
pub mod knowledge;
pub mod ltl;
pub mod sim;
pub mod tableaux;

pub use ltl::{nnf, parse, Formula};
pub use tableaux::{
    build_tree, export_tree, is_satisfiable, is_valid, open_consequences, Satisfiability,
    TreeFormat, TruthTree, Validity,
};
