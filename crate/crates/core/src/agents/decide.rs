use std::collections::BTreeMap;
use std::fmt;

use super::{AgentError, AgentMessage, AgentRole, MessageKind};
use crate::graph::{NodeId, NodeLabel, WorldGraph};
use crate::knowledge::{
    infer_never_gates, mine_trip, relevant_formulas, resolve_contradiction, spec_formula,
    Resolution, SpecStore, Trip, UserId, DEFAULT_NEVER_GATE_THRESHOLD,
};
use crate::ltl::{is_atom_name, Formula};
use crate::tableaux::{build_tree, open_consequences, TruthTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecisionConfig {
    /// Offer the nearest free place when no preferred place is free.
    pub fallback_nearest: bool,
    /// Completed trips needed before never-used gates are asserted.
    pub never_gate_threshold: usize,
}

impl Default for DecisionConfig {
    fn default() -> Self {
        DecisionConfig {
            fallback_nearest: false,
            never_gate_threshold: DEFAULT_NEVER_GATE_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rationale {
    Preferred,
    FallbackCandidate,
    NearestFree,
    NoSuggestion,
}

impl fmt::Display for Rationale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceDecision {
    pub user: UserId,
    pub gate: NodeId,
    pub suggestion: Option<NodeId>,
    /// Places consistent with the user's specification, highest r first.
    pub candidates: Vec<(NodeId, u32)>,
    pub rationale: Rationale,
    /// The formula the tree was built for.
    pub formula: Formula,
    pub tree: TruthTree,
    /// Present when the specification had to be repaired first.
    pub resolution: Option<Resolution>,
}

impl PreferenceDecision {
    /// r of the suggested place, if it came from the candidate list.
    pub fn suggestion_r(&self) -> Option<u32> {
        let s = self.suggestion.as_ref()?;
        self.candidates
            .iter()
            .find(|(c, _)| c == s)
            .map(|(_, r)| *r)
    }
}

/// Decides which place to offer `user` arriving at `gate`.
///
/// The user's relevant specification is conjoined with the observation
/// `gate`; a contradiction is first repaired by removing the conflicting
/// formulas. Places asserted on open branches of the resulting tree are
/// ranked by their occurrence count and the first free one is offered.
/// The store is modified only by that repair.
pub fn a3_decide(
    store: &mut SpecStore,
    graph: &WorldGraph,
    user: &str,
    gate: &str,
    config: &DecisionConfig,
) -> Result<PreferenceDecision, AgentError> {
    if graph.label(gate) != Some(NodeLabel::Gate) || !is_atom_name(gate) {
        return Err(AgentError::NotAGate(gate.to_string()));
    }
    let observation = Formula::atom(gate);
    let mut formula = spec_formula(store, user, &observation);
    let mut tree = build_tree(&formula);
    let mut resolution = None;
    if tree.is_closed() {
        resolution = Some(resolve_contradiction(store, user, &observation)?);
        formula = spec_formula(store, user, &observation);
        tree = build_tree(&formula);
    }

    let counts = relevant_formulas(store, user, &observation);
    let mut candidates: BTreeMap<NodeId, u32> = BTreeMap::new();
    for (_, atoms) in open_consequences(&tree) {
        for atom in atoms {
            if graph.label(&atom) != Some(NodeLabel::Place) {
                continue;
            }
            let r = counts
                .iter()
                .filter(|(f, _)| f.atoms().contains(&atom))
                .map(|(_, r)| *r)
                .max()
                .unwrap_or(0);
            candidates.insert(atom, r);
        }
    }
    let mut candidates: Vec<(NodeId, u32)> = candidates.into_iter().collect();
    candidates.sort_by(|(a, ra), (b, rb)| rb.cmp(ra).then_with(|| a.cmp(b)));

    let free = candidates
        .iter()
        .position(|(spot, _)| graph.occupant(spot).is_none());
    let (suggestion, rationale) = match free {
        Some(0) => (Some(candidates[0].0.clone()), Rationale::Preferred),
        Some(i) => (Some(candidates[i].0.clone()), Rationale::FallbackCandidate),
        None if config.fallback_nearest => match graph.nearest_free_spot(gate)? {
            Some(spot) => (Some(spot), Rationale::NearestFree),
            None => (None, Rationale::NoSuggestion),
        },
        None => (None, Rationale::NoSuggestion),
    };
    Ok(PreferenceDecision {
        user: user.to_string(),
        gate: gate.to_string(),
        suggestion,
        candidates,
        rationale,
        formula,
        tree,
        resolution,
    })
}

/// The decision agent: owns the store and each user's trip history.
#[derive(Debug, Clone, Default)]
pub struct DecisionAgent {
    pub store: SpecStore,
    pub config: DecisionConfig,
    history: BTreeMap<UserId, Vec<Trip>>,
}

impl DecisionAgent {
    pub fn new(config: DecisionConfig) -> Self {
        DecisionAgent {
            config,
            ..Default::default()
        }
    }

    pub fn trips(&self, user: &str) -> &[Trip] {
        self.history.get(user).map_or(&[], Vec::as_slice)
    }

    /// Mines a finished trip into the store and refreshes the user's
    /// never-used gates. Returns the formulas added or reinforced.
    pub fn record_trip(
        &mut self,
        trip: Trip,
        graph: &WorldGraph,
    ) -> Result<Vec<Formula>, AgentError> {
        trip.validate(graph)?;
        let mut changed = mine_trip(&trip)?;
        for f in &changed {
            self.store.upsert(&trip.user, f.clone());
        }
        let user = trip.user.clone();
        let history = self.history.entry(user.clone()).or_default();
        history.push(trip);
        let gates: Vec<NodeId> = graph.nodes_with(NodeLabel::Gate).cloned().collect();
        changed.extend(infer_never_gates(
            &mut self.store,
            &user,
            history.iter(),
            &gates,
            self.config.never_gate_threshold,
        ));
        Ok(changed)
    }

    pub fn decide(
        &mut self,
        graph: &WorldGraph,
        user: &str,
        gate: &str,
    ) -> Result<PreferenceDecision, AgentError> {
        a3_decide(&mut self.store, graph, user, gate, &self.config)
    }

    /// Processes one incoming message; a decision request is answered with
    /// a `Decision` message.
    pub fn handle(
        &mut self,
        graph: &WorldGraph,
        msg: AgentMessage,
    ) -> Result<Option<AgentMessage>, AgentError> {
        match msg.into_kind() {
            MessageKind::TripReport(trip) => {
                self.record_trip(trip, graph)?;
                Ok(None)
            }
            MessageKind::DecisionRequest { user, gate } => {
                let d = self.decide(graph, &user, &gate)?;
                Ok(Some(AgentMessage::new(
                    AgentRole::Decision,
                    MessageKind::Decision(Box::new(d)),
                )?))
            }
            other => Err(AgentError::WrongSender {
                kind: other.name(),
                sender: AgentRole::Decision,
            }),
        }
    }
}
