use std::collections::BTreeMap;

use super::{DecisionRecord, Scenario, SimError, SimStats, SimulationReport};
use crate::agents::{
    a1_detect, a2_finalize, a2_spawn, a2_update, AgentError, AgentMessage, AgentRole,
    DecisionAgent, FollowerState, MessageKind, PreferenceDecision, Transformation,
};
use crate::graph::{NodeLabel, WorldGraph};
use crate::knowledge::{EventLog, SpecStore};

/// State visible to an observer at each decision.
pub struct DecisionContext<'a> {
    /// The store as it was before the decision (and any repair) was made.
    pub store_before: &'a SpecStore,
    pub graph: &'a WorldGraph,
    pub decision: &'a PreferenceDecision,
}

/// Runs a scenario to completion.
pub fn run(s: &Scenario) -> Result<SimulationReport, SimError> {
    run_observed(s, |_| {})
}

/// Like [`run`], calling `observe` after every decision.
///
/// Detections are processed in timestamp order, ties in input order. A
/// detection goes to the node agent, whose graph transformation is applied
/// at once; an entry spawns a follower which asks the decision agent for a
/// suggestion before the car moves on, and an exit makes the follower
/// report its trip and retire.
pub fn run_observed<F>(s: &Scenario, mut observe: F) -> Result<SimulationReport, SimError>
where
    F: FnMut(&DecisionContext<'_>),
{
    let mut timeline: Vec<_> = s.timeline.iter().enumerate().collect();
    timeline.sort_by_key(|(i, d)| (d.timestamp, *i));

    let mut graph = s.graph.clone();
    let mut agent = DecisionAgent::new(s.config.decision_config());
    let mut followers: BTreeMap<String, FollowerState> = BTreeMap::new();
    let mut pending: BTreeMap<String, usize> = BTreeMap::new();
    let mut log = EventLog::new();
    let mut decisions: Vec<DecisionRecord> = Vec::new();
    let mut stats = SimStats::default();
    let (mut entered, mut exited) = (0usize, 0usize);

    for (index, d) in timeline {
        let step = |source: AgentError| SimError::Step {
            index: index + 1,
            user: d.user.clone(),
            node: d.node.clone(),
            source: Box::new(source),
        };
        let (event, transformation) =
            a1_detect(&graph, &d.node, &d.user, d.timestamp).map_err(step)?;
        let detection = AgentMessage::new(AgentRole::Node, MessageKind::Detection(event.clone()))
            .map_err(step)?;
        log::debug!("{:?}", detection.kind());
        log.record_event(event.clone())
            .map_err(|e| step(e.into()))?;
        graph = transformation.apply(&graph).map_err(|e| step(e.into()))?;

        match transformation {
            Transformation::Enter { car, gate } => {
                entered += 1;
                followers.insert(car.clone(), a2_spawn(event));
                let request = AgentMessage::new(
                    AgentRole::Follower,
                    MessageKind::DecisionRequest {
                        user: car.clone(),
                        gate,
                    },
                )
                .map_err(step)?;
                let store_before = agent.store.clone();
                let reply = agent.handle(&graph, request).map_err(step)?;
                let Some(MessageKind::Decision(decision)) = reply.map(AgentMessage::into_kind)
                else {
                    return Err(SimError::Invariant(
                        "decision request went unanswered".into(),
                    ));
                };
                observe(&DecisionContext {
                    store_before: &store_before,
                    graph: &graph,
                    decision: &decision,
                });
                if decision
                    .resolution
                    .as_ref()
                    .is_some_and(|r| !r.removed.is_empty() && !r.unresolved)
                {
                    stats.contradictions_resolved += 1;
                }
                pending.insert(car, decisions.len());
                decisions.push(DecisionRecord {
                    timestamp: d.timestamp,
                    decision: *decision,
                    parked: None,
                    trip_finished: false,
                });
            }
            Transformation::Move { car, node } => {
                let update = AgentMessage::new(
                    AgentRole::Node,
                    MessageKind::FollowUpdate {
                        user: car.clone(),
                        node: node.clone(),
                    },
                )
                .map_err(step)?;
                log::debug!("{:?}", update.kind());
                let follower = followers
                    .get_mut(&car)
                    .ok_or_else(|| SimError::Invariant(format!("no follower for `{car}`")))?;
                let label = graph.label(&node).expect("moved to an existing node");
                a2_update(follower, event, label).map_err(step)?;
                if label == NodeLabel::Place {
                    if let Some(&i) = pending.get(&car) {
                        decisions[i].parked = Some(node);
                    }
                }
            }
            Transformation::Exit { car } => {
                exited += 1;
                let mut follower = followers
                    .remove(&car)
                    .ok_or_else(|| SimError::Invariant(format!("no follower for `{car}`")))?;
                a2_update(&mut follower, event, NodeLabel::Gate).map_err(step)?;
                let trip = a2_finalize(&mut follower).map_err(step)?;
                if let Some(i) = pending.remove(&car) {
                    decisions[i].parked = trip.parked_spot.clone();
                    decisions[i].trip_finished = true;
                }
                let report = AgentMessage::new(AgentRole::Follower, MessageKind::TripReport(trip))
                    .map_err(step)?;
                agent.handle(&graph, report).map_err(step)?;
                stats.trips += 1;
            }
        }

        let cars = graph.cars().count();
        if cars != entered - exited {
            return Err(SimError::Invariant(format!(
                "{cars} cars inside after {entered} entries and {exited} exits"
            )));
        }
    }

    let inside: Vec<String> = graph.cars().cloned().collect();
    let active_followers: Vec<String> = followers.keys().cloned().collect();
    if inside != active_followers {
        return Err(SimError::Invariant(format!(
            "followers {active_followers:?} do not match cars inside {inside:?}"
        )));
    }
    stats.suggestions_followed = decisions.iter().filter(|d| d.followed()).count();
    Ok(SimulationReport {
        config: s.config,
        decisions,
        final_store: agent.store.all_triples(),
        final_graph: graph,
        stats,
        active_followers,
    })
}
