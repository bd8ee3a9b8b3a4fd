use std::collections::BTreeMap;

use super::{EventLog, EventRecord, KnowledgeError, UserId};
use crate::graph::{NodeId, NodeLabel, WorldGraph};
use crate::ltl::{is_atom_name, Formula};

/// One visit of a user: entry through a gate, an optional parking place,
/// and the gate used to leave.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trip {
    pub user: UserId,
    pub entry_gate: NodeId,
    pub parked_spot: Option<NodeId>,
    pub exit_gate: Option<NodeId>,
    pub events: Vec<EventRecord>,
}

impl Trip {
    pub fn is_complete(&self) -> bool {
        self.exit_gate.is_some()
    }

    /// Gates the trip touched.
    pub fn gates(&self) -> impl Iterator<Item = &NodeId> {
        std::iter::once(&self.entry_gate).chain(self.exit_gate.iter())
    }

    /// Checks the trip against a graph: the first event is at the entry
    /// gate, which is labeled G; the parked spot, if any, is labeled P.
    pub fn validate(&self, graph: &WorldGraph) -> Result<(), KnowledgeError> {
        self.check_shape()?;
        let want = |id: &str, label: NodeLabel| match graph.label(id) {
            Some(l) if l == label => Ok(()),
            _ => Err(KnowledgeError::MalformedTrip(format!(
                "`{id}` is not a {} node",
                label.code()
            ))),
        };
        want(&self.entry_gate, NodeLabel::Gate)?;
        if let Some(spot) = &self.parked_spot {
            want(spot, NodeLabel::Place)?;
        }
        if let Some(exit) = &self.exit_gate {
            want(exit, NodeLabel::Gate)?;
        }
        Ok(())
    }

    fn check_shape(&self) -> Result<(), KnowledgeError> {
        let malformed = |m: String| Err(KnowledgeError::MalformedTrip(m));
        let Some(first) = self.events.first() else {
            return malformed("trip has no events".into());
        };
        if first.node != self.entry_gate {
            return malformed(format!(
                "trip starts at `{}`, not at its entry gate `{}`",
                first.node, self.entry_gate
            ));
        }
        if let Some(spot) = &self.parked_spot {
            if !self.events.iter().any(|e| &e.node == spot) {
                return malformed(format!("parked spot `{spot}` was never visited"));
            }
        }
        if self.events.iter().any(|e| e.user != self.user) {
            return malformed("trip mixes events of several users".into());
        }
        Ok(())
    }
}

/// `entry_gate -> F parked_spot` for a trip that parked; nothing otherwise.
pub fn mine_trip(t: &Trip) -> Result<Vec<Formula>, KnowledgeError> {
    t.check_shape()?;
    let Some(spot) = &t.parked_spot else {
        return Ok(Vec::new());
    };
    for id in [&t.entry_gate, spot] {
        if !is_atom_name(id) {
            return Err(KnowledgeError::MalformedTrip(format!(
                "node id `{id}` cannot be used as a formula atom"
            )));
        }
    }
    Ok(vec![Formula::implies(
        Formula::atom(t.entry_gate.as_str()),
        Formula::eventually(Formula::atom(spot.as_str())),
    )])
}

/// Splits each user's events into trips. A trip opens at a gate detection
/// and closes at the next gate detection; its parked spot is the last
/// parking place seen in between. Event node ids are resolved against the
/// graph, so `p0018` and `p018` name the same place. A user's trailing
/// trip without an exit is returned with `exit_gate = None`.
pub fn reconstruct_trips(log: &EventLog, graph: &WorldGraph) -> Result<Vec<Trip>, KnowledgeError> {
    let mut open: BTreeMap<&UserId, Trip> = BTreeMap::new();
    let mut done = Vec::new();
    for e in log.events() {
        let node = graph
            .resolve(&e.node)
            .ok_or_else(|| KnowledgeError::UnknownNode(e.node.clone()))?
            .clone();
        let label = graph.label(&node).expect("resolved ids exist");
        let event = EventRecord::new(e.user.clone(), node.clone(), e.timestamp);
        match (open.get_mut(&e.user), label) {
            (None, NodeLabel::Gate) => {
                open.insert(
                    &e.user,
                    Trip {
                        user: e.user.clone(),
                        entry_gate: node,
                        parked_spot: None,
                        exit_gate: None,
                        events: vec![event],
                    },
                );
            }
            (None, _) => {
                return Err(KnowledgeError::MalformedTrip(format!(
                    "`{}` seen at `{node}` before entering through a gate",
                    e.user
                )))
            }
            (Some(trip), NodeLabel::Gate) => {
                trip.exit_gate = Some(node);
                trip.events.push(event);
                done.push(open.remove(&e.user).unwrap());
            }
            (Some(trip), NodeLabel::Place) => {
                trip.parked_spot = Some(node);
                trip.events.push(event);
            }
            (Some(trip), _) => trip.events.push(event),
        }
    }
    done.extend(open.into_values());
    Ok(done)
}
