use super::AgentError;
use crate::graph::{NodeId, NodeLabel};
use crate::knowledge::{EventRecord, Trip, UserId};

/// State of the follower agent accompanying one car.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FollowerState {
    user: UserId,
    entry_gate: NodeId,
    events: Vec<EventRecord>,
    parked_spot: Option<NodeId>,
    exit_gate: Option<NodeId>,
    defunct: bool,
}

impl FollowerState {
    pub fn user(&self) -> &UserId {
        &self.user
    }

    pub fn entry_gate(&self) -> &NodeId {
        &self.entry_gate
    }

    pub fn is_defunct(&self) -> bool {
        self.defunct
    }

    pub fn events(&self) -> &[EventRecord] {
        &self.events
    }
}

/// Creates a follower from the entry detection at a gate.
pub fn a2_spawn(entry: EventRecord) -> FollowerState {
    FollowerState {
        user: entry.user.clone(),
        entry_gate: entry.node.clone(),
        events: vec![entry],
        parked_spot: None,
        exit_gate: None,
        defunct: false,
    }
}

/// Records a further detection of the followed car. `label` is the label
/// of the detected node; a gate marks the exit.
pub fn a2_update(
    state: &mut FollowerState,
    event: EventRecord,
    label: NodeLabel,
) -> Result<(), AgentError> {
    if state.defunct {
        return Err(AgentError::DefunctFollower(state.user.clone()));
    }
    if event.user != state.user {
        return Err(AgentError::WrongUser {
            expected: state.user.clone(),
            found: event.user,
        });
    }
    match label {
        NodeLabel::Place => state.parked_spot = Some(event.node.clone()),
        NodeLabel::Gate => state.exit_gate = Some(event.node.clone()),
        _ => {}
    }
    state.events.push(event);
    Ok(())
}

/// Produces the trip report and retires the follower.
pub fn a2_finalize(state: &mut FollowerState) -> Result<Trip, AgentError> {
    if state.defunct {
        return Err(AgentError::DefunctFollower(state.user.clone()));
    }
    if state.exit_gate.is_none() {
        return Err(AgentError::IncompleteTrip(state.user.clone()));
    }
    state.defunct = true;
    Ok(Trip {
        user: state.user.clone(),
        entry_gate: state.entry_gate.clone(),
        parked_spot: state.parked_spot.clone(),
        exit_gate: state.exit_gate.clone(),
        events: state.events.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knowledge::parse_timestamp;

    fn ev(node: &str, sec: u32) -> EventRecord {
        let t = parse_timestamp(&format!("2014-01-28T09:30:{sec:02}")).unwrap();
        EventRecord::new("idKR55", node, t)
    }

    #[test]
    fn follows_to_parked_spot() {
        let mut s = a2_spawn(ev("g2", 0));
        a2_update(&mut s, ev("r3", 1), NodeLabel::Road).unwrap();
        a2_update(&mut s, ev("r4", 2), NodeLabel::Road).unwrap();
        a2_update(&mut s, ev("p018", 3), NodeLabel::Place).unwrap();
        a2_update(&mut s, ev("g2", 9), NodeLabel::Gate).unwrap();
        let trip = a2_finalize(&mut s).unwrap();
        assert_eq!(trip.entry_gate, "g2");
        assert_eq!(trip.parked_spot.as_deref(), Some("p018"));
        assert_eq!(trip.exit_gate.as_deref(), Some("g2"));
        assert_eq!(trip.events.len(), 5);
        assert!(s.is_defunct());
    }

    #[test]
    fn finalize_twice_fails() {
        let mut s = a2_spawn(ev("g2", 0));
        a2_update(&mut s, ev("g2", 1), NodeLabel::Gate).unwrap();
        a2_finalize(&mut s).unwrap();
        assert_eq!(
            a2_finalize(&mut s).unwrap_err(),
            AgentError::DefunctFollower("idKR55".into())
        );
        assert!(a2_update(&mut s, ev("r3", 2), NodeLabel::Road).is_err());
    }

    #[test]
    fn pass_through_has_no_spot() {
        let mut s = a2_spawn(ev("g2", 0));
        a2_update(&mut s, ev("g2", 1), NodeLabel::Gate).unwrap();
        let trip = a2_finalize(&mut s).unwrap();
        assert_eq!(trip.parked_spot, None);
    }

    #[test]
    fn finalize_needs_exit() {
        let mut s = a2_spawn(ev("g2", 0));
        assert_eq!(
            a2_finalize(&mut s).unwrap_err(),
            AgentError::IncompleteTrip("idKR55".into())
        );
        let other = EventRecord::new("someone", "r3", ev("r3", 1).timestamp);
        assert!(matches!(
            a2_update(&mut s, other, NodeLabel::Road),
            Err(AgentError::WrongUser { .. })
        ));
    }
}
