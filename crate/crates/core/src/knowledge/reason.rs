use std::collections::BTreeSet;

use super::{mine_trip, reconstruct_trips, EventLog, KnowledgeError, SpecStore, Trip};
use crate::graph::{NodeId, NodeLabel, WorldGraph};
use crate::ltl::{is_atom_name, Formula};
use crate::tableaux::{is_satisfiable, Satisfiability};

/// Default number of completed trips before never-used gates are asserted.
pub const DEFAULT_NEVER_GATE_THRESHOLD: usize = 3;

/// Once `user` has at least `k` completed trips, asserts `G !gate` (r = 1)
/// for each gate in `gates` that none of those trips touched. Returns the
/// formulas that were newly added.
pub fn infer_never_gates<'a>(
    store: &mut SpecStore,
    user: &str,
    trips: impl IntoIterator<Item = &'a Trip>,
    gates: impl IntoIterator<Item = &'a NodeId>,
    k: usize,
) -> Vec<Formula> {
    let mut completed = 0;
    let mut used = BTreeSet::new();
    for t in trips
        .into_iter()
        .filter(|t| t.user == user && t.is_complete())
    {
        completed += 1;
        used.extend(t.gates().cloned());
        used.extend(t.events.iter().map(|e| e.node.clone()));
    }
    if completed < k {
        return Vec::new();
    }
    let mut added = Vec::new();
    for gate in gates {
        if used.contains(gate) || !is_atom_name(gate) {
            continue;
        }
        let f = Formula::always(Formula::not(Formula::atom(gate.as_str())));
        if store.get(user, &f).is_none() {
            store.insert(user, f.clone(), 1).expect("pair is new");
            added.push(f);
        }
    }
    added
}

/// The stored formulas of `user` that share an atom with `observation`,
/// in the order [`spec_formula`] conjoins them.
pub fn relevant_formulas(
    store: &SpecStore,
    user: &str,
    observation: &Formula,
) -> Vec<(Formula, u32)> {
    let atoms = observation.atoms();
    let relevant: Vec<_> = store
        .triples(user)
        .into_iter()
        .filter(|t| !t.formula.atoms().is_disjoint(&atoms))
        .map(|t| (t.formula, t.r))
        .collect();
    let (mut invariants, rest): (Vec<_>, Vec<_>) = relevant
        .into_iter()
        .partition(|(f, _)| matches!(f, Formula::Always(_)));
    invariants.extend(rest);
    invariants
}

/// Conjunction of the observation with the user's relevant stored formulas.
/// Formulas rooted in `G` come before the observation and the rest after
/// it; each group is ordered by descending r, then formula text.
pub fn spec_formula(store: &SpecStore, user: &str, observation: &Formula) -> Formula {
    let relevant = relevant_formulas(store, user, observation);
    let split = relevant
        .iter()
        .position(|(f, _)| !matches!(f, Formula::Always(_)))
        .unwrap_or(relevant.len());
    let parts = relevant[..split]
        .iter()
        .map(|(f, _)| f.clone())
        .chain(std::iter::once(observation.clone()))
        .chain(relevant[split..].iter().map(|(f, _)| f.clone()));
    Formula::conjunction(parts).expect("observation is always present")
}

/// What contradiction resolution did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub removed: Vec<Formula>,
    /// True when the specification still contradicts the observation,
    /// because the conflict needs several formulas together.
    pub unresolved: bool,
}

/// Removes each stored formula of `user` that contradicts `observation` on
/// its own. Fails if the current specification is not contradictory.
pub fn resolve_contradiction(
    store: &mut SpecStore,
    user: &str,
    observation: &Formula,
) -> Result<Resolution, KnowledgeError> {
    if is_satisfiable(&spec_formula(store, user, observation)) == Satisfiability::Satisfiable {
        return Err(KnowledgeError::NoContradiction {
            user: user.to_string(),
            observation: observation.to_string(),
        });
    }
    let removed: Vec<Formula> = store
        .triples(user)
        .into_iter()
        .map(|t| t.formula)
        .filter(|f| {
            let pair = Formula::and(f.clone(), observation.clone());
            is_satisfiable(&pair) == Satisfiability::Unsatisfiable
        })
        .collect();
    for f in &removed {
        store.remove(user, f);
    }
    let unresolved =
        is_satisfiable(&spec_formula(store, user, observation)) == Satisfiability::Unsatisfiable;
    if unresolved {
        log::warn!(
            "specification of `{user}` contradicts `{observation}` only jointly; {} formula(s) removed",
            removed.len()
        );
    }
    Ok(Resolution {
        removed,
        unresolved,
    })
}

/// Builds a store from a raw event log: completed trips are mined and
/// counted, then never-used gates are asserted for users with at least
/// `k` completed trips.
pub fn mine_log(log: &EventLog, graph: &WorldGraph, k: usize) -> Result<SpecStore, KnowledgeError> {
    let trips = reconstruct_trips(log, graph)?;
    let mut store = SpecStore::new();
    for t in trips.iter().filter(|t| t.is_complete()) {
        t.validate(graph)?;
        for f in mine_trip(t)? {
            store.upsert(&t.user, f);
        }
    }
    let gates: Vec<NodeId> = graph.nodes_with(NodeLabel::Gate).cloned().collect();
    let users: BTreeSet<&String> = trips.iter().map(|t| &t.user).collect();
    for user in users {
        infer_never_gates(&mut store, user, &trips, &gates, k);
    }
    Ok(store)
}
