use chrono::{Duration, NaiveDate, NaiveDateTime};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Detection, Scenario, SimConfig, SimError};
use crate::graph::{parking_fixture, NodeId, NodeLabel, WorldGraph};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    pub users: usize,
    pub trips_per_user: usize,
    /// Probability that a trip ends at the user's favorite place rather
    /// than at their second choice.
    pub spot_affinity: f64,
}

struct Habit {
    user: String,
    gate: NodeId,
    favorite: NodeId,
    second: NodeId,
}

fn start_time() -> NaiveDateTime {
    NaiveDate::from_ymd_opt(2014, 1, 28)
        .and_then(|d| d.and_hms_opt(8, 0, 0))
        .expect("valid date")
}

/// Builds a scenario on the bundled parking fixture. Each user gets a
/// home gate, a favorite place and a second choice; every trip enters at
/// the home gate, drives to one of the two places, parks and leaves
/// through the same gate. Trips are scheduled one after another, so a car
/// never finds its place taken.
pub fn generate(seed: u64, params: GenParams) -> Result<Scenario, SimError> {
    if params.users == 0 {
        return Err(SimError::InvalidParams(
            "at least one user is required".into(),
        ));
    }
    if params.trips_per_user == 0 {
        return Err(SimError::InvalidParams(
            "at least one trip per user is required".into(),
        ));
    }
    if !(0.0..=1.0).contains(&params.spot_affinity) {
        return Err(SimError::InvalidParams(format!(
            "spot affinity {} is not a probability",
            params.spot_affinity
        )));
    }
    let graph = parking_fixture();
    let gates: Vec<NodeId> = graph.nodes_with(NodeLabel::Gate).cloned().collect();
    let places: Vec<NodeId> = graph.nodes_with(NodeLabel::Place).cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let habits: Vec<Habit> = (1..=params.users)
        .map(|i| {
            let mut two = places.choose_multiple(&mut rng, 2);
            Habit {
                user: format!("user{i}"),
                gate: gates.choose(&mut rng).unwrap().clone(),
                favorite: two.next().unwrap().clone(),
                second: two.next().unwrap().clone(),
            }
        })
        .collect();

    let mut scenario = Scenario::new(graph.clone());
    scenario.config = SimConfig {
        seed,
        ..SimConfig::default()
    };
    let mut clock = start_time();
    for _ in 0..params.trips_per_user {
        for h in &habits {
            let spot = if rng.gen_bool(params.spot_affinity) {
                &h.favorite
            } else {
                &h.second
            };
            for (offset, node) in trip_route(&graph, &h.gate, spot) {
                scenario.timeline.push(Detection {
                    timestamp: clock + offset,
                    user: h.user.clone(),
                    node,
                });
            }
            clock += Duration::hours(1);
        }
    }
    Ok(scenario)
}

/// Nodes visited from `gate` to `spot` and back, with their time offsets.
fn trip_route(g: &WorldGraph, gate: &str, spot: &str) -> Vec<(Duration, NodeId)> {
    let there = g
        .road_path(gate, spot)
        .expect("fixture places are reachable");
    let back = g
        .road_path(spot, gate)
        .expect("fixture gates are reachable");
    let mut route = Vec::new();
    let mut t = Duration::zero();
    for node in &there {
        route.push((t, node.clone()));
        t += Duration::minutes(1);
    }
    t += Duration::minutes(20);
    for node in back.iter().skip(1) {
        route.push((t, node.clone()));
        t += Duration::minutes(1);
    }
    route
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invalid_params() {
        let ok = GenParams {
            users: 1,
            trips_per_user: 1,
            spot_affinity: 0.5,
        };
        assert!(generate(1, ok).is_ok());
        assert!(generate(1, GenParams { users: 0, ..ok }).is_err());
        assert!(generate(
            1,
            GenParams {
                trips_per_user: 0,
                ..ok
            }
        )
        .is_err());
        assert!(generate(
            1,
            GenParams {
                spot_affinity: 1.5,
                ..ok
            }
        )
        .is_err());
        assert!(generate(
            1,
            GenParams {
                spot_affinity: f64::NAN,
                ..ok
            }
        )
        .is_err());
    }

    #[test]
    fn deterministic_per_seed() {
        let p = GenParams {
            users: 3,
            trips_per_user: 4,
            spot_affinity: 0.7,
        };
        assert_eq!(generate(9, p).unwrap(), generate(9, p).unwrap());
        assert_ne!(generate(9, p).unwrap(), generate(10, p).unwrap());
    }

    #[test]
    fn routes_start_and_end_at_gate() {
        let g = parking_fixture();
        let route = trip_route(&g, "g2", "p018");
        assert_eq!(route.first().unwrap().1, "g2");
        assert_eq!(route.last().unwrap().1, "g2");
        assert!(route.iter().any(|(_, n)| n == "p018"));
        assert!(route.windows(2).all(|w| w[0].0 < w[1].0));
    }
}
