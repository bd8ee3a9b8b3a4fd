//! The three parking transformations. Each takes the current graph by
//! reference and returns the successor graph; the input is left untouched.

use super::{is_node_id, Attributes, GraphError, NodeLabel, WorldGraph, AT};

/// Adds car node `car` linked by an `at` edge to gateway `gate`.
pub fn car_enters(g: &WorldGraph, car: &str, gate: &str) -> Result<WorldGraph, GraphError> {
    g.expect_label(gate, NodeLabel::Gate, "G")?;
    if g.contains(car) {
        return Err(GraphError::CarPresent(car.to_string()));
    }
    if !is_node_id(car) {
        return Err(GraphError::Syntax {
            line: 0,
            message: format!("invalid car id `{car}`"),
        });
    }
    let mut next = g.clone();
    next.insert_node(car, NodeLabel::Car, Attributes::new());
    next.insert_edge(car, gate, AT, Attributes::new())?;
    Ok(next)
}

/// Retargets the car's `at` edge to `node`, which must be a gateway, road
/// segment or free parking place. Moving to the current position is a no-op.
pub fn car_moves(g: &WorldGraph, car: &str, node: &str) -> Result<WorldGraph, GraphError> {
    let current = car_position(g, car)?;
    let target = g
        .node(node)
        .ok_or_else(|| GraphError::MissingNode(node.to_string()))?;
    if target.label == NodeLabel::Car {
        return Err(GraphError::WrongLabel {
            id: node.to_string(),
            expected: "G, R or P",
            found: NodeLabel::Car,
        });
    }
    if current == node {
        return Ok(g.clone());
    }
    if target.label == NodeLabel::Place {
        if let Some(other) = g.occupant(node) {
            return Err(GraphError::SpotOccupied {
                spot: node.to_string(),
                car: other.clone(),
            });
        }
    }
    let mut next = g.clone();
    let edge = next
        .remove_edge(car, &current)
        .expect("position edge exists");
    next.insert_edge(car, node, edge.label, edge.attrs)?;
    Ok(next)
}

/// Removes the car node and its position edge.
pub fn car_exits(g: &WorldGraph, car: &str) -> Result<WorldGraph, GraphError> {
    car_position(g, car)?;
    let mut next = g.clone();
    next.remove_node(car);
    Ok(next)
}

fn car_position(g: &WorldGraph, car: &str) -> Result<String, GraphError> {
    match g.label(car) {
        Some(NodeLabel::Car) => g
            .position(car)
            .cloned()
            .ok_or_else(|| GraphError::Invariant(format!("car `{car}` has no position"))),
        Some(found) => Err(GraphError::WrongLabel {
            id: car.to_string(),
            expected: "C",
            found,
        }),
        None => Err(GraphError::CarAbsent(car.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parking_fixture;

    #[test]
    fn enter_links_car_to_gate() {
        let g = parking_fixture();
        let g2 = car_enters(&g, "idKR55", "g2").unwrap();
        assert_eq!(g2.label("idKR55"), Some(NodeLabel::Car));
        assert_eq!(g2.position("idKR55").map(String::as_str), Some("g2"));
        assert!(!g.contains("idKR55"));
    }

    #[test]
    fn enter_errors() {
        assert!(matches!(
            car_enters(&WorldGraph::new(), "c", "g1"),
            Err(GraphError::MissingNode(_))
        ));
        let g = parking_fixture();
        assert!(matches!(
            car_enters(&g, "c", "r1"),
            Err(GraphError::WrongLabel { .. })
        ));
        let g = car_enters(&g, "c", "g1").unwrap();
        assert_eq!(
            car_enters(&g, "c", "g2"),
            Err(GraphError::CarPresent("c".into()))
        );
        assert!(car_enters(&g, "bad id", "g2").is_err());
    }

    #[test]
    fn move_respects_occupancy() {
        let g = parking_fixture();
        let g = car_enters(&g, "idKR55", "g2").unwrap();
        let g = car_moves(&g, "idKR55", "p018").unwrap();
        assert_eq!(g.position("idKR55").map(String::as_str), Some("p018"));
        assert_eq!(g.is_free("p018"), Ok(false));
        let g = car_enters(&g, "other", "g1").unwrap();
        assert_eq!(
            car_moves(&g, "other", "p018"),
            Err(GraphError::SpotOccupied {
                spot: "p018".into(),
                car: "idKR55".into()
            })
        );
        assert_eq!(
            car_moves(&g, "ghost", "p018"),
            Err(GraphError::CarAbsent("ghost".into()))
        );
        assert!(matches!(
            car_moves(&g, "other", "idKR55"),
            Err(GraphError::WrongLabel { .. })
        ));
        assert_eq!(car_moves(&g, "idKR55", "p018").unwrap(), g);
    }

    #[test]
    fn exit_is_inverse_of_enter() {
        let g = parking_fixture();
        let entered = car_enters(&g, "c1", "g1").unwrap();
        assert_eq!(car_exits(&entered, "c1").unwrap(), g);
        assert_eq!(car_exits(&g, "c1"), Err(GraphError::CarAbsent("c1".into())));
        assert!(matches!(
            car_exits(&g, "g1"),
            Err(GraphError::WrongLabel { .. })
        ));
    }

    #[test]
    fn full_visit_frees_the_spot() {
        let g = parking_fixture();
        let g = car_enters(&g, "c1", "g1").unwrap();
        let g = car_moves(&g, "c1", "r1").unwrap();
        let g = car_moves(&g, "c1", "p002").unwrap();
        let g = car_exits(&g, "c1").unwrap();
        assert_eq!(g.cars().count(), 0);
        assert_eq!(g.is_free("p002"), Ok(true));
    }
}
