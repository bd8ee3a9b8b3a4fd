use ltlpark_core::graph::{parking_fixture, NodeLabel};
use ltlpark_core::knowledge::{
    mine_log, mine_trip, reconstruct_trips, resolve_contradiction, spec_formula, EventLog,
    KnowledgeError, SpecStore, DEFAULT_NEVER_GATE_THRESHOLD,
};
use ltlpark_core::{parse, Formula};
use ltlpark_oracle::{bounded_satisfiable, FormulaGen, GenLimits};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EVENTS: &str = include_str!("../../../scenarios/idKR55_events.csv");

#[test]
fn mining_the_event_log() {
    let log = EventLog::from_csv(EVENTS).unwrap();
    let store = mine_log(&log, &parking_fixture(), DEFAULT_NEVER_GATE_THRESHOLD).unwrap();
    assert_eq!(
        store.to_tsv(),
        "idKR55\tg2 -> F p018\t7\n\
         idKR55\tg2 -> F p015\t2\n\
         idKR55\tG !g1\t1\n\
         idKR55\tG !g3\t1\n"
    );
}

#[test]
fn empty_log_mines_empty_store() {
    let log = EventLog::from_csv("").unwrap();
    let store = mine_log(&log, &parking_fixture(), 3).unwrap();
    assert_eq!(store.to_tsv(), "");
}

#[test]
fn replaying_identical_trips_counts_them() {
    let g = parking_fixture();
    for n in 1..=12u32 {
        let mut text = String::new();
        for day in 1..=n {
            for (minute, node) in ["g2", "r3", "r4", "r5", "p018", "r5", "r4", "r3", "g2"]
                .iter()
                .enumerate()
            {
                text.push_str(&format!("u,{node},2014-02-{day:02}T08:{minute:02}:00\n"));
            }
        }
        let log = EventLog::from_csv(&text).unwrap();
        let trips = reconstruct_trips(&log, &g).unwrap();
        assert_eq!(trips.len() as u32, n);
        let mut store = SpecStore::new();
        for t in &trips {
            for f in mine_trip(t).unwrap() {
                store.upsert(&t.user, f);
            }
        }
        assert_eq!(store.get("u", &parse("g2 -> F p018").unwrap()), Some(n));
        assert_eq!(store.len(), 1);
    }
}

#[test]
fn unknown_nodes_and_bad_timestamps_are_reported() {
    let g = parking_fixture();
    let log = EventLog::from_csv("u,g2,2014-02-01T08:00:00\nu,q77,2014-02-01T08:01:00\n").unwrap();
    assert_eq!(
        mine_log(&log, &g, 3).unwrap_err(),
        KnowledgeError::UnknownNode("q77".into())
    );
    let err = EventLog::from_csv("u,g2,2014-02-01T08:00:00\nu,r3,noon\n").unwrap_err();
    assert!(matches!(err, KnowledgeError::Csv { line: 2, .. }));
}

/// Random stores of small formulas over the gate and place atoms.
fn random_store(rng: &mut ChaCha8Rng, gen: &mut FormulaGen) -> SpecStore {
    let mut store = SpecStore::new();
    let shapes = [
        "G !g1",
        "G !g2",
        "G !g3",
        "g1 -> F p1",
        "g2 -> F p2",
        "G (g1 -> p1)",
    ];
    for _ in 0..rng.gen_range(1..5) {
        let f = if rng.gen_bool(0.5) {
            parse(shapes[rng.gen_range(0..shapes.len())]).unwrap()
        } else {
            rename(&gen.next_formula())
        };
        for _ in 0..rng.gen_range(1..4) {
            store.upsert("u", f.clone());
        }
    }
    store
}

/// Maps the generator's atoms onto gate and place names.
fn rename(f: &Formula) -> Formula {
    let map = |a: &str| match a {
        "p" => "g1",
        "q" => "g2",
        "r" => "p1",
        _ => "p2",
    };
    match f {
        Formula::Atom(a) => Formula::atom(map(a)),
        Formula::Not(x) => Formula::not(rename(x)),
        Formula::And(a, b) => Formula::and(rename(a), rename(b)),
        Formula::Or(a, b) => Formula::or(rename(a), rename(b)),
        Formula::Implies(a, b) => Formula::implies(rename(a), rename(b)),
        Formula::Iff(a, b) => Formula::iff(rename(a), rename(b)),
        Formula::Eventually(x) => Formula::eventually(rename(x)),
        Formula::Always(x) => Formula::always(rename(x)),
    }
}

#[test]
fn resolution_properties_against_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let limits = GenLimits {
        atoms: 4,
        max_connectives: 5,
        max_temporal_depth: 2,
    };
    let mut gen = FormulaGen::new(78, limits);
    let observations: Vec<Formula> = ["g1", "g2", "g3", "g1 & g2", "g1 & p1"]
        .iter()
        .map(|s| parse(s).unwrap())
        .collect();
    let (mut resolved, mut refused) = (0, 0);
    for _ in 0..300 {
        let mut store = random_store(&mut rng, &mut gen);
        let before = store.clone();
        let obs = &observations[rng.gen_range(0..observations.len())];
        let combined = spec_formula(&store, "u", obs);
        match resolve_contradiction(&mut store, "u", obs) {
            Err(KnowledgeError::NoContradiction { .. }) => {
                assert!(bounded_satisfiable(&combined));
                assert_eq!(store, before);
                refused += 1;
            }
            Err(other) => panic!("unexpected {other}"),
            Ok(res) => {
                assert!(!bounded_satisfiable(&combined));
                resolved += 1;
                // Exactly the formulas inconsistent with the observation on
                // their own are removed; nothing is added.
                for t in before.triples("u") {
                    let alone = Formula::and(t.formula.clone(), obs.clone());
                    let conflicting = !bounded_satisfiable(&alone);
                    assert_eq!(
                        res.removed.contains(&t.formula),
                        conflicting,
                        "{}",
                        t.formula
                    );
                    assert_eq!(store.get("u", &t.formula).is_none(), conflicting);
                }
                assert!(store.len() <= before.len());
                let after = spec_formula(&store, "u", obs);
                assert_eq!(bounded_satisfiable(&after), !res.unresolved);
            }
        }
    }
    assert!(
        resolved > 20 && refused > 20,
        "{resolved} resolved, {refused} refused"
    );
}

#[test]
fn spec_formula_keeps_only_overlapping_atoms() {
    let mut store = SpecStore::new();
    for s in ["G !g3", "g2 -> F p018", "g1 -> F p002", "G !g1"] {
        store.upsert("u", parse(s).unwrap());
    }
    let f = spec_formula(&store, "u", &Formula::atom("g2"));
    assert_eq!(f.to_string(), "g2 & (g2 -> F p018)");
    let gates: Vec<String> = parking_fixture()
        .nodes_with(NodeLabel::Gate)
        .cloned()
        .collect();
    assert_eq!(gates, vec!["g1", "g2", "g3"]);
}
