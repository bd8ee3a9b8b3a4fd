//! The binary must give the same answers as the library calls it wraps.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ltlpark_core::graph::{
    glue, load_graph, save_graph, save_partition, split, to_dot, PARKING_FIXTURE,
};
use ltlpark_core::knowledge::{mine_log, EventLog};
use ltlpark_core::sim::{generate, load_scenario, run, save_scenario, GenParams};
use ltlpark_core::{build_tree, export_tree, parse, TreeFormat};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn ltlpark(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ltlpark"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn prove_verdicts_and_exit_codes() {
    let cases = [
        (vec!["prove", "G !g3 & g3"], 1, "UNSAT\n"),
        (vec!["prove", "g2 & (g2 -> F p010)"], 0, "SAT\n"),
        (vec!["prove", "p | !p", "--valid"], 0, "VALID\n"),
        (vec!["prove", "F p -> p", "--valid"], 1, "NOT VALID\n"),
    ];
    for (args, code, text) in cases {
        let o = ltlpark(&args);
        assert_eq!(o.status.code(), Some(code), "{args:?}");
        assert_eq!(stdout(&o), text);
        assert!(o.stderr.is_empty());
    }
}

#[test]
fn prove_tree_matches_library() {
    for (format, flag) in [(TreeFormat::Ascii, "ascii"), (TreeFormat::Dot, "dot")] {
        for f in [
            "g2 & (g2 -> F p010)",
            "G !g3 & g3",
            "g1 & ((g1 -> F p018) | (g1 -> F p015))",
        ] {
            let o = ltlpark(&["prove", f, "--tree", flag]);
            let tree = export_tree(&build_tree(&parse(f).unwrap()), format);
            let out = stdout(&o);
            assert!(out.ends_with(&tree), "{f} {flag}");
        }
    }
    let o = ltlpark(&["prove", "g2 & (g2 -> F p010)", "--tree", "ascii"]);
    assert!(stdout(&o).contains("1.[a]: p010 ○"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["prove", "p &"],
        vec!["prove", "p", "--tree", "svg"],
        vec!["prove", "p", "--unknown"],
        vec!["prove"],
        vec!["frobnicate"],
        vec!["simulate", "/nonexistent/file.scn"],
    ] {
        let o = ltlpark(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn simulate_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    for name in [
        "preference.scn",
        "preference_occupied.scn",
        "contradiction.scn",
        "empty.scn",
    ] {
        let path = root().join("scenarios").join(name);
        let o = ltlpark(&["simulate", path_str(&path)]);
        assert_eq!(o.status.code(), Some(0));
        let expected = run(&load_scenario(&fs::read_to_string(&path).unwrap()).unwrap())
            .unwrap()
            .render();
        assert_eq!(stdout(&o), expected, "{name}");
    }

    let path = root().join("scenarios/preference_full.scn");
    let out = dir.path().join("report.txt");
    let dot = dir.path().join("final.dot");
    let o = ltlpark(&[
        "simulate",
        path_str(&path),
        "--fallback-nearest",
        "-K",
        "4",
        "--seed",
        "9",
        "--out",
        path_str(&out),
        "--dot-graph",
        path_str(&dot),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let mut s = load_scenario(&fs::read_to_string(&path).unwrap()).unwrap();
    s.config.fallback_nearest = true;
    s.config.never_gate_threshold = 4;
    s.config.seed = 9;
    let report = run(&s).unwrap();
    assert_eq!(fs::read_to_string(&out).unwrap(), report.render());
    assert_eq!(
        fs::read_to_string(&dot).unwrap(),
        to_dot(&report.final_graph)
    );
    assert!(report.render().contains("(NearestFree)"));
}

#[test]
fn simulate_reports_scenario_lines() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.scn");
    fs::write(
        &bad,
        "g1 G\ntimeline:\n2014-01-28T09:00:00,u,g1\nnonsense\n",
    )
    .unwrap();
    let o = ltlpark(&["simulate", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"));
}

#[test]
fn mine_matches_library() {
    let events = root().join("scenarios/idKR55_events.csv");
    let graph = root().join("crates/core/fixtures/parking.graph");
    let o = ltlpark(&["mine", path_str(&events), path_str(&graph)]);
    assert_eq!(o.status.code(), Some(0));
    let log = EventLog::from_csv(&fs::read_to_string(&events).unwrap()).unwrap();
    let store = mine_log(&log, &load_graph(PARKING_FIXTURE).unwrap(), 3).unwrap();
    assert_eq!(stdout(&o), store.to_tsv());
    assert!(stdout(&o).contains("idKR55\tg2 -> F p018\t7\n"));
    assert!(stdout(&o).contains("idKR55\tg2 -> F p015\t2\n"));

    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "").unwrap();
    let o = ltlpark(&["mine", path_str(&empty), path_str(&graph)]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), ""));

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "u,g1,2014-01-28T09:00:00\nu,r1,28/01/2014\n").unwrap();
    let o = ltlpark(&["mine", path_str(&bad), path_str(&graph)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn graph_commands_match_library() {
    let dir = tempfile::tempdir().unwrap();
    let graph = root().join("crates/core/fixtures/parking.graph");
    let g = load_graph(PARKING_FIXTURE).unwrap();

    let o = ltlpark(&["graph", "dot", path_str(&graph)]);
    assert_eq!(stdout(&o), to_dot(&g));

    let part = dir.path().join("parts.txt");
    let o = ltlpark(&[
        "graph",
        "split",
        path_str(&graph),
        "-k",
        "3",
        "--out",
        path_str(&part),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let p = split(&g, 3).unwrap();
    assert_eq!(fs::read_to_string(&part).unwrap(), save_partition(&p));

    let o = ltlpark(&["graph", "glue", path_str(&part)]);
    assert_eq!(stdout(&o), save_graph(&glue(&p).unwrap()));
    assert_eq!(stdout(&o), save_graph(&g));

    let o = ltlpark(&["graph", "split", path_str(&graph), "-k", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn generate_matches_library() {
    let o = ltlpark(&[
        "generate",
        "--seed",
        "3",
        "--users",
        "2",
        "--trips",
        "4",
        "--affinity",
        "0.9",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = generate(
        3,
        GenParams {
            users: 2,
            trips_per_user: 4,
            spot_affinity: 0.9,
        },
    )
    .unwrap();
    assert_eq!(stdout(&o), save_scenario(&s));
    let o = ltlpark(&["generate", "--users", "0"]);
    assert_eq!(o.status.code(), Some(2));
}
