use std::fmt::Write as _;

use chrono::NaiveDateTime;

use super::SimConfig;
use crate::agents::{PreferenceDecision, Rationale};
use crate::graph::{save_graph, WorldGraph};
use crate::knowledge::{format_timestamp, SpecTriple};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SimStats {
    /// Completed trips reported by followers.
    pub trips: usize,
    /// Decisions whose specification contradiction was repaired.
    pub contradictions_resolved: usize,
    /// Decisions whose suggested place is where that trip parked.
    pub suggestions_followed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionRecord {
    pub timestamp: NaiveDateTime,
    pub decision: PreferenceDecision,
    /// Where the trip that asked for this decision parked, once known.
    pub parked: Option<String>,
    /// Whether the trip has finished.
    pub trip_finished: bool,
}

impl DecisionRecord {
    pub fn followed(&self) -> bool {
        self.decision.suggestion.is_some() && self.decision.suggestion == self.parked
    }

    /// One-line summary ending in the suggestion and its rationale.
    pub fn summary(&self) -> String {
        let d = &self.decision;
        let candidates: Vec<String> = d
            .candidates
            .iter()
            .map(|(s, r)| format!("{s}:{r}"))
            .collect();
        let outcome = match (&d.suggestion, d.rationale) {
            (Some(s), Rationale::NearestFree) => format!("suggest {s} (NearestFree)"),
            (Some(s), rationale) => format!(
                "suggest {s} ({rationale}, r={})",
                d.suggestion_r().unwrap_or(0)
            ),
            (None, rationale) => format!("no suggestion ({rationale})"),
        };
        format!(
            "{} {} at {}: candidates [{}] => {}",
            format_timestamp(&self.timestamp),
            d.user,
            d.gate,
            candidates.join(", "),
            outcome
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationReport {
    pub config: SimConfig,
    pub decisions: Vec<DecisionRecord>,
    pub final_store: Vec<SpecTriple>,
    pub final_graph: WorldGraph,
    pub stats: SimStats,
    /// Users whose follower is still active at the end of the timeline.
    pub active_followers: Vec<String>,
}

impl SimulationReport {
    /// Stable text form: header, decisions, statistics, final store and
    /// final graph, each under its own heading.
    pub fn render(&self) -> String {
        let mut out = String::from("# simulation report\n");
        writeln!(
            out,
            "config: fallback_nearest={} never_gate_threshold={} seed={}",
            self.config.fallback_nearest, self.config.never_gate_threshold, self.config.seed
        )
        .unwrap();
        writeln!(out, "\n[decisions] {}", self.decisions.len()).unwrap();
        for rec in &self.decisions {
            writeln!(out, "{}", rec.summary()).unwrap();
            let d = &rec.decision;
            let status = if d.tree.is_open() { "open" } else { "closed" };
            writeln!(out, "  formula: {} ({status})", d.formula).unwrap();
            if let Some(res) = &d.resolution {
                let removed: Vec<String> = res.removed.iter().map(ToString::to_string).collect();
                writeln!(
                    out,
                    "  resolved: removed [{}]{}",
                    removed.join(", "),
                    if res.unresolved {
                        " (still contradictory)"
                    } else {
                        ""
                    }
                )
                .unwrap();
            }
            let parked = match (&rec.parked, rec.trip_finished) {
                (Some(p), _) => p.clone(),
                (None, true) => "-".into(),
                (None, false) => "?".into(),
            };
            writeln!(out, "  parked: {parked}").unwrap();
        }
        writeln!(
            out,
            "\n[stats]\ntrips={}\ncontradictions_resolved={}\nsuggestions_followed={}",
            self.stats.trips, self.stats.contradictions_resolved, self.stats.suggestions_followed
        )
        .unwrap();
        writeln!(out, "active_followers={}", self.active_followers.join(",")).unwrap();
        writeln!(out, "\n[store] {}", self.final_store.len()).unwrap();
        for t in &self.final_store {
            writeln!(out, "{}\t{}\t{}", t.user, t.formula, t.r).unwrap();
        }
        out.push_str("\n[graph]\n");
        out.push_str(&save_graph(&self.final_graph));
        out
    }
}
