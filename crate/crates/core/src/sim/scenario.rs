use std::fmt::Write as _;

use chrono::NaiveDateTime;

use super::SimError;
use crate::agents::DecisionConfig;
use crate::graph::{is_node_id, load_graph, save_graph, GraphError, WorldGraph};
use crate::knowledge::{format_timestamp, parse_timestamp, DEFAULT_NEVER_GATE_THRESHOLD};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub fallback_nearest: bool,
    pub never_gate_threshold: usize,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            fallback_nearest: false,
            never_gate_threshold: DEFAULT_NEVER_GATE_THRESHOLD,
            seed: 0,
        }
    }
}

impl SimConfig {
    pub fn decision_config(&self) -> DecisionConfig {
        DecisionConfig {
            fallback_nearest: self.fallback_nearest,
            never_gate_threshold: self.never_gate_threshold,
        }
    }
}

/// A user detected at a node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Detection {
    pub timestamp: NaiveDateTime,
    pub user: String,
    pub node: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub graph: WorldGraph,
    pub timeline: Vec<Detection>,
    pub config: SimConfig,
}

impl Scenario {
    pub fn new(graph: WorldGraph) -> Self {
        Scenario {
            graph,
            timeline: Vec::new(),
            config: SimConfig::default(),
        }
    }

    /// Appends a detection; the timestamp uses either accepted form.
    pub fn push(&mut self, timestamp: &str, user: &str, node: &str) -> Result<(), SimError> {
        let timestamp = parse_timestamp(timestamp)?;
        self.timeline.push(Detection {
            timestamp,
            user: user.to_string(),
            node: node.to_string(),
        });
        Ok(())
    }
}

#[derive(PartialEq)]
enum Section {
    Graph,
    Config,
    Timeline,
}

/// Reads a scenario file: world-graph lines (optionally under `graph:`),
/// an optional `config:` section of `key=value` lines and a `timeline:`
/// section of `timestamp,user,node` lines. Keys are `fallback_nearest`,
/// `never_gate_threshold` and `seed`.
pub fn load_scenario(text: &str) -> Result<Scenario, SimError> {
    let mut section = Section::Graph;
    let mut graph_text = String::new();
    let mut config = SimConfig::default();
    let mut raw_timeline = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        let err = |message: String| SimError::Scenario { line, message };
        match content {
            "graph:" if section == Section::Graph => {
                graph_text.push('\n');
                continue;
            }
            "config:" => {
                section = Section::Config;
                graph_text.push('\n');
                continue;
            }
            "timeline:" => {
                section = Section::Timeline;
                graph_text.push('\n');
                continue;
            }
            _ => {}
        }
        if section == Section::Graph {
            graph_text.push_str(raw);
            graph_text.push('\n');
            continue;
        }
        graph_text.push('\n');
        if content.is_empty() {
            continue;
        }
        match section {
            Section::Config => {
                let (key, value) = content
                    .split_once('=')
                    .ok_or_else(|| err(format!("expected `key=value`, got `{content}`")))?;
                let value = value.trim();
                let bad = || err(format!("invalid value `{value}` for `{}`", key.trim()));
                match key.trim() {
                    "fallback_nearest" => {
                        config.fallback_nearest = value.parse().map_err(|_| bad())?
                    }
                    "never_gate_threshold" | "K" => {
                        config.never_gate_threshold = value.parse().map_err(|_| bad())?
                    }
                    "seed" => config.seed = value.parse().map_err(|_| bad())?,
                    other => return Err(err(format!("unknown config key `{other}`"))),
                }
            }
            Section::Timeline => {
                let fields: Vec<&str> = content.split(',').map(str::trim).collect();
                let [ts, user, node] = fields[..] else {
                    return Err(err(format!(
                        "expected `timestamp,user,node`, got `{content}`"
                    )));
                };
                let timestamp = parse_timestamp(ts).map_err(|e| err(e.to_string()))?;
                if !is_node_id(user) {
                    return Err(err(format!("invalid user id `{user}`")));
                }
                raw_timeline.push((
                    line,
                    Detection {
                        timestamp,
                        user: user.to_string(),
                        node: node.to_string(),
                    },
                ));
            }
            Section::Graph => unreachable!(),
        }
    }
    let graph = load_graph(&graph_text).map_err(|e| match e {
        GraphError::Syntax { line, message } => SimError::Scenario { line, message },
        GraphError::DuplicateNode { line, .. }
        | GraphError::DanglingEdge { line, .. }
        | GraphError::UnknownLabel { line, .. }
        | GraphError::DuplicateEdge { line, .. } => SimError::Scenario {
            line,
            message: e
                .to_string()
                .split_once(": ")
                .map_or(e.to_string(), |(_, m)| m.to_string()),
        },
        other => SimError::Graph(other),
    })?;
    let mut timeline = Vec::with_capacity(raw_timeline.len());
    let mut last: Option<NaiveDateTime> = None;
    for (line, d) in raw_timeline {
        if graph.resolve(&d.node).is_none() {
            return Err(SimError::Scenario {
                line,
                message: format!("unknown node `{}`", d.node),
            });
        }
        if graph.contains(&d.user) {
            return Err(SimError::Scenario {
                line,
                message: format!("user id `{}` clashes with a graph node", d.user),
            });
        }
        if last.is_some_and(|t| d.timestamp < t) {
            return Err(SimError::Scenario {
                line,
                message: "timeline is not sorted by timestamp".into(),
            });
        }
        last = Some(d.timestamp);
        timeline.push(d);
    }
    Ok(Scenario {
        graph,
        timeline,
        config,
    })
}

pub fn save_scenario(s: &Scenario) -> String {
    let mut out = String::from("graph:\n");
    out.push_str(&save_graph(&s.graph));
    writeln!(
        out,
        "\nconfig:\nfallback_nearest={}\nnever_gate_threshold={}\nseed={}\n\ntimeline:",
        s.config.fallback_nearest, s.config.never_gate_threshold, s.config.seed
    )
    .unwrap();
    for d in &s.timeline {
        writeln!(
            out,
            "{},{},{}",
            format_timestamp(&d.timestamp),
            d.user,
            d.node
        )
        .unwrap();
    }
    out
}
