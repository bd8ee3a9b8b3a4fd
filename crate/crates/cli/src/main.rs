//! `ltlpark`: prover, miner, graph tools and simulator on the command line.
//!
//! Exit codes: 0 on success (or a satisfiable / valid verdict), 1 when
//! `prove` answers UNSAT or NOT VALID, 2 on usage and input errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use ltlpark_core::graph::{
    glue, load_graph, load_partition, save_graph, save_partition, split, to_dot,
};
use ltlpark_core::knowledge::{mine_log, EventLog};
use ltlpark_core::sim::{generate, load_scenario, run, save_scenario, GenParams};
use ltlpark_core::{build_tree, export_tree, parse, TreeFormat};

#[derive(Parser)]
#[command(
    name = "ltlpark",
    version,
    about = "Temporal-logic preference engine for smart parking"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide satisfiability (or validity) of a formula.
    Prove {
        formula: String,
        /// Check validity instead of satisfiability.
        #[arg(long)]
        valid: bool,
        /// Print the truth tree (`ascii` or `dot`).
        #[arg(long, value_name = "FORMAT")]
        tree: Option<TreeFormat>,
    },
    /// Run a scenario file and write the report.
    Simulate {
        scenario: PathBuf,
        /// Report destination (default: stdout).
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Also write the final world graph in DOT form.
        #[arg(long, value_name = "PATH")]
        dot_graph: Option<PathBuf>,
        /// Offer the nearest free place when no preferred place is free.
        #[arg(long)]
        fallback_nearest: bool,
        /// Completed trips before never-used gates are asserted.
        #[arg(short = 'K', long = "never-gate-threshold", value_name = "N")]
        k: Option<usize>,
        /// Seed recorded in the report.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Mine an event log into a specification store (TSV).
    Mine {
        events: PathBuf,
        graph: PathBuf,
        #[arg(
            short = 'K',
            long = "never-gate-threshold",
            value_name = "N",
            default_value_t = 3
        )]
        k: usize,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// World-graph tools.
    Graph {
        #[command(subcommand)]
        action: GraphCommand,
    },
    /// Write a seeded synthetic scenario on the bundled parking space.
    Generate {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        users: usize,
        #[arg(long, default_value_t = 9)]
        trips: usize,
        #[arg(long, default_value_t = 0.78)]
        affinity: f64,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GraphCommand {
    /// Split a graph into K parts with replicated border nodes.
    Split {
        graph: PathBuf,
        #[arg(short, long)]
        k: usize,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Glue a partition file back into one graph.
    Glue {
        partition: PathBuf,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Render a graph in DOT form.
    Dot {
        graph: PathBuf,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

/// Returns the process exit code for a successful run.
fn execute(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Prove {
            formula,
            valid,
            tree,
        } => {
            let f = parse(&formula).with_context(|| format!("cannot parse `{formula}`"))?;
            let target = if valid {
                ltlpark_core::Formula::not(f)
            } else {
                f
            };
            let t = build_tree(&target);
            let (verdict, code) = match (valid, t.is_open()) {
                (false, true) => ("SAT", 0),
                (false, false) => ("UNSAT", 1),
                (true, false) => ("VALID", 0),
                (true, true) => ("NOT VALID", 1),
            };
            let mut text = format!("{verdict}\n");
            if let Some(format) = tree {
                text.push_str(&export_tree(&t, format));
            }
            emit(None, &text)?;
            Ok(code)
        }
        Command::Simulate {
            scenario,
            out,
            dot_graph,
            fallback_nearest,
            k,
            seed,
        } => {
            let mut s = load_scenario(&read(&scenario)?)
                .with_context(|| format!("in {}", scenario.display()))?;
            if fallback_nearest {
                s.config.fallback_nearest = true;
            }
            if let Some(k) = k {
                s.config.never_gate_threshold = k;
            }
            if let Some(seed) = seed {
                s.config.seed = seed;
            }
            let report = run(&s)?;
            emit(out.as_deref(), &report.render())?;
            if let Some(path) = dot_graph {
                emit(Some(&path), &to_dot(&report.final_graph))?;
            }
            Ok(0)
        }
        Command::Mine {
            events,
            graph,
            k,
            out,
        } => {
            let log = EventLog::from_csv(&read(&events)?)
                .with_context(|| format!("in {}", events.display()))?;
            let g =
                load_graph(&read(&graph)?).with_context(|| format!("in {}", graph.display()))?;
            let store = mine_log(&log, &g, k)?;
            emit(out.as_deref(), &store.to_tsv())?;
            Ok(0)
        }
        Command::Graph { action } => {
            match action {
                GraphCommand::Split { graph, k, out } => {
                    let g = load_graph(&read(&graph)?)
                        .with_context(|| format!("in {}", graph.display()))?;
                    emit(out.as_deref(), &save_partition(&split(&g, k)?))?;
                }
                GraphCommand::Glue { partition, out } => {
                    let p = load_partition(&read(&partition)?)
                        .with_context(|| format!("in {}", partition.display()))?;
                    emit(out.as_deref(), &save_graph(&glue(&p)?))?;
                }
                GraphCommand::Dot { graph, out } => {
                    let g = load_graph(&read(&graph)?)
                        .with_context(|| format!("in {}", graph.display()))?;
                    emit(out.as_deref(), &to_dot(&g))?;
                }
            }
            Ok(0)
        }
        Command::Generate {
            seed,
            users,
            trips,
            affinity,
            out,
        } => {
            let s = generate(
                seed,
                GenParams {
                    users,
                    trips_per_user: trips,
                    spot_affinity: affinity,
                },
            )?;
            emit(out.as_deref(), &save_scenario(&s))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
