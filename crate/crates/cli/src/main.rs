use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use mcolour::report::{self, RunReport};
use mcolour::spin::{self, CoverKind};
use mcolour::ColouredGraph;

#[derive(Parser)]
#[command(name = "mcolour", version, about = "Coloured random graphs and their automorphism groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Colour every pair of an n-vertex graph uniformly at random.
    GenRandom {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Graph file to write.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Build the Sym(m) complement (odd m) or verify the obstruction (even m).
    Complement {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        orbits: usize,
        /// Orbit-graph spec file to write (odd m only).
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Build the orbit graph for a double cover of Sym(m).
    Supplement {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        cover: CoverKind,
        #[arg(long, default_value_t = 1)]
        orbits: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Tabulate lift orders of involutions against the order-4 rule.
    CoverTable {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        cover: CoverKind,
        /// Write the enumerated cover (group table plus blade encodings).
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Extend a graph until every query of size <= k has a witness.
    Saturate {
        /// Starting graph file; a random graph is used when absent.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 8)]
        rounds: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Check that no vertex permutation induces a fixed-point-free colour involution.
    Obstruction {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Sweep the double-coset counting bound m^(k^2) > m (k!)^2.
    CosetBound {
        #[arg(long, default_value_t = 10)]
        m: usize,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[command(flatten)]
        output: Output,
    },
}

fn write(path: &Path, contents: &str) -> Result<()> {
    let mut text = contents.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn write_graph(graph: &ColouredGraph, out: Option<&PathBuf>, dot: Option<&PathBuf>) -> Result<()> {
    if let Some(path) = out {
        write(path, &graph.to_json())?;
    }
    if let Some(path) = dot {
        write(path, &graph.to_dot())?;
    }
    Ok(())
}

fn read_graph(path: &Path) -> Result<ColouredGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(ColouredGraph::from_json(&text)?)
}

fn run(command: Command) -> Result<(RunReport, bool)> {
    Ok(match command {
        Command::GenRandom { n, m, out, dot, output } => {
            let (report, graph) = report::gen_random(n, m, output.seed)?;
            write_graph(&graph, out.as_ref(), dot.as_ref())?;
            (report, output.json)
        }
        Command::Complement { m, orbits, out, output } => {
            let (report, spec) = report::complement(m, orbits, output.seed)?;
            if let (Some(path), Some(spec)) = (out, spec) {
                write(&path, &spec.to_json())?;
            }
            (report, output.json)
        }
        Command::Supplement { m, cover, orbits, out, output } => {
            let (report, spec) = report::supplement(m, cover, orbits, output.seed)?;
            if let (Some(path), Some(spec)) = (out, spec) {
                write(&path, &spec.to_json())?;
            }
            (report, output.json)
        }
        Command::CoverTable { m, cover, out, output } => {
            let report = report::cover_table(m, cover)?;
            if let Some(path) = out {
                let enumerated = spin::enumerate_cover(m, cover)?;
                write(&path, &serde_json::to_string_pretty(&enumerated.export())?)?;
            }
            (report, output.json)
        }
        Command::Saturate { input, n, m, k, rounds, out, dot, output } => {
            let start = match input {
                Some(path) => read_graph(&path)?,
                None => ColouredGraph::random(n, m, output.seed)?,
            };
            let (report, graph) = report::saturate(&start, k, output.seed, rounds)?;
            write_graph(&graph, out.as_ref(), dot.as_ref())?;
            (report, output.json)
        }
        Command::Obstruction { input, n, m, output } => {
            let graph = match input {
                Some(path) => read_graph(&path)?,
                None => ColouredGraph::random(n, m, output.seed)?,
            };
            (report::obstruction(&graph, output.seed)?, output.json)
        }
        Command::CosetBound { m, k, output } => (report::coset_bound(m, k)?, output.json),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((report, json)) => {
            let text = if json { report.to_json() } else { report.to_text() };
            let mut stdout = std::io::stdout().lock();
            let _ = writeln!(stdout, "{}", text.trim_end());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
