mod scan;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use plumb_core::graph::parse_graph;
use plumb_core::knot::{self, AlgebraicKnot, SurgerySpec};
use plumb_core::zeta::{self, InvariantOptions, ReducedZeta};
use plumb_core::{Class, Error, Lattice, PlumbingGraph};

#[derive(Parser)]
#[command(name = "plumb", version, about = "Polynomial parts of reduced zeta-functions and Seiberg-Witten invariants of plumbed 3-manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a graph file is a negative definite plumbing tree.
    Validate {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Polynomial parts and normalized Seiberg-Witten invariants of a graph.
    Invariants {
        path: PathBuf,
        #[command(flatten)]
        opts: InvariantFlags,
    },
    /// Plumbing graph of (-p/q)-surgery along a connected sum of algebraic knots.
    Surgery {
        /// Newton pairs of one knot, e.g. "2,3;2,1". Repeat for a connected sum.
        #[arg(long = "knot")]
        knots: Vec<String>,
        /// Surgery spec JSON file, instead of --knot/--p/--q.
        #[arg(long, conflicts_with_all = ["knots", "p", "q"])]
        spec: Option<PathBuf>,
        #[arg(long)]
        p: Option<i64>,
        #[arg(long)]
        q: Option<i64>,
        #[arg(long, value_enum, default_value_t = Emit::Graph)]
        emit: Emit,
        #[command(flatten)]
        opts: InvariantFlags,
    },
    /// Semigroup, Alexander polynomial and resolution graph of an algebraic knot.
    Knot {
        /// Knot spec JSON file.
        path: Option<PathBuf>,
        /// Newton pairs, e.g. "2,3;2,1".
        #[arg(long, conflicts_with = "path")]
        pairs: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare P+_h(1), P_h(1) and the counting oracle over a family of graphs.
    Scan {
        #[arg(long)]
        config: PathBuf,
        /// Write the per-class rows as CSV here as well.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Graph,
    Invariants,
    Checks,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(clap::Args)]
struct InvariantFlags {
    /// `all`, or comma-separated class indices.
    #[arg(long, default_value = "all")]
    classes: String,
    #[arg(long, value_enum, default_value_t = Switch::On)]
    oracle: Switch,
    /// Check Taylor expansions on the box at the deep point of this margin.
    #[arg(long = "box")]
    taylor_box: Option<i64>,
    /// Root of the orbifold graph (a node id).
    #[arg(long)]
    root: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    timing: bool,
}

impl InvariantFlags {
    fn options(&self, lattice: &Lattice) -> anyhow::Result<InvariantOptions> {
        let classes = if self.classes.trim() == "all" {
            None
        } else {
            let group = lattice.group();
            let mut cs: Vec<Class> = Vec::new();
            for tok in self.classes.split(',') {
                let i: usize = tok.trim().parse().with_context(|| format!("bad class index `{tok}`"))?;
                if i as i64 >= group.order() {
                    return Err(Error::InvalidArgument(format!("class index {i} out of range 0..{}", group.order())).into());
                }
                cs.push(group.class_at(i));
            }
            Some(cs)
        };
        let oracle = self.oracle == Switch::On;
        Ok(InvariantOptions {
            classes,
            oracle,
            root_check: oracle,
            taylor_box: self.taylor_box,
            root: self.root.clone(),
            timing: self.timing,
            ..InvariantOptions::default()
        })
    }
}

/// Failures with their exit codes: 1 for mathematically invalid input, 2 for
/// unreadable or malformed input.
fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<std::io::Error>().is_some() {
        return 2;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Malformed(_)) => 2,
        _ => 1,
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).map_err(|e| anyhow::Error::new(e).context(format!("cannot read {}", path.display())))
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match out {
        Some(p) => fs::write(p, text).map_err(|e| anyhow::Error::new(e).context(format!("cannot write {}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn invariants(graph: &PlumbingGraph, flags: &InvariantFlags) -> anyhow::Result<()> {
    let lattice = Lattice::new(graph)?;
    let zeta = ReducedZeta::build(&lattice)?;
    let opts = flags.options(&lattice)?;
    let report = zeta::sw_invariants_with(&zeta, &opts)?;
    emit(&report, flags.out.as_deref())
}

#[derive(Serialize)]
struct KnotReport<'a> {
    newton_pairs: &'a [(i64, i64)],
    linking_pairs: &'a [(i64, i64)],
    multiplicity: i64,
    milnor: i64,
    semigroup: knot::NumericalSemigroup,
    symmetric: bool,
    alexander: Vec<i128>,
    monodromy_polynomial_part: plumb_core::LaurentPoly,
    division_agrees: bool,
    resolution_graph: serde_json::Value,
    graph_checks: knot::KnotGraphCheck,
}

fn knot_report(k: &AlgebraicKnot, out: Option<&Path>) -> anyhow::Result<()> {
    let kg = k.resolution_graph()?;
    let semigroup = k.semigroup();
    let part = k.monodromy_polynomial_part();
    let report = KnotReport {
        newton_pairs: k.newton_pairs(),
        linking_pairs: k.linking_pairs(),
        multiplicity: k.multiplicity(),
        milnor: k.milnor(),
        symmetric: semigroup.is_symmetric(),
        semigroup,
        alexander: k.alexander()?,
        division_agrees: k.monodromy_part_by_division()? == part,
        monodromy_polynomial_part: part,
        resolution_graph: serde_json::from_str(&kg.graph.to_json())?,
        graph_checks: knot::validate_knot_graph(k, &kg)?,
    };
    emit(&report, out)
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Validate { path, out } => {
            let text = read(&path)?;
            let graph = parse_graph(&text)?;
            let report = graph.validate();
            emit(&report, out.as_deref())?;
            Ok(if report.valid { 0 } else { 1 })
        }
        Command::Invariants { path, opts } => {
            let graph = parse_graph(&read(&path)?)?;
            invariants(&graph, &opts)?;
            Ok(0)
        }
        Command::Surgery {
            knots,
            spec,
            p,
            q,
            emit: what,
            opts,
        } => {
            let spec = match spec {
                Some(path) => SurgerySpec::parse(&read(&path)?)?,
                None => {
                    let knots = knots.iter().map(|s| AlgebraicKnot::parse(s)).collect::<Result<Vec<_>, _>>()?;
                    let p = p.ok_or_else(|| Error::InvalidSurgery("--p is required".into()))?;
                    let q = q.ok_or_else(|| Error::InvalidSurgery("--q is required".into()))?;
                    SurgerySpec::new(knots, p, q)?
                }
            };
            let sg = knot::surgery_graph(&spec)?;
            match what {
                Emit::Graph => {
                    let text = sg.graph.to_json() + "\n";
                    match &opts.out {
                        Some(p) => fs::write(p, text)?,
                        None => print!("{text}"),
                    }
                }
                Emit::Invariants => invariants(&sg.graph, &opts)?,
                Emit::Checks => {
                    let zeta = ReducedZeta::build(&Lattice::new(&sg.graph)?)?;
                    emit(&knot::structure_checks(&sg, &zeta)?, opts.out.as_deref())?;
                }
            }
            Ok(0)
        }
        Command::Knot { path, pairs, out } => {
            let k = match (path, pairs) {
                (Some(path), _) => knot::parse_knot(&read(&path)?)?,
                (None, Some(s)) => AlgebraicKnot::parse(&s)?,
                (None, None) => return Err(Error::InvalidArgument("give a knot file or --pairs".into()).into()),
            };
            knot_report(&k, out.as_deref())?;
            Ok(0)
        }
        Command::Scan {
            config,
            csv,
            out,
            timing,
        } => {
            let cfg = scan::ScanConfig::parse(&read(&config)?)?;
            let summary = scan::run(&cfg, timing)?;
            if let Some(path) = csv {
                scan::write_csv(&summary, &path)?;
            }
            emit(&summary, out.as_deref())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
