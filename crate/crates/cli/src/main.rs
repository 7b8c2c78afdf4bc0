use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vcapflow::gadgets::build_g_circle;
use vcapflow::generator::{grid_instance, GridParams};
use vcapflow::netcore::{add_super_terminals, check_feasible, validate_rotation};
use vcapflow::oracle::vertex_capacitated_max_flow;
use vcapflow::pushrelabel::RelabelOrder;
use vcapflow::wang::{max_flow_vertex_capacities, SolveOptions, SolveReport, Strategy};
use vcapflow::{parse_instance, write_instance, Error, Network, Rational};

#[derive(Parser)]
#[command(
    name = "vcapflow",
    version,
    about = "Maximum flow in planar networks with vertex capacities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random planar grid instance.
    Gen(GenArgs),
    /// Solve an instance.
    Solve(SolveArgs),
    /// Solve with both strategies and the reference oracle.
    Compare(CompareArgs),
    /// Print the reference value of an instance.
    Oracle(InputArgs),
    /// Print the size of the cycle-expanded network.
    InspectGadget(InputArgs),
    /// Check an instance and its embedding.
    Validate(InputArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Grid size as WIDTHxHEIGHT.
    #[arg(long, default_value = "4x4", value_parser = parse_grid)]
    grid: (usize, usize),
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long = "max-cap", default_value_t = 10)]
    max_cap: i64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SolverName {
    Batch,
    Fifo,
}

impl From<SolverName> for Strategy {
    fn from(s: SolverName) -> Self {
        match s {
            SolverName::Batch => Strategy::Batch,
            SolverName::Fifo => Strategy::Fifo,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value_t = SolverName::Batch)]
    solver: SolverName,
    /// Audit every invariant while solving.
    #[arg(long)]
    checked: bool,
    /// Shuffle relabel order with this seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

impl RunArgs {
    fn options(&self, strategy: Strategy) -> SolveOptions {
        SolveOptions {
            strategy,
            checked: self.checked,
            order: self
                .seed
                .map_or(RelabelOrder::Ascending, RelabelOrder::Shuffled),
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    input: PathBuf,
    #[command(flatten)]
    run: RunArgs,
    /// Also run the reference oracle; exit 1 on disagreement.
    #[arg(long = "compare-oracle")]
    compare_oracle: bool,
}

#[derive(Args)]
struct CompareArgs {
    input: PathBuf,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct InputArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WIDTHxHEIGHT, got `{s}`"))?;
    let w = w.parse().map_err(|_| format!("bad width `{w}`"))?;
    let h = h.parse().map_err(|_| format!("bad height `{h}`"))?;
    Ok((w, h))
}

/// Failure with its exit code: 1 for wrong answers and broken invariants,
/// 2 for unusable input.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. }
            | Error::InvalidArgument(_)
            | Error::NotApplicable { .. }
            | Error::SelfLoop(_)
            | Error::UnknownVertex(_)
            | Error::UnknownArc(_)
            | Error::FiniteTerminal(_)
            | Error::TerminalOverlap(_)
            | Error::NoTerminals
            | Error::Rotation(_)
            | Error::Unbounded(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

fn usage(msg: String) -> Failure {
    Failure { code: 2, msg }
}

fn load(path: &Path) -> Result<Network, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| {
        let mut f = Failure::from(e);
        f.msg = format!("{}: {}", path.display(), f.msg);
        f
    })
}

fn emit(format: Format, fields: &BTreeMap<&str, String>) {
    match format {
        Format::Machine => {
            for (k, v) in fields {
                println!("{k}={v}");
            }
        }
        Format::Text => {
            let width = fields.keys().map(|k| k.len()).max().unwrap_or(0);
            for (k, v) in fields {
                println!("{k:<width$}  {v}");
            }
        }
    }
}

fn report_fields(report: &SolveReport) -> BTreeMap<&'static str, String> {
    let c = &report.counters;
    BTreeMap::from([
        ("value", report.value.to_string()),
        ("probes", report.probes.len().to_string()),
        ("improve_iters", c.improve_iters.to_string()),
        ("pulses", c.pulses.to_string()),
        ("relabels", c.relabels.to_string()),
        ("inner_solves", c.inner_solves.to_string()),
        ("cleanup_augs", c.cleanup_augs.to_string()),
    ])
}

fn gen(args: &GenArgs) -> Result<(), Failure> {
    let params = GridParams {
        width: args.grid.0,
        height: args.grid.1,
        k: args.k,
        max_cap: args.max_cap,
        seed: args.seed,
    };
    let net: Network = grid_instance(&params)?;
    let text = format!(
        "c grid {}x{} k={} max-cap={} seed={}\n{}",
        params.width,
        params.height,
        params.k,
        params.max_cap,
        params.seed,
        write_instance(&net)
    );
    match &args.output {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn solve(args: &SolveArgs) -> Result<(), Failure> {
    let net = load(&args.input)?;
    let strategy: Strategy = args.run.solver.into();
    let start = Instant::now();
    let report = max_flow_vertex_capacities(&net, &args.run.options(strategy))?;
    let elapsed = start.elapsed();
    let mut fields = report_fields(&report);
    fields.insert("solver", strategy.to_string());
    fields.insert(
        "feasible",
        check_feasible(&net, &report.flow)
            .is_feasible_flow()
            .to_string(),
    );
    let mut mismatch = false;
    if args.compare_oracle {
        let oracle = vertex_capacitated_max_flow(&net)?;
        mismatch = oracle != report.value;
        fields.insert("oracle", oracle.to_string());
        fields.insert("match", (!mismatch).to_string());
    }
    if args.run.format == Format::Text {
        fields.insert("elapsed_ms", elapsed.as_millis().to_string());
    }
    emit(args.run.format, &fields);
    if mismatch {
        return Err(Failure {
            code: 1,
            msg: "solver and oracle disagree".into(),
        });
    }
    Ok(())
}

fn compare(args: &CompareArgs) -> Result<(), Failure> {
    let net = load(&args.input)?;
    let (batch, fifo, oracle) = std::thread::scope(|s| {
        let b = s.spawn(|| max_flow_vertex_capacities(&net, &args.run.options(Strategy::Batch)));
        let f = s.spawn(|| max_flow_vertex_capacities(&net, &args.run.options(Strategy::Fifo)));
        let o = s.spawn(|| vertex_capacitated_max_flow(&net));
        (b.join(), f.join(), o.join())
    });
    let (batch, fifo, oracle): (SolveReport, SolveReport, Rational) =
        (joined(batch)?, joined(fifo)?, joined(oracle)?);
    let agree = batch.value == oracle && fifo.value == oracle;
    match args.run.format {
        Format::Machine => {
            let mut fields = BTreeMap::new();
            for (name, r) in [("batch", &batch), ("fifo", &fifo)] {
                for (k, v) in report_fields(r) {
                    fields.insert(format!("{name}.{k}"), v);
                }
            }
            fields.insert("oracle.value".into(), oracle.to_string());
            fields.insert("match".into(), agree.to_string());
            for (k, v) in &fields {
                println!("{k}={v}");
            }
        }
        Format::Text => {
            println!(
                "{:<8} {:>10} {:>7} {:>8} {:>9} {:>13} {:>13}",
                "solver", "value", "probes", "pulses", "relabels", "inner_solves", "cleanup_augs"
            );
            for (name, r) in [("batch", &batch), ("fifo", &fifo)] {
                let c = &r.counters;
                println!(
                    "{:<8} {:>10} {:>7} {:>8} {:>9} {:>13} {:>13}",
                    name,
                    r.value.to_string(),
                    r.probes.len(),
                    c.pulses,
                    c.relabels,
                    c.inner_solves,
                    c.cleanup_augs
                );
            }
            println!("{:<8} {:>10}", "oracle", oracle.to_string());
            println!(
                "{}",
                if agree {
                    "all values agree"
                } else {
                    "MISMATCH"
                }
            );
        }
    }
    if agree {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            msg: "values disagree".into(),
        })
    }
}

fn joined<T>(r: std::thread::Result<vcapflow::Result<T>>) -> vcapflow::Result<T> {
    r.unwrap_or_else(|_| Err(Error::Invariant("solver thread panicked".into())))
}

fn oracle(args: &InputArgs) -> Result<(), Failure> {
    let net = load(&args.input)?;
    let value = vertex_capacitated_max_flow(&net)?;
    emit(args.format, &BTreeMap::from([("value", value.to_string())]));
    Ok(())
}

fn inspect_gadget(args: &InputArgs) -> Result<(), Failure> {
    let net = load(&args.input)?;
    let st = add_super_terminals(&net)?;
    let mut keep = st.original_sources.clone();
    keep.extend(&st.original_sinks);
    let gc = build_g_circle(&st.net, &keep)?;
    let rot = gc.net.rotation().expect("cycle expansion keeps a rotation");
    let summary = validate_rotation(&gc.net, rot)?;
    let cycles = gc
        .cycles
        .iter()
        .flatten()
        .filter(|c| c.vertices.len() > 1)
        .count();
    let fields = BTreeMap::from([
        ("base_vertices", net.num_vertices().to_string()),
        ("base_edges", (net.num_arcs() / 2).to_string()),
        ("circle_vertices", gc.net.num_vertices().to_string()),
        ("circle_edges", (gc.net.num_arcs() / 2).to_string()),
        ("cycles", cycles.to_string()),
        ("embedded_faces", summary.faces.to_string()),
        ("embedded_components", summary.components.to_string()),
    ]);
    emit(args.format, &fields);
    Ok(())
}

fn validate(args: &InputArgs) -> Result<(), Failure> {
    let net = load(&args.input)?;
    let rot = net
        .rotation()
        .ok_or_else(|| usage("instance has no rotation system".into()))?;
    let summary = validate_rotation(&net, rot)?;
    let fields = BTreeMap::from([
        ("vertices", summary.vertices.to_string()),
        ("edges", summary.edges.to_string()),
        ("faces", summary.faces.to_string()),
        ("components", summary.components.to_string()),
        ("sources", net.sources().len().to_string()),
        ("sinks", net.sinks().len().to_string()),
        ("planar", "true".to_string()),
    ]);
    emit(args.format, &fields);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen(a) => gen(a),
        Command::Solve(a) => solve(a),
        Command::Compare(a) => compare(a),
        Command::Oracle(a) => oracle(a),
        Command::InspectGadget(a) => inspect_gadget(a),
        Command::Validate(a) => validate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("vcapflow: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
