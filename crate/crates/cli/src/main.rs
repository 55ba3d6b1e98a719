//! `kempe`: command-line surface of the triangulation coloring toolkit.
//!
//! Exit codes: 0 success/reduced, 1 input or parse error, 2 verification
//! failure, 3 reduction not achieved (a finding was dumped).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kempe_core::harness::{self, FuzzConfig, Strategy};
use kempe_core::io;
use kempe_core::reduction::{self, MoveTrace, Outcome};
use kempe_core::{
    all_channels, brute_force_4color, corpus_graph, enumerate_colorings, find_channel, random_triangulation,
    swap_channel, vertex_to_edge, Channel, ChannelPair, ChannelStart, EdgeId, FaceId, TaitColoring, Triangulation,
    VertexId,
};

#[derive(Parser)]
#[command(name = "kempe", version, about = "Planar triangulation coloring toolkit: Tait colorings, swap channels, knobs, and wheel reductions")]
struct Cli {
    /// Suppress informational output on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    /// Default seed for commands that use randomness.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Default output format for commands that support it.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Guided,
    Bfs,
    Both,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Guided => Strategy::Guided,
            StrategyArg::Bfs => Strategy::Bfs,
            StrategyArg::Both => Strategy::Both,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a triangulation and write it in TRIG format.
    Gen(GenArgs),
    /// Color a graph with the brute-force oracle.
    Color(ColorArgs),
    /// Count all proper 4-colorings and distinct edge colorings.
    Enumerate(EnumerateArgs),
    /// Verify a coloring file against its graph.
    Verify(VerifyArgs),
    /// List the swap channels of a colored graph.
    Channels(ChannelsArgs),
    /// Swap one channel and write the resulting coloring.
    Swap(SwapArgs),
    /// Reduce a low-degree vertex: puncture, recolor, extend.
    Reduce(ReduceArgs),
    /// Run a seeded fuzz campaign over the reduction procedure.
    Fuzz(FuzzArgs),
    /// Replay a named corpus scenario.
    Replay(ReplayArgs),
}

#[derive(Args)]
struct GenArgs {
    /// Number of vertices for a random triangulation.
    #[arg(long, conflicts_with = "corpus")]
    n: Option<usize>,
    /// Generator seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Name of a built-in graph (tetrahedron, octahedron, icosahedron,
    /// errera, tutte_dual).
    #[arg(long)]
    corpus: Option<String>,
    /// Puncture this vertex after generating.
    #[arg(long)]
    puncture: Option<usize>,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ColorArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Output path; a `.tcol` extension writes the induced edge coloring,
    /// anything else the vertex coloring.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Abort once the coloring count exceeds this cap.
    #[arg(long, default_value_t = 10_000_000)]
    cap: u64,
    /// Emit the counts as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    coloring: PathBuf,
    /// Closed trails to sample for the parity check.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct ChannelsArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    coloring: PathBuf,
    /// Restrict to one color pair (ab, ac, bc); all three when omitted.
    #[arg(long)]
    pair: Option<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SwapArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    coloring: PathBuf,
    /// Color pair to swap (ab, ac, bc).
    #[arg(long)]
    pair: String,
    /// Start from this triangle (face id).
    #[arg(long, conflicts_with = "start_edge")]
    start_face: Option<usize>,
    /// Start from a hole edge given as `u,v`.
    #[arg(long)]
    start_edge: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Vertex to delete and re-color (degree at most 5).
    #[arg(long)]
    vertex: usize,
    /// Coloring of the punctured graph (oracle-colored when omitted).
    #[arg(long)]
    coloring: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "guided")]
    strategy: StrategyArg,
    /// Move budget for the guided strategy.
    #[arg(long, default_value_t = 32)]
    budget: usize,
    /// Depth limit for the exhaustive search.
    #[arg(long, default_value_t = reduction::DEFAULT_DEPTH_LIMIT)]
    depth_limit: usize,
    /// Write the move trace as JSON.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Replay a previously written trace instead of searching.
    #[arg(long)]
    replay: Option<PathBuf>,
}

#[derive(Args)]
struct FuzzArgs {
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 12)]
    n_min: usize,
    #[arg(long, default_value_t = 40)]
    n_max: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "both")]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 32)]
    budget: usize,
    #[arg(long, default_value_t = reduction::DEFAULT_DEPTH_LIMIT)]
    depth_limit: usize,
    /// Degree of the vertex to reduce (4 or 5).
    #[arg(long, default_value_t = 5)]
    degree: usize,
    /// Report path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReplayArgs {
    /// Scenario name: errera_three_swaps or tutte_dual_knob.
    #[arg(long)]
    scenario: String,
    /// Emit the scenario report as JSON.
    #[arg(long)]
    json: bool,
}

/// Failure with the exit code it maps to.
enum CliError {
    /// Input, parse, or usage problem (exit 1).
    Input(String),
    /// Verification failure (exit 2).
    Verify(String),
    /// Reduction not achieved (exit 3).
    NotReduced(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Verify(_) => 2,
            CliError::NotReduced(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Verify(m) | CliError::NotReduced(m) => m,
        }
    }
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let benign = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if benign { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn read_to_string(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Triangulation, CliError> {
    io::parse_trig(&read_to_string(path)?).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn load_tait(path: &Path, t: &Triangulation) -> Result<TaitColoring, CliError> {
    let text = read_to_string(path)?;
    match io::parse_coloring(&text, t).map_err(|e| input_err(format!("{}: {e}", path.display())))? {
        io::ColoringFile::Tait(ec) => Ok(ec),
        io::ColoringFile::Vertex(vc) => {
            vertex_to_edge(t, &vc).map_err(|e| CliError::Verify(format!("{}: {e}", path.display())))
        }
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|e| input_err(format!("{}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn info(quiet: bool, msg: impl AsRef<str>) {
    if !quiet {
        eprintln!("{}", msg.as_ref());
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let quiet = cli.quiet;
    match cli.command {
        Command::Gen(args) => {
            let seed = args.seed.or(cli.seed).unwrap_or(0);
            let mut t = match (&args.n, &args.corpus) {
                (Some(n), None) => random_triangulation(*n, seed).map_err(input_err)?,
                (None, Some(name)) => corpus_graph(name).map_err(input_err)?,
                _ => return Err(CliError::Input("pass exactly one of --n or --corpus".into())),
            };
            if let Some(v) = args.puncture {
                if v >= t.vertex_count() {
                    return Err(CliError::Input(format!("vertex {v} out of range")));
                }
                t = t.puncture(VertexId(v)).map_err(input_err)?;
            }
            info(
                quiet,
                format!(
                    "generated: V={} E={} F={}{}",
                    t.vertex_count(),
                    t.edge_count(),
                    t.face_count(),
                    if t.hole().is_some() { " (one hole)" } else { "" }
                ),
            );
            emit(&args.out, &io::write_trig(&t))
        }
        Command::Color(args) => {
            let t = load_graph(&args.graph)?;
            let vc = brute_force_4color(&t)
                .map_err(input_err)?
                .ok_or_else(|| CliError::Verify("oracle found no proper 4-coloring".into()))?;
            let as_tcol = args
                .out
                .as_ref()
                .map(|p| p.extension().is_some_and(|e| e == "tcol"))
                .unwrap_or(false);
            let content = if as_tcol {
                let ec = vertex_to_edge(&t, &vc).expect("oracle colorings are proper");
                io::write_tcol(&t, &ec)
            } else {
                io::write_vcol(&vc)
            };
            emit(&args.out, &content)
        }
        Command::Enumerate(args) => {
            let t = load_graph(&args.graph)?;
            let e = enumerate_colorings(&t, args.cap).map_err(input_err)?;
            if args.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "instance_fingerprint": format!("{:016x}", e.instance_fingerprint),
                        "vertex_colorings": e.vertex_colorings,
                        "tait_colorings": e.tait_colorings,
                    })
                );
            } else {
                println!(
                    "{} proper vertex 4-colorings, {} distinct edge 3-colorings",
                    e.vertex_colorings, e.tait_colorings
                );
            }
            Ok(())
        }
        Command::Verify(args) => {
            let t = load_graph(&args.graph)?;
            let text = read_to_string(&args.coloring)?;
            let coloring = io::parse_coloring(&text, &t)
                .map_err(|e| input_err(format!("{}: {e}", args.coloring.display())))?;
            let seed = args.seed.or(cli.seed).unwrap_or(0);
            let report = harness::verify_coloring(&t, &coloring, args.samples, seed);
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            if report.ok() {
                Ok(())
            } else {
                Err(CliError::Verify("coloring failed verification".into()))
            }
        }
        Command::Channels(args) => {
            let t = load_graph(&args.graph)?;
            let ec = load_tait(&args.coloring, &t)?;
            let pairs: Vec<ChannelPair> = match &args.pair {
                Some(p) => vec![parse_pair(p)?],
                None => ChannelPair::ALL.to_vec(),
            };
            let format = args.format.or(cli.format).unwrap_or(Format::Json);
            match format {
                Format::Json => {
                    let mut all = Vec::new();
                    for &pair in &pairs {
                        for ch in all_channels(&t, &ec, pair) {
                            all.push(channel_json(&t, &ch));
                        }
                    }
                    emit(
                        &args.out,
                        &format!("{}\n", serde_json::to_string_pretty(&all).expect("serializes")),
                    )
                }
                Format::Dot => {
                    let mut highlight: Vec<EdgeId> = Vec::new();
                    for &pair in &pairs {
                        for ch in all_channels(&t, &ec, pair) {
                            highlight.extend(ch.swap_edges());
                        }
                    }
                    emit(&args.out, &io::write_dot(&t, Some(&ec), &highlight))
                }
            }
        }
        Command::Swap(args) => {
            let t = load_graph(&args.graph)?;
            let ec = load_tait(&args.coloring, &t)?;
            let pair = parse_pair(&args.pair)?;
            let start = match (args.start_face, &args.start_edge) {
                (Some(f), None) => {
                    if f >= t.face_count() {
                        return Err(CliError::Input(format!("face {f} out of range")));
                    }
                    ChannelStart::Triangle(FaceId(f))
                }
                (None, Some(spec)) => {
                    let (u, v) = parse_edge(spec)?;
                    let e = t
                        .edge_between(VertexId(u), VertexId(v))
                        .ok_or_else(|| CliError::Input(format!("({u}, {v}) is not an edge")))?;
                    ChannelStart::HoleEdge(e)
                }
                _ => return Err(CliError::Input("pass exactly one of --start-face or --start-edge".into())),
            };
            let ch = find_channel(&t, &ec, start, pair).map_err(input_err)?;
            let swapped = swap_channel(&t, &ec, &ch).map_err(input_err)?;
            info(
                quiet,
                format!(
                    "swapped {} channel: {} triangles ({:?})",
                    pair,
                    ch.triangles.len(),
                    ch.kind
                ),
            );
            emit(&args.out, &io::write_tcol(&t, &swapped))
        }
        Command::Reduce(args) => {
            let t = load_graph(&args.graph)?;
            if args.vertex >= t.vertex_count() {
                return Err(CliError::Input(format!("vertex {} out of range", args.vertex)));
            }
            let v = VertexId(args.vertex);
            let punct = t.puncture(v).map_err(input_err)?;
            let coloring = match &args.coloring {
                Some(path) => Some(load_tait(path, &punct)?),
                None => None,
            };
            if let Some(path) = &args.replay {
                let text = read_to_string(path)?;
                let trace: MoveTrace =
                    serde_json::from_str(&text).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
                let initial = match coloring {
                    Some(ec) => ec,
                    None => {
                        let vc = brute_force_4color(&punct)
                            .map_err(input_err)?
                            .ok_or_else(|| CliError::Verify("oracle found no coloring".into()))?;
                        vertex_to_edge(&punct, &vc).expect("proper")
                    }
                };
                let run = reduction::replay_trace(&punct, &initial, &trace)
                    .map_err(|e| CliError::Verify(format!("replay failed: {e}")))?;
                info(quiet, format!("replayed {} moves: {:?}", trace.moves.len(), trace.outcome));
                return match run.trace.outcome {
                    Outcome::Reduced => Ok(()),
                    other => Err(CliError::NotReduced(format!("trace outcome: {other:?}"))),
                };
            }
            let result = harness::reduce_at(&t, v, coloring, args.strategy.into(), args.budget, args.depth_limit)
                .map_err(|e| match e {
                    harness::HarnessError::Triangulation(t) => input_err(t),
                    other => CliError::NotReduced(other.to_string()),
                })?;
            if let Some(path) = &args.trace {
                let text = serde_json::to_string_pretty(&result.trace).expect("trace serializes");
                std::fs::write(path, text).map_err(|e| input_err(format!("{}: {e}", path.display())))?;
            }
            info(
                quiet,
                format!(
                    "vertex {} (degree {}): {:?} after {} moves, {} states visited",
                    v.0,
                    t.degree(v),
                    result.trace.outcome,
                    result.trace.moves.len(),
                    result.trace.visited_states
                ),
            );
            match result.trace.outcome {
                Outcome::Reduced => {
                    if let Some(vc) = &result.extended {
                        println!("{}", io::write_vcol(vc).trim_end());
                    }
                    Ok(())
                }
                other => Err(CliError::NotReduced(format!("outcome: {other:?}"))),
            }
        }
        Command::Fuzz(args) => {
            let cfg = FuzzConfig {
                trials: args.trials,
                n_min: args.n_min.max(4),
                n_max: args.n_max.max(args.n_min.max(4)),
                seed: args.seed.or(cli.seed).unwrap_or(0),
                strategy: args.strategy.into(),
                budget: args.budget,
                depth_limit: args.depth_limit,
                degree: args.degree,
            };
            if !(4..=5).contains(&cfg.degree) {
                return Err(CliError::Input("--degree must be 4 or 5".into()));
            }
            let report = harness::fuzz_reduction(&cfg);
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            emit(&args.out, &format!("{text}\n"))?;
            info(
                quiet,
                format!(
                    "{} trials: {} completed, {} skipped, {} failures",
                    report.trials.len(),
                    report.aggregates.completed,
                    report.aggregates.skipped,
                    report.aggregates.failures
                ),
            );
            if report.aggregates.failures > 0 {
                Err(CliError::NotReduced(format!(
                    "{} trials did not reduce; dumps are in the report",
                    report.aggregates.failures
                )))
            } else {
                Ok(())
            }
        }
        Command::Replay(args) => {
            let report = harness::replay_scenario(&args.scenario).map_err(|e| match e {
                harness::HarnessError::UnknownScenario(s) => {
                    CliError::Input(format!("unknown scenario '{s}' (known: {})", harness::SCENARIO_NAMES.join(", ")))
                }
                harness::HarnessError::ScenarioPreconditionFailed(m) => CliError::Verify(m),
                other => CliError::Verify(other.to_string()),
            })?;
            if args.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("serializes"));
            } else {
                println!("{report:?}");
            }
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::NotReduced(format!("scenario {} failed", args.scenario)))
            }
        }
    }
}

fn parse_pair(s: &str) -> Result<ChannelPair, CliError> {
    ChannelPair::from_name(s).ok_or_else(|| CliError::Input(format!("invalid pair '{s}' (expected ab, ac or bc)")))
}

fn parse_edge(spec: &str) -> Result<(usize, usize), CliError> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(CliError::Input(format!("invalid edge '{spec}' (expected 'u,v')")));
    }
    let u = parts[0]
        .parse()
        .map_err(|_| CliError::Input(format!("invalid vertex '{}'", parts[0])))?;
    let v = parts[1]
        .parse()
        .map_err(|_| CliError::Input(format!("invalid vertex '{}'", parts[1])))?;
    Ok((u, v))
}

fn channel_json(t: &Triangulation, ch: &Channel) -> serde_json::Value {
    let edge_pair = |e: EdgeId| {
        let (u, v) = t.endpoints(e);
        serde_json::json!([u.0, v.0])
    };
    serde_json::json!({
        "pair": ch.pair.name(),
        "kind": match ch.kind {
            kempe_core::ChannelKind::Closed => "closed",
            kempe_core::ChannelKind::Open => "open",
        },
        "triangles": ch.triangles.iter().map(|f| f.0).collect::<Vec<_>>(),
        "interior_edges": ch.interior_edges.iter().map(|&e| edge_pair(e)).collect::<Vec<_>>(),
        "endpoints": ch.endpoints.map(|(a, b)| serde_json::json!([edge_pair(a), edge_pair(b)])),
    })
}
