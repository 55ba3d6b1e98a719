//! Seeded fuzz campaigns over the reduction procedure, corpus scenario
//! replays, and file-level verification.
//!
//! Every campaign is a pure function of its configuration: per-trial seeds
//! derive from the master seed by a fixed mix, the generator, oracle and
//! strategies are deterministic, and reports carry their volatile fields
//! (wall-clock data) separately so two runs of the same config serialize
//! identically after [`RunReport::strip_volatile`].

use std::collections::BTreeMap;
use std::ops::ControlFlow;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channels::{all_channels, ChannelPair};
use crate::coloring::{edge_to_vertex, validate_tait, vertex_to_edge, EdgeColor, TaitColoring, VertexColor, VertexColoring};
use crate::io::{write_tcol, write_trig, ColoringFile};
use crate::knobs::find_knobs;
use crate::oracle::{brute_force_4color, for_each_coloring, OracleError};
use crate::parity::{check_closed_trail, sample_closed_trails, wheel_sum};
use crate::reduction::{
    attempt_reduction_exhaustive, attempt_reduction_guided, classify_wheel, extend_to_center, reduce_degree4,
    reduce_low_degree, replay_trace, Move, MoveTrace, Outcome, ReductionError, WheelClass,
};
use crate::triangulation::{corpus_graph, random_triangulation, Triangulation, TriangulationError, VertexId};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown scenario: {0}")]
    UnknownScenario(String),
    #[error("scenario precondition failed: {0}")]
    ScenarioPreconditionFailed(String),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Guided,
    Bfs,
    Both,
}

impl Strategy {
    pub fn runs_guided(self) -> bool {
        matches!(self, Strategy::Guided | Strategy::Both)
    }

    pub fn runs_bfs(self) -> bool {
        matches!(self, Strategy::Bfs | Strategy::Both)
    }
}

/// Configuration of one fuzz campaign.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub trials: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub seed: u64,
    pub strategy: Strategy,
    /// Move budget for the guided strategy.
    pub budget: usize,
    /// Depth limit for the exhaustive search.
    pub depth_limit: usize,
    /// Degree of the vertex to reduce (4 or 5).
    pub degree: usize,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            trials: 100,
            n_min: 12,
            n_max: 40,
            seed: 0,
            strategy: Strategy::Both,
            budget: 32,
            depth_limit: crate::reduction::DEFAULT_DEPTH_LIMIT,
            degree: 5,
        }
    }
}

/// Per-trial seed: a fixed mix of the master seed and the trial index.
pub fn trial_seed(master: u64, trial: usize) -> u64 {
    crate::splitmix64(master ^ crate::splitmix64(trial as u64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialOutcome {
    Reduced,
    Cycled,
    Exhausted,
    /// The exhaustive search hit its depth or state cap with frontier left.
    DepthLimited,
    /// The oracle failed to color a valid instance (build-stopping bug).
    OracleFailed,
}

impl From<Outcome> for TrialOutcome {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::Reduced => TrialOutcome::Reduced,
            Outcome::Cycled => TrialOutcome::Cycled,
            Outcome::Exhausted => TrialOutcome::Exhausted,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StrategySummary {
    pub outcome: TrialOutcome,
    pub moves: usize,
    pub visited_states: u64,
    pub knob_rotations: usize,
}

/// Everything needed to replay a failed trial offline.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FailureDump {
    pub reason: String,
    pub trig: String,
    pub punctured_trig: String,
    pub tcol: String,
    pub trace: Option<MoveTrace>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub n: usize,
    /// The punctured vertex; `None` when the trial was skipped.
    pub vertex: Option<usize>,
    pub skipped: bool,
    pub initial_class: Option<WheelClass>,
    pub initial_pointer: Option<usize>,
    pub guided: Option<StrategySummary>,
    pub bfs: Option<StrategySummary>,
    /// Reduced outcomes re-extended over the center and checked proper on
    /// the original graph.
    pub extended_ok: Option<bool>,
    /// Traces re-applied from the initial coloring reproduce their outcome.
    pub replay_ok: Option<bool>,
    pub elapsed_micros: u64,
    pub dump: Option<FailureDump>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassStats {
    pub total: usize,
    pub reduced: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyAggregate {
    pub reduced: usize,
    pub cycled: usize,
    pub exhausted: usize,
    pub depth_limited: usize,
    pub oracle_failed: usize,
    /// Move counts among reduced trials.
    pub move_histogram: BTreeMap<usize, usize>,
    pub knob_rotations: usize,
    pub success_by_class: BTreeMap<String, ClassStats>,
}

impl StrategyAggregate {
    fn add(&mut self, class: Option<WheelClass>, s: &StrategySummary) {
        match s.outcome {
            TrialOutcome::Reduced => self.reduced += 1,
            TrialOutcome::Cycled => self.cycled += 1,
            TrialOutcome::Exhausted => self.exhausted += 1,
            TrialOutcome::DepthLimited => self.depth_limited += 1,
            TrialOutcome::OracleFailed => self.oracle_failed += 1,
        }
        if s.outcome == TrialOutcome::Reduced {
            *self.move_histogram.entry(s.moves).or_insert(0) += 1;
        }
        self.knob_rotations += s.knob_rotations;
        if let Some(class) = class {
            let entry = self
                .success_by_class
                .entry(format!("{class:?}"))
                .or_default();
            entry.total += 1;
            if s.outcome == TrialOutcome::Reduced {
                entry.reduced += 1;
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Aggregates {
    pub completed: usize,
    pub skipped: usize,
    pub by_class: BTreeMap<String, usize>,
    pub guided: StrategyAggregate,
    pub bfs: StrategyAggregate,
    /// Trials where the guided strategy reduced in fewer moves than the
    /// optimal search: impossible, so any count here is a bug.
    pub guided_vs_bfs_violations: usize,
    pub failures: usize,
}

impl Aggregates {
    pub fn from_trials(trials: &[TrialRecord]) -> Aggregates {
        let mut agg = Aggregates::default();
        for rec in trials {
            if rec.skipped {
                agg.skipped += 1;
                continue;
            }
            agg.completed += 1;
            if let Some(class) = rec.initial_class {
                *agg.by_class.entry(format!("{class:?}")).or_insert(0) += 1;
            }
            if let Some(s) = &rec.guided {
                agg.guided.add(rec.initial_class, s);
            }
            if let Some(s) = &rec.bfs {
                agg.bfs.add(rec.initial_class, s);
            }
            if let (Some(g), Some(b)) = (&rec.guided, &rec.bfs) {
                if g.outcome == TrialOutcome::Reduced
                    && b.outcome == TrialOutcome::Reduced
                    && g.moves < b.moves
                {
                    agg.guided_vs_bfs_violations += 1;
                }
            }
            if rec.dump.is_some() {
                agg.failures += 1;
            }
        }
        agg
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportHeader {
    pub tool: String,
    pub version: String,
    /// Wall-clock timestamp; excluded from determinism comparisons.
    pub generated_at: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub header: ReportHeader,
    pub config: FuzzConfig,
    pub trials: Vec<TrialRecord>,
    pub aggregates: Aggregates,
}

impl RunReport {
    /// Zeroes wall-clock fields so reports can be compared byte for byte.
    pub fn strip_volatile(&mut self) {
        self.header.generated_at = None;
        for t in &mut self.trials {
            t.elapsed_micros = 0;
        }
    }
}

fn header_now() -> ReportHeader {
    let ts = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs().to_string())
        .unwrap_or_default();
    ReportHeader {
        tool: "kempe".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        generated_at: Some(ts),
    }
}

fn knob_count(trace: &MoveTrace) -> usize {
    trace
        .moves
        .iter()
        .filter(|m| matches!(m, Move::KnobRotate { .. }))
        .count()
}

/// Checks a reduced run end to end: recover vertex colors on the punctured
/// graph, extend over the center, verify properness on the original graph.
fn verify_extension(
    t: &Triangulation,
    v: VertexId,
    punct: &Triangulation,
    final_coloring: &TaitColoring,
) -> bool {
    let Ok(vc) = edge_to_vertex(punct, final_coloring, VertexId(0), VertexColor::C1) else {
        return false;
    };
    match extend_to_center(t, v, &vc) {
        Ok(full) => full.is_proper(t),
        Err(_) => false,
    }
}

/// Runs one fuzz campaign.  Each trial generates a triangulation, punctures
/// its smallest vertex of the configured degree (recording a skip when none
/// exists), colors the punctured graph with the oracle, runs the configured
/// strategies, and verifies reduced outcomes end to end.  Trials that do
/// not reduce carry a full replayable dump.
pub fn fuzz_reduction(cfg: &FuzzConfig) -> RunReport {
    let mut trials = Vec::with_capacity(cfg.trials);
    for trial in 0..cfg.trials {
        let started = Instant::now();
        let seed = trial_seed(cfg.seed, trial);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n_min = cfg.n_min.max(4);
        let n = rng.gen_range(n_min..=cfg.n_max.max(n_min));
        let t = random_triangulation(n, rng.gen()).expect("n >= 4");
        let vertex = t.vertices().find(|&v| t.degree(v) == cfg.degree);
        let Some(v) = vertex else {
            trials.push(TrialRecord {
                trial,
                seed,
                n,
                vertex: None,
                skipped: true,
                initial_class: None,
                initial_pointer: None,
                guided: None,
                bfs: None,
                extended_ok: None,
                replay_ok: None,
                elapsed_micros: started.elapsed().as_micros() as u64,
                dump: None,
            });
            continue;
        };
        trials.push(run_trial(cfg, trial, seed, n, &t, v, started));
    }
    let aggregates = Aggregates::from_trials(&trials);
    RunReport {
        header: header_now(),
        config: cfg.clone(),
        trials,
        aggregates,
    }
}

fn run_trial(
    cfg: &FuzzConfig,
    trial: usize,
    seed: u64,
    n: usize,
    t: &Triangulation,
    v: VertexId,
    started: Instant,
) -> TrialRecord {
    let punct = t.puncture(v).expect("degree checked");
    let mut record = TrialRecord {
        trial,
        seed,
        n,
        vertex: Some(v.0),
        skipped: false,
        initial_class: None,
        initial_pointer: None,
        guided: None,
        bfs: None,
        extended_ok: None,
        replay_ok: None,
        elapsed_micros: 0,
        dump: None,
    };
    let dump_with = |reason: String, ec: &TaitColoring, trace: Option<MoveTrace>, punct: &Triangulation| FailureDump {
        reason,
        trig: write_trig(t),
        punctured_trig: write_trig(punct),
        tcol: write_tcol(punct, ec),
        trace,
    };

    let oracle = brute_force_4color(&punct);
    let vc = match oracle {
        Ok(Some(vc)) => vc,
        _ => {
            let empty = TaitColoring::new(vec![]);
            record.dump = Some(dump_with("oracle returned no coloring".into(), &empty, None, &punct));
            let summary = StrategySummary {
                outcome: TrialOutcome::OracleFailed,
                moves: 0,
                visited_states: 0,
                knob_rotations: 0,
            };
            record.guided = cfg.strategy.runs_guided().then(|| summary.clone());
            record.bfs = cfg.strategy.runs_bfs().then_some(summary);
            record.elapsed_micros = started.elapsed().as_micros() as u64;
            return record;
        }
    };
    let ec = vertex_to_edge(&punct, &vc).expect("oracle colorings are proper");
    let ws = classify_wheel(&punct, &ec).expect("punctured hole is a square or pentagon");
    record.initial_class = Some(ws.class);
    record.initial_pointer = Some(ws.pointer);

    let mut extended_all = true;
    let mut replay_all = true;
    let mut verified_any = false;

    if cfg.degree == 4 {
        match reduce_degree4(t, v, &ec) {
            Ok(red) => {
                verified_any = true;
                extended_all &= red.coloring.is_proper(t);
                replay_all &= replay_trace(&punct, &ec, &red.trace).is_ok();
                record.guided = Some(StrategySummary {
                    outcome: TrialOutcome::Reduced,
                    moves: red.trace.moves.len(),
                    visited_states: red.trace.visited_states,
                    knob_rotations: knob_count(&red.trace),
                });
            }
            Err(e) => {
                record.guided = Some(StrategySummary {
                    outcome: TrialOutcome::Exhausted,
                    moves: 0,
                    visited_states: 0,
                    knob_rotations: 0,
                });
                record.dump = Some(dump_with(format!("degree-4 reduction failed: {e}"), &ec, None, &punct));
            }
        }
    } else {
        if cfg.strategy.runs_guided() {
            match attempt_reduction_guided(&punct, &ec, cfg.budget) {
                Ok(run) => {
                    record.guided = Some(StrategySummary {
                        outcome: run.trace.outcome.into(),
                        moves: run.trace.moves.len(),
                        visited_states: run.trace.visited_states,
                        knob_rotations: knob_count(&run.trace),
                    });
                    if run.trace.outcome == Outcome::Reduced {
                        verified_any = true;
                        extended_all &= verify_extension(t, v, &punct, &run.final_coloring);
                    }
                    replay_all &= replay_trace(&punct, &ec, &run.trace).is_ok();
                }
                Err(e) => {
                    record.dump = Some(dump_with(format!("guided strategy error: {e}"), &ec, None, &punct));
                }
            }
        }
        if cfg.strategy.runs_bfs() {
            match attempt_reduction_exhaustive(&punct, &ec, cfg.depth_limit) {
                Ok(run) => {
                    record.bfs = Some(StrategySummary {
                        outcome: run.trace.outcome.into(),
                        moves: run.trace.moves.len(),
                        visited_states: run.trace.visited_states,
                        knob_rotations: knob_count(&run.trace),
                    });
                    if run.trace.outcome == Outcome::Reduced {
                        verified_any = true;
                        extended_all &= verify_extension(t, v, &punct, &run.final_coloring);
                        replay_all &= replay_trace(&punct, &ec, &run.trace).is_ok();
                    } else if record.dump.is_none() {
                        record.dump = Some(dump_with(
                            format!("exhaustive search did not reduce: {:?}", run.trace.outcome),
                            &ec,
                            Some(run.trace.clone()),
                            &punct,
                        ));
                    }
                }
                Err(e) => {
                    record.bfs = Some(StrategySummary {
                        outcome: TrialOutcome::DepthLimited,
                        moves: 0,
                        visited_states: 0,
                        knob_rotations: 0,
                    });
                    if record.dump.is_none() {
                        record.dump = Some(dump_with(format!("exhaustive search error: {e}"), &ec, None, &punct));
                    }
                }
            }
        }
    }

    if verified_any {
        record.extended_ok = Some(extended_all);
        record.replay_ok = Some(replay_all);
        if !(extended_all && replay_all) && record.dump.is_none() {
            record.dump = Some(dump_with("extension or replay verification failed".into(), &ec, None, &punct));
        }
    }
    record.elapsed_micros = started.elapsed().as_micros() as u64;
    record
}

/// Reduces a single vertex of a sphere triangulation end to end, as used by
/// the command-line `reduce` subcommand.  When `coloring` is `None` the
/// punctured graph is colored by the oracle.
pub struct ReduceAtResult {
    pub punctured: Triangulation,
    pub initial: TaitColoring,
    pub trace: MoveTrace,
    pub final_coloring: TaitColoring,
    /// The extended coloring of the original graph when the run reduced.
    pub extended: Option<VertexColoring>,
}

pub fn reduce_at(
    t: &Triangulation,
    v: VertexId,
    coloring: Option<TaitColoring>,
    strategy: Strategy,
    budget: usize,
    depth_limit: usize,
) -> Result<ReduceAtResult, HarnessError> {
    let punct = t.puncture(v)?;
    let ec = match coloring {
        Some(ec) => ec,
        None => {
            let vc = brute_force_4color(&punct)?.ok_or_else(|| {
                HarnessError::ScenarioPreconditionFailed("oracle found no coloring of the punctured graph".into())
            })?;
            vertex_to_edge(&punct, &vc).expect("oracle colorings are proper")
        }
    };
    let degree = t.degree(v);
    let run = match degree {
        0..=3 => {
            let vc = edge_to_vertex(&punct, &ec, VertexId(0), VertexColor::C1)
                .map_err(ReductionError::from)?;
            let extended = reduce_low_degree(t, v, &vc)?;
            let trace = MoveTrace {
                initial_fingerprint: ec.fingerprint(),
                moves: vec![],
                outcome: Outcome::Reduced,
                visited_states: 1,
                pointer_history: vec![],
            };
            return Ok(ReduceAtResult {
                punctured: punct,
                initial: ec.clone(),
                trace,
                final_coloring: ec,
                extended: Some(extended),
            });
        }
        4 => {
            let red = reduce_degree4(t, v, &ec)?;
            let final_coloring = red
                .trace
                .moves
                .iter()
                .try_fold(ec.clone(), |acc, mv| crate::reduction::apply_move(&punct, &acc, mv))?;
            return Ok(ReduceAtResult {
                punctured: punct,
                initial: ec,
                trace: red.trace,
                final_coloring,
                extended: Some(red.coloring),
            });
        }
        5 => match strategy {
            Strategy::Guided | Strategy::Both => attempt_reduction_guided(&punct, &ec, budget)?,
            Strategy::Bfs => attempt_reduction_exhaustive(&punct, &ec, depth_limit)?,
        },
        d => {
            return Err(HarnessError::Triangulation(TriangulationError::DegreeTooHigh {
                vertex: v.0,
                degree: d,
            }))
        }
    };
    let extended = if run.trace.outcome == Outcome::Reduced {
        let vc = edge_to_vertex(&punct, &run.final_coloring, VertexId(0), VertexColor::C1)
            .map_err(ReductionError::from)?;
        Some(extend_to_center(t, v, &vc)?)
    } else {
        None
    };
    Ok(ReduceAtResult {
        punctured: punct,
        initial: ec,
        trace: run.trace,
        final_coloring: run.final_coloring,
        extended,
    })
}

/// Outcome of a named corpus scenario replay.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "scenario", rename_all = "snake_case")]
pub enum ScenarioReport {
    ErreraThreeSwaps {
        vertex: usize,
        colorings_searched: usize,
        bfs_outcome: TrialOutcome,
        bfs_moves: usize,
        guided_outcome: TrialOutcome,
        guided_moves: usize,
        passed: bool,
    },
    TutteDualKnob {
        colorings_searched: usize,
        knob_count: usize,
        partitions_ok: bool,
        passed: bool,
    },
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        match self {
            ScenarioReport::ErreraThreeSwaps { passed, .. } => *passed,
            ScenarioReport::TutteDualKnob { passed, .. } => *passed,
        }
    }
}

pub const SCENARIO_NAMES: [&str; 2] = ["errera_three_swaps", "tutte_dual_knob"];

/// Replays a named corpus scenario.
///
/// `errera_three_swaps` punctures the Errera graph at its first degree-5
/// vertex, locates the first enumerated coloring whose pentagon is blocked,
/// and requires the exhaustive search to reduce it within three moves.
/// `tutte_dual_knob` colors the Tutte-graph dual, checks the channel
/// partition for all three pairs, and requires a monochromatic-cycle knob
/// to exist (searching the enumeration until one appears).
pub fn replay_scenario(name: &str) -> Result<ScenarioReport, HarnessError> {
    match name {
        "errera_three_swaps" => {
            let t = corpus_graph("errera")?;
            let v = t
                .vertices()
                .find(|&v| t.degree(v) == 5)
                .expect("errera has degree-5 vertices");
            let punct = t.puncture(v)?;
            let mut searched = 0usize;
            let mut blocked: Option<TaitColoring> = None;
            for_each_coloring(&punct, |vc| {
                searched += 1;
                let ec = vertex_to_edge(&punct, vc).expect("proper");
                if classify_wheel(&punct, &ec).map(|w| w.class).ok() == Some(WheelClass::BlockedAabac) {
                    blocked = Some(ec);
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            });
            let ec = blocked.ok_or_else(|| {
                HarnessError::ScenarioPreconditionFailed(
                    "no blocked pentagon coloring found on the punctured Errera graph".into(),
                )
            })?;
            let bfs = attempt_reduction_exhaustive(&punct, &ec, crate::reduction::DEFAULT_DEPTH_LIMIT)?;
            let guided = attempt_reduction_guided(&punct, &ec, 16)?;
            let passed = bfs.trace.outcome == Outcome::Reduced && bfs.trace.moves.len() <= 3;
            Ok(ScenarioReport::ErreraThreeSwaps {
                vertex: v.0,
                colorings_searched: searched,
                bfs_outcome: bfs.trace.outcome.into(),
                bfs_moves: bfs.trace.moves.len(),
                guided_outcome: guided.trace.outcome.into(),
                guided_moves: guided.trace.moves.len(),
                passed,
            })
        }
        "tutte_dual_knob" => {
            let t = corpus_graph("tutte_dual")?;
            const SEARCH_CAP: usize = 200_000;
            let mut searched = 0usize;
            let mut found: Option<(TaitColoring, usize)> = None;
            for_each_coloring(&t, |vc| {
                searched += 1;
                let ec = vertex_to_edge(&t, vc).expect("proper");
                let knobs: usize = EdgeColor::ALL.iter().map(|&c| find_knobs(&t, &ec, c).len()).sum();
                if knobs > 0 {
                    found = Some((ec, knobs));
                    ControlFlow::Break(())
                } else if searched >= SEARCH_CAP {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            });
            let (ec, knob_count) = found.ok_or_else(|| {
                HarnessError::ScenarioPreconditionFailed(format!(
                    "no coloring with a knob among the first {searched} oracle colorings"
                ))
            })?;
            let mut partitions_ok = true;
            for pair in ChannelPair::ALL {
                let mut covered = vec![0usize; t.face_count()];
                for ch in all_channels(&t, &ec, pair) {
                    for f in &ch.triangles {
                        covered[f.0] += 1;
                    }
                }
                partitions_ok &= t.triangles().all(|f| covered[f.0] == 1);
            }
            Ok(ScenarioReport::TutteDualKnob {
                colorings_searched: searched,
                knob_count,
                partitions_ok,
                passed: knob_count >= 1 && partitions_ok,
            })
        }
        other => Err(HarnessError::UnknownScenario(other.to_string())),
    }
}

/// File-level verification report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    /// Edges with equal endpoint colors (vertex colorings only).
    pub properness_violations: Vec<(usize, usize)>,
    /// Triangles missing an edge color.
    pub tait_violations: Vec<usize>,
    pub trails_sampled: usize,
    pub parity_violations: usize,
    /// Interior vertices whose orientation sum is nonzero.
    pub wheel_violations: Vec<usize>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.properness_violations.is_empty()
            && self.tait_violations.is_empty()
            && self.parity_violations == 0
            && self.wheel_violations.is_empty()
    }
}

/// Verifies a parsed coloring against its graph: the all-three-colors rule,
/// the same-parity law on sampled closed trails, and the wheel sum at every
/// interior vertex.
pub fn verify_coloring(t: &Triangulation, coloring: &ColoringFile, samples: usize, seed: u64) -> VerifyReport {
    let mut report = VerifyReport {
        properness_violations: vec![],
        tait_violations: vec![],
        trails_sampled: 0,
        parity_violations: 0,
        wheel_violations: vec![],
    };
    let ec = match coloring {
        ColoringFile::Tait(ec) => ec.clone(),
        ColoringFile::Vertex(vc) => {
            report.properness_violations = vc
                .properness_violations(t)
                .into_iter()
                .map(|e| {
                    let (u, v) = t.endpoints(e);
                    (u.0, v.0)
                })
                .collect();
            if !report.properness_violations.is_empty() {
                return report;
            }
            vertex_to_edge(t, vc).expect("proper coloring converts")
        }
    };
    report.tait_violations = validate_tait(t, &ec).into_iter().map(|f| f.0).collect();
    if !report.tait_violations.is_empty() {
        // Parity and wheel checks presuppose a valid Tait coloring; the
        // violations above already fail the file.
        return report;
    }
    let trails = sample_closed_trails(t, seed, samples, samples.saturating_mul(20).max(64));
    report.trails_sampled = trails.len();
    for trail in &trails {
        if check_closed_trail(trail, &ec).is_err() {
            report.parity_violations += 1;
        }
    }
    for v in t.vertices() {
        if t.is_hole_vertex(v) {
            continue;
        }
        if !wheel_sum(t, &ec, v).expect("interior vertex").is_zero() {
            report.wheel_violations.push(v.0);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg(strategy: Strategy, degree: usize) -> FuzzConfig {
        FuzzConfig {
            trials: 12,
            n_min: 10,
            n_max: 24,
            seed: 7,
            strategy,
            budget: 24,
            depth_limit: 8,
            degree,
        }
    }

    #[test]
    fn fuzz_is_deterministic_modulo_timestamps() {
        let cfg = small_cfg(Strategy::Both, 5);
        let mut a = fuzz_reduction(&cfg);
        let mut b = fuzz_reduction(&cfg);
        a.strip_volatile();
        b.strip_volatile();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn aggregates_match_trials() {
        let report = fuzz_reduction(&small_cfg(Strategy::Both, 5));
        assert_eq!(report.aggregates, Aggregates::from_trials(&report.trials));
        assert_eq!(
            report.aggregates.completed + report.aggregates.skipped,
            report.trials.len()
        );
    }

    #[test]
    fn degree5_trials_reduce_and_verify() {
        let report = fuzz_reduction(&small_cfg(Strategy::Both, 5));
        assert!(report.aggregates.completed > 0);
        assert_eq!(report.aggregates.bfs.reduced, report.aggregates.completed);
        assert_eq!(report.aggregates.guided_vs_bfs_violations, 0);
        assert_eq!(report.aggregates.failures, 0);
        for rec in &report.trials {
            if !rec.skipped {
                assert_eq!(rec.extended_ok, Some(true), "trial {}", rec.trial);
                assert_eq!(rec.replay_ok, Some(true), "trial {}", rec.trial);
            }
        }
    }

    #[test]
    fn degree4_trials_reduce_with_at_most_one_swap() {
        let report = fuzz_reduction(&small_cfg(Strategy::Guided, 4));
        assert!(report.aggregates.completed > 0);
        for rec in &report.trials {
            if let Some(s) = &rec.guided {
                assert_eq!(s.outcome, TrialOutcome::Reduced);
                assert!(s.moves <= 1);
            }
        }
    }

    #[test]
    fn errera_scenario_reduces_in_three() {
        let report = replay_scenario("errera_three_swaps").unwrap();
        match report {
            ScenarioReport::ErreraThreeSwaps {
                bfs_outcome,
                bfs_moves,
                passed,
                ..
            } => {
                assert_eq!(bfs_outcome, TrialOutcome::Reduced);
                assert!(bfs_moves <= 3, "needed {bfs_moves} moves");
                assert!(passed);
            }
            _ => panic!("wrong scenario variant"),
        }
    }

    #[test]
    fn tutte_scenario_finds_knob_and_partitions() {
        let report = replay_scenario("tutte_dual_knob").unwrap();
        match report {
            ScenarioReport::TutteDualKnob {
                knob_count,
                partitions_ok,
                passed,
                ..
            } => {
                assert!(knob_count >= 1);
                assert!(partitions_ok);
                assert!(passed);
            }
            _ => panic!("wrong scenario variant"),
        }
    }

    #[test]
    fn unknown_scenario_rejected() {
        assert!(matches!(
            replay_scenario("heawood"),
            Err(HarnessError::UnknownScenario(_))
        ));
    }

    #[test]
    fn verify_accepts_good_and_flags_corrupt() {
        let t = corpus_graph("icosahedron").unwrap();
        let vc = brute_force_4color(&t).unwrap().unwrap();
        let ec = vertex_to_edge(&t, &vc).unwrap();
        let good = verify_coloring(&t, &ColoringFile::Tait(ec.clone()), 50, 3);
        assert!(good.ok());
        assert!(good.trails_sampled > 0);

        let mut bad = ec.clone();
        let first = crate::triangulation::EdgeId(0);
        let c = bad.color(first);
        bad.set_color(first, c.third(EdgeColor::ALL.into_iter().find(|&x| x != c).unwrap()));
        let report = verify_coloring(&t, &ColoringFile::Tait(bad), 50, 3);
        assert!(!report.ok());
        assert!(!report.tait_violations.is_empty());
    }

    #[test]
    fn trial_seeds_are_spread() {
        let a = trial_seed(1, 0);
        let b = trial_seed(1, 1);
        let c = trial_seed(2, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
    }
}
