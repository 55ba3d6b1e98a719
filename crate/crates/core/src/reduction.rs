//! Wheel reduction: extending a coloring of a punctured triangulation back
//! over the deleted low-degree vertex.
//!
//! Deleting a degree-5 vertex leaves a pentagon hole whose edge pattern, on
//! any valid coloring, has color counts {3,1,1} (the same-parity law forces
//! all three counts odd).  Up to rotation the pattern is either `aaabc`,
//! where the link uses three vertex colors and the center extends directly,
//! or `aabac`, where the link uses all four.  The reduction machinery tries to
//! convert the second form into the first with open-channel swaps anchored
//! at hole edges, knob rotations, and global color swaps, either following
//! the strategy loop (`attempt_reduction_guided`) or by breadth-first search
//! over the whole move graph (`attempt_reduction_exhaustive`), which serves
//! as ground truth.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channels::{find_channel, swap_channel, Channel, ChannelError, ChannelPair, ChannelStart};
use crate::coloring::{edge_to_vertex, validate_tait, ColoringError, EdgeColor, TaitColoring, VertexColor, VertexColoring};
use crate::knobs::{find_knobs, rotate_knob, Knob, KnobError};
use crate::triangulation::{EdgeId, Triangulation, TriangulationError, VertexId};

/// Cap on distinct colorings the exhaustive search may discover.
pub const VISITED_CAP: usize = 1_000_000;

/// Default depth limit for the exhaustive search.
pub const DEFAULT_DEPTH_LIMIT: usize = 8;

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("hole has {got} edges; wheel classification needs 4 or 5")]
    BadHoleSize { got: usize },
    #[error("hole pattern is not a valid wheel pattern: {0}")]
    InvalidPattern(String),
    #[error("vertex {vertex} has degree {degree}, expected {want}")]
    WrongDegree { vertex: usize, degree: usize, want: usize },
    #[error("link of vertex {vertex} uses all four colors; reduce before extending")]
    NoFreeColor { vertex: usize },
    #[error("degree-4 reduction failed: {0}")]
    ReductionFailed(String),
    #[error("search truncated after visiting {visited} states at depth {depth}")]
    DepthLimit { visited: usize, depth: usize },
    #[error("move cannot be applied: {0}")]
    BadMove(String),
    #[error("trace does not match: {0}")]
    TraceMismatch(String),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
}

impl From<ChannelError> for ReductionError {
    fn from(e: ChannelError) -> Self {
        ReductionError::BadMove(e.to_string())
    }
}

impl From<KnobError> for ReductionError {
    fn from(e: KnobError) -> Self {
        ReductionError::BadMove(e.to_string())
    }
}

/// Classification of the hole pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WheelClass {
    /// Pentagon with three consecutive dominant edges; center colorable.
    ReducibleAaabc,
    /// Pentagon whose link uses all four vertex colors.
    BlockedAabac,
    /// Square whose link uses at most three vertex colors.
    SquareReducible,
    /// Square with alternating colors; link uses all four vertex colors.
    SquareBlockedAbab,
}

impl WheelClass {
    pub fn is_reducible(self) -> bool {
        matches!(self, WheelClass::ReducibleAaabc | WheelClass::SquareReducible)
    }
}

/// The color pattern of the hole edges around a deleted vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WheelState {
    /// Hole edges in trace order.
    pub hole_edges: Vec<EdgeId>,
    /// Their colors, in the same order.
    pub pattern: Vec<EdgeColor>,
    pub class: WheelClass,
    /// Rotation index aligning the canonical template on the pattern; for a
    /// pentagon this is where the dominant run (`aaabc`) or the dominant
    /// pair (`aabac`) starts.
    pub pointer: usize,
    /// The most frequent hole color (ties go to the smaller color).
    pub dominant: EdgeColor,
}

/// Classifies a bare pattern; exposed for rotation-covariance tests.
pub(crate) fn classify_pattern(pattern: &[EdgeColor]) -> Result<(WheelClass, usize, EdgeColor), ReductionError> {
    let k = pattern.len();
    let count_of = |c: EdgeColor| pattern.iter().filter(|&&x| x == c).count();
    let counts: Vec<(EdgeColor, usize)> = EdgeColor::ALL.iter().map(|&c| (c, count_of(c))).collect();
    let dominant = counts
        .iter()
        .max_by_key(|&&(c, n)| (n, std::cmp::Reverse(c)))
        .map(|&(c, _)| c)
        .expect("three colors");
    match k {
        5 => {
            // The same-parity law forces counts {3,1,1} on valid colorings.
            let mut ns: Vec<usize> = counts.iter().map(|&(_, n)| n).collect();
            ns.sort_unstable();
            if ns != [1, 1, 3] {
                return Err(ReductionError::InvalidPattern(format!(
                    "pentagon counts {ns:?} violate the same-parity law"
                )));
            }
            let run3 = (0..5).find(|&p| (0..3).all(|i| pattern[(p + i) % 5] == dominant));
            if let Some(p) = run3 {
                return Ok((WheelClass::ReducibleAaabc, p, dominant));
            }
            let p = (0..5)
                .find(|&p| {
                    pattern[p] == dominant && pattern[(p + 1) % 5] == dominant && pattern[(p + 3) % 5] == dominant
                })
                .expect("non-run {3,1,1} pentagon aligns as aabac");
            Ok((WheelClass::BlockedAabac, p, dominant))
        }
        4 => {
            let mut ns: Vec<usize> = counts.iter().map(|&(_, n)| n).collect();
            ns.sort_unstable();
            match ns.as_slice() {
                [0, 0, 4] => Ok((WheelClass::SquareReducible, 0, dominant)),
                [0, 2, 2] => {
                    if pattern[0] == pattern[2] {
                        // Alternating: both diagonals monochromatic.
                        debug_assert_eq!(pattern[1], pattern[3]);
                        Ok((WheelClass::SquareBlockedAbab, 0, dominant))
                    } else {
                        Ok((WheelClass::SquareReducible, 0, dominant))
                    }
                }
                other => Err(ReductionError::InvalidPattern(format!(
                    "square counts {other:?} violate the same-parity law"
                ))),
            }
        }
        got => Err(ReductionError::BadHoleSize { got }),
    }
}

/// Reads the hole pattern of a punctured triangulation and classifies it.
pub fn classify_wheel(t: &Triangulation, ec: &TaitColoring) -> Result<WheelState, ReductionError> {
    let hole_edges: Vec<EdgeId> = t
        .hole_edges()
        .ok_or(ReductionError::BadHoleSize { got: 0 })?
        .iter()
        .map(|&e| EdgeId(e))
        .collect();
    let pattern: Vec<EdgeColor> = hole_edges.iter().map(|&e| ec.color(e)).collect();
    let (class, pointer, dominant) = classify_pattern(&pattern)?;
    Ok(WheelState {
        hole_edges,
        pattern,
        class,
        pointer,
        dominant,
    })
}

/// One reduction move, stored graph-relative (vertex ids, not handles) so
/// traces replay against re-parsed graphs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Move {
    /// Swap an open channel anchored at the hole edge `start`.
    #[serde(rename = "swap")]
    ChannelSwap { pair: ChannelPair, start: (usize, usize) },
    /// Rotate the knob of `color` with the given canonical cycle.
    #[serde(rename = "knob")]
    KnobRotate { color: EdgeColor, cycle: Vec<usize> },
    /// Swap two colors on every edge of the graph.
    #[serde(rename = "global")]
    GlobalSwap(ChannelPair),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Reduced,
    Cycled,
    Exhausted,
}

mod hex_u64 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{v:016x}"))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        let s = String::deserialize(d)?;
        u64::from_str_radix(&s, 16).map_err(serde::de::Error::custom)
    }
}

/// A reproducible record of one reduction attempt.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveTrace {
    #[serde(with = "hex_u64")]
    pub initial_fingerprint: u64,
    pub moves: Vec<Move>,
    pub outcome: Outcome,
    pub visited_states: u64,
    /// Wheel pointer after each committed move, starting with the initial
    /// state.
    pub pointer_history: Vec<usize>,
}

/// A trace together with the coloring it ends on.
#[derive(Debug, Clone)]
pub struct ReductionRun {
    pub trace: MoveTrace,
    pub final_coloring: TaitColoring,
}

/// Applies one move, validating the result.
pub fn apply_move(t: &Triangulation, ec: &TaitColoring, mv: &Move) -> Result<TaitColoring, ReductionError> {
    let out = match mv {
        Move::ChannelSwap { pair, start } => {
            let e = t
                .edge_between(VertexId(start.0), VertexId(start.1))
                .ok_or_else(|| ReductionError::BadMove(format!("({}, {}) is not an edge", start.0, start.1)))?;
            let ch = find_channel(t, ec, ChannelStart::HoleEdge(e), *pair)?;
            swap_channel(t, ec, &ch)?
        }
        Move::KnobRotate { color, cycle } => {
            let knob = find_knobs(t, ec, *color)
                .into_iter()
                .find(|k| k.cycle_vertices == *cycle)
                .ok_or_else(|| ReductionError::BadMove(format!("no {color}-knob with cycle {cycle:?}")))?;
            rotate_knob(t, ec, &knob)?
        }
        Move::GlobalSwap(pair) => ec.global_swap(*pair),
    };
    let bad = validate_tait(t, &out);
    if !bad.is_empty() {
        return Err(ReductionError::BadMove(format!(
            "move broke {} triangles, first {}",
            bad.len(),
            bad[0]
        )));
    }
    Ok(out)
}

/// Extends a coloring of the punctured graph over the deleted vertex `v`,
/// which gets the smallest color absent from its link.
///
/// `vc` is indexed by the punctured graph's ids (ids above `v` shifted down
/// by one, matching [`Triangulation::puncture`]).
pub fn extend_to_center(
    t: &Triangulation,
    v: VertexId,
    vc: &VertexColoring,
) -> Result<VertexColoring, ReductionError> {
    let shift = |u: usize| if u > v.0 { u - 1 } else { u };
    let mut used = [false; 4];
    for &u in t.neighbors(v) {
        used[(vc.color(VertexId(shift(u))).number() - 1) as usize] = true;
    }
    let free = VertexColor::ALL
        .into_iter()
        .find(|c| !used[(c.number() - 1) as usize])
        .ok_or(ReductionError::NoFreeColor { vertex: v.0 })?;
    let n = t.vertex_count();
    let mut colors = Vec::with_capacity(n);
    for u in 0..n {
        if u == v.0 {
            colors.push(free);
        } else {
            colors.push(vc.color(VertexId(shift(u))));
        }
    }
    let out = VertexColoring::new(colors);
    debug_assert!(out.is_proper(t));
    Ok(out)
}

/// Degree at most 3: at most three link colors, so extension always works.
pub fn reduce_low_degree(
    t: &Triangulation,
    v: VertexId,
    vc: &VertexColoring,
) -> Result<VertexColoring, ReductionError> {
    let degree = t.degree(v);
    if degree > 3 {
        return Err(ReductionError::WrongDegree {
            vertex: v.0,
            degree,
            want: 3,
        });
    }
    extend_to_center(t, v, vc)
}

/// Result of a degree-4 reduction: the extended coloring of the original
/// graph plus the (at most one-swap) trace that made it possible.
#[derive(Debug, Clone)]
pub struct Degree4Reduction {
    pub coloring: VertexColoring,
    pub trace: MoveTrace,
}

/// Reduces a degree-4 vertex: extend directly when the square hole uses at
/// most three vertex colors; otherwise one open-channel swap anchored at
/// the first hole edge turns the alternating square into an extendable one.
pub fn reduce_degree4(
    t: &Triangulation,
    v: VertexId,
    ec: &TaitColoring,
) -> Result<Degree4Reduction, ReductionError> {
    let degree = t.degree(v);
    if degree != 4 {
        return Err(ReductionError::WrongDegree {
            vertex: v.0,
            degree,
            want: 4,
        });
    }
    let punct = t.puncture(v)?;
    let ws = classify_wheel(&punct, ec)?;
    let mut moves = Vec::new();
    let mut pointer_history = vec![ws.pointer];
    let initial_fingerprint = ec.fingerprint();
    let final_ec = match ws.class {
        WheelClass::SquareReducible => ec.clone(),
        WheelClass::SquareBlockedAbab => {
            let pair = ChannelPair::from_colors(ws.pattern[0], ws.pattern[1])
                .expect("alternating square has two distinct colors");
            let start_edge = ws.hole_edges[0];
            let (a, b) = punct.endpoints(start_edge);
            let mv = Move::ChannelSwap {
                pair,
                start: (a.0, b.0),
            };
            let swapped = apply_move(&punct, ec, &mv)?;
            let after = classify_wheel(&punct, &swapped)?;
            if after.class != WheelClass::SquareReducible {
                return Err(ReductionError::ReductionFailed(format!(
                    "square still blocked after one swap: pattern {:?}",
                    after.pattern
                )));
            }
            moves.push(mv);
            pointer_history.push(after.pointer);
            swapped
        }
        other => {
            return Err(ReductionError::InvalidPattern(format!(
                "degree-4 hole classified as {other:?}"
            )))
        }
    };
    let vc = edge_to_vertex(&punct, &final_ec, VertexId(0), VertexColor::C1)?;
    let coloring = extend_to_center(t, v, &vc)?;
    Ok(Degree4Reduction {
        coloring,
        trace: MoveTrace {
            initial_fingerprint,
            moves,
            outcome: Outcome::Reduced,
            visited_states: 1 + pointer_history.len() as u64 - 1,
            pointer_history,
        },
    })
}

/// Open-channel swap moves anchored at hole edges, one per distinct channel,
/// in (pair, hole-trace-order) order.  `pairs` selects which color pairs to
/// consider.
fn hole_swap_moves(
    t: &Triangulation,
    ec: &TaitColoring,
    pairs: &[ChannelPair],
) -> Result<Vec<(Move, Channel)>, ReductionError> {
    let hole_edges: Vec<EdgeId> = t
        .hole_edges()
        .ok_or(ReductionError::BadHoleSize { got: 0 })?
        .iter()
        .map(|&e| EdgeId(e))
        .collect();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for &pair in pairs {
        for &e in &hole_edges {
            if !pair.contains(ec.color(e)) {
                continue;
            }
            let ch = find_channel(t, ec, ChannelStart::HoleEdge(e), pair)?;
            if !seen.insert(ch.identity()) {
                continue;
            }
            let (a, b) = t.endpoints(e);
            out.push((
                Move::ChannelSwap {
                    pair,
                    start: (a.0, b.0),
                },
                ch,
            ));
        }
    }
    Ok(out)
}

/// All knobs of all three colors, innermost first (fewest interior faces),
/// then by cycle length and canonical cycle.
fn all_knobs_sorted(t: &Triangulation, ec: &TaitColoring) -> Vec<Knob> {
    let mut knobs: Vec<Knob> = EdgeColor::ALL
        .into_iter()
        .flat_map(|c| find_knobs(t, ec, c))
        .collect();
    knobs.sort_by(|a, b| {
        a.interior_faces
            .len()
            .cmp(&b.interior_faces.len())
            .then_with(|| a.cycle_len().cmp(&b.cycle_len()))
            .then_with(|| a.cycle_vertices.cmp(&b.cycle_vertices))
            .then_with(|| a.color.cmp(&b.color))
    });
    knobs
}

fn knob_move(k: &Knob) -> Move {
    Move::KnobRotate {
        color: k.color,
        cycle: k.cycle_vertices.clone(),
    }
}

#[allow(clippy::too_many_arguments)]
fn commit_move(
    t: &Triangulation,
    mv: Move,
    next: TaitColoring,
    moves: &mut Vec<Move>,
    ec: &mut TaitColoring,
    visited: &mut HashSet<Vec<u8>>,
    pointer_history: &mut Vec<usize>,
) -> Result<(), ReductionError> {
    moves.push(mv);
    *ec = next;
    visited.insert(ec.pack());
    pointer_history.push(classify_wheel(t, ec)?.pointer);
    Ok(())
}

/// The strategy loop for a blocked pentagon.
///
/// Each iteration first probes single open-channel swaps on the two pairs
/// containing the dominant color, then ordered pairs of such swaps.  If
/// neither reaches a reducible pattern it commits an escape move and
/// iterates: the innermost knob rotation leading to an unseen coloring,
/// else any unseen hole-anchored swap, else an unseen global swap.  The run
/// ends `reduced`, `cycled` (every successor already seen) or `exhausted`
/// (budget spent).
pub fn attempt_reduction_guided(
    t: &Triangulation,
    ec0: &TaitColoring,
    budget: usize,
) -> Result<ReductionRun, ReductionError> {
    let mut ec = ec0.clone();
    let mut visited: HashSet<Vec<u8>> = HashSet::new();
    visited.insert(ec.pack());
    let mut moves: Vec<Move> = Vec::new();
    let mut pointer_history = vec![classify_wheel(t, &ec)?.pointer];

    let dominant_pairs = |ws: &WheelState| -> Vec<ChannelPair> {
        EdgeColor::ALL
            .into_iter()
            .filter(|&c| c != ws.dominant)
            .map(|c| ChannelPair::from_colors(ws.dominant, c).expect("distinct colors"))
            .collect()
    };

    let outcome = loop {
        let ws = classify_wheel(t, &ec)?;
        if ws.class.is_reducible() {
            break Outcome::Reduced;
        }
        if moves.len() >= budget {
            break Outcome::Exhausted;
        }

        // Friendly: one swap on a dominant pair lands a reducible pattern.
        let cands = hole_swap_moves(t, &ec, &dominant_pairs(&ws))?;
        let mut advanced = false;
        for (mv, ch) in &cands {
            let next = swap_channel(t, &ec, ch)?;
            if classify_wheel(t, &next)?.class.is_reducible() {
                commit_move(t, mv.clone(), next, &mut moves, &mut ec, &mut visited, &mut pointer_history)?;
                advanced = true;
                break;
            }
        }
        if advanced {
            continue;
        }

        // Sub-friendly: an ordered pair of dominant-pair swaps.
        if moves.len() + 2 <= budget {
            'pairs: for (mv1, ch1) in &cands {
                let mid = swap_channel(t, &ec, ch1)?;
                let ws1 = classify_wheel(t, &mid)?;
                for (mv2, ch2) in hole_swap_moves(t, &mid, &dominant_pairs(&ws1))? {
                    let next = swap_channel(t, &mid, &ch2)?;
                    if classify_wheel(t, &next)?.class.is_reducible() {
                        commit_move(t, mv1.clone(), mid, &mut moves, &mut ec, &mut visited, &mut pointer_history)?;
                        commit_move(t, mv2, next, &mut moves, &mut ec, &mut visited, &mut pointer_history)?;
                        advanced = true;
                        break 'pairs;
                    }
                }
            }
        }
        if advanced {
            continue;
        }

        // Unfriendly: escape through a knob, then any unseen swap, then a
        // global swap; a state where everything is already seen has cycled.
        let mut escape: Option<(Move, TaitColoring)> = None;
        for knob in all_knobs_sorted(t, &ec) {
            let next = rotate_knob(t, &ec, &knob)?;
            if !visited.contains(&next.pack()) {
                escape = Some((knob_move(&knob), next));
                break;
            }
        }
        if escape.is_none() {
            for (mv, ch) in hole_swap_moves(t, &ec, &ChannelPair::ALL)? {
                let next = swap_channel(t, &ec, &ch)?;
                if !visited.contains(&next.pack()) {
                    escape = Some((mv, next));
                    break;
                }
            }
        }
        if escape.is_none() {
            for pair in ChannelPair::ALL {
                let next = ec.global_swap(pair);
                if !visited.contains(&next.pack()) {
                    escape = Some((Move::GlobalSwap(pair), next));
                    break;
                }
            }
        }
        match escape {
            Some((mv, next)) => commit_move(t, mv, next, &mut moves, &mut ec, &mut visited, &mut pointer_history)?,
            None => break Outcome::Cycled,
        }
    };

    Ok(ReductionRun {
        trace: MoveTrace {
            initial_fingerprint: ec0.fingerprint(),
            moves,
            outcome,
            visited_states: visited.len() as u64,
            pointer_history,
        },
        final_coloring: ec,
    })
}

/// Every legal move from one state: hole-anchored channel swaps for all
/// three pairs, all minimal knob rotations, and the three global swaps.
fn all_moves(t: &Triangulation, ec: &TaitColoring) -> Result<Vec<(Move, TaitColoring)>, ReductionError> {
    let mut out = Vec::new();
    for (mv, ch) in hole_swap_moves(t, ec, &ChannelPair::ALL)? {
        out.push((mv, swap_channel(t, ec, &ch)?));
    }
    for knob in all_knobs_sorted(t, ec) {
        out.push((knob_move(&knob), rotate_knob(t, ec, &knob)?));
    }
    for pair in ChannelPair::ALL {
        out.push((Move::GlobalSwap(pair), ec.global_swap(pair)));
    }
    Ok(out)
}

/// Breadth-first search over the move graph; finds a shortest move sequence
/// to a reducible pattern, or proves none is reachable (`exhausted`).
/// Exceeding `depth_limit` or [`VISITED_CAP`] with frontier remaining is a
/// [`ReductionError::DepthLimit`], reported rather than silently truncated.
pub fn attempt_reduction_exhaustive(
    t: &Triangulation,
    ec0: &TaitColoring,
    depth_limit: usize,
) -> Result<ReductionRun, ReductionError> {
    struct Rec {
        packed: Vec<u8>,
        parent: usize,
        mv: Option<Move>,
        depth: usize,
    }
    let edge_count = t.edge_count();
    let unpack = |bytes: &[u8]| {
        let colors = (0..edge_count)
            .map(|i| {
                let code = (bytes[i / 4] >> (2 * (i % 4))) & 0b11;
                EdgeColor::from_code(code).expect("packed colorings are valid")
            })
            .collect();
        TaitColoring::new(colors)
    };
    let finish = |states: &[Rec], idx: usize, visited: usize| -> ReductionRun {
        let mut moves = Vec::new();
        let mut cur = idx;
        while cur != usize::MAX {
            match &states[cur].mv {
                Some(mv) => {
                    moves.push(mv.clone());
                    cur = states[cur].parent;
                }
                None => break,
            }
        }
        moves.reverse();
        // Recompute the pointer history along the shortest path.
        let mut ec = ec0.clone();
        let mut pointer_history = vec![classify_wheel(t, &ec).expect("classified at entry").pointer];
        for mv in &moves {
            ec = apply_move(t, &ec, mv).expect("BFS moves replay");
            pointer_history.push(classify_wheel(t, &ec).expect("valid coloring").pointer);
        }
        ReductionRun {
            trace: MoveTrace {
                initial_fingerprint: ec0.fingerprint(),
                moves,
                outcome: Outcome::Reduced,
                visited_states: visited as u64,
                pointer_history,
            },
            final_coloring: ec,
        }
    };

    if classify_wheel(t, ec0)?.class.is_reducible() {
        return Ok(finish(&[], usize::MAX, 1));
    }

    let mut states: Vec<Rec> = vec![Rec {
        packed: ec0.pack(),
        parent: usize::MAX,
        mv: None,
        depth: 0,
    }];
    let mut seen: HashMap<Vec<u8>, usize> = HashMap::from([(ec0.pack(), 0)]);
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    let mut truncated = false;
    while let Some(idx) = queue.pop_front() {
        let depth = states[idx].depth;
        let ec = unpack(&states[idx].packed);
        for (mv, next) in all_moves(t, &ec)? {
            let packed = next.pack();
            if seen.contains_key(&packed) {
                continue;
            }
            if depth >= depth_limit {
                // A state beyond the horizon exists; reachability beyond the
                // limit is unknown.
                truncated = true;
                continue;
            }
            if states.len() >= VISITED_CAP {
                return Err(ReductionError::DepthLimit {
                    visited: states.len(),
                    depth,
                });
            }
            let new_idx = states.len();
            seen.insert(packed.clone(), new_idx);
            states.push(Rec {
                packed,
                parent: idx,
                mv: Some(mv),
                depth: depth + 1,
            });
            if classify_wheel(t, &next)?.class.is_reducible() {
                return Ok(finish(&states, new_idx, states.len()));
            }
            queue.push_back(new_idx);
        }
    }
    if truncated {
        return Err(ReductionError::DepthLimit {
            visited: states.len(),
            depth: depth_limit,
        });
    }
    let final_coloring = unpack(&states[0].packed);
    Ok(ReductionRun {
        trace: MoveTrace {
            initial_fingerprint: ec0.fingerprint(),
            moves: Vec::new(),
            outcome: Outcome::Exhausted,
            visited_states: states.len() as u64,
            pointer_history: vec![classify_wheel(t, &final_coloring)?.pointer],
        },
        final_coloring,
    })
}

/// Re-applies a trace's moves to its initial coloring, checking the
/// fingerprint, validating every intermediate coloring, and verifying that
/// the recorded outcome matches what replaying produces.
pub fn replay_trace(
    t: &Triangulation,
    initial: &TaitColoring,
    trace: &MoveTrace,
) -> Result<ReductionRun, ReductionError> {
    if initial.fingerprint() != trace.initial_fingerprint {
        return Err(ReductionError::TraceMismatch(format!(
            "initial fingerprint {:016x} does not match trace {:016x}",
            initial.fingerprint(),
            trace.initial_fingerprint
        )));
    }
    let mut ec = initial.clone();
    let mut pointer_history = vec![classify_wheel(t, &ec)?.pointer];
    for mv in &trace.moves {
        ec = apply_move(t, &ec, mv)?;
        pointer_history.push(classify_wheel(t, &ec)?.pointer);
    }
    let reduced = classify_wheel(t, &ec)?.class.is_reducible();
    let expect_reduced = trace.outcome == Outcome::Reduced;
    if reduced != expect_reduced {
        return Err(ReductionError::TraceMismatch(format!(
            "trace outcome {:?} but final state reducible = {reduced}",
            trace.outcome
        )));
    }
    if pointer_history != trace.pointer_history {
        return Err(ReductionError::TraceMismatch(
            "pointer history diverged on replay".to_string(),
        ));
    }
    Ok(ReductionRun {
        trace: trace.clone(),
        final_coloring: ec,
    })
}
