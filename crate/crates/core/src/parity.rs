//! Trail parity bookkeeping and the wheel orientation sum.
//!
//! For a trail (a walk without repeated edges) the per-color edge counts are
//! tracked modulo 2.  On a valid Tait coloring every *closed* trail has all
//! three parities equal; a violation is a reliable sign of a corrupted
//! coloring and is used as a runtime integrity check.  Around any interior
//! vertex the triangle orientations sum to zero modulo 3.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{face_orientation, EdgeColor, TaitColoring};
use crate::triangulation::{EdgeId, FaceId, Triangulation, VertexId};

/// Parity of a count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Par {
    Even,
    Odd,
}

impl Par {
    pub fn of(count: usize) -> Par {
        if count.is_multiple_of(2) {
            Par::Even
        } else {
            Par::Odd
        }
    }

    pub fn plus(self, other: Par) -> Par {
        if self == other {
            Par::Even
        } else {
            Par::Odd
        }
    }
}

/// Per-color parities `(A, B, C)` of a trail's edge counts.
///
/// Composition is componentwise parity addition; the identity is
/// `(even, even, even)` and every element is its own inverse, so the
/// vectors form a group isomorphic to `(Z2)^3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParityVector {
    pub a: Par,
    pub b: Par,
    pub c: Par,
}

impl ParityVector {
    pub const IDENTITY: ParityVector = ParityVector {
        a: Par::Even,
        b: Par::Even,
        c: Par::Even,
    };

    pub fn new(a: Par, b: Par, c: Par) -> Self {
        ParityVector { a, b, c }
    }

    pub fn plus(self, other: ParityVector) -> ParityVector {
        ParityVector {
            a: self.a.plus(other.a),
            b: self.b.plus(other.b),
            c: self.c.plus(other.c),
        }
    }

    pub fn all_equal(self) -> bool {
        self.a == self.b && self.b == self.c
    }

    fn bump(&mut self, color: EdgeColor) {
        match color {
            EdgeColor::A => self.a = self.a.plus(Par::Odd),
            EdgeColor::B => self.b = self.b.plus(Par::Odd),
            EdgeColor::C => self.c = self.c.plus(Par::Odd),
        }
    }
}

#[derive(Debug, Error)]
pub enum TrailError {
    #[error("a trail needs at least two vertices")]
    TooShort,
    #[error("vertices {u} and {v} are consecutive on the trail but not adjacent")]
    NotAdjacent { u: usize, v: usize },
    #[error("edge ({u}, {v}) repeats on the trail")]
    RepeatedEdge { u: usize, v: usize },
    #[error("face does not border the trail along a replaceable segment")]
    FaceNotAdjacent,
    #[error("replacement edge ({u}, {v}) already lies on the trail")]
    WouldRepeatEdge { u: usize, v: usize },
    #[error("face is not a triangle")]
    NotATriangle,
}

#[derive(Debug, Error)]
pub enum ParityError {
    #[error("trail is not closed")]
    NotClosed,
    #[error("closed trail has unequal parities: {0:?}")]
    Violation(ParityVector),
    #[error("vertex {0} lies on the hole boundary")]
    BoundaryVertex(usize),
}

/// A walk without repeated edges, stored as its vertex sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trail {
    vertices: Vec<usize>,
    edges: Vec<EdgeId>,
}

impl Trail {
    /// Validates incidence and edge-distinctness of a vertex walk.
    pub fn from_vertices(t: &Triangulation, vertices: &[usize]) -> Result<Trail, TrailError> {
        if vertices.len() < 2 {
            return Err(TrailError::TooShort);
        }
        let mut edges = Vec::with_capacity(vertices.len() - 1);
        let mut used = std::collections::HashSet::new();
        for w in vertices.windows(2) {
            let (u, v) = (w[0], w[1]);
            let e = t
                .edge_between(VertexId(u), VertexId(v))
                .ok_or(TrailError::NotAdjacent { u, v })?;
            if !used.insert(e) {
                return Err(TrailError::RepeatedEdge { u, v });
            }
            edges.push(e);
        }
        Ok(Trail {
            vertices: vertices.to_vec(),
            edges,
        })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.vertices.first() == self.vertices.last()
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (*self.vertices.first().expect("nonempty"), *self.vertices.last().expect("nonempty"))
    }
}

/// Per-color edge-count parities of a trail; colors that do not occur count
/// as even.
pub fn trail_parity(trail: &Trail, ec: &TaitColoring) -> ParityVector {
    let mut p = ParityVector::IDENTITY;
    for &e in trail.edges() {
        p.bump(ec.color(e));
    }
    p
}

/// Checks the same-parity law on a closed trail.  `Ok` carries the parity
/// vector; a [`ParityError::Violation`] can only arise from a coloring that
/// is not a valid Tait coloring.
pub fn check_closed_trail(trail: &Trail, ec: &TaitColoring) -> Result<ParityVector, ParityError> {
    if !trail.is_closed() {
        return Err(ParityError::NotClosed);
    }
    let p = trail_parity(trail, ec);
    if p.all_equal() {
        Ok(p)
    } else {
        Err(ParityError::Violation(p))
    }
}

/// Replaces one side of `face` on the trail by the other two sides, or two
/// consecutive sides by the third.  Endpoints are preserved and the parity
/// vector changes by exactly `(odd, odd, odd)`.
pub fn replace_path(t: &Triangulation, trail: &Trail, face: FaceId) -> Result<Trail, TrailError> {
    let fvs = t.face_vertices(face);
    if fvs.len() != 3 {
        return Err(TrailError::NotATriangle);
    }
    let face_edges: Vec<EdgeId> = t.face_edges(face).iter().map(|&e| EdgeId(e)).collect();
    let on_trail: Vec<usize> = trail
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| face_edges.contains(e))
        .map(|(i, _)| i)
        .collect();
    match on_trail.as_slice() {
        // One shared edge: route the trail around the opposite corner.
        [i] => {
            let (u, v) = (trail.vertices[*i], trail.vertices[*i + 1]);
            let w = *fvs.iter().find(|&&x| x != u && x != v).expect("triangle corner");
            let mut vs = trail.vertices.clone();
            vs.insert(*i + 1, w);
            let new = Trail::from_vertices(t, &vs).map_err(|e| match e {
                TrailError::RepeatedEdge { u, v } => TrailError::WouldRepeatEdge { u, v },
                other => other,
            })?;
            Ok(new)
        }
        // Two consecutive shared edges: cut the corner.
        [i, j] if *j == *i + 1 => {
            let mut vs = trail.vertices.clone();
            vs.remove(*i + 1);
            let new = Trail::from_vertices(t, &vs).map_err(|e| match e {
                TrailError::RepeatedEdge { u, v } => TrailError::WouldRepeatEdge { u, v },
                other => other,
            })?;
            Ok(new)
        }
        _ => Err(TrailError::FaceNotAdjacent),
    }
}

/// Sum of triangle orientations, modulo 3 (`up` = +1, `down` = -1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WheelSum(pub u8);

impl WheelSum {
    pub const ZERO: WheelSum = WheelSum(0);

    pub fn plus(self, other: WheelSum) -> WheelSum {
        WheelSum((self.0 + other.0) % 3)
    }

    pub fn from_weight(w: i32) -> WheelSum {
        WheelSum((w.rem_euclid(3)) as u8)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Orientation sum of the triangle fan around an interior vertex; equals
/// zero on every valid coloring.
pub fn wheel_sum(t: &Triangulation, ec: &TaitColoring, v: VertexId) -> Result<WheelSum, ParityError> {
    if t.is_hole_vertex(v) {
        return Err(ParityError::BoundaryVertex(v.0));
    }
    let mut sum = 0i32;
    for f in t.faces_around(v) {
        let o = face_orientation(t, ec, f).expect("interior fan is triangulated");
        sum += o.weight();
    }
    Ok(WheelSum::from_weight(sum))
}

/// Samples up to `count` closed trails by seeded random walks that retire
/// used edges and close on first return to their start vertex; walks that
/// strand before closing are retried up to `max_attempts` times in total.
pub fn sample_closed_trails(t: &Triangulation, seed: u64, count: usize, max_attempts: usize) -> Vec<Trail> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < max_attempts {
        attempts += 1;
        let start = rng.gen_range(0..t.vertex_count());
        let mut used: std::collections::HashSet<EdgeId> = std::collections::HashSet::new();
        let mut vs = vec![start];
        let mut cur = start;
        loop {
            let options: Vec<usize> = t
                .neighbors(VertexId(cur))
                .iter()
                .copied()
                .filter(|&w| {
                    let e = t.edge_between(VertexId(cur), VertexId(w)).expect("adjacent");
                    !used.contains(&e)
                })
                .collect();
            if options.is_empty() {
                break;
            }
            let next = options[rng.gen_range(0..options.len())];
            used.insert(t.edge_between(VertexId(cur), VertexId(next)).expect("adjacent"));
            vs.push(next);
            cur = next;
            if cur == start {
                out.push(Trail::from_vertices(t, &vs).expect("walk is a trail"));
                break;
            }
        }
    }
    out
}
