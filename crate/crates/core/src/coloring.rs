//! The three coloring layers and the Klein-group maps between them.
//!
//! Vertex colors 1..4 are encoded as the Klein four-group `(Z2)^2`; the color
//! of an edge is the XOR of its endpoint codes, which is never zero on a
//! properly colored graph and lands in the three nonzero group elements
//! `a = 01`, `b = 10`, `c = 11`.  Every triangle then carries all three edge
//! colors, and reading `a, b, c` around a triangle in trace order either
//! matches the cyclic order (`up`) or its reverse (`down`).

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::triangulation::{EdgeId, FaceId, Triangulation, VertexId};

/// One of the four vertex colors, a Klein four-group element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexColor {
    C1,
    C2,
    C3,
    C4,
}

impl VertexColor {
    pub const ALL: [VertexColor; 4] = [VertexColor::C1, VertexColor::C2, VertexColor::C3, VertexColor::C4];

    /// Two-bit Klein code: 1 ↔ 00, 2 ↔ 01, 3 ↔ 10, 4 ↔ 11.
    pub fn code(self) -> u8 {
        match self {
            VertexColor::C1 => 0b00,
            VertexColor::C2 => 0b01,
            VertexColor::C3 => 0b10,
            VertexColor::C4 => 0b11,
        }
    }

    pub fn from_code(code: u8) -> VertexColor {
        match code & 0b11 {
            0b00 => VertexColor::C1,
            0b01 => VertexColor::C2,
            0b10 => VertexColor::C3,
            _ => VertexColor::C4,
        }
    }

    /// 1-based numeral, as written in VCOL files.
    pub fn number(self) -> u8 {
        match self {
            VertexColor::C1 => 1,
            VertexColor::C2 => 2,
            VertexColor::C3 => 3,
            VertexColor::C4 => 4,
        }
    }

    pub fn from_number(n: u8) -> Option<VertexColor> {
        match n {
            1 => Some(VertexColor::C1),
            2 => Some(VertexColor::C2),
            3 => Some(VertexColor::C3),
            4 => Some(VertexColor::C4),
            _ => None,
        }
    }

    /// Klein translation of this color by `other`.
    pub fn xor(self, other: VertexColor) -> VertexColor {
        VertexColor::from_code(self.code() ^ other.code())
    }
}

/// One of the three edge colors, the nonzero Klein elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeColor {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "c")]
    C,
}

impl EdgeColor {
    pub const ALL: [EdgeColor; 3] = [EdgeColor::A, EdgeColor::B, EdgeColor::C];

    /// Klein code: a ↔ 01, b ↔ 10, c ↔ 11.
    pub fn code(self) -> u8 {
        match self {
            EdgeColor::A => 0b01,
            EdgeColor::B => 0b10,
            EdgeColor::C => 0b11,
        }
    }

    pub fn from_code(code: u8) -> Option<EdgeColor> {
        match code {
            0b01 => Some(EdgeColor::A),
            0b10 => Some(EdgeColor::B),
            _ if code == 0b11 => Some(EdgeColor::C),
            _ => None,
        }
    }

    /// XOR of two *distinct* edge colors is the third one.
    pub fn xor(self, other: EdgeColor) -> Option<EdgeColor> {
        EdgeColor::from_code(self.code() ^ other.code())
    }

    /// The color that is neither `self` nor `other` (requires them distinct).
    pub fn third(self, other: EdgeColor) -> EdgeColor {
        self.xor(other).expect("distinct edge colors")
    }

    pub fn letter(self) -> char {
        match self {
            EdgeColor::A => 'a',
            EdgeColor::B => 'b',
            EdgeColor::C => 'c',
        }
    }

    pub fn from_letter(ch: char) -> Option<EdgeColor> {
        match ch {
            'a' => Some(EdgeColor::A),
            'b' => Some(EdgeColor::B),
            'c' => Some(EdgeColor::C),
            _ => None,
        }
    }
}

impl std::fmt::Display for EdgeColor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Orientation of a triangle: `Up` when its edge colors read `a, b, c` in
/// trace order (up to cyclic rotation), `Down` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Up,
    Down,
}

impl Orientation {
    pub fn flipped(self) -> Orientation {
        match self {
            Orientation::Up => Orientation::Down,
            Orientation::Down => Orientation::Up,
        }
    }

    /// +1 for `Up`, -1 for `Down`; the wheel-sum weight.
    pub fn weight(self) -> i32 {
        match self {
            Orientation::Up => 1,
            Orientation::Down => -1,
        }
    }
}

/// Total assignment of edge colors, indexed by [`EdgeId`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TaitColoring {
    colors: Vec<EdgeColor>,
}

impl TaitColoring {
    pub fn new(colors: Vec<EdgeColor>) -> Self {
        TaitColoring { colors }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn color(&self, e: EdgeId) -> EdgeColor {
        self.colors[e.0]
    }

    pub fn set_color(&mut self, e: EdgeId, c: EdgeColor) {
        self.colors[e.0] = c;
    }

    pub fn colors(&self) -> &[EdgeColor] {
        &self.colors
    }

    /// Packs the coloring two bits per edge, in canonical edge order.
    pub fn pack(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.colors.len().div_ceil(4)];
        for (i, c) in self.colors.iter().enumerate() {
            out[i / 4] |= c.code() << (2 * (i % 4));
        }
        out
    }

    /// Stable 64-bit fingerprint of the coloring.
    pub fn fingerprint(&self) -> u64 {
        crate::fnv1a(self.pack())
    }

    /// Swaps the two colors of `pair` on every edge of the graph.
    pub fn global_swap(&self, pair: crate::channels::ChannelPair) -> TaitColoring {
        let (x, y) = pair.colors();
        let colors = self
            .colors
            .iter()
            .map(|&c| {
                if c == x {
                    y
                } else if c == y {
                    x
                } else {
                    c
                }
            })
            .collect();
        TaitColoring { colors }
    }
}

/// Total assignment of vertex colors, indexed by [`VertexId`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexColoring {
    colors: Vec<VertexColor>,
}

impl VertexColoring {
    pub fn new(colors: Vec<VertexColor>) -> Self {
        VertexColoring { colors }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn color(&self, v: VertexId) -> VertexColor {
        self.colors[v.0]
    }

    pub fn colors(&self) -> &[VertexColor] {
        &self.colors
    }

    /// Edges whose endpoints share a color.
    pub fn properness_violations(&self, t: &Triangulation) -> Vec<EdgeId> {
        t.edge_ids()
            .filter(|&e| {
                let (u, v) = t.endpoints(e);
                self.color(u) == self.color(v)
            })
            .collect()
    }

    pub fn is_proper(&self, t: &Triangulation) -> bool {
        self.properness_violations(t).is_empty()
    }

    /// Applies a permutation of the four colors (given as the image of
    /// colors 1..4).
    pub fn permuted(&self, perm: &[VertexColor; 4]) -> VertexColoring {
        let colors = self.colors.iter().map(|c| perm[(c.number() - 1) as usize]).collect();
        VertexColoring { colors }
    }
}

#[derive(Debug, Error)]
pub enum ColoringError {
    #[error("adjacent vertices {u} and {v} share color {color}")]
    ImproperColoring { u: usize, v: usize, color: u8 },
    #[error("edge coloring is inconsistent around vertex {vertex}: two paths disagree")]
    InconsistentColoring { vertex: usize },
    #[error("coloring has {got} entries but the graph needs {want}")]
    WrongSize { got: usize, want: usize },
}

/// Derives the Tait coloring induced by a proper vertex coloring: each edge
/// gets the XOR of its endpoint codes.
pub fn vertex_to_edge(t: &Triangulation, vc: &VertexColoring) -> Result<TaitColoring, ColoringError> {
    if vc.len() != t.vertex_count() {
        return Err(ColoringError::WrongSize {
            got: vc.len(),
            want: t.vertex_count(),
        });
    }
    let mut colors = Vec::with_capacity(t.edge_count());
    for e in t.edge_ids() {
        let (u, v) = t.endpoints(e);
        let code = vc.color(u).code() ^ vc.color(v).code();
        match EdgeColor::from_code(code) {
            Some(c) => colors.push(c),
            None => {
                return Err(ColoringError::ImproperColoring {
                    u: u.0,
                    v: v.0,
                    color: vc.color(u).number(),
                })
            }
        }
    }
    let ec = TaitColoring::new(colors);
    debug_assert!(validate_tait(t, &ec).is_empty());
    Ok(ec)
}

/// Recovers a vertex coloring from a Tait coloring by fixing `root` to
/// `root_color` and XOR-ing edge codes along paths.  Any path gives the same
/// answer on a valid coloring; a disagreement means the input is corrupt.
pub fn edge_to_vertex(
    t: &Triangulation,
    ec: &TaitColoring,
    root: VertexId,
    root_color: VertexColor,
) -> Result<VertexColoring, ColoringError> {
    if ec.len() != t.edge_count() {
        return Err(ColoringError::WrongSize {
            got: ec.len(),
            want: t.edge_count(),
        });
    }
    let n = t.vertex_count();
    let mut codes: Vec<Option<u8>> = vec![None; n];
    codes[root.0] = Some(root_color.code());
    let mut queue = std::collections::VecDeque::from([root.0]);
    while let Some(u) = queue.pop_front() {
        let cu = codes[u].expect("enqueued vertices are colored");
        for &v in t.neighbors(VertexId(u)) {
            let e = t.edge_between(VertexId(u), VertexId(v)).expect("adjacent");
            let cv = cu ^ ec.color(e).code();
            match codes[v] {
                None => {
                    codes[v] = Some(cv);
                    queue.push_back(v);
                }
                Some(prev) if prev != cv => {
                    return Err(ColoringError::InconsistentColoring { vertex: v });
                }
                Some(_) => {}
            }
        }
    }
    let colors = codes
        .into_iter()
        .map(|c| VertexColor::from_code(c.expect("connected graph")))
        .collect();
    Ok(VertexColoring::new(colors))
}

/// Orientation of every triangle face; the hole (if any) gets `None`.
pub fn edge_to_face(t: &Triangulation, ec: &TaitColoring) -> Vec<Option<Orientation>> {
    t.face_ids()
        .map(|f| {
            if Some(f) == t.hole() {
                None
            } else {
                face_orientation(t, ec, f)
            }
        })
        .collect()
}

/// Orientation of a single triangle, or `None` if its colors are degenerate
/// (which cannot happen on a valid Tait coloring).
pub fn face_orientation(t: &Triangulation, ec: &TaitColoring, f: FaceId) -> Option<Orientation> {
    let es = t.face_edges(f);
    if es.len() != 3 {
        return None;
    }
    let c0 = ec.color(EdgeId(es[0]));
    let c1 = ec.color(EdgeId(es[1]));
    let c2 = ec.color(EdgeId(es[2]));
    if c0 == c1 || c1 == c2 || c0 == c2 {
        return None;
    }
    // With all three colors present, the triangle is `Up` exactly when the
    // successor of the a-edge (in trace order) is the b-edge.
    let pos_a = [c0, c1, c2].iter().position(|&c| c == EdgeColor::A).expect("has a");
    let next = [c0, c1, c2][(pos_a + 1) % 3];
    Some(if next == EdgeColor::B {
        Orientation::Up
    } else {
        Orientation::Down
    })
}

/// Faces violating the all-three-colors rule.  Empty result means `ec` is a
/// valid Tait coloring of `t`.
pub fn validate_tait(t: &Triangulation, ec: &TaitColoring) -> Vec<FaceId> {
    if ec.len() != t.edge_count() {
        return t.face_ids().collect();
    }
    t.triangles()
        .filter(|&f| {
            let es = t.face_edges(f);
            let mut mask = 0u8;
            for &e in es {
                mask |= ec.color(EdgeId(e)).code();
            }
            let distinct = {
                let cs: Vec<EdgeColor> = es.iter().map(|&e| ec.color(EdgeId(e))).collect();
                cs[0] != cs[1] && cs[1] != cs[2] && cs[0] != cs[2]
            };
            !(mask == 0b11 && distinct)
        })
        .collect()
}

/// Orbit sizes of a coloring under the 24 permutations of the vertex colors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSizes {
    pub vertex_orbit: usize,
    pub edge_orbit: usize,
    pub face_orbit: usize,
}

/// Measures how many distinct vertex colorings, induced Tait colorings, and
/// induced orientation maps arise from permuting the four vertex colors.
/// All 24 permutations are enumerated explicitly.
pub fn orbit_sizes(t: &Triangulation, vc: &VertexColoring) -> OrbitSizes {
    let mut vertex_set: HashSet<Vec<u8>> = HashSet::new();
    let mut edge_set: HashSet<Vec<u8>> = HashSet::new();
    let mut face_set: HashSet<Vec<u8>> = HashSet::new();
    for perm in permutations4() {
        let pvc = vc.permuted(&perm);
        vertex_set.insert(pvc.colors().iter().map(|c| c.number()).collect());
        let ec = vertex_to_edge(t, &pvc).expect("bijective relabeling preserves properness");
        face_set.insert(
            edge_to_face(t, &ec)
                .into_iter()
                .map(|o| match o {
                    Some(Orientation::Up) => 1,
                    Some(Orientation::Down) => 2,
                    None => 0,
                })
                .collect(),
        );
        edge_set.insert(ec.pack());
    }
    OrbitSizes {
        vertex_orbit: vertex_set.len(),
        edge_orbit: edge_set.len(),
        face_orbit: face_set.len(),
    }
}

/// All 24 permutations of the four vertex colors, as images of (1,2,3,4).
pub fn permutations4() -> Vec<[VertexColor; 4]> {
    let mut out = Vec::with_capacity(24);
    let items = VertexColor::ALL;
    let mut idx = [0usize; 4];
    let mut used = [false; 4];
    fn rec(depth: usize, idx: &mut [usize; 4], used: &mut [bool; 4], items: &[VertexColor; 4], out: &mut Vec<[VertexColor; 4]>) {
        if depth == 4 {
            out.push([items[idx[0]], items[idx[1]], items[idx[2]], items[idx[3]]]);
            return;
        }
        for i in 0..4 {
            if !used[i] {
                used[i] = true;
                idx[depth] = i;
                rec(depth + 1, idx, used, items, out);
                used[i] = false;
            }
        }
    }
    rec(0, &mut idx, &mut used, &items, &mut out);
    out
}
