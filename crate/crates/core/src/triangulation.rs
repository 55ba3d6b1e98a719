//! Embedded planar triangulations as rotation systems.
//!
//! A triangulation is stored as one cyclic neighbor list per vertex.  Faces
//! are never part of the input: they are traced from the rotation system and
//! the Euler relation `V - E + F = 2` is what certifies that the input
//! describes a sphere embedding.  A *near-triangulation* additionally
//! designates one face as the hole (the square or pentagon left behind by
//! deleting a low-degree vertex); every other face must be a triangle.
//!
//! Face tracing convention: the dart following `(u, v)` inside a face is
//! `(v, w)` where `w` is the neighbor *after* `u` in `v`'s rotation.  Face
//! vertex cycles are reported in trace order, and "clockwise" throughout the
//! crate means exactly this order.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense handle for a vertex of one triangulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId(pub usize);

/// Dense handle for an undirected edge; edges are identified with their
/// canonical `(min, max)` endpoint pair and numbered in lexicographic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

/// Dense handle for a traced face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FaceId(pub usize);

impl std::fmt::Display for VertexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl std::fmt::Display for EdgeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "e{}", self.0)
    }
}

impl std::fmt::Display for FaceId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "f{}", self.0)
    }
}

#[derive(Debug, Error)]
pub enum TriangulationError {
    #[error("inconsistent rotation: {0}")]
    InconsistentRotation(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("face ({0}) has {1} sides and is not the designated hole")]
    NotTriangulated(String, usize),
    #[error("Euler check failed: V={v}, E={e}, F={f}")]
    NotPlanarSphere { v: usize, e: usize, f: usize },
    #[error("no traced face matches the designated hole cycle")]
    UnknownHoleFace,
    #[error("hole face visits vertex {0} twice")]
    HoleNotSimple(usize),
    #[error("need at least {min} vertices, got {got}")]
    InvalidSize { min: usize, got: usize },
    #[error("vertex {vertex} has degree {degree}; puncture supports degree at most 5")]
    DegreeTooHigh { vertex: usize, degree: usize },
    #[error("operation requires a sphere triangulation but the graph has a hole")]
    HasHole,
    #[error("operation requires a near-triangulation but the graph has no hole")]
    NoHole,
    #[error("faces cannot be oriented consistently: {0}")]
    NotOrientable(String),
    #[error("unknown corpus graph name: {0}")]
    UnknownName(String),
}

enum HoleSpec<'a> {
    None,
    Cycle(&'a [usize]),
    /// Designate the traced face containing the dart `(u, v)`.
    Dart(usize, usize),
}

/// An embedded planar triangulation (or near-triangulation with one hole).
///
/// Values are immutable after construction; all operations that "modify" a
/// triangulation return a new value.
#[derive(Debug, Clone)]
pub struct Triangulation {
    rotation: Vec<Vec<usize>>,
    faces: Vec<Vec<usize>>,
    hole: Option<usize>,
    edges: Vec<(usize, usize)>,
    edge_index: HashMap<(usize, usize), usize>,
    /// The two faces incident to each edge.
    edge_faces: Vec<[usize; 2]>,
    /// Per face, edge ids in trace order: entry `i` joins vertex `i` to `i+1`.
    face_edges: Vec<Vec<usize>>,
}

impl Triangulation {
    /// Builds a sphere triangulation from per-vertex clockwise neighbor lists.
    pub fn from_rotation(rotation: Vec<Vec<usize>>) -> Result<Self, TriangulationError> {
        Self::build(rotation, HoleSpec::None)
    }

    /// Builds a near-triangulation whose hole is the traced face matching
    /// `hole` (compared as a cyclic sequence, direction included).
    pub fn from_rotation_with_hole(
        rotation: Vec<Vec<usize>>,
        hole: Option<&[usize]>,
    ) -> Result<Self, TriangulationError> {
        match hole {
            Some(cycle) => Self::build(rotation, HoleSpec::Cycle(cycle)),
            None => Self::build(rotation, HoleSpec::None),
        }
    }

    /// Builds a triangulation from an oriented face list.  Faces may be given
    /// with arbitrary orientations; they are flipped into a consistent
    /// orientation first.  The optional hole is matched by cyclic sequence in
    /// either direction.
    pub fn from_faces(
        n: usize,
        input_faces: &[Vec<usize>],
        hole: Option<&[usize]>,
    ) -> Result<Self, TriangulationError> {
        let oriented = orient_faces(n, input_faces)?;
        // Chain the face corners around every vertex into its rotation.
        let mut succ: Vec<HashMap<usize, usize>> = vec![HashMap::new(); n];
        for face in &oriented {
            let k = face.len();
            for i in 0..k {
                let u = face[i];
                let v = face[(i + 1) % k];
                let w = face[(i + 2) % k];
                if succ[v].insert(u, w).is_some() {
                    return Err(TriangulationError::NotOrientable(format!(
                        "two faces share the corner ({u}, {v})"
                    )));
                }
            }
        }
        let mut rotation = Vec::with_capacity(n);
        for (v, map) in succ.iter().enumerate() {
            if map.is_empty() {
                return Err(TriangulationError::Disconnected);
            }
            let start = *map.keys().min().expect("nonempty");
            let mut cycle = vec![start];
            let mut cur = map[&start];
            while cur != start {
                if cycle.len() > map.len() {
                    return Err(TriangulationError::NotOrientable(format!(
                        "corners around vertex {v} do not chain into a cycle"
                    )));
                }
                cycle.push(cur);
                cur = *map.get(&cur).ok_or_else(|| {
                    TriangulationError::NotOrientable(format!(
                        "corners around vertex {v} do not chain into a cycle"
                    ))
                })?;
            }
            if cycle.len() != map.len() {
                return Err(TriangulationError::NotOrientable(format!(
                    "vertex {v} has more than one corner cycle"
                )));
            }
            rotation.push(cycle);
        }
        let spec = match hole {
            // The orientation pass may have reversed the hole cycle, so look
            // it up among the oriented faces in either direction.
            Some(cycle) => {
                let key = canonical_cycle(cycle);
                let rev: Vec<usize> = cycle.iter().rev().copied().collect();
                let rev_key = canonical_cycle(&rev);
                let found = oriented
                    .iter()
                    .find(|f| {
                        let c = canonical_cycle(f);
                        c == key || c == rev_key
                    })
                    .ok_or(TriangulationError::UnknownHoleFace)?;
                return Self::build(rotation, HoleSpec::Cycle(&found.clone()));
            }
            None => HoleSpec::None,
        };
        Self::build(rotation, spec)
    }

    fn build(rotation: Vec<Vec<usize>>, hole: HoleSpec<'_>) -> Result<Self, TriangulationError> {
        let n = rotation.len();
        if n < 3 {
            return Err(TriangulationError::InvalidSize { min: 3, got: n });
        }
        // Simplicity and symmetry of the adjacency.
        let mut nbr_pos: Vec<HashMap<usize, usize>> = vec![HashMap::new(); n];
        for (u, nbrs) in rotation.iter().enumerate() {
            if nbrs.len() < 2 {
                return Err(TriangulationError::InconsistentRotation(format!(
                    "vertex {u} has degree {} (< 2)",
                    nbrs.len()
                )));
            }
            for (p, &v) in nbrs.iter().enumerate() {
                if v == u {
                    return Err(TriangulationError::InconsistentRotation(format!("loop at vertex {u}")));
                }
                if v >= n {
                    return Err(TriangulationError::InconsistentRotation(format!(
                        "vertex {u} lists out-of-range neighbor {v}"
                    )));
                }
                if nbr_pos[u].insert(v, p).is_some() {
                    return Err(TriangulationError::InconsistentRotation(format!(
                        "vertex {u} lists neighbor {v} twice"
                    )));
                }
            }
        }
        for (u, nbrs) in rotation.iter().enumerate() {
            for &v in nbrs {
                if !nbr_pos[v].contains_key(&u) {
                    return Err(TriangulationError::InconsistentRotation(format!(
                        "vertex {u} lists {v} but not vice versa"
                    )));
                }
            }
        }
        // Connectivity.
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &rotation[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        if reached != n {
            return Err(TriangulationError::Disconnected);
        }

        // Trace faces: one orbit per dart under "successor of the incoming
        // neighbor".  Dart (u, v) is indexed by u's offset plus v's position.
        let mut offsets = vec![0usize; n + 1];
        for u in 0..n {
            offsets[u + 1] = offsets[u] + rotation[u].len();
        }
        let dart_count = offsets[n];
        let dart_id = |u: usize, v: usize, pos: &Vec<HashMap<usize, usize>>| offsets[u] + pos[u][&v];
        let mut visited = vec![false; dart_count];
        let mut faces: Vec<Vec<usize>> = Vec::new();
        let mut dart_face = vec![usize::MAX; dart_count];
        for u0 in 0..n {
            for &v0 in &rotation[u0] {
                if visited[dart_id(u0, v0, &nbr_pos)] {
                    continue;
                }
                let fid = faces.len();
                let mut cycle = Vec::new();
                let (mut u, mut v) = (u0, v0);
                loop {
                    let d = dart_id(u, v, &nbr_pos);
                    visited[d] = true;
                    dart_face[d] = fid;
                    cycle.push(u);
                    let p = nbr_pos[v][&u];
                    let w = rotation[v][(p + 1) % rotation[v].len()];
                    u = v;
                    v = w;
                    if (u, v) == (u0, v0) {
                        break;
                    }
                }
                faces.push(cycle);
            }
        }

        // Euler relation certifies the sphere embedding.
        let edge_count = dart_count / 2;
        if n + faces.len() != edge_count + 2 {
            return Err(TriangulationError::NotPlanarSphere {
                v: n,
                e: edge_count,
                f: faces.len(),
            });
        }

        // Resolve the hole designation.
        let hole_idx = match hole {
            HoleSpec::None => None,
            HoleSpec::Cycle(cycle) => {
                let key = canonical_cycle(cycle);
                let idx = faces
                    .iter()
                    .position(|f| canonical_cycle(f) == key)
                    .ok_or(TriangulationError::UnknownHoleFace)?;
                Some(idx)
            }
            HoleSpec::Dart(u, v) => {
                let d = dart_id(u, v, &nbr_pos);
                Some(dart_face[d])
            }
        };
        if let Some(h) = hole_idx {
            let mut vs = HashSet::new();
            for &v in &faces[h] {
                if !vs.insert(v) {
                    return Err(TriangulationError::HoleNotSimple(v));
                }
            }
        }
        for (i, f) in faces.iter().enumerate() {
            if Some(i) != hole_idx && f.len() != 3 {
                return Err(TriangulationError::NotTriangulated(
                    f.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "),
                    f.len(),
                ));
            }
        }

        // Canonical edge numbering and the edge/face incidences.
        let mut edges: Vec<(usize, usize)> = nbr_pos
            .iter()
            .enumerate()
            .flat_map(|(u, m)| m.keys().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        edges.sort_unstable();
        let edge_index: HashMap<(usize, usize), usize> =
            edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut edge_faces = vec![[usize::MAX; 2]; edges.len()];
        let mut face_edges: Vec<Vec<usize>> = Vec::with_capacity(faces.len());
        for (fi, f) in faces.iter().enumerate() {
            let k = f.len();
            let mut fe = Vec::with_capacity(k);
            for i in 0..k {
                let (a, b) = (f[i], f[(i + 1) % k]);
                let e = edge_index[&(a.min(b), a.max(b))];
                fe.push(e);
                let slot = &mut edge_faces[e];
                if slot[0] == usize::MAX {
                    slot[0] = fi;
                } else {
                    debug_assert_eq!(slot[1], usize::MAX);
                    slot[1] = fi;
                }
            }
            face_edges.push(fe);
        }
        debug_assert!(edge_faces.iter().all(|s| s[1] != usize::MAX));

        Ok(Triangulation {
            rotation,
            faces,
            hole: hole_idx,
            edges,
            edge_index,
            edge_faces,
            face_edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Number of triangle faces (excludes the hole).
    pub fn triangle_count(&self) -> usize {
        self.faces.len() - usize::from(self.hole.is_some())
    }

    pub fn hole(&self) -> Option<FaceId> {
        self.hole.map(FaceId)
    }

    pub fn is_sphere(&self) -> bool {
        self.hole.is_none()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation[v.0].len()
    }

    /// Clockwise neighbor cycle of `v`.
    pub fn neighbors(&self, v: VertexId) -> &[usize] {
        &self.rotation[v.0]
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.rotation.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn face_ids(&self) -> impl Iterator<Item = FaceId> {
        (0..self.faces.len()).map(FaceId)
    }

    /// Faces that are triangles, i.e. everything but the hole.
    pub fn triangles(&self) -> impl Iterator<Item = FaceId> + '_ {
        let hole = self.hole;
        (0..self.faces.len()).filter(move |&f| Some(f) != hole).map(FaceId)
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        let (u, v) = self.edges[e.0];
        (VertexId(u), VertexId(v))
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let key = (u.0.min(v.0), u.0.max(v.0));
        self.edge_index.get(&key).copied().map(EdgeId)
    }

    /// The two faces incident to `e`.
    pub fn faces_of_edge(&self, e: EdgeId) -> [FaceId; 2] {
        let [a, b] = self.edge_faces[e.0];
        [FaceId(a), FaceId(b)]
    }

    /// The face on the other side of `e` from `f`.
    pub fn face_across(&self, e: EdgeId, f: FaceId) -> FaceId {
        let [a, b] = self.edge_faces[e.0];
        if a == f.0 {
            FaceId(b)
        } else {
            debug_assert_eq!(b, f.0);
            FaceId(a)
        }
    }

    /// Vertex cycle of a face in trace order.
    pub fn face_vertices(&self, f: FaceId) -> &[usize] {
        &self.faces[f.0]
    }

    /// Edge ids of a face in trace order; entry `i` joins vertex `i` to `i+1`.
    pub fn face_edges(&self, f: FaceId) -> &[usize] {
        &self.face_edges[f.0]
    }

    pub fn is_hole_edge(&self, e: EdgeId) -> bool {
        match self.hole {
            Some(h) => self.edge_faces[e.0].contains(&h),
            None => false,
        }
    }

    /// Edges of the hole face in trace order.
    pub fn hole_edges(&self) -> Option<&[usize]> {
        self.hole.map(|h| self.face_edges[h].as_slice())
    }

    pub fn is_hole_vertex(&self, v: VertexId) -> bool {
        match self.hole {
            Some(h) => self.faces[h].contains(&v.0),
            None => false,
        }
    }

    /// Degree distribution of the graph.
    pub fn degree_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for nbrs in &self.rotation {
            *hist.entry(nbrs.len()).or_insert(0) += 1;
        }
        hist
    }

    /// Faces incident to `v`, in rotation order around `v`.
    pub fn faces_around(&self, v: VertexId) -> Vec<FaceId> {
        let mut out = Vec::with_capacity(self.degree(v));
        for i in 0..self.rotation[v.0].len() {
            // The face containing dart (v, x) is unique; identify it by
            // matching the dart against the face's cyclic vertex list.
            let x = self.rotation[v.0][i];
            let e = self.edge_between(v, VertexId(x)).expect("neighbor edge");
            let [fa, fb] = self.edge_faces[e.0];
            let has_dart = |f: usize| {
                let cyc = &self.faces[f];
                let k = cyc.len();
                (0..k).any(|j| cyc[j] == v.0 && cyc[(j + 1) % k] == x)
            };
            out.push(FaceId(if has_dart(fa) { fa } else { fb }));
        }
        out
    }

    /// Deletes a vertex of degree at most 5; its link cycle becomes the hole.
    ///
    /// Vertex ids above `v` shift down by one in the result.
    pub fn puncture(&self, v: VertexId) -> Result<Triangulation, TriangulationError> {
        if self.hole.is_some() {
            return Err(TriangulationError::HasHole);
        }
        let d = self.degree(v);
        if d > 5 {
            return Err(TriangulationError::DegreeTooHigh {
                vertex: v.0,
                degree: d,
            });
        }
        let n = self.vertex_count();
        if n - 1 < 3 {
            return Err(TriangulationError::InvalidSize { min: 4, got: n });
        }
        // A dart freed by the deletion: in the triangle traced from (v, x0)
        // the third corner follows x0, and the dart (x0, z) survives into the
        // merged hole face.
        let x0 = self.rotation[v.0][0];
        let pos = self.rotation[x0].iter().position(|&w| w == v.0).expect("symmetric");
        let z = self.rotation[x0][(pos + 1) % self.rotation[x0].len()];
        let map = |u: usize| if u > v.0 { u - 1 } else { u };
        let mut rotation = Vec::with_capacity(n - 1);
        for (u, nbrs) in self.rotation.iter().enumerate() {
            if u == v.0 {
                continue;
            }
            rotation.push(nbrs.iter().filter(|&&w| w != v.0).map(|&w| map(w)).collect());
        }
        let t = Self::build(rotation, HoleSpec::Dart(map(x0), map(z)))?;
        debug_assert_eq!(t.faces[t.hole.expect("hole set")].len(), d);
        Ok(t)
    }

    /// Inserts a new vertex (with the largest id) adjacent to the full hole
    /// cycle, turning a near-triangulation back into a sphere triangulation.
    pub fn fill_hole(&self) -> Result<Triangulation, TriangulationError> {
        let h = self.hole.ok_or(TriangulationError::NoHole)?;
        let cycle = self.faces[h].clone();
        let k = cycle.len();
        let w = self.vertex_count();
        let mut rotation = self.rotation.clone();
        for i in 0..k {
            let prev = cycle[i];
            let cur = cycle[(i + 1) % k];
            // The triangle (prev, cur, w) must trace: insert w after prev.
            let p = rotation[cur].iter().position(|&x| x == prev).expect("hole edge");
            rotation[cur].insert(p + 1, w);
        }
        rotation.push(cycle.iter().rev().copied().collect());
        Self::from_rotation(rotation)
    }

    /// Cyclic vertex sequence of a face rotated so the smallest vertex comes
    /// first; this is the face's identity in the TRIG format.
    pub fn canonical_face_cycle(&self, f: FaceId) -> Vec<usize> {
        canonical_cycle(&self.faces[f.0])
    }
}

/// Rotates a cyclic sequence so its smallest element comes first.
pub(crate) fn canonical_cycle(cycle: &[usize]) -> Vec<usize> {
    let pos = cycle
        .iter()
        .enumerate()
        .min_by_key(|&(_, v)| v)
        .map(|(i, _)| i)
        .unwrap_or(0);
    let mut out = Vec::with_capacity(cycle.len());
    out.extend_from_slice(&cycle[pos..]);
    out.extend_from_slice(&cycle[..pos]);
    out
}

/// Flips the input faces into one consistent global orientation: every edge
/// must be traversed once in each direction.
fn orient_faces(n: usize, input: &[Vec<usize>]) -> Result<Vec<Vec<usize>>, TriangulationError> {
    let mut edge_faces: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (fi, face) in input.iter().enumerate() {
        if face.len() < 3 {
            return Err(TriangulationError::NotOrientable(format!("face {fi} has < 3 vertices")));
        }
        for i in 0..face.len() {
            let (a, b) = (face[i], face[(i + 1) % face.len()]);
            if a >= n || b >= n {
                return Err(TriangulationError::InconsistentRotation(format!(
                    "face {fi} references vertex out of range"
                )));
            }
            edge_faces.entry((a.min(b), a.max(b))).or_default().push(fi);
        }
    }
    for (e, fs) in &edge_faces {
        if fs.len() != 2 {
            return Err(TriangulationError::NotOrientable(format!(
                "edge ({}, {}) lies on {} faces, expected 2",
                e.0,
                e.1,
                fs.len()
            )));
        }
    }
    let mut oriented: Vec<Option<Vec<usize>>> = vec![None; input.len()];
    let mut queue = VecDeque::new();
    for start in 0..input.len() {
        if oriented[start].is_some() {
            continue;
        }
        oriented[start] = Some(input[start].clone());
        queue.push_back(start);
        while let Some(fi) = queue.pop_front() {
            let face = oriented[fi].clone().expect("oriented");
            let k = face.len();
            for i in 0..k {
                let (a, b) = (face[i], face[(i + 1) % k]);
                let key = (a.min(b), a.max(b));
                for &gi in &edge_faces[&key] {
                    if gi == fi {
                        continue;
                    }
                    // Neighbor must traverse the shared edge as (b, a).
                    let want_rev = |g: &[usize]| {
                        let m = g.len();
                        (0..m).any(|j| g[j] == b && g[(j + 1) % m] == a)
                    };
                    match &oriented[gi] {
                        Some(g) => {
                            if !want_rev(g) {
                                return Err(TriangulationError::NotOrientable(format!(
                                    "faces {fi} and {gi} disagree across edge ({a}, {b})"
                                )));
                            }
                        }
                        None => {
                            let g = &input[gi];
                            let g_oriented = if want_rev(g) {
                                g.clone()
                            } else {
                                g.iter().rev().copied().collect()
                            };
                            if !want_rev(&g_oriented) {
                                return Err(TriangulationError::NotOrientable(format!(
                                    "face {gi} cannot be oriented against face {fi}"
                                )));
                            }
                            oriented[gi] = Some(g_oriented);
                            queue.push_back(gi);
                        }
                    }
                }
            }
        }
    }
    Ok(oriented.into_iter().map(|f| f.expect("all faces oriented")).collect())
}

/// Deterministic random sphere triangulation on `n` vertices.
///
/// Starts from the tetrahedron, splits uniformly chosen faces with new
/// interior vertices until `n` vertices exist, then applies `3 n` random
/// diagonal flips, skipping any flip that would create a parallel edge.
pub fn random_triangulation(n: usize, seed: u64) -> Result<Triangulation, TriangulationError> {
    if n < 4 {
        return Err(TriangulationError::InvalidSize { min: 4, got: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut faces: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]];
    let mut adjacent: HashSet<(usize, usize)> = HashSet::new();
    let add_edges = |f: &[usize; 3], adj: &mut HashSet<(usize, usize)>| {
        for i in 0..3 {
            let (a, b) = (f[i], f[(i + 1) % 3]);
            adj.insert((a.min(b), a.max(b)));
        }
    };
    for f in faces.clone().iter() {
        add_edges(f, &mut adjacent);
    }
    for v in 4..n {
        let i = rng.gen_range(0..faces.len());
        let [a, b, c] = faces[i];
        faces[i] = [a, b, v];
        faces.push([b, c, v]);
        faces.push([c, a, v]);
        adjacent.insert((a.min(v), a.max(v)));
        adjacent.insert((b.min(v), b.max(v)));
        adjacent.insert((c.min(v), c.max(v)));
    }
    for _ in 0..3 * n {
        let mut edges: Vec<(usize, usize)> = adjacent.iter().copied().collect();
        edges.sort_unstable();
        let (u, v) = edges[rng.gen_range(0..edges.len())];
        // Locate the two incident triangles; one traverses u->v, one v->u.
        let mut fwd = None;
        let mut bwd = None;
        for (fi, f) in faces.iter().enumerate() {
            for i in 0..3 {
                if f[i] == u && f[(i + 1) % 3] == v {
                    fwd = Some((fi, f[(i + 2) % 3]));
                }
                if f[i] == v && f[(i + 1) % 3] == u {
                    bwd = Some((fi, f[(i + 2) % 3]));
                }
            }
        }
        let ((fi, x), (gi, y)) = (fwd.expect("edge has forward face"), bwd.expect("edge has backward face"));
        if x == y || adjacent.contains(&(x.min(y), x.max(y))) {
            continue;
        }
        faces[fi] = [u, y, x];
        faces[gi] = [v, x, y];
        adjacent.remove(&(u.min(v), u.max(v)));
        adjacent.insert((x.min(y), x.max(y)));
    }
    let face_vecs: Vec<Vec<usize>> = faces.iter().map(|f| f.to_vec()).collect();
    Triangulation::from_faces(n, &face_vecs, None)
}

fn ring(start: usize, len: usize) -> Vec<usize> {
    (start..start + len).collect()
}

fn cap_top(center: usize, ring: &[usize]) -> Vec<Vec<usize>> {
    let k = ring.len();
    (0..k).map(|i| vec![center, ring[i], ring[(i + 1) % k]]).collect()
}

fn cap_bottom(center: usize, ring: &[usize]) -> Vec<Vec<usize>> {
    let k = ring.len();
    (0..k).map(|i| vec![center, ring[(i + 1) % k], ring[i]]).collect()
}

/// Antiprism band between two rings; `lower[i]` sits below the edge
/// `(upper[i], upper[i+1])`.
fn band(upper: &[usize], lower: &[usize]) -> Vec<Vec<usize>> {
    let k = upper.len();
    let mut out = Vec::with_capacity(2 * k);
    for i in 0..k {
        let (a, b) = (upper[i], upper[(i + 1) % k]);
        let (p, q) = (lower[i], lower[(i + 1) % k]);
        out.push(vec![b, a, p]);
        out.push(vec![b, p, q]);
    }
    out
}

/// Hard-coded reference triangulations.
///
/// Known names: `tetrahedron`, `octahedron`, `icosahedron`, `errera` (the
/// 17-vertex triangulation on which Kempe-chain arguments classically fail),
/// and `tutte_dual` (the planar dual of the Tutte graph; the dual of a cubic
/// 3-connected planar graph is a triangulation).
pub fn corpus_graph(name: &str) -> Result<Triangulation, TriangulationError> {
    match name {
        "tetrahedron" => Triangulation::from_faces(
            4,
            &[vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 1], vec![1, 3, 2]],
            None,
        ),
        "octahedron" => {
            let r = ring(1, 4);
            let mut faces = cap_top(0, &r);
            faces.extend(cap_bottom(5, &r));
            Triangulation::from_faces(6, &faces, None)
        }
        "icosahedron" => {
            let upper = ring(1, 5);
            let lower = ring(6, 5);
            let mut faces = cap_top(0, &upper);
            faces.extend(band(&upper, &lower));
            faces.extend(cap_bottom(11, &lower));
            Triangulation::from_faces(12, &faces, None)
        }
        "errera" => {
            // Two stacked pentagonal antiprism bands between two poles:
            // 17 vertices, 45 edges, degrees 5 (poles and outer rings) and 6
            // (middle ring), dihedral symmetry of order 20.
            let a = ring(1, 5);
            let b = ring(6, 5);
            let c = ring(11, 5);
            let mut faces = cap_top(0, &a);
            faces.extend(band(&a, &b));
            faces.extend(band(&b, &c));
            faces.extend(cap_bottom(16, &c));
            Triangulation::from_faces(17, &faces, None)
        }
        "tutte_dual" => {
            crate::io::parse_trig(include_str!("../data/tutte_dual.trig")).map_err(|e| {
                TriangulationError::InconsistentRotation(format!("corpus data failed to parse: {e}"))
            })
        }
        other => Err(TriangulationError::UnknownName(other.to_string())),
    }
}

/// Names accepted by [`corpus_graph`].
pub const CORPUS_NAMES: [&str; 5] = ["tetrahedron", "octahedron", "icosahedron", "errera", "tutte_dual"];
