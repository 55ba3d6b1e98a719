//! Coloring toolkit for embedded planar triangulations.
//!
//! The crate represents maximal planar graphs as rotation systems, derives
//! their faces, and layers three coloring views on top of each other:
//! proper 4-colorings of the vertices, Tait 3-colorings of the edges (every
//! triangle carries all three edge colors), and the induced 2-coloring of
//! the triangles by orientation.  On those it builds the swap machinery
//! (two-color triangle channels and monochromatic-cycle knobs) and the
//! wheel reduction procedures for degree-3/4/5 vertices, together with a
//! brute-force coloring oracle and a seeded fuzzing harness that checks the
//! combinatorial invariants at desk scale.

pub mod channels;
pub mod coloring;
pub mod harness;
pub mod io;
pub mod knobs;
pub mod oracle;
pub mod parity;
pub mod reduction;
pub mod triangulation;

pub use channels::{all_channels, find_channel, swap_channel, Channel, ChannelKind, ChannelPair, ChannelStart};
pub use coloring::{
    edge_to_face, edge_to_vertex, orbit_sizes, validate_tait, vertex_to_edge, EdgeColor, OrbitSizes, Orientation,
    TaitColoring, VertexColor, VertexColoring,
};
pub use knobs::{find_knobs, rotate_knob, Knob};
pub use oracle::{brute_force_4color, enumerate_colorings, ColoringEnumeration};
pub use parity::{check_closed_trail, replace_path, trail_parity, wheel_sum, Par, ParityVector, Trail, WheelSum};
pub use reduction::{
    attempt_reduction_exhaustive, attempt_reduction_guided, classify_wheel, extend_to_center, reduce_degree4,
    reduce_low_degree, Move, MoveTrace, Outcome, ReductionRun, WheelClass, WheelState,
};
pub use triangulation::{
    corpus_graph, random_triangulation, EdgeId, FaceId, Triangulation, TriangulationError, VertexId,
};

/// 64-bit mixing function used to derive per-trial seeds and fingerprints.
pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// FNV-1a over a byte stream; stable across platforms and builds.
pub(crate) fn fnv1a(bytes: impl IntoIterator<Item = u8>) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}
