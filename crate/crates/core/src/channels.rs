//! Swap channels: the two-color triangle walks along which edge colors can
//! be exchanged without breaking the coloring.
//!
//! Fix a pair of edge colors, say `a-c`.  Every triangle has exactly one
//! edge of each color, so it has exactly two pair-colored edges; crossing
//! them links the triangles into a 2-regular walk structure.  On a sphere
//! the walks are disjoint cycles; in a near-triangulation a walk that
//! reaches a pair-colored hole edge stops there, giving a path whose two
//! endpoints are hole edges.  Swapping the pair colors along one channel
//! (interior crossings plus, for open channels, the two terminal hole
//! edges) yields a valid coloring again and flips the orientation of every
//! triangle on the channel, leaving all other triangles untouched.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{EdgeColor, TaitColoring};
use crate::triangulation::{EdgeId, FaceId, Triangulation};

/// An unordered pair of edge colors; the third color is the channel's
/// boundary color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChannelPair {
    #[serde(rename = "ab")]
    AB,
    #[serde(rename = "ac")]
    AC,
    #[serde(rename = "bc")]
    BC,
}

impl ChannelPair {
    pub const ALL: [ChannelPair; 3] = [ChannelPair::AB, ChannelPair::AC, ChannelPair::BC];

    pub fn colors(self) -> (EdgeColor, EdgeColor) {
        match self {
            ChannelPair::AB => (EdgeColor::A, EdgeColor::B),
            ChannelPair::AC => (EdgeColor::A, EdgeColor::C),
            ChannelPair::BC => (EdgeColor::B, EdgeColor::C),
        }
    }

    /// The color left untouched by a swap of this pair.
    pub fn boundary(self) -> EdgeColor {
        match self {
            ChannelPair::AB => EdgeColor::C,
            ChannelPair::AC => EdgeColor::B,
            ChannelPair::BC => EdgeColor::A,
        }
    }

    pub fn contains(self, c: EdgeColor) -> bool {
        c != self.boundary()
    }

    /// Maps one pair color to the other; boundary color maps to itself.
    pub fn swap(self, c: EdgeColor) -> EdgeColor {
        let (x, y) = self.colors();
        if c == x {
            y
        } else if c == y {
            x
        } else {
            c
        }
    }

    pub fn from_colors(x: EdgeColor, y: EdgeColor) -> Option<ChannelPair> {
        match (x.min(y), x.max(y)) {
            (EdgeColor::A, EdgeColor::B) => Some(ChannelPair::AB),
            (EdgeColor::A, EdgeColor::C) => Some(ChannelPair::AC),
            (EdgeColor::B, EdgeColor::C) => Some(ChannelPair::BC),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ChannelPair::AB => "ab",
            ChannelPair::AC => "ac",
            ChannelPair::BC => "bc",
        }
    }

    pub fn from_name(s: &str) -> Option<ChannelPair> {
        match s {
            "ab" | "ba" => Some(ChannelPair::AB),
            "ac" | "ca" => Some(ChannelPair::AC),
            "bc" | "cb" => Some(ChannelPair::BC),
            _ => None,
        }
    }
}

impl std::fmt::Display for ChannelPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChannelKind {
    Closed,
    Open,
}

/// One swap channel, bound to the coloring it was discovered on by a
/// fingerprint; mutating operations refuse stale channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Channel {
    pub pair: ChannelPair,
    pub kind: ChannelKind,
    /// Triangles in walk order.
    pub triangles: Vec<FaceId>,
    /// Pair-colored edges crossed between consecutive triangles.  For a
    /// closed channel this includes the wrap-around crossing, so its length
    /// equals the triangle count; for an open channel it is one less.
    pub interior_edges: Vec<EdgeId>,
    /// The two terminal hole edges of an open channel.
    pub endpoints: Option<(EdgeId, EdgeId)>,
    fingerprint: u64,
}

impl Channel {
    /// All edges whose colors a swap exchanges.
    pub fn swap_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        let ends = self.endpoints.map(|(a, b)| [a, b]).into_iter().flatten();
        self.interior_edges.iter().copied().chain(ends)
    }

    /// Identity of the channel within one coloring: the pair plus its
    /// smallest anchor edge (endpoint for open, smallest crossing for
    /// closed channels).
    pub fn identity(&self) -> (ChannelPair, EdgeId) {
        let anchor = match self.endpoints {
            Some((a, b)) => a.min(b),
            None => self.interior_edges.iter().copied().min().expect("closed channels cross"),
        };
        (self.pair, anchor)
    }

    pub fn coloring_fingerprint(&self) -> u64 {
        self.fingerprint
    }
}

/// Where to start a channel walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelStart {
    Triangle(FaceId),
    HoleEdge(EdgeId),
}

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("start edge is colored {found}, not in pair {pair}")]
    WrongStartColor { pair: ChannelPair, found: EdgeColor },
    #[error("start edge ({u}, {v}) is not a hole edge")]
    NotHoleEdge { u: usize, v: usize },
    #[error("start face is the hole, not a triangle")]
    StartIsHole,
    #[error("channel was computed against a different coloring")]
    StaleChannel,
}

/// The two pair-colored edges of a triangle.
fn pair_edges(t: &Triangulation, ec: &TaitColoring, f: FaceId, pair: ChannelPair) -> [EdgeId; 2] {
    let mut out = [EdgeId(usize::MAX); 2];
    let mut i = 0;
    for &e in t.face_edges(f) {
        if pair.contains(ec.color(EdgeId(e))) {
            out[i] = EdgeId(e);
            i += 1;
        }
    }
    debug_assert_eq!(i, 2, "a Tait-colored triangle has exactly two pair edges");
    out
}

/// Walks from `face` away across `entry` until the walk closes or exits
/// through a hole edge.  Returns the triangles visited (starting with
/// `face`), the crossings between them, and the terminal hole edge if any.
fn walk(
    t: &Triangulation,
    ec: &TaitColoring,
    pair: ChannelPair,
    face: FaceId,
    entry: EdgeId,
) -> (Vec<FaceId>, Vec<EdgeId>, Option<EdgeId>) {
    let mut triangles = vec![face];
    let mut crossings = Vec::new();
    let mut cur = face;
    let mut entry_edge = entry;
    loop {
        let [e1, e2] = pair_edges(t, ec, cur, pair);
        let exit = if e1 == entry_edge { e2 } else { e1 };
        let next = t.face_across(exit, cur);
        if Some(next) == t.hole() {
            return (triangles, crossings, Some(exit));
        }
        if next == face && exit == entry {
            // Closed the cycle: the final crossing returns to the start.
            crossings.push(exit);
            return (triangles, crossings, None);
        }
        crossings.push(exit);
        triangles.push(next);
        entry_edge = exit;
        cur = next;
    }
}

/// Discovers the unique channel of `pair` through `start`.
///
/// Starting from a triangle finds whichever channel contains it (walking
/// both ways if the channel is open); starting from a pair-colored hole
/// edge walks inward from that edge.
pub fn find_channel(
    t: &Triangulation,
    ec: &TaitColoring,
    start: ChannelStart,
    pair: ChannelPair,
) -> Result<Channel, ChannelError> {
    let fingerprint = ec.fingerprint();
    match start {
        ChannelStart::HoleEdge(e) => {
            if !t.is_hole_edge(e) {
                let (u, v) = t.endpoints(e);
                return Err(ChannelError::NotHoleEdge { u: u.0, v: v.0 });
            }
            let color = ec.color(e);
            if !pair.contains(color) {
                return Err(ChannelError::WrongStartColor { pair, found: color });
            }
            let hole = t.hole().expect("hole edge implies hole");
            let face = t.face_across(e, hole);
            let (triangles, crossings, terminal) = walk(t, ec, pair, face, e);
            let out = terminal.expect("open walks terminate at the hole");
            Ok(Channel {
                pair,
                kind: ChannelKind::Open,
                triangles,
                interior_edges: crossings,
                endpoints: Some((e, out)),
                fingerprint,
            })
        }
        ChannelStart::Triangle(f) => {
            if Some(f) == t.hole() {
                return Err(ChannelError::StartIsHole);
            }
            let [e1, e2] = pair_edges(t, ec, f, pair);
            // Walk "forward" using e1 as the pretend entry, so the first
            // exit crosses e2.
            let (fwd_tris, fwd_cross, fwd_terminal) = walk(t, ec, pair, f, e1);
            match fwd_terminal {
                None => Ok(Channel {
                    pair,
                    kind: ChannelKind::Closed,
                    triangles: fwd_tris,
                    interior_edges: fwd_cross,
                    endpoints: None,
                    fingerprint,
                }),
                Some(out_fwd) => {
                    // Open: walk the other way and stitch the halves.
                    let (bwd_tris, bwd_cross, bwd_terminal) = walk(t, ec, pair, f, e2);
                    let out_bwd = bwd_terminal.expect("both ends of an open channel reach the hole");
                    let mut triangles: Vec<FaceId> = bwd_tris.into_iter().skip(1).rev().collect();
                    triangles.push(f);
                    triangles.extend(fwd_tris.into_iter().skip(1));
                    let mut interior: Vec<EdgeId> = bwd_cross.into_iter().rev().collect();
                    interior.extend(fwd_cross);
                    Ok(Channel {
                        pair,
                        kind: ChannelKind::Open,
                        triangles,
                        interior_edges: interior,
                        endpoints: Some((out_bwd, out_fwd)),
                        fingerprint,
                    })
                }
            }
        }
    }
}

/// All channels of one pair.  Every triangle belongs to exactly one channel
/// (channels of the same pair cannot cross), and at least one channel
/// exists on a nonempty triangulation.
pub fn all_channels(t: &Triangulation, ec: &TaitColoring, pair: ChannelPair) -> Vec<Channel> {
    let mut seen = vec![false; t.face_count()];
    let mut out = Vec::new();
    // Open channels first, anchored at pair-colored hole edges in id order.
    if t.hole().is_some() {
        let hole_edges: Vec<EdgeId> = t.hole_edges().expect("hole").iter().map(|&e| EdgeId(e)).collect();
        for e in hole_edges {
            if !pair.contains(ec.color(e)) {
                continue;
            }
            let hole = t.hole().expect("hole");
            let first = t.face_across(e, hole);
            if seen[first.0] {
                continue;
            }
            let ch = find_channel(t, ec, ChannelStart::HoleEdge(e), pair).expect("validated start");
            for f in &ch.triangles {
                debug_assert!(!seen[f.0]);
                seen[f.0] = true;
            }
            out.push(ch);
        }
    }
    // Remaining triangles lie on closed channels.
    for f in t.triangles() {
        if seen[f.0] {
            continue;
        }
        let ch = find_channel(t, ec, ChannelStart::Triangle(f), pair).expect("triangle start");
        for g in &ch.triangles {
            debug_assert!(!seen[g.0]);
            seen[g.0] = true;
        }
        out.push(ch);
    }
    out
}

/// Exchanges the pair colors along one channel, returning the new coloring.
pub fn swap_channel(t: &Triangulation, ec: &TaitColoring, ch: &Channel) -> Result<TaitColoring, ChannelError> {
    if ch.fingerprint != ec.fingerprint() {
        return Err(ChannelError::StaleChannel);
    }
    let mut out = ec.clone();
    for e in ch.swap_edges() {
        debug_assert!(ch.pair.contains(out.color(e)));
        out.set_color(e, ch.pair.swap(out.color(e)));
    }
    debug_assert!(crate::coloring::validate_tait(t, &out).is_empty());
    let _ = t;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{edge_to_face, validate_tait, vertex_to_edge, VertexColor, VertexColoring};
    use crate::oracle::brute_force_4color;
    use crate::triangulation::{corpus_graph, VertexId};

    fn colored(name: &str) -> (Triangulation, TaitColoring) {
        let t = corpus_graph(name).unwrap();
        let vc = brute_force_4color(&t).unwrap().expect("corpus graphs are colorable");
        let ec = vertex_to_edge(&t, &vc).unwrap();
        (t, ec)
    }

    #[test]
    fn pair_algebra() {
        assert_eq!(ChannelPair::AC.boundary(), EdgeColor::B);
        assert_eq!(ChannelPair::AC.swap(EdgeColor::A), EdgeColor::C);
        assert_eq!(ChannelPair::AC.swap(EdgeColor::B), EdgeColor::B);
        assert_eq!(ChannelPair::from_colors(EdgeColor::C, EdgeColor::A), Some(ChannelPair::AC));
        assert_eq!(ChannelPair::from_name("ca"), Some(ChannelPair::AC));
        for pair in ChannelPair::ALL {
            let (x, y) = pair.colors();
            assert!(pair.contains(x) && pair.contains(y) && !pair.contains(pair.boundary()));
        }
    }

    #[test]
    fn tetrahedron_ac_channel_covers_all_triangles() {
        let t = corpus_graph("tetrahedron").unwrap();
        let vc = VertexColoring::new(vec![
            VertexColor::C1,
            VertexColor::C2,
            VertexColor::C3,
            VertexColor::C4,
        ]);
        let ec = vertex_to_edge(&t, &vc).unwrap();
        let chans = all_channels(&t, &ec, ChannelPair::AC);
        let total: usize = chans.iter().map(|c| c.triangles.len()).sum();
        assert_eq!(total, 4);
        for ch in &chans {
            assert_eq!(ch.kind, ChannelKind::Closed);
        }
    }

    #[test]
    fn channels_partition_triangles_on_corpus() {
        for name in ["tetrahedron", "octahedron", "icosahedron", "errera", "tutte_dual"] {
            let (t, ec) = colored(name);
            for pair in ChannelPair::ALL {
                let chans = all_channels(&t, &ec, pair);
                assert!(!chans.is_empty(), "{name}: no {pair} channel");
                let mut count = vec![0usize; t.face_count()];
                for ch in &chans {
                    for f in &ch.triangles {
                        count[f.0] += 1;
                    }
                }
                for f in t.triangles() {
                    assert_eq!(count[f.0], 1, "{name}: triangle {f} not covered exactly once");
                }
            }
        }
    }

    #[test]
    fn swap_is_valid_flips_exactly_the_channel_and_is_an_involution() {
        let (t, ec) = colored("icosahedron");
        for pair in ChannelPair::ALL {
            for ch in all_channels(&t, &ec, pair) {
                let swapped = swap_channel(&t, &ec, &ch).unwrap();
                assert!(validate_tait(&t, &swapped).is_empty());
                let before = edge_to_face(&t, &ec);
                let after = edge_to_face(&t, &swapped);
                let on: std::collections::HashSet<usize> = ch.triangles.iter().map(|f| f.0).collect();
                for f in t.triangles() {
                    if on.contains(&f.0) {
                        assert_eq!(after[f.0], before[f.0].map(|o| o.flipped()));
                    } else {
                        assert_eq!(after[f.0], before[f.0]);
                    }
                }
                // Edges off the channel keep their colors.
                let swap_set: std::collections::HashSet<EdgeId> = ch.swap_edges().collect();
                for e in t.edge_ids() {
                    if swap_set.contains(&e) {
                        assert_eq!(swapped.color(e), ch.pair.swap(ec.color(e)));
                    } else {
                        assert_eq!(swapped.color(e), ec.color(e));
                    }
                }
                // Swapping again restores the original bit-exactly.
                let ch2 = find_channel(&t, &swapped, ChannelStart::Triangle(ch.triangles[0]), pair).unwrap();
                let restored = swap_channel(&t, &swapped, &ch2).unwrap();
                assert_eq!(restored, ec);
            }
        }
    }

    #[test]
    fn stale_channel_rejected() {
        let (t, ec) = colored("octahedron");
        let ch = all_channels(&t, &ec, ChannelPair::AB).into_iter().next().unwrap();
        let other = swap_channel(&t, &ec, &ch).unwrap();
        assert!(matches!(
            swap_channel(&t, &other, &ch),
            Err(ChannelError::StaleChannel)
        ));
    }

    #[test]
    fn open_channels_end_on_pair_colored_hole_edges() {
        let t = corpus_graph("icosahedron").unwrap().puncture(VertexId(3)).unwrap();
        let vc = brute_force_4color(&t).unwrap().unwrap();
        let ec = vertex_to_edge(&t, &vc).unwrap();
        for pair in ChannelPair::ALL {
            let chans = all_channels(&t, &ec, pair);
            let mut endpoint_edges = Vec::new();
            for ch in &chans {
                match ch.kind {
                    ChannelKind::Open => {
                        let (a, b) = ch.endpoints.expect("open channels have endpoints");
                        assert_ne!(a, b);
                        for e in [a, b] {
                            assert!(t.is_hole_edge(e));
                            assert!(pair.contains(ec.color(e)));
                            endpoint_edges.push(e);
                        }
                        assert_eq!(ch.interior_edges.len() + 1, ch.triangles.len());
                    }
                    ChannelKind::Closed => {
                        assert!(ch.endpoints.is_none());
                        assert_eq!(ch.interior_edges.len(), ch.triangles.len());
                    }
                }
            }
            // Every pair-colored hole edge is an endpoint of exactly one
            // open channel.
            let mut pair_hole_edges: Vec<EdgeId> = t
                .hole_edges()
                .unwrap()
                .iter()
                .map(|&e| EdgeId(e))
                .filter(|&e| pair.contains(ec.color(e)))
                .collect();
            endpoint_edges.sort();
            pair_hole_edges.sort();
            assert_eq!(endpoint_edges, pair_hole_edges);
        }
    }

    #[test]
    fn find_channel_from_triangle_matches_hole_anchor() {
        let t = corpus_graph("octahedron").unwrap().puncture(VertexId(0)).unwrap();
        let vc = brute_force_4color(&t).unwrap().unwrap();
        let ec = vertex_to_edge(&t, &vc).unwrap();
        let pair = ChannelPair::AB;
        for ch in all_channels(&t, &ec, pair) {
            for &f in &ch.triangles {
                let again = find_channel(&t, &ec, ChannelStart::Triangle(f), pair).unwrap();
                let mut a: Vec<usize> = again.triangles.iter().map(|x| x.0).collect();
                let mut b: Vec<usize> = ch.triangles.iter().map(|x| x.0).collect();
                a.sort();
                b.sort();
                assert_eq!(a, b);
                assert_eq!(again.identity(), ch.identity());
            }
        }
    }

    #[test]
    fn wrong_start_color_rejected() {
        let t = corpus_graph("icosahedron").unwrap().puncture(VertexId(0)).unwrap();
        let vc = brute_force_4color(&t).unwrap().unwrap();
        let ec = vertex_to_edge(&t, &vc).unwrap();
        let hole_edge = EdgeId(t.hole_edges().unwrap()[0]);
        let color = ec.color(hole_edge);
        let (x, y) = (color, EdgeColor::ALL.into_iter().find(|&c| c != color).unwrap());
        let bad_pair = ChannelPair::from_colors(
            EdgeColor::ALL.into_iter().find(|&c| c != x && c != y).unwrap(),
            y,
        )
        .unwrap();
        if !bad_pair.contains(color) {
            assert!(matches!(
                find_channel(&t, &ec, ChannelStart::HoleEdge(hole_edge), bad_pair),
                Err(ChannelError::WrongStartColor { .. })
            ));
        }
        // A non-hole edge is rejected outright.
        let interior = t.edge_ids().find(|&e| !t.is_hole_edge(e)).unwrap();
        assert!(matches!(
            find_channel(&t, &ec, ChannelStart::HoleEdge(interior), ChannelPair::AB),
            Err(ChannelError::NotHoleEdge { .. })
        ));
    }

    #[test]
    fn boundary_color_count_is_conserved_by_swaps() {
        let (t, ec) = colored("errera");
        for pair in ChannelPair::ALL {
            let boundary = pair.boundary();
            let count = |c: &TaitColoring| c.colors().iter().filter(|&&x| x == boundary).count();
            for ch in all_channels(&t, &ec, pair) {
                let swapped = swap_channel(&t, &ec, &ch).unwrap();
                assert_eq!(count(&ec), count(&swapped));
            }
        }
    }
}
