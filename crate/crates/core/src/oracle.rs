//! Independent brute-force coloring oracle.
//!
//! Plain backtracking with forward checking: every vertex keeps a bitmask
//! domain of colors still allowed by its colored neighbors, the vertex with
//! the fewest remaining colors is assigned next (ties to the smallest id),
//! and colors are tried in ascending order, so results are deterministic.
//!
//! The single-coloring entry point first peels interior degree-3 vertices:
//! in a triangulation their three neighbors form a triangle, so the peeled
//! vertex's color is forced once the rest is colored.  Stack-built
//! triangulations collapse to a tiny core this way, which keeps the search
//! out of the exponential tail that a fixed-order backtracker falls into on
//! near-uniquely-colorable instances.  The oracle stays deliberately
//! ignorant of channels and Kempe-style repair: it is the ground truth the
//! rest of the crate is tested against.

use std::collections::{HashMap, HashSet};
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{vertex_to_edge, VertexColor, VertexColoring};
use crate::triangulation::{Triangulation, VertexId};

/// Default cap on instance size for the oracle.
pub const DEFAULT_VERTEX_CAP: usize = 200;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("instance has {got} vertices, above the cap of {cap}")]
    CapExceeded { got: usize, cap: usize },
    #[error("enumeration exceeded the cap of {cap} colorings")]
    CountCapExceeded { cap: u64 },
    #[error("enumeration needs at least 4 vertices, got {0}")]
    TooSmall(usize),
}

/// Enumerates proper 4-colorings in a fixed order, invoking `visit` on each;
/// stops early when `visit` breaks.
///
/// Backtracking state: a color bitmask domain per vertex, updated by forward
/// checking on every assignment; the next vertex is always one with the
/// smallest remaining domain (smallest id on ties), colors in ascending
/// order.
pub fn for_each_coloring<F>(t: &Triangulation, mut visit: F)
where
    F: FnMut(&VertexColoring) -> ControlFlow<()>,
{
    struct Search<'a, F> {
        t: &'a Triangulation,
        domains: Vec<u8>,
        assigned: Vec<Option<VertexColor>>,
        remaining: usize,
        visit: &'a mut F,
    }

    impl<F> Search<'_, F>
    where
        F: FnMut(&VertexColoring) -> ControlFlow<()>,
    {
        fn run(&mut self) -> ControlFlow<()> {
            if self.remaining == 0 {
                let colors = self.assigned.iter().map(|c| c.expect("complete")).collect();
                return (self.visit)(&VertexColoring::new(colors));
            }
            let v = (0..self.domains.len())
                .filter(|&v| self.assigned[v].is_none())
                .min_by_key(|&v| (self.domains[v].count_ones(), v))
                .expect("remaining > 0");
            let domain = self.domains[v];
            if domain == 0 {
                return ControlFlow::Continue(());
            }
            for color in VertexColor::ALL {
                let bit = 1u8 << (color.number() - 1);
                if domain & bit == 0 {
                    continue;
                }
                self.assigned[v] = Some(color);
                self.remaining -= 1;
                // Forward checking: prune the color from open neighbors,
                // remembering which were actually pruned.
                let mut pruned: Vec<usize> = Vec::new();
                let mut wipeout = false;
                for &w in self.t.neighbors(VertexId(v)) {
                    if self.assigned[w].is_none() && self.domains[w] & bit != 0 {
                        self.domains[w] &= !bit;
                        pruned.push(w);
                        if self.domains[w] == 0 {
                            wipeout = true;
                        }
                    }
                }
                let flow = if wipeout { ControlFlow::Continue(()) } else { self.run() };
                for w in pruned {
                    self.domains[w] |= bit;
                }
                self.assigned[v] = None;
                self.remaining += 1;
                flow?;
            }
            ControlFlow::Continue(())
        }
    }

    let n = t.vertex_count();
    let mut search = Search {
        t,
        domains: vec![0b1111; n],
        assigned: vec![None; n],
        remaining: n,
        visit: &mut visit,
    };
    let _ = search.run();
}

/// Set of assignment levels, used for conflict tracking.
#[derive(Clone, Default)]
struct LevelSet {
    words: Vec<u64>,
}

impl LevelSet {
    fn new(levels: usize) -> LevelSet {
        LevelSet {
            words: vec![0; levels / 64 + 1],
        }
    }

    fn insert(&mut self, level: usize) {
        self.words[level / 64] |= 1 << (level % 64);
    }

    fn remove(&mut self, level: usize) {
        self.words[level / 64] &= !(1 << (level % 64));
    }

    fn union(&mut self, other: &LevelSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    fn remove_from(&mut self, level: usize) {
        // Clears `level` and everything above it.
        let w = level / 64;
        self.words[w] &= (1u64 << (level % 64)) - 1;
        for word in &mut self.words[w + 1..] {
            *word = 0;
        }
    }

    fn max_level(&self) -> Option<usize> {
        for (i, &word) in self.words.iter().enumerate().rev() {
            if word != 0 {
                return Some(i * 64 + 63 - word.leading_zeros() as usize);
            }
        }
        None
    }

    fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }
}

/// First-solution search over a raw adjacency list: forward checking with
/// conflict-directed backjumping over the minimum-remaining-values order
/// (ties to the smallest id, colors ascending).  Backjumping only skips
/// refuted subtrees, so the coloring found is the same one plain
/// backtracking would find, just without the thrashing on rigid instances.
fn search_first(adj: &[Vec<usize>]) -> Option<Vec<VertexColor>> {
    let n = adj.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut domains = vec![0b1111u8; n];
    let mut assigned: Vec<Option<VertexColor>> = vec![None; n];
    // Assignment stack state, indexed by level.
    let mut var_at: Vec<usize> = vec![usize::MAX; n];
    let mut tried: Vec<u8> = vec![0; n];
    // FC prunings performed by the assignment at each level: (vertex, bit).
    let mut pruned_by: Vec<Vec<(usize, u8)>> = vec![Vec::new(); n];
    // Exact pruner sets: levels whose assignment pruned this vertex.  Kept
    // in lockstep with the domain restores, so entries never go stale.
    let mut past_fc: Vec<LevelSet> = (0..n).map(|_| LevelSet::new(n)).collect();
    // Learned conflict levels of the variable owning each level.
    let mut conf: Vec<LevelSet> = (0..n).map(|_| LevelSet::new(n)).collect();
    let mut level = 0usize;
    let mut fresh = true;
    loop {
        if level == n {
            return Some(assigned.iter().map(|c| c.expect("complete")).collect());
        }
        if fresh {
            let v = (0..n)
                .filter(|&v| assigned[v].is_none())
                .min_by_key(|&v| (domains[v].count_ones(), v))
                .expect("level < n");
            var_at[level] = v;
            tried[level] = 0;
            conf[v].clear();
        }
        let v = var_at[level];
        let candidates = domains[v] & !tried[level];
        let next_color = VertexColor::ALL
            .into_iter()
            .find(|c| candidates & (1 << (c.number() - 1)) != 0);
        match next_color {
            Some(color) => {
                let bit = 1u8 << (color.number() - 1);
                tried[level] |= bit;
                assigned[v] = Some(color);
                let mut wiped: Option<usize> = None;
                debug_assert!(pruned_by[level].is_empty());
                for &w in &adj[v] {
                    if assigned[w].is_none() && domains[w] & bit != 0 {
                        domains[w] &= !bit;
                        past_fc[w].insert(level);
                        pruned_by[level].push((w, bit));
                        if domains[w] == 0 {
                            wiped = Some(w);
                            break;
                        }
                    }
                }
                match wiped {
                    None => {
                        level += 1;
                        fresh = true;
                    }
                    Some(w) => {
                        // The wiped neighbor's pruners explain this value's
                        // failure.
                        let reasons = past_fc[w].clone();
                        conf[v].union(&reasons);
                        for (x, b) in pruned_by[level].drain(..) {
                            domains[x] |= b;
                            past_fc[x].remove(level);
                        }
                        assigned[v] = None;
                        fresh = false;
                    }
                }
            }
            None => {
                // Domain exhausted: everything that constrained this vertex
                // is a reason; jump to the deepest such level.
                let mut jump_set = conf[v].clone();
                jump_set.union(&past_fc[v]);
                jump_set.remove_from(level);
                let h = jump_set.max_level()?;
                // Undo levels level-1 down to h.
                for l in (h..level).rev() {
                    let u = var_at[l];
                    for (x, b) in pruned_by[l].drain(..) {
                        domains[x] |= b;
                        past_fc[x].remove(l);
                    }
                    assigned[u] = None;
                    if l > h {
                        conf[u].clear();
                        tried[l] = 0;
                    }
                }
                // The culprit absorbs the remaining reasons.
                let culprit = var_at[h];
                jump_set.remove_from(h);
                conf[culprit].union(&jump_set);
                conf[v].clear();
                level = h;
                fresh = false;
            }
        }
    }
}

/// First proper 4-coloring in the oracle's deterministic order, or `None`
/// if none exists (which would disprove the four color theorem and is
/// treated as a build-stopping bug by every caller).
pub fn brute_force_4color(t: &Triangulation) -> Result<Option<VertexColoring>, OracleError> {
    brute_force_4color_capped(t, DEFAULT_VERTEX_CAP)
}

pub fn brute_force_4color_capped(
    t: &Triangulation,
    cap: usize,
) -> Result<Option<VertexColoring>, OracleError> {
    if t.vertex_count() > cap {
        return Err(OracleError::CapExceeded {
            got: t.vertex_count(),
            cap,
        });
    }
    let n = t.vertex_count();
    // Peel interior degree-3 vertices; their colors are forced afterwards.
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|v| t.degree(VertexId(v))).collect();
    let mut alive_count = n;
    let mut peeled: Vec<(usize, [usize; 3])> = Vec::new();
    loop {
        if alive_count <= 4 {
            break;
        }
        let candidate = (0..n).find(|&v| {
            alive[v]
                && degree[v] == 3
                && !t.is_hole_vertex(VertexId(v))
        });
        let Some(v) = candidate else { break };
        let nbrs: Vec<usize> = t.neighbors(VertexId(v)).iter().copied().filter(|&w| alive[w]).collect();
        debug_assert_eq!(nbrs.len(), 3);
        alive[v] = false;
        alive_count -= 1;
        for &w in &nbrs {
            degree[w] -= 1;
        }
        peeled.push((v, [nbrs[0], nbrs[1], nbrs[2]]));
    }
    // Search the remaining core.
    let core: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    let index: HashMap<usize, usize> = core.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let adj: Vec<Vec<usize>> = core
        .iter()
        .map(|&v| {
            t.neighbors(VertexId(v))
                .iter()
                .filter(|&&w| alive[w])
                .map(|&w| index[&w])
                .collect()
        })
        .collect();
    let Some(core_colors) = search_first(&adj) else {
        return Ok(None);
    };
    let mut colors: Vec<Option<VertexColor>> = vec![None; n];
    for (i, &v) in core.iter().enumerate() {
        colors[v] = Some(core_colors[i]);
    }
    // Restore peeled vertices in reverse order; each neighbor triple is a
    // colored triangle, leaving exactly one free color.
    for (v, nbrs) in peeled.into_iter().rev() {
        let mut used = 0u8;
        for w in nbrs {
            used |= 1 << (colors[w].expect("restored later than its neighbors").number() - 1);
        }
        let free = VertexColor::ALL
            .into_iter()
            .find(|c| used & (1 << (c.number() - 1)) == 0)
            .expect("triangle neighbors use three colors");
        colors[v] = Some(free);
    }
    let vc = VertexColoring::new(colors.into_iter().map(|c| c.expect("total")).collect());
    debug_assert!(vc.is_proper(t));
    Ok(Some(vc))
}

/// Exact counts of proper vertex 4-colorings and distinct induced Tait
/// colorings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ColoringEnumeration {
    pub instance_fingerprint: u64,
    pub vertex_colorings: u64,
    pub tait_colorings: u64,
    /// Full list, kept only for small enumerations.
    #[serde(skip)]
    pub colorings: Option<Vec<VertexColoring>>,
}

/// Threshold under which [`enumerate_colorings`] retains the full list.
const KEEP_LIST_LIMIT: u64 = 4096;

/// Counts all proper 4-colorings, failing once the count exceeds `cap`.
/// The Klein translations act freely, so the vertex count is always exactly
/// four times the Tait count on a connected graph.
pub fn enumerate_colorings(t: &Triangulation, cap: u64) -> Result<ColoringEnumeration, OracleError> {
    if t.vertex_count() < 4 {
        return Err(OracleError::TooSmall(t.vertex_count()));
    }
    let mut count: u64 = 0;
    let mut taits: HashSet<Vec<u8>> = HashSet::new();
    let mut list: Vec<VertexColoring> = Vec::new();
    let mut overflow = false;
    for_each_coloring(t, |vc| {
        count += 1;
        if count > cap {
            overflow = true;
            return ControlFlow::Break(());
        }
        let ec = vertex_to_edge(t, vc).expect("oracle colorings are proper");
        taits.insert(ec.pack());
        if count <= KEEP_LIST_LIMIT {
            list.push(vc.clone());
        }
        ControlFlow::Continue(())
    });
    if overflow {
        return Err(OracleError::CountCapExceeded { cap });
    }
    let instance_fingerprint = crate::fnv1a(
        t.rotation()
            .iter()
            .flat_map(|nbrs| nbrs.iter().flat_map(|v| (*v as u64).to_le_bytes())),
    );
    Ok(ColoringEnumeration {
        instance_fingerprint,
        vertex_colorings: count,
        tait_colorings: taits.len() as u64,
        colorings: if count <= KEEP_LIST_LIMIT { Some(list) } else { None },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::validate_tait;
    use crate::triangulation::{corpus_graph, random_triangulation};

    #[test]
    fn tetrahedron_uses_all_four_colors() {
        let t = corpus_graph("tetrahedron").unwrap();
        let vc = brute_force_4color(&t).unwrap().unwrap();
        let distinct: HashSet<u8> = vc.colors().iter().map(|c| c.number()).collect();
        assert_eq!(distinct.len(), 4);
        assert!(vc.is_proper(&t));
    }

    #[test]
    fn icosahedron_colored_and_valid() {
        let t = corpus_graph("icosahedron").unwrap();
        let vc = brute_force_4color(&t).unwrap().unwrap();
        assert!(vc.is_proper(&t));
        let ec = vertex_to_edge(&t, &vc).unwrap();
        assert!(validate_tait(&t, &ec).is_empty());
    }

    #[test]
    fn determinism() {
        let t = random_triangulation(30, 5).unwrap();
        let a = brute_force_4color(&t).unwrap().unwrap();
        let b = brute_force_4color(&t).unwrap().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cap_is_enforced() {
        let t = random_triangulation(30, 5).unwrap();
        assert!(matches!(
            brute_force_4color_capped(&t, 10),
            Err(OracleError::CapExceeded { .. })
        ));
    }

    #[test]
    fn tetrahedron_enumeration() {
        let t = corpus_graph("tetrahedron").unwrap();
        let e = enumerate_colorings(&t, 1000).unwrap();
        assert_eq!(e.vertex_colorings, 24);
        assert_eq!(e.tait_colorings, 6);
        assert_eq!(e.colorings.as_ref().map(|l| l.len()), Some(24));
    }

    #[test]
    fn octahedron_enumeration_divisible_by_full_orbit() {
        let t = corpus_graph("octahedron").unwrap();
        let e = enumerate_colorings(&t, 10_000).unwrap();
        assert_eq!(e.vertex_colorings, 96);
        assert_eq!(e.vertex_colorings % 24, 0);
        assert_eq!(e.vertex_colorings, 4 * e.tait_colorings);
    }

    #[test]
    fn vertex_count_is_four_times_tait_count() {
        for seed in [2u64, 9] {
            let t = random_triangulation(9, seed).unwrap();
            let e = enumerate_colorings(&t, 2_000_000).unwrap();
            assert_eq!(e.vertex_colorings, 4 * e.tait_colorings, "seed {seed}");
        }
    }

    #[test]
    fn degenerate_inputs_rejected() {
        let t = corpus_graph("tetrahedron").unwrap();
        let small = t.puncture(VertexId(0)).unwrap();
        assert!(matches!(enumerate_colorings(&small, 100), Err(OracleError::TooSmall(3))));
        assert!(matches!(
            enumerate_colorings(&corpus_graph("icosahedron").unwrap(), 10),
            Err(OracleError::CountCapExceeded { .. })
        ));
    }

    #[test]
    fn punctured_graphs_are_colorable() {
        let t = corpus_graph("icosahedron").unwrap().puncture(VertexId(7)).unwrap();
        let vc = brute_force_4color(&t).unwrap().unwrap();
        assert!(vc.is_proper(&t));
    }

    /// Backjumping skips only refuted subtrees, so the first coloring it
    /// finds must equal the first coloring of the plain enumeration.  The
    /// degree-3 peel changes which vertices are searched, so compare on the
    /// raw searcher.
    #[test]
    fn backjumping_matches_plain_enumeration_order() {
        for seed in 0..25u64 {
            let t = random_triangulation(5 + (seed as usize % 9), 400 + seed).unwrap();
            let adj: Vec<Vec<usize>> = (0..t.vertex_count())
                .map(|v| t.neighbors(VertexId(v)).to_vec())
                .collect();
            let fast = search_first(&adj).expect("colorable");
            let mut first = None;
            for_each_coloring(&t, |vc| {
                first = Some(vc.clone());
                ControlFlow::Break(())
            });
            let first = first.expect("colorable");
            assert_eq!(fast, first.colors().to_vec(), "seed {seed}");
        }
    }

    #[test]
    fn oracle_handles_rigid_stacked_instances() {
        // Near-Apollonian instances are almost uniquely 4-colorable and used
        // to stall chronological search; they must stay fast now.
        let t = random_triangulation(140, 1075).unwrap();
        let started = std::time::Instant::now();
        let vc = brute_force_4color(&t).unwrap().unwrap();
        assert!(vc.is_proper(&t));
        assert!(started.elapsed().as_secs_f64() < 1.0);
    }
}
