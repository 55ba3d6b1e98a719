//! Cross-module invariants, each checked against an independently coded
//! oracle: channel partitions are re-derived by union-find over pair-colored
//! edges, and knob minimality is re-derived by brute-force enumeration of
//! monochromatic simple cycles.

use std::collections::{BTreeSet, HashMap, HashSet};

use kempe_core::reduction::{attempt_reduction_guided, Outcome};
use kempe_core::{
    all_channels, brute_force_4color, check_closed_trail, corpus_graph, find_knobs, random_triangulation,
    validate_tait, vertex_to_edge, wheel_sum, ChannelKind, ChannelPair, EdgeColor, EdgeId, FaceId, TaitColoring,
    Triangulation, VertexId,
};

fn oracle_colored(t: &Triangulation) -> TaitColoring {
    let vc = brute_force_4color(t).unwrap().expect("colorable");
    vertex_to_edge(t, &vc).unwrap()
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Channels of one pair, re-derived without walking: triangles linked by a
/// shared pair-colored non-hole edge form one channel.
fn channel_components(t: &Triangulation, ec: &TaitColoring, pair: ChannelPair) -> Vec<BTreeSet<usize>> {
    let mut dsu = Dsu::new(t.face_count());
    for e in t.edge_ids() {
        if pair.contains(ec.color(e)) && !t.is_hole_edge(e) {
            let [a, b] = t.faces_of_edge(e);
            dsu.union(a.0, b.0);
        }
    }
    let mut comps: HashMap<usize, BTreeSet<usize>> = HashMap::new();
    for f in t.triangles() {
        comps.entry(dsu.find(f.0)).or_default().insert(f.0);
    }
    let mut out: Vec<BTreeSet<usize>> = comps.into_values().collect();
    out.sort();
    out
}

#[test]
fn channel_walks_match_union_find_components() {
    let mut graphs: Vec<Triangulation> = vec![
        corpus_graph("tetrahedron").unwrap(),
        corpus_graph("errera").unwrap(),
        corpus_graph("tutte_dual").unwrap(),
    ];
    for seed in 0..25u64 {
        let t = random_triangulation(6 + (seed as usize % 30), 600 + seed).unwrap();
        if seed % 3 == 0 {
            if let Some(v) = t.vertices().find(|&v| t.degree(v) <= 5) {
                graphs.push(t.puncture(v).unwrap());
            }
        }
        graphs.push(t);
    }
    for (gi, t) in graphs.iter().enumerate() {
        let ec = oracle_colored(t);
        for pair in ChannelPair::ALL {
            let mut walked: Vec<BTreeSet<usize>> = all_channels(t, &ec, pair)
                .into_iter()
                .map(|ch| ch.triangles.iter().map(|f| f.0).collect())
                .collect();
            walked.sort();
            assert_eq!(walked, channel_components(t, &ec, pair), "graph {gi}, pair {pair}");
            // Kind agrees with the count of pair-colored hole edges touching
            // the component: two for a path, zero for a cycle.
            for ch in all_channels(t, &ec, pair) {
                let boundary_touches: usize = ch
                    .triangles
                    .iter()
                    .flat_map(|&f| t.face_edges(f))
                    .filter(|&&e| t.is_hole_edge(EdgeId(e)) && pair.contains(ec.color(EdgeId(e))))
                    .count();
                match ch.kind {
                    ChannelKind::Open => assert_eq!(boundary_touches, 2),
                    ChannelKind::Closed => assert_eq!(boundary_touches, 0),
                }
            }
        }
    }
}

/// All simple cycles of the subgraph of `color`-colored edges, canonical
/// vertex lists.  Returns `None` if the instance exceeds the enumeration
/// cap (not expected at these sizes).
fn monochromatic_cycles(t: &Triangulation, ec: &TaitColoring, color: EdgeColor, cap: usize) -> Option<Vec<Vec<usize>>> {
    let n = t.vertex_count();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in t.edge_ids() {
        if ec.color(e) == color {
            let (u, v) = t.endpoints(e);
            adj[u.0].push(v.0);
            adj[v.0].push(u.0);
        }
    }
    let mut cycles: HashSet<Vec<usize>> = HashSet::new();
    let mut steps = 0usize;
    // Cycles are rooted at their smallest vertex; DFS only visits larger ids.
    fn dfs(
        adj: &[Vec<usize>],
        root: usize,
        cur: usize,
        path: &mut Vec<usize>,
        on_path: &mut Vec<bool>,
        cycles: &mut HashSet<Vec<usize>>,
        steps: &mut usize,
        cap: usize,
    ) -> bool {
        *steps += 1;
        if *steps > cap {
            return false;
        }
        for &next in &adj[cur] {
            if next == root && path.len() >= 3 {
                let mut c = path.clone();
                // Canonical: rotation already starts at root; fix direction.
                if c.len() > 2 && c[1] > c[c.len() - 1] {
                    c[1..].reverse();
                }
                cycles.insert(c);
                continue;
            }
            if next <= root || on_path[next] {
                continue;
            }
            path.push(next);
            on_path[next] = true;
            let ok = dfs(adj, root, next, path, on_path, cycles, steps, cap);
            path.pop();
            on_path[next] = false;
            if !ok {
                return false;
            }
        }
        true
    }
    for root in 0..n {
        let mut path = vec![root];
        let mut on_path = vec![false; n];
        on_path[root] = true;
        if !dfs(&adj, root, root, &mut path, &mut on_path, &mut cycles, &mut steps, cap) {
            return None;
        }
    }
    let mut out: Vec<Vec<usize>> = cycles.into_iter().collect();
    out.sort();
    Some(out)
}

/// Faces on the non-reference side of a cycle: dual reachability with the
/// cycle's edges removed.
fn cycle_interior_faces(t: &Triangulation, cycle: &[usize]) -> BTreeSet<usize> {
    let cycle_edges: HashSet<EdgeId> = (0..cycle.len())
        .map(|i| {
            t.edge_between(VertexId(cycle[i]), VertexId(cycle[(i + 1) % cycle.len()]))
                .expect("cycle edge")
        })
        .collect();
    let reference = t.hole().unwrap_or(FaceId(0));
    let mut outside = vec![false; t.face_count()];
    outside[reference.0] = true;
    let mut stack = vec![reference];
    while let Some(f) = stack.pop() {
        for &e in t.face_edges(f) {
            if cycle_edges.contains(&EdgeId(e)) {
                continue;
            }
            let g = t.face_across(EdgeId(e), f);
            if !outside[g.0] {
                outside[g.0] = true;
                stack.push(g);
            }
        }
    }
    (0..t.face_count()).filter(|&f| !outside[f]).collect()
}

#[test]
fn knobs_match_brute_force_minimal_cycles() {
    let mut graphs: Vec<Triangulation> = vec![corpus_graph("octahedron").unwrap(), corpus_graph("errera").unwrap()];
    for seed in 0..40u64 {
        let t = random_triangulation(6 + (seed as usize % 26), 900 + seed).unwrap();
        if seed % 4 == 0 {
            if let Some(v) = t.vertices().find(|&v| t.degree(v) <= 5) {
                graphs.push(t.puncture(v).unwrap());
            }
        }
        graphs.push(t);
    }
    let mut knob_instances = 0usize;
    for (gi, t) in graphs.iter().enumerate() {
        let ec = oracle_colored(t);
        for color in EdgeColor::ALL {
            let Some(cycles) = monochromatic_cycles(t, &ec, color, 2_000_000) else {
                panic!("cycle enumeration cap exceeded on graph {gi}");
            };
            // Interior data per cycle, keyed by canonical cycle.
            let interiors: HashMap<Vec<usize>, BTreeSet<usize>> = cycles
                .iter()
                .map(|c| (c.clone(), cycle_interior_faces(t, c)))
                .collect();
            // A cycle is a minimal knob when no other same-color cycle lies
            // within its closed disk (interior edges plus the cycle itself).
            let mut expected: Vec<Vec<usize>> = Vec::new();
            for c in &cycles {
                let interior = &interiors[c];
                let closed_vertices: HashSet<usize> = interior
                    .iter()
                    .flat_map(|&f| t.face_vertices(FaceId(f)).iter().copied())
                    .chain(c.iter().copied())
                    .collect();
                let minimal = cycles.iter().all(|other| {
                    other == c || !other.iter().all(|v| closed_vertices.contains(v)) || {
                        // Vertices inside are necessary but not sufficient:
                        // every edge of `other` must lie in the closed disk.
                        let inside_edges: HashSet<EdgeId> = interior
                            .iter()
                            .flat_map(|&f| t.face_edges(FaceId(f)).iter().copied().map(EdgeId))
                            .collect();
                        let cycle_edges: HashSet<EdgeId> = (0..c.len())
                            .map(|i| {
                                t.edge_between(VertexId(c[i]), VertexId(c[(i + 1) % c.len()])).unwrap()
                            })
                            .collect();
                        !(0..other.len()).all(|i| {
                            let e = t
                                .edge_between(VertexId(other[i]), VertexId(other[(i + 1) % other.len()]))
                                .unwrap();
                            inside_edges.contains(&e) || cycle_edges.contains(&e)
                        })
                    }
                });
                if minimal {
                    expected.push(c.clone());
                }
            }
            expected.sort();
            let knobs = find_knobs(t, &ec, color);
            let mut got: Vec<Vec<usize>> = knobs.iter().map(|k| k.cycle_vertices.clone()).collect();
            got.sort();
            assert_eq!(got, expected, "graph {gi}, color {color}");
            for knob in &knobs {
                let interior: BTreeSet<usize> = knob.interior_faces.iter().map(|f| f.0).collect();
                assert_eq!(interior, interiors[&knob.cycle_vertices], "graph {gi}: interior mismatch");
                knob_instances += 1;
            }
        }
    }
    assert!(knob_instances > 0, "corpus produced no knobs to compare");
}

#[test]
fn guided_strategy_handles_square_holes() {
    let mut blocked = 0usize;
    for seed in 0..200u64 {
        let t = random_triangulation(8 + (seed as usize % 20), 1234 + seed).unwrap();
        let Some(v) = t.vertices().find(|&v| t.degree(v) == 4) else {
            continue;
        };
        let punct = t.puncture(v).unwrap();
        let ec = oracle_colored(&punct);
        let run = attempt_reduction_guided(&punct, &ec, 8).unwrap();
        assert_eq!(run.trace.outcome, Outcome::Reduced, "seed {seed}");
        if !run.trace.moves.is_empty() {
            blocked += 1;
            assert_eq!(run.trace.moves.len(), 1, "squares reduce in one swap");
        }
        if blocked >= 10 {
            break;
        }
    }
    assert!(blocked > 0, "no blocked square encountered");
}

#[test]
fn oracle_colorings_pass_every_structural_check() {
    for seed in 0..20u64 {
        let t = random_triangulation(10 + (seed as usize % 30), 555 + seed).unwrap();
        let ec = oracle_colored(&t);
        assert!(validate_tait(&t, &ec).is_empty());
        for trail in kempe_core::parity::sample_closed_trails(&t, seed, 25, 500) {
            check_closed_trail(&trail, &ec).unwrap();
        }
        for v in t.vertices() {
            assert!(wheel_sum(&t, &ec, v).unwrap().is_zero());
        }
    }
}
