//! Shared fixtures for the benchmark suite.

use kempe_core::{brute_force_4color, random_triangulation, vertex_to_edge, TaitColoring, Triangulation};

/// A deterministic colored instance of the given size.
pub fn colored_instance(n: usize, seed: u64) -> (Triangulation, TaitColoring) {
    let t = random_triangulation(n, seed).expect("n >= 4");
    let vc = brute_force_4color(&t)
        .expect("within cap")
        .expect("triangulations are 4-colorable");
    let ec = vertex_to_edge(&t, &vc).expect("proper");
    (t, ec)
}

/// A punctured instance with a pentagon hole, colored by the oracle.
pub fn punctured_instance(seed: u64) -> (Triangulation, TaitColoring) {
    for offset in 0..64 {
        let t = random_triangulation(30, seed + offset).expect("n >= 4");
        if let Some(v) = t.vertices().find(|&v| t.degree(v) == 5) {
            let punct = t.puncture(v).expect("degree 5");
            let vc = brute_force_4color(&punct)
                .expect("within cap")
                .expect("colorable");
            let ec = vertex_to_edge(&punct, &vc).expect("proper");
            return (punct, ec);
        }
    }
    unreachable!("a degree-5 vertex appears within a few seeds")
}
