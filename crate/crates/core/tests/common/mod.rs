//! Random graph helpers shared by the integration tests.
#![allow(dead_code)]

use ppestim::Graph;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random spanning tree plus independent extra edges with probability `p`.
pub fn random_connected(rng: &mut TestRng, n: usize, p: f64) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for k in 1..n {
        let parent = order[rng.gen_range(0..k)];
        edges.push((order[k], parent));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, edges).expect("valid random graph")
}

/// Like [`random_connected`], adding random edges until an odd cycle exists.
pub fn random_non_bipartite(rng: &mut TestRng, n: usize, p: f64) -> Graph {
    let mut g = random_connected(rng, n, p);
    while g.is_bipartite() {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i != j {
            let edges = g.edges().chain([(i, j)]);
            g = Graph::new(n, edges.collect::<Vec<_>>()).unwrap();
        }
    }
    g
}

pub fn random_size_connected(rng: &mut TestRng, lo: usize, hi: usize) -> Graph {
    let n = rng.gen_range(lo..=hi);
    let p = rng.gen_range(0.05..0.6);
    random_connected(rng, n, p)
}
