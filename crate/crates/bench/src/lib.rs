//! Shared fixtures for the pipeline benchmarks in `benches/`.

use rainbow_core::{random_two_connected, Graph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The cycle C_m on vertices 0..m.
pub fn cycle_graph(m: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (0..m).map(|i| (i, (i + 1) % m)).collect();
    Graph::new(m, &edges).unwrap()
}

/// A reproducible random 2-connected graph of the given order.
pub fn fixture(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_two_connected(n, &mut rng)
}
