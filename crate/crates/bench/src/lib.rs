//! Fixtures shared by the benchmarks.

use flood_core::graph::{generate_configuration, generate_er, largest_component};
use flood_core::{ComponentLabeling, DegreeModel, Graph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn er_fixture(n: usize, z: f64, seed: u64) -> (Graph, ComponentLabeling) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = generate_er(n, z, &mut rng).expect("valid ER parameters");
    let c = largest_component(&g);
    (g, c)
}

pub fn power_law_fixture(n: usize, tau: f64, seed: u64) -> (Graph, ComponentLabeling) {
    let model = DegreeModel::power_law(tau, n - 1).expect("valid exponent");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = generate_configuration(n, &model, &mut rng).expect("even degree sum");
    let c = largest_component(&g);
    (g, c)
}
