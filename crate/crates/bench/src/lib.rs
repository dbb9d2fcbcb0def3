//! Scenes shared by the benchmarks.

use epshull::scenegen::{stable_random_scene, SceneGenConfig};
use epshull::{parse_scene, GeneratorScene};

/// Named small scenes with known structure.
pub fn canonical() -> Vec<(&'static str, GeneratorScene)> {
    let texts = [
        ("single_point", "epsilon 1\npoint 0 0".to_string()),
        ("tangent_discs", "epsilon 1\npoint -1 0\npoint 1 0".to_string()),
        ("lens", format!("epsilon {}\npoint -1 0\npoint 1 0", 2f64.sqrt())),
        ("triangle_hole", format!("epsilon 1.1\npoint 0 0\npoint 2 0\npoint 1 {}", 3f64.sqrt())),
        ("stadium", "epsilon 1\nsegment 0 0 1 0".to_string()),
    ];
    texts.into_iter().map(|(n, t)| (n, parse_scene(&t).expect("canonical scene parses"))).collect()
}

/// A seeded random scene with exactly `n` generators drawn from the
/// default configuration.
pub fn random(seed: u64, n: usize) -> GeneratorScene {
    let cfg = SceneGenConfig { max_generators: n, ..SceneGenConfig::default() };
    (seed..)
        .filter_map(|s| stable_random_scene(s, &cfg))
        .find(|s| s.generators().len() == n || n == 1)
        .expect("a stable scene exists")
}
