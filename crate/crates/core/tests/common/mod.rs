#![allow(dead_code)]

use epshull::scenegen::{stable_random_scene, SceneGenConfig};
use epshull::{parse_scene, GeneratorScene};

pub const SQRT2: f64 = std::f64::consts::SQRT_2;

pub fn single_point() -> GeneratorScene {
    parse_scene("epsilon 1\npoint 0 0").unwrap()
}

pub fn tangent_discs() -> GeneratorScene {
    parse_scene("epsilon 1\npoint -1 0\npoint 1 0").unwrap()
}

pub fn lens() -> GeneratorScene {
    parse_scene(&format!("epsilon {SQRT2}\npoint -1 0\npoint 1 0")).unwrap()
}

pub fn triangle_hole() -> GeneratorScene {
    parse_scene(&format!("epsilon 1.1\npoint 0 0\npoint 2 0\npoint 1 {}", 3f64.sqrt())).unwrap()
}

pub fn triple_point() -> GeneratorScene {
    parse_scene("epsilon 1\npoint -1 0\npoint 1 0\npoint 0 -1").unwrap()
}

pub fn stadium() -> GeneratorScene {
    parse_scene("epsilon 1\nsegment 0 0 1 0").unwrap()
}

pub fn canonical() -> Vec<(&'static str, GeneratorScene)> {
    vec![
        ("single_point", single_point()),
        ("tangent_discs", tangent_discs()),
        ("lens", lens()),
        ("triangle_hole", triangle_hole()),
        ("triple_point", triple_point()),
        ("stadium", stadium()),
    ]
}

/// Stable random scene for `seed` from the default configuration.
pub fn random_scene(seed: u64) -> GeneratorScene {
    stable_random_scene(seed, &SceneGenConfig::default()).expect("stable scene within the attempt budget")
}
