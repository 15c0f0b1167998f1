//! Benchmark inputs.

use markov_dubins::{Instance, OrientedPoint};

fn example(goal: (f64, f64, f64), start_deg: f64, a: f64) -> Instance {
    Instance::new(
        OrientedPoint::new(0.0, 0.0, start_deg.to_radians()),
        OrientedPoint::new(goal.0, goal.1, goal.2.to_radians()),
        a,
    )
    .expect("valid example")
}

/// The three reference instances, named.
pub fn examples() -> [(&'static str, Instance); 3] {
    [
        ("example1", example((1.0, 1.0, -30.0), -60.0, 3.0)),
        ("example2", example((0.4, 0.4, -30.0), -60.0, 3.0)),
        ("example3", example((4.0, 0.0, -90.0), -90.0, 1.0)),
    ]
}
