#![allow(dead_code)]

use markov_dubins::{Instance, OrientedPoint};
use proptest::prelude::*;
use std::f64::consts::PI;

pub fn oriented_point(span: f64) -> impl Strategy<Value = OrientedPoint> {
    (-span..span, -span..span, -PI..PI).prop_map(|(x, y, t)| OrientedPoint::new(x, y, t))
}

pub fn curvature() -> impl Strategy<Value = f64> {
    (0.2f64.ln()..5.0f64.ln()).prop_map(f64::exp)
}

pub fn instance() -> impl Strategy<Value = Instance> {
    (oriented_point(10.0), oriented_point(10.0), curvature())
        .prop_map(|(s, g, a)| Instance::new(s, g, a).unwrap())
}

pub fn example(goal: (f64, f64, f64), start_deg: f64, a: f64) -> Instance {
    Instance::new(
        OrientedPoint::new(0.0, 0.0, start_deg.to_radians()),
        OrientedPoint::new(goal.0, goal.1, goal.2.to_radians()),
        a,
    )
    .unwrap()
}

pub fn example1() -> Instance {
    example((1.0, 1.0, -30.0), -60.0, 3.0)
}

pub fn example2() -> Instance {
    example((0.4, 0.4, -30.0), -60.0, 3.0)
}

pub fn example3() -> Instance {
    example((4.0, 0.0, -90.0), -90.0, 1.0)
}
