mod common;

use markov_dubins::{
    propagate_arc, propagate_path, residual, sample_path, ArcKind, Instance, OrientedPoint,
    PathCandidate,
};
use proptest::prelude::*;
use std::f64::consts::PI;

// Classical RK4 on x' = cos θ, y' = sin θ, θ' = u.
fn rk4(start: OrientedPoint, u: f64, duration: f64, steps: usize) -> OrientedPoint {
    let f = |s: [f64; 3]| [s[2].cos(), s[2].sin(), u];
    let h = duration / steps as f64;
    let mut s = [start.x, start.y, start.theta];
    for _ in 0..steps {
        let k1 = f(s);
        let k2 = f(std::array::from_fn(|i| s[i] + 0.5 * h * k1[i]));
        let k3 = f(std::array::from_fn(|i| s[i] + 0.5 * h * k2[i]));
        let k4 = f(std::array::from_fn(|i| s[i] + h * k3[i]));
        s = std::array::from_fn(|i| s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    }
    OrientedPoint::new(s[0], s[1], s[2])
}

fn close(p: &OrientedPoint, q: &OrientedPoint, tol: f64) -> bool {
    let scale = |u: f64, v: f64| tol * u.abs().max(v.abs()).max(1.0);
    (p.x - q.x).abs() <= scale(p.x, q.x)
        && (p.y - q.y).abs() <= scale(p.y, q.y)
        && (p.theta - q.theta).abs() <= scale(p.theta, q.theta)
}

fn kind() -> impl Strategy<Value = ArcKind> {
    prop_oneof![Just(ArcKind::L), Just(ArcKind::R), Just(ArcKind::S)]
}

#[test]
fn first_example_switch_point_matches_integration() {
    let start = OrientedPoint::new(0.0, 0.0, -PI / 3.0);
    let exact = propagate_arc(start, ArcKind::L, 0.95958462, 3.0).unwrap();
    let numeric = rk4(start, 3.0, 0.95958462, 4000);
    assert!(close(&exact, &numeric, 1e-9), "{exact:?} vs {numeric:?}");
}

#[test]
fn half_circle_and_straight() {
    let p = propagate_arc(OrientedPoint::new(0.0, 0.0, -PI / 2.0), ArcKind::L, PI, 1.0).unwrap();
    assert!((p.x - 2.0).abs() < 1e-15 && p.y.abs() < 1e-15 && (p.theta - PI / 2.0).abs() < 1e-15);
    let q = propagate_arc(OrientedPoint::new(0.0, 0.0, 0.0), ArcKind::S, 1.0, 1.0).unwrap();
    assert_eq!(q, OrientedPoint::new(1.0, 0.0, 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn closed_form_matches_rk4(start in common::oriented_point(10.0), k in kind(), a in common::curvature(), frac in 0.0f64..1.0) {
        let duration = frac * 2.0 * PI / a;
        let exact = propagate_arc(start, k, duration, a).unwrap();
        let steps = ((duration * a.max(1.0)) / 2e-3).ceil().max(1.0) as usize;
        let numeric = rk4(start, k.control(a), duration, steps);
        prop_assert!(close(&exact, &numeric, 1e-9), "{:?} vs {:?}", exact, numeric);
    }

    #[test]
    fn group_property(start in common::oriented_point(10.0), k in kind(), a in common::curvature(), d1 in 0.0f64..5.0, d2 in 0.0f64..5.0) {
        let whole = propagate_arc(start, k, d1 + d2, a).unwrap();
        let mid = propagate_arc(start, k, d1, a).unwrap();
        let split = propagate_arc(mid, k, d2, a).unwrap();
        prop_assert!(close(&whole, &split, 1e-12), "{:?} vs {:?}", whole, split);
    }

    #[test]
    fn residual_is_goal_mismatch(inst in common::instance(), xi in proptest::array::uniform5(0.0f64..6.0)) {
        let cand = PathCandidate::new(xi);
        let end = propagate_path(inst.start, &cand, inst.curvature).unwrap();
        let r = residual(&inst, &cand).unwrap();
        let expected = [
            end.x - inst.goal.x,
            end.y - inst.goal.y,
            inst.goal.theta.sin() - end.theta.sin(),
            inst.goal.theta.cos() - end.theta.cos(),
        ];
        for i in 0..4 {
            prop_assert!((r[i] - expected[i]).abs() <= 1e-12 * (1.0 + expected[i].abs() + 30.0), "{:?} vs {:?}", r, expected);
        }
    }

    #[test]
    fn residual_ignores_full_turns_of_goal_heading(inst in common::instance(), xi in proptest::array::uniform5(0.0f64..3.0), k in -3i32..3) {
        let cand = PathCandidate::new(xi);
        let mut goal = inst.goal;
        goal.theta += 2.0 * PI * k as f64;
        let shifted = Instance::new(inst.start, goal, inst.curvature).unwrap();
        let r0 = residual(&inst, &cand).unwrap();
        let r1 = residual(&shifted, &cand).unwrap();
        for i in 0..4 {
            prop_assert!((r0[i] - r1[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn samples_have_unit_speed_and_bounded_curvature(inst in common::instance(), xi in proptest::array::uniform5(0.0f64..3.0), n in 50usize..400) {
        let cand = PathCandidate::new(xi);
        let a = inst.curvature;
        let samples = sample_path(&inst, &cand, n).unwrap();
        let spacing = cand.length() / (n - 1) as f64;
        let first = samples.first().unwrap();
        prop_assert_eq!(first.point, inst.start);
        let last = samples.last().unwrap();
        let end = propagate_path(inst.start, &cand, a).unwrap();
        prop_assert!(close(&last.point, &end, 1e-12));
        for w in samples.windows(2) {
            let dt = w[1].t - w[0].t;
            prop_assert!(dt >= 0.0);
            let chord = w[0].point.distance_to(&w[1].point);
            prop_assert!(chord <= spacing * (1.0 + 1e-12) + 1e-12);
            if dt > 1e-9 {
                prop_assert!(((w[1].point.theta - w[0].point.theta) / dt).abs() <= a + 1e-6);
            }
        }
        for s in &samples {
            let kind = match s.control {
                c if c > 0.0 => ArcKind::L,
                c if c < 0.0 => ArcKind::R,
                _ => ArcKind::S,
            };
            prop_assert_eq!(s.control, kind.control(a));
        }
    }
}

#[test]
fn first_example_samples_have_unit_speed() {
    let inst = common::example1();
    let cand = PathCandidate::new([0.95958462, 0.0, 0.38582465, 0.0, 0.78505169]);
    let h = 1e-6;
    let samples = sample_path(&inst, &cand, 200).unwrap();
    for s in samples
        .iter()
        .filter(|s| s.t > h && s.t < cand.length() - h)
    {
        let at = |t: f64| sample_path_point(&inst, &cand, t);
        let (p, q) = (at(s.t - h), at(s.t + h));
        let speed = ((q.x - p.x).powi(2) + (q.y - p.y).powi(2)).sqrt() / (2.0 * h);
        assert!((speed - 1.0).abs() < 1e-4, "t = {}: speed {speed}", s.t);
    }
}

// Position at time t through a prefix of the durations.
fn sample_path_point(inst: &Instance, cand: &PathCandidate, t: f64) -> OrientedPoint {
    let mut left = t;
    let mut prefix = [0.0; 5];
    for (j, d) in cand.durations.iter().enumerate() {
        prefix[j] = d.min(left);
        left -= prefix[j];
    }
    propagate_path(inst.start, &PathCandidate::new(prefix), inst.curvature).unwrap()
}
