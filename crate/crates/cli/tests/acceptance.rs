//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use markov_dubins::{
    build_certificate, detect_abnormal_eligibility, enumerate_candidates, globalize, propagate_arc,
    propagate_path, sample_path, shortest_by_enumeration, verify_pmp, AdjointCertificate, ArcKind,
    Instance, Normality, OrientedPoint, PathCandidate, SolvedPath, SolverConfig,
};
use mdubins_cli::generate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RANDOM_COUNT: usize = 200;
const RANDOM_SEED: u64 = 7;
const VERIFY_SAMPLES: usize = 4096;

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(failures: Vec<String>, summary: String) -> Self {
        if failures.is_empty() {
            Self {
                ok: true,
                detail: summary,
            }
        } else {
            let shown: Vec<_> = failures.iter().take(5).cloned().collect();
            let more = failures.len().saturating_sub(5);
            let tail = if more > 0 {
                format!(" (+{more} more)")
            } else {
                String::new()
            };
            Self {
                ok: false,
                detail: format!("{}{tail}; {summary}", shown.join("; ")),
            }
        }
    }
}

fn deg(x: f64, y: f64, theta: f64) -> OrientedPoint {
    OrientedPoint::new(x, y, theta.to_radians())
}

fn example(goal: OrientedPoint, start_deg: f64, a: f64) -> Instance {
    Instance::new(deg(0.0, 0.0, start_deg), goal, a).unwrap()
}

fn check(failures: &mut Vec<String>, ok: bool, what: impl FnOnce() -> String) {
    if !ok {
        failures.push(what());
    }
}

fn near(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol
}

fn find<'a>(paths: &'a [SolvedPath], word: &str, length: f64, tol: f64) -> Option<&'a SolvedPath> {
    paths
        .iter()
        .find(|p| p.word.to_string() == word && near(p.length, length, tol))
}

fn criterion1() -> Outcome {
    let inst = example(deg(1.0, 1.0, -30.0), -60.0, 3.0);
    let mut f = Vec::new();
    let t0 = Instant::now();
    let solver = globalize(&inst, &SolverConfig::default());
    let elapsed = t0.elapsed();
    let oracle = shortest_by_enumeration(&inst);
    let (Ok(report), Ok(oracle)) = (solver, oracle) else {
        return Outcome::new(vec!["solver or oracle failed".into()], String::new());
    };
    let want = [0.95958462, 0.0, 0.38582465, 0.0, 0.78505169];
    for (name, p) in [("solver", &report.best), ("oracle", &oracle)] {
        check(&mut f, p.word.to_string() == "LSR", || {
            format!("{name} word {}", p.word)
        });
        for (j, w) in want.iter().enumerate() {
            let got = p.candidate.durations[j];
            check(&mut f, near(got, *w, 1e-6), || {
                format!("{name} xi{} = {got}", j + 1)
            });
        }
        check(&mut f, near(p.length, 2.13046097, 1e-6), || {
            format!("{name} t_f = {}", p.length)
        });
        let sw = p.segment_switch_times();
        check(
            &mut f,
            sw.len() == 2 && near(sw[0], 0.95958462, 1e-6) && near(sw[1], 1.34540927, 1e-6),
            || format!("{name} switch times {sw:?}"),
        );
    }
    check(&mut f, elapsed < Duration::from_secs(1), || {
        format!("solver took {elapsed:?}")
    });
    Outcome::new(
        f,
        format!(
            "LSR t_f = {:.8}, solver {:.0} ms",
            report.best.length,
            elapsed.as_secs_f64() * 1e3
        ),
    )
}

fn criterion2() -> Outcome {
    let inst = example(deg(1.0, 1.0, -30.0), -60.0, 3.0);
    let Ok(report) = globalize(&inst, &SolverConfig::default()) else {
        return Outcome::new(vec!["solver failed".into()], String::new());
    };
    let mut f = Vec::new();
    let all = &report.all_found;
    match find(all, "RSL", 5.308703073, 1e-6) {
        Some(p) => {
            let want = [0.0, 1.5934841453, 1.9472018572, 1.7680170705, 0.0];
            for (j, w) in want.iter().enumerate() {
                let got = p.candidate.durations[j];
                check(&mut f, near(got, *w, 1e-6), || {
                    format!("RSL xi{} = {got}", j + 1)
                });
            }
        }
        None => f.push("RSL 5.308703073 missing".into()),
    }
    for (w, l) in [("RSR", 3.34456289), ("LSL", 3.69362874)] {
        check(&mut f, find(all, w, l, 1e-6).is_some(), || {
            format!("{w} {l} missing")
        });
    }
    Outcome::new(f, format!("{} stationary paths", all.len()))
}

fn criterion3() -> Outcome {
    let inst = example(deg(0.4, 0.4, -30.0), -60.0, 3.0);
    let (Ok(report), Ok(oracle)) = (
        globalize(&inst, &SolverConfig::default()),
        enumerate_candidates(&inst),
    ) else {
        return Outcome::new(vec!["solver or oracle failed".into()], String::new());
    };
    let mut f = Vec::new();
    check(&mut f, report.best.word.to_string() == "RSR", || {
        format!("best word {}", report.best.word)
    });
    check(&mut f, near(report.best.length, 2.51127753, 1e-6), || {
        format!("best t_f {}", report.best.length)
    });
    let combined: Vec<SolvedPath> = report.all_found.iter().chain(&oracle).cloned().collect();
    let expected = [
        ("RSR", 2.51127753),
        ("RLR", 2.53262033),
        ("LSL", 2.86034339),
        ("LRL", 2.88168618),
        ("RLR", 3.40149913),
        ("LRL", 3.75056498),
        ("RSL", 4.54008162),
    ];
    for (w, l) in expected {
        check(&mut f, find(&combined, w, l, 1e-6).is_some(), || {
            format!("{w} {l} missing")
        });
    }
    Outcome::new(
        f,
        format!("7/7 lengths recovered, best RSR {:.8}", report.best.length),
    )
}

fn criterion4() -> Outcome {
    let inst = example(deg(4.0, 0.0, -90.0), -90.0, 1.0);
    let Ok(report) = globalize(&inst, &SolverConfig::default()) else {
        return Outcome::new(vec!["solver failed".into()], String::new());
    };
    let mut f = Vec::new();
    let best = &report.best;
    check(&mut f, best.word.to_string() == "LR", || {
        format!("best word {}", best.word)
    });
    check(&mut f, near(best.length, 2.0 * PI, 1e-8), || {
        format!("best t_f {}", best.length)
    });
    let rsl = 2.0 * (2.0 * PI - (1.0f64 / 3.0).acos() + 2.0 * 2f64.sqrt());
    for (w, l) in [
        ("RSR", 2.0 * PI + 4.0),
        ("LSL", 2.0 * PI + 4.0),
        ("RSL", rsl),
    ] {
        check(
            &mut f,
            find(&report.all_found, w, l, 1e-6).is_some(),
            || format!("{w} {l} missing"),
        );
    }
    check(
        &mut f,
        detect_abnormal_eligibility(&inst, best).is_eligible(),
        || "LR not abnormal-eligible".into(),
    );
    let mut worst = 0.0f64;
    for (prefer, lambda0) in [(true, 0.0), (false, 1.0)] {
        match build_certificate(&inst, best, prefer) {
            Ok(cert) => {
                check(&mut f, cert.lambda0 == lambda0, || {
                    format!("lambda0 = {}", cert.lambda0)
                });
                let rep = verify_pmp(&cert, &inst, best, VERIFY_SAMPLES).unwrap();
                worst = worst.max(rep.max_abs_h);
                check(&mut f, rep.passed && rep.max_abs_h <= 1e-8, || {
                    format!("lambda0 = {lambda0} certificate: {rep:?}")
                });
            }
            Err(e) => f.push(format!("lambda0 = {lambda0} certificate: {e}")),
        }
    }
    Outcome::new(
        f,
        format!("LR t_f = 2pi, both certificates pass, max |H| = {worst:.1e}"),
    )
}

struct RandomRun {
    instances: Vec<Instance>,
    solver: Vec<markov_dubins::Result<SolvedPath>>,
    oracle: Vec<markov_dubins::Result<SolvedPath>>,
    elapsed: Duration,
}

fn random_run() -> RandomRun {
    let instances = generate::instances(RANDOM_COUNT, RANDOM_SEED);
    let t0 = Instant::now();
    let mut solver = Vec::with_capacity(RANDOM_COUNT);
    let mut oracle = Vec::with_capacity(RANDOM_COUNT);
    for inst in &instances {
        solver.push(globalize(inst, &SolverConfig::default()).map(|r| r.best));
        oracle.push(shortest_by_enumeration(inst));
    }
    RandomRun {
        instances,
        solver,
        oracle,
        elapsed: t0.elapsed(),
    }
}

fn criterion5(run: &RandomRun) -> Outcome {
    let mut f = Vec::new();
    let mut ties = 0;
    for (k, (s, o)) in run.solver.iter().zip(&run.oracle).enumerate() {
        match (s, o) {
            (Ok(s), Ok(o)) => {
                let tol = 1e-6 * o.length.max(1.0);
                check(&mut f, near(s.length, o.length, tol), || {
                    format!(
                        "#{k}: solver {} {} vs oracle {} {}",
                        s.word, s.length, o.word, o.length
                    )
                });
                if s.word != o.word {
                    ties += 1;
                }
            }
            (Err(e), _) => f.push(format!("#{k}: solver error {e}")),
            (_, Err(e)) => f.push(format!("#{k}: oracle error {e}")),
        }
    }
    check(&mut f, run.elapsed < Duration::from_secs(60), || {
        format!("took {:?}", run.elapsed)
    });
    Outcome::new(
        f,
        format!(
            "{RANDOM_COUNT} instances agree ({ties} equal-length word ties), {:.1} s",
            run.elapsed.as_secs_f64()
        ),
    )
}

fn criterion6(
    run: &RandomRun,
    certs: &mut Vec<(Instance, SolvedPath, AdjointCertificate)>,
) -> Outcome {
    let mut f = Vec::new();
    let mut worst = [0.0f64; 3];
    for (k, (inst, o)) in run.instances.iter().zip(&run.oracle).enumerate() {
        let Ok(path) = o else {
            f.push(format!("#{k}: no oracle path"));
            continue;
        };
        match build_certificate(inst, path, false) {
            Ok(cert) => {
                let rep = verify_pmp(&cert, inst, path, VERIFY_SAMPLES).unwrap();
                worst[0] = worst[0].max(rep.max_abs_h);
                worst[1] = worst[1].max(rep.ellipse_drift);
                worst[2] = rep
                    .switch_zero_errors
                    .iter()
                    .fold(worst[2], |m, &e| m.max(e));
                let ok = rep.passed
                    && rep.max_abs_h <= 1e-8
                    && rep.ellipse_drift <= 1e-8
                    && rep.sign_law_violations == 0
                    && rep.switch_zero_errors.iter().all(|&e| e <= 1e-8);
                check(&mut f, ok, || format!("#{k} {}: {rep:?}", path.word));
                certs.push((*inst, path.clone(), cert));
            }
            Err(e) => f.push(format!("#{k} {}: {e}", path.word)),
        }
    }
    Outcome::new(
        f,
        format!(
            "{RANDOM_COUNT} certificates pass; max |H| {:.1e}, drift {:.1e}, switch |l3| {:.1e}",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn criterion7(run: &RandomRun, certs: &[(Instance, SolvedPath, AdjointCertificate)]) -> Outcome {
    let mut f = Vec::new();
    let examples = [
        example(deg(1.0, 1.0, -30.0), -60.0, 3.0),
        example(deg(0.4, 0.4, -30.0), -60.0, 3.0),
        example(deg(4.0, 0.0, -90.0), -90.0, 1.0),
    ];
    let optima: Vec<(Instance, SolvedPath)> = run
        .instances
        .iter()
        .zip(&run.oracle)
        .filter_map(|(i, p)| p.as_ref().ok().map(|p| (*i, p.clone())))
        .chain(
            run.instances
                .iter()
                .zip(&run.solver)
                .filter_map(|(i, p)| p.as_ref().ok().map(|p| (*i, p.clone()))),
        )
        .chain(
            examples
                .iter()
                .filter_map(|i| shortest_by_enumeration(i).ok().map(|p| (*i, p))),
        )
        .collect();

    let mut ccc = 0;
    for (inst, p) in &optima {
        if let Some(mid) = p.middle_sweep(inst.curvature).filter(|_| p.word.is_ccc()) {
            ccc += 1;
            check(&mut f, mid > PI, || {
                format!("CCC optimum {} middle sweep {mid}", p.word)
            });
        }
    }

    // Normal certificates of the optima, plus abnormal ones wherever eligible,
    // over the optima and every oracle candidate of the examples.
    let mut all: Vec<(Instance, SolvedPath, AdjointCertificate)> = certs.to_vec();
    let candidates = examples.iter().flat_map(|i| {
        enumerate_candidates(i)
            .unwrap_or_default()
            .into_iter()
            .map(move |p| (*i, p))
    });
    for (inst, p) in optima.into_iter().chain(candidates) {
        for prefer in [false, true] {
            if let Ok(c) = build_certificate(&inst, &p, prefer) {
                all.push((inst, p.clone(), c));
            }
        }
    }
    let (mut singular, mut abnormal) = (0, 0);
    for (inst, p, c) in &all {
        if p.word.contains_straight() {
            singular += 1;
            check(&mut f, c.rho == c.lambda0, || {
                format!("{}: rho {} lambda0 {}", p.word, c.rho, c.lambda0)
            });
        }
        if c.normality == Normality::Abnormal {
            abnormal += 1;
            let sweeps = p.sweeps(inst.curvature);
            check(&mut f, sweeps.iter().all(|&s| s <= PI + 1e-9), || {
                format!("abnormal {} sweeps {sweeps:?}", p.word)
            });
        }
    }
    check(&mut f, abnormal > 0, || {
        "no abnormal certificate exercised".into()
    });
    Outcome::new(
        f,
        format!(
            "{ccc} CCC optima, {singular} S certificates with rho = lambda0, {abnormal} abnormal certificates"
        ),
    )
}

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

fn gap(p: &OrientedPoint, q: &OrientedPoint) -> f64 {
    let rel = |u: f64, v: f64| (u - v).abs() / u.abs().max(v.abs()).max(1.0);
    rel(p.x, q.x).max(rel(p.y, q.y)).max(rel(p.theta, q.theta))
}

fn criterion8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    let mut f = Vec::new();
    let kinds = [ArcKind::L, ArcKind::R, ArcKind::S];
    let point = |rng: &mut ChaCha8Rng| {
        OrientedPoint::new(
            rng.gen_range(-10.0..10.0),
            rng.gen_range(-10.0..10.0),
            rng.gen_range(-PI..PI),
        )
    };
    let curvature = |rng: &mut ChaCha8Rng| rng.gen_range(0.2f64.ln()..5.0f64.ln()).exp();

    let mut worst_rk4 = 0.0f64;
    for k in 0..1000 {
        let (start, kind, a) = (
            point(&mut rng),
            kinds[rng.gen_range(0..3)],
            curvature(&mut rng),
        );
        let duration = rng.gen::<f64>() * 2.0 * PI / a;
        let exact = propagate_arc(start, kind, duration, a).unwrap();
        let steps = ((duration * a.max(1.0)) / 2e-3).ceil().max(1.0) as usize;
        let e = gap(&exact, &rk4(start, kind.control(a), duration, steps));
        worst_rk4 = worst_rk4.max(e);
        check(&mut f, e <= 1e-9, || {
            format!("arc #{k}: {kind:?} error {e:.2e}")
        });
    }

    let mut worst_group = 0.0f64;
    for k in 0..1000 {
        let (start, kind, a) = (
            point(&mut rng),
            kinds[rng.gen_range(0..3)],
            curvature(&mut rng),
        );
        let (d1, d2) = (rng.gen_range(0.0..5.0), rng.gen_range(0.0..5.0));
        let whole = propagate_arc(start, kind, d1 + d2, a).unwrap();
        let split = propagate_arc(propagate_arc(start, kind, d1, a).unwrap(), kind, d2, a).unwrap();
        let e = gap(&whole, &split);
        worst_group = worst_group.max(e);
        check(&mut f, e <= 1e-12, || format!("group #{k}: error {e:.2e}"));
    }

    // Unit speed and |θ'| ≤ a by central differences along random paths.
    let mut worst_speed = 0.0f64;
    let h = 1e-6;
    for k in 0..100 {
        let inst = Instance::new(point(&mut rng), point(&mut rng), curvature(&mut rng)).unwrap();
        let cand = PathCandidate::new(std::array::from_fn(|_| rng.gen_range(0.0..3.0)));
        let at = |t: f64| {
            let mut left = t;
            let prefix = cand.durations.map(|d| {
                let p = d.min(left);
                left -= p;
                p
            });
            propagate_path(inst.start, &PathCandidate::new(prefix), inst.curvature).unwrap()
        };
        for s in sample_path(&inst, &cand, 64).unwrap() {
            if s.t <= h || s.t >= cand.length() - h {
                continue;
            }
            let (p, q) = (at(s.t - h), at(s.t + h));
            let speed = (q.x - p.x).hypot(q.y - p.y) / (2.0 * h);
            let turn = (q.theta - p.theta).abs() / (2.0 * h);
            worst_speed = worst_speed.max((speed - 1.0).abs());
            check(
                &mut f,
                (speed - 1.0).abs() <= 1e-4 && turn <= inst.curvature + 1e-4,
                || format!("path #{k} t = {}: speed {speed}, turn rate {turn}", s.t),
            );
        }
    }
    Outcome::new(
        f,
        format!("RK4 max error {worst_rk4:.1e}, group {worst_group:.1e}, speed {worst_speed:.1e}"),
    )
}

fn main() -> ExitCode {
    let mut results = Vec::new();
    let mut report = |n: usize, name: &str, o: Outcome| {
        println!(
            "{} {n} {name}: {}",
            if o.ok { "PASS" } else { "FAIL" },
            o.detail
        );
        results.push(o.ok);
    };
    report(1, "Example 1 regression", criterion1());
    report(2, "Example 1 stationary set", criterion2());
    report(3, "Example 2 regression", criterion3());
    report(4, "Example 3 abnormal path", criterion4());
    let run = random_run();
    let mut certs = Vec::new();
    report(5, "solver/oracle equivalence", criterion5(&run));
    report(
        6,
        "certificates of oracle optima",
        criterion6(&run, &mut certs),
    );
    report(7, "structural properties", criterion7(&run, &certs));
    report(8, "kinematics exactness", criterion8());
    let failed = results.iter().filter(|ok| !**ok).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
