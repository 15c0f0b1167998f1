//! Seeded random instances: positions in [-10, 10]^2, headings in (-pi, pi],
//! curvature bound log-uniform in [0.2, 5].

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use markov_dubins::{Instance, OrientedPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance_file::InstanceFile;

const SPAN: f64 = 10.0;
const A_MIN: f64 = 0.2;
const A_MAX: f64 = 5.0;

fn point(rng: &mut ChaCha8Rng) -> OrientedPoint {
    let x = rng.gen_range(-SPAN..=SPAN);
    let y = rng.gen_range(-SPAN..=SPAN);
    let theta = PI - 2.0 * PI * rng.gen::<f64>();
    OrientedPoint::new(x, y, theta)
}

pub fn instances(count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let start = point(&mut rng);
            let goal = point(&mut rng);
            let a = (A_MIN.ln() + (A_MAX.ln() - A_MIN.ln()) * rng.gen::<f64>()).exp();
            Instance::new(start, goal, a).expect("generated instance is valid")
        })
        .collect()
}

/// Writes `instance-000.json`, `instance-001.json`, ... into `dir`.
pub fn write_instances(count: usize, seed: u64, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let width = count.saturating_sub(1).to_string().len().max(3);
    instances(count, seed)
        .iter()
        .enumerate()
        .map(|(i, inst)| {
            let path = dir.join(format!("instance-{i:0width$}.json"));
            let text = serde_json::to_string_pretty(&InstanceFile::from_instance(inst))? + "\n";
            std::fs::write(&path, text)
                .with_context(|| format!("cannot write {}", path.display()))?;
            Ok(path)
        })
        .collect()
}
