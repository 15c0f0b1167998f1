//! Deterministic multistart points: a rotated Halton sequence over the
//! duration box, each point assigned to a face of the `L R S L R` family.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::path::{Instance, SLOTS};

const PRIMES: [u64; SLOTS + 1] = [2, 3, 5, 7, 11, 13];

/// Slots left free in each structured face; the last entry frees everything.
pub(crate) const FACES: [[bool; SLOTS]; 7] = [
    [true, false, true, false, true], // LSR
    [false, true, true, true, false], // RSL
    [false, true, true, false, true], // RSR
    [true, false, true, true, false], // LSL
    [true, true, false, true, false], // LRL
    [false, true, false, true, true], // RLR
    [true; SLOTS],
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Start {
    pub free: [bool; SLOTS],
    pub point: [f64; SLOTS],
}

fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut out = 0.0;
    while index > 0 {
        out += f * (index % base) as f64;
        index /= base;
        f *= inv;
    }
    out
}

/// `count` starting points for globalization round `round`.
pub(crate) fn starts(
    instance: &Instance,
    count: usize,
    seed: u64,
    round: usize,
    bound: Option<f64>,
) -> Vec<Start> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: [f64; SLOTS + 1] = std::array::from_fn(|_| rng.gen::<f64>());
    let turn_ub = instance.full_turn();
    let straight_ub = instance.diameter() + 4.0 / instance.curvature;
    let offset = (round * count) as u64 + 1;

    (0..count)
        .map(|i| {
            let index = offset + i as u64;
            let u: [f64; SLOTS + 1] =
                std::array::from_fn(|d| (radical_inverse(index, PRIMES[d]) + shift[d]).fract());
            let free = FACES[i % FACES.len()];
            let mut point: [f64; SLOTS] = std::array::from_fn(|j| {
                let ub = if j == 2 { straight_ub } else { turn_ub };
                if free[j] {
                    u[j] * ub
                } else {
                    0.0
                }
            });
            if let Some(b) = bound {
                let total: f64 = point.iter().sum();
                if total > b && total > 0.0 {
                    let scale = b * u[SLOTS].max(0.05) / total;
                    point.iter_mut().for_each(|p| *p *= scale);
                }
            }
            Start { free, point }
        })
        .collect()
}
