//! Instance builders shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tedk::gen::{edit_script, random_forest};
use tedk::Forest;

/// Two copies of one random forest with `n` nodes.
pub fn identical_pair(n: usize, seed: u64) -> (Forest, Forest) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_forest(&mut rng, n, 40, 4);
    (f.clone(), f)
}

/// A random forest with `n` nodes and a copy after `d` random edits.
pub fn edited_pair(n: usize, d: usize, seed: u64) -> (Forest, Forest) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_forest(&mut rng, n, 40, 4);
    let g = edit_script(&mut rng, &f, d, 4);
    (f, g)
}

/// A random string over four letters and a copy with `d` substitutions.
pub fn edited_strings(n: usize, d: usize, seed: u64) -> (Vec<u64>, Vec<u64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x: Vec<u64> = (0..n).map(|_| rng.random_range(0..4)).collect();
    let mut y = x.clone();
    for _ in 0..d.min(n) {
        let i = rng.random_range(0..n);
        y[i] = (y[i] + 1) % 4;
    }
    (x, y)
}

/// A highly periodic string: `(ab)^n/2` with `d` substitutions.
pub fn periodic_string(n: usize, d: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s: Vec<u64> = (0..n as u64).map(|i| i % 2).collect();
    for _ in 0..d.min(n) {
        let i = rng.random_range(0..n);
        s[i] = 2;
    }
    s
}
