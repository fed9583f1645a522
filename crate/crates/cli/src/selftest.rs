//! Acceptance suites shared by `tedk selftest` and the `acceptance` test
//! target. Each criterion reports one PASS or FAIL line.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tedk::align::{greedy_bounded_align, sym_diff_size};
use tedk::engine::{self, EngineConfig};
use tedk::fingerprint::Fingerprinter;
use tedk::gen::{edit_script, planted_pair, random_forest, Plant};
use tedk::horizontal::sync_reductions;
use tedk::partial::{gadget, partial_reduce, prune_redundant, reduce_height};
use tedk::reduction::reduce_and_anchor;
use tedk::runs::compute_runs;
use tedk::vertical::vert_sync_reductions;
use tedk::{naive, ted_bounded, ted_constrained, ted_threshold, Forest, Matching, TedValue};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Level {
    /// Reduced counts and sizes.
    Quick,
    /// The stated counts, sizes and time limits.
    Full,
}

impl Level {
    fn pick(self, quick: usize, full: usize) -> usize {
        match self {
            Level::Quick => quick,
            Level::Full => full,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "{} criterion {} ({}): {} [{:.1}s]",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

type Check = fn(Level) -> (bool, String);

pub const CRITERIA: [(&str, Check); 8] = [
    ("oracle equivalence", oracle_equivalence),
    ("reduction soundness", reduction_soundness),
    ("periodicity postconditions", periodicity_postconditions),
    ("runs", runs_correctness),
    ("greedy alignment", greedy_alignment),
    ("partial matching", partial_matching),
    ("anchor stability", anchor_stability),
    ("scaling", scaling),
];

/// Runs one criterion by number (1-based).
pub fn run_one(id: usize, level: Level) -> Outcome {
    let (name, check) = CRITERIA[id - 1];
    let start = Instant::now();
    let (passed, detail) = check(level);
    Outcome {
        id,
        name,
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

pub fn run_all(level: Level) -> Vec<Outcome> {
    (1..=CRITERIA.len()).map(|id| run_one(id, level)).collect()
}

fn plants() -> [Plant; 3] {
    [Plant::Horizontal, Plant::Vertical, Plant::Both]
}

fn oracle_equivalence(level: Level) -> (bool, String) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut mismatches = Vec::new();
    let (random, planted) = (level.pick(300, 2000), level.pick(60, 500));
    let mut finite = 0;
    for i in 0..random {
        let sigma = [1, 2, 4][i % 3];
        let k = 1 + i % 5;
        let n = rng.random_range(0..=40);
        let height = rng.random_range(1..12);
        let f = random_forest(&mut rng, n, height, sigma);
        let d = rng.random_range(0..=k + 2);
        let g = edit_script(&mut rng, &f, d, sigma);
        if g.len() > 40 {
            continue;
        }
        let mut cfg = EngineConfig::new(k);
        cfg.seed = i as u64;
        let want = ted_threshold(&f, &g, k);
        finite += usize::from(!want.is_infinite());
        if ted_bounded(&f, &g, &cfg).ok() != Some(want) {
            mismatches.push(format!("random #{i}"));
        }
    }
    for i in 0..planted {
        let k = 1 + i % 2;
        let plant = plants()[i % 3];
        let base = rng.random_range(5..30);
        let (f, g) = planted_pair(&mut rng, base, k, plant, 2, i % 3);
        let mut cfg = EngineConfig::new(k);
        cfg.seed = i as u64;
        let want = ted_threshold(&f, &g, k);
        finite += usize::from(!want.is_infinite());
        if ted_bounded(&f, &g, &cfg).ok() != Some(want) {
            mismatches.push(format!("planted #{i}"));
        }
    }
    let elapsed = start.elapsed();
    let ok = mismatches.is_empty() && elapsed < Duration::from_secs(300);
    (
        ok,
        format!(
            "{} random + {} planted pairs ({finite} finite), {} mismatches{}",
            random,
            planted,
            mismatches.len(),
            if mismatches.is_empty() {
                String::new()
            } else {
                format!(" (first: {})", mismatches.iter().take(5).cloned().collect::<Vec<_>>().join(", "))
            }
        ),
    )
}

fn reduction_soundness(level: Level) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let count = level.pick(60, 300);
    let (mut bad_h, mut bad_v, mut shrunk) = (0, 0, 0);
    for i in 0..count {
        let k = 1 + i % 2;
        let plant = plants()[i % 3];
        let (f, g) = loop {
            let base = rng.random_range(10..120);
            let edits = rng.random_range(0..=k);
            let (f, g) = planted_pair(&mut rng, base, k, plant, 2, edits);
            if f.len().max(g.len()) <= 300 {
                break (f, g);
            }
        };
        let fp = Fingerprinter::random(&mut rng);
        let (f1, g1) = sync_reductions(&f, &g, k, &fp).expect("horizontal reduction");
        let (f2, g2) = vert_sync_reductions(&f1, &g1, k, &fp).expect("vertical reduction");
        let (d0, d1, d2) = (ted_threshold(&f, &g, k), ted_threshold(&f1, &g1, k), ted_threshold(&f2, &g2, k));
        bad_h += usize::from(d0 != d1);
        bad_v += usize::from(d1 != d2);
        shrunk += usize::from(f2.len() < f.len());
    }
    (
        bad_h == 0 && bad_v == 0,
        format!("{count} planted instances, {shrunk} reduced, horizontal changed {bad_h}, vertical changed {bad_v}"),
    )
}

fn periodicity_postconditions(level: Level) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let count = level.pick(12, 60);
    let (mut hits_a, mut hits_b, mut hits_c, mut largest) = (0, 0, 0, 0);
    for i in 0..count {
        let k = 1 + i % 2;
        let plant = plants()[i % 3];
        let base = if i % 10 == 9 { level.pick(800, 4000) } else { rng.random_range(10..400) };
        let (f, g) = planted_pair(&mut rng, base, k, plant, 3, i % 3);
        if f.len().max(g.len()) > 5000 {
            continue;
        }
        largest = largest.max(f.len());
        let fp = Fingerprinter::random(&mut rng);
        let (f1, g1) = sync_reductions(&f, &g, k, &fp).expect("horizontal reduction");
        if naive::synchronized_power(&f1.symbols(), &g1.symbols(), 4 * k, 18 * k, 2 * k, true).is_some() {
            hits_a += 1;
        }
        let (f2, g2) = vert_sync_reductions(&f1, &g1, k, &fp).expect("vertical reduction");
        if naive::synchronized_context(&f2, &g2, 4 * k, 16 * k, 2 * k).is_some() {
            hits_b += 1;
        }
        let r = reduce_and_anchor(&f, &g, k, &fp).expect("full reduction");
        let (x, y) = r.labeling.strings(&r.f, &r.g);
        if naive::synchronized_power(&x, &y, 4 * k, 20 * k + 2, 2 * k, false).is_some() {
            hits_c += 1;
        }
    }
    (
        hits_a + hits_b + hits_c == 0,
        format!("{count} planted suites up to {largest} nodes, scanner hits (a) {hits_a} (b) {hits_b} (c) {hits_c}"),
    )
}

fn runs_correctness(level: Level) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let count = level.pick(100, 500);
    let (mut bad, mut too_many) = (0, 0);
    for _ in 0..count {
        let n = rng.random_range(1..=300);
        let sigma = rng.random_range(1..=4u64);
        let s: Vec<u64> = (0..n).map(|_| rng.random_range(0..sigma)).collect();
        let fast = compute_runs(&s);
        bad += usize::from(fast != naive::runs(&s));
        too_many += usize::from(fast.len() >= n);
    }
    (
        bad == 0 && too_many == 0,
        format!("{count} strings, {bad} disagreements, {too_many} with at least n runs"),
    )
}

/// Median time of greedy alignment at each size, sampling the sizes in
/// interleaved order.
fn time_greedy(sizes: &[usize], k: usize, w: usize) -> Vec<Duration> {
    let inputs: Vec<(Vec<u64>, Vec<u64>)> = sizes
        .iter()
        .map(|&n| {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            let x: Vec<u64> = (0..n).map(|_| rng.random_range(0..4)).collect();
            let mut y = x.clone();
            for _ in 0..3 {
                let i = rng.random_range(0..y.len());
                y[i] = (y[i] + 1) % 4;
            }
            (x, y)
        })
        .collect();
    let mut samples = vec![Vec::new(); sizes.len()];
    for _ in 0..15 {
        for (i, (x, y)) in inputs.iter().enumerate() {
            let start = Instant::now();
            for _ in 0..4 {
                assert!(greedy_bounded_align(x, y, k, w).is_some());
            }
            samples[i].push(start.elapsed());
        }
    }
    samples
        .into_iter()
        .map(|mut s| {
            s.sort();
            s[s.len() / 2]
        })
        .collect()
}

fn greedy_alignment(level: Level) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let count = level.pick(100, 500);
    let (mut bad, mut not_greedy) = (0, 0);
    for _ in 0..count {
        let x: Vec<u8> = (0..rng.random_range(0..=40)).map(|_| rng.random_range(0..3)).collect();
        let y: Vec<u8> = (0..rng.random_range(0..=40)).map(|_| rng.random_range(0..3)).collect();
        let k = rng.random_range(0..=6);
        let w = rng.random_range(0..=6);
        let want = naive::banded_edit_distance(&x, &y, w).filter(|&d| d <= k);
        match (greedy_bounded_align(&x, &y, k, w), want) {
            (Some(a), Some(d)) => {
                let s = a.eval(&x, &y).expect("well-formed alignment");
                bad += usize::from(s.cost != d || s.width > w);
                not_greedy += usize::from(!a.is_greedy(&x, &y));
            }
            (None, None) => {}
            _ => bad += 1,
        }
    }
    let sizes = [100_000, 200_000, 400_000];
    let times = time_greedy(&sizes, 6, 3);
    let ratios: Vec<f64> = times
        .windows(2)
        .map(|t| t[1].as_secs_f64() / t[0].as_secs_f64().max(1e-9))
        .collect();
    let linear = ratios.iter().all(|&r| r <= 2.3);
    (
        bad == 0 && not_greedy == 0 && linear,
        format!(
            "{count} pairs, {bad} disagreements, {not_greedy} non-greedy, doubling ratios {:.2} {:.2}",
            ratios[0], ratios[1]
        ),
    )
}

fn partial_matching(level: Level) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let count = level.pick(80, 300);
    let (mut bad_prune, mut bad_gadget, mut bad_value) = (0, 0, 0);
    for _ in 0..count {
        let n = rng.random_range(1..=12);
        let f = random_forest(&mut rng, n, 5, 2);
        let d = rng.random_range(0..4);
        let g = edit_script(&mut rng, &f, d, 2);
        if g.len() > 12 {
            continue;
        }
        let (_, maps) = naive::optimal_mappings(&f, &g);
        let take = rng.random_range(0..=n);
        let m = Matching::new(
            maps[0]
                .iter()
                .copied()
                .filter(|&(u, v)| f.label(u) == g.label(v))
                .take(take)
                .collect(),
        );
        let k = rng.random_range(0..5);
        let (fh, gh, mh) = reduce_height(&f, &g, &m).expect("matching from a mapping");
        let (fp, gp, mp) = prune_redundant(&fh, &gh, &mh);
        bad_prune += usize::from(5 * mp.len() > 2 * (fp.len() + gp.len() + 1));
        let (fg, gg) = gadget(&fp, &gp, &mp, k);
        bad_gadget += usize::from(fg.len() != fp.len() + (k + 1) * mp.len() || gg.len() != gp.len() + (k + 1) * mp.len());
        let (fr, gr) = partial_reduce(&f, &g, &m, k).expect("matching from a mapping");
        let want = match ted_constrained(&f, &g, &m) {
            TedValue::Finite(d) => TedValue::clamp(d, k),
            TedValue::Infinity => TedValue::Infinity,
        };
        bad_value += usize::from(ted_threshold(&fr, &gr, k) != want);
    }
    (
        bad_prune + bad_gadget + bad_value == 0,
        format!("{count} cases, 2/5 bound violated {bad_prune}, gadget size wrong {bad_gadget}, value wrong {bad_value}"),
    )
}

fn anchor_stability(level: Level) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let count = level.pick(150, 600);
    let (mut checked, mut alignments, mut worst, mut bad) = (0, 0, 0, 0);
    for i in 0..count {
        let k = 1 + i % 2;
        let n = rng.random_range(1..=10);
        let f = random_forest(&mut rng, n, 4, 2);
        let d = rng.random_range(0..=k);
        let g = edit_script(&mut rng, &f, d, 2);
        if g.len() > 10 || ted_threshold(&f, &g, k).is_infinite() {
            continue;
        }
        let fp = Fingerprinter::random(&mut rng);
        let r = reduce_and_anchor(&f, &g, k, &fp).expect("full reduction");
        let Some(anchor) = r.anchor.as_ref() else {
            bad += 1;
            continue;
        };
        let (_, maps) = naive::optimal_mappings(&r.f, &r.g);
        for m in &maps {
            for del in [true, false] {
                let b = naive::mapping_alignment(&r.f, &r.g, m, del);
                let diff = sym_diff_size(anchor, &b);
                worst = worst.max(diff);
                bad += usize::from(diff > 4928 * k.pow(4));
                alignments += 1;
            }
        }
        checked += 1;
    }
    let (sheep_pairs, sheep_bad) = sheep_bound(level);
    (
        bad == 0 && sheep_bad == 0,
        format!(
            "{checked} instances, {alignments} optimum alignments, max |A △ B| = {worst}, {bad} violations; \
             7wke bound on {sheep_pairs} periodicity-free pairs, {sheep_bad} violations"
        ),
    )
}

/// Alignments of strings free of `w`-synchronized `e`-powers with root at
/// most `2w` differ from the greedy witness in at most `7wke` points.
fn sheep_bound(level: Level) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let target = level.pick(50, 200);
    let (mut checked, mut bad) = (0, 0);
    while checked < target {
        let n = rng.random_range(10..60);
        let x: Vec<u64> = (0..n).map(|_| rng.random_range(0..3)).collect();
        let mut y = x.clone();
        for _ in 0..rng.random_range(0..4) {
            let i = rng.random_range(0..=y.len());
            match rng.random_range(0..3) {
                0 if i < y.len() => {
                    y.remove(i);
                }
                1 if i < y.len() => y[i] = rng.random_range(0..3),
                _ => y.insert(i, rng.random_range(0..3)),
            }
        }
        let (k, w, e) = (rng.random_range(1..6), rng.random_range(1..4), rng.random_range(1..4));
        if naive::synchronized_power(&x, &y, 2 * w, e, w, false).is_some() {
            continue;
        }
        let Some(a) = greedy_bounded_align(&x, &y, k, w) else {
            continue;
        };
        let pa: HashSet<_> = a.points().iter().copied().collect();
        for _ in 0..10 {
            let b = naive::random_bounded_alignment(&mut rng, &x, &y, k, w).expect("A_{k,w} is non-empty");
            let outside = b.points().iter().filter(|p| !pa.contains(p)).count();
            bad += usize::from(outside > 7 * w * k * e);
        }
        checked += 1;
    }
    (checked, bad)
}

fn time_identical(n: usize, shortcuts: bool) -> (Duration, TedValue) {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f: Forest = random_forest(&mut rng, n, 40, 4);
    let g = f.clone();
    let mut cfg = EngineConfig::new(2);
    cfg.shortcuts = shortcuts;
    let mut best = Duration::MAX;
    let mut value = TedValue::Infinity;
    for _ in 0..2 {
        let start = Instant::now();
        value = engine::ted_bounded(&f, &g, &cfg).expect("engine run");
        best = best.min(start.elapsed());
    }
    (best, value)
}

fn scaling(level: Level) -> (bool, String) {
    let n = level.pick(200_000, 1_000_000);
    let (compute, v) = time_identical(n, true);
    let (half, vh) = time_identical(n / 2, false);
    let (full, vf) = time_identical(n, false);
    let ratio = full.as_secs_f64() / half.as_secs_f64().max(1e-9);
    let zero = TedValue::Finite(0);
    let ok = v == zero && vh == zero && vf == zero && compute < Duration::from_secs(30) && full < Duration::from_secs(30) && ratio <= 2.6;
    (
        ok,
        format!(
            "n = {n}: compute {:.3}s, full pipeline {:.2}s, n/2 → n ratio {ratio:.2}",
            compute.as_secs_f64(),
            full.as_secs_f64()
        ),
    )
}
