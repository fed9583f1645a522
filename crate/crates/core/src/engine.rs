//! The bounded tree edit distance engine: full reduction, then either a
//! direct shallow solve or randomized rounds that cut the forests at
//! periodically spaced depth levels.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fingerprint::Fingerprinter;
use crate::forest::{Forest, NodeId};
use crate::oracle::TedValue;
use crate::partial::{partial_reduce, Matching};
use crate::reduction::{reduce_and_anchor, ReducedPair};
use crate::shallow::shallow_ted_with_stats;

/// Engine parameters.
#[derive(Clone, Debug)]
pub struct EngineConfig {
    pub k: usize,
    pub seed: u64,
    /// Number of randomized rounds; `None` picks `⌈6 log₂(n + 4)⌉`.
    pub rounds: Option<usize>,
    /// Level spacing `h`; `None` uses `19716 k⁴`.
    pub height_cap: Option<usize>,
    /// Worker threads for the rounds.
    pub threads: usize,
    /// Answer equal inputs and inputs with size difference above `k`
    /// without running the pipeline.
    pub shortcuts: bool,
}

impl EngineConfig {
    pub fn new(k: usize) -> Self {
        EngineConfig {
            k,
            seed: 0,
            rounds: None,
            height_cap: None,
            threads: 1,
            shortcuts: true,
        }
    }

    pub fn spacing(&self) -> usize {
        self.height_cap.unwrap_or_else(|| default_spacing(self.k)).max(1)
    }
}

/// `19716 k⁴`, saturating.
pub fn default_spacing(k: usize) -> usize {
    19716usize.saturating_mul(k.saturating_pow(4))
}

/// Number of rounds used when none is configured.
pub fn default_rounds(n: usize) -> usize {
    (6.0 * ((n + 4) as f64).log2()).ceil() as usize
}

/// How the engine reached its answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Shortcut,
    NoAnchor,
    Shallow,
    Rounds,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Timings {
    /// Horizontal and vertical reductions.
    pub reduction: Duration,
    /// Labelings and the anchor alignment.
    pub anchor: Duration,
    /// Shallow solve or all rounds, including the residual solves.
    pub solve: Duration,
    /// Exact solver on residual instances, summed over rounds.
    pub residual: Duration,
    pub total: Duration,
}

/// Outcome of one randomized round.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoundOutcome {
    /// Discarded because the cut was too large or not fully anchored.
    Discarded,
    Solved(TedValue),
}

#[derive(Clone, Debug)]
pub struct Report {
    pub value: TedValue,
    pub route: Route,
    /// Sizes of the forests after the full reduction.
    pub reduced: (usize, usize),
    pub rounds: Vec<RoundOutcome>,
    pub timings: Timings,
}

/// Marks the nodes whose depth is congruent to `r` modulo `h`.
pub fn mark_levels(f: &Forest, r: usize, h: usize) -> Vec<bool> {
    (0..f.len()).map(|u| f.depth(u) % h == r).collect()
}

/// `ted≤k(F, G)`.
pub fn ted_bounded(f: &Forest, g: &Forest, cfg: &EngineConfig) -> Result<TedValue> {
    run(f, g, cfg).map(|r| r.value)
}

/// Runs the engine and reports the route taken, round outcomes and timings.
pub fn run(f: &Forest, g: &Forest, cfg: &EngineConfig) -> Result<Report> {
    let start = Instant::now();
    let k = cfg.k;
    let mut report = Report {
        value: TedValue::Infinity,
        route: Route::Shortcut,
        reduced: (f.len(), g.len()),
        rounds: Vec::new(),
        timings: Timings::default(),
    };
    let finish = |mut r: Report| {
        r.timings.total = start.elapsed();
        Ok(r)
    };
    if k == 0 {
        report.value = if f == g { TedValue::Finite(0) } else { TedValue::Infinity };
        return finish(report);
    }
    if cfg.shortcuts {
        if f.len().abs_diff(g.len()) > k {
            return finish(report);
        }
        if f == g {
            report.value = TedValue::Finite(0);
            return finish(report);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let fp = Fingerprinter::random(&mut rng);
    let reduced = reduce_and_anchor(f, g, k, &fp)?;
    report.reduced = (reduced.f.len(), reduced.g.len());
    report.timings.reduction = reduced.reduce_time;
    report.timings.anchor = reduced.anchor_time;
    let solve_start = Instant::now();
    if reduced.anchor.is_none() {
        report.route = Route::NoAnchor;
        return finish(report);
    }
    let h = cfg.spacing();
    let height = reduced.f.height().max(reduced.g.height());
    if height <= h {
        report.route = Route::Shallow;
        let (value, stats) = shallow_ted_with_stats(&reduced.f, &reduced.g, height, k, &fp)?;
        report.value = value;
        report.timings.residual = stats.residual_time;
    } else {
        report.route = Route::Rounds;
        let rounds = cfg.rounds.unwrap_or_else(|| default_rounds(f.len() + g.len()));
        let outcomes = run_rounds(&reduced, k, h, rounds, cfg.seed, cfg.threads.max(1), &fp)?;
        report.timings.residual = outcomes.iter().map(|o| o.1).sum();
        report.rounds = outcomes.into_iter().map(|o| o.0).collect();
        report.value = report
            .rounds
            .iter()
            .filter_map(|o| match o {
                RoundOutcome::Solved(v) => Some(*v),
                RoundOutcome::Discarded => None,
            })
            .min()
            .unwrap_or(TedValue::Infinity);
    }
    report.timings.solve = solve_start.elapsed();
    finish(report)
}

fn run_rounds(
    reduced: &ReducedPair,
    k: usize,
    h: usize,
    rounds: usize,
    seed: u64,
    threads: usize,
    fp: &Fingerprinter,
) -> Result<Vec<(RoundOutcome, Duration)>> {
    let anchored = reduced.anchor_pairs();
    let round = |i: usize| -> Result<(RoundOutcome, Duration)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64 + 1);
        let r = rng.random_range(0..h);
        round_with_time(reduced, &anchored, k, h, r, fp)
    };
    if threads == 1 || rounds <= 1 {
        return (0..rounds).map(round).collect();
    }
    let mut out: Vec<Option<Result<(RoundOutcome, Duration)>>> = (0..rounds).map(|_| None).collect();
    std::thread::scope(|s| {
        let chunk = rounds.div_ceil(threads);
        for (c, slots) in out.chunks_mut(chunk).enumerate() {
            let round = &round;
            s.spawn(move || {
                for (j, slot) in slots.iter_mut().enumerate() {
                    *slot = Some(round(c * chunk + j));
                }
            });
        }
    });
    out.into_iter().map(|o| o.expect("round executed")).collect()
}

/// One round with offset `r`: forces the anchored pairs touching marked
/// levels and solves the cut instance.
pub fn one_round(
    reduced: &ReducedPair,
    anchored: &[(NodeId, NodeId)],
    k: usize,
    h: usize,
    r: usize,
    fp: &Fingerprinter,
) -> Result<RoundOutcome> {
    round_with_time(reduced, anchored, k, h, r, fp).map(|o| o.0)
}

fn round_with_time(
    reduced: &ReducedPair,
    anchored: &[(NodeId, NodeId)],
    k: usize,
    h: usize,
    r: usize,
    fp: &Fingerprinter,
) -> Result<(RoundOutcome, Duration)> {
    let discarded = Ok((RoundOutcome::Discarded, Duration::ZERO));
    let (f, g) = (&reduced.f, &reduced.g);
    let mf = mark_levels(f, r, h);
    let mg = mark_levels(g, r, h);
    let pairs: Vec<(NodeId, NodeId)> = anchored
        .iter()
        .copied()
        .filter(|&(u, v)| mf[u] || mg[v])
        .collect();
    if pairs.len().saturating_mul(h) > 4 * (f.len() + g.len()) {
        return discarded;
    }
    let mut hit_f = vec![false; f.len()];
    let mut hit_g = vec![false; g.len()];
    for &(u, v) in &pairs {
        hit_f[u] = true;
        hit_g[v] = true;
    }
    if mf.iter().zip(&hit_f).chain(mg.iter().zip(&hit_g)).any(|(&m, &hit)| m && !hit) {
        return discarded;
    }
    let (fi, gi) = partial_reduce(f, g, &Matching::new(pairs), k)?;
    let height = fi.height().max(gi.height());
    assert!(height <= h + 1, "cut forests have height {height} above {}", h + 1);
    let (value, stats) = shallow_ted_with_stats(&fi, &gi, height, k, fp)?;
    Ok((RoundOutcome::Solved(value), stats.residual_time))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{parse_paren_text, Interner};

    fn pair(a: &str, b: &str) -> (Forest, Forest) {
        let mut i = Interner::new();
        (
            parse_paren_text(a, &mut i).unwrap(),
            parse_paren_text(b, &mut i).unwrap(),
        )
    }

    #[test]
    fn routes() {
        let (f, g) = pair("(a(b)(c))", "(a(b)(d))");
        let cfg = EngineConfig::new(2);
        let r = run(&f, &f, &cfg).unwrap();
        assert_eq!((r.value, r.route), (TedValue::Finite(0), Route::Shortcut));
        let r = run(&f, &g, &cfg).unwrap();
        assert_eq!((r.value, r.route), (TedValue::Finite(1), Route::Shallow));
        let (f, g) = pair("(a)(a)(a)(a)(a)(a)(a)(a)(a)", "(b)(b)(b)(b)(b)(b)(b)(b)(b)");
        let r = run(&f, &g, &EngineConfig::new(1)).unwrap();
        assert_eq!((r.value, r.route), (TedValue::Infinity, Route::NoAnchor));
    }

    #[test]
    fn rounds_on_a_tall_chain() {
        let chain = |n: usize, swap: Option<usize>| {
            let open: String = (0..n)
                .map(|d| if Some(d) == swap { "(x".to_string() } else { format!("(l{d}") })
                .collect();
            format!("{open}{}", ")".repeat(n))
        };
        let (f, g) = pair(&chain(60, None), &chain(60, Some(30)));
        let mut cfg = EngineConfig::new(2);
        cfg.height_cap = Some(20);
        cfg.rounds = Some(24);
        let r = run(&f, &g, &cfg).unwrap();
        assert_eq!(r.route, Route::Rounds);
        assert_eq!(r.rounds.len(), 24);
        assert!(r.rounds.contains(&RoundOutcome::Discarded));
        assert_eq!(r.value, TedValue::Finite(1));
        cfg.threads = 3;
        assert_eq!(run(&f, &g, &cfg).unwrap().rounds, r.rounds);
    }

    #[test]
    fn level_marks() {
        let (f, _) = pair("(a(b(c(d))))", "");
        assert_eq!(mark_levels(&f, 1, 2), vec![false, true, false, true]);
    }
}
