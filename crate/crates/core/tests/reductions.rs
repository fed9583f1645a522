use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tedk::align::{greedy_bounded_align, sym_diff_size};
use tedk::fingerprint::Fingerprinter;
use tedk::gen::{planted_pair, Plant};
use tedk::horizontal::sync_reductions;
use tedk::reduction::reduce_and_anchor;
use tedk::vertical::vert_sync_reductions;
use tedk::{naive, ted_threshold, Forest};

fn planted(seed: u64, base: usize, k: usize, plant: Plant, edits: usize) -> (Forest, Forest) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    planted_pair(&mut rng, base, k, plant, 2, edits)
}

fn plants() -> impl Strategy<Value = Plant> {
    prop::sample::select(vec![Plant::Horizontal, Plant::Vertical, Plant::Both])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn horizontal_reduction_preserves_distance(seed in any::<u64>(), k in 1usize..3, plant in plants(), edits in 0usize..3) {
        let (f, g) = planted(seed, 20, k, plant, edits);
        let fp = Fingerprinter::random(&mut ChaCha8Rng::seed_from_u64(seed));
        let (f1, g1) = sync_reductions(&f, &g, k, &fp).unwrap();
        prop_assert_eq!(ted_threshold(&f1, &g1, k), ted_threshold(&f, &g, k));
        prop_assert!(naive::synchronized_power(&f1.symbols(), &g1.symbols(), 4 * k, 18 * k, 2 * k, true).is_none());
    }

    #[test]
    fn vertical_reduction_preserves_distance(seed in any::<u64>(), k in 1usize..3, plant in plants(), edits in 0usize..3) {
        let (f, g) = planted(seed, 20, k, plant, edits);
        let fp = Fingerprinter::random(&mut ChaCha8Rng::seed_from_u64(seed));
        let (f1, g1) = sync_reductions(&f, &g, k, &fp).unwrap();
        let (f2, g2) = vert_sync_reductions(&f1, &g1, k, &fp).unwrap();
        prop_assert_eq!(ted_threshold(&f2, &g2, k), ted_threshold(&f1, &g1, k));
        prop_assert!(naive::synchronized_context(&f2, &g2, 4 * k, 16 * k, 2 * k).is_none());
    }

    #[test]
    fn refined_strings_avoid_long_synchronized_powers(seed in any::<u64>(), k in 1usize..3, plant in plants(), edits in 0usize..3) {
        let (f, g) = planted(seed, 30, k, plant, edits);
        let fp = Fingerprinter::random(&mut ChaCha8Rng::seed_from_u64(seed));
        let r = reduce_and_anchor(&f, &g, k, &fp).unwrap();
        let (x, y) = r.labeling.strings(&r.f, &r.g);
        prop_assert!(naive::synchronized_power(&x, &y, 4 * k, 20 * k + 2, 2 * k, false).is_none());
    }
}

#[test]
fn planted_periodicity_is_actually_reduced() {
    for plant in [Plant::Horizontal, Plant::Vertical] {
        let mut shrunk = 0;
        for seed in 0..40 {
            let (f, g) = planted(seed, 20, 1, plant, 0);
            let fp = Fingerprinter::new(1_000_003);
            if reduce_and_anchor(&f, &g, 1, &fp).unwrap().f.len() < f.len() {
                shrunk += 1;
            }
        }
        assert!(shrunk >= 35, "{plant:?}: only {shrunk} of 40 planted pairs shrank");
    }
}

#[test]
fn anchor_stays_near_every_optimum() {
    let mut checked = 0;
    for seed in 0..600u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = 1 + (seed % 2) as usize;
        let n = rng.random_range(1..=10);
        let f = tedk::gen::random_forest(&mut rng, n, 4, 2);
        let d = rng.random_range(0..=k);
        let g = tedk::gen::edit_script(&mut rng, &f, d, 2);
        if g.len() > 10 || ted_threshold(&f, &g, k).is_infinite() {
            continue;
        }
        let fp = Fingerprinter::random(&mut rng);
        let r = reduce_and_anchor(&f, &g, k, &fp).unwrap();
        let anchor = r.anchor.clone().expect("anchor exists when ted ≤ k");
        let (_, maps) = naive::optimal_mappings(&r.f, &r.g);
        for m in &maps {
            for del in [true, false] {
                let b = naive::mapping_alignment(&r.f, &r.g, m, del);
                assert!(sym_diff_size(&anchor, &b) <= 4928 * k.pow(4));
            }
        }
        checked += 1;
    }
    assert!(checked > 300);
}

#[test]
fn alignments_of_periodicity_free_strings_differ_little() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 200 {
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
        let pa: std::collections::HashSet<_> = a.points().iter().copied().collect();
        for _ in 0..10 {
            let b = naive::random_bounded_alignment(&mut rng, &x, &y, k, w).unwrap();
            let outside = b.points().iter().filter(|p| !pa.contains(p)).count();
            assert!(outside <= 7 * w * k * e);
        }
        checked += 1;
    }
}
