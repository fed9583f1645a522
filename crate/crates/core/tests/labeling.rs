use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tedk::fingerprint::Fingerprinter;
use tedk::gen::{random_edit, random_forest};
use tedk::labeling::{alignment_cost, audit_lookahead, compat_refine, lookahead_cost_bound_check, lookahead_refine};
use tedk::{naive, Forest, Labeling};

fn forest_pair(seed: u64, n: usize, h: usize, sigma: u32, edits: usize) -> (Forest, Forest) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_forest(&mut rng, n, h, sigma);
    let mut g = f.clone();
    for _ in 0..edits {
        g = random_edit(&mut rng, &g, sigma);
    }
    (f, g)
}

fn same_partition(lab: &Labeling, f: &[usize], g: &[usize]) -> bool {
    let fast = naive::canonical_classes(lab.f.iter().chain(&lab.g));
    let slow = naive::canonical_classes(f.iter().chain(g));
    fast == slow
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lookahead_matches_subtree_strings(seed in any::<u64>(), n in 0usize..30, sigma in 1u32..4, edits in 0usize..4, d in 1usize..7) {
        let (f, g) = forest_pair(seed, n, 7, sigma, edits);
        let lab = Labeling::from_forests(&f, &g);
        let fp = Fingerprinter::random(&mut ChaCha8Rng::seed_from_u64(seed));
        let got = lookahead_refine(&f, &g, &lab, d, &fp).unwrap();
        let (nf, ng) = naive::lookahead_classes(&f, &g, &lab.f, &lab.g, d);
        prop_assert!(same_partition(&got, &nf, &ng));
        prop_assert!(got.refines(&lab));
        let second = Fingerprinter::random(&mut ChaCha8Rng::seed_from_u64(!seed));
        prop_assert!(audit_lookahead(&f, &g, &lab, d, &got, &second).unwrap());
    }

    #[test]
    fn compat_matches_pairwise_closure(seed in any::<u64>(), n in 0usize..30, sigma in 1u32..3, edits in 0usize..4, w in 0usize..5) {
        let (f, g) = forest_pair(seed, n, 5, sigma, edits);
        let lab = Labeling::from_forests(&f, &g);
        let got = compat_refine(&f, &g, &lab, w);
        let (nf, ng) = naive::compat_classes(&f, &g, &lab.f, &lab.g, w);
        prop_assert!(same_partition(&got, &nf, &ng));
        prop_assert!(got.refines(&lab));
    }

    #[test]
    fn lookahead_cost_grows_at_most_d_fold(seed in any::<u64>(), n in 1usize..7, edits in 0usize..3, d in 1usize..5) {
        let (f, g) = forest_pair(seed, n, 4, 2, edits);
        let lab = Labeling::from_forests(&f, &g);
        let fp = Fingerprinter::new(1_000_003);
        let (_, maps) = naive::optimal_mappings(&f, &g);
        for m in maps.iter().take(8) {
            let a = naive::mapping_alignment(&f, &g, m, true);
            prop_assert!(lookahead_cost_bound_check(&f, &g, &lab, d, &a, &fp).unwrap());
        }
    }

    #[test]
    fn compatibility_keeps_cost_of_narrow_alignments(seed in any::<u64>(), n in 1usize..7, edits in 0usize..3, w in 0usize..5) {
        let (f, g) = forest_pair(seed, n, 4, 2, edits);
        let lab = Labeling::from_forests(&f, &g);
        let refined = compat_refine(&f, &g, &lab, w);
        let (_, maps) = naive::optimal_mappings(&f, &g);
        for m in maps.iter().take(8) {
            for del in [true, false] {
                let a = naive::mapping_alignment(&f, &g, m, del);
                if a.eval(&f.symbols(), &g.symbols()).unwrap().width <= w {
                    prop_assert_eq!(alignment_cost(&f, &g, &refined, &a).unwrap(), alignment_cost(&f, &g, &lab, &a).unwrap());
                }
            }
        }
    }
}

#[test]
fn some_optimum_is_greedy_under_full_lookahead() {
    let fp = Fingerprinter::new(1_000_003);
    for seed in 0..400u64 {
        let n = (seed % 6) as usize;
        let (f, g) = forest_pair(seed, n, 4, 2, 1 + (seed % 3) as usize);
        let lab = Labeling::from_forests(&f, &g);
        let d = f.height().max(g.height()).max(1);
        let refined = lookahead_refine(&f, &g, &lab, d, &fp).unwrap();
        let (x, y) = refined.strings(&f, &g);
        let (_, maps) = naive::optimal_mappings(&f, &g);
        let greedy = maps.iter().any(|m| {
            [true, false]
                .iter()
                .any(|&del| naive::mapping_alignment(&f, &g, m, del).is_greedy(&x, &y))
        });
        assert!(greedy, "seed {seed}: {f:?} vs {g:?}");
    }
}
