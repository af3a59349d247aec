mod common;

use common::*;
use ifs_mdim::capacity::{capacity, max_cycle_mean, ocap};
use ifs_mdim::complexity::{separated_count, spanning_count, Budget, Mode};
use ifs_mdim::cover::d_of;
use ifs_mdim::metric::{gh_distance, GhBudget};
use ifs_mdim::{approx_eq, le};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn capacity_matches_path_enumeration(seed in any::<u64>(), n in 1usize..=8) {
        let mut r = rng(seed);
        let fs = random_system(&mut r, 6, 3);
        let a = random_set(&mut r, fs.n_points());
        for x in 0..fs.n_points() {
            prop_assert_eq!(capacity(&fs, &a, n, x).unwrap(), brute_capacity(&fs, &a, n, x), "x = {}", x);
        }
    }

    #[test]
    fn ocap_is_the_best_cycle_mean(seed in any::<u64>()) {
        let mut r = rng(seed);
        let fs = random_system(&mut r, 6, 3);
        let a = random_set(&mut r, fs.n_points());
        let want = brute_max_cycle_mean(&fs, &a);
        prop_assert_eq!(max_cycle_mean(&fs.graph(), &a), want);
        prop_assert_eq!(ocap(&fs, &a, 4).value, want);
    }

    #[test]
    fn witness_is_the_union_of_witnesses(seed in any::<u64>()) {
        let mut r = rng(seed);
        let fs = random_system(&mut r, 6, 3);
        let got = fs.ifs_witness().map(|w| w.ones().collect::<Vec<_>>());
        prop_assert_eq!(&got, &brute_witness(&fs));
        if let Some(w) = fs.ifs_witness() {
            prop_assert!(fs.satisfies_ifs_condition(&w));
        }
    }

    #[test]
    fn counts_match_subset_search(seed in any::<u64>(), n in 1usize..=3, k in 0usize..3) {
        let mut r = rng(seed);
        let fs = random_system(&mut r, 4, 2);
        let traces = brute_traces(&fs, n);
        prop_assume!(traces.len() <= 14);
        let eps = [1.0, 2.0, 3.5][k];
        let b = Budget::default();
        let s = separated_count(&fs, n, eps, Mode::Exact, &b).unwrap();
        let sp = spanning_count(&fs, n, eps, Mode::Exact, &b).unwrap();
        prop_assert!(s.exact && sp.exact);
        prop_assert_eq!(s.value, brute_separated(fs.space(), &traces, eps));
        prop_assert_eq!(sp.value, brute_spanning(fs.space(), &traces, eps));
    }

    #[test]
    fn spanning_and_separated_sandwich(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let fs = random_system(&mut r, 5, 3);
        let b = Budget::default();
        for eps in [1.0, 2.0, 4.0] {
            let rr = spanning_count(&fs, n, eps, Mode::Exact, &b).unwrap().value;
            let s = separated_count(&fs, n, eps, Mode::Exact, &b).unwrap().value;
            let r2 = spanning_count(&fs, n, eps / 2.0, Mode::Exact, &b).unwrap().value;
            let s_next = separated_count(&fs, n + 1, eps, Mode::Exact, &b).unwrap().value;
            prop_assert!(rr <= s && s <= r2, "{} {} {}", rr, s, r2);
            prop_assert!(s <= s_next);
        }
    }

    #[test]
    fn gh_matches_correspondence_search(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (na, nb) = (r.gen_range(1..=4), r.gen_range(1..=4));
        let a = random_metric(&mut r, na.max(2));
        let b = random_metric(&mut r, nb.max(2));
        let ab = gh_distance(&a, &b, GhBudget::default()).unwrap();
        let ba = gh_distance(&b, &a, GhBudget::default()).unwrap();
        prop_assert!(ab.exact);
        prop_assert!(approx_eq(ab.value(), brute_gh(&a, &b)));
        prop_assert!(approx_eq(ab.value(), ba.value()));
        let g = &ab.realization;
        for (x, y) in &ab.correspondence {
            prop_assert!(le(g.glued.d(g.embed_left[*x], g.embed_right[*y]), ab.value()));
        }
    }

    #[test]
    fn hausdorff_matches_neighbourhood_search(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=6);
        let space = random_metric(&mut r, n);
        let pick = |r: &mut ChaCha8Rng| {
            let mut v: Vec<usize> = (0..n).filter(|_| r.gen_bool(0.5)).collect();
            if v.is_empty() { v.push(r.gen_range(0..n)); }
            v
        };
        let (a, b) = (pick(&mut r), pick(&mut r));
        prop_assert!(approx_eq(space.hausdorff(&a, &b).unwrap(), brute_hausdorff(&space, &a, &b)));
    }

    #[test]
    fn d_of_matches_exhaustive_search(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (alpha, pool) = random_d_instance(&mut r);
        let got = d_of(&alpha, &pool, Mode::Exact, 1_000_000);
        match brute_d(&alpha, &pool) {
            Some(_) if got.is_err() => prop_assert!(false, "d_of failed on a feasible instance"),
            Some(want) => {
                let got = got.unwrap();
                prop_assert!(got.exact);
                prop_assert_eq!(got.order, want);
            }
            None => prop_assert!(got.is_err()),
        }
    }
}
