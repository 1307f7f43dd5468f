use container_lab::combinatorics::{binomial, binomial_u64, compositions, real_binomial, real_binomial_root};
use container_lab::containers::{greedy_cover, is_psi_approximation, ln_binomial_sum_le, ContainerParams, Pipeline};
use container_lab::families::{is_intersecting, phi_inverse, phi_map};
use container_lab::graph::{closure, is_linked, neighborhood};
use container_lab::isoperimetry::{lovasz_bound, meets_bound, shadow_size};
use container_lab::subset::{colex_rank, colex_unrank, KSubsets};
use container_lab::{BigCount, SubsetWord, BipartiteGraph, ExplicitGraph, KFamily, LayerGraph, LayerGraphParams, Side, VertexSet};
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn h(n: u32, k: u32, r: u32) -> LayerGraph {
    LayerGraph::new(LayerGraphParams::new(n, k, r).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn real_root_inverts_real_binomial(m in 1u32..6, offset in 0.01f64..40.0) {
        let x = f64::from(m - 1) + offset;
        let value = real_binomial(x, m);
        prop_assume!(value >= 1.0);
        let root = real_binomial_root(m, value).unwrap();
        prop_assert!((root - x).abs() < 1e-6 * x.max(1.0), "m={m} x={x} root={root}");
    }

    #[test]
    fn colex_rank_is_a_bijection(n in 1u32..=20, k_seed in 0u32..20, rank_seed in any::<u64>()) {
        let k = k_seed % n + 1;
        let count = binomial_u64(u64::from(n), u64::from(k));
        let rank = rank_seed % count;
        let set = colex_unrank(rank, k, n).unwrap();
        prop_assert_eq!(set.len(), k);
        prop_assert!(set.max_element().unwrap() <= n);
        prop_assert_eq!(colex_rank(set), rank);
    }

    #[test]
    fn closure_is_a_hull(mask in 1u64..1 << 10) {
        let g = h(6, 2, 2);
        let a = VertexSet::from_mask(10, mask);
        let hull = closure(&g, &a);
        prop_assert!(a.is_subset(&hull));
        prop_assert_eq!(neighborhood(&g, Side::X, &hull), neighborhood(&g, Side::X, &a));
        prop_assert_eq!(closure(&g, &hull), hull);
    }

    #[test]
    fn phi_round_trips(seed in any::<u64>(), keep in 0.1f64..1.0, n in 5u32..9, k in 2u32..4) {
        prop_assume!(n > 2 * k);
        // random intersecting family: shuffled greedy with random skips
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut candidates: Vec<_> = KSubsets::new(n, k).collect();
        candidates.shuffle(&mut rng);
        let mut members: Vec<SubsetWord> = Vec::new();
        for set in candidates {
            if members.iter().all(|m| m.intersects(set)) && rng.random_bool(keep) {
                members.push(set);
            }
        }
        prop_assume!(!members.is_empty());
        let family = KFamily::new(n, k, members).unwrap();
        prop_assert!(is_intersecting(&family));
        let image = phi_map(&family).unwrap();
        prop_assert!(image.is_independent());
        prop_assert_eq!(image.len(), family.len());
        prop_assert_eq!(phi_inverse(&image).unwrap(), family);
    }

    #[test]
    fn shadows_respect_lovasz(mask in 1u32..1 << 20) {
        // 3-subsets of [6], shadowed to pairs
        let family: Vec<_> = KSubsets::new(6, 3).enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| s).collect();
        let shadow = shadow_size(&family, 2).unwrap().to_f64().unwrap();
        let bound = lovasz_bound(family.len() as f64, 3, 2).unwrap();
        prop_assert!(meets_bound(shadow, bound), "shadow {shadow} < {bound}");
    }

    #[test]
    fn greedy_cover_meets_lovasz_stein(seed in any::<u64>(), y_len in 2usize..10, q_seed in 0usize..10, mult in 1usize..4) {
        let q = q_seed % y_len + 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = ExplicitGraph::random_biregular(y_len * mult, y_len, q, &mut rng).unwrap();
        let targets = VertexSet::from_mask(y_len * mult, seed & ((1 << (y_len * mult)) - 1));
        let pool = VertexSet::full(y_len);
        let cover = greedy_cover(&g, &targets, &pool).unwrap();
        prop_assert!(cover.within_bound());
        prop_assert!(targets.iter().all(|x| g.neighbors(Side::X, x).iter().any(|&y| cover.cover.contains(y))));
    }

    #[test]
    fn pipeline_output_is_a_psi_approximation(mask in 1u64..1 << 10, seed in any::<u64>(), phi in 1u32..6, psi in 1u32..3) {
        let g = h(6, 2, 2);
        let a = VertexSet::from_mask(10, mask);
        prop_assume!(is_linked(&g, Side::X, &a, 2));
        let pipeline = Pipeline::new(&g, ContainerParams::new(phi, psi).with_seed(seed)).unwrap();
        let cert = pipeline.certificate(&a).unwrap();
        prop_assert!(is_psi_approximation(&g, &a, psi, &cert.s, &cert.f));
        prop_assert!(cert.s.len() as f64 <= cert.s_bound + 1e-9);
        let stats = &cert.phi_approximation.stats;
        prop_assert_eq!(stats.t as usize, stats.g * 6 - stats.a * 3);
    }

    #[test]
    fn binomial_tail_logs_match(n in 1u64..3000, frac in 0.0f64..1.0) {
        let upto = (n as f64 * frac) as u64;
        let exact = container_lab::combinatorics::ln_big(&container_lab::combinatorics::binomial_sum_le(n, upto));
        let got = ln_binomial_sum_le(n, upto);
        prop_assert!((exact - got).abs() <= 1e-9 * exact.max(1.0));
    }
}

#[test]
fn colex_order_is_numeric_order() {
    for n in 1..=10 {
        for k in 1..=n {
            let ranks: Vec<u64> = KSubsets::new(n, k).map(colex_rank).collect();
            let expected: Vec<u64> = (0..binomial_u64(u64::from(n), u64::from(k))).collect();
            assert_eq!(ranks, expected, "n={n} k={k}");
        }
    }
}

#[test]
fn compositions_split_by_part_count() {
    for n in 1..=12u64 {
        let by_parts: BigCount = (1..=n)
            .map(|b| compositions(n, Some(b)).unwrap() - if b > 1 { compositions(n, Some(b - 1)).unwrap() } else { BigCount::from(0u8) })
            .sum();
        assert_eq!(by_parts, compositions(n, None).unwrap());
        for b in 1..=n {
            let exactly = compositions(n, Some(b)).unwrap()
                - if b > 1 { compositions(n, Some(b - 1)).unwrap() } else { BigCount::from(0u8) };
            assert_eq!(exactly, binomial(n - 1, b - 1));
        }
    }
}
