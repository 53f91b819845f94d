//! Round-trip and uniqueness properties of the urn-mixture decomposition,
//! driven by randomly generated weighted-exchangeable laws.

use exchkit::space::{for_each_tuple, index_of, tuple_of};
use exchkit::{
    build_model, build_q, decompose, reconstruct, tv_distance, urn_weighted_iid, SymmetricKernel,
    TupleDistribution, Urn, UrnMixture, WeightFunction, WeightProfile,
};
use proptest::prelude::*;

fn symmetric_kernel_from_raw(c: usize, n: usize, raw: &[f64]) -> SymmetricKernel {
    let mut values = vec![0.0f64; raw.len()];
    for_each_tuple(c, n, |index, tuple| {
        let mut sorted = tuple.to_vec();
        sorted.sort_unstable();
        values[index] = raw[index_of(c, &sorted)];
    });
    SymmetricKernel::new(c, n, values).unwrap()
}

fn arbitrary_model() -> impl Strategy<Value = (WeightProfile, TupleDistribution)> {
    (2usize..=3, 2usize..=5)
        .prop_flat_map(|(c, n)| {
            let rows = proptest::collection::vec(
                proptest::collection::vec(0.25f64..4.0, c),
                n,
            );
            let raw = proptest::collection::vec(0.1f64..3.0, c.pow(n as u32));
            (Just(c), Just(n), rows, raw)
        })
        .prop_map(|(c, n, rows, raw)| {
            let profile = WeightProfile::new(
                rows.into_iter().map(|r| WeightFunction::new(r).unwrap()).collect(),
            )
            .unwrap();
            let kernel = symmetric_kernel_from_raw(c, n, &raw);
            let p = build_model(&profile, &kernel).unwrap();
            (profile, p)
        })
}

fn arbitrary_mixture() -> impl Strategy<Value = (WeightProfile, UrnMixture)> {
    (2usize..=3, 2usize..=5)
        .prop_flat_map(|(c, n)| {
            let urn_count = Urn::enumerate(c, n).len();
            let weights = proptest::collection::vec(0.05f64..1.0, urn_count);
            let rows = proptest::collection::vec(
                proptest::collection::vec(0.25f64..4.0, c),
                n,
            );
            (Just(c), Just(n), weights, rows)
        })
        .prop_map(|(c, n, weights, rows)| {
            let total: f64 = weights.iter().sum();
            let atoms: Vec<(Urn, f64)> = Urn::enumerate(c, n)
                .into_iter()
                .zip(weights)
                .map(|(urn, w)| (urn, w / total))
                .collect();
            let profile = WeightProfile::new(
                rows.into_iter().map(|r| WeightFunction::new(r).unwrap()).collect(),
            )
            .unwrap();
            (profile, UrnMixture::new(atoms).unwrap())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decompose_then_reconstruct_returns_the_input((profile, p) in arbitrary_model()) {
        let mix = decompose(&p, &profile).unwrap();
        let back = reconstruct(&mix, &profile).unwrap();
        prop_assert!(tv_distance(&p, &back).unwrap() < 1e-10);
    }

    #[test]
    fn reconstruct_then_decompose_recovers_the_atoms((profile, mix) in arbitrary_mixture()) {
        let p = reconstruct(&mix, &profile).unwrap();
        let again = decompose(&p, &profile).unwrap();
        prop_assert_eq!(again.len(), mix.len());
        for ((u1, w1), (u2, w2)) in again.atoms().iter().zip(mix.atoms()) {
            prop_assert_eq!(u1, u2);
            prop_assert!((w1 - w2).abs() < 1e-10);
        }
    }

    #[test]
    fn approximant_marginals_commute_with_mixing((profile, p) in arbitrary_model()) {
        let mix = decompose(&p, &profile).unwrap();
        let q = build_q(&p, &profile).unwrap();
        for k in 1..profile.n() {
            let direct = q.marginal(k).unwrap();
            let mut summed = vec![0.0f64; profile.c().pow(k as u32)];
            for (urn, w) in mix.atoms() {
                let part = urn_weighted_iid(&profile, urn, k).unwrap();
                for (slot, value) in summed.iter_mut().zip(part.probs()) {
                    *slot += w * value;
                }
            }
            for (index, &value) in direct.probs().iter().enumerate() {
                prop_assert!(
                    (value - summed[index]).abs() < 1e-12,
                    "k={} tuple {:?}",
                    k,
                    tuple_of(profile.c(), k, index)
                );
            }
        }
    }

    #[test]
    fn approximant_is_a_probability_law((profile, p) in arbitrary_model()) {
        let q = build_q(&p, &profile).unwrap();
        let sum: f64 = q.probs().iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-12);
        prop_assert!(q.probs().iter().all(|&x| x >= 0.0));
    }
}
