//! Mixture decomposition of a weighted-exchangeable law into its urn
//! extreme points, and the product-law approximant built from the same
//! mixture weights.
//!
//! The weight of an urn is the total mass of its type class. Conditioned on
//! the class, a weighted-exchangeable law must coincide with the
//! urn-conditional law; `decompose` verifies that instead of assuming it.

use crate::dist::TupleDistribution;
use crate::error::{Error, Result};
use crate::extremal::{sample_urn_conditional, urn_conditional, urn_weighted_iid, SampleBatch};
use crate::model::is_weighted_exchangeable;
use crate::space::{for_each_tuple, Urn};
use crate::tol;
use crate::weights::WeightProfile;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

/// A finite mixture over urns: pairs `(urn, weight)` with distinct urns in
/// increasing count order and weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct UrnMixture {
    atoms: Vec<(Urn, f64)>,
}

impl UrnMixture {
    /// Validates atom ordering, nonnegativity, and normalization.
    pub fn new(mut atoms: Vec<(Urn, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidParameter { what: "mixture needs at least one atom" });
        }
        atoms.sort_by(|a, b| a.0.cmp(&b.0));
        for pair in atoms.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::InvalidParameter { what: "mixture atoms must be distinct urns" });
            }
        }
        let mut sum = 0.0f64;
        for (index, &(_, w)) in atoms.iter().enumerate() {
            if !w.is_finite() || w < tol::NEG_CLAMP {
                return Err(Error::NegativeProbability { index, value: w });
            }
            sum += w.max(0.0);
        }
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { sum });
        }
        for atom in &mut atoms {
            atom.1 = atom.1.max(0.0) / sum;
        }
        Ok(UrnMixture { atoms })
    }

    /// The atoms in increasing urn order.
    pub fn atoms(&self) -> &[(Urn, f64)] {
        &self.atoms
    }

    /// Number of atoms.
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    /// True when there are no atoms (never constructible).
    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Weight of the given urn, zero when absent.
    pub fn weight(&self, urn: &Urn) -> f64 {
        self.atoms
            .binary_search_by(|probe| probe.0.cmp(urn))
            .map(|i| self.atoms[i].1)
            .unwrap_or(0.0)
    }
}

/// Splits a weighted-exchangeable law over full-length tuples into its urn
/// mixture.
///
/// Fails with `NotExchangeable` when the symmetry check fails, and with
/// `ConditionalMismatch` when some type class does not carry the
/// urn-conditional law (compared in the multiplied form
/// `|P(z) - w_U * P_U(z)|` so small weights stay stable).
pub fn decompose(p: &TupleDistribution, profile: &WeightProfile) -> Result<UrnMixture> {
    let n = profile.n();
    let c = profile.c();
    if p.k() != n || p.c() != c {
        return Err(Error::LengthMismatch { expected: n, got: p.k() });
    }
    if !is_weighted_exchangeable(p, profile, tol::REL)? {
        return Err(Error::NotExchangeable);
    }
    let urns = Urn::enumerate(c, n);
    let mut slot_of: HashMap<Urn, usize> = HashMap::with_capacity(urns.len());
    for (i, urn) in urns.iter().enumerate() {
        slot_of.insert(urn.clone(), i);
    }
    let mut weights = vec![0.0f64; urns.len()];
    for_each_tuple(c, n, |index, tuple| {
        let urn = Urn::of_tuple(c, tuple).expect("tuple from enumeration");
        weights[slot_of[&urn]] += p.probs()[index];
    });
    let mut atoms = Vec::new();
    for (urn, &w) in urns.iter().zip(&weights) {
        if w <= 0.0 {
            continue;
        }
        let conditional = urn_conditional(profile, urn, n)?;
        let mut worst = 0.0f64;
        for_each_tuple(c, n, |index, tuple| {
            if Urn::of_tuple(c, tuple).expect("tuple from enumeration") == *urn {
                worst = worst.max((p.probs()[index] - w * conditional.probs()[index]).abs());
            }
        });
        if worst > tol::ABS + tol::REL * w {
            return Err(Error::ConditionalMismatch { urn: urn.counts().to_vec() });
        }
        atoms.push((urn.clone(), w));
    }
    UrnMixture::new(atoms)
}

/// Rebuilds the full-length law `sum_U w_U * P_U` from a mixture. Inverse of
/// `decompose`.
pub fn reconstruct(mix: &UrnMixture, profile: &WeightProfile) -> Result<TupleDistribution> {
    let n = profile.n();
    let mut parts = Vec::with_capacity(mix.len());
    for (urn, w) in mix.atoms() {
        parts.push((*w, urn_conditional(profile, urn, n)?));
    }
    let borrowed: Vec<(f64, &TupleDistribution)> =
        parts.iter().map(|(w, d)| (*w, d)).collect();
    TupleDistribution::mixture(&borrowed)
}

/// The product-law approximant: same mixture weights, but each urn
/// contributes its weighted-iid law instead of its conditional law.
pub fn build_q(p: &TupleDistribution, profile: &WeightProfile) -> Result<TupleDistribution> {
    let mix = decompose(p, profile)?;
    let n = profile.n();
    let mut parts = Vec::with_capacity(mix.len());
    for (urn, w) in mix.atoms() {
        parts.push((*w, urn_weighted_iid(profile, urn, n)?));
    }
    let borrowed: Vec<(f64, &TupleDistribution)> =
        parts.iter().map(|(w, d)| (*w, d)).collect();
    TupleDistribution::mixture(&borrowed)
}

/// Draws `count` full-length tuples from the mixture law: a weight-biased
/// urn choice per draw, then the urn's conditional sampler. All randomness
/// derives from `seed`; draws are grouped by urn, which changes nothing for
/// independent samples.
pub fn sample_mixture(
    profile: &WeightProfile,
    mix: &UrnMixture,
    seed: u64,
    count: usize,
) -> Result<SampleBatch> {
    let n = profile.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_urn = vec![0usize; mix.len()];
    for _ in 0..count {
        let mut u: f64 = rng.gen();
        let mut chosen = mix.len() - 1;
        for (index, (_, w)) in mix.atoms().iter().enumerate() {
            if u < *w {
                chosen = index;
                break;
            }
            u -= *w;
        }
        per_urn[chosen] += 1;
    }
    let mut flat = Vec::with_capacity(count * n);
    for ((urn, _), &draws) in mix.atoms().iter().zip(&per_urn) {
        let urn_seed: u64 = rng.gen();
        if draws > 0 {
            let batch = sample_urn_conditional(profile, urn, urn_seed, draws)?;
            flat.extend_from_slice(batch.flat());
        }
    }
    Ok(SampleBatch::from_parts(n, flat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::tv_distance;
    use crate::weights::WeightFunction;

    fn uniform(c: usize, k: usize) -> TupleDistribution {
        let total = c.pow(k as u32);
        TupleDistribution::new(c, k, vec![1.0 / total as f64; total]).unwrap()
    }

    #[test]
    fn uniform_square_splits_by_type_class() {
        let profile = WeightProfile::ones(2, 2);
        let mix = decompose(&uniform(2, 2), &profile).unwrap();
        assert_eq!(mix.len(), 3);
        assert!((mix.weight(&Urn::new(vec![2, 0]).unwrap()) - 0.25).abs() < 1e-15);
        assert!((mix.weight(&Urn::new(vec![1, 1]).unwrap()) - 0.5).abs() < 1e-15);
        assert!((mix.weight(&Urn::new(vec![0, 2]).unwrap()) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn extreme_point_decomposes_to_a_single_atom() {
        let profile = WeightProfile::new(vec![
            WeightFunction::ones(2),
            WeightFunction::new(vec![1.0, 2.0]).unwrap(),
        ])
        .unwrap();
        let urn = Urn::new(vec![1, 1]).unwrap();
        let p = urn_conditional(&profile, &urn, 2).unwrap();
        let mix = decompose(&p, &profile).unwrap();
        assert_eq!(mix.len(), 1);
        assert!((mix.weight(&urn) - 1.0).abs() < 1e-15);
        let back = reconstruct(&mix, &profile).unwrap();
        assert!(tv_distance(&p, &back).unwrap() < 1e-15);
    }

    #[test]
    fn tilted_example_round_trips() {
        // probs (1,2,2,4)/9 with both weight rows (1,2)
        let row = WeightFunction::new(vec![1.0, 2.0]).unwrap();
        let profile = WeightProfile::new(vec![row.clone(), row]).unwrap();
        let p = TupleDistribution::new(
            2,
            2,
            vec![1.0 / 9.0, 2.0 / 9.0, 2.0 / 9.0, 4.0 / 9.0],
        )
        .unwrap();
        let mix = decompose(&p, &profile).unwrap();
        assert!((mix.weight(&Urn::new(vec![2, 0]).unwrap()) - 1.0 / 9.0).abs() < 1e-15);
        assert!((mix.weight(&Urn::new(vec![1, 1]).unwrap()) - 4.0 / 9.0).abs() < 1e-15);
        assert!((mix.weight(&Urn::new(vec![0, 2]).unwrap()) - 4.0 / 9.0).abs() < 1e-15);
        let back = reconstruct(&mix, &profile).unwrap();
        assert!(tv_distance(&p, &back).unwrap() < 1e-12);
    }

    #[test]
    fn binomial_mixture_reconstructs_iid_coin_flips() {
        let profile = WeightProfile::ones(2, 3);
        let atoms = vec![
            (Urn::new(vec![3, 0]).unwrap(), 0.125),
            (Urn::new(vec![2, 1]).unwrap(), 0.375),
            (Urn::new(vec![1, 2]).unwrap(), 0.375),
            (Urn::new(vec![0, 3]).unwrap(), 0.125),
        ];
        let mix = UrnMixture::new(atoms).unwrap();
        let p = reconstruct(&mix, &profile).unwrap();
        assert!(tv_distance(&p, &uniform(2, 3)).unwrap() < 1e-15);
    }

    #[test]
    fn approximant_of_an_extreme_point_is_its_product_law() {
        let profile = WeightProfile::new(vec![
            WeightFunction::ones(2),
            WeightFunction::new(vec![1.0, 2.0]).unwrap(),
        ])
        .unwrap();
        let urn = Urn::new(vec![1, 1]).unwrap();
        let p = urn_conditional(&profile, &urn, 2).unwrap();
        let q = build_q(&p, &profile).unwrap();
        let expect = [1.0 / 6.0, 1.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0];
        for (a, b) in q.probs().iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn approximant_of_the_fully_tilted_uniform_kernel() {
        // P proportional to the row products: (1,2,1,2)/6; urn weights
        // 1/6, 1/2, 1/3; Q = (1/4, 1/6, 1/12, 1/2)
        let profile = WeightProfile::new(vec![
            WeightFunction::ones(2),
            WeightFunction::new(vec![1.0, 2.0]).unwrap(),
        ])
        .unwrap();
        let p = TupleDistribution::new(
            2,
            2,
            vec![1.0 / 6.0, 1.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0],
        )
        .unwrap();
        let mix = decompose(&p, &profile).unwrap();
        assert!((mix.weight(&Urn::new(vec![2, 0]).unwrap()) - 1.0 / 6.0).abs() < 1e-15);
        assert!((mix.weight(&Urn::new(vec![1, 1]).unwrap()) - 0.5).abs() < 1e-15);
        assert!((mix.weight(&Urn::new(vec![0, 2]).unwrap()) - 1.0 / 3.0).abs() < 1e-15);
        let q = build_q(&p, &profile).unwrap();
        let expect = [0.25, 1.0 / 6.0, 1.0 / 12.0, 0.5];
        for (a, b) in q.probs().iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
        // first-coordinate marginals of P and Q differ here
        let p1 = p.marginal(1).unwrap();
        let q1 = q.marginal(1).unwrap();
        assert!((tv_distance(&p1, &q1).unwrap() - 1.0 / 12.0).abs() < 1e-14);
    }

    #[test]
    fn non_exchangeable_input_is_rejected() {
        let profile = WeightProfile::ones(2, 2);
        let p = TupleDistribution::new(2, 2, vec![0.1, 0.5, 0.2, 0.2]).unwrap();
        assert!(matches!(decompose(&p, &profile), Err(Error::NotExchangeable)));
    }

    #[test]
    fn mixture_constructor_validates() {
        let u = Urn::new(vec![1, 1]).unwrap();
        let v = Urn::new(vec![2, 0]).unwrap();
        assert!(UrnMixture::new(vec![]).is_err());
        assert!(UrnMixture::new(vec![(u.clone(), 0.5), (u.clone(), 0.5)]).is_err());
        assert!(UrnMixture::new(vec![(u.clone(), 0.7), (v.clone(), 0.2)]).is_err());
        let ok = UrnMixture::new(vec![(v.clone(), 0.25), (u.clone(), 0.75)]).unwrap();
        // sorted on construction: counts (1,1) precede (2,0) lexicographically
        assert_eq!(ok.atoms()[0].0, u);
        assert!((ok.weight(&u) - 0.75).abs() < 1e-15);
        assert!((ok.weight(&v) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn mixture_sampler_tracks_the_model_law() {
        let profile = WeightProfile::new(vec![
            WeightFunction::ones(2),
            WeightFunction::new(vec![1.0, 2.0]).unwrap(),
        ])
        .unwrap();
        let p = TupleDistribution::new(
            2,
            2,
            vec![1.0 / 6.0, 1.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0],
        )
        .unwrap();
        let mix = decompose(&p, &profile).unwrap();
        let draws = 40_000;
        let batch = sample_mixture(&profile, &mix, 11, draws).unwrap();
        assert_eq!(batch.len(), draws);
        let mut counts = [0usize; 4];
        for tuple in batch.iter() {
            counts[crate::space::index_of(2, tuple)] += 1;
        }
        let tv: f64 = counts
            .iter()
            .zip(p.probs())
            .map(|(&cnt, &prob)| (cnt as f64 / draws as f64 - prob).abs())
            .sum::<f64>()
            / 2.0;
        assert!(tv < 0.02, "empirical tv {tv}");
        let again = sample_mixture(&profile, &mix, 11, draws).unwrap();
        assert_eq!(batch.flat(), again.flat());
    }
}
