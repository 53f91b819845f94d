//! Exact laws conditioned on an urn: the extreme points of weighted
//! exchangeability.
//!
//! Given an urn of `n` balls and a weight profile, the conditional law of the
//! first `k` coordinates assigns an ordered choice of distinct balls
//! `j_1..j_k` probability proportional to `prod_i lambda_i(ball_{j_i})` times
//! the permanent of the trailing-row minor over the unchosen balls. The
//! weighted-iid counterpart draws every coordinate independently,
//! proportional to `lambda_i` over the balls. Everything here is computed
//! from those two definitions; the per-urn TV gap and the domination and
//! ratio checks quantify how far apart they are.

use crate::dist::{tv_distance, TupleDistribution};
use crate::error::{Error, Result};
use crate::permanent::{permanent_ryser, WeightMatrix};
use crate::scaled::ScaledReal;
use crate::space::{for_each_tuple, tuple_count, Urn};
use crate::tol;
use crate::weights::WeightProfile;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Largest urn size for exact dense laws.
pub const EXACT_LIMIT: usize = 12;

/// Largest urn size for sequential sampling.
pub const SAMPLE_LIMIT: usize = 20;

/// Shared state for one (profile, urn) pair: the slot matrix and a cache of
/// trailing-row minor permanents keyed by remaining-column bitmask.
struct UrnEngine<'a> {
    profile: &'a WeightProfile,
    slots: Vec<usize>,
    matrix: WeightMatrix,
    // balls with equal value are identical columns, so a mask's minor only
    // depends on how many columns of each value remain; masks are
    // canonicalized to the lowest columns of each value range before lookup
    range_masks: Vec<u32>,
    minors: Vec<Option<ScaledReal>>,
}

impl<'a> UrnEngine<'a> {
    fn new(profile: &'a WeightProfile, urn: &Urn, limit: usize) -> Result<Self> {
        let n = profile.n();
        if urn.size() != n {
            return Err(Error::UrnMismatch { urn_size: urn.size(), profile_rows: n });
        }
        if urn.c() != profile.c() {
            return Err(Error::AlphabetMismatch { left: profile.c(), right: urn.c() });
        }
        if n > limit {
            return Err(Error::MatrixTooLarge { n, limit });
        }
        let slots = urn.slots();
        let matrix = WeightMatrix::from_profile_urn(profile, urn)?;
        let mut range_masks = vec![0u32; profile.c()];
        for (col, &value) in slots.iter().enumerate() {
            range_masks[value] |= 1 << col;
        }
        Ok(UrnEngine { profile, slots, matrix, range_masks, minors: vec![None; 1 << n] })
    }

    fn n(&self) -> usize {
        self.slots.len()
    }

    fn full_mask(&self) -> u32 {
        ((1u64 << self.n()) - 1) as u32
    }

    /// Permanent of the submatrix with the last `popcount(mask)` rows and the
    /// columns in `mask`.
    fn minor(&mut self, mask: u32) -> Result<ScaledReal> {
        let cmask = {
            let mut out = 0u32;
            for &range in &self.range_masks {
                out |= low_bits_of(range, (mask & range).count_ones());
            }
            out
        };
        if let Some(value) = self.minors[cmask as usize] {
            return Ok(value);
        }
        let size = cmask.count_ones() as usize;
        let n = self.n();
        let mut entries = Vec::with_capacity(size * size);
        for row in (n - size)..n {
            for col in 0..n {
                if cmask & (1 << col) != 0 {
                    entries.push(self.matrix.get(row, col));
                }
            }
        }
        let value = permanent_ryser(&WeightMatrix::new(size, entries)?)?;
        self.minors[cmask as usize] = Some(value);
        Ok(value)
    }
}

/// The lowest `count` set bits of `mask`.
fn low_bits_of(mask: u32, count: u32) -> u32 {
    let mut out = 0u32;
    let mut rest = mask;
    for _ in 0..count {
        let bit = rest & rest.wrapping_neg();
        out |= bit;
        rest ^= bit;
    }
    out
}

/// Exact law of the first `k` coordinates conditioned on the urn.
///
/// Enumerates ordered ball choices depth-first; identical balls are descended
/// once with a multiplicity factor, which is the same summation grouped by
/// value. Requires `n <= EXACT_LIMIT`.
pub fn urn_conditional(profile: &WeightProfile, urn: &Urn, k: usize) -> Result<TupleDistribution> {
    let mut engine = UrnEngine::new(profile, urn, EXACT_LIMIT)?;
    let n = engine.n();
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    let c = profile.c();
    let total = tuple_count(c, k)?;
    let full_mask = engine.full_mask();
    let full = engine.minor(full_mask)?;
    let mut weights = vec![0.0f64; total];
    descend_conditional(&mut engine, k, 0, full_mask, 0, ScaledReal::ONE, full, &mut weights)?;
    TupleDistribution::from_weights(c, k, weights)
}

#[allow(clippy::too_many_arguments)]
fn descend_conditional(
    engine: &mut UrnEngine,
    k: usize,
    depth: usize,
    mask: u32,
    value_index: usize,
    weight: ScaledReal,
    full: ScaledReal,
    out: &mut [f64],
) -> Result<()> {
    if depth == k {
        let minor = engine.minor(mask)?;
        out[value_index] += (weight * minor / full).to_f64();
        return Ok(());
    }
    let c = engine.profile.c();
    for value in 0..c {
        let avail = mask & engine.range_masks[value];
        if avail == 0 {
            continue;
        }
        let mult = avail.count_ones() as f64;
        let col = avail.trailing_zeros() as usize;
        let step = ScaledReal::from_f64(engine.matrix.get(depth, col) * mult)?;
        descend_conditional(
            engine,
            k,
            depth + 1,
            mask & !(1 << col),
            value_index * c + value,
            weight * step,
            full,
            out,
        )?;
    }
    Ok(())
}

/// Product law on the urn: coordinate `i` drawn independently, proportional
/// to `lambda_i` over the balls.
pub fn urn_weighted_iid(profile: &WeightProfile, urn: &Urn, k: usize) -> Result<TupleDistribution> {
    if urn.c() != profile.c() {
        return Err(Error::AlphabetMismatch { left: profile.c(), right: urn.c() });
    }
    let n = profile.n();
    if urn.size() != n {
        return Err(Error::UrnMismatch { urn_size: urn.size(), profile_rows: n });
    }
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    let c = profile.c();
    tuple_count(c, k)?;
    let mut probs = vec![1.0f64];
    for i in 0..k {
        let factor: Vec<f64> = (0..c)
            .map(|v| urn.counts()[v] as f64 * profile.entry(i).get(v))
            .collect();
        let norm: f64 = factor.iter().sum();
        let mut next = vec![0.0f64; probs.len() * c];
        for (prefix, &p) in probs.iter().enumerate() {
            for v in 0..c {
                next[prefix * c + v] = p * factor[v] / norm;
            }
        }
        probs = next;
    }
    TupleDistribution::new(c, k, probs)
}

/// Per-urn gap between the conditional law `P` and its product-law
/// approximation `Q`, with the quantities the approximation theory compares.
#[derive(Clone, Debug)]
pub struct UrnGap {
    /// Number of balls.
    pub n: usize,
    /// Prefix length.
    pub k: usize,
    /// `tv(P, Q)`, exact.
    pub tv_exact: f64,
    /// `1 - Q(tuples reachable without replacement)`.
    pub one_minus_q_support: f64,
    /// `(prod_{i<=k} r_i)^{-1} * (1 - (n)_k / n^k)`.
    pub bound_rhs: f64,
    /// Largest `Q(z) - P(z)` over reachable `z` (0 when dominated).
    pub max_domination_violation: f64,
    /// True when `Q <= P` pointwise on the reachable tuples. Exactly then the
    /// TV identity `tv_exact = one_minus_q_support` holds.
    pub dominated: bool,
}

/// Probability that `k` iid uniform draws from `n` slots collide:
/// `1 - (n)_k / n^k`.
pub fn collision_probability(n: usize, k: usize) -> f64 {
    let mut no_collision = 1.0f64;
    for i in 0..k {
        no_collision *= (n - i) as f64 / n as f64;
    }
    1.0 - no_collision
}

/// Computes the per-urn TV gap report for prefix length `k`.
pub fn tv_urn_gap(profile: &WeightProfile, urn: &Urn, k: usize) -> Result<UrnGap> {
    let p = urn_conditional(profile, urn, k)?;
    let q = urn_weighted_iid(profile, urn, k)?;
    let tv_exact = tv_distance(&p, &q)?;
    let c = profile.c();
    let n = profile.n();
    let mut q_support = 0.0f64;
    let mut max_violation = 0.0f64;
    for_each_tuple(c, k, |index, tuple| {
        if urn.contains_tuple(tuple) {
            q_support += q.probs()[index];
            max_violation = max_violation.max(q.probs()[index] - p.probs()[index]);
        }
    });
    let inv_prefix = 1.0 / profile.ratio_prefix_product(k);
    Ok(UrnGap {
        n,
        k,
        tv_exact,
        one_minus_q_support: (1.0 - q_support).max(0.0),
        bound_rhs: inv_prefix * collision_probability(n, k),
        max_domination_violation: max_violation,
        dominated: max_violation <= tol::ABS,
    })
}

/// Minimum over reachable tuples of
/// `(Q/P - 1) - (prod_{i<=n} r_i)^{-1} * (Q_o/P_o - 1)`,
/// where the `o` laws are the unweighted counterparts on the same urn.
/// Nonnegative means the weighted ratio deficit is controlled by the
/// unweighted one.
pub fn estpq_min_margin(profile: &WeightProfile, urn: &Urn, k: usize) -> Result<f64> {
    let p = urn_conditional(profile, urn, k)?;
    let q = urn_weighted_iid(profile, urn, k)?;
    let ones = WeightProfile::ones(profile.c(), profile.n());
    let po = urn_conditional(&ones, urn, k)?;
    let qo = urn_weighted_iid(&ones, urn, k)?;
    let inv_full = 1.0 / profile.ratio_prefix_product(profile.n());
    let mut margin = f64::INFINITY;
    for_each_tuple(profile.c(), k, |index, tuple| {
        if urn.contains_tuple(tuple) {
            let lhs = q.probs()[index] / p.probs()[index] - 1.0;
            let rhs = inv_full * (qo.probs()[index] / po.probs()[index] - 1.0);
            margin = margin.min(lhs - rhs);
        }
    });
    Ok(margin)
}

/// True when the ratio comparison holds on every reachable tuple, within the
/// bound-checking slack.
pub fn estpq_check(profile: &WeightProfile, urn: &Urn, k: usize) -> Result<bool> {
    Ok(estpq_min_margin(profile, urn, k)? >= -tol::BOUND_SLACK)
}

/// Batch of sampled `n`-tuples stored flat.
#[derive(Clone, Debug)]
pub struct SampleBatch {
    n: usize,
    flat: Vec<usize>,
}

impl SampleBatch {
    pub(crate) fn from_parts(n: usize, flat: Vec<usize>) -> Self {
        debug_assert!(n > 0 && flat.len() % n == 0);
        SampleBatch { n, flat }
    }

    pub(crate) fn flat(&self) -> &[usize] {
        &self.flat
    }

    /// Tuple length.
    pub fn tuple_len(&self) -> usize {
        self.n
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.flat.len() / self.n
    }

    /// True when no samples were drawn.
    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    /// The `i`-th sampled tuple.
    pub fn tuple(&self, i: usize) -> &[usize] {
        &self.flat[i * self.n..(i + 1) * self.n]
    }

    /// Iterator over sampled tuples.
    pub fn iter(&self) -> impl Iterator<Item = &[usize]> {
        self.flat.chunks_exact(self.n)
    }
}

/// Draws `count` exact samples of the full `n`-tuple conditioned on the urn.
///
/// Sequential: ball `j` is chosen at step `i` with probability
/// `M[i][j] * minor(remaining - j) / minor(remaining)`, which telescopes to
/// the conditional law exactly; no rejection. Deterministic for a fixed seed.
/// Requires `n <= SAMPLE_LIMIT`.
pub fn sample_urn_conditional(
    profile: &WeightProfile,
    urn: &Urn,
    seed: u64,
    count: usize,
) -> Result<SampleBatch> {
    let mut engine = UrnEngine::new(profile, urn, SAMPLE_LIMIT)?;
    let n = engine.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut flat = Vec::with_capacity(count * n);
    let mut weights = vec![0.0f64; n];
    for _ in 0..count {
        let mut mask = engine.full_mask();
        for depth in 0..n {
            let denominator = engine.minor(mask)?;
            let mut live = 0usize;
            for col in 0..n {
                weights[col] = 0.0;
                if mask & (1 << col) != 0 {
                    let numerator = ScaledReal::from_f64(engine.matrix.get(depth, col))?
                        * engine.minor(mask & !(1 << col))?;
                    weights[col] = (numerator / denominator).to_f64();
                    live += 1;
                }
            }
            debug_assert!(live > 0);
            let mut u: f64 = rng.gen();
            let mut chosen = None;
            for col in 0..n {
                if mask & (1 << col) != 0 {
                    u -= weights[col];
                    if u < 0.0 {
                        chosen = Some(col);
                        break;
                    }
                }
            }
            // rounding can leave a sliver of mass past the last ball
            let col = chosen.unwrap_or_else(|| (31 - mask.leading_zeros()) as usize);
            flat.push(engine.slots[col]);
            mask &= !(1 << col);
        }
    }
    Ok(SampleBatch { n, flat })
}
