//! Quantitative bounds on how well a weighted-exchangeable law is
//! approximated by its mixture of product laws, plus the LP that measures
//! the true distance to the product-law hull.
//!
//! `bound_general` is the `k(k-1)/(2n)` rate corrected by the first `k`
//! weight ratios; `bound_finite` trades the `k^2` for a factor `c` and pays
//! in all `n` ratios squared. `verify_*` evaluate both sides exactly on a
//! concrete instance. The reports carry pass flags rather than asserting,
//! so a failing inequality is data, not a crash.

use crate::decompose::{decompose, UrnMixture};
use crate::dist::{tv_distance, TupleDistribution};
use crate::error::{Error, Result};
use crate::extremal::{urn_conditional, urn_weighted_iid};
use crate::model::{build_model, SymmetricKernel};
use crate::space::{for_each_tuple, Urn};
use crate::tol;
use crate::weights::{WeightFunction, WeightProfile};
use num_bigint::BigUint;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `k(k-1)/(2n)` divided by the product of the first `k` ratios.
pub fn bound_general(n: usize, k: usize, r: &[f64]) -> Result<f64> {
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    if r.len() < k {
        return Err(Error::LengthMismatch { expected: k, got: r.len() });
    }
    let prefix = checked_ratio_product(&r[..k])?;
    Ok((k * (k - 1)) as f64 / (2 * n) as f64 / prefix)
}

/// `c k / n` divided by the squared product of all `n` ratios.
pub fn bound_finite(c: usize, n: usize, k: usize, r: &[f64]) -> Result<f64> {
    if c == 0 {
        return Err(Error::EmptyAlphabet);
    }
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    if r.len() < n {
        return Err(Error::LengthMismatch { expected: n, got: r.len() });
    }
    let full = checked_ratio_product(&r[..n])?;
    Ok((c * k) as f64 / n as f64 / (full * full))
}

fn checked_ratio_product(r: &[f64]) -> Result<f64> {
    let mut product = 1.0f64;
    for (index, &value) in r.iter().enumerate() {
        if !(value > 0.0 && value <= 1.0) {
            return Err(Error::NonpositiveValue { index, value });
        }
        product *= value;
    }
    Ok(product)
}

/// The collision/birthday comparison behind the unweighted rate.
#[derive(Clone, Copy, Debug)]
pub struct FreedmanGap {
    /// `1 - (n)_k / n^k`.
    pub gap: f64,
    /// `k(k-1)/(2n)`.
    pub df_bound: f64,
    /// Whether `gap <= df_bound`, decided in exact integer arithmetic.
    pub ok: bool,
}

/// Compares the with/without-replacement gap to its quadratic bound.
pub fn freedman_gap(n: usize, k: usize) -> Result<FreedmanGap> {
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    let gap = crate::extremal::collision_probability(n, k);
    let df_bound = (k * (k - 1)) as f64 / (2 * n) as f64;
    // gap <= df_bound  <=>  2n(n^k - (n)_k) <= k(k-1) n^k, exactly
    let big_n = BigUint::from(n);
    let n_pow = big_n.pow(k as u32);
    let mut falling = BigUint::from(1u32);
    for i in 0..k {
        falling *= BigUint::from(n - i);
    }
    let lhs = BigUint::from(2 * n) * (&n_pow - &falling);
    let rhs = BigUint::from(k * (k - 1)) * &n_pow;
    Ok(FreedmanGap { gap, df_bound, ok: lhs <= rhs })
}

/// A concrete model: weight profile, symmetric kernel, and the seed that
/// generated them when applicable.
#[derive(Clone, Debug)]
pub struct Instance {
    c: usize,
    n: usize,
    profile: WeightProfile,
    kernel: SymmetricKernel,
    seed: Option<u64>,
}

impl Instance {
    /// Bundles a profile and kernel after checking their shapes agree.
    pub fn new(
        profile: WeightProfile,
        kernel: SymmetricKernel,
        seed: Option<u64>,
    ) -> Result<Self> {
        if profile.c() != kernel.c() {
            return Err(Error::AlphabetMismatch { left: profile.c(), right: kernel.c() });
        }
        if profile.n() != kernel.n() {
            return Err(Error::LengthMismatch { expected: profile.n(), got: kernel.n() });
        }
        Ok(Instance {
            c: profile.c(),
            n: profile.n(),
            profile,
            kernel,
            seed,
        })
    }

    /// Alphabet size.
    pub fn c(&self) -> usize {
        self.c
    }

    /// Sequence length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The weight profile.
    pub fn profile(&self) -> &WeightProfile {
        &self.profile
    }

    /// The symmetric kernel.
    pub fn kernel(&self) -> &SymmetricKernel {
        &self.kernel
    }

    /// Generating seed, when the instance came from `random_instance`.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// The tilted model `P` this instance defines.
    pub fn model(&self) -> Result<TupleDistribution> {
        build_model(&self.profile, &self.kernel)
    }
}

/// Both bounds evaluated against the exact TV distance at one prefix length.
#[derive(Clone, Debug)]
pub struct BoundReport {
    /// Generating seed when known.
    pub seed: Option<u64>,
    /// Alphabet size.
    pub c: usize,
    /// Sequence length.
    pub n: usize,
    /// Prefix length.
    pub k: usize,
    /// `tv(P_k, Q_k)` with `Q` the constructed product-law mixture.
    pub tv_exact: f64,
    /// General rate bound.
    pub bound_general: f64,
    /// Finite-alphabet rate bound.
    pub bound_finite: f64,
    /// Product of the first `k` ratios.
    pub prod_r_k: f64,
    /// Product of all `n` ratios.
    pub prod_r_n: f64,
    /// `tv_exact <= bound_general + 1e-10`.
    pub pass_general: bool,
    /// `tv_exact <= bound_finite + 1e-10`.
    pub pass_finite: bool,
    /// Largest per-urn TV gap among occupied urns; the mixture TV never
    /// exceeds it, which localizes any bound failure to an urn.
    pub max_urn_gap: f64,
    /// Worst deviation of `sum_z (count_j(z)/n_j) P_unif(z)` from `k/n`
    /// over occupied urns and values `j`, an identity the finite-alphabet
    /// proof rests on.
    pub kn_identity_max_err: f64,
}

/// Decomposition of one instance, cached so every `k` reuses the per-urn
/// laws computed at full length.
pub struct InstanceAnalysis {
    instance: Instance,
    p: TupleDistribution,
    mixture: UrnMixture,
    conditionals: Vec<TupleDistribution>,
    products: Vec<TupleDistribution>,
}

impl InstanceAnalysis {
    /// Builds the model, decomposes it, and caches per-urn full-length laws.
    pub fn new(instance: &Instance) -> Result<Self> {
        let p = instance.model()?;
        let mixture = decompose(&p, &instance.profile)?;
        let n = instance.n;
        let mut conditionals = Vec::with_capacity(mixture.len());
        let mut products = Vec::with_capacity(mixture.len());
        for (urn, _) in mixture.atoms() {
            conditionals.push(urn_conditional(&instance.profile, urn, n)?);
            products.push(urn_weighted_iid(&instance.profile, urn, n)?);
        }
        Ok(InstanceAnalysis {
            instance: instance.clone(),
            p,
            mixture,
            conditionals,
            products,
        })
    }

    /// The model distribution.
    pub fn model(&self) -> &TupleDistribution {
        &self.p
    }

    /// The urn mixture of the model.
    pub fn mixture(&self) -> &UrnMixture {
        &self.mixture
    }

    /// The constructed approximant marginalized to length `k`.
    pub fn approximant_marginal(&self, k: usize) -> Result<TupleDistribution> {
        let parts: Vec<(f64, TupleDistribution)> = self
            .mixture
            .atoms()
            .iter()
            .zip(&self.products)
            .map(|((_, w), q)| q.marginal(k).map(|m| (*w, m)))
            .collect::<Result<_>>()?;
        let borrowed: Vec<(f64, &TupleDistribution)> =
            parts.iter().map(|(w, d)| (*w, d)).collect();
        TupleDistribution::mixture(&borrowed)
    }

    /// Evaluates the report at prefix length `k`.
    pub fn report(&self, k: usize) -> Result<BoundReport> {
        let inst = &self.instance;
        let n = inst.n;
        if k == 0 || k > n {
            return Err(Error::KOutOfRange { k, n });
        }
        let p_k = self.p.marginal(k)?;
        let q_k = self.approximant_marginal(k)?;
        let tv_exact = tv_distance(&p_k, &q_k)?;
        let ratios = inst.profile.ratios();
        let general = bound_general(n, k, &ratios)?;
        let finite = bound_finite(inst.c, n, k, &ratios)?;

        // prefix laws are marginals of the cached full-length laws
        let mut max_urn_gap = 0.0f64;
        for (cond, prod) in self.conditionals.iter().zip(&self.products) {
            let gap = tv_distance(&cond.marginal(k)?, &prod.marginal(k)?)?;
            max_urn_gap = max_urn_gap.max(gap);
        }
        let kn_identity_max_err = self.kn_identity_error(k)?;

        Ok(BoundReport {
            seed: inst.seed,
            c: inst.c,
            n,
            k,
            tv_exact,
            bound_general: general,
            bound_finite: finite,
            prod_r_k: inst.profile.ratio_prefix_product(k),
            prod_r_n: inst.profile.ratio_prefix_product(n),
            pass_general: tv_exact <= general + tol::BOUND_SLACK,
            pass_finite: tv_exact <= finite + tol::BOUND_SLACK,
            max_urn_gap,
            kn_identity_max_err,
        })
    }

    /// For each occupied urn and each value `j` present in it, the uniform
    /// without-replacement law must put expected count `k n_j / n` on `j`.
    fn kn_identity_error(&self, k: usize) -> Result<f64> {
        let inst = &self.instance;
        let c = inst.c;
        let n = inst.n;
        let ones = WeightProfile::ones(c, n);
        let mut worst = 0.0f64;
        for (urn, _) in self.mixture.atoms() {
            let unif = urn_conditional(&ones, urn, k)?;
            let mut sums = vec![0.0f64; c];
            for_each_tuple(c, k, |index, tuple| {
                let prob = unif.probs()[index];
                if prob > 0.0 {
                    for &x in tuple {
                        sums[x] += prob;
                    }
                }
            });
            for j in 0..c {
                let n_j = urn.counts()[j];
                if n_j > 0 {
                    let lhs = sums[j] / n_j as f64;
                    worst = worst.max((lhs - k as f64 / n as f64).abs());
                }
            }
        }
        Ok(worst)
    }
}

/// Evaluates the general bound on one instance at prefix length `k`.
pub fn verify_general(instance: &Instance, k: usize) -> Result<BoundReport> {
    InstanceAnalysis::new(instance)?.report(k)
}

/// Evaluates the finite-alphabet bound on one instance at prefix length `k`.
pub fn verify_finite(instance: &Instance, k: usize) -> Result<BoundReport> {
    InstanceAnalysis::new(instance)?.report(k)
}

/// Result of projecting a marginal onto the product-law hull.
#[derive(Clone, Debug)]
pub struct LpProjection {
    /// Minimal TV distance to the hull spanned by the grid.
    pub value: f64,
    /// Optimal mixture weights, one per grid atom.
    pub mixture_weights: Vec<f64>,
}

/// Minimizes `tv(p_k, sum_m w_m Pi_m)` over mixture weights `w`, where
/// `Pi_m` is the product law whose coordinate `i` is proportional to
/// `lambda_i` times the grid atom `F_m`.
pub fn lp_project(
    p_k: &TupleDistribution,
    profile: &WeightProfile,
    grid: &[Vec<f64>],
) -> Result<LpProjection> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let c = p_k.c();
    let k = p_k.k();
    if profile.c() != c {
        return Err(Error::AlphabetMismatch { left: profile.c(), right: c });
    }
    if profile.n() < k {
        return Err(Error::KOutOfRange { k, n: profile.n() });
    }
    let cells = p_k.probs().len();
    let atoms = grid.len();
    let mut component = vec![vec![0.0f64; cells]; atoms];
    for (m, base) in grid.iter().enumerate() {
        if base.len() != c {
            return Err(Error::LengthMismatch { expected: c, got: base.len() });
        }
        let sum: f64 = base.iter().sum();
        if base.iter().any(|&v| !v.is_finite() || v < 0.0) || (sum - 1.0).abs() > 1e-8 {
            return Err(Error::NotNormalized { sum });
        }
        // per-coordinate tilted laws, then their product over i < k
        let mut factors = Vec::with_capacity(k);
        for i in 0..k {
            let mut row: Vec<f64> = (0..c)
                .map(|v| profile.entry(i).get(v) * base[v])
                .collect();
            let norm: f64 = row.iter().sum();
            if norm <= 0.0 {
                return Err(Error::ZeroMass);
            }
            for value in &mut row {
                *value /= norm;
            }
            factors.push(row);
        }
        for_each_tuple(c, k, |index, tuple| {
            component[m][index] = tuple
                .iter()
                .enumerate()
                .map(|(i, &x)| factors[i][x])
                .product();
        });
    }

    // variables: w (atoms), e (cells), s1 (cells), s2 (cells)
    let vars = atoms + 3 * cells;
    let mut cost = vec![0.0f64; vars];
    for z in 0..cells {
        cost[atoms + z] = 0.5;
    }
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(2 * cells + 1);
    let mut rhs: Vec<f64> = Vec::with_capacity(2 * cells + 1);
    for z in 0..cells {
        // mix(z) + e_z - s1_z = p(z)
        let mut row = vec![0.0f64; vars];
        for m in 0..atoms {
            row[m] = component[m][z];
        }
        row[atoms + z] = 1.0;
        row[atoms + cells + z] = -1.0;
        rows.push(row);
        rhs.push(p_k.probs()[z]);
        // mix(z) - e_z + s2_z = p(z)
        let mut row = vec![0.0f64; vars];
        for m in 0..atoms {
            row[m] = component[m][z];
        }
        row[atoms + z] = -1.0;
        row[atoms + 2 * cells + z] = 1.0;
        rows.push(row);
        rhs.push(p_k.probs()[z]);
    }
    let mut total = vec![0.0f64; vars];
    for slot in total.iter_mut().take(atoms) {
        *slot = 1.0;
    }
    rows.push(total);
    rhs.push(1.0);

    let solution = crate::simplex::minimize(&cost, &rows, &rhs)?;
    let mut weights = solution.x[..atoms].to_vec();
    let norm: f64 = weights.iter().sum();
    if norm > 0.0 {
        for w in &mut weights {
            *w /= norm;
        }
    }
    Ok(LpProjection { value: solution.value.max(0.0), mixture_weights: weights })
}

/// Evenly spaced probability vectors on the `c`-point simplex with the given
/// resolution: all compositions `m/resolution`.
pub fn simplex_grid(c: usize, resolution: usize) -> Result<Vec<Vec<f64>>> {
    if resolution == 0 {
        return Err(Error::InvalidParameter { what: "grid resolution must be positive" });
    }
    Ok(Urn::enumerate(c, resolution)
        .into_iter()
        .map(|urn| {
            urn.counts()
                .iter()
                .map(|&m| m as f64 / resolution as f64)
                .collect()
        })
        .collect())
}

/// Draws a reproducible random instance: each weight row is log-uniform in
/// `[r_min, 1]` with one entry pinned to 1, and the kernel is the
/// exponential of uniform noise drawn once per sorted type class.
pub fn random_instance(seed: u64, c: usize, n: usize, r_min: f64) -> Result<Instance> {
    if c == 0 {
        return Err(Error::EmptyAlphabet);
    }
    if !(r_min > 0.0 && r_min <= 1.0) {
        return Err(Error::InvalidParameter { what: "r_min must lie in (0, 1]" });
    }
    let total = crate::space::tuple_count(c, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ln_floor = r_min.ln();
    let mut entries = Vec::with_capacity(n);
    for _ in 0..n {
        let mut row: Vec<f64> = (0..c)
            .map(|_| (ln_floor * rng.gen::<f64>()).exp())
            .collect();
        let pinned = rng.gen_range(0..c);
        row[pinned] = 1.0;
        entries.push(WeightFunction::new(row)?);
    }
    let profile = WeightProfile::new(entries)?;

    let mut values = vec![0.0f64; total];
    let mut canonical_value = vec![f64::NAN; total];
    for_each_tuple(c, n, |index, tuple| {
        let mut sorted = tuple.to_vec();
        sorted.sort_unstable();
        let canon = crate::space::index_of(c, &sorted);
        if canon == index {
            canonical_value[index] = rng.gen::<f64>().exp();
        }
        values[index] = canonical_value[canon];
    });
    let kernel = SymmetricKernel::new(c, n, values)?;
    Instance::new(profile, kernel, Some(seed))
}

/// Generation parameters for one sweep entry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepParams {
    pub seed: u64,
    pub c: usize,
    pub n: usize,
    pub r_min: f64,
}

/// The sweep pattern: entry `idx` cycles through `c in {2,3}`,
/// `n in 2..=7`, and `r_min in {1, 0.5, 0.2}`, with seeds derived from the
/// master seed by instance index.
pub fn sweep_plan(master_seed: u64, count: usize) -> Vec<SweepParams> {
    (0..count)
        .map(|idx| SweepParams {
            seed: master_seed ^ idx as u64,
            c: [2, 3][idx % 2],
            n: 2 + (idx / 2) % 6,
            r_min: [1.0, 0.5, 0.2][(idx / 12) % 3],
        })
        .collect()
}

/// The standard certification sweep: the 200-entry plan, realized.
pub fn default_sweep(master_seed: u64) -> Result<Vec<Instance>> {
    sweep_plan(master_seed, 200)
        .into_iter()
        .map(|p| random_instance(p.seed, p.c, p.n, p.r_min))
        .collect()
}
