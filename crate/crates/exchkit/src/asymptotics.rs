//! Long-sequence behavior: classify binary weight-ratio sequences against
//! the summability conditions that decide whether the product-law
//! approximation survives as `n` grows, and measure the TV decay of finite
//! prefixes along a consistent tilted family.

use crate::bounds::{bound_general, Instance, InstanceAnalysis};
use crate::dist::tv_distance;
use crate::error::{Error, Result};
use crate::model::SymmetricKernel;
use crate::space::for_each_tuple;
use crate::weights::{WeightFunction, WeightProfile};

/// A named family generating ratios `r_1, r_2, ..` in `(0, 1]`; coordinate
/// `i` of the induced binary profile carries the weight row `(1, r_i)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WeightSequenceSpec {
    /// `r_i = r`.
    Constant { r: f64 },
    /// `r_i = 1 - a^i` with `a` in `(0, 1)`.
    OneMinusGeometric { a: f64 },
    /// `r_i = 1 - a * i^(-p)` with `a` in `(0, 1)`, `p > 0`.
    OneMinusPoly { a: f64, p: f64 },
    /// `r_i = a^i` with `a` in `(0, 1]`.
    Geometric { a: f64 },
    /// `r_i = 1 / i`.
    Harmonic,
}

impl WeightSequenceSpec {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            WeightSequenceSpec::Constant { r } => r > 0.0 && r <= 1.0,
            WeightSequenceSpec::OneMinusGeometric { a } => a > 0.0 && a < 1.0,
            WeightSequenceSpec::OneMinusPoly { a, p } => a > 0.0 && a < 1.0 && p > 0.0,
            WeightSequenceSpec::Geometric { a } => a > 0.0 && a <= 1.0,
            WeightSequenceSpec::Harmonic => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter { what: "sequence parameters leave (0,1]" })
        }
    }

    /// The ratio at 1-based position `i`.
    pub fn ratio(&self, i: usize) -> f64 {
        debug_assert!(i >= 1);
        match *self {
            WeightSequenceSpec::Constant { r } => r,
            WeightSequenceSpec::OneMinusGeometric { a } => 1.0 - a.powi(i as i32),
            WeightSequenceSpec::OneMinusPoly { a, p } => 1.0 - a * (i as f64).powf(-p),
            WeightSequenceSpec::Geometric { a } => a.powi(i as i32),
            WeightSequenceSpec::Harmonic => 1.0 / i as f64,
        }
    }

    /// The binary weight profile of the first `n` coordinates.
    pub fn profile(&self, n: usize) -> Result<WeightProfile> {
        self.validate()?;
        let rows: Result<Vec<WeightFunction>> = (1..=n)
            .map(|i| WeightFunction::new(vec![1.0, self.ratio(i)]))
            .collect();
        WeightProfile::new(rows?)
    }
}

/// Truncated sums and products of a ratio sequence together with the
/// closed-form convergence verdicts for its family.
#[derive(Clone, Copy, Debug)]
pub struct SequenceClassification {
    /// `sum_{i<=N} (1 - r_i)`.
    pub sum_one_minus_r: f64,
    /// `sum_{i<=N} r_i`.
    pub sum_r: f64,
    /// `prod_{i<=N} r_i`.
    pub prod_r: f64,
    /// `sum (1 - r_i) < infinity`: the mixture representation extends to the
    /// infinite sequence. Equivalent to `prod r_i > 0`.
    pub thm33_applies: bool,
    /// `sum r_i = infinity`.
    pub bc23_applies: bool,
    /// The binary-alphabet divergence condition; on two points the min/max
    /// ratio IS `r_i`, so this coincides with `bc23_applies`.
    pub lau88_binary: bool,
}

/// Classifies a ratio family: partial numerics to `n_terms`, verdicts from
/// closed-form analysis of the family (series tests, not extrapolation).
pub fn classify_weight_sequence(
    spec: &WeightSequenceSpec,
    n_terms: usize,
) -> Result<SequenceClassification> {
    spec.validate()?;
    if n_terms == 0 {
        return Err(Error::InvalidParameter { what: "truncation must be positive" });
    }
    let mut sum_one_minus_r = 0.0f64;
    let mut sum_r = 0.0f64;
    let mut prod_r = 1.0f64;
    for i in 1..=n_terms {
        let r = spec.ratio(i);
        sum_one_minus_r += 1.0 - r;
        sum_r += r;
        prod_r *= r;
    }
    let thm33_applies = match *spec {
        WeightSequenceSpec::Constant { r } => r == 1.0,
        WeightSequenceSpec::OneMinusGeometric { .. } => true,
        WeightSequenceSpec::OneMinusPoly { p, .. } => p > 1.0,
        WeightSequenceSpec::Geometric { a } => a == 1.0,
        WeightSequenceSpec::Harmonic => false,
    };
    let bc23_applies = match *spec {
        WeightSequenceSpec::Constant { .. } => true,
        WeightSequenceSpec::OneMinusGeometric { .. } => true,
        WeightSequenceSpec::OneMinusPoly { .. } => true,
        WeightSequenceSpec::Geometric { a } => a == 1.0,
        WeightSequenceSpec::Harmonic => true,
    };
    Ok(SequenceClassification {
        sum_one_minus_r,
        sum_r,
        prod_r,
        thm33_applies,
        bc23_applies,
        lau88_binary: bc23_applies,
    })
}

/// A consistent binary family: the exchangeable core is the Polya urn law
/// with parameters `(alpha, beta)` (probability of a tuple with `s` ones is
/// `prod_{j<s}(alpha+j) prod_{j<n-s}(beta+j) / prod_{j<n}(alpha+beta+j)`),
/// tilted by the sequence's weight profile.
pub fn tilted_polya_family(
    spec: &WeightSequenceSpec,
    mix_param: (f64, f64),
    n: usize,
) -> Result<Instance> {
    let (alpha, beta) = mix_param;
    if !(alpha > 0.0 && alpha.is_finite() && beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter { what: "Polya parameters must be positive" });
    }
    let profile = spec.profile(n)?;
    let total = crate::space::tuple_count(2, n)?;
    let mut denom = 1.0f64;
    for j in 0..n {
        denom *= alpha + beta + j as f64;
    }
    let mut values = vec![0.0f64; total];
    for_each_tuple(2, n, |index, tuple| {
        let ones: usize = tuple.iter().sum();
        let mut mass = 1.0f64;
        for j in 0..ones {
            mass *= alpha + j as f64;
        }
        for j in 0..(n - ones) {
            mass *= beta + j as f64;
        }
        values[index] = mass / denom;
    });
    let kernel = SymmetricKernel::new(2, n, values)?;
    Instance::new(profile, kernel, None)
}

/// One point of a decay curve.
#[derive(Clone, Copy, Debug)]
pub struct DecayPoint {
    /// Sequence length.
    pub n: usize,
    /// `tv(P_k, Q_k)` for the length-`n` family member.
    pub tv_exact: f64,
    /// The general rate bound at this `n`.
    pub bound: f64,
}

/// TV decay of the `k`-prefix approximation along the family, one point per
/// requested `n`. Exact desk-scale computation: every `n <= 10`, `k <= 3`.
pub fn tv_decay_experiment(
    spec: &WeightSequenceSpec,
    mix_param: (f64, f64),
    k: usize,
    n_list: &[usize],
) -> Result<Vec<DecayPoint>> {
    if k == 0 || k > 3 {
        return Err(Error::InvalidParameter { what: "decay experiments need 1 <= k <= 3" });
    }
    let mut out = Vec::with_capacity(n_list.len());
    for &n in n_list {
        if n > 10 {
            return Err(Error::MatrixTooLarge { n, limit: 10 });
        }
        if k > n {
            return Err(Error::KOutOfRange { k, n });
        }
        let instance = tilted_polya_family(spec, mix_param, n)?;
        let analysis = InstanceAnalysis::new(&instance)?;
        let p_k = analysis.model().marginal(k)?;
        let q_k = analysis.approximant_marginal(k)?;
        let tv_exact = tv_distance(&p_k, &q_k)?;
        let bound = bound_general(n, k, &instance.profile().ratios())?;
        out.push(DecayPoint { n, tv_exact, bound });
    }
    Ok(out)
}
