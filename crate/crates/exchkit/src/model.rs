//! Tilted models: a symmetric kernel times per-coordinate weights.
//!
//! A distribution `P` on length-`n` tuples is weighted exchangeable for a
//! profile `lambda` exactly when the de-tilted mass `P(x) / prod_i
//! lambda_i(x_i)` is invariant under permuting the coordinates of `x`.
//! `build_model` produces such laws; `is_weighted_exchangeable` tests the
//! invariance for arbitrary input.

use crate::dist::TupleDistribution;
use crate::error::{Error, Result};
use crate::space::{for_each_tuple, index_of, tuple_count};
use crate::tol;
use crate::weights::WeightProfile;

/// Strictly positive, permutation-symmetric function on length-`n` tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricKernel {
    c: usize,
    n: usize,
    values: Vec<f64>,
}

impl SymmetricKernel {
    /// A kernel from dense values; must be positive and symmetric within the
    /// crate tolerances.
    pub fn new(c: usize, n: usize, values: Vec<f64>) -> Result<Self> {
        let expected = tuple_count(c, n)?;
        if values.len() != expected {
            return Err(Error::LengthMismatch { expected, got: values.len() });
        }
        for (index, &value) in values.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NonpositiveValue { index, value });
            }
        }
        // Symmetric iff every tuple agrees with its sorted representative.
        let mut bad = None;
        for_each_tuple(c, n, |index, tuple| {
            let mut sorted = tuple.to_vec();
            sorted.sort_unstable();
            let canon = index_of(c, &sorted);
            if !tol::approx_eq(values[index], values[canon]) && bad.is_none() {
                bad = Some(index);
            }
        });
        if let Some(index) = bad {
            return Err(Error::AsymmetricKernel { index });
        }
        Ok(SymmetricKernel { c, n, values })
    }

    /// The constant-one kernel.
    pub fn ones(c: usize, n: usize) -> Result<Self> {
        Ok(SymmetricKernel { c, n, values: vec![1.0; tuple_count(c, n)?] })
    }

    /// Alphabet size.
    pub fn c(&self) -> usize {
        self.c
    }

    /// Tuple length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dense values in tuple-index order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// The tilted model: probabilities proportional to
/// `prod_i lambda_i(x_i) * g(x)`.
pub fn build_model(profile: &WeightProfile, kernel: &SymmetricKernel) -> Result<TupleDistribution> {
    if profile.c() != kernel.c() {
        return Err(Error::AlphabetMismatch { left: profile.c(), right: kernel.c() });
    }
    if profile.n() != kernel.n() {
        return Err(Error::LengthMismatch { expected: profile.n(), got: kernel.n() });
    }
    let mut weights = vec![0.0; kernel.values().len()];
    for_each_tuple(profile.c(), profile.n(), |index, tuple| {
        weights[index] = profile.tuple_weight(tuple) * kernel.values()[index];
    });
    TupleDistribution::from_weights(profile.c(), profile.n(), weights)
}

/// Worst permutation-orbit spread of the de-tilted mass, with witnesses.
#[derive(Clone, Debug)]
pub struct OrbitSpread {
    /// Largest de-tilted mass anywhere; the natural comparison scale.
    pub scale: f64,
    /// Tuple attaining the orbit maximum.
    pub tuple_hi: Vec<usize>,
    /// Tuple attaining the orbit minimum.
    pub tuple_lo: Vec<usize>,
    /// De-tilted mass at `tuple_hi`.
    pub hi: f64,
    /// De-tilted mass at `tuple_lo`.
    pub lo: f64,
}

/// True iff `f(x) / prod_i lambda_i(x_i)` is permutation-symmetric within
/// relative tolerance `tol` (absolute floor `ABS` scaled by the largest
/// de-tilted mass, so zero-mass points compare absolutely).
pub fn is_weighted_exchangeable(
    f: &TupleDistribution,
    profile: &WeightProfile,
    tol: f64,
) -> Result<bool> {
    let spread = exchangeability_violation(f, profile)?;
    Ok(match spread {
        None => true,
        Some(s) => s.hi - s.lo <= tol * s.hi + tol::ABS * s.scale,
    })
}

/// The worst orbit of the de-tilted mass, or `None` when every orbit is
/// exactly constant. The two witness tuples are a permutation of each other
/// and name where symmetry breaks.
pub fn exchangeability_violation(
    f: &TupleDistribution,
    profile: &WeightProfile,
) -> Result<Option<OrbitSpread>> {
    if f.c() != profile.c() {
        return Err(Error::AlphabetMismatch { left: f.c(), right: profile.c() });
    }
    if f.k() != profile.n() {
        return Err(Error::LengthMismatch { expected: profile.n(), got: f.k() });
    }
    let c = f.c();
    let n = f.k();
    let total = tuple_count(c, n)?;
    // Orbits are keyed by the sorted representative's index; track min and
    // max of h over each orbit in two dense passes.
    let mut lo = vec![f64::INFINITY; total];
    let mut hi = vec![f64::NEG_INFINITY; total];
    let mut arg_lo = vec![0usize; total];
    let mut arg_hi = vec![0usize; total];
    let mut scale = 0.0f64;
    for_each_tuple(c, n, |index, tuple| {
        let h = f.probs()[index] / profile.tuple_weight(tuple);
        scale = scale.max(h);
        let mut sorted = tuple.to_vec();
        sorted.sort_unstable();
        let canon = index_of(c, &sorted);
        if h < lo[canon] {
            lo[canon] = h;
            arg_lo[canon] = index;
        }
        if h > hi[canon] {
            hi[canon] = h;
            arg_hi[canon] = index;
        }
    });
    let mut worst: Option<(f64, usize)> = None;
    for canon in 0..total {
        if hi[canon] < lo[canon] {
            continue; // index not a sorted representative
        }
        let gap = hi[canon] - lo[canon];
        if gap > 0.0 && worst.map_or(true, |(g, _)| gap > g) {
            worst = Some((gap, canon));
        }
    }
    Ok(worst.map(|(_, canon)| OrbitSpread {
        scale,
        tuple_hi: crate::space::tuple_of(c, n, arg_hi[canon]),
        tuple_lo: crate::space::tuple_of(c, n, arg_lo[canon]),
        hi: hi[canon],
        lo: lo[canon],
    }))
}
