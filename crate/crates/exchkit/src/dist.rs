//! Dense distributions over tuples, total variation, and marginals.

use crate::error::{Error, Result};
use crate::space::tuple_count;
use crate::tol;

/// Probability distribution over length-`k` tuples from a `c`-point alphabet,
/// stored densely in tuple-index order.
#[derive(Clone, Debug, PartialEq)]
pub struct TupleDistribution {
    c: usize,
    k: usize,
    probs: Vec<f64>,
}

impl TupleDistribution {
    /// A distribution from probabilities already summing to 1.
    ///
    /// Entries in `[NEG_CLAMP, 0)` are clamped to zero; anything lower is an
    /// error. After clamping the sum must be 1 within `1e-10`; the vector is
    /// then renormalized so downstream sums start from exactly 1.
    pub fn new(c: usize, k: usize, probs: Vec<f64>) -> Result<Self> {
        let expected = tuple_count(c, k)?;
        if probs.len() != expected {
            return Err(Error::LengthMismatch { expected, got: probs.len() });
        }
        let mut probs = probs;
        clamp_negative_dust(&mut probs)?;
        let sum: f64 = probs.iter().sum();
        if !((sum - 1.0).abs() <= 1e-10) {
            return Err(Error::NotNormalized { sum });
        }
        for p in &mut probs {
            *p /= sum;
        }
        Ok(TupleDistribution { c, k, probs })
    }

    /// A distribution from nonnegative weights, normalized by their sum.
    pub fn from_weights(c: usize, k: usize, weights: Vec<f64>) -> Result<Self> {
        let expected = tuple_count(c, k)?;
        if weights.len() != expected {
            return Err(Error::LengthMismatch { expected, got: weights.len() });
        }
        let mut weights = weights;
        clamp_negative_dust(&mut weights)?;
        let sum: f64 = weights.iter().sum();
        if !(sum.is_finite() && sum > 0.0) {
            return Err(Error::ZeroMass);
        }
        for w in &mut weights {
            *w /= sum;
        }
        Ok(TupleDistribution { c, k, probs: weights })
    }

    /// Point mass at one tuple.
    pub fn point_mass(c: usize, tuple: &[usize]) -> Result<Self> {
        let total = tuple_count(c, tuple.len())?;
        let mut probs = vec![0.0; total];
        probs[crate::space::index_of(c, tuple)] = 1.0;
        Ok(TupleDistribution { c, k: tuple.len(), probs })
    }

    /// Mixture `sum_j w_j * parts_j`; weights must be a probability vector.
    pub fn mixture(parts: &[(f64, &TupleDistribution)]) -> Result<Self> {
        let (_, first) = parts.first().ok_or(Error::ZeroMass)?;
        let (c, k) = (first.c, first.k);
        let mut probs = vec![0.0; first.probs.len()];
        let mut total = 0.0;
        for &(w, part) in parts {
            if part.c != c {
                return Err(Error::AlphabetMismatch { left: c, right: part.c });
            }
            if part.k != k {
                return Err(Error::LengthMismatch { expected: k, got: part.k });
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::NegativeProbability { index: 0, value: w });
            }
            total += w;
            for (acc, &p) in probs.iter_mut().zip(&part.probs) {
                *acc += w * p;
            }
        }
        if !((total - 1.0).abs() <= 1e-10) {
            return Err(Error::NotNormalized { sum: total });
        }
        TupleDistribution::new(c, k, probs)
    }

    /// Alphabet size.
    pub fn c(&self) -> usize {
        self.c
    }

    /// Tuple length.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Probabilities in tuple-index order.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Probability of one tuple.
    pub fn prob(&self, tuple: &[usize]) -> f64 {
        debug_assert_eq!(tuple.len(), self.k);
        self.probs[crate::space::index_of(self.c, tuple)]
    }

    /// Law of the first `k` coordinates.
    ///
    /// With the first coordinate most significant, the last `self.k - k`
    /// coordinates occupy contiguous index blocks, so this is blockwise
    /// summation.
    pub fn marginal(&self, k: usize) -> Result<TupleDistribution> {
        if k == 0 || k > self.k {
            return Err(Error::KOutOfRange { k, n: self.k });
        }
        let block = tuple_count(self.c, self.k - k)?;
        let probs: Vec<f64> = self
            .probs
            .chunks_exact(block)
            .map(|chunk| chunk.iter().sum())
            .collect();
        TupleDistribution::new(self.c, k, probs)
    }
}

fn clamp_negative_dust(values: &mut [f64]) -> Result<()> {
    for (index, value) in values.iter_mut().enumerate() {
        if *value < tol::NEG_CLAMP {
            return Err(Error::NegativeProbability { index, value: *value });
        }
        if *value < 0.0 {
            *value = 0.0;
        }
    }
    Ok(())
}

/// Total variation distance `0.5 * sum |p - q|`, in `[0, 1]`.
pub fn tv_distance(p: &TupleDistribution, q: &TupleDistribution) -> Result<f64> {
    if p.c != q.c {
        return Err(Error::AlphabetMismatch { left: p.c, right: q.c });
    }
    if p.k != q.k {
        return Err(Error::LengthMismatch { expected: p.k, got: q.k });
    }
    let sum: f64 = p.probs.iter().zip(&q.probs).map(|(a, b)| (a - b).abs()).sum();
    Ok((sum / 2.0).clamp(0.0, 1.0))
}
