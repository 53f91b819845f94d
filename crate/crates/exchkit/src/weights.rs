//! Per-coordinate weight functions and their ratios.
//!
//! A weight profile assigns each coordinate `i = 1..n` a strictly positive
//! function `lambda_i` on the alphabet. The ratio `r_i = min lambda_i / max
//! lambda_i` in `(0, 1]` measures how far the coordinate is from unweighted;
//! prefix products of ratios enter every approximation bound.

use crate::error::{Error, Result};

/// Strictly positive weight function on the alphabet.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightFunction {
    values: Vec<f64>,
}

impl WeightFunction {
    /// A weight function from per-point values; all must be positive and finite.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        for (index, &value) in values.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NonpositiveValue { index, value });
            }
        }
        Ok(WeightFunction { values })
    }

    /// The constant-one function on `c` points.
    pub fn ones(c: usize) -> Self {
        WeightFunction { values: vec![1.0; c] }
    }

    /// Alphabet size.
    pub fn c(&self) -> usize {
        self.values.len()
    }

    /// Value at an alphabet point.
    pub fn get(&self, x: usize) -> f64 {
        self.values[x]
    }

    /// All values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// min / max over the alphabet, in `(0, 1]`.
    pub fn ratio(&self) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for &v in &self.values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        lo / hi
    }
}

/// One weight function per coordinate, all over the same alphabet.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightProfile {
    entries: Vec<WeightFunction>,
}

impl WeightProfile {
    /// A profile from per-coordinate functions; alphabets must agree.
    pub fn new(entries: Vec<WeightFunction>) -> Result<Self> {
        let first = entries
            .first()
            .ok_or(Error::InvalidParameter { what: "profile needs at least one coordinate" })?;
        let c = first.c();
        for entry in &entries {
            if entry.c() != c {
                return Err(Error::AlphabetMismatch { left: c, right: entry.c() });
            }
        }
        Ok(WeightProfile { entries })
    }

    /// The unweighted profile: `lambda_i` constant one for `n` coordinates.
    pub fn ones(c: usize, n: usize) -> Self {
        WeightProfile { entries: vec![WeightFunction::ones(c); n] }
    }

    /// Number of coordinates `n`.
    pub fn n(&self) -> usize {
        self.entries.len()
    }

    /// Alphabet size.
    pub fn c(&self) -> usize {
        self.entries[0].c()
    }

    /// Weight function of coordinate `i` (0-based).
    pub fn entry(&self, i: usize) -> &WeightFunction {
        &self.entries[i]
    }

    /// All per-coordinate ratios `r_1..r_n`.
    pub fn ratios(&self) -> Vec<f64> {
        self.entries.iter().map(WeightFunction::ratio).collect()
    }

    /// `prod_{i<=k} r_i` for a prefix of coordinates.
    pub fn ratio_prefix_product(&self, k: usize) -> f64 {
        self.entries[..k].iter().map(WeightFunction::ratio).product()
    }

    /// Product of `lambda_i(x_i)` along a tuple using the first `tuple.len()`
    /// coordinates.
    pub fn tuple_weight(&self, tuple: &[usize]) -> f64 {
        tuple
            .iter()
            .enumerate()
            .map(|(i, &x)| self.entries[i].get(x))
            .product()
    }
}

/// Rescales each coordinate by `theta_i > 0` where the factors multiply to 1.
///
/// Such a rescaling is a gauge move: it leaves every model built from the
/// profile unchanged, which is what makes the constraint worth validating.
pub fn rescale_weights(profile: &WeightProfile, theta: &[f64]) -> Result<WeightProfile> {
    if theta.len() != profile.n() {
        return Err(Error::LengthMismatch { expected: profile.n(), got: theta.len() });
    }
    for (index, &t) in theta.iter().enumerate() {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::NonpositiveValue { index, value: t });
        }
    }
    let product: f64 = theta.iter().product();
    if (product - 1.0).abs() > 1e-8 {
        return Err(Error::ScaleProductNotOne { product });
    }
    let entries = profile
        .entries
        .iter()
        .zip(theta)
        .map(|(entry, &t)| {
            WeightFunction::new(entry.values().iter().map(|&v| t * v).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    WeightProfile::new(entries)
}
