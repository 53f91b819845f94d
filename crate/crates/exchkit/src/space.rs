//! The finite alphabet, tuple indexing, and urns (multisets of alphabet
//! points).
//!
//! Tuples over the alphabet `{0, .., c-1}` are stored densely: the tuple
//! `(x_1, .., x_k)` lives at flat index `x_1 * c^(k-1) + .. + x_k`, i.e.
//! base-c with the first coordinate most significant. Marginalizing the last
//! coordinates is then summation over contiguous blocks.

use crate::error::{Error, Result};
use crate::tol::MAX_SUPPORT;

/// Finite alphabet `{0, 1, .., c-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FiniteSpace {
    c: usize,
}

impl FiniteSpace {
    /// A space with `c >= 1` points.
    pub fn new(c: usize) -> Result<Self> {
        if c == 0 {
            return Err(Error::EmptyAlphabet);
        }
        Ok(FiniteSpace { c })
    }

    /// Number of points.
    pub fn size(&self) -> usize {
        self.c
    }

    /// Iterator over the points in order.
    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.c
    }
}

/// `c^k` with the dense-support guard applied.
pub fn tuple_count(c: usize, k: usize) -> Result<usize> {
    if c == 0 {
        return Err(Error::EmptyAlphabet);
    }
    let mut total: usize = 1;
    for _ in 0..k {
        total = total
            .checked_mul(c)
            .filter(|&t| t <= MAX_SUPPORT)
            .ok_or(Error::SupportTooLarge { c, k, limit: MAX_SUPPORT })?;
    }
    Ok(total)
}

/// Flat index of a tuple, first coordinate most significant.
pub fn index_of(c: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &x| {
        debug_assert!(x < c);
        acc * c + x
    })
}

/// Tuple at a flat index.
pub fn tuple_of(c: usize, k: usize, mut index: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for slot in out.iter_mut().rev() {
        *slot = index % c;
        index /= c;
    }
    out
}

/// Calls `f(index, tuple)` for every tuple of length `k`, in index order.
///
/// The digit buffer is reused across calls (odometer increment), so this
/// allocates once regardless of `c^k`.
pub fn for_each_tuple(c: usize, k: usize, mut f: impl FnMut(usize, &[usize])) {
    let total = match tuple_count(c, k) {
        Ok(t) => t,
        Err(_) => return,
    };
    let mut digits = vec![0usize; k];
    for index in 0..total {
        f(index, &digits);
        for pos in (0..k).rev() {
            digits[pos] += 1;
            if digits[pos] < c {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// An urn: a multiset over the alphabet, stored as per-point counts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Urn {
    counts: Vec<usize>,
}

impl Urn {
    /// An urn from per-point counts; must hold at least one ball.
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        if counts.iter().sum::<usize>() == 0 {
            return Err(Error::EmptyUrn);
        }
        Ok(Urn { counts })
    }

    /// The multiset of values in a tuple.
    pub fn of_tuple(c: usize, tuple: &[usize]) -> Result<Self> {
        let mut counts = vec![0; c];
        for &x in tuple {
            if x >= c {
                return Err(Error::LengthMismatch { expected: c, got: x });
            }
            counts[x] += 1;
        }
        Urn::new(counts)
    }

    /// Alphabet size.
    pub fn c(&self) -> usize {
        self.counts.len()
    }

    /// Number of balls `n`.
    pub fn size(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Per-point counts.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// The balls as a sorted value list, one entry per ball.
    pub fn slots(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.size());
        for (value, &count) in self.counts.iter().enumerate() {
            out.extend(std::iter::repeat(value).take(count));
        }
        out
    }

    /// True when `tuple` can be drawn from this urn without replacement.
    pub fn contains_tuple(&self, tuple: &[usize]) -> bool {
        let mut used = vec![0usize; self.counts.len()];
        for &x in tuple {
            if x >= self.counts.len() {
                return false;
            }
            used[x] += 1;
            if used[x] > self.counts[x] {
                return false;
            }
        }
        true
    }

    /// All urns of size `n` over `c` points, in lexicographic count order.
    pub fn enumerate(c: usize, n: usize) -> Vec<Urn> {
        let mut out = Vec::new();
        let mut counts = vec![0; c];
        fill(&mut out, &mut counts, 0, n);
        out
    }
}

fn fill(out: &mut Vec<Urn>, counts: &mut Vec<usize>, point: usize, remaining: usize) {
    if point + 1 == counts.len() {
        counts[point] = remaining;
        out.push(Urn { counts: counts.clone() });
        counts[point] = 0;
        return;
    }
    for take in 0..=remaining {
        counts[point] = take;
        fill(out, counts, point + 1, remaining - take);
    }
    counts[point] = 0;
}
