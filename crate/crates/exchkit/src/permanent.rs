//! Matrix permanents of positive weight matrices.
//!
//! Two routes: brute force over permutations (the oracle, n <= 10) and
//! Ryser's inclusion-exclusion with Gray-code subset updates (n <= 24).
//! Both pre-scale each row by its maximum so the f64 accumulation runs on
//! entries in (0, 1]; the scale factors are multiplied back in `ScaledReal`
//! where they cannot overflow. Ryser's alternating signs rule out log-domain
//! accumulation, hence the compensated plain-f64 sum.

use crate::error::{Error, Result};
use crate::scaled::ScaledReal;
use crate::space::Urn;
use crate::weights::WeightProfile;

/// Largest dimension accepted by the brute-force route.
pub const NAIVE_LIMIT: usize = 10;

/// Largest dimension accepted by the Ryser route.
pub const RYSER_LIMIT: usize = 24;

/// Square matrix of positive weights, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl WeightMatrix {
    /// A matrix from row-major entries; all must be positive and finite.
    /// The empty matrix (`n = 0`) is allowed and has permanent 1.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::LengthMismatch { expected: n * n, got: entries.len() });
        }
        for (index, &value) in entries.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NonpositiveValue { index, value });
            }
        }
        Ok(WeightMatrix { n, entries })
    }

    /// The matrix `M[i][j] = lambda_i(ball_j)` over an urn's balls in slot
    /// order.
    pub fn from_profile_urn(profile: &WeightProfile, urn: &Urn) -> Result<Self> {
        if urn.c() != profile.c() {
            return Err(Error::AlphabetMismatch { left: profile.c(), right: urn.c() });
        }
        let n = profile.n();
        if urn.size() != n {
            return Err(Error::UrnMismatch { urn_size: urn.size(), profile_rows: n });
        }
        let slots = urn.slots();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for &value in &slots {
                entries.push(profile.entry(i).get(value));
            }
        }
        Ok(WeightMatrix { n, entries })
    }

    /// Dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry at `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.n + col]
    }

    /// The submatrix with the listed rows and columns removed; the two lists
    /// must have equal length so the minor stays square.
    pub fn minor(&self, drop_rows: &[usize], drop_cols: &[usize]) -> Result<WeightMatrix> {
        if drop_rows.len() != drop_cols.len() {
            return Err(Error::LengthMismatch {
                expected: drop_rows.len(),
                got: drop_cols.len(),
            });
        }
        let keep = |dropped: &[usize]| -> Result<Vec<usize>> {
            let mut mask = vec![true; self.n];
            for &i in dropped {
                if i >= self.n || !mask[i] {
                    return Err(Error::InvalidParameter {
                        what: "minor indices must be distinct and in range",
                    });
                }
                mask[i] = false;
            }
            Ok((0..self.n).filter(|&i| mask[i]).collect())
        };
        let rows = keep(drop_rows)?;
        let cols = keep(drop_cols)?;
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &i in &rows {
            for &j in &cols {
                entries.push(self.get(i, j));
            }
        }
        Ok(WeightMatrix { n: rows.len(), entries })
    }
}

/// Per-row maxima factored out so the accumulation runs on entries in (0, 1].
fn scale_rows(m: &WeightMatrix) -> (Vec<f64>, ScaledReal) {
    let n = m.n;
    let mut scaled = m.entries.clone();
    let mut factor = ScaledReal::ONE;
    for i in 0..n {
        let row = &mut scaled[i * n..(i + 1) * n];
        let max = row.iter().cloned().fold(0.0f64, f64::max);
        for v in row {
            *v /= max;
        }
        factor = factor * ScaledReal::from_f64(max).expect("validated entries");
    }
    (scaled, factor)
}

/// Permanent by summing over all n! permutations. The oracle route.
pub fn permanent_naive(m: &WeightMatrix) -> Result<ScaledReal> {
    if m.n > NAIVE_LIMIT {
        return Err(Error::MatrixTooLarge { n: m.n, limit: NAIVE_LIMIT });
    }
    if m.n == 0 {
        return Ok(ScaledReal::ONE);
    }
    let (scaled, factor) = scale_rows(m);
    let n = m.n;
    let mut used = vec![false; n];
    let mut sum = 0.0f64;
    fn descend(scaled: &[f64], n: usize, row: usize, product: f64, used: &mut [bool], sum: &mut f64) {
        if row == n {
            *sum += product;
            return;
        }
        for col in 0..n {
            if !used[col] {
                used[col] = true;
                descend(scaled, n, row + 1, product * scaled[row * n + col], used, sum);
                used[col] = false;
            }
        }
    }
    descend(&scaled, n, 0, 1.0, &mut used, &mut sum);
    Ok(ScaledReal::from_f64(sum)? * factor)
}

/// Permanent by Ryser's formula with Gray-code subset updates and Kahan
/// compensation. `O(2^n * n)` time, deterministic, single-threaded.
pub fn permanent_ryser(m: &WeightMatrix) -> Result<ScaledReal> {
    if m.n > RYSER_LIMIT {
        return Err(Error::MatrixTooLarge { n: m.n, limit: RYSER_LIMIT });
    }
    if m.n == 0 {
        return Ok(ScaledReal::ONE);
    }
    let (scaled, factor) = scale_rows(m);
    let n = m.n;
    let mut row_sums = vec![0.0f64; n];
    let mut sum = 0.0f64;
    let mut comp = 0.0f64; // Kahan carry
    let mut prev_gray: u32 = 0;
    for t in 1u32..(1u32 << n) {
        let gray = t ^ (t >> 1);
        let changed = gray ^ prev_gray;
        let col = changed.trailing_zeros() as usize;
        if gray & changed != 0 {
            for i in 0..n {
                row_sums[i] += scaled[i * n + col];
            }
        } else {
            for i in 0..n {
                row_sums[i] -= scaled[i * n + col];
            }
        }
        prev_gray = gray;
        let product: f64 = row_sums.iter().product();
        // sign (-1)^(n - |S|)
        let term = if (n as u32 - gray.count_ones()) % 2 == 0 { product } else { -product };
        let y = term - comp;
        let t2 = sum + y;
        comp = (t2 - sum) - y;
        sum = t2;
    }
    if sum < 0.0 {
        // positive matrices have positive permanents; a negative accumulation
        // means the cancellation exceeded f64 precision
        return Err(Error::InvalidParameter { what: "permanent accumulation lost all precision" });
    }
    Ok(ScaledReal::from_f64(sum)? * factor)
}

/// Permanent of `m` with rows and columns removed, via the Ryser route.
pub fn permanent_minor(
    m: &WeightMatrix,
    drop_rows: &[usize],
    drop_cols: &[usize],
) -> Result<ScaledReal> {
    permanent_ryser(&m.minor(drop_rows, drop_cols)?)
}
