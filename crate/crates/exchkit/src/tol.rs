//! Numeric tolerances used across the crate.
//!
//! Everything downstream compares probabilities, permanental ratios, and
//! total-variation values computed in f64. The constants here are the single
//! source of truth so tests and library code agree on what "equal" means.

/// Relative tolerance for symmetry and equality checks on probabilities.
pub const REL: f64 = 1e-8;

/// Absolute tolerance floor for the same checks (probability scale).
pub const ABS: f64 = 1e-10;

/// Entries below this are genuine sign errors; within `[NEG_CLAMP, 0)` they
/// are rounding dust and get clamped to zero.
pub const NEG_CLAMP: f64 = -1e-12;

/// Additive slack when testing `tv <= bound`.
pub const BOUND_SLACK: f64 = 1e-10;

/// Tolerance for exact-equality witnesses (sharpness cases).
pub const SHARPNESS: f64 = 1e-12;

/// Slack for comparing an LP optimum against a feasible objective value.
pub const LP_SLACK: f64 = 1e-8;

/// Largest dense support (c^k) the crate materializes.
pub const MAX_SUPPORT: usize = 1 << 24;

/// True when `a` and `b` agree within relative `REL` and absolute `ABS`.
pub fn approx_eq(a: f64, b: f64) -> bool {
    approx_eq_rel(a, b, REL)
}

/// True when `a` and `b` agree within relative `rel` and absolute `ABS`.
pub fn approx_eq_rel(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= ABS + rel * a.abs().max(b.abs())
}
