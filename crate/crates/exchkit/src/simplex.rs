//! Dense two-phase simplex for small linear programs in standard form:
//! minimize `cost . x` subject to `A x = b`, `x >= 0`.
//!
//! Bland's smallest-index rule on both the entering and leaving choices, so
//! degenerate programs cannot cycle. Everything is a plain dense tableau;
//! problem sizes here are a few hundred variables at most.

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-9;
const FEAS_EPS: f64 = 1e-7;

/// Optimum of a solved program.
#[derive(Clone, Debug)]
pub struct SimplexSolution {
    /// Minimal objective value.
    pub value: f64,
    /// A minimizer.
    pub x: Vec<f64>,
}

struct Tableau {
    rows: usize,
    cols: usize, // variables only; rhs kept separately
    a: Vec<f64>, // rows x cols
    b: Vec<f64>,
    cost: Vec<f64>,     // reduced cost row
    objective: f64,     // negated current objective value
    basis: Vec<usize>,  // basic variable per row
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.a[r * self.cols + c]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let scale = self.at(row, col);
        for c in 0..self.cols {
            self.a[row * self.cols + c] /= scale;
        }
        self.b[row] /= scale;
        for r in 0..self.rows {
            if r == row {
                continue;
            }
            let factor = self.at(r, col);
            if factor == 0.0 {
                continue;
            }
            for c in 0..self.cols {
                self.a[r * self.cols + c] -= factor * self.at(row, c);
            }
            self.b[r] -= factor * self.b[row];
        }
        let factor = self.cost[col];
        if factor != 0.0 {
            for c in 0..self.cols {
                self.cost[c] -= factor * self.at(row, c);
            }
            // entering at reduced cost `factor` moves the objective by
            // `factor` times the pivot ratio, which is the scaled rhs
            self.objective += factor * self.b[row];
        }
        self.basis[row] = col;
    }

    /// Runs simplex iterations until optimal. `allowed` masks columns the
    /// entering rule may pick (used to freeze artificials in phase 2).
    fn optimize(&mut self, allowed: &[bool]) -> Result<()> {
        let cap = 2000 * (self.rows + self.cols).max(10);
        for _ in 0..cap {
            let entering = (0..self.cols)
                .find(|&c| allowed[c] && self.cost[c] < -PIVOT_EPS);
            let col = match entering {
                Some(c) => c,
                None => return Ok(()),
            };
            let mut leaving: Option<usize> = None;
            let mut best = f64::INFINITY;
            for r in 0..self.rows {
                let coeff = self.at(r, col);
                if coeff > PIVOT_EPS {
                    let ratio = self.b[r] / coeff;
                    let better = ratio < best - 1e-12
                        || (ratio < best + 1e-12
                            && leaving.map_or(true, |lr| self.basis[r] < self.basis[lr]));
                    if better {
                        best = ratio;
                        leaving = Some(r);
                    }
                }
            }
            match leaving {
                Some(row) => self.pivot(row, col),
                None => return Err(Error::Unbounded),
            }
        }
        Err(Error::InvalidParameter { what: "simplex iteration cap exceeded" })
    }
}

/// Minimizes `cost . x` subject to `constraints[r] . x = rhs[r]` for every
/// row and `x >= 0`.
pub fn minimize(cost: &[f64], constraints: &[Vec<f64>], rhs: &[f64]) -> Result<SimplexSolution> {
    let vars = cost.len();
    let rows = constraints.len();
    if rhs.len() != rows {
        return Err(Error::LengthMismatch { expected: rows, got: rhs.len() });
    }
    for row in constraints {
        if row.len() != vars {
            return Err(Error::LengthMismatch { expected: vars, got: row.len() });
        }
    }
    if vars == 0 {
        return Err(Error::InvalidParameter { what: "linear program needs variables" });
    }

    // phase 1: artificial variable per row, flip rows so rhs >= 0
    let cols = vars + rows;
    let mut a = vec![0.0f64; rows * cols];
    let mut b = vec![0.0f64; rows];
    for r in 0..rows {
        let flip = if rhs[r] < 0.0 { -1.0 } else { 1.0 };
        for c in 0..vars {
            a[r * cols + c] = flip * constraints[r][c];
        }
        a[r * cols + vars + r] = 1.0;
        b[r] = flip * rhs[r];
    }
    // phase-1 reduced costs for the artificial basis: negated column sums
    let mut phase1_cost = vec![0.0f64; cols];
    let mut objective = 0.0f64;
    for c in 0..vars {
        let mut sum = 0.0;
        for r in 0..rows {
            sum += a[r * cols + c];
        }
        phase1_cost[c] = -sum;
    }
    for r in 0..rows {
        objective += b[r];
    }
    let mut tab = Tableau {
        rows,
        cols,
        a,
        b,
        cost: phase1_cost,
        objective,
        basis: (vars..cols).collect(),
    };
    let allow_all = vec![true; cols];
    tab.optimize(&allow_all)?;
    if tab.objective > FEAS_EPS {
        return Err(Error::Infeasible);
    }
    // drive any artificial still basic (at zero) out of the basis
    for r in 0..rows {
        if tab.basis[r] >= vars {
            if let Some(col) = (0..vars).find(|&c| tab.at(r, c).abs() > PIVOT_EPS) {
                tab.pivot(r, col);
            }
            // otherwise the row is all zeros over the real variables:
            // a redundant constraint; leave the artificial basic at zero
        }
    }

    // phase 2: real objective, artificial columns frozen
    let mut cost_row = vec![0.0f64; tab.cols];
    cost_row[..vars].copy_from_slice(cost);
    let mut value = 0.0f64;
    for r in 0..rows {
        let factor = cost_row[tab.basis[r]];
        if factor != 0.0 {
            for c in 0..tab.cols {
                cost_row[c] -= factor * tab.at(r, c);
            }
            value += factor * tab.b[r];
        }
    }
    tab.cost = cost_row;
    tab.objective = value;
    let mut allowed = vec![true; tab.cols];
    for flag in allowed.iter_mut().skip(vars) {
        *flag = false;
    }
    tab.optimize(&allowed)?;

    let mut x = vec![0.0f64; vars];
    for r in 0..rows {
        if tab.basis[r] < vars {
            x[tab.basis[r]] = tab.b[r].max(0.0);
        }
    }
    let value = cost.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(SimplexSolution { value, x })
}
