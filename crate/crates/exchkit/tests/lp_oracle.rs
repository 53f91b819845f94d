//! Checks the simplex solver against brute-force vertex enumeration: every
//! basic solution of `A x = b, x >= 0` is computed by Gaussian elimination
//! and the best feasible one must match the solver's optimum.

use exchkit::simplex::minimize;
use proptest::prelude::*;

/// Solves the square system `m x = rhs`; None when near-singular.
fn solve_square(m: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = rhs.len();
    let mut a: Vec<Vec<f64>> = m.iter().cloned().collect();
    let mut b = rhs.to_vec();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap()
        })?;
        if a[pivot][col].abs() < 1e-9 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Best objective over all feasible basic solutions.
fn oracle_minimum(cost: &[f64], rows: &[Vec<f64>], rhs: &[f64]) -> Option<f64> {
    let vars = cost.len();
    let m = rows.len();
    let mut best: Option<f64> = None;
    let mut basis = vec![0usize; m];
    fn choose(
        start: usize,
        slot: usize,
        vars: usize,
        basis: &mut Vec<usize>,
        cost: &[f64],
        rows: &[Vec<f64>],
        rhs: &[f64],
        best: &mut Option<f64>,
    ) {
        let m = basis.len();
        if slot == m {
            let square: Vec<Vec<f64>> = rows
                .iter()
                .map(|row| basis.iter().map(|&j| row[j]).collect())
                .collect();
            if let Some(x_b) = solve_square(&square, rhs) {
                if x_b.iter().all(|&v| v >= -1e-9) {
                    let value: f64 =
                        basis.iter().zip(&x_b).map(|(&j, &v)| cost[j] * v).sum();
                    *best = Some(best.map_or(value, |b: f64| b.min(value)));
                }
            }
            return;
        }
        for j in start..vars {
            basis[slot] = j;
            choose(j + 1, slot + 1, vars, basis, cost, rows, rhs, best);
        }
    }
    choose(0, 0, vars, &mut basis, cost, rows, rhs, &mut best);
    best
}

fn arbitrary_bounded_lp() -> impl Strategy<Value = (Vec<f64>, Vec<Vec<f64>>, Vec<f64>)> {
    (2usize..=3, 3usize..=6)
        .prop_flat_map(|(extra_rows, vars)| {
            let rows = proptest::collection::vec(
                proptest::collection::vec(-2.0f64..2.0, vars),
                extra_rows,
            );
            let point = proptest::collection::vec(0.0f64..2.0, vars);
            let cost = proptest::collection::vec(-1.0f64..1.0, vars);
            (Just(vars), rows, point, cost)
        })
        .prop_map(|(vars, mut rows, point, cost)| {
            // an all-ones row keeps the feasible set bounded; rhs comes from
            // a nonnegative point so the program is feasible by construction
            rows.push(vec![1.0; vars]);
            let rhs: Vec<f64> = rows
                .iter()
                .map(|row| row.iter().zip(&point).map(|(a, x)| a * x).sum())
                .collect();
            (cost, rows, rhs)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn solver_matches_vertex_enumeration((cost, rows, rhs) in arbitrary_bounded_lp()) {
        let solved = minimize(&cost, &rows, &rhs).unwrap();
        // rank-deficient draws have no basic solution for the oracle to find;
        // the solver's redundant-row handling is unit-tested separately
        let oracle = match oracle_minimum(&cost, &rows, &rhs) {
            Some(v) => v,
            None => return Err(TestCaseError::reject("rank-deficient rows")),
        };
        prop_assert!(
            (solved.value - oracle).abs() < 1e-6,
            "solver {} oracle {}",
            solved.value,
            oracle
        );
        // the returned point must itself be feasible and consistent
        for (row, &target) in rows.iter().zip(&rhs) {
            let lhs: f64 = row.iter().zip(&solved.x).map(|(a, x)| a * x).sum();
            prop_assert!((lhs - target).abs() < 1e-6);
        }
        prop_assert!(solved.x.iter().all(|&v| v >= -1e-9));
    }
}
