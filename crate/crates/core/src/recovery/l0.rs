//! Exhaustive sparsest-solution search for tiny dense systems.

use nalgebra::{DMatrix, DVector};

use crate::constants::{L0_FEASIBILITY_TOL, RANK_TOL};
use crate::error::{Error, Result};

/// Largest column count the enumeration accepts.
pub const L0_MAX_COLUMNS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct L0Solution {
    /// Sorted column indices of the nonzeros.
    pub support: Vec<usize>,
    /// Full-length solution vector.
    pub x: Vec<f64>,
    pub residual: f64,
    /// Whether `A x = b` holds within the feasibility tolerance.
    pub exact: bool,
    /// Supports skipped because their columns were rank deficient.
    pub skipped: Vec<Vec<usize>>,
}

/// Advance `combo` to the next k-subset of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Least-squares fit on the given columns; `None` when they are rank deficient.
fn fit_support(a: &DMatrix<f64>, b: &DVector<f64>, support: &[usize]) -> Option<(Vec<f64>, f64)> {
    if support.is_empty() {
        return Some((Vec::new(), b.norm()));
    }
    if support.len() > a.nrows() {
        return None;
    }
    let sub = a.select_columns(support);
    let svd = sub.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smax == 0.0 || smin <= RANK_TOL * smax {
        return None;
    }
    let coef = svd.solve(b, 0.0).ok()?;
    let residual = (b - &sub * &coef).norm();
    Some((coef.iter().copied().collect(), residual))
}

/// Sparsest `x` with `A x = b`, searching every support of size at most
/// `k_max` in order of size and then lexicographically.
///
/// The first support whose least-squares fit is exact wins. When no
/// support up to `k_max` fits exactly, the smallest-residual fit is
/// returned with `exact = false` (ties go to the earlier support).
pub fn l0_oracle(b: &[f64], a: &DMatrix<f64>, k_max: usize) -> Result<L0Solution> {
    let (m, n) = (a.nrows(), a.ncols());
    if n == 0 || n > L0_MAX_COLUMNS || m > L0_MAX_COLUMNS {
        return Err(Error::Parameter(format!(
            "l0 oracle handles at most {L0_MAX_COLUMNS}x{L0_MAX_COLUMNS}, got {m}x{n}"
        )));
    }
    if b.len() != m {
        return Err(Error::Parameter(format!("{} measurements for {m} rows", b.len())));
    }
    if b.iter().chain(a.iter()).any(|v| !v.is_finite()) {
        return Err(Error::Numeric("non-finite input to l0 oracle".into()));
    }
    let bv = DVector::from_column_slice(b);
    let feasible = L0_FEASIBILITY_TOL * bv.norm().max(1.0);

    let mut skipped = Vec::new();
    let mut best: Option<(Vec<usize>, Vec<f64>, f64)> = None;
    for k in 0..=k_max.min(n) {
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            match fit_support(a, &bv, &combo) {
                None => skipped.push(combo.clone()),
                Some((coef, residual)) => {
                    if residual <= feasible {
                        let mut x = vec![0.0; n];
                        for (&j, &c) in combo.iter().zip(&coef) {
                            x[j] = c;
                        }
                        return Ok(L0Solution {
                            support: combo,
                            x,
                            residual,
                            exact: true,
                            skipped,
                        });
                    }
                    if best.as_ref().is_none_or(|(_, _, r)| residual < *r) {
                        best = Some((combo.clone(), coef, residual));
                    }
                }
            }
            if !next_combination(&mut combo, n) {
                break;
            }
        }
    }

    let (support, coef, residual) = best.unwrap_or((Vec::new(), Vec::new(), bv.norm()));
    let mut x = vec![0.0; n];
    for (&j, &c) in support.iter().zip(&coef) {
        x[j] = c;
    }
    Ok(L0Solution {
        support,
        x,
        residual,
        exact: false,
        skipped,
    })
}
