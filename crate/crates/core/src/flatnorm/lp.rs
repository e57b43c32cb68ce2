//! Dense tableau simplex method over exact rationals.
//!
//! Only what the flat-norm program needs: minimize `c·x` subject to
//! `A x = b`, `x ≥ 0`, starting from a caller-supplied feasible basis whose
//! columns already form an identity block. Bland's rule on both the entering
//! and leaving choice rules out cycling.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpError {
    Unbounded,
    BadStart(String),
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub x: Vec<BigRational>,
    pub objective: BigRational,
    pub pivots: usize,
}

/// Minimizes `c·x` over `{ x ≥ 0 : a x = b }`.
///
/// `basis[i]` names the column that is the i-th unit vector of `a`; `b` must
/// be non-negative so that basis is feasible.
pub fn minimize(
    a: Vec<Vec<BigRational>>,
    b: Vec<BigRational>,
    c: &[BigRational],
    mut basis: Vec<usize>,
) -> Result<LpSolution, LpError> {
    let m = a.len();
    let n = c.len();
    if b.len() != m || basis.len() != m {
        return Err(LpError::BadStart("row count mismatch".into()));
    }
    for (i, row) in a.iter().enumerate() {
        if row.len() != n {
            return Err(LpError::BadStart(format!("row {i} has {} columns, expected {n}", row.len())));
        }
        if b[i].is_negative() {
            return Err(LpError::BadStart(format!("rhs {i} is negative")));
        }
        for (r, other) in a.iter().enumerate() {
            let want = if r == i { 1 } else { 0 };
            if other[basis[i]] != BigRational::from_integer(want.into()) {
                return Err(LpError::BadStart(format!("column {} is not a unit vector", basis[i])));
            }
        }
    }

    // Rows 0..m hold [A | b]; the last row holds reduced costs and −objective.
    let mut t: Vec<Vec<BigRational>> = a
        .into_iter()
        .zip(b)
        .map(|(mut row, rhs)| {
            row.push(rhs);
            row
        })
        .collect();
    let mut cost: Vec<BigRational> = c.to_vec();
    cost.push(BigRational::zero());
    for i in 0..m {
        let cb = c[basis[i]].clone();
        if !cb.is_zero() {
            for j in 0..=n {
                let delta = &cb * &t[i][j];
                cost[j] -= delta;
            }
        }
    }

    let mut pivots = 0;
    while let Some(enter) = (0..n).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][n] / &t[i][enter];
            let better = match &leave {
                None => true,
                Some((r, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*r]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((row, _)) = leave else {
            return Err(LpError::Unbounded);
        };
        pivot(&mut t, &mut cost, row, enter);
        basis[row] = enter;
        pivots += 1;
    }

    let mut x = vec![BigRational::zero(); n];
    for (i, &col) in basis.iter().enumerate() {
        x[col] = t[i][n].clone();
    }
    Ok(LpSolution { x, objective: -cost[n].clone(), pivots })
}

fn pivot(t: &mut [Vec<BigRational>], cost: &mut [BigRational], row: usize, col: usize) {
    let p = t[row][col].clone();
    for v in t[row].iter_mut() {
        *v = &*v / &p;
    }
    let pivot_row = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let f = r[col].clone();
        for (v, pv) in r.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
    if !cost[col].is_zero() {
        let f = cost[col].clone();
        for (v, pv) in cost.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
}
