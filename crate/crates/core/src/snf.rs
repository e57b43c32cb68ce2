//! Smith normal form and related integer lattice routines.
//!
//! Pivoting always picks the entry of smallest absolute value, so every
//! reduction step either clears a row/column or strictly shrinks the pivot.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::{IntMatrix, SparseIntMatrix};

/// `d = u · a · v` with `u`, `v` unimodular and `d` diagonal, non-negative,
/// with each diagonal entry dividing the next.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Non-zero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.d.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }
}

pub fn smith_normal_form(a: &SparseIntMatrix) -> SmithForm {
    let mut d = a.to_dense();
    let mut u = Some(IntMatrix::identity(a.rows()));
    let mut v = Some(IntMatrix::identity(a.cols()));
    diagonalize(&mut d, &mut u, &mut v);
    SmithForm { u: u.unwrap(), d, v: v.unwrap() }
}

/// Non-zero invariant factors of `a`, in divisibility order.
///
/// Eliminates unit pivots sparsely first and only densifies what is left,
/// which for boundary matrices is usually nothing.
pub fn invariant_factors(a: &SparseIntMatrix) -> Vec<BigInt> {
    let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); a.rows()];
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); a.cols()];
    for (r, c, v) in a.iter() {
        rows[r].insert(c, v.clone());
        col_rows[c].insert(r);
    }

    let mut units = 0usize;
    for j in 0..a.cols() {
        let pivot = col_rows[j]
            .iter()
            .filter(|&&r| rows[r][&j].abs().is_one())
            .min_by_key(|&&r| rows[r].len())
            .copied();
        let Some(p) = pivot else { continue };
        let prow = std::mem::take(&mut rows[p]);
        for c in prow.keys() {
            col_rows[*c].remove(&p);
        }
        let inv = &prow[&j];
        let targets: Vec<usize> = col_rows[j].iter().copied().collect();
        for r in targets {
            let factor = &rows[r][&j] * inv;
            for (c, pv) in &prow {
                let entry = rows[r].entry(*c).or_default();
                *entry -= &factor * pv;
                if entry.is_zero() {
                    rows[r].remove(c);
                    col_rows[*c].remove(&r);
                } else {
                    col_rows[*c].insert(r);
                }
            }
        }
        debug_assert!(col_rows[j].is_empty());
        units += 1;
    }

    let live_rows: Vec<usize> = (0..a.rows()).filter(|&r| !rows[r].is_empty()).collect();
    let live_cols: Vec<usize> = (0..a.cols()).filter(|&c| !col_rows[c].is_empty()).collect();
    let mut factors = vec![BigInt::one(); units];
    if !live_rows.is_empty() {
        let col_pos: BTreeMap<usize, usize> =
            live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut rest = IntMatrix::zeros(live_rows.len(), live_cols.len());
        for (i, &r) in live_rows.iter().enumerate() {
            for (c, v) in &rows[r] {
                rest[(i, col_pos[c])] = v.clone();
            }
        }
        diagonalize(&mut rest, &mut None, &mut None);
        factors.extend(rest.diagonal().into_iter().filter(|x| !x.is_zero()));
    }
    factors
}

pub fn rank(a: &SparseIntMatrix) -> usize {
    invariant_factors(a).len()
}

/// Integer kernel of `a` as a saturated lattice basis.
#[derive(Clone, Debug)]
pub struct IntegerKernel {
    /// Columns span `{ x ∈ Zⁿ : a·x = 0 }`; shape n × k.
    pub basis: IntMatrix,
    /// Left inverse on the kernel: `coords · basis = I_k`; shape k × n.
    pub coords: IntMatrix,
}

/// Column-echelon reduction `a · v = [E | 0]` with `v` unimodular; the trailing
/// columns of `v` span the kernel and the matching rows of `v⁻¹` give
/// coordinates with respect to them.
pub fn integer_kernel(a: &IntMatrix) -> IntegerKernel {
    let (m, n) = (a.rows(), a.cols());
    let mut e = a.clone();
    let mut v = IntMatrix::identity(n);
    let mut w = IntMatrix::identity(n);
    let mut r = 0;
    for i in 0..m {
        if r == n {
            break;
        }
        while let Some(c) = (r..n)
            .filter(|&c| !e[(i, c)].is_zero())
            .min_by(|&x, &y| e[(i, x)].abs().cmp(&e[(i, y)].abs()))
        {
            e.swap_cols(c, r);
            v.swap_cols(c, r);
            w.swap_rows(c, r);
            let mut done = true;
            for c2 in r + 1..n {
                if e[(i, c2)].is_zero() {
                    continue;
                }
                let q = e[(i, c2)].div_floor(&e[(i, r)]);
                let neg = -&q;
                e.add_col(c2, r, &neg);
                v.add_col(c2, r, &neg);
                w.add_row(r, c2, &q);
                if !e[(i, c2)].is_zero() {
                    done = false;
                }
            }
            if done {
                r += 1;
                break;
            }
        }
    }
    let k = n - r;
    let mut basis = IntMatrix::zeros(n, k);
    let mut coords = IntMatrix::zeros(k, n);
    for j in 0..k {
        for i in 0..n {
            basis[(i, j)] = v[(i, r + j)].clone();
            coords[(j, i)] = w[(r + j, i)].clone();
        }
    }
    IntegerKernel { basis, coords }
}

/// In-place Smith reduction of `d`, mirroring row operations into `u` and
/// column operations into `v` when they are present.
fn diagonalize(d: &mut IntMatrix, u: &mut Option<IntMatrix>, v: &mut Option<IntMatrix>) {
    let (m, n) = (d.rows(), d.cols());
    for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = smallest_entry(d, t) else {
                return;
            };
            d.swap_rows(t, pi);
            d.swap_cols(t, pj);
            if let Some(u) = u.as_mut() {
                u.swap_rows(t, pi);
            }
            if let Some(v) = v.as_mut() {
                v.swap_cols(t, pj);
            }

            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row(i, t, &q);
                if let Some(u) = u.as_mut() {
                    u.add_row(i, t, &q);
                }
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col(j, t, &q);
                if let Some(v) = v.as_mut() {
                    v.add_col(j, t, &q);
                }
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }

            // Pivot must divide the remaining block; otherwise fold the
            // offending row into row t and go again.
            let offender = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)]))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    if let Some(u) = u.as_mut() {
                        u.add_row(t, i, &one);
                    }
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            if let Some(u) = u.as_mut() {
                u.negate_row(t);
            }
        }
    }
}

fn smallest_entry(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = &d[(i, j)];
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            if best.as_ref().is_none_or(|(_, b)| a < *b) {
                let unit = a.is_one();
                best = Some(((i, j), a));
                if unit {
                    return best.map(|(p, _)| p);
                }
            }
        }
    }
    best.map(|(p, _)| p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sparse(rows: &[Vec<i64>]) -> SparseIntMatrix {
        IntMatrix::from_rows(rows).to_sparse()
    }

    fn check_contract(a: &SparseIntMatrix) -> SmithForm {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(&a.to_dense()).mul(&s.v), s.d);
        assert!(s.d.is_diagonal());
        assert!(s.u.determinant().abs().is_one());
        assert!(s.v.determinant().abs().is_one());
        let diag = s.d.diagonal();
        assert!(diag.iter().all(|x| !x.is_negative()));
        for w in diag.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]) || w[0].is_zero() && w[1].is_zero());
        }
        s
    }

    #[test]
    fn identity_and_zero() {
        let id = sparse(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(check_contract(&id).d, IntMatrix::identity(3));
        let z = SparseIntMatrix::zeros(2, 3);
        assert_eq!(check_contract(&z).d, IntMatrix::zeros(2, 3));
        assert!(invariant_factors(&z).is_empty());
    }

    #[test]
    fn two_by_two_example() {
        // gcd of entries is 2 and |det| = 8, so the factors are 2 and 4.
        let a = sparse(&[vec![2, 4], vec![6, 8]]);
        let s = check_contract(&a);
        assert_eq!(s.d.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(invariant_factors(&a), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn divisibility_fixup_needed() {
        // diag(2, 3) is diagonal but not in Smith form: expect diag(1, 6).
        let a = sparse(&[vec![2, 0], vec![0, 3]]);
        let s = check_contract(&a);
        assert_eq!(s.d.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(invariant_factors(&a), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn sparse_route_matches_dense_route() {
        let a = sparse(&[
            vec![1, 1, 0, 0],
            vec![-1, 0, 2, 0],
            vec![0, -1, -2, 4],
            vec![0, 0, 0, 6],
        ]);
        assert_eq!(invariant_factors(&a), check_contract(&a).invariant_factors());
    }

    #[test]
    fn kernel_is_saturated() {
        // x + 2y + 3z = 0 over Z
        let a = IntMatrix::from_rows(&[vec![1, 2, 3]]);
        let k = integer_kernel(&a);
        assert_eq!(k.basis.cols(), 2);
        assert_eq!(a.mul(&k.basis), IntMatrix::zeros(1, 2));
        assert_eq!(k.coords.mul(&k.basis), IntMatrix::identity(2));

        // 2x - 2y = 0: kernel is spanned by (1, 1), not (2, 2)
        let a = IntMatrix::from_rows(&[vec![2, -2]]);
        let k = integer_kernel(&a);
        assert_eq!(k.basis.cols(), 1);
        assert!(k.basis.max_abs().is_one());
    }

    #[test]
    fn kernel_of_empty_row_set_is_everything() {
        let a = IntMatrix::zeros(0, 3);
        let k = integer_kernel(&a);
        assert_eq!(k.basis, IntMatrix::identity(3));
    }
}
