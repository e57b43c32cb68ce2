//! Independent oracles for the integration tests.
//!
//! Everything here works from raw facet lists with dense rational Gaussian
//! elimination and shares no code path with the library's integer Smith
//! reduction, sparse elimination or constrained-homology routines.

#![allow(dead_code)]

use std::collections::BTreeSet;

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{One, Zero};

use flatcoh::SimplicialComplex;

pub type Face = Vec<usize>;

/// All faces of the complex grouped by dimension, enumerated from facets.
pub fn faces_by_dim(complex: &SimplicialComplex) -> Vec<Vec<Face>> {
    let mut sets: Vec<BTreeSet<Face>> = Vec::new();
    for f in complex.facets() {
        let v = f.vertices();
        for k in 1..=v.len() {
            if sets.len() < k {
                sets.resize_with(k, BTreeSet::new);
            }
            for c in v.iter().copied().combinations(k) {
                sets[k - 1].insert(c);
            }
        }
    }
    sets.into_iter().map(|s| s.into_iter().collect()).collect()
}

/// Dense rational boundary matrix from k-faces to (k−1)-faces.
pub fn boundary_q(lower: &[Face], upper: &[Face]) -> Vec<Vec<BigRational>> {
    let mut m = vec![vec![BigRational::zero(); upper.len()]; lower.len()];
    for (j, s) in upper.iter().enumerate() {
        for i in 0..s.len() {
            let mut f = s.clone();
            f.remove(i);
            let r = lower.iter().position(|x| *x == f).expect("closed");
            m[r][j] = if i % 2 == 0 { BigRational::one() } else { -BigRational::one() };
        }
    }
    m
}

/// Row echelon over Q; returns the rank.
pub fn rank_q(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &pivot;
            for j in c..cols {
                let d = &f * &m[r][j];
                m[i][j] -= d;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Basis of the right null space of `m` (n columns), as column vectors.
pub fn nullspace_q(m: &[Vec<BigRational>], n: usize) -> Vec<Vec<BigRational>> {
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = BigRational::one() / &a[r][c];
        for j in 0..n {
            a[r][j] = &a[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..n {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -a[i][f].clone();
            }
            v
        })
        .collect()
}

pub fn transpose(m: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Rational Betti numbers by dense rank computation.
pub fn betti_q(complex: &SimplicialComplex) -> Vec<usize> {
    let faces = faces_by_dim(complex);
    let ranks: Vec<usize> = (0..faces.len())
        .map(|k| if k == 0 { 0 } else { rank_q(boundary_q(&faces[k - 1], &faces[k])) })
        .collect();
    (0..faces.len())
        .map(|k| faces[k].len() - ranks[k] - ranks.get(k + 1).copied().unwrap_or(0))
        .collect()
}

/// Rational homology of the chains supported on `allowed` faces whose
/// boundary is supported on allowed faces, via explicit null-space bases.
pub fn constrained_betti_q(complex: &SimplicialComplex, allowed: &dyn Fn(&Face) -> bool) -> Vec<usize> {
    let faces = faces_by_dim(complex);
    let l = faces.len();
    // Basis of IC_k as vectors over all k-faces.
    let mut bases: Vec<Vec<Vec<BigRational>>> = Vec::new();
    for k in 0..l {
        let ok: Vec<usize> = (0..faces[k].len()).filter(|&j| allowed(&faces[k][j])).collect();
        let basis = if k == 0 {
            ok.iter().map(|&j| unit(faces[0].len(), j)).collect()
        } else {
            let d = boundary_q(&faces[k - 1], &faces[k]);
            let bad_rows: Vec<usize> = (0..faces[k - 1].len()).filter(|&i| !allowed(&faces[k - 1][i])).collect();
            let sub: Vec<Vec<BigRational>> =
                bad_rows.iter().map(|&i| ok.iter().map(|&j| d[i][j].clone()).collect()).collect();
            nullspace_q(&sub, ok.len())
                .into_iter()
                .map(|v| {
                    let mut full = vec![BigRational::zero(); faces[k].len()];
                    for (t, &j) in ok.iter().enumerate() {
                        full[j] = v[t].clone();
                    }
                    full
                })
                .collect()
        };
        bases.push(basis);
    }
    // rank of ∂ restricted to IC_k = rank of the image vectors.
    let image_rank = |k: usize| -> usize {
        if k == 0 || k >= l || bases[k].is_empty() {
            return 0;
        }
        let d = boundary_q(&faces[k - 1], &faces[k]);
        let images: Vec<Vec<BigRational>> = bases[k]
            .iter()
            .map(|v| {
                (0..faces[k - 1].len())
                    .map(|i| (0..faces[k].len()).fold(BigRational::zero(), |acc, j| acc + &d[i][j] * &v[j]))
                    .collect()
            })
            .collect();
        rank_q(images)
    };
    (0..l).map(|k| bases[k].len() - image_rank(k) - image_rank(k + 1)).collect()
}

fn unit(n: usize, j: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); n];
    v[j] = BigRational::one();
    v
}

/// Top-perversity allowability against a singular set given by its maximal
/// faces: an i-face is allowed when its largest face inside the singular set
/// has dimension at most i − 2.
pub fn top_allowed(singular_max: &[Face]) -> impl Fn(&Face) -> bool + '_ {
    move |sigma: &Face| {
        let i = sigma.len() as i64 - 1;
        let inside = sigma
            .iter()
            .copied()
            .powerset()
            .filter(|s| !s.is_empty() && singular_max.iter().any(|m| s.iter().all(|v| m.contains(v))))
            .map(|s| s.len() as i64 - 1)
            .max();
        inside.is_none_or(|d| d <= i - 2)
    }
}

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}
