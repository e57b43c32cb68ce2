//! Simplicial chain complexes and their (co)homology over Z or Q.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, SparseIntMatrix};
use crate::snf::{integer_kernel, invariant_factors, rank};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    #[serde(rename = "int")]
    Integers,
    #[serde(rename = "rat")]
    Rationals,
}

impl std::str::FromStr for Coefficients {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "int" | "integers" | "Z" => Ok(Self::Integers),
            "rat" | "rationals" | "Q" => Ok(Self::Rationals),
            _ => Err(Error::InvalidArgument(format!("unknown coefficients {s:?}"))),
        }
    }
}

/// One graded piece: `Z^betti ⊕ ⨁ Z/tᵢ` (torsion is always empty over Q).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub degree: usize,
    pub betti: usize,
    #[serde(serialize_with = "serialize_factors")]
    pub torsion: Vec<BigInt>,
}

fn serialize_factors<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match u64::try_from(x) {
            Ok(n) => seq.serialize_element(&n)?,
            Err(_) => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyResult {
    pub coefficients: Coefficients,
    pub groups: Vec<HomologyGroup>,
}

impl HomologyResult {
    pub fn betti(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.betti).collect()
    }

    /// Betti numbers with degree 0 lowered by one; all zero for acyclic spaces.
    pub fn reduced_betti(&self) -> Vec<usize> {
        let mut b = self.betti();
        if let Some(b0) = b.first_mut() {
            *b0 = b0.saturating_sub(1);
        }
        b
    }

    pub fn torsion(&self, degree: usize) -> &[BigInt] {
        self.groups.get(degree).map_or(&[], |g| g.torsion.as_slice())
    }

    /// Drops torsion, as if computed over Q.
    pub fn rational(&self) -> HomologyResult {
        HomologyResult {
            coefficients: Coefficients::Rationals,
            groups: self
                .groups
                .iter()
                .map(|g| HomologyGroup { degree: g.degree, betti: g.betti, torsion: Vec::new() })
                .collect(),
        }
    }
}

impl fmt::Display for HomologyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = match self.coefficients {
            Coefficients::Integers => "Z",
            Coefficients::Rationals => "Q",
        };
        for g in &self.groups {
            let mut parts = Vec::new();
            if g.betti > 0 {
                parts.push(if g.betti == 1 { ring.to_string() } else { format!("{ring}^{}", g.betti) });
            }
            parts.extend(g.torsion.iter().map(|t| format!("Z/{t}")));
            let body = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
            writeln!(f, "  {:>3}  {}", g.degree, body)?;
        }
        Ok(())
    }
}

/// Simplicial chain complex with lexicographic bases.
///
/// `boundaries[k]` maps k-chains to (k−1)-chains; `boundaries[0]` is the zero
/// map with no rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplexData {
    pub basis: Vec<Vec<Simplex>>,
    pub boundaries: Vec<SparseIntMatrix>,
}

impl ChainComplexData {
    pub fn top_degree(&self) -> Option<usize> {
        self.basis.len().checked_sub(1)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }

    /// Checks `∂_k ∘ ∂_{k+1} = 0` for every k.
    pub fn check(&self) -> Result<()> {
        for k in 1..self.boundaries.len() {
            if !self.boundaries[k - 1].mul(&self.boundaries[k]).is_zero() {
                return Err(Error::NotAComplex(k));
            }
        }
        Ok(())
    }
}

/// Boundary matrices with the `(−1)^i` sign for dropping the i-th vertex.
pub fn boundary_matrices(complex: &SimplicialComplex) -> ChainComplexData {
    let basis: Vec<Vec<Simplex>> = (0..complex.dimension().map_or(0, |d| d + 1))
        .map(|k| complex.faces(k).to_vec())
        .collect();
    let mut boundaries = Vec::with_capacity(basis.len());
    for (k, cols) in basis.iter().enumerate() {
        if k == 0 {
            boundaries.push(SparseIntMatrix::zeros(0, cols.len()));
            continue;
        }
        let mut m = SparseIntMatrix::zeros(basis[k - 1].len(), cols.len());
        for (j, s) in cols.iter().enumerate() {
            for (sign, f) in s.boundary() {
                let i = complex.index_of(&f).expect("face lattice is closed");
                m.set(i, j, sign);
            }
        }
        boundaries.push(m);
    }
    ChainComplexData { basis, boundaries }
}

/// Integral homology `ker ∂_k / im ∂_{k+1}`.
pub fn homology(data: &ChainComplexData) -> Result<HomologyResult> {
    homology_with(data, Coefficients::Integers)
}

pub fn homology_with(data: &ChainComplexData, coefficients: Coefficients) -> Result<HomologyResult> {
    data.check()?;
    Ok(graded_homology(&data.dims(), &data.boundaries, coefficients))
}

/// Cohomology of the dual complex, computed from the transposed boundaries.
pub fn cohomology(data: &ChainComplexData, coefficients: Coefficients) -> Result<HomologyResult> {
    data.check()?;
    let dims = data.dims();
    let n = dims.len();
    // coboundaries[k] : C^k → C^{k+1}; the last one has no target.
    let coboundaries: Vec<SparseIntMatrix> = (0..n)
        .map(|k| match data.boundaries.get(k + 1) {
            Some(b) => b.transpose(),
            None => SparseIntMatrix::zeros(0, dims[k]),
        })
        .collect();
    let factors: Vec<Vec<BigInt>> = coboundaries.iter().map(invariant_factors).collect();
    let groups = (0..n)
        .map(|k| {
            let incoming = if k == 0 { &[][..] } else { factors[k - 1].as_slice() };
            let betti = dims[k] - factors[k].len() - incoming.len();
            HomologyGroup { degree: k, betti, torsion: torsion_of(incoming, coefficients) }
        })
        .collect();
    Ok(HomologyResult { coefficients, groups })
}

/// Homology of the subcomplex
/// `{ c ∈ span(allowed_k) : ∂c ∈ span(allowed_{k−1}) }`.
///
/// `allowed[k][j]` says whether the j-th k-face may carry a coefficient.
pub fn constrained_homology(
    data: &ChainComplexData,
    allowed: &[Vec<bool>],
    coefficients: Coefficients,
) -> Result<HomologyResult> {
    data.check()?;
    let dims = data.dims();
    if allowed.len() != dims.len() || allowed.iter().zip(&dims).any(|(a, d)| a.len() != *d) {
        return Err(Error::DimensionMismatch("allowed sets do not match the chain basis".into()));
    }
    let pick = |k: usize, keep: bool| -> Vec<usize> {
        (0..dims[k]).filter(|&j| allowed[k][j] == keep).collect()
    };
    match coefficients {
        Coefficients::Rationals => {
            // dim IC_k = a_k − rank P_k and rank(∂ on IC_k) = rank ∂_k|allowed − rank P_k,
            // where P_k is ∂_k restricted to allowed columns and forbidden rows.
            let n = dims.len();
            let mut ic_dim = vec![0; n];
            let mut d_rank = vec![0; n + 1];
            for k in 0..n {
                let cols = pick(k, true);
                let (full, forbidden) = if k == 0 {
                    (0, 0)
                } else {
                    let all_rows: Vec<usize> = (0..dims[k - 1]).collect();
                    let b = &data.boundaries[k];
                    (rank(&b.submatrix(&all_rows, &cols)), rank(&b.submatrix(&pick(k - 1, false), &cols)))
                };
                ic_dim[k] = cols.len() - forbidden;
                d_rank[k] = full - forbidden;
            }
            let groups = (0..n)
                .map(|k| HomologyGroup {
                    degree: k,
                    betti: ic_dim[k] - d_rank[k] - d_rank[k + 1],
                    torsion: Vec::new(),
                })
                .collect();
            Ok(HomologyResult { coefficients, groups })
        }
        Coefficients::Integers => {
            let (ic_dims, ic_bds) = intersection_chain_complex(data, allowed)?;
            Ok(graded_homology(&ic_dims, &ic_bds, coefficients))
        }
    }
}

/// Integral bases for the constrained chain groups and the induced boundary
/// maps between them.
fn intersection_chain_complex(
    data: &ChainComplexData,
    allowed: &[Vec<bool>],
) -> Result<(Vec<usize>, Vec<SparseIntMatrix>)> {
    let dims = data.dims();
    let n = dims.len();
    let mut kernels = Vec::with_capacity(n);
    let mut allowed_idx: Vec<Vec<usize>> = Vec::with_capacity(n);
    for k in 0..n {
        let cols: Vec<usize> = (0..dims[k]).filter(|&j| allowed[k][j]).collect();
        let forbidden_rows: Vec<usize> = if k == 0 {
            Vec::new()
        } else {
            (0..dims[k - 1]).filter(|&i| !allowed[k - 1][i]).collect()
        };
        let p = data.boundaries[k].submatrix(&forbidden_rows, &cols).to_dense();
        kernels.push(integer_kernel(&p));
        allowed_idx.push(cols);
    }

    let ic_dims: Vec<usize> = kernels.iter().map(|k| k.basis.cols()).collect();
    let mut bds = Vec::with_capacity(n);
    bds.push(SparseIntMatrix::zeros(0, ic_dims[0]));
    for k in 1..n {
        // ∂ of each basis chain, read on the allowed (k−1)-faces.
        let rows_pos: std::collections::BTreeMap<usize, usize> =
            allowed_idx[k - 1].iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let sub = data.boundaries[k].submatrix(&(0..dims[k - 1]).collect::<Vec<_>>(), &allowed_idx[k]);
        let image = sub.to_dense().mul(&kernels[k].basis);
        let mut restricted = IntMatrix::zeros(allowed_idx[k - 1].len(), ic_dims[k]);
        for i in 0..dims[k - 1] {
            for j in 0..ic_dims[k] {
                let v = &image[(i, j)];
                if v.is_zero() {
                    continue;
                }
                match rows_pos.get(&i) {
                    Some(&r) => restricted[(r, j)] = v.clone(),
                    None => return Err(Error::NotAComplex(k)),
                }
            }
        }
        let induced = kernels[k - 1].coords.mul(&restricted);
        debug_assert_eq!(kernels[k - 1].basis.mul(&induced), restricted);
        bds.push(induced.to_sparse());
    }
    Ok((ic_dims, bds))
}

fn torsion_of(factors: &[BigInt], coefficients: Coefficients) -> Vec<BigInt> {
    match coefficients {
        Coefficients::Integers => factors.iter().filter(|f| !f.is_one()).cloned().collect(),
        Coefficients::Rationals => Vec::new(),
    }
}

/// Homology of an abstract integer chain complex given by its ranks and
/// boundary matrices (`bds[k] : C_k → C_{k−1}`).
fn graded_homology(dims: &[usize], bds: &[SparseIntMatrix], coefficients: Coefficients) -> HomologyResult {
    let factors: Vec<Vec<BigInt>> = bds.iter().map(invariant_factors).collect();
    let groups = (0..dims.len())
        .map(|k| {
            let outgoing = factors[k].len();
            let incoming = factors.get(k + 1).map_or(&[][..], Vec::as_slice);
            HomologyGroup {
                degree: k,
                betti: dims[k] - outgoing - incoming.len(),
                torsion: torsion_of(incoming, coefficients),
            }
        })
        .collect();
    HomologyResult { coefficients, groups }
}

/// Homology of a complex straight from its faces.
pub fn simplicial_homology(complex: &SimplicialComplex, coefficients: Coefficients) -> HomologyResult {
    graded_homology(
        &complex.f_vector(),
        &boundary_matrices(complex).boundaries,
        coefficients,
    )
}
