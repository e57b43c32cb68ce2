//! Mass and flat norm of weighted simplicial chains.
//!
//! Chains are graded homologically: a d-chain has coefficients on d-faces and
//! its boundary is a (d−1)-chain. The flat norm of T is the minimum over
//! (d+1)-chains A of `M(T − ∂A) + M(A)`; the minimizer gives a decomposition
//! `T = R + ∂A` with both pieces of finite mass.

pub mod lp;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::complex::{Simplex, SimplicialComplex, Vertex};
use crate::error::{Error, Result};

/// A d-chain with rational coefficients. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    degree: usize,
    coefficients: BTreeMap<Simplex, BigRational>,
}

impl Chain {
    pub fn zero(degree: usize) -> Self {
        Self { degree, coefficients: BTreeMap::new() }
    }

    pub fn new(degree: usize, coefficients: impl IntoIterator<Item = (Simplex, BigRational)>) -> Result<Self> {
        let mut chain = Self::zero(degree);
        for (s, c) in coefficients {
            if s.dim() != degree {
                return Err(Error::DimensionMismatch(format!("{s} in a {degree}-chain")));
            }
            chain.add_term(s, c);
        }
        Ok(chain)
    }

    pub fn from_integers(degree: usize, terms: impl IntoIterator<Item = (Simplex, i64)>) -> Result<Self> {
        Self::new(degree, terms.into_iter().map(|(s, c)| (s, BigRational::from_integer(c.into()))))
    }

    /// Checks that every face in the support belongs to `complex`.
    pub fn check_in(&self, complex: &SimplicialComplex) -> Result<()> {
        match self.coefficients.keys().find(|s| !complex.contains(s)) {
            Some(s) => Err(Error::NotAFace(s.to_string())),
            None => Ok(()),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn coefficient(&self, s: &Simplex) -> BigRational {
        self.coefficients.get(s).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Simplex, &BigRational)> {
        self.coefficients.iter()
    }

    fn add_term(&mut self, s: Simplex, c: BigRational) {
        let sum = self.coefficient(&s) + c;
        if sum.is_zero() {
            self.coefficients.remove(&s);
        } else {
            self.coefficients.insert(s, sum);
        }
    }

    pub fn add(&self, other: &Chain) -> Result<Chain> {
        if self.degree != other.degree {
            return Err(Error::DimensionMismatch(format!(
                "adding a {}-chain to a {}-chain",
                other.degree, self.degree
            )));
        }
        let mut out = self.clone();
        for (s, c) in &other.coefficients {
            out.add_term(s.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Chain) -> Result<Chain> {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, factor: &BigRational) -> Chain {
        if factor.is_zero() {
            return Chain::zero(self.degree);
        }
        Chain {
            degree: self.degree,
            coefficients: self.coefficients.iter().map(|(s, c)| (s.clone(), c * factor)).collect(),
        }
    }

    /// Simplicial boundary. There is no augmentation: the boundary of a
    /// 0-chain is the empty chain (reported with degree 0).
    pub fn boundary(&self) -> Chain {
        let mut out = Chain::zero(self.degree.saturating_sub(1));
        if self.degree == 0 {
            return out;
        }
        for (s, c) in &self.coefficients {
            for (sign, f) in s.boundary() {
                out.add_term(f, c * BigRational::from_integer(sign.into()));
            }
        }
        out
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.coefficients.iter().map(|(s, c)| format!("{c}·{s}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Positive weights per face, with an optional fallback for faces not listed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MassWeights {
    weights: BTreeMap<Simplex, BigRational>,
    fallback: Option<BigRational>,
}

impl MassWeights {
    /// Every face weighs 1.
    pub fn unit() -> Self {
        Self { weights: BTreeMap::new(), fallback: Some(BigRational::one()) }
    }

    /// Only the listed faces carry a weight; anything else is an error.
    pub fn explicit(weights: BTreeMap<Simplex, BigRational>) -> Result<Self> {
        let w = Self { weights: BTreeMap::new(), fallback: None };
        w.with_overrides(weights)
    }

    /// Euclidean k-volume of every face from vertex coordinates. Volumes are
    /// computed in floating point and converted exactly to rationals.
    pub fn euclidean(complex: &SimplicialComplex, coords: &BTreeMap<Vertex, Vec<f64>>) -> Result<Self> {
        let mut weights = BTreeMap::new();
        for s in complex.all_faces() {
            let points: Vec<&Vec<f64>> = s
                .vertices()
                .iter()
                .map(|v| coords.get(v).ok_or(Error::MissingVertex(*v)))
                .collect::<Result<_>>()?;
            let vol = simplex_volume(&points)?;
            let q = BigRational::from_float(vol)
                .filter(|q| q.is_positive())
                .ok_or_else(|| Error::InvalidWeight(s.key()))?;
            weights.insert(s.clone(), q);
        }
        Ok(Self { weights, fallback: None })
    }

    pub fn with_overrides(mut self, overrides: BTreeMap<Simplex, BigRational>) -> Result<Self> {
        for (s, w) in overrides {
            if !w.is_positive() {
                return Err(Error::InvalidWeight(s.key()));
            }
            self.weights.insert(s, w);
        }
        Ok(self)
    }

    pub fn weight(&self, s: &Simplex) -> Result<&BigRational> {
        self.weights
            .get(s)
            .or(self.fallback.as_ref())
            .ok_or_else(|| Error::MissingWeight(s.key()))
    }
}

fn simplex_volume(points: &[&Vec<f64>]) -> Result<f64> {
    let k = points.len() - 1;
    if k == 0 {
        return Ok(1.0);
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch("coordinates of differing lengths".into()));
    }
    let edges: Vec<Vec<f64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(points[0].iter()).map(|(a, b)| a - b).collect())
        .collect();
    let mut gram: Vec<Vec<f64>> = edges
        .iter()
        .map(|u| edges.iter().map(|v| u.iter().zip(v).map(|(a, b)| a * b).sum()).collect())
        .collect();
    let det = determinant_f64(&mut gram);
    let factorial: f64 = (1..=k).map(|i| i as f64).product();
    Ok(det.max(0.0).sqrt() / factorial)
}

fn determinant_f64(m: &mut [Vec<f64>]) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for col in 0..n {
        let Some(p) = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())) else {
            return 0.0;
        };
        if m[p][col] == 0.0 {
            return 0.0;
        }
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        det *= m[col][col];
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..n {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    det
}

/// `Σ |coeff(σ)| · w(σ)`.
pub fn mass(chain: &Chain, weights: &MassWeights) -> Result<BigRational> {
    let mut total = BigRational::zero();
    for (s, c) in chain.terms() {
        total += c.abs() * weights.weight(s)?;
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatNormResult {
    pub value: BigRational,
    /// The (d+1)-chain A.
    pub witness: Chain,
    /// R = T − ∂A.
    pub residual: Chain,
}

/// Exact flat norm of `chain` inside `complex`.
///
/// Variables are split into positive and negative parts:
/// `R⁺ − R⁻ + ∂(A⁺ − A⁻) = T`, minimizing `w·(R⁺ + R⁻) + w·(A⁺ + A⁻)`.
/// Taking R = T, A = 0 is a feasible starting basis once rows with negative
/// right-hand side are negated, so no phase one is needed.
pub fn flat_norm(complex: &SimplicialComplex, chain: &Chain, weights: &MassWeights) -> Result<FlatNormResult> {
    chain.check_in(complex)?;
    let d = chain.degree();
    if complex.dimension().is_none_or(|l| d > l) {
        return Err(Error::DimensionMismatch(format!("{d}-chain in a complex of dimension {:?}", complex.dimension())));
    }
    let rows = complex.faces(d);
    let uppers = complex.faces(d + 1);
    let (m, u) = (rows.len(), uppers.len());
    let n = 2 * m + 2 * u;

    let zero = BigRational::zero();
    let one = BigRational::one();
    let mut a = vec![vec![zero.clone(); n]; m];
    let mut b = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for (i, s) in rows.iter().enumerate() {
        let t = chain.coefficient(s);
        let flip = t.is_negative();
        a[i][i] = if flip { -one.clone() } else { one.clone() };
        a[i][m + i] = if flip { one.clone() } else { -one.clone() };
        basis.push(if flip { m + i } else { i });
        b.push(t.abs());
    }
    for (j, tau) in uppers.iter().enumerate() {
        for (sign, f) in tau.boundary() {
            let i = complex.index_of(&f).expect("closed");
            let flip = chain.coefficient(&rows[i]).is_negative();
            let e = BigRational::from_integer(if flip { -sign } else { sign }.into());
            a[i][2 * m + j] = e.clone();
            a[i][2 * m + u + j] = -e;
        }
    }
    let mut cost = Vec::with_capacity(n);
    for _ in 0..2 {
        for s in rows {
            cost.push(weights.weight(s)?.clone());
        }
    }
    for _ in 0..2 {
        for tau in uppers {
            cost.push(weights.weight(tau)?.clone());
        }
    }

    let sol = lp::minimize(a, b, &cost, basis).map_err(|e| match e {
        // Costs are positive, so the program is bounded below by zero.
        lp::LpError::Unbounded => unreachable!("flat norm program is bounded"),
        lp::LpError::BadStart(msg) => Error::InvalidArgument(msg),
    })?;

    let witness = Chain::new(
        d + 1,
        uppers.iter().enumerate().map(|(j, tau)| (tau.clone(), &sol.x[2 * m + j] - &sol.x[2 * m + u + j])),
    )?;
    let residual = chain.sub(&witness.boundary())?;
    let value = mass(&residual, weights)? + mass(&witness, weights)?;
    debug_assert_eq!(value, sol.objective);
    Ok(FlatNormResult { value, witness, residual })
}

/// Largest number of candidate chains the brute-force oracle will enumerate.
pub const ORACLE_CAP: u128 = 20_000_000;

/// Minimum of `M(T − ∂A) + M(A)` over integer (d+1)-chains A with
/// coefficients in `[−bound, bound]`, by exhaustive enumeration.
pub fn brute_force_flat_norm(
    complex: &SimplicialComplex,
    chain: &Chain,
    weights: &MassWeights,
    bound: u32,
) -> Result<BigRational> {
    chain.check_in(complex)?;
    if bound == 0 {
        return Err(Error::InvalidArgument("bound must be at least 1".into()));
    }
    let d = chain.degree();
    let rows = complex.faces(d);
    let uppers = complex.faces(d + 1);
    let side = 2 * u128::from(bound) + 1;
    let count = side.checked_pow(uppers.len() as u32).unwrap_or(u128::MAX);
    if count > ORACLE_CAP {
        return Err(Error::OracleTooLarge(count, ORACLE_CAP));
    }

    // Scale to integers: T by the lcm of its denominators, weights by theirs.
    let t_den = chain.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let row_w: Vec<BigRational> = rows.iter().map(|s| weights.weight(s).cloned()).collect::<Result<_>>()?;
    let up_w: Vec<BigRational> = uppers.iter().map(|s| weights.weight(s).cloned()).collect::<Result<_>>()?;
    let w_den = row_w.iter().chain(&up_w).fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let to_i128 = |x: BigRational| -> Result<i128> {
        debug_assert!(x.is_integer());
        x.to_integer().to_i128().ok_or_else(|| Error::InvalidArgument("oracle values overflow".into()))
    };
    let t_scale = BigRational::from_integer(t_den.clone());
    let w_scale = BigRational::from_integer(w_den.clone());
    let mut residual: Vec<i128> =
        rows.iter().map(|s| to_i128(chain.coefficient(s) * &t_scale)).collect::<Result<_>>()?;
    let rw: Vec<i128> = row_w.into_iter().map(|w| to_i128(w * &w_scale)).collect::<Result<_>>()?;
    let uw: Vec<i128> = up_w.into_iter().map(|w| to_i128(w * &w_scale * &t_scale)).collect::<Result<_>>()?;
    let t_den_i = to_i128(t_scale.clone())?;
    let cols: Vec<Vec<(usize, i128)>> = uppers
        .iter()
        .map(|tau| {
            tau.boundary()
                .into_iter()
                .map(|(sign, f)| (rows.binary_search(&f).expect("closed"), i128::from(sign) * t_den_i))
                .collect()
        })
        .collect();

    // Odometer over A ∈ [−bound, bound]^u, keeping residual = T − ∂A current.
    let b = i128::from(bound);
    let mut coeffs = vec![-b; uppers.len()];
    for (j, col) in cols.iter().enumerate() {
        for &(i, e) in col {
            residual[i] -= coeffs[j] * e;
        }
    }
    let objective = |res: &[i128], a: &[i128]| -> i128 {
        res.iter().zip(&rw).map(|(r, w)| r.abs() * w).sum::<i128>()
            + a.iter().zip(&uw).map(|(x, w)| x.abs() * w).sum::<i128>()
    };
    let mut best = objective(&residual, &coeffs);
    'outer: loop {
        let mut j = 0;
        loop {
            if j == coeffs.len() {
                break 'outer;
            }
            let step = if coeffs[j] < b { 1 } else { -2 * b };
            coeffs[j] += step;
            for &(i, e) in &cols[j] {
                residual[i] -= step * e;
            }
            if step == 1 {
                break;
            }
            j += 1;
        }
        best = best.min(objective(&residual, &coeffs));
    }
    Ok(BigRational::new(BigInt::from(best), t_den * w_den))
}
