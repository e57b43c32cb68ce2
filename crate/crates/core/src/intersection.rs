//! Perversities, stratifications and simplicial intersection homology.
//!
//! An i-face σ is allowable for perversity p̄ when, for every codimension
//! k = 2..=l, the largest face of σ lying in the stratum closure X_{l−k} has
//! dimension at most `i − k + p̄(k)`. The intersection chain complex consists
//! of chains supported on allowable faces whose boundary is also supported on
//! allowable faces.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::complex::{Simplex, SimplicialComplex, Subcomplex};
use crate::error::{Error, Result};
use crate::homology::{boundary_matrices, constrained_homology, simplicial_homology, Coefficients, HomologyResult};
use crate::unionfind::UnionFind;

/// A Goresky–MacPherson perversity on codimensions 2..=l.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Perversity {
    /// `values[k - 2]` is p̄(k).
    values: Vec<i64>,
}

impl Perversity {
    /// p̄(2) = 0 and each step grows by 0 or 1.
    pub fn new(values: Vec<i64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidPerversity("no values".into()));
        }
        if values[0] != 0 {
            return Err(Error::InvalidPerversity(format!("p(2) must be 0, got {}", values[0])));
        }
        if let Some(w) = values.windows(2).find(|w| w[1] != w[0] && w[1] != w[0] + 1) {
            return Err(Error::InvalidPerversity(format!(
                "consecutive values must grow by 0 or 1, got {} then {}",
                w[0], w[1]
            )));
        }
        Ok(Self { values })
    }

    /// t̄(k) = k − 2.
    pub fn top(l: usize) -> Result<Self> {
        if l < 2 {
            return Err(Error::NoCodimensionTwo(l));
        }
        Ok(Self { values: (0..=(l as i64 - 2)).collect() })
    }

    pub fn zero(l: usize) -> Result<Self> {
        if l < 2 {
            return Err(Error::NoCodimensionTwo(l));
        }
        Ok(Self { values: vec![0; l - 1] })
    }

    /// Largest codimension covered, i.e. the ambient dimension l.
    pub fn max_codimension(&self) -> usize {
        self.values.len() + 1
    }

    pub fn value(&self, k: usize) -> i64 {
        self.values[k - 2]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Pointwise `self ≤ other`.
    pub fn le(&self, other: &Perversity) -> bool {
        self.values.len() == other.values.len()
            && self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }
}

/// Perversity as named on the command line, resolved once l is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PerversityChoice {
    Top,
    Zero,
    Custom(Perversity),
}

impl PerversityChoice {
    pub fn resolve(&self, l: usize) -> Result<Perversity> {
        match self {
            Self::Top => Perversity::top(l),
            Self::Zero => Perversity::zero(l),
            Self::Custom(p) if p.max_codimension() == l => Ok(p.clone()),
            Self::Custom(p) => Err(Error::InvalidPerversity(format!(
                "expected {} values for dimension {l}, got {}",
                l.saturating_sub(1),
                p.values.len()
            ))),
        }
    }
}

impl FromStr for PerversityChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "top" => Ok(Self::Top),
            "zero" => Ok(Self::Zero),
            _ => {
                let list = s
                    .strip_prefix("custom:")
                    .ok_or_else(|| Error::InvalidPerversity(format!("unknown perversity {s:?}")))?;
                let values = list
                    .split(',')
                    .map(|x| x.trim().parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::InvalidPerversity(format!("cannot parse {list:?}")))?;
                Ok(Self::Custom(Perversity::new(values)?))
            }
        }
    }
}

impl fmt::Display for PerversityChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Top => f.write_str("top"),
            Self::Zero => f.write_str("zero"),
            Self::Custom(p) => {
                let v: Vec<String> = p.values.iter().map(i64::to_string).collect();
                write!(f, "custom:{}", v.join(","))
            }
        }
    }
}

/// Closed strata X_{l−2} ⊇ X_{l−3} ⊇ … ⊇ X_0 of an l-dimensional complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratification {
    dimension: usize,
    /// `strata[k - 2]` is X_{l−k}.
    strata: Vec<Subcomplex>,
    heuristic: bool,
}

impl Stratification {
    /// Builds a stratification from generators of the closed strata,
    /// outermost (X_{l−2}) first. Missing deeper strata are filled with
    /// skeleta of the last one supplied.
    pub fn from_strata(complex: &SimplicialComplex, given: Vec<Vec<Simplex>>) -> Result<Self> {
        let l = complex.dimension().ok_or(Error::EmptyComplex)?;
        if given.len() > l.saturating_sub(1) {
            return Err(Error::InvalidStratification(format!(
                "{} strata supplied for dimension {l}",
                given.len()
            )));
        }
        let mut strata = Vec::new();
        for gens in given {
            strata.push(Subcomplex::closure(complex, gens)?);
        }
        for k in (2 + strata.len())..=l {
            let prev = strata.last().cloned().unwrap_or_default();
            strata.push(prev.skeleton(l - k));
        }
        let s = Self { dimension: l, strata, heuristic: false };
        s.validate(complex)?;
        Ok(s)
    }

    /// Singular set only; deeper strata are its skeleta.
    pub fn from_singular_set(complex: &SimplicialComplex, singular: Subcomplex, heuristic: bool) -> Result<Self> {
        let l = complex.dimension().ok_or(Error::EmptyComplex)?;
        let strata = (2..=l).map(|k| singular.skeleton(l - k)).collect();
        let s = Self { dimension: l, strata, heuristic };
        s.validate(complex)?;
        Ok(s)
    }

    pub fn trivial(l: usize) -> Self {
        Self { dimension: l, strata: vec![Subcomplex::empty(); l.saturating_sub(1)], heuristic: false }
    }

    fn validate(&self, complex: &SimplicialComplex) -> Result<()> {
        if complex.dimension() != Some(self.dimension) {
            return Err(Error::InvalidStratification("dimension differs from the complex".into()));
        }
        for (i, s) in self.strata.iter().enumerate() {
            let k = i + 2;
            if !s.is_within(complex) {
                return Err(Error::InvalidStratification(format!("X_{} is not a subcomplex", self.dimension - k)));
            }
            if s.dimension().is_some_and(|d| d > self.dimension - k) {
                return Err(Error::InvalidStratification(format!(
                    "X_{} has dimension {}",
                    self.dimension - k,
                    s.dimension().unwrap()
                )));
            }
            if i > 0 && !s.is_subset(&self.strata[i - 1]) {
                return Err(Error::InvalidStratification(format!(
                    "X_{} is not contained in X_{}",
                    self.dimension - k,
                    self.dimension - k + 1
                )));
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// X_{l−k}.
    pub fn stratum(&self, k: usize) -> &Subcomplex {
        &self.strata[k - 2]
    }

    /// X_{l−2}, the singular subcomplex. Empty for l < 2.
    pub fn singular(&self) -> Subcomplex {
        self.strata.first().cloned().unwrap_or_default()
    }

    pub fn is_trivial(&self) -> bool {
        self.strata.iter().all(Subcomplex::is_empty)
    }

    pub fn is_heuristic(&self) -> bool {
        self.heuristic
    }

    /// Connected components of the open set X − X_{l−2}: open simplices off
    /// the singular set, joined when one is a facet of the other.
    pub fn regular_components(&self, complex: &SimplicialComplex) -> usize {
        let singular = self.singular();
        let faces: Vec<&Simplex> = complex.all_faces().filter(|s| !singular.contains(s)).collect();
        let index: std::collections::BTreeMap<&Simplex, usize> =
            faces.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let mut uf = UnionFind::new(faces.len());
        for (i, s) in faces.iter().enumerate() {
            for (_, f) in s.boundary() {
                if let Some(&j) = index.get(&f) {
                    uf.union(i, j);
                }
            }
        }
        uf.labels().1
    }
}

/// Faces τ with dim τ ≤ l−2 whose link is not a rational homology sphere of
/// dimension l − dim τ − 1, closed under faces. Passing the screen does not
/// prove the link is a sphere, so the result is flagged as heuristic.
pub fn default_stratification(complex: &SimplicialComplex) -> Result<Stratification> {
    if !complex.is_pseudomanifold() {
        return Err(Error::PseudomanifoldRequired);
    }
    let l = complex.dimension().expect("pseudomanifolds are non-empty");
    let mut bad = Vec::new();
    for d in 0..=l.saturating_sub(2) {
        if l < 2 {
            break;
        }
        for tau in complex.faces(d) {
            let link = complex.link(tau)?;
            if !is_rational_homology_sphere(&link, l - d - 1) {
                bad.push(tau.clone());
            }
        }
    }
    let singular = Subcomplex::closure(complex, bad)?;
    Stratification::from_singular_set(complex, singular, true)
}

fn is_rational_homology_sphere(link: &SimplicialComplex, m: usize) -> bool {
    if link.dimension() != Some(m) {
        return false;
    }
    let betti = simplicial_homology(link, Coefficients::Rationals).betti();
    betti.iter().enumerate().all(|(k, &b)| {
        let expected = usize::from(k == 0) + usize::from(k == m);
        b == expected
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Exclusion {
    pub face: Simplex,
    /// First codimension k at which the inequality fails.
    pub codimension: usize,
    pub intersection_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AllowabilityReport {
    pub degree: usize,
    pub allowed: Vec<Simplex>,
    pub excluded: Vec<Exclusion>,
}

fn check_compatible(complex: &SimplicialComplex, strat: &Stratification, perversity: &Perversity) -> Result<usize> {
    let l = complex.dimension().ok_or(Error::EmptyComplex)?;
    if strat.dimension() != l {
        return Err(Error::InvalidStratification("dimension differs from the complex".into()));
    }
    if perversity.max_codimension() != l {
        return Err(Error::InvalidPerversity(format!(
            "perversity covers codimensions up to {}, complex has dimension {l}",
            perversity.max_codimension()
        )));
    }
    Ok(l)
}

fn first_violation(sigma: &Simplex, strat: &Stratification, perversity: &Perversity) -> Option<Exclusion> {
    let i = sigma.dim() as i64;
    (2..=strat.dimension()).find_map(|k| {
        let d = strat.stratum(k).intersection_dim(sigma)?;
        (d as i64 > i - k as i64 + perversity.value(k)).then(|| Exclusion {
            face: sigma.clone(),
            codimension: k,
            intersection_dim: d,
        })
    })
}

pub fn allowable_faces(
    complex: &SimplicialComplex,
    strat: &Stratification,
    perversity: &Perversity,
    i: usize,
) -> Result<AllowabilityReport> {
    let l = check_compatible(complex, strat, perversity)?;
    if i > l {
        return Err(Error::DegreeOutOfRange { degree: i, max: l });
    }
    let mut allowed = Vec::new();
    let mut excluded = Vec::new();
    for sigma in complex.faces(i) {
        match first_violation(sigma, strat, perversity) {
            Some(e) => excluded.push(e),
            None => allowed.push(sigma.clone()),
        }
    }
    Ok(AllowabilityReport { degree: i, allowed, excluded })
}

pub fn intersection_homology(
    complex: &SimplicialComplex,
    strat: &Stratification,
    perversity: &Perversity,
    coefficients: Coefficients,
) -> Result<HomologyResult> {
    if !complex.is_pseudomanifold() {
        return Err(Error::PseudomanifoldRequired);
    }
    let l = check_compatible(complex, strat, perversity)?;
    let data = boundary_matrices(complex);
    let allowed: Vec<Vec<bool>> = (0..=l)
        .map(|i| {
            complex
                .faces(i)
                .iter()
                .map(|s| first_violation(s, strat, perversity).is_none())
                .collect()
        })
        .collect();
    constrained_homology(&data, &allowed, coefficients)
}

/// Top-perversity intersection homology with the default stratification.
pub fn ih_top(complex: &SimplicialComplex, coefficients: Coefficients) -> Result<HomologyResult> {
    let strat = default_stratification(complex)?;
    let l = strat.dimension();
    intersection_homology(complex, &strat, &Perversity::top(l)?, coefficients)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(lists: &[&[usize]]) -> SimplicialComplex {
        SimplicialComplex::from_facets(lists.iter().map(|l| l.to_vec())).unwrap()
    }

    fn tetra_boundary() -> SimplicialComplex {
        cx(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]])
    }

    #[test]
    fn top_and_zero() {
        assert_eq!(Perversity::top(2).unwrap().values(), &[0]);
        assert_eq!(Perversity::top(4).unwrap().values(), &[0, 1, 2]);
        assert_eq!(Perversity::zero(3).unwrap().values(), &[0, 0]);
        assert_eq!(Perversity::top(1), Err(Error::NoCodimensionTwo(1)));
        assert_eq!(Perversity::zero(0), Err(Error::NoCodimensionTwo(0)));
        for l in 2..8 {
            let t = Perversity::top(l).unwrap();
            assert_eq!(Perversity::new(t.values().to_vec()), Ok(t.clone()));
            assert!(Perversity::zero(l).unwrap().le(&t));
        }
    }

    #[test]
    fn parse_choices() {
        assert_eq!("top".parse::<PerversityChoice>().unwrap(), PerversityChoice::Top);
        let c: PerversityChoice = "custom:0,1,1".parse().unwrap();
        assert_eq!(c.to_string(), "custom:0,1,1");
        assert!(c.resolve(4).is_ok());
        assert!(matches!(c.resolve(3), Err(Error::InvalidPerversity(_))));
        assert!(matches!("custom:0,2".parse::<PerversityChoice>(), Err(Error::InvalidPerversity(_))));
        assert!(matches!("custom:1".parse::<PerversityChoice>(), Err(Error::InvalidPerversity(_))));
        assert!(matches!("middle".parse::<PerversityChoice>(), Err(Error::InvalidPerversity(_))));
    }

    #[test]
    fn sphere_has_empty_singular_set() {
        let s2 = tetra_boundary();
        let strat = default_stratification(&s2).unwrap();
        assert!(strat.is_trivial());
        assert!(strat.is_heuristic());
        for p in [Perversity::top(2).unwrap(), Perversity::zero(2).unwrap()] {
            for i in 0..=2 {
                let r = allowable_faces(&s2, &strat, &p, i).unwrap();
                assert!(r.excluded.is_empty());
            }
            let ih = intersection_homology(&s2, &strat, &p, Coefficients::Integers).unwrap();
            assert_eq!(ih.betti(), vec![1, 0, 1]);
        }
        assert!(matches!(
            allowable_faces(&s2, &strat, &Perversity::top(2).unwrap(), 3),
            Err(Error::DegreeOutOfRange { .. })
        ));
    }

    #[test]
    fn explicit_strata_validation() {
        let s2 = tetra_boundary();
        let ok = Stratification::from_strata(&s2, vec![vec![Simplex::vertex(0)]]).unwrap();
        assert_eq!(ok.singular().len(), 1);
        assert!(!ok.is_heuristic());
        let too_big = Stratification::from_strata(&s2, vec![vec![Simplex::new([0, 1]).unwrap()]]);
        assert!(matches!(too_big, Err(Error::InvalidStratification(_))));
        let foreign = Stratification::from_strata(&s2, vec![vec![Simplex::vertex(9)]]);
        assert!(matches!(foreign, Err(Error::NotAFace(_))));
    }

    #[test]
    fn regular_part_of_sphere_is_connected() {
        let s2 = tetra_boundary();
        assert_eq!(Stratification::trivial(2).regular_components(&s2), 1);
        // Removing a vertex leaves an open disk.
        let strat = Stratification::from_strata(&s2, vec![vec![Simplex::vertex(0)]]).unwrap();
        assert_eq!(strat.regular_components(&s2), 1);
    }
}
