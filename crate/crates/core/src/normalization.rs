//! Normalization of a pseudomanifold and the comparison of top-perversity
//! intersection homology with the cohomology of the normalization.
//!
//! The normalization X̃ takes one copy of every closed facet and glues copies
//! only across shared (l−1)-faces. A face of X whose neighbourhood splits into
//! several sheets (for example the apex of a pinched torus) ends up with one
//! preimage per sheet.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::{Simplex, SimplicialComplex, Vertex};
use crate::error::{Error, Result};
use crate::homology::{boundary_matrices, cohomology, Coefficients, HomologyResult};
use crate::intersection::{default_stratification, intersection_homology, Perversity, Stratification};
use crate::unionfind::UnionFind;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationResult {
    pub original: SimplicialComplex,
    pub normalized: SimplicialComplex,
    /// π on faces of X̃.
    pub projection: BTreeMap<Simplex, Simplex>,
    /// Number of preimages of every face of X.
    pub sheet_count: BTreeMap<Simplex, usize>,
    /// For every vertex of X̃: the vertex of X below it and the index of its
    /// sheet among the copies of that vertex.
    pub vertex_origin: Vec<(Vertex, usize)>,
    /// Distinct glued face classes that share a vertex set, and hence were
    /// merged when forming a simplicial complex. Zero on every input whose
    /// quotient is already simplicial.
    pub merged_face_classes: usize,
}

pub fn normalize(complex: &SimplicialComplex) -> Result<NormalizationResult> {
    if !complex.is_pseudomanifold() {
        return Err(Error::PseudomanifoldRequired);
    }
    let l = complex.dimension().expect("pseudomanifolds are non-empty");
    let facets = complex.faces(l);

    // One slot per (facet, face of that facet); vertices come first in each
    // facet's block so first-appearance labelling orders vertex classes by
    // their smallest (facet, vertex) representative.
    let mut slot: BTreeMap<(usize, Simplex), usize> = BTreeMap::new();
    let mut slots: Vec<(usize, Simplex)> = Vec::new();
    for (fi, f) in facets.iter().enumerate() {
        let mut faces: Vec<Simplex> = f.faces().collect();
        faces.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.cmp(b)));
        for s in faces {
            slot.insert((fi, s.clone()), slots.len());
            slots.push((fi, s));
        }
    }

    let mut uf = UnionFind::new(slots.len());
    let mut first_owner: BTreeMap<Simplex, usize> = BTreeMap::new();
    for (fi, f) in facets.iter().enumerate() {
        for (_, ridge) in f.boundary() {
            match first_owner.get(&ridge) {
                Some(&gi) => {
                    for s in ridge.faces() {
                        uf.union(slot[&(fi, s.clone())], slot[&(gi, s)]);
                    }
                }
                None => {
                    first_owner.insert(ridge, fi);
                }
            }
        }
    }
    let (labels, _) = uf.labels();

    // Vertex classes in order of first appearance.
    let mut vertex_id: BTreeMap<usize, Vertex> = BTreeMap::new();
    let mut vertex_origin = Vec::new();
    let mut copies_of: BTreeMap<Vertex, usize> = BTreeMap::new();
    for (i, (_, s)) in slots.iter().enumerate() {
        if s.dim() != 0 || vertex_id.contains_key(&labels[i]) {
            continue;
        }
        let v = s.vertices()[0];
        let copy = copies_of.entry(v).or_insert(0);
        vertex_origin.push((v, *copy));
        *copy += 1;
        vertex_id.insert(labels[i], vertex_origin.len() - 1);
    }
    let lift = |fi: usize, s: &Simplex| -> Simplex {
        let mut v: Vec<Vertex> = s
            .vertices()
            .iter()
            .map(|&x| vertex_id[&labels[slot[&(fi, Simplex::vertex(x))]]])
            .collect();
        v.sort_unstable();
        Simplex::from_sorted(v)
    };

    let normalized =
        SimplicialComplex::from_simplices(facets.iter().enumerate().map(|(fi, f)| lift(fi, f)));

    let mut class_faces: BTreeMap<usize, Simplex> = BTreeMap::new();
    for (i, (fi, s)) in slots.iter().enumerate() {
        class_faces.entry(labels[i]).or_insert_with(|| lift(*fi, s));
    }
    let merged_face_classes = class_faces.len() - normalized.num_faces();

    let mut projection = BTreeMap::new();
    let mut sheet_count: BTreeMap<Simplex, usize> =
        complex.all_faces().map(|s| (s.clone(), 0)).collect();
    for s in normalized.all_faces() {
        let mut down: Vec<Vertex> = s.vertices().iter().map(|&v| vertex_origin[v].0).collect();
        down.sort_unstable();
        let down = Simplex::from_sorted(down);
        *sheet_count.get_mut(&down).expect("projection lands in X") += 1;
        projection.insert(s.clone(), down);
    }

    Ok(NormalizationResult {
        original: complex.clone(),
        normalized,
        projection,
        sheet_count,
        vertex_origin,
        merged_face_classes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectionReport {
    pub simplicial: bool,
    pub surjective: bool,
    pub facet_bijection: bool,
    pub ridge_bijection: bool,
    pub finite_sheets: bool,
    pub bijective_off_singular: bool,
    pub max_sheets: usize,
    pub violations: Vec<String>,
}

impl ProjectionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks π against its contract. The singular subcomplex is taken from the
/// default stratification of X.
pub fn verify_projection(result: &NormalizationResult) -> ProjectionReport {
    let x = &result.original;
    let mut violations = Vec::new();

    let mut simplicial = true;
    for (up, down) in &result.projection {
        if up.dim() != down.dim() || !x.contains(down) || !result.normalized.contains(up) {
            simplicial = false;
            violations.push(format!("π{up} = {down} is not a face of matching dimension"));
        }
    }
    if result.projection.len() != result.normalized.num_faces() {
        simplicial = false;
        violations.push("π is not defined on every face of the normalization".into());
    }

    let unhit: Vec<&Simplex> = result.sheet_count.iter().filter(|(_, c)| **c == 0).map(|(s, _)| s).collect();
    let surjective = unhit.is_empty() && result.sheet_count.len() == x.num_faces();
    for s in unhit {
        violations.push(format!("{s} has no preimage"));
    }

    let l = x.dimension().unwrap_or(0);
    let sheets_at = |k: usize| x.faces(k).iter().map(|s| result.sheet_count.get(s).copied().unwrap_or(0));
    let facet_bijection = sheets_at(l).all(|c| c == 1) && result.normalized.f_vector().get(l) == x.f_vector().get(l);
    if !facet_bijection {
        violations.push("π is not a bijection on facets".into());
    }
    let ridge_bijection = l == 0 || sheets_at(l - 1).all(|c| c == 1);
    if !ridge_bijection {
        violations.push("π is not a bijection on (l-1)-faces".into());
    }

    let max_sheets = result.sheet_count.values().copied().max().unwrap_or(0);
    let finite_sheets = max_sheets <= x.faces(l).len().max(1);
    if !finite_sheets {
        violations.push(format!("a face has {max_sheets} sheets, more than there are facets"));
    }

    let bijective_off_singular = match default_stratification(x) {
        Ok(strat) => {
            let singular = strat.singular();
            let bad: Vec<&Simplex> = result
                .sheet_count
                .iter()
                .filter(|(s, c)| !singular.contains(s) && **c != 1)
                .map(|(s, _)| s)
                .collect();
            for s in &bad {
                violations.push(format!("{s} lies off the singular set but has {} sheets", result.sheet_count[*s]));
            }
            bad.is_empty()
        }
        Err(e) => {
            violations.push(format!("no stratification: {e}"));
            false
        }
    };
    if result.merged_face_classes > 0 {
        violations.push(format!("{} glued face classes collapsed onto shared vertex sets", result.merged_face_classes));
    }

    ProjectionReport {
        simplicial,
        surjective,
        facet_bijection,
        ridge_bijection,
        finite_sheets,
        bijective_off_singular,
        max_sheets,
        violations,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeRhamReport {
    pub ih_top: HomologyResult,
    pub normalization_cohomology: HomologyResult,
    #[serde(rename = "match")]
    pub matches: bool,
    pub heuristic_stratification: bool,
    pub singular_faces: Vec<Simplex>,
}

/// Compares rational IH with top perversity against rational cohomology of
/// the normalization, degree by degree. With `strat = None` the default
/// stratification is used.
pub fn derham_verify(complex: &SimplicialComplex, strat: Option<&Stratification>) -> Result<DeRhamReport> {
    if !complex.is_pseudomanifold() {
        return Err(Error::PseudomanifoldRequired);
    }
    let owned;
    let strat = match strat {
        Some(s) => s,
        None => {
            owned = default_stratification(complex)?;
            &owned
        }
    };
    let l = strat.dimension();
    let ih_top = intersection_homology(complex, strat, &Perversity::top(l)?, Coefficients::Rationals)?;
    let norm = normalize(complex)?;
    let normalization_cohomology = cohomology(&boundary_matrices(&norm.normalized), Coefficients::Rationals)?;
    Ok(DeRhamReport {
        matches: ih_top.betti() == normalization_cohomology.betti(),
        ih_top,
        normalization_cohomology,
        heuristic_stratification: strat.is_heuristic(),
        singular_faces: strat.singular().maximal_faces(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn sphere_is_already_normal() {
        let s2 = corpus::boundary_of_simplex(3).unwrap();
        let n = normalize(&s2).unwrap();
        assert_eq!(n.normalized.f_vector(), s2.f_vector());
        assert!(n.sheet_count.values().all(|&c| c == 1));
        assert!(verify_projection(&n).passed());
    }

    #[test]
    fn pinched_torus_splits_apex() {
        let p = corpus::pinched_torus();
        let n = normalize(&p).unwrap();
        assert_eq!(n.sheet_count[&Simplex::vertex(8)], 2);
        assert_eq!(n.normalized.f_vector(), vec![10, 24, 16]);
        assert_eq!(n.normalized.connected_components().len(), 1);
        let report = verify_projection(&n);
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(report.max_sheets, 2);
        // Every face other than the apex has a single preimage.
        for (s, c) in &n.sheet_count {
            if *s != Simplex::vertex(8) {
                assert_eq!(*c, 1, "{s}");
            }
        }
    }

    #[test]
    fn wedge_separates() {
        let s2 = corpus::boundary_of_simplex(3).unwrap();
        let w = corpus::wedge(&s2, &s2, 0, 0).unwrap();
        let n = normalize(&w).unwrap();
        assert_eq!(n.normalized.connected_components().len(), 2);
        assert_eq!(n.sheet_count[&Simplex::vertex(0)], 2);
        assert_eq!(n.vertex_origin.iter().filter(|(v, _)| *v == 0).count(), 2);
    }

    #[test]
    fn requires_pseudomanifold() {
        assert_eq!(normalize(&corpus::disk()), Err(Error::PseudomanifoldRequired));
        assert_eq!(derham_verify(&corpus::disk(), None), Err(Error::PseudomanifoldRequired));
    }

    #[test]
    fn derham_on_sphere() {
        let r = derham_verify(&corpus::boundary_of_simplex(3).unwrap(), None).unwrap();
        assert!(r.matches);
        assert_eq!(r.ih_top.betti(), vec![1, 0, 1]);
        assert!(r.singular_faces.is_empty());
    }

    #[test]
    fn broken_projection_is_reported() {
        let p = corpus::pinched_torus();
        let mut n = normalize(&p).unwrap();
        let first = n.projection.keys().next().unwrap().clone();
        n.projection.insert(first, Simplex::new([0, 1]).unwrap());
        n.sheet_count.insert(Simplex::vertex(8), 0);
        let r = verify_projection(&n);
        assert!(!r.simplicial);
        assert!(!r.surjective);
        assert!(!r.passed());
    }
}
