//! Finite abstract simplicial complexes.
//!
//! A [`SimplicialComplex`] is stored as its full face lattice, bucketed by
//! dimension and sorted lexicographically inside each bucket. Every ordering
//! used downstream (boundary matrix bases, orientation signs, reports) is
//! derived from ascending vertex order, so results do not depend on the order
//! in which facets were supplied.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::unionfind::UnionFind;

pub type Vertex = usize;

/// A non-empty, strictly increasing list of vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(Vec<Vertex>);

impl Simplex {
    /// Sorts the vertices. Repeated vertices are rejected, as is an empty list.
    pub fn new(vertices: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut v: Vec<Vertex> = vertices.into_iter().collect();
        if v.is_empty() {
            return Err(Error::EmptyComplex);
        }
        let raw = v.clone();
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DegenerateSimplex(raw));
        }
        Ok(Self(v))
    }

    /// Caller guarantees `vertices` is non-empty and strictly increasing.
    pub(crate) fn from_sorted(vertices: Vec<Vertex>) -> Self {
        debug_assert!(!vertices.is_empty());
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Self(vertices)
    }

    pub fn vertex(v: Vertex) -> Self {
        Self(vec![v])
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    /// Codimension-one faces with their incidence signs: removing the i-th
    /// vertex contributes `(-1)^i`. Empty for a vertex.
    pub fn boundary(&self) -> Vec<(i64, Simplex)> {
        if self.0.len() < 2 {
            return Vec::new();
        }
        (0..self.0.len())
            .map(|i| {
                let mut v = self.0.clone();
                v.remove(i);
                (if i % 2 == 0 { 1 } else { -1 }, Simplex(v))
            })
            .collect()
    }

    /// All non-empty faces, including `self`.
    pub fn faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        (1..=self.0.len())
            .flat_map(move |k| self.0.iter().copied().combinations(k))
            .map(Simplex)
    }

    /// Vertices of `self` not in `other`, or `None` when nothing is left.
    pub fn difference(&self, other: &Simplex) -> Option<Simplex> {
        let v: Vec<Vertex> = self.0.iter().copied().filter(|x| !other.contains(*x)).collect();
        (!v.is_empty()).then_some(Simplex(v))
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| !other.contains(*v))
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let v: BTreeSet<Vertex> = self.0.iter().chain(other.0.iter()).copied().collect();
        Simplex(v.into_iter().collect())
    }

    /// `"0-1-2"`, the face key used by the JSON formats.
    pub fn key(&self) -> String {
        self.0.iter().join("-")
    }

    pub fn parse_key(key: &str) -> Result<Self> {
        let parsed: std::result::Result<Vec<Vertex>, _> =
            key.split('-').map(|s| s.trim().parse::<Vertex>()).collect();
        match parsed {
            Ok(v) => Self::new(v),
            Err(_) => Err(Error::InvalidArgument(format!("bad face key {key:?}"))),
        }
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

impl Serialize for Simplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// A finite abstract simplicial complex, possibly empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    facets: Vec<Simplex>,
    faces: Vec<Vec<Simplex>>,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        Self { facets: Vec::new(), faces: Vec::new() }
    }

    /// Builds the complex generated by the given vertex lists.
    ///
    /// Lists are sorted; lists contained in other lists are absorbed.
    pub fn from_facets<I, F>(facet_lists: I) -> Result<Self>
    where
        I: IntoIterator<Item = F>,
        F: IntoIterator<Item = Vertex>,
    {
        let simplices = facet_lists.into_iter().map(Simplex::new).collect::<Result<Vec<_>>>()?;
        if simplices.is_empty() {
            return Err(Error::EmptyComplex);
        }
        Ok(Self::from_simplices(simplices))
    }

    /// Closure of a collection of simplices. An empty collection yields the
    /// empty complex.
    pub fn from_simplices(simplices: impl IntoIterator<Item = Simplex>) -> Self {
        let mut buckets: Vec<BTreeSet<Simplex>> = Vec::new();
        for s in simplices {
            for face in s.faces() {
                let d = face.dim();
                if buckets.len() <= d {
                    buckets.resize_with(d + 1, BTreeSet::new);
                }
                buckets[d].insert(face);
            }
        }
        let faces: Vec<Vec<Simplex>> = buckets.into_iter().map(|b| b.into_iter().collect()).collect();

        let mut facets = Vec::new();
        for (d, bucket) in faces.iter().enumerate() {
            let covered: BTreeSet<Simplex> = faces
                .get(d + 1)
                .map(|up| up.iter().flat_map(|t| t.boundary()).map(|(_, f)| f).collect())
                .unwrap_or_default();
            facets.extend(bucket.iter().filter(|s| !covered.contains(s)).cloned());
        }
        facets.sort();
        Self { facets, faces }
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.faces.len().checked_sub(1)
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    /// The `k`-faces in lexicographic order.
    pub fn faces(&self, k: usize) -> &[Simplex] {
        self.faces.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn all_faces(&self) -> impl Iterator<Item = &Simplex> {
        self.faces.iter().flatten()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.iter().map(Vec::len).sum()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.faces
            .iter()
            .enumerate()
            .map(|(k, b)| if k % 2 == 0 { b.len() as i64 } else { -(b.len() as i64) })
            .sum()
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        self.faces(0).iter().map(|s| s.0[0]).collect()
    }

    pub fn max_vertex(&self) -> Option<Vertex> {
        self.faces(0).last().map(|s| s.0[0])
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index_of(s).is_some()
    }

    /// Position of `s` in the lexicographic basis of its dimension.
    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.faces.get(s.dim())?.binary_search(s).ok()
    }

    fn require_face(&self, sigma: &Simplex) -> Result<()> {
        if self.contains(sigma) {
            Ok(())
        } else {
            Err(Error::NotAFace(sigma.to_string()))
        }
    }

    /// Facets containing `sigma`.
    pub fn cofacets(&self, sigma: &Simplex) -> impl Iterator<Item = &Simplex> + '_ {
        let sigma = sigma.clone();
        self.facets.iter().filter(move |f| sigma.is_face_of(f))
    }

    /// Combinatorial link `{ τ : τ ∩ σ = ∅, τ ∪ σ a face }`.
    pub fn link(&self, sigma: &Simplex) -> Result<SimplicialComplex> {
        self.require_face(sigma)?;
        Ok(Self::from_simplices(self.cofacets(sigma).filter_map(|f| f.difference(sigma))))
    }

    /// Closed star: every face of every facet containing `sigma`.
    pub fn star(&self, sigma: &Simplex) -> Result<Subcomplex> {
        self.require_face(sigma)?;
        Ok(Subcomplex::from_generators_unchecked(self.cofacets(sigma).cloned()))
    }

    /// Vertex partition under edge adjacency, each part sorted, parts ordered
    /// by smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<Vertex>> {
        let verts = self.vertices();
        let mut uf = UnionFind::new(verts.len());
        for e in self.faces(1) {
            let a = verts.binary_search(&e.0[0]).expect("edge vertex");
            let b = verts.binary_search(&e.0[1]).expect("edge vertex");
            uf.union(a, b);
        }
        let (labels, count) = uf.labels();
        let mut parts = vec![Vec::new(); count];
        for (i, v) in verts.iter().enumerate() {
            parts[labels[i]].push(*v);
        }
        parts
    }

    /// Pure of dimension l with every (l−1)-face in exactly two facets.
    pub fn pseudomanifold_report(&self) -> PseudomanifoldReport {
        let Some(l) = self.dimension() else {
            return PseudomanifoldReport {
                is_pseudomanifold: false,
                dimension: None,
                low_dimensional_facets: Vec::new(),
                bad_ridges: Vec::new(),
                strongly_connected: false,
            };
        };
        let low_dimensional_facets: Vec<Simplex> =
            self.facets.iter().filter(|f| f.dim() < l).cloned().collect();
        let bad_ridges = if l == 0 {
            Vec::new()
        } else {
            let counts = self.ridge_counts(l);
            self.faces(l - 1)
                .iter()
                .zip(counts)
                .filter(|(_, c)| *c != 2)
                .map(|(s, c)| (s.clone(), c))
                .collect()
        };
        let is_pseudomanifold =
            l >= 1 && low_dimensional_facets.is_empty() && bad_ridges.is_empty();
        PseudomanifoldReport {
            is_pseudomanifold,
            dimension: Some(l),
            low_dimensional_facets,
            bad_ridges,
            strongly_connected: self.facet_classes().1 == 1,
        }
    }

    pub fn is_pseudomanifold(&self) -> bool {
        self.pseudomanifold_report().is_pseudomanifold
    }

    /// Number of l-faces containing each (l−1)-face, in basis order.
    fn ridge_counts(&self, l: usize) -> Vec<usize> {
        let ridges = self.faces(l - 1);
        let mut counts = vec![0; ridges.len()];
        for f in self.faces(l) {
            for (_, r) in f.boundary() {
                counts[ridges.binary_search(&r).expect("closed")] += 1;
            }
        }
        counts
    }

    /// Classes of top-dimensional facets under "share an (l−1)-face",
    /// indexed like `faces(l)`.
    pub fn facet_classes(&self) -> (Vec<usize>, usize) {
        let Some(l) = self.dimension() else {
            return (Vec::new(), 0);
        };
        let tops = self.faces(l);
        let mut uf = UnionFind::new(tops.len());
        if l > 0 {
            let mut by_ridge: BTreeMap<Simplex, usize> = BTreeMap::new();
            for (i, f) in tops.iter().enumerate() {
                for (_, r) in f.boundary() {
                    if let Some(&j) = by_ridge.get(&r) {
                        uf.union(i, j);
                    } else {
                        by_ridge.insert(r, i);
                    }
                }
            }
        }
        uf.labels()
    }

    /// Vertex links must all be connected. Points inside a positive-dimensional
    /// face σ have link ∂σ ∗ Lk(σ), a join of two non-empty complexes, which is
    /// always connected, so vertices are the only places to look.
    pub fn normality(&self) -> Result<NormalityReport> {
        if !self.is_pseudomanifold() {
            return Err(Error::PseudomanifoldRequired);
        }
        let mut bad_vertices = Vec::new();
        for v in self.vertices() {
            let lk = self.link(&Simplex::vertex(v))?;
            if lk.connected_components().len() != 1 {
                bad_vertices.push(v);
            }
        }
        Ok(NormalityReport { is_normal: bad_vertices.is_empty(), bad_vertices })
    }

    pub fn is_normal(&self) -> Result<bool> {
        Ok(self.normality()?.is_normal)
    }

    pub fn barycentric_subdivision(&self) -> SimplicialComplex {
        self.barycentric_subdivision_with_labels().0
    }

    /// Subdivision together with the original face behind each new vertex.
    /// New vertex ids enumerate the original faces by dimension, then
    /// lexicographically.
    pub fn barycentric_subdivision_with_labels(&self) -> (SimplicialComplex, Vec<Simplex>) {
        let labels: Vec<Simplex> = self.all_faces().cloned().collect();
        let id_of: BTreeMap<&Simplex, Vertex> =
            labels.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut chains = Vec::new();
        for facet in &self.facets {
            for perm in facet.0.iter().copied().permutations(facet.0.len()) {
                let mut chain = Vec::with_capacity(perm.len());
                for k in 1..=perm.len() {
                    let mut prefix = perm[..k].to_vec();
                    prefix.sort_unstable();
                    chain.push(id_of[&Simplex(prefix)]);
                }
                chain.sort_unstable();
                chains.push(Simplex(chain));
            }
        }
        (Self::from_simplices(chains), labels)
    }

    /// Relabels vertices through an injective map.
    pub fn relabel(&self, mut f: impl FnMut(Vertex) -> Vertex) -> SimplicialComplex {
        Self::from_simplices(self.facets.iter().map(|s| {
            let mut v: Vec<Vertex> = s.0.iter().map(|x| f(*x)).collect();
            v.sort_unstable();
            Simplex(v)
        }))
    }
}

/// Diagnostic output of [`SimplicialComplex::pseudomanifold_report`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PseudomanifoldReport {
    pub is_pseudomanifold: bool,
    pub dimension: Option<usize>,
    /// Facets below the top dimension (purity violations).
    pub low_dimensional_facets: Vec<Simplex>,
    /// (l−1)-faces not lying in exactly two facets, with their facet count.
    pub bad_ridges: Vec<(Simplex, usize)>,
    /// Informational only; not part of the pseudomanifold test.
    pub strongly_connected: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalityReport {
    pub is_normal: bool,
    pub bad_vertices: Vec<Vertex>,
}

/// A set of faces closed under taking faces.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subcomplex {
    faces: BTreeSet<Simplex>,
}

impl Subcomplex {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Closure of `generators`, each of which must be a face of `parent`.
    pub fn closure(
        parent: &SimplicialComplex,
        generators: impl IntoIterator<Item = Simplex>,
    ) -> Result<Self> {
        let gens: Vec<Simplex> = generators.into_iter().collect();
        for g in &gens {
            parent.require_face(g)?;
        }
        Ok(Self::from_generators_unchecked(gens))
    }

    fn from_generators_unchecked(generators: impl IntoIterator<Item = Simplex>) -> Self {
        let mut faces = BTreeSet::new();
        for g in generators {
            faces.extend(g.faces());
        }
        Self { faces }
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.faces.contains(s)
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn faces(&self) -> impl Iterator<Item = &Simplex> {
        self.faces.iter()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.faces.iter().map(Simplex::dim).max()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dimension().map_or(0, |d| d + 1)];
        for s in &self.faces {
            f[s.dim()] += 1;
        }
        f
    }

    /// Faces of dimension at most `k`.
    pub fn skeleton(&self, k: usize) -> Subcomplex {
        Self { faces: self.faces.iter().filter(|s| s.dim() <= k).cloned().collect() }
    }

    pub fn is_subset(&self, other: &Subcomplex) -> bool {
        self.faces.is_subset(&other.faces)
    }

    pub fn is_within(&self, parent: &SimplicialComplex) -> bool {
        self.faces.iter().all(|s| parent.contains(s))
    }

    /// Dimension of the largest face of `sigma` lying in this subcomplex.
    pub fn intersection_dim(&self, sigma: &Simplex) -> Option<usize> {
        (0..sigma.0.len())
            .rev()
            .find(|&k| sigma.0.iter().copied().combinations(k + 1).any(|c| self.faces.contains(&Simplex(c))))
    }

    /// Maximal faces of the subcomplex.
    pub fn maximal_faces(&self) -> Vec<Simplex> {
        self.to_complex().facets().to_vec()
    }

    pub fn to_complex(&self) -> SimplicialComplex {
        SimplicialComplex::from_simplices(self.faces.iter().cloned())
    }
}
