//! Deterministic generators for the test corpus.

use crate::complex::{Simplex, SimplicialComplex, Vertex};
use crate::error::{Error, Result};

/// ∂Δ^l: all l-subsets of {0..=l}, a triangulated (l−1)-sphere.
pub fn boundary_of_simplex(l: usize) -> Result<SimplicialComplex> {
    if l < 1 {
        return Err(Error::InvalidArgument("boundary_of_simplex needs l >= 1".into()));
    }
    SimplicialComplex::from_facets((0..=l).map(|skip| (0..=l).filter(move |&v| v != skip)))
}

/// Möbius' 7-vertex torus.
pub fn torus_7vertex() -> SimplicialComplex {
    SimplicialComplex::from_facets((0..7).flat_map(|i| {
        [[i, (i + 1) % 7, (i + 3) % 7], [i, (i + 2) % 7, (i + 3) % 7]]
    }))
    .expect("constant facet list")
}

/// The 6-vertex real projective plane (hemi-icosahedron).
pub fn rp2_6vertex() -> SimplicialComplex {
    const FACETS: [[usize; 3]; 10] = [
        [0, 1, 2],
        [0, 2, 3],
        [0, 3, 4],
        [0, 4, 5],
        [0, 1, 5],
        [1, 2, 4],
        [2, 3, 5],
        [1, 3, 4],
        [2, 4, 5],
        [1, 3, 5],
    ];
    SimplicialComplex::from_facets(FACETS).expect("constant facet list")
}

/// Join with a single new vertex.
pub fn cone(complex: &SimplicialComplex, apex: Vertex) -> Result<SimplicialComplex> {
    if complex.contains(&Simplex::vertex(apex)) {
        return Err(Error::ApexCollision(apex));
    }
    if complex.is_empty() {
        return Err(Error::EmptyComplex);
    }
    SimplicialComplex::from_facets(complex.facets().iter().map(|f| {
        let mut v = f.vertices().to_vec();
        v.push(apex);
        v
    }))
}

/// Two cones over the same base; the apexes are the two smallest unused ids
/// above the current maximum vertex.
pub fn suspension(complex: &SimplicialComplex) -> Result<SimplicialComplex> {
    let top = complex.max_vertex().ok_or(Error::EmptyComplex)?;
    let north = cone(complex, top + 1)?;
    let south = cone(complex, top + 2)?;
    Ok(SimplicialComplex::from_simplices(
        north.facets().iter().chain(south.facets()).cloned(),
    ))
}

/// Cylinder on two 4-cycles (vertices 0..4 and 4..8) with a single apex (8)
/// coned onto both boundary circles: a torus with one meridian collapsed.
pub fn pinched_torus() -> SimplicialComplex {
    const N: usize = 4;
    const APEX: usize = 2 * N;
    let a = |i: usize| i % N;
    let b = |i: usize| N + i % N;
    let mut facets = Vec::new();
    for i in 0..N {
        facets.push(vec![a(i), a(i + 1), b(i)]);
        facets.push(vec![a(i + 1), b(i), b(i + 1)]);
        facets.push(vec![APEX, a(i), a(i + 1)]);
        facets.push(vec![APEX, b(i), b(i + 1)]);
    }
    SimplicialComplex::from_facets(facets).expect("constant facet list")
}

/// Disjoint union with `v2 ∈ c2` glued to `v1 ∈ c1`. Other vertices of `c2`
/// are shifted past the largest vertex of `c1`.
pub fn wedge(c1: &SimplicialComplex, c2: &SimplicialComplex, v1: Vertex, v2: Vertex) -> Result<SimplicialComplex> {
    if !c1.contains(&Simplex::vertex(v1)) {
        return Err(Error::MissingVertex(v1));
    }
    if !c2.contains(&Simplex::vertex(v2)) {
        return Err(Error::MissingVertex(v2));
    }
    let offset = c1.max_vertex().expect("non-empty") + 1;
    let shifted = c2.relabel(|u| if u == v2 { v1 } else { u + offset });
    Ok(SimplicialComplex::from_simplices(
        c1.facets().iter().chain(shifted.facets()).cloned(),
    ))
}

/// Two triangles sharing an edge.
pub fn disk() -> SimplicialComplex {
    SimplicialComplex::from_facets([[0, 1, 2], [1, 2, 3]]).expect("constant facet list")
}

/// Invariants recorded for a corpus entry. Rational Betti numbers, normality
/// and component counts of the space and its normalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedInvariants {
    pub betti: Vec<usize>,
    pub pseudomanifold: bool,
    pub normal: Option<bool>,
    pub components: usize,
    pub normalization_betti: Option<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub complex: SimplicialComplex,
    pub expected: ExpectedInvariants,
}

pub const NAMES: [&str; 11] = [
    "circle",
    "disk",
    "boundary_tetrahedron",
    "boundary_4simplex",
    "torus_7vertex",
    "rp2_6vertex",
    "pinched_torus",
    "suspension_torus",
    "suspension_rp2",
    "wedge_two_spheres",
    "cone_torus",
];

fn expect(
    betti: &[usize],
    pseudomanifold: bool,
    normal: Option<bool>,
    components: usize,
    normalization_betti: Option<&[usize]>,
) -> ExpectedInvariants {
    ExpectedInvariants {
        betti: betti.to_vec(),
        pseudomanifold,
        normal,
        components,
        normalization_betti: normalization_betti.map(<[usize]>::to_vec),
    }
}

pub fn entry(name: &str) -> Option<CorpusEntry> {
    let s2 = || boundary_of_simplex(3).expect("l >= 1");
    let (name, complex, expected) = match name {
        "circle" => ("circle", boundary_of_simplex(2).ok()?, expect(&[1, 1], true, Some(false), 1, Some(&[1, 1]))),
        "disk" => ("disk", disk(), expect(&[1, 0, 0], false, None, 1, None)),
        "boundary_tetrahedron" => {
            ("boundary_tetrahedron", s2(), expect(&[1, 0, 1], true, Some(true), 1, Some(&[1, 0, 1])))
        }
        "boundary_4simplex" => (
            "boundary_4simplex",
            boundary_of_simplex(4).ok()?,
            expect(&[1, 0, 0, 1], true, Some(true), 1, Some(&[1, 0, 0, 1])),
        ),
        "torus_7vertex" => {
            ("torus_7vertex", torus_7vertex(), expect(&[1, 2, 1], true, Some(true), 1, Some(&[1, 2, 1])))
        }
        "rp2_6vertex" => ("rp2_6vertex", rp2_6vertex(), expect(&[1, 0, 0], true, Some(true), 1, Some(&[1, 0, 0]))),
        "pinched_torus" => {
            ("pinched_torus", pinched_torus(), expect(&[1, 1, 1], true, Some(false), 1, Some(&[1, 0, 1])))
        }
        "suspension_torus" => (
            "suspension_torus",
            suspension(&torus_7vertex()).ok()?,
            expect(&[1, 0, 2, 1], true, Some(true), 1, Some(&[1, 0, 2, 1])),
        ),
        "suspension_rp2" => (
            "suspension_rp2",
            suspension(&rp2_6vertex()).ok()?,
            expect(&[1, 0, 0, 0], true, Some(true), 1, Some(&[1, 0, 0, 0])),
        ),
        "wedge_two_spheres" => (
            "wedge_two_spheres",
            wedge(&s2(), &s2(), 0, 0).ok()?,
            expect(&[1, 0, 2], true, Some(false), 1, Some(&[2, 0, 2])),
        ),
        "cone_torus" => (
            "cone_torus",
            cone(&torus_7vertex(), 7).ok()?,
            expect(&[1, 0, 0, 0], false, None, 1, None),
        ),
        _ => return None,
    };
    Some(CorpusEntry { name, complex, expected })
}

pub fn all() -> Vec<CorpusEntry> {
    NAMES.iter().map(|n| entry(n).expect("listed names resolve")).collect()
}

/// Corpus entries that are pseudomanifolds of dimension at least 2.
pub fn pseudomanifolds() -> Vec<CorpusEntry> {
    all()
        .into_iter()
        .filter(|e| e.expected.pseudomanifold && e.complex.dimension().unwrap_or(0) >= 2)
        .collect()
}
