use std::collections::BTreeSet;

use itertools::Itertools;

use flatcoh::corpus;
use flatcoh::normalization::{normalize, verify_projection};
use flatcoh::{Simplex, SimplicialComplex};

#[test]
fn corpus_flags_match_table() {
    for e in corpus::all() {
        assert_eq!(e.complex.is_pseudomanifold(), e.expected.pseudomanifold, "{}", e.name);
        assert_eq!(e.complex.connected_components().len(), e.expected.components, "{}", e.name);
        if let Some(normal) = e.expected.normal {
            assert_eq!(e.complex.is_normal().unwrap(), normal, "{}", e.name);
        } else {
            assert!(e.complex.is_normal().is_err(), "{}", e.name);
        }
    }
}

#[test]
fn generators_are_deterministic() {
    for (a, b) in corpus::all().iter().zip(corpus::all()) {
        assert_eq!(a.complex, b.complex);
    }
}

#[test]
fn link_of_a_vertex_is_pure_of_one_less_dimension() {
    for e in corpus::all() {
        let l = e.complex.dimension().unwrap();
        for v in e.complex.vertices() {
            let lk = e.complex.link(&Simplex::vertex(v)).unwrap();
            assert_eq!(lk.dimension(), l.checked_sub(1), "{} vertex {v}", e.name);
            assert!(lk.facets().iter().all(|f| f.dim() + 1 == l), "{} vertex {v}", e.name);
        }
    }
}

#[test]
fn subdivision_preserves_pseudomanifolds() {
    for e in corpus::all() {
        assert_eq!(e.complex.barycentric_subdivision().is_pseudomanifold(), e.expected.pseudomanifold, "{}", e.name);
    }
}

/// Counts chains of length k+1 in the face poset.
fn poset_chains(c: &SimplicialComplex) -> Vec<usize> {
    let faces: Vec<Simplex> = c.all_faces().cloned().collect();
    let mut chains: Vec<Vec<usize>> = (0..faces.len()).map(|i| vec![i]).collect();
    let mut counts = vec![chains.len()];
    loop {
        chains = chains
            .iter()
            .flat_map(|ch| {
                let top = &faces[*ch.last().unwrap()];
                (0..faces.len())
                    .filter(|&j| faces[j].dim() > top.dim() && top.is_face_of(&faces[j]))
                    .map(|j| {
                        let mut n = ch.clone();
                        n.push(j);
                        n
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        if chains.is_empty() {
            return counts;
        }
        counts.push(chains.len());
    }
}

#[test]
fn subdivision_f_vector_counts_poset_chains() {
    for name in ["circle", "disk", "boundary_tetrahedron", "pinched_torus"] {
        let c = corpus::entry(name).unwrap().complex;
        assert_eq!(c.barycentric_subdivision().f_vector(), poset_chains(&c), "{name}");
    }
}

#[test]
fn normality_from_vertex_links_agrees_after_subdivision() {
    // Subdivision vertices sit at barycentres of every face of the original.
    for e in corpus::pseudomanifolds() {
        let sd = e.complex.barycentric_subdivision();
        assert_eq!(sd.is_normal().unwrap(), e.complex.is_normal().unwrap(), "{}", e.name);
    }
}

#[test]
fn link_matches_definition() {
    let t = corpus::torus_7vertex();
    for sigma in t.all_faces() {
        let lk = t.link(sigma).unwrap();
        let expected: BTreeSet<Simplex> = t
            .all_faces()
            .filter(|tau| tau.is_disjoint(sigma) && t.contains(&tau.union(sigma)))
            .cloned()
            .collect();
        assert_eq!(lk.all_faces().cloned().collect::<BTreeSet<_>>(), expected, "{sigma}");
    }
}

#[test]
fn normalization_examples() {
    let s2 = corpus::boundary_of_simplex(3).unwrap();
    let w = corpus::wedge(&s2, &s2, 0, 0).unwrap();
    let n = normalize(&w).unwrap();
    let parts = n.normalized.connected_components();
    assert_eq!(parts.len(), 2);
    for part in parts {
        let facets: Vec<Simplex> =
            n.normalized.facets().iter().filter(|f| part.contains(&f.vertices()[0])).cloned().collect();
        let piece = SimplicialComplex::from_facets(facets.iter().map(|f| f.vertices().to_vec())).unwrap();
        assert_eq!(flatcoh::homology::simplicial_homology(&piece, flatcoh::Coefficients::Rationals).betti(), vec![
            1, 0, 1
        ]);
    }
    assert_eq!(n.sheet_count[&Simplex::vertex(0)], 2);

    let p = corpus::pinched_torus();
    let n = normalize(&p).unwrap();
    assert!(verify_projection(&n).passed());
    let off_apex: Vec<&Simplex> = n.projection.iter().filter(|(_, b)| !b.contains(8)).map(|(a, _)| a).collect();
    let images: BTreeSet<&Simplex> = off_apex.iter().map(|a| &n.projection[*a]).collect();
    assert_eq!(off_apex.len(), images.len());
    assert_eq!(n.normalized.facets().len(), p.facets().len());

    assert!(normalize(&corpus::disk()).is_err());
}

#[test]
fn facet_classes_of_wedge() {
    let s2 = corpus::boundary_of_simplex(3).unwrap();
    let w = corpus::wedge(&s2, &s2, 0, 0).unwrap();
    let (labels, count) = w.facet_classes();
    assert_eq!(count, 2);
    assert_eq!(labels.iter().counts().values().copied().collect::<Vec<_>>(), vec![4, 4]);
}

#[test]
fn corpus_quotients_are_already_simplicial() {
    for e in corpus::all().into_iter().filter(|e| e.complex.is_pseudomanifold()) {
        assert_eq!(normalize(&e.complex).unwrap().merged_face_classes, 0, "{}", e.name);
    }
}
