mod common;

use flatcoh::corpus;
use flatcoh::homology::{simplicial_homology, Coefficients};
use flatcoh::intersection::{
    allowable_faces, default_stratification, ih_top, intersection_homology, Perversity, PerversityChoice,
    Stratification,
};
use flatcoh::{Error, Simplex};

#[test]
fn ih_top_matches_independent_rational_oracle() {
    for e in corpus::pseudomanifolds() {
        let strat = default_stratification(&e.complex).unwrap();
        let singular: Vec<Vec<usize>> =
            strat.singular().maximal_faces().iter().map(|s| s.vertices().to_vec()).collect();
        let oracle = common::constrained_betti_q(&e.complex, &common::top_allowed(&singular));
        let ih = ih_top(&e.complex, Coefficients::Rationals).unwrap();
        assert_eq!(ih.betti(), oracle, "{}", e.name);
    }
}

#[test]
fn integer_and_rational_ih_have_same_betti() {
    for e in corpus::pseudomanifolds() {
        let z = ih_top(&e.complex, Coefficients::Integers).unwrap();
        let q = ih_top(&e.complex, Coefficients::Rationals).unwrap();
        assert_eq!(z.betti(), q.betti(), "{}", e.name);
    }
}

#[test]
fn ih_top_examples() {
    let cases = [
        ("boundary_tetrahedron", vec![1, 0, 1]),
        ("pinched_torus", vec![1, 0, 1]),
        ("suspension_torus", vec![1, 0, 2, 1]),
        ("wedge_two_spheres", vec![2, 0, 2]),
    ];
    for (name, betti) in cases {
        let c = corpus::entry(name).unwrap().complex;
        assert_eq!(ih_top(&c, Coefficients::Integers).unwrap().betti(), betti, "{name}");
    }
}

#[test]
fn default_stratification_examples() {
    let s2 = corpus::boundary_of_simplex(3).unwrap();
    assert!(default_stratification(&s2).unwrap().is_trivial());

    let strat = default_stratification(&corpus::pinched_torus()).unwrap();
    assert!(strat.is_heuristic());
    assert_eq!(strat.singular().maximal_faces(), vec![Simplex::vertex(8)]);
    assert_eq!(strat.stratum(2).maximal_faces(), vec![Simplex::vertex(8)]);

    let st = corpus::suspension(&corpus::torus_7vertex()).unwrap();
    assert_eq!(default_stratification(&st).unwrap().singular().maximal_faces(), vec![
        Simplex::vertex(7),
        Simplex::vertex(8)
    ]);

    assert!(matches!(default_stratification(&corpus::disk()), Err(Error::PseudomanifoldRequired)));
}

#[test]
fn pinched_torus_allowability() {
    let p = corpus::pinched_torus();
    let strat = default_stratification(&p).unwrap();
    let top = Perversity::top(2).unwrap();
    let edges = allowable_faces(&p, &strat, &top, 1).unwrap();
    let apex_edges: Vec<_> = p.faces(1).iter().filter(|s| s.contains(8)).cloned().collect();
    assert_eq!(edges.excluded.iter().map(|x| x.face.clone()).collect::<Vec<_>>(), apex_edges);
    assert!(edges.excluded.iter().all(|x| x.codimension == 2 && x.intersection_dim == 0));
    let triangles = allowable_faces(&p, &strat, &top, 2).unwrap();
    assert!(triangles.excluded.is_empty());
    assert_eq!(triangles.allowed.len(), p.faces(2).len());
    assert!(matches!(allowable_faces(&p, &strat, &top, 3), Err(Error::DegreeOutOfRange { .. })));
}

#[test]
fn empty_singular_set_gives_ordinary_homology() {
    for e in corpus::pseudomanifolds() {
        let l = e.complex.dimension().unwrap();
        let strat = Stratification::trivial(l);
        for p in [Perversity::top(l).unwrap(), Perversity::zero(l).unwrap()] {
            let ih = intersection_homology(&e.complex, &strat, &p, Coefficients::Integers).unwrap();
            assert_eq!(ih, simplicial_homology(&e.complex, Coefficients::Integers), "{}", e.name);
        }
    }
}

#[test]
fn degree_zero_counts_regular_components() {
    for e in corpus::pseudomanifolds() {
        let strat = default_stratification(&e.complex).unwrap();
        let ih = ih_top(&e.complex, Coefficients::Rationals).unwrap();
        assert_eq!(ih.betti()[0], strat.regular_components(&e.complex), "{}", e.name);
    }
}

/// Every perversity on codimensions 2..=l.
fn all_perversities(l: usize) -> Vec<Perversity> {
    let mut out = vec![vec![0i64]];
    for _ in 3..=l {
        out = out
            .into_iter()
            .flat_map(|v| {
                let last = *v.last().unwrap();
                [0, 1].map(|step| {
                    let mut w = v.clone();
                    w.push(last + step);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(|v| Perversity::new(v).unwrap()).collect()
}

#[test]
fn allowability_is_monotone_in_the_perversity() {
    for e in corpus::pseudomanifolds() {
        let l = e.complex.dimension().unwrap();
        let strat = default_stratification(&e.complex).unwrap();
        let ps = all_perversities(l);
        for p in &ps {
            for q in ps.iter().filter(|q| p.le(q)) {
                for i in 0..=l {
                    let a = allowable_faces(&e.complex, &strat, p, i).unwrap().allowed;
                    let b = allowable_faces(&e.complex, &strat, q, i).unwrap().allowed;
                    assert!(a.iter().all(|s| b.contains(s)), "{} {:?} <= {:?} in degree {i}", e.name, p, q);
                }
            }
        }
    }
}

#[test]
fn perversity_validation() {
    assert_eq!(Perversity::top(4).unwrap().values(), &[0, 1, 2]);
    assert_eq!(Perversity::zero(3).unwrap().values(), &[0, 0]);
    assert!(matches!(Perversity::top(1), Err(Error::NoCodimensionTwo(_))));
    assert!(matches!(Perversity::new(vec![0, 2]), Err(Error::InvalidPerversity(_))));
    assert!(matches!(Perversity::new(vec![1]), Err(Error::InvalidPerversity(_))));
    assert!(Perversity::new(vec![0, 1, 1]).is_ok());

    let custom: PerversityChoice = "custom:0,1".parse().unwrap();
    assert_eq!(custom.resolve(3).unwrap().values(), &[0, 1]);
    assert!(custom.resolve(4).is_err());
    assert!("custom:0,2".parse::<PerversityChoice>().is_err());
    assert!("middle".parse::<PerversityChoice>().is_err());
}

#[test]
fn explicit_strata_are_validated() {
    let p = corpus::pinched_torus();
    let strat = Stratification::from_strata(&p, vec![vec![Simplex::vertex(8)]]).unwrap();
    assert!(!strat.is_heuristic());
    assert_eq!(
        intersection_homology(&p, &strat, &Perversity::top(2).unwrap(), Coefficients::Integers).unwrap().betti(),
        vec![1, 0, 1]
    );
    let edge = Simplex::new(vec![0, 1]).unwrap();
    assert!(matches!(Stratification::from_strata(&p, vec![vec![edge]]), Err(Error::InvalidStratification(_))));
    let absent = Simplex::new(vec![0, 8, 5]).unwrap();
    assert!(Stratification::from_strata(&p, vec![vec![absent]]).is_err());
}
