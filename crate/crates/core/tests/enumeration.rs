use std::collections::BTreeSet;

use proptest::prelude::*;
use tetrindex::cone::{hilbert_basis, minimal_translates, RecessionCone};
use tetrindex::enumeration::{enumerate, fundamental_solutions, Backend, BoundaryConstraint, Query};
use tetrindex::fixtures;
use tetrindex::index::contribution_degree;
use tetrindex::triangulation::{half_units, BoundaryClass, GluingData};
use tetrindex::Error;

fn sorted(v: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let mut v = v;
    v.sort();
    v
}

#[test]
fn m004_closed_hilbert_basis() {
    let g = fixtures::load("m004").unwrap();
    let b = fundamental_solutions(&g, &BoundaryConstraint::Closed).unwrap();
    assert_eq!(
        sorted(b.rays),
        vec![vec![0, 0, 0, 1, 1, 1], vec![0, 1, 2, 0, 1, 2], vec![1, 1, 1, 0, 0, 0], vec![2, 1, 0, 2, 1, 0]]
    );
    assert_eq!(b.translates, vec![vec![0; 6]]);
}

#[test]
fn m004_translates_for_boundary_four_one() {
    let g = fixtures::load("m004").unwrap();
    let b = fundamental_solutions(&g, &BoundaryConstraint::Fixed(BoundaryClass(vec![(4, 1)]))).unwrap();
    assert_eq!(sorted(b.translates), vec![vec![0, 0, 2, 0, 1, 0], vec![1, 0, 1, 2, 2, 0], vec![2, 0, 0, 4, 3, 0]]);
}

#[test]
fn m004_translates_for_the_longitude_filling() {
    let g = fixtures::load("m004").unwrap();
    let translates = |value| {
        let c = BoundaryConstraint::Intersection { cusp: 0, alpha: (0, 1), value, others: BoundaryClass::zero(1) };
        sorted(fundamental_solutions(&g, &c).unwrap().translates)
    };
    assert_eq!(
        translates(-2),
        vec![vec![0, 1, 1, 0, 0, 1], vec![0, 1, 1, 1, 0, 0], vec![1, 1, 0, 0, 0, 1], vec![1, 1, 0, 1, 0, 0]]
    );
    assert_eq!(
        translates(2),
        vec![vec![0, 0, 1, 0, 1, 1], vec![0, 0, 1, 1, 1, 0], vec![1, 0, 0, 0, 1, 1], vec![1, 0, 0, 1, 1, 0]]
    );
}

#[test]
fn toroidal_fixture_is_not_one_efficient() {
    let g = fixtures::load("cPcbbbdei").unwrap();
    let q = Query::new(&g, &BoundaryConstraint::Closed).unwrap();
    match enumerate(&g, &q, 20, Backend::Cone) {
        Err(Error::NotOneEfficient { witness, .. }) => assert_eq!(witness, vec![0, 0, 1, 0, 0, 1]),
        other => panic!("{:?}", other.map(|e| e.classes.len())),
    }
}

#[test]
fn standard_cusp_has_only_the_trivial_closed_class() {
    let g = fixtures::load("standard_cusp").unwrap();
    let c = BoundaryConstraint::BoundaryEdges { b: vec![0, 0, 0], omega: BoundaryClass::zero(1) };
    let q = Query::new(&g, &c).unwrap();
    let e = enumerate(&g, &q, 30, Backend::Cone).unwrap();
    assert_eq!(e.classes.len(), 1);
    assert!(e.classes[0].quads.iter().all(|&x| x == 0));
}

/// Every nonnegative class with a zero quad in each tetrahedron, satisfying
/// the boundary condition, with coordinates up to `bound` and degree at most
/// `cap`.
fn brute_force(g: &GluingData, gamma: &BoundaryClass, bound: i64, cap: i64) -> BTreeSet<Vec<i64>> {
    let width = g.width();
    let mut out = BTreeSet::new();
    let mut x = vec![0i64; width];
    loop {
        let minimal = x.chunks(3).all(|t| t.contains(&0));
        if minimal && g.is_q_normal(&x) && &g.boundary(&x) == gamma {
            let neg_chi = half_units(&-g.euler_char(&x).unwrap()).unwrap();
            assert_eq!(neg_chi % 2, 0);
            if contribution_degree(&x, neg_chi / 2) <= cap {
                out.insert(x.clone());
            }
        }
        let mut i = 0;
        loop {
            if i == width {
                return out;
            }
            if x[i] < bound {
                x[i] += 1;
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

fn enumerated(g: &GluingData, gamma: &BoundaryClass, cap: i64, backend: Backend) -> BTreeSet<Vec<i64>> {
    let q = Query::new(g, &BoundaryConstraint::Fixed(gamma.clone())).unwrap();
    let e = enumerate(g, &q, cap, backend).unwrap();
    for c in &e.classes {
        assert!(g.is_q_normal(&c.quads));
        assert_eq!(&c.boundary, gamma);
        assert!(c.quads.chunks(3).all(|t| t.contains(&0)));
        assert_eq!(c.degree, contribution_degree(&c.quads, c.neg_chi));
        assert!(c.degree <= cap);
    }
    e.classes.iter().map(|c| c.quads.clone()).collect()
}

#[test]
fn m004_enumeration_matches_a_brute_force_scan() {
    let g = fixtures::load("m004").unwrap();
    for gamma in [(0, 0), (2, 0), (0, 1), (4, 1), (-2, 3)] {
        let gamma = BoundaryClass(vec![gamma]);
        let expected = brute_force(&g, &gamma, 12, 12);
        assert_eq!(enumerated(&g, &gamma, 12, Backend::Cone), expected, "{gamma}");
        assert_eq!(enumerated(&g, &gamma, 12, Backend::Box), expected, "{gamma}");
    }
}

#[test]
fn backends_agree_on_the_torus_link() {
    let g = fixtures::load("torus_link").unwrap();
    for gamma in [vec![(0, 0), (0, 0)], vec![(2, 1), (0, 0)], vec![(0, 0), (2, 1)], vec![(2, 1), (-2, -1)]] {
        let gamma = BoundaryClass(gamma);
        assert_eq!(enumerated(&g, &gamma, 10, Backend::Cone), enumerated(&g, &gamma, 10, Backend::Box), "{gamma}");
    }
}

#[test]
fn enumeration_is_deterministic() {
    let g = fixtures::load("m004").unwrap();
    let q = Query::new(&g, &BoundaryConstraint::Closed).unwrap();
    let a = enumerate(&g, &q, 30, Backend::Cone).unwrap().classes;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| enumerate(&g, &q, 30, Backend::Cone).unwrap().classes);
    assert_eq!(a, b);
}

/// All nonnegative solutions of `A x = r` inside the box `[0, bound]^k`.
fn box_solutions(a: &[Vec<i64>], r: &[i64], k: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut x = vec![0i64; k];
    loop {
        if a.iter().zip(r).all(|(row, &v)| row.iter().zip(&x).map(|(p, q)| p * q).sum::<i64>() == v) {
            out.push(x.clone());
        }
        let mut i = 0;
        loop {
            if i == k {
                return out;
            }
            if x[i] < bound {
                x[i] += 1;
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

fn dominates(x: &[i64], y: &[i64]) -> bool {
    x.iter().zip(y).all(|(a, b)| a >= b)
}

/// Whether `x` is a sum of an element of `base` and nonnegative multiples of `gens`.
fn generated(x: &[i64], base: &[Vec<i64>], gens: &[Vec<i64>]) -> bool {
    if base.iter().any(|b| b.as_slice() == x) {
        return true;
    }
    gens.iter().any(|g| {
        dominates(x, g) && g.iter().any(|&v| v != 0) && {
            let y: Vec<i64> = x.iter().zip(g).map(|(a, b)| a - b).collect();
            generated(&y, base, gens)
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hilbert_basis_generates_the_cone(row in prop::collection::vec(-2i64..=2, 4)) {
        let a = vec![row];
        let basis = hilbert_basis(&a, 4).unwrap();
        let sols = box_solutions(&a, &[0], 4, 4);
        for b in &basis {
            prop_assert!(sols.contains(b) || b.iter().any(|&v| v > 4));
            // Irreducible: no other basis element fits below it.
            prop_assert!(!basis.iter().any(|c| c != b && dominates(b, c)));
        }
        for s in &sols {
            prop_assert!(generated(s, &[vec![0; 4]], &basis), "{:?} not generated", s);
        }
    }

    #[test]
    fn translates_and_basis_generate_all_solutions(
        r1 in prop::collection::vec(-2i64..=2, 4),
        r2 in prop::collection::vec(-2i64..=2, 4),
        rhs in prop::collection::vec(-3i64..=3, 2),
    ) {
        let a = vec![r1, r2];
        let cone = RecessionCone::new(&a, 4).unwrap();
        let tr = minimal_translates(&a, &rhs, 4, &cone).unwrap();
        let sols = box_solutions(&a, &rhs, 4, 5);
        for t in &tr {
            prop_assert!(a.iter().zip(&rhs).all(|(row, &v)| row.iter().zip(t).map(|(p, q)| p * q).sum::<i64>() == v));
            prop_assert!(!cone.hilbert.iter().any(|h| dominates(t, h)));
        }
        for s in &sols {
            prop_assert!(generated(s, &tr, &cone.hilbert), "{:?} not generated", s);
        }
    }
}
