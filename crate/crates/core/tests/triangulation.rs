use tetrindex::fixtures;
use tetrindex::lattice::Q;
use tetrindex::triangulation::{double_arc, omega, parse_gluing, tetrahedral_solution, BoundaryClass, GluingData};
use tetrindex::Error;

fn closed_fixtures() -> Vec<GluingData> {
    ["m004", "torus_link", "cPcbbbdei"].iter().map(|id| fixtures::load(id).unwrap()).collect()
}

#[test]
fn fixtures_load_with_expected_shapes() {
    let m = fixtures::load("m004").unwrap();
    assert_eq!((m.n, m.r()), (2, 1));
    let t = fixtures::load("torus_link").unwrap();
    assert_eq!((t.n, t.r()), (4, 2));
    let s = fixtures::load("standard_cusp").unwrap();
    assert_eq!((s.n, s.r()), (2, 1));
    assert!(s.is_relative());
    for id in fixtures::builtin_names() {
        fixtures::load(id).unwrap();
    }
    assert!(matches!(fixtures::load("nope"), Err(Error::UnknownFixture(_))));
}

#[test]
fn neumann_zagier_relations() {
    for g in closed_fixtures() {
        let mut rows: Vec<Vec<i64>> = g.edges.clone();
        for c in &g.cusps {
            rows.push(c.meridian.clone());
            rows.push(c.longitude.clone());
        }
        let ne = g.edges.len();
        for i in 0..rows.len() {
            for j in 0..rows.len() {
                let w = omega(&rows[i], &rows[j]);
                let (a, b) = (i.checked_sub(ne), j.checked_sub(ne));
                let expected = match (a, b) {
                    (Some(a), Some(b)) if a / 2 == b / 2 && a % 2 == 0 && b % 2 == 1 => -2,
                    (Some(a), Some(b)) if a / 2 == b / 2 && a % 2 == 1 && b % 2 == 0 => 2,
                    _ => 0,
                };
                assert_eq!(w, expected, "{}: ω({i},{j})", g.name);
            }
        }
    }
}

#[test]
fn edges_and_tetrahedra_have_zero_boundary() {
    for g in closed_fixtures() {
        for e in &g.edges {
            assert!(g.boundary(e).is_zero(), "{}", g.name);
        }
        for j in 0..g.n {
            assert!(g.boundary(&tetrahedral_solution(g.n, j)).is_zero(), "{}", g.name);
        }
    }
}

#[test]
fn peripheral_rows_have_doubled_boundary() {
    let g = fixtures::load("m004").unwrap();
    assert_eq!(g.boundary(&g.cusps[0].meridian), BoundaryClass(vec![(2, 0)]));
    assert_eq!(g.boundary(&g.cusps[0].longitude), BoundaryClass(vec![(0, 2)]));
    assert_eq!(g.boundary(&[0, 0, 2, 0, 1, 0]), BoundaryClass(vec![(4, 1)]));
}

#[test]
fn euler_characteristics_of_standard_solutions() {
    for g in closed_fixtures() {
        for j in 0..g.n {
            assert_eq!(g.euler_char(&tetrahedral_solution(g.n, j)).unwrap(), Q::from_integer(-1));
        }
        for e in &g.edges {
            assert_eq!(g.euler_char(e).unwrap(), Q::from_integer(-2), "{}", g.name);
        }
    }
}

#[test]
fn euler_characteristic_is_linear() {
    let g = fixtures::load("m004").unwrap();
    let a = [0, 1, 2, 0, 1, 2];
    let b = [0, 0, 2, 0, 1, 0];
    for (x, y) in [(1, 1), (2, 3), (-1, 4)] {
        let s: Vec<i64> = a.iter().zip(&b).map(|(p, q)| x * p + y * q).collect();
        let lhs = g.euler_char(&s).unwrap();
        let rhs = g.euler_char(&a).unwrap() * Q::from_integer(x as i128) + g.euler_char(&b).unwrap() * Q::from_integer(y as i128);
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn decompose_then_recombine_is_the_identity() {
    for g in closed_fixtures() {
        let mut samples: Vec<Vec<i64>> = g.edges.clone();
        samples.push(tetrahedral_solution(g.n, 0));
        for c in &g.cusps {
            let s: Vec<i64> = c.meridian.iter().zip(&c.longitude).map(|(a, b)| 3 * a - b).collect();
            samples.push(s);
        }
        for s in samples {
            let d = g.decompose(&s).unwrap();
            let back: Vec<Q> = s.iter().map(|&x| Q::from_integer(x as i128)).collect();
            assert_eq!(g.recombine(&d), back, "{}", g.name);
        }
    }
}

#[test]
fn m004_vertex_is_an_edge_multiple() {
    let g = fixtures::load("m004").unwrap();
    let d = g.decompose(&[0, 1, 2, 0, 1, 2]).unwrap();
    assert!(d.peripheral_coeffs.iter().all(|(a, b)| *a == Q::from_integer(0) && *b == Q::from_integer(0)));
    for c in d.edge_coeffs.iter().chain(&d.tet_coeffs) {
        assert!(c.is_integer());
    }
}

#[test]
fn double_arc_examples() {
    assert_eq!(double_arc(&[1, 0, 0, 0, 3, 0]), 0);
    assert_eq!(double_arc(&[1, 1, 1]), 3);
    assert_eq!(double_arc(&[2, 1, 0, 0, 0, 0]), 2);
}

#[test]
fn standard_cusp_detection() {
    let s = fixtures::load("standard_cusp").unwrap();
    let m = s.detect_standard_cusp(0).unwrap();
    assert_eq!((m.tets, m.rotations, m.sign), ((0, 1), (0, 0), 1));
    assert_eq!(m.internal_edge, 0);
    assert!(fixtures::load("m004").unwrap().detect_standard_cusp(0).is_none());
    let t = fixtures::load("torus_link").unwrap();
    assert!(t.detect_standard_cusp(1).is_some());
    assert_eq!(t.standard_cusp, Some(1));
}

#[test]
fn matrix_text_format() {
    let text = "# m004\n2 1\n2 1 0 2 1 0\n0 1 2 0 1 2\n0 0 1 -1 0 0\n0 0 0 2 0 -2\n";
    let g = parse_gluing(text).unwrap();
    let f = fixtures::load("m004").unwrap();
    assert_eq!(g.edges, f.edges);
    assert_eq!(g.cusps, f.cusps);
    assert!(g.omitted_auto);
    assert_eq!(g.omitted_edges.len(), 1);
}

#[test]
fn json_roundtrip() {
    let g = fixtures::load("torus_link").unwrap();
    let text = serde_json::to_string(&g.to_json_value()).unwrap();
    let h = parse_gluing(&text).unwrap();
    assert_eq!(h.edges, g.edges);
    assert_eq!(h.cusps, g.cusps);
    assert_eq!(h.omitted_edges, g.omitted_edges);
}

#[test]
fn parse_errors_name_the_position() {
    match parse_gluing("2 1\n2 1 0 2 1 0\n0 1 x 0 1 2\n0 0 1 -1 0 0\n0 0 0 2 0 -2\n") {
        Err(Error::Parse { row, col, .. }) => assert_eq!((row, col), (3, 3)),
        other => panic!("{other:?}"),
    }
    match parse_gluing("2 1\n2 1 0 2 1\n0 1 2 0 1 2\n0 0 1 -1 0 0\n0 0 0 2 0 -2\n") {
        Err(Error::Parse { row, .. }) => assert_eq!(row, 2),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_gluing("{\"name\": 3"), Err(Error::Parse { .. })));
    assert!(matches!(parse_gluing(""), Err(Error::Parse { .. })));
}

#[test]
fn validation_errors_name_the_invariant() {
    // Column sums must be two.
    let bad = "2 1\n2 1 0 2 1 0\n0 1 2 0 1 1\n0 0 1 -1 0 0\n0 0 0 2 0 -2\n";
    match parse_gluing(bad) {
        Err(Error::Validation(msg)) => assert!(msg.contains("column"), "{msg}"),
        other => panic!("{other:?}"),
    }
    // A longitude with the wrong pairing.
    let bad = "2 1\n2 1 0 2 1 0\n0 1 2 0 1 2\n0 0 1 -1 0 0\n0 0 0 1 0 -1\n";
    match parse_gluing(bad) {
        Err(Error::Validation(msg)) => assert!(msg.contains("Neumann-Zagier"), "{msg}"),
        other => panic!("{other:?}"),
    }
    // Wrong number of edge rows.
    let g = fixtures::load("m004").unwrap();
    let err = GluingData::new("x", 2, vec![g.edges[0].clone()], g.cusps.clone(), None, Vec::new(), None);
    assert!(matches!(err, Err(Error::Validation(_))));
}
