mod common;

use std::collections::BTreeMap;

use num_bigint::BigInt;

use common::{assert_through, half_terms, integral, mul, oracle_tet, to_series, Poly};
use tetrindex::dehnfill::{glue_indices, gy_filled_index, gy_filled_report, rel_index_exposed, FillRequest, RelTable};
use tetrindex::enumeration::{enumerate, Backend, BoundaryConstraint, Query};
use tetrindex::fixtures;
use tetrindex::index::{index_closed, index_with_boundary, sum_contributions};
use tetrindex::lst::{lst_degree_floor, min_degree_rel_cusp, rel_cusp_index, rel_gy_cusp, rel_lst_index, rel_lst_index_slope, FareyWord, Fold, EdgeTriple, Slope};
use tetrindex::qseries::{tet_index, HalfExp, TruncatedQSeries};
use tetrindex::triangulation::{BoundaryClass, GluingData};
use tetrindex::Error;

fn fill(g: &GluingData, a: i64, b: i64, cap: HalfExp) -> Result<TruncatedQSeries, Error> {
    gy_filled_index(g, &FillRequest::new(g, 0, Slope::new(a, b).unwrap(), cap))
}

#[test]
fn m004_small_fillings_are_trivial_or_zero() {
    let g = fixtures::load("m004").unwrap();
    assert!(fill(&g, 1, 0, 20).unwrap().is_zero());
    for a in 1..=3 {
        assert_eq!(fill(&g, a, 1, 20).unwrap(), TruncatedQSeries::one(20), "({a},1)");
    }
}

#[test]
fn m004_longitudinal_filling_is_one() {
    let g = fixtures::load("m004").unwrap();
    assert_eq!(fill(&g, 0, 1, 40).unwrap(), TruncatedQSeries::one(40));
}

#[test]
fn m004_fillings_match_the_published_table() {
    let g = fixtures::load("m004").unwrap();
    let rows: [(i64, Vec<i64>); 4] = [
        (5, vec![1, -1, -2, -1, -1, 1, 2, 7, 8, 12, 14]),
        (7, vec![1, 0, -1, 0, 1, 3, 3, 6, 4, 2, -4]),
        (8, vec![1, 0, -1, 0, 2, 5, 6, 8, 4, -2, -14]),
        (9, vec![1, 0, -1, 0, 0, 2, 2, 4, 1, -1, -6]),
    ];
    for (a, coeffs) in rows {
        assert_through(&fill(&g, a, 1, 20).unwrap(), &integral(&coeffs, 20), 20);
    }
    let ten = half_terms(
        &[
            (0, 1),
            (4, -1),
            (5, 1),
            (7, 1),
            (9, 1),
            (10, 2),
            (11, 2),
            (12, 2),
            (13, 1),
            (14, 4),
            (15, -1),
            (16, 2),
            (17, -5),
            (19, -9),
            (20, -4),
        ],
        20,
    );
    assert_through(&fill(&g, 10, 1, 20).unwrap(), &ten, 20);
}

#[test]
fn m004_one_over_n_fillings_match_the_published_table() {
    let g = fixtures::load("m004").unwrap();
    let rows: [(i64, Vec<i64>); 3] = [
        (2, vec![1, -2, -3, 0, 3, 10, 14, 22, 20, 14, -2]),
        (3, vec![1, -2, -3, 1, 6, 13, 16, 17, 4, -20, -55]),
        (4, vec![1, -2, -3, 1, 6, 13, 16, 17, 4, -20, -54]),
    ];
    for (n, coeffs) in rows {
        assert_through(&fill(&g, 1, n, 20).unwrap(), &integral(&coeffs, 20), 20);
    }
}

#[test]
fn large_fillings_approach_the_limit_series() {
    let g = fixtures::load("m004").unwrap();
    let closed = index_closed(&g, 20).unwrap();
    let meridian = &closed - &index_with_boundary(&g, &BoundaryClass(vec![(2, 0)]), 20).unwrap();
    assert_through(&meridian, &integral(&[1, 0, -1, 0, 0, 2, 2, 4, 2, 0, -4], 20), 20);
    assert_through(&fill(&g, 20, 1, 20).unwrap(), &meridian, 20);
    let longitude = &closed - &index_with_boundary(&g, &BoundaryClass(vec![(0, 2)]), 20).unwrap();
    assert_through(&fill(&g, 1, 5, 20).unwrap(), &longitude, 20);
}

#[test]
fn m004_four_one_diverges() {
    let g = fixtures::load("m004").unwrap();
    assert!(matches!(fill(&g, 4, 1, 20), Err(Error::GyDivergent { .. })));
    let req = FillRequest::new(&g, 0, Slope::new(4, 1).unwrap(), 20);
    let r = gy_filled_report(&g, &req, Backend::Cone, true).unwrap();
    assert!(!r.certified);
    assert!(!r.divergent_witnesses.is_empty());
    for w in &r.divergent_witnesses {
        assert!(g.is_q_normal(w));
    }
}

#[test]
fn toroidal_fixture_fillings_diverge() {
    let g = fixtures::load("cPcbbbdei").unwrap();
    for (a, b) in [(2, 1), (1, 2)] {
        match fill(&g, a, b, 12) {
            Err(Error::GyDivergent { witness }) => assert_eq!(witness, vec![0, 0, 1, 0, 0, 1]),
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn torus_link_fillings_are_deltas() {
    let g = fixtures::load("torus_link").unwrap();
    let cap = 12;
    for n in 0..=3 {
        for x2 in -1..=1 {
            for y2 in -1..=1 {
                let mut req = FillRequest::new(&g, 1, Slope::new(1, n).unwrap(), cap);
                req.others = BoundaryClass(vec![(2 * x2, y2), (0, 0)]);
                let s = gy_filled_index(&g, &req).unwrap();
                let expected = if n >= 2 && x2 == y2 { TruncatedQSeries::one(cap) } else { TruncatedQSeries::zero(cap) };
                assert_eq!(s, expected, "n={n} ({x2},{y2})");
            }
        }
    }
}

/// `Σ_{α·γ = ±4}` for the slope `5/1` on m004 is nonzero, so a kernel that
/// admitted those classes would change the filled index.
#[test]
fn intersection_four_terms_are_not_negligible() {
    let g = fixtures::load("m004").unwrap();
    let cap = 16;
    let mut total = TruncatedQSeries::zero(cap);
    for value in [4, -4] {
        let c = BoundaryConstraint::Intersection { cusp: 0, alpha: (5, 1), value, others: BoundaryClass::zero(1) };
        let mut q = Query::new(&g, &c).unwrap();
        q.filling = true;
        let e = enumerate(&g, &q, cap, Backend::Cone).unwrap();
        total = &total + &sum_contributions(&e.classes, cap, |_| vec![(1, 0)]);
    }
    assert!(!total.is_zero());
}

#[test]
fn standard_cusp_relative_index() {
    let g = fixtures::load("standard_cusp").unwrap();
    let omega = BoundaryClass::zero(1);
    let cap = 14;
    let i00 = tet_index(0, 0, cap);
    assert_through(&rel_index_exposed(&g, &[0, 0, 0], &omega, cap).unwrap(), &(&i00 * &i00), cap);
    assert!(rel_index_exposed(&g, &[1, 0, 0], &omega, cap).unwrap().is_zero());
    assert!(matches!(rel_index_exposed(&g, &[0, 0], &omega, cap), Err(Error::InvalidArgument(_))));
    let m004 = fixtures::load("m004").unwrap();
    assert!(matches!(rel_index_exposed(&m004, &[0, 0, 0], &omega, cap), Err(Error::InvalidArgument(_))));
}

const WINDOW: i64 = 14;

fn window() -> impl Iterator<Item = EdgeTriple> {
    (-WINDOW..=WINDOW).flat_map(|b1| (-WINDOW..=WINDOW).map(move |b2| [b1, b2, 0]))
}

/// Standard cusp table with boundary zero, each entry computed to the cap
/// needed against a partner with floor `partner`.
fn cusp_table<'a>(cap: HalfExp, partner: impl Fn(EdgeTriple) -> Option<HalfExp>) -> RelTable<'a> {
    let mut entries = BTreeMap::new();
    for b in window() {
        let (Some(own), Some(other)) = (min_degree_rel_cusp(0, 0, b), partner(b)) else { continue };
        let need = cap - b[0] - b[1] - other;
        if own <= need {
            entries.insert(b, rel_cusp_index(0, 0, b, need));
        }
    }
    RelTable { entries, floor: Box::new(|b| min_degree_rel_cusp(0, 0, b)) }
}

fn solid_torus_table<'a>(cap: HalfExp, eval: impl Fn(EdgeTriple, HalfExp) -> TruncatedQSeries) -> RelTable<'a> {
    let mut entries = BTreeMap::new();
    for b in window() {
        let Some(other) = min_degree_rel_cusp(0, 0, b) else { continue };
        let need = cap - b[0] - b[1] - other;
        if lst_degree_floor(b) <= need {
            entries.insert(b, eval(b, need));
        }
    }
    RelTable { entries, floor: Box::new(|b| Some(lst_degree_floor(b))) }
}

/// `Σ_c q^c I(-c, c)²`.
fn glued_oracle(cap: HalfExp) -> TruncatedQSeries {
    let mut acc = Poly::new();
    for c in -10i64..=10 {
        let t = oracle_tet(-c, c, cap + 2 * c.abs());
        for (e, v) in mul(&t, &t, cap + 2 * c.abs()) {
            if e + 2 * c <= cap {
                *acc.entry(e + 2 * c).or_insert(0) += v;
            }
        }
    }
    acc.retain(|_, v| *v != 0);
    to_series(&acc, cap)
}

/// The glued four-tetrahedron solid torus is not 1-efficient: every triple
/// `(-2k, -2k, 0)` contributes exactly `1` to the constant term, so the
/// constant grows with the table window while higher terms stabilize.
#[test]
fn gluing_the_standard_cusp_to_a_solid_torus() {
    let cap = 12;
    let empty = FareyWord { fold: Fold::Case1, letters: vec![] };
    for k in 0..=6 {
        let b = [-2 * k, -2 * k, 0];
        let term = (&rel_cusp_index(0, 0, b, 2 * k + 4) * &rel_lst_index(&empty, b, 2 * k + 4).unwrap()).mul_signed_half_power(-4 * k);
        assert_eq!(term.min_exp(), Some(0));
        assert_eq!(term.coeff(0), BigInt::from(1));
    }
    let lst = solid_torus_table(cap, |b, c| rel_lst_index(&empty, b, c).unwrap());
    let cusp = cusp_table(cap, |b| Some(lst_degree_floor(b)));
    let glued = glue_indices(&cusp, &lst, cap).unwrap();
    assert_eq!(glued.coeff(0), BigInt::from(WINDOW / 2 + 1));
    let oracle = glued_oracle(cap);
    let without_constant = |s: &TruncatedQSeries| s - &TruncatedQSeries::monomial(s.coeff(0), 0, cap);
    assert_through(&without_constant(&glued), &without_constant(&oracle), cap);
}

#[test]
fn gluing_accepts_either_solid_torus_formula() {
    let cap = 10;
    let cusp = cusp_table(cap, |b| Some(lst_degree_floor(b)));
    for (p, q) in [(2, 3), (-1, 2), (3, 1)] {
        let s = Slope::new(p, q).unwrap();
        let lst = solid_torus_table(cap, |b, c| rel_lst_index_slope(s, b, c).unwrap());
        let gy = solid_torus_table(cap, |b, c| rel_gy_cusp(s, b, c).unwrap());
        assert_eq!(glue_indices(&cusp, &lst, cap).unwrap(), glue_indices(&cusp, &gy, cap).unwrap(), "{p}/{q}");
    }
}

#[test]
fn gluing_a_zero_table_gives_zero() {
    let cap = 10;
    let cusp = cusp_table(cap, |b| Some(lst_degree_floor(b)));
    let zero = solid_torus_table(cap, |_, c| TruncatedQSeries::zero(c));
    assert!(glue_indices(&cusp, &zero, cap).unwrap().is_zero());
}

#[test]
fn gluing_reports_missing_entries() {
    let cap = 10;
    let cusp = cusp_table(cap, |b| Some(lst_degree_floor(b)));
    let empty = RelTable { entries: BTreeMap::new(), floor: Box::new(|b| Some(lst_degree_floor(b))) };
    assert!(matches!(glue_indices(&cusp, &empty, cap), Err(Error::UncoveredTable(_))));
}
