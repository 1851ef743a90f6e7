//! Acceptance gate: one pass/fail line per criterion, then a single assert.

mod common;

use std::time::{Duration, Instant};

use common::{half_terms, integral, oracle_min_exp};
use tetrindex::dehnfill::{gy_filled_index, rel_index_exposed, FillRequest};
use tetrindex::fixtures;
use tetrindex::identities::{run_suite, ParamBox, Suite};
use tetrindex::index::{index_closed, index_edge_weight, index_with_boundary};
use tetrindex::lst::{rel_cusp_index, rel_gy_cusp, rel_lst_index_slope, Slope};
use tetrindex::qseries::{min_degree_tet, tet_index, HalfExp, TruncatedQSeries};
use tetrindex::triangulation::{BoundaryClass, GluingData};

type Outcome = Result<String, String>;

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

/// Coefficient-exact agreement through `cap`, with both sides known that far.
fn agree(what: &str, actual: &TruncatedQSeries, expected: &TruncatedQSeries, cap: HalfExp) -> Result<(), String> {
    if actual.cap() < cap {
        return Err(format!("{what}: only known through half-exponent {}", actual.cap()));
    }
    match actual.truncate(cap).first_difference(&expected.truncate(cap)) {
        None => Ok(()),
        Some((e, l, r)) => Err(format!("{what}: q^({e}/2) coefficient {l}, expected {r}")),
    }
}

fn limit(d: Duration, max: Duration, what: &str) -> Result<(), String> {
    if d < max {
        Ok(())
    } else {
        Err(format!("{what} took {d:.2?}, limit {max:?}"))
    }
}

fn load(id: &str) -> Result<GluingData, String> {
    fixtures::load(id).map_err(err)
}

fn fill(g: &GluingData, cusp: usize, a: i64, b: i64, others: Option<BoundaryClass>, cap: HalfExp) -> Result<TruncatedQSeries, String> {
    let mut req = FillRequest::new(g, cusp, Slope::new(a, b).map_err(err)?, cap);
    if let Some(o) = others {
        req.others = o;
    }
    gy_filled_index(g, &req).map_err(|e| format!("filling ({a},{b}): {e:?}"))
}

fn m004_closed_paper() -> TruncatedQSeries {
    integral(&[1, -2, -3, 2, 8, 18, 18, 14, -12, -52, -106], 20)
}

fn criterion_1() -> Outcome {
    let g = load("m004")?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(err)?;
    let start = Instant::now();
    let s = pool.install(|| index_closed(&g, 20)).map_err(err)?;
    let elapsed = start.elapsed();
    agree("I⁰", &s, &m004_closed_paper(), 20)?;
    limit(elapsed, Duration::from_secs(10), "single-threaded m004 closed index")?;
    Ok(format!("{s}; single-threaded {elapsed:.2?}"))
}

fn criterion_2() -> Outcome {
    let g = load("m004")?;
    let s = index_with_boundary(&g, &BoundaryClass(vec![(4, 1)]), 19).map_err(err)?;
    let expected = half_terms(&[(1, -1), (5, 1), (7, 4), (9, 7), (11, 7), (13, 3), (15, -12), (17, -31), (19, -62)], 19);
    agree("I^(4,1)", &s, &expected, 19)?;
    Ok(s.to_string())
}

fn criterion_3() -> Outcome {
    let g = load("m004")?;
    let max = Duration::from_secs(60);
    let mut slowest = Duration::ZERO;
    let mut timed = |a: i64, b: i64, cap: HalfExp| -> Result<TruncatedQSeries, String> {
        let start = Instant::now();
        let s = fill(&g, 0, a, b, None, cap)?;
        let d = start.elapsed();
        limit(d, max, &format!("filling ({a},{b})"))?;
        slowest = slowest.max(d);
        Ok(s)
    };
    let longitude = timed(0, 1, 41)?;
    if longitude != TruncatedQSeries::one(41) {
        return Err(format!("(0,1) filling is {longitude}, expected 1 + O(q^(21/2)) tail-free"));
    }
    agree("(1,0)", &timed(1, 0, 20)?, &TruncatedQSeries::zero(20), 20)?;
    for a in 1..=3 {
        agree(&format!("({a},1)"), &timed(a, 1, 20)?, &TruncatedQSeries::one(20), 20)?;
    }
    let rows: [(i64, [i64; 11]); 4] = [
        (5, [1, -1, -2, -1, -1, 1, 2, 7, 8, 12, 14]),
        (7, [1, 0, -1, 0, 1, 3, 3, 6, 4, 2, -4]),
        (8, [1, 0, -1, 0, 2, 5, 6, 8, 4, -2, -14]),
        (9, [1, 0, -1, 0, 0, 2, 2, 4, 1, -1, -6]),
    ];
    for (a, coeffs) in rows {
        agree(&format!("({a},1)"), &timed(a, 1, 20)?, &integral(&coeffs, 20), 20)?;
    }
    Ok(format!("9 fillings reproduced; slowest {slowest:.2?}"))
}

fn criterion_4() -> Outcome {
    let g = load("torus_link")?;
    let cap = 25;
    let mut count = 0;
    for x1 in -3..=3 {
        for y1 in -3..=3 {
            for x2 in -3..=3 {
                for y2 in -3..=3 {
                    let gamma = BoundaryClass(vec![(2 * x1, y1), (2 * x2, y2)]);
                    let s = index_with_boundary(&g, &gamma, cap).map_err(err)?;
                    let expected = if x1 == y1 && x2 == y2 { TruncatedQSeries::one(cap) } else { TruncatedQSeries::zero(cap) };
                    agree(&format!("I^{gamma}"), &s, &expected, cap)?;
                    count += 1;
                }
            }
        }
    }
    let cap = 21;
    let mut fills = 0;
    for n in 0..=4 {
        for x2 in -2..=2 {
            for y2 in -2..=2 {
                let others = BoundaryClass(vec![(2 * x2, y2), (0, 0)]);
                let s = fill(&g, 1, 1, n, Some(others), cap)?;
                let expected = if n >= 2 && x2 == y2 { TruncatedQSeries::one(cap) } else { TruncatedQSeries::zero(cap) };
                agree(&format!("slope (1,{n}) with ({x2},{y2})"), &s, &expected, cap)?;
                fills += 1;
            }
        }
    }
    Ok(format!("{count} boundary classes and {fills} fillings"))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut total = 0;
    let mut summary = Vec::new();
    for suite in Suite::BLOCKING {
        let reports = run_suite(suite, None, &ParamBox::default()).map_err(err)?;
        if let Some(bad) = reports.iter().find(|r| !r.passed()) {
            return Err(format!("{}: {bad}", suite.name()));
        }
        total += reports.len();
        summary.push(format!("{} {}", suite.name(), reports.len()));
    }
    let elapsed = start.elapsed();
    limit(elapsed, Duration::from_secs(300), "identity suites")?;
    Ok(format!("{total} points ({}) in {elapsed:.2?}", summary.join(", ")))
}

fn criterion_6() -> Outcome {
    let cap = 12;
    let boxed: Vec<[i64; 3]> =
        (-2..=2).flat_map(|a| (-2..=2).flat_map(move |b| (-2..=2).map(move |c| [a, b, c]))).collect();
    let mut slopes = 0;
    for p in -7i64..=7 {
        for q in 0i64..=7 {
            if p.abs() + q > 7 || num_integer::gcd(p, q) != 1 || (q == 0 && p != 1) {
                continue;
            }
            let s = Slope::new(p, q).map_err(err)?;
            for &b in &boxed {
                let lst = rel_lst_index_slope(s, b, cap).map_err(err)?;
                let gy = rel_gy_cusp(s, b, cap).map_err(err)?;
                agree(&format!("slope {s} at {b:?}"), &lst, &gy, cap)?;
            }
            slopes += 1;
        }
    }
    let lst112 = load("lst112")?;
    let lst011 = load("lst011")?;
    for &b in &boxed {
        let expected =
            if b[0] == b[1] { TruncatedQSeries::signed_half_power(-b[0]).truncate(cap) } else { TruncatedQSeries::zero(cap) };
        let got = rel_index_exposed(&lst112, &b, &BoundaryClass::zero(0), cap).map_err(err)?;
        agree(&format!("LST(1,1,2) at {b:?}"), &got, &expected, cap)?;
        let got = rel_index_exposed(&lst011, &b, &BoundaryClass::zero(0), cap).map_err(err)?;
        agree(&format!("LST(0,1,1) at {b:?}"), &got, &TruncatedQSeries::zero(cap), cap)?;
    }
    Ok(format!("{slopes} slopes x {} triples; both base cases", boxed.len()))
}

fn criterion_7() -> Outcome {
    let mut classes = 0;
    for x in (-12i64..=12).step_by(2) {
        for y in (-12i64..=12).step_by(2) {
            let h = x.abs().max(y.abs()).max((x - y).abs());
            if h > 12 {
                continue;
            }
            let law = h * h / 4 + h / 2;
            let s = rel_cusp_index(x, y, [0, 0, 0], law + 2);
            if s.min_exp() != Some(law) {
                return Err(format!("({x},{y}): minimal exponent {:?}, law {law}", s.min_exp()));
            }
            classes += 1;
        }
    }
    for m in -8..=8 {
        for e in -8..=8 {
            let d = min_degree_tet(m, e);
            let brute = oracle_min_exp(m, e, d + 4);
            if brute != Some(d) || tet_index(m, e, d + 2).min_exp() != Some(d) {
                return Err(format!("I({m},{e}): min_degree_tet {d}, defining series {brute:?}"));
            }
        }
    }
    Ok(format!("{classes} boundary classes; 289 tetrahedral indices"))
}

/// `(-1)^x q^(|x| |x + 2y + 1| / 2) / (1 - q^|x|)` through `cap`.
fn toroidal_closed_form(x: i64, y: i64, cap: HalfExp) -> TruncatedQSeries {
    let sign = if x % 2 == 0 { 1 } else { -1 };
    let start = x.abs() * (x + 2 * y + 1).abs();
    let terms: Vec<(i64, i64)> = (0..).map(|j| start + 2 * j * x.abs()).take_while(|&e| e <= cap).map(|e| (e, sign)).collect();
    half_terms(&terms, cap)
}

fn criterion_8() -> Outcome {
    let g = load("m004")?;
    for gamma in [(0, 0), (2, 0), (0, 1)] {
        let gamma = BoundaryClass(vec![gamma]);
        let ew = index_edge_weight(&g, &gamma, 20, 6).map_err(err)?;
        let surface = index_with_boundary(&g, &gamma, 20).map_err(err)?;
        agree(&format!("m004 {gamma} edge-weight vs surface"), &ew.series, &surface, 20)?;
    }
    let t = load("cPcbbbdei")?;
    for x in 1..=3 {
        for y in 0..=1 {
            let gamma = BoundaryClass(vec![(2 * x, 2 * y)]);
            let ew = index_edge_weight(&t, &gamma, 24, 16).map_err(err)?;
            agree(&format!("cPcbbbdei (x,y)=({x},{y})"), &ew.series, &toroidal_closed_form(x, y, 24), 24)?;
        }
    }
    Ok("3 m004 classes at radius 6; 6 toroidal classes at radius 16".into())
}

fn criterion_9() -> Outcome {
    let g = load("m004")?;
    let rows: [(i64, [i64; 11]); 3] = [
        (7, [1, 0, -1, 0, 1, 3, 3, 6, 4, 2, -4]),
        (8, [1, 0, -1, 0, 2, 5, 6, 8, 4, -2, -14]),
        (9, [1, 0, -1, 0, 0, 2, 2, 4, 1, -1, -6]),
    ];
    for (n, coeffs) in rows {
        agree(&format!("({n},1)"), &fill(&g, 0, n, 1, None, 20)?, &integral(&coeffs, 20), 20)?;
    }
    let ten = half_terms(
        &[(0, 1), (4, -1), (5, 1), (7, 1), (9, 1), (10, 2), (11, 2), (12, 2), (13, 1), (14, 4), (15, -1), (16, 2), (17, -5), (19, -9), (20, -4)],
        20,
    );
    agree("(10,1)", &fill(&g, 0, 10, 1, None, 20)?, &ten, 20)?;
    let displayed = integral(&[1, 0, -1, 0, 0, 2, 2, 4, 2, 0, -4], 20);
    let closed = index_closed(&g, 20).map_err(err)?;
    let meridian = index_with_boundary(&g, &BoundaryClass(vec![(2, 0)]), 20).map_err(err)?;
    agree("I⁰ - I^(2μ)", &(&closed - &meridian), &displayed, 20)?;
    let mut stable_from = None;
    for n in (11..=24).rev() {
        let s = fill(&g, 0, n, 1, None, 20)?;
        if s.truncate(20).first_difference(&displayed).is_some() {
            break;
        }
        stable_from = Some(n);
    }
    match stable_from {
        Some(n) if n <= 20 => Ok(format!("rows 7..10 reproduced; (n,1) equals the limit series for n = {n}..24")),
        _ => Err(format!("no stabilization to the limit series by n = 20 (stable from {stable_from:?})")),
    }
}

#[test]
fn acceptance() {
    let criteria: [(u32, &str, fn() -> Outcome); 9] = [
        (1, "m004 closed index", criterion_1),
        (2, "m004 boundary (4,1)", criterion_2),
        (3, "m004 Dehn fillings", criterion_3),
        (4, "torus link deltas", criterion_4),
        (5, "identity suites", criterion_5),
        (6, "relative machinery", criterion_6),
        (7, "degree laws", criterion_7),
        (8, "dual-path oracle", criterion_8),
        (9, "large fillings", criterion_9),
    ];
    let mut failed = Vec::new();
    for (n, name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        match &outcome {
            Ok(detail) => println!("criterion {n} PASS {name} ({elapsed:.2?}): {detail}"),
            Err(detail) => {
                println!("criterion {n} FAIL {name} ({elapsed:.2?}): {detail}");
                failed.push(n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
