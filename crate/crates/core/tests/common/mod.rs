//! Test-side oracles and helpers shared by the integration tests.
//!
//! The oracles here are written from the defining formulas with plain `i128`
//! power series and share no code with the library.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use tetrindex::qseries::{HalfExp, TruncatedQSeries};

/// A Laurent series in `q^(1/2)`: half exponent to coefficient.
pub type Poly = BTreeMap<i64, i128>;

fn add_into(acc: &mut Poly, p: &Poly, scale: i128, shift: i64, cap: i64) {
    for (&e, &c) in p {
        if e + shift <= cap {
            *acc.entry(e + shift).or_insert(0) += scale * c;
        }
    }
}

/// Product truncated at `cap`.
pub fn mul(a: &Poly, b: &Poly, cap: i64) -> Poly {
    let mut out = Poly::new();
    for (&ea, &ca) in a {
        for (&eb, &cb) in b {
            if ea + eb <= cap {
                *out.entry(ea + eb).or_insert(0) += ca * cb;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// `1/(q;q)_n` through half exponent `cap`.
pub fn inv_qpoch(n: i64, cap: i64) -> Poly {
    let mut out: Poly = [(0, 1)].into();
    for k in 1..=n {
        // Multiply by 1/(1 - q^k) = Σ q^(jk).
        let step = 2 * k;
        let mut next = Poly::new();
        for (&e, &c) in &out {
            let mut x = e;
            while x <= cap {
                *next.entry(x).or_insert(0) += c;
                x += step;
            }
        }
        out = next;
    }
    out
}

/// `I_Δ(m, e)` from its defining series
/// `Σ_{n ≥ max(0,-e)} (-1)^n q^(n(n+1)/2 - (n + e/2) m) / ((q)_n (q)_{n+e})`.
pub fn oracle_tet(m: i64, e: i64, cap: i64) -> Poly {
    let mut acc = Poly::new();
    let start = 0.max(-e);
    for n in start..start + 400 {
        let base = n * (n + 1) - (2 * n + e) * m;
        if base > cap {
            if n > m.abs() + e.abs() + 2 {
                break;
            }
            continue;
        }
        let rest = cap - base;
        let p = mul(&inv_qpoch(n, rest), &inv_qpoch(n + e, rest), rest);
        let sign = if n % 2 == 0 { 1 } else { -1 };
        add_into(&mut acc, &p, sign, base, cap);
    }
    acc.retain(|_, c| *c != 0);
    acc
}

/// Minimal half exponent of the oracle series, when it is nonzero through `cap`.
pub fn oracle_min_exp(m: i64, e: i64, cap: i64) -> Option<i64> {
    oracle_tet(m, e, cap).keys().next().copied()
}

/// Converts an oracle series to the library type.
pub fn to_series(p: &Poly, cap: HalfExp) -> TruncatedQSeries {
    TruncatedQSeries::from_terms(p.iter().map(|(&e, &c)| (e, BigInt::from(c))), cap)
}

/// Series from coefficients of `q^0, q^1, …` (integral exponents).
pub fn integral(coeffs: &[i64], cap: HalfExp) -> TruncatedQSeries {
    TruncatedQSeries::from_terms(coeffs.iter().enumerate().map(|(k, &c)| (2 * k as i64, BigInt::from(c))), cap)
}

/// Series from `(half exponent, coefficient)` pairs.
pub fn half_terms(terms: &[(i64, i64)], cap: HalfExp) -> TruncatedQSeries {
    TruncatedQSeries::from_terms(terms.iter().map(|&(e, c)| (e, BigInt::from(c))), cap)
}

/// Asserts equality of every coefficient through `cap`.
#[track_caller]
pub fn assert_through(actual: &TruncatedQSeries, expected: &TruncatedQSeries, cap: HalfExp) {
    let a = actual.truncate(cap);
    let b = expected.truncate(cap);
    assert!(
        a.agrees_with(&b) && a.terms().count() == b.terms().count() && a.terms().zip(b.terms()).all(|(x, y)| x == y),
        "series differ through q^({cap}/2):\n  actual   {a}\n  expected {b}"
    );
}

/// `true` when every coefficient through `cap` agrees.
pub fn equal_through(a: &TruncatedQSeries, b: &TruncatedQSeries, cap: HalfExp) -> bool {
    let a = a.truncate(cap);
    let b = b.truncate(cap);
    a.terms().eq(b.terms())
}
