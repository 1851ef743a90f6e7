//! Exact truncated Laurent series in `q^(1/2)` and the tetrahedral index.
//!
//! A [`TruncatedQSeries`] stores integer coefficients indexed by half-unit
//! exponents together with an inclusive cap: every coefficient at an
//! exponent `<= cap` is exact, and nothing is claimed above it. Arithmetic
//! propagates caps so that reported coefficients stay provably exact.
//!
//! The tetrahedral index `I(m, e)` is evaluated from its defining
//! `n`-series and memoized per `(m, e)` at the largest cap requested so far.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent measured in units of `q^(1/2)`.
pub type HalfExp = i64;

/// Cap used for series that are exact in every degree (Laurent polynomials).
pub const EXACT_CAP: HalfExp = i64::MAX / 8;

fn clamp_cap(c: i128) -> HalfExp {
    c.clamp(-(EXACT_CAP as i128), EXACT_CAP as i128) as HalfExp
}

/// Laurent series in `q^(1/2)` with exact integer coefficients, known up to
/// and including the half-exponent `cap`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedQSeries {
    /// Exponent of `coeffs[0]`.
    lo: HalfExp,
    /// Dense coefficients; the first and last entries are nonzero.
    coeffs: Vec<BigInt>,
    cap: HalfExp,
}

impl TruncatedQSeries {
    /// The zero series, exact through `cap`.
    pub fn zero(cap: HalfExp) -> Self {
        Self { lo: 0, coeffs: Vec::new(), cap }
    }

    /// The constant series `1`, exact through `cap`.
    pub fn one(cap: HalfExp) -> Self {
        Self::monomial(BigInt::one(), 0, cap)
    }

    /// The series `c q^(e/2)` truncated at `cap`.
    pub fn monomial(c: impl Into<BigInt>, e: HalfExp, cap: HalfExp) -> Self {
        Self::from_terms([(e, c.into())], cap)
    }

    /// The exact monomial `c q^(e/2)` (cap [`EXACT_CAP`]).
    pub fn exact_monomial(c: impl Into<BigInt>, e: HalfExp) -> Self {
        Self::monomial(c, e, EXACT_CAP)
    }

    /// `(-q^(1/2))^s` as an exact monomial.
    pub fn signed_half_power(s: HalfExp) -> Self {
        let c = if s.rem_euclid(2) == 0 { 1 } else { -1 };
        Self::exact_monomial(c, s)
    }

    /// Builds a series from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed and terms above `cap` are dropped.
    pub fn from_terms<I>(terms: I, cap: HalfExp) -> Self
    where
        I: IntoIterator<Item = (HalfExp, BigInt)>,
    {
        let mut map: std::collections::BTreeMap<HalfExp, BigInt> = Default::default();
        for (e, c) in terms {
            if e <= cap {
                *map.entry(e).or_insert_with(BigInt::zero) += c;
            }
        }
        map.retain(|_, c| !c.is_zero());
        let Some((&lo, _)) = map.iter().next() else {
            return Self::zero(cap);
        };
        let hi = *map.keys().next_back().unwrap();
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in map {
            coeffs[(e - lo) as usize] = c;
        }
        Self { lo, coeffs, cap }
    }

    /// Builds a series from a dense coefficient vector starting at `lo`.
    pub fn from_dense(lo: HalfExp, coeffs: Vec<BigInt>, cap: HalfExp) -> Self {
        let mut s = Self { lo, coeffs, cap };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let keep = (self.cap as i128 - self.lo as i128 + 1).max(0);
        if (self.coeffs.len() as i128) > keep {
            self.coeffs.truncate(keep as usize);
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.lo = 0;
        } else if lead > 0 {
            self.coeffs.drain(..lead);
            self.lo += lead as i64;
        }
    }

    /// Inclusive truncation cap.
    pub fn cap(&self) -> HalfExp {
        self.cap
    }

    /// True when no coefficient up to the cap is nonzero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when the series is exactly `1` through its cap.
    pub fn is_one(&self) -> bool {
        self.lo == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn min_exp(&self) -> Option<HalfExp> {
        (!self.is_zero()).then_some(self.lo)
    }

    /// Largest exponent with a nonzero coefficient.
    pub fn max_exp(&self) -> Option<HalfExp> {
        (!self.is_zero()).then(|| self.lo + self.coeffs.len() as i64 - 1)
    }

    /// A lower bound for the minimal exponent of the true series: the exact
    /// minimal exponent when some term is known, otherwise `cap + 1`.
    pub fn degree_floor(&self) -> HalfExp {
        self.min_exp().unwrap_or(self.cap.saturating_add(1))
    }

    /// Coefficient of `q^(e/2)` (zero outside the stored support).
    pub fn coeff(&self, e: HalfExp) -> BigInt {
        if self.is_zero() || e < self.lo {
            return BigInt::zero();
        }
        self.coeffs.get((e - self.lo) as usize).cloned().unwrap_or_default()
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (HalfExp, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.lo + i as i64, c))
    }

    /// Number of nonzero terms.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// True when every exponent is an integer (even half-exponent).
    pub fn has_integral_exponents(&self) -> bool {
        self.terms().all(|(e, _)| e.rem_euclid(2) == 0)
    }

    /// Lowers the cap to `min(cap, new_cap)`.
    pub fn truncate(&self, new_cap: HalfExp) -> Self {
        let mut s = self.clone();
        s.cap = s.cap.min(new_cap);
        s.normalize();
        s
    }

    /// Multiplies by `q^(s/2)`.
    pub fn shift(&self, s: HalfExp) -> Self {
        Self {
            lo: if self.is_zero() { 0 } else { self.lo + s },
            coeffs: self.coeffs.clone(),
            cap: clamp_cap(self.cap as i128 + s as i128),
        }
    }

    /// Multiplies by `(-q^(1/2))^s`.
    pub fn mul_signed_half_power(&self, s: HalfExp) -> Self {
        let out = self.shift(s);
        if s.rem_euclid(2) == 0 {
            out
        } else {
            -out
        }
    }

    /// Multiplies every coefficient by an integer.
    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.cap);
        }
        Self {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
            cap: self.cap,
        }
    }

    /// Compares two series on the common exact range and reports the first
    /// exponent where they differ, with both coefficients.
    pub fn first_difference(&self, other: &Self) -> Option<(HalfExp, BigInt, BigInt)> {
        let cap = self.cap.min(other.cap);
        let diff = self.truncate(cap) - other.truncate(cap);
        diff.min_exp().map(|e| (e, self.coeff(e), other.coeff(e)))
    }

    /// True when the two series agree on their common exact range.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }

    /// JSON interchange form.
    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            cap_half: self.cap,
            terms: self.terms().map(|(e, c)| (e, c.to_string())).collect(),
        }
    }

    /// Parses the JSON interchange form.
    pub fn from_json(j: &SeriesJson) -> Result<Self> {
        let mut terms = Vec::with_capacity(j.terms.len());
        for (i, (e, c)) in j.terms.iter().enumerate() {
            let v = c.parse::<BigInt>().map_err(|err| Error::Parse {
                row: i + 1,
                col: 2,
                msg: format!("bad coefficient `{c}`: {err}"),
            })?;
            terms.push((*e, v));
        }
        Ok(Self::from_terms(terms, j.cap_half))
    }

    fn add_impl(&self, other: &Self, negate_other: bool) -> Self {
        let cap = self.cap.min(other.cap);
        let a = self.truncate(cap);
        let b = other.truncate(cap);
        if b.is_zero() {
            return a;
        }
        if a.is_zero() {
            return if negate_other { -b } else { b };
        }
        let lo = a.lo.min(b.lo);
        let hi = a.max_exp().unwrap().max(b.max_exp().unwrap());
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (i, c) in a.coeffs.iter().enumerate() {
            coeffs[(a.lo - lo) as usize + i] += c;
        }
        for (i, c) in b.coeffs.iter().enumerate() {
            let slot = &mut coeffs[(b.lo - lo) as usize + i];
            if negate_other {
                *slot -= c;
            } else {
                *slot += c;
            }
        }
        Self::from_dense(lo, coeffs, cap)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let d1 = self.degree_floor() as i128;
        let d2 = other.degree_floor() as i128;
        let cap = clamp_cap((self.cap as i128 + d2).min(other.cap as i128 + d1));
        if self.is_zero() || other.is_zero() {
            return Self::zero(cap);
        }
        let lo = self.lo + other.lo;
        if (cap as i128) < lo as i128 {
            return Self::zero(cap);
        }
        let max_len = (cap as i128 - lo as i128 + 1) as usize;
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(max_len);
        let coeffs = convolve(&self.coeffs, &other.coeffs, len);
        Self::from_dense(lo, coeffs, cap)
    }
}

/// Truncated convolution of two dense coefficient vectors, using a native
/// 128-bit accumulator when the inputs are small enough to rule out overflow.
fn convolve(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let small = |v: &[BigInt]| -> Option<(Vec<i64>, u128)> {
        let mut out = Vec::with_capacity(v.len());
        let mut max = 0u128;
        for c in v {
            let x = c.to_i64()?;
            max = max.max(x.unsigned_abs() as u128);
            out.push(x);
        }
        Some((out, max))
    };
    if let (Some((sa, ma)), Some((sb, mb))) = (small(a), small(b)) {
        let terms = a.len().min(b.len()) as u128;
        if ma.saturating_mul(mb).saturating_mul(terms.max(1)) < (1u128 << 125) {
            let mut acc = vec![0i128; len];
            for (i, &x) in sa.iter().enumerate() {
                if i >= len || x == 0 {
                    continue;
                }
                for (j, &y) in sb.iter().enumerate().take(len - i) {
                    acc[i + j] += x as i128 * y as i128;
                }
            }
            return acc.into_iter().map(BigInt::from).collect();
        }
    }
    let mut acc = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate() {
        if i >= len || x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            acc[i + j] += x * y;
        }
    }
    acc
}

impl std::ops::Add for &TruncatedQSeries {
    type Output = TruncatedQSeries;
    fn add(self, rhs: Self) -> TruncatedQSeries {
        self.add_impl(rhs, false)
    }
}

impl std::ops::Add for TruncatedQSeries {
    type Output = TruncatedQSeries;
    fn add(self, rhs: Self) -> TruncatedQSeries {
        self.add_impl(&rhs, false)
    }
}

impl std::ops::Sub for &TruncatedQSeries {
    type Output = TruncatedQSeries;
    fn sub(self, rhs: Self) -> TruncatedQSeries {
        self.add_impl(rhs, true)
    }
}

impl std::ops::Sub for TruncatedQSeries {
    type Output = TruncatedQSeries;
    fn sub(self, rhs: Self) -> TruncatedQSeries {
        self.add_impl(&rhs, true)
    }
}

impl std::ops::Mul for &TruncatedQSeries {
    type Output = TruncatedQSeries;
    fn mul(self, rhs: Self) -> TruncatedQSeries {
        self.mul_impl(rhs)
    }
}

impl std::ops::Mul for TruncatedQSeries {
    type Output = TruncatedQSeries;
    fn mul(self, rhs: Self) -> TruncatedQSeries {
        self.mul_impl(&rhs)
    }
}

impl std::ops::Neg for TruncatedQSeries {
    type Output = TruncatedQSeries;
    fn neg(mut self) -> TruncatedQSeries {
        for c in &mut self.coeffs {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl std::ops::Neg for &TruncatedQSeries {
    type Output = TruncatedQSeries;
    fn neg(self) -> TruncatedQSeries {
        -self.clone()
    }
}

/// Sums a collection of series; the cap of the result is the minimum cap.
pub fn sum_series<I>(items: I, cap: HalfExp) -> TruncatedQSeries
where
    I: IntoIterator<Item = TruncatedQSeries>,
{
    let mut acc = SeriesAccumulator::new(cap);
    for s in items {
        acc.add(&s);
    }
    acc.finish()
}

/// Dense accumulator for summing many series with a common target cap.
#[derive(Clone, Debug)]
pub struct SeriesAccumulator {
    target: HalfExp,
    cap: HalfExp,
    lo: HalfExp,
    coeffs: Vec<BigInt>,
}

impl SeriesAccumulator {
    /// New accumulator whose result is exact through at most `target`.
    pub fn new(target: HalfExp) -> Self {
        Self { target, cap: target, lo: 0, coeffs: Vec::new() }
    }

    /// Adds a series; the running cap drops to the series cap if lower.
    pub fn add(&mut self, s: &TruncatedQSeries) {
        self.cap = self.cap.min(s.cap);
        for (e, c) in s.terms() {
            if e > self.target {
                break;
            }
            self.add_term(e, c);
        }
    }

    /// Adds a single term.
    pub fn add_term(&mut self, e: HalfExp, c: &BigInt) {
        if self.coeffs.is_empty() {
            self.lo = e;
            self.coeffs.push(c.clone());
            return;
        }
        if e < self.lo {
            let pad = (self.lo - e) as usize;
            let mut v = vec![BigInt::zero(); pad];
            v.append(&mut self.coeffs);
            self.coeffs = v;
            self.lo = e;
        }
        let idx = (e - self.lo) as usize;
        if idx >= self.coeffs.len() {
            self.coeffs.resize(idx + 1, BigInt::zero());
        }
        self.coeffs[idx] += c;
    }

    /// Merges another accumulator into this one.
    pub fn merge(mut self, other: SeriesAccumulator) -> Self {
        self.cap = self.cap.min(other.cap);
        for (i, c) in other.coeffs.iter().enumerate() {
            if !c.is_zero() {
                self.add_term(other.lo + i as i64, c);
            }
        }
        self
    }

    /// The accumulated series.
    pub fn finish(self) -> TruncatedQSeries {
        TruncatedQSeries::from_dense(self.lo, self.coeffs, self.cap)
    }
}

/// JSON interchange form of a series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub cap_half: HalfExp,
    pub terms: Vec<(HalfExp, String)>,
}

fn fmt_power(e: HalfExp) -> String {
    if e.rem_euclid(2) == 0 {
        match e / 2 {
            0 => String::new(),
            1 => "q".to_string(),
            k if k > 0 => format!("q^{k}"),
            k => format!("q^({k})"),
        }
    } else {
        format!("q^({e}/2)")
    }
}

impl fmt::Display for TruncatedQSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let p = fmt_power(e);
            if p.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{p}")?;
            } else {
                write!(f, "{mag}{p}")?;
            }
        }
        if self.cap < EXACT_CAP {
            if !first {
                write!(f, " + ")?;
            }
            let o = self.cap + 1;
            let p = fmt_power(o);
            if p.is_empty() {
                write!(f, "O(1)")?;
            } else {
                write!(f, "O({p})")?;
            }
        } else if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Parses a `q^(k/2)`-style power token such as `q`, `q^3`, `q^(5/2)`,
/// `q^(-1)`; returns the half-exponent.
fn parse_power(tok: &str) -> Option<HalfExp> {
    let rest = tok.strip_prefix('q')?;
    if rest.is_empty() {
        return Some(2);
    }
    let rest = rest.strip_prefix('^')?;
    let inner = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .unwrap_or(rest);
    let inner = inner.trim_start_matches('{').trim_end_matches('}');
    if let Some((num, den)) = inner.split_once('/') {
        let n: i64 = num.trim().parse().ok()?;
        let d: i64 = den.trim().parse().ok()?;
        match d {
            2 => Some(n),
            1 => Some(2 * n),
            _ => None,
        }
    } else {
        inner.trim().parse::<i64>().ok().map(|k| 2 * k)
    }
}

impl FromStr for TruncatedQSeries {
    type Err = Error;

    /// Parses the textual rendering, e.g. `1 - 2q + q^(5/2) + O(q^(21/2))`.
    /// A missing O-term means the series is exact.
    fn from_str(text: &str) -> Result<Self> {
        let bad = |col: usize, msg: &str| Error::Parse { row: 1, col, msg: msg.to_string() };
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut chunks: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut sign_neg = false;
        let mut depth = 0i32;
        for ch in compact.chars() {
            match ch {
                '(' | '{' => {
                    depth += 1;
                    cur.push(ch);
                }
                ')' | '}' => {
                    depth -= 1;
                    cur.push(ch);
                }
                '+' | '-' if depth == 0 && !cur.ends_with('^') => {
                    if !cur.is_empty() {
                        chunks.push((sign_neg, std::mem::take(&mut cur)));
                    }
                    sign_neg = ch == '-';
                }
                _ => cur.push(ch),
            }
        }
        if !cur.is_empty() {
            chunks.push((sign_neg, cur));
        }
        let mut cap = EXACT_CAP;
        let mut terms = Vec::new();
        for (idx, (neg, chunk)) in chunks.into_iter().enumerate() {
            let col = idx + 1;
            if let Some(inner) = chunk.strip_prefix("O(").and_then(|r| r.strip_suffix(')')) {
                let e = if inner == "1" { 0 } else { parse_power(inner).ok_or_else(|| bad(col, "bad O-term"))? };
                cap = e - 1;
                continue;
            }
            if chunk == "0" {
                continue;
            }
            let digits: String = chunk.chars().take_while(|c| c.is_ascii_digit()).collect();
            let rest = &chunk[digits.len()..];
            let rest = rest.trim_start_matches('*');
            let mag: BigInt = if digits.is_empty() {
                BigInt::one()
            } else {
                digits.parse().map_err(|_| bad(col, "bad coefficient"))?
            };
            let e = if rest.is_empty() {
                0
            } else {
                parse_power(rest).ok_or_else(|| bad(col, &format!("bad power `{rest}`")))?
            };
            terms.push((e, if neg { -mag } else { mag }));
        }
        Ok(Self::from_terms(terms, cap))
    }
}

/// Exact minimal half-degree of `I(m, e)`, the piecewise quadratic function
/// of the hexagonal-norm degree lemma.
pub fn min_degree_tet(m: i64, e: i64) -> HalfExp {
    if m >= 0 && e + m >= 0 {
        m * (e + m) + m
    } else if m <= 0 && e >= 0 {
        -e * m
    } else {
        e * (e + m) - e
    }
}

/// Exact minimal half-degree of `J(a, b, c)`.
pub fn min_degree_j(a: i64, b: i64, c: i64) -> HalfExp {
    -b + min_degree_tet(b - c, a - b)
}

fn tet_cache() -> &'static Mutex<HashMap<(i64, i64), TruncatedQSeries>> {
    static CACHE: OnceLock<Mutex<HashMap<(i64, i64), TruncatedQSeries>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Smallest cap at which fresh tetrahedral indices are computed, so that
/// repeated small requests share one cache entry.
const TET_MIN_CACHE_CAP: HalfExp = 24;

/// The tetrahedral index `I(m, e)` truncated at `cap`.
pub fn tet_index(m: i64, e: i64, cap: HalfExp) -> TruncatedQSeries {
    if let Some(s) = tet_cache().lock().unwrap().get(&(m, e)) {
        if s.cap >= cap {
            return s.truncate(cap);
        }
    }
    let work_cap = cap.max(TET_MIN_CACHE_CAP);
    let s = tet_index_uncached(m, e, work_cap);
    let out = s.truncate(cap);
    let mut guard = tet_cache().lock().unwrap();
    let slot = guard.entry((m, e)).or_insert_with(|| s.clone());
    if slot.cap < s.cap {
        *slot = s;
    }
    out
}

/// Half-degree of the `n`-th summand's leading monomial.
fn tet_term_degree(n: i64, m: i64, e: i64) -> i64 {
    n * (n + 1) - 2 * n * m - e * m
}

/// Direct evaluation of the defining series of `I(m, e)` without the cache.
pub fn tet_index_uncached(m: i64, e: i64, cap: HalfExp) -> TruncatedQSeries {
    let e_plus = (e.abs() - e) / 2;
    let mut ns = Vec::new();
    let mut n = e_plus;
    loop {
        let h = tet_term_degree(n, m, e);
        if h <= cap {
            ns.push((n, h));
        } else if n >= m {
            break;
        }
        n += 1;
    }
    let Some(hmin) = ns.iter().map(|&(_, h)| h).min() else {
        return TruncatedQSeries::zero(cap);
    };
    let dmax = ((cap - hmin) / 2) as usize;
    // f = 1 / ((q)_n (q)_{n+e}) truncated at q-degree dmax, updated in n.
    let mut f = vec![BigInt::zero(); dmax + 1];
    f[0] = BigInt::one();
    let divide = |f: &mut Vec<BigInt>, j: usize| {
        if j == 0 {
            return;
        }
        for d in j..f.len() {
            let prev = f[d - j].clone();
            f[d] += prev;
        }
    };
    for j in 1..=e_plus {
        divide(&mut f, j as usize);
    }
    for j in 1..=(e_plus + e) {
        divide(&mut f, j as usize);
    }
    let mut acc = vec![BigInt::zero(); (cap - hmin + 1) as usize];
    let last_n = ns.last().map(|&(n, _)| n).unwrap_or(e_plus);
    let mut cur = e_plus;
    let mut it = ns.iter().peekable();
    while cur <= last_n {
        if let Some(&&(n, h)) = it.peek() {
            if n == cur {
                it.next();
                let negative = n % 2 != 0;
                let dlim = ((cap - h) / 2) as usize;
                for d in 0..=dlim.min(dmax) {
                    let slot = &mut acc[(h - hmin) as usize + 2 * d];
                    if negative {
                        *slot -= &f[d];
                    } else {
                        *slot += &f[d];
                    }
                }
            }
        }
        divide(&mut f, (cur + 1) as usize);
        divide(&mut f, (cur + 1 + e) as usize);
        cur += 1;
    }
    TruncatedQSeries::from_dense(hmin, acc, cap)
}

/// `J(a, b, c) = (-q^(1/2))^(-b) I(b - c, a - b)`, truncated at `cap`.
pub fn j_tet(a: i64, b: i64, c: i64, cap: HalfExp) -> TruncatedQSeries {
    tet_index(b - c, a - b, cap + b).mul_signed_half_power(-b)
}

/// Coefficient of `z^k` in `φ_r(z) = Σ_e I(e - r, e) z^e`.
pub fn phi_r_coefficient(r: i64, k: i64, cap: HalfExp) -> TruncatedQSeries {
    tet_index(k - r, k, cap)
}

/// `Π_{i=0}^{n-1} (1 - a q^i)` for `a = sign · q^(h/2)`, as an exact
/// Laurent polynomial.
pub fn q_pochhammer_monomial(sign: i64, h: HalfExp, n: usize) -> TruncatedQSeries {
    let mut acc = TruncatedQSeries::exact_monomial(1, 0);
    for i in 0..n as i64 {
        let factor = TruncatedQSeries::exact_monomial(1, 0)
            - TruncatedQSeries::exact_monomial(sign, h + 2 * i);
        acc = &acc * &factor;
    }
    acc
}

/// `1 / Π_{i=0}^{n-1} (1 - sign · q^((h + step i)/2))` for `h > 0`,
/// truncated at `cap`.
pub fn inverse_pochhammer(sign: i64, h: HalfExp, step: HalfExp, n: usize, cap: HalfExp) -> TruncatedQSeries {
    assert!(h > 0 && step >= 0, "inverse Pochhammer needs positive exponents");
    if cap < 0 {
        return TruncatedQSeries::zero(cap);
    }
    let len = cap as usize + 1;
    let mut f = vec![BigInt::zero(); len];
    f[0] = BigInt::one();
    for i in 0..n as i64 {
        let j = (h + step * i) as usize;
        if j >= len {
            break;
        }
        for d in j..len {
            let prev = &f[d - j] * sign;
            f[d] += prev;
        }
    }
    TruncatedQSeries::from_dense(0, f, cap)
}

impl Serialize for TruncatedQSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedQSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SeriesJson::deserialize(d)?;
        Self::from_json(&j).map_err(serde::de::Error::custom)
    }
}
