//! Certified summation windows for one-parameter families of terms.
//!
//! Many sums in this crate run over a single integer parameter `t`, with
//! summands that are monomials times products of tetrahedral indices whose
//! arguments are affine in `t`. The minimal degree of such a summand is a
//! piecewise quadratic function of `t`; outside the finitely many
//! breakpoints of its pieces it is a single quadratic polynomial. Scanning
//! outward until that polynomial is non-decreasing and already above the cap
//! proves that every omitted summand has degree beyond the cap.

use crate::error::{Error, Result};
use crate::qseries::{min_degree_tet, HalfExp};

/// An affine function `a t + b` of the summation parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Affine {
    pub a: i64,
    pub b: i64,
}

impl Affine {
    pub const fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }

    pub const fn constant(b: i64) -> Self {
        Self { a: 0, b }
    }

    pub fn at(&self, t: i64) -> i64 {
        self.a * t + self.b
    }

    fn add(self, o: Affine) -> Affine {
        Affine::new(self.a + o.a, self.b + o.b)
    }

    /// Largest `|t|` at which this function can change sign.
    fn breakpoint(&self) -> i64 {
        if self.a == 0 {
            0
        } else {
            self.b.abs() / self.a.abs() + 1
        }
    }
}

/// Piecewise-linear correction terms of a degree bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kink {
    /// `-|u(t)|`.
    NegAbs(Affine),
    /// `-min(u(t), v(t))`.
    NegMin(Affine, Affine),
}

impl Kink {
    fn at(&self, t: i64) -> i64 {
        match self {
            Kink::NegAbs(u) => -u.at(t).abs(),
            Kink::NegMin(u, v) => -u.at(t).min(v.at(t)),
        }
    }

    fn breakpoint(&self) -> i64 {
        match self {
            Kink::NegAbs(u) => u.breakpoint(),
            Kink::NegMin(u, v) => u.add(Affine::new(-v.a, -v.b)).breakpoint(),
        }
    }
}

/// Lower bound for the half-degree of a summand: a linear monomial weight
/// plus the exact minimal degrees of tetrahedral-index factors `I(m(t), e(t))`
/// and piecewise-linear corrections.
#[derive(Clone, Debug, Default)]
pub struct DegreeBound {
    pub weight: Option<Affine>,
    pub tets: Vec<(Affine, Affine)>,
    pub kinks: Vec<Kink>,
}

impl DegreeBound {
    pub fn new(weight: Affine) -> Self {
        Self { weight: Some(weight), tets: Vec::new(), kinks: Vec::new() }
    }

    /// Adds a piecewise-linear correction.
    pub fn kink(mut self, k: Kink) -> Self {
        self.kinks.push(k);
        self
    }

    /// Adds a factor `I(m(t), e(t))`.
    pub fn tet(mut self, m: Affine, e: Affine) -> Self {
        self.tets.push((m, e));
        self
    }

    /// Adds a factor `J(a(t), b(t), c(t)) = (-q^(1/2))^(-b) I(b - c, a - b)`.
    pub fn j(mut self, a: Affine, b: Affine, c: Affine) -> Self {
        let neg_b = Affine::new(-b.a, -b.b);
        let w = self.weight.unwrap_or(Affine::constant(0));
        self.weight = Some(w.add(neg_b));
        let m = b.add(Affine::new(-c.a, -c.b));
        let e = a.add(neg_b);
        self.tets.push((m, e));
        self
    }

    /// Evaluates the bound at `t`.
    pub fn at(&self, t: i64) -> HalfExp {
        let mut d = self.weight.map_or(0, |w| w.at(t));
        for (m, e) in &self.tets {
            d += min_degree_tet(m.at(t), e.at(t));
        }
        for k in &self.kinks {
            d += k.at(t);
        }
        d
    }

    /// `|t|` beyond which the bound is a single polynomial.
    fn stable_radius(&self) -> i64 {
        let mut r = 0;
        for (m, e) in &self.tets {
            r = r.max(m.breakpoint()).max(e.breakpoint()).max(m.add(*e).breakpoint());
        }
        for k in &self.kinks {
            r = r.max(k.breakpoint());
        }
        r
    }
}

/// Returns the inclusive range `[lo, hi]` of `t` outside which
/// `bound.at(t) > cap` is proven; `None` when no `t` in the scanned region
/// has degree `<= cap` and the tails are certified.
pub fn certified_window(bound: &DegreeBound, cap: HalfExp) -> Result<Option<(i64, i64)>> {
    let radius = bound.stable_radius();
    let hi = scan(bound, cap, radius, 1)?;
    let lo = scan(bound, cap, radius, -1)?;
    let mut found: Option<(i64, i64)> = None;
    for t in lo..=hi {
        if bound.at(t) <= cap {
            found = Some(match found {
                None => (t, t),
                Some((a, _)) => (a, t),
            });
        }
    }
    Ok(found)
}

/// Walks from `0` in direction `dir` and returns the last `t` that may still
/// carry a summand of degree `<= cap`.
fn scan(bound: &DegreeBound, cap: HalfExp, radius: i64, dir: i64) -> Result<i64> {
    let mut last = 0;
    let mut t = 0i64;
    loop {
        let p0 = bound.at(t);
        if p0 <= cap {
            last = t;
        }
        if t.abs() >= radius {
            let p1 = bound.at(t + dir);
            let p2 = bound.at(t + 2 * dir);
            let d1 = p1 - p0;
            let d2 = p2 - 2 * p1 + p0;
            if d2 < 0 || (d2 == 0 && d1 < 0) || (d2 == 0 && d1 == 0 && p0 <= cap) {
                return Err(Error::Uncertified(format!(
                    "degree bound does not grow in direction {dir} (t = {t}, values {p0}, {p1}, {p2})"
                )));
            }
            if d1 >= 0 && p0 > cap {
                return Ok(last);
            }
        }
        t += dir;
        if t.abs() > 1_000_000 {
            return Err(Error::Uncertified("summation window exceeds 10^6".into()));
        }
    }
}
