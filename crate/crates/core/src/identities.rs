//! Truncation-based verification of identities satisfied by the tetrahedral
//! index and its q-hypergeometric relatives.
//!
//! Every infinite sum over a lattice parameter is evaluated as a certified
//! finite sum. The summation window comes from [`certified_window`] applied
//! to the exact minimal degrees of the tetrahedral-index factors, so every
//! omitted summand has degree beyond the cap. Bivariate identities are
//! checked one `z`-coefficient at a time, and each coefficient is itself a
//! certified sum, so no window-boundary effects can occur.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::bounds::{certified_window, Affine, DegreeBound};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::index::index_with_boundary;
use crate::lst::{rel_gy_cusp, Slope};
use crate::qseries::{
    inverse_pochhammer, min_degree_tet, q_pochhammer_monomial, tet_index, HalfExp, SeriesAccumulator,
    TruncatedQSeries,
};
use crate::triangulation::BoundaryClass;

/// Linear relations between tetrahedral indices at neighbouring lattice
/// points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThreeTermFamily {
    /// `I(m,e+1) + (q^(e+m/2) - q^(-m/2) - q^(m/2)) I(m,e) + I(m,e-1) = 0`.
    ConsecutiveE,
    /// `I(m+1,e) + (q^(-m-e/2) - q^(-e/2) - q^(e/2)) I(m,e) + I(m-1,e) = 0`.
    ConsecutiveM,
    /// `q^(e/2) I(m+1,e) + q^(-m/2) I(m,e+1) - I(m,e) = 0`.
    Adjacent1,
    /// `q^(e/2) I(m-1,e) + q^(-m/2) I(m,e-1) - I(m,e) = 0`.
    Adjacent2,
    /// `q^(-m/2) [I(m,e-1) - I(m,e+1)] + q^(e/2) [I(m-1,e) - I(m+1,e)] = 0`.
    FourTerm,
}

impl ThreeTermFamily {
    pub const ALL: [ThreeTermFamily; 5] = [
        ThreeTermFamily::ConsecutiveE,
        ThreeTermFamily::ConsecutiveM,
        ThreeTermFamily::Adjacent1,
        ThreeTermFamily::Adjacent2,
        ThreeTermFamily::FourTerm,
    ];

    /// The relation as a list of terms `(sign, half-exponent, m, e)`.
    fn terms(self, m: i64, e: i64) -> Vec<(i64, HalfExp, i64, i64)> {
        match self {
            ThreeTermFamily::ConsecutiveE => vec![
                (1, 0, m, e + 1),
                (1, 2 * e + m, m, e),
                (-1, -m, m, e),
                (-1, m, m, e),
                (1, 0, m, e - 1),
            ],
            ThreeTermFamily::ConsecutiveM => vec![
                (1, 0, m + 1, e),
                (1, -2 * m - e, m, e),
                (-1, -e, m, e),
                (-1, e, m, e),
                (1, 0, m - 1, e),
            ],
            ThreeTermFamily::Adjacent1 => vec![(1, e, m + 1, e), (1, -m, m, e + 1), (-1, 0, m, e)],
            ThreeTermFamily::Adjacent2 => vec![(1, e, m - 1, e), (1, -m, m, e - 1), (-1, 0, m, e)],
            ThreeTermFamily::FourTerm => vec![
                (1, -m, m, e - 1),
                (-1, -m, m, e + 1),
                (1, e, m - 1, e),
                (-1, e, m + 1, e),
            ],
        }
    }
}

/// The five linear relations along shifted diagonals `I(e - r, e)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagonalVariant {
    /// `Σ (-q^(1/2))^e I(e-r,e) = 1` for even `r`.
    Even1,
    /// `Σ (-q^(1/2))^(-e) I(e-r,e) = q^(-r/2)` for even `r`.
    Even2,
    /// `Σ (-q)^e I(e-r,e) = 1` for odd `r`.
    Odd1,
    /// `Σ (-q)^(-e) I(e-r,e) = -q^(-r)` for odd `r`.
    Odd2,
    /// `Σ (-1)^e I(e-r,e) = 0` for odd `r`.
    Odd3,
}

impl DiagonalVariant {
    pub const ALL: [DiagonalVariant; 5] = [
        DiagonalVariant::Even1,
        DiagonalVariant::Even2,
        DiagonalVariant::Odd1,
        DiagonalVariant::Odd2,
        DiagonalVariant::Odd3,
    ];

    /// Whether the variant applies to even `r`.
    pub fn even(self) -> bool {
        matches!(self, DiagonalVariant::Even1 | DiagonalVariant::Even2)
    }

    /// Half-exponent `w` of the weight `(-1)^e q^(w e / 2)`.
    fn weight(self) -> i64 {
        match self {
            DiagonalVariant::Even1 => 1,
            DiagonalVariant::Even2 => -1,
            DiagonalVariant::Odd1 => 2,
            DiagonalVariant::Odd2 => -2,
            DiagonalVariant::Odd3 => 0,
        }
    }

    /// Right-hand side at `r`.
    fn rhs(self, r: i64, cap: HalfExp) -> TruncatedQSeries {
        match self {
            DiagonalVariant::Even1 | DiagonalVariant::Odd1 => TruncatedQSeries::one(cap),
            DiagonalVariant::Even2 => TruncatedQSeries::monomial(1, -r, cap),
            DiagonalVariant::Odd2 => TruncatedQSeries::monomial(-1, -2 * r, cap),
            DiagonalVariant::Odd3 => TruncatedQSeries::zero(cap),
        }
    }
}

/// Identifier of a verified identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityId {
    Quadratic,
    Pentagon,
    ThreeTerm(ThreeTermFamily),
    Sl2Symmetry,
    PhiIdentity,
    /// The suspected alternative functional equation for `φ_r`.
    AlternativePhi,
    LinearDiagonal(DiagonalVariant),
    /// `φ_r` at a monomial `z` via the diagonal sum and via `₃φ₃`.
    PhiHypergeometric,
    QPythagoras,
    GyMeridian,
    M004Generating,
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdentityId::ThreeTerm(t) => write!(f, "three-term/{t:?}"),
            IdentityId::LinearDiagonal(v) => write!(f, "linear-diagonal/{v:?}"),
            other => write!(f, "{other:?}"),
        }
    }
}

/// Outcome of one identity check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

fn ser_bigint<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// First coefficient at which the two sides of an identity differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    /// Power of the formal variable, for bivariate identities.
    pub z_exp: Option<i64>,
    pub q_half_exp: HalfExp,
    #[serde(serialize_with = "ser_bigint")]
    pub lhs: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub rhs: BigInt,
}

/// Result of verifying one identity at one parameter point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub identity: IdentityId,
    pub point: Vec<i64>,
    /// Half-exponent through which both sides were compared.
    pub verified_to: HalfExp,
    pub status: Status,
    pub first_discrepancy: Option<Discrepancy>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    fn new(identity: IdentityId, point: Vec<i64>, verified_to: HalfExp, first_discrepancy: Option<Discrepancy>) -> Self {
        let status = if first_discrepancy.is_none() { Status::Pass } else { Status::Fail };
        Self { identity, point, verified_to, status, first_discrepancy }
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "pass" } else { "FAIL" };
        write!(f, "{status} {} {:?} through q^({}/2)", self.identity, self.point, self.verified_to)?;
        if let Some(d) = &self.first_discrepancy {
            if let Some(z) = d.z_exp {
                write!(f, "; z^{z}")?;
            }
            write!(f, "; at q^({}/2): lhs {} rhs {}", d.q_half_exp, d.lhs, d.rhs)?;
        }
        Ok(())
    }
}

/// Laurent series in a formal variable `z` with truncated q-series
/// coefficients, known for `z`-exponents in `z_window` and q-exponents up to
/// `q_cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateTruncatedSeries {
    terms: BTreeMap<i64, TruncatedQSeries>,
    z_window: (i64, i64),
    q_cap: HalfExp,
}

impl BivariateTruncatedSeries {
    /// The zero series on the given window.
    pub fn zero(z_window: (i64, i64), q_cap: HalfExp) -> Self {
        Self { terms: BTreeMap::new(), z_window, q_cap }
    }

    pub fn z_window(&self) -> (i64, i64) {
        self.z_window
    }

    pub fn q_cap(&self) -> HalfExp {
        self.q_cap
    }

    /// Sets the coefficient of `z^k`; exponents outside the window are
    /// ignored.
    pub fn set(&mut self, k: i64, s: TruncatedQSeries) {
        if k < self.z_window.0 || k > self.z_window.1 {
            return;
        }
        let s = s.truncate(self.q_cap);
        if s.is_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, s);
        }
    }

    /// Coefficient of `z^k`.
    pub fn coeff(&self, k: i64) -> TruncatedQSeries {
        self.terms.get(&k).cloned().unwrap_or_else(|| TruncatedQSeries::zero(self.q_cap))
    }

    /// Product of two power series in `z` whose windows start at their
    /// lowest possible exponent; the result window is the range where every
    /// contributing pair of coefficients is known.
    pub fn mul_power_series(&self, other: &Self) -> Self {
        let lo = self.z_window.0 + other.z_window.0;
        let hi = (self.z_window.1 + other.z_window.0).min(other.z_window.1 + self.z_window.0);
        let cap = self.q_cap.min(other.q_cap);
        let mut out = Self::zero((lo, hi), cap);
        for k in lo..=hi {
            let mut acc = SeriesAccumulator::new(cap);
            for (&i, a) in &self.terms {
                if let Some(b) = other.terms.get(&(k - i)) {
                    acc.add(&(a * b));
                }
            }
            out.set(k, acc.finish());
        }
        out
    }

    /// First coefficient at which `self` and `other` differ on the common
    /// window and q-range.
    pub fn first_difference(&self, other: &Self) -> Option<Discrepancy> {
        let lo = self.z_window.0.max(other.z_window.0);
        let hi = self.z_window.1.min(other.z_window.1);
        (lo..=hi).find_map(|k| {
            self.coeff(k).first_difference(&other.coeff(k)).map(|(e, lhs, rhs)| Discrepancy {
                z_exp: Some(k),
                q_half_exp: e,
                lhs,
                rhs,
            })
        })
    }
}

/// `sign q^(half/2) Π I(m_i, e_i)` truncated at `cap`.
fn tet_term(sign: i64, half: HalfExp, tets: &[(i64, i64)], cap: HalfExp) -> TruncatedQSeries {
    let inner = cap - half;
    let degs: Vec<HalfExp> = tets.iter().map(|&(m, e)| min_degree_tet(m, e)).collect();
    let total: HalfExp = degs.iter().sum();
    if total > inner {
        return TruncatedQSeries::zero(cap);
    }
    let mut acc = TruncatedQSeries::one(inner);
    for (&(m, e), d) in tets.iter().zip(&degs) {
        acc = (&acc * &tet_index(m, e, inner - total + d)).truncate(inner);
    }
    let out = acc.shift(half).truncate(cap);
    if sign < 0 {
        -out
    } else {
        out
    }
}

/// Certified sum over `t` of `term(t)`, where `bound` bounds the degree of
/// every summand from below.
fn certified_sum(bound: &DegreeBound, cap: HalfExp, term: impl Fn(i64) -> TruncatedQSeries) -> Result<TruncatedQSeries> {
    let mut acc = SeriesAccumulator::new(cap);
    if let Some((lo, hi)) = certified_window(bound, cap)? {
        for t in lo..=hi {
            if bound.at(t) <= cap {
                acc.add(&term(t));
            }
        }
    }
    Ok(acc.finish())
}

fn sign_of(t: i64) -> i64 {
    if t.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn univariate_report(
    id: IdentityId,
    point: Vec<i64>,
    lhs: &TruncatedQSeries,
    rhs: &TruncatedQSeries,
    cap: HalfExp,
) -> IdentityReport {
    let d = lhs.truncate(cap).first_difference(&rhs.truncate(cap)).map(|(e, l, r)| Discrepancy {
        z_exp: None,
        q_half_exp: e,
        lhs: l,
        rhs: r,
    });
    IdentityReport::new(id, point, cap, d)
}

/// Quadratic identity `Σ_e q^e I(m,e) I(m,e+c) = δ_{c,0}`.
pub fn verify_quadratic(m: i64, c: i64, cap: HalfExp) -> Result<IdentityReport> {
    let bound = DegreeBound::new(Affine::new(2, 0))
        .tet(Affine::constant(m), Affine::new(1, 0))
        .tet(Affine::constant(m), Affine::new(1, c));
    let lhs = certified_sum(&bound, cap, |e| tet_term(1, 2 * e, &[(m, e), (m, e + c)], cap))?;
    let rhs = if c == 0 { TruncatedQSeries::one(cap) } else { TruncatedQSeries::zero(cap) };
    Ok(univariate_report(IdentityId::Quadratic, vec![m, c], &lhs, &rhs, cap))
}

/// Pentagon relation
/// `Σ_e q^e I(m₁,e+x₁) I(m₂,e+x₂) I(m₁+m₂,e+x₃)
///  = q^(-x₃) I(m₁-x₂+x₃, x₁-x₃) I(m₂-x₁+x₃, x₂-x₃)`.
pub fn verify_pentagon(m1: i64, m2: i64, x1: i64, x2: i64, x3: i64, cap: HalfExp) -> Result<IdentityReport> {
    let bound = DegreeBound::new(Affine::new(2, 0))
        .tet(Affine::constant(m1), Affine::new(1, x1))
        .tet(Affine::constant(m2), Affine::new(1, x2))
        .tet(Affine::constant(m1 + m2), Affine::new(1, x3));
    let lhs = certified_sum(&bound, cap, |e| {
        tet_term(1, 2 * e, &[(m1, e + x1), (m2, e + x2), (m1 + m2, e + x3)], cap)
    })?;
    let rhs = tet_term(1, -2 * x3, &[(m1 - x2 + x3, x1 - x3), (m2 - x1 + x3, x2 - x3)], cap);
    Ok(univariate_report(IdentityId::Pentagon, vec![m1, m2, x1, x2, x3], &lhs, &rhs, cap))
}

/// One of the three- or four-term linear relations at `(m, e)`.
pub fn verify_three_term(family: ThreeTermFamily, m: i64, e: i64, cap: HalfExp) -> Result<IdentityReport> {
    let mut acc = SeriesAccumulator::new(cap);
    for (sign, half, mm, ee) in family.terms(m, e) {
        acc.add(&tet_term(sign, half, &[(mm, ee)], cap));
    }
    let lhs = acc.finish();
    Ok(univariate_report(IdentityId::ThreeTerm(family), vec![m, e], &lhs, &TruncatedQSeries::zero(cap), cap))
}

/// The `SL₂(ℤ)` symmetries
/// `I(m,e) = I(-e,-m) = (-q^(1/2))^(-e) I(e,-e-m) = (-q^(1/2))^m I(-e-m,m)`.
pub fn verify_sl2_symmetry(m: i64, e: i64, cap: HalfExp) -> Result<IdentityReport> {
    let base = tet_index(m, e, cap);
    let images = [
        tet_term(1, 0, &[(-e, -m)], cap),
        tet_term(sign_of(e), -e, &[(e, -e - m)], cap),
        tet_term(sign_of(m), m, &[(-e - m, m)], cap),
    ];
    let mut report = univariate_report(IdentityId::Sl2Symmetry, vec![m, e], &base, &images[0], cap);
    for img in &images[1..] {
        if report.passed() {
            report = univariate_report(IdentityId::Sl2Symmetry, vec![m, e], &base, img, cap);
        }
    }
    Ok(report)
}

/// Coefficient of `z^k` in `φ_r(z q^(1/2)) φ_r(z q^(-1/2)) - φ_{r+1}(z) φ_{r-1}(z)`.
pub fn phi_identity_coefficient(r: i64, k: i64, cap: HalfExp) -> Result<TruncatedQSeries> {
    let first = DegreeBound::new(Affine::new(2, -k))
        .tet(Affine::new(1, -r), Affine::new(1, 0))
        .tet(Affine::new(-1, k - r), Affine::new(-1, k));
    let a = certified_sum(&first, cap, |e| tet_term(1, 2 * e - k, &[(e - r, e), (k - e - r, k - e)], cap))?;
    let second = DegreeBound::new(Affine::constant(0))
        .tet(Affine::new(1, -r - 1), Affine::new(1, 0))
        .tet(Affine::new(-1, k - r + 1), Affine::new(-1, k));
    let b = certified_sum(&second, cap, |e| tet_term(1, 0, &[(e - r - 1, e), (k - e - r + 1, k - e)], cap))?;
    Ok(a - b)
}

/// `φ_r(z q^(1/2)) φ_r(z q^(-1/2)) - φ_{r+1}(z) φ_{r-1}(z) = (z q^(-1/2))^r`,
/// checked for every `z`-exponent in `z_window`.
pub fn verify_phi_identity(r: i64, z_window: (i64, i64), cap: HalfExp) -> Result<IdentityReport> {
    let mut lhs = BivariateTruncatedSeries::zero(z_window, cap);
    let mut rhs = BivariateTruncatedSeries::zero(z_window, cap);
    for k in z_window.0..=z_window.1 {
        lhs.set(k, phi_identity_coefficient(r, k, cap)?);
    }
    rhs.set(r, TruncatedQSeries::monomial(1, -r, cap));
    let d = lhs.first_difference(&rhs);
    Ok(IdentityReport::new(IdentityId::PhiIdentity, vec![r, z_window.0, z_window.1], cap, d))
}

/// The suspected alternative equation
/// `φ_r(z q) φ_r(z^(-1) q) - q^r z^(-r) φ_{r-2}(z) φ_{r+2}(z) = 1`.
/// A failure here is informative only; the equation is not known to hold.
pub fn verify_alternative_phi(r: i64, z_window: (i64, i64), cap: HalfExp) -> Result<IdentityReport> {
    let mut lhs = BivariateTruncatedSeries::zero(z_window, cap);
    let mut rhs = BivariateTruncatedSeries::zero(z_window, cap);
    for k in z_window.0..=z_window.1 {
        // [φ_r(zq) φ_r(z⁻¹q)]_{z^k} = Σ_e q^(2e-k) I(e-r,e) I(e-k-r,e-k).
        let first = DegreeBound::new(Affine::new(4, -2 * k))
            .tet(Affine::new(1, -r), Affine::new(1, 0))
            .tet(Affine::new(1, -k - r), Affine::new(1, -k));
        let a = certified_sum(&first, cap, |e| tet_term(1, 4 * e - 2 * k, &[(e - r, e), (e - k - r, e - k)], cap))?;
        // [q^r z^(-r) φ_{r-2} φ_{r+2}]_{z^k} = q^r Σ_e I(e-r+2,e) I(k-e-2,k+r-e).
        let second = DegreeBound::new(Affine::constant(2 * r))
            .tet(Affine::new(1, 2 - r), Affine::new(1, 0))
            .tet(Affine::new(-1, k - 2), Affine::new(-1, k + r));
        let b = certified_sum(&second, cap, |e| tet_term(1, 2 * r, &[(e - r + 2, e), (k - e - 2, k + r - e)], cap))?;
        lhs.set(k, a - b);
    }
    rhs.set(0, TruncatedQSeries::one(cap));
    let d = lhs.first_difference(&rhs);
    Ok(IdentityReport::new(IdentityId::AlternativePhi, vec![r, z_window.0, z_window.1], cap, d))
}

/// One of the linear relations along the shifted diagonal `I(e - r, e)`.
pub fn verify_linear_diagonal(variant: DiagonalVariant, r: i64, cap: HalfExp) -> Result<IdentityReport> {
    if variant.even() != (r.rem_euclid(2) == 0) {
        return Err(Error::InvalidArgument(format!("{variant:?} needs r of the other parity, got {r}")));
    }
    let w = variant.weight();
    let bound = DegreeBound::new(Affine::new(w, 0)).tet(Affine::new(1, -r), Affine::new(1, 0));
    let lhs = certified_sum(&bound, cap, |e| tet_term(sign_of(e), w * e, &[(e - r, e)], cap))?;
    Ok(univariate_report(IdentityId::LinearDiagonal(variant), vec![r], &lhs, &variant.rhs(r, cap), cap))
}

/// `φ_r(z)` at `z = s q^(c/2)` as the certified diagonal sum
/// `Σ_e s^e q^(c e / 2) I(e - r, e)`.
pub fn phi_at_monomial(r: i64, s: i64, c: i64, cap: HalfExp) -> Result<TruncatedQSeries> {
    let bound = DegreeBound::new(Affine::new(c, 0)).tet(Affine::new(1, -r), Affine::new(1, 0));
    certified_sum(&bound, cap, |e| {
        let sign = if s < 0 { sign_of(e) } else { 1 };
        tet_term(sign, c * e, &[(e - r, e)], cap)
    })
}

/// Terminating-or-convergent `₃φ₃` sum
/// `Σ_n (a;q)_n (b;q)_n / (q;q)_{2n + odd} (-1)^n q^(n(n-1)/2) q^(n p / 2)`
/// with `a = sign q^(ha/2)`, `b = sign q^(hb/2)`.
fn three_phi_three(sign: i64, ha: HalfExp, hb: HalfExp, p: HalfExp, odd: bool, cap: HalfExp) -> TruncatedQSeries {
    let mut acc = SeriesAccumulator::new(cap);
    let stable = (ha.abs() + hb.abs() + p.abs()) / 2 + 2;
    let floor_of = |n: i64| -> HalfExp {
        let neg = |h: HalfExp| (0..n).map(|i| (h + 2 * i).min(0)).sum::<HalfExp>();
        n * (n - 1) + n * p + neg(ha) + neg(hb)
    };
    let mut n = 0i64;
    loop {
        let floor = floor_of(n);
        if floor > cap && n >= stable {
            break;
        }
        if floor <= cap {
            // (a;q)_n = Π (1 - a q^i) with a = sign q^(h/2).
            let num = &q_pochhammer_monomial(sign, ha, n as usize) * &q_pochhammer_monomial(sign, hb, n as usize);
            let power = n * (n - 1) + n * p;
            let num_lo = num.min_exp().unwrap_or(0);
            let len = (2 * n + i64::from(odd)) as usize;
            let den = inverse_pochhammer(1, 2, 2, len, cap - power - num_lo);
            let term = (&num * &den).shift(power).truncate(cap);
            acc.add(&if n % 2 == 0 { term } else { -term });
        }
        n += 1;
    }
    acc.finish()
}

/// `φ_r(z)` at `z = s q^(c/2)` via its closed `₃φ₃` form:
/// `(-z q^(-1/2))^(r/2) ₃φ₃[-z⁻¹q^(1/2), -z q^(1/2), 0; -q, q^(1/2), -q^(1/2); q, q^(1-r/2)]`
/// for even `r`, and
/// `(-z)^((r-1)/2) q^((1-r)/2) (1+z)/(1-q) ₃φ₃[-z⁻¹q, -z q, 0; -q, q^(3/2), -q^(3/2); q, q^((3-r)/2)]`
/// for odd `r`.
pub fn phi_hypergeometric(r: i64, s: i64, c: i64, cap: HalfExp) -> TruncatedQSeries {
    let s = if s < 0 { -1 } else { 1 };
    if r.rem_euclid(2) == 0 {
        let pre_half = (c - 1) * (r / 2);
        let pre_sign = if (-s) < 0 && (r / 2).rem_euclid(2) != 0 { -1 } else { 1 };
        let inner = three_phi_three(-s, 1 - c, 1 + c, 2 - r, false, cap - pre_half);
        let out = inner.shift(pre_half).truncate(cap);
        if pre_sign < 0 {
            -out
        } else {
            out
        }
    } else {
        let k = (r - 1) / 2;
        let pre_half = c * k + (1 - r);
        let pre_sign = if (-s) < 0 && k.rem_euclid(2) != 0 { -1 } else { 1 };
        let one_plus_z = TruncatedQSeries::exact_monomial(1, 0) + TruncatedQSeries::exact_monomial(s, c);
        let extra = c.min(0);
        let inner = three_phi_three(-s, 2 - c, 2 + c, 3 - r, true, cap - pre_half - extra);
        let out = (&inner * &one_plus_z).shift(pre_half).truncate(cap);
        if pre_sign < 0 {
            -out
        } else {
            out
        }
    }
}

/// Agreement of the diagonal-sum and `₃φ₃` evaluations of `φ_r` at
/// `z = s q^(c/2)`.
pub fn verify_phi_hypergeometric(r: i64, s: i64, c: i64, cap: HalfExp) -> Result<IdentityReport> {
    let lhs = phi_at_monomial(r, s, c, cap)?;
    let rhs = phi_hypergeometric(r, s, c, cap);
    Ok(univariate_report(IdentityId::PhiHypergeometric, vec![r, s, c], &lhs, &rhs, cap))
}

/// `𝒞_q(q^(h/2) v)` and `𝒮_q(q^(h/2) v)` as power series in `v` through
/// `v^vmax`.
pub fn q_cosine_sine(h: HalfExp, vmax: i64, cap: HalfExp) -> (BivariateTruncatedSeries, BivariateTruncatedSeries) {
    let mut cos = BivariateTruncatedSeries::zero((0, vmax), cap);
    let mut sin = BivariateTruncatedSeries::zero((0, vmax), cap);
    for k in 0..=vmax {
        let n = k / 2;
        // 𝒞: (-1)^n q^(n²) / (q)_{2n} v^(2n); 𝒮: (-1)^n q^(n(n+1)) / (q)_{2n+1} v^(2n+1).
        let half = if k % 2 == 0 { 2 * n * n } else { 2 * n * (n + 1) } + h * k;
        let den = inverse_pochhammer(1, 2, 2, k as usize, cap - half);
        let term = den.shift(half).truncate(cap);
        let term = if n % 2 == 0 { term } else { -term };
        if k % 2 == 0 {
            cos.set(k, term);
        } else {
            sin.set(k, term);
        }
    }
    (cos, sin)
}

/// q-Pythagoras `𝒞_q(q^(1/2) v) 𝒞_q(v) + q^(1/2) 𝒮_q(q^(1/2) v) 𝒮_q(v) = 1`
/// through `v^vmax`.
pub fn verify_q_pythagoras(vmax: i64, cap: HalfExp) -> Result<IdentityReport> {
    let (c1, s1) = q_cosine_sine(1, vmax, cap);
    let (c0, s0) = q_cosine_sine(0, vmax, cap);
    let cc = c1.mul_power_series(&c0);
    let ss = s1.mul_power_series(&s0);
    let mut lhs = BivariateTruncatedSeries::zero((0, vmax), cap);
    for k in 0..=vmax {
        lhs.set(k, cc.coeff(k) + ss.coeff(k).shift(1).truncate(cap));
    }
    let mut rhs = BivariateTruncatedSeries::zero((0, vmax), cap);
    rhs.set(0, TruncatedQSeries::one(cap));
    let d = lhs.first_difference(&rhs);
    Ok(IdentityReport::new(IdentityId::QPythagoras, vec![vmax], cap, d))
}

/// The relative Dehn-filling sum of the standard cusp along the meridian
/// vanishes: `GY(μ; b) = 0`.
pub fn verify_gy_meridian(b: [i64; 3], cap: HalfExp) -> Result<IdentityReport> {
    let mu = Slope::new(0, 1)?;
    let lhs = rel_gy_cusp(mu, b, cap)?;
    Ok(univariate_report(IdentityId::GyMeridian, b.to_vec(), &lhs, &TruncatedQSeries::zero(cap), cap))
}

/// Coefficient of `z^(-y)` in `φ_x(z) φ_{-x}(z)`.
pub fn m004_generating_coefficient(x: i64, y: i64, cap: HalfExp) -> Result<TruncatedQSeries> {
    let bound = DegreeBound::new(Affine::constant(0))
        .tet(Affine::new(1, -x), Affine::new(1, 0))
        .tet(Affine::new(-1, x - y), Affine::new(-1, -y));
    certified_sum(&bound, cap, |e| tet_term(1, 0, &[(e - x, e), (x - y - e, -y - e)], cap))
}

/// The figure-eight index with boundary `2x μ + y λ` equals the coefficient
/// of `z^(-y)` in `φ_x(z) φ_{-x}(z)`, for every `y` in `y_window`.
pub fn verify_m004_generating(x: i64, y_window: (i64, i64), cap: HalfExp) -> Result<IdentityReport> {
    let g = fixtures::load("m004")?;
    let mut lhs = BivariateTruncatedSeries::zero((-y_window.1, -y_window.0), cap);
    let mut rhs = lhs.clone();
    for y in y_window.0..=y_window.1 {
        lhs.set(-y, index_with_boundary(&g, &BoundaryClass(vec![(2 * x, y)]), cap)?);
        rhs.set(-y, m004_generating_coefficient(x, y, cap)?);
    }
    let d = lhs.first_difference(&rhs);
    Ok(IdentityReport::new(IdentityId::M004Generating, vec![x, y_window.0, y_window.1], cap, d))
}

/// Named verification suites with their default parameter boxes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    /// `|m|, |c| <= 4`, cap 30.
    Quadratic,
    /// 50 seeded random points of `{-2..2}⁵`, cap 20.
    Pentagon,
    /// All five families on `{-5..5}²`, cap 30.
    ThreeTerm,
    /// `{-5..5}²`, cap 30.
    Sl2,
    /// `r ∈ {-3..3}`, `z`-window `[-6, 6]`, cap 20.
    Phi,
    /// All five variants, `r ∈ {-5..5}` of matching parity, cap 30.
    LinearDiagonal,
    /// Through `v¹⁰`, cap 20.
    QPythagoras,
    /// `b ∈ {-2..2}³`, cap 16.
    GyMeridian,
    /// Diagonal sum against `₃φ₃` for `r ∈ {-3..3}`, `z = ±q^(c/2)` with
    /// `|c| <= 3`, cap 20.
    PhiHypergeometric,
    /// Figure-eight generating function, `x ∈ {0,1,2}`, `y ∈ [-2, 2]`, cap 12.
    M004Generating,
    /// The suspected alternative equation; informative only.
    AlternativePhi,
}

impl Suite {
    /// Suites whose failure is a defect.
    pub const BLOCKING: [Suite; 8] = [
        Suite::Quadratic,
        Suite::Pentagon,
        Suite::ThreeTerm,
        Suite::Sl2,
        Suite::Phi,
        Suite::LinearDiagonal,
        Suite::QPythagoras,
        Suite::GyMeridian,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Quadratic => "quadratic",
            Suite::Pentagon => "pentagon",
            Suite::ThreeTerm => "three-term",
            Suite::Sl2 => "sl2",
            Suite::Phi => "phi",
            Suite::LinearDiagonal => "linear-diagonal",
            Suite::QPythagoras => "q-pythagoras",
            Suite::GyMeridian => "gy-meridian",
            Suite::PhiHypergeometric => "phi-hypergeometric",
            Suite::M004Generating => "m004-generating",
            Suite::AlternativePhi => "alternative-phi",
        }
    }

    pub fn all() -> Vec<Suite> {
        let mut v = Suite::BLOCKING.to_vec();
        v.extend([Suite::PhiHypergeometric, Suite::M004Generating, Suite::AlternativePhi]);
        v
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::all().into_iter().find(|s| s.name() == name)
    }

    /// Default cap of the suite.
    pub fn default_cap(self) -> HalfExp {
        match self {
            Suite::Quadratic | Suite::ThreeTerm | Suite::Sl2 | Suite::LinearDiagonal => 30,
            Suite::GyMeridian => 16,
            Suite::M004Generating | Suite::AlternativePhi => 12,
            _ => 20,
        }
    }

    /// Parameters of the suite with their default inclusive ranges.
    pub fn params(self) -> &'static [(&'static str, (i64, i64))] {
        match self {
            Suite::Quadratic => &[("m", (-4, 4)), ("c", (-4, 4))],
            Suite::Pentagon => &[("m1", (-2, 2)), ("m2", (-2, 2)), ("x1", (-2, 2)), ("x2", (-2, 2)), ("x3", (-2, 2))],
            Suite::ThreeTerm | Suite::Sl2 => &[("m", (-5, 5)), ("e", (-5, 5))],
            Suite::Phi => &[("r", (-3, 3)), ("z", (-6, 6))],
            Suite::LinearDiagonal => &[("r", (-5, 5))],
            Suite::QPythagoras => &[("v", (0, 10))],
            Suite::GyMeridian => &[("b1", (-2, 2)), ("b2", (-2, 2)), ("b3", (-2, 2))],
            Suite::PhiHypergeometric => &[("r", (-3, 3)), ("c", (-3, 3))],
            Suite::M004Generating => &[("x", (0, 2)), ("y", (-2, 2))],
            Suite::AlternativePhi => &[("r", (-3, 3)), ("z", (-4, 4))],
        }
    }
}

/// Inclusive parameter ranges overriding a suite's default box, written
/// `m=-4..4,c=-4..4`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamBox(pub BTreeMap<String, (i64, i64)>);

impl ParamBox {
    /// Range of `name` for `suite`, after checking that every override
    /// names a parameter of the suite.
    fn ranges(&self, suite: Suite) -> Result<BTreeMap<&'static str, (i64, i64)>> {
        for name in self.0.keys() {
            if !suite.params().iter().any(|(p, _)| p == name) {
                let known: Vec<&str> = suite.params().iter().map(|(p, _)| *p).collect();
                return Err(Error::InvalidArgument(format!(
                    "suite {} has no parameter `{name}` (parameters: {})",
                    suite.name(),
                    known.join(", ")
                )));
            }
        }
        Ok(suite.params().iter().map(|&(p, d)| (p, self.0.get(p).copied().unwrap_or(d))).collect())
    }
}

impl std::str::FromStr for ParamBox {
    type Err = Error;

    fn from_str(s: &str) -> Result<ParamBox> {
        let mut out = BTreeMap::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let bad = || Error::InvalidArgument(format!("cannot parse box entry `{part}`; expected name=lo..hi"));
            let (name, range) = part.split_once('=').ok_or_else(bad)?;
            let (lo, hi) = match range.split_once("..") {
                Some((lo, hi)) => (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?),
                None => {
                    let v: i64 = range.trim().parse().map_err(|_| bad())?;
                    (v, v)
                }
            };
            if lo > hi {
                return Err(bad());
            }
            out.insert(name.trim().to_string(), (lo, hi));
        }
        Ok(ParamBox(out))
    }
}

fn span((lo, hi): (i64, i64)) -> Vec<i64> {
    (lo..=hi).collect()
}

fn grid(axes: &[Vec<i64>]) -> Vec<Vec<i64>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect()
    })
}

/// Number of random points sampled by the pentagon suite.
const PENTAGON_SAMPLES: usize = 50;

/// Runs a suite over its parameter box, in parallel. `cap` overrides the
/// default cap and `bx` the default ranges. Reports are in a deterministic
/// order.
pub fn run_suite(suite: Suite, cap: Option<HalfExp>, bx: &ParamBox) -> Result<Vec<IdentityReport>> {
    let cap = cap.unwrap_or(suite.default_cap());
    let ranges = bx.ranges(suite)?;
    let axes: Vec<Vec<i64>> = suite.params().iter().map(|(p, _)| span(ranges[p])).collect();
    let points = grid(&axes);
    match suite {
        Suite::Quadratic => points.into_par_iter().map(|p| verify_quadratic(p[0], p[1], cap)).collect(),
        Suite::Pentagon => {
            let mut rng = StdRng::seed_from_u64(0x7e7_5eed);
            let sample: Vec<Vec<i64>> = if points.len() <= PENTAGON_SAMPLES {
                points
            } else {
                (0..PENTAGON_SAMPLES).map(|_| points[rng.gen_range(0..points.len())].clone()).collect()
            };
            sample.into_par_iter().map(|p| verify_pentagon(p[0], p[1], p[2], p[3], p[4], cap)).collect()
        }
        Suite::ThreeTerm => ThreeTermFamily::ALL
            .iter()
            .flat_map(|&f| points.iter().map(move |p| (f, p[0], p[1])))
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|(f, m, e)| verify_three_term(f, m, e, cap))
            .collect(),
        Suite::Sl2 => points.into_par_iter().map(|p| verify_sl2_symmetry(p[0], p[1], cap)).collect(),
        Suite::Phi => span(ranges["r"]).into_par_iter().map(|r| verify_phi_identity(r, ranges["z"], cap)).collect(),
        Suite::LinearDiagonal => DiagonalVariant::ALL
            .iter()
            .flat_map(|&v| span(ranges["r"]).into_iter().filter(move |r| v.even() == (r.rem_euclid(2) == 0)).map(move |r| (v, r)))
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|(v, r)| verify_linear_diagonal(v, r, cap))
            .collect(),
        Suite::QPythagoras => Ok(vec![verify_q_pythagoras(ranges["v"].1, cap)?]),
        Suite::GyMeridian => points.into_par_iter().map(|p| verify_gy_meridian([p[0], p[1], p[2]], cap)).collect(),
        Suite::PhiHypergeometric => points
            .iter()
            .flat_map(|p| [-1i64, 1].map(|s| (p[0], s, p[1])))
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|(r, s, c)| verify_phi_hypergeometric(r, s, c, cap))
            .collect(),
        Suite::M004Generating => {
            span(ranges["x"]).into_par_iter().map(|x| verify_m004_generating(x, ranges["y"], cap)).collect()
        }
        Suite::AlternativePhi => {
            span(ranges["r"]).into_par_iter().map(|r| verify_alternative_phi(r, ranges["z"], cap)).collect()
        }
    }
}
