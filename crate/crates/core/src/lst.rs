//! Farey combinatorics of layered solid tori and the relative indices of
//! the standard cusp and of layered solid tori.
//!
//! A slope `p/q` stands for the class `α = p λ + q μ` on the boundary of the
//! standard cusp. Layered solid tori are described by a fold (which edge of
//! the central Farey triangle the bottom torus is folded across) and a word
//! in the layering moves `R` and `L`. The relative index of a layered solid
//! torus is computed by the layering recursion starting from the folded
//! torus; the relative Dehn-filling sum of the standard cusp is computed
//! from the closed-form cusp index. Every sum over an internal edge weight
//! is truncated on a window certified by [`crate::bounds`].

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bounds::{certified_window, Affine, DegreeBound, Kink};
use crate::error::{Error, Result};
use crate::qseries::{j_tet, min_degree_j, min_degree_tet, tet_index, HalfExp, SeriesAccumulator, TruncatedQSeries};

/// Half boundary-edge coefficients `(b₁, b₂, b₃)` on the three edges of the
/// two-triangle torus.
pub type EdgeTriple = [i64; 3];

/// A primitive slope `p/q`, identified with `-p/-q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slope {
    pub p: i64,
    pub q: i64,
}

impl Slope {
    /// Normalizes the sign so that `q > 0`, or `q = 0` and `p = 1`.
    pub fn new(p: i64, q: i64) -> Result<Slope> {
        if num_integer::gcd(p, q) != 1 {
            return Err(Error::InvalidArgument(format!("slope {p}/{q} is not primitive")));
        }
        if q < 0 || (q == 0 && p < 0) {
            Ok(Slope { p: -p, q: -q })
        } else {
            Ok(Slope { p, q })
        }
    }

    pub fn vector(&self) -> (i64, i64) {
        (self.p, self.q)
    }

    /// A dual class `β` with `p β_q - q β_p = 1`, from the extended Euclidean
    /// algorithm, reduced modulo `α` to the smallest nonnegative first
    /// coordinate (second coordinate when `p = 0`).
    pub fn dual(&self) -> (i64, i64) {
        let (g, u, v) = ext_gcd(self.p, self.q);
        debug_assert_eq!(g.abs(), 1);
        // p u + q v = g, so β = (-v, u) g satisfies p β_q - q β_p = g² = 1.
        let (mut bp, mut bq) = (-v * g, u * g);
        // Reduce modulo α to a canonical representative.
        if self.p != 0 {
            let t = bp.div_euclid(self.p.abs()) * self.p.signum();
            bp -= t * self.p;
            bq -= t * self.q;
        } else {
            let t = bq.div_euclid(self.q.abs()) * self.q.signum();
            bp -= t * self.p;
            bq -= t * self.q;
        }
        (bp, bq)
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = num_integer::Integer::extended_gcd(&a, &b);
    (e.gcd, e.x, e.y)
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Slope> {
        let bad = || Error::InvalidArgument(format!("cannot parse slope `{s}`; expected p/q"));
        let (p, q) = s.trim().split_once('/').ok_or_else(bad)?;
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        Slope::new(p, q)
    }
}

/// A layering move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    R,
    L,
}

impl Move {
    fn matrix(self) -> [[i64; 2]; 2] {
        match self {
            Move::R => [[1, 0], [1, 1]],
            Move::L => [[1, 1], [0, 1]],
        }
    }
}

/// Edge of the central triangle across which the bottom torus is folded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Fold {
    /// Fold across `(1,1)`; meridian `(1,-1)`, slopes in `(-∞, 0)`.
    Case1,
    /// Fold across `(1,0)`; meridian `(1,2)`, slopes in `(0, 1)`.
    Case2,
    /// Fold across `(0,1)`; meridian `(2,1)`, slopes in `(1, ∞)`.
    Case3,
    /// The degenerate solid torus LST(0,1,1), reached by the slopes `0`,
    /// `1` and `∞`.
    Collapsed,
}

/// A layered solid torus: fold plus layering word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FareyWord {
    pub fold: Fold,
    pub letters: Vec<Move>,
}

impl fmt::Display for FareyWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fold = match self.fold {
            Fold::Case1 => "1",
            Fold::Case2 => "2",
            Fold::Case3 => "3",
            Fold::Collapsed => return write!(f, "LST(0,1,1)"),
        };
        let w: String = self.letters.iter().map(|m| if *m == Move::R { 'R' } else { 'L' }).collect();
        write!(f, "case {fold}: {}", if w.is_empty() { "()" } else { &w })
    }
}

fn mat_mul(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

fn mat_vec(a: [[i64; 2]; 2], v: (i64, i64)) -> (i64, i64) {
    (a[0][0] * v.0 + a[0][1] * v.1, a[1][0] * v.0 + a[1][1] * v.1)
}

/// Order-three rotation of the Farey tessellation permuting the three folds.
const U: [[i64; 2]; 2] = [[0, -1], [1, -1]];
const U_INV: [[i64; 2]; 2] = [[-1, 1], [-1, 0]];

/// The matrix `A_w = W₁ W₂ ⋯ W_k` of a word.
pub fn word_matrix(letters: &[Move]) -> [[i64; 2]; 2] {
    letters.iter().fold([[1, 0], [0, 1]], |acc, m| mat_mul(acc, m.matrix()))
}

/// Meridian slope of a layered solid torus: `U^(c-1) A_w⁻¹ (1,-1)`.
pub fn word_slope(w: &FareyWord) -> Result<Slope> {
    let a = word_matrix(&w.letters);
    let inv = [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]];
    let mut v = mat_vec(inv, (1, -1));
    let turns = match w.fold {
        Fold::Case1 => 0,
        Fold::Case2 => 1,
        Fold::Case3 => 2,
        Fold::Collapsed => return Ok(Slope { p: 1, q: 0 }),
    };
    for _ in 0..turns {
        v = mat_vec(U, v);
    }
    Slope::new(v.0, v.1)
}

/// The fold and word of the layered solid torus with meridian slope `s`.
pub fn slope_to_word(s: Slope) -> Result<FareyWord> {
    let (p, q) = s.vector();
    // Slopes 0, 1 and ∞ lead to LST(0,1,1).
    if p == 0 || q == 0 || p == q {
        return Ok(FareyWord { fold: Fold::Collapsed, letters: Vec::new() });
    }
    let (fold, turns) = if (p < 0) != (q < 0) {
        (Fold::Case1, 0)
    } else if p.abs() < q.abs() {
        (Fold::Case2, 1)
    } else {
        (Fold::Case3, 2)
    };
    let mut v = (p, q);
    for _ in 0..turns {
        v = mat_vec(U_INV, v);
    }
    // Now v lies in case 1: normalize to x > 0 > y and peel letters.
    if v.0 < 0 {
        v = (-v.0, -v.1);
    }
    if !(v.0 > 0 && v.1 < 0) {
        return Err(Error::Internal(format!("slope {s} did not reduce to the first fold: {v:?}")));
    }
    let mut rev = Vec::new();
    while v != (1, -1) {
        let (x, y) = v;
        if -y > x {
            v = (x, x + y);
            rev.push(Move::R);
        } else {
            v = (x + y, y);
            rev.push(Move::L);
        }
    }
    rev.reverse();
    Ok(FareyWord { fold, letters: rev })
}

/// Meridian edge weights `(w₁, w₂, w₁ + w₂)` of a layered solid torus.
pub fn lst_weights(w: &FareyWord) -> (i64, i64, i64) {
    if w.fold == Fold::Collapsed {
        return (0, 1, 1);
    }
    let a = word_matrix(&w.letters);
    let w1 = a[0][0] + a[1][0];
    let w2 = a[0][1] + a[1][1];
    (w1, w2, w1 + w2)
}

fn half_exact(v: i64) -> Option<i64> {
    (v.rem_euclid(2) == 0).then_some(v / 2)
}

/// Arguments of the two tetrahedral factors of the cusp index, or `None`
/// when the parity conditions fail.
fn cusp_args(x: i64, y: i64, b: EdgeTriple) -> Option<[(i64, i64); 2]> {
    let [b1, b2, b3] = b;
    Some([
        (half_exact(x - b1 + b3)?, half_exact(-y + b2 - b3)?),
        (half_exact(-x - b1 + b3)?, half_exact(y + b2 - b3)?),
    ])
}

/// Exact minimal half-degree of the relative cusp index, `None` when it
/// vanishes identically by parity.
pub fn min_degree_rel_cusp(x: i64, y: i64, b: EdgeTriple) -> Option<HalfExp> {
    let [(m1, e1), (m2, e2)] = cusp_args(x, y, b)?;
    Some(-b[2] + min_degree_tet(m1, e1) + min_degree_tet(m2, e2))
}

/// Relative index of the standard cusp with boundary `x λ + y μ` and half
/// boundary-edge coefficients `b`.
pub fn rel_cusp_index(x: i64, y: i64, b: EdgeTriple, cap: HalfExp) -> TruncatedQSeries {
    let Some([(m1, e1), (m2, e2)]) = cusp_args(x, y, b) else {
        return TruncatedQSeries::zero(cap);
    };
    let d1 = min_degree_tet(m1, e1);
    let d2 = min_degree_tet(m2, e2);
    let inner = cap + b[2];
    if d1 + d2 > inner {
        return TruncatedQSeries::zero(cap);
    }
    let f1 = tet_index(m1, e1, inner - d2);
    let f2 = tet_index(m2, e2, inner - d1);
    (&f1 * &f2).truncate(inner).mul_signed_half_power(-b[2]).truncate(cap)
}

/// Lower bound `-min(b₁, b₂)` for the degree of the relative index of any
/// first-fold layered solid torus. It holds for the folded torus and is
/// preserved by both layering moves since `deg J(b₁, b₂, c) >= -min(b₁, b₂)`.
pub fn lst_degree_floor(b: EdgeTriple) -> HalfExp {
    -b[0].min(b[1])
}

/// Memoized evaluation of the layering recursion for one word.
pub struct LstTable {
    letters: Vec<Move>,
    memo: HashMap<(usize, EdgeTriple), TruncatedQSeries>,
}

impl LstTable {
    /// Prepares the recursion for a first-fold word.
    pub fn new(letters: &[Move]) -> Self {
        Self { letters: letters.to_vec(), memo: HashMap::new() }
    }

    /// Relative index of the layered solid torus given by the first `len`
    /// letters.
    pub fn eval(&mut self, len: usize, b: EdgeTriple, cap: HalfExp) -> Result<TruncatedQSeries> {
        if cap < lst_degree_floor(b) {
            return Ok(TruncatedQSeries::zero(cap));
        }
        if let Some(s) = self.memo.get(&(len, b)) {
            if s.cap() >= cap {
                return Ok(s.truncate(cap));
            }
        }
        let out = self.compute(len, b, cap)?;
        self.memo.insert((len, b), out.clone());
        Ok(out)
    }

    fn compute(&mut self, len: usize, b: EdgeTriple, cap: HalfExp) -> Result<TruncatedQSeries> {
        let [b1, b2, b3] = b;
        if len == 0 {
            return Ok(if b1 == b2 {
                TruncatedQSeries::signed_half_power(-b1).truncate(cap)
            } else {
                TruncatedQSeries::zero(cap)
            });
        }
        let mv = self.letters[len - 1];
        // k = 2t + p runs over the weights of the new internal edge.
        let p = b3.rem_euclid(2);
        let k = Affine::new(2, p);
        let c = Affine::new(1, (b3 + p) / 2);
        let sub_floor = match mv {
            Move::R => Kink::NegMin(k, Affine::constant(b2)),
            Move::L => Kink::NegMin(Affine::constant(b1), k),
        };
        let bound = DegreeBound::new(k).j(Affine::constant(b1), Affine::constant(b2), c).kink(sub_floor);
        let Some((lo, hi)) = certified_window(&bound, cap)? else {
            return Ok(TruncatedQSeries::zero(cap));
        };
        let mut acc = SeriesAccumulator::new(cap);
        for t in lo..=hi {
            if bound.at(t) > cap {
                continue;
            }
            let kv = k.at(t);
            let cv = c.at(t);
            let sub_b = match mv {
                Move::R => [kv, b2, b1],
                Move::L => [b1, kv, b2],
            };
            let dj = min_degree_j(b1, b2, cv);
            let sub = self.eval(len - 1, sub_b, cap - kv - dj)?;
            let Some(ds) = sub.min_exp() else { continue };
            let j = j_tet(b1, b2, cv, cap - kv - ds);
            let term = (&j * &sub).mul_signed_half_power(kv).truncate(cap);
            acc.add(&term);
        }
        Ok(acc.finish())
    }
}

/// Relative index of the layered solid torus `w` with half boundary-edge
/// coefficients `b`. The second and third folds are the images of the first
/// under the order-three symmetry, which cycles the boundary edges.
pub fn rel_lst_index(w: &FareyWord, b: EdgeTriple, cap: HalfExp) -> Result<TruncatedQSeries> {
    let [b1, b2, b3] = b;
    let b = match w.fold {
        Fold::Collapsed => return Ok(TruncatedQSeries::zero(cap)),
        Fold::Case1 => b,
        Fold::Case2 => [b2, b3, b1],
        Fold::Case3 => [b3, b1, b2],
    };
    LstTable::new(&w.letters).eval(w.letters.len(), b, cap)
}

/// [`rel_lst_index`] for the layered solid torus with meridian slope `s`.
pub fn rel_lst_index_slope(s: Slope, b: EdgeTriple, cap: HalfExp) -> Result<TruncatedQSeries> {
    rel_lst_index(&slope_to_word(s)?, b, cap)
}

/// Divides every coefficient by two, failing if one is odd.
pub(crate) fn halve(s: &TruncatedQSeries) -> Result<TruncatedQSeries> {
    let two = num_bigint::BigInt::from(2);
    let mut terms = Vec::with_capacity(s.term_count());
    for (e, c) in s.terms() {
        if (c % &two) != num_bigint::BigInt::from(0) {
            return Err(Error::Internal(format!("odd coefficient {c} at q^({e}/2) before halving")));
        }
        terms.push((e, c / &two));
    }
    Ok(TruncatedQSeries::from_terms(terms, s.cap()))
}

/// Relative Dehn-filling sum of the standard cusp along `α` with dual `β`:
/// `½ Σ_k (-1)^k ((q^(k/2) + q^(-k/2)) I(kα; b) - I(kα + 2β; b) - I(kα - 2β; b))`.
pub fn rel_gy_cusp_with_dual(alpha: Slope, beta: (i64, i64), b: EdgeTriple, cap: HalfExp) -> Result<TruncatedQSeries> {
    let (a1, a2) = alpha.vector();
    if (a1 * beta.1 - a2 * beta.0).abs() != 1 {
        return Err(Error::InvalidArgument(format!("{beta:?} is not dual to {alpha}")));
    }
    let [b1, b2, b3] = b;
    let mut acc = SeriesAccumulator::new(cap);
    for side in [0i64, 2, -2] {
        for p in [0i64, 1] {
            // k = 2t + p; boundary (x, y) = k α + side β.
            let x = Affine::new(2 * a1, p * a1 + side * beta.0);
            let y = Affine::new(2 * a2, p * a2 + side * beta.1);
            let halve_affine = |u: Affine| -> Option<Affine> {
                (u.a % 2 == 0 && u.b.rem_euclid(2) == 0).then(|| Affine::new(u.a / 2, u.b / 2))
            };
            let args = (
                halve_affine(Affine::new(x.a, x.b - b1 + b3)),
                halve_affine(Affine::new(-y.a, -y.b + b2 - b3)),
                halve_affine(Affine::new(-x.a, -x.b - b1 + b3)),
                halve_affine(Affine::new(y.a, y.b + b2 - b3)),
            );
            let (Some(m1), Some(e1), Some(m2), Some(e2)) = args else { continue };
            let mut bound = DegreeBound::new(Affine::constant(-b3)).tet(m1, e1).tet(m2, e2);
            if side == 0 {
                bound = bound.kink(Kink::NegAbs(Affine::new(2, p)));
            }
            let Some((lo, hi)) = certified_window(&bound, cap)? else { continue };
            for t in lo..=hi {
                if bound.at(t) > cap {
                    continue;
                }
                let k = 2 * t + p;
                let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
                let (xv, yv) = (x.at(t), y.at(t));
                if side == 0 {
                    let ak = k.abs();
                    let wide = rel_cusp_index(xv, yv, b, cap + ak);
                    let up = wide.truncate(cap - ak).shift(ak);
                    let down = wide.shift(-ak);
                    for part in [up, down] {
                        acc.add(&if sign > 0 { part } else { -part });
                    }
                } else {
                    let part = rel_cusp_index(xv, yv, b, cap);
                    acc.add(&if sign > 0 { -part } else { part });
                }
            }
        }
    }
    halve(&acc.finish())
}

/// [`rel_gy_cusp_with_dual`] with the canonical dual class of `α`.
pub fn rel_gy_cusp(alpha: Slope, b: EdgeTriple, cap: HalfExp) -> Result<TruncatedQSeries> {
    rel_gy_cusp_with_dual(alpha, alpha.dual(), b, cap)
}
