//! Certified enumeration of Q-normal classes under a degree cap.
//!
//! Classes are taken modulo tetrahedral solutions and represented by their
//! minimal nonnegative representative (some quad coordinate is zero in every
//! tetrahedron). The search splits into quad-choice subproblems, one per
//! choice of a vanishing quad in each tetrahedron. On such a face of the
//! nonnegative orthant the degree `-χ(S) + δ(S)` of a class is a quadratic
//! function with nonnegative cross terms, so a Hilbert basis of the face
//! together with a branch-and-bound over nonnegative combinations finds every
//! class of degree at most the cap. The face bases come from [`crate::cone`].
//!
//! All degrees in this module are kept doubled (in units of `q^(1/4)`) so
//! that half-integer Euler characteristics of rays stay integral.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cone::{minimal_translates, RecessionCone};
use crate::error::{Error, Result};
use crate::lattice::{self, Q};
use crate::qseries::HalfExp;
use crate::triangulation::{double_arc, double_arc_pair, BoundaryClass, GluingData};

/// Linear condition on the boundary of the enumerated classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryConstraint {
    /// `∂S = 0` (and zero boundary-edge coefficients for relative data).
    Closed,
    /// `∂S = γ`.
    Fixed(BoundaryClass),
    /// `∂S · α = value` on one cusp, `∂S` fixed on the others.
    Intersection { cusp: usize, alpha: (i64, i64), value: i64, others: BoundaryClass },
    /// Prescribed half boundary-edge coefficients `b` on the exposed boundary
    /// and boundary class `omega` on the cusps.
    BoundaryEdges { b: Vec<i64>, omega: BoundaryClass },
}

/// A minimal class together with its degree data.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnumeratedClass {
    pub quads: Vec<i64>,
    /// `-χ(S)`; an integer on every emitted class.
    pub neg_chi: i64,
    /// `-χ(S) + δ(S)` in half units.
    pub degree: HalfExp,
    pub boundary: BoundaryClass,
}

/// Generators of the nonnegative integer solutions of a linear system.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeBasis {
    /// Hilbert basis of the recession cone.
    pub rays: Vec<Vec<i64>>,
    /// Minimal solutions of the inhomogeneous system.
    pub translates: Vec<Vec<i64>>,
    pub infeasible: bool,
}

/// An integer linear system `A S = r` on quad space together with the
/// functionals the search needs.
#[derive(Clone, Debug)]
pub struct Query {
    pub rows: Vec<Vec<i64>>,
    pub rhs: Vec<i64>,
    /// `-χ(S) = chi · S + chi_offset`.
    pub chi: Vec<Q>,
    pub chi_offset: Q,
    /// Optional adjustments: the bound is `min_s (deg(S) + shift_s(S))`.
    pub shifts: Vec<Vec<Q>>,
    /// Report divergence as a Dehn-filling divergence rather than a failure
    /// of 1-efficiency.
    pub filling: bool,
    /// Drop divergent rays instead of failing; the result is then no longer
    /// certified.
    pub drop_divergent: bool,
}

/// Enumeration backend.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Backend {
    /// Hilbert basis per face plus branch-and-bound over combinations.
    Cone,
    /// Exhaustive scan of a certified coordinate box per face.
    Box,
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Query {
    /// Builds the linear system for a boundary constraint.
    pub fn new(g: &GluingData, c: &BoundaryConstraint) -> Result<Query> {
        let chi = g.neg_euler_functional();
        let mut rows = g.matching_rows();
        let mut rhs = vec![0; rows.len()];
        let brows = g.boundary_rows();
        let fix = |rows: &mut Vec<Vec<i64>>, rhs: &mut Vec<i64>, k: usize, x: i64, y: i64| {
            rows.push(brows[k].0.clone());
            rhs.push(x);
            rows.push(brows[k].1.clone());
            rhs.push(y);
        };
        let check_len = |b: &BoundaryClass| -> Result<()> {
            if b.0.len() != g.r() {
                return Err(Error::InvalidArgument(format!(
                    "boundary class has {} cusps, triangulation has {}",
                    b.0.len(),
                    g.r()
                )));
            }
            Ok(())
        };
        let mut chi_offset = Q::zero();
        match c {
            BoundaryConstraint::Closed | BoundaryConstraint::Fixed(_) => {
                let gamma = match c {
                    BoundaryConstraint::Fixed(b) => b.clone(),
                    _ => BoundaryClass::zero(g.r()),
                };
                check_len(&gamma)?;
                for (k, &(x, y)) in gamma.0.iter().enumerate() {
                    fix(&mut rows, &mut rhs, k, x, y);
                }
                if g.is_relative() {
                    chi_offset = add_boundary_edges(g, &chi, &vec![0; g.boundary_edges.len()], &mut rows, &mut rhs)?;
                }
            }
            BoundaryConstraint::Intersection { cusp, alpha, value, others } => {
                check_len(others)?;
                if *cusp >= g.r() {
                    return Err(Error::InvalidArgument(format!("cusp {cusp} out of range")));
                }
                let (a, b) = *alpha;
                if num_integer::gcd(a, b) != 1 {
                    return Err(Error::InvalidArgument(format!("slope ({a},{b}) is not primitive")));
                }
                for (k, &(x, y)) in others.0.iter().enumerate() {
                    if k != *cusp {
                        fix(&mut rows, &mut rhs, k, x, y);
                    }
                }
                let (bx, by) = &brows[*cusp];
                rows.push(bx.iter().zip(by).map(|(x, y)| b * x - a * y).collect());
                rhs.push(*value);
                if g.is_relative() {
                    chi_offset = add_boundary_edges(g, &chi, &vec![0; g.boundary_edges.len()], &mut rows, &mut rhs)?;
                }
            }
            BoundaryConstraint::BoundaryEdges { b, omega } => {
                check_len(omega)?;
                for (k, &(x, y)) in omega.0.iter().enumerate() {
                    fix(&mut rows, &mut rhs, k, x, y);
                }
                chi_offset = add_boundary_edges(g, &chi, b, &mut rows, &mut rhs)?;
            }
        }
        Ok(Query { rows, rhs, chi, chi_offset, shifts: Vec::new(), filling: false, drop_divergent: false })
    }

    /// `-χ(S)` for a class satisfying the system.
    pub fn neg_chi(&self, s: &[i64]) -> Q {
        lattice::apply(&self.chi, s) + self.chi_offset
    }

    pub fn satisfied_by(&self, s: &[i64]) -> bool {
        self.rows.iter().zip(&self.rhs).all(|(r, &v)| dot(r, s) == v)
    }
}

/// Adds the conditions `S - Σ (b_i/2) E_i ∈ span(kept solutions)` and
/// returns the constant part of `-χ`.
fn add_boundary_edges(
    g: &GluingData,
    chi: &[Q],
    b: &[i64],
    rows: &mut Vec<Vec<i64>>,
    rhs: &mut Vec<i64>,
) -> Result<Q> {
    let doubled = g.doubled_boundary_part(b)?;
    for w in g.span_equations() {
        rows.push(w.iter().map(|x| 2 * x).collect());
        rhs.push(dot(&w, &doubled));
    }
    Ok(-lattice::apply(chi, &doubled) / Q::from_integer(2))
}

/// Generators of all nonnegative solutions of a constraint on the full
/// orthant (tetrahedral solutions included among the rays).
pub fn fundamental_solutions(g: &GluingData, c: &BoundaryConstraint) -> Result<ConeBasis> {
    let q = Query::new(g, c)?;
    let k = g.width();
    let cone = RecessionCone::new(&q.rows, k)?;
    let translates = minimal_translates(&q.rows, &q.rhs, k, &cone)?;
    let rays = cone.hilbert;
    Ok(ConeBasis { infeasible: translates.is_empty(), rays, translates })
}

type ConeCache = Mutex<HashMap<Vec<Vec<i64>>, Arc<RecessionCone>>>;

/// Recession cones keyed by the face-restricted system.
fn cone_cache() -> &'static ConeCache {
    static CACHE: OnceLock<ConeCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// One quad-choice subproblem: the face where quad `zero[j]` of tetrahedron
/// `j` vanishes.
#[derive(Clone, Debug)]
struct Face {
    zero: Vec<usize>,
    vars: Vec<usize>,
}

fn faces(n: usize) -> Vec<Face> {
    let total = 3usize.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut zero = Vec::with_capacity(n);
            for _ in 0..n {
                zero.push(code % 3);
                code /= 3;
            }
            let vars = (0..3 * n).filter(|&c| zero[c / 3] != c % 3).collect();
            Face { zero, vars }
        })
        .collect()
}

/// The face a minimal class is assigned to: the first vanishing quad in
/// each tetrahedron.
fn home_face(s: &[i64]) -> Option<Vec<usize>> {
    s.chunks(3).map(|t| t.iter().position(|&x| x == 0)).collect()
}

/// Rays and translates of the restriction of `q` to a face, as full-length
/// vectors.
fn face_basis(q: &Query, face: &Face, width: usize) -> Result<(Arc<Vec<Vec<i64>>>, Vec<Vec<i64>>)> {
    let sub: Vec<Vec<i64>> = q.rows.iter().map(|r| face.vars.iter().map(|&c| r[c]).collect()).collect();
    let cached = cone_cache().lock().unwrap().get(&sub).cloned();
    let cone = match cached {
        Some(c) => c,
        None => {
            let c = Arc::new(RecessionCone::new(&sub, face.vars.len())?);
            cone_cache().lock().unwrap().insert(sub.clone(), c.clone());
            c
        }
    };
    let local_tr = minimal_translates(&sub, &q.rhs, face.vars.len(), &cone)?;
    let lift = |x: &Vec<i64>| {
        let mut v = vec![0; width];
        for (&c, &val) in face.vars.iter().zip(x) {
            v[c] = val;
        }
        v
    };
    let rays = Arc::new(cone.hilbert.iter().map(lift).collect());
    Ok((rays, local_tr.iter().map(lift).collect()))
}

/// Doubled degree data of a vector: `2(-χ)` and doubled shifts.
#[derive(Clone, Debug)]
struct Scored {
    v: Vec<i64>,
    chi2: i64,
    self2: i64,
    sh2: Vec<i64>,
}

fn doubled_integer(x: Q, what: &str) -> Result<i64> {
    lattice::as_integer(&(x * Q::from_integer(2)))
        .ok_or_else(|| Error::Internal(format!("{what} is not a half-integer: {x}")))
}

fn score(q: &Query, v: Vec<i64>, with_offset: bool) -> Result<Scored> {
    let mut chi = lattice::apply(&q.chi, &v);
    if with_offset {
        chi += q.chi_offset;
    }
    let chi2 = doubled_integer(chi, "-χ")?;
    let self2 = 2 * double_arc(&v);
    let sh2 = if q.shifts.is_empty() {
        vec![0]
    } else {
        q.shifts.iter().map(|f| doubled_integer(lattice::apply(f, &v), "degree shift")).collect::<Result<_>>()?
    };
    Ok(Scored { v, chi2, self2, sh2 })
}

/// Minimum over integers `n >= 0` of `b n + d n^2`.
fn min_quadratic(b: i64, d: i64) -> i64 {
    if d == 0 {
        return if b >= 0 { 0 } else { i64::MIN / 4 };
    }
    let mut best = 0;
    let center = (-b).div_euclid(2 * d);
    for n in [center, center + 1] {
        if n > 0 {
            best = best.min(b * n + d * n * n);
        }
    }
    best
}

/// Shift under which the degree fails to grow along ray `r` from some
/// translate. Cross terms `δ(S, r)` are nonnegative on a face, so growth from
/// every translate implies growth from every class of the face.
fn divergent_shift(r: &Scored, trs: &[Scored]) -> Option<i64> {
    if r.self2 > 0 {
        return None;
    }
    r.sh2.iter().copied().find(|&s| {
        let lin = r.chi2 + s;
        lin < 0 || (lin == 0 && trs.iter().any(|t| double_arc_pair(&t.v, &r.v) == 0))
    })
}

/// Checks that every ray makes the bound grow. With `drop_divergent`,
/// offending rays are removed and returned instead.
fn certify_rays(q: &Query, rays: Vec<Scored>, trs: &[Scored]) -> Result<(Vec<Scored>, Vec<Vec<i64>>)> {
    let mut kept = Vec::with_capacity(rays.len());
    let mut dropped = Vec::new();
    for r in rays {
        match divergent_shift(&r, trs) {
            None => kept.push(r),
            Some(_) if q.drop_divergent => dropped.push(r.v),
            Some(s) => {
                return Err(if q.filling {
                    Error::GyDivergent { witness: r.v }
                } else {
                    Error::NotOneEfficient { neg_chi_half: r.chi2 + s, witness: r.v }
                })
            }
        }
    }
    Ok((kept, dropped))
}

/// Result of an enumeration: classes sorted lexicographically.
#[derive(Clone, Debug, Default)]
pub struct Enumeration {
    pub classes: Vec<EnumeratedClass>,
    /// Number of faces with a nonempty translate set.
    pub feasible_faces: usize,
    /// Divergent rays removed under `drop_divergent`.
    pub dropped_rays: Vec<Vec<i64>>,
}

/// Enumerates every minimal class satisfying `q` whose bound
/// `min_s(deg(S) + shift_s(S))` is at most `cap`.
pub fn enumerate(g: &GluingData, q: &Query, cap: HalfExp, backend: Backend) -> Result<Enumeration> {
    let width = g.width();
    let cap2 = 2 * cap;
    type FaceResult = (bool, Vec<EnumeratedClass>, Vec<Vec<i64>>);
    let per_face: Vec<Result<FaceResult>> = faces(g.n)
        .into_par_iter()
        .map(|face| {
            let (rays, translates) = face_basis(q, &face, width)?;
            if translates.is_empty() {
                return Ok((false, Vec::new(), Vec::new()));
            }
            let rays: Vec<Scored> = rays.iter().map(|r| score(q, r.clone(), false)).collect::<Result<_>>()?;
            let trs: Vec<Scored> = translates.into_iter().map(|t| score(q, t, true)).collect::<Result<_>>()?;
            let (rays, dropped) = certify_rays(q, rays, &trs)?;
            let mut out: BTreeSet<Vec<i64>> = BTreeSet::new();
            match backend {
                Backend::Cone => cone_search(&face, &rays, &trs, cap2, &mut out),
                Backend::Box => box_search(q, &face, &rays, &trs, cap2, width, &mut out)?,
            }
            let classes = out
                .into_iter()
                .map(|s| make_class(g, q, s))
                .collect::<Result<Vec<_>>>()?;
            Ok((true, classes, dropped))
        })
        .collect();
    let mut classes = Vec::new();
    let mut feasible_faces = 0;
    let mut dropped_rays = Vec::new();
    for r in per_face {
        let (feasible, cs, dr) = r?;
        feasible_faces += usize::from(feasible);
        classes.extend(cs);
        dropped_rays.extend(dr);
    }
    classes.sort_by(|a, b| a.quads.cmp(&b.quads));
    dropped_rays.sort();
    dropped_rays.dedup();
    Ok(Enumeration { classes, feasible_faces, dropped_rays })
}

fn make_class(g: &GluingData, q: &Query, s: Vec<i64>) -> Result<EnumeratedClass> {
    let nc = q.neg_chi(&s);
    let neg_chi = lattice::as_integer(&nc)
        .ok_or_else(|| Error::Internal(format!("quarter-integer exponent: -χ = {nc} for class {s:?}")))?;
    let degree = neg_chi + double_arc(&s);
    let boundary = g.boundary(&s);
    Ok(EnumeratedClass { quads: s, neg_chi, degree, boundary })
}

fn accept(face: &Face, s: &[i64]) -> bool {
    home_face(s).as_deref() == Some(face.zero.as_slice())
}

struct Search<'a> {
    face: &'a Face,
    rays: &'a [Scored],
    /// `suffix[s][i]`: lower bound for the contribution of rays `i..`.
    suffix: Vec<Vec<i64>>,
    cap2: i64,
}

fn cone_search(face: &Face, rays: &[Scored], trs: &[Scored], cap2: i64, out: &mut BTreeSet<Vec<i64>>) {
    let ns = rays.first().map_or_else(|| trs.first().map_or(1, |t| t.sh2.len()), |r| r.sh2.len());
    let mut suffix = vec![vec![0i64; rays.len() + 1]; ns];
    for (s, row) in suffix.iter_mut().enumerate() {
        for i in (0..rays.len()).rev() {
            let r = &rays[i];
            row[i] = row[i + 1] + min_quadratic(r.chi2 + r.sh2[s], r.self2);
        }
    }
    let search = Search { face, rays, suffix, cap2 };
    for t in trs {
        let d2 = t.chi2 + t.self2;
        search.descend(0, t.v.clone(), d2, t.sh2.clone(), out);
    }
}

impl Search<'_> {
    fn bound(&self, i: usize, d2: i64, sh: &[i64]) -> i64 {
        sh.iter().enumerate().map(|(s, x)| d2 + x + self.suffix[s][i]).min().unwrap_or(i64::MAX)
    }

    fn descend(&self, i: usize, s: Vec<i64>, d2: i64, sh: Vec<i64>, out: &mut BTreeSet<Vec<i64>>) {
        if i == self.rays.len() {
            if sh.iter().map(|x| d2 + x).min().unwrap_or(i64::MAX) <= self.cap2 && accept(self.face, &s) {
                out.insert(s);
            }
            return;
        }
        let r = &self.rays[i];
        let b0 = r.chi2 + double_arc_pair(&s, &r.v) * 2;
        let mut cur = s;
        let mut n: i64 = 0;
        loop {
            let dn = d2 + n * b0 + n * n * r.self2;
            let shn: Vec<i64> = sh.iter().zip(&r.sh2).map(|(a, b)| a + n * b).collect();
            if self.bound(i + 1, dn, &shn) <= self.cap2 {
                self.descend(i + 1, cur.clone(), dn, shn.clone(), out);
            }
            // Stop once every branch is past the cap and no longer decreasing.
            let done = shn.iter().enumerate().all(|(k, x)| {
                let slope = b0 + r.sh2[k] + r.self2 * (2 * n + 1);
                d2 + n * b0 + n * n * r.self2 + x + self.suffix[k][i + 1] > self.cap2 && slope >= 0
            });
            if done {
                break;
            }
            for (c, v) in cur.iter_mut().zip(&r.v) {
                *c += v;
            }
            n += 1;
        }
    }
}

/// Upper bounds on the coefficient of each ray, then an exhaustive scan of
/// the resulting coordinate box.
fn box_search(
    q: &Query,
    face: &Face,
    rays: &[Scored],
    trs: &[Scored],
    cap2: i64,
    width: usize,
    out: &mut BTreeSet<Vec<i64>>,
) -> Result<()> {
    let ns = trs[0].sh2.len();
    let mut hi = vec![0i64; width];
    for t in trs {
        for s in 0..ns {
            let mins: Vec<i64> = rays.iter().map(|r| min_quadratic(r.chi2 + r.sh2[s], r.self2)).collect();
            let total_min: i64 = mins.iter().sum();
            let base = t.chi2 + t.self2 + t.sh2[s];
            let mut extent = t.v.clone();
            for (i, r) in rays.iter().enumerate() {
                let budget = cap2 - base - (total_min - mins[i]);
                let b = r.chi2 + r.sh2[s];
                let mut n = 0i64;
                let mut nmax = -1i64;
                loop {
                    let val = b * n + r.self2 * n * n;
                    if val <= budget {
                        nmax = n;
                    } else if b + r.self2 * (2 * n + 1) >= 0 {
                        break;
                    }
                    n += 1;
                }
                if nmax > 0 {
                    for (e, v) in extent.iter_mut().zip(&r.v) {
                        *e += nmax * v;
                    }
                }
            }
            for (h, e) in hi.iter_mut().zip(&extent) {
                *h = (*h).max(*e);
            }
        }
    }
    let vars = &face.vars;
    let mut x = vec![0i64; width];
    loop {
        if q.satisfied_by(&x) && accept(face, &x) {
            let chi2 = doubled_integer(q.neg_chi(&x), "-χ")?;
            let d2 = chi2 + 2 * double_arc(&x);
            let b = if q.shifts.is_empty() {
                d2
            } else {
                q.shifts
                    .iter()
                    .map(|f| doubled_integer(lattice::apply(f, &x), "degree shift").map(|s| d2 + s))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .min()
                    .unwrap_or(d2)
            };
            if b <= cap2 {
                out.insert(x.clone());
            }
        }
        // Odometer over the face variables.
        let mut k = 0;
        loop {
            if k == vars.len() {
                return Ok(());
            }
            let c = vars[k];
            if x[c] < hi[c] {
                x[c] += 1;
                break;
            }
            x[c] = 0;
            k += 1;
        }
    }
}

/// The three linear systems of a Dehn filling along `alpha` on `cusp`:
/// `∂S · α = 0` (with the `|γ|` degree adjustment) and `∂S · α = ±2`.
pub fn filling_queries(g: &GluingData, cusp: usize, alpha: (i64, i64), others: &BoundaryClass) -> Result<[Query; 3]> {
    let mk = |value: i64| {
        Query::new(g, &BoundaryConstraint::Intersection { cusp, alpha, value, others: others.clone() }).map(|mut q| {
            q.filling = true;
            q
        })
    };
    let mut zero = mk(0)?;
    let (a, b) = alpha;
    let norm = Q::from_integer((a * a + b * b) as i128);
    let (bx, by) = &g.boundary_rows()[cusp];
    let k: Vec<Q> = bx.iter().zip(by).map(|(x, y)| Q::from_integer((a * x + b * y) as i128) / norm).collect();
    zero.shifts = vec![k.iter().map(|x| -*x).collect(), k];
    Ok([zero, mk(2)?, mk(-2)?])
}

/// Multiple `k` with `∂S = k α` on the filling cusp, for a class on the
/// `∂S · α = 0` side.
pub fn kernel_multiple(gamma: (i64, i64), alpha: (i64, i64)) -> i64 {
    let (x, y) = gamma;
    let (a, b) = alpha;
    if a != 0 {
        x / a
    } else {
        y / b
    }
}

/// Set of distinct boundary classes appearing in an enumeration.
pub fn boundary_classes(e: &Enumeration) -> Vec<BoundaryClass> {
    let set: HashSet<BoundaryClass> = e.classes.iter().map(|c| c.boundary.clone()).collect();
    let mut v: Vec<BoundaryClass> = set.into_iter().collect();
    v.sort();
    v
}
