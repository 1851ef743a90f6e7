//! Dehn filling: the Gang-Yonekura filled index, relative indices of
//! triangulations with exposed boundary, and the gluing of relative indices.
//!
//! The filled index sums `I^γ` over boundary classes `γ` on the filling cusp
//! with `α · γ ∈ {0, ±2}`. Instead of one index call per `γ`, each of the
//! three linear conditions `∂S · α = v` is enumerated once with the kernel
//! weight attached to every class. On the `v = 0` side the weight
//! `(-1)^k (q^(k/2) + q^(-k/2))` lowers degrees by `|k|/2`, which the
//! enumeration's degree bound accounts for. All arithmetic is over the
//! integers: the three sums are added and the total is halved exactly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::enumeration::{enumerate, filling_queries, kernel_multiple, Backend, BoundaryConstraint, EnumeratedClass};
use crate::error::{Error, Result};
use crate::index::{index_for, sum_contributions};
use crate::lst::{halve, EdgeTriple, Slope};
use crate::qseries::{HalfExp, SeriesAccumulator, TruncatedQSeries};
use crate::triangulation::{BoundaryClass, GluingData};

/// A Dehn filling of one cusp.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillRequest {
    pub cusp: usize,
    pub slope: Slope,
    pub cap: HalfExp,
    /// Boundary classes on the remaining cusps; the entry of the filled cusp
    /// is ignored.
    pub others: BoundaryClass,
}

impl FillRequest {
    /// Filling with zero boundary on every other cusp.
    pub fn new(g: &GluingData, cusp: usize, slope: Slope, cap: HalfExp) -> Self {
        Self { cusp, slope, cap, others: BoundaryClass::zero(g.r()) }
    }
}

/// Result of a filling computation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FillReport {
    pub series: TruncatedQSeries,
    /// `false` when divergent directions were dropped.
    pub certified: bool,
    pub class_count: usize,
    /// Divergent directions that were excluded, if any.
    pub divergent_witnesses: Vec<Vec<i64>>,
}

/// `|γ|`: the number of components of an embedded representative.
fn components(gamma: (i64, i64)) -> i64 {
    num_integer::gcd(gamma.0, gamma.1)
}

fn parity_sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Kernel weights of one class, as `(sign, half-degree shift)` pairs, before
/// the overall factor one half.
fn kernel_weights(c: &EnumeratedClass, cusp: usize, alpha: (i64, i64), side: i64) -> Vec<(i64, HalfExp)> {
    let gamma = c.boundary.0[cusp];
    if side == 0 {
        let k = kernel_multiple(gamma, alpha);
        let s = parity_sign(k);
        vec![(s, k.abs()), (s, -k.abs())]
    } else {
        vec![(-parity_sign(components(gamma)), 0)]
    }
}

/// The Gang-Yonekura filled index, certified through the cap.
pub fn gy_filled_index(g: &GluingData, req: &FillRequest) -> Result<TruncatedQSeries> {
    Ok(gy_filled_report(g, req, Backend::Cone, false)?.series)
}

/// Filled index with explicit backend. With `allow_divergent`, directions
/// along which the sum diverges are dropped and reported instead of failing;
/// the result is then the tail after removing those directions and is not
/// certified.
pub fn gy_filled_report(g: &GluingData, req: &FillRequest, backend: Backend, allow_divergent: bool) -> Result<FillReport> {
    if req.cusp >= g.r() {
        return Err(Error::InvalidArgument(format!("cusp {} out of range", req.cusp)));
    }
    let alpha = req.slope.vector();
    let queries = filling_queries(g, req.cusp, alpha, &req.others)?;
    let mut acc = SeriesAccumulator::new(req.cap);
    let mut class_count = 0;
    let mut witnesses = Vec::new();
    for (q, side) in queries.into_iter().zip([0i64, 2, -2]) {
        let mut q = q;
        q.drop_divergent = allow_divergent;
        let e = enumerate(g, &q, req.cap, backend)?;
        class_count += e.classes.len();
        witnesses.extend(e.dropped_rays);
        let part = sum_contributions(&e.classes, req.cap, |c| kernel_weights(c, req.cusp, alpha, side));
        acc.add(&part);
    }
    witnesses.sort();
    witnesses.dedup();
    let series = halve(&acc.finish())?;
    Ok(FillReport { series, certified: witnesses.is_empty(), class_count, divergent_witnesses: witnesses })
}

/// Relative index of a triangulation with exposed boundary: classes with
/// half boundary-edge coefficients `b` and boundary `omega` on the cusps.
pub fn rel_index_exposed(g: &GluingData, b: &[i64], omega: &BoundaryClass, cap: HalfExp) -> Result<TruncatedQSeries> {
    if !g.is_relative() {
        return Err(Error::InvalidArgument("triangulation has no exposed boundary edges".into()));
    }
    if b.len() != g.boundary_edges.len() {
        return Err(Error::InvalidArgument(format!(
            "expected {} boundary-edge coefficients, got {}",
            g.boundary_edges.len(),
            b.len()
        )));
    }
    let c = BoundaryConstraint::BoundaryEdges { b: b.to_vec(), omega: omega.clone() };
    Ok(index_for(g, &c, cap, Backend::Cone)?.series)
}

/// A relative index table with a certified floor outside its entries:
/// every triple not in `entries` has degree at least `floor(b)`.
pub struct RelTable<'a> {
    pub entries: BTreeMap<EdgeTriple, TruncatedQSeries>,
    pub floor: Box<dyn Fn(EdgeTriple) -> Option<HalfExp> + 'a>,
}

/// Gluing of two relative indices along a two-triangle torus:
/// `Σ_b (-q^(1/2))^(b₁ + b₂ + b₃) L(b) R(b)` over triples normalized by
/// `b₃ = 0`, since adding `(1,1,1)` changes a class by tetrahedral solutions
/// only.
///
/// The sum runs over the keys of `left`; every triple whose product could
/// reach the cap according to the floors must be present in both tables.
pub fn glue_indices(left: &RelTable, right: &RelTable, cap: HalfExp) -> Result<TruncatedQSeries> {
    let mut acc = SeriesAccumulator::new(cap);
    for (b, l) in &left.entries {
        if b[2] != 0 {
            continue;
        }
        let weight = b[0] + b[1];
        let Some(ld) = l.min_exp() else { continue };
        let r = match right.entries.get(b) {
            Some(r) => r.clone(),
            None => match (right.floor)(*b) {
                Some(f) if weight + ld + f <= cap => return Err(Error::UncoveredTable(*b)),
                _ => continue,
            },
        };
        let term = (l * &r).mul_signed_half_power(weight).truncate(cap);
        acc.add(&term);
    }
    Ok(acc.finish())
}
