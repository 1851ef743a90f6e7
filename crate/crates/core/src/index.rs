//! The 3D index as a sum over Q-normal classes.
//!
//! Each class `S` contributes `(-q^(1/2))^(-χ(S)) Π_j J(a_j, b_j, c_j)`,
//! which is invariant under adding tetrahedral solutions. The surface path
//! sums these over a certified enumeration; the edge-weight path sums over a
//! cube of coefficients in a lattice basis and is not certified.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumeration::{enumerate, Backend, BoundaryConstraint, EnumeratedClass, Query};
use crate::error::{Error, Result};
use crate::lattice;
use crate::qseries::{j_tet, min_degree_j, HalfExp, SeriesAccumulator, TruncatedQSeries};
use crate::triangulation::{BoundaryClass, GluingData};

/// Minimal half-degree of the contribution of `s` with the given `-χ`.
pub fn contribution_degree(s: &[i64], neg_chi: i64) -> HalfExp {
    neg_chi + s.chunks(3).map(|t| min_degree_j(t[0], t[1], t[2])).sum::<i64>()
}

/// `(-q^(1/2))^(-χ) Π J(S_j)` truncated at `cap`.
pub fn class_contribution(s: &[i64], neg_chi: i64, cap: HalfExp) -> TruncatedQSeries {
    let mins: Vec<i64> = s.chunks(3).map(|t| min_degree_j(t[0], t[1], t[2])).collect();
    let total = neg_chi + mins.iter().sum::<i64>();
    if total > cap {
        return TruncatedQSeries::zero(cap);
    }
    let mut acc = TruncatedQSeries::signed_half_power(neg_chi);
    for (t, m) in s.chunks(3).zip(&mins) {
        let cj = cap - total + m;
        acc = &acc * &j_tet(t[0], t[1], t[2], cj);
    }
    acc.truncate(cap)
}

/// Sum of contributions of enumerated classes, each multiplied by `weight`.
pub fn sum_contributions<F>(classes: &[EnumeratedClass], cap: HalfExp, weight: F) -> TruncatedQSeries
where
    F: Fn(&EnumeratedClass) -> Vec<(i64, HalfExp)> + Sync,
{
    classes
        .par_iter()
        .fold(
            || SeriesAccumulator::new(cap),
            |mut acc, c| {
                for (sign, shift) in weight(c) {
                    let part = class_contribution(&c.quads, c.neg_chi, cap - shift).shift(shift);
                    if sign >= 0 {
                        acc.add(&part);
                    } else {
                        acc.add(&-part);
                    }
                }
                acc
            },
        )
        .reduce(|| SeriesAccumulator::new(cap), |a, b| a.merge(b))
        .finish()
}

/// Metadata describing how an index value was obtained.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IndexReport {
    pub series: TruncatedQSeries,
    pub certified: bool,
    pub class_count: usize,
}

/// Index for a boundary constraint through the certified surface path.
pub fn index_for(g: &GluingData, c: &BoundaryConstraint, cap: HalfExp, backend: Backend) -> Result<IndexReport> {
    let q = Query::new(g, c)?;
    let e = enumerate(g, &q, cap, backend)?;
    let series = sum_contributions(&e.classes, cap, |_| vec![(1, 0)]);
    Ok(IndexReport { series, certified: true, class_count: e.classes.len() })
}

/// `I^0_T`, the index with zero boundary.
pub fn index_closed(g: &GluingData, cap: HalfExp) -> Result<TruncatedQSeries> {
    Ok(index_for(g, &BoundaryConstraint::Closed, cap, Backend::Cone)?.series)
}

/// `I^γ_T`; identically zero when `γ` is not the boundary of an integer class.
pub fn index_with_boundary(g: &GluingData, gamma: &BoundaryClass, cap: HalfExp) -> Result<TruncatedQSeries> {
    Ok(index_for(g, &BoundaryConstraint::Fixed(gamma.clone()), cap, Backend::Cone)?.series)
}

/// Lattice data for the edge-weight sum: a lift `Γ` with `∂Γ = γ` and a
/// basis of closed classes modulo tetrahedral solutions.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeWeightLattice {
    pub lift: Vec<i64>,
    pub basis: Vec<Vec<i64>>,
}

/// Builds the lift and basis, or `None` when `γ` bounds no integer class.
pub fn edge_weight_lattice(g: &GluingData, gamma: &BoundaryClass) -> Result<Option<EdgeWeightLattice>> {
    if g.is_relative() {
        return Err(Error::InvalidArgument("the edge-weight path needs a triangulation without exposed boundary".into()));
    }
    let q = Query::new(g, &BoundaryConstraint::Fixed(gamma.clone()))?;
    let width = g.width();
    // Normalize cosets of tetrahedral solutions by a zero first quad.
    let mut rows = q.rows.clone();
    let mut rhs = q.rhs.clone();
    for j in 0..g.n {
        let mut r = vec![0; width];
        r[3 * j] = 1;
        rows.push(r);
        rhs.push(0);
    }
    let Some(lift) = lattice::integer_solve(&rows, &rhs, width)? else {
        return Ok(None);
    };
    let basis = lattice::integer_kernel(&rows, width)?;
    Ok(Some(EdgeWeightLattice { lift, basis }))
}

/// Partial edge-weight sum over the coefficient cube `|c_i| <= radius`.
/// Not certified: no bound on the omitted terms is available.
pub fn index_edge_weight(g: &GluingData, gamma: &BoundaryClass, cap: HalfExp, radius: i64) -> Result<IndexReport> {
    if radius < 1 {
        return Err(Error::InvalidArgument("radius must be at least 1".into()));
    }
    let Some(lat) = edge_weight_lattice(g, gamma)? else {
        return Ok(IndexReport { series: TruncatedQSeries::zero(cap), certified: false, class_count: 0 });
    };
    let q = Query::new(g, &BoundaryConstraint::Fixed(gamma.clone()))?;
    let m = lat.basis.len();
    let side = (2 * radius + 1) as usize;
    let total = side.pow(m as u32);
    let terms: Vec<Result<Option<(Vec<i64>, i64)>>> = (0..total)
        .into_par_iter()
        .map(|mut code| {
            let mut s = lat.lift.clone();
            for b in &lat.basis {
                let c = (code % side) as i64 - radius;
                code /= side;
                for (x, y) in s.iter_mut().zip(b) {
                    *x += c * y;
                }
            }
            let nc = q.neg_chi(&s);
            let neg_chi = lattice::as_integer(&nc)
                .ok_or_else(|| Error::Internal(format!("quarter-integer exponent: -χ = {nc}")))?;
            // Move to the minimal representative; each removed T_j lowers -χ by one.
            let mut shift = 0;
            for t in s.chunks_mut(3) {
                let m = *t.iter().min().unwrap();
                for x in t.iter_mut() {
                    *x -= m;
                }
                shift += m;
            }
            let neg_chi = neg_chi - shift;
            Ok((contribution_degree(&s, neg_chi) <= cap).then_some((s, neg_chi)))
        })
        .collect();
    let mut classes = Vec::new();
    for t in terms {
        if let Some((s, neg_chi)) = t? {
            classes.push(EnumeratedClass { boundary: gamma.clone(), degree: 0, quads: s, neg_chi });
        }
    }
    let series = sum_contributions(&classes, cap, |_| vec![(1, 0)]);
    Ok(IndexReport { series, certified: false, class_count: classes.len() })
}
