//! Nonnegative integer solutions of small linear systems `A x = r`.
//!
//! The solution set `P = {x >= 0 : A x = r}` is a pointed polyhedron, the sum
//! of the polytope spanned by its vertices and its recession cone `C`. Every
//! element of the Hilbert basis of `C ∩ Z^k` lies in the parallelepiped
//! spanned by the extreme rays, and every integer point of `P` that does not
//! dominate a Hilbert basis element lies in the vertex polytope plus that
//! parallelepiped. Both sets are therefore found by scanning a coordinate box
//! whose extents come from the vertices and extreme rays. The scan runs over
//! the free coordinates of the reduced row echelon form only; the pivot
//! coordinates are determined by them.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{as_integer, rational_kernel, rref, Q};

/// Largest number of box points scanned before giving up.
const SCAN_LIMIT: u128 = 50_000_000;

/// `A x = r` in reduced row echelon form.
struct Reduced {
    /// Rows `[A | r]` with a pivot in each row.
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
    free: Vec<usize>,
    k: usize,
}

impl Reduced {
    /// `None` when the system has no rational solution.
    fn new(a: &[Vec<i64>], r: &[i64], k: usize) -> Option<Self> {
        let mut rows: Vec<Vec<Q>> = a
            .iter()
            .zip(r)
            .map(|(row, &v)| row.iter().chain(std::iter::once(&v)).map(|&x| Q::from_integer(x as i128)).collect())
            .collect();
        let pivots = rref(&mut rows);
        if pivots.contains(&k) {
            return None;
        }
        rows.truncate(pivots.len());
        let free = (0..k).filter(|c| !pivots.contains(c)).collect();
        Some(Self { rows, pivots, free, k })
    }

    /// Completes the free coordinates to a solution; `None` unless the result
    /// is integral and within `0 <= x <= hi`.
    fn complete(&self, x: &mut [i64], hi: &[i64]) -> bool {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let mut v = row[self.k];
            for &f in &self.free {
                if x[f] != 0 {
                    v -= row[f] * Q::from_integer(x[f] as i128);
                }
            }
            match as_integer(&v) {
                Some(n) if n >= 0 && n <= hi[p] => x[p] = n,
                _ => return false,
            }
        }
        true
    }

    /// All integer solutions with `0 <= x <= hi`.
    fn scan(&self, hi: &[i64]) -> Result<Vec<Vec<i64>>> {
        let volume: u128 = self.free.iter().map(|&f| (hi[f].max(0) as u128) + 1).product();
        if volume > SCAN_LIMIT {
            return Err(Error::Internal(format!("solution box of {volume} points is too large to scan")));
        }
        let mut out = Vec::new();
        let mut x = vec![0i64; self.k];
        loop {
            if self.complete(&mut x, hi) {
                out.push(x.clone());
            }
            let mut i = 0;
            loop {
                if i == self.free.len() {
                    return Ok(out);
                }
                let f = self.free[i];
                if x[f] < hi[f] {
                    x[f] += 1;
                    break;
                }
                x[f] = 0;
                i += 1;
            }
        }
    }
}

/// Calls `f` on every subset of `0..k` of size at most `max`, as a sorted
/// index list.
fn for_subsets(k: usize, max: usize, mut f: impl FnMut(&[usize])) {
    fn rec(start: usize, k: usize, max: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        f(cur);
        if cur.len() == max {
            return;
        }
        for i in start..k {
            cur.push(i);
            rec(i + 1, k, max, cur, f);
            cur.pop();
        }
    }
    rec(0, k, max, &mut Vec::new(), &mut f);
}

fn columns(a: &[Vec<i64>], cols: &[usize]) -> Vec<Vec<i64>> {
    a.iter().map(|row| cols.iter().map(|&c| row[c]).collect()).collect()
}

/// Primitive generators of the extreme rays of `{x >= 0 : A x = 0}`. An
/// extreme ray is a nonnegative kernel vector whose support `S` has a
/// one-dimensional kernel `ker A_S`.
pub fn extreme_rays(a: &[Vec<i64>], k: usize) -> Vec<Vec<i64>> {
    let rank = Reduced::new(a, &vec![0; a.len()], k).map_or(0, |r| r.pivots.len());
    let mut rays: Vec<Vec<i64>> = Vec::new();
    for_subsets(k, rank + 1, |s| {
        if s.is_empty() {
            return;
        }
        let ker = rational_kernel(&columns(a, s), s.len());
        if ker.len() != 1 {
            return;
        }
        let v = &ker[0];
        let sign = if v.iter().all(|&x| x > 0) {
            1
        } else if v.iter().all(|&x| x < 0) {
            -1
        } else {
            return;
        };
        let mut full = vec![0; k];
        for (&c, &x) in s.iter().zip(v) {
            full[c] = sign * x;
        }
        if !rays.contains(&full) {
            rays.push(full);
        }
    });
    rays.sort();
    rays
}

/// Vertices of `{x >= 0 : A x = r}`: the nonnegative basic solutions.
fn vertices(red: &Reduced, a: &[Vec<i64>], r: &[i64]) -> Vec<Vec<Q>> {
    let k = red.k;
    let rank = red.pivots.len();
    let mut out: Vec<Vec<Q>> = Vec::new();
    for_subsets(k, rank, |s| {
        if s.len() != rank {
            return;
        }
        let Some(sub) = Reduced::new(&columns(a, s), r, s.len()) else {
            return;
        };
        if sub.pivots.len() != rank {
            return;
        }
        let mut v = vec![Q::zero(); k];
        for (row, &p) in sub.rows.iter().zip(&sub.pivots) {
            v[s[p]] = row[s.len()];
        }
        if v.iter().all(|x| !x.is_negative()) && !out.contains(&v) {
            out.push(v);
        }
    });
    out
}

/// `x >= b` componentwise for some `b` in `basis`.
pub fn dominates_any(x: &[i64], basis: &[Vec<i64>]) -> bool {
    basis.iter().any(|b| b.iter().zip(x).all(|(p, q)| p <= q))
}

/// The cone `{x >= 0 : A x = 0}` through its extreme rays and Hilbert basis.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RecessionCone {
    pub extreme: Vec<Vec<i64>>,
    pub hilbert: Vec<Vec<i64>>,
}

impl RecessionCone {
    pub fn new(a: &[Vec<i64>], k: usize) -> Result<Self> {
        let extreme = extreme_rays(a, k);
        let hilbert = hilbert_from_extreme(a, k, &extreme)?;
        Ok(Self { extreme, hilbert })
    }
}

/// Hilbert basis of `{x >= 0 : A x = 0}` for `A` given by rows over `k`
/// variables.
pub fn hilbert_basis(a: &[Vec<i64>], k: usize) -> Result<Vec<Vec<i64>>> {
    Ok(RecessionCone::new(a, k)?.hilbert)
}

fn hilbert_from_extreme(a: &[Vec<i64>], k: usize, rays: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    if rays.is_empty() {
        return Ok(Vec::new());
    }
    let mut hi = vec![0i64; k];
    for g in rays {
        for (h, x) in hi.iter_mut().zip(g) {
            *h += x;
        }
    }
    let red = Reduced::new(a, &vec![0; a.len()], k).expect("homogeneous systems are consistent");
    let mut pts: Vec<Vec<i64>> = red.scan(&hi)?.into_iter().filter(|x| x.iter().any(|&v| v != 0)).collect();
    pts.sort_by_key(|x| x.iter().sum::<i64>());
    let mut basis: Vec<Vec<i64>> = Vec::new();
    for x in pts {
        if !dominates_any(&x, &basis) {
            basis.push(x);
        }
    }
    basis.sort();
    Ok(basis)
}

/// Integer points of `{x >= 0 : A x = r}` that dominate no element of the
/// Hilbert basis of the recession cone `cone`. Every integer solution is one
/// of these plus a nonnegative combination of the Hilbert basis.
pub fn minimal_translates(a: &[Vec<i64>], r: &[i64], k: usize, cone: &RecessionCone) -> Result<Vec<Vec<i64>>> {
    let Some(red) = Reduced::new(a, r, k) else {
        return Ok(Vec::new());
    };
    let verts = vertices(&red, a, r);
    if verts.is_empty() {
        return Ok(Vec::new());
    }
    let mut hi = vec![0i64; k];
    for (j, h) in hi.iter_mut().enumerate() {
        let vmax = verts.iter().map(|v| v[j].floor().to_integer()).max().unwrap_or(0);
        let rsum: i64 = cone.extreme.iter().map(|g| g[j]).sum();
        *h = i64::try_from(vmax).map_err(|_| Error::Internal("vertex coordinate exceeds i64".into()))? + rsum;
    }
    let mut out: Vec<Vec<i64>> = red.scan(&hi)?.into_iter().filter(|x| !dominates_any(x, &cone.hilbert)).collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hilbert_basis_of_a_simple_cone() {
        // x + y = 2z has Hilbert basis (2,0,1), (1,1,1), (0,2,1).
        let a = vec![vec![1, 1, -2]];
        assert_eq!(hilbert_basis(&a, 3).unwrap(), vec![vec![0, 2, 1], vec![1, 1, 1], vec![2, 0, 1]]);
    }

    #[test]
    fn translates_of_a_shifted_system() {
        // x - y = 1: solutions (1,0) + n(1,1).
        let a = vec![vec![1, -1]];
        let cone = RecessionCone::new(&a, 2).unwrap();
        assert_eq!(cone.hilbert, vec![vec![1, 1]]);
        assert_eq!(minimal_translates(&a, &[1], 2, &cone).unwrap(), vec![vec![1, 0]]);
    }

    #[test]
    fn infeasible_systems_have_no_translates() {
        let a = vec![vec![1, 1]];
        let cone = RecessionCone::new(&a, 2).unwrap();
        assert!(minimal_translates(&a, &[-1], 2, &cone).unwrap().is_empty());
        let a = vec![vec![2, 2]];
        assert!(minimal_translates(&a, &[1], 2, &cone).unwrap().is_empty());
    }
}
