//! Exact linear algebra over the rationals and the integers.
//!
//! Matrices here are tiny (a few dozen rows and columns at most), so plain
//! Gaussian elimination on `Ratio<i128>` and unimodular column reduction on
//! `i128` are adequate. Every routine checks its own result.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Q = Ratio<i128>;

/// Converts an integer row to rationals.
pub fn to_q(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| Q::from_integer(x as i128)).collect()
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..cols {
                    let d = m[r][j] * f;
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of an integer matrix given by rows.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.iter().map(|r| to_q(r)).collect();
    rref(&mut m).len()
}

/// Basis of the rational null space `{x : A x = 0}`, scaled to primitive
/// integer vectors.
pub fn rational_kernel(a: &[Vec<i64>], cols: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<Q>> = a.iter().map(|r| to_q(r)).collect();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Q::zero(); cols];
        v[free] = Q::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -m[i][free];
        }
        basis.push(primitive_integer(&v));
    }
    basis
}

/// Clears denominators and divides by the content.
pub fn primitive_integer(v: &[Q]) -> Vec<i64> {
    let l = v.iter().fold(1i128, |acc, x| acc.lcm(x.denom()));
    let ints: Vec<i128> = v.iter().map(|x| (x * Q::from_integer(l)).to_integer()).collect();
    let g = ints.iter().fold(0i128, |acc, x| acc.gcd(x));
    let g = if g == 0 { 1 } else { g };
    ints.iter().map(|x| (x / g) as i64).collect()
}

/// Integer vectors spanning the rational orthogonal complement of `gens`
/// inside `Q^dim`.
pub fn orthogonal_complement(gens: &[Vec<i64>], dim: usize) -> Vec<Vec<i64>> {
    rational_kernel(gens, dim)
}

/// Coordinates with respect to a linearly independent family of vectors.
///
/// A square invertible minor of the generator matrix is fixed once; the
/// coordinates of any vector in the span are then read off from the
/// corresponding entries.
#[derive(Clone, Debug)]
pub struct Coordinates {
    gens: Vec<Vec<i64>>,
    rows: Vec<usize>,
    inverse: Vec<Vec<Q>>,
}

impl Coordinates {
    /// Fails when the generators are linearly dependent.
    pub fn new(gens: Vec<Vec<i64>>, dim: usize) -> Result<Self> {
        let k = gens.len();
        // Columns of the transpose are the generators; pick independent rows.
        let mut t: Vec<Vec<Q>> = (0..dim)
            .map(|i| gens.iter().map(|g| Q::from_integer(g[i] as i128)).collect())
            .collect();
        let mut chosen = Vec::new();
        let mut basis: Vec<Vec<Q>> = Vec::new();
        for (i, row) in t.iter_mut().enumerate() {
            let mut trial = basis.clone();
            trial.push(row.clone());
            if rref(&mut trial).len() > basis.len() {
                basis.push(row.clone());
                chosen.push(i);
                if chosen.len() == k {
                    break;
                }
            }
        }
        if chosen.len() < k {
            return Err(Error::Validation("generators are linearly dependent".into()));
        }
        let mut aug: Vec<Vec<Q>> = chosen
            .iter()
            .enumerate()
            .map(|(r, &i)| {
                let mut row: Vec<Q> = gens.iter().map(|g| Q::from_integer(g[i] as i128)).collect();
                row.extend((0..k).map(|j| if j == r { Q::one() } else { Q::zero() }));
                row
            })
            .collect();
        rref(&mut aug);
        let inverse = aug.iter().map(|row| row[k..].to_vec()).collect();
        Ok(Self { gens, rows: chosen, inverse })
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Coordinates of `v`, or `None` when `v` is outside the span.
    pub fn solve(&self, v: &[Q]) -> Option<Vec<Q>> {
        let rhs: Vec<Q> = self.rows.iter().map(|&i| v[i]).collect();
        let coeffs: Vec<Q> = self
            .inverse
            .iter()
            .map(|row| row.iter().zip(&rhs).map(|(a, b)| a * b).sum())
            .collect();
        let back = self.combine(&coeffs);
        (back.as_slice() == v).then_some(coeffs)
    }

    /// The linear combination with the given coefficients.
    pub fn combine(&self, coeffs: &[Q]) -> Vec<Q> {
        let dim = self.gens.first().map_or(0, |g| g.len());
        let mut out = vec![Q::zero(); dim];
        for (c, g) in coeffs.iter().zip(&self.gens) {
            for (o, &x) in out.iter_mut().zip(g) {
                *o += c * Q::from_integer(x as i128);
            }
        }
        out
    }

    /// For each generator, the linear functional on the span returning its
    /// coefficient, as a vector over all coordinates (zero off the minor).
    pub fn coefficient_functionals(&self, dim: usize) -> Vec<Vec<Q>> {
        self.inverse
            .iter()
            .map(|row| {
                let mut f = vec![Q::zero(); dim];
                for (&i, &x) in self.rows.iter().zip(row) {
                    f[i] = x;
                }
                f
            })
            .collect()
    }
}

/// Column reduction `A U = H` with `U` unimodular and `H` in column echelon
/// form. Returns `(H, U, pivot_rows)`; columns of `U` beyond the pivot count
/// span the integer kernel of `A`.
fn column_reduce(a: &[Vec<i64>], cols: usize) -> Result<(Vec<Vec<i128>>, Vec<Vec<i128>>, Vec<usize>)> {
    let rows = a.len();
    let mut h: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u: Vec<Vec<i128>> = (0..cols)
        .map(|i| (0..cols).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut pivot_rows = Vec::new();
    let mut p = 0;
    for r in 0..rows {
        if p == cols {
            break;
        }
        loop {
            // Smallest nonzero entry among columns p.. of row r.
            let Some(best) = (p..cols).filter(|&c| h[r][c] != 0).min_by_key(|&c| h[r][c].abs()) else {
                break;
            };
            swap_cols(&mut h, &mut u, p, best);
            let mut done = true;
            for c in p + 1..cols {
                if h[r][c] != 0 {
                    let f = Integer::div_floor(&h[r][c], &h[r][p]);
                    col_axpy(&mut h, &mut u, c, p, -f)?;
                    if h[r][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if h[r][p] != 0 {
            if h[r][p] < 0 {
                for row in h.iter_mut() {
                    row[p] = -row[p];
                }
                for row in u.iter_mut() {
                    row[p] = -row[p];
                }
            }
            pivot_rows.push(r);
            p += 1;
        }
    }
    Ok((h, u, pivot_rows))
}

fn swap_cols(h: &mut [Vec<i128>], u: &mut [Vec<i128>], a: usize, b: usize) {
    for row in h.iter_mut() {
        row.swap(a, b);
    }
    for row in u.iter_mut() {
        row.swap(a, b);
    }
}

/// Column `dst += f * column src`.
fn col_axpy(h: &mut [Vec<i128>], u: &mut [Vec<i128>], dst: usize, src: usize, f: i128) -> Result<()> {
    for m in [h, u] {
        for row in m.iter_mut() {
            let v = row[src]
                .checked_mul(f)
                .and_then(|x| x.checked_add(row[dst]))
                .ok_or_else(|| Error::Internal("integer overflow in column reduction".into()))?;
            row[dst] = v;
        }
    }
    Ok(())
}

fn narrow(v: Vec<i128>) -> Result<Vec<i64>> {
    v.into_iter()
        .map(|x| i64::try_from(x).map_err(|_| Error::Internal("lattice vector exceeds i64".into())))
        .collect()
}

/// A basis of the integer kernel `{x in Z^cols : A x = 0}`, size-reduced.
pub fn integer_kernel(a: &[Vec<i64>], cols: usize) -> Result<Vec<Vec<i64>>> {
    let (_, u, piv) = column_reduce(a, cols)?;
    let mut basis = Vec::new();
    for c in piv.len()..cols {
        basis.push(narrow(u.iter().map(|row| row[c]).collect())?);
    }
    size_reduce(&mut basis);
    Ok(basis)
}

/// An integer solution of `A x = r`, or `None` when none exists.
pub fn integer_solve(a: &[Vec<i64>], r: &[i64], cols: usize) -> Result<Option<Vec<i64>>> {
    let (h, u, piv) = column_reduce(a, cols)?;
    let mut y = vec![0i128; cols];
    for (k, &row) in piv.iter().enumerate() {
        let mut rest = r[row] as i128;
        for (l, yl) in y.iter().enumerate().take(k) {
            rest -= h[row][l] * yl;
        }
        if rest % h[row][k] != 0 {
            return Ok(None);
        }
        y[k] = rest / h[row][k];
    }
    for (row, target) in h.iter().zip(r) {
        let v: i128 = row.iter().zip(&y).map(|(a, b)| a * b).sum();
        if v != *target as i128 {
            return Ok(None);
        }
    }
    let x: Vec<i128> = u.iter().map(|row| row.iter().zip(&y).map(|(a, b)| a * b).sum()).collect();
    Ok(Some(narrow(x)?))
}

/// Pairwise size reduction of a lattice basis: repeatedly subtract integer
/// multiples of one vector from another while the squared norm drops.
pub fn size_reduce(basis: &mut [Vec<i64>]) {
    let norm = |v: &[i64]| v.iter().map(|x| (*x as i128) * (*x as i128)).sum::<i128>();
    let dot = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| (*x as i128) * (*y as i128)).sum::<i128>();
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                if i == j {
                    continue;
                }
                let nj = norm(&basis[j]);
                if nj == 0 {
                    continue;
                }
                let d = dot(&basis[i], &basis[j]);
                let f = Ratio::new(d, nj).round().to_integer();
                if f != 0 {
                    let cand: Vec<i64> = basis[i].iter().zip(&basis[j]).map(|(a, b)| a - (f as i64) * b).collect();
                    if norm(&cand) < norm(&basis[i]) {
                        basis[i] = cand;
                        changed = true;
                    }
                }
            }
        }
    }
}

/// Dot product of a rational functional with an integer vector.
pub fn apply(f: &[Q], v: &[i64]) -> Q {
    f.iter().zip(v).map(|(a, &b)| a * Q::from_integer(b as i128)).sum()
}

/// Exact conversion of a rational known to be an integer.
pub fn as_integer(x: &Q) -> Option<i64> {
    x.is_integer().then(|| x.to_integer()).and_then(|v| i64::try_from(v).ok())
}

/// Absolute value helper used by callers that want `|x|` on rationals.
pub fn q_abs(x: &Q) -> Q {
    x.abs()
}
