//! Gluing data of ideal triangulations and the functionals on quad space.
//!
//! A triangulation with `n` tetrahedra is described by integer rows of
//! length `3n` in quad coordinates: one row per edge, and a meridian and a
//! longitude row per cusp. Quad columns within a tetrahedron are ordered
//! `(01/23, 02/13, 03/12)`. Peripheral rows are normalized so that
//! `ω(L_k, M_k) = 2`.
//!
//! Triangulations with an exposed once-punctured-torus boundary (used for
//! relative indices) additionally flag their boundary edges; those rows take
//! part in the column-sum check and the decomposition of classes, but not in
//! the matching equations.

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, Coordinates, Q};

/// Meridian and longitude rows of one cusp.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cusp {
    pub meridian: Vec<i64>,
    pub longitude: Vec<i64>,
    /// `-χ` of the meridian and longitude rows. Rows read off a peripheral
    /// curve have weight zero; rows modified by edge or tetrahedral
    /// solutions carry the Euler characteristic of that modification.
    #[serde(default, skip_serializing_if = "is_zero_pair")]
    pub neg_euler: [i64; 2],
}

fn is_zero_pair(p: &[i64; 2]) -> bool {
    *p == [0, 0]
}

/// JSON interchange form of gluing data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GluingJson {
    pub name: String,
    pub num_tetrahedra: usize,
    pub edge_equations: Vec<Vec<i64>>,
    #[serde(default)]
    pub cusps: Vec<Cusp>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omitted_edges: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub standard_cusp: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boundary_edges: Vec<usize>,
}

/// Validated gluing data together with the derived linear algebra.
#[derive(Clone, Debug)]
pub struct GluingData {
    pub name: String,
    pub n: usize,
    pub edges: Vec<Vec<i64>>,
    pub cusps: Vec<Cusp>,
    /// Internal edges left out of decompositions.
    pub omitted_edges: Vec<usize>,
    /// Whether `omitted_edges` was chosen automatically.
    pub omitted_auto: bool,
    /// Edges on the exposed boundary, if any.
    pub boundary_edges: Vec<usize>,
    pub standard_cusp: Option<usize>,
    coords: Coordinates,
    /// Boundary edges used as generators (the rest are dependent on them).
    boundary_gens: Vec<usize>,
    full_coords: Option<Coordinates>,
}

/// Boundary class in `H_1` of the cusp tori: per-cusp coefficients of
/// `(μ_k, λ_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoundaryClass(pub Vec<(i64, i64)>);

impl BoundaryClass {
    pub fn zero(r: usize) -> Self {
        Self(vec![(0, 0); r])
    }

    /// Number of curve components, `Σ_k gcd(|x_k|, |y_k|)`.
    pub fn components(&self) -> i64 {
        self.0.iter().map(|(x, y)| x.gcd(y)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&(x, y)| x == 0 && y == 0)
    }
}

impl std::fmt::Display for BoundaryClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(x, y)| format!("{x},{y}")).collect();
        write!(f, "{}", parts.join(";"))
    }
}

/// Half-integer coefficients of a class with respect to the edge,
/// tetrahedral and peripheral solutions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// One entry per edge row; omitted edges carry zero.
    pub edge_coeffs: Vec<Q>,
    pub tet_coeffs: Vec<Q>,
    /// `(p_k, q_k)`: coefficients of `(M_k, L_k)`.
    pub peripheral_coeffs: Vec<(Q, Q)>,
}

/// Relabeling identifying two tetrahedra and a cusp with the standard cusp.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardCuspMatch {
    /// Tetrahedra playing the roles of the first and second standard tetrahedron.
    pub tets: (usize, usize),
    /// Cyclic shift applied to the quad columns of each of the two tetrahedra.
    pub rotations: (usize, usize),
    /// Sign relating the peripheral rows to the standard ones.
    pub sign: i64,
    /// Index of the edge row equal to the internal edge `e_0`.
    pub internal_edge: usize,
}

/// The leading-trailing map `ℒ`, applied per tetrahedron:
/// `(a, b, c) ↦ (c - b, a - c, b - a)`.
pub fn leading_trailing_row(v: &[i64]) -> Vec<i64> {
    let mut out = Vec::with_capacity(v.len());
    for t in v.chunks(3) {
        out.push(t[2] - t[1]);
        out.push(t[0] - t[2]);
        out.push(t[1] - t[0]);
    }
    out
}

/// Neumann-Zagier pairing `ω(x, y) = ℒ(x) · y`.
pub fn omega(x: &[i64], y: &[i64]) -> i64 {
    leading_trailing_row(x).iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Double arc function `δ(S) = Σ (a b + b c + c a)`.
pub fn double_arc(s: &[i64]) -> i64 {
    s.chunks(3).map(|t| t[0] * t[1] + t[1] * t[2] + t[2] * t[0]).sum()
}

/// Cross term `δ(S + T) - δ(S) - δ(T)`, i.e. twice the symmetric bilinear
/// form of `δ`. It is an integer, whereas the bilinear form itself can be a
/// half-integer.
pub fn double_arc_pair(s: &[i64], t: &[i64]) -> i64 {
    s.chunks(3)
        .zip(t.chunks(3))
        .map(|(a, b)| a[0] * (b[1] + b[2]) + a[1] * (b[0] + b[2]) + a[2] * (b[0] + b[1]))
        .sum()
}

/// Tetrahedral solution `T_j`.
pub fn tetrahedral_solution(n: usize, j: usize) -> Vec<i64> {
    let mut v = vec![0; 3 * n];
    v[3 * j..3 * j + 3].copy_from_slice(&[1, 1, 1]);
    v
}

impl GluingData {
    /// Validates raw rows and derives the decomposition data.
    pub fn new(
        name: impl Into<String>,
        n: usize,
        edges: Vec<Vec<i64>>,
        cusps: Vec<Cusp>,
        omitted: Option<Vec<usize>>,
        boundary_edges: Vec<usize>,
        standard_cusp: Option<usize>,
    ) -> Result<Self> {
        let name = name.into();
        if n == 0 {
            return Err(Error::Validation("a triangulation needs at least one tetrahedron".into()));
        }
        let width = 3 * n;
        for (i, row) in edges.iter().enumerate() {
            if row.len() != width {
                return Err(Error::Validation(format!("edge row {i} has length {} instead of {width}", row.len())));
            }
            if row.iter().any(|&x| x < 0) {
                return Err(Error::Validation(format!("edge row {i} has a negative entry")));
            }
        }
        for (k, c) in cusps.iter().enumerate() {
            if c.meridian.len() != width || c.longitude.len() != width {
                return Err(Error::Validation(format!("peripheral rows of cusp {k} must have length {width}")));
            }
        }
        if let Some(&b) = boundary_edges.iter().find(|&&b| b >= edges.len()) {
            return Err(Error::Validation(format!("boundary edge {b} out of range")));
        }
        if boundary_edges.is_empty() && edges.len() != n {
            return Err(Error::Validation(format!(
                "an ideal triangulation with {n} tetrahedra has exactly {n} edge rows, found {}",
                edges.len()
            )));
        }
        for col in 0..width {
            let s: i64 = edges.iter().map(|r| r[col]).sum();
            if s != 2 {
                return Err(Error::Validation(format!("quad column {col} has edge column sum {s}, expected 2")));
            }
        }
        let internal: Vec<usize> = (0..edges.len()).filter(|i| !boundary_edges.contains(i)).collect();
        // Neumann-Zagier relations.
        let mut rows: Vec<(String, &Vec<i64>)> =
            internal.iter().map(|&i| (format!("E{i}"), &edges[i])).collect();
        for (k, c) in cusps.iter().enumerate() {
            rows.push((format!("M{k}"), &c.meridian));
            rows.push((format!("L{k}"), &c.longitude));
        }
        for (i, (ni, ri)) in rows.iter().enumerate() {
            for (nj, rj) in rows.iter().skip(i + 1) {
                let w = omega(ri, rj);
                let expected = match (ni.as_bytes()[0], nj.as_bytes()[0]) {
                    (b'M', b'L') if ni[1..] == nj[1..] => -2,
                    _ => 0,
                };
                if w != expected {
                    return Err(Error::Validation(format!(
                        "Neumann-Zagier relation fails: ω({ni}, {nj}) = {w}, expected {expected}"
                    )));
                }
            }
        }
        if let Some(s) = standard_cusp {
            if s >= cusps.len() {
                return Err(Error::Validation(format!("standard cusp {s} out of range")));
            }
        }

        let base: Vec<Vec<i64>> = (0..n)
            .map(|j| tetrahedral_solution(n, j))
            .chain(cusps.iter().flat_map(|c| [c.meridian.clone(), c.longitude.clone()]))
            .collect();
        let (omitted, omitted_auto) = match omitted {
            Some(o) => {
                if let Some(&e) = o.iter().find(|&&e| e >= edges.len() || boundary_edges.contains(&e)) {
                    return Err(Error::Validation(format!("omitted edge {e} is not an internal edge")));
                }
                (o, false)
            }
            None => {
                let mut kept: Vec<Vec<i64>> = base.clone();
                let mut omitted = Vec::new();
                for &i in &internal {
                    kept.push(edges[i].clone());
                    if lattice::rank(&kept) < kept.len() {
                        kept.pop();
                        omitted.push(i);
                    }
                }
                (omitted, true)
            }
        };
        let mut gens: Vec<Vec<i64>> =
            internal.iter().filter(|i| !omitted.contains(i)).map(|&i| edges[i].clone()).collect();
        gens.extend(base.iter().cloned());
        let coords = Coordinates::new(gens.clone(), width).map_err(|_| {
            Error::Validation("omitted-edge set is not admissible: remaining solutions are dependent".into())
        })?;
        // Every omitted edge must lie in the span of the kept generators.
        for &i in &omitted {
            if coords.solve(&lattice::to_q(&edges[i])).is_none() {
                return Err(Error::Validation(format!(
                    "omitted-edge set is not admissible: edge {i} is not in the span of the remaining solutions"
                )));
            }
        }
        let mut boundary_gens = Vec::new();
        let mut full = gens.clone();
        for &b in &boundary_edges {
            full.push(edges[b].clone());
            if lattice::rank(&full) < full.len() {
                full.pop();
            } else {
                boundary_gens.push(b);
            }
        }
        let full_coords = if boundary_edges.is_empty() { None } else { Some(Coordinates::new(full, width)?) };
        Ok(Self {
            name,
            n,
            edges,
            cusps,
            omitted_edges: omitted,
            omitted_auto,
            boundary_edges,
            standard_cusp,
            coords,
            boundary_gens,
            full_coords,
        })
    }

    pub fn from_json_value(j: GluingJson) -> Result<Self> {
        Self::new(j.name, j.num_tetrahedra, j.edge_equations, j.cusps, j.omitted_edges, j.boundary_edges, j.standard_cusp)
    }

    pub fn to_json_value(&self) -> GluingJson {
        GluingJson {
            name: self.name.clone(),
            num_tetrahedra: self.n,
            edge_equations: self.edges.clone(),
            cusps: self.cusps.clone(),
            omitted_edges: Some(self.omitted_edges.clone()),
            standard_cusp: self.standard_cusp,
            boundary_edges: self.boundary_edges.clone(),
        }
    }

    /// Number of cusps.
    pub fn r(&self) -> usize {
        self.cusps.len()
    }

    /// Width `3n` of every row.
    pub fn width(&self) -> usize {
        3 * self.n
    }

    /// Indices of edges that are not on the exposed boundary.
    pub fn internal_edges(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|i| !self.boundary_edges.contains(i)).collect()
    }

    /// Whether the triangulation has an exposed boundary.
    pub fn is_relative(&self) -> bool {
        !self.boundary_edges.is_empty()
    }

    /// `L_T = G_T C`: rows `ℒ(E_i)` for every edge, then `ℒ(M_k)`, `ℒ(L_k)`.
    pub fn leading_trailing(&self) -> Vec<Vec<i64>> {
        self.edges
            .iter()
            .chain(self.cusps.iter().flat_map(|c| [&c.meridian, &c.longitude]))
            .map(|r| leading_trailing_row(r))
            .collect()
    }

    /// Q-matching rows: `ℒ(E_i)` for internal edges.
    pub fn matching_rows(&self) -> Vec<Vec<i64>> {
        self.internal_edges().iter().map(|&i| leading_trailing_row(&self.edges[i])).collect()
    }

    /// Whether `s` satisfies the matching equations.
    pub fn is_q_normal(&self, s: &[i64]) -> bool {
        self.matching_rows().iter().all(|r| r.iter().zip(s).map(|(a, b)| a * b).sum::<i64>() == 0)
    }

    /// Rows `(X_k, Y_k)` with `x_k = X_k · S` and `y_k = Y_k · S` the
    /// coefficients of `μ_k`, `λ_k` in `∂S`.
    pub fn boundary_rows(&self) -> Vec<(Vec<i64>, Vec<i64>)> {
        self.cusps
            .iter()
            .map(|c| {
                let x = leading_trailing_row(&c.longitude);
                let y: Vec<i64> = leading_trailing_row(&c.meridian).iter().map(|v| -v).collect();
                (x, y)
            })
            .collect()
    }

    /// Boundary `∂S`, normalized so that `∂M_k = 2μ_k` and `∂L_k = 2λ_k`.
    pub fn boundary(&self, s: &[i64]) -> BoundaryClass {
        let dot = |a: &[i64]| a.iter().zip(s).map(|(x, y)| x * y).sum::<i64>();
        BoundaryClass(self.boundary_rows().iter().map(|(x, y)| (dot(x), dot(y))).collect())
    }

    fn split(&self, c: &[Q], boundary: Option<&[Q]>) -> Decomposition {
        let internal = self.internal_edges();
        let kept: Vec<usize> = internal.iter().copied().filter(|i| !self.omitted_edges.contains(i)).collect();
        let mut edge_coeffs = vec![Q::zero(); self.edges.len()];
        for (k, &i) in kept.iter().enumerate() {
            edge_coeffs[i] = c[k];
        }
        let off = kept.len();
        let tet_coeffs = c[off..off + self.n].to_vec();
        let off = off + self.n;
        let peripheral_coeffs = (0..self.r()).map(|k| (c[off + 2 * k], c[off + 2 * k + 1])).collect();
        if let Some(b) = boundary {
            for (&e, &x) in self.boundary_gens.iter().zip(b) {
                edge_coeffs[e] = x;
            }
        }
        Decomposition { edge_coeffs, tet_coeffs, peripheral_coeffs }
    }

    /// Decomposes `s` into edge, tetrahedral, peripheral and (for relative
    /// data) boundary-edge solutions. Dependent boundary edges get zero.
    pub fn decompose(&self, s: &[i64]) -> Result<Decomposition> {
        let v = lattice::to_q(s);
        match &self.full_coords {
            None => {
                let c = self
                    .coords
                    .solve(&v)
                    .ok_or_else(|| Error::Internal("class is not in the span of edge, tetrahedral and peripheral solutions".into()))?;
                Ok(self.split(&c, None))
            }
            Some(full) => {
                let c = full
                    .solve(&v)
                    .ok_or_else(|| Error::Internal("class is not in the span of the standard solutions".into()))?;
                let k = self.coords.len();
                Ok(self.split(&c[..k], Some(&c[k..])))
            }
        }
    }

    /// Recombines a decomposition into a quad vector.
    pub fn recombine(&self, d: &Decomposition) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.width()];
        let mut add = |c: Q, row: &[i64]| {
            for (o, &x) in out.iter_mut().zip(row) {
                *o += c * Q::from_integer(x as i128);
            }
        };
        for (c, e) in d.edge_coeffs.iter().zip(&self.edges) {
            add(*c, e);
        }
        for (j, c) in d.tet_coeffs.iter().enumerate() {
            add(*c, &tetrahedral_solution(self.n, j));
        }
        for ((p, q), cusp) in d.peripheral_coeffs.iter().zip(&self.cusps) {
            add(*p, &cusp.meridian);
            add(*q, &cusp.longitude);
        }
        out
    }

    /// `-χ` of a decomposition: twice the internal edge coefficients plus the
    /// tetrahedral coefficients plus the peripheral weights.
    pub fn neg_euler_of(&self, d: &Decomposition) -> Q {
        let internal = self.internal_edges();
        let e: Q = internal.iter().map(|&i| d.edge_coeffs[i]).sum();
        let t: Q = d.tet_coeffs.iter().copied().sum();
        let p: Q = d
            .peripheral_coeffs
            .iter()
            .zip(&self.cusps)
            .map(|((a, b), c)| a * Q::from_integer(c.neg_euler[0] as i128) + b * Q::from_integer(c.neg_euler[1] as i128))
            .sum();
        e * Q::from_integer(2) + t + p
    }

    /// Formal Euler characteristic `χ(S)` of a class on a closed (non-relative)
    /// triangulation, or of the internal part for relative data.
    pub fn euler_char(&self, s: &[i64]) -> Result<Q> {
        Ok(-self.neg_euler_of(&self.decompose(s)?))
    }

    /// Linear functional `f` with `f · v = -χ(v)` on the span of the kept
    /// edge, tetrahedral and peripheral solutions.
    pub fn neg_euler_functional(&self) -> Vec<Q> {
        let funcs = self.coords.coefficient_functionals(self.width());
        let kept = self.internal_edges().iter().filter(|i| !self.omitted_edges.contains(i)).count();
        let mut f = vec![Q::zero(); self.width()];
        let peripheral = self.cusps.iter().flat_map(|c| c.neg_euler);
        let weights: Vec<i64> =
            std::iter::repeat_n(2, kept).chain(std::iter::repeat_n(1, self.n)).chain(peripheral).collect();
        for (g, &w) in funcs.iter().zip(&weights) {
            let w = Q::from_integer(w as i128);
            for (a, b) in f.iter_mut().zip(g) {
                *a += w * b;
            }
        }
        f
    }

    /// Membership test for the span of kept internal edges, tetrahedral and
    /// peripheral solutions; returns integer rows `W` with `W v = 0` exactly on
    /// that span.
    pub fn span_equations(&self) -> Vec<Vec<i64>> {
        let mut gens: Vec<Vec<i64>> = self
            .internal_edges()
            .iter()
            .filter(|i| !self.omitted_edges.contains(i))
            .map(|&i| self.edges[i].clone())
            .collect();
        gens.extend((0..self.n).map(|j| tetrahedral_solution(self.n, j)));
        for c in &self.cusps {
            gens.push(c.meridian.clone());
            gens.push(c.longitude.clone());
        }
        lattice::orthogonal_complement(&gens, self.width())
    }

    /// Quad vector `Σ (b_i / 2) E_i` over the boundary edges, scaled by 2.
    pub fn doubled_boundary_part(&self, b: &[i64]) -> Result<Vec<i64>> {
        if b.len() != self.boundary_edges.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} boundary edge coefficients, got {}",
                self.boundary_edges.len(),
                b.len()
            )));
        }
        let mut out = vec![0; self.width()];
        for (&e, &bi) in self.boundary_edges.iter().zip(b) {
            for (o, x) in out.iter_mut().zip(&self.edges[e]) {
                *o += bi * x;
            }
        }
        Ok(out)
    }

    /// Looks for two tetrahedra and quad relabelings under which the given
    /// cusp agrees with the standard cusp, with peripheral rows compared
    /// modulo integer combinations of edge rows.
    pub fn detect_standard_cusp(&self, cusp: usize) -> Option<StandardCuspMatch> {
        let c = self.cusps.get(cusp)?;
        let n = self.n;
        let std_m = [[0, -1, 0], [0, 1, 0]];
        let std_l = [[-1, 0, 0], [1, 0, 0]];
        let edge_t: Vec<Vec<i64>> = (0..self.width()).map(|col| self.edges.iter().map(|e| e[col]).collect()).collect();
        let in_edge_span = |v: &[i64]| matches!(lattice::integer_solve(&edge_t, v, self.edges.len()), Ok(Some(_)));
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let Some(e0) = self.edges.iter().position(|e| {
                    e.chunks(3).enumerate().all(|(t, q)| {
                        if t == i || t == j {
                            q == [1, 1, 1]
                        } else {
                            q == [0, 0, 0]
                        }
                    })
                }) else {
                    continue;
                };
                for r1 in 0..3 {
                    for r2 in 0..3 {
                        for sign in [1i64, -1] {
                            let place = |rows: &[[i64; 3]; 2]| {
                                let mut v = vec![0; 3 * n];
                                for (slot, (t, r)) in [(i, r1), (j, r2)].iter().enumerate() {
                                    for q in 0..3 {
                                        v[3 * t + (q + r) % 3] = sign * rows[slot][q];
                                    }
                                }
                                v
                            };
                            let m = place(&std_m);
                            let l = place(&std_l);
                            let dm: Vec<i64> = c.meridian.iter().zip(&m).map(|(a, b)| a - b).collect();
                            let dl: Vec<i64> = c.longitude.iter().zip(&l).map(|(a, b)| a - b).collect();
                            if in_edge_span(&dm) && in_edge_span(&dl) {
                                return Some(StandardCuspMatch {
                                    tets: (i, j),
                                    rotations: (r1, r2),
                                    sign,
                                    internal_edge: e0,
                                });
                            }
                        }
                    }
                }
            }
        }
        None
    }
}

/// Parses gluing data from JSON or from the whitespace matrix format.
pub fn parse_gluing(input: &str) -> Result<GluingData> {
    let trimmed = input.trim_start();
    if trimmed.starts_with('{') {
        let j: GluingJson = serde_json::from_str(input).map_err(|e| Error::Parse {
            row: e.line(),
            col: e.column(),
            msg: e.to_string(),
        })?;
        GluingData::from_json_value(j)
    } else {
        parse_matrix_text(input)
    }
}

/// Matrix text: a header line `n r`, then `n` edge rows, then a meridian
/// and a longitude row per cusp. Blank lines and `#` comments are ignored.
fn parse_matrix_text(input: &str) -> Result<GluingData> {
    let mut rows: Vec<(usize, Vec<i64>)> = Vec::new();
    for (ln, line) in input.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for (col, tok) in line.split_whitespace().enumerate() {
            let v = tok.parse::<i64>().map_err(|_| Error::Parse {
                row: ln + 1,
                col: col + 1,
                msg: format!("expected an integer, found `{tok}`"),
            })?;
            row.push(v);
        }
        rows.push((ln + 1, row));
    }
    let Some((hl, header)) = rows.first().cloned() else {
        return Err(Error::Parse { row: 1, col: 1, msg: "empty input".into() });
    };
    if header.len() != 2 || header[0] <= 0 || header[1] < 0 {
        return Err(Error::Parse { row: hl, col: 1, msg: "header must be `n r` with n > 0, r >= 0".into() });
    }
    let n = header[0] as usize;
    let r = header[1] as usize;
    let body = &rows[1..];
    if body.len() != n + 2 * r {
        let last = body.last().map_or(hl, |b| b.0);
        return Err(Error::Parse {
            row: last,
            col: 1,
            msg: format!("expected {} rows after the header, found {}", n + 2 * r, body.len()),
        });
    }
    for (ln, row) in body {
        if row.len() != 3 * n {
            return Err(Error::Parse {
                row: *ln,
                col: row.len().min(3 * n) + 1,
                msg: format!("expected {} integers, found {}", 3 * n, row.len()),
            });
        }
    }
    let edges = body[..n].iter().map(|(_, r)| r.clone()).collect();
    let cusps = body[n..]
        .chunks(2)
        .map(|p| Cusp { meridian: p[0].1.clone(), longitude: p[1].1.clone(), neg_euler: [0, 0] })
        .collect();
    GluingData::new("unnamed", n, edges, cusps, None, Vec::new(), None)
}

/// Converts a rational known to be a half-integer into half units.
pub fn half_units(x: &Q) -> Option<i64> {
    let d = *x * Q::from_integer(2);
    d.is_integer().then(|| d.to_integer().to_i64()).flatten()
}
