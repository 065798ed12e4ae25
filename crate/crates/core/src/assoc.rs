//! Stasheff associahedra `K_n ⊂ R^n` and the recursive cubic complex `K(n)`.
//!
//! `K_n` is cut out by `t_1 = 0`, `0 <= t_k <= k-1 - (t_1 + ... + t_{k-1})`
//! for `1 < k < n`, and `t_1 + ... + t_n = n-1`. Its boundary is the union
//! of the faces `L_k(r,s) = ∂_k(K_r × K_s)` over the index set `A(n)`, and
//! the whole polytope is the union of the cones `L_k(r,s) * b_n`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::cell::OnceCell;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::cubic::{complex_product_over, join, CubicComplex, CubicSet};
use crate::geometry::{int, rat, AffineSubspace, RatVec, Rational};
use crate::{Error, Result};

/// Largest `n` for which [`build_complex`] runs without an explicit cap.
pub const DEFAULT_MAX_N: usize = 6;

/// `(k, r, s)` with `1 <= k <= r` and `2 <= s = n - r + 1 <= n - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceIndex {
    pub k: usize,
    pub r: usize,
    pub s: usize,
}

impl FaceIndex {
    pub fn new(k: usize, r: usize, s: usize) -> Self {
        FaceIndex { k, r, s }
    }

    pub fn n(&self) -> usize {
        self.r + self.s - 1
    }

    pub fn is_valid(&self) -> bool {
        let n = self.n();
        1 <= self.k && self.k <= self.r && 2 <= self.s && self.s < n
    }

    fn check(&self) -> Result<()> {
        if self.r == 0 || self.s == 0 || !self.is_valid() {
            let n = (self.r + self.s).saturating_sub(1);
            return Err(Error::Index { k: self.k, r: self.r, s: self.s, n });
        }
        Ok(())
    }
}

impl fmt::Display for FaceIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.k, self.r, self.s)
    }
}

/// `A(n)` in lexicographic `(k, r, s)` order.
pub fn face_indices(n: usize) -> Vec<FaceIndex> {
    let mut out: Vec<FaceIndex> = (2..n)
        .flat_map(|s| {
            let r = n + 1 - s;
            (1..=r).map(move |k| FaceIndex::new(k, r, s))
        })
        .collect();
    out.sort();
    out
}

/// `b_n = (0, 1/2, ..., 1/2, n/2)`; `b_1 = (0)`, `b_2 = (0, 1)`.
pub fn interior_point(n: usize) -> RatVec {
    match n {
        0 => RatVec::zeros(0),
        1 => RatVec::zeros(1),
        _ => RatVec::new(
            (0..n)
                .map(|i| {
                    if i == 0 {
                        int(0)
                    } else if i + 1 == n {
                        rat(n as i64, 2)
                    } else {
                        rat(1, 2)
                    }
                })
                .collect(),
        ),
    }
}

/// Exact membership in `K_n`.
pub fn contains(n: usize, t: &RatVec) -> bool {
    if n == 0 || t.dim() != n || !t[0].is_zero() {
        return false;
    }
    let mut partial = Rational::zero();
    for k in 1..n {
        partial += &t[k];
        // k is 0-based; the constraint index is k + 1
        if k + 1 < n && (t[k].is_negative() || partial > int(k as i64)) {
            return false;
        }
    }
    partial == int(n as i64 - 1)
}

/// Whether `t ∈ K_n` lies in the face `L_k(r,s)`, tested directly on the
/// coordinates: `(t_k, ..., t_{k+s-2}, t') ∈ K_s` and `t_{k+s-1} >= t'`
/// where `t' = s - 1 - (t_k + ... + t_{k+s-2})`.
pub fn in_face(face: FaceIndex, t: &RatVec) -> bool {
    let n = face.n();
    if !face.is_valid() || !contains(n, t) {
        return false;
    }
    let (k, s) = (face.k, face.s);
    let block: Rational = (k - 1..k + s - 2).map(|i| &t[i]).sum();
    let last = int(s as i64 - 1) - block;
    let mut y: Vec<Rational> = (k - 1..k + s - 2).map(|i| t[i].clone()).collect();
    y.push(last.clone());
    t[k + s - 2] >= last && contains(s, &RatVec::new(y))
}

/// The face operator `∂_k : R^r × R^s → R^n` (linear).
pub fn d_face_raw(k: usize, x: &RatVec, y: &RatVec) -> RatVec {
    let (r, s) = (x.dim(), y.dim());
    let mut out = Vec::with_capacity(r + s - 1);
    out.extend(x.coords()[..k - 1].iter().cloned());
    out.extend(y.coords()[..s - 1].iter().cloned());
    out.push(&y[s - 1] + &x[k - 1]);
    out.extend(x.coords()[k..].iter().cloned());
    RatVec::new(out)
}

/// `∂_k(x, y)` for `x ∈ K_r`, `y ∈ K_s`, checked.
pub fn d_face(face: FaceIndex, x: &RatVec, y: &RatVec) -> Result<RatVec> {
    face.check()?;
    if !contains(face.r, x) {
        return Err(Error::Domain(format!("{x:?} is not in K_{}", face.r)));
    }
    if !contains(face.s, y) {
        return Err(Error::Domain(format!("{y:?} is not in K_{}", face.s)));
    }
    Ok(d_face_raw(face.k, x, y))
}

/// Inverse of `∂_k` on `L_k(r,s)`: the unique `(x, y) ∈ K_r × K_s` with
/// `∂_k(x, y) = p`, if there is one.
pub fn d_face_inverse(face: FaceIndex, p: &RatVec) -> Option<(RatVec, RatVec)> {
    if !face.is_valid() || p.dim() != face.n() {
        return None;
    }
    let FaceIndex { k, r, s } = face;
    let mut y: Vec<Rational> = (0..s - 1).map(|i| p[k - 1 + i].clone()).collect();
    let ys = int(s as i64 - 1) - y.iter().sum::<Rational>();
    let mut x: Vec<Rational> = Vec::with_capacity(r);
    x.extend(p.coords()[..k - 1].iter().cloned());
    x.push(&p[k + s - 2] - &ys);
    x.extend(p.coords()[k + s - 1..].iter().cloned());
    y.push(ys);
    let (x, y) = (RatVec::new(x), RatVec::new(y));
    (contains(r, &x) && contains(s, &y) && d_face_raw(k, &x, &y) == *p).then_some((x, y))
}

/// Vertices of `K_1, ..., K_n`, by the recursion
/// `V(K_n) = ⋃ ∂_k(V(K_r) × V(K_s))`. Entry `m - 1` holds `V(K_m)`, sorted.
pub fn vertex_table(n: usize) -> Vec<Vec<RatVec>> {
    let mut table: Vec<Vec<RatVec>> = Vec::with_capacity(n);
    for m in 1..=n {
        let verts = if m <= 2 {
            alloc::vec![interior_point(m)]
        } else {
            let mut vs: Vec<RatVec> = face_indices(m)
                .into_iter()
                .flat_map(|f| {
                    let (vr, vs) = (&table[f.r - 1], &table[f.s - 1]);
                    vr.iter().flat_map(move |x| vs.iter().map(move |y| d_face_raw(f.k, x, y)))
                })
                .collect();
            vs.sort();
            vs.dedup();
            vs
        };
        table.push(verts);
    }
    table
}

pub fn vertices(n: usize) -> Vec<RatVec> {
    if n == 0 {
        return Vec::new();
    }
    vertex_table(n).pop().unwrap_or_default()
}

/// `K_n` with its interior point and (lazily) its vertices.
#[derive(Clone, Debug)]
pub struct AssociahedronSpec {
    n: usize,
    b: RatVec,
    vertices: OnceCell<Vec<RatVec>>,
}

pub fn build_spec(n: usize) -> Result<AssociahedronSpec> {
    if n == 0 {
        return Err(Error::Usage("K_n needs n >= 1".into()));
    }
    Ok(AssociahedronSpec { n, b: interior_point(n), vertices: OnceCell::new() })
}

impl AssociahedronSpec {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> &RatVec {
        &self.b
    }

    pub fn contains(&self, t: &RatVec) -> bool {
        contains(self.n, t)
    }

    pub fn vertices(&self) -> &[RatVec] {
        self.vertices.get_or_init(|| vertices(self.n))
    }

    pub fn facets(&self) -> Vec<FaceIndex> {
        face_indices(self.n)
    }

    /// Whether every inequality holds strictly at `t` (and the equalities hold).
    pub fn strictly_inside(&self, t: &RatVec) -> bool {
        if !self.contains(t) {
            return false;
        }
        let mut partial = Rational::zero();
        (1..self.n.saturating_sub(1)).all(|k| {
            partial += &t[k];
            t[k].is_positive() && partial < int(k as i64)
        })
    }
}

/// Position of `t` in the cone decomposition `K_n = ⋃ L_k(r,s) * b_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    /// `t = b_n`.
    Center,
    /// `t = (1 - c)·∂_k(rho, sigma) + c·b_n` with `0 <= c < 1`.
    Cone { face: FaceIndex, rho: RatVec, sigma: RatVec, c: Rational },
}

impl Decomposition {
    pub fn c(&self) -> Rational {
        match self {
            Decomposition::Center => Rational::one(),
            Decomposition::Cone { c, .. } => c.clone(),
        }
    }
}

/// Shoots the ray from `b_n` through `t` to the boundary. Returns the
/// boundary point and `c` with `t = (1 - c)·p + c·b_n`; `None` at `t = b_n`.
pub fn boundary_projection(n: usize, t: &RatVec) -> Result<Option<(RatVec, Rational)>> {
    if !contains(n, t) {
        return Err(Error::Domain(format!("{t:?} is not in K_{n}")));
    }
    let b = interior_point(n);
    let d = t - &b;
    if d.is_zero() {
        return Ok(None);
    }
    let half = rat(1, 2);
    let mut lambda: Option<Rational> = None;
    let mut take = |v: Rational| {
        if lambda.as_ref().is_none_or(|l| v < *l) {
            lambda = Some(v);
        }
    };
    let mut dsum = Rational::zero();
    for k in 1..n - 1 {
        dsum += &d[k];
        if d[k].is_negative() {
            // t_k >= 0, with b_k = 1/2
            take(&half / -&d[k]);
        }
        if dsum.is_positive() {
            // partial sum u_{k+1} <= k, with slack k/2 at b_n
            take(rat(k as i64, 2) / &dsum);
        }
    }
    let lambda = lambda.expect("a nonzero direction in the hull leaves K_n");
    let p = &b + &d.scale(&lambda);
    let c = Rational::one() - lambda.recip();
    Ok(Some((p, c)))
}

/// Every facet cone containing `t`, in `A(n)` order. `[Center]` at `b_n`.
pub fn facet_decompose_all(n: usize, t: &RatVec) -> Result<Vec<Decomposition>> {
    let Some((p, c)) = boundary_projection(n, t)? else {
        return Ok(alloc::vec![Decomposition::Center]);
    };
    let found: Vec<Decomposition> = face_indices(n)
        .into_iter()
        .filter_map(|face| d_face_inverse(face, &p).map(|(rho, sigma)| Decomposition::Cone { face, rho, sigma, c: c.clone() }))
        .collect();
    debug_assert!(!found.is_empty(), "boundary point {p:?} lies on no face");
    Ok(found)
}

/// The cone containing `t`, taking the lexicographically smallest face on
/// ridges.
pub fn facet_decompose(n: usize, t: &RatVec) -> Result<Decomposition> {
    let mut all = facet_decompose_all(n, t)?;
    if all.is_empty() {
        return Err(Error::Domain(format!("{t:?} projects to no face of K_{n}")));
    }
    Ok(all.swap_remove(0))
}

/// Rows of the `s_j ∘ ∂_k` case table that apply to `(j, k, r, s)`,
/// numbered 1 to 6 in table order.
pub fn degeneracy_rows(j: usize, face: FaceIndex) -> Vec<u8> {
    let FaceIndex { k, r, s } = face;
    let n = face.n();
    let conds = [
        j < k && r > 2,
        j == 1 && k == 2 && r == 2,
        k <= j && j < k + s && r < n - 1,
        k <= j && j <= k + 1 && r == n - 1,
        k + s <= j && j <= n && r > 2,
        j == n && k == 1 && r == 2,
    ];
    (1..=6u8).zip(conds).filter(|(_, c)| *c).map(|(i, _)| i).collect()
}

/// Evaluates one row of the case table on `(rho, sigma) ∈ K_r × K_s`.
///
/// Row 5 composes with `∂_k`: the deleted letter sits after the insertion
/// slot, so the slot index does not move.
pub fn degeneracy_row(row: u8, j: usize, face: FaceIndex, rho: &RatVec, sigma: &RatVec) -> Result<RatVec> {
    let FaceIndex { k, r, s } = face;
    match row {
        1 => d_face(FaceIndex::new(k - 1, r - 1, s), &degeneracy(j, r, rho)?, sigma),
        2 | 6 => Ok(sigma.clone()),
        3 => d_face(FaceIndex::new(k, r, s - 1), rho, &degeneracy(j - k + 1, s, sigma)?),
        4 => Ok(rho.clone()),
        5 => d_face(FaceIndex::new(k, r - 1, s), &degeneracy(j - s + 1, r, rho)?, sigma),
        _ => Err(Error::Usage(format!("no row {row} in the degeneracy table"))),
    }
}

/// `s_j ∘ ∂_k (rho, sigma)` by the first applicable row.
pub fn degeneracy_on_face(j: usize, face: FaceIndex, rho: &RatVec, sigma: &RatVec) -> Result<RatVec> {
    face.check()?;
    let row = *degeneracy_rows(j, face).first().ok_or_else(|| Error::Usage(format!("no degeneracy row for j={j} on face {face}")))?;
    degeneracy_row(row, j, face, rho, sigma)
}

/// `s_j : K_n → K_{n-1}`, extended radially from the facets:
/// `s_j((1-c)·∂_k(rho,sigma) + c·b_n) = (1-c)·s_j∂_k(rho,sigma) + c·b_{n-1}`.
pub fn degeneracy(j: usize, n: usize, t: &RatVec) -> Result<RatVec> {
    if n < 2 || j == 0 || j > n {
        return Err(Error::Usage(format!("s_{j} is not defined on K_{n}")));
    }
    let target_b = interior_point(n - 1);
    match facet_decompose(n, t)? {
        Decomposition::Center => Ok(target_b),
        Decomposition::Cone { face, rho, sigma, c } => {
            let v = degeneracy_on_face(j, face, &rho, &sigma)?;
            Ok(v.lerp(&target_b, &c))
        }
    }
}

/// Lattice points of `K_n` with coordinates in `(1/den)Z`, sorted.
pub fn grid_points(n: usize, den: u32) -> Vec<RatVec> {
    let den = den.max(1) as i64;
    if n <= 2 {
        return alloc::vec![interior_point(n.max(1))];
    }
    // integer numerators a_2..a_{n-1}, partial sums bounded by (k-1)·den
    let mut out = Vec::new();
    let mut cur: Vec<i64> = alloc::vec![0];
    fn rec(n: usize, den: i64, cur: &mut Vec<i64>, sum: i64, out: &mut Vec<RatVec>) {
        let k = cur.len() + 1;
        if k == n {
            let last = (n as i64 - 1) * den - sum;
            let mut coords: Vec<Rational> = cur.iter().map(|&a| rat(a, den)).collect();
            coords.push(rat(last, den));
            out.push(RatVec::new(coords));
            return;
        }
        for a in 0..=((k as i64 - 1) * den - sum) {
            cur.push(a);
            rec(n, den, cur, sum + a, out);
            cur.pop();
        }
    }
    rec(n, den, &mut cur, 0, &mut out);
    out.sort();
    out
}

/// `count` points of `grid_points(n, den)` spread evenly through its sorted
/// order, always including `b_n` when it lies on the grid.
pub fn sample_points(n: usize, den: u32, count: usize) -> Vec<RatVec> {
    let grid = grid_points(n, den);
    let count = count.clamp(1, grid.len());
    let mut out: Vec<RatVec> = (0..count).map(|i| grid[i * grid.len() / count].clone()).collect();
    let b = interior_point(n.max(1));
    if !out.contains(&b) && grid.binary_search(&b).is_ok() {
        out[0] = b;
    }
    out
}

/// `K(n)` together with its facet subcomplexes `L_k(r,s)`.
#[derive(Clone, Debug)]
pub struct AssocComplex {
    pub n: usize,
    pub complex: CubicComplex,
    /// `∂K(n) = ⋃ L_k(r,s)`.
    pub boundary: CubicComplex,
    pub facets: BTreeMap<FaceIndex, CubicComplex>,
}

/// Builds `K(n)` for `n <= DEFAULT_MAX_N`.
pub fn build_complex(n: usize) -> Result<AssocComplex> {
    build_complex_capped(n, DEFAULT_MAX_N)
}

pub fn build_complex_capped(n: usize, max_n: usize) -> Result<AssocComplex> {
    Ok(build_complexes(n, max_n)?.pop().expect("n >= 1"))
}

/// `K(1), ..., K(n)`, each built from the previous ones.
pub fn build_complexes(n: usize, max_n: usize) -> Result<Vec<AssocComplex>> {
    if n == 0 {
        return Err(Error::Usage("K(n) needs n >= 1".into()));
    }
    if n > max_n {
        return Err(Error::Usage(format!("K({n}) exceeds the configured maximum {max_n}")));
    }
    let mut built: Vec<AssocComplex> = Vec::with_capacity(n);
    for m in 1..=n {
        let next = build_step(m, &built)?;
        built.push(next);
    }
    Ok(built)
}

/// Directions of `H_m = {x : x_1 = 0, x_2 + ... + x_m = 0}`.
fn h_basis(m: usize) -> Vec<RatVec> {
    (1..m.saturating_sub(1))
        .map(|i| {
            let mut v = RatVec::zeros(m).into_coords();
            v[i] = int(1);
            v[m - 1] = int(-1);
            RatVec::new(v)
        })
        .collect()
}

/// `L_k(r,s) = ∂_k(K(r) × {b_s}) ×_{L1,L2} ∂_k({b_r} × K(s))`.
pub fn facet_complex(face: FaceIndex, kr: &CubicComplex, ks: &CubicComplex) -> Result<CubicComplex> {
    face.check()?;
    let FaceIndex { k, r, s } = face;
    let n = face.n();
    let (br, bs) = (interior_point(r), interior_point(s));
    let a = d_face_raw(k, &br, &bs);
    let v1: Vec<RatVec> = h_basis(r).iter().map(|h| d_face_raw(k, h, &RatVec::zeros(s))).collect();
    let v2: Vec<RatVec> = h_basis(s).iter().map(|h| d_face_raw(k, &RatVec::zeros(r), h)).collect();
    let l1 = AffineSubspace::new(a.clone(), &v1)?;
    let l2 = AffineSubspace::new(a, &v2)?;
    let left = kr.map_affine(&|x| d_face_raw(k, x, &bs), n)?;
    let right = ks.map_affine(&|y| d_face_raw(k, &br, y), n)?;
    complex_product_over(&left, &right, &l1, &l2)
}

fn build_step(n: usize, built: &[AssocComplex]) -> Result<AssocComplex> {
    let empty = CubicSet::empty(n);
    if n == 1 {
        let complex = CubicComplex::new(1, [empty])?;
        return Ok(AssocComplex { n, boundary: complex.clone(), complex, facets: BTreeMap::new() });
    }
    let mut facets = BTreeMap::new();
    let mut boundary_cells = alloc::vec![empty];
    for face in face_indices(n) {
        let l = facet_complex(face, &built[face.r - 1].complex, &built[face.s - 1].complex)?;
        boundary_cells.extend(l.cells().iter().cloned());
        facets.insert(face, l);
    }
    let boundary = CubicComplex::new(n, boundary_cells)?;
    let apex = CubicSet::point(interior_point(n));
    let mut cells: Vec<CubicSet> = boundary.cells().to_vec();
    for c in boundary.cells() {
        cells.push(join(c, &apex)?);
    }
    let complex = CubicComplex::new(n, cells)?;
    Ok(AssocComplex { n, complex, boundary, facets })
}

/// `n`-th Catalan number.
pub fn catalan(n: usize) -> u64 {
    (0..n as u64).fold(1u64, |c, i| c * 2 * (2 * i + 1) / (i + 2))
}
