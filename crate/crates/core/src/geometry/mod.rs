//! Exact rational linear algebra: points, affine hulls, intersections of
//! affine subspaces and convex membership.
//!
//! Nothing in here touches floating point. Affine subspaces are kept in a
//! canonical form (direction basis in reduced row echelon form, base point
//! zero on the pivot columns) so that equal subspaces compare equal.

mod lp;

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Index, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use lp::{find_feasible, maximize, LpOutcome};

use crate::{Error, Result};

/// Arbitrary precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Nearest double to an exact rational.
pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// A point (or direction) in `R^n` with exact coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatVec(Vec<Rational>);

impl RatVec {
    pub fn new(coords: Vec<Rational>) -> Self {
        RatVec(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        RatVec((0..dim).map(|_| Rational::zero()).collect())
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RatVec(coords.iter().map(|&c| int(c)).collect())
    }

    /// Coordinates given as `(numerator, denominator)` pairs.
    pub fn from_fracs(coords: &[(i64, i64)]) -> Self {
        RatVec(coords.iter().map(|&(p, q)| rat(p, q)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, factor: &Rational) -> RatVec {
        RatVec(self.0.iter().map(|c| c * factor).collect())
    }

    pub fn dot(&self, other: &RatVec) -> Rational {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().sum()
    }

    /// `(1 - t) * self + t * other`.
    pub fn lerp(&self, other: &RatVec, t: &Rational) -> RatVec {
        let s = Rational::one() - t;
        RatVec(self.0.iter().zip(&other.0).map(|(a, b)| a * &s + b * t).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(to_f64).collect()
    }
}

impl Index<usize> for RatVec {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl Add for &RatVec {
    type Output = RatVec;

    fn add(self, rhs: &RatVec) -> RatVec {
        debug_assert_eq!(self.dim(), rhs.dim());
        RatVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RatVec {
    type Output = RatVec;

    fn sub(self, rhs: &RatVec) -> RatVec {
        debug_assert_eq!(self.dim(), rhs.dim());
        RatVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl FromIterator<Rational> for RatVec {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        RatVec(iter.into_iter().collect())
    }
}

impl fmt::Debug for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

pub(crate) fn check_dim(expected: usize, v: &RatVec) -> Result<()> {
    if v.dim() == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found: v.dim() })
    }
}

/// Reduces `rows` to reduced row echelon form in place, dropping zero rows.
/// Returns the pivot column of each remaining row.
fn rref(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row[col..ncols].iter_mut().zip(&pivot_row[col..ncols]) {
                    *x -= p * &factor;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Rank of a family of vectors.
pub fn rank(vectors: &[RatVec]) -> usize {
    let mut rows: Vec<Vec<Rational>> = vectors.iter().map(|v| v.0.clone()).collect();
    rref(&mut rows).len()
}

/// Solves `columns * x = rhs` where `columns[j]` is the j-th column.
/// Returns one solution together with a basis of the kernel, or `None` when
/// the system is inconsistent.
fn solve_columns(columns: &[RatVec], rhs: &RatVec) -> Option<(Vec<Rational>, Vec<Vec<Rational>>)> {
    let m = rhs.dim();
    let k = columns.len();
    let mut rows: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut row: Vec<Rational> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut rows);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut x = alloc::vec![Rational::zero(); k];
    for (row, &p) in rows.iter().zip(&pivots) {
        x[p] = row[k].clone();
    }
    let free: Vec<usize> = (0..k).filter(|j| !pivots.contains(j)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = alloc::vec![Rational::zero(); k];
            v[f] = Rational::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect();
    Some((x, kernel))
}

/// An affine subspace `base + span(basis)` of `R^n`.
///
/// The basis is linearly independent and kept in reduced row echelon form;
/// the base point has zero coordinates on the pivot columns.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineSubspace {
    base: RatVec,
    basis: Vec<RatVec>,
    pivots: Vec<usize>,
}

/// Result of intersecting two affine subspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Intersection {
    Empty,
    Point(RatVec),
    Subspace(AffineSubspace),
}

impl AffineSubspace {
    /// `base + span(directions)`. The directions may be dependent.
    pub fn new(base: RatVec, directions: &[RatVec]) -> Result<Self> {
        for d in directions {
            check_dim(base.dim(), d)?;
        }
        let mut rows: Vec<Vec<Rational>> = directions.iter().map(|v| v.0.clone()).collect();
        let pivots = rref(&mut rows);
        let basis: Vec<RatVec> = rows.into_iter().map(RatVec).collect();
        let base = reduce(&base, &basis, &pivots);
        Ok(AffineSubspace { base, basis, pivots })
    }

    pub fn point(p: RatVec) -> Self {
        AffineSubspace { base: p, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.dim()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn base(&self) -> &RatVec {
        &self.base
    }

    pub fn basis(&self) -> &[RatVec] {
        &self.basis
    }

    pub fn contains(&self, p: &RatVec) -> bool {
        p.dim() == self.ambient_dim() && reduce(p, &self.basis, &self.pivots) == self.base
    }

    /// Whether the direction space contains `v`.
    pub fn contains_direction(&self, v: &RatVec) -> bool {
        v.dim() == self.ambient_dim() && reduce(v, &self.basis, &self.pivots).is_zero()
    }

    /// Image under an affine map, given as a function on points. The map is
    /// assumed affine; its linear part is recovered from `f(base + d) - f(base)`.
    pub fn map_affine(&self, f: &dyn Fn(&RatVec) -> RatVec) -> Result<Self> {
        let base = f(&self.base);
        let dirs: Vec<RatVec> = self.basis.iter().map(|d| &f(&(&self.base + d)) - &base).collect();
        AffineSubspace::new(base, &dirs)
    }

    /// Sum of direction spaces, placed at `self.base`.
    pub fn join_directions(&self, other: &AffineSubspace) -> Result<Self> {
        let mut dirs = self.basis.clone();
        dirs.extend(other.basis.iter().cloned());
        AffineSubspace::new(self.base.clone(), &dirs)
    }
}

/// Subtracts from `p` the combination of basis rows that clears its pivot
/// coordinates.
fn reduce(p: &RatVec, basis: &[RatVec], pivots: &[usize]) -> RatVec {
    let mut out = p.clone();
    for (b, &col) in basis.iter().zip(pivots) {
        let c = out[col].clone();
        if !c.is_zero() {
            out = &out - &b.scale(&c);
        }
    }
    out
}

/// Smallest affine subspace containing all the points.
pub fn affine_hull(points: &[RatVec]) -> Result<AffineSubspace> {
    let first = points.first().ok_or_else(|| Error::Usage("affine hull of an empty point list".into()))?;
    for p in points {
        check_dim(first.dim(), p)?;
    }
    let dirs: Vec<RatVec> = points[1..].iter().map(|p| p - first).collect();
    AffineSubspace::new(first.clone(), &dirs)
}

/// Exact intersection of two affine subspaces of the same ambient space.
pub fn intersect_affine(a: &AffineSubspace, b: &AffineSubspace) -> Result<Intersection> {
    check_dim(a.ambient_dim(), &b.base)?;
    // a.base + A alpha = b.base + B beta  <=>  [A | -B] (alpha, beta) = b.base - a.base
    let mut columns: Vec<RatVec> = a.basis.clone();
    columns.extend(b.basis.iter().map(|v| v.scale(&-Rational::one())));
    let rhs = &b.base - &a.base;
    let Some((x, kernel)) = solve_columns(&columns, &rhs) else {
        return Ok(Intersection::Empty);
    };
    let along_a = |coeffs: &[Rational]| -> RatVec {
        a.basis.iter().zip(coeffs).fold(RatVec::zeros(a.ambient_dim()), |acc, (v, c)| &acc + &v.scale(c))
    };
    let point = &a.base + &along_a(&x[..a.dim()]);
    if kernel.is_empty() {
        return Ok(Intersection::Point(point));
    }
    let dirs: Vec<RatVec> = kernel.iter().map(|k| along_a(&k[..a.dim()])).collect();
    Ok(Intersection::Subspace(AffineSubspace::new(point, &dirs)?))
}

/// Whether the direction spaces of the two subspaces meet only in zero.
pub fn directions_independent(a: &AffineSubspace, b: &AffineSubspace) -> bool {
    let mut all = a.basis.clone();
    all.extend(b.basis.iter().cloned());
    rank(&all) == a.dim() + b.dim()
}

/// Whether `p` is a convex combination of `vertices`, decided by exact
/// phase-one simplex.
pub fn convex_membership(p: &RatVec, vertices: &[RatVec]) -> bool {
    convex_weights(p, vertices).is_some()
}

/// Convex weights expressing `p` in terms of `vertices`, if any exist.
pub fn convex_weights(p: &RatVec, vertices: &[RatVec]) -> Option<Vec<Rational>> {
    if vertices.is_empty() || vertices.iter().any(|v| v.dim() != p.dim()) {
        return None;
    }
    let mut rows: Vec<Vec<Rational>> = (0..p.dim()).map(|i| vertices.iter().map(|v| v[i].clone()).collect()).collect();
    rows.push(alloc::vec![Rational::one(); vertices.len()]);
    let mut rhs: Vec<Rational> = p.0.clone();
    rhs.push(Rational::one());
    find_feasible(&rows, &rhs)
}

/// Whether the convex hulls of two vertex sets meet.
pub fn hulls_meet(a: &[RatVec], b: &[RatVec]) -> bool {
    if a.is_empty() || b.is_empty() {
        return false;
    }
    let (rows, rhs) = meet_system(a, b);
    find_feasible(&rows, &rhs).is_some()
}

/// Whether every point of `conv(a) ∩ conv(b)` is a convex combination of the
/// vertices of `a` selected by `keep`. Decided by maximizing the weight the
/// intersection can put on the unselected vertices.
pub fn meet_within(a: &[RatVec], b: &[RatVec], keep: &[bool]) -> bool {
    if a.is_empty() || b.is_empty() {
        return true;
    }
    let (rows, rhs) = meet_system(a, b);
    let mut objective = alloc::vec![Rational::zero(); a.len() + b.len()];
    for (i, &k) in keep.iter().enumerate() {
        if !k {
            objective[i] = Rational::one();
        }
    }
    match maximize(&objective, &rows, &rhs) {
        LpOutcome::Infeasible => true,
        LpOutcome::Optimal { value, .. } => !value.is_positive(),
        LpOutcome::Unbounded => false,
    }
}

/// `sum la_i a_i - sum mu_j b_j = 0`, `sum la = 1`, `sum mu = 1`.
fn meet_system(a: &[RatVec], b: &[RatVec]) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let dim = a[0].dim();
    let mut rows: Vec<Vec<Rational>> =
        (0..dim).map(|i| a.iter().map(|v| v[i].clone()).chain(b.iter().map(|v| -v[i].clone())).collect()).collect();
    let mut rhs = alloc::vec![Rational::zero(); dim];
    let ones = |first: bool| -> Vec<Rational> {
        a.iter()
            .map(|_| if first { Rational::one() } else { Rational::zero() })
            .chain(b.iter().map(|_| if first { Rational::zero() } else { Rational::one() }))
            .collect()
    };
    rows.push(ones(true));
    rows.push(ones(false));
    rhs.push(Rational::one());
    rhs.push(Rational::one());
    (rows, rhs)
}

/// Componentwise bounds of a nonempty point set.
pub fn bounding_box(points: &[RatVec]) -> Option<(RatVec, RatVec)> {
    let first = points.first()?;
    let mut lo = first.clone();
    let mut hi = first.clone();
    for p in &points[1..] {
        for i in 0..p.dim() {
            if p[i] < lo[i] {
                lo.0[i] = p[i].clone();
            }
            if p[i] > hi[i] {
                hi.0[i] = p[i].clone();
            }
        }
    }
    Some((lo, hi))
}

pub fn boxes_overlap(a: &(RatVec, RatVec), b: &(RatVec, RatVec)) -> bool {
    (0..a.0.dim()).all(|i| a.0[i] <= b.1[i] && b.0[i] <= a.1[i])
}

impl Intersection {
    pub fn describe(&self) -> alloc::string::String {
        match self {
            Intersection::Empty => "empty".into(),
            Intersection::Point(p) => format!("point {p}"),
            Intersection::Subspace(s) => format!("{}-dimensional subspace", s.dim()),
        }
    }
}
