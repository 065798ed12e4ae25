//! Stationary paths in `R^d`: maps `u : R → R^d` with `u = u ∘ clamp`.
//!
//! Paths are built as `γ ∘ λ ∘ clamp` for an explicit curve `γ` and a bump
//! function `λ`, or as concatenations of other paths. Evaluation is in
//! double precision; the construction data that decides composability is
//! compared exactly.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// `max(0, min(1, t))`.
pub fn clamp(t: f64) -> f64 {
    t.clamp(0.0, 1.0)
}

/// A smooth step: `0` on `(-∞, 0]`, `1` on `[1, ∞)`, `λ(t) + λ(1-t) = 1`,
/// strictly increasing on `(0, 1)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Bump {
    /// Built from `exp(-1/t)`.
    #[default]
    Exp,
    /// Built from `exp(-1/t²)`.
    ExpSquared,
}

impl Bump {
    fn g(self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match self {
            Bump::Exp => libm::exp(-1.0 / t),
            Bump::ExpSquared => libm::exp(-1.0 / (t * t)),
        }
    }

    pub fn eval(self, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else if t >= 1.0 {
            1.0
        } else {
            let (a, b) = (self.g(t), self.g(1.0 - t));
            a / (a + b)
        }
    }
}

/// `λ` built from `exp(-1/t)`.
pub fn bump(t: f64) -> f64 {
    Bump::Exp.eval(t)
}

/// A curve `γ : [0, 1] → R^d`.
#[derive(Clone, Debug, PartialEq)]
pub enum Curve {
    /// `γ(s) = Σ_i coeffs[i] s^i`.
    Poly {
        coeffs: Vec<Vec<f64>>,
    },
    /// `γ(s) = offset + cos·cos(freq π s) + sin·sin(freq π s)`.
    Trig {
        offset: Vec<f64>,
        cos: Vec<f64>,
        sin: Vec<f64>,
        freq: f64,
    },
    Const {
        value: Vec<f64>,
    },
    /// `γ(s) = (1-s) a + s b + s(1-s) q(s)` with `q` polynomial; its
    /// endpoints are `a` and `b` exactly.
    Bridge {
        a: Vec<f64>,
        b: Vec<f64>,
        q: Vec<Vec<f64>>,
    },
}

fn poly_eval(coeffs: &[Vec<f64>], d: usize, s: f64) -> Vec<f64> {
    let mut out = alloc::vec![0.0; d];
    for c in coeffs.iter().rev() {
        for (o, ci) in out.iter_mut().zip(c) {
            *o = *o * s + ci;
        }
    }
    out
}

impl Curve {
    pub fn dim(&self) -> usize {
        match self {
            Curve::Poly { coeffs } => coeffs.first().map_or(0, Vec::len),
            Curve::Trig { offset, .. } => offset.len(),
            Curve::Const { value } => value.len(),
            Curve::Bridge { a, .. } => a.len(),
        }
    }

    /// Checks that every coefficient vector has the curve's dimension.
    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        let lens: Vec<usize> = match self {
            Curve::Poly { coeffs } => coeffs.iter().map(Vec::len).collect(),
            Curve::Trig { cos, sin, .. } => alloc::vec![cos.len(), sin.len()],
            Curve::Const { .. } => Vec::new(),
            Curve::Bridge { b, q, .. } => core::iter::once(b.len()).chain(q.iter().map(Vec::len)).collect(),
        };
        if d == 0 {
            return Err(Error::Usage("curve has no coordinates".into()));
        }
        match lens.into_iter().find(|&l| l != d) {
            Some(found) => Err(Error::DimensionMismatch { expected: d, found }),
            None => Ok(()),
        }
    }

    pub fn eval(&self, s: f64) -> Vec<f64> {
        let d = self.dim();
        match self {
            Curve::Poly { coeffs } => poly_eval(coeffs, d, s),
            Curve::Trig { offset, cos, sin, freq } => {
                let (c, sn) = (libm::cos(freq * core::f64::consts::PI * s), libm::sin(freq * core::f64::consts::PI * s));
                (0..d).map(|i| offset[i] + cos[i] * c + sin[i] * sn).collect()
            }
            Curve::Const { value } => value.clone(),
            Curve::Bridge { a, b, q } => {
                let qs = poly_eval(q, d, s);
                let w = s * (1.0 - s);
                (0..d).map(|i| (1.0 - s) * a[i] + s * b[i] + w * qs[i]).collect()
            }
        }
    }
}

/// One piece of a concatenation: `t ↦ path((t - start) / width)`, used on
/// `t < next_start`.
#[derive(Clone, Debug)]
pub struct Piece {
    pub path: SmoothPath,
    pub start: f64,
    pub width: f64,
}

type EvalFn = dyn Fn(f64) -> Vec<f64> + Send + Sync;

#[derive(Clone)]
enum Node {
    Const(Vec<f64>),
    Curve { curve: Curve, bump: Bump },
    Concat(Vec<Piece>),
    Raw(Arc<EvalFn>),
}

impl fmt::Debug for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Const(v) => f.debug_tuple("Const").field(v).finish(),
            Node::Curve { curve, bump } => f.debug_struct("Curve").field("curve", curve).field("bump", bump).finish(),
            Node::Concat(p) => f.debug_tuple("Concat").field(p).finish(),
            Node::Raw(_) => f.write_str("Raw(..)"),
        }
    }
}

/// A path `R → R^d` that is constant outside `[0, 1]`.
#[derive(Clone, Debug)]
pub struct SmoothPath {
    node: Arc<Node>,
    d: usize,
    start: Vec<f64>,
    end: Vec<f64>,
}

impl SmoothPath {
    fn from_node(node: Node, d: usize) -> Self {
        let mut p = SmoothPath { node: Arc::new(node), d, start: Vec::new(), end: Vec::new() };
        p.start = p.eval(0.0);
        p.end = p.eval(1.0);
        p
    }

    /// The constant path at `x`.
    pub fn constant(x: Vec<f64>) -> Self {
        let d = x.len();
        SmoothPath::from_node(Node::Const(x), d)
    }

    /// `u(t) = γ(λ(clamp(t)))`.
    pub fn from_curve(curve: Curve, bump: Bump) -> Result<Self> {
        curve.validate()?;
        let d = curve.dim();
        Ok(SmoothPath::from_node(Node::Curve { curve, bump }, d))
    }

    /// Wraps an arbitrary evaluator, precomposed with `clamp`. Smoothness is
    /// the caller's responsibility.
    pub fn from_fn(d: usize, f: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static) -> Self {
        SmoothPath::from_node(Node::Raw(Arc::new(f)), d)
    }

    /// Pieces laid end to end. Consecutive pieces must be composable; the
    /// first piece should start at 0 and the last should end at 1.
    pub fn concat(pieces: Vec<Piece>) -> Result<Self> {
        let first = pieces.first().ok_or_else(|| Error::Usage("concatenation of no paths".into()))?;
        let d = first.path.d;
        for (i, w) in pieces.windows(2).enumerate() {
            if w[1].path.d != d {
                return Err(Error::DimensionMismatch { expected: d, found: w[1].path.d });
            }
            if w[0].path.end != w[1].path.start {
                return Err(Error::Composability { junction: i });
            }
        }
        if pieces.iter().any(|p| p.width.is_nan() || p.width <= 0.0) {
            return Err(Error::Domain("concatenation piece of non-positive width".into()));
        }
        if pieces.len() == 1 && pieces[0].start == 0.0 && pieces[0].width == 1.0 {
            return Ok(pieces.into_iter().next().expect("one piece").path);
        }
        Ok(SmoothPath::from_node(Node::Concat(pieces), d))
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn start(&self) -> &[f64] {
        &self.start
    }

    pub fn end(&self) -> &[f64] {
        &self.end
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let t = clamp(t);
        match &*self.node {
            Node::Const(x) => x.clone(),
            Node::Curve { curve, bump } => curve.eval(bump.eval(t)),
            Node::Raw(f) => f(t),
            Node::Concat(pieces) => {
                let i = pieces.windows(2).position(|w| t < w[1].start).unwrap_or(pieces.len() - 1);
                let p = &pieces[i];
                p.path.eval((t - p.start) / p.width)
            }
        }
    }

    /// First coordinate, handy for one-dimensional probes.
    pub fn eval1(&self, t: f64) -> f64 {
        self.eval(t)[0]
    }
}

/// `u(t) = γ(λ(clamp(t)))` with the default bump.
pub fn make_path(curve: Curve) -> Result<SmoothPath> {
    SmoothPath::from_curve(curve, Bump::Exp)
}

/// Composable paths through `nodes`: path `i` is the bridge from `nodes[i]`
/// to `nodes[i + 1]` with polynomial `wiggles[i]`.
pub fn bridge_chain(nodes: &[Vec<f64>], wiggles: &[Vec<Vec<f64>>], bump: Bump) -> Result<Vec<SmoothPath>> {
    if nodes.len() != wiggles.len() + 1 {
        return Err(Error::Usage(format!("{} nodes cannot join {} paths", nodes.len(), wiggles.len())));
    }
    nodes
        .windows(2)
        .zip(wiggles)
        .map(|(ab, q)| SmoothPath::from_curve(Curve::Bridge { a: ab[0].clone(), b: ab[1].clone(), q: q.clone() }, bump))
        .collect()
}

/// Central estimate of `f^(m)(t0)`, `1 <= m <= 4`, Richardson-extrapolated
/// from steps `h` and `h/2`. The stencils are `O(h²)`, so the result is
/// `O(h⁴)` plus rounding of order `ε |f| / h^m`.
pub fn finite_diff(f: &dyn Fn(f64) -> f64, t0: f64, m: usize, h: f64) -> f64 {
    let central = |h: f64| -> f64 {
        let at = |k: f64| f(t0 + k * h);
        match m {
            1 => (at(1.0) - at(-1.0)) / (2.0 * h),
            2 => (at(1.0) - 2.0 * at(0.0) + at(-1.0)) / (h * h),
            3 => (at(2.0) - 2.0 * at(1.0) + 2.0 * at(-1.0) - at(-2.0)) / (2.0 * h * h * h),
            4 => (at(2.0) - 4.0 * at(1.0) + 6.0 * at(0.0) - 4.0 * at(-1.0) + at(-2.0)) / (h * h * h * h),
            _ => f64::NAN,
        }
    };
    (4.0 * central(h / 2.0) - central(h)) / 3.0
}

/// Fornberg's weights for the `m`-th derivative at `x0` from values at
/// `nodes`.
pub fn fornberg_weights(x0: f64, nodes: &[f64], m: usize) -> Vec<f64> {
    let n = nodes.len();
    // c[j][k]: weight of node j for derivative k
    let mut c = alloc::vec![alloc::vec![0.0; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// One-sided estimate of `f^(m)(t0)` from `m + accuracy` equispaced samples
/// on the side given by `dir` (`-1.0` left, `1.0` right), `m >= 1`.
pub fn one_sided_diff(f: &dyn Fn(f64) -> f64, t0: f64, m: usize, h: f64, accuracy: usize, dir: f64) -> f64 {
    let offsets: Vec<f64> = (0..m + accuracy).map(|i| dir * i as f64 * h).collect();
    let w = fornberg_weights(0.0, &offsets, m);
    // the weights sum to zero; differencing against f(t0) keeps constants exact
    let f0 = f(t0);
    offsets.iter().zip(&w).skip(1).map(|(o, wi)| wi * (f(t0 + o) - f0)).sum()
}

/// A polynomial test function `R^d → R`, as `(coefficient, exponents)`
/// monomials.
#[derive(Clone, Debug, PartialEq)]
pub struct Functional {
    pub terms: Vec<(f64, Vec<u32>)>,
}

impl Functional {
    /// The `i`-th coordinate.
    pub fn coordinate(d: usize, i: usize) -> Self {
        let mut e = alloc::vec![0; d];
        e[i] = 1;
        Functional { terms: alloc::vec![(1.0, e)] }
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(_, e)| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(c, e)| c * x.iter().zip(e).map(|(xi, &k)| libm::pow(*xi, k as f64)).product::<f64>()).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlatnessEntry {
    pub order: usize,
    pub estimate: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Central differences of `φ ∘ u` at `t0` for orders `1..=max_order`; each
/// passes when `|estimate| <= tol`.
pub fn flatness_probe(u: &SmoothPath, phi: &Functional, t0: f64, max_order: usize, h: f64, tol: f64) -> Vec<FlatnessEntry> {
    let f = |t: f64| phi.eval(&u.eval(t));
    (1..=max_order)
        .map(|order| {
            let estimate = finite_diff(&f, t0, order, h);
            FlatnessEntry { order, estimate, tol, pass: estimate.abs() <= tol }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmoothnessEntry {
    pub order: usize,
    pub coordinate: usize,
    pub left: f64,
    pub right: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Settings for [`smoothness_probe`]. The default stencil stays within the
/// flat part of a bumped junction, so junction probes are exact; away from
/// junctions third derivatives resolve only to about `1e-4` relative.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeConfig {
    pub h: f64,
    /// Order of accuracy of the one-sided stencils.
    pub accuracy: usize,
    /// Relative tolerance: `|left - right| <= tol · max(1, |left|, |right|)`.
    pub tol: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { h: 1e-3, accuracy: 4, tol: 1e-5 }
    }
}

/// Compares left and right one-sided derivatives of every coordinate of `u`
/// at `t0`, for orders `1..=max_order`.
pub fn smoothness_probe(u: &SmoothPath, t0: f64, max_order: usize, cfg: ProbeConfig) -> Vec<SmoothnessEntry> {
    let mut out = Vec::new();
    for coordinate in 0..u.dim() {
        let f = |t: f64| u.eval(t)[coordinate];
        for order in 1..=max_order {
            let left = one_sided_diff(&f, t0, order, cfg.h, cfg.accuracy, -1.0);
            let right = one_sided_diff(&f, t0, order, cfg.h, cfg.accuracy, 1.0);
            let scale = 1.0f64.max(left.abs()).max(right.abs());
            let pass = (left - right).abs() <= cfg.tol * scale;
            out.push(SmoothnessEntry { order, coordinate, left, right, tol: cfg.tol, pass });
        }
    }
    out
}
