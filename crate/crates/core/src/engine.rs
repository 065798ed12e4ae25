//! Concatenation weights, the cone maps `φ_n : K_n → E_n` and
//! `ψ_n : K_n → D_n`, the forms `M(n)` and the checks of the A-infinity
//! conditions on them.
//!
//! `E_n` is the open simplex of speeds `r_1 + ... + r_n = 1`; `β_n` plays
//! path `i` on an interval of length `r_i`. `D_n` adds plateaus
//! `ε_1, ..., ε_{n-1}` between the pieces (`α_n`), which makes
//! concatenation smooth without any assumption on the paths' endpoints.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::assoc::{d_face, facet_decompose, facet_decompose_all, interior_point, Decomposition, FaceIndex};
use crate::geometry::{int, rat, to_f64, RatVec, Rational};
use crate::paths::{clamp, Piece, SmoothPath};
use crate::{Error, Result};

/// A point of `E_n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConcatWeights {
    r: Vec<Rational>,
}

impl ConcatWeights {
    /// Requires every `r_i > 0` and `Σ r_i = 1`.
    pub fn new(r: Vec<Rational>) -> Result<Self> {
        if r.is_empty() {
            return Err(Error::Usage("E_n needs n >= 1".into()));
        }
        if r.iter().any(|x| !x.is_positive()) {
            return Err(Error::Domain(format!("weights {} leave the open simplex", fmt_rats(&r))));
        }
        let total: Rational = r.iter().sum();
        if !total.is_one() {
            return Err(Error::Domain(format!("weights {} sum to {total}", fmt_rats(&r))));
        }
        Ok(ConcatWeights { r })
    }

    pub fn n(&self) -> usize {
        self.r.len()
    }

    pub fn r(&self) -> &[Rational] {
        &self.r
    }

    /// `(1 - c)·self + c·other`; stays in `E_n` for `0 <= c <= 1`.
    pub fn lerp(&self, other: &ConcatWeights, c: &Rational) -> ConcatWeights {
        ConcatWeights { r: lerp_rats(&self.r, &other.r, c) }
    }
}

/// A point of `D_n`: `n` speeds and `n - 1` plateaus.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StableConcatWeights {
    r: Vec<Rational>,
    eps: Vec<Rational>,
}

impl StableConcatWeights {
    /// Requires all entries in `(0, 1)` (except `r = (1)` for `n = 1`) and a
    /// total of 1.
    pub fn new(r: Vec<Rational>, eps: Vec<Rational>) -> Result<Self> {
        if r.is_empty() || eps.len() + 1 != r.len() {
            return Err(Error::Usage(format!("D_n needs n speeds and n-1 plateaus, got {} and {}", r.len(), eps.len())));
        }
        if r.iter().chain(&eps).any(|x| !x.is_positive()) {
            return Err(Error::Domain(format!("weights {};{} leave D_n", fmt_rats(&r), fmt_rats(&eps))));
        }
        let total: Rational = r.iter().chain(&eps).sum();
        if !total.is_one() {
            return Err(Error::Domain(format!("weights {};{} sum to {total}", fmt_rats(&r), fmt_rats(&eps))));
        }
        Ok(StableConcatWeights { r, eps })
    }

    pub fn n(&self) -> usize {
        self.r.len()
    }

    pub fn r(&self) -> &[Rational] {
        &self.r
    }

    pub fn eps(&self) -> &[Rational] {
        &self.eps
    }

    pub fn lerp(&self, other: &StableConcatWeights, c: &Rational) -> StableConcatWeights {
        StableConcatWeights { r: lerp_rats(&self.r, &other.r, c), eps: lerp_rats(&self.eps, &other.eps, c) }
    }

    /// Start of piece `i` (0-based): `Σ_{j<i} (r_j + ε_j)`.
    pub fn piece_starts(&self) -> Vec<Rational> {
        let mut acc = Rational::zero();
        (0..self.n())
            .map(|i| {
                let s = acc.clone();
                acc += &self.r[i];
                if i < self.eps.len() {
                    acc += &self.eps[i];
                }
                s
            })
            .collect()
    }

    /// The plateaus `[s_i, s_i + ε_i]`.
    pub fn plateaus(&self) -> Vec<(Rational, Rational)> {
        let starts = self.piece_starts();
        (0..self.eps.len())
            .map(|i| {
                let s = &starts[i] + &self.r[i];
                let e = &s + &self.eps[i];
                (s, e)
            })
            .collect()
    }
}

fn lerp_rats(a: &[Rational], b: &[Rational], c: &Rational) -> Vec<Rational> {
    let one_minus = Rational::one() - c;
    a.iter().zip(b).map(|(x, y)| x * &one_minus + y * c).collect()
}

fn fmt_rats(v: &[Rational]) -> alloc::string::String {
    let parts: Vec<alloc::string::String> = v.iter().map(|x| format!("{x}")).collect();
    format!("({})", parts.join(","))
}

/// `e_n = (1/n, ..., 1/n)`.
pub fn e(n: usize) -> ConcatWeights {
    ConcatWeights { r: (0..n).map(|_| rat(1, n as i64)).collect() }
}

/// `d_n = (2, ..., 2; 1, ..., 1) / (3n - 1)`.
pub fn d(n: usize) -> StableConcatWeights {
    let den = 3 * n as i64 - 1;
    StableConcatWeights { r: (0..n).map(|_| rat(2, den)).collect(), eps: (1..n).map(|_| rat(1, den)).collect() }
}

fn check_shapes(face: FaceIndex, r: usize, s: usize) -> Result<()> {
    if !face.is_valid() {
        return Err(Error::Index { k: face.k, r: face.r, s: face.s, n: (face.r + face.s).saturating_sub(1) });
    }
    if r != face.r {
        return Err(Error::DimensionMismatch { expected: face.r, found: r });
    }
    if s != face.s {
        return Err(Error::DimensionMismatch { expected: face.s, found: s });
    }
    Ok(())
}

/// `∂^E_k(x, y) = (x_1, ..., x_{k-1}, x_k y_1, ..., x_k y_s, x_{k+1}, ..., x_r)`.
pub fn d_e(face: FaceIndex, x: &ConcatWeights, y: &ConcatWeights) -> Result<ConcatWeights> {
    check_shapes(face, x.n(), y.n())?;
    let k = face.k - 1;
    let xk = &x.r[k];
    let mut r = x.r[..k].to_vec();
    r.extend(y.r.iter().map(|v| xk * v));
    r.extend(x.r[k + 1..].iter().cloned());
    Ok(ConcatWeights { r })
}

/// `∂^D_k`: as `∂^E_k` on the speeds, with the plateaus of `y`, scaled by
/// `x_k`, spliced in between `ε_{k-1}` and `ε_k`.
pub fn d_d(face: FaceIndex, x: &StableConcatWeights, y: &StableConcatWeights) -> Result<StableConcatWeights> {
    check_shapes(face, x.n(), y.n())?;
    let k = face.k - 1;
    let xk = &x.r[k];
    let mut r = x.r[..k].to_vec();
    r.extend(y.r.iter().map(|v| xk * v));
    r.extend(x.r[k + 1..].iter().cloned());
    let mut eps = x.eps[..k].to_vec();
    eps.extend(y.eps.iter().map(|v| xk * v));
    eps.extend(x.eps[k..].iter().cloned());
    Ok(StableConcatWeights { r, eps })
}

fn check_count(expected: usize, paths: &[SmoothPath]) -> Result<()> {
    if paths.len() != expected {
        return Err(Error::Usage(format!("{expected} paths expected, got {}", paths.len())));
    }
    Ok(())
}

/// `β_n(w; u_1, ..., u_n)(t) = u_i((t - v_{i-1}) / r_i)` on `[v_{i-1}, v_i]`,
/// `v_i = r_1 + ... + r_i`.
pub fn beta(w: &ConcatWeights, paths: &[SmoothPath]) -> Result<SmoothPath> {
    check_count(w.n(), paths)?;
    let mut acc = Rational::zero();
    let pieces = paths
        .iter()
        .zip(&w.r)
        .map(|(p, r)| {
            let start = to_f64(&acc);
            acc += r;
            Piece { path: p.clone(), start, width: to_f64(r) }
        })
        .collect();
    SmoothPath::concat(pieces)
}

/// `α_n`: piece `i` runs on `[s_{i-1} + ε_{i-1}, s_i]`, with the constant
/// `u_i(1)` on the plateau `[s_i, s_i + ε_i]`.
pub fn alpha(w: &StableConcatWeights, paths: &[SmoothPath]) -> Result<SmoothPath> {
    check_count(w.n(), paths)?;
    let pieces = paths
        .iter()
        .zip(w.piece_starts())
        .zip(&w.r)
        .map(|((p, s), r)| Piece { path: p.clone(), start: to_f64(&s), width: to_f64(r) })
        .collect();
    SmoothPath::concat(pieces)
}

/// `μ(u, v) = β_2(e_2; u, v)`.
pub fn mu(u: &SmoothPath, v: &SmoothPath) -> Result<SmoothPath> {
    beta(&e(2), &[u.clone(), v.clone()])
}

/// `μ_ε(u, v) = α_2(((1-ε)/2, (1-ε)/2; ε); u, v)`, `0 < ε < 1`.
pub fn mu_eps(eps: &Rational, u: &SmoothPath, v: &SmoothPath) -> Result<SmoothPath> {
    let half = (Rational::one() - eps) / int(2);
    let w = StableConcatWeights::new(alloc::vec![half.clone(), half], alloc::vec![eps.clone()])?;
    alpha(&w, &[u.clone(), v.clone()])
}

/// The constant path at `x`.
pub fn iota(x: &[f64]) -> SmoothPath {
    SmoothPath::constant(x.to_vec())
}

pub fn src(u: &SmoothPath) -> Vec<f64> {
    u.start().to_vec()
}

pub fn tgt(u: &SmoothPath) -> Vec<f64> {
    u.end().to_vec()
}

/// Which family of forms: `β ∘ φ` or the stable `α ∘ ψ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flavor {
    Plain,
    Stable,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Plain => "plain",
            Flavor::Stable => "stable",
        }
    }
}

/// Weights in `E_n` or `D_n`, whichever the flavor uses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Weights {
    E(ConcatWeights),
    D(StableConcatWeights),
}

impl Weights {
    pub fn n(&self) -> usize {
        match self {
            Weights::E(w) => w.n(),
            Weights::D(w) => w.n(),
        }
    }

    pub fn concat(&self, paths: &[SmoothPath]) -> Result<SmoothPath> {
        match self {
            Weights::E(w) => beta(w, paths),
            Weights::D(w) => alpha(w, paths),
        }
    }

    /// Times at which the evaluator switches pieces or plateaus.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Weights::E(w) => {
                let mut acc = Rational::zero();
                w.r.iter()
                    .map(|r| {
                        acc += r;
                        to_f64(&acc)
                    })
                    .collect()
            }
            Weights::D(w) => w.plateaus().iter().flat_map(|(a, b)| [to_f64(a), to_f64(b)]).collect(),
        }
    }

    fn center(flavor: Flavor, n: usize) -> Weights {
        match flavor {
            Flavor::Plain => Weights::E(e(n)),
            Flavor::Stable => Weights::D(d(n)),
        }
    }

    fn face(face: FaceIndex, x: &Weights, y: &Weights) -> Result<Weights> {
        match (x, y) {
            (Weights::E(x), Weights::E(y)) => d_e(face, x, y).map(Weights::E),
            (Weights::D(x), Weights::D(y)) => d_d(face, x, y).map(Weights::D),
            _ => Err(Error::Usage("mixed weight flavors".into())),
        }
    }

    fn lerp(&self, other: &Weights, c: &Rational) -> Weights {
        match (self, other) {
            (Weights::E(x), Weights::E(y)) => Weights::E(x.lerp(y, c)),
            (Weights::D(x), Weights::D(y)) => Weights::D(x.lerp(y, c)),
            _ => unreachable!("flavors agree by construction"),
        }
    }
}

/// The cone map of the given flavor on one cone of the decomposition:
/// `(1 - c)·∂_k(f(rho), f(sigma)) + c·center`.
pub fn cone_map_on(flavor: Flavor, n: usize, dec: &Decomposition) -> Result<Weights> {
    let center = Weights::center(flavor, n);
    match dec {
        Decomposition::Center => Ok(center),
        Decomposition::Cone { face, rho, sigma, c } => {
            let x = cone_map(flavor, face.r, rho)?;
            let y = cone_map(flavor, face.s, sigma)?;
            Ok(Weights::face(*face, &x, &y)?.lerp(&center, c))
        }
    }
}

/// `φ_n` or `ψ_n`, extended radially from `b_n`.
pub fn cone_map(flavor: Flavor, n: usize, t: &RatVec) -> Result<Weights> {
    if n <= 2 {
        if *t != interior_point(n.max(1)) {
            return Err(Error::Domain(format!("{t:?} is not in K_{n}")));
        }
        return Ok(Weights::center(flavor, n));
    }
    cone_map_on(flavor, n, &facet_decompose(n, t)?)
}

/// The cone map computed through every cone containing `t`.
pub fn cone_map_all(flavor: Flavor, n: usize, t: &RatVec) -> Result<Vec<Weights>> {
    if n <= 2 {
        return cone_map(flavor, n, t).map(|w| alloc::vec![w]);
    }
    facet_decompose_all(n, t)?.iter().map(|dec| cone_map_on(flavor, n, dec)).collect()
}

pub fn phi(n: usize, t: &RatVec) -> Result<ConcatWeights> {
    match cone_map(Flavor::Plain, n, t)? {
        Weights::E(w) => Ok(w),
        Weights::D(_) => unreachable!(),
    }
}

pub fn psi(n: usize, t: &RatVec) -> Result<StableConcatWeights> {
    match cone_map(Flavor::Stable, n, t)? {
        Weights::D(w) => Ok(w),
        Weights::E(_) => unreachable!(),
    }
}

/// `M(n)(t; paths) = β_n(φ_n(t); paths)`.
pub fn m(n: usize, t: &RatVec, paths: &[SmoothPath]) -> Result<SmoothPath> {
    beta(&phi(n, t)?, paths)
}

/// `M(n)(t; paths) = α_n(ψ_n(t); paths)`.
pub fn m_stable(n: usize, t: &RatVec, paths: &[SmoothPath]) -> Result<SmoothPath> {
    alpha(&psi(n, t)?, paths)
}

pub fn m_flavor(flavor: Flavor, n: usize, t: &RatVec, paths: &[SmoothPath]) -> Result<SmoothPath> {
    cone_map(flavor, n, t)?.concat(paths)
}

/// Outcome of one condition check.
#[derive(Clone, Debug, PartialEq)]
pub struct AInftyReport {
    /// `"0"`, `"1"`, `"2'"`, `"2-strict-fails"` or `"plateau"`.
    pub condition: &'static str,
    pub flavor: Flavor,
    pub n: usize,
    pub face: Option<FaceIndex>,
    pub j: Option<usize>,
    pub samples: usize,
    pub max_dev: f64,
    pub tol: f64,
    pub pass: bool,
}

impl AInftyReport {
    fn new(condition: &'static str, flavor: Flavor, n: usize) -> Self {
        AInftyReport { condition, flavor, n, face: None, j: None, samples: 0, max_dev: 0.0, tol: 0.0, pass: false }
    }
}

/// Sup-norm distance.
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `n + 1` equispaced times in `[0, 1]`.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    (0..=n).map(|i| i as f64 / n as f64).collect()
}

/// `grid` together with `extra`, sorted and deduplicated.
pub fn with_breakpoints(grid: &[f64], extra: &[f64]) -> Vec<f64> {
    let mut ts: Vec<f64> = grid.iter().chain(extra).copied().collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts
}

/// Condition (0): `M(n)(t; g)` starts at `g_1(0)` and ends at `g_n(1)`,
/// exactly.
pub fn verify_condition0(flavor: Flavor, n: usize, t: &RatVec, paths: &[SmoothPath]) -> Result<AInftyReport> {
    let out = m_flavor(flavor, n, t, paths)?;
    let first = paths.first().ok_or_else(|| Error::Usage("no paths".into()))?;
    let last = paths.last().expect("nonempty");
    let mut report = AInftyReport::new("0", flavor, n);
    report.samples = 2;
    report.max_dev = dist(out.start(), first.start()).max(dist(out.end(), last.end()));
    report.pass = report.max_dev == 0.0;
    Ok(report)
}

/// Sample data for condition (1).
#[derive(Clone, Debug)]
pub struct Condition1Input<'a> {
    pub face: FaceIndex,
    /// Points `(rho, sigma) ∈ K_r × K_s`.
    pub points: &'a [(RatVec, RatVec)],
    /// Composable families of `n` paths.
    pub families: &'a [Vec<SmoothPath>],
    pub grid: &'a [f64],
    pub tol: f64,
    /// Added to the first speed (and removed from the last) of the left-hand
    /// side weights; a harness self-test.
    pub perturb: Option<Rational>,
}

/// Condition (1): `M(n)(∂_k(rho, sigma); g) = M(r)(rho; g_1, ..., M(s)(sigma;
/// g_k, ..., g_{k+s-1}), ..., g_n)`, pointwise on the grid and at all
/// breakpoints of the left-hand side.
pub fn verify_condition1(flavor: Flavor, input: &Condition1Input<'_>) -> Result<AInftyReport> {
    let face = input.face;
    let FaceIndex { k, r, s } = face;
    let n = face.n();
    let mut report = AInftyReport::new("1", flavor, n);
    report.face = Some(face);
    report.tol = input.tol;
    for (rho, sigma) in input.points {
        let t = d_face(face, rho, sigma)?;
        let mut lhs_w = cone_map(flavor, n, &t)?;
        if let Some(delta) = &input.perturb {
            lhs_w = perturb(lhs_w, delta)?;
        }
        let outer = cone_map(flavor, r, rho)?;
        let inner = cone_map(flavor, s, sigma)?;
        let times = with_breakpoints(input.grid, &lhs_w.breakpoints());
        for g in input.families {
            check_count(n, g)?;
            let lhs = lhs_w.concat(g)?;
            let nested = inner.concat(&g[k - 1..k - 1 + s])?;
            let mut args: Vec<SmoothPath> = g[..k - 1].to_vec();
            args.push(nested);
            args.extend(g[k - 1 + s..].iter().cloned());
            let rhs = outer.concat(&args)?;
            for &time in &times {
                report.max_dev = report.max_dev.max(dist(&lhs.eval(time), &rhs.eval(time)));
                report.samples += 1;
            }
        }
    }
    report.pass = report.max_dev <= report.tol;
    Ok(report)
}

fn perturb(w: Weights, delta: &Rational) -> Result<Weights> {
    match w {
        Weights::E(w) => {
            let mut r = w.r;
            let last = r.len() - 1;
            r[0] += delta;
            r[last] -= delta;
            ConcatWeights::new(r).map(Weights::E)
        }
        Weights::D(w) => {
            let mut r = w.r;
            let last = r.len() - 1;
            r[0] += delta;
            r[last] -= delta;
            StableConcatWeights::new(r, w.eps).map(Weights::D)
        }
    }
}

/// Condition (2'): `M(2)(b_2; ι(x), g)` is the reparametrization
/// `t ↦ g(clamp((t - r_1 - ε_1) / r_2))` of `g`, where `x = g(0)`, and
/// symmetrically `M(2)(b_2; g, ι(g(1)))(t) = g(clamp(t / r_1))`.
pub fn verify_condition2prime(flavor: Flavor, g: &SmoothPath, grid: &[f64], tol: f64) -> Result<AInftyReport> {
    let w = cone_map(flavor, 2, &interior_point(2))?;
    let (r1, r2, e1) = match &w {
        Weights::E(w) => (to_f64(&w.r[0]), to_f64(&w.r[1]), 0.0),
        Weights::D(w) => (to_f64(&w.r[0]), to_f64(&w.r[1]), to_f64(&w.eps[0])),
    };
    let left = w.concat(&[iota(g.start()), g.clone()])?;
    let right = w.concat(&[g.clone(), iota(g.end())])?;
    let mut report = AInftyReport::new("2'", flavor, 2);
    report.tol = tol;
    let times = with_breakpoints(grid, &w.breakpoints());
    for &t in &times {
        let dl = dist(&left.eval(t), &g.eval(clamp((t - r1 - e1) / r2)));
        let dr = dist(&right.eval(t), &g.eval(clamp(t / r1)));
        report.max_dev = report.max_dev.max(dl).max(dr);
        report.samples += 2;
    }
    report.pass = report.max_dev <= tol;
    Ok(report)
}

/// The strict unit law fails: `M(2)(b_2; ι(g(0)), g)` differs from `g` by at
/// least `ratio` times the diameter of `g`'s sampled image. Passes when the
/// failure is observed.
pub fn verify_strict_unit_failure(flavor: Flavor, g: &SmoothPath, grid: &[f64], ratio: f64) -> Result<AInftyReport> {
    let w = cone_map(flavor, 2, &interior_point(2))?;
    let left = w.concat(&[iota(g.start()), g.clone()])?;
    let image: Vec<Vec<f64>> = grid.iter().map(|&t| g.eval(t)).collect();
    let diameter = image.iter().enumerate().flat_map(|(i, a)| image[i + 1..].iter().map(move |b| dist(a, b))).fold(0.0, f64::max);
    let mut report = AInftyReport::new("2-strict-fails", flavor, 2);
    report.j = Some(1);
    report.tol = ratio * diameter;
    for (t, gt) in grid.iter().zip(&image) {
        report.max_dev = report.max_dev.max(dist(&left.eval(*t), gt));
        report.samples += 1;
    }
    report.pass = diameter > 0.0 && report.max_dev >= report.tol;
    Ok(report)
}

/// `α_n(w; paths)` is constant, equal to `u_i(1)`, on each plateau; sampled
/// at `per_plateau + 1` points of each.
pub fn verify_plateaus(w: &StableConcatWeights, paths: &[SmoothPath], per_plateau: usize, tol: f64) -> Result<AInftyReport> {
    let out = alpha(w, paths)?;
    let mut report = AInftyReport::new("plateau", Flavor::Stable, w.n());
    report.tol = tol;
    let per = per_plateau.max(1);
    for (i, (a, b)) in w.plateaus().iter().enumerate() {
        let (a, b) = (to_f64(a), to_f64(b));
        for step in 0..=per {
            let t = a + (b - a) * step as f64 / per as f64;
            report.max_dev = report.max_dev.max(dist(&out.eval(t), paths[i].end()));
            report.samples += 1;
        }
    }
    report.pass = report.max_dev <= tol;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{make_path, Curve};
    use alloc::vec;

    fn w(r: &[(i64, i64)]) -> ConcatWeights {
        ConcatWeights::new(r.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap()
    }

    fn line(a: f64, b: f64) -> SmoothPath {
        make_path(Curve::Bridge { a: vec![a], b: vec![b], q: vec![vec![0.3]] }).unwrap()
    }

    #[test]
    fn centers() {
        assert_eq!(e(2), w(&[(1, 2), (1, 2)]));
        assert_eq!(e(3), w(&[(1, 3), (1, 3), (1, 3)]));
        let d2 = d(2);
        assert_eq!(d2.r(), &[rat(2, 5), rat(2, 5)]);
        assert_eq!(d2.eps(), &[rat(1, 5)]);
        assert!(d(1).eps().is_empty() && d(1).r() == [int(1)]);
    }

    #[test]
    fn weights_validate() {
        assert!(ConcatWeights::new(vec![int(1), int(0)]).is_err());
        assert!(ConcatWeights::new(vec![rat(1, 2), rat(1, 3)]).is_err());
        assert!(StableConcatWeights::new(vec![rat(1, 2)], vec![rat(1, 2)]).is_err());
        assert!(StableConcatWeights::new(vec![rat(1, 2), rat(1, 2)], vec![int(0)]).is_err());
    }

    #[test]
    fn face_maps() {
        let h = e(2);
        assert_eq!(d_e(FaceIndex::new(1, 2, 2), &h, &h).unwrap(), w(&[(1, 4), (1, 4), (1, 2)]));
        assert_eq!(d_e(FaceIndex::new(2, 2, 2), &h, &h).unwrap(), w(&[(1, 2), (1, 4), (1, 4)]));
        assert!(matches!(d_e(FaceIndex::new(3, 2, 2), &h, &h), Err(Error::Index { .. })));
        let dd = d_d(FaceIndex::new(1, 2, 2), &d(2), &d(2)).unwrap();
        assert_eq!(dd.r(), &[rat(4, 25), rat(4, 25), rat(2, 5)]);
        assert_eq!(dd.eps(), &[rat(2, 25), rat(1, 5)]);
        let mirror = d_d(FaceIndex::new(2, 2, 2), &d(2), &d(2)).unwrap();
        assert_eq!(mirror.r(), &[rat(2, 5), rat(4, 25), rat(4, 25)]);
        assert_eq!(mirror.eps(), &[rat(1, 5), rat(2, 25)]);
    }

    #[test]
    fn phi_on_k3() {
        assert_eq!(phi(3, &RatVec::from_ints(&[0, 1, 1])).unwrap(), w(&[(1, 4), (1, 4), (1, 2)]));
        assert_eq!(phi(3, &RatVec::from_ints(&[0, 0, 2])).unwrap(), w(&[(1, 2), (1, 4), (1, 4)]));
        assert_eq!(phi(3, &interior_point(3)).unwrap(), e(3));
        assert_eq!(phi(2, &interior_point(2)).unwrap(), e(2));
        assert!(phi(3, &RatVec::from_ints(&[0, 2, 0])).is_err());
    }

    #[test]
    fn concatenation_values() {
        let (u, v) = (line(0.0, 1.0), line(1.0, 3.0));
        let m = mu(&u, &v).unwrap();
        assert_eq!(m.eval(0.25), u.eval(0.5));
        assert_eq!(m.eval(0.75), v.eval(0.5));
        let single = beta(&e(1), core::slice::from_ref(&u)).unwrap();
        assert_eq!(single.eval(0.3), u.eval(0.3));
        let me = mu_eps(&rat(1, 10), &u, &v).unwrap();
        assert_eq!(me.eval(0.5), u.end().to_vec());
        let a = alpha(&d(2), &[u.clone(), v.clone()]).unwrap();
        for t in [0.4, 0.45, 0.5, 0.55, 0.6] {
            assert_eq!(a.eval(t), u.end().to_vec());
        }
    }

    #[test]
    fn composability_is_checked() {
        let (u, v) = (line(0.0, 1.0), line(2.0, 3.0));
        assert_eq!(mu(&u, &v).unwrap_err(), Error::Composability { junction: 0 });
        let x = iota(&[1.5]);
        assert_eq!(src(&x), tgt(&x));
    }

    #[test]
    fn m3_on_vertices_rebrackets() {
        let g = [line(0.0, 1.0), line(1.0, -1.0), line(-1.0, 2.0)];
        let left = m(3, &RatVec::from_ints(&[0, 1, 1]), &g).unwrap();
        let nested_left = mu(&mu(&g[0], &g[1]).unwrap(), &g[2]).unwrap();
        let right = m(3, &RatVec::from_ints(&[0, 0, 2]), &g).unwrap();
        let nested_right = mu(&g[0], &mu(&g[1], &g[2]).unwrap()).unwrap();
        for t in uniform_grid(100) {
            assert!(dist(&left.eval(t), &nested_left.eval(t)) < 1e-12);
            assert!(dist(&right.eval(t), &nested_right.eval(t)) < 1e-12);
        }
    }

    #[test]
    fn conditions_on_k3() {
        let fam = vec![vec![line(0.0, 1.0), line(1.0, -1.0), line(-1.0, 2.0)]];
        let b2 = interior_point(2);
        let points = vec![(b2.clone(), b2)];
        let grid = uniform_grid(100);
        for flavor in [Flavor::Plain, Flavor::Stable] {
            for face in crate::assoc::face_indices(3) {
                let input = Condition1Input { face, points: &points, families: &fam, grid: &grid, tol: 1e-12, perturb: None };
                let rep = verify_condition1(flavor, &input).unwrap();
                assert!(rep.pass, "{rep:?}");
                let bad = Condition1Input { perturb: Some(rat(1, 1000)), ..input };
                assert!(!verify_condition1(flavor, &bad).unwrap().pass);
            }
            let rep = verify_condition0(flavor, 3, &RatVec::from_fracs(&[(0, 1), (1, 4), (7, 4)]), &fam[0]).unwrap();
            assert!(rep.pass);
        }
    }

    #[test]
    fn unit_conditions() {
        let g = line(0.0, 1.0);
        let grid = uniform_grid(100);
        for flavor in [Flavor::Plain, Flavor::Stable] {
            assert!(verify_condition2prime(flavor, &g, &grid, 1e-12).unwrap().pass);
            assert!(verify_strict_unit_failure(flavor, &g, &grid, 0.1).unwrap().pass);
        }
        let mm = beta(&e(2), &[iota(&[0.0]), g.clone()]).unwrap();
        assert_eq!(mm.eval(0.25), g.eval(0.0));
        let c = iota(&[2.0]);
        assert!(!verify_strict_unit_failure(Flavor::Plain, &c, &grid, 0.1).unwrap().pass);
    }

    #[test]
    fn plateaus_are_flat() {
        let g = [line(0.0, 1.0), line(1.0, -1.0), line(-1.0, 2.0)];
        let rep = verify_plateaus(&d(3), &g, 20, 1e-12).unwrap();
        assert!(rep.pass && rep.max_dev == 0.0, "{rep:?}");
    }
}
