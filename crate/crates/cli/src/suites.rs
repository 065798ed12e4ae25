//! Verification suites. Each check becomes one JSON entry carrying a
//! `"pass"` flag; entries come out in parameter order whatever the
//! scheduling.

use rayon::prelude::*;
use serde_json::{json, Map, Value};
use stasheff_core::assoc::{
    build_complexes, catalan, d_face, degeneracy, degeneracy_row, degeneracy_rows, face_indices, facet_decompose_all, grid_points,
    interior_point, sample_points, vertices, AssocComplex, Decomposition, FaceIndex,
};
use stasheff_core::cubic::{complex_product, join, product, verify_complex, verify_cubic_map, CubicComplex, CubicMapSpec, CubicSet};
use stasheff_core::engine::{
    cone_map, cone_map_all, mu, mu_eps, phi, uniform_grid, verify_condition0, verify_condition1, verify_condition2prime, verify_plateaus,
    verify_strict_unit_failure, AInftyReport, Condition1Input, Flavor, Weights,
};
use stasheff_core::geometry::{int, rat, to_f64, RatVec, Rational};
use stasheff_core::paths::{flatness_probe, smoothness_probe, Bump, ProbeConfig, SmoothPath};
use stasheff_core::Result;

use crate::factory::PathFactory;
use crate::json;

/// Pairwise complex verification runs up to `K(5)`; beyond that the exact LP
/// count makes it a batch job.
pub const FULL_VERIFY_MAX: usize = 5;
/// Composable families per arity in the A-infinity suites.
pub const FAMILIES: usize = 2;
/// Step for the endpoint flatness probes.
pub const FLATNESS_H: f64 = 1e-2;
/// Deviation required of the strict unit law, relative to the image diameter.
pub const STRICT_UNIT_RATIO: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Cubic,
    Assoc,
    Ainfty,
    Stable,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Cubic => "cubic",
            Suite::Assoc => "assoc",
            Suite::Ainfty => "ainfty",
            Suite::Stable => "stable",
            Suite::All => "all",
        }
    }

    fn parts(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Cubic, Suite::Assoc, Suite::Ainfty, Suite::Stable],
            s => vec![s],
        }
    }
}

#[derive(Clone, Debug)]
pub struct Settings {
    pub n: usize,
    pub d: usize,
    /// `(rho, sigma)` pairs per face, and points of `K_n` per arity.
    pub samples: usize,
    pub tol_point: f64,
    pub tol_deriv: f64,
    pub seed: u64,
    pub den: u32,
    pub max_n: usize,
    pub bump: Bump,
}

impl Settings {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "d": self.d,
            "samples": self.samples,
            "tol_point": self.tol_point,
            "tol_deriv": self.tol_deriv,
            "seed": self.seed,
            "den": self.den,
            "max_n": self.max_n,
            "bump": match self.bump { Bump::Exp => "exp", Bump::ExpSquared => "exp-squared" },
        })
    }
}

pub struct SuiteReport {
    pub name: &'static str,
    pub entries: Vec<Value>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.entries.iter().all(passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Value> {
        self.entries.iter().filter(|e| !passed(e))
    }

    pub fn to_json(&self) -> Value {
        json!({ "suite": self.name, "pass": self.pass(), "entries": self.entries })
    }
}

pub fn passed(entry: &Value) -> bool {
    entry["pass"] == Value::Bool(true)
}

fn entry(check: &str, fields: Value, pass: bool) -> Value {
    let mut m = Map::new();
    m.insert("check".into(), json!(check));
    if let Value::Object(f) = fields {
        m.extend(f);
    }
    m.insert("pass".into(), json!(pass));
    Value::Object(m)
}

/// A failing entry standing in for a check that could not run.
fn error_entry(check: &str, fields: Value, err: impl std::fmt::Display) -> Value {
    let mut e = entry(check, fields, false);
    e["error"] = json!(err.to_string());
    e
}

pub fn run(suite: Suite, s: &Settings) -> Vec<SuiteReport> {
    suite
        .parts()
        .into_iter()
        .map(|part| {
            let entries = match part {
                Suite::Cubic => cubic(s),
                Suite::Assoc => assoc(s),
                Suite::Ainfty => ainfty(s, Flavor::Plain),
                Suite::Stable => ainfty(s, Flavor::Stable),
                Suite::All => unreachable!("expanded by parts"),
            };
            SuiteReport { name: part.name(), entries }
        })
        .collect()
}

fn complexes(s: &Settings, upto: usize) -> Result<Vec<AssocComplex>> {
    if upto == 0 {
        return Ok(Vec::new());
    }
    build_complexes(upto, s.max_n)
}

fn pt(c: &[i64]) -> CubicSet {
    CubicSet::point(RatVec::from_ints(c))
}

fn axis_segment(dim: usize, axis: usize) -> Result<CubicSet> {
    let mut e = vec![0; dim];
    e[axis] = 1;
    join(&pt(&vec![0; dim]), &pt(&e))
}

fn cube(q: usize) -> Result<CubicSet> {
    let mut acc = axis_segment(q, 0)?;
    for axis in 1..q {
        acc = product(&acc, &axis_segment(q, axis)?)?;
    }
    Ok(acc)
}

fn cubic(s: &Settings) -> Vec<Value> {
    let mut out = Vec::new();
    for q in 1..=3usize {
        let fields = json!({ "q": q });
        match cube(q) {
            Ok(c) => {
                let found = c.faces().len();
                let expected = 3usize.pow(q as u32) + 1;
                out.push(entry("cube_faces", json!({ "q": q, "expected": expected, "found": found }), found == expected));
            }
            Err(e) => out.push(error_entry("cube_faces", fields, e)),
        }
    }
    let square = (|| -> Result<CubicComplex> {
        let a = CubicComplex::from_cell(&axis_segment(2, 0)?)?;
        let b = CubicComplex::from_cell(&axis_segment(2, 1)?)?;
        complex_product(&a, &b)
    })();
    match square {
        Ok(sq) => {
            let ok = verify_complex(2, sq.cells()).ok();
            out.push(entry("square_product", json!({ "cells": sq.len(), "expected": 10 }), ok && sq.len() == 10));
        }
        Err(e) => out.push(error_entry("square_product", json!({}), e)),
    }

    let upto = s.n.min(s.max_n).min(FULL_VERIFY_MAX);
    match complexes(s, upto) {
        Ok(built) => {
            let reports: Vec<Value> = built
                .par_iter()
                .skip(1)
                .map(|k| {
                    let rep = verify_complex(k.n, k.complex.cells());
                    let fields = json!({
                        "n": k.n,
                        "cells": rep.cells,
                        "pairs_checked": rep.pairs_checked,
                        "violations": rep.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    });
                    entry("verify_complex", fields, rep.ok())
                })
                .collect();
            out.extend(reports);
            for k in built.iter().skip(2) {
                let maps = (|| -> Result<(bool, bool)> {
                    let incl = CubicMapSpec::inclusion(&k.boundary, &k.complex)?;
                    let triv = CubicMapSpec::trivial(&k.complex, interior_point(k.n))?;
                    Ok((verify_cubic_map(&incl).ok(), verify_cubic_map(&triv).ok()))
                })();
                match maps {
                    Ok((a, b)) => out.push(entry("cubic_maps", json!({ "n": k.n, "inclusion": a, "trivial": b }), a && b)),
                    Err(e) => out.push(error_entry("cubic_maps", json!({ "n": k.n }), e)),
                }
            }
        }
        Err(e) => out.push(error_entry("verify_complex", json!({ "n": upto }), e)),
    }
    out
}

fn assoc(s: &Settings) -> Vec<Value> {
    let mut out = Vec::new();
    for m in 2..=s.n {
        let found = vertices(m).len() as u64;
        let expected = catalan(m - 1);
        out.push(entry("vertex_count", json!({ "n": m, "expected": expected, "found": found }), found == expected));
    }
    for m in 3..=s.n {
        let found = face_indices(m).len();
        let expected: usize = (2..m).map(|sz| m - sz + 1).sum();
        out.push(entry("facet_count", json!({ "n": m, "expected": expected, "found": found }), found == expected));
    }

    let upto = s.n.min(s.max_n);
    match complexes(s, upto) {
        Ok(built) => {
            for k in built.iter().skip(1) {
                let dim = k.complex.dim();
                let rank = k.complex.hull().map_or(-1, |h| h.dim() as isize);
                let expected = k.n as isize - 2;
                out.push(entry(
                    "dimension",
                    json!({ "n": k.n, "expected": expected, "complex_dim": dim, "hull_rank": rank }),
                    dim == expected && rank == expected,
                ));
            }
            for k in built.iter().skip(2) {
                let chi = k.boundary.euler_characteristic();
                let expected = if k.n % 2 == 1 { 2 } else { 0 };
                out.push(entry(
                    "boundary_euler",
                    json!({ "n": k.n, "counts": k.boundary.counts_by_dim(), "expected": expected, "found": chi }),
                    chi == expected,
                ));
            }
        }
        Err(e) => out.push(error_entry("dimension", json!({ "n": upto }), e)),
    }

    let tables: Vec<Value> = (3..=s.n).collect::<Vec<_>>().par_iter().map(|&m| degeneracy_table(m, s)).collect();
    out.extend(tables);
    let decomps: Vec<Value> = (3..=s.n).collect::<Vec<_>>().par_iter().map(|&m| decompositions(m, s)).collect();
    out.extend(decomps);
    out
}

/// Every applicable row of the `s_j ∘ ∂_k` table against the radially
/// extended `s_j`, on sampled `(rho, sigma)`.
fn degeneracy_table(m: usize, s: &Settings) -> Value {
    let mut checked = 0usize;
    let mut overlaps = 0usize;
    let mut mismatches = Vec::new();
    let mut run = || -> Result<()> {
        for face in face_indices(m) {
            for j in 1..=m {
                let rows = degeneracy_rows(j, face);
                if rows.is_empty() {
                    mismatches.push(format!("no row for j={j} on {face}"));
                }
                if rows.len() > 1 {
                    overlaps += 1;
                }
                for (rho, sigma) in pairs(face, s) {
                    let direct = degeneracy(j, m, &d_face(face, &rho, &sigma)?)?;
                    for &row in &rows {
                        checked += 1;
                        if degeneracy_row(row, j, face, &rho, &sigma)? != direct {
                            mismatches.push(format!("row {row}, j={j}, {face}"));
                        }
                    }
                }
            }
        }
        Ok(())
    };
    let fields = |checked: usize, overlaps: usize, mismatches: &[String]| json!({ "n": m, "checked": checked, "overlapping_rows": overlaps, "mismatches": mismatches });
    match run() {
        Ok(()) => entry("degeneracy_table", fields(checked, overlaps, &mismatches), mismatches.is_empty() && checked > 0),
        Err(e) => error_entry("degeneracy_table", json!({ "n": m }), e),
    }
}

fn decompositions(m: usize, s: &Settings) -> Value {
    let b = interior_point(m);
    let run = || -> Result<(usize, usize)> {
        let mut bad = 0;
        let points = grid_points(m, s.den.min(4));
        for t in &points {
            for dec in facet_decompose_all(m, t)? {
                let ok = match dec {
                    Decomposition::Center => *t == b,
                    Decomposition::Cone { face, rho, sigma, c } => d_face(face, &rho, &sigma)?.lerp(&b, &c) == *t,
                };
                bad += usize::from(!ok);
            }
        }
        Ok((points.len(), bad))
    };
    match run() {
        Ok((points, bad)) => entry("facet_decompose", json!({ "n": m, "points": points, "failures": bad }), bad == 0),
        Err(e) => error_entry("facet_decompose", json!({ "n": m }), e),
    }
}

/// Up to `samples` pairs `(rho, sigma) ∈ K_r × K_s` from the denominator
/// `den` lattices, spread over the product.
pub fn pairs(face: FaceIndex, s: &Settings) -> Vec<(RatVec, RatVec)> {
    let count = s.samples.max(1);
    let rhos = sample_points(face.r, s.den, count);
    let sigmas = sample_points(face.s, s.den, count);
    let all: Vec<(RatVec, RatVec)> = rhos.iter().flat_map(|x| sigmas.iter().map(move |y| (x.clone(), y.clone()))).collect();
    let take = count.min(all.len());
    // stride coprime to the row length so that rho and sigma both vary
    let stride = sigmas.len() + 1;
    let mut picked: Vec<(RatVec, RatVec)> = Vec::with_capacity(take);
    let mut i = 0;
    while picked.len() < take {
        let p = &all[i % all.len()];
        if !picked.contains(p) {
            picked.push(p.clone());
        }
        i += stride;
        if i > stride * all.len() * 2 {
            break;
        }
    }
    picked
}

fn report(r: &AInftyReport, seed: u64) -> Value {
    let mut v = json::ainfty_report(r, seed);
    v["check"] = json!("condition");
    v
}

/// Folds per-sample reports for one arity into a single entry.
fn merge(reports: &[AInftyReport]) -> Option<AInftyReport> {
    let mut it = reports.iter();
    let mut acc = it.next()?.clone();
    for r in it {
        acc.samples += r.samples;
        acc.max_dev = acc.max_dev.max(r.max_dev);
        acc.pass &= r.pass;
    }
    Some(acc)
}

fn ainfty(s: &Settings, flavor: Flavor) -> Vec<Value> {
    let mut out = Vec::new();
    let mut factory = PathFactory::new(s.seed, s.d).with_bump(s.bump);
    // families are drawn up front, in arity order, so the parallel part sees
    // the same paths whatever the scheduling
    let families: Vec<Vec<Vec<SmoothPath>>> = (0..=s.n).map(|m| (0..FAMILIES).map(|_| factory.chain(m.max(1))).collect()).collect();
    let grid = uniform_grid(100);

    for (m, fams) in families.iter().enumerate().skip(2) {
        let run = || -> Result<Option<AInftyReport>> {
            let mut reps = Vec::new();
            for t in sample_points(m, s.den, s.samples) {
                for fam in fams {
                    reps.push(verify_condition0(flavor, m, &t, fam)?);
                }
            }
            Ok(merge(&reps))
        };
        match run() {
            Ok(Some(r)) => out.push(report(&r, s.seed)),
            Ok(None) => {}
            Err(e) => out.push(error_entry("condition", json!({ "condition": "0", "n": m }), e)),
        }
    }

    let faces: Vec<FaceIndex> = (3..=s.n).flat_map(face_indices).collect();
    let cond1: Vec<Value> = faces
        .par_iter()
        .map(|&face| {
            let points = pairs(face, s);
            let input =
                Condition1Input { face, points: &points, families: &families[face.n()], grid: &grid, tol: s.tol_point, perturb: None };
            match verify_condition1(flavor, &input) {
                Ok(r) => {
                    let mut v = report(&r, s.seed);
                    v["pairs"] = json!(points.len());
                    v
                }
                Err(e) => error_entry("condition", json!({ "condition": "1", "n": face.n(), "k": face.k, "r": face.r, "s": face.s }), e),
            }
        })
        .collect();
    out.extend(cond1);

    if s.n >= 3 {
        out.push(perturbation_self_test(flavor, s, &families[3], &grid));
    }

    let g = factory.nonconstant();
    match verify_condition2prime(flavor, &g, &grid, s.tol_point) {
        Ok(r) => out.push(report(&r, s.seed)),
        Err(e) => out.push(error_entry("condition", json!({ "condition": "2'" }), e)),
    }
    match verify_strict_unit_failure(flavor, &g, &grid, STRICT_UNIT_RATIO) {
        Ok(r) => out.push(report(&r, s.seed)),
        Err(e) => out.push(error_entry("condition", json!({ "condition": "2-strict-fails" }), e)),
    }

    for m in 4..=s.n.min(5) {
        out.push(ridges(flavor, m));
    }

    match flavor {
        Flavor::Plain => {
            for m in 2..=s.n {
                out.push(phi_vertices(m));
            }
            out.extend(flatness(s, &mut factory));
            let pair = factory.chain(2);
            out.push(junction("mu_smoothness", mu(&pair[0], &pair[1]), &[0.5], s));
        }
        Flavor::Stable => {
            for (m, fams) in families.iter().enumerate().skip(2) {
                out.push(plateaus(m, s, fams));
            }
            let pair = factory.chain(2);
            for eps in [rat(1, 10), rat(1, 5), rat(1, 2)] {
                let e = to_f64(&eps);
                let mut v = junction("mu_eps_smoothness", mu_eps(&eps, &pair[0], &pair[1]), &[(1.0 - e) / 2.0, 0.5, (1.0 + e) / 2.0], s);
                v["eps"] = json!(json::rational(&eps));
                out.push(v);
            }
        }
    }
    out
}

/// Condition (1) with `φ` pushed off by `1/1000` must fail.
fn perturbation_self_test(flavor: Flavor, s: &Settings, families: &[Vec<SmoothPath>], grid: &[f64]) -> Value {
    let face = FaceIndex::new(1, 2, 2);
    let points = pairs(face, s);
    let input = Condition1Input { face, points: &points, families, grid, tol: s.tol_point, perturb: Some(rat(1, 1000)) };
    match verify_condition1(flavor, &input) {
        Ok(r) => {
            entry("perturbation_self_test", json!({ "n": 3, "flavor": flavor.name(), "max_dev": r.max_dev, "detected": !r.pass }), !r.pass)
        }
        Err(e) => error_entry("perturbation_self_test", json!({ "n": 3 }), e),
    }
}

/// Lattice used to hit ridges of the cone decomposition exactly.
fn ridge_den(m: usize) -> u32 {
    if m <= 4 {
        8
    } else {
        4
    }
}

fn ridges(flavor: Flavor, m: usize) -> Value {
    let den = ridge_den(m);
    let run = || -> Result<(usize, usize)> {
        let (mut found, mut bad) = (0, 0);
        for t in grid_points(m, den) {
            let all = cone_map_all(flavor, m, &t)?;
            if all.len() >= 2 {
                found += 1;
                bad += usize::from(!all.windows(2).all(|w| w[0] == w[1]));
            }
        }
        Ok((found, bad))
    };
    let fields =
        |found: usize, bad: usize| json!({ "n": m, "flavor": flavor.name(), "den": den, "ridge_points": found, "disagreements": bad });
    match run() {
        Ok((found, bad)) => entry("ridge_consistency", fields(found, bad), bad == 0 && found >= 10),
        Err(e) => error_entry("ridge_consistency", json!({ "n": m }), e),
    }
}

fn is_power_of_two_inverse(x: &Rational) -> bool {
    if *x <= int(0) {
        return false;
    }
    let inv = x.recip();
    inv.is_integer() && {
        let v = to_f64(&inv);
        v < 9.0e15 && (v as u64).is_power_of_two()
    }
}

fn phi_vertices(m: usize) -> Value {
    let run = || -> Result<usize> {
        let mut bad = 0;
        for v in vertices(m) {
            let w = phi(m, &v)?;
            let total: Rational = w.r().iter().sum();
            bad += usize::from(total != int(1) || !w.r().iter().all(is_power_of_two_inverse));
        }
        Ok(bad)
    };
    match run() {
        Ok(bad) => entry("phi_vertices", json!({ "n": m, "vertices": catalan(m - 1), "failures": bad }), bad == 0),
        Err(e) => error_entry("phi_vertices", json!({ "n": m }), e),
    }
}

fn plateaus(m: usize, s: &Settings, families: &[Vec<SmoothPath>]) -> Value {
    let run = || -> Result<Option<AInftyReport>> {
        let mut reps = Vec::new();
        for t in sample_points(m, s.den, s.samples) {
            let Weights::D(w) = cone_map(Flavor::Stable, m, &t)? else { unreachable!("stable flavor") };
            for fam in families {
                reps.push(verify_plateaus(&w, fam, 16, s.tol_point)?);
            }
        }
        Ok(merge(&reps))
    };
    match run() {
        Ok(Some(r)) => report(&r, s.seed),
        Ok(None) => entry("condition", json!({ "condition": "plateau", "n": m, "samples": 0 }), true),
        Err(e) => error_entry("condition", json!({ "condition": "plateau", "n": m }), e),
    }
}

/// Endpoint flatness of `φ ∘ u`, orders 1 to 3, for a spread of factory
/// paths and degree 3 functionals.
fn flatness(s: &Settings, factory: &mut PathFactory) -> Vec<Value> {
    (0..8)
        .map(|i| {
            let path = factory.path(i);
            let mut worst: f64 = 0.0;
            let mut pass = true;
            for _ in 0..3 {
                let phi = factory.functional();
                for t0 in [0.0, 1.0] {
                    for e in flatness_probe(&path, &phi, t0, 3, FLATNESS_H, s.tol_deriv) {
                        worst = worst.max(e.estimate.abs());
                        pass &= e.pass;
                    }
                }
            }
            let kind = ["poly", "trig", "bridge", "const"][i % 4];
            entry("flatness", json!({ "path": i, "kind": kind, "h": FLATNESS_H, "max_estimate": worst, "tol": s.tol_deriv }), pass)
        })
        .collect()
}

fn junction(check: &str, path: Result<SmoothPath>, times: &[f64], s: &Settings) -> Value {
    let cfg = ProbeConfig { tol: s.tol_deriv, ..ProbeConfig::default() };
    match path {
        Ok(p) => {
            let mut worst: f64 = 0.0;
            let mut pass = true;
            for &t0 in times {
                for e in smoothness_probe(&p, t0, 3, cfg) {
                    worst = worst.max((e.left - e.right).abs());
                    pass &= e.pass;
                }
            }
            entry(check, json!({ "times": times, "orders": 3, "max_jump": worst, "tol": s.tol_deriv }), pass)
        }
        Err(e) => error_entry(check, json!({}), e),
    }
}
