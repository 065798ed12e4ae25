//! File formats: rationals as `"p/q"` strings, polytopes, complexes,
//! `φ` tables and verification reports.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};
use stasheff_core::assoc::{face_indices, AssociahedronSpec};
use stasheff_core::cubic::{CellKind, CubicComplex, CubicSet};
use stasheff_core::engine::AInftyReport;
use stasheff_core::geometry::{RatVec, Rational};

/// `"3/2"`, `"-1/3"`; integers without a denominator, so zero is `"0"`.
pub fn rational(x: &Rational) -> String {
    x.to_string()
}

pub fn rat_vec(v: &RatVec) -> Vec<String> {
    v.coords().iter().map(rational).collect()
}

pub fn rationals(v: &[Rational]) -> Vec<String> {
    v.iter().map(rational).collect()
}

pub fn polytope(spec: &AssociahedronSpec) -> Value {
    let facets: Vec<Value> = face_indices(spec.n()).iter().map(|f| json!({ "k": f.k, "r": f.r, "s": f.s })).collect();
    json!({
        "n": spec.n(),
        "vertices": spec.vertices().iter().map(rat_vec).collect::<Vec<_>>(),
        "b": rat_vec(spec.b()),
        "facets": facets,
    })
}

#[derive(Serialize)]
struct CellJson {
    id: usize,
    dim: isize,
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    children: Option<[usize; 2]>,
    vertices: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    anchor: Option<Vec<String>>,
}

/// Construction children that are not members of the complex get ids after
/// the members, in order of first use, and are listed under `"auxiliary"`.
struct CellTable<'a> {
    members: &'a CubicComplex,
    ids: BTreeMap<CubicSet, usize>,
    aux: Vec<CubicSet>,
}

impl CellTable<'_> {
    fn id(&mut self, cell: &CubicSet) -> usize {
        if let Some(id) = self.members.id_of(cell) {
            return id;
        }
        if let Some(&id) = self.ids.get(cell) {
            return id;
        }
        let id = self.members.len() + self.aux.len();
        self.ids.insert(cell.clone(), id);
        self.aux.push(cell.clone());
        id
    }
}

fn kind_name(kind: &CellKind) -> &'static str {
    match kind {
        CellKind::Empty => "empty",
        CellKind::Point => "point",
        CellKind::Join(..) => "join",
        CellKind::Product { .. } => "product",
    }
}

fn cell_json(id: usize, cell: &CubicSet, table: &mut CellTable<'_>) -> CellJson {
    let children = cell.children().map(|(a, b)| [table.id(a), table.id(b)]);
    CellJson {
        id,
        dim: cell.dim(),
        kind: kind_name(cell.kind()),
        children,
        vertices: cell.vertices().iter().map(rat_vec).collect(),
        anchor: cell.anchor().map(rat_vec),
    }
}

pub fn complex(c: &CubicComplex) -> Value {
    let mut table = CellTable { members: c, ids: BTreeMap::new(), aux: Vec::new() };
    let cells: Vec<CellJson> = c.cells().iter().enumerate().map(|(id, cell)| cell_json(id, cell, &mut table)).collect();
    let mut aux = Vec::new();
    let mut i = 0;
    while i < table.aux.len() {
        let cell = table.aux[i].clone();
        aux.push(cell_json(c.len() + i, &cell, &mut table));
        i += 1;
    }
    json!({
        "ambient_dim": c.ambient_dim(),
        "cells": cells,
        "auxiliary": aux,
        "faces": c.face_pairs().iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>(),
    })
}

pub fn ainfty_report(r: &AInftyReport, seed: u64) -> Value {
    let mut m = serde_json::Map::new();
    m.insert("condition".into(), json!(r.condition));
    m.insert("flavor".into(), json!(r.flavor.name()));
    m.insert("n".into(), json!(r.n));
    if let Some(f) = r.face {
        m.insert("k".into(), json!(f.k));
        m.insert("r".into(), json!(f.r));
        m.insert("s".into(), json!(f.s));
    }
    if let Some(j) = r.j {
        m.insert("j".into(), json!(j));
    }
    m.insert("samples".into(), json!(r.samples));
    m.insert("max_dev".into(), json!(r.max_dev));
    m.insert("tol".into(), json!(r.tol));
    m.insert("seed".into(), json!(seed));
    m.insert("pass".into(), json!(r.pass));
    Value::Object(m)
}

/// Pretty JSON with a trailing newline.
pub fn to_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use stasheff_core::assoc::build_spec;
    use stasheff_core::geometry::{int, rat};

    #[test]
    fn rationals_as_strings() {
        assert_eq!(rational(&rat(3, 2)), "3/2");
        assert_eq!(rational(&rat(-1, 3)), "-1/3");
        assert_eq!(rational(&rat(0, 1)), "0");
        assert_eq!(rational(&int(4)), "4");
        assert_eq!(rat_vec(&RatVec::from_fracs(&[(0, 1), (1, 2)])), ["0", "1/2"]);
    }

    #[test]
    fn k4_polytope() {
        let v = polytope(&build_spec(4).unwrap());
        assert_eq!(v["vertices"].as_array().unwrap().len(), 5);
        assert_eq!(v["b"], json!(["0", "1/2", "1/2", "2"]));
        assert_eq!(v["facets"].as_array().unwrap().len(), 5);
    }

    #[test]
    fn complex_ids_resolve() {
        let k = stasheff_core::assoc::build_complex(4).unwrap().complex;
        let v = complex(&k);
        let cells = v["cells"].as_array().unwrap();
        let aux = v["auxiliary"].as_array().unwrap();
        assert_eq!(cells.len(), k.len());
        let total = cells.len() + aux.len();
        for c in cells.iter().chain(aux) {
            if let Some(ch) = c.get("children") {
                for id in ch.as_array().unwrap() {
                    assert!((id.as_u64().unwrap() as usize) < total);
                }
            }
        }
        for (i, c) in aux.iter().enumerate() {
            assert_eq!(c["id"].as_u64().unwrap() as usize, cells.len() + i);
        }
    }
}
