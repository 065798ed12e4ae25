//! Cubic sets: convex bodies built from points by joins and transverse
//! products, together with the complexes and maps they form.
//!
//! A cell remembers how it was built, because faces are defined on the
//! construction: a face of `a * b` is `f * g` and a face of `a × b` is
//! `f × g` for faces `f`, `g` of the factors. Two cells are equal when they
//! have the same vertex set, whatever their construction.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::geometry::{
    affine_hull, bounding_box, boxes_overlap, check_dim, convex_membership, directions_independent, hulls_meet, intersect_affine,
    meet_within, AffineSubspace, Intersection, RatVec,
};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub enum CellKind {
    Empty,
    Point,
    Join(Arc<CubicSet>, Arc<CubicSet>),
    /// `{x + y - anchor : x in left, y in right}`.
    Product {
        left: Arc<CubicSet>,
        right: Arc<CubicSet>,
        anchor: RatVec,
    },
}

#[derive(Clone, Debug)]
pub struct CubicSet {
    kind: CellKind,
    ambient_dim: usize,
    dim: isize,
    vertices: Vec<RatVec>,
}

impl PartialEq for CubicSet {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.vertices == other.vertices
    }
}

impl Eq for CubicSet {}

impl PartialOrd for CubicSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CubicSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ambient_dim.cmp(&other.ambient_dim).then_with(|| self.vertices.cmp(&other.vertices))
    }
}

fn sorted_unique(mut v: Vec<RatVec>) -> Vec<RatVec> {
    v.sort();
    v.dedup();
    v
}

impl CubicSet {
    pub fn empty(ambient_dim: usize) -> Self {
        CubicSet { kind: CellKind::Empty, ambient_dim, dim: -1, vertices: Vec::new() }
    }

    pub fn point(p: RatVec) -> Self {
        CubicSet { kind: CellKind::Point, ambient_dim: p.dim(), dim: 0, vertices: alloc::vec![p] }
    }

    pub fn kind(&self) -> &CellKind {
        &self.kind
    }

    /// Intrinsic dimension `q`; `-1` for the empty set.
    pub fn dim(&self) -> isize {
        self.dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Affine hull of the vertices, computed on demand; `None` for `∅`.
    pub fn hull(&self) -> Option<AffineSubspace> {
        affine_hull(&self.vertices).ok()
    }

    /// Sorted, deduplicated vertex list.
    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.kind, CellKind::Empty)
    }

    pub fn anchor(&self) -> Option<&RatVec> {
        match &self.kind {
            CellKind::Product { anchor, .. } => Some(anchor),
            _ => None,
        }
    }

    pub fn children(&self) -> Option<(&CubicSet, &CubicSet)> {
        match &self.kind {
            CellKind::Join(a, b) => Some((a, b)),
            CellKind::Product { left, right, .. } => Some((left, right)),
            _ => None,
        }
    }

    pub fn contains(&self, p: &RatVec) -> bool {
        !self.is_empty() && convex_membership(p, &self.vertices)
    }

    /// Assembles a cell whose dimension is known from the construction. When
    /// `checked`, the dimension is compared with the rank of the hull.
    fn assemble(kind: CellKind, ambient_dim: usize, dim: isize, vertices: Vec<RatVec>, checked: bool) -> Result<Self> {
        let vertices = sorted_unique(vertices);
        if !checked {
            return Ok(CubicSet { kind, ambient_dim, dim, vertices });
        }
        let hull = affine_hull(&vertices)?;
        if hull.dim() as isize != dim {
            let msg = format!("construction has dimension {dim} but its hull has dimension {}", hull.dim());
            return Err(match kind {
                CellKind::Join(..) => Error::JoinDegenerate(msg),
                _ => Error::ProductDegenerate(msg),
            });
        }
        Ok(CubicSet { kind, ambient_dim, dim, vertices })
    }

    /// Join of faces of an already valid join; general position is inherited.
    fn join_unchecked(a: &CubicSet, b: &CubicSet) -> CubicSet {
        if b.is_empty() {
            return a.clone();
        }
        if a.is_empty() {
            return b.clone();
        }
        let mut vertices = a.vertices.clone();
        vertices.extend(b.vertices.iter().cloned());
        let dim = a.dim + b.dim + 1;
        let kind = CellKind::Join(Arc::new(a.clone()), Arc::new(b.clone()));
        Self::assemble(kind, a.ambient_dim, dim, vertices, false).expect("faces of a join stay in general position")
    }

    fn product_unchecked(a: &CubicSet, b: &CubicSet, anchor: &RatVec, checked: bool) -> Result<CubicSet> {
        if a.is_empty() || b.is_empty() {
            return Ok(CubicSet::empty(a.ambient_dim));
        }
        let vertices: Vec<RatVec> = a.vertices.iter().flat_map(|x| b.vertices.iter().map(move |y| &(x + y) - anchor)).collect();
        if a.dim == 0 && b.dim == 0 {
            return Ok(CubicSet::point(vertices.into_iter().next().expect("one vertex")));
        }
        let kind = CellKind::Product { left: Arc::new(a.clone()), right: Arc::new(b.clone()), anchor: anchor.clone() };
        Self::assemble(kind, a.ambient_dim, a.dim + b.dim, vertices, checked)
    }

    /// Image under an injective affine map.
    pub fn map_affine(&self, f: &dyn Fn(&RatVec) -> RatVec, target_dim: usize) -> Result<CubicSet> {
        match &self.kind {
            CellKind::Empty => Ok(CubicSet::empty(target_dim)),
            CellKind::Point => Ok(CubicSet::point(f(&self.vertices[0]))),
            CellKind::Join(a, b) => {
                let a = a.map_affine(f, target_dim)?;
                let b = b.map_affine(f, target_dim)?;
                let mut vertices = a.vertices.clone();
                vertices.extend(b.vertices.iter().cloned());
                let kind = CellKind::Join(Arc::new(a), Arc::new(b));
                Self::assemble(kind, target_dim, self.dim, vertices, true)
            }
            CellKind::Product { left, right, anchor } => {
                let l = left.map_affine(f, target_dim)?;
                let r = right.map_affine(f, target_dim)?;
                Self::product_unchecked(&l, &r, &f(anchor), true)
            }
        }
    }

    /// All faces, including the empty set and the cell itself, sorted and
    /// deduplicated.
    pub fn faces(&self) -> Vec<CubicSet> {
        let set: BTreeSet<CubicSet> = match &self.kind {
            CellKind::Empty => [self.clone()].into_iter().collect(),
            CellKind::Point => [CubicSet::empty(self.ambient_dim), self.clone()].into_iter().collect(),
            CellKind::Join(a, b) => {
                let fb = b.faces();
                a.faces().iter().flat_map(|x| fb.iter().map(move |y| CubicSet::join_unchecked(x, y))).collect()
            }
            CellKind::Product { left, right, anchor } => {
                let fr = right.faces();
                left.faces()
                    .iter()
                    .flat_map(|x| {
                        fr.iter()
                            .map(move |y| CubicSet::product_unchecked(x, y, anchor, false).expect("faces of a product stay transverse"))
                    })
                    .collect()
            }
        };
        set.into_iter().collect()
    }
}

/// `a * b = {(1 - t) x + t y}`. Requires `V_a ∩ V_b = 0` and
/// `base_b - base_a ∉ V_a + V_b`; the empty set is a two-sided identity.
pub fn join(a: &CubicSet, b: &CubicSet) -> Result<CubicSet> {
    if a.ambient_dim != b.ambient_dim {
        return Err(Error::DimensionMismatch { expected: a.ambient_dim, found: b.ambient_dim });
    }
    let (Some(la), Some(lb)) = (a.hull(), b.hull()) else {
        return Ok(CubicSet::join_unchecked(a, b));
    };
    if !directions_independent(&la, &lb) {
        return Err(Error::JoinDegenerate(format!("direction spaces of {:?} and {:?} meet", a.vertices, b.vertices)));
    }
    if la.join_directions(&lb)?.contains_direction(&(lb.base() - la.base())) {
        return Err(Error::JoinDegenerate(format!("hulls of {:?} and {:?} are not skew", a.vertices, b.vertices)));
    }
    Ok(CubicSet::join_unchecked(a, b))
}

/// Product taken with respect to the cells' own hulls, which must meet in
/// exactly one point.
pub fn product(a: &CubicSet, b: &CubicSet) -> Result<CubicSet> {
    match (a.hull(), b.hull()) {
        (Some(la), Some(lb)) => product_over(a, b, &la, &lb),
        _ => Ok(CubicSet::empty(a.ambient_dim)),
    }
}

/// `a ×_{L1,L2} b = {x + y - p}` where `L1 ∩ L2 = {p}`, `a ⊂ L1`, `b ⊂ L2`
/// and the direction spaces of `L1`, `L2` are independent.
pub fn product_over(a: &CubicSet, b: &CubicSet, l1: &AffineSubspace, l2: &AffineSubspace) -> Result<CubicSet> {
    if a.ambient_dim != b.ambient_dim {
        return Err(Error::DimensionMismatch { expected: a.ambient_dim, found: b.ambient_dim });
    }
    let anchor = frame_anchor(a.ambient_dim, l1, l2)?;
    check_in_frame(&a.vertices, l1)?;
    check_in_frame(&b.vertices, l2)?;
    // transverse frames make the dimensions add, so the rank check is redundant
    CubicSet::product_unchecked(a, b, &anchor, false)
}

/// The point `L1 ∩ L2`, provided the frames are transverse.
fn frame_anchor(ambient_dim: usize, l1: &AffineSubspace, l2: &AffineSubspace) -> Result<RatVec> {
    check_dim(ambient_dim, l1.base())?;
    check_dim(ambient_dim, l2.base())?;
    if !directions_independent(l1, l2) {
        return Err(Error::ProductDegenerate("frame directions are not independent".into()));
    }
    match intersect_affine(l1, l2)? {
        Intersection::Point(p) => Ok(p),
        other => Err(Error::ProductDegenerate(format!("frames meet in {}", other.describe()))),
    }
}

fn check_in_frame(vertices: &[RatVec], frame: &AffineSubspace) -> Result<()> {
    match vertices.iter().find(|v| !frame.contains(v)) {
        Some(v) => Err(Error::ProductDegenerate(format!("vertex {v:?} does not lie in its frame"))),
        None => Ok(()),
    }
}

/// A finite family of cubic sets in a common `R^n`, with the face relation
/// restricted to its members. Cells are stored in canonical vertex-list
/// order, so the empty cell (if present) has id 0.
#[derive(Clone, Debug)]
pub struct CubicComplex {
    ambient_dim: usize,
    cells: Vec<CubicSet>,
    index: BTreeMap<Vec<RatVec>, usize>,
    faces: Vec<Vec<usize>>,
    /// Faces of each cell that are not members of the complex.
    missing: Vec<Vec<CubicSet>>,
}

impl CubicComplex {
    /// Builds the family as given; closure is not enforced (see
    /// [`verify_complex`]).
    pub fn new(ambient_dim: usize, cells: impl IntoIterator<Item = CubicSet>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for c in cells {
            if c.ambient_dim != ambient_dim {
                return Err(Error::DimensionMismatch { expected: ambient_dim, found: c.ambient_dim });
            }
            set.insert(c);
        }
        let cells: Vec<CubicSet> = set.into_iter().collect();
        let index: BTreeMap<Vec<RatVec>, usize> = cells.iter().enumerate().map(|(i, c)| (c.vertices.clone(), i)).collect();
        let mut faces = Vec::with_capacity(cells.len());
        let mut missing = Vec::with_capacity(cells.len());
        for c in &cells {
            let mut ids = Vec::new();
            let mut absent = Vec::new();
            for f in c.faces() {
                match index.get(&f.vertices) {
                    Some(&id) => ids.push(id),
                    None => absent.push(f),
                }
            }
            ids.sort_unstable();
            faces.push(ids);
            missing.push(absent);
        }
        Ok(CubicComplex { ambient_dim, cells, index, faces, missing })
    }

    /// The smallest complex containing the given cells: all their faces.
    pub fn closure(ambient_dim: usize, cells: impl IntoIterator<Item = CubicSet>) -> Result<Self> {
        let mut all = BTreeSet::new();
        all.insert(CubicSet::empty(ambient_dim));
        for c in cells {
            all.extend(c.faces());
        }
        CubicComplex::new(ambient_dim, all)
    }

    pub fn from_cell(cell: &CubicSet) -> Result<Self> {
        CubicComplex::closure(cell.ambient_dim, [cell.clone()])
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn cells(&self) -> &[CubicSet] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, id: usize) -> &CubicSet {
        &self.cells[id]
    }

    pub fn id_of(&self, cell: &CubicSet) -> Option<usize> {
        self.index.get(&cell.vertices).copied()
    }

    pub fn contains_cell(&self, cell: &CubicSet) -> bool {
        cell.ambient_dim == self.ambient_dim && self.index.contains_key(&cell.vertices)
    }

    /// Ids of the faces of cell `id` that belong to the complex, including
    /// `id` itself.
    pub fn faces_of(&self, id: usize) -> &[usize] {
        &self.faces[id]
    }

    /// `face ≺ cell`.
    pub fn is_face(&self, face: usize, cell: usize) -> bool {
        self.faces[cell].binary_search(&face).is_ok()
    }

    /// All pairs `(face, cell)` with `face ≺ cell`.
    pub fn face_pairs(&self) -> Vec<(usize, usize)> {
        self.faces.iter().enumerate().flat_map(|(c, fs)| fs.iter().map(move |&f| (f, c))).collect()
    }

    /// Maximum cell dimension, `-1` when only the empty cell is present.
    pub fn dim(&self) -> isize {
        self.cells.iter().map(CubicSet::dim).max().unwrap_or(-1)
    }

    /// Number of cells of each dimension `0, 1, ..., dim`.
    pub fn counts_by_dim(&self) -> Vec<usize> {
        let top = self.dim().max(-1);
        let mut counts = alloc::vec![0usize; (top + 1) as usize];
        for c in &self.cells {
            if c.dim >= 0 {
                counts[c.dim as usize] += 1;
            }
        }
        counts
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts_by_dim().iter().enumerate().map(|(q, &c)| if q % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    /// Cells that are not a proper face of another member.
    pub fn maximal_cells(&self) -> Vec<usize> {
        let mut covered = alloc::vec![false; self.cells.len()];
        for (c, fs) in self.faces.iter().enumerate() {
            for &f in fs {
                if f != c {
                    covered[f] = true;
                }
            }
        }
        (0..self.cells.len()).filter(|&i| !covered[i]).collect()
    }

    /// Whether `p` lies in the union of the cells.
    pub fn realization_contains(&self, p: &RatVec) -> bool {
        self.maximal_cells().into_iter().any(|i| self.cells[i].contains(p))
    }

    /// Every vertex of every cell.
    pub fn vertex_set(&self) -> Vec<RatVec> {
        sorted_unique(self.cells.iter().flat_map(|c| c.vertices.iter().cloned()).collect())
    }

    /// Affine hull of the realization, `None` for `{∅}`.
    pub fn hull(&self) -> Option<AffineSubspace> {
        let vs = self.vertex_set();
        if vs.is_empty() {
            None
        } else {
            affine_hull(&vs).ok()
        }
    }

    /// Members satisfying `keep`, as a complex of its own.
    pub fn filter(&self, keep: impl Fn(&CubicSet) -> bool) -> Result<CubicComplex> {
        CubicComplex::new(self.ambient_dim, self.cells.iter().filter(|c| keep(c)).cloned())
    }

    /// Image under an injective affine map into `R^target_dim`.
    pub fn map_affine(&self, f: &dyn Fn(&RatVec) -> RatVec, target_dim: usize) -> Result<CubicComplex> {
        let cells = self.cells.iter().map(|c| c.map_affine(f, target_dim)).collect::<Result<Vec<_>>>()?;
        CubicComplex::new(target_dim, cells)
    }
}

/// The complex of proper faces of `cell`; its realization is the boundary.
pub fn boundary_complex(cell: &CubicSet) -> Result<CubicComplex> {
    CubicComplex::new(cell.ambient_dim, cell.faces().into_iter().filter(|f| f != cell))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplexViolation {
    AmbientMismatch {
        cell: usize,
    },
    MissingEmpty,
    /// A face of `cell` is not a member.
    NotClosed {
        cell: usize,
        face: Vec<RatVec>,
    },
    /// The cells meet in something that is not a common face.
    BadIntersection {
        a: usize,
        b: usize,
    },
    /// The shared vertices do not span a generated face of both cells, so the
    /// intersection cannot be identified by this check.
    Unverifiable {
        a: usize,
        b: usize,
    },
}

#[derive(Clone, Debug, Default)]
pub struct ComplexReport {
    pub cells: usize,
    pub pairs_checked: usize,
    pub violations: Vec<ComplexViolation>,
}

impl ComplexReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that the cells form a cubic complex: the empty cell is present,
/// faces of members are members, and any two members meet in a common face.
///
/// The intersection of two cells is identified with the hull of their shared
/// vertices, which must be a face of both. Exact LP checks then confirm
/// that cells sharing no vertex are disjoint, and that two maximal cells meet
/// only inside that common face.
pub fn verify_complex(ambient_dim: usize, cells: &[CubicSet]) -> ComplexReport {
    let mut report = ComplexReport { cells: cells.len(), ..Default::default() };
    for (i, c) in cells.iter().enumerate() {
        if c.ambient_dim != ambient_dim {
            report.violations.push(ComplexViolation::AmbientMismatch { cell: i });
        }
    }
    if !report.violations.is_empty() {
        return report;
    }
    let complex = match CubicComplex::new(ambient_dim, cells.iter().cloned()) {
        Ok(c) => c,
        Err(_) => return report,
    };
    check_complex(&complex, &mut report);
    report
}

fn check_complex(k: &CubicComplex, report: &mut ComplexReport) {
    report.cells = k.len();
    if !k.cells.first().is_some_and(CubicSet::is_empty) {
        report.violations.push(ComplexViolation::MissingEmpty);
    }
    for (i, absent) in k.missing.iter().enumerate() {
        for f in absent {
            report.violations.push(ComplexViolation::NotClosed { cell: i, face: f.vertices.clone() });
        }
    }
    // vertices as integer ids; every id list below is sorted
    let vertex_ids: BTreeMap<&RatVec, u32> =
        k.cells.iter().flat_map(|c| c.vertices.iter()).collect::<BTreeSet<_>>().into_iter().zip(0..).collect();
    let ids = |vs: &[RatVec]| -> Vec<u32> { vs.iter().map(|v| vertex_ids[v]).collect() };
    let cell_ids: Vec<Vec<u32>> = k.cells.iter().map(|c| ids(&c.vertices)).collect();
    let faces_by_cell: Vec<BTreeSet<Vec<u32>>> = k.cells.iter().map(|c| c.faces().iter().map(|f| ids(&f.vertices)).collect()).collect();
    let mut star: Vec<Vec<usize>> = alloc::vec![Vec::new(); vertex_ids.len()];
    for (c, vs) in cell_ids.iter().enumerate() {
        for &v in vs {
            star[v as usize].push(c);
        }
    }
    let maximal = k.maximal_cells();
    let mut combinatorial_ok = BTreeSet::new();

    // Cells sharing a vertex must share a common generated face. Each pair
    // is visited once, from its smallest shared vertex.
    for (v, cells) in star.iter().enumerate() {
        for (i, &a) in cells.iter().enumerate() {
            for &b in &cells[i + 1..] {
                let shared = shared_sorted(&cell_ids[a], &cell_ids[b]);
                if shared[0] as usize != v || k.is_face(a, b) || k.is_face(b, a) {
                    continue;
                }
                report.pairs_checked += 1;
                if faces_by_cell[a].contains(&shared) && faces_by_cell[b].contains(&shared) {
                    combinatorial_ok.insert((a, b));
                } else {
                    report.violations.push(ComplexViolation::Unverifiable { a, b });
                }
            }
        }
    }

    // Geometry only needs checking on maximal cells: if two maximal cells
    // meet in their common face F, faces of them meet inside F, where the
    // face lattice of F already decides the intersection.
    let boxes: Vec<_> = k.cells.iter().map(|c| bounding_box(&c.vertices)).collect();
    for (i, &a) in maximal.iter().enumerate() {
        if k.cells[a].is_empty() {
            continue;
        }
        for &b in &maximal[i + 1..] {
            if k.cells[b].is_empty() {
                continue;
            }
            let (va, vb) = (&k.cells[a].vertices, &k.cells[b].vertices);
            let shared = shared_sorted(&cell_ids[a], &cell_ids[b]);
            let bad = if shared.is_empty() {
                report.pairs_checked += 1;
                let overlap = match (&boxes[a], &boxes[b]) {
                    (Some(x), Some(y)) => boxes_overlap(x, y),
                    _ => false,
                };
                overlap && hulls_meet(va, vb)
            } else if combinatorial_ok.contains(&(a, b)) {
                let keep: Vec<bool> = cell_ids[a].iter().map(|v| shared.binary_search(v).is_ok()).collect();
                !meet_within(va, vb, &keep)
            } else {
                false
            };
            if bad {
                report.violations.push(ComplexViolation::BadIntersection { a, b });
            }
        }
    }
}

fn shared_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// `K * L = {σ * τ}`. Each cell is paired with the ids of its factors in
/// `k` and `l` (the first pair found, for the empty cell).
pub fn complex_join_tracked(k: &CubicComplex, l: &CubicComplex) -> Result<(CubicComplex, Vec<(usize, usize)>)> {
    let mut made: BTreeMap<CubicSet, (usize, usize)> = BTreeMap::new();
    for (i, s) in k.cells.iter().enumerate() {
        for (j, t) in l.cells.iter().enumerate() {
            let c = join(s, t).map_err(|e| match e {
                Error::JoinDegenerate(m) => Error::JoinDegenerate(format!("cells {i} and {j}: {m}")),
                other => other,
            })?;
            made.entry(c).or_insert((i, j));
        }
    }
    finish_tracked(k.ambient_dim, made)
}

pub fn complex_join(k: &CubicComplex, l: &CubicComplex) -> Result<CubicComplex> {
    complex_join_tracked(k, l).map(|(c, _)| c)
}

/// `K × L = {σ × τ}` over explicit frames `l1 ⊇ |K|`, `l2 ⊇ |L|`.
pub fn complex_product_over_tracked(
    k: &CubicComplex,
    l: &CubicComplex,
    l1: &AffineSubspace,
    l2: &AffineSubspace,
) -> Result<(CubicComplex, Vec<(usize, usize)>)> {
    let anchor = frame_anchor(k.ambient_dim, l1, l2)?;
    check_in_frame(&k.vertex_set(), l1)?;
    check_in_frame(&l.vertex_set(), l2)?;
    let mut made: BTreeMap<CubicSet, (usize, usize)> = BTreeMap::new();
    for (i, s) in k.cells.iter().enumerate() {
        for (j, t) in l.cells.iter().enumerate() {
            made.entry(CubicSet::product_unchecked(s, t, &anchor, false)?).or_insert((i, j));
        }
    }
    finish_tracked(k.ambient_dim, made)
}

pub fn complex_product_over(k: &CubicComplex, l: &CubicComplex, l1: &AffineSubspace, l2: &AffineSubspace) -> Result<CubicComplex> {
    complex_product_over_tracked(k, l, l1, l2).map(|(c, _)| c)
}

/// `K × L` with frames the affine hulls of the two realizations.
pub fn complex_product(k: &CubicComplex, l: &CubicComplex) -> Result<CubicComplex> {
    match (k.hull(), l.hull()) {
        (Some(l1), Some(l2)) => complex_product_over(k, l, &l1, &l2),
        _ => CubicComplex::new(k.ambient_dim, [CubicSet::empty(k.ambient_dim)]),
    }
}

fn finish_tracked(ambient_dim: usize, made: BTreeMap<CubicSet, (usize, usize)>) -> Result<(CubicComplex, Vec<(usize, usize)>)> {
    let provenance: Vec<(usize, usize)> = made.values().copied().collect();
    let complex = CubicComplex::new(ambient_dim, made.into_keys())?;
    Ok((complex, provenance))
}

/// An assignment of cells of `source` to cells of `target`, by id.
#[derive(Clone, Debug)]
pub struct CubicMapSpec {
    pub source: CubicComplex,
    pub target: CubicComplex,
    pub assignment: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapViolation {
    NotTotal {
        expected: usize,
        found: usize,
    },
    TargetOutOfRange {
        cell: usize,
    },
    /// `face ≺ cell` but the images are not in the face relation.
    NotOrderPreserving {
        face: usize,
        cell: usize,
    },
    /// `φ(∅) ≠ ∅`, or a nonempty cell is sent to `∅`.
    EmptyPreimage {
        cell: usize,
    },
    /// A face of `φ(cell)` has no preimage among the faces of `cell`.
    NoLift {
        cell: usize,
        target_face: usize,
    },
}

#[derive(Clone, Debug, Default)]
pub struct MapReport {
    pub violations: Vec<MapViolation>,
}

impl MapReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl CubicMapSpec {
    /// Sends every nonempty cell to the point complex `{∅, {p}}`.
    pub fn trivial(source: &CubicComplex, p: RatVec) -> Result<Self> {
        let target = CubicComplex::from_cell(&CubicSet::point(p))?;
        let assignment = source.cells.iter().map(|c| if c.is_empty() { 0 } else { 1 }).collect();
        Ok(CubicMapSpec { source: source.clone(), target, assignment })
    }

    /// Inclusion of `sub` into `complex`; fails if a cell of `sub` is not a
    /// member of `complex`.
    pub fn inclusion(sub: &CubicComplex, complex: &CubicComplex) -> Result<Self> {
        let assignment = sub
            .cells
            .iter()
            .map(|c| complex.id_of(c).ok_or_else(|| Error::Domain(format!("cell {:?} is not in the complex", c.vertices))))
            .collect::<Result<Vec<_>>>()?;
        Ok(CubicMapSpec { source: sub.clone(), target: complex.clone(), assignment })
    }
}

/// `φ(σ * τ) = φ1(σ) * φ2(τ)` between the joined complexes.
pub fn join_maps(m1: &CubicMapSpec, m2: &CubicMapSpec) -> Result<CubicMapSpec> {
    let (source, prov) = complex_join_tracked(&m1.source, &m2.source)?;
    let target = complex_join(&m1.target, &m2.target)?;
    let assignment = prov
        .iter()
        .map(|&(i, j)| {
            let img = join(m1.target.cell(m1.assignment[i]), m2.target.cell(m2.assignment[j]))?;
            target.id_of(&img).ok_or_else(|| Error::Domain("joined image is not a target cell".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CubicMapSpec { source, target, assignment })
}

/// `ψ(σ × τ) = φ1(σ) × φ2(τ)`; frames are the hulls of the realizations.
pub fn product_maps(m1: &CubicMapSpec, m2: &CubicMapSpec) -> Result<CubicMapSpec> {
    let frames = |a: &CubicComplex, b: &CubicComplex| -> Result<(AffineSubspace, AffineSubspace)> {
        match (a.hull(), b.hull()) {
            (Some(x), Some(y)) => Ok((x, y)),
            _ => Err(Error::ProductDegenerate("product of empty complexes".into())),
        }
    };
    let (s1, s2) = frames(&m1.source, &m2.source)?;
    let (t1, t2) = frames(&m1.target, &m2.target)?;
    let (source, prov) = complex_product_over_tracked(&m1.source, &m2.source, &s1, &s2)?;
    let target = complex_product_over(&m1.target, &m2.target, &t1, &t2)?;
    let assignment = source
        .cells
        .iter()
        .zip(&prov)
        .map(|(cell, &(i, j))| {
            if cell.is_empty() {
                return Ok(0);
            }
            let (a, b) = (m1.target.cell(m1.assignment[i]), m2.target.cell(m2.assignment[j]));
            let img = if a.is_empty() || b.is_empty() { CubicSet::empty(m1.target.ambient_dim) } else { product_over(a, b, &t1, &t2)? };
            target.id_of(&img).ok_or_else(|| Error::Domain("product image is not a target cell".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CubicMapSpec { source, target, assignment })
}

/// Checks that `m` is a cubic map: total, order preserving, `φ⁻¹(∅) = {∅}`,
/// and every face of an image lifts to a face of the source cell.
pub fn verify_cubic_map(m: &CubicMapSpec) -> MapReport {
    let mut report = MapReport::default();
    let (src, tgt) = (&m.source, &m.target);
    if m.assignment.len() != src.len() {
        report.violations.push(MapViolation::NotTotal { expected: src.len(), found: m.assignment.len() });
        return report;
    }
    for (cell, &img) in m.assignment.iter().enumerate() {
        if img >= tgt.len() {
            report.violations.push(MapViolation::TargetOutOfRange { cell });
        }
    }
    if !report.violations.is_empty() {
        return report;
    }
    for (cell, &img) in m.assignment.iter().enumerate() {
        if src.cells[cell].is_empty() != tgt.cells[img].is_empty() {
            report.violations.push(MapViolation::EmptyPreimage { cell });
        }
    }
    for (face, cell) in src.face_pairs() {
        if !tgt.is_face(m.assignment[face], m.assignment[cell]) {
            report.violations.push(MapViolation::NotOrderPreserving { face, cell });
        }
    }
    for (cell, &img) in m.assignment.iter().enumerate() {
        for &target_face in tgt.faces_of(img) {
            let lifted = src.faces_of(cell).iter().any(|&f| m.assignment[f] == target_face);
            if !lifted {
                report.violations.push(MapViolation::NoLift { cell, target_face });
            }
        }
    }
    report
}

impl core::fmt::Display for ComplexViolation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ComplexViolation::AmbientMismatch { cell } => write!(f, "cell {cell} has the wrong ambient dimension"),
            ComplexViolation::MissingEmpty => f.write_str("the empty cell is missing"),
            ComplexViolation::NotClosed { cell, face } => write!(f, "face {face:?} of cell {cell} is missing"),
            ComplexViolation::BadIntersection { a, b } => write!(f, "cells {a} and {b} meet outside a common face"),
            ComplexViolation::Unverifiable { a, b } => write!(f, "intersection of cells {a} and {b} is not a generated face"),
        }
    }
}
