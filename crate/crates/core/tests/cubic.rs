use proptest::prelude::*;
use stasheff_core::cubic::*;
use stasheff_core::geometry::*;

fn pt(c: &[i64]) -> CubicSet {
    CubicSet::point(RatVec::from_ints(c))
}

fn seg(a: &[i64], b: &[i64]) -> CubicSet {
    join(&pt(a), &pt(b)).unwrap()
}

fn unit(dim: usize, axis: usize, scale: i64) -> Vec<i64> {
    let mut v = vec![0; dim];
    v[axis] = scale;
    v
}

/// `[0, l_1] × ... × [0, l_q]` in `R^q`, translated by `offset`.
fn cube(lengths: &[i64], offset: &[i64]) -> CubicSet {
    let q = lengths.len();
    let shift = |v: Vec<i64>| -> Vec<i64> { v.iter().zip(offset).map(|(a, b)| a + b).collect() };
    let mut acc = seg(offset, &shift(unit(q, 0, lengths[0])));
    for (axis, &l) in lengths.iter().enumerate().skip(1) {
        acc = product(&acc, &seg(offset, &shift(unit(q, axis, l)))).unwrap();
    }
    acc
}

fn combine(pts: &[RatVec], w: &[u32]) -> RatVec {
    let total = w.iter().sum::<u32>().max(1) as i64;
    pts.iter().zip(w.iter().cycle()).fold(RatVec::zeros(pts[0].dim()), |acc, (p, &x)| &acc + &p.scale(&rat(x as i64, total)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cube_faces_number_three_to_the_q_plus_one(
        lengths in prop::collection::vec(1i64..4, 1..=4),
        offset in prop::collection::vec(-3i64..3, 4),
    ) {
        let q = lengths.len();
        let c = cube(&lengths, &offset[..q]);
        prop_assert_eq!(c.dim(), q as isize);
        let faces = c.faces();
        prop_assert_eq!(faces.len(), 3usize.pow(q as u32) + 1);
        for f in &faces {
            let rank = f.hull().map_or(-1, |h| h.dim() as isize);
            prop_assert_eq!(f.dim(), rank);
        }
    }

    #[test]
    fn realization_matches_convex_hull(
        lengths in prop::collection::vec(1i64..4, 1..=3),
        w in prop::collection::vec(0u32..5, 8),
        axis in 0usize..3,
    ) {
        let q = lengths.len();
        let c = cube(&lengths, &vec![0; q]);
        prop_assume!(w.iter().take(c.vertices().len()).any(|&x| x > 0));
        let inside = combine(c.vertices(), &w[..c.vertices().len().min(w.len())]);
        prop_assert!(c.contains(&inside));
        let mut out = inside.into_coords();
        out[axis % q] = int(lengths[axis % q] + 1);
        prop_assert!(!c.contains(&RatVec::new(out)));
    }

    #[test]
    fn boundary_is_a_proper_subcomplex(lengths in prop::collection::vec(1i64..3, 1..=3)) {
        let c = cube(&lengths, &vec![0; lengths.len()]);
        let faces = c.faces();
        let b = boundary_complex(&c).unwrap();
        prop_assert!(!b.contains_cell(&c));
        prop_assert_eq!(b.len(), faces.len() - 1);
        for cell in b.cells() {
            prop_assert!(faces.contains(cell));
        }
        prop_assert!(verify_complex(c.ambient_dim(), b.cells()).ok());
    }
}

#[test]
fn off_hull_points_are_rejected() {
    let tri = join(&seg(&[0, 0, 0], &[2, 0, 0]), &pt(&[0, 2, 0])).unwrap();
    assert!(tri.contains(&RatVec::from_fracs(&[(1, 2), (1, 2), (0, 1)])));
    assert!(!tri.contains(&RatVec::from_fracs(&[(1, 2), (1, 2), (1, 3)])));
}

/// `(σ * a) × (τ * b)` against `L * c`, `L = (σ * a) × τ ∪ σ × (τ * b)`,
/// `c = (a, b)`, by sampling both directions.
#[test]
fn join_of_products_is_a_cone() {
    let sigma = seg(&[0, 0, 0, 0], &[1, 0, 0, 0]);
    let tau = seg(&[0, 0, 0, 0], &[0, 0, 1, 0]);
    let sa = join(&sigma, &pt(&[0, 1, 0, 0])).unwrap();
    let tb = join(&tau, &pt(&[0, 0, 0, 1])).unwrap();
    let whole = product(&sa, &tb).unwrap();
    assert_eq!(whole.dim(), 4);

    let l = CubicComplex::closure(4, [product(&sa, &tau).unwrap(), product(&sigma, &tb).unwrap()]).unwrap();
    let cone = complex_join(&l, &CubicComplex::from_cell(&pt(&[0, 1, 0, 1])).unwrap()).unwrap();
    assert_eq!(cone.dim(), 4);

    let weights: Vec<Vec<u32>> = (0..40u32).map(|i| (0..9).map(|j| (i * 7 + j * 13 + i * j) % 5).collect()).collect();
    for w in &weights {
        let p = combine(whole.vertices(), w);
        assert!(cone.realization_contains(&p), "{p:?} is in the product only");
    }
    for id in cone.maximal_cells() {
        let cell = cone.cell(id);
        for w in &weights {
            let p = combine(cell.vertices(), w);
            assert!(whole.contains(&p), "{p:?} is in the cone only");
        }
    }
}

#[test]
fn joins_and_products_of_cubic_maps_are_cubic() {
    let s1 = CubicComplex::from_cell(&seg(&[0, 0, 0], &[1, 0, 0])).unwrap();
    let endpoints = s1.filter(|c| c.dim() <= 0).unwrap();
    let incl = CubicMapSpec::inclusion(&endpoints, &s1).unwrap();
    assert!(verify_cubic_map(&incl).ok());

    let s2 = CubicComplex::from_cell(&seg(&[0, 0, 1], &[0, 1, 1])).unwrap();
    let collapse = CubicMapSpec::trivial(&s2, RatVec::from_ints(&[0, 0, 1])).unwrap();
    assert!(verify_cubic_map(&collapse).ok());
    let joined = join_maps(&incl, &collapse).unwrap();
    let report = verify_cubic_map(&joined);
    assert!(report.ok(), "{:?}", report.violations);
    assert_eq!(joined.source.dim(), 2);

    let s3 = CubicComplex::from_cell(&seg(&[0, 0, 0], &[0, 1, 0])).unwrap();
    let collapse0 = CubicMapSpec::trivial(&s3, RatVec::from_ints(&[0, 0, 0])).unwrap();
    let id = CubicMapSpec::inclusion(&s1, &s1).unwrap();
    let prod = product_maps(&id, &collapse0).unwrap();
    let report = verify_cubic_map(&prod);
    assert!(report.ok(), "{:?}", report.violations);
    assert_eq!(prod.source.counts_by_dim(), vec![4, 4, 1]);
}

#[test]
fn square_complex_from_segment_product() {
    let a = CubicComplex::from_cell(&seg(&[0, 0], &[1, 0])).unwrap();
    let b = CubicComplex::from_cell(&seg(&[0, 0], &[0, 1])).unwrap();
    let sq = complex_product(&a, &b).unwrap();
    assert_eq!(sq.len(), 10);
    assert_eq!(sq.euler_characteristic(), 1);
    assert!(verify_complex(2, sq.cells()).ok());
}
