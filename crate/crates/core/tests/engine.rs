use std::collections::BTreeSet;

use proptest::prelude::*;
use stasheff_core::assoc::*;
use stasheff_core::engine::*;
use stasheff_core::geometry::*;
use stasheff_core::paths::*;

#[derive(Clone, Debug)]
enum Tree {
    Leaf,
    Node(Box<Tree>, Box<Tree>),
}

impl Tree {
    fn leaves(&self) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::Node(a, b) => a.leaves() + b.leaves(),
        }
    }

    fn depths(&self, d: u32, out: &mut Vec<u32>) {
        match self {
            Tree::Leaf => out.push(d),
            Tree::Node(a, b) => {
                a.depths(d + 1, out);
                b.depths(d + 1, out);
            }
        }
    }
}

fn trees(n: usize) -> Vec<Tree> {
    if n == 1 {
        return vec![Tree::Leaf];
    }
    let mut out = Vec::new();
    for left in 1..n {
        for a in trees(left) {
            for b in trees(n - left) {
                out.push(Tree::Node(Box::new(a.clone()), Box::new(b)));
            }
        }
    }
    out
}

/// `∂_k(x, y)`, written out from the coordinate formula.
fn graft_coords(k: usize, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    let s = y.len();
    let mut out = x[..k - 1].to_vec();
    out.extend_from_slice(&y[..s - 1]);
    out.push(&y[s - 1] + &x[k - 1]);
    out.extend_from_slice(&x[k..]);
    out
}

/// The vertex of `K_n` labelled by a binary tree: split off a subtree with at
/// least two leaves and graft it back.
fn tree_vertex(t: &Tree) -> Vec<Rational> {
    match t {
        Tree::Leaf => vec![int(0)],
        Tree::Node(a, b) => match (a.leaves(), b.leaves()) {
            (1, 1) => vec![int(0), int(1)],
            (la, lb) if lb >= 2 => {
                let x = tree_vertex(&Tree::Node(a.clone(), Box::new(Tree::Leaf)));
                graft_coords(la + 1, &x, &tree_vertex(b))
            }
            _ => {
                let x = tree_vertex(&Tree::Node(Box::new(Tree::Leaf), b.clone()));
                graft_coords(1, &x, &tree_vertex(a))
            }
        },
    }
}

#[test]
fn phi_on_vertices_is_the_tree_oracle() {
    for n in 2..=6 {
        let mut seen = BTreeSet::new();
        for t in trees(n) {
            let vertex = RatVec::new(tree_vertex(&t));
            let mut depths = Vec::new();
            t.depths(0, &mut depths);
            let expected: Vec<Rational> = depths.iter().map(|&d| rat(1, 1 << d)).collect();
            let got = phi(n, &vertex).unwrap();
            assert_eq!(got.r(), &expected[..], "n={n} {t:?}");
            assert_eq!(got.r().iter().sum::<Rational>(), int(1));
            seen.insert(vertex);
        }
        let vs: BTreeSet<RatVec> = vertices(n).into_iter().collect();
        assert_eq!(seen, vs, "n={n}");
    }
}

#[test]
fn cone_maps_agree_on_ridges() {
    for (n, den) in [(4, 8), (5, 4)] {
        let mut ridges = 0;
        for t in grid_points(n, den) {
            for flavor in [Flavor::Plain, Flavor::Stable] {
                let all = cone_map_all(flavor, n, &t).unwrap();
                if all.len() < 2 {
                    continue;
                }
                if flavor == Flavor::Plain {
                    ridges += 1;
                }
                assert!(all.windows(2).all(|w| w[0] == w[1]), "{flavor:?} at {t:?}: {all:?}");
            }
        }
        assert!(ridges >= 10, "only {ridges} ridge points for n={n}");
    }
}

#[test]
fn examples() {
    let u = make_path(Curve::Bridge { a: vec![0.0], b: vec![1.0], q: vec![vec![0.4]] }).unwrap();
    let v = make_path(Curve::Bridge { a: vec![1.0], b: vec![-1.0], q: vec![] }).unwrap();
    assert_eq!(mu(&u, &v).unwrap().eval(0.75), v.eval(0.5));
    assert_eq!(beta(&e(2), &[u.clone(), v.clone()]).unwrap().eval(0.25), u.eval(0.5));
    assert_eq!(mu_eps(&rat(1, 10), &u, &v).unwrap().eval(0.5), u.eval(1.0));
    assert_eq!(mu_eps(&rat(1, 5), &u, &v).unwrap().eval(0.5), u.eval(1.0));
    let m2 = m(2, &interior_point(2), &[u.clone(), v.clone()]).unwrap();
    let plain = mu(&u, &v).unwrap();
    for t in uniform_grid(100) {
        assert_eq!(m2.eval(t), plain.eval(t));
    }
    let stable = alpha(&d(2), &[u.clone(), v.clone()]).unwrap();
    for t in [0.4, 0.47, 0.5, 0.6] {
        assert_eq!(stable.eval(t), u.eval(1.0));
    }

    // λ-line from 0 to 1
    let g = make_path(Curve::Poly { coeffs: vec![vec![0.0], vec![1.0]] }).unwrap();
    let unit = m(2, &interior_point(2), &[iota(&[0.0]), g.clone()]).unwrap();
    assert_eq!(unit.eval(0.25), vec![0.0]);
    // the deviation at 1/4 is λ(1/4) = 1/(1 + e^{8/3}) ≈ 0.065; the largest
    // is at least 1/2 (at t = 1/2)
    let lam = 1.0 / (1.0 + (8.0f64 / 3.0).exp());
    assert!((g.eval(0.25)[0] - lam).abs() < 1e-15);
    assert_eq!(unit.eval(0.5), vec![0.0]);
    assert_eq!(g.eval(0.5), vec![0.5]);
    let rep = verify_strict_unit_failure(Flavor::Plain, &g, &uniform_grid(100), 0.1).unwrap();
    assert!(rep.pass && rep.max_dev >= 0.5, "{rep:?}");
}

#[test]
fn condition0_for_small_n() {
    let nodes: Vec<Vec<f64>> = (0..=4).map(|i| vec![i as f64, (i * i) as f64 * 0.5]).collect();
    let wiggles: Vec<Vec<Vec<f64>>> = (0..4).map(|i| vec![vec![0.2 * i as f64, -0.3]]).collect();
    let chain = bridge_chain(&nodes, &wiggles, Bump::Exp).unwrap();
    for n in 2..=4 {
        for t in sample_points(n, 8, 5) {
            for flavor in [Flavor::Plain, Flavor::Stable] {
                let rep = verify_condition0(flavor, n, &t, &chain[..n]).unwrap();
                assert!(rep.pass && rep.max_dev == 0.0, "{rep:?}");
            }
        }
    }
}

fn family(n: usize, d: usize) -> impl Strategy<Value = Vec<SmoothPath>> {
    let nodes = prop::collection::vec(prop::collection::vec(-1.0f64..1.0, d), n + 1);
    let wiggles = prop::collection::vec(prop::collection::vec(prop::collection::vec(-1.0f64..1.0, d), 0..=3), n);
    (nodes, wiggles, prop_oneof![Just(Bump::Exp), Just(Bump::ExpSquared)])
        .prop_map(|(nodes, wiggles, bump)| bridge_chain(&nodes, &wiggles, bump).unwrap())
}

fn face_with_family() -> impl Strategy<Value = (FaceIndex, Vec<SmoothPath>)> {
    (3usize..=5, 1usize..=3).prop_flat_map(|(n, d)| (prop::sample::select(face_indices(n)), family(n, d)))
}

fn weights(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(1i64..20, n).prop_map(|w| {
        let total: i64 = w.iter().sum();
        w.iter().map(|&x| rat(x, total)).collect()
    })
}

fn stable_weights(n: usize) -> impl Strategy<Value = StableConcatWeights> {
    weights(2 * n - 1).prop_map(move |w| StableConcatWeights::new(w[..n].to_vec(), w[n..].to_vec()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn condition1_holds_on_random_families((face, fam) in face_with_family(), flavor in prop_oneof![Just(Flavor::Plain), Just(Flavor::Stable)]) {
        let sigmas = sample_points(face.s, 8, 3);
        let points: Vec<(RatVec, RatVec)> = sample_points(face.r, 8, 3)
            .into_iter()
            .flat_map(|rho| sigmas.iter().map(move |sigma| (rho.clone(), sigma.clone())))
            .collect();
        let grid = uniform_grid(100);
        let input = Condition1Input { face, points: &points, families: std::slice::from_ref(&fam), grid: &grid, tol: 1e-12, perturb: None };
        let rep = verify_condition1(flavor, &input).unwrap();
        prop_assert!(rep.pass, "{:?}", rep);
        prop_assert!(rep.samples >= points.len() * 101);
        prop_assert!(points.len() >= 3 || face.r + face.s == 4);
    }

    /// `β_n(∂^E_k(x, y); u)` against the nested concatenation, for arbitrary
    /// weights rather than values of `φ`.
    #[test]
    fn rebracketing_identity(
        (face, fam) in face_with_family(),
        seed in prop::collection::vec(1i64..20, 12),
        t in 0.0f64..1.0,
    ) {
        let FaceIndex { k, r, s } = face;
        let norm = |w: &[i64]| -> Vec<Rational> {
            let total: i64 = w.iter().sum();
            w.iter().map(|&x| rat(x, total)).collect()
        };
        let x = ConcatWeights::new(norm(&seed[..r])).unwrap();
        let y = ConcatWeights::new(norm(&seed[6..6 + s])).unwrap();
        let lhs = beta(&d_e(face, &x, &y).unwrap(), &fam).unwrap();
        let mut args = fam[..k - 1].to_vec();
        args.push(beta(&y, &fam[k - 1..k - 1 + s]).unwrap());
        args.extend_from_slice(&fam[k - 1 + s..]);
        let rhs = beta(&x, &args).unwrap();
        prop_assert!(dist(&lhs.eval(t), &rhs.eval(t)) <= 1e-12);
    }

    #[test]
    fn stable_rebracketing_identity(
        (face, fam) in face_with_family(),
        x in stable_weights(4),
        y in stable_weights(4),
        t in 0.0f64..1.0,
    ) {
        let FaceIndex { k, r, s } = face;
        let shrink = |w: &StableConcatWeights, m: usize| -> StableConcatWeights {
            // fold the surplus entries into the first speed
            let mut r: Vec<Rational> = w.r()[..m].to_vec();
            let eps: Vec<Rational> = w.eps()[..m - 1].to_vec();
            let used: Rational = r.iter().chain(&eps).sum();
            r[0] += int(1) - used;
            StableConcatWeights::new(r, eps).unwrap()
        };
        let (x, y) = (shrink(&x, r), shrink(&y, s));
        let lhs = alpha(&d_d(face, &x, &y).unwrap(), &fam).unwrap();
        let mut args = fam[..k - 1].to_vec();
        args.push(alpha(&y, &fam[k - 1..k - 1 + s]).unwrap());
        args.extend_from_slice(&fam[k - 1 + s..]);
        let rhs = alpha(&x, &args).unwrap();
        prop_assert!(dist(&lhs.eval(t), &rhs.eval(t)) <= 1e-12);
    }

    #[test]
    fn cone_maps_land_in_their_spaces(n in 2usize..=5, idx in 0usize..1000) {
        let grid = grid_points(n, 4);
        let t = &grid[idx % grid.len()];
        let p = phi(n, t).unwrap();
        prop_assert!(ConcatWeights::new(p.r().to_vec()).is_ok());
        let q = psi(n, t).unwrap();
        prop_assert!(StableConcatWeights::new(q.r().to_vec(), q.eps().to_vec()).is_ok());
    }

    #[test]
    fn stable_products_have_smooth_junctions(fam in family(2, 2), eps in prop::sample::select(vec![(1, 10), (1, 5), (1, 3), (1, 2)])) {
        let eps = rat(eps.0, eps.1);
        let out = mu_eps(&eps, &fam[0], &fam[1]).unwrap();
        let e = to_f64(&eps);
        for t0 in [(1.0 - e) / 2.0, 0.5, (1.0 + e) / 2.0] {
            for entry in smoothness_probe(&out, t0, 3, ProbeConfig::default()) {
                prop_assert!(entry.pass, "t0={} {:?}", t0, entry);
            }
        }
    }

    #[test]
    fn plateaus_hold_for_random_weights(w in stable_weights(3), fam in family(3, 2)) {
        let rep = verify_plateaus(&w, &fam, 16, 1e-12).unwrap();
        prop_assert!(rep.pass, "{:?}", rep);
    }
}

#[test]
fn perturbed_phi_is_caught() {
    let nodes = [vec![0.0], vec![1.0], vec![0.5], vec![2.0], vec![-1.0]];
    let fam = bridge_chain(&nodes, &[vec![], vec![vec![1.0]], vec![], vec![vec![-0.5]]], Bump::Exp).unwrap();
    let points = vec![(interior_point(2), interior_point(3))];
    let grid = uniform_grid(100);
    for flavor in [Flavor::Plain, Flavor::Stable] {
        let input = Condition1Input {
            face: FaceIndex::new(2, 2, 3),
            points: &points,
            families: std::slice::from_ref(&fam),
            grid: &grid,
            tol: 1e-12,
            perturb: Some(rat(1, 1000)),
        };
        let rep = verify_condition1(flavor, &input).unwrap();
        assert!(!rep.pass && rep.max_dev > 1e-6, "{rep:?}");
    }
}
