//! Seeded test paths: polynomial coefficients uniform in `[-1, 1]`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stasheff_core::paths::{bridge_chain, make_path, Bump, Curve, Functional, SmoothPath};

pub struct PathFactory {
    rng: ChaCha8Rng,
    d: usize,
    bump: Bump,
}

impl PathFactory {
    pub fn new(seed: u64, d: usize) -> Self {
        PathFactory { rng: ChaCha8Rng::seed_from_u64(seed), d, bump: Bump::Exp }
    }

    pub fn with_bump(mut self, bump: Bump) -> Self {
        self.bump = bump;
        self
    }

    fn coeffs(&mut self) -> Vec<f64> {
        (0..self.d).map(|_| self.rng.gen_range(-1.0..=1.0)).collect()
    }

    fn poly(&mut self, max_degree: usize) -> Vec<Vec<f64>> {
        let len = self.rng.gen_range(0..=max_degree + 1);
        (0..len).map(|_| self.coeffs()).collect()
    }

    /// `n` composable bridges through random nodes.
    pub fn chain(&mut self, n: usize) -> Vec<SmoothPath> {
        let nodes: Vec<Vec<f64>> = (0..=n).map(|_| self.coeffs()).collect();
        let wiggles: Vec<Vec<Vec<f64>>> = (0..n).map(|_| self.poly(2)).collect();
        bridge_chain(&nodes, &wiggles, self.bump).expect("nodes and wiggles match")
    }

    /// A bridge between two distinct random points.
    pub fn nonconstant(&mut self) -> SmoothPath {
        let a = self.coeffs();
        let mut b = self.coeffs();
        b[0] = if a[0] < 0.0 { a[0] + 1.0 } else { a[0] - 1.0 };
        let q = self.poly(2);
        SmoothPath::from_curve(Curve::Bridge { a, b, q }, self.bump).expect("dimensions agree")
    }

    /// A random curve of each kind in turn.
    pub fn curve(&mut self, i: usize) -> Curve {
        match i % 4 {
            0 => Curve::Poly {
                coeffs: {
                    let mut c = self.poly(3);
                    c.push(self.coeffs());
                    c
                },
            },
            1 => Curve::Trig { offset: self.coeffs(), cos: self.coeffs(), sin: self.coeffs(), freq: self.rng.gen_range(1.0..=3.0) },
            2 => Curve::Bridge { a: self.coeffs(), b: self.coeffs(), q: self.poly(2) },
            _ => Curve::Const { value: self.coeffs() },
        }
    }

    pub fn path(&mut self, i: usize) -> SmoothPath {
        make_path(self.curve(i)).expect("dimensions agree")
    }

    /// A polynomial `R^d → R` of degree at most 3.
    pub fn functional(&mut self) -> Functional {
        let terms = (0..3)
            .map(|_| {
                let mut exps = vec![0u32; self.d];
                let degree = self.rng.gen_range(0..=3);
                for _ in 0..degree {
                    let i = self.rng.gen_range(0..self.d);
                    exps[i] += 1;
                }
                (self.rng.gen_range(-1.0..=1.0), exps)
            })
            .collect();
        Functional { terms }
    }
}
