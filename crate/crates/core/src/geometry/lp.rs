//! Dense two-phase simplex over exact rationals, with Bland's rule so that
//! degenerate problems terminate.

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rational, x: Vec<Rational> },
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].recip();
        for x in self.rows[row].iter_mut() {
            *x *= &inv;
        }
        self.rhs[row] *= &inv;
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_zero() {
                continue;
            }
            let factor = self.rows[i][col].clone();
            for j in 0..self.rows[i].len() {
                if !self.rows[row][j].is_zero() {
                    let delta = &self.rows[row][j] * &factor;
                    self.rows[i][j] -= delta;
                }
            }
            let delta = &self.rhs[row] * &factor;
            self.rhs[i] -= delta;
        }
        self.basis[row] = col;
    }

    /// Maximizes `objective` over columns `< active`. Returns false when
    /// unbounded.
    fn optimize(&mut self, objective: &[Rational], active: usize) -> bool {
        loop {
            let entering = (0..active).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let reduced = self.basis.iter().zip(&self.rows).fold(objective[j].clone(), |acc, (&b, row)| acc - &objective[b] * &row[j]);
                reduced.is_positive()
            });
            let Some(col) = entering else { return true };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][col].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.rows[i][col];
                let better = match &leave {
                    None => true,
                    Some((best, r)) => ratio < *r || (ratio == *r && self.basis[i] < self.basis[*best]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }

    fn value(&self, objective: &[Rational]) -> Rational {
        self.basis.iter().zip(&self.rhs).map(|(&b, r)| &objective[b] * r).sum()
    }

    fn solution(&self, nvars: usize) -> Vec<Rational> {
        let mut x = alloc::vec![Rational::zero(); nvars];
        for (&b, r) in self.basis.iter().zip(&self.rhs) {
            if b < nvars {
                x[b] = r.clone();
            }
        }
        x
    }
}

/// Phase one: a tableau whose basis is feasible for `a x = b, x >= 0`, or
/// `None` if the system is infeasible. Artificial columns are removed.
fn phase_one(a: &[Vec<Rational>], b: &[Rational]) -> Option<Tableau> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut r: Vec<Rational> = row.iter().map(|x| if flip { -x.clone() } else { x.clone() }).collect();
        r.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
        rows.push(r);
        rhs.push(if flip { -bi.clone() } else { bi.clone() });
    }
    let mut t = Tableau { rows, rhs, basis: (n..n + m).collect() };
    let mut objective = alloc::vec![Rational::zero(); n + m];
    for o in &mut objective[n..] {
        *o = -Rational::one();
    }
    t.optimize(&objective, n + m);
    if !t.value(&objective).is_zero() {
        return None;
    }
    // drive remaining artificials out of the basis; rows that cannot pivot
    // are redundant
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.rhs.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    for row in &mut t.rows {
        row.truncate(n);
    }
    Some(t)
}

/// A point of `{x >= 0 : a x = b}`, if the set is nonempty.
pub fn find_feasible(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.first().map_or(0, Vec::len);
    phase_one(a, b).map(|t| t.solution(n))
}

/// Maximizes `c . x` subject to `a x = b`, `x >= 0`.
pub fn maximize(c: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> LpOutcome {
    let n = c.len();
    let Some(mut t) = phase_one(a, b) else {
        return LpOutcome::Infeasible;
    };
    if !t.optimize(c, n) {
        return LpOutcome::Unbounded;
    }
    LpOutcome::Optimal { value: t.value(c), x: t.solution(n) }
}
