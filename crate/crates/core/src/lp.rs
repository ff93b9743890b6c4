//! Exact feasibility of `A x = b, x ≥ 0` over the rationals.
//!
//! Phase-one simplex on a dense tableau: one artificial variable per row,
//! minimise their sum, Bland's rule for both the entering and the leaving
//! variable. The pivot sequence depends only on column order, so repeated
//! solves return identical vertices.
//!
//! When the optimum is positive the final duals give a Farkas certificate
//! `y` with `yᵀA ≤ 0` and `yᵀb > 0`, which proves infeasibility on its own.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    /// A basic feasible solution, one entry per column of `A`.
    Feasible(Vec<Rational>),
    /// Farkas vector, one entry per row of `A`.
    Infeasible(Vec<Rational>),
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible(_))
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    cost: Vec<Rational>,
    objective: Rational,
    basis: Vec<usize>,
}

impl Tableau {
    fn entering(&self) -> Option<usize> {
        self.cost.iter().position(|c| c.is_negative())
    }

    fn leaving(&self, col: usize) -> Option<usize> {
        let mut best: Option<(usize, Rational)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            if !row[col].is_positive() {
                continue;
            }
            let ratio = &self.rhs[r] / &row[col];
            let better = match &best {
                None => true,
                Some((b, best_ratio)) => {
                    ratio < *best_ratio || (ratio == *best_ratio && self.basis[r] < self.basis[*b])
                }
            };
            if better {
                best = Some((r, ratio));
            }
        }
        best.map(|(r, _)| r)
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let inv = self.rows[r][col].recip();
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        self.rhs[r] *= &inv;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        let factor = self.cost[col].clone();
        if !factor.is_zero() {
            for (x, p) in self.cost.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
            self.objective += &factor * &pivot_rhs;
        }
        self.basis[r] = col;
    }
}

/// Decides whether some `x ≥ 0` satisfies `a x = b` exactly.
pub fn solve_feasibility(a: &[Vec<Rational>], b: &[Rational]) -> Result<LpOutcome> {
    let m = a.len();
    if b.len() != m {
        return Err(Error::DimensionMismatch { expected: m, actual: b.len() });
    }
    let n = a.first().map_or(0, Vec::len);
    if let Some(row) = a.iter().find(|row| row.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, actual: row.len() });
    }

    // rows with negative right-hand side are negated so artificials start feasible
    let signs: Vec<bool> = b.iter().map(|x| x.is_negative()).collect();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let mut full: Vec<Rational> = if signs[i] { row.iter().map(|x| -x).collect() } else { row.clone() };
        full.extend((0..m).map(|k| if k == i { Rational::from_integer(1.into()) } else { Rational::zero() }));
        rows.push(full);
        rhs.push(if signs[i] { -bi } else { bi.clone() });
    }
    let mut cost = vec![Rational::zero(); n + m];
    for row in &rows {
        for (c, x) in cost[..n].iter_mut().zip(row) {
            *c -= x;
        }
    }
    let objective = rhs.iter().fold(Rational::zero(), |acc, x| acc + x);
    let mut t = Tableau { rows, rhs, cost, objective, basis: (n..n + m).collect() };

    while let Some(col) = t.entering() {
        // phase one is bounded below by zero, so a leaving row always exists
        let r = t.leaving(col).expect("phase-one objective is bounded");
        t.pivot(r, col);
    }

    if t.objective.is_zero() {
        let mut x = vec![Rational::zero(); n];
        for (r, &var) in t.basis.iter().enumerate() {
            if var < n {
                x[var] = t.rhs[r].clone();
            }
        }
        Ok(LpOutcome::Feasible(x))
    } else {
        // reduced cost of artificial i is 1 - y_i
        let one = Rational::from_integer(1.into());
        let y = (0..m)
            .map(|i| {
                let yi = &one - &t.cost[n + i];
                if signs[i] {
                    -yi
                } else {
                    yi
                }
            })
            .collect();
        Ok(LpOutcome::Infeasible(y))
    }
}

/// Checks `yᵀA ≤ 0` and `yᵀb > 0`.
pub fn is_farkas_certificate(a: &[Vec<Rational>], b: &[Rational], y: &[Rational]) -> bool {
    if y.len() != a.len() || b.len() != a.len() {
        return false;
    }
    let n = a.first().map_or(0, Vec::len);
    let columns_ok = (0..n).all(|j| {
        let dot = a.iter().zip(y).fold(Rational::zero(), |acc, (row, yi)| acc + &row[j] * yi);
        !dot.is_positive()
    });
    let yb = b.iter().zip(y).fold(Rational::zero(), |acc, (bi, yi)| acc + bi * yi);
    columns_ok && yb.is_positive()
}
