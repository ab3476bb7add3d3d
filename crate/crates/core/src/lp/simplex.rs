//! Dense two-phase primal simplex over exact rationals.
//!
//! Bland's least-index rule picks both the entering column and, among tied
//! ratio-test rows, the leaving variable, so the method cannot cycle.
//! Phase 1 appends one artificial column per row. Those columns are kept in
//! the tableau throughout: they hold the current basis inverse, which is
//! where the dual and Farkas certificates are read from.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::LpError;
use crate::exactmath::Rational;

use super::{LinearProgram, LpResult, Sense};

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    /// Reduced costs, one per column (structural then artificial).
    cost: Vec<BigRational>,
    basis: Vec<usize>,
    structural: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = BigRational::one() / &self.rows[row][col];
        for v in self.rows[row].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.rhs[row] *= &inv;

        let support: Vec<usize> = self.rows[row]
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, _)| j)
            .collect();
        let pivot_row = std::mem::take(&mut self.rows[row]);
        let pivot_rhs = self.rhs[row].clone();

        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_zero() {
                continue;
            }
            let factor = self.rows[i][col].clone();
            for &j in &support {
                let delta = &factor * &pivot_row[j];
                self.rows[i][j] -= delta;
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        if !self.cost[col].is_zero() {
            let factor = self.cost[col].clone();
            for &j in &support {
                let delta = &factor * &pivot_row[j];
                self.cost[j] -= delta;
            }
        }
        self.rows[row] = pivot_row;
        self.basis[row] = col;
    }

    /// Reduced costs for the column costs `c`, given the current basis.
    fn price(&mut self, c: &[BigRational]) {
        let mut cost = c.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            if c[b].is_zero() {
                continue;
            }
            for (j, v) in self.rows[i].iter().enumerate() {
                if !v.is_zero() {
                    cost[j] -= &c[b] * v;
                }
            }
        }
        self.cost = cost;
    }

    /// Runs Bland pivots over columns `0..allowed` until optimal or an
    /// unbounded column appears.
    fn optimize(&mut self, allowed: usize) -> Option<usize> {
        loop {
            let Some(col) = (0..allowed).find(|&j| self.cost[j].is_negative()) else {
                return None;
            };
            let mut best: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return Some(col),
            }
        }
    }

    fn primal(&self) -> Vec<BigRational> {
        let mut x = vec![BigRational::zero(); self.structural];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.structural {
                x[b] = self.rhs[i].clone();
            }
        }
        x
    }

    /// `y_i = art_cost_i - d_(art_i)`: the simplex multipliers of the
    /// sign-normalized system, read off the artificial columns.
    fn multipliers(&self, art_cost: &BigRational) -> Vec<BigRational> {
        (0..self.rows.len())
            .map(|i| art_cost - &self.cost[self.structural + i])
            .collect()
    }
}

pub(super) fn solve(lp: &LinearProgram) -> Result<LpResult, LpError> {
    lp.check_dimensions()?;
    let m = lp.matrix.len();
    let n = lp.objective.len();

    // Normalize to rhs >= 0, remembering the row signs.
    let signs: Vec<bool> = lp.rhs.iter().map(|b| b.is_negative()).collect();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, row) in lp.matrix.iter().enumerate() {
        let mut r: Vec<BigRational> = row
            .iter()
            .map(|v| if signs[i] { -&v.0 } else { v.0.clone() })
            .collect();
        r.extend((0..m).map(|k| if k == i { BigRational::one() } else { BigRational::zero() }));
        rows.push(r);
        rhs.push(lp.rhs[i].0.abs());
    }
    let mut t = Tableau {
        rows,
        rhs,
        cost: Vec::new(),
        basis: (n..n + m).collect(),
        structural: n,
    };

    // Phase 1: minimize the sum of artificials.
    let mut phase1 = vec![BigRational::zero(); n + m];
    phase1[n..].iter_mut().for_each(|c| *c = BigRational::one());
    t.price(&phase1);
    t.optimize(n + m);

    let infeasibility: BigRational = (0..m)
        .filter(|&i| t.basis[i] >= n)
        .map(|i| t.rhs[i].clone())
        .sum();
    if infeasibility.is_positive() {
        // y'A <= 0 and y'b = w > 0 for the normalized system; negate to get
        // y A >= 0, y b < 0 and undo the row sign flips.
        let y = t.multipliers(&BigRational::one());
        let farkas = y
            .into_iter()
            .zip(&signs)
            .map(|(v, &flip)| Rational(if flip { v } else { -v }))
            .collect();
        return Ok(LpResult::Infeasible { farkas });
    }

    // Pivot degenerate artificials out of the basis where possible; rows
    // where that fails are redundant and keep their artificial at zero.
    for i in 0..m {
        if t.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                t.pivot(i, j);
            }
        }
    }

    // Phase 2 minimizes c, or -c for maximization.
    let flip_objective = lp.sense == Sense::Maximize;
    let mut phase2: Vec<BigRational> = lp
        .objective
        .iter()
        .map(|c| if flip_objective { -&c.0 } else { c.0.clone() })
        .collect();
    phase2.extend((0..m).map(|_| BigRational::zero()));
    t.price(&phase2);

    if let Some(col) = t.optimize(n) {
        let mut ray = vec![BigRational::zero(); n];
        ray[col] = BigRational::one();
        for (i, &b) in t.basis.iter().enumerate() {
            if b < n {
                ray[b] = -&t.rows[i][col];
            }
        }
        return Ok(LpResult::Unbounded {
            primal: t.primal().into_iter().map(Rational).collect(),
            ray: ray.into_iter().map(Rational).collect(),
        });
    }

    let primal: Vec<Rational> = t.primal().into_iter().map(Rational).collect();
    let value: Rational = primal.iter().zip(&lp.objective).map(|(x, c)| x * c).sum();
    let dual = t
        .multipliers(&BigRational::zero())
        .into_iter()
        .zip(&signs)
        .map(|(v, &flip)| {
            let v = if flip { -v } else { v };
            Rational(if flip_objective { -v } else { v })
        })
        .collect();
    Ok(LpResult::Optimal { value, primal, dual })
}
