//! Brute-force LP oracle: enumerate every basic solution of `Ax = b, x >= 0`
//! and keep the best feasible one. Exponential; only for tiny programs.

#![allow(dead_code)]

use itertools::Itertools;
use onebound_core::lp::{LinearProgram, Sense};
use onebound_core::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    Infeasible,
    Optimal(Rational),
}

/// Row-reduces `[A | b]`, returning the independent rows, or `None` when the
/// system is inconsistent.
fn independent_rows(a: &[Vec<Rational>], b: &[Rational]) -> Option<(Vec<Vec<Rational>>, Vec<Rational>)> {
    let mut rows: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut r = r.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let inv = Rational::one() / &rows[rank][c];
        rows[rank] = rows[rank].iter().map(|v| v * &inv).collect();
        for i in 0..rows.len() {
            if i != rank && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot = rows[rank].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot) {
                    *x -= &(&f * y);
                }
            }
        }
        rank += 1;
    }
    if rows[rank..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    rows.truncate(rank);
    let rhs = rows.iter_mut().map(|r| r.pop().unwrap()).collect();
    Some((rows, rhs))
}

/// Solves the square system `B x = b` by Gauss–Jordan; `None` if singular.
fn solve_square(mut m: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let k = b.len();
    for c in 0..k {
        let p = (c..k).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        b.swap(c, p);
        let inv = Rational::one() / &m[c][c];
        m[c] = m[c].iter().map(|v| v * &inv).collect();
        b[c] = &b[c] * &inv;
        for i in 0..k {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let prow = m[c].clone();
                for (x, y) in m[i].iter_mut().zip(&prow) {
                    *x -= &(&f * y);
                }
                let db = &f * &b[c];
                b[i] -= &db;
            }
        }
    }
    Some(b)
}

/// Every basic feasible solution of the program.
pub fn vertices(lp: &LinearProgram) -> Vec<Vec<Rational>> {
    let n = lp.num_vars();
    let Some((rows, rhs)) = independent_rows(&lp.matrix, &lp.rhs) else { return vec![] };
    let r = rows.len();
    let mut out = Vec::new();
    for cols in (0..n).combinations(r) {
        let square = rows.iter().map(|row| cols.iter().map(|&j| row[j].clone()).collect()).collect();
        let Some(xb) = solve_square(square, rhs.clone()) else { continue };
        if xb.iter().any(Rational::is_negative) {
            continue;
        }
        let mut x = vec![Rational::zero(); n];
        for (&j, v) in cols.iter().zip(xb) {
            x[j] = v;
        }
        out.push(x);
    }
    out
}

/// Optimum over the vertex set. Only valid for bounded programs.
pub fn vertex_optimum(lp: &LinearProgram) -> OracleOutcome {
    let values = vertices(lp)
        .into_iter()
        .map(|x| x.iter().zip(&lp.objective).map(|(a, c)| a * c).sum::<Rational>());
    let best = match lp.sense {
        Sense::Minimize => values.min(),
        Sense::Maximize => values.max(),
    };
    best.map_or(OracleOutcome::Infeasible, OracleOutcome::Optimal)
}
