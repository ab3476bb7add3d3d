//! `P(N = 1)` along `p = c/n`, independent versus pairwise-minimal.

use std::fmt::Write as _;

use serde::Serialize;

use crate::bounds::{independent_exactly_one, lower_bound_exactly_one, BoundInput};
use crate::error::ParameterError;
use crate::exactmath::{ratio, Rational};

pub const DEFAULT_N_MIN: u32 = 3;
pub const DEFAULT_N_MAX: u32 = 40;

pub fn default_cs() -> Vec<Rational> {
    vec![ratio(1, 2), ratio(9, 10), Rational::one(), ratio(11, 10)]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FigureRow {
    pub n: u32,
    pub c: Rational,
    pub p: Rational,
    pub independent: Rational,
    pub pairwise_min: Rational,
}

/// Rows ordered by `c` (in the given order), then by increasing `n`.
pub fn figure_rows(n_min: u32, n_max: u32, cs: &[Rational]) -> Result<Vec<FigureRow>, ParameterError> {
    if n_min < 1 {
        return Err(ParameterError::TooFewEvents { n: n_min, min: 1 });
    }
    let mut rows = Vec::new();
    for c in cs {
        for n in n_min..=n_max {
            let p = c / Rational::from(n);
            let input = BoundInput::new(n, p.clone())?;
            rows.push(FigureRow {
                n,
                c: c.clone(),
                independent: independent_exactly_one(&input),
                pairwise_min: lower_bound_exactly_one(&input),
                p,
            });
        }
    }
    Ok(rows)
}

pub const CSV_HEADER: &str = "n,c,p,independent,pairwise_min,independent_decimal,pairwise_min_decimal";

/// CSV with exact columns followed by decimal renderings at `digits` places.
pub fn to_csv(rows: &[FigureRow], digits: usize) -> String {
    let mut out = String::with_capacity(rows.len() * 64);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.n,
            row.c,
            row.p,
            row.independent,
            row.pairwise_min,
            row.independent.to_decimal(digits),
            row.pairwise_min.to_decimal(digits)
        )
        .expect("writing to a String");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid() {
        let rows = figure_rows(DEFAULT_N_MIN, DEFAULT_N_MAX, &default_cs()).unwrap();
        assert_eq!(rows.len(), 4 * 38);
        let row = rows.iter().find(|r| r.n == 10 && r.c == Rational::one()).unwrap();
        assert_eq!(row.pairwise_min, ratio(1, 10));
        let row = rows.iter().find(|r| r.n == 3 && r.c == ratio(11, 10)).unwrap();
        assert_eq!(row.pairwise_min, ratio(22, 75));
        for row in rows.iter().filter(|r| r.c == ratio(11, 10)) {
            assert_eq!(row.pairwise_min.is_zero(), row.n >= 11, "n={}", row.n);
        }
    }

    #[test]
    fn rejects_p_above_one() {
        assert!(figure_rows(1, 5, &[ratio(11, 10)]).is_err());
        assert!(figure_rows(0, 5, &[ratio(1, 2)]).is_err());
    }

    #[test]
    fn csv_layout() {
        let rows = figure_rows(3, 3, &[Rational::one()]).unwrap();
        let csv = to_csv(&rows, 4);
        assert_eq!(csv, format!("{CSV_HEADER}\n3,1,1/3,4/9,1/3,0.4444,0.3333\n"));
    }
}
