//! Exact Fourier–Motzkin elimination over the rationals.
//!
//! A system is a list of rows `a·x ≥ b`. Rows are normalised (leading nonzero
//! coefficient scaled to ±1) and deduplicated after every elimination step,
//! keeping only the tightest right-hand side per direction.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub(crate) type Row = (Vec<BigRational>, BigRational);

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Interval {
    pub lower: Option<BigRational>,
    pub upper: Option<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Projection {
    Infeasible,
    Interval(Interval),
}

fn normalize(rows: Vec<Row>) -> Result<Vec<Row>, ()> {
    let mut tight: BTreeMap<Vec<BigRational>, BigRational> = BTreeMap::new();
    for (coeffs, rhs) in rows {
        let lead = coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs());
        let Some(lead) = lead else {
            // 0 ≥ rhs
            if rhs.is_positive() {
                return Err(());
            }
            continue;
        };
        let coeffs: Vec<BigRational> = coeffs.iter().map(|c| c / &lead).collect();
        let rhs = rhs / &lead;
        match tight.get_mut(&coeffs) {
            Some(existing) if *existing >= rhs => {}
            Some(existing) => *existing = rhs,
            None => {
                tight.insert(coeffs, rhs);
            }
        }
    }
    Ok(tight.into_iter().collect())
}

fn eliminate(rows: Vec<Row>, var: usize) -> Result<Vec<Row>, ()> {
    let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
    for row in rows {
        if row.0[var].is_positive() {
            pos.push(row);
        } else if row.0[var].is_negative() {
            neg.push(row);
        } else {
            rest.push(row);
        }
    }
    for (pa, pb) in &pos {
        for (na, nb) in &neg {
            // scale so the eliminated coefficients cancel
            let (sp, sn) = (-&na[var], pa[var].clone());
            let coeffs = pa.iter().zip(na).map(|(x, y)| x * &sp + y * &sn).collect();
            rest.push((coeffs, pb * &sp + nb * &sn));
        }
    }
    normalize(rest)
}

/// Exact range of coordinate `keep` over the solution set.
pub(crate) fn project(rows: &[Row], keep: usize) -> Projection {
    let dim = rows.first().map_or(0, |r| r.0.len());
    let Ok(mut current) = normalize(rows.to_vec()) else {
        return Projection::Infeasible;
    };
    for var in (0..dim).filter(|&v| v != keep) {
        match eliminate(current, var) {
            Ok(next) => current = next,
            Err(()) => return Projection::Infeasible,
        }
    }
    let mut lower: Option<BigRational> = None;
    let mut upper: Option<BigRational> = None;
    for (coeffs, rhs) in current {
        let a = &coeffs[keep];
        let bound = &rhs / a;
        if a.is_positive() {
            if lower.as_ref().is_none_or(|l| bound > *l) {
                lower = Some(bound);
            }
        } else if upper.as_ref().is_none_or(|u| bound < *u) {
            upper = Some(bound);
        }
    }
    if let (Some(l), Some(u)) = (&lower, &upper) {
        if l > u {
            return Projection::Infeasible;
        }
    }
    Projection::Interval(Interval { lower, upper })
}

pub(crate) fn is_feasible(rows: &[Row]) -> bool {
    let dim = rows.first().map_or(0, |r| r.0.len());
    if dim == 0 {
        return rows.iter().all(|(_, b)| !b.is_positive());
    }
    !matches!(project(rows, 0), Projection::Infeasible)
}
