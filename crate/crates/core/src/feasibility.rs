//! Exact feasibility of rational linear systems `A x = b, C x <= d` by
//! Gaussian elimination of the equalities followed by Fourier–Motzkin
//! elimination of the remaining variables.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

type Row = (Vec<BigRational>, BigRational);

#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    vars: usize,
    equalities: Vec<Row>,
    inequalities: Vec<Row>,
}

pub fn rational(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

impl LinearSystem {
    pub fn new(vars: usize) -> Self {
        Self {
            vars,
            ..Self::default()
        }
    }

    /// Adds `coeffs . x = rhs`.
    pub fn equal(&mut self, coeffs: Vec<BigRational>, rhs: BigRational) {
        assert_eq!(coeffs.len(), self.vars);
        self.equalities.push((coeffs, rhs));
    }

    /// Adds `coeffs . x <= rhs`.
    pub fn at_most(&mut self, coeffs: Vec<BigRational>, rhs: BigRational) {
        assert_eq!(coeffs.len(), self.vars);
        self.inequalities.push((coeffs, rhs));
    }

    /// Adds `coeffs . x >= rhs`.
    pub fn at_least(&mut self, coeffs: Vec<BigRational>, rhs: BigRational) {
        self.at_most(coeffs.into_iter().map(|c| -c).collect(), -rhs);
    }

    /// Adds `lo <= x_var <= hi`.
    pub fn bound(&mut self, var: usize, lo: BigRational, hi: BigRational) {
        let mut e = vec![BigRational::zero(); self.vars];
        e[var] = BigRational::from_integer(1.into());
        self.at_least(e.clone(), lo);
        self.at_most(e, hi);
    }

    pub fn is_feasible(&self) -> bool {
        let mut eqs = self.equalities.clone();
        let mut ineqs = self.inequalities.clone();
        let mut eliminated = vec![false; self.vars];

        while let Some((coeffs, rhs)) = eqs.pop() {
            let Some(p) = coeffs.iter().position(|c| !c.is_zero()) else {
                if !rhs.is_zero() {
                    return false;
                }
                continue;
            };
            for row in eqs.iter_mut().chain(ineqs.iter_mut()) {
                if row.0[p].is_zero() {
                    continue;
                }
                let f = &row.0[p] / &coeffs[p];
                for (r, c) in row.0.iter_mut().zip(&coeffs) {
                    *r -= &f * c;
                }
                row.1 -= &f * &rhs;
            }
            eliminated[p] = true;
        }

        let mut current: BTreeSet<Row> = ineqs.into_iter().map(normalize).collect();
        for var in (0..self.vars).filter(|&v| !eliminated[v]) {
            let mut next = BTreeSet::new();
            let mut upper = Vec::new();
            let mut lower = Vec::new();
            for row in current {
                if row.0[var].is_positive() {
                    upper.push(row);
                } else if row.0[var].is_negative() {
                    lower.push(row);
                } else {
                    next.insert(row);
                }
            }
            for (ua, ub) in &upper {
                for (la, lb) in &lower {
                    let su = ua[var].abs();
                    let sl = la[var].abs();
                    let coeffs: Vec<BigRational> =
                        ua.iter().zip(la).map(|(x, y)| x / &su + y / &sl).collect();
                    let rhs = ub / &su + lb / &sl;
                    next.insert(normalize((coeffs, rhs)));
                }
            }
            current = next;
        }
        current.iter().all(|(_, rhs)| !rhs.is_negative())
    }
}

/// Scales a constraint so its first nonzero coefficient has absolute value 1.
fn normalize((coeffs, rhs): Row) -> Row {
    match coeffs.iter().find(|c| !c.is_zero()) {
        Some(lead) => {
            let s = lead.abs();
            (coeffs.iter().map(|c| c / &s).collect(), rhs / s)
        }
        None => (coeffs, rhs),
    }
}
