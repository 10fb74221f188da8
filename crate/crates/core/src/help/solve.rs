//! Exhaustive integer enumeration of a [`PaSystem`].
//!
//! Each unknown is first bounded by exact rational optimization over the
//! equality and inequality constraints. The resulting box is then searched
//! depth first with bounds propagation; congruences are checked as soon as
//! all of their unknowns are fixed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::simplex::LinearProgram;
use super::{HelpError, PaSystem, PaTuple, Relation};
use crate::rational::{ceil_i64, denominator_lcm, floor_i64};

/// Integer bounds on every unknown, or proof that the relaxation is empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bounds {
    RelaxationInfeasible,
    Box(Vec<(i64, i64)>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PaSolutionSet {
    /// Class indices of the unknowns, matching each solution vector.
    pub variables: Vec<usize>,
    /// Lexicographically sorted, duplicate free.
    pub solutions: Vec<Vec<i64>>,
    /// True when the whole bounded region was searched.
    pub exhaustive: bool,
    pub bounds: Bounds,
}

impl PaSolutionSet {
    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn tuples(&self) -> Vec<PaTuple> {
        self.solutions
            .iter()
            .map(|s| PaTuple::from_assignment(&self.variables, s))
            .collect()
    }
}

/// Bounds every unknown by minimizing and maximizing it over the linear
/// relaxation (congruences dropped).
pub fn derive_bounds(system: &PaSystem) -> Result<Bounds, HelpError> {
    let k = system.variables.len();
    let mut lp = LinearProgram {
        num_vars: k,
        ..Default::default()
    };
    for c in &system.constraints {
        let row = (c.form.coeffs.clone(), -c.form.constant.clone());
        match c.relation {
            Relation::Eq => lp.equalities.push(row),
            Relation::Ge => lp.inequalities.push(row),
            Relation::Congruent(_) => {}
        }
    }
    let Some(basis) = lp.feasible_basis() else {
        return Ok(Bounds::RelaxationInfeasible);
    };
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        match basis.variable_range(i) {
            (Some(lo), Some(hi)) => {
                let lo = ceil_i64(&lo).ok_or(HelpError::Overflow)?;
                let hi = floor_i64(&hi).ok_or(HelpError::Overflow)?;
                out.push((lo, hi));
            }
            _ => return Err(HelpError::Unbounded { variable: system.variables[i] }),
        }
    }
    Ok(Bounds::Box(out))
}

#[derive(Clone, Copy, Debug)]
enum Kind {
    Eq,
    Ge,
    Mod(i128),
}

#[derive(Clone, Debug)]
struct IntConstraint {
    coeffs: Vec<i128>,
    constant: i128,
    kind: Kind,
}

fn to_i128(x: &BigInt) -> Result<i128, HelpError> {
    x.to_i128().ok_or(HelpError::Overflow)
}

fn integerize(system: &PaSystem) -> Result<Vec<IntConstraint>, HelpError> {
    system
        .constraints
        .iter()
        .map(|c| {
            let scale = denominator_lcm(c.form.coeffs.iter().chain(std::iter::once(&c.form.constant)));
            let scale_r = BigRational::from_integer(scale.clone());
            let scaled = |r: &BigRational| to_i128((r * &scale_r).numer());
            let kind = match &c.relation {
                Relation::Eq => Kind::Eq,
                Relation::Ge => Kind::Ge,
                Relation::Congruent(m) => Kind::Mod(to_i128(&(m * &scale))?.abs()),
            };
            Ok(IntConstraint {
                coeffs: c.form.coeffs.iter().map(scaled).collect::<Result<_, _>>()?,
                constant: scaled(&c.form.constant)?,
                kind,
            })
        })
        .collect()
}

struct Search<'a> {
    constraints: &'a [IntConstraint],
}

impl Search<'_> {
    /// Tightens `domains` against `sum a_i x_i + c >= 0`. Returns false on a wipe-out.
    fn tighten(coeffs: &[i128], constant: i128, domains: &mut [(i64, i64)], changed: &mut bool) -> bool {
        let term_max = |a: i128, (lo, hi): (i64, i64)| (a * lo as i128).max(a * hi as i128);
        let total: i128 = coeffs
            .iter()
            .zip(domains.iter())
            .map(|(&a, &d)| term_max(a, d))
            .sum::<i128>()
            + constant;
        if total < 0 {
            return false;
        }
        for j in 0..coeffs.len() {
            let a = coeffs[j];
            if a == 0 {
                continue;
            }
            // a x_j >= -(total - term_max_j)
            let need = -(total - term_max(a, domains[j]));
            let (lo, hi) = domains[j];
            if a > 0 {
                let bound = Integer::div_ceil(&need, &a);
                if bound > lo as i128 {
                    if bound > hi as i128 {
                        return false;
                    }
                    domains[j].0 = bound as i64;
                    *changed = true;
                }
            } else {
                // dividing by a < 0 flips the inequality
                let bound = Integer::div_floor(&need, &a);
                if bound < hi as i128 {
                    if bound < lo as i128 {
                        return false;
                    }
                    domains[j].1 = bound as i64;
                    *changed = true;
                }
            }
        }
        true
    }

    fn propagate(&self, domains: &mut [(i64, i64)]) -> bool {
        loop {
            let mut changed = false;
            for c in self.constraints {
                let ok = match c.kind {
                    Kind::Ge => Self::tighten(&c.coeffs, c.constant, domains, &mut changed),
                    Kind::Eq => {
                        let neg: Vec<i128> = c.coeffs.iter().map(|a| -a).collect();
                        Self::tighten(&c.coeffs, c.constant, domains, &mut changed)
                            && Self::tighten(&neg, -c.constant, domains, &mut changed)
                    }
                    Kind::Mod(_) => true,
                };
                if !ok {
                    return false;
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn congruences_hold(&self, domains: &[(i64, i64)]) -> bool {
        self.constraints.iter().all(|c| {
            let Kind::Mod(m) = c.kind else { return true };
            let mut value = c.constant;
            for (&a, &(lo, hi)) in c.coeffs.iter().zip(domains) {
                if a != 0 {
                    if lo != hi {
                        return true;
                    }
                    value += a * lo as i128;
                }
            }
            value.rem_euclid(m) == 0
        })
    }

    fn satisfied(&self, values: &[i64]) -> bool {
        self.constraints.iter().all(|c| {
            let v = c.constant
                + c.coeffs
                    .iter()
                    .zip(values)
                    .map(|(&a, &x)| a * x as i128)
                    .sum::<i128>();
            match c.kind {
                Kind::Eq => v == 0,
                Kind::Ge => v >= 0,
                Kind::Mod(m) => v.rem_euclid(m) == 0,
            }
        })
    }

    fn run(&self, mut domains: Vec<(i64, i64)>, out: &mut Vec<Vec<i64>>) {
        if !self.propagate(&mut domains) || !self.congruences_hold(&domains) {
            return;
        }
        match domains.iter().position(|&(lo, hi)| lo != hi) {
            None => {
                let values: Vec<i64> = domains.iter().map(|d| d.0).collect();
                if self.satisfied(&values) {
                    out.push(values);
                }
            }
            Some(j) => {
                let (lo, hi) = domains[j];
                for v in lo..=hi {
                    let mut next = domains.clone();
                    next[j] = (v, v);
                    self.run(next, out);
                }
            }
        }
    }
}

/// Enumerates every integer point of `system`.
pub fn solve(system: &PaSystem) -> Result<PaSolutionSet, HelpError> {
    let bounds = derive_bounds(system)?;
    let mut solutions = Vec::new();
    if let Bounds::Box(domains) = &bounds {
        let constraints = integerize(system)?;
        if domains.iter().all(|&(lo, hi)| lo <= hi) {
            Search { constraints: &constraints }.run(domains.clone(), &mut solutions);
        }
    }
    solutions.sort();
    solutions.dedup();
    debug_assert!(solutions.iter().all(|s| system.is_satisfied_by(s)));
    Ok(PaSolutionSet {
        variables: system.variables.clone(),
        solutions,
        exhaustive: true,
        bounds,
    })
}
