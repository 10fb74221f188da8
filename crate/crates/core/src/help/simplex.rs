//! Dense two-phase primal simplex over exact rationals with Bland's rule.
//! Used only to bound the unknowns of a HeLP system.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum LpOutcome {
    Optimal(BigRational),
    Unbounded,
}

/// `a . x = b` or `a . x >= b` over free variables `x`.
#[derive(Clone, Debug, Default)]
pub(crate) struct LinearProgram {
    pub num_vars: usize,
    pub equalities: Vec<(Vec<BigRational>, BigRational)>,
    pub inequalities: Vec<(Vec<BigRational>, BigRational)>,
}

/// A feasible basis of the standard-form program. Columns are
/// `x+ (k) | x- (k) | slack (one per inequality) | artificial (one per row)`.
#[derive(Clone, Debug)]
pub(crate) struct Tableau {
    num_vars: usize,
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
    first_artificial: usize,
}

impl LinearProgram {
    /// Runs phase one. `None` means the relaxation is infeasible.
    pub fn feasible_basis(&self) -> Option<Tableau> {
        let k = self.num_vars;
        let g = self.inequalities.len();
        let m = self.equalities.len() + g;
        let first_artificial = 2 * k + g;
        let width = first_artificial + m;
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let all = self
            .equalities
            .iter()
            .map(|r| (r, None))
            .chain(self.inequalities.iter().enumerate().map(|(i, r)| (r, Some(i))));
        for (row_index, ((a, b), slack)) in all.enumerate() {
            let mut row = vec![BigRational::zero(); width];
            for (j, c) in a.iter().enumerate() {
                row[j] = c.clone();
                row[k + j] = -c;
            }
            if let Some(s) = slack {
                row[2 * k + s] = -BigRational::one();
            }
            let mut b = b.clone();
            if b.is_negative() {
                for v in row.iter_mut() {
                    *v = -&*v;
                }
                b = -b;
            }
            row[first_artificial + row_index] = BigRational::one();
            rows.push(row);
            rhs.push(b);
        }
        let mut tab = Tableau {
            num_vars: k,
            rows,
            rhs,
            basis: (first_artificial..width).collect(),
            first_artificial,
        };
        let mut cost = vec![BigRational::zero(); width];
        for c in cost.iter_mut().skip(first_artificial) {
            *c = -BigRational::one();
        }
        match tab.run(&cost, width) {
            LpOutcome::Optimal(v) if v.is_zero() => {}
            _ => return None,
        }
        tab.drive_out_artificials();
        Some(tab)
    }
}

impl Tableau {
    fn width(&self) -> usize {
        self.rows.first().map_or(self.first_artificial, Vec::len)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let pv = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &pv;
        }
        self.rhs[r] /= &pv;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let factor = self.rows[i][c].clone();
            for (v, p) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost . x` over columns `< allowed`.
    fn run(&mut self, cost: &[BigRational], allowed: usize) -> LpOutcome {
        loop {
            // Bland: lowest-index column with positive reduced cost enters.
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut reduced = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.rows[i][j].is_zero() {
                        reduced -= &cost[b] * &self.rows[i][j];
                    }
                }
                reduced.is_positive()
            });
            let Some(j) = entering else {
                let value = self
                    .basis
                    .iter()
                    .zip(&self.rhs)
                    .fold(BigRational::zero(), |acc, (&b, r)| acc + &cost[b] * r);
                return LpOutcome::Optimal(value);
            };
            let mut best: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((i, _)) => self.pivot(i, j),
                None => return LpOutcome::Unbounded,
            }
        }
    }

    fn drive_out_artificials(&mut self) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.first_artificial {
                match (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(j) => self.pivot(i, j),
                    None => {
                        // redundant row
                        self.rows.remove(i);
                        self.rhs.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    /// Maximizes `objective . x` starting from this feasible basis.
    pub fn maximize(&self, objective: &[BigRational]) -> LpOutcome {
        let mut tab = self.clone();
        let mut cost = vec![BigRational::zero(); tab.width()];
        for (j, c) in objective.iter().enumerate() {
            cost[j] = c.clone();
            cost[self.num_vars + j] = -c;
        }
        let allowed = tab.first_artificial;
        tab.run(&cost, allowed)
    }

    /// `(min x_i, max x_i)`, `None` on an unbounded side.
    pub fn variable_range(&self, i: usize) -> (Option<BigRational>, Option<BigRational>) {
        let mut unit = vec![BigRational::zero(); self.num_vars];
        unit[i] = BigRational::one();
        let hi = match self.maximize(&unit) {
            LpOutcome::Optimal(v) => Some(v),
            LpOutcome::Unbounded => None,
        };
        unit[i] = -BigRational::one();
        let lo = match self.maximize(&unit) {
            LpOutcome::Optimal(v) => Some(-v),
            LpOutcome::Unbounded => None,
        };
        (lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_frac};

    fn row(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn triangle_ranges() {
        // x >= 0, y >= 0, x + y <= 3/2 (written as -x - y >= -3/2)
        let lp = LinearProgram {
            num_vars: 2,
            equalities: vec![],
            inequalities: vec![
                (row(&[1, 0]), rat(0)),
                (row(&[0, 1]), rat(0)),
                (row(&[-1, -1]), rat_frac(-3, 2)),
            ],
        };
        let tab = lp.feasible_basis().unwrap();
        assert_eq!(tab.variable_range(0), (Some(rat(0)), Some(rat_frac(3, 2))));
        assert_eq!(tab.maximize(&row(&[2, 1])), LpOutcome::Optimal(rat(3)));
    }

    #[test]
    fn equality_and_unbounded() {
        // x + y = 1, x >= 0; y unbounded below
        let lp = LinearProgram {
            num_vars: 2,
            equalities: vec![(row(&[1, 1]), rat(1))],
            inequalities: vec![(row(&[1, 0]), rat(0))],
        };
        let tab = lp.feasible_basis().unwrap();
        assert_eq!(tab.variable_range(1), (None, Some(rat(1))));
        assert_eq!(tab.variable_range(0).0, Some(rat(0)));
    }

    #[test]
    fn infeasible() {
        let lp = LinearProgram {
            num_vars: 1,
            equalities: vec![],
            inequalities: vec![(row(&[1]), rat(2)), (row(&[-1]), rat(-1))],
        };
        assert!(lp.feasible_basis().is_none());
    }

    #[test]
    fn redundant_equalities() {
        let lp = LinearProgram {
            num_vars: 2,
            equalities: vec![(row(&[1, 1]), rat(2)), (row(&[2, 2]), rat(4))],
            inequalities: vec![(row(&[1, 0]), rat(0)), (row(&[0, 1]), rat(0))],
        };
        let tab = lp.feasible_basis().unwrap();
        assert_eq!(tab.variable_range(0), (Some(rat(0)), Some(rat(2))));
    }

    #[test]
    fn zero_constraint_program() {
        let lp = LinearProgram {
            num_vars: 0,
            equalities: vec![(vec![], rat(0))],
            inequalities: vec![],
        };
        assert!(lp.feasible_basis().is_some());
        let bad = LinearProgram {
            num_vars: 0,
            equalities: vec![(vec![], rat(1))],
            inequalities: vec![],
        };
        assert!(bad.feasible_basis().is_none());
    }
}
