//! Bottom-up HeLP over the divisor lattice of the unit order.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;

use super::{build_system, divisors, solve, Constraint, HelpError, PaSolutionSet, PaSystem, PaTuple, PowerScenario};
use crate::cyclo::prime_divisors;
use crate::tables::CharacterTable;

/// Additional constraints appended to every system built for some order.
pub trait ExtraConstraints: Sync {
    fn constraints(&self, table: &CharacterTable, system: &PaSystem) -> Result<Vec<Constraint>, HelpError>;
}

/// Plain HeLP.
pub struct NoExtra;

impl ExtraConstraints for NoExtra {
    fn constraints(&self, _: &CharacterTable, _: &PaSystem) -> Result<Vec<Constraint>, HelpError> {
        Ok(Vec::new())
    }
}

/// Partial augmentations of `u` together with those of all its powers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FullSolution {
    pub top: PaTuple,
    pub scenario: PowerScenario,
}

impl FullSolution {
    pub fn order(&self) -> u64 {
        self.scenario.order
    }

    /// Partial augmentations of `u^d`, `d | order`, `d < order`.
    fn layer(&self, d: u64) -> &PaTuple {
        if d == 1 {
            &self.top
        } else {
            &self.scenario.layers[&d]
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioOutcome {
    pub system: PaSystem,
    pub solutions: PaSolutionSet,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderCheck {
    pub order: u64,
    /// One entry per admissible combination of power layers.
    pub scenarios: Vec<ScenarioOutcome>,
    /// A proper power order for which no unit survived, if any; then
    /// `scenarios` is empty.
    pub blocked_by: Option<u64>,
    pub exhaustive: bool,
}

impl OrderCheck {
    pub fn is_infeasible(&self) -> bool {
        self.scenarios.iter().all(|s| s.solutions.is_empty())
    }

    pub fn full_solutions(&self) -> Vec<FullSolution> {
        let mut out: Vec<FullSolution> = self
            .scenarios
            .iter()
            .flat_map(|s| {
                s.solutions.tuples().into_iter().map(|top| FullSolution {
                    top,
                    scenario: s.system.scenario.clone(),
                })
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn solution_count(&self) -> usize {
        self.scenarios.iter().map(|s| s.solutions.solutions.len()).sum()
    }
}

struct Lattice<'a> {
    table: &'a CharacterTable,
    extra: &'a dyn ExtraConstraints,
    memo: Mutex<HashMap<u64, Arc<OrderCheck>>>,
}

impl Lattice<'_> {
    fn check(&self, n: u64) -> Result<Arc<OrderCheck>, HelpError> {
        if let Some(done) = self.memo.lock().unwrap().get(&n) {
            return Ok(done.clone());
        }
        let result = Arc::new(self.compute(n)?);
        self.memo.lock().unwrap().insert(n, result.clone());
        Ok(result)
    }

    fn compute(&self, n: u64) -> Result<OrderCheck, HelpError> {
        // Combine, prime by prime, full solutions of u^r into scenarios for u.
        let mut partial: Vec<BTreeMap<u64, PaTuple>> = vec![BTreeMap::new()];
        for r in prime_divisors(n as usize) {
            let r = r as u64;
            let lower = self.check(n / r)?;
            let candidates = lower.full_solutions();
            if candidates.is_empty() {
                return Ok(OrderCheck {
                    order: n,
                    scenarios: Vec::new(),
                    blocked_by: Some(n / r),
                    exhaustive: lower.exhaustive,
                });
            }
            let mut next = Vec::new();
            for base in &partial {
                'candidate: for cand in &candidates {
                    let mut merged = base.clone();
                    for e in divisors(n / r) {
                        if e == n / r {
                            continue;
                        }
                        let tuple = cand.layer(e);
                        match merged.get(&(r * e)) {
                            Some(existing) if existing != tuple => continue 'candidate,
                            Some(_) => {}
                            None => {
                                merged.insert(r * e, tuple.clone());
                            }
                        }
                    }
                    next.push(merged);
                }
            }
            partial = next;
        }
        partial.sort();
        partial.dedup();
        let scenarios: Vec<PowerScenario> = partial
            .into_iter()
            .map(|layers| PowerScenario { order: n, layers })
            .collect();
        let outcomes = scenarios
            .par_iter()
            .map(|scenario| {
                let mut system = build_system(self.table, n, scenario)?;
                let extra = self.extra.constraints(self.table, &system)?;
                system.add_constraints(extra);
                let solutions = solve(&system)?;
                Ok(ScenarioOutcome { system, solutions })
            })
            .collect::<Result<Vec<_>, HelpError>>()?;
        let exhaustive = outcomes.iter().all(|o| o.solutions.exhaustive);
        Ok(OrderCheck {
            order: n,
            scenarios: outcomes,
            blocked_by: None,
            exhaustive,
        })
    }
}

/// Runs HeLP for a unit of order `n`, solving every proper power layer
/// first and then the top layer once per consistent combination of layers.
pub fn check_order(
    table: &CharacterTable,
    n: u64,
    extra: &dyn ExtraConstraints,
) -> Result<OrderCheck, HelpError> {
    if n == 0 {
        return Err(HelpError::ZeroOrder);
    }
    let lattice = Lattice {
        table,
        extra,
        memo: Mutex::new(HashMap::new()),
    };
    Ok((*lattice.check(n)?).clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables::test_tables::cyclic;

    #[test]
    fn order_one_is_the_identity() {
        let c3 = cyclic(3);
        let check = check_order(&c3, 1, &NoExtra).unwrap();
        assert_eq!(check.full_solutions().len(), 1);
        assert_eq!(check.full_solutions()[0].top, PaTuple::indicator(0));
    }

    #[test]
    fn abelian_groups_have_only_trivial_units() {
        // V(ZA) = +-A for abelian A; normalized torsion units are group elements
        let c6 = cyclic(6);
        let check = check_order(&c6, 6, &NoExtra).unwrap();
        let tops: Vec<PaTuple> = check.full_solutions().into_iter().map(|s| s.top).collect();
        assert_eq!(tops, vec![PaTuple::indicator(1), PaTuple::indicator(5)]);
        assert!(check.exhaustive);
    }

    #[test]
    fn missing_order_is_infeasible() {
        let c3 = cyclic(3);
        let check = check_order(&c3, 2, &NoExtra).unwrap();
        assert!(check.is_infeasible());
        let check = check_order(&c3, 6, &NoExtra).unwrap();
        assert!(check.is_infeasible());
        assert_eq!(check.blocked_by, Some(2));
    }
}
