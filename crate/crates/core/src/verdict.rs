//! Per-edge verdicts and the Prime Graph Question report.

use rayon::prelude::*;
use serde::Serialize;

use crate::help::{check_order, ExtraConstraints, OrderCheck};
use crate::tables::{CharacterTable, PrimeGraph};
use crate::tree::{apply_criterion, line_candidates, Combined, CriterionError, CriterionOutcome, CriterionVerdict};
use crate::tree::{BrauerLine, LineInequalities};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitStatus {
    EdgeExists,
    ExcludedByCriterion,
    ExcludedByHelp,
    Undecided,
}

impl UnitStatus {
    pub fn is_excluded(self) -> bool {
        matches!(self, UnitStatus::ExcludedByCriterion | UnitStatus::ExcludedByHelp)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            UnitStatus::EdgeExists => "edge_exists",
            UnitStatus::ExcludedByCriterion => "excluded_by_criterion",
            UnitStatus::ExcludedByHelp => "excluded_by_help",
            UnitStatus::Undecided => "undecided",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CriterionWitness {
    pub line: BrauerLine,
    /// Orderings of the same characters that pass the line test equally well.
    pub line_candidates: Vec<Vec<usize>>,
    pub outcome: CriterionOutcome,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum Witness {
    Criterion(CriterionWitness),
    Help {
        /// Primes whose line inequalities were added to the systems.
        #[serde(rename = "lineInequalitiesFrom")]
        line_primes: Vec<u64>,
        check: OrderCheck,
    },
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EdgeVerdict {
    /// `(p, q)` with `p < q`.
    pub pair: (u64, u64),
    pub in_group: bool,
    pub unit_status: UnitStatus,
    pub witness: Option<Witness>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Overall {
    #[serde(rename = "PQ_affirmed")]
    Affirmed,
    #[serde(rename = "PQ_open_edges")]
    OpenEdges,
}

impl Overall {
    pub fn as_str(self) -> &'static str {
        match self {
            Overall::Affirmed => "PQ_affirmed",
            Overall::OpenEdges => "PQ_open_edges",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PqReport {
    pub group: String,
    pub prime_graph: PrimeGraph,
    pub edges: Vec<EdgeVerdict>,
    pub overall: Overall,
}

/// Classifies the pair `{p, q}`: an edge of the prime graph, a non-edge
/// settled by the line criterion or by HeLP, or undecided.
pub fn edge_verdict(
    table: &CharacterTable,
    p: u64,
    q: u64,
    lines: &[BrauerLine],
) -> Result<EdgeVerdict, CriterionError> {
    let pair = (p.min(q), p.max(q));
    let n = p * q;
    if table.spectrum().iter().any(|o| o % n == 0) {
        return Ok(EdgeVerdict {
            pair,
            in_group: true,
            unit_status: UnitStatus::EdgeExists,
            witness: None,
        });
    }

    for line in lines {
        let other = match line.prime {
            r if r == pair.0 => pair.1,
            r if r == pair.1 => pair.0,
            _ => continue,
        };
        let outcome = apply_criterion(table, line, other)?;
        if outcome.verdict == CriterionVerdict::NoPqUnits {
            return Ok(EdgeVerdict {
                pair,
                in_group: false,
                unit_status: UnitStatus::ExcludedByCriterion,
                witness: Some(Witness::Criterion(CriterionWitness {
                    line: line.clone(),
                    line_candidates: line_candidates(table, line).into_iter().map(|l| l.characters).collect(),
                    outcome,
                })),
            });
        }
    }

    let providers: Vec<(u64, LineInequalities)> = lines
        .iter()
        .filter(|l| n % l.prime == 0)
        .filter_map(|l| LineInequalities::new(table, l).ok().map(|li| (l.prime, li)))
        .collect();
    let combined = Combined(providers.iter().map(|(_, li)| li as &dyn ExtraConstraints).collect());
    let check = check_order(table, n, &combined)?;
    let unit_status = if check.is_infeasible() && check.exhaustive {
        UnitStatus::ExcludedByHelp
    } else {
        UnitStatus::Undecided
    };
    Ok(EdgeVerdict {
        pair,
        in_group: false,
        unit_status,
        witness: Some(Witness::Help {
            line_primes: providers.iter().map(|(r, _)| *r).collect(),
            check,
        }),
    })
}

/// Runs [`edge_verdict`] on every pair of primes dividing the group order.
pub fn pq_report(table: &CharacterTable, lines: &[BrauerLine]) -> Result<PqReport, CriterionError> {
    let prime_graph = table.prime_graph();
    let edges = prime_graph
        .vertex_pairs()
        .into_par_iter()
        .map(|(p, q)| edge_verdict(table, p, q, lines))
        .collect::<Result<Vec<_>, _>>()?;
    let overall = if edges.iter().all(|e| e.in_group || e.unit_status.is_excluded()) {
        Overall::Affirmed
    } else {
        Overall::OpenEdges
    };
    Ok(PqReport {
        group: table.group_name.clone(),
        prime_graph,
        edges,
        overall,
    })
}
