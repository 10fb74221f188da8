//! Plain-text rendering of reports.

use std::collections::{BTreeSet, BTreeMap};
use std::fmt::Write;

use pgq_core::help::{OrderCheck, PaTuple, Provenance};
use pgq_core::tables::{CharacterTable, PrimeGraph, ValidationReport};
use pgq_core::verdict::{PqReport, Witness};

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

pub fn validation(report: &ValidationReport) -> String {
    let mut out = String::new();
    for c in &report.checks {
        let _ = write!(out, "{}: {}", c.name, pass(c.passed));
        if let Some(ce) = &c.counterexample {
            let _ = write!(out, " ({ce})");
        }
        out.push('\n');
    }
    let orth = report.checks.iter().filter(|c| c.name.ends_with("orthogonality")).all(|c| c.passed);
    let _ = writeln!(out, "orthogonality: {}", pass(orth));
    out
}

fn joined<T: ToString>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

pub fn spectrum(orders: &BTreeSet<u64>) -> String {
    format!("{}\n", joined(orders, " "))
}

fn edges(graph: &PrimeGraph) -> String {
    if graph.edges.is_empty() {
        "none".into()
    } else {
        joined(graph.edges.iter().map(|(p, q)| format!("{p}-{q}")), " ")
    }
}

pub fn prime_graph(graph: &PrimeGraph) -> String {
    format!("vertices: {}\nedges: {}\n", joined(&graph.vertices, " "), edges(graph))
}

fn tuple(table: &CharacterTable, t: &PaTuple) -> String {
    let parts: Vec<String> = t.entries().map(|(c, v)| format!("{}={v}", table.classes[c].name)).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        format!("({})", parts.join(", "))
    }
}

fn provenance(check: &OrderCheck) -> String {
    let used: BTreeSet<Provenance> = check
        .scenarios
        .iter()
        .flat_map(|s| s.system.constraints.iter().map(|c| c.provenance))
        .collect();
    joined(used, ", ")
}

fn survivors(table: &CharacterTable, check: &OrderCheck, indent: &str) -> String {
    let mut out = String::new();
    for s in check.full_solutions() {
        let layers: BTreeMap<u64, String> = s.scenario.layers.iter().map(|(d, t)| (*d, tuple(table, t))).collect();
        let _ = write!(out, "{indent}eps {}", tuple(table, &s.top));
        for (d, t) in layers {
            let _ = write!(out, "; u^{d}: {t}");
        }
        out.push('\n');
    }
    out
}

pub fn order(table: &CharacterTable, verdict: &str, certificate: &str, check: &OrderCheck) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "group: {}", table.group_name);
    let _ = writeln!(out, "order: {}", check.order);
    let _ = writeln!(out, "verdict: {verdict}");
    let _ = writeln!(out, "certificate: {certificate}");
    match check.blocked_by {
        Some(d) => {
            let _ = writeln!(out, "blocked by: no units of order {d}");
        }
        None => {
            let _ = writeln!(out, "scenarios: {}", check.scenarios.len());
            let _ = writeln!(out, "constraints: {}", provenance(check));
        }
    }
    if !check.is_infeasible() {
        let _ = writeln!(out, "surviving: {}", check.full_solutions().len());
        out.push_str(&survivors(table, check, "  "));
    }
    out
}

pub fn pq(table: &CharacterTable, report: &PqReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "group: {}", report.group);
    let _ = writeln!(out, "vertices: {}", joined(&report.prime_graph.vertices, " "));
    let _ = writeln!(out, "edges: {}", edges(&report.prime_graph));
    for e in &report.edges {
        let (p, q) = e.pair;
        let _ = writeln!(out, "({p},{q}) {}", e.unit_status.as_str());
        match &e.witness {
            None => {}
            Some(Witness::Criterion(w)) => {
                let h = &w.outcome.hypotheses;
                let _ = writeln!(
                    out,
                    "  line p={}: [{}]; sylowOrderP={} singlePClass={} lineVerified={} pRational={}",
                    w.line.prime,
                    joined(&w.line.characters, ", "),
                    h.sylow_order_p,
                    h.single_p_class,
                    h.line_verified,
                    h.p_rational
                );
                if w.line_candidates.len() > 1 {
                    let _ = writeln!(out, "  orderings passing the line test: {}", w.line_candidates.len());
                }
                if let Some(a) = &w.outcome.annotation {
                    let _ = writeln!(out, "  note: {a}");
                }
            }
            Some(Witness::Help { line_primes, check }) => {
                let _ = write!(out, "  order {}: ", check.order);
                match check.blocked_by {
                    Some(d) => {
                        let _ = write!(out, "no units of order {d}");
                    }
                    None => {
                        let _ = write!(out, "{} scenarios; constraints: {}", check.scenarios.len(), provenance(check));
                    }
                }
                if !line_primes.is_empty() {
                    let _ = write!(out, "; line inequalities for p = {}", joined(line_primes, ", "));
                }
                out.push('\n');
                out.push_str(&survivors(table, check, "  "));
            }
        }
    }
    let _ = writeln!(out, "overall: {}", report.overall.as_str());
    out
}
