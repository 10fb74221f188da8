#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use itertools::Itertools;
use pgq_core::tables::CharacterTable;
use pgq_core::tree::{load_blocks, BrauerLine};

pub const FIXTURES: [&str; 5] = ["a5", "a6", "a7", "s5", "s7"];

pub fn fixture_path(name: &str) -> String {
    format!("{}/../../fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

pub fn table(name: &str) -> CharacterTable {
    CharacterTable::load(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn lines(name: &str) -> Vec<BrauerLine> {
    load_blocks(fixture_path(&format!("{name}.blocks"))).unwrap()
}

pub fn line(name: &str, p: u64) -> BrauerLine {
    lines(name).into_iter().find(|l| l.prime == p).unwrap()
}

pub type Perm = Vec<u8>;

pub fn compose(a: &Perm, b: &Perm) -> Perm {
    // apply b, then a
    b.iter().map(|&i| a[i as usize]).collect()
}

pub fn inverse(a: &Perm) -> Perm {
    let mut inv = vec![0; a.len()];
    for (i, &j) in a.iter().enumerate() {
        inv[j as usize] = i as u8;
    }
    inv
}

pub fn cycle_lengths(a: &Perm) -> Vec<usize> {
    let mut seen = vec![false; a.len()];
    let mut out = Vec::new();
    for start in 0..a.len() {
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = a[i] as usize;
            len += 1;
        }
        if len > 0 {
            out.push(len);
        }
    }
    out
}

pub fn perm_order(a: &Perm) -> u64 {
    cycle_lengths(a).into_iter().fold(1, |acc, l| num_integer::lcm(acc, l as u64))
}

pub fn is_even(a: &Perm) -> bool {
    cycle_lengths(a).iter().map(|l| l - 1).sum::<usize>() % 2 == 0
}

pub fn power(a: &Perm, k: u64) -> Perm {
    let mut out: Perm = (0..a.len() as u8).collect();
    for _ in 0..k {
        out = compose(a, &out);
    }
    out
}

/// The symmetric group (`alternating = false`) or alternating group on `n` points.
pub fn permutation_group(n: u8, alternating: bool) -> Vec<Perm> {
    (0..n)
        .permutations(n as usize)
        .filter(|p| !alternating || is_even(p))
        .collect()
}

pub struct OracleClass {
    pub representative: Perm,
    pub size: u64,
    pub order: u64,
}

/// Conjugacy classes by explicit orbit computation.
pub fn conjugacy_classes(group: &[Perm]) -> Vec<OracleClass> {
    let inverses: Vec<Perm> = group.iter().map(inverse).collect();
    let mut seen: HashSet<Perm> = HashSet::new();
    let mut out = Vec::new();
    for g in group {
        if seen.contains(g) {
            continue;
        }
        let orbit: HashSet<Perm> = group
            .iter()
            .zip(&inverses)
            .map(|(h, hi)| compose(h, &compose(g, hi)))
            .collect();
        out.push(OracleClass {
            representative: g.clone(),
            size: orbit.len() as u64,
            order: perm_order(g),
        });
        seen.extend(orbit);
    }
    out
}

pub fn group_for(name: &str) -> Vec<Perm> {
    let n: u8 = name[1..].parse().unwrap();
    permutation_group(n, name.starts_with('a'))
}

/// Multiset of `(element order, class size)`.
pub fn signature_counts(pairs: impl IntoIterator<Item = (u64, u64)>) -> BTreeMap<(u64, u64), usize> {
    let mut m = BTreeMap::new();
    for p in pairs {
        *m.entry(p).or_insert(0) += 1;
    }
    m
}

use pgq_core::help::{
    admissible_classes, build_system, check_order, derive_bounds, multiplicity_form, Bounds, NoExtra, PaSystem,
    PaTuple, PowerScenario,
};
use rand::Rng;

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Every integer point of the box that satisfies every constraint.
pub fn brute_force(system: &PaSystem, bounds: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut point: Vec<i64> = bounds.iter().map(|b| b.0).collect();
    if bounds.iter().any(|b| b.0 > b.1) {
        return out;
    }
    loop {
        if system.is_satisfied_by(&point) {
            out.push(point.clone());
        }
        // odometer
        let mut i = 0;
        loop {
            if i == point.len() {
                return out;
            }
            if point[i] < bounds[i].1 {
                point[i] += 1;
                break;
            }
            point[i] = bounds[i].0;
            i += 1;
        }
    }
}

/// The derived bound box widened by `margin`; a generous fixed box when the
/// relaxation is already infeasible.
pub fn oracle_box(system: &PaSystem, margin: i64) -> Vec<(i64, i64)> {
    match derive_bounds(system).unwrap() {
        Bounds::Box(b) => b.into_iter().map(|(lo, hi)| (lo - margin, hi + margin)).collect(),
        Bounds::RelaxationInfeasible => vec![(-4, 4); system.variables.len()],
    }
}

/// Compares the solver against brute force on every scenario of every
/// order dividing `n`. Returns the number of scenarios compared.
pub fn solver_matches_brute_force(table: &CharacterTable, n: u64, margin: i64) -> Result<usize, String> {
    let mut compared = 0;
    for d in divisors(n) {
        let check = check_order(table, d, &NoExtra).map_err(|e| e.to_string())?;
        for s in &check.scenarios {
            let mut naive = brute_force(&s.system, &oracle_box(&s.system, margin));
            naive.sort();
            if naive != s.solutions.solutions {
                return Err(format!(
                    "order {d}, scenario {:?}: solver {:?} vs brute force {:?}",
                    s.system.scenario, s.solutions.solutions, naive
                ));
            }
            if !s.solutions.exhaustive {
                return Err(format!("order {d}: solver did not certify exhaustiveness"));
            }
            compared += 1;
        }
    }
    Ok(compared)
}

/// Constraints of `build_system` violated by actual group elements.
pub fn element_violations(table: &CharacterTable) -> Vec<String> {
    let mut out = Vec::new();
    for c in 0..table.num_classes() {
        let n = table.element_order(c);
        let scenario = PowerScenario::of_element(table, c).unwrap();
        let system = build_system(table, n, &scenario).unwrap();
        let values: Vec<i64> = system.variables.iter().map(|&v| i64::from(v == c)).collect();
        for v in system.violations(&values) {
            out.push(format!("{} class {}: {}", table.group_name, table.classes[c].name, v.label));
        }
    }
    out
}

/// A scenario with arbitrary integer layers on admissible classes.
pub fn random_scenario(table: &CharacterTable, n: u64, rng: &mut impl Rng) -> PowerScenario {
    let mut s = PowerScenario::new(n);
    for d in divisors(n) {
        if d > 1 && d < n {
            let classes = admissible_classes(table, n / d);
            s.layers.insert(d, PaTuple::new(classes.into_iter().map(|c| (c, rng.gen_range(-3..=3)))));
        }
    }
    s
}

/// Draws `(chi, n, scenario)` and checks that the multiplicities of all
/// `n`-th roots of unity add up to `chi(1)` identically. Returns failures.
pub fn multiplicity_sum_failures(table: &CharacterTable, draws: usize, rng: &mut impl Rng) -> Vec<String> {
    // for n = 1 the sum is chi(1) eps_1(u), which needs augmentation
    let orders: Vec<u64> = divisors(table.exponent()).into_iter().filter(|&n| n > 1 && n <= 60).collect();
    let id = table.identity_class().unwrap();
    let mut out = Vec::new();
    for _ in 0..draws {
        let n = orders[rng.gen_range(0..orders.len())];
        let chi = rng.gen_range(0..table.num_characters());
        let scenario = random_scenario(table, n, rng);
        let mut coeffs = vec![num_rational::BigRational::from_integer(0.into()); admissible_classes(table, n).len()];
        let mut constant = num_rational::BigRational::from_integer(0.into());
        for l in 0..n {
            let f = multiplicity_form(table, chi, n, l, &scenario).unwrap();
            for (a, b) in coeffs.iter_mut().zip(&f.coeffs) {
                *a += b;
            }
            constant += &f.constant;
        }
        let degree = table.value(chi, id).to_rational().unwrap();
        if constant != degree || coeffs.iter().any(|c| *c != num_rational::BigRational::from_integer(0.into())) {
            out.push(format!("{}: chi {chi}, n {n}: sum {constant} + {coeffs:?}", table.group_name));
        }
    }
    out
}
