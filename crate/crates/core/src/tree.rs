//! The Brauer-line criterion for a principal block of defect one.
//!
//! A [`BrauerLine`] names the `p` ordinary characters of the principal
//! `p`-block in the order in which they sit on a line-shaped Brauer tree,
//! the trivial character first. The tree itself is input data; its line
//! shape is checked through the alternating sum
//! `nu = sum_i (-1)^i chi_i`, which must vanish on `p`-regular classes.

use std::collections::BTreeSet;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclo::CyclotomicNumber;
use crate::help::{
    check_order, multiplicity_form_over, AffineForm, Constraint, ExtraConstraints, HelpError, OrderCheck,
    PaSystem, PowerScenario, Provenance, Relation,
};
use crate::tables::CharacterTable;

#[derive(Debug, Error)]
pub enum CriterionError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed block document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("the criterion needs an odd prime, got {0}")]
    EvenPrime(u64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("block for p = {prime} has exceptional multiplicity {multiplicity}; only 1 is supported")]
    ExceptionalMultiplicity { prime: u64, multiplicity: u64 },
    #[error("line for p = {prime} lists {count} characters, expected {prime}")]
    LineLength { prime: u64, count: usize },
    #[error("character index {0} is out of range")]
    IndexOutOfRange(usize),
    #[error("hypotheses not verified: {0}")]
    HypothesesNotMet(String),
    #[error(transparent)]
    Help(#[from] HelpError),
}

/// The ordinary characters of a principal `p`-block in line order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BrauerLine {
    pub prime: u64,
    #[serde(rename = "characterIndices")]
    pub characters: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "camelCase")]
struct BlockRecord {
    prime: u64,
    principal: bool,
    exceptional_multiplicity: u64,
    line_order: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BlockDocument {
    Many(Vec<BlockRecord>),
    One(BlockRecord),
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

impl BrauerLine {
    pub fn new(prime: u64, characters: Vec<usize>) -> Result<Self, CriterionError> {
        if prime == 2 {
            return Err(CriterionError::EvenPrime(prime));
        }
        if !is_prime(prime) {
            return Err(CriterionError::NotPrime(prime));
        }
        if characters.len() as u64 != prime {
            return Err(CriterionError::LineLength {
                prime,
                count: characters.len(),
            });
        }
        Ok(BrauerLine { prime, characters })
    }

    pub fn reversed(&self) -> Self {
        BrauerLine {
            prime: self.prime,
            characters: self.characters.iter().rev().copied().collect(),
        }
    }

    fn check_indices(&self, table: &CharacterTable) -> Result<(), CriterionError> {
        match self.characters.iter().find(|&&c| c >= table.num_characters()) {
            Some(&bad) => Err(CriterionError::IndexOutOfRange(bad)),
            None => Ok(()),
        }
    }
}

/// Parses a block document: one block object or an array of them.
/// Non-principal blocks are skipped.
pub fn parse_blocks(document: &str) -> Result<Vec<BrauerLine>, CriterionError> {
    let records = match serde_json::from_str::<BlockDocument>(document)? {
        BlockDocument::Many(v) => v,
        BlockDocument::One(r) => vec![r],
    };
    let mut lines = Vec::new();
    for r in records {
        if r.exceptional_multiplicity != 1 {
            return Err(CriterionError::ExceptionalMultiplicity {
                prime: r.prime,
                multiplicity: r.exceptional_multiplicity,
            });
        }
        if !r.principal {
            log::warn!("skipping non-principal block for p = {}", r.prime);
            continue;
        }
        lines.push(BrauerLine::new(r.prime, r.line_order)?);
    }
    Ok(lines)
}

pub fn load_blocks(path: impl AsRef<Path>) -> Result<Vec<BrauerLine>, CriterionError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| CriterionError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_blocks(&text)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HypothesisReport {
    pub prime: u64,
    /// `|G| = p m` with `p` not dividing `m`.
    pub sylow_order_p: bool,
    /// Exactly one class of elements of order `p`.
    pub single_p_class: bool,
    /// Trivial character first and `nu` vanishing on `p`-regular classes.
    pub line_verified: bool,
    /// Every value of every line character is `p`-rational.
    pub p_rational: bool,
    pub applicable: bool,
}

/// `nu(g) = sum_{i=1}^p (-1)^i chi_i(g)` for every class.
pub fn nu_values(table: &CharacterTable, line: &BrauerLine) -> Vec<CyclotomicNumber> {
    (0..table.num_classes())
        .map(|g| {
            line.characters
                .iter()
                .enumerate()
                .map(|(i, &chi)| {
                    // position i is chi_{i+1}
                    if i % 2 == 0 {
                        -table.value(chi, g)
                    } else {
                        table.value(chi, g).clone()
                    }
                })
                .sum()
        })
        .collect()
}

/// Necessary condition for the ordering to be a line: `p` distinct
/// characters whose alternating sum vanishes on every `p`-regular class.
/// Reversal invariant for odd `p`.
pub fn verify_line(table: &CharacterTable, line: &BrauerLine) -> bool {
    let distinct: BTreeSet<usize> = line.characters.iter().copied().collect();
    if line.characters.len() as u64 != line.prime
        || distinct.len() != line.characters.len()
        || line.check_indices(table).is_err()
    {
        return false;
    }
    let nu = nu_values(table, line);
    (0..table.num_classes())
        .filter(|&g| table.element_order(g) % line.prime != 0)
        .all(|g| nu[g].is_zero())
}

/// Orderings obtained from `line` by swapping two characters strictly inside
/// the line that still pass [`verify_line`], the input ordering first.
/// More than one entry means the data cannot tell them apart.
pub fn line_candidates(table: &CharacterTable, line: &BrauerLine) -> Vec<BrauerLine> {
    let mut out = Vec::new();
    if verify_line(table, line) {
        out.push(line.clone());
    }
    let p = line.characters.len();
    for i in 1..p.saturating_sub(1) {
        for j in i + 1..p - 1 {
            let mut swapped = line.clone();
            swapped.characters.swap(i, j);
            if verify_line(table, &swapped) {
                out.push(swapped);
            }
        }
    }
    out
}

/// Evaluates the four hypotheses of the criterion from table data alone.
pub fn check_hypotheses(table: &CharacterTable, line: &BrauerLine) -> Result<HypothesisReport, CriterionError> {
    let p = line.prime;
    if p % 2 == 0 {
        return Err(CriterionError::EvenPrime(p));
    }
    line.check_indices(table)?;
    let sylow_order_p = table.order % p == 0 && (table.order / p) % p != 0;
    let single_p_class = table.classes_of_order(p).len() == 1;
    let trivial = CyclotomicNumber::one();
    let first_trivial = line
        .characters
        .first()
        .is_some_and(|&c| table.irreducibles[c].iter().all(|v| *v == trivial));
    let line_verified = first_trivial && verify_line(table, line);
    let p_rational = line
        .characters
        .iter()
        .all(|&c| table.irreducibles[c].iter().all(|v| v.is_p_rational(p)));
    Ok(HypothesisReport {
        prime: p,
        sylow_order_p,
        single_p_class,
        line_verified,
        p_rational,
        applicable: sylow_order_p && single_p_class && line_verified && p_rational,
    })
}

fn unique_p_class(table: &CharacterTable, p: u64) -> Result<usize, CriterionError> {
    match table.classes_of_order(p).as_slice() {
        [y] => Ok(*y),
        other => Err(CriterionError::HypothesesNotMet(format!(
            "{} classes of elements of order {p}",
            other.len()
        ))),
    }
}

/// Every line character takes the same value on a `p`-singular class as on
/// the class of its `p`-part. With a single class `y` of order `p` this is
/// `chi(h) = chi(y)` for all `p`-singular `h`.
pub fn p_section_constancy(table: &CharacterTable, line: &BrauerLine) -> Result<bool, CriterionError> {
    line.check_indices(table)?;
    let p = line.prime;
    for h in (0..table.num_classes()).filter(|&h| table.element_order(h) % p == 0) {
        let o = table.element_order(h);
        let mut pa = 1;
        while o % (pa * p) == 0 {
            pa *= p;
        }
        let m = o / pa;
        // e = 1 mod p^a and e = 0 mod m picks out the p-part
        let e = (1..=pa).map(|t| t * m).find(|e| e % pa == 1).expect("m is prime to p");
        let part = table.power_of(h, e).map_err(HelpError::from)?;
        if !line.characters.iter().all(|&c| table.value(c, h) == table.value(c, part)) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn require_usable(table: &CharacterTable, line: &BrauerLine) -> Result<(), CriterionError> {
    line.check_indices(table)?;
    if !verify_line(table, line) {
        return Err(CriterionError::HypothesesNotMet("line ordering fails nu-vanishing".into()));
    }
    let p = line.prime;
    if !line
        .characters
        .iter()
        .all(|&c| table.irreducibles[c].iter().all(|v| v.is_p_rational(p)))
    {
        return Err(CriterionError::HypothesesNotMet(format!("line characters are not {p}-rational")));
    }
    Ok(())
}

/// `mu(xi, u, chi_1) - sum_i (-1)^i mu(xi zeta_p, u, chi_i) >= 0` for a unit
/// of order `n = p m` (`p` not dividing `m`) and `xi = zeta_m^xi_exp`.
/// `zeta_p` is taken to be `zeta_n^m`.
pub fn line_inequality(
    table: &CharacterTable,
    line: &BrauerLine,
    n: u64,
    xi_exp: u64,
    scenario: &PowerScenario,
) -> Result<Constraint, CriterionError> {
    require_usable(table, line)?;
    let variables = crate::help::admissible_classes(table, n);
    Ok(line_inequality_over(table, line, n, xi_exp, scenario, &variables)?)
}

fn line_inequality_over(
    table: &CharacterTable,
    line: &BrauerLine,
    n: u64,
    xi_exp: u64,
    scenario: &PowerScenario,
    variables: &[usize],
) -> Result<Constraint, CriterionError> {
    let p = line.prime;
    if n % p != 0 || (n / p) % p == 0 {
        return Err(CriterionError::HypothesesNotMet(format!(
            "unit order {n} is not p m with p = {p} prime to m"
        )));
    }
    let m = n / p;
    let xi = (p * (xi_exp % m)) % n;
    let shifted = (xi + m) % n;
    let mut form = multiplicity_form_over(table, line.characters[0], n, xi, scenario, variables)?;
    for (i, &chi) in line.characters.iter().enumerate() {
        let mu = multiplicity_form_over(table, chi, n, shifted, scenario, variables)?;
        // subtract (-1)^(i+1) mu
        form = if i % 2 == 0 { form.add(&mu) } else { form.sub(&mu) };
    }
    Ok(Constraint {
        label: format!("tree line p = {p}: mu(xi, u, chi_1) >= sum (-1)^i mu(xi z{p}, u, chi_i) with xi = z{m}^{}", xi_exp % m),
        provenance: Provenance::TreeInequality,
        relation: Relation::Ge,
        form,
    })
}

/// Supplies the line inequalities to the HeLP solver for every order that
/// is divisible by `p` exactly once.
pub struct LineInequalities {
    line: BrauerLine,
}

impl LineInequalities {
    pub fn new(table: &CharacterTable, line: &BrauerLine) -> Result<Self, CriterionError> {
        require_usable(table, line)?;
        Ok(LineInequalities { line: line.clone() })
    }
}

impl ExtraConstraints for LineInequalities {
    fn constraints(&self, table: &CharacterTable, system: &PaSystem) -> Result<Vec<Constraint>, HelpError> {
        let n = system.order;
        let p = self.line.prime;
        if n % p != 0 || (n / p) % p == 0 {
            return Ok(Vec::new());
        }
        let mut seen: BTreeSet<Vec<String>> = BTreeSet::new();
        let mut out = Vec::new();
        for j in 0..n / p {
            let c = line_inequality_over(table, &self.line, n, j, &system.scenario, &system.variables)
                .map_err(|e| match e {
                    CriterionError::Help(h) => h,
                    other => HelpError::Table(crate::tables::TableError::Shape(other.to_string())),
                })?;
            let key = form_key(&c.form);
            if seen.insert(key) {
                out.push(c);
            }
        }
        Ok(out)
    }
}

/// Several providers applied together.
pub struct Combined<'a>(pub Vec<&'a dyn ExtraConstraints>);

impl ExtraConstraints for Combined<'_> {
    fn constraints(&self, table: &CharacterTable, system: &PaSystem) -> Result<Vec<Constraint>, HelpError> {
        let mut out = Vec::new();
        for provider in &self.0 {
            out.extend(provider.constraints(table, system)?);
        }
        Ok(out)
    }
}

fn form_key(f: &AffineForm) -> Vec<String> {
    f.coeffs
        .iter()
        .chain(std::iter::once(&f.constant))
        .map(|c| c.to_string())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionVerdict {
    /// `V(ZG)` has no unit of order `pq`.
    NoPqUnits,
    /// `G` already has elements of order `pq`.
    EdgeInGroup,
    NotApplicable,
}

/// Data-level consequences of the line shape used along the way.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConsistencyChecks {
    /// `nu(1) = 0`.
    pub nu_identity_zero: bool,
    /// `nu(x) = 0` for every `p`-regular class `x`.
    pub nu_regular_zero: bool,
    /// `nu(y)` on the class of order `p`, when it is unique and rational.
    pub nu_y: Option<crate::rational::Fraction>,
    /// `nu(y) = 0 mod p`.
    pub nu_y_divisible: bool,
    /// `chi(y) = chi(1) mod p` for every irreducible `chi`.
    pub values_congruent: bool,
}

pub fn consistency_checks(table: &CharacterTable, line: &BrauerLine) -> ConsistencyChecks {
    let p = line.prime;
    let nu = nu_values(table, line);
    let id = table.identity_class().unwrap_or(0);
    let y = unique_p_class(table, p).ok();
    let nu_y = y.and_then(|y| nu[y].to_rational());
    let p_int = BigInt::from(p);
    let divisible = |r: &BigRational| r.is_integer() && (r.numer() % &p_int).is_zero();
    let values_congruent = y.is_some_and(|y| {
        (0..table.num_characters()).all(|c| {
            let diff = table.value(c, y) - table.value(c, id);
            diff.to_rational().is_some_and(|r| divisible(&r))
        })
    });
    ConsistencyChecks {
        nu_identity_zero: nu[id].is_zero(),
        nu_regular_zero: (0..table.num_classes())
            .filter(|&g| table.element_order(g) % p != 0)
            .all(|g| nu[g].is_zero()),
        nu_y_divisible: nu_y.as_ref().is_some_and(divisible),
        nu_y: nu_y.map(crate::rational::Fraction),
        values_congruent,
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CriterionOutcome {
    pub p: u64,
    pub q: u64,
    pub verdict: CriterionVerdict,
    pub hypotheses: HypothesisReport,
    pub section_constancy: bool,
    pub checks: ConsistencyChecks,
    pub annotation: Option<String>,
}

/// Decides whether `V(ZG)` can contain units of order `pq` from the line of
/// the principal `p`-block.
pub fn apply_criterion(table: &CharacterTable, line: &BrauerLine, q: u64) -> Result<CriterionOutcome, CriterionError> {
    let p = line.prime;
    if !is_prime(q) {
        return Err(CriterionError::NotPrime(q));
    }
    if q == p {
        return Err(CriterionError::HypothesesNotMet(format!("q = p = {p}")));
    }
    let hypotheses = check_hypotheses(table, line)?;
    let section_constancy = p_section_constancy(table, line)?;
    let checks = consistency_checks(table, line);
    let in_group = table.spectrum().iter().any(|o| o % (p * q) == 0);
    let verdict = if in_group {
        CriterionVerdict::EdgeInGroup
    } else if hypotheses.applicable && section_constancy {
        CriterionVerdict::NoPqUnits
    } else {
        CriterionVerdict::NotApplicable
    };
    let annotation = (verdict == CriterionVerdict::NoPqUnits && (p, q) == (3, 2)).then(|| {
        "(p, q) = (3, 2): conclusion inherited from the external Theorem D on units of order 6 \
         in integral group rings, not from the line inequalities"
            .to_string()
    });
    Ok(CriterionOutcome {
        p,
        q,
        verdict,
        hypotheses,
        section_constancy,
        checks,
        annotation,
    })
}

/// Given `eps_y(u)` of a hypothetical unit of order `pq` and `nu(y)`, the two
/// inequalities `(eps_y - 1) nu(y) <= 0` and `(1 + (q-1) eps_y) nu(y) >= -pq`.
pub fn line_bounds_hold(p: u64, q: u64, eps_y: i64, nu_y: &BigRational) -> bool {
    let eps = BigRational::from_integer(BigInt::from(eps_y));
    let one = BigRational::one();
    let first = (&eps - &one) * nu_y;
    let second = (&one + BigRational::from_integer(BigInt::from(q - 1)) * &eps) * nu_y;
    !first.is_positive() && second >= BigRational::from_integer(BigInt::from(-((p * q) as i64)))
}

/// Solver cross-check of a `NoPqUnits` verdict.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Corroboration {
    pub infeasible: bool,
    pub exhaustive: bool,
    pub surviving: usize,
    /// Surviving tuples for which the derived bound `-p < nu(y) < p` together
    /// with `nu(y) = 0 mod p` would force `nu(y) = 0`.
    pub contradictions: Vec<String>,
    #[serde(skip)]
    pub check: Option<OrderCheck>,
}

/// Runs HeLP for order `pq` with the line inequalities added and checks
/// every surviving unit against the inequalities derived from the line.
pub fn corroborate(table: &CharacterTable, line: &BrauerLine, q: u64) -> Result<Corroboration, CriterionError> {
    let p = line.prime;
    let provider = LineInequalities::new(table, line)?;
    let check = check_order(table, p * q, &provider)?;
    let y = unique_p_class(table, p)?;
    let nu_y = nu_values(table, line)[y]
        .to_rational()
        .ok_or_else(|| CriterionError::HypothesesNotMet("nu(y) is not rational".into()))?;
    let mut contradictions = Vec::new();
    for s in check.full_solutions() {
        let eps_y = s.top.get(y);
        let bounded = line_bounds_hold(p, q, eps_y, &nu_y)
            && nu_y.abs() < BigRational::from_integer(BigInt::from(p));
        if bounded && (p, q) != (3, 2) {
            contradictions.push(format!("eps_y = {eps_y} forces nu(y) = 0 but nu(y) = {nu_y}"));
        }
    }
    Ok(Corroboration {
        infeasible: check.is_infeasible(),
        exhaustive: check.exhaustive,
        surviving: check.solution_count(),
        contradictions,
        check: Some(check),
    })
}
