//! The HeLP constraint system for a hypothetical normalized torsion unit `u`
//! of order `n`.
//!
//! Unknowns are the partial augmentations `eps_x(u)` of the top layer. The
//! proper powers `u^d` (`d | n`, `1 < d < n`) are fixed by a
//! [`PowerScenario`], which makes every eigenvalue multiplicity
//! `mu(xi, u, chi)` an affine function of the unknowns.

mod order;
mod simplex;
mod solve;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::cyclo::{prime_divisors, CyclotomicNumber};
use crate::rational::{format_rational, Fraction};
use crate::tables::{CharacterTable, TableError};

pub use order::{check_order, ExtraConstraints, FullSolution, NoExtra, OrderCheck, ScenarioOutcome};
pub use solve::{derive_bounds, solve, Bounds, PaSolutionSet};

#[derive(Debug, Error)]
pub enum HelpError {
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Cyclo(#[from] crate::cyclo::CycloError),
    #[error("power scenario for order {order} has no layer for u^{divisor}")]
    MissingLayer { order: u64, divisor: u64 },
    #[error("{exponent} is not a valid exponent of an {order}-th root of unity")]
    BadRoot { order: u64, exponent: u64 },
    #[error("character index {0} out of range")]
    BadCharacter(usize),
    #[error("linear relaxation is unbounded in variable {variable}; the table is probably incomplete")]
    Unbounded { variable: usize },
    #[error("integer overflow while scaling constraints")]
    Overflow,
    #[error("unit order must be positive")]
    ZeroOrder,
}

/// Partial augmentations of one unit, keyed by class index. Zero entries are
/// not stored, so equal tuples compare equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PaTuple(BTreeMap<usize, i64>);

impl PaTuple {
    pub fn new(entries: impl IntoIterator<Item = (usize, i64)>) -> Self {
        PaTuple(entries.into_iter().filter(|&(_, v)| v != 0).collect())
    }

    /// The tuple of a group element: 1 at its class, 0 elsewhere.
    pub fn indicator(class: usize) -> Self {
        PaTuple::new([(class, 1)])
    }

    pub fn from_assignment(classes: &[usize], values: &[i64]) -> Self {
        PaTuple::new(classes.iter().copied().zip(values.iter().copied()))
    }

    pub fn get(&self, class: usize) -> i64 {
        self.0.get(&class).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.0.iter().map(|(&c, &v)| (c, v))
    }

    /// `chi(u) = sum_x eps_x(u) chi(x)`.
    pub fn character_value(&self, table: &CharacterTable, chi: usize) -> CyclotomicNumber {
        self.entries()
            .map(|(c, v)| table.value(chi, c).scale(&BigRational::from_integer(v.into())))
            .sum()
    }
}

impl Serialize for PaTuple {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_map(self.0.iter().map(|(c, v)| (c.to_string(), v)))
    }
}

/// Fixed partial augmentations for the proper powers `u^d`, `d | n`, `1 < d < n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PowerScenario {
    pub order: u64,
    /// divisor `d` -> partial augmentations of `u^d`.
    pub layers: BTreeMap<u64, PaTuple>,
}

impl PowerScenario {
    pub fn new(order: u64) -> Self {
        PowerScenario {
            order,
            layers: BTreeMap::new(),
        }
    }

    /// Partial augmentations of `u^d`; `u^n = 1` needs no layer.
    pub fn layer(&self, table: &CharacterTable, d: u64) -> Result<PaTuple, HelpError> {
        if d % self.order == 0 {
            let id = table.identity_class().ok_or(TableError::Shape("no identity class".into()))?;
            return Ok(PaTuple::indicator(id));
        }
        self.layers.get(&d).cloned().ok_or(HelpError::MissingLayer {
            order: self.order,
            divisor: d,
        })
    }

    /// The scenario of an actual group element of the given class, derived
    /// from the power maps.
    pub fn of_element(table: &CharacterTable, class: usize) -> Result<Self, HelpError> {
        let n = table.element_order(class);
        let mut scenario = PowerScenario::new(n);
        for d in divisors(n) {
            if d > 1 && d < n {
                scenario
                    .layers
                    .insert(d, PaTuple::indicator(table.power_of(class, d)?));
            }
        }
        Ok(scenario)
    }
}

pub(crate) fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// An affine form `coeffs . eps + constant` over the top-layer unknowns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineForm {
    pub coeffs: Vec<BigRational>,
    pub constant: BigRational,
}

impl AffineForm {
    pub fn zero(num_vars: usize) -> Self {
        AffineForm {
            coeffs: vec![BigRational::zero(); num_vars],
            constant: BigRational::zero(),
        }
    }

    pub fn constant(num_vars: usize, c: BigRational) -> Self {
        AffineForm {
            constant: c,
            ..Self::zero(num_vars)
        }
    }

    pub fn eval(&self, values: &[i64]) -> BigRational {
        self.coeffs
            .iter()
            .zip(values)
            .fold(self.constant.clone(), |acc, (a, &v)| {
                acc + a * BigRational::from_integer(BigInt::from(v))
            })
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        AffineForm {
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
            constant: &self.constant * r,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        AffineForm {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            constant: &self.constant + &other.constant,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }
}

impl Serialize for AffineForm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("AffineForm", 2)?;
        let coeffs: Vec<Fraction> = self.coeffs.iter().cloned().map(Fraction).collect();
        s.serialize_field("coeffs", &coeffs)?;
        s.serialize_field("constant", &Fraction(self.constant.clone()))?;
        s.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// form = 0
    Eq,
    /// form >= 0
    Ge,
    /// form lies in `m Z`; `m = 1` expresses integrality.
    Congruent(BigInt),
}

impl Serialize for Relation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Relation::Eq => serializer.serialize_str("= 0"),
            Relation::Ge => serializer.serialize_str(">= 0"),
            Relation::Congruent(m) => serializer.serialize_str(&format!("= 0 mod {m}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Augmentation,
    BermanHigman,
    Admissibility,
    Wagner,
    Folklore,
    MultiplicityIntegrality,
    MultiplicityNonnegativity,
    TreeInequality,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Provenance::Augmentation => "augmentation",
            Provenance::BermanHigman => "berman-higman",
            Provenance::Admissibility => "admissibility",
            Provenance::Wagner => "wagner",
            Provenance::Folklore => "folklore",
            Provenance::MultiplicityIntegrality => "multiplicity-integrality",
            Provenance::MultiplicityNonnegativity => "multiplicity-nonnegativity",
            Provenance::TreeInequality => "tree-inequality",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Constraint {
    pub label: String,
    pub provenance: Provenance,
    pub relation: Relation,
    pub form: AffineForm,
}

impl Constraint {
    pub fn is_satisfied(&self, values: &[i64]) -> bool {
        let v = self.form.eval(values);
        match &self.relation {
            Relation::Eq => v.is_zero(),
            Relation::Ge => !v.is_negative(),
            Relation::Congruent(m) => {
                let q = v / BigRational::from_integer(m.clone());
                q.is_integer()
            }
        }
    }
}

/// A class that carries no unknown, with the reason.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExcludedClass {
    pub class: usize,
    pub reason: Provenance,
}

/// The complete constraint system for one power scenario.
#[derive(Clone, Debug, Serialize)]
pub struct PaSystem {
    pub order: u64,
    /// Class indices of the unknowns `eps_x(u)`, ascending.
    pub variables: Vec<usize>,
    pub scenario: PowerScenario,
    pub excluded: Vec<ExcludedClass>,
    pub constraints: Vec<Constraint>,
}

impl PaSystem {
    pub fn is_satisfied_by(&self, values: &[i64]) -> bool {
        self.constraints.iter().all(|c| c.is_satisfied(values))
    }

    pub fn violations(&self, values: &[i64]) -> Vec<&Constraint> {
        self.constraints.iter().filter(|c| !c.is_satisfied(values)).collect()
    }

    pub fn add_constraints(&mut self, extra: impl IntoIterator<Item = Constraint>) {
        self.constraints.extend(extra);
    }
}

/// Classes that may carry a nonzero partial augmentation for a unit of
/// order `n`: element order divides `n`, and the identity only when `n = 1`.
pub fn admissible_classes(table: &CharacterTable, n: u64) -> Vec<usize> {
    (0..table.num_classes())
        .filter(|&c| {
            let o = table.element_order(c);
            n % o == 0 && (o > 1 || n == 1)
        })
        .collect()
}

fn check_root(n: u64, xi: u64) -> Result<(), HelpError> {
    if n == 0 {
        return Err(HelpError::ZeroOrder);
    }
    if xi >= n {
        return Err(HelpError::BadRoot {
            order: n,
            exponent: xi,
        });
    }
    Ok(())
}

/// `mu(xi, u, chi)` for `xi = zeta_n^xi_exp` as an affine form over the
/// unknowns `admissible_classes(table, n)`:
///
/// `mu = 1/n sum_{d | n} Tr_{Q(zeta_{n/d})/Q}(chi(u^d) xi^{-d})`.
///
/// The `d = 1` term carries the unknowns; the others come from `scenario`.
pub fn multiplicity_form(
    table: &CharacterTable,
    chi: usize,
    n: u64,
    xi_exp: u64,
    scenario: &PowerScenario,
) -> Result<AffineForm, HelpError> {
    let variables = admissible_classes(table, n);
    multiplicity_form_over(table, chi, n, xi_exp, scenario, &variables)
}

pub fn multiplicity_form_over(
    table: &CharacterTable,
    chi: usize,
    n: u64,
    xi_exp: u64,
    scenario: &PowerScenario,
    variables: &[usize],
) -> Result<AffineForm, HelpError> {
    check_root(n, xi_exp)?;
    if chi >= table.num_characters() {
        return Err(HelpError::BadCharacter(chi));
    }
    let inv_n = BigRational::new(BigInt::one(), BigInt::from(n));
    let neg = -(xi_exp as i64);
    let coeffs = variables
        .iter()
        .map(|&x| {
            let t = table.value(chi, x).mul_root(n, neg).trace(n)?;
            Ok(t * &inv_n)
        })
        .collect::<Result<Vec<_>, HelpError>>()?;
    let mut constant = BigRational::zero();
    for d in divisors(n).into_iter().skip(1) {
        let m = n / d;
        let value = scenario.layer(table, d)?.character_value(table, chi);
        // xi^{-d} = zeta_n^{-l d} = zeta_m^{-l}
        constant += value.mul_root(m, neg).trace(m)?;
    }
    Ok(AffineForm {
        coeffs,
        constant: constant * inv_n,
    })
}

/// Exponents `l` of `xi = zeta_n^l`, one per orbit under the Galois
/// automorphisms that fix every value of `chi` on classes of order dividing `n`.
/// Smallest exponents represent their orbits.
pub fn galois_transversal(table: &CharacterTable, chi: usize, n: u64) -> Vec<u64> {
    let relevant: Vec<&CyclotomicNumber> = (0..table.num_classes())
        .filter(|&c| n % table.element_order(c) == 0)
        .map(|c| table.value(chi, c))
        .collect();
    let fixing: Vec<u64> = (1..=n)
        .filter(|k| k.gcd(&n) == 1)
        .filter(|&k| {
            relevant
                .iter()
                .all(|v| v.galois(k as i64).map(|g| &g == *v).unwrap_or(false))
        })
        .collect();
    let mut seen = BTreeSet::new();
    let mut reps = Vec::new();
    for l in 0..n {
        if seen.contains(&l) {
            continue;
        }
        reps.push(l);
        for &k in &fixing {
            seen.insert((l * k) % n);
        }
    }
    reps
}

/// Wagner and folklore congruences for the prime `p | n`.
pub fn congruence_constraints(
    table: &CharacterTable,
    n: u64,
    p: u64,
    scenario: &PowerScenario,
) -> Result<Vec<Constraint>, HelpError> {
    let variables = admissible_classes(table, n);
    congruence_constraints_over(table, n, p, scenario, &variables)
}

fn congruence_constraints_over(
    table: &CharacterTable,
    n: u64,
    p: u64,
    scenario: &PowerScenario,
    variables: &[usize],
) -> Result<Vec<Constraint>, HelpError> {
    let k = variables.len();
    let modulus = BigInt::from(p);
    let mut out = Vec::new();
    if n % p != 0 {
        return Ok(out);
    }
    if n != p {
        // eps_1(u^p) = eps_1(u) = 0, so the order-p classes sum to 0 mod p
        let mut form = AffineForm::zero(k);
        for (i, &c) in variables.iter().enumerate() {
            if table.element_order(c) == p {
                form.coeffs[i] = BigRational::one();
            }
        }
        if !form.is_constant() {
            out.push(Constraint {
                label: format!("sum of eps over classes of order {p} = 0 mod {p}"),
                provenance: Provenance::Wagner,
                relation: Relation::Congruent(modulus.clone()),
                form,
            });
        }
    }
    let power = table.power_map(p)?;
    let lower = scenario.layer(table, p)?;
    let mut targets: BTreeSet<usize> = variables.iter().map(|&y| power[y]).collect();
    targets.extend(lower.entries().map(|(c, _)| c));
    for x in targets {
        let mut form = AffineForm::constant(k, BigRational::from_integer(BigInt::from(-lower.get(x))));
        for (i, &y) in variables.iter().enumerate() {
            if power[y] == x {
                form.coeffs[i] = BigRational::one();
            }
        }
        if form.is_constant() && form.constant.is_zero() {
            continue;
        }
        out.push(Constraint {
            label: format!(
                "eps_{}(u^{p}) = sum of eps_y(u) with y^{p} in {} mod {p}",
                table.classes[x].name, table.classes[x].name
            ),
            provenance: Provenance::Folklore,
            relation: Relation::Congruent(modulus.clone()),
            form,
        });
    }
    Ok(out)
}

/// Assembles the full HeLP system for a unit of order `n` under `scenario`.
pub fn build_system(
    table: &CharacterTable,
    n: u64,
    scenario: &PowerScenario,
) -> Result<PaSystem, HelpError> {
    if n == 0 {
        return Err(HelpError::ZeroOrder);
    }
    let variables = admissible_classes(table, n);
    let k = variables.len();
    let excluded = (0..table.num_classes())
        .filter(|c| !variables.contains(c))
        .map(|class| ExcludedClass {
            class,
            reason: if table.element_order(class) == 1 {
                Provenance::BermanHigman
            } else {
                Provenance::Admissibility
            },
        })
        .collect();

    let mut constraints = vec![Constraint {
        label: "sum of partial augmentations = 1".into(),
        provenance: Provenance::Augmentation,
        relation: Relation::Eq,
        form: AffineForm {
            coeffs: vec![BigRational::one(); k],
            constant: -BigRational::one(),
        },
    }];
    for p in prime_divisors(n as usize) {
        constraints.extend(congruence_constraints_over(table, n, p as u64, scenario, &variables)?);
    }
    for chi in 0..table.num_characters() {
        for l in galois_transversal(table, chi, n) {
            let form = multiplicity_form_over(table, chi, n, l, scenario, &variables)?;
            constraints.push(Constraint {
                label: format!("mu(z{n}^{l}, u, chi_{chi}) >= 0"),
                provenance: Provenance::MultiplicityNonnegativity,
                relation: Relation::Ge,
                form: form.clone(),
            });
            if !(form.is_constant() && form.constant.is_integer()) {
                constraints.push(Constraint {
                    label: format!("mu(z{n}^{l}, u, chi_{chi}) integral"),
                    provenance: Provenance::MultiplicityIntegrality,
                    relation: Relation::Congruent(BigInt::one()),
                    form,
                });
            }
        }
    }
    Ok(PaSystem {
        order: n,
        variables,
        scenario: scenario.clone(),
        excluded,
        constraints,
    })
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{}*e{i}", format_rational(c)))
            .collect();
        if !self.constant.is_zero() || parts.is_empty() {
            parts.push(format_rational(&self.constant));
        }
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::tables::test_tables::cyclic;

    #[test]
    fn trivial_unit_multiplicity_is_degree() {
        let c4 = cyclic(4);
        let s = PowerScenario::new(1);
        for chi in 0..4 {
            let f = multiplicity_form(&c4, chi, 1, 0, &s).unwrap();
            assert_eq!(f.eval(&[1]), rat(1));
        }
    }

    #[test]
    fn missing_layer_is_an_error() {
        let c4 = cyclic(4);
        let err = multiplicity_form(&c4, 1, 4, 0, &PowerScenario::new(4)).unwrap_err();
        assert!(matches!(err, HelpError::MissingLayer { divisor: 2, .. }));
    }

    #[test]
    fn bad_root_is_rejected() {
        let c4 = cyclic(4);
        assert!(matches!(
            multiplicity_form(&c4, 0, 2, 2, &PowerScenario::new(2)),
            Err(HelpError::BadRoot { .. })
        ));
    }

    #[test]
    fn cyclic_group_element_eigenvalues() {
        // In C4 the generator g1 acts on chi_1 by i = zeta_4^1
        let c4 = cyclic(4);
        let s = PowerScenario::of_element(&c4, 1).unwrap();
        let values = [1, 0, 0];
        assert_eq!(admissible_classes(&c4, 4), vec![1, 2, 3]);
        for l in 0..4 {
            let f = multiplicity_form(&c4, 1, 4, l, &s).unwrap();
            let expected = if l == 1 { 1 } else { 0 };
            assert_eq!(f.eval(&values), rat(expected));
        }
    }

    #[test]
    fn empty_system_is_inconsistent() {
        let c3 = cyclic(3);
        let sys = build_system(&c3, 2, &PowerScenario::new(2)).unwrap();
        assert!(sys.variables.is_empty());
        assert!(!sys.is_satisfied_by(&[]));
    }
}
