use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::CharacterTable;
use crate::cyclo::CyclotomicNumber;

/// Outcome of a single validation check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// First counterexample found, when the check failed.
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn outcome(name: &'static str, failure: Option<String>) -> CheckResult {
    CheckResult {
        name,
        passed: failure.is_none(),
        counterexample: failure,
    }
}

/// Runs every exact consistency check on a parsed table.
pub fn validate(table: &CharacterTable) -> ValidationReport {
    let square = table.num_characters() == table.num_classes();
    let mut checks = vec![
        outcome("class sizes", class_sizes(table)),
        outcome(
            "square table",
            (!square).then(|| {
                format!(
                    "{} characters for {} classes",
                    table.num_characters(),
                    table.num_classes()
                )
            }),
        ),
        outcome("trivial character", trivial_character(table)),
        outcome("degree sum", degree_sum(table)),
    ];
    let conj: Vec<Vec<CyclotomicNumber>> = table
        .irreducibles
        .iter()
        .map(|row| row.iter().map(CyclotomicNumber::complex_conjugate).collect())
        .collect();
    checks.push(outcome("row orthogonality", row_orthogonality(table, &conj)));
    checks.push(outcome("column orthogonality", column_orthogonality(table, &conj)));
    checks.push(outcome("power maps", power_maps(table)));
    ValidationReport { checks }
}

fn class_sizes(table: &CharacterTable) -> Option<String> {
    let first = &table.classes[0];
    if first.size != 1 || first.element_order != 1 {
        return Some(format!("first class {} is not the identity class", first.name));
    }
    if let Some(c) = table.classes[1..].iter().find(|c| c.element_order == 1) {
        return Some(format!("class {} has element order 1", c.name));
    }
    let total: u128 = table.classes.iter().map(|c| c.size as u128).sum();
    if total != table.order as u128 {
        return Some(format!("class sizes sum to {total}, group order is {}", table.order));
    }
    if let Some(c) = table.classes.iter().find(|c| table.order % c.size != 0) {
        return Some(format!("class {} size {} does not divide |G|", c.name, c.size));
    }
    None
}

fn trivial_character(table: &CharacterTable) -> Option<String> {
    let Some(row) = table.irreducibles.first() else {
        return Some("table has no characters".into());
    };
    let one = CyclotomicNumber::one();
    row.iter()
        .position(|v| *v != one)
        .map(|j| format!("first character is {} on class {}", row[j], table.classes[j].name))
}

fn degree_sum(table: &CharacterTable) -> Option<String> {
    let mut total = CyclotomicNumber::zero();
    for row in &table.irreducibles {
        total = &total + &(&row[0] * &row[0]);
    }
    let order = CyclotomicNumber::from_rational(BigRational::from_integer(BigInt::from(table.order)));
    (total != order).then(|| format!("sum of squared degrees is {total}, |G| = {}", table.order))
}

fn row_orthogonality(table: &CharacterTable, conj: &[Vec<CyclotomicNumber>]) -> Option<String> {
    let sizes: Vec<BigRational> = table
        .classes
        .iter()
        .map(|c| BigRational::from_integer(BigInt::from(c.size)))
        .collect();
    let order = BigRational::from_integer(BigInt::from(table.order));
    let weighted: Vec<Vec<CyclotomicNumber>> = table
        .irreducibles
        .iter()
        .map(|row| row.iter().zip(&sizes).map(|(v, s)| v.scale(s)).collect())
        .collect();
    for (i, wi) in weighted.iter().enumerate() {
        for (j, cj) in conj.iter().enumerate().skip(i) {
            let inner: CyclotomicNumber = wi.iter().zip(cj).map(|(a, b)| a * b).sum();
            let expected = if i == j { order.clone() } else { BigRational::zero() };
            if inner.to_rational().as_ref() != Some(&expected) {
                let value = inner.scale(&order.recip());
                return Some(format!("<chi_{i}, chi_{j}> = {value}"));
            }
        }
    }
    None
}

fn column_orthogonality(table: &CharacterTable, conj: &[Vec<CyclotomicNumber>]) -> Option<String> {
    let k = table.num_classes();
    for j in 0..k {
        for l in j..k {
            let sum: CyclotomicNumber = table
                .irreducibles
                .iter()
                .zip(conj)
                .map(|(row, crow)| &row[j] * &crow[l])
                .sum();
            let expected = if j == l {
                BigRational::new(
                    BigInt::from(table.order),
                    BigInt::from(table.classes[j].size),
                )
            } else {
                BigRational::zero()
            };
            if sum.to_rational().as_ref() != Some(&expected) {
                return Some(format!(
                    "columns {} and {}: sum is {sum}, expected {}",
                    table.classes[j].name,
                    table.classes[l].name,
                    crate::rational::format_rational(&expected)
                ));
            }
        }
    }
    None
}

/// Element orders must match `o(g) / gcd(o(g), r)`; when `r` is prime to
/// `o(g)` the image class must carry the Galois-conjugate values
/// `chi(g^r) = sigma_r(chi(g))` and the same class size.
fn power_maps(table: &CharacterTable) -> Option<String> {
    for (&r, map) in &table.power_maps {
        for (g, &image) in map.iter().enumerate() {
            let o = table.classes[g].element_order;
            let expected = o / num_integer::gcd(o, r);
            let got = table.classes[image].element_order;
            if got != expected {
                return Some(format!(
                    "{}-th power of {} has order {got}, expected {expected}",
                    r, table.classes[g].name
                ));
            }
            if o % r != 0 {
                if table.classes[image].size != table.classes[g].size {
                    return Some(format!(
                        "{}-th power of {} lands in a class of different size",
                        r, table.classes[g].name
                    ));
                }
                for (chi, row) in table.irreducibles.iter().enumerate() {
                    let conjugate = row[g]
                        .galois(r as i64)
                        .unwrap_or_else(|_| row[g].clone());
                    if conjugate != row[image] {
                        return Some(format!(
                            "chi_{chi}({}) = {} but sigma_{r}(chi_{chi}({})) = {}",
                            table.classes[image].name, row[image], table.classes[g].name, conjugate
                        ));
                    }
                }
            }
        }
    }
    None
}
