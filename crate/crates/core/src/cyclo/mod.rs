//! Exact arithmetic in cyclotomic fields `Q(zeta_n)`.
//!
//! A [`CyclotomicNumber`] is stored as the residue of a rational polynomial in
//! `zeta_n` modulo the n-th cyclotomic polynomial, i.e. as coordinates in the
//! power basis `1, zeta_n, ..., zeta_n^(phi(n)-1)`. Every arithmetic result is
//! brought to its minimal conductor, which makes the representation canonical.

mod field;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{format_rational, Fraction};

pub(crate) use field::{euler_phi, prime_divisors};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("conductor must be positive")]
    ZeroConductor,
    #[error("conductor {conductor} needs {expected} coefficients, got {actual}")]
    CoefficientCount {
        conductor: u64,
        expected: usize,
        actual: usize,
    },
    #[error("Galois exponent {k} is not coprime to conductor {conductor}")]
    NotCoprime { k: i64, conductor: u64 },
    #[error("element of conductor {conductor} does not lie in Q(zeta_{ambient})")]
    NotInField { conductor: u64, ambient: u64 },
}

/// An element of `Q(zeta_n)` with tracked conductor `n`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "CycloWire", into = "CycloWire")]
pub struct CyclotomicNumber {
    conductor: usize,
    coeffs: Vec<BigRational>,
}

#[derive(Serialize, Deserialize)]
struct CycloWire {
    n: u64,
    coeffs: Vec<Fraction>,
}

impl TryFrom<CycloWire> for CyclotomicNumber {
    type Error = CycloError;

    fn try_from(w: CycloWire) -> Result<Self, CycloError> {
        CyclotomicNumber::from_coeffs(w.n, w.coeffs.into_iter().map(|f| f.0).collect())
    }
}

impl From<CyclotomicNumber> for CycloWire {
    fn from(x: CyclotomicNumber) -> Self {
        CycloWire {
            n: x.conductor as u64,
            coeffs: x.coeffs.into_iter().map(Fraction).collect(),
        }
    }
}

impl CyclotomicNumber {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(r: BigRational) -> Self {
        CyclotomicNumber {
            conductor: 1,
            coeffs: vec![r],
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// Builds `sum coeffs[i] * zeta_n^i` and normalizes it.
    pub fn from_coeffs(n: u64, coeffs: Vec<BigRational>) -> Result<Self, CycloError> {
        Ok(Self::unreduced(n, coeffs)?.reduce_conductor())
    }

    /// Like [`from_coeffs`](Self::from_coeffs) but keeps the stated conductor.
    pub fn unreduced(n: u64, coeffs: Vec<BigRational>) -> Result<Self, CycloError> {
        if n == 0 {
            return Err(CycloError::ZeroConductor);
        }
        let n = n as usize;
        let phi = euler_phi(n);
        if coeffs.len() != phi {
            return Err(CycloError::CoefficientCount {
                conductor: n as u64,
                expected: phi,
                actual: coeffs.len(),
            });
        }
        Ok(CyclotomicNumber {
            conductor: n,
            coeffs,
        })
    }

    /// `zeta_k^e` for a fixed primitive k-th root of unity `zeta_k = exp(2 pi i / k)`.
    pub fn root_of_unity(k: u64, e: i64) -> Self {
        assert!(k >= 1, "root_of_unity needs k >= 1");
        let n = k as usize;
        let f = field::field(n);
        let j = e.rem_euclid(k as i64) as usize;
        let coeffs = f.powers[j]
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        CyclotomicNumber {
            conductor: n,
            coeffs,
        }
        .reduce_conductor()
    }

    pub fn conductor(&self) -> u64 {
        self.conductor as u64
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value as a rational, if it is one.
    pub fn to_rational(&self) -> Option<BigRational> {
        let r = self.reduce_conductor();
        (r.conductor == 1).then(|| r.coeffs[0].clone())
    }

    pub fn is_rational(&self) -> bool {
        self.to_rational().is_some()
    }

    /// Coordinates of `self` in `Q(zeta_m)`; `m` must be a multiple of the conductor.
    fn embed(&self, m: usize) -> Vec<BigRational> {
        debug_assert_eq!(m % self.conductor, 0);
        if m == self.conductor {
            return self.coeffs.clone();
        }
        let target = field::field(m);
        let step = m / self.conductor;
        let mut out = vec![BigRational::zero(); target.phi];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&target.powers[(i * step) % m]) {
                if !p.is_zero() {
                    *o += c * BigRational::from_integer(p.clone());
                }
            }
        }
        out
    }

    /// Represents the same value at the smallest possible conductor.
    /// Idempotent; the result is the canonical form used for equality.
    pub fn reduce_conductor(&self) -> Self {
        if self.coeffs.iter().skip(1).all(Zero::is_zero) {
            return Self::from_rational(self.coeffs[0].clone());
        }
        let mut n = self.conductor;
        let mut coeffs = self.coeffs.clone();
        if n % 4 == 2 {
            // zeta_n = -zeta_{n/2}^{(n/2 + 1)/2}
            let half = n / 2;
            let target = field::field(half);
            let h = (half + 1) / 2;
            let mut out = vec![BigRational::zero(); target.phi];
            for (i, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let signed = if i % 2 == 1 { -c.clone() } else { c.clone() };
                for (o, p) in out.iter_mut().zip(&target.powers[(i * h) % half]) {
                    if !p.is_zero() {
                        *o += &signed * BigRational::from_integer(p.clone());
                    }
                }
            }
            n = half;
            coeffs = out;
        }
        'descend: loop {
            if n == 1 {
                break;
            }
            for p in prime_divisors(n) {
                let mut m = n / p;
                if m % 4 == 2 {
                    m /= 2;
                }
                if let Some(c) = field::projection(n, m).try_project(&coeffs) {
                    n = m;
                    coeffs = c;
                    continue 'descend;
                }
            }
            break;
        }
        CyclotomicNumber {
            conductor: n,
            coeffs,
        }
    }

    fn from_lcm_coeffs(n: usize, coeffs: Vec<BigRational>) -> Self {
        CyclotomicNumber {
            conductor: n,
            coeffs,
        }
        .reduce_conductor()
    }

    fn zip_with(
        &self,
        other: &Self,
        op: impl Fn(&BigRational, &BigRational) -> BigRational,
    ) -> Self {
        let n = self.conductor.lcm(&other.conductor);
        let a = self.embed(n);
        let b = other.embed(n);
        let coeffs = a.iter().zip(&b).map(|(x, y)| op(x, y)).collect();
        Self::from_lcm_coeffs(n, coeffs)
    }

    fn multiply(&self, other: &Self) -> Self {
        if self.conductor == 1 {
            return other.scale(&self.coeffs[0]);
        }
        if other.conductor == 1 {
            return self.scale(&other.coeffs[0]);
        }
        let n = self.conductor.lcm(&other.conductor);
        let f = field::field(n);
        let a = self.embed(n);
        let b = other.embed(n);
        let mut by_exponent = vec![BigRational::zero(); n];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    by_exponent[(i + j) % n] += x * y;
                }
            }
        }
        let mut out = vec![BigRational::zero(); f.phi];
        for (e, c) in by_exponent.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&f.powers[e]) {
                if !p.is_zero() {
                    *o += c * BigRational::from_integer(p.clone());
                }
            }
        }
        Self::from_lcm_coeffs(n, out)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        CyclotomicNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplies by `zeta_k^e`.
    pub fn mul_root(&self, k: u64, e: i64) -> Self {
        self * &Self::root_of_unity(k, e)
    }

    /// The Galois automorphism `zeta_n -> zeta_n^k` applied to `self`.
    pub fn galois(&self, k: i64) -> Result<Self, CycloError> {
        let n = self.conductor;
        if (k.rem_euclid(n as i64) as usize).gcd(&n) != 1 {
            return Err(CycloError::NotCoprime {
                k,
                conductor: n as u64,
            });
        }
        if n == 1 {
            return Ok(self.clone());
        }
        let f = field::field(n);
        let k = k.rem_euclid(n as i64) as usize;
        let mut out = vec![BigRational::zero(); f.phi];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&f.powers[(i * k) % n]) {
                if !p.is_zero() {
                    *o += c * BigRational::from_integer(p.clone());
                }
            }
        }
        Ok(Self::from_lcm_coeffs(n, out))
    }

    pub fn complex_conjugate(&self) -> Self {
        self.galois(-1).expect("-1 is coprime to every conductor")
    }

    /// `Tr_{Q(zeta_m)/Q}(self)`, the sum of all Galois conjugates of `self`
    /// regarded as an element of `Q(zeta_m)`.
    pub fn trace(&self, m: u64) -> Result<BigRational, CycloError> {
        let reduced = self.reduce_conductor();
        let m = m as usize;
        if m == 0 || m % reduced.conductor != 0 {
            return Err(CycloError::NotInField {
                conductor: reduced.conductor as u64,
                ambient: m as u64,
            });
        }
        let f = field::field(m);
        let coords = reduced.embed(m);
        Ok(coords
            .iter()
            .zip(&f.basis_traces)
            .filter(|(c, _)| !c.is_zero())
            .fold(BigRational::zero(), |acc, (c, t)| {
                acc + c * BigRational::from_integer(t.clone())
            }))
    }

    /// True iff the minimal conductor is prime to `p`, i.e. `self` lies in a
    /// cyclotomic field in which `p` is unramified.
    pub fn is_p_rational(&self, p: u64) -> bool {
        let c = self.reduce_conductor().conductor as u64;
        c % p != 0
    }
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let n = self.conductor.lcm(&other.conductor);
        self.embed(n) == other.embed(n)
    }
}

impl Eq for CyclotomicNumber {}

impl Hash for CyclotomicNumber {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let r = self.reduce_conductor();
        r.conductor.hash(state);
        r.coeffs.hash(state);
    }
}

impl From<i64> for CyclotomicNumber {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigRational> for CyclotomicNumber {
    fn from(r: BigRational) -> Self {
        Self::from_rational(r)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a> $trait<&'a CyclotomicNumber> for &'a CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: &'a CyclotomicNumber) -> CyclotomicNumber {
                let f: fn(&CyclotomicNumber, &CyclotomicNumber) -> CyclotomicNumber = $body;
                f(self, rhs)
            }
        }

        impl $trait for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $method(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.zip_with(b, |x, y| x + y));
forward_binop!(Sub, sub, |a, b| a.zip_with(b, |x, y| x - y));
forward_binop!(Mul, mul, |a, b| a.multiply(b));

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        -&self
    }
}

impl std::iter::Sum for CyclotomicNumber {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl fmt::Display for CyclotomicNumber {
    /// Writes e.g. `3`, `-z5^2 - z5^3` or `1/2 + 1/2*z7`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduce_conductor();
        if r.conductor == 1 {
            return f.write_str(&format_rational(&r.coeffs[0]));
        }
        let mut first = true;
        for (i, c) in r.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let term = match i {
                0 => String::new(),
                1 => format!("z{}", r.conductor),
                _ => format!("z{}^{}", r.conductor, i),
            };
            if i == 0 {
                f.write_str(&format_rational(&mag))?;
            } else if mag.is_one() {
                f.write_str(&term)?;
            } else {
                write!(f, "{}*{}", format_rational(&mag), term)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_frac};

    fn z(k: u64, e: i64) -> CyclotomicNumber {
        CyclotomicNumber::root_of_unity(k, e)
    }

    fn raw(n: u64, c: &[i64]) -> CyclotomicNumber {
        CyclotomicNumber::unreduced(n, c.iter().map(|&x| rat(x)).collect()).unwrap()
    }

    #[test]
    fn root_of_unity_basics() {
        assert_eq!(z(1, 0), CyclotomicNumber::one());
        let i = z(4, 1);
        assert_eq!(i.conductor(), 4);
        assert_eq!(&i * &i, CyclotomicNumber::from_integer(-1));
        assert_eq!(z(7, 7), CyclotomicNumber::one());
        assert_eq!(z(7, -1), z(7, 6));
    }

    #[test]
    fn zeta6_is_one_plus_zeta3() {
        // brute-force residue check: in Q[x]/(x^2 - x + 1), x^2 = x - 1,
        // and zeta_3 = x^2 there, so x = 1 + x^2 = 1 + zeta_3.
        let z6 = z(6, 1);
        assert_eq!(z6, &z(3, 1) + &CyclotomicNumber::one());
        assert_eq!(z6.conductor(), 3);
        assert_eq!(&(&z6 * &z6) - &z6 + CyclotomicNumber::one(), CyclotomicNumber::zero());
    }

    #[test]
    fn sum_of_primitive_fifth_roots() {
        let s: CyclotomicNumber = (1..5).map(|e| z(5, e)).sum();
        assert_eq!(s, CyclotomicNumber::from_integer(-1));
    }

    #[test]
    fn product_of_mixed_conductors() {
        let p = &z(3, 1) * &z(4, 1);
        assert_eq!(p.conductor(), 12);
        // exponent arithmetic: zeta_12^4 * zeta_12^3 = zeta_12^7
        assert_eq!(p, z(12, 7));
    }

    #[test]
    fn galois_action() {
        assert_eq!(z(5, 1).galois(2).unwrap(), z(5, 2));
        let x = &z(5, 1) + &z(4, 1).scale(&rat(3));
        assert_eq!(x.galois(1).unwrap(), x);
        assert_eq!(x.galois(19).unwrap(), x.complex_conjugate());
        assert!(matches!(z(5, 1).galois(5), Err(CycloError::NotCoprime { .. })));
    }

    #[test]
    fn traces() {
        assert_eq!(z(7, 1).trace(7).unwrap(), rat(-1));
        assert_eq!(CyclotomicNumber::one().trace(12).unwrap(), rat(4));
        assert_eq!(z(5, -1).trace(10).unwrap(), rat(-1));
        assert_eq!(z(5, 0).trace(5).unwrap(), rat(4));
        assert!(z(5, 1).trace(6).is_err());
    }

    #[test]
    fn conductor_reduction() {
        assert_eq!(z(6, 3).conductor(), 1);
        assert_eq!(z(6, 3), CyclotomicNumber::from_integer(-1));
        // zeta_10 = -zeta_5^3, so zeta_10^2 + zeta_10^8 = zeta_5 + zeta_5^4
        let at10 = raw(10, &[0, 0, 0, 0]);
        assert_eq!(at10.reduce_conductor().conductor(), 1);
        let x = &z(5, 1) + &z(5, 4);
        let embedded = CyclotomicNumber::unreduced(10, x.embed(10)).unwrap();
        assert_eq!(embedded.conductor(), 10);
        let reduced = embedded.reduce_conductor();
        assert_eq!(reduced.conductor(), 5);
        assert_eq!(reduced, x);
        assert_eq!(reduced.reduce_conductor().coeffs(), reduced.coeffs());
        let half = CyclotomicNumber::unreduced(12, vec![rat_frac(1, 2), rat(0), rat(0), rat(0)]).unwrap();
        assert_eq!(half.reduce_conductor().conductor(), 1);
    }

    #[test]
    fn p_rationality() {
        let x = &z(5, 1) + &z(5, -1);
        assert!(x.is_p_rational(3));
        assert!(!z(5, 1).is_p_rational(5));
        assert!(z(10, 5).is_p_rational(5));
    }

    #[test]
    fn serde_round_trip_and_validation() {
        let x = &z(5, 2).scale(&rat_frac(-3, 2)) + &CyclotomicNumber::from_integer(1);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"n":5,"coeffs":["1","0","-3/2","0"]}"#);
        let back: CyclotomicNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<CyclotomicNumber>(r#"{"n":5,"coeffs":["1"]}"#).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(CyclotomicNumber::from_integer(-3).to_string(), "-3");
        assert_eq!((-(&z(5, 2) + &z(5, 3))).to_string(), "-z5^2 - z5^3");
    }
}
