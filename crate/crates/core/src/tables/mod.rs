//! Character tables: the data model, JSON ingestion, exact validation, and
//! derived element-order data (spectrum and prime graph).

mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclo::{prime_divisors, CyclotomicNumber};

pub use validate::{validate, CheckResult, ValidationReport};

#[derive(Debug, Error)]
pub enum TableError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed table document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed table: {0}")]
    Shape(String),
    #[error("no power map stored for prime {0}")]
    MissingPowerMap(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConjugacyClass {
    pub name: String,
    pub size: u64,
    pub element_order: u64,
}

/// An ordinary character table with prime power maps.
///
/// Rows of `irreducibles` are characters, columns follow `classes`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CharacterTable {
    pub group_name: String,
    pub order: u64,
    pub classes: Vec<ConjugacyClass>,
    /// prime `r` -> class index of `g^r` for each class `g`.
    pub power_maps: BTreeMap<u64, Vec<usize>>,
    pub irreducibles: Vec<Vec<CyclotomicNumber>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeGraph {
    pub vertices: BTreeSet<u64>,
    /// Edges `(p, q)` with `p < q`.
    pub edges: BTreeSet<(u64, u64)>,
}

impl PrimeGraph {
    /// Vertices are the primes dividing some order; `{p, q}` is an edge iff
    /// some order is divisible by `pq`.
    pub fn from_orders<'a>(orders: impl IntoIterator<Item = &'a u64>) -> Self {
        let orders: BTreeSet<u64> = orders.into_iter().copied().collect();
        let mut graph = PrimeGraph::default();
        for &o in &orders {
            let primes: Vec<u64> = prime_divisors(o as usize).into_iter().map(|p| p as u64).collect();
            graph.vertices.extend(primes.iter().copied());
            for (i, &p) in primes.iter().enumerate() {
                for &q in &primes[i + 1..] {
                    graph.edges.insert((p.min(q), p.max(q)));
                }
            }
        }
        graph
    }

    pub fn has_edge(&self, p: u64, q: u64) -> bool {
        self.edges.contains(&(p.min(q), p.max(q)))
    }

    /// All unordered vertex pairs `(p, q)`, `p < q`, in ascending order.
    pub fn vertex_pairs(&self) -> Vec<(u64, u64)> {
        let v: Vec<u64> = self.vertices.iter().copied().collect();
        let mut out = Vec::new();
        for (i, &p) in v.iter().enumerate() {
            for &q in &v[i + 1..] {
                out.push((p, q));
            }
        }
        out
    }
}

/// Parses a table document and checks the shape needed for safe indexing.
/// Mathematical consistency is the job of [`validate`].
pub fn parse_table(document: &str) -> Result<CharacterTable, TableError> {
    let table: CharacterTable = serde_json::from_str(document)?;
    table.check_shape()?;
    Ok(table)
}

impl CharacterTable {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, TableError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| TableError::Io {
            path: path.display().to_string(),
            source,
        })?;
        parse_table(&text)
    }

    fn check_shape(&self) -> Result<(), TableError> {
        let k = self.classes.len();
        if k == 0 {
            return Err(TableError::Shape("no conjugacy classes".into()));
        }
        if self.order == 0 {
            return Err(TableError::Shape("group order must be positive".into()));
        }
        for c in &self.classes {
            if c.size == 0 || c.element_order == 0 {
                return Err(TableError::Shape(format!(
                    "class {} has zero size or element order",
                    c.name
                )));
            }
        }
        for (i, row) in self.irreducibles.iter().enumerate() {
            if row.len() != k {
                return Err(TableError::Shape(format!(
                    "character {i} has {} values for {k} classes",
                    row.len()
                )));
            }
        }
        for (&r, map) in &self.power_maps {
            if map.len() != k {
                return Err(TableError::Shape(format!(
                    "power map {r} has {} entries for {k} classes",
                    map.len()
                )));
            }
            if let Some(&bad) = map.iter().find(|&&j| j >= k) {
                return Err(TableError::Shape(format!(
                    "power map {r} points at class {bad}, out of range"
                )));
            }
        }
        for p in self.primes() {
            if !self.power_maps.contains_key(&p) {
                return Err(TableError::MissingPowerMap(p));
            }
        }
        Ok(())
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn num_characters(&self) -> usize {
        self.irreducibles.len()
    }

    pub fn value(&self, character: usize, class: usize) -> &CyclotomicNumber {
        &self.irreducibles[character][class]
    }

    pub fn element_order(&self, class: usize) -> u64 {
        self.classes[class].element_order
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u64 {
        self.classes
            .iter()
            .fold(1, |acc, c| num_integer::lcm(acc, c.element_order))
    }

    /// Primes dividing some element order.
    pub fn primes(&self) -> Vec<u64> {
        prime_divisors(self.exponent() as usize)
            .into_iter()
            .map(|p| p as u64)
            .collect()
    }

    /// Index of the identity class (order 1).
    pub fn identity_class(&self) -> Option<usize> {
        self.classes.iter().position(|c| c.element_order == 1)
    }

    pub fn classes_of_order(&self, order: u64) -> Vec<usize> {
        (0..self.classes.len())
            .filter(|&i| self.classes[i].element_order == order)
            .collect()
    }

    /// Class of `g^d` for every class `g`, composing the stored prime maps
    /// along the factorization of `d`. A prime that does not divide the
    /// exponent permutes the classes; its map is recovered from the Galois
    /// action on columns when it is not stored.
    pub fn power_map(&self, d: u64) -> Result<Vec<usize>, TableError> {
        if d == 0 {
            return Err(TableError::MissingPowerMap(0));
        }
        let mut map: Vec<usize> = (0..self.classes.len()).collect();
        let mut rest = d;
        for p in prime_divisors(d as usize) {
            let p = p as u64;
            let step = match self.power_maps.get(&p) {
                Some(step) => step.clone(),
                None if self.exponent() % p != 0 => self.galois_power_map(p)?,
                None => return Err(TableError::MissingPowerMap(p)),
            };
            while rest % p == 0 {
                rest /= p;
                for m in map.iter_mut() {
                    *m = step[*m];
                }
            }
        }
        Ok(map)
    }

    fn galois_power_map(&self, r: u64) -> Result<Vec<usize>, TableError> {
        (0..self.num_classes())
            .map(|g| {
                let image: Vec<CyclotomicNumber> = self
                    .irreducibles
                    .iter()
                    .map(|row| row[g].galois(r as i64))
                    .collect::<Result<_, _>>()
                    .map_err(|e| TableError::Shape(e.to_string()))?;
                (0..self.num_classes())
                    .find(|&h| {
                        self.classes[h].element_order == self.classes[g].element_order
                            && self.irreducibles.iter().zip(&image).all(|(row, v)| row[h] == *v)
                    })
                    .ok_or(TableError::MissingPowerMap(r))
            })
            .collect()
    }

    /// Class of `g^d` for a single class.
    pub fn power_of(&self, class: usize, d: u64) -> Result<usize, TableError> {
        Ok(self.power_map(d)?[class])
    }

    /// The set of element orders of the listed classes.
    pub fn spectrum(&self) -> BTreeSet<u64> {
        self.classes.iter().map(|c| c.element_order).collect()
    }

    pub fn prime_graph(&self) -> PrimeGraph {
        PrimeGraph::from_orders(&self.spectrum())
    }
}

pub fn spectrum(table: &CharacterTable) -> BTreeSet<u64> {
    table.spectrum()
}

pub fn prime_graph(table: &CharacterTable) -> PrimeGraph {
    table.prime_graph()
}
