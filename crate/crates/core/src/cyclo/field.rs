//! Per-conductor data for `Q(zeta_n)`: the cyclotomic polynomial, the power
//! basis images of every `zeta_n^j`, basis traces and subfield projections.
//! Everything here is computed once per conductor and shared.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub(crate) struct FieldData {
    pub phi: usize,
    /// `powers[j]` holds the coordinates of `zeta_n^j`, `0 <= j < n`.
    pub powers: Vec<Vec<BigInt>>,
    /// `basis_traces[i] = Tr(zeta_n^i)` for `0 <= i < phi`.
    pub basis_traces: Vec<BigInt>,
}

/// Solves `x = E c` for `c` when `x` lies in the subfield `Q(zeta_m)`.
pub(crate) struct Projection {
    /// Embedding matrix columns: coordinates in `Q(zeta_n)` of `zeta_m^j`.
    embed: Vec<Vec<BigInt>>,
    rows: Vec<usize>,
    inverse: Vec<Vec<BigRational>>,
}

pub(crate) fn euler_phi(n: usize) -> usize {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

pub(crate) fn prime_divisors(n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn poly_cache() -> &'static Mutex<HashMap<usize, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The n-th cyclotomic polynomial, lowest degree first.
pub(crate) fn cyclotomic_polynomial(n: usize) -> Arc<Vec<BigInt>> {
    if let Some(p) = poly_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut num = vec![BigInt::zero(); n + 1];
    num[0] = -BigInt::one();
    num[n] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let div = cyclotomic_polynomial(d);
            num = divide_monic(&num, &div);
        }
    }
    let poly = Arc::new(num);
    poly_cache().lock().unwrap().insert(n, poly.clone());
    poly
}

fn divide_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = rem[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    q
}

fn field_cache() -> &'static Mutex<HashMap<usize, Arc<FieldData>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<FieldData>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

pub(crate) fn field(n: usize) -> Arc<FieldData> {
    assert!(n >= 1, "conductor must be positive");
    if let Some(f) = field_cache().lock().unwrap().get(&n) {
        return f.clone();
    }
    let data = Arc::new(build_field(n));
    field_cache().lock().unwrap().insert(n, data.clone());
    data
}

fn build_field(n: usize) -> FieldData {
    let poly = cyclotomic_polynomial(n);
    let phi = poly.len() - 1;
    let mut powers = Vec::with_capacity(n);
    let mut cur = vec![BigInt::zero(); phi];
    cur[0] = BigInt::one();
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by zeta and reduce with the monic relation
        let top = cur[phi - 1].clone();
        for i in (1..phi).rev() {
            cur[i] = cur[i - 1].clone();
        }
        cur[0] = BigInt::zero();
        if !top.is_zero() {
            for i in 0..phi {
                cur[i] -= &top * &poly[i];
            }
        }
    }
    // Tr(zeta^i) as the explicit sum of its Galois conjugates zeta^(ik).
    let units: Vec<usize> = (1..=n).filter(|k| k.gcd(&n) == 1).collect();
    let basis_traces = (0..phi)
        .map(|i| {
            let mut sum = vec![BigInt::zero(); phi];
            for &k in &units {
                for (s, c) in sum.iter_mut().zip(&powers[(i * k) % n]) {
                    *s += c;
                }
            }
            debug_assert!(sum[1..].iter().all(Zero::is_zero));
            sum[0].clone()
        })
        .collect();
    FieldData {
        phi,
        powers,
        basis_traces,
    }
}

type ProjectionKey = (usize, usize);

fn projection_cache() -> &'static Mutex<HashMap<ProjectionKey, Arc<Projection>>> {
    static CACHE: OnceLock<Mutex<HashMap<ProjectionKey, Arc<Projection>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

pub(crate) fn projection(n: usize, m: usize) -> Arc<Projection> {
    if let Some(p) = projection_cache().lock().unwrap().get(&(n, m)) {
        return p.clone();
    }
    let p = Arc::new(build_projection(n, m));
    projection_cache().lock().unwrap().insert((n, m), p.clone());
    p
}

fn build_projection(n: usize, m: usize) -> Projection {
    debug_assert_eq!(n % m, 0);
    let big = field(n);
    let small_phi = euler_phi(m);
    let step = n / m;
    let embed: Vec<Vec<BigInt>> = (0..small_phi)
        .map(|j| big.powers[(j * step) % n].clone())
        .collect();

    // Pick small_phi independent rows of the phi(n) x phi(m) matrix by
    // elimination, then invert the selected square block.
    let to_rat = |x: &BigInt| BigRational::from_integer(x.clone());
    let mut work: Vec<Vec<BigRational>> = (0..big.phi)
        .map(|r| embed.iter().map(|col| to_rat(&col[r])).collect())
        .collect();
    let mut rows = Vec::with_capacity(small_phi);
    let mut used = vec![false; big.phi];
    for col in 0..small_phi {
        let pivot = (0..big.phi).find(|&r| !used[r] && !work[r][col].is_zero());
        let pivot = pivot.expect("subfield embedding has full column rank");
        used[pivot] = true;
        rows.push(pivot);
        let pv = work[pivot][col].clone();
        for r in 0..big.phi {
            if r != pivot && !work[r][col].is_zero() {
                let factor = &work[r][col] / &pv;
                for c in col..small_phi {
                    let delta = &factor * &work[pivot][c];
                    work[r][c] -= delta;
                }
            }
        }
    }
    let square: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|&r| embed.iter().map(|col| to_rat(&col[r])).collect())
        .collect();
    let inverse = invert(square);
    Projection {
        embed,
        rows,
        inverse,
    }
}

fn invert(mut a: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    let k = a.len();
    let mut inv: Vec<Vec<BigRational>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for col in 0..k {
        let pivot = (col..k)
            .find(|&r| !a[r][col].is_zero())
            .expect("square block is invertible");
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let pv = a[col][col].clone();
        for c in 0..k {
            a[col][c] /= &pv;
            inv[col][c] /= &pv;
        }
        for r in 0..k {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..k {
                    let da = &factor * &a[col][c];
                    a[r][c] -= da;
                    let di = &factor * &inv[col][c];
                    inv[r][c] -= di;
                }
            }
        }
    }
    inv
}

impl Projection {
    /// Coordinates in `Q(zeta_m)` of `x`, or `None` if `x` is not in that subfield.
    pub fn try_project(&self, x: &[BigRational]) -> Option<Vec<BigRational>> {
        let selected: Vec<&BigRational> = self.rows.iter().map(|&r| &x[r]).collect();
        let coords: Vec<BigRational> = self
            .inverse
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&selected)
                    .fold(BigRational::zero(), |acc, (a, b)| acc + a * *b)
            })
            .collect();
        for (r, xr) in x.iter().enumerate() {
            let mut v = BigRational::zero();
            for (col, c) in self.embed.iter().zip(&coords) {
                if !c.is_zero() && !col[r].is_zero() {
                    v += c * BigRational::from_integer(col[r].clone());
                }
            }
            if &v != xr {
                return None;
            }
        }
        Some(coords)
    }
}
