//! Closed-form counts and bounds: the extremal congruence energies, Bell,
//! Stirling and 2-Bell numbers, the partition-lattice energy bound, and the
//! auxiliary differences whose signs drive the extremal inequalities.
//!
//! Everything is exact: counts are `BigUint`, signed differences `BigInt`,
//! and the pentagon sequence (which starts at 17/2) is a `BigRational`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

fn pow2(e: usize) -> BigUint {
    BigUint::one() << e
}

fn domain(msg: String) -> Error {
    Error::Domain(msg)
}

/// `(n − 1)·2^(n−1)`.
pub fn g_max(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(domain("g_max needs n >= 1".into()));
    }
    Ok(BigUint::from(n - 1) * pow2(n - 1))
}

/// `(n − 1)·2^(n−2) + 2^(n−3)`, an integer for `n ≥ 3`.
pub fn g_sb(n: usize) -> Result<BigUint> {
    if n < 3 {
        return Err(domain(format!("g_sb({n}) is not an integer; need n >= 3")));
    }
    Ok(BigUint::from(n - 1) * pow2(n - 2) + pow2(n - 3))
}

/// `2·g_sb(m)`, an integer already for `m = 2`.
fn twice_g_sb(m: usize) -> BigUint {
    debug_assert!(m >= 2);
    BigUint::from(m - 1) * pow2(m - 1) + pow2(m - 2)
}

/// `g_pn(4) = 17/2`, `g_pn(k) = 2·g_pn(k−1) + 5·2^(k−5)`.
pub fn g_pn(k: usize) -> Result<BigRational> {
    if k < 4 {
        return Err(domain(format!("g_pn({k}) is undefined; need k >= 4")));
    }
    let mut value = BigRational::new(BigInt::from(17), BigInt::from(2));
    for j in 5..=k {
        value = value * BigInt::from(2) + BigRational::from_integer(BigInt::from(5) << (j - 5));
    }
    Ok(value)
}

/// Bell numbers via the Bell triangle.
pub fn bell(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(domain("bell needs n >= 1".into()));
    }
    let mut row = vec![BigUint::one()];
    for _ in 1..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().expect("row is nonempty").clone());
        for x in &row {
            let v = next.last().expect("next is nonempty") + x;
            next.push(v);
        }
        row = next;
    }
    Ok(row.last().expect("row is nonempty").clone())
}

fn stirling_row(n: usize) -> Vec<BigUint> {
    // row[k] = S2(n, k), k = 0..=n
    let mut row = vec![BigUint::one()];
    for m in 1..=n {
        let mut next = vec![BigUint::zero(); m + 1];
        for k in 1..=m {
            let stay = if k < m { &row[k] * BigUint::from(k) } else { BigUint::zero() };
            next[k] = stay + &row[k - 1];
        }
        row = next;
    }
    row
}

/// `S2(n, k)`: partitions of an n-set into exactly k blocks.
pub fn stirling2(n: usize, k: usize) -> Result<BigUint> {
    if n == 0 || k == 0 || k > n {
        return Err(domain(format!("stirling2({n}, {k}) needs 1 <= k <= n")));
    }
    Ok(stirling_row(n).swap_remove(k))
}

/// `B2(n) = Σ_i i·S2(n, i)`.
pub fn bell2(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(domain("bell2 needs n >= 1".into()));
    }
    Ok(stirling_row(n)
        .into_iter()
        .enumerate()
        .map(|(i, s)| s * BigUint::from(i))
        .sum())
}

/// `2n·B(n) − 2·B2(n)`: the congruence energy of an algebra whose
/// congruences are all partitions.
pub fn equ_energy_bound(n: usize) -> Result<BigUint> {
    Ok(BigUint::from(2 * n) * bell(n)? - BigUint::from(2u8) * bell2(n)?)
}

/// Big counts go to JSON as decimal strings.
pub(crate) fn decimal<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    pub n: usize,
    #[serde(serialize_with = "decimal")]
    pub bound: BigUint,
}

pub fn equ_bound_table(max_n: usize) -> Result<Vec<BoundRow>> {
    (1..=max_n)
        .map(|n| Ok(BoundRow { n, bound: equ_energy_bound(n)? }))
        .collect()
}

fn int(u: BigUint) -> BigInt {
    BigInt::from(u)
}

/// `w(x) = g_max(n) − (2·g_max(n−x) + (4x−2)·2^(n−x−1))` for `1 ≤ x ≤ n−2`.
pub fn aux_w(n: usize, x: usize) -> Result<BigInt> {
    if x < 1 || x + 2 > n {
        return Err(domain(format!("aux_w({n}, {x}) needs 1 <= x <= n-2")));
    }
    let subtrahend = BigUint::from(2u8) * g_max(n - x)? + BigUint::from(4 * x - 2) * pow2(n - x - 1);
    Ok(int(g_max(n)?) - int(subtrahend))
}

/// `u_n(x) = g_sb(n) − (2·g_sb(n−x) + (4x−2)·2^(n−x−2))` for `1 ≤ x ≤ n−2`.
pub fn aux_u(n: usize, x: usize) -> Result<BigInt> {
    if n < 3 || x < 1 || x + 2 > n {
        return Err(domain(format!("aux_u({n}, {x}) needs n >= 3 and 1 <= x <= n-2")));
    }
    let subtrahend = twice_g_sb(n - x) + BigUint::from(4 * x - 2) * pow2(n - x - 2);
    Ok(int(g_sb(n)?) - int(subtrahend))
}

/// `v_n(x) = g_sb(n) − (2·g_sb(n−x) + (4x−2)·2^(n−x−1))` for `2 ≤ x ≤ n−2`.
pub fn aux_v(n: usize, x: usize) -> Result<BigInt> {
    if x < 2 || x + 2 > n {
        return Err(domain(format!("aux_v({n}, {x}) needs 2 <= x <= n-2")));
    }
    let subtrahend = twice_g_sb(n - x) + BigUint::from(4 * x - 2) * pow2(n - x - 1);
    Ok(int(g_sb(n)?) - int(subtrahend))
}
