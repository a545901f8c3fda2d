//! Exact combinatorial helpers: binomials, factorials, subset enumeration.

use alloc::vec::Vec;
use num_bigint::BigUint;
use num_traits::{One, Zero};

/// `C(n, k)` as an exact big integer, zero when `k < 0` or `k > n`.
///
/// Multiplicative formula; every intermediate quotient is an integer.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if k < 0 || n < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` saturating at `u128::MAX`; used for cap checks only.
pub fn binomial_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) is exact; fall back to saturation on overflow
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i as u128 + 1),
            None => return u128::MAX,
        }
    }
    acc
}

pub fn factorial(n: u32) -> BigUint {
    (2..=n as u64).fold(BigUint::one(), |acc, i| acc * i)
}

/// All `k`-element subsets of `0..n`, each sorted, in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // find rightmost position that can still advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
