//! Elementary symmetric polynomials `Sym_{d,n}`, where the trace method is
//! far from tight.
//!
//! The order-`k` derivative matrix of `Sym_{d,n}` is the disjointness matrix
//! of `k`-sets versus `(d-k)`-sets, which has full rank. The entries of
//! `MMᵀ` depend only on the overlap of the two row sets,
//! `(MMᵀ)_{I,J} = C(n - |I ∪ J|, d - k)`, so both traces have closed forms:
//!
//! * `Tr(B)  = C(n-k, d-k) C(n, k)`
//! * `Tr(B²) = Σ_t C(n,k) C(k,t) C(n-k,k-t) C(n-2k+t, d-k)²` over overlaps `t`.

use alloc::vec::Vec;
use core::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::combinat::{binomial, binomial_u128, k_subsets};
use crate::exact::{sparse_rank, Limits, SparseRow};
use crate::poly::{numbered_vars, Basis, ExponentVector, Rational, SparsePoly};
use crate::{Error, Resource, Result};

fn c(n: u64, k: u64) -> BigUint {
    binomial(n as i64, k as i64)
}

fn c_signed(n: i64, k: i64) -> BigUint {
    binomial(n, k)
}

fn check(n: u64, d: u64, k: u64) -> Result<()> {
    if k > d || d > n {
        return Err(Error::Parameter(alloc::format!(
            "need 0 <= k <= d <= n, got n={n} d={d} k={k}"
        )));
    }
    Ok(())
}

/// `Σ_{|I| = d} x^I` in variables `x1..xn`.
pub fn sym_poly(n: usize, d: usize, limits: &Limits) -> Result<SparsePoly> {
    if d == 0 || d > n {
        return Err(Error::Parameter(alloc::format!("need 1 <= d <= n, got n={n} d={d}")));
    }
    let terms = binomial_u128(n as u64, d as u64);
    if terms > limits.max_terms as u128 {
        return Err(Error::limit(Resource::Terms, limits.max_terms as u64, terms));
    }
    let one = Rational::from_integer(1.into());
    SparsePoly::from_terms(
        numbered_vars("x", n),
        k_subsets(n, d)
            .into_iter()
            .map(|s| (ExponentVector::indicator(n, &s), one.clone())),
        Basis::Ordinary,
    )
}

/// `dim d^{=k} Sym_{d,n} = min(C(n,k), C(n,d-k))`, from the full rank of the
/// disjointness matrix.
pub fn sym_exact_dim(n: u64, d: u64, k: u64) -> Result<BigUint> {
    check(n, d, k)?;
    Ok(c(n, k).min(c(n, d - k)))
}

/// 0/1 matrix with rows the `k`-subsets and columns the `(d-k)`-subsets of
/// `0..n`, entry 1 iff disjoint.
pub fn disjointness_matrix(n: usize, d: usize, k: usize) -> Vec<SparseRow> {
    let cols = k_subsets(n, d - k);
    k_subsets(n, k)
        .into_iter()
        .map(|row| {
            cols.iter()
                .enumerate()
                .filter(|(_, col)| col.iter().all(|x| row.binary_search(x).is_err()))
                .map(|(j, _)| (j, BigInt::from(1)))
                .collect()
        })
        .collect()
}

/// Closed-form dimension with the elimination cross-check when it fits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimCheck {
    pub closed_form: BigUint,
    /// Rank of the materialized disjointness matrix; `None` beyond limits.
    pub oracle: Option<usize>,
}

impl DimCheck {
    pub fn agrees(&self) -> bool {
        self.oracle.is_none_or(|r| BigUint::from(r) == self.closed_form)
    }
}

pub fn sym_exact_dim_checked(n: u64, d: u64, k: u64, limits: &Limits) -> Result<DimCheck> {
    let closed_form = sym_exact_dim(n, d, k)?;
    let rows = binomial_u128(n, k);
    let cols = binomial_u128(n, d - k);
    let oracle = if rows <= limits.max_rows as u128 && cols <= limits.max_cols as u128 {
        let m = disjointness_matrix(n as usize, d as usize, k as usize);
        match sparse_rank(m, limits.elimination_budget) {
            Ok(r) => Some(r),
            Err(e) if e.is_resource_limit() => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    Ok(DimCheck { closed_form, oracle })
}

/// `Tr(B) = C(n-k, d-k) C(n, k)`.
pub fn sym_trace_b(n: u64, d: u64, k: u64) -> Result<BigUint> {
    check(n, d, k)?;
    Ok(c(n - k, d - k) * c(n, k))
}

/// `Tr(B²)` summed over the overlap size `t = |I ∩ J|` of pairs of rows.
pub fn sym_trace_b2(n: u64, d: u64, k: u64) -> Result<BigUint> {
    check(n, d, k)?;
    let (n, d, k) = (n as i64, d as i64, k as i64);
    let rows = c_signed(n, k);
    Ok((0..=k)
        .map(|t| {
            let entry = c_signed(n - 2 * k + t, d - k);
            &rows * c_signed(k, t) * c_signed(n - k, k - t) * &entry * &entry
        })
        .sum())
}

/// `v = Tr(B)² / Tr(B²)`, zero when `B = 0`.
pub fn sym_proxy(n: u64, d: u64, k: u64) -> Result<Rational> {
    let tr = sym_trace_b(n, d, k)?;
    let tr2 = sym_trace_b2(n, d, k)?;
    if tr2.is_zero() {
        return Ok(Rational::zero());
    }
    Ok(Rational::new(BigInt::from(&tr * &tr), BigInt::from(tr2)))
}

/// Upper bound on `v` from the disjoint-pairs subsum of `Tr(B²)`:
/// `C(n-k,d-k)² C(n,k)² / (C(n-2k,d-k)² C(n-k,k) C(n,k))`.
/// `None` when the subsum is empty (`n < d + k`).
pub fn sym_upper_v(n: u64, d: u64, k: u64) -> Result<Option<Rational>> {
    check(n, d, k)?;
    let (ni, di, ki) = (n as i64, d as i64, k as i64);
    let low = c_signed(ni - 2 * ki, di - ki);
    let den = &low * &low * c(n - k, k) * c(n, k);
    if den.is_zero() {
        return Ok(None);
    }
    let top = c(n - k, d - k) * c(n, k);
    Ok(Some(Rational::new(BigInt::from(&top * &top), BigInt::from(den))))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymGapPoint {
    pub n: u64,
    pub d: u64,
    pub k: u64,
    /// Exact dimension.
    pub u: BigUint,
    /// Proxy rank.
    pub v: Rational,
    pub upper_v: Option<Rational>,
    /// `v / u`.
    pub ratio: Rational,
}

pub fn sym_gap_point(n: u64, d: u64, k: u64) -> Result<SymGapPoint> {
    let u = sym_exact_dim(n, d, k)?;
    let v = sym_proxy(n, d, k)?;
    let ratio = &v / Rational::from_integer(BigInt::from(u.clone()));
    Ok(SymGapPoint {
        n,
        d,
        k,
        u,
        v,
        upper_v: sym_upper_v(n, d, k)?,
        ratio,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GapMode {
    /// Fixed `d`, `k` with growing `n`.
    Fixed { d: u64, k: u64, n: RangeInclusive<u64> },
    /// `k = k'm`, `d = d'm`, `n = n'm` for `m` in the range.
    Scaled {
        kp: u64,
        dp: u64,
        np: u64,
        m: RangeInclusive<u64>,
    },
}

/// The series of gap points, ordered by the varying parameter.
///
/// In scaled mode `k'` is replaced by `d' - k'` when `2k' > d'`; the
/// dimension is symmetric under `k <-> d - k`.
pub fn sym_gap_series(mode: &GapMode) -> Result<Vec<SymGapPoint>> {
    match mode {
        GapMode::Fixed { d, k, n } => {
            if n.is_empty() {
                return Ok(Vec::new());
            }
            if !(k < d && d < n.start()) {
                return Err(Error::Parameter(alloc::format!(
                    "fixed series needs k < d < n, got d={d} k={k} n from {}",
                    n.start()
                )));
            }
            n.clone().map(|n| sym_gap_point(n, *d, *k)).collect()
        }
        GapMode::Scaled { kp, dp, np, m } => {
            if !(0 < *kp && kp < dp && 2 * dp < *np) {
                return Err(Error::Parameter(alloc::format!(
                    "scaled series needs 0 < k' < d' < n'/2, got k'={kp} d'={dp} n'={np}"
                )));
            }
            if *m.start() == 0 {
                return Err(Error::Parameter("scaled series needs m >= 1".into()));
            }
            let kp = if 2 * kp > *dp { dp - kp } else { *kp };
            m.clone().map(|m| sym_gap_point(np * m, dp * m, kp * m)).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn small_sym_polys() {
        let l = Limits::default();
        assert_eq!(sym_poly(3, 1, &l).unwrap().terms().len(), 3);
        let s33 = sym_poly(3, 3, &l).unwrap();
        assert_eq!(s33.terms().len(), 1);
        assert_eq!(s33.terms()[0].exps.as_slice(), &[1, 1, 1]);
        assert_eq!(sym_poly(4, 2, &l).unwrap().terms().len(), 6);
        assert!(sym_poly(3, 0, &l).is_err());
        let tight = Limits {
            max_terms: 5,
            ..Limits::default()
        };
        assert!(sym_poly(4, 2, &tight).unwrap_err().is_resource_limit());
    }

    #[test]
    fn closed_forms_at_6_3_1() {
        assert_eq!(sym_exact_dim(6, 3, 1).unwrap(), u(6));
        assert_eq!(sym_exact_dim(6, 3, 0).unwrap(), u(1));
        assert_eq!(sym_exact_dim(6, 3, 3).unwrap(), u(1));
        assert_eq!(sym_trace_b(6, 3, 1).unwrap(), u(60));
        assert_eq!(sym_trace_b(6, 3, 0).unwrap(), u(20));
        assert_eq!(sym_trace_b2(6, 3, 0).unwrap(), u(400));
        assert!(sym_trace_b2(6, 3, 1).unwrap() >= u(1080));
        let chk = sym_exact_dim_checked(6, 3, 1, &Limits::default()).unwrap();
        assert_eq!(chk.oracle, Some(6));
        assert!(chk.agrees());
        assert!(sym_exact_dim(3, 4, 1).is_err());
    }

    #[test]
    fn proxy_at_least_one() {
        for n in 1..12 {
            for d in 1..=n {
                for k in 0..=d {
                    assert!(sym_proxy(n, d, k).unwrap() >= Rational::from_integer(1.into()));
                }
            }
        }
    }

    #[test]
    fn dimension_symmetric_in_k() {
        for n in 1..15 {
            for d in 1..=n {
                for k in 0..=d {
                    assert_eq!(sym_exact_dim(n, d, k).unwrap(), sym_exact_dim(n, d, d - k).unwrap());
                }
            }
        }
    }

    #[test]
    fn series_parameters() {
        let pts = sym_gap_series(&GapMode::Fixed { d: 3, k: 1, n: 4..=10 }).unwrap();
        assert_eq!(pts.len(), 7);
        assert!(pts.iter().all(|p| p.upper_v.as_ref().is_some_and(|up| &p.v <= up)));
        assert!(sym_gap_series(&GapMode::Fixed { d: 3, k: 1, n: 3..=10 }).is_err());
        assert!(sym_gap_series(&GapMode::Scaled { kp: 1, dp: 3, np: 6, m: 1..=2 }).is_err());
        // 2k' > d' is normalized to d' - k'
        let a = sym_gap_series(&GapMode::Scaled { kp: 2, dp: 3, np: 8, m: 1..=2 }).unwrap();
        assert!(a.iter().all(|p| 2 * p.k < p.d));
    }
}
