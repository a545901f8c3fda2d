//! Exact dimensions of derivative spaces, by materializing the matrix of
//! derivative coefficients and computing its rank over the rationals.
//!
//! This is the trusted oracle every bound in the crate is checked against.
//! In the scaled basis `d_b x^g = x^(g-b)`, so the row of multi-index `b`
//! holds `a_g` in column `g - b` for every term `g ⊇ b`.

mod rank;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::poly::{Basis, ExponentVector, SparsePoly};
use crate::{Error, Resource, Result};

pub use rank::{dense_to_sparse, sparse_rank, SparseRow};

/// Caps shared by every exact (exponential-size) computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_rows: usize,
    pub max_cols: usize,
    /// Entry updates allowed during one elimination.
    pub elimination_budget: u64,
    /// Ordered term triples allowed in the trace triple sum.
    pub triple_budget: u128,
    /// Largest ground set for subset enumeration (graphs, complexes).
    pub max_ground: usize,
    /// Largest generated polynomial.
    pub max_terms: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_rows: 20_000,
            max_cols: 20_000,
            elimination_budget: 100_000_000,
            triple_budget: 1_000_000_000,
            max_ground: 24,
            max_terms: 1_000_000,
        }
    }
}

/// Which derivative orders span the space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderSpec {
    /// `d^{=k} f`: derivatives of order exactly `k`.
    Exact(u32),
    /// `d^* f`: all orders `0..=deg f`, including `f` itself and constants.
    All,
    /// `d^+ f`: orders `1..=deg f - 1`; needs `deg f >= 2`.
    Interior,
}

impl OrderSpec {
    /// Inclusive range of orders for a polynomial of degree `deg`.
    pub fn orders(&self, deg: u64) -> Result<(u64, u64)> {
        match *self {
            OrderSpec::Exact(k) => Ok((k as u64, k as u64)),
            OrderSpec::All => Ok((0, deg)),
            OrderSpec::Interior if deg >= 2 => Ok((1, deg - 1)),
            OrderSpec::Interior => Err(Error::Order(format!(
                "interior orders need degree >= 2, got {deg}"
            ))),
        }
    }
}

impl core::fmt::Display for OrderSpec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            OrderSpec::Exact(k) => write!(f, "={k}"),
            OrderSpec::All => f.write_str("*"),
            OrderSpec::Interior => f.write_str("+"),
        }
    }
}

/// Integer matrix of derivative coefficients.
///
/// Entries are scaled coefficients multiplied by `denominator`, the lcm of
/// their denominators. Rows and columns are sorted in lex order of their
/// labels; no stored row or column is identically zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivMatrix {
    pub rows: Vec<ExponentVector>,
    pub cols: Vec<ExponentVector>,
    pub entries: Vec<SparseRow>,
    pub denominator: BigInt,
    pub spec: OrderSpec,
}

impl DerivMatrix {
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    /// Number of pairwise distinct rows (as vectors).
    pub fn distinct_rows(&self) -> usize {
        self.entries.iter().collect::<BTreeSet<_>>().len()
    }

    pub fn nonzeros(&self) -> usize {
        self.entries.iter().map(|r| r.len()).sum()
    }
}

/// `d_b f` for `f` in the scaled basis: terms with `g ⊇ b` become `a_g x^(g-b)`.
pub fn derivative(f: &SparsePoly, beta: &ExponentVector) -> Result<SparsePoly> {
    if f.basis() != Basis::Scaled {
        return Err(Error::ExpectedScaled);
    }
    if beta.len() != f.nvars() {
        return Err(Error::Arity {
            expected: f.nvars(),
            got: beta.len(),
        });
    }
    SparsePoly::from_terms(
        f.vars().to_vec(),
        f.terms()
            .iter()
            .filter_map(|t| t.exps.checked_sub(beta).map(|e| (e, t.coef.clone()))),
        Basis::Scaled,
    )
}

/// Calls `visit` on every `b ⊆ alpha` with `lo <= |b| <= hi`.
pub(crate) fn for_each_sub_exponent<E>(
    alpha: &[u32],
    lo: u64,
    hi: u64,
    visit: &mut impl FnMut(&[u32]) -> core::result::Result<(), E>,
) -> core::result::Result<(), E> {
    // suffix[i] = sum of alpha[i..]
    let mut suffix = alloc::vec![0u64; alpha.len() + 1];
    for i in (0..alpha.len()).rev() {
        suffix[i] = suffix[i + 1] + alpha[i] as u64;
    }
    let mut cur = alloc::vec![0u32; alpha.len()];
    fn go<E>(
        i: usize,
        used: u64,
        alpha: &[u32],
        suffix: &[u64],
        lo: u64,
        hi: u64,
        cur: &mut [u32],
        visit: &mut impl FnMut(&[u32]) -> core::result::Result<(), E>,
    ) -> core::result::Result<(), E> {
        if i == alpha.len() {
            return if used >= lo { visit(cur) } else { Ok(()) };
        }
        for e in 0..=alpha[i] {
            let u = used + e as u64;
            if u > hi {
                break;
            }
            if u + suffix[i + 1] < lo {
                continue;
            }
            cur[i] = e;
            go(i + 1, u, alpha, suffix, lo, hi, cur, visit)?;
        }
        cur[i] = 0;
        Ok(())
    }
    go(0, 0, alpha, &suffix, lo, hi, &mut cur, visit)
}

/// Materializes the derivative matrix of `f` for the given orders.
///
/// `f` may be in either basis; it is converted to the scaled basis first.
pub fn build_matrix(f: &SparsePoly, spec: OrderSpec, limits: &Limits) -> Result<DerivMatrix> {
    let deg = f.degree().ok_or(Error::ZeroPolynomial)?;
    let (lo, hi) = spec.orders(deg)?;
    let f = f.to_scaled();

    // rows: every b of the requested orders below some term; such a
    // derivative is nonzero because distinct terms land in distinct columns
    let mut rows: BTreeSet<ExponentVector> = BTreeSet::new();
    for t in f.terms() {
        for_each_sub_exponent(t.exps.as_slice(), lo, hi, &mut |b| {
            let b = ExponentVector::new(b.to_vec());
            if rows.len() >= limits.max_rows && !rows.contains(&b) {
                return Err(Error::limit(Resource::Rows, limits.max_rows as u64, rows.len() as u64 + 1));
            }
            rows.insert(b);
            Ok(())
        })?;
    }
    let rows: Vec<ExponentVector> = rows.into_iter().collect();

    let (den, nums) = f.integer_coefficients();
    let mut cols: BTreeSet<ExponentVector> = BTreeSet::new();
    let mut raw: Vec<Vec<(ExponentVector, usize)>> = Vec::with_capacity(rows.len());
    for b in &rows {
        let mut entries = Vec::new();
        for (ti, t) in f.terms().iter().enumerate() {
            if let Some(g) = t.exps.checked_sub(b) {
                cols.insert(g.clone());
                if cols.len() > limits.max_cols {
                    return Err(Error::limit(Resource::Columns, limits.max_cols as u64, cols.len() as u64));
                }
                entries.push((g, ti));
            }
        }
        raw.push(entries);
    }
    let cols: Vec<ExponentVector> = cols.into_iter().collect();
    let index: BTreeMap<&ExponentVector, usize> = cols.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let entries = raw
        .into_iter()
        .map(|r| {
            let mut row: SparseRow = r.into_iter().map(|(g, ti)| (index[&g], nums[ti].clone())).collect();
            row.sort_by_key(|e| e.0);
            row
        })
        .collect();
    Ok(DerivMatrix {
        rows,
        cols,
        entries,
        denominator: den,
        spec,
    })
}

/// Rank over the rationals of a derivative matrix.
pub fn rank_exact(m: &DerivMatrix, limits: &Limits) -> Result<usize> {
    check_shape(m.nrows(), m.ncols(), limits)?;
    sparse_rank(m.entries.clone(), limits.elimination_budget)
}

pub(crate) fn check_shape(rows: usize, cols: usize, limits: &Limits) -> Result<()> {
    if rows > limits.max_rows {
        return Err(Error::limit(Resource::Rows, limits.max_rows as u64, rows as u64));
    }
    if cols > limits.max_cols {
        return Err(Error::limit(Resource::Columns, limits.max_cols as u64, cols as u64));
    }
    Ok(())
}

/// `dim d^{=k} f`, `dim d^* f` or `dim d^+ f`; zero for the zero polynomial.
pub fn dim_partials(f: &SparsePoly, spec: OrderSpec, limits: &Limits) -> Result<usize> {
    if f.is_zero() {
        return Ok(0);
    }
    if let OrderSpec::Exact(k) = spec {
        if Some(k as u64) > f.degree() {
            return Ok(0);
        }
    }
    rank_exact(&build_matrix(f, spec, limits)?, limits)
}

/// Dimension of the span of a list of polynomials over a common variable list.
///
/// Coefficients are compared in whatever basis the inputs share.
pub fn span_dim(polys: &[SparsePoly], limits: &Limits) -> Result<usize> {
    let Some(first) = polys.first() else { return Ok(0) };
    if polys.iter().any(|p| p.vars() != first.vars() || p.basis() != first.basis()) {
        return Err(Error::Variables("span needs a common variable list and basis".into()));
    }
    let cols: BTreeSet<&ExponentVector> = polys.iter().flat_map(|p| p.terms().iter().map(|t| &t.exps)).collect();
    check_shape(polys.len(), cols.len(), limits)?;
    let index: BTreeMap<&ExponentVector, usize> = cols.into_iter().enumerate().map(|(i, c)| (c, i)).collect();
    let rows = polys
        .iter()
        .map(|p| {
            let (_, nums) = p.integer_coefficients();
            p.terms().iter().zip(nums).map(|(t, v)| (index[&t.exps], v)).collect()
        })
        .collect();
    sparse_rank(rows, limits.elimination_budget)
}
