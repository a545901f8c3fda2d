//! Trace-method lower bounds.
//!
//! Let `M` be the matrix of multilinear derivatives of order `k` (row `I` is
//! a `k`-subset of the variables, `M_{I,J} = a_{I+J}` in the scaled basis) and
//! `B = MᵀM`. Then `rank B = rank M <= dim d^{=k} f` and, by Cauchy–Schwarz on
//! the eigenvalues, `rank B >= Tr(B)² / Tr(B²)`.
//!
//! `Tr(B) = Σ_P C(sup P, k) a_P²` is immediate. `Tr(B²)` sums
//! `N(P,Q,R) a_P a_Q a_R a_{Q+R-P}` over ordered triples of monomials, where
//! `N(P,Q,R)` counts the rows `I` completing a valid quadruple; it has a
//! closed form, so the whole proxy rank takes `O(s³ n)` arithmetic operations
//! for `s` monomials in `n` variables.

use alloc::vec::Vec;
use core::ops::Range;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::Rng;

use crate::combinat::{binomial, binomial_u128, k_subsets};
use crate::exact::{dense_to_sparse, sparse_rank, DerivMatrix, Limits, OrderSpec, SparseRow};
use crate::poly::{ExponentVector, Rational, SparsePoly};
use crate::{Error, Resource, Result};

/// Trace statistics of `B = MᵀM` for one `(f, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStats {
    pub tr_b: Rational,
    pub tr_b2: Rational,
    /// `Tr(B)² / Tr(B²)`, or zero when `B = 0`.
    pub proxy: Rational,
    /// `B = 0`: the bound is vacuous.
    pub vacuous: bool,
    pub k: u32,
    pub monomial_count: usize,
}

/// The pieces of `N(P,Q,R) = C(zeros, k - ones)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadCount {
    pub ones: usize,
    pub zeros: usize,
    pub n: BigUint,
}

/// `N(P,Q,R)` with its counting data, or `None` when one of the rejection
/// tests applies (so `N = 0`).
///
/// `monomials` must be the monomial set of `f`.
pub fn quad_count(
    p: &ExponentVector,
    q: &ExponentVector,
    r: &ExponentVector,
    k: u32,
    monomials: &SparsePoly,
) -> Option<QuadCount> {
    // Q + R - P must be a monomial of f
    let s: Option<Vec<u32>> = (0..p.len())
        .map(|i| (q[i] + r[i]).checked_sub(p[i]))
        .collect();
    if !monomials.contains_monomial(&ExponentVector::new(s?)) {
        return None;
    }
    let (ones, zeros) = shape_of(p, q, r)?;
    let n = if k as usize >= ones {
        binomial(zeros as i64, k as i64 - ones as i64)
    } else {
        BigUint::zero()
    };
    Some(QuadCount { ones, zeros, n })
}

/// `(ones, zeros)` when `P - R ∈ {-1,0,1}ⁿ` is balanced and every `+1`
/// position is positive in `min(P, Q)`.
fn shape_of(p: &ExponentVector, q: &ExponentVector, r: &ExponentVector) -> Option<(usize, usize)> {
    let (mut ones, mut minus, mut zeros) = (0usize, 0usize, 0usize);
    for i in 0..p.len() {
        let d = p[i] as i64 - r[i] as i64;
        let low = p[i].min(q[i]);
        match d {
            1 if low == 0 => return None,
            1 => ones += 1,
            -1 => minus += 1,
            0 if low > 0 => zeros += 1,
            0 => {}
            _ => return None,
        }
    }
    (ones == minus).then_some((ones, zeros))
}

/// `N(P,Q,R)`: the number of row indices `I` with `(P,Q,R,I)` valid.
pub fn count_n(
    p: &ExponentVector,
    q: &ExponentVector,
    r: &ExponentVector,
    k: u32,
    monomials: &SparsePoly,
) -> BigUint {
    quad_count(p, q, r, k, monomials).map_or_else(BigUint::zero, |c| c.n)
}

/// Precomputed integer data for the trace sums of one `(f, k)`.
///
/// Coefficients are the scaled ones multiplied by their common denominator
/// `D`, so `Tr(B)` is accumulated times `D²` and `Tr(B²)` times `D⁴`. The
/// triple sum can be split over ranges of the outer index and the partial
/// sums added in any order.
#[derive(Debug, Clone)]
pub struct TraceContext {
    f: SparsePoly,
    k: u32,
    den: BigInt,
    nums: Vec<BigInt>,
    /// choose[z] = C(z, j) for j = 0..=k
    choose: Vec<Vec<BigInt>>,
}

impl TraceContext {
    pub fn new(f: &SparsePoly, k: u32) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let f = f.to_scaled();
        let (den, nums) = f.integer_coefficients();
        let choose = (0..=f.nvars())
            .map(|z| (0..=k).map(|j| BigInt::from(binomial(z as i64, j as i64))).collect())
            .collect();
        Ok(TraceContext { f, k, den, nums, choose })
    }

    pub fn monomial_count(&self) -> usize {
        self.f.terms().len()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// The scaled polynomial the sums refer to.
    pub fn scaled(&self) -> &SparsePoly {
        &self.f
    }

    pub fn trace_b(&self) -> Rational {
        let sum: BigInt = self
            .f
            .terms()
            .iter()
            .zip(&self.nums)
            .map(|(t, a)| &self.choose[t.exps.support()][self.k as usize] * a * a)
            .sum();
        Rational::new(sum, &self.den * &self.den)
    }

    pub fn check_budget(&self, limits: &Limits) -> Result<()> {
        let s = self.monomial_count() as u128;
        let triples = s.saturating_mul(s).saturating_mul(s);
        if triples > limits.triple_budget {
            return Err(Error::limit(Resource::TripleSum, limits.triple_budget, triples));
        }
        Ok(())
    }

    /// `Σ N(P,Q,R) a_P a_Q a_R a_{Q+R-P}` (times `D⁴`) for `P` in `outer`.
    pub fn trace_b2_partial(&self, outer: Range<usize>) -> BigInt {
        let terms = self.f.terms();
        let k = self.k as usize;
        let mut acc = BigInt::zero();
        let mut s = alloc::vec![0u32; self.f.nvars()];
        for pi in outer {
            let p = &terms[pi].exps;
            for (ri, rt) in terms.iter().enumerate() {
                let r = &rt.exps;
                // P - R must lie in {-1,0,1}^n with as many +1 as -1
                let mut plus = 0usize;
                let mut minus = 0usize;
                let ok = (0..p.len()).all(|i| match p[i] as i64 - r[i] as i64 {
                    0 => true,
                    1 => {
                        plus += 1;
                        true
                    }
                    -1 => {
                        minus += 1;
                        true
                    }
                    _ => false,
                });
                if !ok || plus != minus || plus > k {
                    continue;
                }
                let apr = &self.nums[pi] * &self.nums[ri];
                for (qi, qt) in terms.iter().enumerate() {
                    let q = &qt.exps;
                    let Some((ones, zeros)) = shape_of(p, q, r) else { continue };
                    let c = &self.choose[zeros][k - ones];
                    if c.is_zero() {
                        continue;
                    }
                    let mut inside = true;
                    for i in 0..p.len() {
                        match (q[i] + r[i]).checked_sub(p[i]) {
                            Some(v) => s[i] = v,
                            None => {
                                inside = false;
                                break;
                            }
                        }
                    }
                    if !inside {
                        continue;
                    }
                    let Ok(si) = terms.binary_search_by(|t| t.exps.as_slice().cmp(&s[..])) else {
                        continue;
                    };
                    acc += c * &apr * &self.nums[qi] * &self.nums[si];
                }
            }
        }
        acc
    }

    /// Converts a (sum of) partial results into `Tr(B²)`.
    pub fn finish_b2(&self, partial: BigInt) -> Rational {
        let d2 = &self.den * &self.den;
        Rational::new(partial, &d2 * &d2)
    }

    pub fn trace_b2(&self, limits: &Limits) -> Result<Rational> {
        self.check_budget(limits)?;
        Ok(self.finish_b2(self.trace_b2_partial(0..self.monomial_count())))
    }

    /// Assembles the statistics from the two traces.
    pub fn stats(&self, tr_b: Rational, tr_b2: Rational) -> TraceStats {
        let vacuous = tr_b2.is_zero();
        let proxy = if vacuous {
            Rational::zero()
        } else {
            &tr_b * &tr_b / &tr_b2
        };
        TraceStats {
            tr_b,
            tr_b2,
            proxy,
            vacuous,
            k: self.k,
            monomial_count: self.monomial_count(),
        }
    }
}

/// `Tr(B) = Σ_P C(sup P, k) a_P²` over scaled coefficients.
pub fn trace_b(f: &SparsePoly, k: u32) -> Result<Rational> {
    Ok(TraceContext::new(f, k)?.trace_b())
}

/// `Tr(B²)` by the triple sum over monomials.
pub fn trace_b2(f: &SparsePoly, k: u32, limits: &Limits) -> Result<Rational> {
    TraceContext::new(f, k)?.trace_b2(limits)
}

/// `Tr(B)² / Tr(B²)` with both traces.
pub fn proxy_rank(f: &SparsePoly, k: u32, limits: &Limits) -> Result<TraceStats> {
    let ctx = TraceContext::new(f, k)?;
    let tr_b2 = ctx.trace_b2(limits)?;
    Ok(ctx.stats(ctx.trace_b(), tr_b2))
}

/// `L(f) = Σ_P C(sup P, k) a_P² / (|M| Σ_P a_P²)` over scaled coefficients.
/// With all `|a_P|` equal this is `Σ_P C(sup P, k) / |M|²`.
pub fn closed_form_l(f: &SparsePoly, k: u32) -> Result<Rational> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let f = f.to_scaled();
    Ok(l_of(f.terms().iter().map(|t| (t.exps.support(), t.coef.clone())), k))
}

fn l_of(terms: impl Iterator<Item = (usize, Rational)>, k: u32) -> Rational {
    let mut weighted = Rational::zero();
    let mut total = Rational::zero();
    let mut count = 0usize;
    for (sup, a) in terms {
        let sq = &a * &a;
        weighted += Rational::from_integer(binomial(sup as i64, k as i64).into()) * &sq;
        total += sq;
        count += 1;
    }
    weighted / (total * Rational::from_integer(count.into()))
}

/// Explicitly materialized `M` (multilinear rows only) and `B = MᵀM`.
#[derive(Debug, Clone)]
pub struct ExplicitTrace {
    pub m: DerivMatrix,
    /// `B` times `D²`, indexed by the columns of `m`.
    pub b: Vec<Vec<BigInt>>,
    pub tr_b: Rational,
    pub tr_b2: Rational,
    pub rank_b: usize,
}

/// Builds `M` with rows the `k`-subsets `I` (those with `d_I f ≠ 0`) and
/// `M_{I,J} = a_{I+J}`, forms `B = MᵀM` and reads off its traces and rank.
pub fn explicit_b_oracle(f: &SparsePoly, k: u32, limits: &Limits) -> Result<ExplicitTrace> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = f.nvars();
    let subsets = binomial_u128(n as u64, k as u64);
    if subsets > limits.max_rows as u128 {
        return Err(Error::limit(Resource::Rows, limits.max_rows as u64, subsets));
    }
    let f = f.to_scaled();
    let (den, nums) = f.integer_coefficients();

    let mut rows = Vec::new();
    let mut raw: Vec<Vec<(ExponentVector, BigInt)>> = Vec::new();
    for set in k_subsets(n, k as usize) {
        let i = ExponentVector::indicator(n, &set);
        let entries: Vec<_> = f
            .terms()
            .iter()
            .zip(&nums)
            .filter_map(|(t, a)| t.exps.checked_sub(&i).map(|j| (j, a.clone())))
            .collect();
        if !entries.is_empty() {
            rows.push(i);
            raw.push(entries);
        }
    }
    let mut cols: Vec<ExponentVector> = raw.iter().flatten().map(|(j, _)| j.clone()).collect();
    cols.sort();
    cols.dedup();
    if cols.len() > limits.max_cols {
        return Err(Error::limit(Resource::Columns, limits.max_cols as u64, cols.len() as u64));
    }
    let col_of = |j: &ExponentVector| cols.binary_search(j).expect("column present");
    let entries: Vec<SparseRow> = raw
        .into_iter()
        .map(|r| {
            let mut row: SparseRow = r.into_iter().map(|(j, a)| (col_of(&j), a)).collect();
            row.sort_by_key(|e| e.0);
            row
        })
        .collect();

    let c = cols.len();
    let mut b = alloc::vec![alloc::vec![BigInt::zero(); c]; c];
    for row in &entries {
        for (kc, x) in row {
            for (lc, y) in row {
                b[*kc][*lc] += x * y;
            }
        }
    }
    let d2 = &den * &den;
    let tr: BigInt = (0..c).map(|i| b[i][i].clone()).sum();
    let tr2: BigInt = b.iter().flatten().map(|x| x * x).sum();
    let rank_b = sparse_rank(dense_to_sparse(&b), limits.elimination_budget)?;
    Ok(ExplicitTrace {
        m: DerivMatrix {
            rows,
            cols,
            entries,
            denominator: den,
            spec: OrderSpec::Exact(k),
        },
        b,
        tr_b: Rational::new(tr, d2.clone()),
        tr_b2: Rational::new(tr2, &d2 * &d2),
        rank_b,
    })
}

/// Outcome of the random-coefficient experiment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemirandomEstimate {
    /// Exact mean of `L(f)` over the samples.
    pub mean: Rational,
    /// `Σ_P C(sup P, k) / |M|²`.
    pub expected: Rational,
    pub samples: usize,
}

pub const COEF_BOUND: i64 = 1 << 30;

/// Averages `L(f)` over `samples` draws of i.i.d. scaled coefficients uniform
/// on `[-2^30, 2^30] \ {0}` for the given support.
pub fn semirandom_estimate<R: Rng + ?Sized>(
    support: &[ExponentVector],
    k: u32,
    samples: usize,
    rng: &mut R,
) -> Result<SemirandomEstimate> {
    let mut support: Vec<&ExponentVector> = support.iter().collect();
    support.sort();
    support.dedup();
    let Some(first) = support.first() else {
        return Err(Error::Parameter("empty support".into()));
    };
    if support.iter().any(|e| e.len() != first.len()) {
        return Err(Error::Arity {
            expected: first.len(),
            got: support.iter().map(|e| e.len()).find(|&l| l != first.len()).unwrap_or(0),
        });
    }
    if samples == 0 {
        return Err(Error::Parameter("need at least one sample".into()));
    }
    let weights: Vec<BigInt> = support
        .iter()
        .map(|e| BigInt::from(binomial(e.support() as i64, k as i64)))
        .collect();
    let count = BigInt::from(support.len());

    let mut fractions: Vec<(BigInt, BigInt)> = Vec::with_capacity(samples);
    for _ in 0..samples {
        let mut num = BigInt::zero();
        let mut total = BigInt::zero();
        for w in &weights {
            let a = loop {
                let a = rng.random_range(-COEF_BOUND..=COEF_BOUND);
                if a != 0 {
                    break BigInt::from(a);
                }
            };
            let sq = &a * &a;
            num += w * &sq;
            total += sq;
        }
        fractions.push((num, total * &count));
    }
    let (num, den) = sum_fractions(fractions);
    let mean = Rational::new(num, den * BigInt::from(samples));
    let expected = Rational::new(weights.iter().sum(), &count * &count);
    Ok(SemirandomEstimate {
        mean,
        expected,
        samples,
    })
}

/// Sums fractions pairwise without intermediate reduction.
fn sum_fractions(mut v: Vec<(BigInt, BigInt)>) -> (BigInt, BigInt) {
    while v.len() > 1 {
        let mut next = Vec::with_capacity(v.len().div_ceil(2));
        let mut it = v.into_iter();
        while let Some((a, b)) = it.next() {
            match it.next() {
                Some((c, d)) => next.push((&a * &d + &c * &b, b * d)),
                None => next.push((a, b)),
            }
        }
        v = next;
    }
    v.pop().unwrap_or((BigInt::zero(), BigInt::one()))
}

/// `|Tr(B²)| <= |M| Tr(B) Σ a_P²`; returns the right-hand side.
pub fn trace_b2_upper(f: &SparsePoly, k: u32) -> Result<Rational> {
    let ctx = TraceContext::new(f, k)?;
    let sq: Rational = ctx.scaled().terms().iter().map(|t| &t.coef * &t.coef).sum();
    Ok(ctx.trace_b() * sq * Rational::from_integer(ctx.monomial_count().into()))
}
