//! Polynomial-time bounds on `dim d^{=k} f` from single monomials.
//!
//! Lower bound: the derivative space of `f` is at least as large as that of
//! any monomial of `f` that is extremal for an addition-compatible order, in
//! particular any vertex of the Newton polytope. Upper bound: linearity of
//! differentiation, plus the row and column counts of the derivative matrix.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;

use crate::exact::{build_matrix, Limits, OrderSpec};
use crate::poly::{is_permutation, ExponentVector, SparsePoly};
use crate::{Error, Result};

/// `dim d^{=k} x^alpha` for `k = 0..=|alpha|`: the coefficients of
/// `Π_i (1 + t + … + t^{alpha_i})`.
pub fn monomial_dim_profile(alpha: &ExponentVector) -> Vec<BigUint> {
    let mut profile = alloc::vec![BigUint::from(1u32)];
    for &a in alpha.as_slice() {
        if a == 0 {
            continue;
        }
        // multiply by 1 + t + ... + t^a with a sliding window sum
        let len = profile.len() + a as usize;
        let mut next = Vec::with_capacity(len);
        let mut window = BigUint::zero();
        for k in 0..len {
            if k < profile.len() {
                window += &profile[k];
            }
            if k > a as usize {
                window -= &profile[k - a as usize - 1];
            }
            next.push(window.clone());
        }
        profile = next;
    }
    profile
}

/// Entry `k` of the profile, zero past the degree.
pub fn monomial_dim(alpha: &ExponentVector, k: u64) -> BigUint {
    monomial_dim_profile(alpha)
        .into_iter()
        .nth(k as usize)
        .unwrap_or_else(BigUint::zero)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Direction {
    Min,
    Max,
}

/// Lexicographic order applied after permuting the coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MonomialOrderSpec {
    /// Coordinate `perm[0]` is compared first, then `perm[1]`, ...
    pub permutation: Vec<usize>,
    pub direction: Direction,
}

impl MonomialOrderSpec {
    pub fn identity(n: usize, direction: Direction) -> Self {
        MonomialOrderSpec {
            permutation: (0..n).collect(),
            direction,
        }
    }

    pub fn reversed(n: usize, direction: Direction) -> Self {
        MonomialOrderSpec {
            permutation: (0..n).rev().collect(),
            direction,
        }
    }

    /// Identity and reversed permutations, each with both directions.
    pub fn default_family(n: usize) -> Vec<Self> {
        let mut v = Vec::new();
        for d in [Direction::Min, Direction::Max] {
            v.push(Self::identity(n, d));
            v.push(Self::reversed(n, d));
        }
        v
    }
}

/// The term of `f` that is smallest (or largest) in the given order.
pub fn extremal_monomial(f: &SparsePoly, ord: &MonomialOrderSpec) -> Result<ExponentVector> {
    if !is_permutation(&ord.permutation, f.nvars()) {
        return Err(Error::Order("order permutation is not a bijection on the variables".into()));
    }
    let key = |e: &ExponentVector| e.permuted(&ord.permutation);
    let terms = f.terms().iter().map(|t| &t.exps);
    let pick = match ord.direction {
        Direction::Min => terms.min_by_key(|e| key(e)),
        Direction::Max => terms.max_by_key(|e| key(e)),
    };
    pick.cloned().ok_or(Error::ZeroPolynomial)
}

/// Newton-polytope vertices found by random linear functionals, each with the
/// weight vector that certifies it (the unique maximizer of `<w, g>`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VertexSample {
    pub vertices: BTreeMap<ExponentVector, Vec<i64>>,
    pub trials: usize,
    /// Trials whose maximum was attained by several terms.
    pub ties: usize,
}

impl VertexSample {
    /// Re-checks every certificate against `f`.
    pub fn verify(&self, f: &SparsePoly) -> bool {
        self.vertices
            .iter()
            .all(|(v, w)| unique_argmax(f, w).as_ref() == Some(v))
    }
}

fn dot(w: &[i64], e: &ExponentVector) -> i128 {
    w.iter().zip(e.as_slice()).map(|(&a, &b)| a as i128 * b as i128).sum()
}

fn unique_argmax(f: &SparsePoly, w: &[i64]) -> Option<ExponentVector> {
    let mut best: Option<(i128, &ExponentVector)> = None;
    let mut tied = false;
    for t in f.terms() {
        let s = dot(w, &t.exps);
        match best {
            Some((b, _)) if s < b => {}
            Some((b, _)) if s == b => tied = true,
            _ => {
                best = Some((s, &t.exps));
                tied = false;
            }
        }
    }
    match (best, tied) {
        (Some((_, e)), false) => Some(e.clone()),
        _ => None,
    }
}

pub const WEIGHT_BOUND: i64 = 1 << 31;

/// Draws `trials` integer weight vectors uniform in `[-2^31, 2^31]^n` and
/// keeps the unique maximizers. Ties are rejected, never broken.
pub fn vertex_sample<R: Rng + ?Sized>(f: &SparsePoly, trials: usize, rng: &mut R) -> Result<VertexSample> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = VertexSample {
        trials,
        ..VertexSample::default()
    };
    for _ in 0..trials {
        let w: Vec<i64> = (0..f.nvars())
            .map(|_| rng.random_range(-WEIGHT_BOUND..=WEIGHT_BOUND))
            .collect();
        match unique_argmax(f, &w) {
            Some(v) => {
                out.vertices.entry(v).or_insert(w);
            }
            None => out.ties += 1,
        }
    }
    Ok(out)
}

/// Which monomials to try for the extremal lower bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateConfig {
    pub orders: Vec<MonomialOrderSpec>,
    pub vertex_trials: usize,
}

impl CandidateConfig {
    /// Four lex candidates and 32 sampled functionals.
    pub fn default_for(n: usize) -> Self {
        CandidateConfig {
            orders: MonomialOrderSpec::default_family(n),
            vertex_trials: 32,
        }
    }

    /// Lex candidates only.
    pub fn lex_only(n: usize) -> Self {
        CandidateConfig {
            orders: MonomialOrderSpec::default_family(n),
            vertex_trials: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalBound {
    pub value: BigUint,
    /// Candidate attaining the bound.
    pub witness: ExponentVector,
    /// All distinct candidates that were evaluated, in lex order.
    pub candidates: Vec<ExponentVector>,
}

/// `max_m dim d^{=k} m` over the configured extremal candidates `m`.
pub fn lower_bound_extremal<R: Rng + ?Sized>(
    f: &SparsePoly,
    k: u64,
    config: &CandidateConfig,
    rng: &mut R,
) -> Result<ExtremalBound> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut candidates: Vec<ExponentVector> = config
        .orders
        .iter()
        .map(|o| extremal_monomial(f, o))
        .collect::<Result<_>>()?;
    if config.vertex_trials > 0 {
        candidates.extend(vertex_sample(f, config.vertex_trials, rng)?.vertices.into_keys());
    }
    candidates.sort();
    candidates.dedup();
    let (value, witness) = candidates
        .iter()
        .map(|m| (monomial_dim(m, k), m))
        .max_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(a.1)))
        .map(|(v, m)| (v, m.clone()))
        .expect("nonzero polynomial has a candidate");
    Ok(ExtremalBound {
        value,
        witness,
        candidates,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearityBound {
    pub value: BigUint,
    /// `Σ_terms dim d^{=k} x^alpha`.
    pub by_terms: BigUint,
    /// Distinct rows of the order-`k` derivative matrix, when within limits.
    pub distinct_rows: Option<usize>,
    /// Columns of that matrix, when within limits.
    pub cols: Option<usize>,
}

/// Minimum of the term-wise sum, distinct rows and columns of the order-`k`
/// derivative matrix. The matrix terms are dropped when it exceeds `limits`.
pub fn upper_bound_linearity(f: &SparsePoly, k: u64, limits: &Limits) -> Result<LinearityBound> {
    let by_terms: BigUint = f.terms().iter().map(|t| monomial_dim(&t.exps, k)).sum();
    let (distinct_rows, cols) = match f.degree() {
        Some(d) if k <= d => match build_matrix(f, OrderSpec::Exact(k as u32), limits) {
            Ok(m) => (Some(m.distinct_rows()), Some(m.ncols())),
            Err(e) if e.is_resource_limit() => (None, None),
            Err(e) => return Err(e),
        },
        _ => (Some(0), Some(0)),
    };
    let mut value = by_terms.clone();
    for c in [distinct_rows, cols].into_iter().flatten() {
        value = value.min(BigUint::from(c));
    }
    Ok(LinearityBound {
        value,
        by_terms,
        distinct_rows,
        cols,
    })
}
