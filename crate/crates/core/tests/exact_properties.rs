//! Exact dimensions against a naive calculus + dense rational elimination
//! oracle, and the structural identities they must satisfy.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use pdrank_core::combinat::binomial;
use pdrank_core::corpus::{random_corpus, random_exponents, PolyShape};
use pdrank_core::exact::{build_matrix, dim_partials, rank_exact};
use pdrank_core::poly::numbered_vars;
use pdrank_core::{Basis, ExponentVector, Limits, OrderSpec, Rational, SparsePoly};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

type Dense = BTreeMap<Vec<u32>, Rational>;

fn dense(f: &SparsePoly) -> Dense {
    f.to_ordinary()
        .terms()
        .iter()
        .map(|t| (t.exps.as_slice().to_vec(), t.coef.clone()))
        .collect()
}

fn diff(p: &Dense, i: usize) -> Dense {
    let mut out = Dense::new();
    for (e, c) in p {
        if e[i] > 0 {
            let mut e2 = e.clone();
            e2[i] -= 1;
            *out.entry(e2).or_insert_with(Rational::zero) += c * Rational::from_integer(e[i].into());
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// All derivatives of order `lo..=hi`, by repeated single-variable
/// differentiation with non-decreasing variable indices.
fn derivatives(p: &Dense, n: usize, lo: u64, hi: u64) -> Vec<Dense> {
    let mut out = Vec::new();
    let mut level = vec![(p.clone(), 0usize)];
    for order in 0..=hi {
        if order >= lo {
            out.extend(level.iter().map(|(q, _)| q.clone()));
        }
        let mut next = Vec::new();
        for (q, start) in &level {
            for i in *start..n {
                next.push((diff(q, i), i));
            }
        }
        level = next;
    }
    out
}

fn dense_rank(polys: &[Dense]) -> usize {
    let mut keys: Vec<&Vec<u32>> = polys.iter().flat_map(|p| p.keys()).collect();
    keys.sort();
    keys.dedup();
    let mut rows: Vec<Vec<Rational>> = polys
        .iter()
        .map(|p| keys.iter().map(|k| p.get(*k).cloned().unwrap_or_else(Rational::zero)).collect())
        .collect();
    let mut rank = 0;
    for col in 0..keys.len() {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = Rational::one() / rows[rank][col].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = &rows[r][col] * &inv;
                for c in col..keys.len() {
                    let delta = &factor * &rows[rank][c];
                    rows[r][c] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn oracle_dim(f: &SparsePoly, lo: u64, hi: u64) -> usize {
    dense_rank(&derivatives(&dense(f), f.nvars(), lo, hi))
}

fn corpus(seed: u64, count: usize) -> Vec<SparsePoly> {
    random_corpus(&mut ChaCha8Rng::seed_from_u64(seed), count, &PolyShape::default())
}

fn homogeneous(rng: &mut ChaCha8Rng, n: usize, deg: u32, terms: usize) -> SparsePoly {
    loop {
        let f = SparsePoly::from_terms(
            numbered_vars("x", n),
            (0..terms).map(|_| {
                let c: i64 = rng.random_range(-4..=4);
                (random_exponents(rng, n, deg), Rational::from_integer(c.into()))
            }),
            Basis::Ordinary,
        )
        .unwrap();
        if !f.is_zero() {
            return f;
        }
    }
}

#[test]
fn exact_dims_match_naive_oracle() {
    let limits = Limits::default();
    for f in corpus(1, 40) {
        let deg = f.degree().unwrap();
        for k in 0..=deg {
            let got = dim_partials(&f, OrderSpec::Exact(k as u32), &limits).unwrap();
            assert_eq!(got, oracle_dim(&f, k, k), "{f:?} k={k}");
        }
        assert_eq!(dim_partials(&f, OrderSpec::All, &limits).unwrap(), oracle_dim(&f, 0, deg));
        if deg >= 2 {
            assert_eq!(
                dim_partials(&f, OrderSpec::Interior, &limits).unwrap(),
                oracle_dim(&f, 1, deg - 1)
            );
        }
    }
}

#[test]
fn scaled_derivative_matches_calculus() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for f in corpus(2, 30) {
        let n = f.nvars();
        let order = rng.random_range(0..=3);
        let beta = random_exponents(&mut rng, n, order);
        let got = pdrank_core::exact::derivative(&f.to_scaled(), &beta).unwrap().to_ordinary();
        let mut want = dense(&f);
        for (i, &b) in beta.as_slice().iter().enumerate() {
            for _ in 0..b {
                want = diff(&want, i);
            }
        }
        assert_eq!(dense(&got), want);
    }
}

#[test]
fn homogeneous_total_is_sum_of_orders() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let limits = Limits::default();
    for _ in 0..40 {
        let n = rng.random_range(1..=6);
        let deg = rng.random_range(1..=4);
        let terms = rng.random_range(1..=8);
        let f = homogeneous(&mut rng, n, deg, terms);
        let sum: usize = (0..=deg)
            .map(|k| dim_partials(&f, OrderSpec::Exact(k), &limits).unwrap())
            .sum();
        let all = dim_partials(&f, OrderSpec::All, &limits).unwrap();
        assert_eq!(all, sum);
        if deg >= 2 {
            assert_eq!(dim_partials(&f, OrderSpec::Interior, &limits).unwrap() + 2, all);
        }
    }
}

#[test]
fn rank_of_m_equals_rank_of_gram() {
    let limits = Limits::default();
    for f in corpus(9, 30) {
        for k in 0..=2u32 {
            let m = build_matrix(&f, OrderSpec::Exact(k), &limits).unwrap();
            let ncols = m.ncols();
            let mut cols: Vec<Vec<Rational>> = vec![vec![Rational::zero(); m.nrows()]; ncols];
            for (r, row) in m.entries.iter().enumerate() {
                for (c, v) in row {
                    cols[*c][r] = Rational::from_integer(v.clone());
                }
            }
            let gram: Vec<Dense> = cols
                .iter()
                .map(|a| {
                    cols.iter()
                        .enumerate()
                        .map(|(j, b)| {
                            let dot: Rational = a.iter().zip(b).map(|(x, y)| x * y).sum();
                            (vec![j as u32], dot)
                        })
                        .filter(|(_, v)| !v.is_zero())
                        .collect()
                })
                .collect();
            assert_eq!(rank_exact(&m, &limits).unwrap(), dense_rank(&gram));
        }
    }
}

#[test]
fn worked_example_dims() {
    // x1^n + ... + xn^n + x1...xn
    let limits = Limits::default();
    for n in 3..=6usize {
        let mut terms: Vec<(ExponentVector, Rational)> = (0..n)
            .map(|i| {
                let mut e = vec![0u32; n];
                e[i] = n as u32;
                (ExponentVector::new(e), Rational::one())
            })
            .collect();
        terms.push((ExponentVector::new(vec![1; n]), Rational::one()));
        let f = SparsePoly::from_terms(numbered_vars("x", n), terms, Basis::Ordinary).unwrap();
        assert_eq!(dim_partials(&f, OrderSpec::Exact(0), &limits).unwrap(), 1);
        assert_eq!(dim_partials(&f, OrderSpec::Exact(n as u32), &limits).unwrap(), 1);
        for k in 1..n {
            let want = if k == 1 || k == n - 1 {
                BigUint::from(n)
            } else {
                binomial(n as i64, k as i64) + BigUint::from(n)
            };
            assert_eq!(BigUint::from(dim_partials(&f, OrderSpec::Exact(k as u32), &limits).unwrap()), want);
        }
    }
}

#[test]
fn product_of_variables_gives_binomials() {
    let limits = Limits::default();
    for d in 1..=8usize {
        let f = SparsePoly::from_terms(
            numbered_vars("x", d),
            [(ExponentVector::new(vec![1; d]), Rational::one())],
            Basis::Ordinary,
        )
        .unwrap();
        for k in 0..=d {
            let got = dim_partials(&f, OrderSpec::Exact(k as u32), &limits).unwrap();
            assert_eq!(BigUint::from(got), binomial(d as i64, k as i64));
        }
    }
}

#[test]
fn zero_polynomial_has_no_derivatives() {
    let z = SparsePoly::zero(numbered_vars("x", 3), Basis::Ordinary).unwrap();
    for spec in [OrderSpec::Exact(0), OrderSpec::Exact(2), OrderSpec::All] {
        assert_eq!(dim_partials(&z, spec, &Limits::default()).unwrap(), 0);
    }
}

fn arb_poly() -> impl Strategy<Value = SparsePoly> {
    any::<u64>().prop_map(|seed| corpus(seed, 1).pop().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dims_are_scale_invariant(f in arb_poly(), num in 1i64..20, den in 1i64..20, k in 0u32..5) {
        let g = f.scaled_by(&Rational::new((-num).into(), den.into()));
        let limits = Limits::default();
        prop_assert_eq!(
            dim_partials(&f, OrderSpec::Exact(k), &limits).unwrap(),
            dim_partials(&g, OrderSpec::Exact(k), &limits).unwrap()
        );
    }

    #[test]
    fn dims_are_permutation_invariant(f in arb_poly(), seed in any::<u64>(), k in 0u32..5) {
        use rand::seq::SliceRandom;
        let mut perm: Vec<usize> = (0..f.nvars()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let g = f.permute_vars(&perm).unwrap();
        let limits = Limits::default();
        prop_assert_eq!(
            dim_partials(&f, OrderSpec::Exact(k), &limits).unwrap(),
            dim_partials(&g, OrderSpec::Exact(k), &limits).unwrap()
        );
        prop_assert_eq!(
            dim_partials(&f, OrderSpec::All, &limits).unwrap(),
            dim_partials(&g, OrderSpec::All, &limits).unwrap()
        );
    }

    #[test]
    fn monomial_dims_are_products(e in proptest::collection::vec(0u32..4, 1..6), k in 0u32..6) {
        let n = e.len();
        let f = SparsePoly::from_terms(numbered_vars("x", n), [(ExponentVector::new(e.clone()), Rational::one())], Basis::Ordinary).unwrap();
        let got = dim_partials(&f, OrderSpec::Exact(k), &Limits::default()).unwrap();
        // count sub-exponents of total degree k directly
        let mut counts = vec![1usize];
        for &a in &e {
            let mut next = vec![0usize; counts.len() + a as usize];
            for (s, c) in counts.iter().enumerate() {
                for b in 0..=a as usize {
                    next[s + b] += c;
                }
            }
            counts = next;
        }
        prop_assert_eq!(got, counts.get(k as usize).copied().unwrap_or(0));
    }
}
