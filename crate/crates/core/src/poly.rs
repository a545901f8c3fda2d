//! Canonical sparse polynomials with exact rational coefficients.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Add;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::combinat::factorial;
use crate::{Error, Result};

pub type Rational = BigRational;

/// Exponents of a monomial over a fixed, ordered variable list.
///
/// The derived `Ord` is the lexicographic order on tuples, which is total and
/// compatible with addition. `contained_in` is the componentwise partial order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exps: Vec<u32>) -> Self {
        ExponentVector(exps)
    }

    pub fn zero(n: usize) -> Self {
        ExponentVector(alloc::vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = alloc::vec![0; n];
        v[i] = 1;
        ExponentVector(v)
    }

    /// Indicator vector of a set of positions.
    pub fn indicator(n: usize, positions: &[usize]) -> Self {
        let mut v = alloc::vec![0; n];
        for &p in positions {
            v[p] = 1;
        }
        ExponentVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    /// Total degree.
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    /// Number of variables with a positive exponent.
    pub fn support(&self) -> usize {
        self.0.iter().filter(|&&e| e > 0).count()
    }

    pub fn is_multilinear(&self) -> bool {
        self.0.iter().all(|&e| e <= 1)
    }

    /// `self ⊆ other`: every exponent of `self` is at most the matching one of `other`.
    pub fn contained_in(&self, other: &ExponentVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self - other` if it has no negative component.
    pub fn checked_sub(&self, other: &ExponentVector) -> Option<ExponentVector> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()
            .map(ExponentVector)
    }

    /// Componentwise minimum.
    pub fn min(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(&a, &b)| a.min(b)).collect())
    }

    /// Reorders coordinates: position `i` of the result is coordinate `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> ExponentVector {
        ExponentVector(perm.iter().map(|&p| self.0[p]).collect())
    }

    /// `Π α_i!`, the factor between ordinary and scaled coefficients.
    pub fn factorial_product(&self) -> BigUint {
        self.0.iter().fold(BigUint::one(), |acc, &e| acc * factorial(e))
    }
}

impl From<Vec<u32>> for ExponentVector {
    fn from(v: Vec<u32>) -> Self {
        ExponentVector(v)
    }
}

impl Add for &ExponentVector {
    type Output = ExponentVector;

    fn add(self, rhs: &ExponentVector) -> ExponentVector {
        debug_assert_eq!(self.len(), rhs.len());
        ExponentVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl core::ops::Index<usize> for ExponentVector {
    type Output = u32;

    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

/// Which monomial basis the coefficients refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basis {
    /// `Σ c_a x^a`.
    Ordinary,
    /// `Σ a_a x^a / a!`, with `a_a = c_a · a!`.
    Scaled,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coef: Rational,
    pub exps: ExponentVector,
}

/// A polynomial kept in canonical form: terms sorted strictly increasing in
/// lex order of their exponents, no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    vars: Vec<String>,
    terms: Vec<Term>,
    basis: Basis,
}

impl SparsePoly {
    /// Builds a canonical polynomial, merging like terms and dropping zeros.
    pub fn from_terms<I>(vars: Vec<String>, terms: I, basis: Basis) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentVector, Rational)>,
    {
        check_vars(&vars)?;
        let mut merged: BTreeMap<ExponentVector, Rational> = BTreeMap::new();
        for (exps, coef) in terms {
            if exps.len() != vars.len() {
                return Err(Error::Arity {
                    expected: vars.len(),
                    got: exps.len(),
                });
            }
            *merged.entry(exps).or_insert_with(Rational::zero) += coef;
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exps, coef)| Term { coef, exps })
            .collect();
        Ok(SparsePoly { vars, terms, basis })
    }

    pub fn zero(vars: Vec<String>, basis: Basis) -> Result<Self> {
        check_vars(&vars)?;
        Ok(SparsePoly {
            vars,
            terms: Vec::new(),
            basis,
        })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximum total degree over terms; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.terms.iter().map(|t| t.exps.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some(t) => {
                let d = t.exps.degree();
                self.terms.iter().all(|t| t.exps.degree() == d)
            }
        }
    }

    pub fn is_multilinear(&self) -> bool {
        self.terms.iter().all(|t| t.exps.is_multilinear())
    }

    /// Coefficient of the given monomial (zero if absent).
    pub fn coefficient(&self, exps: &ExponentVector) -> Rational {
        self.position(exps)
            .map(|i| self.terms[i].coef.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn position(&self, exps: &ExponentVector) -> Option<usize> {
        self.terms.binary_search_by(|t| t.exps.cmp(exps)).ok()
    }

    pub fn contains_monomial(&self, exps: &ExponentVector) -> bool {
        self.position(exps).is_some()
    }

    /// The same polynomial expressed in the scaled basis: `a_g = c_g · Π g_i!`.
    pub fn to_scaled(&self) -> SparsePoly {
        match self.basis {
            Basis::Scaled => self.clone(),
            Basis::Ordinary => self.rescale(Basis::Scaled, |coef, f| coef * f),
        }
    }

    /// Inverse of [`SparsePoly::to_scaled`].
    pub fn to_ordinary(&self) -> SparsePoly {
        match self.basis {
            Basis::Ordinary => self.clone(),
            Basis::Scaled => self.rescale(Basis::Ordinary, |coef, f| coef / f),
        }
    }

    fn rescale(&self, basis: Basis, op: impl Fn(&Rational, Rational) -> Rational) -> SparsePoly {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let f = Rational::from_integer(BigInt::from(t.exps.factorial_product()));
                Term {
                    coef: op(&t.coef, f),
                    exps: t.exps.clone(),
                }
            })
            .collect();
        SparsePoly {
            vars: self.vars.clone(),
            terms,
            basis,
        }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scaled_by(&self, c: &Rational) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly {
                vars: self.vars.clone(),
                terms: Vec::new(),
                basis: self.basis,
            };
        }
        SparsePoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coef: &t.coef * c,
                    exps: t.exps.clone(),
                })
                .collect(),
            basis: self.basis,
        }
    }

    /// Renames variables by a permutation: variable `i` of the result is
    /// variable `perm[i]` of `self`.
    pub fn permute_vars(&self, perm: &[usize]) -> Result<SparsePoly> {
        if !is_permutation(perm, self.nvars()) {
            return Err(Error::Variables("not a permutation of the variable indices".into()));
        }
        let vars = perm.iter().map(|&p| self.vars[p].clone()).collect();
        SparsePoly::from_terms(
            vars,
            self.terms.iter().map(|t| (t.exps.permuted(perm), t.coef.clone())),
            self.basis,
        )
    }

    /// Least common multiple of the coefficient denominators.
    pub fn common_denominator(&self) -> BigInt {
        self.terms
            .iter()
            .fold(BigInt::one(), |acc, t| acc.lcm(t.coef.denom()))
    }

    /// Coefficients multiplied by [`SparsePoly::common_denominator`], as integers.
    pub fn integer_coefficients(&self) -> (BigInt, Vec<BigInt>) {
        let den = self.common_denominator();
        let nums = self
            .terms
            .iter()
            .map(|t| (t.coef.numer() * &den) / t.coef.denom())
            .collect();
        (den, nums)
    }

    /// True when every coefficient has absolute value one.
    pub fn has_unit_coefficients(&self) -> bool {
        self.terms.iter().all(|t| t.coef.abs().is_one())
    }
}

pub(crate) fn is_permutation(perm: &[usize], n: usize) -> bool {
    if perm.len() != n {
        return false;
    }
    let mut seen = alloc::vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return false;
        }
        seen[p] = true;
    }
    true
}

fn check_vars(vars: &[String]) -> Result<()> {
    let mut sorted: Vec<&String> = vars.iter().collect();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Variables("duplicate variable name".into()));
    }
    if vars.iter().any(|v| v.is_empty()) {
        return Err(Error::Variables("empty variable name".into()));
    }
    Ok(())
}

/// Variable names `prefix1 .. prefixN`.
pub fn numbered_vars(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| alloc::format!("{prefix}{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn ev(v: &[u32]) -> ExponentVector {
        ExponentVector::new(v.to_vec())
    }

    #[test]
    fn like_terms_merge_and_cancel() {
        let vars = numbered_vars("x", 2);
        let f = SparsePoly::from_terms(
            vars.clone(),
            vec![(ev(&[2, 1]), q(1, 1)), (ev(&[2, 1]), q(1, 1))],
            Basis::Ordinary,
        )
        .unwrap();
        assert_eq!(f.terms().len(), 1);
        assert_eq!(f.terms()[0].coef, q(2, 1));

        let g = SparsePoly::from_terms(
            vars,
            vec![(ev(&[1, 0]), q(2, 1)), (ev(&[1, 0]), q(-2, 1))],
            Basis::Ordinary,
        )
        .unwrap();
        assert!(g.is_zero());
        assert_eq!(g.degree(), None);
    }

    #[test]
    fn scaled_coefficients() {
        let vars = numbered_vars("x", 2);
        let f = SparsePoly::from_terms(vars.clone(), vec![(ev(&[2, 0]), q(1, 1))], Basis::Ordinary)
            .unwrap();
        assert_eq!(f.to_scaled().terms()[0].coef, q(2, 1));

        let g = SparsePoly::from_terms(vars.clone(), vec![(ev(&[2, 3]), q(3, 1))], Basis::Ordinary)
            .unwrap();
        assert_eq!(g.to_scaled().terms()[0].coef, q(36, 1));

        let h = SparsePoly::from_terms(
            vars,
            vec![(ev(&[1, 1]), q(5, 7)), (ev(&[0, 1]), q(-1, 2))],
            Basis::Ordinary,
        )
        .unwrap();
        let hs = h.to_scaled();
        assert_eq!(hs.basis(), Basis::Scaled);
        assert_eq!(
            hs.terms().iter().map(|t| &t.coef).collect::<Vec<_>>(),
            h.terms().iter().map(|t| &t.coef).collect::<Vec<_>>()
        );
    }

    #[test]
    fn arity_and_duplicate_vars_rejected() {
        let err = SparsePoly::from_terms(numbered_vars("x", 2), vec![(ev(&[1]), q(1, 1))], Basis::Ordinary);
        assert!(matches!(err, Err(Error::Arity { expected: 2, got: 1 })));
        let err = SparsePoly::zero(vec!["x".into(), "x".into()], Basis::Ordinary);
        assert!(matches!(err, Err(Error::Variables(_))));
    }

    #[test]
    fn support_and_partial_order() {
        let a = ev(&[2, 0, 1]);
        assert_eq!(a.support(), 2);
        assert_eq!(a.degree(), 3);
        assert!(ev(&[1, 0, 1]).contained_in(&a));
        assert!(!ev(&[0, 1, 0]).contained_in(&a));
        assert_eq!(a.checked_sub(&ev(&[1, 0, 1])), Some(ev(&[1, 0, 0])));
        assert_eq!(a.checked_sub(&ev(&[0, 1, 0])), None);
    }

    fn arb_exps(n: usize) -> impl Strategy<Value = ExponentVector> {
        proptest::collection::vec(0u32..5, n).prop_map(ExponentVector::new)
    }

    fn arb_poly() -> impl Strategy<Value = SparsePoly> {
        (1usize..5).prop_flat_map(|n| {
            proptest::collection::vec((arb_exps(n), -6i64..6, 1i64..5), 0..8).prop_map(move |ts| {
                SparsePoly::from_terms(
                    numbered_vars("x", n),
                    ts.into_iter().map(|(e, a, b)| (e, q(a, b))),
                    Basis::Ordinary,
                )
                .unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn lex_order_compatible_with_addition(
            (a, b, c) in (1usize..6).prop_flat_map(|n| (arb_exps(n), arb_exps(n), arb_exps(n)))
        ) {
            if a < b {
                prop_assert!(&a + &c < &b + &c);
            }
            prop_assert_eq!(a.cmp(&b), (&a + &c).cmp(&(&b + &c)));
        }

        #[test]
        fn scaling_round_trips(f in arb_poly()) {
            prop_assert_eq!(f.to_scaled().to_ordinary(), f.clone());
            prop_assert_eq!(f.to_scaled().terms().len(), f.terms().len());
        }

        #[test]
        fn canonicalization_is_idempotent(f in arb_poly()) {
            let again = SparsePoly::from_terms(
                f.vars().to_vec(),
                f.terms().iter().map(|t| (t.exps.clone(), t.coef.clone())),
                f.basis(),
            ).unwrap();
            prop_assert_eq!(&again, &f);
            prop_assert!(f.terms().windows(2).all(|w| w[0].exps < w[1].exps));
            prop_assert!(f.terms().iter().all(|t| !t.coef.is_zero()));
        }
    }
}
