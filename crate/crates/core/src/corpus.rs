//! Seedable random instances used by the cross-validation suites.

use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::Rng;

use crate::poly::{numbered_vars, Basis, ExponentVector, Rational, SparsePoly};
use crate::topology::SimplicialComplex;

/// Shape of random polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolyShape {
    pub max_vars: usize,
    pub max_terms: usize,
    pub max_degree: u32,
}

impl Default for PolyShape {
    fn default() -> Self {
        PolyShape {
            max_vars: 8,
            max_terms: 10,
            max_degree: 4,
        }
    }
}

/// Random exponent vector of total degree `deg` in `n` variables.
pub fn random_exponents<R: Rng + ?Sized>(rng: &mut R, n: usize, deg: u32) -> ExponentVector {
    let mut e = alloc::vec![0u32; n];
    for _ in 0..deg {
        e[rng.random_range(0..n)] += 1;
    }
    ExponentVector::new(e)
}

/// Nonzero polynomial with rational coefficients `±p/q`, `p ∈ 1..=5`, `q ∈ 1..=4`.
pub fn random_poly<R: Rng + ?Sized>(rng: &mut R, shape: &PolyShape) -> SparsePoly {
    loop {
        let n = rng.random_range(1..=shape.max_vars);
        let s = rng.random_range(1..=shape.max_terms);
        let terms: Vec<(ExponentVector, Rational)> = (0..s)
            .map(|_| {
                let deg = rng.random_range(0..=shape.max_degree);
                let num: i64 = rng.random_range(1..=5) * if rng.random_bool(0.5) { 1 } else { -1 };
                let den: i64 = rng.random_range(1..=4);
                (random_exponents(rng, n, deg), Rational::new(num.into(), den.into()))
            })
            .collect();
        let f = SparsePoly::from_terms(numbered_vars("x", n), terms, Basis::Ordinary)
            .expect("generated terms match the variable count");
        if !f.is_zero() {
            return f;
        }
    }
}

/// `count` polynomials of the given shape.
pub fn random_corpus<R: Rng + ?Sized>(rng: &mut R, count: usize, shape: &PolyShape) -> Vec<SparsePoly> {
    (0..count).map(|_| random_poly(rng, shape)).collect()
}

/// Monomial with at most `max_vars` variables and degree at most `max_degree`.
pub fn random_monomial<R: Rng + ?Sized>(rng: &mut R, max_vars: usize, max_degree: u32) -> ExponentVector {
    let n = rng.random_range(1..=max_vars);
    let deg = rng.random_range(0..=max_degree);
    random_exponents(rng, n, deg)
}

/// Pure complex: ground set of at most `max_ground`, at most `max_facets`
/// facets, all of one random size at most `max_size`.
pub fn random_pure_complex<R: Rng + ?Sized>(
    rng: &mut R,
    max_ground: usize,
    max_facets: usize,
    max_size: usize,
) -> SimplicialComplex {
    let n = rng.random_range(1..=max_ground);
    let d = rng.random_range(1..=max_size.min(n));
    let m = rng.random_range(1..=max_facets);
    let facets = (0..m).map(|_| {
        let mut f: Vec<usize> = sample(rng, n, d).into_iter().map(|v| v + 1).collect();
        f.sort_unstable();
        f
    });
    SimplicialComplex::new(n, facets).expect("sampled facets are valid")
}
