//! Closed forms for elementary symmetric polynomials against the generic
//! modules, and the graph/complex constructions against brute force.

use num_bigint::{BigInt, BigUint};
use pdrank_core::combinat::binomial;
use pdrank_core::corpus::random_pure_complex;
use pdrank_core::exact::{dim_partials, sparse_rank, span_dim};
use pdrank_core::reductions::{
    count_faces, count_independent_sets, graph_complex, graph_to_poly, partial_plus_basis, verify_graph_masks,
    verify_reduction, ReductionInput,
};
use pdrank_core::symmetric::{
    disjointness_matrix, sym_exact_dim, sym_gap_point, sym_poly, sym_trace_b, sym_trace_b2,
};
use pdrank_core::trace::{proxy_rank, trace_b, trace_b2};
use pdrank_core::{Graph, Limits, OrderSpec, Rational, SimplicialComplex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn int(v: BigUint) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

#[test]
fn symmetric_closed_forms_match_generic_modules() {
    let limits = Limits::default();
    for n in 1..=8u64 {
        for d in 1..=n {
            let f = sym_poly(n as usize, d as usize, &limits).unwrap();
            for k in 0..=d {
                assert_eq!(int(sym_trace_b(n, d, k).unwrap()), trace_b(&f, k as u32).unwrap());
                assert_eq!(int(sym_trace_b2(n, d, k).unwrap()), trace_b2(&f, k as u32, &limits).unwrap());
                let p = sym_gap_point(n, d, k).unwrap();
                assert_eq!(p.v, proxy_rank(&f, k as u32, &limits).unwrap().proxy);
                assert!(p.v >= Rational::from_integer(1.into()));
                let m = disjointness_matrix(n as usize, d as usize, k as usize);
                let closed = sym_exact_dim(n, d, k).unwrap();
                assert_eq!(BigUint::from(sparse_rank(m, limits.elimination_budget).unwrap()), closed);
                assert_eq!(closed, sym_exact_dim(n, d, d - k).unwrap());
                let want = binomial(n as i64, k as i64).min(binomial(n as i64, (d - k) as i64));
                assert_eq!(closed, want);
            }
        }
    }
}

#[test]
fn symmetric_dims_match_exact_rank_of_the_polynomial() {
    let limits = Limits::default();
    for n in 1..=7u64 {
        for d in 1..=n {
            let f = sym_poly(n as usize, d as usize, &limits).unwrap();
            for k in 0..=d {
                let got = dim_partials(&f, OrderSpec::Exact(k as u32), &limits).unwrap();
                assert_eq!(BigUint::from(got), sym_exact_dim(n, d, k).unwrap());
            }
        }
    }
}

fn brute_ind(g: &Graph) -> u64 {
    (0u64..1 << g.n())
        .filter(|s| g.edges().iter().all(|&(u, v)| s >> (u - 1) & 1 == 0 || s >> (v - 1) & 1 == 0))
        .count() as u64
}

fn brute_faces(c: &SimplicialComplex) -> u64 {
    let masks: Vec<u64> = c
        .facets()
        .iter()
        .map(|f| f.iter().map(|v| 1u64 << (v - 1)).sum())
        .collect();
    (1u64..1 << c.ground())
        .filter(|s| masks.iter().any(|m| s & !m == 0))
        .count() as u64
}

#[test]
fn independent_sets_and_faces_match_brute_force() {
    let limits = Limits::default();
    for n in 3..=5usize {
        let pairs = n * (n - 1) / 2;
        for mask in 1u64..1 << pairs {
            let g = Graph::from_edge_mask(n, mask);
            let ind = count_independent_sets(&g, &limits).unwrap();
            assert_eq!(ind, brute_ind(&g));
            let c = graph_complex(&g).unwrap();
            let faces = count_faces(&c, &limits).unwrap();
            assert_eq!(faces, brute_faces(&c));
            assert_eq!(faces, (1u64 << n) - ind - 1);
        }
    }
}

#[test]
fn exhaustive_identity_small_graphs() {
    let limits = Limits::default();
    for n in 3..=4usize {
        let pairs = (n * (n - 1) / 2) as u32;
        let summary = verify_graph_masks(n, 0..1u64 << pairs, &limits).unwrap();
        assert_eq!(summary.graphs, (1u64 << pairs) - 1);
        assert!(summary.passed(), "{summary:?}");
    }
}

#[test]
fn dim_plus_of_graph_poly_is_twice_face_count() {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..30 {
        let n = 5;
        let mask = rng.random_range(1u64..1 << 10);
        let g = Graph::from_edge_mask(n, mask);
        let f = graph_to_poly(&g).unwrap();
        let dim = dim_partials(&f, OrderSpec::Interior, &limits).unwrap() as u64;
        assert_eq!(dim, 2 * ((1u64 << n) - brute_ind(&g) - 1));
    }
}

#[test]
fn basis_lemma_on_random_pure_families() {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..60 {
        let c = random_pure_complex(&mut rng, 8, 8, 4);
        let faces = brute_faces(&c) as usize;
        let basis = partial_plus_basis(&c, &limits).unwrap();
        assert_eq!(basis.len(), 2 * faces);
        assert_eq!(span_dim(&basis, &limits).unwrap(), 2 * faces);
        let f = pdrank_core::reductions::complex_to_poly(&c).unwrap();
        assert_eq!(dim_partials(&f, OrderSpec::All, &limits).unwrap(), 2 * faces + 2);
        let report = verify_reduction(&ReductionInput::Complex(c), &limits).unwrap();
        assert!(report.identity_holds && report.basis_verified, "{report:?}");
    }
}

#[test]
fn face_count_is_monotone_under_adding_facets() {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..50 {
        let c = random_pure_complex(&mut rng, 8, 6, 5);
        let n = c.ground();
        let size = rng.random_range(1..=n);
        let extra: Vec<usize> = rand::seq::index::sample(&mut rng, n, size).into_iter().map(|v| v + 1).collect();
        let mut gens = c.facets().to_vec();
        gens.push(extra);
        let bigger = SimplicialComplex::new(n, gens).unwrap();
        assert!(count_faces(&bigger, &limits).unwrap() >= count_faces(&c, &limits).unwrap());
    }
}
