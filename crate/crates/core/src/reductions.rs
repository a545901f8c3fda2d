//! Graph → simplicial complex → polynomial constructions.
//!
//! A pure complex with facets `F_1..F_m` maps to
//! `f = Σ_i Y_i Π_{j ∈ F_i} X_j`, whose interior derivative space has
//! dimension `2|Δ|`. A graph maps to the complex generated by the complements
//! of its edges, whose face count is `2ⁿ − Ind(G) − 1`.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use crate::exact::{build_matrix, derivative, dim_partials, span_dim, Limits, OrderSpec};
use crate::poly::{numbered_vars, Basis, ExponentVector, Rational, SparsePoly};
use crate::topology::{Graph, SimplicialComplex};
use crate::{Error, Resource, Result};

fn check_ground(n: usize, limits: &Limits) -> Result<()> {
    let cap = limits.max_ground.min(63);
    if n > cap {
        return Err(Error::limit(Resource::GroundSet, cap as u64, n as u64));
    }
    Ok(())
}

/// Number of vertex subsets (the empty set included) spanning no edge.
pub fn count_independent_sets(g: &Graph, limits: &Limits) -> Result<u64> {
    check_ground(g.n(), limits)?;
    let mut adj = alloc::vec![0u64; g.n()];
    for &(u, v) in g.edges() {
        adj[u - 1] |= 1 << (v - 1);
        adj[v - 1] |= 1 << (u - 1);
    }
    let mut count = 0u64;
    for mask in 0u64..1 << g.n() {
        let mut rest = mask;
        let mut independent = true;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            if adj[v] & mask != 0 {
                independent = false;
                break;
            }
            rest &= rest - 1;
        }
        count += independent as u64;
    }
    Ok(count)
}

/// Complex generated by the sets `V ∖ {u, v}` over the edges `uv`.
pub fn graph_complex(g: &Graph) -> Result<SimplicialComplex> {
    if g.n() < 3 {
        return Err(Error::Graph(alloc::format!("need at least 3 vertices, got {}", g.n())));
    }
    let facets = g
        .edges()
        .iter()
        .map(|&(u, v)| (1..=g.n()).filter(|&w| w != u && w != v).collect());
    SimplicialComplex::new(g.n(), facets)
}

/// Faces of the complex as sorted bitmasks (vertex `v` is bit `v - 1`).
///
/// Enumerates subsets of each facet when that is cheaper than sweeping the
/// whole ground set.
pub fn face_masks(c: &SimplicialComplex, limits: &Limits) -> Result<Vec<u64>> {
    check_ground(c.ground(), limits)?;
    let facets: Vec<u64> = c.facets().iter().map(|f| SimplicialComplex::facet_mask(f)).collect();
    if per_facet_is_cheaper(c) {
        let mut faces = Vec::new();
        for &f in &facets {
            // nonempty submasks of f
            let mut s = f;
            while s != 0 {
                faces.push(s);
                s = (s - 1) & f;
            }
        }
        faces.sort_unstable();
        faces.dedup();
        Ok(faces)
    } else {
        Ok((1u64..1 << c.ground())
            .filter(|&y| facets.iter().any(|&f| y & !f == 0))
            .collect())
    }
}

fn per_facet_is_cheaper(c: &SimplicialComplex) -> bool {
    let work: u128 = c.facets().iter().map(|f| 1u128 << f.len()).sum();
    work < 1u128 << c.ground()
}

/// `|Δ|`: nonempty subsets of some facet.
pub fn count_faces(c: &SimplicialComplex, limits: &Limits) -> Result<u64> {
    check_ground(c.ground(), limits)?;
    if per_facet_is_cheaper(c) {
        return face_masks(c, limits).map(|f| f.len() as u64);
    }
    let facets: Vec<u64> = c.facets().iter().map(|f| SimplicialComplex::facet_mask(f)).collect();
    Ok((1u64..1 << c.ground())
        .filter(|&y| facets.iter().any(|&f| y & !f == 0))
        .count() as u64)
}

fn one() -> Rational {
    Rational::from_integer(1.into())
}

/// Variables `X1..Xn` followed by `Y1..Ym`; `f = Σ_i Y_i Π_{j ∈ F_i} X_j`.
pub fn complex_to_poly(c: &SimplicialComplex) -> Result<SparsePoly> {
    if !c.is_pure() {
        return Err(Error::Complex("complex is not pure".into()));
    }
    let n = c.ground();
    let m = c.facets().len();
    let mut vars = numbered_vars("X", n);
    vars.extend(numbered_vars("Y", m));
    let terms = c.facets().iter().enumerate().map(|(i, f)| (facet_term(n, m, i, f), one()));
    SparsePoly::from_terms(vars, terms, Basis::Ordinary)
}

fn facet_term(n: usize, m: usize, i: usize, facet: &[usize]) -> ExponentVector {
    let mut e = alloc::vec![0u32; n + m];
    for &j in facet {
        e[j - 1] = 1;
    }
    e[n + i] = 1;
    ExponentVector::new(e)
}

/// `f = Σ_{uv ∈ E} Y_u_v Π_{w ∉ {u,v}} X_w`, with `Y_u_v` (`u < v`) after
/// `X1..Xn` in edge order.
pub fn graph_to_poly(g: &Graph) -> Result<SparsePoly> {
    if g.n() < 3 {
        return Err(Error::Graph(alloc::format!("need at least 3 vertices, got {}", g.n())));
    }
    let n = g.n();
    let m = g.m();
    let mut vars = numbered_vars("X", n);
    vars.extend(g.edges().iter().map(|(u, v)| alloc::format!("Y_{u}_{v}")));
    let terms = g.edges().iter().enumerate().map(|(i, &(u, v))| {
        let facet: Vec<usize> = (1..=n).filter(|&w| w != u && w != v).collect();
        (facet_term(n, m, i, &facet), one())
    });
    SparsePoly::from_terms(vars, terms, Basis::Ordinary)
}

/// The `2|Δ|` polynomials `Π_{j ∈ F} X_j` and `∂f/∂X_F` over the faces `F`
/// (monomials first, then derivatives, faces in bitmask order).
pub fn partial_plus_basis(c: &SimplicialComplex, limits: &Limits) -> Result<Vec<SparsePoly>> {
    let f = complex_to_poly(c)?;
    let faces = face_masks(c, limits)?;
    let n = c.ground();
    let nv = f.nvars();
    let as_exps = |mask: u64| {
        let mut e = alloc::vec![0u32; nv];
        for (j, slot) in e.iter_mut().enumerate().take(n) {
            *slot = (mask >> j & 1) as u32;
        }
        ExponentVector::new(e)
    };
    let mut out = Vec::with_capacity(2 * faces.len());
    for &face in &faces {
        out.push(SparsePoly::from_terms(f.vars().to_vec(), [(as_exps(face), one())], Basis::Ordinary)?);
    }
    let scaled = f.to_scaled();
    for &face in &faces {
        // multilinear: scaled and ordinary coefficients coincide
        let d = derivative(&scaled, &as_exps(face))?;
        out.push(SparsePoly::from_terms(
            d.vars().to_vec(),
            d.terms().iter().map(|t| (t.exps.clone(), t.coef.clone())),
            Basis::Ordinary,
        )?);
    }
    Ok(out)
}

/// Input to [`verify_reduction`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionInput {
    Graph(Graph),
    Complex(SimplicialComplex),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReport {
    /// Vertices of the graph, or ground set size of the complex.
    pub n: usize,
    /// Edges of the graph, or facets of the complex.
    pub m: usize,
    /// `Ind(G)`; graphs only.
    pub ind_count: Option<u64>,
    pub face_count: u64,
    pub dim_plus: usize,
    pub identity_holds: bool,
    pub basis_verified: bool,
    pub note: Option<String>,
}

/// Builds the polynomial, computes `dim d^+ f` exactly and checks the face
/// count identity and the explicit basis.
///
/// `basis_verified` requires the basis to be linearly independent and to
/// span every interior derivative of `f`.
pub fn verify_reduction(input: &ReductionInput, limits: &Limits) -> Result<ReductionReport> {
    let (complex, ind_count, m) = match input {
        ReductionInput::Graph(g) => (graph_complex(g)?, Some(count_independent_sets(g, limits)?), g.m()),
        ReductionInput::Complex(c) => (c.clone(), None, c.facets().len()),
    };
    let n = complex.ground();
    let f = match input {
        ReductionInput::Graph(g) => graph_to_poly(g)?,
        ReductionInput::Complex(c) => complex_to_poly(c)?,
    };
    let face_count = count_faces(&complex, limits)?;
    let dim_plus = if f.is_zero() {
        0
    } else {
        dim_partials(&f, OrderSpec::Interior, limits)?
    };
    let basis_verified = check_basis(&complex, limits)?;

    let mut identity_holds = dim_plus as u64 == 2 * face_count;
    if let Some(ind) = ind_count {
        identity_holds &= face_count + ind + 1 == 1u64 << n;
    }
    let note = f
        .is_zero()
        .then(|| String::from("identity not applicable: empty complex (no edges or facets)"));
    Ok(ReductionReport {
        n,
        m,
        ind_count,
        face_count,
        dim_plus,
        identity_holds,
        basis_verified,
        note,
    })
}

fn check_basis(c: &SimplicialComplex, limits: &Limits) -> Result<bool> {
    let basis = partial_plus_basis(c, limits)?;
    let expected = basis.len();
    if span_dim(&basis, limits)? != expected {
        return Ok(false);
    }
    let f = complex_to_poly(c)?;
    if f.degree().unwrap_or(0) < 2 {
        return Ok(expected == 0);
    }
    let scaled = f.to_scaled();
    let mut all = basis;
    for beta in build_matrix(&f, OrderSpec::Interior, limits)?.rows {
        let d = derivative(&scaled, &beta)?;
        all.push(SparsePoly::from_terms(
            d.vars().to_vec(),
            d.terms().iter().map(|t| (t.exps.clone(), t.coef.clone())),
            Basis::Ordinary,
        )?);
    }
    Ok(span_dim(&all, limits)? == expected)
}

/// Tally of an exhaustive sweep over graphs on `n` vertices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExhaustiveSummary {
    pub n: usize,
    pub graphs: u64,
    /// Edge masks whose report failed the identity.
    pub identity_failures: Vec<u64>,
    /// Edge masks whose basis check failed.
    pub basis_failures: Vec<u64>,
}

impl ExhaustiveSummary {
    pub fn passed(&self) -> bool {
        self.identity_failures.is_empty() && self.basis_failures.is_empty()
    }

    /// Combines summaries of disjoint mask ranges.
    pub fn merge(mut self, other: ExhaustiveSummary) -> ExhaustiveSummary {
        self.graphs += other.graphs;
        self.identity_failures.extend(other.identity_failures);
        self.basis_failures.extend(other.basis_failures);
        self.identity_failures.sort_unstable();
        self.basis_failures.sort_unstable();
        self
    }
}

/// Number of edge masks for graphs on `n` vertices, `2^C(n,2)`.
pub fn edge_mask_count(n: usize) -> u64 {
    1u64 << (n * (n - 1) / 2)
}

/// Verifies every graph whose edge mask lies in `masks`; the empty graph
/// (mask 0) is skipped.
pub fn verify_graph_masks(n: usize, masks: Range<u64>, limits: &Limits) -> Result<ExhaustiveSummary> {
    if !(3..=11).contains(&n) {
        return Err(Error::Parameter(alloc::format!("exhaustive sweeps need 3 <= n <= 11, got {n}")));
    }
    let mut summary = ExhaustiveSummary {
        n,
        ..ExhaustiveSummary::default()
    };
    for mask in masks.filter(|&m| m != 0) {
        let g = Graph::from_edge_mask(n, mask);
        let report = verify_reduction(&ReductionInput::Graph(g), limits)?;
        summary.graphs += 1;
        if !report.identity_holds {
            summary.identity_failures.push(mask);
        }
        if !report.basis_verified {
            summary.basis_failures.push(mask);
        }
    }
    Ok(summary)
}

/// Distinct faces as vertex lists; handy for reports and tests.
pub fn faces(c: &SimplicialComplex, limits: &Limits) -> Result<Vec<Vec<usize>>> {
    let set: BTreeSet<Vec<usize>> = face_masks(c, limits)?
        .into_iter()
        .map(|m| (0..64).filter(|b| m >> b & 1 == 1).map(|b| b as usize + 1).collect())
        .collect();
    Ok(set.into_iter().collect())
}
