//! Simple graphs and facet-generated simplicial complexes.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Simple undirected graph on vertices `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Validates and normalizes an edge list: each edge is stored as `(u, v)`
    /// with `u < v`, edges are sorted and duplicates dropped.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::Graph(format!("loop edge at vertex {u}")));
            }
            for w in [u, v] {
                if w == 0 || w > n {
                    return Err(Error::Graph(format!("vertex {w} out of range 1..={n}")));
                }
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Graph {
            n,
            edges: set.into_iter().collect(),
        })
    }

    /// Complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let edges = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v)));
        Graph::new(n, edges).expect("complete graph is valid")
    }

    /// Graph whose edge set is selected by the bits of `mask` over the
    /// pairs `(u, v)`, `u < v`, in lexicographic order.
    pub fn from_edge_mask(n: usize, mask: u64) -> Self {
        let pairs = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v)));
        let edges = pairs.enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e);
        Graph::new(n, edges).expect("mask graph is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

/// Abstract simplicial complex on ground set `1..=ground`, given by its
/// generating facets. Facets are sorted vertex lists; no facet is contained
/// in another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    ground: usize,
    facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Validates the generators and prunes duplicates and generators
    /// contained in other generators. The surviving facets keep the order of
    /// their first appearance.
    pub fn new(ground: usize, generators: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        let mut sets: Vec<Vec<usize>> = Vec::new();
        for g in generators {
            if g.is_empty() {
                return Err(Error::Complex("empty facet".into()));
            }
            let mut g = g;
            g.sort_unstable();
            g.dedup();
            if let Some(&w) = g.iter().find(|&&w| w == 0 || w > ground) {
                return Err(Error::Complex(format!("vertex {w} out of range 1..={ground}")));
            }
            sets.push(g);
        }
        let keep: Vec<bool> = (0..sets.len())
            .map(|i| {
                !sets.iter().enumerate().any(|(j, other)| {
                    j != i
                        && is_subset(&sets[i], other)
                        && (sets[i].len() < other.len() || j < i)
                })
            })
            .collect();
        let facets = sets
            .into_iter()
            .zip(keep)
            .filter_map(|(s, k)| k.then_some(s))
            .collect();
        Ok(SimplicialComplex { ground, facets })
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    /// All facets have the same cardinality (vacuously true with no facets).
    pub fn is_pure(&self) -> bool {
        self.facets.windows(2).all(|w| w[0].len() == w[1].len())
    }

    /// Largest face dimension, `|F| - 1`; `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.facets.iter().map(|f| f.len() - 1).max()
    }

    /// Bitmask of a facet over the ground set (vertex `v` is bit `v - 1`).
    pub(crate) fn facet_mask(facet: &[usize]) -> u64 {
        facet.iter().fold(0u64, |m, &v| m | 1 << (v - 1))
    }
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|x| big.binary_search(x).is_ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn triangle_graph() {
        let g = Graph::new(3, vec![(1, 2), (2, 3), (1, 3)]).unwrap();
        assert_eq!(g.m(), 3);
        assert_eq!(g, Graph::complete(3));
        assert_eq!(Graph::from_edge_mask(3, 0b111), g);
    }

    #[test]
    fn graph_validation() {
        assert!(matches!(Graph::new(3, vec![(1, 1)]), Err(Error::Graph(_))));
        assert!(matches!(Graph::new(3, vec![(1, 4)]), Err(Error::Graph(_))));
        assert!(matches!(Graph::new(3, vec![(0, 1)]), Err(Error::Graph(_))));
        let g = Graph::new(3, vec![(2, 1), (1, 2)]).unwrap();
        assert_eq!(g.edges(), &[(1, 2)]);
    }

    #[test]
    fn complex_pruning() {
        let c = SimplicialComplex::new(3, vec![vec![1, 2], vec![2, 3]]).unwrap();
        assert_eq!(c.facets().len(), 2);
        assert!(c.is_pure());
        let c = SimplicialComplex::new(2, vec![vec![1, 2], vec![1]]).unwrap();
        assert_eq!(c.facets(), &[vec![1, 2]]);
        let c = SimplicialComplex::new(3, vec![vec![2, 1], vec![1, 2], vec![3]]).unwrap();
        assert_eq!(c.facets(), &[vec![1, 2], vec![3]]);
        assert!(!c.is_pure());
        assert_eq!(c.dimension(), Some(1));
    }

    #[test]
    fn complex_validation() {
        assert!(matches!(SimplicialComplex::new(3, vec![vec![]]), Err(Error::Complex(_))));
        assert!(matches!(SimplicialComplex::new(3, vec![vec![4]]), Err(Error::Complex(_))));
    }
}
