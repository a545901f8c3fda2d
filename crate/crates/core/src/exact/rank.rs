//! Exact rank of sparse integer matrices by fraction-free elimination.
//!
//! Rows are combined as `p·r − a·pivot` (with `p`, `a` divided by their gcd)
//! and then divided by their content, so entries stay integral and small.
//! Columns are eliminated left to right; the pivot for a column is the
//! lowest-indexed remaining row whose leading entry sits in that column.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Resource, Result};

/// Sparse row: `(column, value)` pairs, strictly increasing columns, no zeros.
pub type SparseRow = Vec<(usize, BigInt)>;

/// Rank over the rationals of the matrix whose rows are `rows`.
///
/// `budget` caps the number of entry updates performed; exceeding it is a
/// [`Resource::Eliminations`] error.
pub fn sparse_rank(rows: Vec<SparseRow>, budget: u64) -> Result<usize> {
    let mut rows: Vec<SparseRow> = rows
        .into_iter()
        .map(|r| r.into_iter().filter(|(_, v)| !v.is_zero()).collect())
        .collect();
    // leading column -> indices of rows led there
    let mut buckets: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, row) in rows.iter_mut().enumerate() {
        debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
        normalize(row);
        if let Some(&(c, _)) = row.first() {
            buckets.entry(c).or_default().push(i);
        }
    }

    let mut rank = 0;
    let mut work: u64 = 0;
    while let Some((_, mut members)) = buckets.pop_first() {
        members.sort_unstable();
        let pivot_idx = members[0];
        let pivot = core::mem::take(&mut rows[pivot_idx]);
        rank += 1;
        for &i in &members[1..] {
            let row = core::mem::take(&mut rows[i]);
            work += (row.len() + pivot.len()) as u64;
            if work > budget {
                return Err(Error::limit(Resource::Eliminations, budget, work));
            }
            let reduced = combine(&row, &pivot);
            if let Some(&(c, _)) = reduced.first() {
                buckets.entry(c).or_default().push(i);
            }
            rows[i] = reduced;
        }
    }
    Ok(rank)
}

/// Cancels the leading entry of `row` against `pivot` (both lead in the same
/// column) and returns the content-normalized result.
fn combine(row: &SparseRow, pivot: &SparseRow) -> SparseRow {
    let a = &row[0].1;
    let p = &pivot[0].1;
    let g = a.gcd(p);
    let row_mul = p / &g;
    let piv_mul = a / &g;

    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        let (col, val) = if ci < cj {
            i += 1;
            (ci, &row[i - 1].1 * &row_mul)
        } else if cj < ci {
            j += 1;
            (cj, -(&pivot[j - 1].1 * &piv_mul))
        } else {
            i += 1;
            j += 1;
            (ci, &row[i - 1].1 * &row_mul - &pivot[j - 1].1 * &piv_mul)
        };
        if !val.is_zero() {
            out.push((col, val));
        }
    }
    normalize(&mut out);
    out
}

/// Divides by the gcd of the entries and makes the leading entry positive.
fn normalize(row: &mut SparseRow) {
    let Some(first) = row.first() else { return };
    let mut g = first.1.abs();
    for (_, v) in row.iter().skip(1) {
        if g.is_one() {
            break;
        }
        g = g.gcd(v);
    }
    let flip = row[0].1.is_negative();
    if g.is_one() && !flip {
        return;
    }
    for (_, v) in row.iter_mut() {
        if !g.is_one() {
            *v = &*v / &g;
        }
        if flip {
            *v = -&*v;
        }
    }
}

/// Converts a dense integer matrix into sparse rows.
pub fn dense_to_sparse(dense: &[Vec<BigInt>]) -> Vec<SparseRow> {
    dense
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(c, v)| (c, v.clone()))
                .collect()
        })
        .collect()
}
