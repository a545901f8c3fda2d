//! Splitting the expensive loops over scoped worker threads. Partial results
//! are exact and combined in a fixed order, so output does not depend on the
//! thread count.

use std::ops::Range;
use std::thread;

use num_bigint::BigInt;
use pdrank_core::reductions::{edge_mask_count, verify_graph_masks, ExhaustiveSummary};
use pdrank_core::trace::TraceContext;
use pdrank_core::{Limits, Rational, Result};

/// `0..len` cut into `parts` contiguous ranges (some possibly empty).
pub fn chunks(len: u64, parts: usize) -> Vec<Range<u64>> {
    let parts = parts.max(1) as u64;
    (0..parts).map(|i| len * i / parts..len * (i + 1) / parts).collect()
}

/// Runs `work` on each chunk, spreading chunks round-robin over `threads`
/// workers; results come back in chunk order.
fn run_chunks<T: Send>(
    ranges: Vec<Range<u64>>,
    threads: usize,
    work: impl Fn(Range<u64>) -> T + Sync,
) -> Vec<T> {
    if threads <= 1 {
        return ranges.into_iter().map(work).collect();
    }
    let work = &work;
    let ranges = &ranges;
    let mut slots: Vec<Option<T>> = (0..ranges.len()).map(|_| None).collect();
    thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                s.spawn(move || {
                    (t..ranges.len())
                        .step_by(threads)
                        .map(|i| (i, work(ranges[i].clone())))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots.into_iter().map(|s| s.expect("every chunk ran")).collect()
}

/// `Tr(B²)` with the outer monomial loop split across workers.
pub fn trace_b2(ctx: &TraceContext, limits: &Limits, threads: usize) -> Result<Rational> {
    ctx.check_budget(limits)?;
    let s = ctx.monomial_count() as u64;
    let parts = if threads <= 1 { 1 } else { threads * 4 };
    let partials = run_chunks(chunks(s, parts), threads, |r| {
        ctx.trace_b2_partial(r.start as usize..r.end as usize)
    });
    Ok(ctx.finish_b2(partials.into_iter().sum::<BigInt>()))
}

/// Every graph on `n` vertices with at least one edge.
pub fn exhaustive(n: usize, limits: &Limits, threads: usize) -> Result<ExhaustiveSummary> {
    if !(3..=11).contains(&n) {
        return verify_graph_masks(n, 0..0, limits);
    }
    let total = edge_mask_count(n);
    let parts = if threads <= 1 { 1 } else { threads * 8 };
    let results = run_chunks(chunks(total, parts), threads, |r| verify_graph_masks(n, r, limits));
    let mut summary = ExhaustiveSummary {
        n,
        ..ExhaustiveSummary::default()
    };
    for r in results {
        summary = summary.merge(r?);
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use pdrank_core::corpus::{random_corpus, PolyShape};
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn chunks_cover_the_range() {
        for len in [0u64, 1, 7, 100] {
            for parts in 1..9 {
                let c = chunks(len, parts);
                assert_eq!(c.len(), parts);
                assert_eq!(c.first().unwrap().start, 0);
                assert_eq!(c.last().unwrap().end, len);
                assert!(c.windows(2).all(|w| w[0].end == w[1].start));
            }
        }
    }

    #[test]
    fn threaded_trace_matches_serial() {
        let limits = Limits::default();
        let polys = random_corpus(&mut ChaCha8Rng::seed_from_u64(5), 20, &PolyShape::default());
        for f in &polys {
            let ctx = TraceContext::new(f, 2).unwrap();
            let serial = ctx.trace_b2(&limits).unwrap();
            for t in [1, 2, 3, 8] {
                assert_eq!(trace_b2(&ctx, &limits, t).unwrap(), serial);
            }
        }
    }

    #[test]
    fn threaded_sweep_matches_serial() {
        let limits = Limits::default();
        let serial = verify_graph_masks(4, 0..edge_mask_count(4), &limits).unwrap();
        assert_eq!(exhaustive(4, &limits, 3).unwrap(), serial);
        assert!(exhaustive(2, &limits, 2).is_err());
    }
}
