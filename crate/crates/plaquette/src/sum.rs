//! Deterministic pairwise summation.
//!
//! Reductions over per-item terms use this fixed halving tree so the result
//! depends only on the term order, never on chunking or thread count. That
//! keeps the parallel and sequential code paths bit-identical.

pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let (left, right) = xs.split_at(n / 2);
            pairwise_sum(left) + pairwise_sum(right)
        }
    }
}
