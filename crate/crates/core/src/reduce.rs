//! Order-fixed summation used by every reduction in the crate.
//!
//! Results depend only on the input order, never on thread scheduling:
//! parallel code computes per-row partials and combines them with these
//! helpers in ascending row order.

use std::ops::Add;

const BLOCK: usize = 32;

/// Pairwise (cascade) summation with a fixed split point.
pub fn pairwise_sum<T>(values: &[T]) -> T
where
    T: Copy + Default + Add<Output = T>,
{
    if values.len() <= BLOCK {
        return values.iter().fold(T::default(), |acc, &v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Pairwise sum of `f(x)` over `values`, without allocating for short inputs.
pub fn pairwise_sum_by<T, U, F>(values: &[T], f: &F) -> U
where
    U: Copy + Default + Add<Output = U>,
    F: Fn(&T) -> U,
{
    if values.len() <= BLOCK {
        return values.iter().fold(U::default(), |acc, v| acc + f(v));
    }
    let mid = values.len() / 2;
    pairwise_sum_by(&values[..mid], f) + pairwise_sum_by(&values[mid..], f)
}
