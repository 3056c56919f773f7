//! Small shared helpers.

/// `⌈log₂ n⌉` for `n ≥ 1` (0 for `n ≤ 1`).
pub(crate) fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}
