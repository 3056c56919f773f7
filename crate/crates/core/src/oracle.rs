//! Query oracles for hidden bit strings.
//!
//! An [`OracleInstance`] fixes a string `x ∈ {0,1}^n`. A circuit queries it
//! through an [`OracleHandle`], which wraps the instance together with an
//! atomic query counter so that reported query counts can be checked against
//! the number of oracle gate applications actually simulated.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Structural promise attached to a hidden string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Promise {
    /// No promise; any string is possible.
    None,
    /// Exactly one position holds a 1.
    UniqueOne,
    /// Every position holds a 0.
    AllZero,
}

/// A hidden bit string with an optional structural promise.
#[derive(Debug, Clone)]
pub struct OracleInstance {
    bits: Vec<bool>,
    promise: Promise,
}

impl OracleInstance {
    /// Wraps a bit string, checking that it satisfies the claimed promise.
    pub fn new(bits: Vec<bool>, promise: Promise) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidSearchSize(0));
        }
        let ones = bits.iter().filter(|&&b| b).count();
        let consistent = match promise {
            Promise::None => true,
            Promise::UniqueOne => ones == 1,
            Promise::AllZero => ones == 0,
        };
        if !consistent {
            return Err(Error::MarkedIndexOutOfRange {
                index: ones,
                n: bits.len(),
            });
        }
        Ok(Self { bits, promise })
    }

    /// The unique-one instance of length `n` with `x_index = 1`.
    pub fn unique_one(n: usize, index: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSearchSize(0));
        }
        if index >= n {
            return Err(Error::MarkedIndexOutOfRange { index, n });
        }
        let mut bits = vec![false; n];
        bits[index] = true;
        Ok(Self {
            bits,
            promise: Promise::UniqueOne,
        })
    }

    /// The all-zero instance of length `n`.
    pub fn all_zero(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSearchSize(0));
        }
        Ok(Self {
            bits: vec![false; n],
            promise: Promise::AllZero,
        })
    }

    /// String length `n`.
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    /// Always false; instances are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// The bit `x_i`, or `false` for out-of-range `i` (the oracle acts as
    /// the identity on indices beyond the string).
    pub fn bit(&self, i: usize) -> bool {
        self.bits.get(i).copied().unwrap_or(false)
    }

    /// The attached promise.
    pub fn promise(&self) -> Promise {
        self.promise
    }
}

/// A shared oracle with an atomic query counter.
///
/// Each application of an oracle gate during simulation increments the
/// counter exactly once, regardless of register width.
#[derive(Debug)]
pub struct OracleHandle {
    instance: OracleInstance,
    queries: AtomicU64,
}

impl OracleHandle {
    /// Wraps an instance in a shareable handle with the counter at zero.
    pub fn new(instance: OracleInstance) -> Arc<Self> {
        Arc::new(Self {
            instance,
            queries: AtomicU64::new(0),
        })
    }

    /// The wrapped instance.
    pub fn instance(&self) -> &OracleInstance {
        &self.instance
    }

    /// Queries recorded so far.
    pub fn queries(&self) -> u64 {
        self.queries.load(Ordering::Relaxed)
    }

    /// Resets the counter to zero.
    pub fn reset_queries(&self) {
        self.queries.store(0, Ordering::Relaxed);
    }

    pub(crate) fn record_query(&self) {
        self.queries.fetch_add(1, Ordering::Relaxed);
    }
}
