//! Shannon entropy, a certified smoothed-entropy lower bound, and
//! entropy traces along circuits.
//!
//! The trace machinery quantifies how much randomness basis-changing gates
//! can inject: running a circuit from `|0…0⟩`, the measurement entropy starts
//! at zero, is untouched by basis-preserving gates, and can grow by at most
//! `2·arity` bits per basis-changing gate of the given arity.
//!
//! [`smoothed_entropy_lb`] lower-bounds the smoothed entropy `H_ε`: the
//! smallest Shannon entropy over distributions within total-variation-style
//! budget `ε` of the input. The surrogate moves up to `ε` of probability
//! mass from the smallest entries onto the single largest entry, which is
//! the entropy-minimizing direction for a fixed transfer budget, so the
//! result never exceeds the true smoothed entropy of any ball at least that
//! generous.

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::apply_gate;
use crate::state::Statevector;

/// How far a probability vector may sum from 1.
pub const DIST_SUM_TOLERANCE: f64 = 1e-6;

/// A validated probability distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbDist {
    probs: Vec<f64>,
}

impl ProbDist {
    /// Validates: non-empty, finite, no negative entries, sum within
    /// [`DIST_SUM_TOLERANCE`] of 1.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        for (index, &value) in probs.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite(value));
            }
            if value < 0.0 {
                return Err(Error::NegativeProbability { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > DIST_SUM_TOLERANCE {
            return Err(Error::ProbabilitiesNotNormalized {
                sum,
                tolerance: DIST_SUM_TOLERANCE,
            });
        }
        Ok(Self { probs })
    }

    /// Wraps a vector already known to be normalized (e.g. measurement
    /// probabilities of a unit-norm state).
    pub(crate) fn from_normalized_unchecked(probs: Vec<f64>) -> Self {
        debug_assert!(!probs.is_empty());
        debug_assert!((probs.iter().sum::<f64>() - 1.0).abs() <= DIST_SUM_TOLERANCE);
        Self { probs }
    }

    /// The uniform distribution over `n ≥ 1` outcomes.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDistribution);
        }
        Ok(Self {
            probs: vec![1.0 / n as f64; n],
        })
    }

    /// The probability vector.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Number of outcomes.
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    /// Always false; distributions are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

fn entropy_of(probs: &[f64]) -> f64 {
    let h: f64 = probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum();
    // Clamp the -0.0 of a point mass and sub-ulp negatives from entries that
    // rounded slightly above 1.
    if h <= 0.0 {
        0.0
    } else {
        h
    }
}

/// Shannon entropy in bits.
pub fn shannon_entropy(dist: &ProbDist) -> f64 {
    entropy_of(dist.probs())
}

/// Shannon entropy of a state's computational-basis measurement.
pub fn state_entropy(state: &Statevector) -> f64 {
    shannon_entropy(&state.measurement_distribution())
}

/// Certified lower bound on the smoothed entropy `H_ε`, computed by a greedy
/// mass transfer.
///
/// Up to `eps` of total mass is drained from the smallest entries (ties
/// broken toward lower index) onto the single largest entry, and the Shannon
/// entropy of the result is returned. At `eps = 0` this is exactly
/// [`shannon_entropy`]; it is nonincreasing in `eps`. Requires
/// `0 ≤ eps < 2`.
pub fn smoothed_entropy_lb(dist: &ProbDist, eps: f64) -> Result<f64> {
    if !(0.0..2.0).contains(&eps) {
        return Err(Error::EpsOutOfRange(eps));
    }
    let mut probs = dist.probs().to_vec();
    // Largest entry, ties toward lower index.
    let target = probs
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.partial_cmp(b).unwrap().then(j.cmp(i)))
        .map(|(i, _)| i)
        .expect("non-empty by construction");
    let mut order: Vec<usize> = (0..probs.len()).filter(|&i| i != target).collect();
    order.sort_by(|&i, &j| probs[i].partial_cmp(&probs[j]).unwrap().then(i.cmp(&j)));
    let mut budget = eps;
    for i in order {
        if budget <= 0.0 {
            break;
        }
        let take = probs[i].min(budget);
        probs[i] -= take;
        probs[target] += take;
        budget -= take;
    }
    Ok(entropy_of(&probs))
}

/// Entropy snapshots along a circuit run from `|0…0⟩`.
///
/// `values[0]` is the entropy of the initial state (always 0) and
/// `values[i+1]` the entropy right after the `i`-th *basis-changing* gate;
/// basis-preserving gates are applied but take no snapshot, since they
/// cannot move the entropy. `gate_arities[i]` is the arity of that `i`-th
/// basis-changing gate.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyTrace {
    values: Vec<f64>,
    gate_arities: Vec<usize>,
}

impl EntropyTrace {
    /// Entropy after the initial state and after each basis-changing gate.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Arity of each basis-changing gate, aligned with `values[1..]`.
    pub fn gate_arities(&self) -> &[usize] {
        &self.gate_arities
    }

    /// Largest violation of the per-gate growth law
    /// `values[i+1] − values[i] ≤ 2·arity`, in bits. Nonpositive when the
    /// law holds (negative infinity for a trace with no basis-changing
    /// gates).
    pub fn max_excess(&self) -> f64 {
        self.values
            .windows(2)
            .zip(&self.gate_arities)
            .map(|(w, &a)| (w[1] - w[0]) - 2.0 * a as f64)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Runs `circuit` from `|0…0⟩` and records the entropy after every
/// basis-changing gate.
pub fn entropy_trace(circuit: &Circuit) -> Result<EntropyTrace> {
    let mut state = Statevector::zero_state(circuit.num_qubits());
    let mut values = vec![state_entropy(&state)];
    let mut gate_arities = Vec::new();
    for gate in circuit.gates() {
        state = apply_gate(&state, gate)?;
        if gate.is_basis_changing() {
            values.push(state_entropy(&state));
            gate_arities.push(gate.arity());
        }
    }
    Ok(EntropyTrace {
        values,
        gate_arities,
    })
}

/// The spiked distribution used throughout the tests: probability `(1−δ)²`
/// on outcome 0 and the rest spread evenly over `k` further outcomes.
///
/// It is the measurement distribution of the state
/// `(1−δ)|0⟩ + √((2δ−δ²)/k)·Σ_{i=1..k}|i⟩`, which lies at Euclidean
/// distance `√(2δ)` from `|0⟩`.
pub fn spiked_dist(delta: f64, k: usize) -> Result<ProbDist> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::EpsOutOfRange(delta));
    }
    let head = (1.0 - delta) * (1.0 - delta);
    let mut probs = vec![head];
    if k > 0 {
        probs.extend(std::iter::repeat_n((1.0 - head) / k as f64, k));
    }
    ProbDist::new(probs)
}
