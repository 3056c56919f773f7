//! Dense statevectors over a little-endian qubit register.
//!
//! A [`Statevector`] on `n` qubits stores `2^n` complex amplitudes. Qubit `0`
//! is the least significant bit of a basis index: basis state `|i⟩` assigns
//! bit `(i >> q) & 1` to qubit `q`. A register of zero qubits is legal and
//! holds a single amplitude.
//!
//! # Examples
//!
//! ```
//! use quantumness::state::{l2_distance, Statevector};
//!
//! let zero = Statevector::zero_state(1);
//! let plus = Statevector::from_amplitudes(vec![
//!     num_complex::Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
//!     num_complex::Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
//! ])
//! .unwrap();
//! let d = l2_distance(&zero, &plus).unwrap();
//! assert!((d - 0.7653668647301795).abs() < 1e-12);
//! ```

use num_complex::Complex64;

use crate::entropy::ProbDist;
use crate::error::{Error, Result};

/// How far a state norm may drift from 1 before construction fails.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Default cap on register width, in qubits, unless overridden by the
/// `QUANTUMNESS_QUBIT_CAP` environment variable (read by callers, not here).
pub const DEFAULT_QUBIT_CAP: usize = 22;

/// A normalized pure state on a little-endian qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// The all-zeros computational basis state `|0…0⟩`.
    pub fn zero_state(num_qubits: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Self { num_qubits, amps }
    }

    /// The computational basis state `|index⟩`.
    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::BasisIndexOutOfRange { index, dim });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// Builds a state from raw amplitudes.
    ///
    /// The length must be a power of two (1 is allowed: a zero-qubit
    /// register), every component must be finite, and the Euclidean norm
    /// must be within [`NORM_TOLERANCE`] of 1.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::LengthNotPowerOfTwo(len));
        }
        for a in &amps {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::NonFinite(if a.re.is_finite() { a.im } else { a.re }));
            }
        }
        let norm = norm_of(&amps);
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized {
                norm,
                tolerance: NORM_TOLERANCE,
            });
        }
        Ok(Self {
            num_qubits: len.trailing_zeros() as usize,
            amps,
        })
    }

    /// Builds a state the caller has already normalized. Internal fast path;
    /// debug builds still assert the invariant.
    pub(crate) fn from_amplitudes_unchecked(amps: Vec<Complex64>) -> Self {
        debug_assert!(amps.len().is_power_of_two());
        debug_assert!((norm_of(&amps) - 1.0).abs() <= 1e-9);
        Self {
            num_qubits: amps.len().trailing_zeros() as usize,
            amps,
        }
    }

    /// Number of qubits in the register.
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Number of amplitudes, `2^num_qubits`.
    pub fn len(&self) -> usize {
        self.amps.len()
    }

    /// True only for the impossible zero-length vector; kept for clippy's
    /// benefit next to [`Self::len`].
    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    /// The amplitude slice, indexed by basis state.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Euclidean norm; 1 up to [`NORM_TOLERANCE`] by construction.
    pub fn norm(&self) -> f64 {
        norm_of(&self.amps)
    }

    /// Inner product `⟨self|other⟩` (conjugate-linear in `self`).
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Probability of each measurement outcome in the computational basis.
    pub fn measurement_distribution(&self) -> ProbDist {
        ProbDist::from_normalized_unchecked(self.amps.iter().map(|a| a.norm_sqr()).collect())
    }
}

fn norm_of(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Euclidean distance `‖a − b‖₂` between two states of equal dimension.
pub fn l2_distance(a: &Statevector, b: &Statevector) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.amps
        .iter()
        .zip(&b.amps)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Trace-norm distance `‖ |a⟩⟨a| − |b⟩⟨b| ‖₁ = 2·√(1 − |⟨a|b⟩|²)` between the
/// density operators of two pure states.
///
/// This is the unnormalized trace norm, so its range is `[0, 2]`, and it is
/// bounded by twice the Euclidean distance.
pub fn trace_distance_pure(a: &Statevector, b: &Statevector) -> Result<f64> {
    let overlap = a.inner_product(b)?.norm();
    Ok(2.0 * (1.0 - (overlap * overlap).min(1.0)).max(0.0).sqrt())
}
