//! Gate set and single-gate application.
//!
//! The gate set is split by what a gate does to the computational basis:
//!
//! * **Basis-preserving** — permutes basis states, possibly with per-state
//!   phases: [`Gate::PauliX`], [`Gate::CNot`], [`Gate::Toffoli`],
//!   [`Gate::BasisPermutation`], [`Gate::Oracle`]. These never create or
//!   destroy superposition and never change measurement statistics beyond a
//!   relabeling.
//! * **Basis-changing** — everything that genuinely mixes basis states:
//!   [`Gate::Hadamard`] always, and [`Gate::Rotation`] /
//!   [`Gate::ControlledRotation`] whenever the angle actually mixes.
//!
//! Classification is decided by the matrix itself, not the constructor used:
//! a rotation by a multiple of `π/2` is a signed basis permutation and is
//! classified as basis-preserving. [`is_basis_changing_by_scan`] re-derives
//! the classification by brute force from the gate's action on every basis
//! state and is the executable form of that contract.

use num_complex::Complex64;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::oracle::OracleHandle;
use crate::state::Statevector;

/// Magnitude below which a matrix entry counts as zero when classifying.
pub const CLASSIFICATION_TOLERANCE: f64 = 1e-10;

/// A basis permutation with optional unit-modulus phases.
///
/// Acting on the sub-register `qubits` (listed least-significant first), the
/// gate maps sub-basis state `|y⟩` to `phases[y] · |table[y]⟩`. With no phase
/// table all factors are 1. `table` must be a bijection on
/// `0..2^qubits.len()`.
#[derive(Debug, Clone)]
pub struct BasisPermutation {
    qubits: Vec<usize>,
    table: Vec<usize>,
    phases: Option<Vec<Complex64>>,
}

impl BasisPermutation {
    /// Validates and builds a (phased) basis permutation.
    pub fn new(
        qubits: Vec<usize>,
        table: Vec<usize>,
        phases: Option<Vec<Complex64>>,
    ) -> Result<Self> {
        check_distinct(&qubits)?;
        let dim = 1usize
            .checked_shl(qubits.len() as u32)
            .ok_or(Error::PermutationLength {
                expected: usize::MAX,
                got: table.len(),
            })?;
        if table.len() != dim {
            return Err(Error::PermutationLength {
                expected: dim,
                got: table.len(),
            });
        }
        let mut seen = vec![false; dim];
        for &t in &table {
            if t >= dim || seen[t] {
                return Err(Error::PermutationNotBijective);
            }
            seen[t] = true;
        }
        if let Some(ph) = &phases {
            if ph.len() != dim {
                return Err(Error::PhaseTableLength {
                    expected: dim,
                    got: ph.len(),
                });
            }
            for (i, f) in ph.iter().enumerate() {
                if !f.re.is_finite() || !f.im.is_finite() || (f.norm() - 1.0).abs() > 1e-9 {
                    return Err(Error::PhaseNotUnitModulus(i));
                }
            }
        }
        Ok(Self {
            qubits,
            table,
            phases,
        })
    }

    /// The identity permutation with per-state phases (a diagonal gate).
    pub fn identity_with_phases(qubits: Vec<usize>, phases: Vec<Complex64>) -> Result<Self> {
        let table = (0..phases.len()).collect();
        Self::new(qubits, table, Some(phases))
    }

    /// Sub-register the permutation acts on, least-significant first.
    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    /// The permutation table over sub-basis states.
    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// Optional unit-modulus phase factors, indexed by input sub-state.
    pub fn phases(&self) -> Option<&[Complex64]> {
        self.phases.as_deref()
    }

    /// True if the gate is the exact identity (trivial table, unit phases).
    pub fn is_identity(&self) -> bool {
        let trivial_table = self.table.iter().enumerate().all(|(i, &t)| i == t);
        let trivial_phases = match &self.phases {
            None => true,
            Some(ph) => ph
                .iter()
                .all(|f| (f - Complex64::new(1.0, 0.0)).norm() < 1e-15),
        };
        trivial_table && trivial_phases
    }
}

/// An oracle query gate `O_x |i, b⟩ = |i, b ⊕ x_i⟩`.
///
/// `index_register` holds `i` (least-significant first); qubit `flag`
/// receives the queried bit. Indices `i` at or beyond the string length are
/// passed through unchanged. Applying the gate increments the handle's query
/// counter exactly once.
#[derive(Debug, Clone)]
pub struct OracleGate {
    /// Shared instance plus query counter.
    pub handle: Arc<OracleHandle>,
    /// Qubits encoding the queried index, least-significant first.
    pub index_register: Vec<usize>,
    /// Qubit that the queried bit is XORed onto.
    pub flag: usize,
}

/// One gate from the toolkit's gate set.
#[derive(Debug, Clone)]
pub enum Gate {
    /// Bit flip on one qubit.
    PauliX {
        /// Flipped qubit.
        target: usize,
    },
    /// Controlled bit flip.
    CNot {
        /// Control qubit.
        control: usize,
        /// Flipped qubit.
        target: usize,
    },
    /// Doubly controlled bit flip.
    Toffoli {
        /// Control qubits.
        controls: [usize; 2],
        /// Flipped qubit.
        target: usize,
    },
    /// Arbitrary (phased) basis permutation on a sub-register.
    BasisPermutation(BasisPermutation),
    /// Hadamard on one qubit.
    Hadamard {
        /// Rotated qubit.
        target: usize,
    },
    /// Real rotation `R(θ)|0⟩ = cos θ|0⟩ + sin θ|1⟩` on one qubit, with
    /// matrix `[[cos θ, −sin θ], [sin θ, cos θ]]`.
    Rotation {
        /// Rotated qubit.
        target: usize,
        /// Rotation angle in radians.
        angle: f64,
    },
    /// The same rotation applied only where every control qubit is 1.
    ControlledRotation {
        /// Control qubits (all must read 1).
        controls: Vec<usize>,
        /// Rotated qubit.
        target: usize,
        /// Rotation angle in radians.
        angle: f64,
    },
    /// Oracle query.
    Oracle(OracleGate),
}

impl Gate {
    /// Qubits the gate touches, in declaration order.
    pub fn support(&self) -> Vec<usize> {
        match self {
            Gate::PauliX { target } | Gate::Hadamard { target } | Gate::Rotation { target, .. } => {
                vec![*target]
            }
            Gate::CNot { control, target } => vec![*control, *target],
            Gate::Toffoli { controls, target } => vec![controls[0], controls[1], *target],
            Gate::BasisPermutation(p) => p.qubits.clone(),
            Gate::ControlledRotation {
                controls, target, ..
            } => {
                let mut s = controls.clone();
                s.push(*target);
                s
            }
            Gate::Oracle(o) => {
                let mut s = o.index_register.clone();
                s.push(o.flag);
                s
            }
        }
    }

    /// Support as a bitmask over qubit indices (requires indices < 128).
    pub fn support_mask(&self) -> u128 {
        self.support().iter().fold(0u128, |m, &q| m | (1u128 << q))
    }

    /// Number of qubits the gate touches.
    pub fn arity(&self) -> usize {
        match self {
            Gate::PauliX { .. } | Gate::Hadamard { .. } | Gate::Rotation { .. } => 1,
            Gate::CNot { .. } => 2,
            Gate::Toffoli { .. } => 3,
            Gate::BasisPermutation(p) => p.qubits.len(),
            Gate::ControlledRotation { controls, .. } => controls.len() + 1,
            Gate::Oracle(o) => o.index_register.len() + 1,
        }
    }

    /// Checks that all touched qubits are distinct and inside the register.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let support = self.support();
        check_distinct(&support)?;
        for &q in &support {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    num_qubits,
                });
            }
        }
        Ok(())
    }

    /// Whether the gate mixes computational basis states.
    ///
    /// Rotations mix exactly when both `sin θ` and `cos θ` are nonzero
    /// (beyond [`CLASSIFICATION_TOLERANCE`]), i.e. when `θ` is not a
    /// multiple of `π/2`; everything else in the gate set is a (phased)
    /// basis permutation.
    pub fn is_basis_changing(&self) -> bool {
        match self {
            Gate::Hadamard { .. } => true,
            Gate::Rotation { angle, .. } | Gate::ControlledRotation { angle, .. } => {
                rotation_mixes(*angle)
            }
            _ => false,
        }
    }
}

fn rotation_mixes(angle: f64) -> bool {
    angle.sin().abs() > CLASSIFICATION_TOLERANCE && angle.cos().abs() > CLASSIFICATION_TOLERANCE
}

fn check_distinct(qubits: &[usize]) -> Result<()> {
    for (i, &q) in qubits.iter().enumerate() {
        if qubits[..i].contains(&q) {
            return Err(Error::DuplicateQubit(q));
        }
    }
    Ok(())
}

/// Reads the sub-index held by `qubits` (least-significant first) out of a
/// full basis index.
#[inline]
fn extract_bits(index: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (pos, &q)| acc | (((index >> q) & 1) << pos))
}

/// Writes sub-index `value` into the positions `qubits` of `index`.
#[inline]
fn splice_bits(index: usize, qubits: &[usize], value: usize) -> usize {
    let mut out = index;
    for (pos, &q) in qubits.iter().enumerate() {
        out = (out & !(1usize << q)) | (((value >> pos) & 1) << q);
    }
    out
}

/// Applies one gate to a state, returning the new state.
///
/// Fails if the gate references qubits outside the register or repeats a
/// qubit. Applying an oracle gate increments its query counter once.
pub fn apply_gate(state: &Statevector, gate: &Gate) -> Result<Statevector> {
    gate.validate(state.num_qubits())?;
    let amps = state.amplitudes();
    let n = amps.len();
    let out = match gate {
        Gate::PauliX { target } => {
            let bit = 1usize << target;
            let mut out = amps.to_vec();
            for i in 0..n {
                if i & bit == 0 {
                    out.swap(i, i | bit);
                }
            }
            out
        }
        Gate::CNot { control, target } => {
            let cbit = 1usize << control;
            let tbit = 1usize << target;
            let mut out = amps.to_vec();
            for i in 0..n {
                if i & cbit != 0 && i & tbit == 0 {
                    out.swap(i, i | tbit);
                }
            }
            out
        }
        Gate::Toffoli { controls, target } => {
            let cmask = (1usize << controls[0]) | (1usize << controls[1]);
            let tbit = 1usize << target;
            let mut out = amps.to_vec();
            for i in 0..n {
                if i & cmask == cmask && i & tbit == 0 {
                    out.swap(i, i | tbit);
                }
            }
            out
        }
        Gate::BasisPermutation(p) => {
            let mut out = vec![Complex64::new(0.0, 0.0); n];
            for (i, &a) in amps.iter().enumerate() {
                let y = extract_bits(i, &p.qubits);
                let j = splice_bits(i, &p.qubits, p.table[y]);
                out[j] = match &p.phases {
                    Some(ph) => a * ph[y],
                    None => a,
                };
            }
            out
        }
        Gate::Hadamard { target } => {
            let bit = 1usize << target;
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let mut out = amps.to_vec();
            for i in 0..n {
                if i & bit == 0 {
                    let (a, b) = (out[i], out[i | bit]);
                    out[i] = (a + b) * h;
                    out[i | bit] = (a - b) * h;
                }
            }
            out
        }
        Gate::Rotation { target, angle } => rotate(amps, *target, &[], *angle),
        Gate::ControlledRotation {
            controls,
            target,
            angle,
        } => rotate(amps, *target, controls, *angle),
        Gate::Oracle(o) => {
            let flag_bit = 1usize << o.flag;
            let inst = o.handle.instance();
            let mut out = vec![Complex64::new(0.0, 0.0); n];
            for (i, &a) in amps.iter().enumerate() {
                let idx = extract_bits(i, &o.index_register);
                let j = if inst.bit(idx) { i ^ flag_bit } else { i };
                out[j] = a;
            }
            o.handle.record_query();
            out
        }
    };
    Ok(Statevector::from_amplitudes_unchecked(out))
}

fn rotate(amps: &[Complex64], target: usize, controls: &[usize], angle: f64) -> Vec<Complex64> {
    let tbit = 1usize << target;
    let cmask = controls.iter().fold(0usize, |m, &c| m | (1usize << c));
    let (s, c) = angle.sin_cos();
    let mut out = amps.to_vec();
    for i in 0..amps.len() {
        if i & tbit == 0 && i & cmask == cmask {
            let j = i | tbit;
            let (a, b) = (out[i], out[j]);
            out[i] = a * c - b * s;
            out[j] = a * s + b * c;
        }
    }
    out
}

/// Re-derives the basis classification by scanning the gate's matrix.
///
/// Applies the gate to all `2^num_qubits` basis states and reports `true`
/// (basis-changing) exactly when some column has two or more entries larger
/// than [`CLASSIFICATION_TOLERANCE`] in magnitude. This is the ground truth
/// that [`Gate::is_basis_changing`] must agree with; it is exponential in
/// the register width, so it is meant for tests and diagnostics. Scanning an
/// oracle gate advances its query counter.
pub fn is_basis_changing_by_scan(gate: &Gate, num_qubits: usize) -> Result<bool> {
    gate.validate(num_qubits)?;
    for index in 0..1usize << num_qubits {
        let column = apply_gate(&Statevector::basis_state(num_qubits, index)?, gate)?;
        let big = column
            .amplitudes()
            .iter()
            .filter(|a| a.norm() > CLASSIFICATION_TOLERANCE)
            .count();
        if big > 1 {
            return Ok(true);
        }
    }
    Ok(false)
}
