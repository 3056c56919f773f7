//! Gate sequences, simulation, and basis-changing resource counts.
//!
//! A [`Circuit`] is an ordered gate list over a fixed-width register. The two
//! resource counters implement the crate's central accounting:
//!
//! * [`count_basis_changing`] — how many gates mix basis states.
//! * [`count_layers`] — how few *layers* of basis-changing gates the circuit
//!   needs: basis-preserving gates are transparent, and consecutive
//!   basis-changing gates share a layer while their supports stay pairwise
//!   disjoint.
//!
//! # Examples
//!
//! ```
//! use quantumness::circuit::{count_layers, Circuit};
//! use quantumness::gate::Gate;
//!
//! let mut c = Circuit::new(3);
//! c.push(Gate::Hadamard { target: 0 }).unwrap();
//! c.push(Gate::Hadamard { target: 1 }).unwrap(); // same layer: disjoint
//! c.push(Gate::Toffoli { controls: [0, 1], target: 2 }).unwrap(); // transparent
//! c.push(Gate::Hadamard { target: 0 }).unwrap(); // overlaps qubit 0: new layer
//! assert_eq!(count_layers(&c), 2);
//! ```

use crate::error::Result;
use crate::gate::{apply_gate, Gate};
use crate::state::Statevector;

/// An ordered list of validated gates on a fixed-width register.
#[derive(Debug, Clone, Default)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    /// An empty circuit on `num_qubits` qubits.
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            gates: Vec::new(),
        }
    }

    /// Builds a circuit from a gate list, validating every gate.
    pub fn with_gates(num_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self::new(num_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    /// Appends a gate after validating it against the register width.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Register width in qubits.
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// The validated gate list.
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Number of gates.
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    /// True when the circuit has no gates.
    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Applies every gate in order to `input`.
    pub fn apply_to(&self, input: &Statevector) -> Result<Statevector> {
        let mut state = input.clone();
        for g in &self.gates {
            state = apply_gate(&state, g)?;
        }
        Ok(state)
    }

    /// Runs the circuit on `|0…0⟩`.
    pub fn run_from_zero(&self) -> Result<Statevector> {
        self.apply_to(&Statevector::zero_state(self.num_qubits))
    }
}

/// Number of basis-changing gates in the circuit.
pub fn count_basis_changing(circuit: &Circuit) -> usize {
    circuit
        .gates()
        .iter()
        .filter(|g| g.is_basis_changing())
        .count()
}

/// Minimum number of basis-changing layers under greedy left-to-right
/// packing.
///
/// Only basis-changing gates count; basis-preserving gates never open or
/// close a layer. Scanning the basis-changing subsequence in order, a gate
/// joins the current layer when its support is disjoint from everything
/// already in the layer, and opens a new layer otherwise.
pub fn count_layers(circuit: &Circuit) -> usize {
    let mut layers = 0usize;
    let mut current: u128 = 0;
    let mut open = false;
    for g in circuit.gates() {
        if !g.is_basis_changing() {
            continue;
        }
        let mask = g.support_mask();
        if open && current & mask == 0 {
            current |= mask;
        } else {
            layers += 1;
            current = mask;
            open = true;
        }
    }
    layers
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn layer_example_from_module_docs() {
        let c = Circuit::with_gates(
            3,
            vec![
                Gate::Hadamard { target: 0 },
                Gate::Hadamard { target: 1 },
                Gate::Toffoli {
                    controls: [0, 1],
                    target: 2,
                },
                Gate::Hadamard { target: 0 },
            ],
        )
        .unwrap();
        assert_eq!(count_basis_changing(&c), 3);
        assert_eq!(count_layers(&c), 2);
    }

    #[test]
    fn all_preserving_circuit_has_zero_layers() {
        let c = Circuit::with_gates(
            4,
            vec![
                Gate::Toffoli {
                    controls: [0, 1],
                    target: 2,
                },
                Gate::CNot {
                    control: 2,
                    target: 3,
                },
                Gate::PauliX { target: 0 },
                Gate::Rotation {
                    target: 1,
                    angle: FRAC_PI_2,
                },
            ],
        )
        .unwrap();
        assert_eq!(count_basis_changing(&c), 0);
        assert_eq!(count_layers(&c), 0);
    }

    #[test]
    fn preserving_gates_are_transparent_between_layers() {
        // H(0), X(0), H(1): the X on qubit 0 does not block merging H(0) and
        // H(1) into one layer.
        let c = Circuit::with_gates(
            2,
            vec![
                Gate::Hadamard { target: 0 },
                Gate::PauliX { target: 0 },
                Gate::Hadamard { target: 1 },
            ],
        )
        .unwrap();
        assert_eq!(count_layers(&c), 1);
    }

    #[test]
    fn overlapping_rotations_split_layers() {
        let c = Circuit::with_gates(
            2,
            vec![
                Gate::Rotation {
                    target: 0,
                    angle: FRAC_PI_4,
                },
                Gate::ControlledRotation {
                    controls: vec![0],
                    target: 1,
                    angle: FRAC_PI_4,
                },
                Gate::Rotation {
                    target: 1,
                    angle: FRAC_PI_4,
                },
            ],
        )
        .unwrap();
        // Gate 2's support {0,1} overlaps gate 1; gate 3 overlaps gate 2.
        assert_eq!(count_layers(&c), 3);
    }

    #[test]
    fn push_validates_against_width() {
        let mut c = Circuit::new(1);
        assert!(matches!(
            c.push(Gate::Hadamard { target: 1 }),
            Err(Error::QubitOutOfRange { .. })
        ));
    }

    #[test]
    fn hadamard_wall_runs_and_counts() {
        let mut c = Circuit::new(3);
        for q in 0..3 {
            c.push(Gate::Hadamard { target: q }).unwrap();
        }
        assert_eq!(count_layers(&c), 1);
        let s = c.run_from_zero().unwrap();
        for a in s.amplitudes() {
            assert!((a.re - 0.125f64.sqrt()).abs() < 1e-12);
        }
    }
}
