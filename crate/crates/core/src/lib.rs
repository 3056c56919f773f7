//! `quantumness` — a statevector toolkit that makes "how quantum is this
//! computation" a measurable quantity.
//!
//! The unit of measurement is the **basis-changing gate**: one whose matrix
//! maps some computational basis state to a superposition. Everything
//! classical-reversible (X, CNOT, Toffoli, basis permutations, oracle
//! queries, diagonal phases) is free; Hadamards and generic rotations are
//! charged, and parallel basis-changing gates on disjoint qubits merge into
//! a single *layer* ([`circuit::count_layers`]). On top of that accounting
//! the crate provides:
//!
//! | module | what it does |
//! |---|---|
//! | [`state`] | statevectors, inner products, trace/L2 distance |
//! | [`gate`] | gate set, simulation, basis-changing classification |
//! | [`circuit`] | gate sequences, layer counting |
//! | [`entropy`] | Shannon entropy, smoothed-entropy lower bound, entropy growth traces |
//! | [`stateprep`] | ε-close synthesis of low-entropy states with few basis-changing gates |
//! | [`knuth_yao`] | DDG-tree sampling baseline: entropy ± 2 random bits per sample |
//! | [`grover`] | standard and block-hybrid search with query/layer accounting |
//! | [`adversary`] | relation-based query lower bounds and progress coefficients |
//! | [`io`] | JSON statevector / distribution documents |
//!
//! The through-line: a state of Shannon entropy `H` needs only about `H`
//! basis-changing layers to prepare ([`stateprep::synthesize`]), randomness
//! generation needs about `H` random bits classically ([`knuth_yao`]), and
//! search admits a smooth tradeoff where `queries × layers ≈ n` stays within
//! a constant band ([`grover::tradeoff_sweep`]), with matching lower-bound
//! machinery ([`adversary`], [`grover::progress_trace`]).
//!
//! # Example
//!
//! ```
//! use quantumness::circuit::{count_layers, Circuit};
//! use quantumness::gate::Gate;
//!
//! // Two Hadamard walls separated by a Toffoli: the Toffoli is free and
//! // transparent, each wall merges into one layer.
//! let mut c = Circuit::new(3);
//! c.push(Gate::Hadamard { target: 0 }).unwrap();
//! c.push(Gate::Hadamard { target: 1 }).unwrap();
//! c.push(Gate::Toffoli { controls: [0, 1], target: 2 }).unwrap();
//! c.push(Gate::Hadamard { target: 0 }).unwrap();
//! assert_eq!(count_layers(&c), 2);
//! ```
//!
//! # Conventions
//!
//! * Qubit 0 is the least significant bit of a basis index.
//! * States must be unit norm within `1e-10`; a 0-qubit register (one
//!   amplitude) is legal.
//! * All fallible entry points return [`Result`]; parsers never panic on
//!   malformed input.

#![warn(missing_docs)]

pub mod adversary;
pub mod circuit;
pub mod entropy;
pub mod error;
pub mod gate;
pub mod grover;
pub mod io;
pub mod knuth_yao;
pub mod oracle;
pub mod state;
pub mod stateprep;
pub(crate) mod util;

pub use error::{Error, Result};
