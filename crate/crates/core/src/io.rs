//! JSON documents for states and distributions.
//!
//! Two interchange formats, both plain JSON:
//!
//! * **State documents** — either a dense array of `[re, im]` pairs whose
//!   length is a power of two, or a sparse array of
//!   `{"bitstring": "0101", "re": …, "im": …}` records. Bitstrings are read
//!   as binary numerals, most significant bit first, so `"10"` is basis
//!   index 2. All bitstrings in one document must share a length, which
//!   fixes the register width.
//! * **Distribution documents** — a JSON array of probabilities.
//!
//! Parsers validate everything and never panic on malformed input; they are
//! exercised directly by the fuzz targets. The register width is checked
//! against `max_qubits` *before* amplitude storage is allocated, so a hostile
//! document cannot request gigabyte allocations. Amplitudes are renormalized
//! exactly after the norm passes the document tolerance, so a parsed state
//! always satisfies the strict [`Statevector`] invariant.
//!
//! Emission goes through `serde_json`, which prints floats in shortest
//! round-trip form; emitting the same value twice yields identical bytes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entropy::ProbDist;
use crate::error::{Error, Result};
use crate::state::Statevector;

/// How far a document's state norm or probability sum may be from 1.
pub const DOC_NORM_TOLERANCE: f64 = 1e-6;

/// One sparse amplitude record.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SparseAmplitude {
    /// Basis index as a binary numeral, most significant bit first.
    pub bitstring: String,
    /// Real part.
    pub re: f64,
    /// Imaginary part.
    pub im: f64,
}

/// A parsed state document, before conversion to a [`Statevector`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateDocument {
    /// Dense amplitude list: entry `i` is `[re, im]` for basis state `i`.
    Dense(Vec<[f64; 2]>),
    /// Sparse amplitude records; unlisted basis states are zero.
    Sparse(Vec<SparseAmplitude>),
}

/// Parses a state document from JSON text.
pub fn parse_state_document(text: &str) -> Result<StateDocument> {
    Ok(serde_json::from_str(text)?)
}

/// Parses a distribution document (a JSON array of probabilities).
pub fn parse_dist_document(text: &str) -> Result<ProbDist> {
    let probs: Vec<f64> = serde_json::from_str(text)?;
    ProbDist::new(probs)
}

/// Converts a parsed document into a statevector of at most `max_qubits`
/// qubits, renormalizing exactly once the norm passes
/// [`DOC_NORM_TOLERANCE`].
pub fn statevector_from_document(doc: &StateDocument, max_qubits: usize) -> Result<Statevector> {
    let amps = match doc {
        StateDocument::Dense(pairs) => {
            let len = pairs.len();
            if len == 0 {
                return Err(Error::EmptyStateDocument);
            }
            if !len.is_power_of_two() {
                return Err(Error::LengthNotPowerOfTwo(len));
            }
            let needed = len.trailing_zeros() as usize;
            if needed > max_qubits {
                return Err(Error::QubitCapExceeded {
                    needed,
                    cap: max_qubits,
                });
            }
            pairs
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect::<Vec<_>>()
        }
        StateDocument::Sparse(records) => {
            if records.is_empty() {
                return Err(Error::EmptyStateDocument);
            }
            let width = records[0].bitstring.len();
            if width == 0 {
                return Err(Error::BadBitstringChar(String::new()));
            }
            // Width check happens before the 2^width allocation below.
            if width > max_qubits {
                return Err(Error::QubitCapExceeded {
                    needed: width,
                    cap: max_qubits,
                });
            }
            let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << width];
            let mut seen = vec![false; 1usize << width];
            for rec in records {
                if rec.bitstring.len() != width {
                    return Err(Error::BitstringLengthMismatch(
                        width,
                        rec.bitstring.len(),
                    ));
                }
                let mut index = 0usize;
                for ch in rec.bitstring.chars() {
                    index = (index << 1)
                        | match ch {
                            '0' => 0,
                            '1' => 1,
                            _ => return Err(Error::BadBitstringChar(rec.bitstring.clone())),
                        };
                }
                if seen[index] {
                    return Err(Error::DuplicateBitstring(rec.bitstring.clone()));
                }
                seen[index] = true;
                amps[index] = Complex64::new(rec.re, rec.im);
            }
            amps
        }
    };
    for a in &amps {
        if !a.re.is_finite() || !a.im.is_finite() {
            return Err(Error::NonFinite(if a.re.is_finite() { a.im } else { a.re }));
        }
    }
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroNorm);
    }
    if (norm - 1.0).abs() > DOC_NORM_TOLERANCE {
        return Err(Error::NotNormalized {
            norm,
            tolerance: DOC_NORM_TOLERANCE,
        });
    }
    let amps = amps.into_iter().map(|a| a / norm).collect();
    Statevector::from_amplitudes(amps)
}

/// Parses JSON text straight into a statevector.
pub fn statevector_from_json(text: &str, max_qubits: usize) -> Result<Statevector> {
    statevector_from_document(&parse_state_document(text)?, max_qubits)
}

/// Renders a statevector as a dense document.
pub fn document_from_statevector(state: &Statevector) -> StateDocument {
    StateDocument::Dense(state.amplitudes().iter().map(|a| [a.re, a.im]).collect())
}

/// Serializes a state document to canonical JSON text (with a trailing
/// newline).
pub fn emit_state_document(doc: &StateDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("state documents always serialize");
    s.push('\n');
    s
}

/// Serializes a distribution to canonical JSON text (with a trailing
/// newline).
pub fn emit_dist_document(dist: &ProbDist) -> String {
    let mut s = serde_json::to_string(dist.probs()).expect("slices of f64 always serialize");
    s.push('\n');
    s
}
