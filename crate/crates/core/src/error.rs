//! Crate-wide error type.
//!
//! Every fallible entry point in this crate returns [`Result`]. Parsers and
//! validators never panic on malformed input; panics are reserved for
//! internal invariant violations.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// All error conditions surfaced by the toolkit.
///
/// Field meanings are spelled out by each variant's `Display` message.
#[derive(Debug, Error)]
#[non_exhaustive]
#[allow(missing_docs)]
pub enum Error {
    // --- registers, gates, circuits -------------------------------------
    /// A gate or lookup referenced a qubit outside the register.
    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { index: usize, num_qubits: usize },
    /// A gate listed the same qubit twice (e.g. control equal to target).
    #[error("gate references qubit {0} more than once")]
    DuplicateQubit(usize),
    /// An amplitude vector whose length is not a power of two.
    #[error("amplitude vector length {0} is not a power of two")]
    LengthNotPowerOfTwo(usize),
    /// A statevector whose Euclidean norm is too far from one.
    #[error("state norm {norm} deviates from 1 by more than {tolerance}")]
    NotNormalized { norm: f64, tolerance: f64 },
    /// Two states of different dimension were combined.
    #[error("dimension mismatch: {left} vs {right} amplitudes")]
    DimensionMismatch { left: usize, right: usize },
    /// A permutation table whose length does not match its qubit count.
    #[error("permutation table of length {got} does not match {expected} basis states")]
    PermutationLength { expected: usize, got: usize },
    /// A permutation table that is not a bijection.
    #[error("permutation table is not a bijection")]
    PermutationNotBijective,
    /// A phase table whose length does not match the permutation table.
    #[error("phase table of length {got} does not match {expected} basis states")]
    PhaseTableLength { expected: usize, got: usize },
    /// A phase factor that is not unit modulus.
    #[error("phase factor at entry {0} is not unit modulus")]
    PhaseNotUnitModulus(usize),
    /// A register request that exceeds the configured qubit cap.
    #[error("register would need {needed} qubits, exceeding the cap of {cap}")]
    QubitCapExceeded { needed: usize, cap: usize },
    /// A basis-state index outside the register dimension.
    #[error("basis index {index} out of range for dimension {dim}")]
    BasisIndexOutOfRange { index: usize, dim: usize },

    // --- distributions and entropy ---------------------------------------
    /// A probability vector containing a negative entry.
    #[error("probability at index {index} is negative ({value})")]
    NegativeProbability { index: usize, value: f64 },
    /// A probability vector whose sum is too far from one.
    #[error("probabilities sum to {sum}, deviating from 1 by more than {tolerance}")]
    ProbabilitiesNotNormalized { sum: f64, tolerance: f64 },
    /// An empty probability vector.
    #[error("empty distribution")]
    EmptyDistribution,
    /// A smoothing parameter outside `[0, 2)`.
    #[error("smoothing parameter eps = {0} outside [0, 2)")]
    EpsOutOfRange(f64),
    /// A non-finite number where a finite one is required.
    #[error("value {0} is not finite")]
    NonFinite(f64),

    // --- state preparation ------------------------------------------------
    /// A target entry index outside the declared outcome space.
    #[error("target entry index {index} out of range for {num_outcomes} outcomes")]
    TargetIndexOutOfRange { index: usize, num_outcomes: usize },
    /// Two target entries with the same index.
    #[error("duplicate target entry for index {0}")]
    DuplicateTargetIndex(usize),
    /// A synthesis accuracy parameter outside `(0, 2)`.
    #[error("requested accuracy eps = {0} outside (0, 2)")]
    PrepEpsOutOfRange(f64),
    /// A circuit too small to hold the target during verification.
    #[error("circuit spans {circuit} basis states but the target needs {target}")]
    TargetDoesNotFit { circuit: usize, target: usize },
    /// Synthesis kept escalating without reaching the requested distance.
    #[error("synthesis failed to reach the requested distance (best achieved {best:.6e})")]
    SynthesisDidNotConverge { best: f64 },

    // --- discrete distribution generation ---------------------------------
    /// A bit precision outside the supported range.
    #[error("precision must be between 1 and {max} bits, got {got}")]
    PrecisionOutOfRange { got: u32, max: u32 },
    /// A precision so small that every outcome truncates to zero mass.
    #[error("precision too small: every outcome truncates to zero mass")]
    PrecisionTooSmall,
    /// The bit source ran dry mid-walk.
    #[error("bit source exhausted during a sampling walk")]
    BitSourceExhausted,

    // --- search and adversary ----------------------------------------------
    /// A search over zero items.
    #[error("search size must be at least 1, got {0}")]
    InvalidSearchSize(usize),
    /// A query target outside its valid range.
    #[error("query target {t} outside [{lo}, {hi}]")]
    QueryTargetOutOfRange { t: usize, lo: usize, hi: usize },
    /// A marked index outside the search space.
    #[error("marked index {index} out of range for search size {n}")]
    MarkedIndexOutOfRange { index: usize, n: usize },
    /// A relation with no pairs.
    #[error("relation has no pairs")]
    EmptyRelation,
    /// A relation pair referencing a missing string.
    #[error("relation pair ({x}, {y}) references a missing string")]
    RelationIndexOutOfRange { x: usize, y: usize },
    /// A listed string that no pair uses.
    #[error("{side}-side string {index} appears in no pair")]
    RelationStringUnused { side: char, index: usize },
    /// A relation whose two sides share a string.
    #[error("the two sides of a relation must be disjoint")]
    RelationSidesOverlap,
    /// A relation string with bits set beyond the declared length.
    #[error("relation string {value:#x} has bits beyond length {n}")]
    RelationStringOutOfRange { value: u64, n: usize },
    /// A relation too large for the exhaustive parameter scan.
    #[error("relation scan of {0} candidates exceeds the brute-force budget")]
    RelationTooLarge(u128),
    /// String length incompatible with a requested subset size.
    #[error("subset size {k} exceeds string length {n}")]
    SubsetTooLarge { k: usize, n: usize },
    /// Strings too wide for the exhaustive subset scan.
    #[error("string length {0} too large for the exhaustive subset scan (max 16)")]
    SubsetScanTooWide(usize),
    /// Strings too wide to store in the packed representation.
    #[error("string length {0} too large for the packed representation (max 64)")]
    StringTooWide(usize),

    // --- documents ----------------------------------------------------------
    /// The document was not valid JSON of the expected shape.
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    /// A state document with no amplitudes.
    #[error("state document is empty")]
    EmptyStateDocument,
    /// A bitstring containing characters other than `0` and `1`.
    #[error("bitstring {0:?} contains characters other than 0 and 1")]
    BadBitstringChar(String),
    /// Bitstrings of inconsistent length in one document.
    #[error("bitstrings of differing lengths: {0} vs {1}")]
    BitstringLengthMismatch(usize, usize),
    /// The same bitstring listed twice.
    #[error("duplicate bitstring {0:?}")]
    DuplicateBitstring(String),
    /// A state document whose amplitudes are all zero.
    #[error("state document has zero norm")]
    ZeroNorm,
}
