//! Unstructured search with explicit query and layer accounting.
//!
//! Two algorithms over a hidden unique-one string of length `n`:
//!
//! * **Standard search** ([`grover_standard`]): `⌊(π/4)√n⌋` amplitude
//!   amplification iterations on a `⌈log₂ n⌉`-qubit index register plus one
//!   flag qubit. Queries scale as `√n`, basis-changing layers as `2·iters+1`.
//! * **Block hybrid** ([`hybrid_block`]): to spend more queries `T` but fewer
//!   layers, the space is cut into `h = ⌈(n/T)²⌉` blocks of `b = ⌈n/h⌉`
//!   items. Each iteration queries a whole block coherently (`b` queries)
//!   and amplifies over the *block* register only; a final classical scan of
//!   the measured block (`b` more queries when `b > 1`) pins down the item.
//!   At `h = 1` this degenerates to a fully classical scan with zero layers;
//!   at `h ≥ n` it is standard search.
//!
//! The block count is padded up to `max(4, 2^⌈log₂ h⌉)` so the amplification
//! angle is never so coarse that success drops below 2/3 (unpadded `h = 2`
//! peaks at 1/2). Iteration counts use the raw `h`; success is whatever the
//! simulated walk actually achieves, and stays above 2/3 for every `(h,pad)`
//! combination this construction produces.
//!
//! [`progress_trace`] instruments a hybrid run with the adversary progress
//! indicator: the mean inner product between the u-run (no marked item) and
//! the v-runs (item `i` marked), snapshotted after every query block. Each
//! block of `k` queries can move the indicator by at most `2√(k/n)`.
//!
//! The circuit-level construction is exercised against the fast block-space
//! walk by [`build_hybrid_circuit`], which routes every oracle query through
//! an XOR-addressing permutation so that one oracle gate queries item
//! `block·b + s` in superposition over blocks.

use serde::Serialize;
use std::f64::consts::FRAC_PI_4;
use std::sync::Arc;

use crate::circuit::{count_layers, Circuit};
use crate::error::{Error, Result};
use crate::gate::{BasisPermutation, Gate, OracleGate};
use crate::oracle::{OracleHandle, OracleInstance};
use crate::util::ceil_log2;

/// Which algorithm produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunMode {
    /// Standard amplitude amplification over all `n` items.
    Standard,
    /// Block hybrid (including its classical `h = 1` endpoint).
    Hybrid,
}

/// Metrics of one search run.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    /// Algorithm variant.
    pub mode: RunMode,
    /// Search-space size.
    pub n: usize,
    /// Requested query budget (hybrid only).
    pub t_target: Option<usize>,
    /// Block count `h` (hybrid only).
    pub block_count: Option<usize>,
    /// Block size `b = ⌈n/h⌉` (hybrid only).
    pub block_size: Option<usize>,
    /// Amplification iterations.
    pub iterations: usize,
    /// Oracle queries, including the final classical verification scan for
    /// hybrid runs with `b > 1`.
    pub queries: u64,
    /// Basis-changing layers.
    pub layers: usize,
    /// Probability that the run identifies the marked item.
    pub success_probability: f64,
}

impl RunReport {
    /// The tradeoff product `queries·layers/n`.
    pub fn product_over_n(&self) -> f64 {
        self.queries as f64 * self.layers as f64 / self.n as f64
    }
}

/// `⌊(π/4)·√n⌋` — the standard iteration count.
pub fn standard_iterations(n: usize) -> usize {
    (FRAC_PI_4 * (n as f64).sqrt()).floor() as usize
}

/// Closed-form success probability `sin²((2k+1)·arcsin(1/√n))` of `k`
/// standard iterations (1 for `n = 1`).
pub fn standard_success_probability(n: usize, iterations: usize) -> f64 {
    if n <= 1 {
        return 1.0;
    }
    let theta = (1.0 / (n as f64).sqrt()).asin();
    ((2 * iterations + 1) as f64 * theta).sin().powi(2)
}

/// Builds the standard search circuit: flag preparation, a Hadamard wall,
/// then per iteration an oracle query, and the diffusion `I − 2|u⟩⟨u|`
/// realized as `H^m · (phase flip on |0…0⟩) · H^m` (the textbook reflection
/// up to a global sign, which cancels everywhere observable).
pub fn build_standard_circuit(
    n: usize,
    marked: usize,
) -> Result<(Circuit, Arc<OracleHandle>)> {
    if n == 0 {
        return Err(Error::InvalidSearchSize(0));
    }
    if marked >= n {
        return Err(Error::MarkedIndexOutOfRange { index: marked, n });
    }
    let m = ceil_log2(n);
    let flag = m;
    let handle = OracleHandle::new(OracleInstance::unique_one(n, marked)?);
    let mut c = Circuit::new(m + 1);
    c.push(Gate::PauliX { target: flag })?;
    c.push(Gate::Hadamard { target: flag })?;
    for q in 0..m {
        c.push(Gate::Hadamard { target: q })?;
    }
    let index_register: Vec<usize> = (0..m).collect();
    for _ in 0..standard_iterations(n) {
        c.push(Gate::Oracle(OracleGate {
            handle: handle.clone(),
            index_register: index_register.clone(),
            flag,
        }))?;
        for q in 0..m {
            c.push(Gate::Hadamard { target: q })?;
        }
        c.push(Gate::BasisPermutation(zero_phase_flip(m)?))?;
        for q in 0..m {
            c.push(Gate::Hadamard { target: q })?;
        }
    }
    Ok((c, handle))
}

/// Diagonal gate flipping the sign of `|0…0⟩` on an `m`-qubit register.
fn zero_phase_flip(m: usize) -> Result<BasisPermutation> {
    let dim = 1usize << m;
    let mut phases = vec![num_complex::Complex64::new(1.0, 0.0); dim];
    phases[0] = num_complex::Complex64::new(-1.0, 0.0);
    BasisPermutation::identity_with_phases((0..m).collect(), phases)
}

/// Runs standard search by statevector simulation and reports the metrics.
///
/// The register has `⌈log₂ n⌉ + 1` qubits, so the cost is `O(n·√n·log n)`;
/// intended for moderate `n`. Queries are counted by the oracle handle and
/// always equal the iteration count.
pub fn grover_standard(n: usize, marked: usize) -> Result<RunReport> {
    if n == 0 {
        return Err(Error::InvalidSearchSize(0));
    }
    if marked >= n {
        return Err(Error::MarkedIndexOutOfRange { index: marked, n });
    }
    if n == 1 {
        // The lone item is the answer; nothing to query or superpose.
        return Ok(RunReport {
            mode: RunMode::Standard,
            n,
            t_target: None,
            block_count: None,
            block_size: None,
            iterations: 0,
            queries: 0,
            layers: 0,
            success_probability: 1.0,
        });
    }
    let (circuit, handle) = build_standard_circuit(n, marked)?;
    let state = circuit.run_from_zero()?;
    let m = ceil_log2(n);
    let mask = (1usize << m) - 1;
    let success_probability: f64 = state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| i & mask == marked)
        .map(|(_, a)| a.norm_sqr())
        .sum();
    Ok(RunReport {
        mode: RunMode::Standard,
        n,
        t_target: None,
        block_count: None,
        block_size: None,
        iterations: standard_iterations(n),
        queries: handle.queries(),
        layers: count_layers(&circuit),
        success_probability,
    })
}

/// Integer `⌈√n⌉`.
fn ceil_sqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

/// Shared geometry of one hybrid configuration.
#[derive(Debug, Clone, Copy)]
struct HybridShape {
    h: usize,
    b: usize,
    pad: usize,
    iterations: usize,
}

fn hybrid_shape(n: usize, t_target: usize) -> Result<HybridShape> {
    if n == 0 {
        return Err(Error::InvalidSearchSize(0));
    }
    let lo = ceil_sqrt(n);
    if t_target < lo || t_target > n {
        return Err(Error::QueryTargetOutOfRange {
            t: t_target,
            lo,
            hi: n,
        });
    }
    // h = ⌈(n/T)²⌉ computed exactly in integers; T ≥ ⌈√n⌉ keeps h ≤ n.
    let h = (n * n).div_ceil(t_target * t_target);
    debug_assert!((1..=n).contains(&h));
    let b = n.div_ceil(h);
    let pad = 1usize << ceil_log2(h).max(2);
    let iterations = if h == 1 {
        0
    } else {
        (FRAC_PI_4 * (h as f64).sqrt()).floor().max(1.0) as usize
    };
    Ok(HybridShape {
        h,
        b,
        pad,
        iterations,
    })
}

/// Block-space walk: uniform start over `pad` blocks, then per iteration a
/// sign flip on the marked block (if any) followed by the diffusion
/// `v ← v − 2·mean(v)` (the same `I − 2|u⟩⟨u|` convention as the circuits).
/// Returns the state after initialization and after every iteration.
fn block_trajectory(pad: usize, marked_block: Option<usize>, iterations: usize) -> Vec<Vec<f64>> {
    let mut v = vec![1.0 / (pad as f64).sqrt(); pad];
    let mut snaps = Vec::with_capacity(iterations + 1);
    snaps.push(v.clone());
    for _ in 0..iterations {
        if let Some(mb) = marked_block {
            v[mb] = -v[mb];
        }
        let mean = v.iter().sum::<f64>() / pad as f64;
        for x in v.iter_mut() {
            *x -= 2.0 * mean;
        }
        snaps.push(v.clone());
    }
    snaps
}

/// Runs the block hybrid at query budget `t_target ∈ [⌈√n⌉, n]` and reports
/// the metrics.
///
/// Queries count `b` per iteration plus a final classical scan of the
/// measured block (`b` when `b > 1`, or all `n` for the classical `h = 1`
/// endpoint). Layers are `2·iterations + 1` (`0` when classical). Success is
/// the probability that block amplification lands on the marked block; the
/// scan then identifies the item with certainty.
pub fn hybrid_block(n: usize, t_target: usize, marked: usize) -> Result<RunReport> {
    if marked >= n {
        return Err(Error::MarkedIndexOutOfRange { index: marked, n });
    }
    let shape = hybrid_shape(n, t_target)?;
    if shape.h == 1 {
        return Ok(RunReport {
            mode: RunMode::Hybrid,
            n,
            t_target: Some(t_target),
            block_count: Some(1),
            block_size: Some(n),
            iterations: 0,
            queries: n as u64,
            layers: 0,
            success_probability: 1.0,
        });
    }
    let marked_block = marked / shape.b;
    let snaps = block_trajectory(shape.pad, Some(marked_block), shape.iterations);
    let final_amp = snaps.last().expect("nonempty")[marked_block];
    let scan_queries = if shape.b > 1 { shape.b as u64 } else { 0 };
    Ok(RunReport {
        mode: RunMode::Hybrid,
        n,
        t_target: Some(t_target),
        block_count: Some(shape.h),
        block_size: Some(shape.b),
        iterations: shape.iterations,
        queries: (shape.iterations * shape.b) as u64 + scan_queries,
        layers: 2 * shape.iterations + 1,
        success_probability: final_amp * final_amp,
    })
}

/// Runs [`hybrid_block`] across a list of query budgets.
pub fn tradeoff_sweep(n: usize, targets: &[usize], marked: usize) -> Result<Vec<RunReport>> {
    targets
        .iter()
        .map(|&t| hybrid_block(n, t, marked))
        .collect()
}

/// A hybrid run compiled to an explicit circuit, for cross-validation.
#[derive(Debug)]
pub struct HybridCircuit {
    /// The compiled circuit.
    pub circuit: Circuit,
    /// Oracle handle; after a full run its counter reads
    /// `iterations·block_size`.
    pub oracle: Arc<OracleHandle>,
    /// Gate-count prefixes at which the state must match the block walk:
    /// after initialization and after each iteration's diffusion.
    pub boundaries: Vec<usize>,
    /// Width of the block register (low qubits).
    pub block_qubits: usize,
    /// Padded block count.
    pub pad_blocks: usize,
    /// Items per block.
    pub block_size: usize,
    /// Amplification iterations.
    pub iterations: usize,
}

/// Compiles a hybrid run (`h ≥ 2`) into a full circuit.
///
/// Layout: block register (qubits `0..mb`), index scratch register wide
/// enough for `pad·b` item indices, then the oracle flag. Each iteration
/// queries offsets `s = 0..b`: an XOR-addressing permutation writes item
/// index `block·b + s` into the scratch register (conditioned on the block
/// register), one oracle gate fires, and the permutation uncomputes — so
/// block `j` accumulates a phase flip exactly when it contains the marked
/// item. Diffusion then acts on the block register alone.
pub fn build_hybrid_circuit(n: usize, t_target: usize, marked: usize) -> Result<HybridCircuit> {
    if marked >= n {
        return Err(Error::MarkedIndexOutOfRange { index: marked, n });
    }
    let shape = hybrid_shape(n, t_target)?;
    if shape.h == 1 {
        return Err(Error::QueryTargetOutOfRange {
            t: t_target,
            lo: ceil_sqrt(n),
            hi: n - 1,
        });
    }
    let mb = ceil_log2(shape.pad);
    let w = ceil_log2(shape.pad * shape.b).max(1);
    let flag = mb + w;
    let handle = OracleHandle::new(OracleInstance::unique_one(n, marked)?);
    let mut c = Circuit::new(mb + w + 1);

    c.push(Gate::PauliX { target: flag })?;
    c.push(Gate::Hadamard { target: flag })?;
    for q in 0..mb {
        c.push(Gate::Hadamard { target: q })?;
    }
    let mut boundaries = vec![c.len()];

    let scratch: Vec<usize> = (mb..mb + w).collect();
    let both: Vec<usize> = (0..mb + w).collect();
    for _ in 0..shape.iterations {
        for s in 0..shape.b {
            // (block, y) ↦ (block, y ⊕ (block·b + s)): per-block XOR, an
            // involution, basis-preserving.
            let dim = 1usize << (mb + w);
            let table: Vec<usize> = (0..dim)
                .map(|u| {
                    let block = u & ((1 << mb) - 1);
                    let y = u >> mb;
                    let addr = block * shape.b + s;
                    block | ((y ^ addr) << mb)
                })
                .collect();
            let address = Gate::BasisPermutation(BasisPermutation::new(
                both.clone(),
                table,
                None,
            )?);
            c.push(address.clone())?;
            c.push(Gate::Oracle(OracleGate {
                handle: handle.clone(),
                index_register: scratch.clone(),
                flag,
            }))?;
            c.push(address)?;
        }
        for q in 0..mb {
            c.push(Gate::Hadamard { target: q })?;
        }
        c.push(Gate::BasisPermutation(zero_phase_flip(mb)?))?;
        for q in 0..mb {
            c.push(Gate::Hadamard { target: q })?;
        }
        boundaries.push(c.len());
    }
    Ok(HybridCircuit {
        circuit: c,
        oracle: handle,
        boundaries,
        block_qubits: mb,
        pad_blocks: shape.pad,
        block_size: shape.b,
        iterations: shape.iterations,
    })
}

/// Adversary progress indicator along a hybrid run.
///
/// `p_real[j]` is the mean over inputs `i` of the (real) inner product
/// between the u-run (no marked item) and the v-run (item `i` marked) after
/// the `j`-th query block; `p_abs` takes absolute values before averaging.
/// Query blocks are the amplification iterations (`b` queries each) plus
/// the final classical verification scan. For the scan, the marked-block
/// cross term drops out of the inner product: finding the item writes a
/// result that is orthogonal between the two runs.
#[derive(Debug, Clone, Serialize)]
pub struct ProgressTrace {
    /// Search-space size.
    pub n: usize,
    /// Requested query budget.
    pub t_target: usize,
    /// Block count `h`.
    pub block_count: usize,
    /// Items per block `b`.
    pub block_size: usize,
    /// Padded block count.
    pub pad_blocks: usize,
    /// Amplification iterations.
    pub iterations: usize,
    /// Mean inner product after each block; `p_real[0] = 1` before any
    /// query.
    pub p_real: Vec<f64>,
    /// Mean absolute inner product, same shape.
    pub p_abs: Vec<f64>,
    /// Queries spent by each block; sums to the reported query count.
    pub block_queries: Vec<u64>,
    /// Per-block progress bounds `2·√(k/n)`, aligned with the moves
    /// `p[j] → p[j+1]`.
    pub bounds: Vec<f64>,
    /// Success probability of the underlying run.
    pub success_probability: f64,
}

/// Traces the progress indicator of `hybrid_block(n, t_target, ·)` averaged
/// over all `n` possible marked items.
pub fn progress_trace(n: usize, t_target: usize) -> Result<ProgressTrace> {
    let shape = hybrid_shape(n, t_target)?;
    if shape.h == 1 {
        // One classical scan block: the indicator collapses from 1 to 0.
        return Ok(ProgressTrace {
            n,
            t_target,
            block_count: 1,
            block_size: n,
            pad_blocks: 1,
            iterations: 0,
            p_real: vec![1.0, 0.0],
            p_abs: vec![1.0, 0.0],
            block_queries: vec![n as u64],
            bounds: vec![2.0],
            success_probability: 1.0,
        });
    }
    let u_run = block_trajectory(shape.pad, None, shape.iterations);
    // v-runs depend only on the marked block, weighted by item count.
    // Stream one block at a time so memory stays O(pad).
    let steps = shape.iterations;
    let mut p_real = vec![0.0; steps + 1];
    let mut p_abs = vec![0.0; steps + 1];
    let mut scan_real = 0.0;
    let mut scan_abs = 0.0;
    let mut success = 0.0;
    for j in 0..shape.h {
        let count = n.saturating_sub(j * shape.b).min(shape.b);
        if count == 0 {
            continue;
        }
        let w = count as f64 / n as f64;
        let mut v = vec![1.0 / (shape.pad as f64).sqrt(); shape.pad];
        for t in 0..=steps {
            if t > 0 {
                v[j] = -v[j];
                let mean = v.iter().sum::<f64>() / shape.pad as f64;
                for x in v.iter_mut() {
                    *x -= 2.0 * mean;
                }
            }
            let dot: f64 = u_run[t].iter().zip(&v).map(|(a, b)| a * b).sum();
            p_real[t] += w * dot;
            p_abs[t] += w * dot.abs();
        }
        success += w * v[j] * v[j];
        // Final classical scan: the marked-block cross term drops out.
        let adj: f64 = u_run[steps].iter().zip(&v).map(|(a, b)| a * b).sum::<f64>()
            - u_run[steps][j] * v[j];
        scan_real += w * adj;
        scan_abs += w * adj.abs();
    }
    let mut block_queries = vec![shape.b as u64; shape.iterations];
    if shape.b > 1 {
        p_real.push(scan_real);
        p_abs.push(scan_abs);
        block_queries.push(shape.b as u64);
    }
    let bounds = block_queries
        .iter()
        .map(|&k| 2.0 * (k as f64 / n as f64).sqrt())
        .collect();
    Ok(ProgressTrace {
        n,
        t_target,
        block_count: shape.h,
        block_size: shape.b,
        pad_blocks: shape.pad,
        iterations: shape.iterations,
        p_real,
        p_abs,
        block_queries,
        bounds,
        success_probability: success,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::Statevector;
    use num_complex::Complex64;

    #[test]
    fn standard_small_cases() {
        let r = grover_standard(4, 2).unwrap();
        assert_eq!(r.iterations, 1);
        assert_eq!(r.queries, 1);
        assert_eq!(r.layers, 3);
        assert!((r.success_probability - 1.0).abs() < 1e-9);

        let r = grover_standard(16, 7).unwrap();
        assert_eq!(r.iterations, 3);
        assert_eq!(r.queries, 3);
        assert_eq!(r.layers, 7);
        let closed = standard_success_probability(16, 3);
        assert!((r.success_probability - closed).abs() < 1e-9);
        assert!((r.success_probability - 0.9613).abs() < 1e-3);
    }

    #[test]
    fn standard_trivial_and_invalid() {
        let r = grover_standard(1, 0).unwrap();
        assert_eq!((r.queries, r.layers, r.iterations), (0, 0, 0));
        assert_eq!(r.success_probability, 1.0);
        assert!(matches!(
            grover_standard(4, 4),
            Err(Error::MarkedIndexOutOfRange { .. })
        ));
        assert!(matches!(
            grover_standard(0, 0),
            Err(Error::InvalidSearchSize(0))
        ));
    }

    #[test]
    fn standard_success_independent_of_marked() {
        let base = grover_standard(8, 0).unwrap().success_probability;
        for marked in 1..8 {
            let s = grover_standard(8, marked).unwrap().success_probability;
            assert!((s - base).abs() < 1e-12);
        }
    }

    #[test]
    fn standard_matches_closed_form_at_powers_of_two() {
        for n in [4usize, 16, 64, 256] {
            let r = grover_standard(n, n / 3).unwrap();
            let closed = standard_success_probability(n, r.iterations);
            assert!(
                (r.success_probability - closed).abs() < 1e-9,
                "n = {n}: sim {} vs closed {closed}",
                r.success_probability
            );
            assert_eq!(r.layers, 2 * r.iterations + 1);
            assert_eq!(r.queries, r.iterations as u64);
        }
    }

    #[test]
    fn hybrid_full_budget_is_classical() {
        let r = hybrid_block(64, 64, 17).unwrap();
        assert_eq!(r.block_count, Some(1));
        assert_eq!(r.queries, 64);
        assert_eq!(r.layers, 0);
        assert_eq!(r.success_probability, 1.0);
        assert_eq!(r.product_over_n(), 0.0);
    }

    #[test]
    fn hybrid_minimum_budget_matches_standard() {
        let std = grover_standard(64, 5).unwrap();
        let hyb = hybrid_block(64, 8, 5).unwrap();
        assert_eq!(hyb.block_count, Some(64));
        assert_eq!(hyb.block_size, Some(1));
        assert_eq!(hyb.iterations, std.iterations);
        assert_eq!(hyb.queries, std.queries);
        assert_eq!(hyb.layers, std.layers);
        assert!((hyb.success_probability - std.success_probability).abs() < 1e-9);
    }

    #[test]
    fn hybrid_intermediate_point_n64_t16() {
        let r = hybrid_block(64, 16, 40).unwrap();
        assert_eq!(r.block_count, Some(16));
        assert_eq!(r.block_size, Some(4));
        assert_eq!(r.iterations, 3);
        assert_eq!(r.queries, 16);
        assert_eq!(r.layers, 7);
        let closed = standard_success_probability(16, 3);
        assert!((r.success_probability - closed).abs() < 1e-9);
    }

    #[test]
    fn hybrid_success_beats_two_thirds_everywhere() {
        for n in [9usize, 10, 16, 32, 33, 64, 100, 256] {
            let lo = ceil_sqrt(n);
            for t in lo..=n {
                let r = hybrid_block(n, t, n - 1).unwrap();
                assert!(
                    r.success_probability >= 2.0 / 3.0,
                    "n = {n}, t = {t}: success {}",
                    r.success_probability
                );
            }
        }
    }

    #[test]
    fn hybrid_rejects_bad_budgets() {
        assert!(matches!(
            hybrid_block(64, 7, 0),
            Err(Error::QueryTargetOutOfRange { lo: 8, hi: 64, .. })
        ));
        assert!(matches!(
            hybrid_block(64, 65, 0),
            Err(Error::QueryTargetOutOfRange { .. })
        ));
    }

    #[test]
    fn hybrid_circuit_matches_block_walk() {
        for (n, t) in [(8usize, 4usize), (16, 6), (16, 8), (10, 4)] {
            for marked in [0, n / 2, n - 1] {
                let hc = build_hybrid_circuit(n, t, marked).unwrap();
                let mb = marked / hc.block_size;
                let walk = block_trajectory(hc.pad_blocks, Some(mb), hc.iterations);
                // Run the circuit gate by gate, checking each boundary.
                let mut state = Statevector::zero_state(hc.circuit.num_qubits());
                let mut next = 0usize;
                for (gi, gate) in hc.circuit.gates().iter().enumerate() {
                    state = crate::gate::apply_gate(&state, gate).unwrap();
                    if next < hc.boundaries.len() && gi + 1 == hc.boundaries[next] {
                        let expected = block_state_on_register(
                            &walk[next],
                            hc.block_qubits,
                            hc.circuit.num_qubits(),
                        );
                        let overlap = expected.inner_product(&state).unwrap().norm();
                        assert!(
                            overlap * overlap > 1.0 - 1e-9,
                            "n = {n}, t = {t}, boundary {next}: fidelity {}",
                            overlap * overlap
                        );
                        next += 1;
                    }
                }
                assert_eq!(next, hc.boundaries.len());
                assert_eq!(
                    hc.oracle.queries(),
                    (hc.iterations * hc.block_size) as u64
                );
            }
        }
    }

    /// `Σ_j v[j]·|j⟩_B ⊗ |0⟩_scratch ⊗ |−⟩_flag` on a `width`-qubit register.
    fn block_state_on_register(v: &[f64], block_qubits: usize, width: usize) -> Statevector {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << width];
        let flag_bit = 1usize << (width - 1);
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        for (j, &x) in v.iter().enumerate() {
            assert!(j < (1 << block_qubits));
            amps[j] = Complex64::new(x * inv_sqrt2, 0.0);
            amps[j | flag_bit] = Complex64::new(-x * inv_sqrt2, 0.0);
        }
        Statevector::from_amplitudes(amps).unwrap()
    }

    #[test]
    fn hybrid_circuit_rejects_classical_endpoint() {
        assert!(build_hybrid_circuit(16, 16, 3).is_err());
    }

    #[test]
    fn progress_trace_shapes_and_bounds() {
        for (n, t) in [(16usize, 4usize), (16, 8), (16, 16), (32, 6), (32, 32)] {
            let tr = progress_trace(n, t).unwrap();
            assert!((tr.p_real[0] - 1.0).abs() < 1e-9, "p_0 = {}", tr.p_real[0]);
            assert_eq!(tr.p_real.len(), tr.block_queries.len() + 1);
            assert_eq!(tr.bounds.len(), tr.block_queries.len());
            for (j, w) in tr.p_real.windows(2).enumerate() {
                assert!(
                    (w[1] - w[0]).abs() <= tr.bounds[j] + 1e-9,
                    "n = {n}, t = {t}, block {j}: |Δp| = {} > {}",
                    (w[1] - w[0]).abs(),
                    tr.bounds[j]
                );
            }
            let total: u64 = tr.block_queries.iter().sum();
            let report = hybrid_block(n, t, 0).unwrap();
            assert_eq!(total, report.queries);
            assert!((tr.success_probability - report.success_probability).abs() < 1e-12);
            if tr.success_probability >= 2.0 / 3.0 {
                let last = *tr.p_real.last().unwrap();
                assert!(last <= 0.95, "final p = {last}");
            }
        }
    }

    #[test]
    fn sweep_band_for_n64() {
        let reports = tradeoff_sweep(64, &[8, 16, 32, 64], 21).unwrap();
        for r in &reports {
            assert!(r.success_probability >= 2.0 / 3.0);
            let prod = r.product_over_n();
            assert!(prod <= 10.0, "product {prod}");
            if r.layers >= 1 {
                assert!(prod >= 0.1, "product {prod}");
            }
        }
        // Frozen endpoints.
        assert_eq!(reports[0].queries, 6);
        assert_eq!(reports[0].layers, 13);
        assert_eq!(reports[1].queries, 16);
        assert_eq!(reports[1].layers, 7);
        assert_eq!(reports[3].layers, 0);
    }
}
