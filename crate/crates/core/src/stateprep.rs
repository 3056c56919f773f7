//! Entropy-bounded preparation of target states.
//!
//! Given a target state with measurement entropy `H`, the synthesizer emits
//! a circuit preparing it to Euclidean accuracy `eps` whose basis-changing
//! budget scales with `H` rather than with the register width:
//!
//! 1. **Truncate** ([`plan_truncation`]): with `λ = 2/eps`, keep the
//!    outcomes of probability at least `2^{−λH}`. The discarded tail mass is
//!    at most `1/λ`, and at most `2^{λH}` outcomes survive, so
//!    `k = ⌈log₂ |kept|⌉ ≤ λH` code qubits suffice.
//! 2. **Synthesize** ([`plan_stages`] / [`synthesize_nonnegative`]): prepare
//!    the renormalized kept distribution, reindexed onto `{0,1}^k`, by one
//!    conditioned rotation stage per code qubit. Every stage angle is
//!    quantized to `ℓ` bits (a multiple of `π/2^ℓ`), and the stage is
//!    emitted as at most `ℓ` rotation slots — one per binary digit of the
//!    angle — so the whole synthesis uses at most `k·ℓ` rotation slots.
//! 3. **Relabel and rephase**: a basis permutation moves code states onto
//!    the original outcome indices and a diagonal phase gate restores the
//!    target phases. Both are basis-preserving, so step 2 carries the whole
//!    basis-changing budget.
//!
//! The truncation threshold keeps the *planned* budget tied to `λH`, but its
//! tail bound controls probability mass, not Euclidean distance; a thin tail
//! can still sit at Euclidean distance above `eps`. [`synthesize`] therefore
//! verifies the achieved distance against the request and doubles `λ` until
//! it passes (once everything is kept, only quantization error `≤ eps/2`
//! remains, so the loop terminates).

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::circuit::{count_basis_changing, count_layers, Circuit};
use crate::entropy::ProbDist;
use crate::error::{Error, Result};
use crate::gate::{BasisPermutation, Gate};
use crate::state::{l2_distance, Statevector};
use crate::util::ceil_log2;

/// One outcome of a target state.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetEntry {
    /// Outcome index in `0..num_outcomes`.
    pub index: usize,
    /// Probability of the outcome (positive; zero entries are dropped).
    pub probability: f64,
    /// Phase of the amplitude, radians in `[0, 2π)`.
    pub phase: f64,
}

/// A target pure state given by outcome probabilities and phases.
///
/// Probabilities are renormalized exactly at construction (after checking
/// the sum is within `1e-6` of 1), entries are kept sorted by index, and
/// zero-probability entries are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetState {
    num_outcomes: usize,
    entries: Vec<TargetEntry>,
}

impl TargetState {
    /// Validates and canonicalizes a target.
    pub fn new(num_outcomes: usize, entries: Vec<TargetEntry>) -> Result<Self> {
        if num_outcomes == 0 {
            return Err(Error::EmptyDistribution);
        }
        let mut seen = vec![false; num_outcomes];
        let mut sum = 0.0;
        for e in &entries {
            if e.index >= num_outcomes {
                return Err(Error::TargetIndexOutOfRange {
                    index: e.index,
                    num_outcomes,
                });
            }
            if seen[e.index] {
                return Err(Error::DuplicateTargetIndex(e.index));
            }
            seen[e.index] = true;
            if !e.probability.is_finite() || !e.phase.is_finite() {
                return Err(Error::NonFinite(e.probability));
            }
            if e.probability < 0.0 {
                return Err(Error::NegativeProbability {
                    index: e.index,
                    value: e.probability,
                });
            }
            sum += e.probability;
        }
        if (sum - 1.0).abs() > 1e-6 {
            return Err(Error::ProbabilitiesNotNormalized {
                sum,
                tolerance: 1e-6,
            });
        }
        let mut entries: Vec<TargetEntry> = entries
            .into_iter()
            .filter(|e| e.probability > 0.0)
            .map(|e| TargetEntry {
                index: e.index,
                probability: e.probability / sum,
                phase: e.phase.rem_euclid(2.0 * PI),
            })
            .collect();
        entries.sort_by_key(|e| e.index);
        if entries.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        Ok(Self {
            num_outcomes,
            entries,
        })
    }

    /// Target with the given probabilities and all phases zero.
    pub fn from_probabilities(probs: &[f64]) -> Result<Self> {
        let entries = probs
            .iter()
            .enumerate()
            .map(|(index, &probability)| TargetEntry {
                index,
                probability,
                phase: 0.0,
            })
            .collect();
        Self::new(probs.len(), entries)
    }

    /// Target with the measurement probabilities of a distribution.
    pub fn from_dist(dist: &ProbDist) -> Result<Self> {
        Self::from_probabilities(dist.probs())
    }

    /// Target matching a statevector exactly (probabilities and phases).
    pub fn from_statevector(state: &Statevector) -> Result<Self> {
        let entries = state
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(index, a)| TargetEntry {
                index,
                probability: a.norm_sqr(),
                phase: a.arg(),
            })
            .collect();
        Self::new(state.len(), entries)
    }

    /// Declared outcome count (the register must cover it).
    pub fn num_outcomes(&self) -> usize {
        self.num_outcomes
    }

    /// Entries with positive probability, sorted by index.
    pub fn entries(&self) -> &[TargetEntry] {
        &self.entries
    }

    /// Qubits needed to index the outcome space: `⌈log₂ num_outcomes⌉`.
    pub fn num_qubits(&self) -> usize {
        ceil_log2(self.num_outcomes)
    }

    /// Shannon entropy of the outcome distribution, in bits.
    pub fn shannon_entropy(&self) -> f64 {
        let h: f64 = self
            .entries
            .iter()
            .map(|e| -e.probability * e.probability.log2())
            .sum();
        h.max(0.0)
    }

    /// The target as a statevector on `num_qubits` qubits.
    pub fn to_statevector(&self, num_qubits: usize) -> Result<Statevector> {
        let dim = 1usize.checked_shl(num_qubits as u32).unwrap_or(0);
        if dim < self.num_outcomes {
            return Err(Error::TargetDoesNotFit {
                circuit: dim,
                target: self.num_outcomes,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        for e in &self.entries {
            amps[e.index] = Complex64::from_polar(e.probability.sqrt(), e.phase);
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        Statevector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect())
    }
}

/// Outcome of the entropy-driven truncation step.
#[derive(Debug, Clone)]
pub struct TruncationPlan {
    /// Sharpness parameter; the default pipeline uses `λ = 2/eps`.
    pub lambda: f64,
    /// Keep threshold `2^{−λH}`.
    pub threshold: f64,
    /// Kept outcome indices, by descending probability (ties: lower index
    /// first). Code state `c` maps onto `kept[c]`.
    pub kept: Vec<usize>,
    /// Probabilities aligned with `kept` (not yet renormalized).
    pub kept_probs: Vec<f64>,
    /// Total probability of the discarded outcomes; at most `1/λ` for
    /// `λ ≥ 1`.
    pub tail_mass: f64,
    /// Code qubits `k = ⌈log₂ |kept|⌉` (0 when a single outcome survives).
    pub code_qubits: usize,
}

/// Plans truncation at the pipeline default `λ = 2/eps`.
pub fn plan_truncation(target: &TargetState, eps: f64) -> Result<TruncationPlan> {
    if !eps.is_finite() || eps <= 0.0 || eps >= 2.0 {
        return Err(Error::PrepEpsOutOfRange(eps));
    }
    plan_truncation_with_lambda(target, 2.0 / eps)
}

/// Plans truncation at an explicit sharpness `λ > 0`.
///
/// Keeps `W = {i : p_i ≥ 2^{−λH}}`; for `λ ≥ 1` the set is nonempty because
/// the largest probability always passes, and the tail mass is at most
/// `1/λ`. For `λ < 1` the largest outcome is force-kept.
pub fn plan_truncation_with_lambda(target: &TargetState, lambda: f64) -> Result<TruncationPlan> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(Error::NonFinite(lambda));
    }
    let h = target.shannon_entropy();
    let threshold = (-lambda * h).exp2();
    let mut kept: Vec<&TargetEntry> = target
        .entries()
        .iter()
        .filter(|e| e.probability >= threshold)
        .collect();
    if kept.is_empty() {
        // Only reachable for λ < 1: force-keep the most likely outcome.
        let best = target
            .entries()
            .iter()
            .max_by(|a, b| {
                a.probability
                    .partial_cmp(&b.probability)
                    .unwrap()
                    .then(b.index.cmp(&a.index))
            })
            .expect("targets are non-empty");
        kept.push(best);
    }
    kept.sort_by(|a, b| {
        b.probability
            .partial_cmp(&a.probability)
            .unwrap()
            .then(a.index.cmp(&b.index))
    });
    let kept_mass: f64 = kept.iter().map(|e| e.probability).sum();
    let code_qubits = ceil_log2(kept.len());
    Ok(TruncationPlan {
        lambda,
        threshold,
        kept: kept.iter().map(|e| e.index).collect(),
        kept_probs: kept.iter().map(|e| e.probability).collect(),
        tail_mass: (1.0 - kept_mass).max(0.0),
        code_qubits,
    })
}

/// Rotation bits `ℓ = ⌈log₂(πk/budget)⌉` (at least 1) so that `k` stage
/// angles quantized to multiples of `π/2^ℓ` cost at most `budget` in
/// Euclidean distance. Zero code qubits need zero bits.
pub fn precision_for_budget(code_qubits: usize, budget: f64) -> usize {
    if code_qubits == 0 {
        return 0;
    }
    let raw = (PI * code_qubits as f64 / budget).log2().ceil();
    if raw < 1.0 {
        1
    } else {
        raw as usize
    }
}

/// One planned rotation within a stage.
#[derive(Debug, Clone)]
pub struct AngleEntry {
    /// Prefix value over the earlier code qubits.
    pub prefix: usize,
    /// Probability mass reaching this prefix.
    pub mass: f64,
    /// Exact stage angle `arccos √(q_{prefix·0}/q_prefix)`.
    pub theta: f64,
    /// Quantized angle numerator: `quantized = steps·π/2^ℓ`,
    /// `steps ∈ [0, 2^{ℓ−1}]`.
    pub steps: u64,
    /// The quantized angle actually synthesized.
    pub quantized: f64,
}

/// All rotations of one synthesis stage (one code qubit).
#[derive(Debug, Clone)]
pub struct StagePlan {
    /// The code qubit this stage writes.
    pub qubit: usize,
    /// One entry per prefix with positive mass.
    pub entries: Vec<AngleEntry>,
}

/// The full staged-rotation plan for a nonnegative target on `{0,1}^k`.
#[derive(Debug, Clone)]
pub struct SynthesisPlan {
    /// Code qubits `k`.
    pub code_qubits: usize,
    /// Rotation bits `ℓ` per stage angle.
    pub precision_bits: usize,
    /// One stage per code qubit, in emission order.
    pub stages: Vec<StagePlan>,
}

impl SynthesisPlan {
    /// The stage-rotation budget `k·ℓ`: one slot per (stage, angle bit)
    /// pair. Emission uses at most this many rotation gates.
    pub fn staged_rotation_count(&self) -> usize {
        self.code_qubits * self.precision_bits
    }
}

/// Plans the staged synthesis of a probability vector over `{0,1}^k`
/// (length must be a power of two) with `ℓ = precision_bits` angle bits.
pub fn plan_stages(q: &ProbDist, precision_bits: usize) -> Result<SynthesisPlan> {
    if !q.len().is_power_of_two() {
        return Err(Error::LengthNotPowerOfTwo(q.len()));
    }
    let k = q.len().trailing_zeros() as usize;
    if k > 0 && precision_bits == 0 {
        return Err(Error::PrecisionOutOfRange { got: 0, max: 62 });
    }
    if precision_bits > 62 {
        return Err(Error::PrecisionOutOfRange {
            got: precision_bits as u32,
            max: 62,
        });
    }
    // masses[t][y] = total mass of code states whose low t bits equal y.
    let mut masses: Vec<Vec<f64>> = Vec::with_capacity(k + 1);
    masses.push(q.probs().to_vec());
    for t in (0..k).rev() {
        let finer = &masses[masses.len() - 1];
        let mut coarser = vec![0.0; 1 << t];
        for (y, c) in coarser.iter_mut().enumerate() {
            *c = finer[y] + finer[y | (1 << t)];
        }
        masses.push(coarser);
    }
    masses.reverse(); // masses[t] now has 2^t entries.

    let half_steps = 1u64 << (precision_bits.max(1) - 1);
    let scale = (1u64 << precision_bits.max(1)) as f64;
    let mut stages = Vec::with_capacity(k);
    for t in 0..k {
        let mut entries = Vec::new();
        for (y, &mass) in masses[t].iter().enumerate().take(1usize << t) {
            if mass <= 0.0 {
                continue;
            }
            let ratio = (masses[t + 1][y] / mass).clamp(0.0, 1.0);
            let theta = ratio.sqrt().acos();
            // Quantize by flooring, with a snap-up guard so angles that are
            // exactly representable (dyadic fractions of π, e.g. π/4 for
            // uniform targets) do not lose their last bit to roundoff.
            let steps = ((theta / PI * scale + 1e-9).floor() as u64).min(half_steps);
            let quantized = steps as f64 / scale * PI;
            entries.push(AngleEntry {
                prefix: y,
                mass,
                theta,
                steps,
                quantized,
            });
        }
        stages.push(StagePlan { qubit: t, entries });
    }
    Ok(SynthesisPlan {
        code_qubits: k,
        precision_bits,
        stages,
    })
}

/// True when emitting the plan needs the helper flag qubit (some angle bit
/// applies to a proper, nonempty subset of the active prefixes).
pub fn plan_needs_flag(plan: &SynthesisPlan) -> bool {
    for stage in &plan.stages {
        for s in 1..=plan.precision_bits {
            let (in_set, active) = bit_census(plan, stage, s);
            if in_set > 0 && in_set < active {
                return true;
            }
        }
    }
    false
}

fn bit_census(plan: &SynthesisPlan, stage: &StagePlan, s: usize) -> (usize, usize) {
    let shift = (plan.precision_bits - s) as u32;
    let in_set = stage
        .entries
        .iter()
        .filter(|e| (e.steps >> shift) & 1 == 1)
        .count();
    (in_set, stage.entries.len())
}

/// Emits the gates of one stage into `circuit`.
///
/// For each angle bit `s` (weight `π/2^s`), the prefixes whose quantized
/// angle has that bit set receive the rotation:
///
/// * no prefix → nothing;
/// * every active prefix → one plain `Rotation(π/2^s)` on the stage qubit
///   (inactive prefixes carry no amplitude, so rotating them is harmless);
/// * a proper subset → a basis permutation XORs the membership predicate
///   onto `flag`, a `ControlledRotation` fires where the flag is set, and
///   the same permutation uncomputes the flag.
///
/// Either way each angle bit costs at most one basis-changing gate, so a
/// stage costs at most `ℓ` and the plan at most `k·ℓ`.
fn emit_stage(
    circuit: &mut Circuit,
    plan: &SynthesisPlan,
    stage: &StagePlan,
    flag: usize,
) -> Result<()> {
    let t = stage.qubit;
    for s in 1..=plan.precision_bits {
        let (in_set, active) = bit_census(plan, stage, s);
        if in_set == 0 {
            continue;
        }
        let angle = PI / (1u64 << s) as f64;
        if in_set == active {
            circuit.push(Gate::Rotation { target: t, angle })?;
            continue;
        }
        let shift = (plan.precision_bits - s) as u32;
        let mut member = vec![false; 1 << t];
        for e in &stage.entries {
            if (e.steps >> shift) & 1 == 1 {
                member[e.prefix] = true;
            }
        }
        let mut qubits: Vec<usize> = (0..t).collect();
        qubits.push(flag);
        let dim = 1usize << (t + 1);
        let prefix_mask = (1usize << t) - 1;
        let table: Vec<usize> = (0..dim)
            .map(|u| {
                let y = u & prefix_mask;
                let f = u >> t;
                y | ((f ^ usize::from(member[y])) << t)
            })
            .collect();
        let mark = Gate::BasisPermutation(BasisPermutation::new(qubits, table, None)?);
        circuit.push(mark.clone())?;
        circuit.push(Gate::ControlledRotation {
            controls: vec![flag],
            target: t,
            angle,
        })?;
        circuit.push(mark)?;
    }
    Ok(())
}

/// Synthesizes a nonnegative-amplitude state over `{0,1}^k` from its
/// probability vector, with stage angles quantized to `ℓ = precision_bits`
/// bits.
///
/// The circuit has `k` qubits, plus one helper flag qubit when some angle
/// bit conditions on a proper subset of prefixes. It contains at most `k·ℓ`
/// basis-changing gates and prepares the state
/// `Σ √q'_c |c⟩` where each stage angle was quantized; the Euclidean error
/// is at most `k·π/2^ℓ`.
pub fn synthesize_nonnegative(q: &ProbDist, precision_bits: usize) -> Result<Circuit> {
    let plan = plan_stages(q, precision_bits)?;
    let k = plan.code_qubits;
    let width = if plan_needs_flag(&plan) { k + 1 } else { k };
    let mut circuit = Circuit::new(width.max(k));
    for stage in &plan.stages {
        emit_stage(&mut circuit, &plan, stage, k)?;
    }
    Ok(circuit)
}

/// Metrics of one synthesis run.
#[derive(Debug, Clone, Serialize)]
pub struct PrepReport {
    /// The accuracy that was asked for.
    pub requested_eps: f64,
    /// Euclidean distance between the prepared and target states, measured
    /// by simulation; always at most `requested_eps` on success.
    pub achieved_distance: f64,
    /// Shannon entropy of the target distribution, bits.
    pub entropy_bits: f64,
    /// Final truncation sharpness (`2/eps`, doubled on each escalation).
    pub lambda: f64,
    /// Code qubits `k` of the final attempt.
    pub code_qubits: usize,
    /// Angle bits `ℓ = ⌈log₂(2πk/eps)⌉` of the final attempt.
    pub precision_bits: usize,
    /// The coarser variant `⌈log₂(2k/eps)⌉` that ignores the π factor;
    /// reported for comparison only.
    pub precision_bits_coarse: usize,
    /// Stage-rotation budget `k·ℓ`; emission never exceeds it.
    pub staged_rotation_count: usize,
    /// Basis-changing gates actually present in the circuit (`≤ k·ℓ`).
    pub basis_changing_count: usize,
    /// Basis-changing layers of the circuit.
    pub layer_count: usize,
    /// Register width of the emitted circuit.
    pub circuit_qubits: usize,
    /// Total gates of every kind.
    pub gate_count: usize,
}

/// Synthesizes a circuit preparing `target` to Euclidean accuracy `eps`,
/// verifying the achieved distance by simulation.
///
/// Runs the truncate–synthesize–relabel pipeline at `λ = 2/eps` and doubles
/// `λ` until the simulated distance is at most `eps`. Fails with
/// [`Error::QubitCapExceeded`] when the circuit would need more than
/// `qubit_cap` qubits.
pub fn synthesize(
    target: &TargetState,
    eps: f64,
    qubit_cap: usize,
) -> Result<(Circuit, PrepReport)> {
    if !eps.is_finite() || eps <= 0.0 || eps >= 2.0 {
        return Err(Error::PrepEpsOutOfRange(eps));
    }
    let n = target.num_qubits();
    let entropy_bits = target.shannon_entropy();
    let mut lambda = 2.0 / eps;
    let mut best = f64::INFINITY;
    for _ in 0..64 {
        let trunc = plan_truncation_with_lambda(target, lambda)?;
        let k = trunc.code_qubits;
        let kept_mass: f64 = trunc.kept_probs.iter().sum();
        let mut q = vec![0.0; 1usize << k];
        for (c, &p) in trunc.kept_probs.iter().enumerate() {
            q[c] = p / kept_mass;
        }
        let ell = precision_for_budget(k, eps / 2.0);
        let plan = plan_stages(&ProbDist::new(q)?, ell)?;
        let width = if plan_needs_flag(&plan) && k == n {
            n + 1
        } else {
            n
        };
        if width > qubit_cap {
            return Err(Error::QubitCapExceeded {
                needed: width,
                cap: qubit_cap,
            });
        }

        let mut circuit = Circuit::new(width);
        for stage in &plan.stages {
            emit_stage(&mut circuit, &plan, stage, k)?;
        }
        // Relabel code states onto the kept outcome indices.
        if n > 0 {
            let dim = 1usize << n;
            let mut table = vec![usize::MAX; dim];
            let mut used = vec![false; dim];
            for (c, &outcome) in trunc.kept.iter().enumerate() {
                table[c] = outcome;
                used[outcome] = true;
            }
            let mut next_free = (0..dim).filter(|&v| !used[v]);
            for slot in table.iter_mut() {
                if *slot == usize::MAX {
                    *slot = next_free.next().expect("bijection completion");
                }
            }
            let perm = BasisPermutation::new((0..n).collect(), table, None)?;
            if !perm.is_identity() {
                circuit.push(Gate::BasisPermutation(perm))?;
            }
        }
        // Restore target phases.
        let dim = 1usize << n;
        let mut phases = vec![Complex64::new(1.0, 0.0); dim];
        for e in target.entries() {
            phases[e.index] = Complex64::from_polar(1.0, e.phase);
        }
        let rephase = BasisPermutation::identity_with_phases((0..n).collect(), phases)?;
        if !rephase.is_identity() {
            circuit.push(Gate::BasisPermutation(rephase))?;
        }

        let achieved = verify_prep(&circuit, target)?;
        best = best.min(achieved);
        if achieved <= eps {
            let report = PrepReport {
                requested_eps: eps,
                achieved_distance: achieved,
                entropy_bits,
                lambda,
                code_qubits: k,
                precision_bits: ell,
                precision_bits_coarse: if k == 0 {
                    0
                } else {
                    ((2.0 * k as f64 / eps).log2().ceil()).max(1.0) as usize
                },
                staged_rotation_count: plan.staged_rotation_count(),
                basis_changing_count: count_basis_changing(&circuit),
                layer_count: count_layers(&circuit),
                circuit_qubits: width,
                gate_count: circuit.len(),
            };
            return Ok((circuit, report));
        }
        if trunc.kept.len() == target.entries().len() {
            // Everything was kept, so only quantization error remains; it is
            // bounded by eps/2 < eps and this branch is unreachable unless
            // an invariant broke.
            return Err(Error::SynthesisDidNotConverge { best });
        }
        lambda *= 2.0;
    }
    Err(Error::SynthesisDidNotConverge { best })
}

/// Euclidean distance between what `circuit` prepares from `|0…0⟩` and the
/// target, embedded in the circuit's register.
pub fn verify_prep(circuit: &Circuit, target: &TargetState) -> Result<f64> {
    let prepared = circuit.run_from_zero()?;
    let wanted = target.to_statevector(circuit.num_qubits())?;
    l2_distance(&prepared, &wanted)
}
