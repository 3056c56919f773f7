//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! Every tolerance here is pinned; loosening one is a behavior change and
//! should be treated as such in review.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::process::Command;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quantumness::circuit::Circuit;
use quantumness::entropy::{
    entropy_trace, shannon_entropy, smoothed_entropy_lb, spiked_dist, ProbDist,
};
use quantumness::gate::{BasisPermutation, Gate, OracleGate};
use quantumness::grover::{
    grover_standard, hybrid_block, progress_trace, standard_success_probability, tradeoff_sweep,
};
use quantumness::knuth_yao::{build_tree, expected_flips};
use quantumness::oracle::{OracleHandle, OracleInstance, Promise};
use quantumness::stateprep::{precision_for_budget, synthesize, TargetEntry, TargetState};

// --- 1: synthesis hits the requested accuracy --------------------------------

#[test]
fn acceptance_01_prep_accuracy() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC0_0001);
    let eps_grid = [0.3, 0.1, 0.03];
    for case in 0..100 {
        let eps = eps_grid[case % eps_grid.len()];
        let outcomes = rng.gen_range(1..=256);
        let mut probs: Vec<f64> = (0..outcomes)
            .map(|_| rng.gen::<f64>().powi(3) + 1e-12)
            .collect();
        let sum: f64 = probs.iter().sum();
        for p in probs.iter_mut() {
            *p /= sum;
        }
        let entries: Vec<TargetEntry> = probs
            .iter()
            .enumerate()
            .map(|(index, &probability)| TargetEntry {
                index,
                probability,
                phase: if case % 4 == 0 {
                    rng.gen::<f64>() * TAU
                } else {
                    0.0
                },
            })
            .collect();
        let target = TargetState::new(outcomes, entries).unwrap();
        let (_, report) = synthesize(&target, eps, 22).unwrap();
        assert!(
            report.achieved_distance <= eps,
            "case {case}: achieved {} > requested {eps} ({outcomes} outcomes)",
            report.achieved_distance
        );
        assert!(report.basis_changing_count <= report.staged_rotation_count);
    }
    println!("acceptance 01 prep-accuracy: PASS");
}

// --- 2: the stage budget follows the k·⌈log₂(2πk/ε)⌉ formula -----------------

#[test]
fn acceptance_02_stage_budget_formula() {
    // Lemma-level slot count: 8 code qubits at budget 0.05 need 9 bits each.
    assert_eq!(precision_for_budget(8, 0.05), 9);
    assert_eq!(8 * precision_for_budget(8, 0.05), 72);

    // Uniform over 16: k = 4, ℓ = ⌈log₂(2π·4/0.05)⌉ = 9, and the dyadic
    // angles are representable exactly, so the distance collapses.
    let uniform = TargetState::from_probabilities(&[1.0 / 16.0; 16]).unwrap();
    let (_, report) = synthesize(&uniform, 0.05, 22).unwrap();
    assert_eq!(report.code_qubits, 4);
    assert_eq!(report.precision_bits, 9);
    assert_eq!(report.staged_rotation_count, 36);
    assert_eq!(
        report.staged_rotation_count,
        report.code_qubits * report.precision_bits
    );
    assert!(
        report.achieved_distance < 1e-9,
        "uniform-16 distance {}",
        report.achieved_distance
    );

    // The identity holds across a spread of random targets and budgets.
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC0_0002);
    for _ in 0..25 {
        let outcomes = rng.gen_range(2..=64);
        let mut probs: Vec<f64> = (0..outcomes).map(|_| rng.gen::<f64>() + 1e-9).collect();
        let sum: f64 = probs.iter().sum();
        for p in probs.iter_mut() {
            *p /= sum;
        }
        let eps = [0.2, 0.1, 0.05][rng.gen_range(0..3)];
        let target = TargetState::from_probabilities(&probs).unwrap();
        let (_, report) = synthesize(&target, eps, 22).unwrap();
        assert_eq!(
            report.staged_rotation_count,
            report.code_qubits * report.precision_bits
        );
        let k = report.code_qubits as f64;
        if report.code_qubits > 0 {
            let expected = ((2.0 * PI * k / eps).log2().ceil()).max(1.0) as usize;
            assert_eq!(report.precision_bits, expected);
        }
    }
    println!("acceptance 02 stage-budget-formula: PASS");
}

// --- 3: entropy grows by at most 2·arity per basis-changing gate -------------

fn sample_distinct(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    all.truncate(k);
    all
}

fn random_gate(rng: &mut ChaCha8Rng, nq: usize) -> Gate {
    loop {
        match rng.gen_range(0..8u8) {
            0 => return Gate::PauliX { target: rng.gen_range(0..nq) },
            1 if nq >= 2 => {
                let q = sample_distinct(rng, nq, 2);
                return Gate::CNot { control: q[0], target: q[1] };
            }
            2 if nq >= 3 => {
                let q = sample_distinct(rng, nq, 3);
                return Gate::Toffoli { controls: [q[0], q[1]], target: q[2] };
            }
            3 => return Gate::Hadamard { target: rng.gen_range(0..nq) },
            4 => {
                let angle = if rng.gen_bool(0.25) {
                    FRAC_PI_2 * rng.gen_range(-2i32..=2) as f64
                } else {
                    rng.gen_range(-PI..PI)
                };
                return Gate::Rotation { target: rng.gen_range(0..nq), angle };
            }
            5 if nq >= 2 => {
                let width = rng.gen_range(2..=3.min(nq));
                let q = sample_distinct(rng, nq, width);
                return Gate::ControlledRotation {
                    controls: q[1..].to_vec(),
                    target: q[0],
                    angle: rng.gen_range(-PI..PI),
                };
            }
            6 => {
                let width = rng.gen_range(1..=3.min(nq));
                let qubits = sample_distinct(rng, nq, width);
                let dim = 1usize << width;
                let mut table: Vec<usize> = (0..dim).collect();
                table.shuffle(rng);
                return Gate::BasisPermutation(
                    BasisPermutation::new(qubits, table, None).unwrap(),
                );
            }
            7 if nq >= 2 => {
                let width = rng.gen_range(1..=2.min(nq - 1));
                let mut q = sample_distinct(rng, nq, width + 1);
                let flag = q.pop().unwrap();
                let bits: Vec<bool> = (0..1usize << width).map(|_| rng.gen()).collect();
                let handle = OracleHandle::new(OracleInstance::new(bits, Promise::None).unwrap());
                return Gate::Oracle(OracleGate { handle, index_register: q, flag });
            }
            _ => continue,
        }
    }
}

fn random_preserving_gate(rng: &mut ChaCha8Rng, nq: usize) -> Gate {
    loop {
        let g = match rng.gen_range(0..4u8) {
            0 => Gate::PauliX { target: rng.gen_range(0..nq) },
            1 if nq >= 2 => {
                let q = sample_distinct(rng, nq, 2);
                Gate::CNot { control: q[0], target: q[1] }
            }
            2 => Gate::Rotation {
                target: rng.gen_range(0..nq),
                angle: FRAC_PI_2 * rng.gen_range(-2i32..=2) as f64,
            },
            3 => {
                let width = rng.gen_range(1..=2.min(nq));
                let qubits = sample_distinct(rng, nq, width);
                let dim = 1usize << width;
                let mut table: Vec<usize> = (0..dim).collect();
                table.shuffle(rng);
                Gate::BasisPermutation(BasisPermutation::new(qubits, table, None).unwrap())
            }
            _ => continue,
        };
        assert!(!g.is_basis_changing());
        return g;
    }
}

#[test]
fn acceptance_03_entropy_growth_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC0_0003);
    for case in 0..1000 {
        let nq = rng.gen_range(1..=10);
        let len = rng.gen_range(0..=50);
        let mut circuit = Circuit::new(nq);
        for _ in 0..len {
            circuit.push(random_gate(&mut rng, nq)).unwrap();
        }
        let trace = entropy_trace(&circuit).unwrap();
        assert!(
            trace.max_excess() <= 1e-9,
            "case {case}: excess {}",
            trace.max_excess()
        );

        if case % 10 == 0 {
            // Inserting a basis-preserving gate takes no snapshot and leaves
            // every snapshot up to the insertion point untouched.
            let pos = rng.gen_range(0..=circuit.len());
            let mut gates = circuit.gates().to_vec();
            let prefix_snapshots =
                1 + gates[..pos].iter().filter(|g| g.is_basis_changing()).count();
            gates.insert(pos, random_preserving_gate(&mut rng, nq));
            let inserted = Circuit::with_gates(nq, gates).unwrap();
            let trace2 = entropy_trace(&inserted).unwrap();
            assert_eq!(trace.values().len(), trace2.values().len());
            for (i, (a, b)) in trace.values()[..prefix_snapshots]
                .iter()
                .zip(&trace2.values()[..prefix_snapshots])
                .enumerate()
            {
                assert!((a - b).abs() <= 1e-9, "case {case}, snapshot {i}: {a} vs {b}");
            }
            assert!(trace2.max_excess() <= 1e-9);
        }
    }
    println!("acceptance 03 entropy-growth-law: PASS");
}

// --- 4: the greedy smoothing surrogate tracks the exact optimum --------------

/// Exact minimum entropy over lattice distributions reachable by moving at
/// most `eps` of probability mass, via dynamic programming on (net shift,
/// L1 spent). Probabilities and `eps` must be multiples of `STEP`.
fn dp_min_entropy(probs: &[f64], eps: f64) -> f64 {
    const STEP: f64 = 1e-3;
    let grid: Vec<i64> = probs.iter().map(|p| (p / STEP).round() as i64).collect();
    assert_eq!(grid.iter().sum::<i64>(), 1000, "distribution must be gridded");
    let budget = (eps / STEP).round() as i64;
    let l1cap = 2 * budget;
    let width = (2 * budget + 1) as usize;
    let depth = (l1cap + 1) as usize;

    // −q·log₂(q) per lattice mass, precomputed.
    let xlog: Vec<f64> = (0..=(1000 + budget) as usize)
        .map(|q| {
            if q == 0 {
                0.0
            } else {
                let p = q as f64 * STEP;
                -p * p.log2()
            }
        })
        .collect();

    let mut dp = vec![f64::INFINITY; width * depth];
    dp[budget as usize * depth] = 0.0;
    for &g in &grid {
        let mut next = vec![f64::INFINITY; width * depth];
        for sd in 0..width {
            for l1 in 0..depth {
                let cur = dp[sd * depth + l1];
                if !cur.is_finite() {
                    continue;
                }
                let net = sd as i64 - budget;
                for d in -g.min(budget)..=budget {
                    let nnet = net + d;
                    if nnet.abs() > budget {
                        continue;
                    }
                    let nl1 = l1 as i64 + d.abs();
                    if nl1 > l1cap {
                        continue;
                    }
                    let cell =
                        &mut next[(nnet + budget) as usize * depth + nl1 as usize];
                    let cand = cur + xlog[(g + d) as usize];
                    if cand < *cell {
                        *cell = cand;
                    }
                }
            }
        }
        dp = next;
    }
    (0..depth)
        .map(|l1| dp[budget as usize * depth + l1])
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn acceptance_04_smoothing_surrogate() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC0_0004);
    for case in 0..10 {
        let outcomes = rng.gen_range(2..=6);
        // Random distribution on the 1e-3 lattice.
        let mut units = vec![1i64; outcomes];
        let mut rest = 1000 - outcomes as i64;
        for u in units.iter_mut().take(outcomes - 1) {
            let add = rng.gen_range(0..=rest);
            *u += add;
            rest -= add;
        }
        units[outcomes - 1] += rest;
        units.shuffle(&mut rng);
        let probs: Vec<f64> = units.iter().map(|&u| u as f64 * 1e-3).collect();
        let dist = ProbDist::new(probs.clone()).unwrap();
        for eps in [0.02, 0.05, 0.1] {
            let greedy = smoothed_entropy_lb(&dist, eps).unwrap();
            let exact = dp_min_entropy(&probs, eps);
            assert!(
                greedy >= exact - 1e-9,
                "case {case}, eps {eps}: greedy {greedy} below optimum {exact}"
            );
            assert!(
                greedy <= exact + 1e-2,
                "case {case}, eps {eps}: greedy {greedy} vs optimum {exact}"
            );
        }
    }

    // The separation the surrogate must certify: a barely-spiked state has
    // entropy ≈ 0.34 bits, but the whole tail fits inside an 0.02 ball.
    let spiked = spiked_dist(0.01, 1024).unwrap();
    let h = shannon_entropy(&spiked);
    assert!((h - 0.3399).abs() < 3e-3, "spiked entropy {h}");
    let smoothed = smoothed_entropy_lb(&spiked, 0.02).unwrap();
    assert!(smoothed <= 0.1, "smoothed entropy {smoothed}");
    println!("acceptance 04 smoothing-surrogate: PASS");
}

// --- 5: the sampling baseline spends H ± 2 random bits -----------------------

#[test]
fn acceptance_05_ky_bit_cost_sandwich() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC0_0005);
    for case in 0..200 {
        let outcomes = rng.gen_range(1..=64);
        let mut probs: Vec<f64> = (0..outcomes)
            .map(|_| rng.gen::<f64>().powi(2) + 1e-9)
            .collect();
        let sum: f64 = probs.iter().sum();
        for p in probs.iter_mut() {
            *p /= sum;
        }
        let dist = ProbDist::new(probs).unwrap();
        let tree = build_tree(&dist, 32).unwrap();
        let h = shannon_entropy(&dist);
        let e = expected_flips(&tree);
        assert!(
            e >= h - 1e-3 && e <= h + 2.0,
            "case {case}: H = {h}, E[flips] = {e}"
        );
    }

    // Dyadic distributions cost exactly H bits.
    for case in 0..50 {
        let p_bits = rng.gen_range(3..=20u32);
        let mut masses: Vec<u64> = vec![1u64 << p_bits];
        let splits = rng.gen_range(1..=12);
        for _ in 0..splits {
            let candidates: Vec<usize> = (0..masses.len())
                .filter(|&i| masses[i] >= 2)
                .collect();
            if candidates.is_empty() {
                break;
            }
            let i = candidates[rng.gen_range(0..candidates.len())];
            let half = masses[i] / 2;
            masses[i] = half;
            masses.push(half);
        }
        masses.shuffle(&mut rng);
        let scale = (1u64 << p_bits) as f64;
        let dist = ProbDist::new(masses.iter().map(|&m| m as f64 / scale).collect()).unwrap();
        let tree = build_tree(&dist, p_bits).unwrap();
        let h = shannon_entropy(&dist);
        let e = expected_flips(&tree);
        assert!(
            (e - h).abs() <= 1e-12,
            "case {case}: dyadic H = {h}, E[flips] = {e}"
        );
    }
    println!("acceptance 05 ky-bit-cost-sandwich: PASS");
}

// --- 6: search success probabilities ------------------------------------------

#[test]
fn acceptance_06_grover_success() {
    let r4 = grover_standard(4, 1).unwrap();
    assert!(
        (r4.success_probability - 1.0).abs() <= 1e-9,
        "n = 4 success {}",
        r4.success_probability
    );
    let r16 = grover_standard(16, 11).unwrap();
    assert!(
        (r16.success_probability - 0.9613).abs() <= 1e-3,
        "n = 16 success {}",
        r16.success_probability
    );
    for (n, r) in [(4usize, &r4), (16, &r16)] {
        let closed = standard_success_probability(n, r.iterations);
        assert!(
            (r.success_probability - closed).abs() <= 1e-9,
            "n = {n}: sim {} vs closed form {closed}",
            r.success_probability
        );
        assert_eq!(r.queries, r.iterations as u64);
        assert_eq!(r.layers, 2 * r.iterations + 1);
    }
    println!("acceptance 06 grover-success: PASS");
}

// --- 7: the query/layer tradeoff stays in a constant band ---------------------

#[test]
fn acceptance_07_tradeoff_band() {
    for n in [64usize, 256] {
        let lo = (n as f64).sqrt().ceil() as usize;
        let mut targets = Vec::new();
        let mut t = lo;
        while t < n {
            targets.push(t);
            t *= 2;
        }
        targets.push(n);
        let reports = tradeoff_sweep(n, &targets, n / 2).unwrap();
        for r in &reports {
            assert!(
                r.success_probability >= 2.0 / 3.0,
                "n = {n}, T = {:?}: success {}",
                r.t_target,
                r.success_probability
            );
            let prod = r.product_over_n();
            assert!(prod <= 10.0, "n = {n}, T = {:?}: product {prod}", r.t_target);
            if r.layers >= 1 {
                assert!(prod >= 0.1, "n = {n}, T = {:?}: product {prod}", r.t_target);
            }
        }
    }
    // Frozen intermediate point.
    let r = hybrid_block(64, 16, 3).unwrap();
    assert_eq!((r.queries, r.layers), (16, 7));
    println!("acceptance 07 tradeoff-band: PASS");
}

// --- 8: progress per block of k queries is at most 2·√(k/n) -------------------

#[test]
fn acceptance_08_progress_bounds() {
    for n in [16usize, 32] {
        let lo = (n as f64).sqrt().ceil() as usize;
        for t in lo..=n {
            let tr = progress_trace(n, t).unwrap();
            assert!(
                (tr.p_real[0] - 1.0).abs() <= 1e-9,
                "n = {n}, t = {t}: p_0 = {}",
                tr.p_real[0]
            );
            assert_eq!(tr.p_real.len(), tr.block_queries.len() + 1);
            for (j, w) in tr.p_real.windows(2).enumerate() {
                assert!(
                    (w[1] - w[0]).abs() <= tr.bounds[j] + 1e-9,
                    "n = {n}, t = {t}, block {j}: |Δp| = {} > bound {}",
                    (w[1] - w[0]).abs(),
                    tr.bounds[j]
                );
            }
            let spent: u64 = tr.block_queries.iter().sum();
            let report = hybrid_block(n, t, 0).unwrap();
            assert_eq!(spent, report.queries, "n = {n}, t = {t}");
            let last = *tr.p_real.last().unwrap();
            assert!(last <= 0.95, "n = {n}, t = {t}: final p = {last}");
        }
    }
    println!("acceptance 08 progress-bounds: PASS");
}

// --- 9: the adversary bound for search is exactly √n ---------------------------

#[test]
fn acceptance_09_adversary_bound_exact() {
    use quantumness::adversary::{grover_decision, relation_params};
    for (n, expected) in [(4usize, 2.0), (16, 4.0), (64, 8.0)] {
        let params = relation_params(&grover_decision(n).unwrap());
        assert_eq!(params.bound, expected, "n = {n}");
        assert_eq!(params.bound, (n as f64).sqrt(), "n = {n}");
        assert_eq!(
            (params.m, params.m_prime, params.l, params.l_prime),
            (n, 1, 1, 1)
        );
    }
    println!("acceptance 09 adversary-bound-exact: PASS");
}

// --- 10: the CLI is byte-for-byte deterministic --------------------------------

#[test]
fn acceptance_10_cli_determinism() {
    let bin = env!("CARGO_BIN_EXE_quantumness");
    let dist_path = std::env::temp_dir().join(format!(
        "quantumness-acceptance-{}.json",
        std::process::id()
    ));
    std::fs::write(&dist_path, "[0.5,0.25,0.125,0.125]").unwrap();
    let dist_arg = dist_path.to_str().unwrap();

    let invocations: Vec<Vec<&str>> = vec![
        vec!["bound", "--n", "16"],
        vec!["grover", "--n", "16", "--marked", "7"],
        vec!["grover", "--n", "32", "--t", "8", "--trace"],
        vec!["sweep", "--n", "64"],
        vec!["sweep", "--n", "100", "--seed", "5"],
        vec!["prep", "--spiked", "0.25,64", "--eps", "0.1"],
        vec!["ky", dist_arg, "--precision", "24", "--sample", "2000", "--seed", "9"],
        vec!["entropy", dist_arg, "--eps", "0.1"],
        vec!["adversary", "--n", "8", "--k", "3", "--format", "plain"],
    ];
    let mut outputs: BTreeSet<Vec<u8>> = BTreeSet::new();
    for args in &invocations {
        let mut runs = Vec::new();
        for _ in 0..2 {
            let out = Command::new(bin).args(args).output().unwrap();
            assert!(
                out.status.success(),
                "{args:?} failed: {}",
                String::from_utf8_lossy(&out.stderr)
            );
            assert!(!out.stdout.is_empty(), "{args:?} printed nothing");
            runs.push(out.stdout);
        }
        assert_eq!(runs[0], runs[1], "{args:?} output differs between runs");
        outputs.insert(runs.remove(0));
    }
    assert_eq!(outputs.len(), invocations.len(), "outputs collide");

    // The sweep header is part of the contract.
    let sweep = Command::new(bin).args(["sweep", "--n", "64"]).output().unwrap();
    let text = String::from_utf8(sweep.stdout).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "n,T_target,h,iterations,queries,layers,success_prob,product_over_n"
    );

    let _ = std::fs::remove_file(&dist_path);
    println!("acceptance 10 cli-determinism: PASS");
}
