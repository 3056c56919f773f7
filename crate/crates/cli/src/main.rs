//! `quantumness` — command-line front end for the toolkit.
//!
//! Subcommands cover state synthesis (`prep`), entropy measurement
//! (`entropy`), the classical sampling baseline (`ky`), search runs and
//! tradeoff sweeps (`grover`, `sweep`), and adversary lower bounds
//! (`adversary`, `bound`). Output is deterministic: the same invocation with
//! the same `--seed` produces byte-identical bytes.
//!
//! Exit codes: `0` success, `2` invalid input or usage, `3` runtime or
//! capacity failure (register over the qubit cap, synthesis that cannot
//! converge, a scan over budget). The register cap defaults to 22 qubits and
//! can be moved with the `QUANTUMNESS_QUBIT_CAP` environment variable.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quantumness::adversary::{
    alpha_beta, grover_decision, hamming_parity_relation, relation_params, Relation,
};
use quantumness::entropy::{shannon_entropy, smoothed_entropy_lb, spiked_dist, ProbDist};
use quantumness::grover::{grover_standard, hybrid_block, progress_trace, tradeoff_sweep};
use quantumness::io::{
    document_from_statevector, emit_state_document, parse_dist_document, statevector_from_json,
};
use quantumness::knuth_yao::{build_tree, expected_flips, render_text, sample, FnBitSource};
use quantumness::state::DEFAULT_QUBIT_CAP;
use quantumness::stateprep::{synthesize, TargetState};
use quantumness::Error;

#[derive(Parser)]
#[command(name = "quantumness", version, about = "Measure and spend quantumness: entropy-bounded state synthesis, sampling baselines, and search tradeoffs")]
struct Cli {
    /// Seed for anything randomized (default marked items, sampling).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format (each command has its own default).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Pretty-printed JSON.
    Structured,
    /// Comma-separated rows with a header.
    Csv,
    /// Bare numbers or `key value` lines.
    Plain,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Structured => "structured",
            Format::Csv => "csv",
            Format::Plain => "plain",
        }
    }
}

/// A spiked target distribution `(1−δ)²` at outcome 0 plus a uniform tail.
#[derive(Debug, Clone, Copy)]
struct SpikedSpec {
    delta: f64,
    tail: usize,
}

fn parse_spiked(s: &str) -> Result<SpikedSpec, String> {
    let (d, k) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `delta,tail` (e.g. `0.25,1024`), got {s:?}"))?;
    let delta: f64 = d
        .trim()
        .parse()
        .map_err(|e| format!("bad delta {d:?}: {e}"))?;
    let tail: usize = k
        .trim()
        .parse()
        .map_err(|e| format!("bad tail count {k:?}: {e}"))?;
    Ok(SpikedSpec { delta, tail })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RelationKind {
    /// Unique-answer search: the zero string against all weight-one strings.
    Search,
    /// Parity: even-weight strings against odd-weight neighbors.
    Parity,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a state close to a target distribution using few
    /// basis-changing gates, and report the cost breakdown.
    Prep {
        /// JSON file holding the target probabilities (an array of numbers).
        #[arg(long, value_name = "FILE", conflicts_with = "spiked", required_unless_present = "spiked")]
        dist: Option<PathBuf>,
        /// Built-in spiked target `delta,tail`: mass (1−δ)² at outcome 0
        /// plus a uniform tail over that many extra outcomes.
        #[arg(long, value_parser = parse_spiked, value_name = "DELTA,TAIL")]
        spiked: Option<SpikedSpec>,
        /// Euclidean accuracy of the prepared state.
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        /// Also write the prepared statevector document here.
        #[arg(long, value_name = "PATH")]
        dump_state: Option<PathBuf>,
    },
    /// Shannon entropy of a distribution (or state) document, optionally
    /// smoothed.
    Entropy {
        /// JSON document to read.
        file: PathBuf,
        /// Treat the document as a statevector and measure it.
        #[arg(long)]
        from_state: bool,
        /// Smoothing parameter in [0, 2): print the smoothed entropy lower
        /// bound instead of the raw entropy.
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Build the Knuth–Yao DDG tree for a distribution document and report
    /// its expected random-bit cost.
    Ky {
        /// JSON document holding the probabilities.
        file: PathBuf,
        /// Bits of precision for the tree (1..=53).
        #[arg(long, default_value_t = 32)]
        precision: u32,
        /// Draw this many samples with the seeded generator and report the
        /// observed mean bit cost.
        #[arg(long, value_name = "COUNT")]
        sample: Option<u64>,
        /// Print the tree structure instead of the summary.
        #[arg(long)]
        render: bool,
    },
    /// Run search (standard, or block-hybrid with --t) and report queries,
    /// layers, and success probability.
    Grover {
        /// Search-space size.
        #[arg(long)]
        n: usize,
        /// Marked item (default: seeded random).
        #[arg(long)]
        marked: Option<usize>,
        /// Query budget in [⌈√n⌉, n]: run the block hybrid at that budget.
        #[arg(long)]
        t: Option<usize>,
        /// Trace the adversary progress indicator instead of reporting the
        /// run (averages over every possible marked item).
        #[arg(long, requires = "t")]
        trace: bool,
    },
    /// Sweep the query/layer tradeoff across a list of budgets.
    Sweep {
        /// Search-space size.
        #[arg(long)]
        n: usize,
        /// Comma-separated query budgets (default: doubling from ⌈√n⌉ up to
        /// n).
        #[arg(long, value_delimiter = ',', value_name = "T1,T2,...")]
        targets: Option<Vec<usize>>,
        /// Marked item (default: seeded random).
        #[arg(long)]
        marked: Option<usize>,
    },
    /// Adversary parameters (m, m′, ℓ, ℓ′) and the query bound of a hard
    /// relation.
    Adversary {
        /// String length in bits.
        #[arg(long)]
        n: usize,
        /// Which hard relation to analyze.
        #[arg(long, value_enum, default_value_t = RelationKind::Search)]
        relation: RelationKind,
        /// Also compute the subset progress coefficients α_k, β_k at this
        /// subset size (exhaustive scan, n ≤ 16).
        #[arg(long)]
        k: Option<usize>,
    },
    /// The adversary query bound for search over n items, as a number.
    Bound {
        /// Search-space size.
        #[arg(long)]
        n: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify(&err))
        }
    }
}

/// Exit code for a failure: capacity/convergence problems are `3`,
/// everything else (malformed input, bad ranges, usage) is `2`.
fn classify(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(
            Error::QubitCapExceeded { .. }
            | Error::SynthesisDidNotConverge { .. }
            | Error::RelationTooLarge(_)
            | Error::BitSourceExhausted,
        ) => 3,
        _ => 2,
    }
}

/// Register cap: `QUANTUMNESS_QUBIT_CAP` if set, else 22.
fn qubit_cap() -> anyhow::Result<usize> {
    match std::env::var("QUANTUMNESS_QUBIT_CAP") {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map_err(|_| anyhow!("QUANTUMNESS_QUBIT_CAP must be an unsigned integer, got {s:?}")),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_QUBIT_CAP),
        Err(e) => Err(e.into()),
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing output to {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn structured<T: serde::Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value).map_err(Error::from)? + "\n")
}

fn unsupported(cmd: &str, fmt: Format) -> anyhow::Error {
    anyhow!("`{cmd}` does not support --format {}", fmt.name())
}

fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

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

fn run(cli: Cli) -> anyhow::Result<()> {
    let cap = qubit_cap()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let text = match cli.command {
        Command::Prep {
            ref dist,
            spiked,
            eps,
            ref dump_state,
        } => cmd_prep(dist.as_deref(), spiked, eps, dump_state.as_deref(), cli.format, cap)?,
        Command::Entropy {
            ref file,
            from_state,
            eps,
        } => cmd_entropy(file, from_state, eps, cli.format, cap)?,
        Command::Ky {
            ref file,
            precision,
            sample,
            render,
        } => cmd_ky(file, precision, sample, render, cli.format, &mut rng)?,
        Command::Grover {
            n,
            marked,
            t,
            trace,
        } => cmd_grover(n, marked, t, trace, cli.format, cap, &mut rng)?,
        Command::Sweep {
            n,
            ref targets,
            marked,
        } => cmd_sweep(n, targets.as_deref(), marked, cli.format, &mut rng)?,
        Command::Adversary { n, relation, k } => cmd_adversary(n, relation, k, cli.format)?,
        Command::Bound { n } => cmd_bound(n, cli.format)?,
    };
    emit(cli.out.as_ref(), &text)
}

fn cmd_prep(
    dist: Option<&std::path::Path>,
    spiked: Option<SpikedSpec>,
    eps: f64,
    dump_state: Option<&std::path::Path>,
    format: Option<Format>,
    cap: usize,
) -> anyhow::Result<String> {
    let target_dist = match (dist, spiked) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            parse_dist_document(&text)?
        }
        (None, Some(s)) => spiked_dist(s.delta, s.tail)?,
        _ => bail!("exactly one of --dist or --spiked is required"),
    };
    // Before planning anything, make sure the full register would fit: the
    // synthesized circuit never needs more than ⌈log₂ outcomes⌉ + 1 qubits.
    let worst = ceil_log2(target_dist.len()) + 1;
    if worst > cap + 1 {
        return Err(Error::QubitCapExceeded {
            needed: worst - 1,
            cap,
        }
        .into());
    }
    let target = TargetState::from_dist(&target_dist)?;
    let (circuit, report) = synthesize(&target, eps, cap)?;
    if let Some(path) = dump_state {
        let state = circuit.run_from_zero()?;
        let doc = emit_state_document(&document_from_statevector(&state));
        fs::write(path, doc).with_context(|| format!("writing {}", path.display()))?;
    }
    match format.unwrap_or(Format::Structured) {
        Format::Structured => structured(&report),
        Format::Plain => {
            let mut s = String::new();
            let _ = writeln!(s, "requested_eps {:.6}", report.requested_eps);
            let _ = writeln!(s, "achieved_distance {:.6}", report.achieved_distance);
            let _ = writeln!(s, "entropy_bits {:.6}", report.entropy_bits);
            let _ = writeln!(s, "lambda {:.6}", report.lambda);
            let _ = writeln!(s, "code_qubits {}", report.code_qubits);
            let _ = writeln!(s, "precision_bits {}", report.precision_bits);
            let _ = writeln!(s, "staged_rotation_count {}", report.staged_rotation_count);
            let _ = writeln!(s, "basis_changing_count {}", report.basis_changing_count);
            let _ = writeln!(s, "layer_count {}", report.layer_count);
            let _ = writeln!(s, "circuit_qubits {}", report.circuit_qubits);
            let _ = writeln!(s, "gate_count {}", report.gate_count);
            Ok(s)
        }
        f => Err(unsupported("prep", f)),
    }
}

fn cmd_entropy(
    file: &std::path::Path,
    from_state: bool,
    eps: Option<f64>,
    format: Option<Format>,
    cap: usize,
) -> anyhow::Result<String> {
    let text =
        fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let dist: ProbDist = if from_state {
        statevector_from_json(&text, cap)?.measurement_distribution()
    } else {
        parse_dist_document(&text)?
    };
    let entropy = shannon_entropy(&dist);
    let smoothed = eps.map(|e| smoothed_entropy_lb(&dist, e)).transpose()?;
    match format.unwrap_or(Format::Plain) {
        Format::Plain => match smoothed {
            Some(lb) => Ok(format!("{lb:.6}\n")),
            None => Ok(format!("{entropy:.6}\n")),
        },
        Format::Structured => {
            let mut value = serde_json::json!({
                "outcomes": dist.len(),
                "entropy_bits": entropy,
            });
            if let (Some(e), Some(lb)) = (eps, smoothed) {
                value["eps"] = serde_json::json!(e);
                value["smoothed_entropy_lb"] = serde_json::json!(lb);
            }
            structured(&value)
        }
        f => Err(unsupported("entropy", f)),
    }
}

fn cmd_ky(
    file: &std::path::Path,
    precision: u32,
    sample_count: Option<u64>,
    render: bool,
    format: Option<Format>,
    rng: &mut ChaCha8Rng,
) -> anyhow::Result<String> {
    let text =
        fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let dist = parse_dist_document(&text)?;
    let tree = build_tree(&dist, precision)?;
    if render {
        return match format.unwrap_or(Format::Plain) {
            Format::Plain => Ok(render_text(&tree)),
            f => Err(unsupported("ky --render", f)),
        };
    }
    let entropy = shannon_entropy(&dist);
    let flips = expected_flips(&tree);
    let observed = match sample_count {
        Some(count) if count > 0 => {
            let mut counts = vec![0u64; dist.len()];
            let mut source = FnBitSource::new(|| rng.gen::<bool>());
            for _ in 0..count {
                let outcome = sample(&tree, &mut source)?;
                counts[outcome] += 1;
            }
            Some((count, source.drawn() as f64 / count as f64, counts))
        }
        _ => None,
    };
    match format.unwrap_or(Format::Plain) {
        Format::Plain => {
            let mut s = String::new();
            let _ = writeln!(s, "outcomes {}", tree.num_outcomes());
            let _ = writeln!(s, "precision_bits {}", tree.precision_bits());
            let _ = writeln!(s, "entropy_bits {entropy:.6}");
            let _ = writeln!(s, "expected_flips {flips:.6}");
            let _ = writeln!(s, "node_count {}", tree.node_count());
            if let Some((count, mean, _)) = &observed {
                let _ = writeln!(s, "samples {count}");
                let _ = writeln!(s, "mean_flips {mean:.6}");
            }
            Ok(s)
        }
        Format::Structured => {
            let mut value = serde_json::json!({
                "outcomes": tree.num_outcomes(),
                "precision_bits": tree.precision_bits(),
                "entropy_bits": entropy,
                "expected_flips": flips,
                "node_count": tree.node_count(),
            });
            if let Some((count, mean, counts)) = &observed {
                value["samples"] = serde_json::json!(count);
                value["mean_flips"] = serde_json::json!(mean);
                value["counts"] = serde_json::json!(counts);
            }
            structured(&value)
        }
        f => Err(unsupported("ky", f)),
    }
}

fn cmd_grover(
    n: usize,
    marked: Option<usize>,
    t: Option<usize>,
    trace: bool,
    format: Option<Format>,
    cap: usize,
    rng: &mut ChaCha8Rng,
) -> anyhow::Result<String> {
    if n == 0 {
        return Err(Error::InvalidSearchSize(0).into());
    }
    if trace {
        let t = t.expect("clap enforces --trace requires --t");
        let tr = progress_trace(n, t)?;
        return match format.unwrap_or(Format::Structured) {
            Format::Structured => structured(&tr),
            Format::Plain => {
                let mut s = String::new();
                for (r, a) in tr.p_real.iter().zip(&tr.p_abs) {
                    let _ = writeln!(s, "{r:.6} {a:.6}");
                }
                Ok(s)
            }
            f => Err(unsupported("grover --trace", f)),
        };
    }
    let marked = match marked {
        Some(m) => m,
        None => rng.gen_range(0..n),
    };
    let report = match t {
        Some(t) => hybrid_block(n, t, marked)?,
        None => {
            // The standard run is a full statevector simulation; refuse
            // registers over the cap before allocating anything.
            let needed = ceil_log2(n) + 1;
            if needed > cap {
                return Err(Error::QubitCapExceeded { needed, cap }.into());
            }
            grover_standard(n, marked)?
        }
    };
    match format.unwrap_or(Format::Structured) {
        Format::Structured => structured(&report),
        Format::Plain => {
            let mut s = String::new();
            let mode = match report.mode {
                quantumness::grover::RunMode::Standard => "standard",
                quantumness::grover::RunMode::Hybrid => "hybrid",
            };
            let _ = writeln!(s, "mode {mode}");
            let _ = writeln!(s, "n {}", report.n);
            if let Some(t) = report.t_target {
                let _ = writeln!(s, "t_target {t}");
            }
            if let Some(h) = report.block_count {
                let _ = writeln!(s, "block_count {h}");
            }
            if let Some(b) = report.block_size {
                let _ = writeln!(s, "block_size {b}");
            }
            let _ = writeln!(s, "iterations {}", report.iterations);
            let _ = writeln!(s, "queries {}", report.queries);
            let _ = writeln!(s, "layers {}", report.layers);
            let _ = writeln!(s, "success_probability {:.6}", report.success_probability);
            let _ = writeln!(s, "product_over_n {:.6}", report.product_over_n());
            Ok(s)
        }
        f => Err(unsupported("grover", f)),
    }
}

fn default_targets(n: usize) -> Vec<usize> {
    let mut t = ceil_sqrt(n).max(1);
    let mut v = Vec::new();
    while t < n {
        v.push(t);
        t *= 2;
    }
    v.push(n);
    v
}

fn cmd_sweep(
    n: usize,
    targets: Option<&[usize]>,
    marked: Option<usize>,
    format: Option<Format>,
    rng: &mut ChaCha8Rng,
) -> anyhow::Result<String> {
    if n == 0 {
        return Err(Error::InvalidSearchSize(0).into());
    }
    let targets: Vec<usize> = match targets {
        Some(t) if !t.is_empty() => t.to_vec(),
        _ => default_targets(n),
    };
    let marked = match marked {
        Some(m) => m,
        None => rng.gen_range(0..n),
    };
    let reports = tradeoff_sweep(n, &targets, marked)?;
    match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("n,T_target,h,iterations,queries,layers,success_prob,product_over_n\n");
            for r in &reports {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{:.6},{:.6}",
                    r.n,
                    r.t_target.expect("hybrid report"),
                    r.block_count.expect("hybrid report"),
                    r.iterations,
                    r.queries,
                    r.layers,
                    r.success_probability,
                    r.product_over_n(),
                );
            }
            Ok(s)
        }
        Format::Structured => structured(&reports),
        f => Err(unsupported("sweep", f)),
    }
}

fn cmd_adversary(
    n: usize,
    relation: RelationKind,
    k: Option<usize>,
    format: Option<Format>,
) -> anyhow::Result<String> {
    let rel: Relation = match relation {
        RelationKind::Search => grover_decision(n)?,
        RelationKind::Parity => hamming_parity_relation(n)?,
    };
    let params = relation_params(&rel);
    let coeffs = k.map(|k| alpha_beta(&rel, k)).transpose()?;
    match format.unwrap_or(Format::Structured) {
        Format::Structured => {
            let mut value = serde_json::json!({
                "relation": match relation {
                    RelationKind::Search => "search",
                    RelationKind::Parity => "parity",
                },
                "n": n,
                "m": params.m,
                "m_prime": params.m_prime,
                "l": params.l,
                "l_prime": params.l_prime,
                "bound": params.bound,
            });
            if let (Some(k), Some((alpha, beta))) = (k, coeffs) {
                value["k"] = serde_json::json!(k);
                value["alpha"] = serde_json::json!(alpha);
                value["beta"] = serde_json::json!(beta);
            }
            structured(&value)
        }
        Format::Plain => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "relation {}",
                match relation {
                    RelationKind::Search => "search",
                    RelationKind::Parity => "parity",
                }
            );
            let _ = writeln!(s, "n {n}");
            let _ = writeln!(s, "m {}", params.m);
            let _ = writeln!(s, "m_prime {}", params.m_prime);
            let _ = writeln!(s, "l {}", params.l);
            let _ = writeln!(s, "l_prime {}", params.l_prime);
            let _ = writeln!(s, "bound {:.6}", params.bound);
            if let (Some(k), Some((alpha, beta))) = (k, coeffs) {
                let _ = writeln!(s, "k {k}");
                let _ = writeln!(s, "alpha {alpha:.6}");
                let _ = writeln!(s, "beta {beta:.6}");
            }
            Ok(s)
        }
        f => Err(unsupported("adversary", f)),
    }
}

fn cmd_bound(n: usize, format: Option<Format>) -> anyhow::Result<String> {
    let params = relation_params(&grover_decision(n)?);
    match format.unwrap_or(Format::Plain) {
        Format::Plain => Ok(format!("{:.6}\n", params.bound)),
        Format::Structured => structured(&serde_json::json!({
            "n": n,
            "bound": params.bound,
        })),
        f => Err(unsupported("bound", f)),
    }
}
