//! Command-line entry point: run circuits, generate benchmark families,
//! cross-check against the dense oracle, and emit JSON statistics.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;

use framesim::bits::BitVec;
use framesim::circuit::{self, Circuit, Gate};
use framesim::exec::Workers;
use framesim::oracle::{equal_up_to_global_phase, DenseState};
use framesim::sim::{simulate, RunStats, SimOptions};

const EXIT_PARSE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_CAPACITY: u8 = 4;
const EXIT_VERIFY: u8 = 5;

/// Verification and amplitude dumps stay at desk scale.
const MAX_VERIFY_QUBITS: usize = 20;

#[derive(Parser)]
#[command(
    name = "framesim",
    about = "Stabilizer-frame quantum circuit simulator",
    after_help = "EXIT CODES:\n  \
        0  success\n  \
        2  circuit or argument parse error\n  \
        3  file not found / I/O error\n  \
        4  capacity exceeded (verify/amplitudes need n <= 20)\n  \
        5  oracle verification mismatch\n  \
        1  other error\n\n\
        The FRAMESIM_WORKERS environment variable supplies the default\n\
        worker count."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one circuit from a file or a generator spec.
    Run(RunArgs),
    /// Generate and run a benchmark family, reporting per-instance stats.
    Bench(BenchArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Circuit file path, or a generator spec: gen:qft:<n>,
    /// gen:cuccaro:<bits>, gen:random:<n>:<beta>
    input: String,
    /// Seed for measurement coins (and gen:random circuits)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: FRAMESIM_WORKERS or 1)
    #[arg(long)]
    workers: Option<usize>,
    /// Cross-check the final state against the dense oracle (n <= 20)
    #[arg(long)]
    verify: bool,
    /// Include the final amplitudes in the report (n <= 20)
    #[arg(long)]
    amplitudes: bool,
    /// Disable coalescing; the superposition stays in a single frame
    #[arg(long)]
    single_frame: bool,
    /// Write the JSON report to this file instead of stdout
    #[arg(long)]
    json: Option<PathBuf>,
    /// Initial basis state: "zeros", "ones", or an explicit bit string
    #[arg(long, default_value = "zeros")]
    input_state: String,
}

#[derive(Args)]
struct BenchArgs {
    /// Benchmark family: random, cuccaro, or qft
    family: String,
    /// Qubit counts for random/qft, e.g. "100,500,1000" or "2..12"
    #[arg(long)]
    qubits: Option<String>,
    /// Adder widths for cuccaro, e.g. "2..12"
    #[arg(long)]
    bits: Option<String>,
    /// Gate-density parameters for random, e.g. "0.6,1.2"
    #[arg(long, default_value = "0.6")]
    beta: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    workers: Option<usize>,
    /// Disable coalescing in every instance
    #[arg(long)]
    single_frame: bool,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Serialize)]
struct RunReport {
    input: String,
    seed: u64,
    workers: usize,
    single_frame: bool,
    stats: RunStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    verified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    amplitudes: Option<Vec<(String, f64, f64)>>,
}

#[derive(Serialize)]
struct BenchInstance {
    params: serde_json::Value,
    stats: RunStats,
}

#[derive(Serialize)]
struct BenchReport {
    family: String,
    seed: u64,
    workers: usize,
    single_frame: bool,
    instances: Vec<BenchInstance>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => run_command(args),
        Command::Bench(args) => bench_command(args),
    }
    .unwrap_or_else(|e| e)
}

fn worker_count(requested: Option<usize>) -> usize {
    requested
        .or_else(|| {
            std::env::var("FRAMESIM_WORKERS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(1)
        .max(1)
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("framesim: {msg}");
    ExitCode::from(code)
}

fn load_circuit(input: &str, seed: u64) -> Result<Circuit, ExitCode> {
    if let Some(spec) = input.strip_prefix("gen:") {
        let parts: Vec<&str> = spec.split(':').collect();
        let bad = |m: String| Err(fail(EXIT_PARSE, m));
        return match parts.as_slice() {
            ["qft", n] => match n.parse::<usize>() {
                Ok(n) if n >= 1 => Ok(circuit::gen_qft(n)),
                _ => bad(format!("bad qft size {n:?}")),
            },
            ["cuccaro", n] => n
                .parse::<usize>()
                .ok()
                .and_then(|n| circuit::gen_cuccaro(n).ok())
                .ok_or(())
                .or_else(|_| bad(format!("bad cuccaro size {n:?}")).map_err(|e| e))
                .map_err(|e| e),
            ["random", n, beta] => {
                let n: usize = match n.parse() {
                    Ok(v) => v,
                    Err(_) => return bad(format!("bad qubit count {n:?}")),
                };
                let beta: f64 = match beta.parse() {
                    Ok(v) => v,
                    Err(_) => return bad(format!("bad beta {beta:?}")),
                };
                circuit::gen_random_stabilizer(n, beta, seed)
                    .map_err(|e| fail(EXIT_PARSE, e))
            }
            _ => bad(format!("unknown generator spec {spec:?}")),
        };
    }
    let text = std::fs::read_to_string(input)
        .map_err(|e| fail(EXIT_IO, format!("{input}: {e}")))?;
    circuit::parse(&text).map_err(|e| fail(EXIT_PARSE, format!("{input}: {e}")))
}

fn initial_bits(spec: &str, n: usize) -> Result<BitVec, ExitCode> {
    match spec {
        "zeros" => Ok(BitVec::new(n)),
        "ones" => Ok(BitVec::from_fn(n, |_| true)),
        bits => {
            let v: BitVec = bits
                .parse()
                .map_err(|e| fail(EXIT_PARSE, format!("bad initial state: {e}")))?;
            if v.len() != n {
                return Err(fail(
                    EXIT_PARSE,
                    format!("initial state has {} bits, circuit has {n}", v.len()),
                ));
            }
            Ok(v)
        }
    }
}

fn run_command(args: RunArgs) -> Result<ExitCode, ExitCode> {
    let workers_n = worker_count(args.workers);
    let workers = Workers::new(workers_n);
    let circuit = load_circuit(&args.input, args.seed)?;
    let initial = initial_bits(&args.input_state, circuit.n)?;
    if (args.verify || args.amplitudes) && circuit.n > MAX_VERIFY_QUBITS {
        return Err(fail(
            EXIT_CAPACITY,
            format!(
                "--verify/--amplitudes need n <= {MAX_VERIFY_QUBITS}, circuit has {}",
                circuit.n
            ),
        ));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(args.seed);
    let opts = SimOptions { single_frame: args.single_frame };
    let (mf, stats) = simulate(&circuit, &initial, &mut rng, &workers, opts)
        .map_err(|e| fail(1, e))?;

    let mut verified = None;
    if args.verify {
        match verify_against_oracle(&circuit, &initial, &stats, &mf) {
            Ok(ok) => verified = Some(ok),
            Err(e) => return Err(fail(EXIT_CAPACITY, e)),
        }
    }
    let amplitudes = if args.amplitudes {
        let amps = mf.reconstruct();
        Some(
            amps.iter()
                .enumerate()
                .map(|(i, a)| {
                    let bits: String = (0..circuit.n)
                        .map(|j| if (i >> j) & 1 == 1 { '1' } else { '0' })
                        .collect();
                    (bits, a.re, a.im)
                })
                .collect(),
        )
    } else {
        None
    };

    eprintln!(
        "{}: {} qubits, {} gates; max_frames {}, max_states {}, {} ms{}",
        args.input,
        stats.qubits,
        circuit.gates.len(),
        stats.max_frames,
        stats.max_states,
        stats.runtime_ms,
        match verified {
            Some(true) => ", verified",
            Some(false) => ", VERIFICATION FAILED",
            None => "",
        }
    );

    let report = RunReport {
        input: args.input.clone(),
        seed: args.seed,
        workers: workers_n,
        single_frame: args.single_frame,
        stats,
        verified,
        amplitudes,
    };
    emit_json(&report, args.json.as_deref())?;
    if verified == Some(false) {
        return Ok(ExitCode::from(EXIT_VERIFY));
    }
    Ok(ExitCode::SUCCESS)
}

/// Replay the circuit on the dense oracle, forcing the measurement
/// outcomes the frame simulation produced, and compare final states up to
/// one global phase.
fn verify_against_oracle(
    circuit: &Circuit,
    initial: &BitVec,
    stats: &RunStats,
    mf: &framesim::multiframe::Multiframe,
) -> Result<bool, String> {
    let mut dense = DenseState::basis(initial).map_err(|e| e.to_string())?;
    let mut next_outcome = 0usize;
    for g in &circuit.gates {
        if g.kind == framesim::circuit::GateKind::Measure {
            let outcome = stats.outcomes[next_outcome] == 1;
            next_outcome += 1;
            dense.project(g.q0(), outcome);
        } else {
            dense.apply(g).map_err(|e| e.to_string())?;
        }
    }
    let got = mf.reconstruct();
    equal_up_to_global_phase(&got, &dense.amps, 1e-9).map_err(|e| e.to_string())
}

fn bench_command(args: BenchArgs) -> Result<ExitCode, ExitCode> {
    let workers_n = worker_count(args.workers);
    let workers = Workers::new(workers_n);
    let opts = SimOptions { single_frame: args.single_frame };
    let mut instances = Vec::new();
    match args.family.as_str() {
        "random" => {
            let qubits = parse_list(args.qubits.as_deref().unwrap_or("100"))?;
            let betas = parse_f64_list(&args.beta)?;
            for &n in &qubits {
                for &beta in &betas {
                    let mut rng = ChaCha12Rng::seed_from_u64(args.seed);
                    let circuit =
                        circuit::gen_random_stabilizer_with_rng(n as usize, beta, &mut rng)
                            .map_err(|e| fail(EXIT_PARSE, e))?;
                    let initial = BitVec::new(circuit.n);
                    let (_, stats) = simulate(&circuit, &initial, &mut rng, &workers, opts)
                        .map_err(|e| fail(1, e))?;
                    eprintln!(
                        "random n={n} beta={beta}: {} ms, max_states {}",
                        stats.runtime_ms, stats.max_states
                    );
                    instances.push(BenchInstance {
                        params: serde_json::json!({"qubits": n, "beta": beta}),
                        stats,
                    });
                }
            }
        }
        "cuccaro" => {
            let bits = parse_list(args.bits.as_deref().unwrap_or("2..8"))?;
            for &n in &bits {
                let n = n as usize;
                let base = circuit::gen_cuccaro(n).map_err(|e| fail(EXIT_PARSE, e))?;
                // equal superposition over both input registers
                let (a, b, _, _) = circuit::cuccaro_layout(n);
                let mut circuit = Circuit::new(base.n);
                for &q in a.iter().chain(b.iter()) {
                    circuit.push(Gate::h(q));
                }
                circuit.gates.extend(base.gates);
                let initial = BitVec::new(circuit.n);
                let mut rng = ChaCha12Rng::seed_from_u64(args.seed);
                let (_, stats) = simulate(&circuit, &initial, &mut rng, &workers, opts)
                    .map_err(|e| fail(1, e))?;
                eprintln!(
                    "cuccaro n={n}: {} ms, max_states {}",
                    stats.runtime_ms, stats.max_states
                );
                instances.push(BenchInstance {
                    params: serde_json::json!({"bits": n, "qubits": circuit.n}),
                    stats,
                });
            }
        }
        "qft" => {
            let qubits = parse_list(args.qubits.as_deref().unwrap_or("2..12"))?;
            for &n in &qubits {
                let circuit = circuit::gen_qft(n as usize);
                let initial = BitVec::from_fn(circuit.n, |_| true);
                let mut rng = ChaCha12Rng::seed_from_u64(args.seed);
                let (_, stats) = simulate(&circuit, &initial, &mut rng, &workers, opts)
                    .map_err(|e| fail(1, e))?;
                eprintln!(
                    "qft n={n}: {} ms, max_states {}",
                    stats.runtime_ms, stats.max_states
                );
                instances.push(BenchInstance {
                    params: serde_json::json!({"qubits": n}),
                    stats,
                });
            }
        }
        other => return Err(fail(EXIT_PARSE, format!("unknown family {other:?}"))),
    }
    let report = BenchReport {
        family: args.family,
        seed: args.seed,
        workers: workers_n,
        single_frame: args.single_frame,
        instances,
    };
    emit_json(&report, args.json.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

/// "100,500,1000" or "2..12" (inclusive) or a single value.
fn parse_list(text: &str) -> Result<Vec<u64>, ExitCode> {
    let bad = || fail(EXIT_PARSE, format!("bad list {text:?}"));
    if let Some((a, b)) = text.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    text.split(',')
        .map(|v| v.trim().parse::<u64>().map_err(|_| bad()))
        .collect()
}

fn parse_f64_list(text: &str) -> Result<Vec<f64>, ExitCode> {
    text.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| fail(EXIT_PARSE, format!("bad number {v:?}")))
        })
        .collect()
}

fn emit_json<T: Serialize>(report: &T, path: Option<&std::path::Path>) -> Result<(), ExitCode> {
    let text = serde_json::to_string_pretty(report).expect("report serialization");
    match path {
        Some(p) => std::fs::write(p, text.as_bytes())
            .map_err(|e| fail(EXIT_IO, format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.write_all(b"\n"))
                .map_err(|e| fail(EXIT_IO, e))
        }
    }
}
