//! Circuit representation, the text netlist format, and benchmark-family
//! generators (random stabilizer circuits, Cuccaro ripple-carry adders,
//! QFT networks, Toffoli decomposition).

use std::fmt::Write as _;

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use rand::SeedableRng;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    P,
    Pdg,
    X,
    Y,
    Z,
    Cnot,
    Tof,
    Crz,
    T,
    Tdg,
    Measure,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Crz => 2,
            GateKind::Tof => 3,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::P => "p",
            GateKind::Pdg => "pdg",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::Cnot => "cnot",
            GateKind::Tof => "tof",
            GateKind::Crz => "crz",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Measure => "measure",
        }
    }
}

/// One gate application; `angle` is meaningful for CRZ only.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    qubits: [usize; 3],
    pub angle: f64,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: &[usize], angle: f64) -> Result<Self, CircuitError> {
        if qubits.len() != kind.arity() {
            return Err(CircuitError::BadArity {
                gate: kind.name(),
                got: qubits.len(),
                want: kind.arity(),
            });
        }
        for (i, a) in qubits.iter().enumerate() {
            for b in &qubits[i + 1..] {
                if a == b {
                    return Err(CircuitError::DuplicateQubit { gate: kind.name(), index: *a });
                }
            }
        }
        let mut qs = [0usize; 3];
        qs[..qubits.len()].copy_from_slice(qubits);
        Ok(Gate { kind, qubits: qs, angle })
    }

    pub fn h(q: usize) -> Gate {
        Gate::new(GateKind::H, &[q], 0.0).unwrap()
    }
    pub fn p(q: usize) -> Gate {
        Gate::new(GateKind::P, &[q], 0.0).unwrap()
    }
    pub fn pdg(q: usize) -> Gate {
        Gate::new(GateKind::Pdg, &[q], 0.0).unwrap()
    }
    pub fn x(q: usize) -> Gate {
        Gate::new(GateKind::X, &[q], 0.0).unwrap()
    }
    pub fn y(q: usize) -> Gate {
        Gate::new(GateKind::Y, &[q], 0.0).unwrap()
    }
    pub fn z(q: usize) -> Gate {
        Gate::new(GateKind::Z, &[q], 0.0).unwrap()
    }
    pub fn t(q: usize) -> Gate {
        Gate::new(GateKind::T, &[q], 0.0).unwrap()
    }
    pub fn tdg(q: usize) -> Gate {
        Gate::new(GateKind::Tdg, &[q], 0.0).unwrap()
    }
    pub fn cnot(c: usize, t: usize) -> Gate {
        Gate::new(GateKind::Cnot, &[c, t], 0.0).unwrap()
    }
    pub fn tof(c1: usize, c2: usize, t: usize) -> Gate {
        Gate::new(GateKind::Tof, &[c1, c2, t], 0.0).unwrap()
    }
    pub fn crz(c: usize, t: usize, angle: f64) -> Gate {
        Gate::new(GateKind::Crz, &[c, t], angle).unwrap()
    }
    pub fn measure(q: usize) -> Gate {
        Gate::new(GateKind::Measure, &[q], 0.0).unwrap()
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits[..self.kind.arity()]
    }

    pub fn q0(&self) -> usize {
        self.qubits[0]
    }

    pub fn is_unitary(&self) -> bool {
        self.kind != GateKind::Measure
    }
}

/// A qubit count plus an ordered gate list.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    pub n: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Circuit { n, gates: Vec::new() }
    }

    pub fn push(&mut self, g: Gate) {
        debug_assert!(g.qubits().iter().all(|&q| q < self.n));
        self.gates.push(g);
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        for (i, g) in self.gates.iter().enumerate() {
            for &q in g.qubits() {
                if q >= self.n {
                    return Err(CircuitError::IndexOutOfRange {
                        line: i + 2,
                        index: q,
                        n: self.n,
                    });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum CircuitError {
    #[error("line {line}, column {col}: unknown gate {name:?}")]
    UnknownGate { line: usize, col: usize, name: String },
    #[error("gate {gate}: got {got} qubits, expected {want}")]
    BadArity { gate: &'static str, got: usize, want: usize },
    #[error("gate {gate}: duplicate qubit {index}")]
    DuplicateQubit { gate: &'static str, index: usize },
    #[error("line {line}: qubit index {index} out of range (n = {n})")]
    IndexOutOfRange { line: usize, index: usize, n: usize },
    #[error("line {line}, column {col}: malformed angle {text:?}")]
    BadAngle { line: usize, col: usize, text: String },
    #[error("line {line}, column {col}: expected integer, found {text:?}")]
    BadInteger { line: usize, col: usize, text: String },
    #[error("line {line}: expected 'qubits <n>' header")]
    MissingHeader { line: usize },
    #[error("line {line}: {want} operands expected for {gate}, found {got}")]
    WrongOperandCount { line: usize, gate: String, want: usize, got: usize },
    #[error("invalid generator parameter: {0}")]
    BadGeneratorParams(String),
}

/// Parse the circuit text format: `qubits <n>` header, one gate per line,
/// `#` comments, case-insensitive keywords, LF or CRLF endings.
pub fn parse(text: &str) -> Result<Circuit, CircuitError> {
    let mut circuit: Option<Circuit> = None;
    for (li, raw) in text.lines().enumerate() {
        let line_no = li + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let mut tokens: Vec<(usize, &str)> = Vec::new();
        let mut col = 0usize;
        for tok in line.split_whitespace() {
            // byte offset of this token for column-accurate diagnostics
            let off = line[col..].find(tok).unwrap() + col;
            tokens.push((off + 1, tok));
            col = off + tok.len();
        }
        if tokens.is_empty() {
            continue;
        }
        let (_, head) = tokens[0];
        let head_lc = head.to_ascii_lowercase();
        let circ = match circuit.as_mut() {
            None => {
                if head_lc != "qubits" || tokens.len() != 2 {
                    return Err(CircuitError::MissingHeader { line: line_no });
                }
                let (c, t) = tokens[1];
                let n: usize = t.parse().map_err(|_| CircuitError::BadInteger {
                    line: line_no,
                    col: c,
                    text: t.to_string(),
                })?;
                circuit = Some(Circuit::new(n));
                continue;
            }
            Some(c) => c,
        };
        let kind = match head_lc.as_str() {
            "h" => GateKind::H,
            "p" => GateKind::P,
            "pdg" => GateKind::Pdg,
            "x" => GateKind::X,
            "y" => GateKind::Y,
            "z" => GateKind::Z,
            "cnot" => GateKind::Cnot,
            "tof" => GateKind::Tof,
            "crz" => GateKind::Crz,
            "t" => GateKind::T,
            "tdg" => GateKind::Tdg,
            "measure" => GateKind::Measure,
            _ => {
                return Err(CircuitError::UnknownGate {
                    line: line_no,
                    col: tokens[0].0,
                    name: head.to_string(),
                })
            }
        };
        let want_operands = kind.arity() + usize::from(kind == GateKind::Crz);
        if tokens.len() - 1 != want_operands {
            return Err(CircuitError::WrongOperandCount {
                line: line_no,
                gate: head.to_string(),
                want: want_operands,
                got: tokens.len() - 1,
            });
        }
        let mut qubits = Vec::with_capacity(kind.arity());
        for &(c, t) in &tokens[1..=kind.arity()] {
            let q: usize = t.parse().map_err(|_| CircuitError::BadInteger {
                line: line_no,
                col: c,
                text: t.to_string(),
            })?;
            if q >= circ.n {
                return Err(CircuitError::IndexOutOfRange {
                    line: line_no,
                    index: q,
                    n: circ.n,
                });
            }
            qubits.push(q);
        }
        let angle = if kind == GateKind::Crz {
            let (c, t) = tokens[kind.arity() + 1];
            parse_angle(t).ok_or(CircuitError::BadAngle {
                line: line_no,
                col: c,
                text: t.to_string(),
            })?
        } else {
            0.0
        };
        let gate = Gate::new(kind, &qubits, angle)?;
        circ.gates.push(gate);
    }
    circuit.ok_or(CircuitError::MissingHeader { line: 1 })
}

/// Angles: "pi/<k>", "-pi/<k>", or a decimal radian literal.
fn parse_angle(text: &str) -> Option<f64> {
    let lower = text.to_ascii_lowercase();
    let (neg, rest) = match lower.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, lower.as_str()),
    };
    let val = if rest == "pi" {
        std::f64::consts::PI
    } else if let Some(den) = rest.strip_prefix("pi/") {
        let d: f64 = den.parse::<u64>().ok()? as f64;
        if d == 0.0 {
            return None;
        }
        std::f64::consts::PI / d
    } else {
        text.parse::<f64>().ok()?
    };
    Some(if neg { -val } else { val })
}

/// Render a circuit in the text format; `parse(write(c)) == c`.
pub fn write(circuit: &Circuit) -> String {
    let mut out = String::new();
    writeln!(out, "qubits {}", circuit.n).unwrap();
    for g in &circuit.gates {
        out.push_str(g.kind.name());
        for q in g.qubits() {
            write!(out, " {q}").unwrap();
        }
        if g.kind == GateKind::Crz {
            write!(out, " {}", format_angle(g.angle)).unwrap();
        }
        out.push('\n');
    }
    out
}

fn format_angle(angle: f64) -> String {
    let pi = std::f64::consts::PI;
    for k in 1..=62u32 {
        let d = (1u64 << (k - 1)) as f64;
        if angle == pi / d {
            return format!("pi/{}", d as u64);
        }
        if angle == -pi / d {
            return format!("-pi/{}", d as u64);
        }
    }
    // decimal fallback, round-trip exact
    format!("{angle:?}")
}

// ---- generators --------------------------------------------------------

/// A random stabilizer circuit: ceil(beta * ceil(n log2 n)) unitary gates
/// drawn uniformly from {CNOT, P, H} with uniform legal operands, followed
/// by a measurement of every qubit in order.
pub fn gen_random_stabilizer(
    n: usize,
    beta: f64,
    seed: u64,
) -> Result<Circuit, CircuitError> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    gen_random_stabilizer_with_rng(n, beta, &mut rng)
}

/// Same as `gen_random_stabilizer` but drawing from a caller-owned stream,
/// so one seed can also drive the downstream measurement coins.
pub fn gen_random_stabilizer_with_rng(
    n: usize,
    beta: f64,
    rng: &mut ChaCha12Rng,
) -> Result<Circuit, CircuitError> {
    if n < 2 {
        return Err(CircuitError::BadGeneratorParams(format!(
            "random stabilizer circuits need n >= 2, got {n}"
        )));
    }
    if beta <= 0.0 {
        return Err(CircuitError::BadGeneratorParams(format!(
            "beta must be positive, got {beta}"
        )));
    }
    let base = (n as f64 * (n as f64).log2()).ceil();
    let count = (beta * base).ceil() as usize;
    let mut c = Circuit::new(n);
    for _ in 0..count {
        match rng.gen_range(0..3) {
            0 => c.push(Gate::h(rng.gen_range(0..n))),
            1 => c.push(Gate::p(rng.gen_range(0..n))),
            _ => {
                let a = rng.gen_range(0..n);
                let mut b = rng.gen_range(0..n);
                while b == a {
                    b = rng.gen_range(0..n);
                }
                c.push(Gate::cnot(a, b));
            }
        }
    }
    for q in 0..n {
        c.push(Gate::measure(q));
    }
    Ok(c)
}

/// Qubit layout of the Cuccaro ripple-carry adder on 2(n+1) qubits:
/// interleaved input registers a_i = 2i, b_i = 2i+1, then the ancilla at
/// 2n and the carry-out at 2n+1. The sum lands in the b register, the
/// final carry in the carry qubit.
pub fn cuccaro_layout(n: usize) -> (Vec<usize>, Vec<usize>, usize, usize) {
    let a = (0..n).map(|i| 2 * i).collect();
    let b = (0..n).map(|i| 2 * i + 1).collect();
    (a, b, 2 * n, 2 * n + 1)
}

/// Ripple-carry (Cuccaro) adder over {CNOT, TOF}: b <- a + b with carry
/// out, built from the MAJ/UMA block structure.
pub fn gen_cuccaro(n: usize) -> Result<Circuit, CircuitError> {
    if n < 1 {
        return Err(CircuitError::BadGeneratorParams(
            "adder needs at least 1 bit".into(),
        ));
    }
    let (a, b, anc, carry) = cuccaro_layout(n);
    let mut c = Circuit::new(2 * (n + 1));
    let maj = |c: &mut Circuit, x: usize, y: usize, z: usize| {
        c.push(Gate::cnot(z, y));
        c.push(Gate::cnot(z, x));
        c.push(Gate::tof(x, y, z));
    };
    let uma = |c: &mut Circuit, x: usize, y: usize, z: usize| {
        c.push(Gate::tof(x, y, z));
        c.push(Gate::cnot(z, x));
        c.push(Gate::cnot(x, y));
    };
    // carry-in chain: ancilla feeds stage 0, a_{i-1} feeds stage i
    let chain = |i: usize| if i == 0 { anc } else { a[i - 1] };
    for i in 0..n {
        maj(&mut c, chain(i), b[i], a[i]);
    }
    c.push(Gate::cnot(a[n - 1], carry));
    for i in (0..n).rev() {
        uma(&mut c, chain(i), b[i], a[i]);
    }
    Ok(c)
}

/// The n-qubit QFT network: per qubit one H, then controlled phase
/// rotations by pi/2^k where k is the distance to the control, for
/// n(n+1)/2 gates in total.
pub fn gen_qft(n: usize) -> Circuit {
    let mut c = Circuit::new(n);
    for j in 0..n {
        c.push(Gate::h(j));
        for l in j + 1..n {
            let k = (l - j) as i32;
            c.push(Gate::crz(l, j, std::f64::consts::PI / (2f64).powi(k)));
        }
    }
    c
}

/// The 7-T decomposition of one Toffoli gate over {H, T, T^dag, CNOT}.
pub fn gen_toffoli_decomposed(
    c1: usize,
    c2: usize,
    t: usize,
) -> Result<Vec<Gate>, CircuitError> {
    if c1 == c2 || c1 == t || c2 == t {
        return Err(CircuitError::DuplicateQubit { gate: "tof", index: c1 });
    }
    Ok(vec![
        Gate::h(t),
        Gate::cnot(c2, t),
        Gate::tdg(t),
        Gate::cnot(c1, t),
        Gate::t(t),
        Gate::cnot(c2, t),
        Gate::tdg(t),
        Gate::cnot(c1, t),
        Gate::t(c2),
        Gate::t(t),
        Gate::h(t),
        Gate::cnot(c1, c2),
        Gate::t(c1),
        Gate::tdg(c2),
        Gate::cnot(c1, c2),
    ])
}

/// Rewrite every TOF gate of a circuit through `gen_toffoli_decomposed`.
pub fn substitute_toffolis(circuit: &Circuit) -> Result<Circuit, CircuitError> {
    let mut out = Circuit::new(circuit.n);
    for g in &circuit.gates {
        if g.kind == GateKind::Tof {
            let qs = g.qubits();
            out.gates
                .extend(gen_toffoli_decomposed(qs[0], qs[1], qs[2])?);
        } else {
            out.gates.push(g.clone());
        }
    }
    Ok(out)
}
