//! Gate dispatch over a multiframe plus the run statistics record.

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::bits::BitVec;
use crate::circuit::{Circuit, GateKind};
use crate::exec::Workers;
use crate::multiframe::{EngineError, Multiframe, NonClifford};
use crate::pauli::CliffordOp;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("circuit uses {used} qubits but the state has {have}")]
    QubitMismatch { used: usize, have: usize },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Gate counts bucketed the way the benchmarks report them.
#[derive(Debug, Clone, Copy, Default, Serialize, PartialEq, Eq)]
pub struct GateCounts {
    pub clifford: usize,
    pub pauli: usize,
    pub nonclifford: usize,
    pub measure: usize,
}

/// Per-run statistics: structural peaks, gate counts, wall time and the
/// measurement outcomes in circuit order.
#[derive(Debug, Clone, Default, Serialize, PartialEq)]
pub struct RunStats {
    pub qubits: usize,
    pub gates: GateCounts,
    pub max_frames: usize,
    pub max_states: usize,
    pub runtime_ms: u64,
    pub outcomes: Vec<u8>,
}

impl RunStats {
    fn observe(&mut self, mf: &Multiframe) {
        self.max_frames = self.max_frames.max(mf.frames.len());
        self.max_states = self.max_states.max(mf.total_states());
    }
}

/// Simulation switches.
#[derive(Debug, Clone, Copy, Default)]
pub struct SimOptions {
    /// Disable coalescing: the whole superposition stays in one frame.
    pub single_frame: bool,
}

/// Run a circuit from the given basis state, drawing measurement coins
/// from `rng`. Returns the final multiframe and the statistics record.
pub fn simulate<R: Rng>(
    circuit: &Circuit,
    initial: &BitVec,
    rng: &mut R,
    workers: &Workers,
    opts: SimOptions,
) -> Result<(Multiframe, RunStats), SimError> {
    if initial.len() != circuit.n {
        return Err(SimError::QubitMismatch { used: circuit.n, have: initial.len() });
    }
    circuit
        .validate()
        .map_err(|_| SimError::QubitMismatch { used: circuit.n, have: initial.len() })?;
    let start = std::time::Instant::now();
    let mut mf = Multiframe::from_basis(initial);
    let mut stats = RunStats { qubits: circuit.n, ..Default::default() };
    stats.observe(&mf);
    for gate in &circuit.gates {
        let q = gate.qubits();
        match gate.kind {
            GateKind::H => clifford(&mut mf, CliffordOp::H(q[0]), workers, &mut stats)?,
            GateKind::P => clifford(&mut mf, CliffordOp::Phase(q[0]), workers, &mut stats)?,
            GateKind::Pdg => {
                clifford(&mut mf, CliffordOp::PhaseDag(q[0]), workers, &mut stats)?
            }
            GateKind::Cnot => {
                clifford(&mut mf, CliffordOp::Cnot(q[0], q[1]), workers, &mut stats)?
            }
            GateKind::X => pauli(&mut mf, CliffordOp::X(q[0]), workers, &mut stats)?,
            GateKind::Y => pauli(&mut mf, CliffordOp::Y(q[0]), workers, &mut stats)?,
            GateKind::Z => pauli(&mut mf, CliffordOp::Z(q[0]), workers, &mut stats)?,
            GateKind::Tof => {
                nonclifford(
                    &mut mf,
                    NonClifford::Toffoli(q[0], q[1], q[2]),
                    workers,
                    opts,
                    &mut stats,
                )?;
            }
            GateKind::Crz => {
                nonclifford(
                    &mut mf,
                    NonClifford::ControlledPhase(q[0], q[1], gate.angle),
                    workers,
                    opts,
                    &mut stats,
                )?;
            }
            GateKind::T => {
                nonclifford(&mut mf, NonClifford::T(q[0], false), workers, opts, &mut stats)?;
            }
            GateKind::Tdg => {
                nonclifford(&mut mf, NonClifford::T(q[0], true), workers, opts, &mut stats)?;
            }
            GateKind::Measure => {
                stats.gates.measure += 1;
                let outcome = mf.measure_collapse(q[0], rng, workers)?;
                stats.outcomes.push(outcome as u8);
                stats.observe(&mf);
            }
        }
    }
    stats.runtime_ms = start.elapsed().as_millis() as u64;
    Ok((mf, stats))
}

fn clifford(
    mf: &mut Multiframe,
    op: CliffordOp,
    workers: &Workers,
    stats: &mut RunStats,
) -> Result<(), SimError> {
    stats.gates.clifford += 1;
    mf.rotate(op, workers)?;
    stats.observe(mf);
    Ok(())
}

fn pauli(
    mf: &mut Multiframe,
    op: CliffordOp,
    workers: &Workers,
    stats: &mut RunStats,
) -> Result<(), SimError> {
    stats.gates.pauli += 1;
    mf.rotate(op, workers)?;
    stats.observe(mf);
    Ok(())
}

fn nonclifford(
    mf: &mut Multiframe,
    gate: NonClifford,
    workers: &Workers,
    opts: SimOptions,
    stats: &mut RunStats,
) -> Result<(), SimError> {
    stats.gates.nonclifford += 1;
    let peaks = std::cell::RefCell::new((0usize, 0usize));
    mf.apply_nonclifford(gate, workers, opts.single_frame, |m| {
        let mut p = peaks.borrow_mut();
        p.0 = p.0.max(m.frames.len());
        p.1 = p.1.max(m.total_states());
    })?;
    let (pf, ps) = *peaks.borrow();
    stats.max_frames = stats.max_frames.max(pf);
    stats.max_states = stats.max_states.max(ps);
    stats.observe(mf);
    Ok(())
}
