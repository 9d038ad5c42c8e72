//! Quantum-circuit simulation over superpositions of stabilizer states.
//!
//! States are stored as stabilizer frames: one generator matrix plus a set
//! of (phase-vector, amplitude) pairs naming states of the induced
//! orthonormal basis. Clifford and Pauli gates rotate a frame in polynomial
//! time; Toffoli, controlled-phase and T gates go through cofactoring and
//! coalescing of frames. A dense state-vector oracle provides ground truth
//! for verification at small qubit counts.

pub mod bits;
pub mod circuit;
pub mod exec;
pub mod frame;
pub mod multiframe;
pub mod oracle;
pub mod pauli;
pub mod sim;
pub mod tableau;

pub use bits::BitVec;
pub use circuit::{Circuit, Gate, GateKind};
pub use exec::Workers;
pub use frame::{FrameEntry, StabilizerFrame};
pub use multiframe::Multiframe;
pub use pauli::{CliffordOp, PauliOperator, PauliString};
pub use sim::{simulate, RunStats, SimOptions};
pub use tableau::{Amp, MeasureKind, Memo, StabilizerMatrix};
