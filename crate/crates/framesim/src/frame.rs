//! Stabilizer frames: one generator matrix plus a sorted list of
//! (phase-vector, amplitude) entries, each naming one state of the
//! orthonormal basis the matrix induces.
//!
//! Rotation by a Clifford or Pauli gate conjugates the matrix once, then
//! replays the memoized row operations onto every phase vector and updates
//! each amplitude by the global factor of that entry's stabilizer state.
//! Non-Clifford gates (Toffoli, controlled phase, T) cofactor the frame
//! over their control qubits and act on the selected cofactor class.

use num_complex::Complex64;

use crate::bits::BitVec;
use crate::exec::Workers;
use crate::pauli::CliffordOp;
use crate::tableau::{Amp, StabilizerMatrix, TableauError};

/// Amplitudes below this are dropped after collapses and merges.
pub const PRUNE_EPS: f64 = 1e-12;

/// One basis state of the frame: row signs plus its complex weight.
#[derive(Debug, Clone)]
pub struct FrameEntry {
    /// Bit j = 1 encodes row sign -1.
    pub phases: BitVec,
    pub amp: Complex64,
}

/// A stabilizer matrix together with the phase-vector/amplitude pairs of a
/// superposition over its basis. Entries stay sorted by phase-vector bits
/// and pairwise distinct.
#[derive(Debug, Clone)]
pub struct StabilizerFrame {
    pub matrix: StabilizerMatrix,
    pub entries: Vec<FrameEntry>,
}

fn unit_bit(n: usize, q: usize) -> BitVec {
    let mut b = BitVec::new(n);
    b.set(q, true);
    b
}

impl StabilizerFrame {
    /// Single-entry frame for a computational-basis state.
    pub fn from_basis(bits: &BitVec) -> Self {
        let matrix = StabilizerMatrix::init_basis(&BitVec::new(bits.len()));
        StabilizerFrame {
            matrix,
            entries: vec![FrameEntry { phases: bits.clone(), amp: Complex64::new(1.0, 0.0) }],
        }
    }

    pub fn qubits(&self) -> usize {
        self.matrix.qubits()
    }

    /// |F|: the number of stabilizer states in the frame.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|e| e.amp.norm_sqr()).sum()
    }

    pub fn scale(&mut self, factor: f64, workers: &Workers) {
        workers.for_each_mut(&mut self.entries, |_, e| e.amp *= factor);
    }

    fn sort_entries(&mut self) {
        self.entries.sort_by(|a, b| a.phases.cmp(&b.phases));
        debug_assert!(self
            .entries
            .windows(2)
            .all(|w| w[0].phases != w[1].phases));
    }

    /// Sort and combine duplicate phase vectors by amplitude addition,
    /// pruning negligible entries.
    fn sort_dedupe(&mut self) {
        self.entries.sort_by(|a, b| a.phases.cmp(&b.phases));
        let mut out: Vec<FrameEntry> = Vec::with_capacity(self.entries.len());
        for e in self.entries.drain(..) {
            match out.last_mut() {
                Some(last) if last.phases == e.phases => last.amp += e.amp,
                _ => out.push(e),
            }
        }
        out.retain(|e| e.amp.norm() >= PRUNE_EPS);
        self.entries = out;
    }

    // ---- Clifford rotation ---------------------------------------------

    /// Rotate the frame by a Clifford or Pauli gate, maintaining each
    /// entry's global phase through its amplitude.
    pub fn rotate(&mut self, op: CliffordOp, workers: &Workers) -> Result<(), TableauError> {
        let x_old = self.matrix.x_block_len() as i32;
        // amplitude reads against the pre-gate matrix
        let pre: Vec<(BitVec, Amp)> = workers.map(&self.entries, |e| {
            let anchor = self.matrix.anchor(&e.phases);
            let extra = if let CliffordOp::H(q) = op {
                let mut flipped = anchor.clone();
                flipped.toggle(q);
                self.matrix.amp_exact(&e.phases, &flipped)
            } else {
                Amp::ZERO
            };
            (anchor, extra)
        });
        let memo = self.matrix.conjugate(op)?;
        let matrix = &self.matrix;
        workers.for_each_mut(&mut self.entries, |i, e| {
            let (anchor, extra) = &pre[i];
            memo.replay(&mut e.phases, None);
            match op {
                CliffordOp::H(q) => {
                    // two-term read through the Hadamard pair of |anchor>
                    let s = anchor.get(q);
                    let (a0, a1) = if s {
                        (*extra, Amp::new(0, -x_old))
                    } else {
                        (Amp::new(0, -x_old), *extra)
                    };
                    // out(v) = (a0 + (-1)^v a1) / sqrt(2); pick a nonzero one
                    let v = if a1.zero || a0.zero || (a1.phase_exp + 4 - a0.phase_exp) & 3 != 2 {
                        false
                    } else {
                        true
                    };
                    let sign = if v { -1.0 } else { 1.0 };
                    let out = (a0.to_complex() + sign * a1.to_complex())
                        * std::f64::consts::FRAC_1_SQRT_2;
                    let mut b = anchor.clone();
                    b.set(q, v);
                    let gamma = matrix.amp_exact(&e.phases, &b);
                    debug_assert!(!gamma.zero);
                    e.amp *= out / gamma.to_complex();
                }
                _ => {
                    let (b, k) = permute_basis(anchor, op);
                    let beta = Amp::new(k, -x_old);
                    let gamma = matrix.amp_exact(&e.phases, &b);
                    debug_assert!(!gamma.zero);
                    e.amp *= Amp::new(
                        (beta.phase_exp + 4 - gamma.phase_exp) & 3,
                        beta.mag_exp - gamma.mag_exp,
                    )
                    .to_complex();
                }
            }
        });
        self.sort_entries();
        Ok(())
    }

    // ---- cofactoring -----------------------------------------------------

    /// Decompose every entry into its qubit-c cofactors. A deterministic
    /// qubit leaves the frame untouched; a random one doubles the entry
    /// count while representing the same superposition. Afterwards the
    /// matrix holds a pure +/-Z_c row.
    pub fn cofactor(&mut self, c: usize, workers: &Workers) -> Result<bool, TableauError> {
        if self.matrix.pure_z_row(c).is_some() {
            return Ok(false);
        }
        let old = self.matrix.clone();
        let memo = self.matrix.collapse_structural(c)?;
        let row = memo.collapsed_row().expect("collapse memo names a row");
        let x_new = self.matrix.x_block_len() as i32;
        let matrix = &self.matrix;
        let split: Vec<[FrameEntry; 2]> = workers.map(&self.entries, |e| {
            let mut lo = e.phases.clone();
            memo.replay(&mut lo, Some(false));
            let mut hi = lo.clone();
            hi.set(row, true);
            let branch = |phases: BitVec| {
                let b = matrix.anchor(&phases);
                let camp = old.amp_exact(&e.phases, &b);
                debug_assert!(!camp.zero, "both cofactors of a random qubit are nonempty");
                let amp = e.amp
                    * Amp::new(camp.phase_exp, camp.mag_exp + x_new).to_complex();
                FrameEntry { phases, amp }
            };
            [branch(lo), branch(hi)]
        });
        self.entries = split.into_iter().flatten().collect();
        self.sort_entries();
        Ok(true)
    }

    /// Keep only the cofactor class consistent with a measurement outcome.
    /// The caller renormalizes across the whole superposition.
    pub fn collapse_to(
        &mut self,
        q: usize,
        outcome: bool,
        workers: &Workers,
    ) -> Result<(), TableauError> {
        if let Some(r) = self.matrix.pure_z_row(q) {
            self.entries.retain(|e| e.phases.get(r) == outcome);
            return Ok(());
        }
        let old = self.matrix.clone();
        let memo = self.matrix.collapse_structural(q)?;
        let x_new = self.matrix.x_block_len() as i32;
        let matrix = &self.matrix;
        workers.for_each_mut(&mut self.entries, |_, e| {
            let mut phases = e.phases.clone();
            memo.replay(&mut phases, Some(outcome));
            let b = matrix.anchor(&phases);
            let camp = old.amp_exact(&e.phases, &b);
            e.amp *= Amp::new(camp.phase_exp, camp.mag_exp + x_new).to_complex();
            e.phases = phases;
        });
        self.sort_dedupe();
        Ok(())
    }

    /// Per-entry outcome weights for measuring qubit q: (p0, p1) already
    /// scaled by |amplitude|^2.
    pub fn outcome_weights(&self, q: usize) -> (f64, f64) {
        match self.matrix.pure_z_row(q) {
            None => {
                let w: f64 = self.norm_sqr();
                (w * 0.5, w * 0.5)
            }
            Some(r) => {
                let mut p = (0.0, 0.0);
                for e in &self.entries {
                    let w = e.amp.norm_sqr();
                    if e.phases.get(r) {
                        p.1 += w;
                    } else {
                        p.0 += w;
                    }
                }
                p
            }
        }
    }

    // ---- non-Clifford gates ----------------------------------------------

    /// Toffoli via double cofactoring: X_t is applied to the c1c2 = 11
    /// cofactor class, sign flips and global factor per entry.
    pub fn apply_toffoli(
        &mut self,
        c1: usize,
        c2: usize,
        t: usize,
        workers: &Workers,
    ) -> Result<(), TableauError> {
        self.cofactor(c1, workers)?;
        self.cofactor(c2, workers)?;
        let u = self.matrix.pure_z_row(c1).expect("cofactored control");
        let v = self.matrix.pure_z_row(c2).expect("cofactored control");
        let n = self.qubits();
        let rows = self.matrix.rows();
        let flip_mask = BitVec::from_fn(rows.len(), |r| rows[r].zs.get(t));
        let x = self.matrix.x_block_len() as i32;
        let e_t = unit_bit(n, t);
        let matrix = &self.matrix;
        workers.for_each_mut(&mut self.entries, |_, e| {
            if !(e.phases.get(u) && e.phases.get(v)) {
                return;
            }
            let mut phases = e.phases.clone();
            phases.xor_with(&flip_mask);
            let mut pre = matrix.anchor(&phases);
            pre.xor_with(&e_t);
            let beta = matrix.amp_exact(&e.phases, &pre);
            debug_assert!(!beta.zero);
            // gamma is the new anchor amplitude, real positive 2^(-x/2)
            e.amp *= Amp::new(beta.phase_exp, beta.mag_exp + x).to_complex();
            e.phases = phases;
        });
        self.sort_entries();
        Ok(())
    }

    /// Controlled phase: the ct = 11 cofactor class picks up e^{i alpha}.
    pub fn apply_controlled_phase(
        &mut self,
        c: usize,
        t: usize,
        alpha: f64,
        workers: &Workers,
    ) -> Result<(), TableauError> {
        self.cofactor(c, workers)?;
        self.cofactor(t, workers)?;
        let u = self.matrix.pure_z_row(c).expect("cofactored control");
        let v = self.matrix.pure_z_row(t).expect("cofactored target");
        let phase = Complex64::from_polar(1.0, alpha);
        workers.for_each_mut(&mut self.entries, |_, e| {
            if e.phases.get(u) && e.phases.get(v) {
                e.amp *= phase;
            }
        });
        Ok(())
    }

    /// T (or T^dag): the t = 1 cofactor class picks up e^{+-i pi/4}.
    pub fn apply_t(
        &mut self,
        t: usize,
        dagger: bool,
        workers: &Workers,
    ) -> Result<(), TableauError> {
        self.cofactor(t, workers)?;
        let u = self.matrix.pure_z_row(t).expect("cofactored target");
        let angle = if dagger {
            -std::f64::consts::FRAC_PI_4
        } else {
            std::f64::consts::FRAC_PI_4
        };
        let phase = Complex64::from_polar(1.0, angle);
        workers.for_each_mut(&mut self.entries, |_, e| {
            if e.phases.get(u) {
                e.amp *= phase;
            }
        });
        Ok(())
    }

    // ---- reconstruction ---------------------------------------------------

    /// Weighted amplitude of one basis state across all entries.
    pub fn basis_amplitude(&self, b: &BitVec) -> Complex64 {
        self.entries
            .iter()
            .map(|e| e.amp * self.matrix.canonical_amplitude(&e.phases, b))
            .sum()
    }

    /// The dense state vector this frame represents (test scale only).
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let n = self.qubits();
        assert!(n <= 20, "reconstruction is for desk-scale checks");
        (0..1usize << n)
            .map(|i| {
                let b = BitVec::from_fn(n, |j| (i >> j) & 1 == 1);
                self.basis_amplitude(&b)
            })
            .collect()
    }

    /// Diagnostic dump: one entry per line as sign bits and "re,im".
    pub fn dump_entries(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!("{} {},{}\n", e.phases, e.amp.re, e.amp.im));
        }
        out
    }
}

/// Action of a permutation-phase gate on one basis state: the image state
/// and the i-exponent it picks up.
fn permute_basis(b: &BitVec, op: CliffordOp) -> (BitVec, u8) {
    let mut out = b.clone();
    match op {
        CliffordOp::X(q) => {
            out.toggle(q);
            (out, 0)
        }
        CliffordOp::Y(q) => {
            let k = if b.get(q) { 3 } else { 1 };
            out.toggle(q);
            (out, k)
        }
        CliffordOp::Z(q) => {
            let k = if b.get(q) { 2 } else { 0 };
            (out, k)
        }
        CliffordOp::Phase(q) => {
            let k = if b.get(q) { 1 } else { 0 };
            (out, k)
        }
        CliffordOp::PhaseDag(q) => {
            let k = if b.get(q) { 3 } else { 0 };
            (out, k)
        }
        CliffordOp::Cnot(c, t) => {
            if b.get(c) {
                out.toggle(t);
            }
            (out, 0)
        }
        CliffordOp::H(_) => unreachable!("H is not a basis permutation"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{equal_up_to_global_phase, DenseState};
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    fn w() -> Workers {
        Workers::serial()
    }

    fn basis_frame(bits: &str) -> StabilizerFrame {
        StabilizerFrame::from_basis(&bits.parse().unwrap())
    }

    fn assert_state(frame: &StabilizerFrame, want: &[Complex64], tol: f64) {
        let got = frame.reconstruct();
        assert!(
            equal_up_to_global_phase(&got, want, tol).unwrap(),
            "frame state {got:?} != expected {want:?}"
        );
    }

    #[test]
    fn phase_gate_on_one() {
        // |1> --P--> i|1>, visible in the amplitude
        let mut f = basis_frame("1");
        f.rotate(CliffordOp::Phase(0), &w()).unwrap();
        assert_eq!(f.len(), 1);
        assert!((f.entries[0].amp - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn x_gate_keeps_amplitude() {
        let mut f = basis_frame("0");
        f.rotate(CliffordOp::X(0), &w()).unwrap();
        assert!((f.entries[0].amp - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert_state(&f, &[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)], 1e-12);
    }

    #[test]
    fn hadamard_collapses_superposition_frame() {
        // (|0>+|1>)/sqrt(2) --H--> |0>
        let mut f = basis_frame("0");
        f.rotate(CliffordOp::H(0), &w()).unwrap();
        f.rotate(CliffordOp::H(0), &w()).unwrap();
        assert_state(&f, &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], 1e-12);
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn cofactor_on_deterministic_qubit_is_noop() {
        let mut f = basis_frame("0");
        assert!(!f.cofactor(0, &w()).unwrap());
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn cofactor_bell_splits_exactly() {
        let mut f = basis_frame("00");
        f.rotate(CliffordOp::H(0), &w()).unwrap();
        f.rotate(CliffordOp::Cnot(0, 1), &w()).unwrap();
        let before = f.reconstruct();
        assert!(f.cofactor(0, &w()).unwrap());
        assert_eq!(f.len(), 2);
        let after = f.reconstruct();
        for (a, b) in before.iter().zip(after.iter()) {
            assert!((a - b).norm() < 1e-12, "cofactor must preserve the state exactly");
        }
        let r = std::f64::consts::FRAC_1_SQRT_2;
        for e in &f.entries {
            assert!((e.amp.norm() - r).abs() < 1e-12);
        }
    }

    #[test]
    fn toffoli_truth_table_on_basis_states() {
        for input in 0..8usize {
            let bits: BitVec = BitVec::from_fn(3, |j| (input >> j) & 1 == 1);
            let mut f = StabilizerFrame::from_basis(&bits);
            f.apply_toffoli(0, 1, 2, &w()).unwrap();
            let expect = if input & 0b011 == 0b011 { input ^ 0b100 } else { input };
            let got = f.reconstruct();
            assert!((got[expect].norm() - 1.0).abs() < 1e-12, "input {input}");
            assert_eq!(f.len(), 1);
        }
    }

    #[test]
    fn toffoli_on_equal_superposition_of_controls() {
        // (|000>+|010>+|100>+|110>)/2 -> (|000>+|010>+|100>+|111>)/2
        let mut f = basis_frame("000");
        f.rotate(CliffordOp::H(0), &w()).unwrap();
        f.rotate(CliffordOp::H(1), &w()).unwrap();
        f.apply_toffoli(0, 1, 2, &w()).unwrap();
        assert_eq!(f.len(), 4, "four cofactor states");
        // qubit order: index bit j = qubit j; |100> means qubit 0 set
        let mut expect = vec![Complex64::new(0.0, 0.0); 8];
        expect[0b000] = Complex64::new(0.5, 0.0);
        expect[0b010] = Complex64::new(0.5, 0.0); // qubit 1
        expect[0b001] = Complex64::new(0.5, 0.0); // qubit 0
        expect[0b111] = Complex64::new(0.5, 0.0);
        assert_state(&f, &expect, 1e-12);
    }

    #[test]
    fn toffoli_matches_oracle_on_random_frames() {
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        for _ in 0..30 {
            let n = 5;
            let mut f = basis_frame("00000");
            let mut dense = DenseState::zero_state(n).unwrap();
            for _ in 0..12 {
                let g = crate::circuit::tests::random_unitary_gate(&mut rng, n);
                if let Some(op) = clifford_of(&g) {
                    f.rotate(op, &w()).unwrap();
                    dense.apply(&g).unwrap();
                }
            }
            let mut qs: Vec<usize> = (0..n).collect();
            qs.shuffle(&mut rng);
            f.apply_toffoli(qs[0], qs[1], qs[2], &w()).unwrap();
            dense
                .apply(&crate::circuit::Gate::tof(qs[0], qs[1], qs[2]))
                .unwrap();
            assert!(equal_up_to_global_phase(&f.reconstruct(), &dense.amps, 1e-9).unwrap());
        }
    }

    fn clifford_of(g: &crate::circuit::Gate) -> Option<CliffordOp> {
        use crate::circuit::GateKind::*;
        let q = g.qubits();
        Some(match g.kind {
            H => CliffordOp::H(q[0]),
            P => CliffordOp::Phase(q[0]),
            Pdg => CliffordOp::PhaseDag(q[0]),
            X => CliffordOp::X(q[0]),
            Y => CliffordOp::Y(q[0]),
            Z => CliffordOp::Z(q[0]),
            Cnot => CliffordOp::Cnot(q[0], q[1]),
            _ => return None,
        })
    }

    #[test]
    fn controlled_phase_examples() {
        // |11> with alpha = pi -> -|11>
        let mut f = basis_frame("11");
        f.apply_controlled_phase(0, 1, std::f64::consts::PI, &w()).unwrap();
        let got = f.reconstruct();
        assert!((got[0b11] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);

        // (|0>+|1>)/sqrt2 (x) |1>, alpha = pi/2 -> (|01> + i|11>)/sqrt2
        let mut f = basis_frame("01");
        f.rotate(CliffordOp::H(0), &w()).unwrap();
        f.apply_controlled_phase(0, 1, std::f64::consts::FRAC_PI_2, &w())
            .unwrap();
        let mut dense = DenseState::basis(&"01".parse().unwrap()).unwrap();
        dense.apply(&crate::circuit::Gate::h(0)).unwrap();
        dense
            .apply(&crate::circuit::Gate::crz(0, 1, std::f64::consts::FRAC_PI_2))
            .unwrap();
        assert!(equal_up_to_global_phase(&f.reconstruct(), &dense.amps, 1e-12).unwrap());
    }

    #[test]
    fn t_gate_examples() {
        let mut f = basis_frame("0");
        f.apply_t(0, false, &w()).unwrap();
        assert_state(&f, &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], 1e-12);

        let mut f = basis_frame("1");
        f.apply_t(0, false, &w()).unwrap();
        let got = f.reconstruct();
        let want = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        assert!((got[1] - want).norm() < 1e-12);

        let mut f = basis_frame("0");
        f.rotate(CliffordOp::H(0), &w()).unwrap();
        f.apply_t(0, false, &w()).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let want = vec![Complex64::new(r, 0.0), Complex64::from_polar(r, std::f64::consts::FRAC_PI_4)];
        assert_state(&f, &want, 1e-12);
        assert_eq!(f.len(), 2, "biased superposition stays split");
    }

    #[test]
    fn outcome_weights_examples() {
        let f = basis_frame("1");
        let (p0, p1) = f.outcome_weights(0);
        assert_eq!((p0, p1), (0.0, 1.0));

        let mut f = basis_frame("0");
        f.rotate(CliffordOp::H(0), &w()).unwrap();
        let (p0, p1) = f.outcome_weights(0);
        assert!((p0 - 0.5).abs() < 1e-12 && (p1 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn random_clifford_runs_track_the_oracle() {
        let mut rng = ChaCha12Rng::seed_from_u64(33);
        for _ in 0..25 {
            let n = rng.gen_range(1..=6);
            let bits = BitVec::from_fn(n, |_| rng.gen_bool(0.5));
            let mut f = StabilizerFrame::from_basis(&bits);
            let mut dense = DenseState::basis(&bits).unwrap();
            for _ in 0..30 {
                let g = crate::tableau::tests_support::random_clifford(&mut rng, n);
                f.rotate(g, &w()).unwrap();
                dense.apply(&gate_of(g)).unwrap();
                let got = f.reconstruct();
                assert!(
                    equal_up_to_global_phase(&got, &dense.amps, 1e-9).unwrap(),
                    "diverged after {g:?}"
                );
                assert_eq!(f.len(), 1, "Clifford gates never split a frame");
                assert!((f.norm_sqr() - 1.0).abs() < 1e-9);
            }
        }
    }

    fn gate_of(op: CliffordOp) -> crate::circuit::Gate {
        use crate::circuit::Gate;
        match op {
            CliffordOp::H(q) => Gate::h(q),
            CliffordOp::Phase(q) => Gate::p(q),
            CliffordOp::PhaseDag(q) => Gate::pdg(q),
            CliffordOp::X(q) => Gate::x(q),
            CliffordOp::Y(q) => Gate::y(q),
            CliffordOp::Z(q) => Gate::z(q),
            CliffordOp::Cnot(c, t) => Gate::cnot(c, t),
        }
    }

    #[test]
    fn cofactor_preserves_state_and_doubles_or_keeps() {
        let mut rng = ChaCha12Rng::seed_from_u64(34);
        for _ in 0..60 {
            let n = rng.gen_range(1..=6);
            let bits = BitVec::from_fn(n, |_| rng.gen_bool(0.5));
            let mut f = StabilizerFrame::from_basis(&bits);
            for _ in 0..12 {
                let g = crate::tableau::tests_support::random_clifford(&mut rng, n);
                f.rotate(g, &w()).unwrap();
            }
            // maybe pre-split once so multi-entry frames are covered
            if rng.gen_bool(0.5) {
                let q = rng.gen_range(0..n);
                f.cofactor(q, &w()).unwrap();
            }
            let before = f.reconstruct();
            let k = f.len();
            let q = rng.gen_range(0..n);
            let split = f.cofactor(q, &w()).unwrap();
            assert_eq!(f.len(), if split { 2 * k } else { k });
            let after = f.reconstruct();
            for (a, b) in before.iter().zip(after.iter()) {
                assert!((a - b).norm() < 1e-12);
            }
            // phase vectors stay distinct
            for wpair in f.entries.windows(2) {
                assert!(wpair[0].phases != wpair[1].phases);
            }
        }
    }
}
