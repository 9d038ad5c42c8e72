//! Brute-force state-vector simulator used as ground truth at desk scale.
//!
//! Amplitude index convention: basis string b maps to the integer with
//! qubit j at bit j, matching the bit-vector order used everywhere else.

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::bits::BitVec;
use crate::circuit::{Circuit, Gate, GateKind};

/// Hard cap; dense vectors beyond this are a usage error.
pub const MAX_DENSE_QUBITS: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("dense oracle capacity exceeded: {0} qubits > {MAX_DENSE_QUBITS}")]
    CapacityExceeded(usize),
    #[error("state sizes differ")]
    SizeMismatch,
}

/// An n-qubit state as 2^n complex amplitudes.
#[derive(Debug, Clone)]
pub struct DenseState {
    n: usize,
    pub amps: Vec<Complex64>,
}

impl DenseState {
    pub fn zero_state(n: usize) -> Result<Self, OracleError> {
        if n > MAX_DENSE_QUBITS {
            return Err(OracleError::CapacityExceeded(n));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(DenseState { n, amps })
    }

    pub fn basis(bits: &BitVec) -> Result<Self, OracleError> {
        let mut s = Self::zero_state(bits.len())?;
        let mut idx = 0usize;
        for j in 0..bits.len() {
            if bits.get(j) {
                idx |= 1 << j;
            }
        }
        s.amps[0] = Complex64::new(0.0, 0.0);
        s.amps[idx] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Apply one gate in place by stride iteration over the touched
    /// subspace; no matrix larger than the gate's own block is formed.
    pub fn apply(&mut self, gate: &Gate) -> Result<(), OracleError> {
        let n = self.n;
        let check = |q: usize| {
            if q >= n {
                Err(OracleError::CapacityExceeded(q))
            } else {
                Ok(())
            }
        };
        for &q in gate.qubits() {
            check(q)?;
        }
        let r = std::f64::consts::FRAC_1_SQRT_2;
        match gate.kind {
            GateKind::H => {
                let m = 1usize << gate.q0();
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        let (a, b) = (self.amps[i], self.amps[i | m]);
                        self.amps[i] = (a + b) * r;
                        self.amps[i | m] = (a - b) * r;
                    }
                }
            }
            GateKind::X => {
                let m = 1usize << gate.q0();
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        self.amps.swap(i, i | m);
                    }
                }
            }
            GateKind::Y => {
                let m = 1usize << gate.q0();
                let im = Complex64::new(0.0, 1.0);
                for i in 0..self.amps.len() {
                    if i & m == 0 {
                        let (a, b) = (self.amps[i], self.amps[i | m]);
                        self.amps[i] = -im * b;
                        self.amps[i | m] = im * a;
                    }
                }
            }
            GateKind::Z | GateKind::P | GateKind::Pdg | GateKind::T | GateKind::Tdg => {
                let m = 1usize << gate.q0();
                let phase = match gate.kind {
                    GateKind::Z => Complex64::new(-1.0, 0.0),
                    GateKind::P => Complex64::new(0.0, 1.0),
                    GateKind::Pdg => Complex64::new(0.0, -1.0),
                    GateKind::T => Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
                    _ => Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4),
                };
                for i in 0..self.amps.len() {
                    if i & m != 0 {
                        self.amps[i] *= phase;
                    }
                }
            }
            GateKind::Cnot => {
                let c = 1usize << gate.q0();
                let t = 1usize << gate.qubits()[1];
                for i in 0..self.amps.len() {
                    if i & c != 0 && i & t == 0 {
                        self.amps.swap(i, i | t);
                    }
                }
            }
            GateKind::Tof => {
                let qs = gate.qubits();
                let (c1, c2, t) = (1usize << qs[0], 1usize << qs[1], 1usize << qs[2]);
                for i in 0..self.amps.len() {
                    if i & c1 != 0 && i & c2 != 0 && i & t == 0 {
                        self.amps.swap(i, i | t);
                    }
                }
            }
            GateKind::Crz => {
                let qs = gate.qubits();
                let (c, t) = (1usize << qs[0], 1usize << qs[1]);
                let phase = Complex64::from_polar(1.0, gate.angle);
                for i in 0..self.amps.len() {
                    if i & c != 0 && i & t != 0 {
                        self.amps[i] *= phase;
                    }
                }
            }
            GateKind::Measure => {
                // handled by the caller; apply() is unitary-only
            }
        }
        Ok(())
    }

    pub fn run(&mut self, circuit: &Circuit) -> Result<(), OracleError> {
        for g in &circuit.gates {
            self.apply(g)?;
        }
        Ok(())
    }

    /// Probability of reading 1 on qubit q.
    pub fn prob_one(&self, q: usize) -> f64 {
        let m = 1usize << q;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & m != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Project onto qubit q = outcome and renormalize.
    pub fn project(&mut self, q: usize, outcome: bool) {
        let m = 1usize << q;
        let mut norm = 0.0;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if ((i & m) != 0) != outcome {
                *a = Complex64::new(0.0, 0.0);
            } else {
                norm += a.norm_sqr();
            }
        }
        let scale = 1.0 / norm.sqrt();
        for a in self.amps.iter_mut() {
            *a *= scale;
        }
    }

    /// Projective measurement of qubit q with the given coin source.
    pub fn measure<R: Rng>(&mut self, q: usize, rng: &mut R) -> bool {
        let p1 = self.prob_one(q);
        let outcome = rng.gen::<f64>() >= 1.0 - p1;
        self.project(q, outcome);
        outcome
    }

    /// Amplitude dump lines: "bits re im", for cross-checking.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, a) in self.amps.iter().enumerate() {
            let bits: String = (0..self.n)
                .map(|j| if (i >> j) & 1 == 1 { '1' } else { '0' })
                .collect();
            out.push_str(&format!("{bits} {} {}\n", a.re, a.im));
        }
        out
    }
}

/// True iff a == c*b for some unit scalar c, within an infinity-norm
/// tolerance; c is fixed from the largest-magnitude amplitude of b.
pub fn equal_up_to_global_phase(
    a: &[Complex64],
    b: &[Complex64],
    tol: f64,
) -> Result<bool, OracleError> {
    if a.len() != b.len() {
        return Err(OracleError::SizeMismatch);
    }
    let Some((k, bk)) = b
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm_sqr().total_cmp(&y.1.norm_sqr()))
    else {
        return Ok(true);
    };
    if bk.norm() == 0.0 {
        return Ok(a.iter().all(|v| v.norm() <= tol));
    }
    let c = (a[k] / bk) / (a[k] / bk).norm().max(f64::MIN_POSITIVE);
    Ok(a.iter()
        .zip(b.iter())
        .all(|(x, y)| (x - c * y).norm() <= tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn x_on_two_qubits() {
        // X on qubit 0: a0|00> + a1|10> -> a0|10> + a1|00>
        let mut s = DenseState::zero_state(2).unwrap();
        s.amps[0b00] = c(0.6, 0.0);
        s.amps[0b01] = c(0.8, 0.0); // |10> in ket order = qubit 0 set
        s.apply(&Gate::x(0)).unwrap();
        assert_eq!(s.amps[0b01], c(0.6, 0.0));
        assert_eq!(s.amps[0b00], c(0.8, 0.0));
    }

    #[test]
    fn h_makes_unbiased_superposition() {
        let mut s = DenseState::zero_state(1).unwrap();
        s.apply(&Gate::h(0)).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amps[0] - c(r, 0.0)).norm() < 1e-15);
        assert!((s.amps[1] - c(r, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn crz_is_diagonal() {
        let mut s = DenseState::basis(&"11".parse().unwrap()).unwrap();
        let alpha = std::f64::consts::FRAC_PI_2;
        s.apply(&Gate::crz(0, 1, alpha)).unwrap();
        assert!((s.amps[0b11] - Complex64::from_polar(1.0, alpha)).norm() < 1e-15);
    }

    #[test]
    fn capacity_cap_enforced() {
        assert_eq!(
            DenseState::zero_state(MAX_DENSE_QUBITS + 1).unwrap_err(),
            OracleError::CapacityExceeded(MAX_DENSE_QUBITS + 1)
        );
    }

    #[test]
    fn measurement_on_basis_and_bell() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let mut s = DenseState::zero_state(1).unwrap();
        for _ in 0..20 {
            assert!(!s.measure(0, &mut rng));
        }
        for seed in 0..20 {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let mut bell = DenseState::zero_state(2).unwrap();
            bell.apply(&Gate::h(0)).unwrap();
            bell.apply(&Gate::cnot(0, 1)).unwrap();
            let x = bell.measure(0, &mut rng);
            // post-state |xx>
            let idx = if x { 0b11 } else { 0b00 };
            assert!((bell.amps[idx].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn coin_is_fair_within_three_sigma() {
        let mut ones = 0usize;
        for seed in 0..10_000u64 {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let mut s = DenseState::zero_state(1).unwrap();
            s.apply(&Gate::h(0)).unwrap();
            if s.measure(0, &mut rng) {
                ones += 1;
            }
        }
        let f = ones as f64 / 10_000.0;
        assert!((f - 0.5).abs() < 0.015, "frequency {f}");
    }

    #[test]
    fn unitarity_preserves_norm() {
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        let mut s = DenseState::zero_state(5).unwrap();
        // some arbitrary state
        for g in [Gate::h(0), Gate::h(3), Gate::t(3), Gate::cnot(3, 4)] {
            s.apply(&g).unwrap();
        }
        for _ in 0..200 {
            let g = crate::circuit::tests::random_unitary_gate(&mut rng, 5);
            s.apply(&g).unwrap();
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn global_phase_comparison() {
        let a = vec![c(0.0, 1.0)];
        let b = vec![c(1.0, 0.0)];
        assert!(equal_up_to_global_phase(&a, &b, 1e-12).unwrap());
        let a = vec![c(1.0, 0.0), c(0.0, 0.0)];
        let b = vec![c(0.0, 0.0), c(1.0, 0.0)];
        assert!(!equal_up_to_global_phase(&a, &b, 1e-12).unwrap());
        assert!(equal_up_to_global_phase(&a, &[], 1e-12).is_err());
    }
}
