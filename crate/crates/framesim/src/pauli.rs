//! Elements of the n-qubit Pauli group: bit-packed literal strings with a
//! tracked i^k prefactor, phase-exact multiplication, commutation tests and
//! conjugation by the basic Clifford and Pauli gates.
//!
//! Literals are encoded two bits per position across an X plane and a Z
//! plane: 00 = I, 01 = Z, 10 = X, 11 = Y. Multiplication and commutation are
//! word-parallel over the planes.

use std::fmt;

use thiserror::Error;

use crate::bits::BitVec;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PauliError {
    #[error("operator sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("qubit index {index} out of range for {n} qubits")]
    IndexOutOfRange { index: usize, n: usize },
}

/// One-qubit Pauli literal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Literal {
    I = 0b00,
    Z = 0b01,
    X = 0b10,
    Y = 0b11,
}

impl Literal {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Literal::I,
            (false, true) => Literal::Z,
            (true, false) => Literal::X,
            (true, true) => Literal::Y,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Literal::I => 'I',
            Literal::Z => 'Z',
            Literal::X => 'X',
            Literal::Y => 'Y',
        }
    }
}

/// Clifford/Pauli conjugation ops understood at the Pauli-string level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliffordOp {
    H(usize),
    Phase(usize),
    PhaseDag(usize),
    Cnot(usize, usize),
    X(usize),
    Y(usize),
    Z(usize),
}

impl CliffordOp {
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            CliffordOp::H(q)
            | CliffordOp::Phase(q)
            | CliffordOp::PhaseDag(q)
            | CliffordOp::X(q)
            | CliffordOp::Y(q)
            | CliffordOp::Z(q) => (q, None),
            CliffordOp::Cnot(c, t) => (c, Some(t)),
        }
    }

    /// The inverse operation (H, CNOT and Paulis are involutions).
    pub fn inverse(&self) -> CliffordOp {
        match *self {
            CliffordOp::Phase(q) => CliffordOp::PhaseDag(q),
            CliffordOp::PhaseDag(q) => CliffordOp::Phase(q),
            other => other,
        }
    }
}

/// An unsigned Pauli literal string: one X-bit plane and one Z-bit plane.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    pub xs: BitVec,
    pub zs: BitVec,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString { xs: BitVec::new(n), zs: BitVec::new(n) }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_identity(&self) -> bool {
        self.xs.is_zero() && self.zs.is_zero()
    }

    #[inline]
    pub fn literal(&self, q: usize) -> Literal {
        Literal::from_bits(self.xs.get(q), self.zs.get(q))
    }

    pub fn set_literal(&mut self, q: usize, l: Literal) {
        let bits = l as u8;
        self.xs.set(q, bits & 0b10 != 0);
        self.zs.set(q, bits & 0b01 != 0);
    }

    /// Number of Y literals.
    pub fn y_count(&self) -> usize {
        self.xs.and_count(&self.zs)
    }

    /// Sum of the per-position i-exponents contributed when multiplying
    /// `self * other` literal by literal (the off-diagonal entries of the
    /// one-qubit multiplication table), mod 4.
    pub fn mul_phase_exp(&self, other: &PauliString) -> u8 {
        let mut plus = 0usize;
        let mut minus = 0usize;
        let (x1, z1) = (self.xs.words(), self.zs.words());
        let (x2, z2) = (other.xs.words(), other.zs.words());
        for i in 0..x1.len() {
            let (a_x, a_z, b_x, b_z) = (x1[i], z1[i], x2[i], z2[i]);
            // +i on X*Y, Y*Z, Z*X; -i on Y*X, Z*Y, X*Z
            let p = (a_x & !a_z & b_x & b_z)
                | (a_x & a_z & !b_x & b_z)
                | (!a_x & a_z & b_x & !b_z);
            let m = (a_x & a_z & b_x & !b_z)
                | (!a_x & a_z & b_x & b_z)
                | (a_x & !a_z & !b_x & b_z);
            plus += p.count_ones() as usize;
            minus += m.count_ones() as usize;
        }
        (((plus as i64 - minus as i64) % 4 + 4) % 4) as u8
    }

    /// Multiply in place: self <- self * other (literals only); returns the
    /// i-exponent contribution of the literal products.
    pub fn mul_assign(&mut self, other: &PauliString) -> u8 {
        let k = self.mul_phase_exp(other);
        self.xs.xor_with(&other.xs);
        self.zs.xor_with(&other.zs);
        k
    }

    /// Symplectic commutation test: true iff the operators commute.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        !(self.xs.and_parity(&other.zs) ^ self.zs.and_parity(&other.xs))
    }

    /// First non-identity literal position.
    pub fn leading(&self) -> Option<usize> {
        match (self.xs.first_one(), self.zs.first_one()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (None, None) => None,
        }
    }

    fn render(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.len() {
            write!(f, "{}", self.literal(q).to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.render(f)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.render(f)
    }
}

/// A signed Pauli-group element: i^phase_exp times a literal string.
///
/// Plain value semantics; equality compares literals and the phase exponent.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    pub string: PauliString,
    /// k in i^k, always reduced mod 4.
    pub phase_exp: u8,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        PauliOperator { string: PauliString::identity(n), phase_exp: 0 }
    }

    /// Build from a text form like "-iIYXI" or "+XX" or "ZZ".
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut rest = text;
        let mut phase_exp = 0u8;
        if let Some(r) = rest.strip_prefix("+i") {
            phase_exp = 1;
            rest = r;
        } else if let Some(r) = rest.strip_prefix("-i") {
            phase_exp = 3;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('i') {
            phase_exp = 1;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        } else if let Some(r) = rest.strip_prefix('-') {
            phase_exp = 2;
            rest = r;
        }
        let mut string = PauliString::identity(rest.chars().count());
        for (q, c) in rest.chars().enumerate() {
            let l = match c.to_ascii_uppercase() {
                'I' => Literal::I,
                'X' => Literal::X,
                'Y' => Literal::Y,
                'Z' => Literal::Z,
                _ => return Err(format!("invalid Pauli literal {c:?}")),
            };
            string.set_literal(q, l);
        }
        Ok(PauliOperator { string, phase_exp })
    }

    pub fn len(&self) -> usize {
        self.string.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase_exp & 3 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}{}", self.string)
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Phase-tracked product P * Q.
pub fn multiply(p: &PauliOperator, q: &PauliOperator) -> Result<PauliOperator, PauliError> {
    if p.len() != q.len() {
        return Err(PauliError::SizeMismatch(p.len(), q.len()));
    }
    let mut string = p.string.clone();
    let k = string.mul_assign(&q.string);
    Ok(PauliOperator {
        string,
        phase_exp: (p.phase_exp + q.phase_exp + k) & 3,
    })
}

/// True iff P and Q commute.
pub fn commutes(p: &PauliOperator, q: &PauliOperator) -> Result<bool, PauliError> {
    if p.len() != q.len() {
        return Err(PauliError::SizeMismatch(p.len(), q.len()));
    }
    Ok(p.string.commutes_with(&q.string))
}

/// Apply one conjugation step to a bare (x, z) literal pair, returning the
/// new pair plus a sign-flip bit. Used both here and by the tableau.
#[inline]
pub(crate) fn conj_bits_1q(op: &CliffordOp, x: bool, z: bool) -> (bool, bool, bool) {
    match op {
        CliffordOp::H(_) => (z, x, x & z),
        CliffordOp::Phase(_) => (x, z ^ x, x & z),
        CliffordOp::PhaseDag(_) => (x, z ^ x, x & !z),
        CliffordOp::X(_) => (x, z, z),
        CliffordOp::Y(_) => (x, z, x ^ z),
        CliffordOp::Z(_) => (x, z, x),
        CliffordOp::Cnot(..) => unreachable!("two-qubit op"),
    }
}

/// Conjugate P by a single Clifford or Pauli gate: returns U P U^dag.
///
/// Only the touched positions and the phase change.
pub fn conjugate_single(
    p: &PauliOperator,
    op: CliffordOp,
) -> Result<PauliOperator, PauliError> {
    let n = p.len();
    let check = |q: usize| {
        if q >= n {
            Err(PauliError::IndexOutOfRange { index: q, n })
        } else {
            Ok(())
        }
    };
    let mut out = p.clone();
    match op {
        CliffordOp::Cnot(c, t) => {
            check(c)?;
            check(t)?;
            if c == t {
                return Err(PauliError::IndexOutOfRange { index: t, n });
            }
            let (xc, zc) = (p.string.xs.get(c), p.string.zs.get(c));
            let (xt, zt) = (p.string.xs.get(t), p.string.zs.get(t));
            if xc & zt & !(xt ^ zc) {
                out.phase_exp = (out.phase_exp + 2) & 3;
            }
            out.string.xs.set(t, xt ^ xc);
            out.string.zs.set(c, zc ^ zt);
        }
        _ => {
            let (q, _) = op.qubits();
            check(q)?;
            let (x, z) = (p.string.xs.get(q), p.string.zs.get(q));
            let (nx, nz, flip) = conj_bits_1q(&op, x, z);
            out.string.xs.set(q, nx);
            out.string.zs.set(q, nz);
            if flip {
                out.phase_exp = (out.phase_exp + 2) & 3;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    fn op(text: &str) -> PauliOperator {
        PauliOperator::parse(text).unwrap()
    }

    /// The sixteen ordered one-qubit products, straight from the
    /// multiplication table.
    #[test]
    fn one_qubit_multiplication_table() {
        let table = [
            ("I", "I", "+I"),
            ("I", "X", "+X"),
            ("I", "Y", "+Y"),
            ("I", "Z", "+Z"),
            ("X", "I", "+X"),
            ("X", "X", "+I"),
            ("X", "Y", "+iZ"),
            ("X", "Z", "-iY"),
            ("Y", "I", "+Y"),
            ("Y", "X", "-iZ"),
            ("Y", "Y", "+I"),
            ("Y", "Z", "+iX"),
            ("Z", "I", "+Z"),
            ("Z", "X", "+iY"),
            ("Z", "Y", "-iX"),
            ("Z", "Z", "+I"),
        ];
        for (a, b, want) in table {
            let got = multiply(&op(a), &op(b)).unwrap();
            assert_eq!(got.to_string(), want, "{a} * {b}");
        }
    }

    #[test]
    fn multi_qubit_product_example() {
        // (-IIXI)(iIYII) = -iIYXI
        let a = op("-IIXI");
        let b = op("iIYII");
        assert_eq!(multiply(&a, &b).unwrap().to_string(), "-iIYXI");
    }

    #[test]
    fn squares_are_identity() {
        for s in ["X", "Y", "Z", "I"] {
            let p = op(s);
            let sq = multiply(&p, &p).unwrap();
            assert!(sq.string.is_identity());
            assert_eq!(sq.phase_exp, 0);
        }
    }

    #[test]
    fn size_mismatch_rejected() {
        assert_eq!(
            multiply(&op("XX"), &op("X")).unwrap_err(),
            PauliError::SizeMismatch(2, 1)
        );
        assert!(commutes(&op("XX"), &op("X")).is_err());
    }

    #[test]
    fn commutation_examples() {
        assert!(commutes(&op("XX"), &op("ZZ")).unwrap());
        assert!(!commutes(&op("X"), &op("Z")).unwrap());
        for s in ["XYZI", "YYYY", "IZXY"] {
            assert!(commutes(&op(s), &op(s)).unwrap());
        }
    }

    fn random_operator(rng: &mut ChaCha12Rng, n: usize) -> PauliOperator {
        let mut p = PauliOperator::identity(n);
        for q in 0..n {
            let l = match rng.gen_range(0..4) {
                0 => Literal::I,
                1 => Literal::X,
                2 => Literal::Y,
                _ => Literal::Z,
            };
            p.string.set_literal(q, l);
        }
        p.phase_exp = rng.gen_range(0..4);
        p
    }

    #[test]
    fn multiplication_is_associative() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=8);
            let a = random_operator(&mut rng, n);
            let b = random_operator(&mut rng, n);
            let c = random_operator(&mut rng, n);
            let ab_c = multiply(&multiply(&a, &b).unwrap(), &c).unwrap();
            let a_bc = multiply(&a, &multiply(&b, &c).unwrap()).unwrap();
            assert_eq!(ab_c, a_bc);
        }
    }

    #[test]
    fn commutation_matches_product_phase_delta() {
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=8);
            let a = random_operator(&mut rng, n);
            let b = random_operator(&mut rng, n);
            let ab = multiply(&a, &b).unwrap();
            let ba = multiply(&b, &a).unwrap();
            let delta = (ab.phase_exp + 4 - ba.phase_exp) & 3;
            if commutes(&a, &b).unwrap() {
                assert_eq!(delta, 0);
                assert_eq!(ab, ba);
            } else {
                assert_eq!(delta, 2);
            }
        }
    }

    #[test]
    fn conjugation_table_rows() {
        // One-qubit rows of the conjugation table.
        let h = |s: &str| conjugate_single(&op(s), CliffordOp::H(0)).unwrap().to_string();
        assert_eq!(h("X"), "+Z");
        assert_eq!(h("Y"), "-Y");
        assert_eq!(h("Z"), "+X");
        let p = |s: &str| conjugate_single(&op(s), CliffordOp::Phase(0)).unwrap().to_string();
        assert_eq!(p("X"), "+Y");
        assert_eq!(p("Y"), "-X");
        assert_eq!(p("Z"), "+Z");
        // CNOT rows, control 0 target 1.
        let cx = |s: &str| {
            conjugate_single(&op(s), CliffordOp::Cnot(0, 1)).unwrap().to_string()
        };
        assert_eq!(cx("IX"), "+IX");
        assert_eq!(cx("XI"), "+XX");
        assert_eq!(cx("IY"), "+ZY");
        assert_eq!(cx("YI"), "+YX");
        assert_eq!(cx("IZ"), "+ZZ");
        assert_eq!(cx("ZI"), "+ZI");
    }

    #[test]
    fn cnot_on_middle_qubits() {
        // control 1, target 2 of a 4-qubit operator
        let got = conjugate_single(&op("IXII"), CliffordOp::Cnot(1, 2)).unwrap();
        assert_eq!(got.to_string(), "+IXXI");
    }

    #[test]
    fn identity_fixed_by_conjugation() {
        for g in [
            CliffordOp::H(2),
            CliffordOp::Phase(0),
            CliffordOp::PhaseDag(1),
            CliffordOp::Cnot(0, 3),
            CliffordOp::X(1),
            CliffordOp::Y(2),
            CliffordOp::Z(3),
        ] {
            let id = PauliOperator::identity(4);
            assert_eq!(conjugate_single(&id, g).unwrap(), id);
        }
    }

    #[test]
    fn phase_dag_equals_three_phase_gates() {
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        for _ in 0..200 {
            let n = rng.gen_range(1..=6);
            let q = rng.gen_range(0..n);
            let a = random_operator(&mut rng, n);
            let direct = conjugate_single(&a, CliffordOp::PhaseDag(q)).unwrap();
            let mut triple = a.clone();
            for _ in 0..3 {
                triple = conjugate_single(&triple, CliffordOp::Phase(q)).unwrap();
            }
            assert_eq!(direct, triple);
        }
    }

    #[test]
    fn conjugation_preserves_products_and_commutation() {
        let mut rng = ChaCha12Rng::seed_from_u64(10);
        for _ in 0..500 {
            let n = rng.gen_range(2..=8);
            let a = random_operator(&mut rng, n);
            let b = random_operator(&mut rng, n);
            let g = match rng.gen_range(0..7) {
                0 => CliffordOp::H(rng.gen_range(0..n)),
                1 => CliffordOp::Phase(rng.gen_range(0..n)),
                2 => CliffordOp::PhaseDag(rng.gen_range(0..n)),
                3 => {
                    let c = rng.gen_range(0..n);
                    let mut t = rng.gen_range(0..n);
                    while t == c {
                        t = rng.gen_range(0..n);
                    }
                    CliffordOp::Cnot(c, t)
                }
                4 => CliffordOp::X(rng.gen_range(0..n)),
                5 => CliffordOp::Y(rng.gen_range(0..n)),
                _ => CliffordOp::Z(rng.gen_range(0..n)),
            };
            let ua = conjugate_single(&a, g).unwrap();
            let ub = conjugate_single(&b, g).unwrap();
            let u_ab = conjugate_single(&multiply(&a, &b).unwrap(), g).unwrap();
            assert_eq!(u_ab, multiply(&ua, &ub).unwrap());
            assert_eq!(
                commutes(&a, &b).unwrap(),
                commutes(&ua, &ub).unwrap()
            );
        }
    }

    #[test]
    fn rendering_round_trip() {
        for s in ["+XX", "-iIYXI", "+iZ", "-Y", "+I"] {
            assert_eq!(op(s).to_string(), s);
        }
        // bare strings get a "+" prefix
        assert_eq!(op("ZZ").to_string(), "+ZZ");
    }
}
