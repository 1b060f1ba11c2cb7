//! Classical-key private quantum channel, its test-qubit extension and the
//! authentication variant.

mod analysis;
mod mpqc;

pub use analysis::{acceptance_trial, analyze_acceptance, detection_frequency, AcceptanceAnalysis, ErrorAcceptance};
pub use mpqc::{
    authenticate_message, mpqc_decode_accept, mpqc_encode, AuthOutcome, FlipPattern, MpqcOutcome,
    TestQubitLayout, Tampering,
};

use crate::density::DensityMatrix;
use crate::error::{Result, SimError};
use crate::gate::Gate;
use crate::pauli::{Pauli1, PauliOperator};
use crate::register::Register;
use crate::rng::SimRng;
use crate::scalar::Real;

/// `2n` key bits; bit `2i` selects `X` and bit `2i + 1` selects `Z` on qubit `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassicalPauliKey {
    bits: Vec<bool>,
}

impl ClassicalPauliKey {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.len() % 2 != 0 {
            return Err(SimError::LengthMismatch {
                expected: bits.len() + 1,
                found: bits.len(),
            });
        }
        Ok(Self { bits })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            bits: vec![false; 2 * n],
        }
    }

    pub fn random(n: usize, rng: &mut SimRng) -> Self {
        Self { bits: rng.bits(2 * n) }
    }

    /// Key number `code` in little-endian bit order.
    pub fn from_index(n: usize, code: usize) -> Self {
        Self {
            bits: (0..2 * n).map(|j| code >> j & 1 == 1).collect(),
        }
    }

    /// All `4^n` keys.
    pub fn all(n: usize) -> impl Iterator<Item = Self> {
        (0..1usize << (2 * n)).map(move |c| Self::from_index(n, c))
    }

    pub fn num_qubits(&self) -> usize {
        self.bits.len() / 2
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn x_bit(&self, q: usize) -> bool {
        self.bits[2 * q]
    }

    pub fn z_bit(&self, q: usize) -> bool {
        self.bits[2 * q + 1]
    }

    /// `U_K` as a Pauli, up to global phase.
    pub fn operator(&self) -> PauliOperator {
        let n = self.num_qubits();
        let mut p = PauliOperator::identity(n, 2);
        for q in 0..n {
            p.set_qubit(q, Pauli1::from_bits(self.x_bit(q), self.z_bit(q)));
        }
        p
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.bits.len() != 2 * n {
            return Err(SimError::LengthMismatch {
                expected: 2 * n,
                found: self.bits.len(),
            });
        }
        Ok(())
    }

    /// `U_K` gates on `qubits`: `X^x` first, then `Z^z`.
    pub fn gates(&self, qubits: &[usize]) -> Result<Vec<Gate>> {
        self.check(qubits.len())?;
        let mut out = Vec::new();
        for (i, &q) in qubits.iter().enumerate() {
            if self.x_bit(i) {
                out.push(Gate::X(q));
            }
            if self.z_bit(i) {
                out.push(Gate::Z(q));
            }
        }
        Ok(out)
    }
}

/// Apply `U_K` to `qubits` of `state`.
pub fn pqc_encrypt<R: Register>(state: &mut R, qubits: &[usize], key: &ClassicalPauliKey) -> Result<()> {
    for g in key.gates(qubits)? {
        state.apply_gate(&g)?;
    }
    Ok(())
}

/// Apply `U_K^dag` (`Z^z` first, then `X^x`).
pub fn pqc_decrypt<R: Register>(state: &mut R, qubits: &[usize], key: &ClassicalPauliKey) -> Result<()> {
    for g in key.gates(qubits)?.iter().rev() {
        state.apply_gate(g)?;
    }
    Ok(())
}

/// `U_K rho U_K^dag` on a density matrix.
pub fn pqc_encrypt_density<T: Real>(rho: &DensityMatrix<T>, key: &ClassicalPauliKey) -> Result<DensityMatrix<T>> {
    key.check(rho.num_qudits())?;
    rho.conjugate_pauli(&key.operator())
}

/// Exact average of the cipher-text over all `4^n` keys.
pub fn key_average<T: Real>(rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    let n = rho.num_qudits();
    let count = 1usize << (2 * n);
    let mut acc = DensityMatrix::zeros(n, 2);
    for key in ClassicalPauliKey::all(n) {
        acc.add_scaled(&pqc_encrypt_density(rho, &key)?, 1.0 / count as f64)?;
    }
    Ok(acc)
}

/// Wegman-Carter key lengths for authenticating the classical messages of the
/// test-qubit protocol: Alice's `(2nr + r^2)`-bit announcement and Bob's reply.
pub fn wegman_carter_key_size(n: u64, r: u64) -> Result<(u64, u64)> {
    if n == 0 || r == 0 {
        return Err(SimError::Precondition("n and r must be positive".into()));
    }
    let size = |m: f64| {
        let l = m.log2();
        (4.0 * (r as f64 + l.log2()) * l).ceil() as u64
    };
    let (n, rf) = (n as f64, r as f64);
    Ok((size(2.0 * n * rf + rf * rf), size(2.0 * rf + rf * rf)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::DenseState;

    #[test]
    fn zero_key_is_identity_and_round_trip() {
        let mut rng = SimRng::new(1);
        let psi = DenseState::<f64>::random(2, 2, &mut rng).unwrap();
        let mut s = psi.clone();
        pqc_encrypt(&mut s, &[0, 1], &ClassicalPauliKey::zeros(2)).unwrap();
        assert!(s.approx_eq(&psi));
        let k = ClassicalPauliKey::new(vec![true, true, false, true]).unwrap();
        pqc_encrypt(&mut s, &[0, 1], &k).unwrap();
        pqc_decrypt(&mut s, &[0, 1], &k).unwrap();
        assert!(s.approx_eq(&psi));
    }

    #[test]
    fn key_length_is_checked() {
        let mut s = DenseState::<f64>::zero(2, 2).unwrap();
        assert!(pqc_encrypt(&mut s, &[0, 1], &ClassicalPauliKey::zeros(1)).is_err());
        assert!(ClassicalPauliKey::new(vec![true]).is_err());
    }

    #[test]
    fn single_qubit_average_is_mixed() {
        let rho = DenseState::<f64>::zero(1, 2).unwrap().density();
        let avg = key_average(&rho).unwrap();
        let mixed = DensityMatrix::maximally_mixed(1, 2);
        assert!(avg.trace_distance(&mixed).unwrap() < 1e-12);
    }

    #[test]
    fn wegman_carter_examples() {
        let (a, _) = wegman_carter_key_size(1024, 32).unwrap();
        let m: f64 = 2.0 * 1024.0 * 32.0 + 32.0 * 32.0;
        assert_eq!(a, (4.0 * (32.0 + m.log2().log2()) * m.log2()).ceil() as u64);
        let mut last = (0, 0);
        for r in 1..20 {
            let v = wegman_carter_key_size(8, r).unwrap();
            assert!(v.0 >= last.0 && v.1 >= last.1);
            last = v;
        }
        assert!(wegman_carter_key_size(0, 1).is_err());
    }
}
