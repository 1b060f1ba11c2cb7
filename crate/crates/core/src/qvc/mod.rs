//! Entanglement-keyed Vernam cipher, syndrome bookkeeping and key recycling.
//!
//! Register layout for `n` message qubits: message qubit `i` at index `i`;
//! key pair `k` has Alice's half at `n + 2k` and Bob's at `n + 2k + 1`. Pair
//! `2i` feeds the CNOT on message qubit `i` and flags Z errors, pair `2i + 1`
//! feeds the CZ and flags X errors. Ancilla pairs follow the key.

mod backend;
pub mod gf2;
mod recovery;
mod recycle;

pub use backend::{BellPairs, QvcBackend, QvcFrame, QvcRegister};
pub use recovery::{DenseVernam, RecoveryOutcome};
pub use recycle::{
    chebyshev_sample_size, estimate_weight, hash_budget, hash_identify, preliminary_test, recycle_round,
    subset_parity, HashOutcome, PrelimResult, RecycleParams, RecycleReport, RoundOutcome, Stage,
};

use serde::{Serialize, Serializer};

use crate::error::{Result, SimError};
use crate::gate::Gate;
use crate::pauli::PauliOperator;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub n: usize,
    /// Extra pairs after the key.
    pub pool: usize,
}

impl Layout {
    pub fn new(n: usize, pool: usize) -> Self {
        Self { n, pool }
    }

    pub fn key_pairs(&self) -> usize {
        2 * self.n
    }

    pub fn total_pairs(&self) -> usize {
        2 * self.n + self.pool
    }

    pub fn num_qubits(&self) -> usize {
        self.n + 2 * self.total_pairs()
    }

    pub fn alice(&self, pair: usize) -> usize {
        self.n + 2 * pair
    }

    pub fn bob(&self, pair: usize) -> usize {
        self.n + 2 * pair + 1
    }

    /// Index of the `j`-th ancilla pair.
    pub fn ancilla(&self, j: usize) -> usize {
        2 * self.n + j
    }

    /// Gates turning `|0...0>` on every pair into `|Phi+>`.
    pub fn key_preparation(&self) -> Vec<Gate> {
        (0..self.total_pairs())
            .flat_map(|k| [Gate::H(self.alice(k)), Gate::Cnot(self.alice(k), self.bob(k))])
            .collect()
    }

    /// Alice: CNOT from `a1`, then CZ from `a2`, on each message qubit.
    pub fn encode_gates(&self) -> Vec<Gate> {
        (0..self.n)
            .flat_map(|i| [Gate::Cnot(self.alice(2 * i), i), Gate::Cz(self.alice(2 * i + 1), i)])
            .collect()
    }

    /// Bob: CZ from `b2`, then CNOT from `b1`.
    pub fn decode_gates(&self) -> Vec<Gate> {
        (0..self.n)
            .flat_map(|i| [Gate::Cz(self.bob(2 * i + 1), i), Gate::Cnot(self.bob(2 * i), i)])
            .collect()
    }

    pub fn message_qubits(&self) -> Vec<usize> {
        (0..self.n).collect()
    }

    pub fn key_qubits(&self) -> Vec<usize> {
        (self.n..self.n + 4 * self.n).collect()
    }
}

/// The `2n` Phi+/Phi- flags of the key pairs. Bit `2i` flags a Z error on
/// message qubit `i`, bit `2i + 1` an X error.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SyndromeVector {
    bits: Vec<bool>,
}

impl SyndromeVector {
    pub fn zeros(n: usize) -> Self {
        Self {
            bits: vec![false; 2 * n],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Result<Self> {
        if bits.len() % 2 != 0 {
            return Err(SimError::LengthMismatch {
                expected: bits.len() + 1,
                found: bits.len(),
            });
        }
        Ok(Self { bits })
    }

    /// Syndrome predicted for a Pauli error on the cipher-text.
    pub fn from_error(p: &PauliOperator) -> Self {
        let mut bits = Vec::with_capacity(2 * p.len());
        for i in 0..p.len() {
            bits.push(p.z_exp()[i] != 0);
            bits.push(p.x_exp()[i] != 0);
        }
        Self { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_zero(&self) -> bool {
        self.weight() == 0
    }

    /// Pauli correction for the decoded message.
    pub fn correction(&self) -> PauliOperator {
        let n = self.bits.len() / 2;
        let mut x = vec![0u8; n];
        let mut z = vec![0u8; n];
        for i in 0..n {
            z[i] = self.bits[2 * i] as u8;
            x[i] = self.bits[2 * i + 1] as u8;
        }
        PauliOperator::new(2, x, z, 0).expect("qubit exponents").unsigned()
    }

    /// Bit `j` goes to byte `j / 8`, bit position `j % 8`.
    pub fn to_hex(&self) -> String {
        let mut bytes = vec![0u8; self.bits.len().div_ceil(8)];
        for (j, &b) in self.bits.iter().enumerate() {
            if b {
                bytes[j / 8] |= 1 << (j % 8);
            }
        }
        bytes.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl Serialize for SyndromeVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syndrome_bit_order_and_hex() {
        let p = PauliOperator::parse_qubits("IXZY").unwrap();
        let v = SyndromeVector::from_error(&p);
        assert_eq!(
            v.bits(),
            &[false, false, false, true, true, false, true, true]
        );
        assert_eq!(v.to_hex(), "d8");
        assert_eq!(v.correction(), p);
    }

    #[test]
    fn layout_indices() {
        let l = Layout::new(2, 1);
        assert_eq!(l.num_qubits(), 2 + 2 * 5);
        assert_eq!((l.alice(0), l.bob(0)), (2, 3));
        assert_eq!(l.bob(l.ancilla(0)), 11);
        assert_eq!(
            l.encode_gates(),
            vec![Gate::Cnot(2, 0), Gate::Cz(4, 0), Gate::Cnot(6, 1), Gate::Cz(8, 1)]
        );
        assert_eq!(
            l.decode_gates(),
            vec![Gate::Cz(5, 0), Gate::Cnot(3, 0), Gate::Cz(9, 1), Gate::Cnot(7, 1)]
        );
    }
}
