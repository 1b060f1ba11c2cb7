//! Operations shared by the two qubit engines.

use crate::dense::DenseState;
use crate::error::{Result, SimError};
use crate::gate::Gate;
use crate::pauli::{Pauli1, PauliOperator};
use crate::rng::SimRng;
use crate::scalar::Real;
use crate::tableau::StabilizerState;

pub trait Register {
    fn num_qubits(&self) -> usize;
    fn apply_gate(&mut self, gate: &Gate) -> Result<()>;
    /// Apply a Pauli up to global phase.
    fn apply_pauli_op(&mut self, p: &PauliOperator) -> Result<()>;
    /// Measure a Hermitian Pauli; `true` means eigenvalue -1.
    fn measure_observable(&mut self, p: &PauliOperator, rng: &mut SimRng) -> Result<bool>;

    fn measure_basis(&mut self, q: usize, letter: Pauli1, rng: &mut SimRng) -> Result<bool> {
        let n = self.num_qubits();
        if q >= n {
            return Err(SimError::IndexOutOfRange { index: q, size: n });
        }
        self.measure_observable(&PauliOperator::qubit(n, q, letter), rng)
    }
}

impl Register for StabilizerState {
    fn num_qubits(&self) -> usize {
        StabilizerState::num_qubits(self)
    }

    fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        self.apply(gate)
    }

    fn apply_pauli_op(&mut self, p: &PauliOperator) -> Result<()> {
        if p.len() != self.num_qubits() || p.dim() != 2 {
            return Err(SimError::LengthMismatch {
                expected: self.num_qubits(),
                found: p.len(),
            });
        }
        for q in p.support() {
            let (x, z) = (p.x_exp()[q] == 1, p.z_exp()[q] == 1);
            if z {
                self.apply(&Gate::Z(q))?;
            }
            if x {
                self.apply(&Gate::X(q))?;
            }
        }
        Ok(())
    }

    fn measure_observable(&mut self, p: &PauliOperator, rng: &mut SimRng) -> Result<bool> {
        self.measure_pauli(p, rng)
    }
}

impl<T: Real> Register for DenseState<T> {
    fn num_qubits(&self) -> usize {
        self.num_qudits()
    }

    fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        self.apply(gate)
    }

    fn apply_pauli_op(&mut self, p: &PauliOperator) -> Result<()> {
        self.apply_pauli(p)
    }

    fn measure_observable(&mut self, p: &PauliOperator, rng: &mut SimRng) -> Result<bool> {
        if self.dim() != 2 {
            return Err(SimError::DimensionMismatch {
                expected: 2,
                found: self.dim(),
            });
        }
        Ok(self.measure_pauli(p, rng)? == 1)
    }
}
