//! Recovering the message from the key halves alone after the cipher-text
//! is lost.

use super::Layout;
use crate::dense::DenseState;
use crate::error::{Result, SimError};
use crate::pauli::{Pauli1, PauliOperator};
use crate::rng::SimRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stage {
    Encoded,
    CipherLost,
    Done,
}

/// Dense simulation of the cipher for one or two message qubits.
#[derive(Debug, Clone)]
pub struct DenseVernam {
    layout: Layout,
    state: DenseState<f64>,
    message: DenseState<f64>,
    stage: Stage,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryOutcome {
    /// `(z, x)` flags per message qubit, read from the `+/-` measurements.
    pub branch: Vec<(bool, bool)>,
    /// Fidelity of the corrected message with the original.
    pub fidelity: f64,
}

impl DenseVernam {
    /// Message joined with fresh Phi+ pairs, then encoded.
    pub fn encode(message: &DenseState<f64>) -> Result<Self> {
        let n = message.num_qudits();
        let layout = Layout::new(n, 0);
        let mut key = DenseState::zero(4 * n, 2)?;
        let shifted = Layout::new(0, 2 * n);
        key.apply_all(&shifted.key_preparation())?;
        let mut state = message.tensor(&key)?;
        state.apply_all(&layout.encode_gates())?;
        Ok(Self {
            layout,
            state,
            message: message.clone(),
            stage: Stage::Encoded,
        })
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn joint(&self) -> &DenseState<f64> {
        &self.state
    }

    /// The cipher-text is thrown away and Bob substitutes `|0>`.
    pub fn discard_ciphertext(&mut self, rng: &mut SimRng) -> Result<()> {
        if self.stage != Stage::Encoded {
            return Err(SimError::Bookkeeping("cipher-text already gone".into()));
        }
        for q in self.layout.message_qubits() {
            // Measuring and forgetting the outcome is the partial trace.
            self.state.reset(q, rng)?;
        }
        self.stage = Stage::CipherLost;
        Ok(())
    }

    /// Decode, read each key pair in the `+/-` basis and undo the flagged
    /// Pauli on the message.
    pub fn recover(&mut self, rng: &mut SimRng) -> Result<RecoveryOutcome> {
        if self.stage != Stage::CipherLost {
            return Err(SimError::Precondition(
                "recovery requires the cipher-text to be discarded".into(),
            ));
        }
        let l = self.layout;
        self.state.apply_all(&l.decode_gates())?;
        let total = l.num_qubits();
        let mut branch = Vec::with_capacity(l.n);
        let mut correction = PauliOperator::identity(total, 2);
        for i in 0..l.n {
            let mut flags = [false; 2];
            for (f, pair) in flags.iter_mut().zip([2 * i, 2 * i + 1]) {
                let xa = PauliOperator::qubit(total, l.alice(pair), Pauli1::X);
                let xb = PauliOperator::qubit(total, l.bob(pair), Pauli1::X);
                let a = self.state.measure_pauli(&xa, rng)?;
                let b = self.state.measure_pauli(&xb, rng)?;
                *f = a != b;
            }
            let (z, x) = (flags[0], flags[1]);
            branch.push((z, x));
            let letter = Pauli1::from_bits(x, z);
            correction = &correction * &PauliOperator::qubit(total, i, letter);
        }
        self.state.apply_pauli(&correction)?;
        self.stage = Stage::Done;
        let reduced = self.state.reduced(&l.message_qubits());
        let fidelity = reduced.overlap_pure(self.message.amplitudes());
        Ok(RecoveryOutcome { branch, fidelity })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovery_requires_discarding_first() {
        let mut rng = SimRng::new(0);
        let msg = DenseState::zero(1, 2).unwrap();
        let mut v = DenseVernam::encode(&msg).unwrap();
        assert!(v.recover(&mut rng).is_err());
        v.discard_ciphertext(&mut rng).unwrap();
        let out = v.recover(&mut rng).unwrap();
        assert!((out.fidelity - 1.0).abs() < 1e-9);
    }
}
