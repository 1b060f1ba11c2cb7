//! Two realizations of the key register: a full stabilizer tableau and a
//! Bell-label frame that is exact for Pauli channels.

use super::Layout;
use crate::channels::{apply_pauli_channel, PauliChannel};
use crate::error::{Result, SimError};
use crate::gate::Gate;
use crate::pauli::{BellLabel, Pauli1, PauliOperator};
use crate::register::Register;
use crate::rng::SimRng;
use crate::tableau::StabilizerState;

/// Shared Bell pairs as seen by Alice and Bob.
pub trait BellPairs {
    fn num_pairs(&self) -> usize;
    fn is_consumed(&self, pair: usize) -> bool;
    /// Bilateral XOR: CNOTs on both halves from `control` to `target`.
    fn bxor(&mut self, control: usize, target: usize) -> Result<()>;
    /// Both parties measure X on their halves; returns `(alice, bob)`.
    /// Their XOR is the pair's phase bit. The pair is consumed.
    fn measure_pm(&mut self, pair: usize, rng: &mut SimRng) -> Result<(bool, bool)>;
    /// Both parties measure Z; the XOR is the bit-flip bit. Consumes the pair.
    fn measure_zz(&mut self, pair: usize, rng: &mut SimRng) -> Result<(bool, bool)>;
    /// Bob applies a Pauli to his half.
    fn correct_bob(&mut self, pair: usize, letter: Pauli1) -> Result<()>;
    /// Ground truth for the harness.
    fn label(&self, pair: usize) -> Result<BellLabel>;

    fn check_live(&self, pair: usize) -> Result<()> {
        if pair >= self.num_pairs() {
            return Err(SimError::IndexOutOfRange {
                index: pair,
                size: self.num_pairs(),
            });
        }
        if self.is_consumed(pair) {
            return Err(SimError::ConsumedAncilla(pair));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Fresh,
    Encoded,
    Decoded,
}

/// Cipher round driver used by the recycling procedure.
pub trait QvcBackend: BellPairs {
    fn layout(&self) -> Layout;
    fn encode(&mut self) -> Result<()>;
    /// Send the cipher-text through `channel`; returns the sampled error.
    fn transmit(&mut self, channel: &PauliChannel, rng: &mut SimRng) -> Result<PauliOperator>;
    fn decode(&mut self) -> Result<()>;
    fn correct_message(&mut self, p: &PauliOperator) -> Result<()>;
    /// Whether the decoded message equals the original exactly.
    fn message_intact(&self) -> Result<bool>;
}

/// Tableau-backed register holding message, key and ancilla pairs.
#[derive(Debug, Clone)]
pub struct QvcRegister {
    layout: Layout,
    state: StabilizerState,
    consumed: Vec<bool>,
    phase: Phase,
    reference: Vec<PauliOperator>,
}

impl QvcRegister {
    /// Fresh key and ancilla pairs with the message prepared from `|0...0>`
    /// by `message_circuit` (gates on qubits `0..n`).
    pub fn new(n: usize, pool: usize, message_circuit: &[Gate]) -> Result<Self> {
        let layout = Layout::new(n, pool);
        let mut msg = StabilizerState::new(n);
        msg.apply_all(message_circuit)?;
        let total = layout.num_qubits();
        let positions: Vec<usize> = (0..n).collect();
        let reference = msg
            .stabilizers()
            .iter()
            .map(|s| s.embed(total, &positions))
            .collect();
        let mut state = StabilizerState::new(total);
        state.apply_all(message_circuit)?;
        state.apply_all(&layout.key_preparation())?;
        Ok(Self {
            layout,
            state,
            consumed: vec![false; layout.total_pairs()],
            phase: Phase::Fresh,
            reference,
        })
    }

    pub fn state(&self) -> &StabilizerState {
        &self.state
    }

    pub fn state_mut(&mut self) -> &mut StabilizerState {
        &mut self.state
    }
}

impl BellPairs for QvcRegister {
    fn num_pairs(&self) -> usize {
        self.layout.total_pairs()
    }

    fn is_consumed(&self, pair: usize) -> bool {
        self.consumed[pair]
    }

    fn bxor(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_live(control)?;
        self.check_live(target)?;
        let l = self.layout;
        self.state.apply(&Gate::Cnot(l.alice(control), l.alice(target)))?;
        self.state.apply(&Gate::Cnot(l.bob(control), l.bob(target)))
    }

    fn measure_pm(&mut self, pair: usize, rng: &mut SimRng) -> Result<(bool, bool)> {
        self.check_live(pair)?;
        self.consumed[pair] = true;
        let (a, b) = (self.layout.alice(pair), self.layout.bob(pair));
        Ok((self.state.measure_x(a, rng)?, self.state.measure_x(b, rng)?))
    }

    fn measure_zz(&mut self, pair: usize, rng: &mut SimRng) -> Result<(bool, bool)> {
        self.check_live(pair)?;
        self.consumed[pair] = true;
        let (a, b) = (self.layout.alice(pair), self.layout.bob(pair));
        Ok((self.state.measure_z(a, rng)?, self.state.measure_z(b, rng)?))
    }

    fn correct_bob(&mut self, pair: usize, letter: Pauli1) -> Result<()> {
        self.check_live(pair)?;
        let q = self.layout.bob(pair);
        let p = PauliOperator::qubit(self.layout.num_qubits(), q, letter);
        self.state.apply_pauli_op(&p)
    }

    fn label(&self, pair: usize) -> Result<BellLabel> {
        self.check_live(pair)?;
        self.state.bell_identify(self.layout.alice(pair), self.layout.bob(pair))
    }
}

impl QvcBackend for QvcRegister {
    fn layout(&self) -> Layout {
        self.layout
    }

    fn encode(&mut self) -> Result<()> {
        if self.phase != Phase::Fresh || self.consumed.iter().any(|&c| c) {
            return Err(SimError::StaleKey("key register already used".into()));
        }
        self.state.apply_all(&self.layout.encode_gates())?;
        self.phase = Phase::Encoded;
        Ok(())
    }

    fn transmit(&mut self, channel: &PauliChannel, rng: &mut SimRng) -> Result<PauliOperator> {
        if self.phase != Phase::Encoded {
            return Err(SimError::Bookkeeping("transmit before encode".into()));
        }
        apply_pauli_channel(&mut self.state, channel, &self.layout.message_qubits(), rng)
    }

    fn decode(&mut self) -> Result<()> {
        if self.phase != Phase::Encoded {
            return Err(SimError::Bookkeeping("decode without a cipher-text".into()));
        }
        self.state.apply_all(&self.layout.decode_gates())?;
        self.phase = Phase::Decoded;
        Ok(())
    }

    fn correct_message(&mut self, p: &PauliOperator) -> Result<()> {
        let total = self.layout.num_qubits();
        self.state
            .apply_pauli_op(&p.embed(total, &self.layout.message_qubits()))
    }

    fn message_intact(&self) -> Result<bool> {
        for g in &self.reference {
            if self.state.peek(g)? != Some(false) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Bell-label bookkeeping: each pair is a `(z, x)` label and the message
/// carries a Pauli frame. Exact whenever every pair stays Bell-diagonal,
/// which holds for Pauli channels and the BXOR/measurement operations.
#[derive(Debug, Clone)]
pub struct QvcFrame {
    layout: Layout,
    labels: Vec<(bool, bool)>,
    consumed: Vec<bool>,
    phase: Phase,
    /// Pending `(x, z)` error on each message qubit.
    message: Vec<(bool, bool)>,
}

impl QvcFrame {
    pub fn new(n: usize, pool: usize) -> Self {
        let layout = Layout::new(n, pool);
        Self {
            layout,
            labels: vec![(false, false); layout.total_pairs()],
            consumed: vec![false; layout.total_pairs()],
            phase: Phase::Fresh,
            message: vec![(false, false); n],
        }
    }

    /// Frame with prescribed key labels, already decoded (for pair-level tests).
    pub fn with_labels(labels: &[BellLabel], pool: usize) -> Self {
        let n = labels.len().div_ceil(2);
        let mut f = Self::new(n, pool);
        for (k, l) in labels.iter().enumerate() {
            f.labels[k] = (l.z_bit(), l.x_bit());
        }
        if labels.len() % 2 == 1 {
            f.consumed[labels.len()] = true;
        }
        f.phase = Phase::Decoded;
        f
    }
}

impl BellPairs for QvcFrame {
    fn num_pairs(&self) -> usize {
        self.labels.len()
    }

    fn is_consumed(&self, pair: usize) -> bool {
        self.consumed[pair]
    }

    fn bxor(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_live(control)?;
        self.check_live(target)?;
        let (zc, xc) = self.labels[control];
        let (zt, xt) = self.labels[target];
        self.labels[target] = (zt, xt ^ xc);
        self.labels[control] = (zc ^ zt, xc);
        Ok(())
    }

    fn measure_pm(&mut self, pair: usize, rng: &mut SimRng) -> Result<(bool, bool)> {
        self.check_live(pair)?;
        self.consumed[pair] = true;
        let a = rng.bit();
        Ok((a, a ^ self.labels[pair].0))
    }

    fn measure_zz(&mut self, pair: usize, rng: &mut SimRng) -> Result<(bool, bool)> {
        self.check_live(pair)?;
        self.consumed[pair] = true;
        let a = rng.bit();
        Ok((a, a ^ self.labels[pair].1))
    }

    fn correct_bob(&mut self, pair: usize, letter: Pauli1) -> Result<()> {
        self.check_live(pair)?;
        let (x, z) = letter.bits();
        let l = &mut self.labels[pair];
        l.0 ^= z;
        l.1 ^= x;
        Ok(())
    }

    fn label(&self, pair: usize) -> Result<BellLabel> {
        self.check_live(pair)?;
        let (z, x) = self.labels[pair];
        Ok(BellLabel::from_bits(z, x))
    }
}

impl QvcBackend for QvcFrame {
    fn layout(&self) -> Layout {
        self.layout
    }

    fn encode(&mut self) -> Result<()> {
        if self.phase != Phase::Fresh || self.consumed.iter().any(|&c| c) {
            return Err(SimError::StaleKey("key register already used".into()));
        }
        self.phase = Phase::Encoded;
        Ok(())
    }

    fn transmit(&mut self, channel: &PauliChannel, rng: &mut SimRng) -> Result<PauliOperator> {
        if self.phase != Phase::Encoded {
            return Err(SimError::Bookkeeping("transmit before encode".into()));
        }
        if channel.num_qubits() != self.layout.n {
            return Err(SimError::LengthMismatch {
                expected: self.layout.n,
                found: channel.num_qubits(),
            });
        }
        let e = channel.sample(rng);
        for i in 0..self.layout.n {
            let (x, z) = (e.x_exp()[i] == 1, e.z_exp()[i] == 1);
            self.message[i].0 ^= x;
            self.message[i].1 ^= z;
        }
        Ok(e)
    }

    fn decode(&mut self) -> Result<()> {
        if self.phase != Phase::Encoded {
            return Err(SimError::Bookkeeping("decode without a cipher-text".into()));
        }
        // Errors accumulated in transit surface on the key pairs.
        for i in 0..self.layout.n {
            let (x, z) = self.message[i];
            self.labels[2 * i].0 ^= z;
            self.labels[2 * i + 1].0 ^= x;
        }
        self.phase = Phase::Decoded;
        Ok(())
    }

    fn correct_message(&mut self, p: &PauliOperator) -> Result<()> {
        for i in 0..self.layout.n {
            self.message[i].0 ^= p.x_exp()[i] == 1;
            self.message[i].1 ^= p.z_exp()[i] == 1;
        }
        Ok(())
    }

    fn message_intact(&self) -> Result<bool> {
        Ok(self.message.iter().all(|&(x, z)| !x && !z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_register_is_all_phi_plus() {
        let reg = QvcRegister::new(3, 2, &[Gate::H(0), Gate::Cnot(0, 2)]).unwrap();
        for k in 0..reg.num_pairs() {
            assert_eq!(reg.label(k).unwrap(), BellLabel::PhiPlus);
        }
        assert!(reg.message_intact().unwrap());
    }

    #[test]
    fn stale_key_and_order_errors() {
        let mut reg = QvcRegister::new(1, 0, &[]).unwrap();
        assert!(reg.decode().is_err());
        reg.encode().unwrap();
        assert!(matches!(reg.encode(), Err(SimError::StaleKey(_))));
        let mut f = QvcFrame::new(1, 1);
        let mut rng = SimRng::new(0);
        f.measure_pm(2, &mut rng).unwrap();
        assert!(matches!(f.encode(), Err(SimError::StaleKey(_))));
        assert!(matches!(f.measure_pm(2, &mut rng), Err(SimError::ConsumedAncilla(2))));
    }

    #[test]
    fn bxor_table_on_both_backends() {
        // (control, target) -> (control, target) with the labels as (z, x)
        let cases = [
            (BellLabel::PhiPlus, BellLabel::PhiPlus, BellLabel::PhiPlus, BellLabel::PhiPlus),
            (BellLabel::PhiMinus, BellLabel::PhiPlus, BellLabel::PhiMinus, BellLabel::PhiPlus),
            (BellLabel::PhiPlus, BellLabel::PhiMinus, BellLabel::PhiMinus, BellLabel::PhiMinus),
            (BellLabel::PhiMinus, BellLabel::PhiMinus, BellLabel::PhiPlus, BellLabel::PhiMinus),
            (BellLabel::PsiPlus, BellLabel::PhiPlus, BellLabel::PsiPlus, BellLabel::PsiPlus),
        ];
        for (c, t, c2, t2) in cases {
            let mut reg = QvcRegister::new(1, 0, &[]).unwrap();
            reg.correct_bob(0, c.pauli_from_phi_plus()).unwrap();
            reg.correct_bob(1, t.pauli_from_phi_plus()).unwrap();
            reg.bxor(0, 1).unwrap();
            assert_eq!((reg.label(0).unwrap(), reg.label(1).unwrap()), (c2, t2));
            let mut f = QvcFrame::with_labels(&[c, t], 0);
            f.bxor(0, 1).unwrap();
            assert_eq!((f.label(0).unwrap(), f.label(1).unwrap()), (c2, t2));
        }
    }
}
