use num_complex::Complex;
use serde::Serialize;

use super::ClassicalPauliKey;
use crate::channels::PauliChannel;
use crate::dense::DenseState;
use crate::error::{Result, SimError};
use crate::gate::Gate;
use crate::pauli::{Pauli1, PauliOperator};
use crate::register::Register;
use crate::rng::SimRng;
use crate::transcript::{Party, Transcript};

/// Test qubits, flip key and parity subsets for one transmission.
///
/// Register order: data `0..n`, x-tests `n..n+r`, z-tests `n+r..n+2r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestQubitLayout {
    n: usize,
    r: usize,
    flips: Vec<bool>,
    s_x: Vec<Vec<usize>>,
    s_z: Vec<Vec<usize>>,
    /// `t_x[i]` holds z-test numbers `0..r`.
    t_x: Vec<Vec<usize>>,
    used: bool,
}

/// Test outcomes that differ from the flip key, plus the data error left after decoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipPattern {
    pub x_flips: Vec<bool>,
    pub z_flips: Vec<bool>,
    pub residual: PauliOperator,
}

impl FlipPattern {
    pub fn accepted(&self) -> bool {
        !self.x_flips.iter().chain(&self.z_flips).any(|&f| f)
    }
}

fn parity(set: &[usize], bits: &[bool]) -> bool {
    set.iter().fold(false, |acc, &s| acc ^ bits[s])
}

impl TestQubitLayout {
    /// Fresh layout; every subset is uniform over all subsets, the empty one
    /// included, so a nontrivial error meets each one an odd number of times
    /// with probability exactly 1/2.
    pub fn random(n: usize, r: usize, rng: &mut SimRng) -> Self {
        assert!(n > 0 && r > 0, "layout needs data and test qubits");
        let flips = rng.bits(2 * r);
        let mut subset = |k: usize| -> Vec<usize> { (0..k).filter(|_| rng.bit()).collect() };
        let s_x = (0..r).map(|_| subset(n)).collect();
        let s_z = (0..r).map(|_| subset(n)).collect();
        let t_x = (0..r).map(|_| subset(r)).collect();
        Self {
            n,
            r,
            flips,
            s_x,
            s_z,
            t_x,
            used: false,
        }
    }

    pub fn from_parts(
        n: usize,
        flips: Vec<bool>,
        s_x: Vec<Vec<usize>>,
        s_z: Vec<Vec<usize>>,
        t_x: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let r = s_x.len();
        if flips.len() != 2 * r || s_z.len() != r || t_x.len() != r {
            return Err(SimError::LengthMismatch {
                expected: 2 * r,
                found: flips.len(),
            });
        }
        for s in s_x.iter().chain(&s_z) {
            if let Some(&q) = s.iter().find(|&&q| q >= n) {
                return Err(SimError::IndexOutOfRange { index: q, size: n });
            }
        }
        if let Some(&q) = t_x.iter().flatten().find(|&&q| q >= r) {
            return Err(SimError::IndexOutOfRange { index: q, size: r });
        }
        Ok(Self {
            n,
            r,
            flips,
            s_x,
            s_z,
            t_x,
            used: false,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn num_qubits(&self) -> usize {
        self.n + 2 * self.r
    }

    pub fn is_used(&self) -> bool {
        self.used
    }

    pub fn flips(&self) -> &[bool] {
        &self.flips
    }

    pub fn x_test(&self, i: usize) -> usize {
        self.n + i
    }

    pub fn z_test(&self, j: usize) -> usize {
        self.n + self.r + j
    }

    pub fn s_x(&self) -> &[Vec<usize>] {
        &self.s_x
    }

    pub fn s_z(&self) -> &[Vec<usize>] {
        &self.s_z
    }

    pub fn t_x(&self) -> &[Vec<usize>] {
        &self.t_x
    }

    pub fn data_qubits(&self) -> Vec<usize> {
        (0..self.n).collect()
    }

    /// Test preparation from `|0>`: x-tests `X^f`, z-tests `Z^f H`.
    pub fn preparation_gates(&self) -> Vec<Gate> {
        let mut out = Vec::new();
        for i in 0..self.r {
            if self.flips[i] {
                out.push(Gate::X(self.x_test(i)));
            }
        }
        for j in 0..self.r {
            out.push(Gate::H(self.z_test(j)));
            if self.flips[self.r + j] {
                out.push(Gate::Z(self.z_test(j)));
            }
        }
        out
    }

    /// Encoding CNOTs: the `S_x` layer, then `S_z`, then `T`.
    pub fn cnot_gates(&self) -> Vec<Gate> {
        let mut out = Vec::new();
        for (i, s) in self.s_x.iter().enumerate() {
            out.extend(s.iter().map(|&q| Gate::Cnot(q, self.x_test(i))));
        }
        for (i, s) in self.s_z.iter().enumerate() {
            out.extend(s.iter().map(|&q| Gate::Cnot(self.z_test(i), q)));
        }
        for (i, t) in self.t_x.iter().enumerate() {
            out.extend(t.iter().map(|&j| Gate::Cnot(self.z_test(j), self.x_test(i))));
        }
        out
    }

    /// Full encoder; `key = None` skips data encryption.
    pub fn encode_gates(&self, key: Option<&ClassicalPauliKey>) -> Result<Vec<Gate>> {
        let mut out = match key {
            Some(k) => k.gates(&self.data_qubits())?,
            None => Vec::new(),
        };
        out.extend(self.preparation_gates());
        out.extend(self.cnot_gates());
        Ok(out)
    }

    pub fn decode_gates(&self) -> Vec<Gate> {
        self.cnot_gates().into_iter().rev().collect()
    }

    /// Push a transit error through the decoding CNOTs as a Pauli frame.
    pub fn propagate(&self, error: &PauliOperator) -> Result<FlipPattern> {
        let m = self.num_qubits();
        if error.len() != m || error.dim() != 2 {
            return Err(SimError::LengthMismatch {
                expected: m,
                found: error.len(),
            });
        }
        let mut x: Vec<bool> = error.x_exp().iter().map(|&e| e == 1).collect();
        let mut z: Vec<bool> = error.z_exp().iter().map(|&e| e == 1).collect();
        for g in self.decode_gates() {
            if let Gate::Cnot(c, t) = g {
                x[t] ^= x[c];
                z[c] ^= z[t];
            }
        }
        let mut residual = PauliOperator::identity(self.n, 2);
        for q in 0..self.n {
            residual.set_qubit(q, Pauli1::from_bits(x[q], z[q]));
        }
        Ok(FlipPattern {
            x_flips: (0..self.r).map(|i| x[self.x_test(i)]).collect(),
            z_flips: (0..self.r).map(|j| z[self.z_test(j)]).collect(),
            residual,
        })
    }

    /// Closed-form test flips: a test flips when the error meets its subsets an
    /// odd number of times. X on z-test `j` also reaches the data qubits in
    /// `S_zj` before the `S_x` layer is undone, so those count as data X.
    pub fn odd_intersection_flips(&self, error: &PauliOperator) -> Result<FlipPattern> {
        let m = self.num_qubits();
        if error.len() != m || error.dim() != 2 {
            return Err(SimError::LengthMismatch {
                expected: m,
                found: error.len(),
            });
        }
        let xb = |q: usize| error.x_exp()[q] == 1;
        let zb = |q: usize| error.z_exp()[q] == 1;
        let (n, r) = (self.n, self.r);
        let mut x_data: Vec<bool> = (0..n).map(xb).collect();
        let z_data: Vec<bool> = (0..n).map(zb).collect();
        let x_z: Vec<bool> = (0..r).map(|j| xb(self.z_test(j))).collect();
        let z_x: Vec<bool> = (0..r).map(|i| zb(self.x_test(i))).collect();
        for j in 0..r {
            if x_z[j] {
                for &s in &self.s_z[j] {
                    x_data[s] ^= true;
                }
            }
        }
        let x_flips = (0..r)
            .map(|i| xb(self.x_test(i)) ^ parity(&self.s_x[i], &x_data) ^ parity(&self.t_x[i], &x_z))
            .collect();
        let z_flips = (0..r)
            .map(|j| {
                let via_t = (0..r).filter(|&i| self.t_x[i].contains(&j)).fold(false, |a, i| a ^ z_x[i]);
                zb(self.z_test(j)) ^ parity(&self.s_z[j], &z_data) ^ via_t
            })
            .collect();
        let mut z_res = z_data;
        for i in 0..r {
            if z_x[i] {
                for &s in &self.s_x[i] {
                    z_res[s] ^= true;
                }
            }
        }
        let mut residual = PauliOperator::identity(n, 2);
        for q in 0..n {
            residual.set_qubit(q, Pauli1::from_bits(x_data[q], z_res[q]));
        }
        Ok(FlipPattern {
            x_flips,
            z_flips,
            residual,
        })
    }

    /// Serialized subsets for the post-receipt announcement.
    pub fn announcement(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for family in [&self.s_x, &self.s_z, &self.t_x] {
            for s in family.iter() {
                out.push(s.len() as u8);
                out.extend(s.iter().map(|&q| q as u8));
            }
        }
        out
    }
}

/// Encrypt the data and attach the test qubits. `state` holds the data on
/// `0..n` and the test qubits in `|0>`.
pub fn mpqc_encode<R: Register>(
    state: &mut R,
    key: Option<&ClassicalPauliKey>,
    layout: &mut TestQubitLayout,
) -> Result<()> {
    if layout.used {
        return Err(SimError::Precondition("test-qubit layout reused".into()));
    }
    if state.num_qubits() != layout.num_qubits() {
        return Err(SimError::LengthMismatch {
            expected: layout.num_qubits(),
            found: state.num_qubits(),
        });
    }
    for g in layout.encode_gates(key)? {
        state.apply_gate(&g)?;
    }
    layout.used = true;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MpqcOutcome {
    pub accept: bool,
    pub keys_recyclable: bool,
    pub x_outcomes: Vec<bool>,
    pub z_outcomes: Vec<bool>,
}

/// Bob's side. The round's receipt and Alice's subset announcement must both
/// be on the transcript. On return the data qubits hold the decrypted message.
pub fn mpqc_decode_accept<R: Register>(
    state: &mut R,
    key: Option<&ClassicalPauliKey>,
    layout: &TestQubitLayout,
    transcript: &Transcript,
    round: u64,
    rng: &mut SimRng,
) -> Result<MpqcOutcome> {
    transcript.validate()?;
    if !transcript.receipt_acknowledged(round) {
        return Err(SimError::TranscriptOrder(format!("round {round} has no receipt")));
    }
    if transcript.announcements(round).next().is_none() {
        return Err(SimError::TranscriptOrder(format!("round {round} subsets not announced")));
    }
    for g in layout.decode_gates() {
        state.apply_gate(&g)?;
    }
    let r = layout.r;
    let mut x_outcomes = Vec::with_capacity(r);
    let mut z_outcomes = Vec::with_capacity(r);
    for i in 0..r {
        x_outcomes.push(state.measure_basis(layout.x_test(i), Pauli1::Z, rng)?);
    }
    for j in 0..r {
        z_outcomes.push(state.measure_basis(layout.z_test(j), Pauli1::X, rng)?);
    }
    let accept = x_outcomes == layout.flips[..r] && z_outcomes == layout.flips[r..];
    if let Some(k) = key {
        super::pqc_decrypt(state, &layout.data_qubits(), k)?;
    }
    Ok(MpqcOutcome {
        accept,
        keys_recyclable: accept,
        x_outcomes,
        z_outcomes,
    })
}

/// What happens to the cipher-text in transit.
#[derive(Debug, Clone)]
pub enum Tampering {
    None,
    Channel(PauliChannel),
    /// Eve discards the cipher-text and sends her own state instead.
    Replace(DenseState<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuthOutcome {
    pub accept: bool,
    /// Fidelity of Bob's data with the original message, when accepted.
    pub fidelity: Option<f64>,
}

/// Authentication without data encryption on the dense engine.
pub fn authenticate_message(
    psi: &DenseState<f64>,
    layout: &mut TestQubitLayout,
    tampering: &Tampering,
    rng: &mut SimRng,
) -> Result<AuthOutcome> {
    let n = layout.n;
    if psi.num_qudits() != n {
        return Err(SimError::LengthMismatch {
            expected: n,
            found: psi.num_qudits(),
        });
    }
    let mut state = psi.tensor(&DenseState::zero(2 * layout.r, 2)?)?;
    mpqc_encode(&mut state, None, layout)?;
    match tampering {
        Tampering::None => {}
        Tampering::Channel(ch) => {
            let all: Vec<usize> = (0..layout.num_qubits()).collect();
            let cipher = if ch.num_qubits() == n { &all[..n] } else { &all[..] };
            crate::channels::apply_pauli_channel(&mut state, ch, cipher, rng)?;
        }
        Tampering::Replace(eve) => {
            if eve.num_qudits() != layout.num_qubits() {
                return Err(SimError::LengthMismatch {
                    expected: layout.num_qubits(),
                    found: eve.num_qudits(),
                });
            }
            state = eve.clone();
        }
    }
    let mut transcript = Transcript::new();
    transcript.acknowledge_receipt(Party::Bob, 0);
    transcript.announce(Party::Alice, 0, layout.announcement())?;
    let out = mpqc_decode_accept(&mut state, None, layout, &transcript, 0, rng)?;
    let fidelity = if out.accept {
        let amps: Vec<Complex<f64>> = psi.amplitudes().to_vec();
        Some(state.reduced(&layout.data_qubits()).overlap_pure(&amps))
    } else {
        None
    };
    Ok(AuthOutcome {
        accept: out.accept,
        fidelity,
    })
}
