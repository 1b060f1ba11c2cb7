//! Reference protocols: one-time pad, the eavesdrop-detecting channel,
//! teleportation, superdense coding and two key-distribution schemes.

use serde::Serialize;

use crate::dense::DenseState;
use crate::density::DensityMatrix;
use crate::error::{Result, SimError};
use crate::gate::Gate;
use crate::pauli::Pauli1;
use crate::register::Register;
use crate::rng::SimRng;
use crate::tableau::StabilizerState;
use crate::transcript::{Party, Transcript};

fn same_len(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(SimError::LengthMismatch { expected: a, found: b });
    }
    Ok(())
}

/// `C = M xor K`; also decodes.
pub fn classical_otp(message: &[bool], key: &[bool]) -> Result<Vec<bool>> {
    same_len(message.len(), key.len())?;
    Ok(message.iter().zip(key).map(|(m, k)| m ^ k).collect())
}

/// A qubit known to be one of `|0>, |1>, |+>, |->`. Measuring it in the
/// other basis gives a uniform bit and leaves the matching eigenstate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConjugateQubit {
    pub x_basis: bool,
    pub bit: bool,
}

impl ConjugateQubit {
    pub fn measure(&mut self, x_basis: bool, rng: &mut SimRng) -> bool {
        if x_basis != self.x_basis {
            *self = Self {
                x_basis,
                bit: rng.bit(),
            };
        }
        self.bit
    }
}

/// Eve's intercept-resend on chosen positions, each in a random basis.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InterceptPositions {
    pub positions: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdcOutcome {
    pub accept: bool,
    pub decoded: Vec<bool>,
}

/// Eavesdrop-detecting channel: `M' = M || r subset parities of M`; each bit
/// of `K1 xor M'` goes out in the basis chosen by `K2`. Bob acknowledges
/// receipt before Alice announces the subsets.
pub fn edc_send(
    message: &[bool],
    k1: &[bool],
    k2: &[bool],
    r: usize,
    eve: &InterceptPositions,
    transcript: &mut Transcript,
    round: u64,
    rng: &mut SimRng,
) -> Result<EdcOutcome> {
    let n = message.len();
    same_len(n + r, k1.len())?;
    same_len(n + r, k2.len())?;
    if n == 0 {
        return Err(SimError::Precondition("empty message".into()));
    }
    let subsets: Vec<Vec<usize>> = (0..r).map(|_| rng.nonempty_subset(n)).collect();
    let mut full = message.to_vec();
    full.extend(subsets.iter().map(|s| s.iter().fold(false, |a, &i| a ^ message[i])));
    let mut wire: Vec<ConjugateQubit> = (0..n + r)
        .map(|i| ConjugateQubit {
            x_basis: k2[i],
            bit: full[i] ^ k1[i],
        })
        .collect();
    for &p in &eve.positions {
        if p >= n + r {
            return Err(SimError::IndexOutOfRange { index: p, size: n + r });
        }
        let basis = rng.bit();
        wire[p].measure(basis, rng);
    }
    transcript.acknowledge_receipt(Party::Bob, round);
    let payload = subsets.iter().flat_map(|s| s.iter().map(|&i| i as u8)).collect();
    transcript.announce(Party::Alice, round, payload)?;
    let received: Vec<bool> = (0..n + r).map(|i| wire[i].measure(k2[i], rng) ^ k1[i]).collect();
    let decoded = received[..n].to_vec();
    let accept = subsets
        .iter()
        .enumerate()
        .all(|(j, s)| s.iter().fold(false, |a, &i| a ^ decoded[i]) == received[n + j]);
    transcript.broadcast(Party::Bob, round, vec![accept as u8]);
    Ok(EdcOutcome { accept, decoded })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TeleportOutcome {
    pub k1: bool,
    pub k2: bool,
    pub fidelity: f64,
}

/// Qubit 0 holds `psi`, (1, 2) a fresh pair; Bob holds qubit 2.
fn teleport_prepare(psi: &DenseState<f64>) -> Result<DenseState<f64>> {
    if psi.num_qudits() != 1 || psi.dim() != 2 {
        return Err(SimError::DimensionMismatch {
            expected: 1,
            found: psi.num_qudits(),
        });
    }
    let mut s = psi.tensor(&DenseState::zero(2, 2)?)?;
    s.apply_all(&[Gate::H(1), Gate::Cnot(1, 2), Gate::Cnot(0, 1), Gate::H(0)])?;
    Ok(s)
}

pub fn teleport(psi: &DenseState<f64>, rng: &mut SimRng) -> Result<TeleportOutcome> {
    let mut s = teleport_prepare(psi)?;
    let k2 = s.measure_z(0, rng)? == 1;
    let k1 = s.measure_z(1, rng)? == 1;
    if k1 {
        s.apply(&Gate::X(2))?;
    }
    if k2 {
        s.apply(&Gate::Z(2))?;
    }
    let fidelity = s.reduced(&[2]).overlap_pure(psi.amplitudes());
    Ok(TeleportOutcome { k1, k2, fidelity })
}

/// Bob's qubit averaged over Alice's four outcomes, before correction.
pub fn teleport_uncorrected_average(psi: &DenseState<f64>) -> Result<DensityMatrix<f64>> {
    Ok(teleport_prepare(psi)?.reduced(&[2]))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuperdenseOutcome {
    pub decoded: (bool, bool),
    /// Reduced state of the transmitted qubit.
    #[serde(skip)]
    pub transmitted: DensityMatrix<f64>,
}

/// Alice applies `X^c1 Z^c2` to her half and sends it; Bob Bell-measures.
pub fn superdense(c1: bool, c2: bool, rng: &mut SimRng) -> Result<SuperdenseOutcome> {
    let mut s = DenseState::<f64>::zero(2, 2)?;
    s.apply_all(&[Gate::H(0), Gate::Cnot(0, 1)])?;
    if c2 {
        s.apply(&Gate::Z(0))?;
    }
    if c1 {
        s.apply(&Gate::X(0))?;
    }
    let transmitted = s.reduced(&[0]);
    s.apply_all(&[Gate::Cnot(0, 1), Gate::H(0)])?;
    let z = s.measure_z(0, rng)? == 1;
    let x = s.measure_z(1, rng)? == 1;
    Ok(SuperdenseOutcome {
        decoded: (x, z),
        transmitted,
    })
}

/// Both parties measure their halves of `count` fresh pairs in Z.
pub fn ebit_key_distribution(count: usize, rng: &mut SimRng) -> Result<(Vec<bool>, Vec<bool>)> {
    let mut alice = Vec::with_capacity(count);
    let mut bob = Vec::with_capacity(count);
    for _ in 0..count {
        let mut s = StabilizerState::new(2);
        s.apply_all(&[Gate::H(0), Gate::Cnot(0, 1)])?;
        alice.push(s.measure_basis(0, Pauli1::Z, rng)?);
        bob.push(s.measure_basis(1, Pauli1::Z, rng)?);
    }
    Ok((alice, bob))
}

/// Eve's behaviour in a BB84 round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bb84Eve {
    None,
    /// Intercept-resend each qubit independently with this probability, random basis.
    InterceptResend(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Bb84Outcome {
    /// Sifted untested bits; `None` on abort.
    pub key: Option<Vec<bool>>,
    pub sifted: usize,
    pub tested: usize,
    pub errors: usize,
    pub error_rate: f64,
    /// Harness-only: tested sifted positions that Eve touched.
    pub intercepted_tested: usize,
}

pub fn bb84_round(count: usize, eve: Bb84Eve, r_test: f64, transcript: &mut Transcript, rng: &mut SimRng) -> Result<Bb84Outcome> {
    if !(0.0..=1.0).contains(&r_test) {
        return Err(SimError::Precondition(format!("test fraction {r_test}")));
    }
    let bits = rng.bits(count);
    let bases = rng.bits(count);
    let mut touched = vec![false; count];
    let mut wire: Vec<ConjugateQubit> = (0..count)
        .map(|i| ConjugateQubit {
            x_basis: bases[i],
            bit: bits[i],
        })
        .collect();
    if let Bb84Eve::InterceptResend(p) = eve {
        for (i, q) in wire.iter_mut().enumerate() {
            if rng.unit() < p {
                touched[i] = true;
                let b = rng.bit();
                q.measure(b, rng);
            }
        }
    }
    let bob_bases = rng.bits(count);
    let bob_bits: Vec<bool> = wire.iter_mut().zip(&bob_bases).map(|(q, &b)| q.measure(b, rng)).collect();
    transcript.acknowledge_receipt(Party::Bob, 0);
    transcript.announce(Party::Alice, 0, bases.iter().map(|&b| b as u8).collect())?;
    transcript.broadcast(Party::Bob, 0, bob_bases.iter().map(|&b| b as u8).collect());
    let sifted: Vec<usize> = (0..count).filter(|&i| bases[i] == bob_bases[i]).collect();
    let mut tested = Vec::new();
    let mut kept = Vec::new();
    for &i in &sifted {
        if rng.unit() < r_test {
            tested.push(i);
        } else {
            kept.push(i);
        }
    }
    let errors = tested.iter().filter(|&&i| bits[i] != bob_bits[i]).count();
    let error_rate = if tested.is_empty() {
        0.0
    } else {
        errors as f64 / tested.len() as f64
    };
    let key = (errors == 0).then(|| kept.iter().map(|&i| bob_bits[i]).collect());
    Ok(Bb84Outcome {
        key,
        sifted: sifted.len(),
        tested: tested.len(),
        errors,
        error_rate,
        intercepted_tested: tested.iter().filter(|&&i| touched[i]).count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn otp_examples() {
        let m = vec![true, false, true, true];
        assert_eq!(classical_otp(&m, &m).unwrap(), vec![false; 4]);
        assert_eq!(classical_otp(&m, &[false; 4]).unwrap(), m);
        assert!(classical_otp(&m, &[true]).is_err());
    }

    #[test]
    fn conjugate_qubit_matches_tableau() {
        let mut rng = SimRng::new(31);
        for (prep_x, bit, meas_x) in [(false, true, false), (true, true, true), (false, false, true)] {
            let mut ones = [0usize; 2];
            for _ in 0..2000 {
                let mut q = ConjugateQubit { x_basis: prep_x, bit };
                ones[0] += q.measure(meas_x, &mut rng) as usize;
                let mut s = StabilizerState::new(1);
                if bit {
                    s.apply(&Gate::X(0)).unwrap();
                }
                if prep_x {
                    s.apply(&Gate::H(0)).unwrap();
                }
                let letter = if meas_x { Pauli1::X } else { Pauli1::Z };
                ones[1] += s.measure_basis(0, letter, &mut rng).unwrap() as usize;
            }
            assert!((ones[0] as f64 - ones[1] as f64).abs() < 200.0, "{ones:?}");
        }
    }

    #[test]
    fn edc_noiseless_accepts() {
        let mut rng = SimRng::new(32);
        let m = rng.bits(8);
        let (k1, k2) = (rng.bits(12), rng.bits(12));
        let mut t = Transcript::new();
        let out = edc_send(&m, &k1, &k2, 4, &InterceptPositions::default(), &mut t, 0, &mut rng).unwrap();
        assert!(out.accept);
        assert_eq!(out.decoded, m);
        t.validate().unwrap();
    }

    #[test]
    fn teleport_and_superdense_examples() {
        let mut rng = SimRng::new(33);
        let zero = DenseState::<f64>::zero(1, 2).unwrap();
        for _ in 0..8 {
            assert!((teleport(&zero, &mut rng).unwrap().fidelity - 1.0).abs() < 1e-9);
        }
        for c in 0..4 {
            let (c1, c2) = (c & 1 == 1, c & 2 == 2);
            let out = superdense(c1, c2, &mut rng).unwrap();
            assert_eq!(out.decoded, (c1, c2));
            let mixed = DensityMatrix::maximally_mixed(1, 2);
            assert!(out.transmitted.trace_distance(&mixed).unwrap() < 1e-12);
        }
    }

    #[test]
    fn ebit_keys_agree() {
        let mut rng = SimRng::new(34);
        let (a, b) = ebit_key_distribution(1, &mut rng).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bb84_noiseless_has_no_errors() {
        let mut rng = SimRng::new(35);
        let mut t = Transcript::new();
        let out = bb84_round(1000, Bb84Eve::None, 0.2, &mut t, &mut rng).unwrap();
        assert_eq!(out.errors, 0);
        assert!(out.key.is_some());
        assert!(out.sifted > 400 && out.sifted < 600);
    }
}
