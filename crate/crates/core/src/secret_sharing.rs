//! (2,3) threshold ciphers: the five-qubit-code cipher, whose syndrome is
//! readable with local measurements, and the qutrit cipher, whose syndrome is not.
//!
//! Five-qubit register: 0 = message / transmitted share E, 1-2 = Alice's
//! share A, 3-4 = Bob's share B; pairs are (1,3) and (2,4).
//! Qutrit register: 0 = message / E, 1 = A, 2 = B.

use std::sync::OnceLock;

use num_complex::Complex;
use serde::Serialize;

use crate::dense::DenseState;
use crate::error::{Result, SimError};
use crate::gate::{Circuit, Gate};
use crate::pauli::{BellLabel, Pauli1, PauliOperator};
use crate::register::Register;
use crate::rng::SimRng;
use crate::transcript::{Party, Transcript};

const FIVEBIT_ENCODE: &str = include_str!("../circuits/fivebit_encode.circ");
const FIVEBIT_DECODE: &str = include_str!("../circuits/fivebit_decode.circ");
const QUTRIT_ENCODE: &str = include_str!("../circuits/qutrit_encode.circ");
const QUTRIT_DECODE: &str = include_str!("../circuits/qutrit_decode.circ");

type C = Complex<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Fivebit,
    Qutrit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShareAssignment {
    pub scheme: Scheme,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub e: Vec<usize>,
}

impl ShareAssignment {
    pub fn fivebit() -> Self {
        Self {
            scheme: Scheme::Fivebit,
            a: vec![1, 2],
            b: vec![3, 4],
            e: vec![0],
        }
    }

    pub fn qutrit() -> Self {
        Self {
            scheme: Scheme::Qutrit,
            a: vec![1],
            b: vec![2],
            e: vec![0],
        }
    }

    pub fn num_qudits(&self) -> usize {
        self.a.len() + self.b.len() + self.e.len()
    }
}

/// Post-decode state of the key shares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SyndromePairState {
    Fivebit([BellLabel; 2]),
    /// Index `s + 3t` of the entangled state produced by error `X^s Z^t`.
    Qutrit(usize),
}

fn load(text: &str, map: &[usize]) -> Circuit {
    text.parse::<Circuit>().expect("bundled circuit parses").remap(map)
}

/// Encoder on global indices (acts on 0, 1, 2).
pub fn fivebit_encoder() -> &'static Circuit {
    static C: OnceLock<Circuit> = OnceLock::new();
    C.get_or_init(|| load(FIVEBIT_ENCODE, &[0, 1, 2]))
}

/// Decoder on global indices (acts on 0, 3, 4).
pub fn fivebit_decoder() -> &'static Circuit {
    static C: OnceLock<Circuit> = OnceLock::new();
    C.get_or_init(|| load(FIVEBIT_DECODE, &[0, 3, 4]))
}

pub fn qutrit_encoder() -> &'static Circuit {
    static C: OnceLock<Circuit> = OnceLock::new();
    C.get_or_init(|| load(QUTRIT_ENCODE, &[0, 1]))
}

pub fn qutrit_decoder() -> &'static Circuit {
    static C: OnceLock<Circuit> = OnceLock::new();
    C.get_or_init(|| load(QUTRIT_DECODE, &[0, 2]))
}

/// Gates preparing `|Phi+>` on (1,3) and (2,4) from `|0>`.
pub fn fivebit_pair_preparation() -> Vec<Gate> {
    vec![Gate::H(1), Gate::Cnot(1, 3), Gate::H(2), Gate::Cnot(2, 4)]
}

/// Message on qubit 0 followed by two fresh pairs.
pub fn fivebit_initial(psi: &DenseState<f64>) -> Result<DenseState<f64>> {
    if psi.num_qudits() != 1 || psi.dim() != 2 {
        return Err(SimError::DimensionMismatch {
            expected: 1,
            found: psi.num_qudits(),
        });
    }
    let mut s = psi.tensor(&DenseState::zero(4, 2)?)?;
    s.apply_all(&fivebit_pair_preparation())?;
    Ok(s)
}

fn run<R: Register>(state: &mut R, circuit: &Circuit, width: usize) -> Result<()> {
    if state.num_qubits() != width {
        return Err(SimError::LengthMismatch {
            expected: width,
            found: state.num_qubits(),
        });
    }
    for g in &circuit.gates {
        state.apply_gate(g)?;
    }
    Ok(())
}

/// Alice's local encoding of qubits 0, 1, 2.
pub fn fivebit_encode<R: Register>(state: &mut R) -> Result<()> {
    run(state, fivebit_encoder(), 5)
}

/// Bob's local decoding of qubits 0, 3, 4.
pub fn fivebit_decode<R: Register>(state: &mut R) -> Result<()> {
    run(state, fivebit_decoder(), 5)
}

/// Bell label of a pair on the dense engine; errors unless the pair is in a
/// definite Bell state.
pub fn dense_bell_label(state: &DenseState<f64>, a: usize, b: usize) -> Result<BellLabel> {
    let n = state.num_qudits();
    let mut xx = PauliOperator::identity(n, 2);
    xx.set_qubit(a, Pauli1::X);
    xx.set_qubit(b, Pauli1::X);
    let mut zz = PauliOperator::identity(n, 2);
    zz.set_qubit(a, Pauli1::Z);
    zz.set_qubit(b, Pauli1::Z);
    let bit = |v: f64| {
        if (v - 1.0).abs() < 1e-9 {
            Some(false)
        } else if (v + 1.0).abs() < 1e-9 {
            Some(true)
        } else {
            None
        }
    };
    match (bit(state.expectation(&xx)?.re), bit(state.expectation(&zz)?.re)) {
        (Some(z), Some(x)) => Ok(BellLabel::from_bits(z, x)),
        _ => Err(SimError::NotBellPair(a, b)),
    }
}

/// Harness view of the two pairs after decoding; errors on mixed patterns.
pub fn fivebit_pair_labels(state: &DenseState<f64>) -> Result<SyndromePairState> {
    let l1 = dense_bell_label(state, 1, 3)?;
    let l2 = dense_bell_label(state, 2, 4)?;
    if l1 != l2 {
        return Err(SimError::Precondition(format!("mixed pattern {l1}{l2}")));
    }
    Ok(SyndromePairState::Fivebit([l1, l2]))
}

/// Error class on E implied by a pair label.
pub fn fivebit_error_for_label(label: BellLabel) -> Pauli1 {
    label.pauli_from_phi_plus()
}

/// Syndrome readout with local measurements and broadcast only: Z on both
/// halves of pair (1,3) gives the Phi/Psi bit, X on both halves of (2,4) the
/// sign bit. Consumes both pairs.
pub fn fivebit_locc_syndrome<R: Register>(
    state: &mut R,
    transcript: &mut Transcript,
    round: u64,
    rng: &mut SimRng,
) -> Result<Pauli1> {
    let a1 = state.measure_basis(1, Pauli1::Z, rng)?;
    let a2 = state.measure_basis(2, Pauli1::X, rng)?;
    transcript.broadcast(Party::Alice, round, vec![a1 as u8, a2 as u8]);
    let b1 = state.measure_basis(3, Pauli1::Z, rng)?;
    let b2 = state.measure_basis(4, Pauli1::X, rng)?;
    transcript.broadcast(Party::Bob, round, vec![b1 as u8, b2 as u8]);
    Ok(fivebit_error_for_label(BellLabel::from_bits(a2 ^ b2, a1 ^ b1)))
}

/// Dense matrix of a qubit circuit, column `j` = image of basis state `j`.
pub fn circuit_unitary(circuit: &Circuit, n: usize) -> Result<Vec<Vec<C>>> {
    (0..1usize << n)
        .map(|j| {
            let mut s = DenseState::<f64>::basis(n, 2, j)?;
            s.apply_all(&circuit.gates)?;
            Ok(s.amplitudes().to_vec())
        })
        .collect()
}

/// Express `M` (given by columns) as `c * P` for a Pauli `P`, if possible.
pub fn pauli_decompose(cols: &[Vec<C>], n: usize) -> Result<Option<(PauliOperator, C)>> {
    let dim = 1usize << n;
    for code in 0..1usize << (2 * n) {
        let mut p = PauliOperator::identity(n, 2);
        for q in 0..n {
            p.set_qubit(q, Pauli1::ALL[(code >> (2 * q)) & 3]);
        }
        // tr(P^dag M) / dim
        let mut acc = C::new(0.0, 0.0);
        for (j, col) in cols.iter().enumerate() {
            let mut b = DenseState::<f64>::basis(n, 2, j)?;
            b.apply_pauli(&p)?;
            for (x, y) in b.amplitudes().iter().zip(col) {
                acc += x.conj() * y;
            }
        }
        let c = acc / dim as f64;
        if (c.norm() - 1.0).abs() < 1e-9 {
            return Ok(Some((p, c)));
        }
        if c.norm() > 1e-9 {
            return Ok(None);
        }
    }
    Ok(None)
}

/// `U P U^dag` for every single-qubit X and Z; `None` if some image is not a Pauli.
pub fn clifford_images(circuit: &Circuit, n: usize) -> Result<Option<Vec<PauliOperator>>> {
    let inv = circuit.inverse();
    let mut out = Vec::new();
    for q in 0..n {
        for letter in [Pauli1::X, Pauli1::Z] {
            let p = PauliOperator::qubit(n, q, letter);
            let cols: Vec<Vec<C>> = (0..1usize << n)
                .map(|j| {
                    let mut s = DenseState::<f64>::basis(n, 2, j)?;
                    s.apply_all(&inv.gates)?;
                    s.apply_pauli(&p)?;
                    s.apply_all(&circuit.gates)?;
                    Ok(s.amplitudes().to_vec())
                })
                .collect::<Result<_>>()?;
            match pauli_decompose(&cols, n)? {
                Some((img, _)) => out.push(img),
                None => return Ok(None),
            }
        }
    }
    Ok(Some(out))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FivebitErrorEntry {
    pub error: Pauli1,
    pub labels: [BellLabel; 2],
    /// Pauli left on the decoded message.
    pub message_error: Pauli1,
}

/// For each Pauli on E, the decoded pair labels and the residual message
/// error, from the decoder's Clifford image.
pub fn fivebit_error_table() -> Result<Vec<FivebitErrorEntry>> {
    let dec = fivebit_decoder();
    let local = dec.remap(&{
        let mut m = vec![0; 5];
        m[0] = 0;
        m[3] = 1;
        m[4] = 2;
        m
    });
    let mut out = Vec::new();
    for letter in Pauli1::ALL {
        let p = PauliOperator::qubit(3, 0, letter);
        let cols: Vec<Vec<C>> = (0..8)
            .map(|j| {
                let mut s = DenseState::<f64>::basis(3, 2, j)?;
                s.apply_all(&local.inverse().gates)?;
                s.apply_pauli(&p)?;
                s.apply_all(&local.gates)?;
                Ok(s.amplitudes().to_vec())
            })
            .collect::<Result<_>>()?;
        let (img, _) = pauli_decompose(&cols, 3)?
            .ok_or_else(|| SimError::Bookkeeping("decoder is not Clifford".into()))?;
        let label = |q: usize| {
            let l = img.letter(q);
            BellLabel::ALL
                .into_iter()
                .find(|b| b.pauli_from_phi_plus() == l)
                .expect("every Pauli labels a Bell state")
        };
        out.push(FivebitErrorEntry {
            error: letter,
            labels: [label(1), label(2)],
            message_error: img.letter(0),
        });
    }
    Ok(out)
}

/// Residual message error left by an error on E that produced `label`.
pub fn fivebit_message_correction(label: BellLabel) -> Result<Pauli1> {
    Ok(fivebit_error_table()?
        .into_iter()
        .find(|e| e.labels[0] == label)
        .map(|e| e.message_error)
        .expect("table covers all labels"))
}

/// Which two shares pool their qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AuthorizedSet {
    AB,
    AE,
    BE,
}

/// Recover the secret onto qubit 0 from the given pair of shares. For `AB`
/// the missing share is replaced by `|0>` and the syndrome read locally.
pub fn fivebit_reconstruct(state: &mut DenseState<f64>, set: AuthorizedSet, rng: &mut SimRng) -> Result<()> {
    match set {
        AuthorizedSet::AE => state.apply_all(&fivebit_encoder().inverse().gates),
        AuthorizedSet::BE => {
            fivebit_decode(state)?;
            let label = match fivebit_pair_labels(state)? {
                SyndromePairState::Fivebit([l, _]) => l,
                SyndromePairState::Qutrit(_) => unreachable!(),
            };
            correct_message(state, fivebit_message_correction(label)?)
        }
        AuthorizedSet::AB => {
            state.reset(0, rng)?;
            fivebit_decode(state)?;
            let mut t = Transcript::new();
            let err = fivebit_locc_syndrome(state, &mut t, 0, rng)?;
            let label = BellLabel::ALL
                .into_iter()
                .find(|b| b.pauli_from_phi_plus() == err)
                .expect("label");
            correct_message(state, fivebit_message_correction(label)?)
        }
    }
}

fn correct_message(state: &mut DenseState<f64>, p: Pauli1) -> Result<()> {
    let n = state.num_qudits();
    state.apply_pauli(&PauliOperator::qubit(n, 0, p))
}

// ---- qutrit scheme ----

fn w(k: usize) -> C {
    let a = 2.0 * std::f64::consts::PI * (k % 3) as f64 / 3.0;
    C::new(a.cos(), a.sin())
}

/// `(|00> + |12> + |21>)/sqrt 3` as a two-qutrit amplitude vector (first qutrit low).
pub fn qutrit_pair() -> Vec<C> {
    let mut v = vec![C::new(0.0, 0.0); 9];
    let s = 1.0 / 3f64.sqrt();
    for k in 0..3 {
        v[k + 3 * ((3 - k) % 3)] = C::new(s, 0.0);
    }
    v
}

/// Message on qutrit 0, pair on (1, 2).
pub fn qutrit_initial(psi: &DenseState<f64>) -> Result<DenseState<f64>> {
    if psi.num_qudits() != 1 || psi.dim() != 3 {
        return Err(SimError::DimensionMismatch {
            expected: 3,
            found: psi.dim(),
        });
    }
    let pair = DenseState::from_amplitudes(2, 3, qutrit_pair())?;
    psi.tensor(&pair)
}

pub fn qutrit_encode(state: &mut DenseState<f64>) -> Result<()> {
    check_qutrits(state)?;
    state.apply_all(&qutrit_encoder().gates)
}

pub fn qutrit_decode(state: &mut DenseState<f64>) -> Result<()> {
    check_qutrits(state)?;
    state.apply_all(&qutrit_decoder().gates)
}

fn check_qutrits(state: &DenseState<f64>) -> Result<()> {
    if state.num_qudits() != 3 || state.dim() != 3 {
        return Err(SimError::DimensionMismatch {
            expected: 3,
            found: state.num_qudits(),
        });
    }
    Ok(())
}

fn qutrit_pauli(n: usize, q: usize, s: usize, t: usize) -> PauliOperator {
    PauliOperator::single(n, 3, q, s as u8, t as u8)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QutritErrorEntry {
    /// Error `X^s Z^t` on E.
    pub error: (usize, usize),
    /// Post-decode state of (A, B).
    pub pair: Vec<C>,
    /// `X^s' Z^t'` to undo on the decoded message.
    pub message_error: (usize, usize),
}

/// Split a product `|m> (x) |pair>` over (0 | 1, 2).
fn split_product(state: &DenseState<f64>) -> (Vec<C>, Vec<C>) {
    let a = state.amplitudes();
    let m = (0..3)
        .max_by(|&x, &y| {
            let nx: f64 = (0..9).map(|k| a[x + 3 * k].norm_sqr()).sum();
            let ny: f64 = (0..9).map(|k| a[y + 3 * k].norm_sqr()).sum();
            nx.total_cmp(&ny)
        })
        .unwrap();
    let mut pair: Vec<C> = (0..9).map(|k| a[m + 3 * k]).collect();
    let norm = pair.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for c in &mut pair {
        *c /= norm;
    }
    let msg: Vec<C> = (0..3)
        .map(|i| (0..9).map(|k| pair[k].conj() * a[i + 3 * k]).sum())
        .collect();
    (msg, pair)
}

fn overlap(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// The nine errors on E and their post-decode signatures, by dense simulation.
pub fn qutrit_error_table() -> Result<Vec<QutritErrorEntry>> {
    let mut rng = SimRng::new(0x5eed);
    let psi = DenseState::<f64>::random(1, 3, &mut rng)?;
    let mut out = Vec::new();
    for t in 0..3 {
        for s in 0..3 {
            let mut st = qutrit_initial(&psi)?;
            qutrit_encode(&mut st)?;
            st.apply_pauli(&qutrit_pauli(3, 0, s, t))?;
            qutrit_decode(&mut st)?;
            let (msg, pair) = split_product(&st);
            let mut found = None;
            'search: for tt in 0..3 {
                for ss in 0..3 {
                    let mut cand = psi.clone();
                    cand.apply_pauli(&qutrit_pauli(1, 0, ss, tt))?;
                    if (overlap(cand.amplitudes(), &msg).norm() - 1.0).abs() < 1e-9 {
                        found = Some((ss, tt));
                        break 'search;
                    }
                }
            }
            let message_error =
                found.ok_or_else(|| SimError::Bookkeeping(format!("error X^{s}Z^{t} not a message Pauli")))?;
            out.push(QutritErrorEntry {
                error: (s, t),
                pair,
                message_error,
            });
        }
    }
    Ok(out)
}

/// Undo the decoded message error `X^s Z^t` up to phase.
fn undo_qutrit(state: &mut DenseState<f64>, (s, t): (usize, usize)) -> Result<()> {
    let p = qutrit_pauli(3, 0, s, t);
    state.apply_pauli(&p.adjoint())
}

/// Bob (with E) decodes, identifies the error by a global projective
/// measurement on (A, B) and corrects the message.
pub fn qutrit_decode_and_correct(state: &mut DenseState<f64>, rng: &mut SimRng) -> Result<usize> {
    qutrit_decode(state)?;
    let table = qutrit_error_table()?;
    let a = state.amplitudes().to_vec();
    let branches: Vec<Vec<C>> = table
        .iter()
        .map(|e| {
            (0..3)
                .map(|i| (0..9).map(|k| e.pair[k].conj() * a[i + 3 * k]).sum())
                .collect()
        })
        .collect();
    let probs: Vec<f64> = branches.iter().map(|b| b.iter().map(|c| c.norm_sqr()).sum()).collect();
    let k = crate::dense::sample_index(&probs, rng);
    let norm = probs[k].sqrt();
    let mut amps = vec![C::new(0.0, 0.0); 27];
    for i in 0..3 {
        for j in 0..9 {
            amps[i + 3 * j] = branches[k][i] / norm * table[k].pair[j];
        }
    }
    *state = DenseState::from_amplitudes(3, 3, amps)?;
    undo_qutrit(state, table[k].message_error)?;
    Ok(k)
}

/// Eigenbases of `Z, X, XZ, XZ^2`; `bases()[b][j]` is vector `j` of basis `b`.
pub fn qutrit_mub_bases() -> Vec<Vec<Vec<C>>> {
    let s = 1.0 / 3f64.sqrt();
    let mut out = vec![(0..3)
        .map(|j| (0..3).map(|m| C::new(if m == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect()];
    for k in 0..3 {
        // eigenvector of X Z^k for eigenvalue w^j: v_m = w^(k m(m-1)/2 - j m)
        out.push(
            (0..3)
                .map(|j| {
                    (0..3)
                        .map(|m| w(k * (m * (m.max(1) - 1) / 2) + 9 - j * m) * s)
                        .collect()
                })
                .collect(),
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LoccVerdict {
    pub scheme: Scheme,
    pub locc_distinguishable: bool,
    /// Best success probability found within the restricted local protocol family.
    pub restricted_success: f64,
    /// Success probability of the optimal global measurement.
    pub global_success: f64,
    pub witness: String,
}

/// `p[a][b][i]`: probability of outcomes (a, b) for state `i` when the first
/// qutrit is measured in basis `ba` and the second in `bb`.
fn joint_probs(states: &[Vec<C>], ba: &[Vec<C>], bb: &[Vec<C>]) -> Vec<Vec<Vec<f64>>> {
    (0..3)
        .map(|a| {
            (0..3)
                .map(|b| {
                    states
                        .iter()
                        .map(|st| {
                            let mut amp = C::new(0.0, 0.0);
                            for x in 0..3 {
                                for y in 0..3 {
                                    amp += (ba[a][x] * bb[b][y]).conj() * st[x + 3 * y];
                                }
                            }
                            amp.norm_sqr()
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// One-way protocols: the first party measures in one of the four mutually
/// unbiased bases and broadcasts; the second picks a basis per outcome; the
/// guess maximizes the posterior. Exhaustive over bases, both directions.
pub fn restricted_locc_success(states: &[Vec<C>]) -> f64 {
    let bases = qutrit_mub_bases();
    let swap = |st: &Vec<C>| -> Vec<C> { (0..9).map(|i| st[(i / 3) + 3 * (i % 3)]).collect() };
    let swapped: Vec<Vec<C>> = states.iter().map(swap).collect();
    let prior = 1.0 / states.len() as f64;
    let mut best: f64 = 0.0;
    for ensemble in [states.to_vec(), swapped] {
        for ba in &bases {
            let mut total = 0.0;
            for a in 0..3 {
                let mut best_b: f64 = 0.0;
                for bb in &bases {
                    let p = joint_probs(&ensemble, ba, bb);
                    let v: f64 = (0..3)
                        .map(|b| p[a][b].iter().cloned().fold(0.0, f64::max))
                        .sum();
                    best_b = best_b.max(v);
                }
                total += best_b;
            }
            best = best.max(total * prior);
        }
    }
    best
}

fn global_success(states: &[Vec<C>]) -> f64 {
    // Projective measurement onto the states themselves (they are orthonormal).
    states
        .iter()
        .map(|s| overlap(s, s).norm_sqr())
        .sum::<f64>()
        / states.len() as f64
}

pub fn locc_feasibility_check(scheme: Scheme) -> Result<LoccVerdict> {
    match scheme {
        Scheme::Fivebit => {
            let mut rng = SimRng::new(0xf17e);
            let table = fivebit_error_table()?;
            let mut hits = 0;
            for entry in &table {
                let psi = DenseState::<f64>::random(1, 2, &mut rng)?;
                let mut st = fivebit_initial(&psi)?;
                fivebit_encode(&mut st)?;
                st.apply_pauli(&PauliOperator::qubit(5, 0, entry.error))?;
                fivebit_decode(&mut st)?;
                let mut t = Transcript::new();
                if fivebit_locc_syndrome(&mut st, &mut t, 0, &mut rng)? == entry.error {
                    hits += 1;
                }
            }
            let rate = hits as f64 / table.len() as f64;
            Ok(LoccVerdict {
                scheme,
                locc_distinguishable: rate == 1.0,
                restricted_success: rate,
                global_success: 1.0,
                witness: "local Z on pair (1,3) and local X on pair (2,4), parities broadcast".into(),
            })
        }
        Scheme::Qutrit => {
            let states: Vec<Vec<C>> = qutrit_error_table()?.into_iter().map(|e| e.pair).collect();
            let restricted = restricted_locc_success(&states);
            Ok(LoccVerdict {
                scheme,
                locc_distinguishable: false,
                restricted_success: restricted,
                global_success: global_success(&states),
                witness: "one-way protocols over the four qutrit mutually unbiased bases; \
                          perfect LOCC discrimination of nine orthogonal maximally entangled \
                          two-qutrit states would let two parties create entanglement from none"
                    .into(),
            })
        }
    }
}

/// Reduced state of share E (qubit/qutrit 0) after encoding.
pub fn transmitted_share_state(scheme: Scheme, psi: &DenseState<f64>) -> Result<crate::density::DensityMatrix<f64>> {
    let mut st = match scheme {
        Scheme::Fivebit => {
            let mut s = fivebit_initial(psi)?;
            fivebit_encode(&mut s)?;
            s
        }
        Scheme::Qutrit => {
            let mut s = qutrit_initial(psi)?;
            qutrit_encode(&mut s)?;
            s
        }
    };
    st.normalize_phase();
    Ok(st.reduced(&[0]))
}
