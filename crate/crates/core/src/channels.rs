//! Adversary models acting on the transmitted cipher-text.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::dense::DenseState;
use crate::error::{Result, SimError};
use crate::pauli::{Pauli1, PauliOperator};
use crate::register::Register;
use crate::rng::SimRng;

const PROB_TOL: f64 = 1e-12;
const UNITARY_TOL: f64 = 1e-9;

/// Shannon entropy in bits with `0 log 0 = 0`.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    shannon_entropy(&[p, 1.0 - p])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Noiseless,
    ZMeasureAll,
    PaperMix,
    DepolarizingComplete,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::Noiseless,
        Preset::ZMeasureAll,
        Preset::PaperMix,
        Preset::DepolarizingComplete,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Noiseless => "noiseless",
            Preset::ZMeasureAll => "z-measure-all",
            Preset::PaperMix => "paper-mix",
            Preset::DepolarizingComplete => "depolarizing-complete",
        }
    }

    /// Per-qubit probabilities of `(I, X, Z, XZ)`.
    pub fn per_qubit(self) -> [f64; 4] {
        match self {
            Preset::Noiseless => [1.0, 0.0, 0.0, 0.0],
            Preset::ZMeasureAll => [0.5, 0.0, 0.5, 0.0],
            Preset::PaperMix => [0.5, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0],
            Preset::DepolarizingComplete => [0.25; 4],
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| SimError::InvalidDistribution(format!("unknown preset {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    /// Explicit list of n-qubit Paulis.
    Explicit(Vec<(PauliOperator, f64)>),
    /// The same single-qubit channel on every qubit independently.
    Product([f64; 4]),
}

/// Probability distribution over Pauli errors on `n` cipher-text qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliChannel {
    n: usize,
    kind: Kind,
}

fn check_probs(probs: impl IntoIterator<Item = f64>) -> Result<()> {
    let mut total = 0.0;
    for p in probs {
        if !(p >= 0.0) || !p.is_finite() {
            return Err(SimError::InvalidDistribution(format!("probability {p}")));
        }
        total += p;
    }
    if (total - 1.0).abs() > PROB_TOL {
        return Err(SimError::InvalidDistribution(format!("probabilities sum to {total}")));
    }
    Ok(())
}

impl PauliChannel {
    /// Explicit distribution; repeated operators are merged.
    pub fn explicit(n: usize, entries: Vec<(PauliOperator, f64)>) -> Result<Self> {
        check_probs(entries.iter().map(|e| e.1))?;
        let mut merged: BTreeMap<PauliOperator, f64> = BTreeMap::new();
        for (p, w) in entries {
            if p.len() != n || p.dim() != 2 {
                return Err(SimError::InvalidDistribution(format!(
                    "operator {p} does not act on {n} qubits"
                )));
            }
            *merged.entry(p.unsigned()).or_default() += w;
        }
        Ok(Self {
            n,
            kind: Kind::Explicit(merged.into_iter().collect()),
        })
    }

    /// Independent identical channel `(I, X, Z, XZ)` on each of `n` qubits.
    pub fn product(n: usize, per_qubit: [f64; 4]) -> Result<Self> {
        check_probs(per_qubit)?;
        Ok(Self {
            n,
            kind: Kind::Product(per_qubit),
        })
    }

    pub fn preset(preset: Preset, n: usize) -> Self {
        Self::product(n, preset.per_qubit()).expect("presets are valid")
    }

    /// Channel that always applies `p`.
    pub fn fixed(p: PauliOperator) -> Self {
        let n = p.len();
        Self::explicit(n, vec![(p, 1.0)]).expect("point mass")
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn per_qubit(&self) -> Option<[f64; 4]> {
        match self.kind {
            Kind::Product(p) => Some(p),
            Kind::Explicit(_) => None,
        }
    }

    /// Full distribution; product channels are expanded (small `n` only).
    pub fn entries(&self) -> Vec<(PauliOperator, f64)> {
        match &self.kind {
            Kind::Explicit(e) => e.clone(),
            Kind::Product(p) => {
                assert!(self.n <= 8, "expansion of a product channel on {} qubits", self.n);
                let mut out = Vec::new();
                for code in 0..4usize.pow(self.n as u32) {
                    let mut op = PauliOperator::identity(self.n, 2);
                    let mut w = 1.0;
                    for q in 0..self.n {
                        let k = (code >> (2 * q)) & 3;
                        op.set_qubit(q, Pauli1::ALL[k]);
                        w *= p[k];
                    }
                    if w > 0.0 {
                        out.push((op, w));
                    }
                }
                out
            }
        }
    }

    /// Preset name for matching product channels, otherwise a compact listing.
    pub fn name(&self) -> String {
        match &self.kind {
            Kind::Product(p) => match Preset::ALL.into_iter().find(|s| s.per_qubit() == *p) {
                Some(s) => s.name().to_string(),
                None => format!("product({},{},{},{})", p[0], p[1], p[2], p[3]),
            },
            Kind::Explicit(e) => e
                .iter()
                .map(|(op, w)| format!("{op}:{w}"))
                .collect::<Vec<_>>()
                .join(","),
        }
    }

    pub fn identity_probability(&self) -> f64 {
        match &self.kind {
            Kind::Explicit(e) => e.iter().filter(|(p, _)| p.is_identity()).map(|e| e.1).sum(),
            Kind::Product(p) => p[0].powi(self.n as i32),
        }
    }

    pub fn sample(&self, rng: &mut SimRng) -> PauliOperator {
        match &self.kind {
            Kind::Explicit(e) => {
                let probs: Vec<f64> = e.iter().map(|x| x.1).collect();
                e[crate::dense::sample_index(&probs, rng)].0.clone()
            }
            Kind::Product(p) => {
                let mut op = PauliOperator::identity(self.n, 2);
                for q in 0..self.n {
                    op.set_qubit(q, Pauli1::ALL[crate::dense::sample_index(p, rng)]);
                }
                op
            }
        }
    }

    /// Shannon entropy of the error distribution in bits.
    pub fn entropy(&self) -> f64 {
        match &self.kind {
            Kind::Explicit(e) => shannon_entropy(&e.iter().map(|x| x.1).collect::<Vec<_>>()),
            Kind::Product(p) => self.n as f64 * shannon_entropy(p),
        }
    }
}

/// Sample one Pauli from `channel`, apply it to `cipher` qubits of `state`
/// and return it (cipher-sized) for the harness.
pub fn apply_pauli_channel<R: Register>(
    state: &mut R,
    channel: &PauliChannel,
    cipher: &[usize],
    rng: &mut SimRng,
) -> Result<PauliOperator> {
    if cipher.len() != channel.num_qubits() {
        return Err(SimError::LengthMismatch {
            expected: channel.num_qubits(),
            found: cipher.len(),
        });
    }
    let p = channel.sample(rng);
    state.apply_pauli_op(&p.embed(state.num_qubits(), cipher))?;
    Ok(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisPolicy {
    Z,
    X,
    Random,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterceptResendAttack {
    pub intercept: Vec<usize>,
    pub policy: BasisPolicy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InterceptRecord {
    pub qubit: usize,
    /// `Z` or `X`.
    pub basis: Pauli1,
    pub outcome: bool,
}

/// Measure each tapped qubit and forward the observed eigenstate.
pub fn apply_intercept_resend<R: Register>(
    state: &mut R,
    attack: &InterceptResendAttack,
    rng: &mut SimRng,
) -> Result<Vec<InterceptRecord>> {
    attack
        .intercept
        .iter()
        .map(|&q| {
            let basis = match attack.policy {
                BasisPolicy::Z => Pauli1::Z,
                BasisPolicy::X => Pauli1::X,
                BasisPolicy::Random => {
                    if rng.bit() {
                        Pauli1::X
                    } else {
                        Pauli1::Z
                    }
                }
            };
            // The post-measurement state is already the eigenstate Eve resends.
            let outcome = state.measure_basis(q, basis, rng)?;
            Ok(InterceptRecord { qubit: q, basis, outcome })
        })
        .collect()
}

/// Joint unitary on the cipher-text and a fresh `|0...0>` ancilla.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryAttack {
    cipher: usize,
    ancilla: usize,
    /// Row-major over `cipher (low) x ancilla (high)`.
    matrix: Vec<Complex<f64>>,
}

impl UnitaryAttack {
    pub fn new(cipher: usize, ancilla: usize, matrix: Vec<Complex<f64>>) -> Result<Self> {
        let dim = 1usize << (cipher + ancilla);
        if matrix.len() != dim * dim {
            return Err(SimError::LengthMismatch {
                expected: dim * dim,
                found: matrix.len(),
            });
        }
        let mut worst: f64 = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = Complex::new(0.0, 0.0);
                for k in 0..dim {
                    acc += matrix[k * dim + i].conj() * matrix[k * dim + j];
                }
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((acc - want).norm());
            }
        }
        if worst > UNITARY_TOL {
            return Err(SimError::NotUnitary(worst));
        }
        Ok(Self { cipher, ancilla, matrix })
    }

    pub fn identity(cipher: usize, ancilla: usize) -> Self {
        let dim = 1usize << (cipher + ancilla);
        let mut m = vec![Complex::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            m[i * dim + i] = Complex::new(1.0, 0.0);
        }
        Self {
            cipher,
            ancilla,
            matrix: m,
        }
    }

    /// Coherent realization of a Pauli channel: the ancilla is rotated to
    /// `sum_k sqrt(p_k)|k>` and then controls `P_k` on the cipher-text.
    pub fn from_pauli_channel(channel: &PauliChannel) -> Result<Self> {
        let entries = channel.entries();
        let c = channel.num_qubits();
        let a = (usize::BITS - (entries.len().max(1) - 1).leading_zeros()) as usize;
        let cd = 1usize << c;
        let ad = 1usize << a;
        let zero = Complex::new(0.0, 0.0);
        // V: first column sqrt(p), completed by Gram-Schmidt.
        let mut cols: Vec<Vec<Complex<f64>>> = Vec::new();
        let first: Vec<Complex<f64>> = (0..ad)
            .map(|k| Complex::new(entries.get(k).map_or(0.0, |e| e.1.sqrt()), 0.0))
            .collect();
        cols.push(first);
        for e in 0..ad {
            if cols.len() == ad {
                break;
            }
            let mut v = vec![zero; ad];
            v[e] = Complex::new(1.0, 0.0);
            for u in &cols {
                let ov: Complex<f64> = u.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= ov * ui;
                }
            }
            let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-8 {
                cols.push(v.into_iter().map(|x| x / norm).collect());
            }
        }
        // Pauli matrices on the cipher-text.
        let pauli_cols = |p: &PauliOperator| -> Result<Vec<Vec<Complex<f64>>>> {
            (0..cd)
                .map(|j| {
                    let mut s = DenseState::<f64>::basis(c, 2, j)?;
                    s.apply_pauli(p)?;
                    Ok(s.amplitudes().to_vec())
                })
                .collect()
        };
        let mut ctrl: Vec<Vec<Vec<Complex<f64>>>> = Vec::with_capacity(ad);
        for k in 0..ad {
            let p = entries
                .get(k)
                .map_or_else(|| PauliOperator::identity(c, 2), |e| e.0.clone());
            ctrl.push(pauli_cols(&p)?);
        }
        let dim = cd * ad;
        let mut m = vec![zero; dim * dim];
        // U |j, l> = sum_k V[k, l] P_k |j> |k>
        for l in 0..ad {
            for j in 0..cd {
                let col = j + cd * l;
                for (k, pk) in ctrl.iter().enumerate() {
                    let vkl = cols[l][k];
                    if vkl == zero {
                        continue;
                    }
                    for (i, amp) in pk[j].iter().enumerate() {
                        m[(i + cd * k) * dim + col] += vkl * amp;
                    }
                }
            }
        }
        Self::new(c, a, m)
    }

    pub fn cipher_qubits(&self) -> usize {
        self.cipher
    }

    pub fn ancilla_qubits(&self) -> usize {
        self.ancilla
    }
}

/// Append Eve's ancilla to `state` and apply the attack on `cipher` plus the
/// ancilla. The ancilla occupies the new highest indices.
pub fn apply_unitary_attack(
    state: &DenseState<f64>,
    attack: &UnitaryAttack,
    cipher: &[usize],
) -> Result<DenseState<f64>> {
    if cipher.len() != attack.cipher {
        return Err(SimError::LengthMismatch {
            expected: attack.cipher,
            found: cipher.len(),
        });
    }
    let anc = DenseState::<f64>::zero(attack.ancilla, 2)?;
    let mut joint = state.tensor(&anc)?;
    let n = state.num_qudits();
    let targets: Vec<usize> = cipher.iter().copied().chain(n..n + attack.ancilla).collect();
    joint.apply_matrix(&targets, &attack.matrix)?;
    Ok(joint)
}

/// Shannon entropy of a channel's error distribution.
pub fn channel_entropy(channel: &PauliChannel) -> f64 {
    channel.entropy()
}
