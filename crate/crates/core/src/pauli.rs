//! Generalized Pauli operators on qubits and qutrits.
//!
//! An operator is stored as `w^phase * prod_j X_j^{x_j} Z_j^{z_j}` where
//! `w = exp(2 pi i / 2d)`, `X|j> = |j+1>` and `Z|j> = exp(2 pi i j / d)|j>`.
//! For qubits this makes `Y = iXZ` the element with `phase = 1, x = z = 1`.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PauliOperator {
    d: u8,
    x: Vec<u8>,
    z: Vec<u8>,
    phase: u8,
}

/// Single-qubit Pauli letters in the `(I, X, Z, XZ)` order used by channel tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli1 {
    I,
    X,
    Z,
    Y,
}

impl Pauli1 {
    pub const ALL: [Pauli1; 4] = [Pauli1::I, Pauli1::X, Pauli1::Z, Pauli1::Y];

    /// `(x, z)` exponent bits.
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli1::I => (false, false),
            Pauli1::X => (true, false),
            Pauli1::Z => (false, true),
            Pauli1::Y => (true, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli1::I,
            (true, false) => Pauli1::X,
            (false, true) => Pauli1::Z,
            (true, true) => Pauli1::Y,
        }
    }
}

impl PauliOperator {
    pub fn identity(n: usize, d: u8) -> Self {
        assert!(d == 2 || d == 3, "only qubits and qutrits are supported");
        Self {
            d,
            x: vec![0; n],
            z: vec![0; n],
            phase: 0,
        }
    }

    /// Build from exponent vectors; exponents are reduced mod `d`.
    pub fn new(d: u8, x: Vec<u8>, z: Vec<u8>, phase: u8) -> Result<Self> {
        if d != 2 && d != 3 {
            return Err(SimError::MalformedObservable(format!("dimension {d}")));
        }
        if x.len() != z.len() {
            return Err(SimError::LengthMismatch {
                expected: x.len(),
                found: z.len(),
            });
        }
        Ok(Self {
            d,
            x: x.into_iter().map(|e| e % d).collect(),
            z: z.into_iter().map(|e| e % d).collect(),
            phase: phase % (2 * d),
        })
    }

    /// `X^xe Z^ze` on qudit `q`, identity elsewhere.
    pub fn single(n: usize, d: u8, q: usize, xe: u8, ze: u8) -> Self {
        let mut p = Self::identity(n, d);
        p.x[q] = xe % d;
        p.z[q] = ze % d;
        p
    }

    /// Hermitian qubit Pauli with the given letter on qudit `q`.
    pub fn qubit(n: usize, q: usize, letter: Pauli1) -> Self {
        let mut p = Self::identity(n, 2);
        p.set_qubit(q, letter);
        p
    }

    /// Qubit operator from letters, e.g. `"XZI"` or `"-YY"`; leftmost letter is qubit 0.
    pub fn parse_qubits(s: &str) -> Result<Self> {
        let (sign, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let mut p = Self::identity(body.chars().count(), 2);
        for (q, c) in body.chars().enumerate() {
            let letter = match c {
                'I' | '_' => Pauli1::I,
                'X' => Pauli1::X,
                'Y' => Pauli1::Y,
                'Z' => Pauli1::Z,
                other => {
                    return Err(SimError::MalformedObservable(format!(
                        "unknown Pauli letter {other:?}"
                    )))
                }
            };
            p.set_qubit(q, letter);
        }
        if sign {
            p.phase = (p.phase + 2) % 4;
        }
        Ok(p)
    }

    /// Overwrite qubit `q` with a Hermitian letter, keeping the rest Hermitian.
    pub fn set_qubit(&mut self, q: usize, letter: Pauli1) {
        assert_eq!(self.d, 2);
        let was_y = self.x[q] == 1 && self.z[q] == 1;
        let (x, z) = letter.bits();
        self.x[q] = x as u8;
        self.z[q] = z as u8;
        let is_y = x && z;
        // Y = i XZ carries one quarter turn of phase.
        let delta = 4 + is_y as u8 - was_y as u8;
        self.phase = (self.phase + delta) % 4;
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn dim(&self) -> u8 {
        self.d
    }

    pub fn x_exp(&self) -> &[u8] {
        &self.x
    }

    pub fn z_exp(&self) -> &[u8] {
        &self.z
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    /// Exponent-level identity check; the phase is not consulted.
    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&e| e == 0)
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .filter(|(&a, &b)| a != 0 || b != 0)
            .count()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| self.x[j] != 0 || self.z[j] != 0)
            .collect()
    }

    /// Letter on qubit `q` (qubit operators only).
    pub fn letter(&self, q: usize) -> Pauli1 {
        assert_eq!(self.d, 2);
        Pauli1::from_bits(self.x[q] == 1, self.z[q] == 1)
    }

    /// Symplectic product: `Q P = w^(2 s) P Q` with `s` returned mod `d`.
    pub fn symplectic(&self, other: &Self) -> u8 {
        let d = self.d as u32;
        let s: u32 = (0..self.len())
            .map(|j| {
                let a = self.x[j] as u32 * other.z[j] as u32;
                let b = self.z[j] as u32 * other.x[j] as u32;
                (a + d * d - b) % d
            })
            .sum();
        (s % d) as u8
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.symplectic(other) == 0
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(SimError::DimensionMismatch {
                expected: self.d as usize,
                found: other.d as usize,
            });
        }
        if self.len() != other.len() {
            return Err(SimError::LengthMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        let d = self.d;
        let m = 2 * d;
        let mut phase = (self.phase + other.phase) as u32;
        let mut x = Vec::with_capacity(self.len());
        let mut z = Vec::with_capacity(self.len());
        for j in 0..self.len() {
            // Z^b X^c = w^(2bc) X^c Z^b
            phase += 2 * self.z[j] as u32 * other.x[j] as u32;
            x.push((self.x[j] + other.x[j]) % d);
            z.push((self.z[j] + other.z[j]) % d);
        }
        Ok(Self {
            d,
            x,
            z,
            phase: (phase % m as u32) as u8,
        })
    }

    pub fn adjoint(&self) -> Self {
        // (X^a Z^b)^dag = Z^-b X^-a = w^(2ab) X^-a Z^-b
        let d = self.d;
        let m = 2 * d as u32;
        let mut phase = (m - self.phase as u32 % m) % m;
        let mut x = Vec::with_capacity(self.len());
        let mut z = Vec::with_capacity(self.len());
        for j in 0..self.len() {
            let a = self.x[j];
            let b = self.z[j];
            phase += 2 * ((d - a) % d) as u32 * ((d - b) % d) as u32;
            x.push((d - a) % d);
            z.push((d - b) % d);
        }
        Self {
            d,
            x,
            z,
            phase: (phase % m) as u8,
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.adjoint() == *self
    }

    /// Qubit operator in the `(x, z, negative)` convention where `x = z = 1`
    /// denotes `Y`. Fails for non-Hermitian operators.
    pub fn to_signed_bits(&self) -> Result<(Vec<bool>, Vec<bool>, bool)> {
        if self.d != 2 {
            return Err(SimError::MalformedObservable(
                "qutrit operator on a qubit engine".into(),
            ));
        }
        let ys = (0..self.len())
            .filter(|&j| self.x[j] == 1 && self.z[j] == 1)
            .count() as u32;
        let rel = (self.phase as u32 + 4 - ys % 4) % 4;
        if rel % 2 == 1 {
            return Err(SimError::MalformedObservable(format!(
                "non-Hermitian operator with phase {}",
                self.phase
            )));
        }
        Ok((
            self.x.iter().map(|&e| e == 1).collect(),
            self.z.iter().map(|&e| e == 1).collect(),
            rel == 2,
        ))
    }

    /// Inverse of [`Self::to_signed_bits`].
    pub fn from_signed_bits(x: &[bool], z: &[bool], negative: bool) -> Self {
        let mut p = Self::identity(x.len(), 2);
        for j in 0..x.len() {
            p.set_qubit(j, Pauli1::from_bits(x[j], z[j]));
        }
        if negative {
            p.phase = (p.phase + 2) % 4;
        }
        p
    }

    /// Same operator with the phase dropped to the nearest Hermitian form.
    pub fn unsigned(&self) -> Self {
        let (x, z, _) = match self.to_signed_bits() {
            Ok(v) => v,
            Err(_) => {
                let x: Vec<bool> = self.x.iter().map(|&e| e == 1).collect();
                let z: Vec<bool> = self.z.iter().map(|&e| e == 1).collect();
                (x, z, false)
            }
        };
        Self::from_signed_bits(&x, &z, false)
    }

    /// Restrict to a subset of qudits, in the given order; phase kept.
    pub fn restrict(&self, qudits: &[usize]) -> Self {
        Self {
            d: self.d,
            x: qudits.iter().map(|&q| self.x[q]).collect(),
            z: qudits.iter().map(|&q| self.z[q]).collect(),
            phase: self.phase,
        }
    }

    /// Embed into a larger register: qudit `j` of `self` goes to `positions[j]`.
    pub fn embed(&self, n: usize, positions: &[usize]) -> Self {
        let mut p = Self::identity(n, self.d);
        for (j, &q) in positions.iter().enumerate() {
            p.x[q] = self.x[j];
            p.z[q] = self.z[j];
        }
        p.phase = self.phase;
        p
    }
}

impl Mul for &PauliOperator {
    type Output = PauliOperator;

    fn mul(self, rhs: &PauliOperator) -> PauliOperator {
        self.compose(rhs).expect("compatible Pauli operators")
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 2 {
            if let Ok((x, z, neg)) = self.to_signed_bits() {
                if neg {
                    write!(f, "-")?;
                }
                for j in 0..x.len() {
                    let c = match (x[j], z[j]) {
                        (false, false) => 'I',
                        (true, false) => 'X',
                        (false, true) => 'Z',
                        (true, true) => 'Y',
                    };
                    write!(f, "{c}")?;
                }
                return Ok(());
            }
        }
        write!(f, "w{}^{}", 2 * self.d, self.phase)?;
        for j in 0..self.len() {
            write!(f, " X{}Z{}", self.x[j], self.z[j])?;
        }
        Ok(())
    }
}

/// The four Bell states, encoded by `(z-bit, x-bit)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BellLabel {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellLabel {
    pub const ALL: [BellLabel; 4] = [
        BellLabel::PhiPlus,
        BellLabel::PhiMinus,
        BellLabel::PsiPlus,
        BellLabel::PsiMinus,
    ];

    pub fn from_bits(z_bit: bool, x_bit: bool) -> Self {
        match (z_bit, x_bit) {
            (false, false) => BellLabel::PhiPlus,
            (true, false) => BellLabel::PhiMinus,
            (false, true) => BellLabel::PsiPlus,
            (true, true) => BellLabel::PsiMinus,
        }
    }

    /// Phase bit: set for the minus states.
    pub fn z_bit(self) -> bool {
        matches!(self, BellLabel::PhiMinus | BellLabel::PsiMinus)
    }

    /// Bit-flip bit: set for the Psi states.
    pub fn x_bit(self) -> bool {
        matches!(self, BellLabel::PsiPlus | BellLabel::PsiMinus)
    }

    /// Pauli that takes `Phi+` to this label when applied to one half.
    pub fn pauli_from_phi_plus(self) -> Pauli1 {
        Pauli1::from_bits(self.x_bit(), self.z_bit())
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BellLabel::PhiPlus => "Phi+",
            BellLabel::PhiMinus => "Phi-",
            BellLabel::PsiPlus => "Psi+",
            BellLabel::PsiMinus => "Psi-",
        };
        f.write_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn qubit_letters_round_trip_through_display() {
        for s in ["XZIY", "-YY", "IIII", "ZZ"] {
            assert_eq!(PauliOperator::parse_qubits(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn zx_equals_minus_xz() {
        let x = PauliOperator::qubit(1, 0, Pauli1::X);
        let z = PauliOperator::qubit(1, 0, Pauli1::Z);
        let zx = &z * &x;
        let xz = &x * &z;
        assert_eq!(zx.phase(), (xz.phase() + 2) % 4);
        // XZ = -iY
        assert_eq!(xz.to_string(), "w4^0 X1Z1");
        let y = PauliOperator::qubit(1, 0, Pauli1::Y);
        assert!(y.is_hermitian());
        assert!(!xz.is_hermitian());
    }

    #[test]
    fn qutrit_commutation_phase() {
        let x = PauliOperator::single(1, 3, 0, 1, 0);
        let z = PauliOperator::single(1, 3, 0, 0, 1);
        // ZX = w^2 XZ with w = exp(2 pi i / 6), i.e. exp(2 pi i / 3)
        let zx = &z * &x;
        let xz = &x * &z;
        assert_eq!(zx.phase(), (xz.phase() + 2) % 6);
        assert_eq!(z.symplectic(&x), 2);
    }

    #[test]
    fn signed_bits_round_trip() {
        let p = PauliOperator::parse_qubits("-XYZ").unwrap();
        let (x, z, neg) = p.to_signed_bits().unwrap();
        assert!(neg);
        assert_eq!(PauliOperator::from_signed_bits(&x, &z, neg), p);
    }

    fn arb_pauli(n: usize, d: u8) -> impl Strategy<Value = PauliOperator> {
        (
            proptest::collection::vec(0..d, n),
            proptest::collection::vec(0..d, n),
            0..2 * d,
        )
            .prop_map(move |(x, z, ph)| PauliOperator::new(d, x, z, ph).unwrap())
    }

    proptest! {
        #[test]
        fn composition_is_associative(
            d in prop_oneof![Just(2u8), Just(3u8)],
            seed in 0u64..1000,
        ) {
            let mut rng = crate::rng::SimRng::new(seed);
            let mut gen = || {
                let x = (0..4).map(|_| rng.below(d as usize) as u8).collect();
                let z = (0..4).map(|_| rng.below(d as usize) as u8).collect();
                PauliOperator::new(d, x, z, rng.below(2 * d as usize) as u8).unwrap()
            };
            let (p, q, r) = (gen(), gen(), gen());
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        }

        #[test]
        fn adjoint_is_inverse(p in arb_pauli(3, 3)) {
            let prod = &p * &p.adjoint();
            prop_assert!(prod.is_identity());
            prop_assert_eq!(prod.phase(), 0);
        }

        #[test]
        fn identity_iff_zero_exponents(p in arb_pauli(3, 2)) {
            let zero = p.x_exp().iter().chain(p.z_exp()).all(|&e| e == 0);
            prop_assert_eq!(p.is_identity(), zero);
            prop_assert!(p.x_exp().iter().chain(p.z_exp()).all(|&e| e < 2));
        }
    }
}
