//! Aaronson-Gottesman stabilizer tableau with destabilizers.
//!
//! Rows `0..n` are destabilizers, rows `n..2n` stabilizers and row `2n` is
//! scratch space. Each row stores packed X and Z bits plus a sign bit; a row
//! with both bits set on a qubit denotes `Y` there.

use crate::error::{Result, SimError};
use crate::gate::Gate;
use crate::pauli::{BellLabel, PauliOperator};
use crate::rng::SimRng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerState {
    n: usize,
    words: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    r: Vec<bool>,
}

#[inline]
fn word_bit(q: usize) -> (usize, u64) {
    (q / 64, 1u64 << (q % 64))
}

impl StabilizerState {
    /// `|0...0>` on `n` qubits.
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        let rows = 2 * n + 1;
        let mut s = Self {
            n,
            words,
            x: vec![0; rows * words],
            z: vec![0; rows * words],
            r: vec![false; rows],
        };
        for q in 0..n {
            let (w, b) = word_bit(q);
            s.x[q * words + w] |= b;
            s.z[(n + q) * words + w] |= b;
        }
        s
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    fn check(&self, q: usize) -> Result<()> {
        if q >= self.n {
            Err(SimError::IndexOutOfRange {
                index: q,
                size: self.n,
            })
        } else {
            Ok(())
        }
    }

    #[inline]
    fn get_x(&self, row: usize, q: usize) -> bool {
        let (w, b) = word_bit(q);
        self.x[row * self.words + w] & b != 0
    }

    #[inline]
    fn get_z(&self, row: usize, q: usize) -> bool {
        let (w, b) = word_bit(q);
        self.z[row * self.words + w] & b != 0
    }

    fn rows(&self) -> usize {
        2 * self.n
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        for &t in &gate.targets() {
            self.check(t)?;
        }
        if gate.dim() != 2 {
            return Err(SimError::UnsupportedGate(gate.name()));
        }
        match *gate {
            Gate::X(q) => self.for_col(q, |_, z, r| *r ^= z),
            Gate::Z(q) => self.for_col(q, |x, _, r| *r ^= x),
            Gate::Y(q) => self.for_col(q, |x, z, r| *r ^= x ^ z),
            Gate::H(q) => self.h(q),
            Gate::S(q) => self.s(q, false),
            Gate::Sdg(q) => self.s(q, true),
            Gate::Cnot(c, t) => self.cnot(c, t),
            Gate::Cz(a, b) => {
                self.h(b);
                self.cnot(a, b);
                self.h(b);
            }
            Gate::Swap(a, b) => {
                for row in 0..self.rows() {
                    let base = row * self.words;
                    for arr in [&mut self.x, &mut self.z] {
                        let (wa, ba) = word_bit(a);
                        let (wb, bb) = word_bit(b);
                        let va = arr[base + wa] & ba != 0;
                        let vb = arr[base + wb] & bb != 0;
                        if va != vb {
                            arr[base + wa] ^= ba;
                            arr[base + wb] ^= bb;
                        }
                    }
                }
            }
            _ => unreachable!(),
        }
        Ok(())
    }

    pub fn apply_all(&mut self, gates: &[Gate]) -> Result<()> {
        gates.iter().try_for_each(|g| self.apply(g))
    }

    fn for_col(&mut self, q: usize, f: impl Fn(bool, bool, &mut bool)) {
        for row in 0..self.rows() {
            let (x, z) = (self.get_x(row, q), self.get_z(row, q));
            f(x, z, &mut self.r[row]);
        }
    }

    fn h(&mut self, q: usize) {
        let (w, b) = word_bit(q);
        for row in 0..self.rows() {
            let i = row * self.words + w;
            let (x, z) = (self.x[i] & b, self.z[i] & b);
            if x != 0 && z != 0 {
                self.r[row] ^= true;
            }
            self.x[i] = (self.x[i] & !b) | z;
            self.z[i] = (self.z[i] & !b) | x;
        }
    }

    fn s(&mut self, q: usize, dagger: bool) {
        let (w, b) = word_bit(q);
        for row in 0..self.rows() {
            let i = row * self.words + w;
            let x = self.x[i] & b != 0;
            let z = self.z[i] & b != 0;
            if x && (z != dagger) {
                self.r[row] ^= true;
            }
            if x {
                self.z[i] ^= b;
            }
        }
    }

    fn cnot(&mut self, c: usize, t: usize) {
        let (wc, bc) = word_bit(c);
        let (wt, bt) = word_bit(t);
        for row in 0..self.rows() {
            let base = row * self.words;
            let xc = self.x[base + wc] & bc != 0;
            let zc = self.z[base + wc] & bc != 0;
            let xt = self.x[base + wt] & bt != 0;
            let zt = self.z[base + wt] & bt != 0;
            if xc && zt && (xt == zc) {
                self.r[row] ^= true;
            }
            if xc {
                self.x[base + wt] ^= bt;
            }
            if zt {
                self.z[base + wc] ^= bc;
            }
        }
    }

    /// Row `h` <- row `i` * row `h`, tracking the sign exactly.
    fn rowsum(&mut self, h: usize, i: usize) {
        let w = self.words;
        let mut plus = 0u32;
        let mut minus = 0u32;
        for k in 0..w {
            let (x1, z1) = (self.x[i * w + k], self.z[i * w + k]);
            let (x2, z2) = (self.x[h * w + k], self.z[h * w + k]);
            let y1 = x1 & z1;
            let xo = x1 & !z1;
            let zo = !x1 & z1;
            let p = (y1 & z2 & !x2) | (xo & z2 & x2) | (zo & x2 & !z2);
            let m = (y1 & x2 & !z2) | (xo & z2 & !x2) | (zo & x2 & z2);
            plus += p.count_ones();
            minus += m.count_ones();
            self.x[h * w + k] = x1 ^ x2;
            self.z[h * w + k] = z1 ^ z2;
        }
        let total = 2 * (self.r[h] as u32 + self.r[i] as u32) + plus + 4 * w as u32 * 64 - minus;
        self.r[h] = total % 4 == 2;
    }

    fn anticommutes_row(&self, row: usize, px: &[u64], pz: &[u64]) -> bool {
        let w = self.words;
        let mut acc = 0u32;
        for k in 0..w {
            acc += ((self.x[row * w + k] & pz[k]) ^ (self.z[row * w + k] & px[k])).count_ones();
        }
        acc % 2 == 1
    }

    fn pack(&self, p: &PauliOperator) -> Result<(Vec<u64>, Vec<u64>, bool)> {
        if p.len() != self.n {
            return Err(SimError::LengthMismatch {
                expected: self.n,
                found: p.len(),
            });
        }
        let (xs, zs, neg) = p.to_signed_bits()?;
        let mut px = vec![0u64; self.words];
        let mut pz = vec![0u64; self.words];
        for q in 0..self.n {
            let (w, b) = word_bit(q);
            if xs[q] {
                px[w] |= b;
            }
            if zs[q] {
                pz[w] |= b;
            }
        }
        Ok((px, pz, neg))
    }

    fn scratch(&self) -> usize {
        2 * self.n
    }

    fn clear_row(&mut self, row: usize) {
        let w = self.words;
        self.x[row * w..(row + 1) * w].fill(0);
        self.z[row * w..(row + 1) * w].fill(0);
        self.r[row] = false;
    }

    fn copy_row(&mut self, dst: usize, src: usize) {
        let w = self.words;
        self.x.copy_within(src * w..(src + 1) * w, dst * w);
        self.z.copy_within(src * w..(src + 1) * w, dst * w);
        self.r[dst] = self.r[src];
    }

    /// Deterministic outcome bit of `p` (0 for eigenvalue +1), or `None` when
    /// the outcome is random. Does not change the state.
    pub fn peek(&self, p: &PauliOperator) -> Result<Option<bool>> {
        let (px, pz, neg) = self.pack(p)?;
        if (self.n..2 * self.n).any(|row| self.anticommutes_row(row, &px, &pz)) {
            return Ok(None);
        }
        let mut tmp = self.clone();
        let s = tmp.scratch();
        tmp.clear_row(s);
        for i in 0..self.n {
            if self.anticommutes_row(i, &px, &pz) {
                tmp.rowsum(s, i + self.n);
            }
        }
        Ok(Some(tmp.r[s] ^ neg))
    }

    /// Expectation value of a Hermitian Pauli: +1, -1 or 0.
    pub fn expectation(&self, p: &PauliOperator) -> Result<i8> {
        Ok(match self.peek(p)? {
            None => 0,
            Some(false) => 1,
            Some(true) => -1,
        })
    }

    /// Measure a Hermitian Pauli observable; returns the outcome bit
    /// (`false` for eigenvalue +1).
    pub fn measure_pauli(&mut self, p: &PauliOperator, rng: &mut SimRng) -> Result<bool> {
        let (px, pz, neg) = self.pack(p)?;
        let n = self.n;
        let pivot = (n..2 * n).find(|&row| self.anticommutes_row(row, &px, &pz));
        match pivot {
            Some(pr) => {
                for i in 0..2 * n {
                    if i != pr && self.anticommutes_row(i, &px, &pz) {
                        self.rowsum(i, pr);
                    }
                }
                self.copy_row(pr - n, pr);
                let outcome = rng.bit();
                let w = self.words;
                self.x[pr * w..(pr + 1) * w].copy_from_slice(&px);
                self.z[pr * w..(pr + 1) * w].copy_from_slice(&pz);
                self.r[pr] = outcome ^ neg;
                Ok(outcome)
            }
            None => {
                let s = self.scratch();
                self.clear_row(s);
                for i in 0..n {
                    if self.anticommutes_row(i, &px, &pz) {
                        self.rowsum(s, i + n);
                    }
                }
                Ok(self.r[s] ^ neg)
            }
        }
    }

    /// Computational-basis measurement of qubit `q`.
    pub fn measure_z(&mut self, q: usize, rng: &mut SimRng) -> Result<bool> {
        self.check(q)?;
        self.measure_pauli(&PauliOperator::qubit(self.n, q, crate::pauli::Pauli1::Z), rng)
    }

    /// Measurement of qubit `q` in the `|+>, |->` basis.
    pub fn measure_x(&mut self, q: usize, rng: &mut SimRng) -> Result<bool> {
        self.check(q)?;
        self.measure_pauli(&PauliOperator::qubit(self.n, q, crate::pauli::Pauli1::X), rng)
    }

    /// Measure `q` in Z and flip it back to `|0>`.
    pub fn reset(&mut self, q: usize, rng: &mut SimRng) -> Result<()> {
        if self.measure_z(q, rng)? {
            self.apply(&Gate::X(q))?;
        }
        Ok(())
    }

    fn row_pauli(&self, row: usize) -> PauliOperator {
        let xs: Vec<bool> = (0..self.n).map(|q| self.get_x(row, q)).collect();
        let zs: Vec<bool> = (0..self.n).map(|q| self.get_z(row, q)).collect();
        PauliOperator::from_signed_bits(&xs, &zs, self.r[row])
    }

    pub fn stabilizers(&self) -> Vec<PauliOperator> {
        (self.n..2 * self.n).map(|r| self.row_pauli(r)).collect()
    }

    pub fn destabilizers(&self) -> Vec<PauliOperator> {
        (0..self.n).map(|r| self.row_pauli(r)).collect()
    }

    /// Reduced row-echelon form of the stabilizer group, for comparing states
    /// irrespective of generator choice.
    pub fn canonical_stabilizers(&self) -> Vec<PauliOperator> {
        let mut t = self.clone();
        let n = self.n;
        let mut next = n;
        // X part first, then Z part, column by column.
        for pass in 0..2 {
            for q in 0..n {
                let bit = |t: &Self, row: usize| {
                    if pass == 0 {
                        t.get_x(row, q)
                    } else {
                        t.get_z(row, q) && !t.get_x(row, q)
                    }
                };
                let Some(p) = (next..2 * n).find(|&row| bit(&t, row)) else {
                    continue;
                };
                if p != next {
                    let s = t.scratch();
                    t.copy_row(s, p);
                    t.copy_row(p, next);
                    t.copy_row(next, s);
                }
                for row in n..2 * n {
                    if row != next && (if pass == 0 { t.get_x(row, q) } else { t.get_z(row, q) && !t.get_x(row, q) }) {
                        t.rowsum(row, next);
                    }
                }
                next += 1;
            }
        }
        t.stabilizers()
    }

    /// Label of a pair that is in a definite Bell state.
    pub fn bell_identify(&self, a: usize, b: usize) -> Result<BellLabel> {
        self.check(a)?;
        self.check(b)?;
        if a == b {
            return Err(SimError::RepeatedTarget(a));
        }
        let mut xx = PauliOperator::identity(self.n, 2);
        xx.set_qubit(a, crate::pauli::Pauli1::X);
        xx.set_qubit(b, crate::pauli::Pauli1::X);
        let mut zz = PauliOperator::identity(self.n, 2);
        zz.set_qubit(a, crate::pauli::Pauli1::Z);
        zz.set_qubit(b, crate::pauli::Pauli1::Z);
        match (self.peek(&xx)?, self.peek(&zz)?) {
            (Some(zbit), Some(xbit)) => Ok(BellLabel::from_bits(zbit, xbit)),
            _ => Err(SimError::NotBellPair(a, b)),
        }
    }

    /// Append `k` fresh `|0>` qubits at the end of the register.
    pub fn extend(&self, k: usize) -> Self {
        let mut out = Self::new(self.n + k);
        for row in 0..self.n {
            for (src, dst) in [(row, row), (self.n + row, out.n + row)] {
                for q in 0..self.n {
                    let (w, b) = word_bit(q);
                    if self.get_x(src, q) {
                        out.x[dst * out.words + w] |= b;
                    } else {
                        out.x[dst * out.words + w] &= !b;
                    }
                    if self.get_z(src, q) {
                        out.z[dst * out.words + w] |= b;
                    } else {
                        out.z[dst * out.words + w] &= !b;
                    }
                }
                out.r[dst] = self.r[src];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn paulis(list: &[&str]) -> Vec<PauliOperator> {
        list.iter().map(|s| PauliOperator::parse_qubits(s).unwrap()).collect()
    }

    fn same_group(t: &StabilizerState, gens: &[&str]) -> bool {
        gens.iter()
            .all(|g| t.peek(&PauliOperator::parse_qubits(g).unwrap()).unwrap() == Some(false))
    }

    #[test]
    fn bell_preparation() {
        let mut t = StabilizerState::new(2);
        t.apply_all(&[Gate::H(0), Gate::Cnot(0, 1)]).unwrap();
        assert!(same_group(&t, &["XX", "ZZ"]));
        assert_eq!(t.bell_identify(0, 1).unwrap(), BellLabel::PhiPlus);
    }

    #[test]
    fn ghz_from_bell_and_fresh_qubit() {
        let mut t = StabilizerState::new(3);
        t.apply_all(&[Gate::H(0), Gate::Cnot(0, 1), Gate::Cnot(1, 2)]).unwrap();
        assert!(same_group(&t, &["XXX", "ZZI", "IZZ"]));
    }

    #[test]
    fn bell_labels_under_single_paulis() {
        for (g, want) in [
            (None, BellLabel::PhiPlus),
            (Some(Gate::Z(0)), BellLabel::PhiMinus),
            (Some(Gate::X(1)), BellLabel::PsiPlus),
            (Some(Gate::Y(0)), BellLabel::PsiMinus),
        ] {
            let mut t = StabilizerState::new(2);
            t.apply_all(&[Gate::H(0), Gate::Cnot(0, 1)]).unwrap();
            if let Some(g) = g {
                t.apply(&g).unwrap();
            }
            assert_eq!(t.bell_identify(0, 1).unwrap(), want);
        }
    }

    #[test]
    fn phi_minus_x_outcomes_disagree() {
        let mut rng = SimRng::new(5);
        for _ in 0..50 {
            let mut t = StabilizerState::new(2);
            t.apply_all(&[Gate::H(0), Gate::Cnot(0, 1), Gate::Z(0)]).unwrap();
            let a = t.measure_x(0, &mut rng).unwrap();
            let b = t.measure_x(1, &mut rng).unwrap();
            assert_ne!(a, b);
        }
    }

    #[test]
    fn xx_on_phi_plus_is_deterministic() {
        let mut rng = SimRng::new(1);
        let mut t = StabilizerState::new(2);
        t.apply_all(&[Gate::H(0), Gate::Cnot(0, 1)]).unwrap();
        let before = t.canonical_stabilizers();
        let out = t.measure_pauli(&paulis(&["XX"])[0], &mut rng).unwrap();
        assert!(!out);
        assert_eq!(t.canonical_stabilizers(), before);
    }

    #[test]
    fn plus_state_z_statistics() {
        let mut rng = SimRng::new(11);
        let trials = 10_000;
        let ones = (0..trials)
            .filter(|_| {
                let mut t = StabilizerState::new(1);
                t.apply(&Gate::H(0)).unwrap();
                t.measure_z(0, &mut rng).unwrap()
            })
            .count();
        let f = ones as f64 / trials as f64;
        assert!((f - 0.5).abs() < 0.02, "{f}");
    }

    #[test]
    fn rejects_out_of_range_and_qutrit_gates() {
        let mut t = StabilizerState::new(2);
        assert!(matches!(t.apply(&Gate::H(2)), Err(SimError::IndexOutOfRange { .. })));
        assert!(matches!(t.apply(&Gate::Fourier(0)), Err(SimError::UnsupportedGate(_))));
        assert!(t.bell_identify(0, 1).is_err());
    }

    #[test]
    fn wide_register_crosses_word_boundary() {
        let mut t = StabilizerState::new(130);
        t.apply_all(&[Gate::H(3), Gate::Cnot(3, 129), Gate::Z(129)]).unwrap();
        assert_eq!(t.bell_identify(3, 129).unwrap(), BellLabel::PhiMinus);
        let e = t.extend(2);
        assert_eq!(e.bell_identify(3, 129).unwrap(), BellLabel::PhiMinus);
        assert_eq!(e.expectation(&PauliOperator::qubit(132, 131, crate::pauli::Pauli1::Z)).unwrap(), 1);
    }

    fn arb_clifford(n: usize) -> impl Strategy<Value = Vec<Gate>> {
        let g = (0..7u8, 0..n, 0..n).prop_filter_map("distinct", |(k, a, b)| {
            Some(match k {
                0 => Gate::H(a),
                1 => Gate::S(a),
                2 => Gate::X(a),
                3 => Gate::Z(a),
                4 if a != b => Gate::Cnot(a, b),
                5 if a != b => Gate::Cz(a, b),
                6 if a != b => Gate::Swap(a, b),
                _ => return None,
            })
        });
        proptest::collection::vec(g, 0..60)
    }

    proptest! {
        #[test]
        fn stabilizer_measurement_is_deterministic_and_nondestructive(gates in arb_clifford(5), seed in 0u64..1000) {
            let mut t = StabilizerState::new(5);
            t.apply_all(&gates).unwrap();
            let mut rng = SimRng::new(seed);
            let before = t.canonical_stabilizers();
            for g in t.stabilizers() {
                prop_assert_eq!(t.measure_pauli(&g, &mut rng).unwrap(), false);
            }
            prop_assert_eq!(t.canonical_stabilizers(), before);
        }

        #[test]
        fn tableau_rows_keep_commutation_structure(gates in arb_clifford(6), seed in 0u64..1000) {
            let mut t = StabilizerState::new(6);
            t.apply_all(&gates).unwrap();
            let mut rng = SimRng::new(seed);
            t.measure_z(2, &mut rng).unwrap();
            let s = t.stabilizers();
            let d = t.destabilizers();
            for i in 0..6 {
                for j in 0..6 {
                    prop_assert!(s[i].commutes_with(&s[j]));
                    prop_assert_eq!(d[i].commutes_with(&s[j]), i != j);
                }
            }
        }
    }
}
