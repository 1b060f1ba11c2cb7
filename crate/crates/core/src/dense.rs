//! Dense amplitude vectors over qubits or qutrits.
//!
//! Qudit `q` has place value `d^q` in the amplitude index (little-endian).

use num_complex::Complex;

use crate::density::DensityMatrix;
use crate::error::{Result, SimError};
use crate::gate::Gate;
use crate::pauli::PauliOperator;
use crate::rng::SimRng;
use crate::scalar::Real;
use crate::tableau::StabilizerState;

/// Largest register size allowed by default.
pub fn default_cap(d: usize) -> usize {
    if d == 3 {
        3usize.pow(9)
    } else {
        1 << 14
    }
}

/// Drift allowed in the squared norm after long circuits.
pub const NORM_DRIFT: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseState<T: Real = f64> {
    n: usize,
    d: usize,
    amps: Vec<Complex<T>>,
}

fn size_for(n: usize, d: usize, cap: usize) -> Result<usize> {
    let size = (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(SimError::CapExceeded { qudits: n, dim: d, cap });
    }
    Ok(size as usize)
}

/// Unitary matrix of a named gate, row-major over its targets (first target
/// least significant).
pub fn gate_matrix<T: Real>(gate: &Gate) -> Vec<Complex<T>> {
    let c = |re: f64, im: f64| Complex::new(T::lit(re), T::lit(im));
    let o = c(0.0, 0.0);
    let l = c(1.0, 0.0);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let w3 = |k: usize| {
        let a = 2.0 * std::f64::consts::PI * (k % 3) as f64 / 3.0;
        c(a.cos(), a.sin())
    };
    let perm = |dim: usize, f: &dyn Fn(usize) -> usize| {
        let mut m = vec![o; dim * dim];
        for col in 0..dim {
            m[f(col) * dim + col] = l;
        }
        m
    };
    match gate {
        Gate::X(_) => vec![o, l, l, o],
        Gate::Y(_) => vec![o, c(0.0, -1.0), c(0.0, 1.0), o],
        Gate::Z(_) => vec![l, o, o, c(-1.0, 0.0)],
        Gate::H(_) => vec![c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)],
        Gate::S(_) => vec![l, o, o, c(0.0, 1.0)],
        Gate::Sdg(_) => vec![l, o, o, c(0.0, -1.0)],
        // local index = first target + 2 * second target
        Gate::Cnot(..) => perm(4, &|i| if i & 1 == 1 { i ^ 2 } else { i }),
        Gate::Swap(..) => perm(4, &|i| ((i & 1) << 1) | (i >> 1)),
        Gate::Cz(..) => {
            let mut m = perm(4, &|i| i);
            m[15] = c(-1.0, 0.0);
            m
        }
        Gate::Shift(_) => perm(3, &|i| (i + 1) % 3),
        Gate::Phase(_) => {
            let mut m = vec![o; 9];
            for j in 0..3 {
                m[j * 3 + j] = w3(j);
            }
            m
        }
        Gate::Sum(..) => perm(9, &|i| {
            let (a, b) = (i % 3, i / 3);
            a + 3 * ((b + a) % 3)
        }),
        Gate::Diff(..) => perm(9, &|i| {
            let (a, b) = (i % 3, i / 3);
            a + 3 * ((b + 3 - a) % 3)
        }),
        Gate::Fourier(_) => {
            let s = 1.0 / 3f64.sqrt();
            let mut m = vec![o; 9];
            for j in 0..3 {
                for k in 0..3 {
                    m[k * 3 + j] = w3(j * k) * T::lit(s);
                }
            }
            m
        }
    }
}

impl<T: Real> DenseState<T> {
    /// `|0...0>` with the default cap.
    pub fn zero(n: usize, d: usize) -> Result<Self> {
        Self::basis(n, d, 0)
    }

    pub fn basis(n: usize, d: usize, index: usize) -> Result<Self> {
        if d != 2 && d != 3 {
            return Err(SimError::DimensionMismatch { expected: 2, found: d });
        }
        let size = size_for(n, d, default_cap(d))?;
        if index >= size {
            return Err(SimError::IndexOutOfRange { index, size });
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); size];
        amps[index] = Complex::new(T::one(), T::zero());
        Ok(Self { n, d, amps })
    }

    /// Wrap an amplitude vector; the length must be `d^n` and the norm 1.
    pub fn from_amplitudes(n: usize, d: usize, amps: Vec<Complex<T>>) -> Result<Self> {
        let size = size_for(n, d, default_cap(d))?;
        if amps.len() != size {
            return Err(SimError::LengthMismatch {
                expected: size,
                found: amps.len(),
            });
        }
        let s = Self { n, d, amps };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > NORM_DRIFT.max(10.0 * T::amp_tol().as_f64()) {
            return Err(SimError::Precondition(format!("state norm {norm}")));
        }
        Ok(s)
    }

    /// Haar-random pure state.
    pub fn random(n: usize, d: usize, rng: &mut SimRng) -> Result<Self> {
        let size = size_for(n, d, default_cap(d))?;
        let mut amps: Vec<Complex<T>> = (0..size)
            .map(|_| Complex::new(T::lit(rng.gaussian()), T::lit(rng.gaussian())))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).fold(T::zero(), |x, y| x + y).sqrt();
        for a in &mut amps {
            *a = *a / norm;
        }
        Ok(Self { n, d, amps })
    }

    pub fn num_qudits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr().as_f64()).sum()
    }

    pub fn renormalize(&mut self) {
        let norm = T::lit(self.norm_sqr().sqrt());
        for a in &mut self.amps {
            *a = *a / norm;
        }
    }

    /// `self` on the low qudits, `other` appended above.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(SimError::DimensionMismatch {
                expected: self.d,
                found: other.d,
            });
        }
        size_for(self.n + other.n, self.d, default_cap(self.d))?;
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for b in &other.amps {
            for a in &self.amps {
                amps.push(*a * *b);
            }
        }
        Ok(Self {
            n: self.n + other.n,
            d: self.d,
            amps,
        })
    }

    fn stride(&self, q: usize) -> usize {
        self.d.pow(q as u32)
    }

    fn digit(&self, index: usize, q: usize) -> usize {
        (index / self.stride(q)) % self.d
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

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        if gate.dim() != self.d {
            return Err(SimError::DimensionMismatch {
                expected: self.d,
                found: gate.dim(),
            });
        }
        self.apply_matrix(&gate.targets(), &gate_matrix::<T>(gate))
    }

    pub fn apply_all(&mut self, gates: &[Gate]) -> Result<()> {
        gates.iter().try_for_each(|g| self.apply(g))
    }

    /// Apply a `d^k x d^k` row-major matrix to `targets` (first target least
    /// significant in the local index).
    pub fn apply_matrix(&mut self, targets: &[usize], m: &[Complex<T>]) -> Result<()> {
        for (i, &t) in targets.iter().enumerate() {
            self.check(t)?;
            if targets[..i].contains(&t) {
                return Err(SimError::RepeatedTarget(t));
            }
        }
        let k = targets.len();
        let local = self.d.pow(k as u32);
        if m.len() != local * local {
            return Err(SimError::LengthMismatch {
                expected: local * local,
                found: m.len(),
            });
        }
        let offsets: Vec<usize> = (0..local)
            .map(|l| {
                let mut rem = l;
                let mut off = 0;
                for &t in targets {
                    off += (rem % self.d) * self.stride(t);
                    rem /= self.d;
                }
                off
            })
            .collect();
        let zero = Complex::new(T::zero(), T::zero());
        let mut buf = vec![zero; local];
        for base in 0..self.amps.len() {
            if targets.iter().any(|&t| self.digit(base, t) != 0) {
                continue;
            }
            for (l, &off) in offsets.iter().enumerate() {
                buf[l] = self.amps[base + off];
            }
            for row in 0..local {
                let mut acc = zero;
                for col in 0..local {
                    let e = m[row * local + col];
                    if e != zero {
                        acc = acc + e * buf[col];
                    }
                }
                self.amps[base + offsets[row]] = acc;
            }
        }
        Ok(())
    }

    fn pauli_image(&self, p: &PauliOperator) -> Result<Vec<Complex<T>>> {
        if p.len() != self.n {
            return Err(SimError::LengthMismatch {
                expected: self.n,
                found: p.len(),
            });
        }
        if p.dim() as usize != self.d {
            return Err(SimError::DimensionMismatch {
                expected: self.d,
                found: p.dim() as usize,
            });
        }
        let d = self.d;
        let root = |k: usize, m: usize| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
            Complex::new(T::lit(a.cos()), T::lit(a.sin()))
        };
        let global = root(p.phase() as usize, 2 * d);
        let mut out = vec![Complex::new(T::zero(), T::zero()); self.amps.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let mut rem = i;
            let mut j = 0;
            let mut ph = 0;
            for q in 0..self.n {
                let dig = rem % d;
                rem /= d;
                ph += p.z_exp()[q] as usize * dig;
                j += ((dig + p.x_exp()[q] as usize) % d) * self.stride(q);
            }
            out[j] = *a * global * root(ph % d, d);
        }
        Ok(out)
    }

    pub fn apply_pauli(&mut self, p: &PauliOperator) -> Result<()> {
        self.amps = self.pauli_image(p)?;
        Ok(())
    }

    /// Expectation `<psi|P|psi>`.
    pub fn expectation(&self, p: &PauliOperator) -> Result<Complex<f64>> {
        let img = self.pauli_image(p)?;
        Ok(self
            .amps
            .iter()
            .zip(&img)
            .map(|(a, b)| {
                let v = a.conj() * *b;
                Complex::new(v.re.as_f64(), v.im.as_f64())
            })
            .sum())
    }

    /// Measure a Pauli observable. The outcome `k` labels the eigenvalue
    /// `exp(2 pi i k / d)` of the operator rescaled so that `P^d = I`; for a
    /// Hermitian qubit Pauli, 0 is +1 and 1 is -1.
    pub fn measure_pauli(&mut self, p: &PauliOperator, rng: &mut SimRng) -> Result<u8> {
        let d = self.d;
        if p.dim() as usize == 2 && d == 2 && !p.is_hermitian() {
            return Err(SimError::MalformedObservable("non-Hermitian qubit observable".into()));
        }
        let mut power = p.clone();
        for _ in 1..d {
            power = power.compose(p)?;
        }
        // P^d = w^phi I; rescale by w^(-phi/d).
        let ang = -2.0 * std::f64::consts::PI * power.phase() as f64 / (2 * d * d) as f64;
        let scale = Complex::new(T::lit(ang.cos()), T::lit(ang.sin()));
        let mut powers = vec![self.amps.clone()];
        let mut cur = self.clone();
        for _ in 1..d {
            let mut img = cur.pauli_image(p)?;
            for a in &mut img {
                *a = *a * scale;
            }
            cur.amps = img;
            powers.push(cur.amps.clone());
        }
        let zero = Complex::new(T::zero(), T::zero());
        let unit: Vec<Complex<T>> = (0..d)
            .map(|m| {
                let a = -2.0 * std::f64::consts::PI * m as f64 / d as f64;
                Complex::new(T::lit(a.cos()), T::lit(a.sin()))
            })
            .collect();
        let branches: Vec<Vec<Complex<T>>> = (0..d)
            .map(|k| {
                (0..self.amps.len())
                    .map(|i| {
                        let mut acc = zero;
                        for (j, pw) in powers.iter().enumerate() {
                            acc = acc + pw[i] * unit[(j * k) % d];
                        }
                        acc / T::lit(d as f64)
                    })
                    .collect()
            })
            .collect();
        let probs: Vec<f64> = branches
            .iter()
            .map(|b| b.iter().map(|a| a.norm_sqr().as_f64()).sum())
            .collect();
        let k = sample_index(&probs, rng);
        self.amps = branches[k].clone();
        self.renormalize();
        Ok(k as u8)
    }

    /// Computational-basis measurement of one qudit.
    pub fn measure_z(&mut self, q: usize, rng: &mut SimRng) -> Result<usize> {
        self.check(q)?;
        let mut probs = vec![0.0; self.d];
        for (i, a) in self.amps.iter().enumerate() {
            probs[self.digit(i, q)] += a.norm_sqr().as_f64();
        }
        let k = sample_index(&probs, rng);
        for i in 0..self.amps.len() {
            if self.digit(i, q) != k {
                self.amps[i] = Complex::new(T::zero(), T::zero());
            }
        }
        self.renormalize();
        Ok(k)
    }

    /// Measure `q` in the computational basis and return it to `|0>`.
    pub fn reset(&mut self, q: usize, rng: &mut SimRng) -> Result<()> {
        let k = self.measure_z(q, rng)?;
        for _ in 0..(self.d - k) % self.d {
            let g = if self.d == 2 { Gate::X(q) } else { Gate::Shift(q) };
            self.apply(&g)?;
        }
        Ok(())
    }

    pub fn inner(&self, other: &Self) -> Result<Complex<f64>> {
        if self.n != other.n || self.d != other.d {
            return Err(SimError::DimensionMismatch {
                expected: self.amps.len(),
                found: other.amps.len(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| {
                let v = a.conj() * *b;
                Complex::new(v.re.as_f64(), v.im.as_f64())
            })
            .sum())
    }

    /// `|<a|b>|^2`.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr().clamp(0.0, 1.0))
    }

    /// Fix the global phase so the first nonzero amplitude is real positive.
    pub fn normalize_phase(&mut self) {
        let tol = T::amp_tol();
        if let Some(a) = self.amps.iter().find(|a| a.norm() > tol) {
            let ph = a.conj() / a.norm();
            for x in &mut self.amps {
                *x = *x * ph;
            }
        }
    }

    /// Equality up to global phase within the amplitude tolerance.
    pub fn approx_eq(&self, other: &Self) -> bool {
        match self.fidelity(other) {
            Ok(f) => (1.0 - f).abs() < 10.0 * T::amp_tol().as_f64(),
            Err(_) => false,
        }
    }

    pub fn density(&self) -> DensityMatrix<T> {
        self.reduced(&(0..self.n).collect::<Vec<_>>())
    }

    /// Reduced density matrix on `keep` (in the given order, first kept qudit
    /// least significant).
    pub fn reduced(&self, keep: &[usize]) -> DensityMatrix<T> {
        let d = self.d;
        let k = keep.len();
        let dk = d.pow(k as u32);
        let traced: Vec<usize> = (0..self.n).filter(|q| !keep.contains(q)).collect();
        let dt = d.pow(traced.len() as u32);
        let zero = Complex::new(T::zero(), T::zero());
        // amplitude matrix psi[kept, traced]
        let mut psi = vec![zero; dk * dt];
        for (i, a) in self.amps.iter().enumerate() {
            let mut ki = 0;
            for (j, &q) in keep.iter().enumerate() {
                ki += self.digit(i, q) * d.pow(j as u32);
            }
            let mut ti = 0;
            for (j, &q) in traced.iter().enumerate() {
                ti += self.digit(i, q) * d.pow(j as u32);
            }
            psi[ki * dt + ti] = *a;
        }
        let mut rho = vec![zero; dk * dk];
        for r in 0..dk {
            for c in 0..dk {
                let mut acc = zero;
                for t in 0..dt {
                    acc = acc + psi[r * dt + t] * psi[c * dt + t].conj();
                }
                rho[r * dk + c] = acc;
            }
        }
        DensityMatrix::from_raw(k, d, rho)
    }

    /// Amplitudes of the stabilizer state described by a tableau.
    pub fn from_stabilizer(t: &StabilizerState) -> Result<Self> {
        let n = t.num_qubits();
        size_for(n, 2, default_cap(2))?;
        // A basis state in the support: collapse a copy in Z.
        let mut probe = t.clone();
        let mut rng = SimRng::new(0);
        let mut index = 0;
        for q in 0..n {
            if probe.measure_z(q, &mut rng)? {
                index |= 1 << q;
            }
        }
        let mut psi = Self::basis(n, 2, index)?;
        for g in t.stabilizers() {
            let img = psi.pauli_image(&g)?;
            for (a, b) in psi.amps.iter_mut().zip(img) {
                *a = (*a + b) * T::lit(0.5);
            }
        }
        psi.renormalize();
        psi.normalize_phase();
        Ok(psi)
    }
}

pub(crate) fn sample_index(probs: &[f64], rng: &mut SimRng) -> usize {
    let total: f64 = probs.iter().sum();
    let mut u = rng.unit() * total;
    for (k, &p) in probs.iter().enumerate() {
        if u < p {
            return k;
        }
        u -= p;
    }
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}
