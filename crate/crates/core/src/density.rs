//! Density matrices for small registers.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Result, SimError};
use crate::pauli::PauliOperator;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real = f64> {
    n: usize,
    d: usize,
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> DensityMatrix<T> {
    /// Row-major `d^n x d^n` data, taken as is.
    pub fn from_raw(n: usize, d: usize, data: Vec<Complex<T>>) -> Self {
        let dim = d.pow(n as u32);
        assert_eq!(data.len(), dim * dim);
        Self { n, d, dim, data }
    }

    pub fn zeros(n: usize, d: usize) -> Self {
        let dim = d.pow(n as u32);
        Self::from_raw(n, d, vec![Complex::new(T::zero(), T::zero()); dim * dim])
    }

    pub fn maximally_mixed(n: usize, d: usize) -> Self {
        let mut m = Self::zeros(n, d);
        let v = T::one() / T::lit(m.dim as f64);
        for i in 0..m.dim {
            m.data[i * m.dim + i] = Complex::new(v, T::zero());
        }
        m
    }

    pub fn num_qudits(&self) -> usize {
        self.n
    }

    pub fn local_dim(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Complex<T> {
        self.data[r * self.dim + c]
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(SimError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    /// `self += w * other`.
    pub fn add_scaled(&mut self, other: &Self, w: f64) -> Result<()> {
        self.same_shape(other)?;
        let w = T::lit(w);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a = *a + *b * w;
        }
        Ok(())
    }

    pub fn scale(&mut self, w: f64) {
        let w = T::lit(w);
        for a in &mut self.data {
            *a = *a * w;
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i].re.as_f64()).sum()
    }

    /// `P rho P^dag`.
    pub fn conjugate_pauli(&self, p: &PauliOperator) -> Result<Self> {
        if p.len() != self.n || p.dim() as usize != self.d {
            return Err(SimError::DimensionMismatch {
                expected: self.n,
                found: p.len(),
            });
        }
        // P|j> = c_j |pi(j)>
        let d = self.d;
        let root = |k: usize, m: usize| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
            Complex::new(T::lit(a.cos()), T::lit(a.sin()))
        };
        let mut perm = vec![0; self.dim];
        let mut coef = vec![Complex::new(T::zero(), T::zero()); self.dim];
        for j in 0..self.dim {
            let mut rem = j;
            let mut img = 0;
            let mut ph = 0;
            let mut stride = 1;
            for q in 0..self.n {
                let dig = rem % d;
                rem /= d;
                ph += p.z_exp()[q] as usize * dig;
                img += ((dig + p.x_exp()[q] as usize) % d) * stride;
                stride *= d;
            }
            perm[j] = img;
            coef[j] = root(ph % d, d);
        }
        let mut out = Self::zeros(self.n, self.d);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.data[perm[r] * self.dim + perm[c]] =
                    coef[r] * self.data[r * self.dim + c] * coef[c].conj();
            }
        }
        Ok(out)
    }

    /// Trace out everything except `keep` (first kept qudit least significant).
    pub fn partial_trace(&self, keep: &[usize]) -> Self {
        let d = self.d;
        let traced: Vec<usize> = (0..self.n).filter(|q| !keep.contains(q)).collect();
        let digit = |i: usize, q: usize| (i / d.pow(q as u32)) % d;
        let split = |i: usize| {
            let k = keep
                .iter()
                .enumerate()
                .map(|(j, &q)| digit(i, q) * d.pow(j as u32))
                .sum::<usize>();
            let t = traced
                .iter()
                .enumerate()
                .map(|(j, &q)| digit(i, q) * d.pow(j as u32))
                .sum::<usize>();
            (k, t)
        };
        let parts: Vec<(usize, usize)> = (0..self.dim).map(split).collect();
        let mut out = Self::zeros(keep.len(), d);
        for r in 0..self.dim {
            for c in 0..self.dim {
                let (kr, tr) = parts[r];
                let (kc, tc) = parts[c];
                if tr == tc {
                    let i = kr * out.dim + kc;
                    out.data[i] = out.data[i] + self.data[r * self.dim + c];
                }
            }
        }
        out
    }

    fn to_nalgebra(&self) -> DMatrix<Complex<f64>> {
        DMatrix::from_fn(self.dim, self.dim, |r, c| {
            let v = self.data[r * self.dim + c];
            Complex::new(v.re.as_f64(), v.im.as_f64())
        })
    }

    /// Eigenvalues of the Hermitian part.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let m = self.to_nalgebra();
        let h = (&m + m.adjoint()) * Complex::new(0.5, 0.0);
        h.symmetric_eigenvalues().iter().copied().collect()
    }

    /// `||a - b||_1 / 2`.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        self.same_shape(other)?;
        let mut diff = self.clone();
        diff.add_scaled(other, -1.0)?;
        Ok(diff.eigenvalues().iter().map(|e| e.abs()).sum::<f64>() / 2.0)
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        -self
            .eigenvalues()
            .iter()
            .filter(|&&e| e > 1e-12)
            .map(|e| e * e.log2())
            .sum::<f64>()
    }

    /// `<psi| rho |psi>` for a pure state given by its amplitudes.
    pub fn overlap_pure(&self, amps: &[Complex<T>]) -> f64 {
        let mut acc = Complex::new(T::zero(), T::zero());
        for r in 0..self.dim {
            for c in 0..self.dim {
                acc = acc + amps[r].conj() * self.data[r * self.dim + c] * amps[c];
            }
        }
        acc.re.as_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::DenseState;
    use crate::gate::Gate;
    use crate::rng::SimRng;

    #[test]
    fn pauli_twirl_of_any_qubit_state_is_mixed() {
        let mut rng = SimRng::new(8);
        let rho = DenseState::<f64>::random(1, 2, &mut rng).unwrap().density();
        let mut avg = DensityMatrix::zeros(1, 2);
        for (x, z) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            let p = PauliOperator::single(1, 2, 0, x, z);
            avg.add_scaled(&rho.conjugate_pauli(&p).unwrap(), 0.25).unwrap();
        }
        assert!(avg.trace_distance(&DensityMatrix::maximally_mixed(1, 2)).unwrap() < 1e-12);
        assert!((avg.entropy() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn partial_trace_matches_pure_reduction() {
        let mut rng = SimRng::new(1);
        let mut s = DenseState::<f64>::random(3, 2, &mut rng).unwrap();
        s.apply(&Gate::Cnot(0, 2)).unwrap();
        let a = s.density().partial_trace(&[2, 0]);
        let b = s.reduced(&[2, 0]);
        assert!(a.trace_distance(&b).unwrap() < 1e-12);
        assert!((a.trace() - 1.0).abs() < 1e-12);
    }
}
