use std::collections::BTreeMap;

use rand::RngCore;
use serde::Serialize;

#[cfg(test)]
use super::TestQubitLayout;
use crate::channels::PauliChannel;
use crate::dense::DenseState;
use crate::density::DensityMatrix;
use crate::error::{Result, SimError};
use crate::pauli::{Pauli1, PauliOperator};
use crate::rng::SimRng;

/// Transit error as bit masks over data, x-tests and z-tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct ErrorMasks {
    xd: u64,
    zd: u64,
    xx: u64,
    zx: u64,
    xz: u64,
    zz: u64,
}

fn low_mask(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

fn par(v: u64) -> bool {
    v.count_ones() & 1 == 1
}

impl ErrorMasks {
    fn new(error: &PauliOperator, n: usize, r: usize) -> Result<Self> {
        if error.len() != n + 2 * r || error.dim() != 2 {
            return Err(SimError::LengthMismatch {
                expected: n + 2 * r,
                found: error.len(),
            });
        }
        let pick = |exp: &[u8], lo: usize, len: usize| {
            (0..len).fold(0u64, |acc, q| acc | ((exp[lo + q] as u64 & 1) << q))
        };
        let (x, z) = (error.x_exp(), error.z_exp());
        Ok(Self {
            xd: pick(x, 0, n),
            zd: pick(z, 0, n),
            xx: pick(x, n, r),
            zx: pick(z, n, r),
            xz: pick(x, n + r, r),
            zz: pick(z, n + r, r),
        })
    }
}

/// One random layout, sampled only as far as needed to decide acceptance.
/// Returns the residual data error `(x, z)` when accepted.
fn lazy_trial(e: &ErrorMasks, n: usize, r: usize, rng: &mut SimRng) -> Option<(u64, u64)> {
    let nm = low_mask(n);
    let rm = low_mask(r);
    let mut s_z = [0u64; 64];
    let mut s_x = [0u64; 64];
    let mut t = [0u64; 64];
    let mut xd = e.xd;
    for j in 0..r {
        if e.xz >> j & 1 == 1 {
            s_z[j] = rng.next_u64() & nm;
            xd ^= s_z[j];
        }
    }
    for i in 0..r {
        s_x[i] = rng.next_u64() & nm;
        t[i] = rng.next_u64() & rm;
        if (e.xx >> i & 1 == 1) ^ par(s_x[i] & xd) ^ par(t[i] & e.xz) {
            return None;
        }
    }
    for j in 0..r {
        if e.xz >> j & 1 == 0 {
            s_z[j] = rng.next_u64() & nm;
        }
        let col = (0..r).fold(0u64, |acc, i| acc | ((t[i] >> j & 1) << i));
        if (e.zz >> j & 1 == 1) ^ par(s_z[j] & e.zd) ^ par(col & e.zx) {
            return None;
        }
    }
    let zd = (0..r).filter(|&i| e.zx >> i & 1 == 1).fold(e.zd, |acc, i| acc ^ s_x[i]);
    Some((xd, zd))
}

fn check_size(n: usize, r: usize) -> Result<()> {
    if n == 0 || r == 0 || n > 64 || r > 64 {
        return Err(SimError::Precondition(format!(
            "fast acceptance sampling needs 1 <= n, r <= 64 (got n={n}, r={r})"
        )));
    }
    Ok(())
}

/// Fraction of `trials` fresh random layouts that accept a fixed transit error.
pub fn detection_frequency(error: &PauliOperator, n: usize, r: usize, trials: usize, rng: &mut SimRng) -> Result<f64> {
    check_size(n, r)?;
    let e = ErrorMasks::new(error, n, r)?;
    let accepted = (0..trials).filter(|_| lazy_trial(&e, n, r, rng).is_some()).count();
    Ok(accepted as f64 / trials as f64)
}

/// One fresh random layout against `error` on all `n + 2r` qubits; the
/// residual data error `(x, z)` masks when accepted.
pub fn acceptance_trial(error: &PauliOperator, n: usize, r: usize, rng: &mut SimRng) -> Result<Option<(u64, u64)>> {
    check_size(n, r)?;
    let e = ErrorMasks::new(error, n, r)?;
    Ok(lazy_trial(&e, n, r, rng))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ErrorAcceptance {
    pub error: String,
    pub probability: f64,
    pub c: f64,
    #[serde(skip)]
    residuals: Vec<((u64, u64), usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AcceptanceAnalysis {
    pub channel: String,
    pub n: usize,
    pub r: usize,
    pub trials: usize,
    pub prob_accept: f64,
    pub max_nontrivial_c: f64,
    pub eve_entropy_bound_bits: Option<f64>,
    #[serde(skip)]
    pub per_error: Vec<ErrorAcceptance>,
    #[serde(skip)]
    pub prob_accept_sigma: f64,
}

impl AcceptanceAnalysis {
    /// Upper bound `e_0 + 2^-r (1 - e_0)` on the acceptance probability.
    pub fn accept_bound(&self, e0: f64) -> f64 {
        e0 + (1.0 - e0) * 0.5f64.powi(self.r as i32)
    }
}

const PROBES: usize = 64;

/// Monte Carlo acceptance coefficients for every error in `channel`, which acts
/// on the `n` data qubits or on all `n + 2r` cipher-text qubits. For `n <= 3`
/// also bounds Eve's information by the entropy of the normalized accepted
/// data state, maximized over probe inputs.
pub fn analyze_acceptance(
    channel: &PauliChannel,
    n: usize,
    r: usize,
    trials: usize,
    rng: &mut SimRng,
) -> Result<AcceptanceAnalysis> {
    check_size(n, r)?;
    if trials < 1000 {
        return Err(SimError::Precondition(format!("trials = {trials} < 1000")));
    }
    let m = n + 2 * r;
    let embed: Vec<usize> = match channel.num_qubits() {
        k if k == m => (0..m).collect(),
        k if k == n => (0..n).collect(),
        k => return Err(SimError::LengthMismatch { expected: m, found: k }),
    };
    let mut per_error = Vec::new();
    let mut prob_accept = 0.0;
    let mut var = 0.0;
    let mut max_c: f64 = 0.0;
    for (p, w) in channel.entries() {
        let full = p.embed(m, &embed);
        let e = ErrorMasks::new(&full, n, r)?;
        let mut sub = rng.split();
        let mut hist: BTreeMap<(u64, u64), usize> = BTreeMap::new();
        for _ in 0..trials {
            if let Some(res) = lazy_trial(&e, n, r, &mut sub) {
                *hist.entry(res).or_default() += 1;
            }
        }
        let accepted: usize = hist.values().sum();
        let c = accepted as f64 / trials as f64;
        prob_accept += w * c;
        var += w * w * c * (1.0 - c) / trials as f64;
        if !full.is_identity() {
            max_c = max_c.max(c);
        }
        per_error.push(ErrorAcceptance {
            error: full.to_string(),
            probability: w,
            c,
            residuals: hist.into_iter().collect(),
        });
    }
    let eve = if n <= 3 {
        Some(entropy_bound(&per_error, n, trials, rng)?)
    } else {
        None
    };
    Ok(AcceptanceAnalysis {
        channel: channel.name(),
        n,
        r,
        trials,
        prob_accept,
        max_nontrivial_c: max_c,
        eve_entropy_bound_bits: eve,
        per_error,
        prob_accept_sigma: var.sqrt(),
    })
}

fn entropy_bound(per_error: &[ErrorAcceptance], n: usize, trials: usize, rng: &mut SimRng) -> Result<f64> {
    let mut weights: BTreeMap<(u64, u64), f64> = BTreeMap::new();
    for ea in per_error {
        for &(res, count) in &ea.residuals {
            *weights.entry(res).or_default() += ea.probability * count as f64 / trials as f64;
        }
    }
    let ops: Vec<(PauliOperator, f64)> = weights
        .into_iter()
        .map(|((x, z), w)| {
            let mut p = PauliOperator::identity(n, 2);
            for q in 0..n {
                p.set_qubit(q, Pauli1::from_bits(x >> q & 1 == 1, z >> q & 1 == 1));
            }
            (p, w)
        })
        .collect();
    let total: f64 = ops.iter().map(|o| o.1).sum();
    if total <= 0.0 {
        return Ok(0.0);
    }
    let mut probes: Vec<DenseState<f64>> = (0..PROBES)
        .map(|_| DenseState::random(n, 2, rng))
        .collect::<Result<_>>()?;
    for b in 0..1usize << n {
        probes.push(DenseState::basis(n, 2, b)?);
    }
    let mut best: f64 = 0.0;
    for psi in &probes {
        let mut rho = DensityMatrix::zeros(n, 2);
        for (p, w) in &ops {
            let mut s = psi.clone();
            s.apply_pauli(p)?;
            rho.add_scaled(&s.density(), w / total)?;
        }
        best = best.max(rho.entropy());
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn masks_of(layout: &TestQubitLayout) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
        let m = |s: &[usize]| s.iter().fold(0u64, |a, &q| a | 1 << q);
        (
            layout.s_x().iter().map(|s| m(s)).collect(),
            layout.s_z().iter().map(|s| m(s)).collect(),
            layout.t_x().iter().map(|s| m(s)).collect(),
        )
    }

    #[test]
    fn mask_rule_agrees_with_frame_on_fixed_layouts() {
        // Replays the lazy rule with a fully specified layout.
        let mut rng = SimRng::new(11);
        for _ in 0..300 {
            let (n, r) = (1 + rng.below(4), 1 + rng.below(4));
            let layout = TestQubitLayout::random(n, r, &mut rng);
            let mut e = PauliOperator::identity(n + 2 * r, 2);
            for q in 0..n + 2 * r {
                e.set_qubit(q, Pauli1::ALL[rng.below(4)]);
            }
            let em = ErrorMasks::new(&e, n, r).unwrap();
            let (sx, sz, t) = masks_of(&layout);
            let xd = (0..r).filter(|&j| em.xz >> j & 1 == 1).fold(em.xd, |a, j| a ^ sz[j]);
            let x_ok = (0..r).all(|i| !((em.xx >> i & 1 == 1) ^ par(sx[i] & xd) ^ par(t[i] & em.xz)));
            let z_ok = (0..r).all(|j| {
                let col = (0..r).fold(0u64, |a, i| a | ((t[i] >> j & 1) << i));
                !((em.zz >> j & 1 == 1) ^ par(sz[j] & em.zd) ^ par(col & em.zx))
            });
            assert_eq!(x_ok && z_ok, layout.propagate(&e).unwrap().accepted());
        }
    }

    #[test]
    fn lazy_sampling_matches_layout_sampling() {
        let mut rng = SimRng::new(12);
        let (n, r) = (2, 2);
        for e in ["XIIIII", "IIIIXI", "IIZIII", "YIIIYI"] {
            let e = PauliOperator::parse_qubits(e).unwrap();
            let trials = 20_000;
            let fast = detection_frequency(&e, n, r, trials, &mut rng).unwrap();
            let slow = (0..trials)
                .filter(|_| {
                    TestQubitLayout::random(n, r, &mut rng)
                        .propagate(&e)
                        .unwrap()
                        .accepted()
                })
                .count() as f64
                / trials as f64;
            let sigma = (fast.max(slow) * (1.0 - fast.min(slow)) * 2.0 / trials as f64).sqrt();
            assert!((fast - slow).abs() < 5.0 * sigma + 1e-3, "{e}: {fast} vs {slow}");
        }
    }

    #[test]
    fn noiseless_channel_accepts_with_zero_bound() {
        let mut rng = SimRng::new(13);
        let ch = PauliChannel::fixed(PauliOperator::identity(1, 2));
        let a = analyze_acceptance(&ch, 1, 3, 1000, &mut rng).unwrap();
        assert_eq!(a.prob_accept, 1.0);
        assert!(a.eve_entropy_bound_bits.unwrap().abs() < 1e-9);
        assert!(analyze_acceptance(&ch, 1, 3, 10, &mut rng).is_err());
    }

    #[test]
    fn mixed_channel_acceptance_is_bounded() {
        let mut rng = SimRng::new(14);
        let ch = PauliChannel::explicit(
            1,
            vec![
                (PauliOperator::parse_qubits("I").unwrap(), 0.9),
                (PauliOperator::parse_qubits("X").unwrap(), 0.1),
            ],
        )
        .unwrap();
        let a = analyze_acceptance(&ch, 1, 6, 20_000, &mut rng).unwrap();
        assert!(a.prob_accept >= 0.9 - 1e-12);
        assert!(a.prob_accept <= a.accept_bound(0.9) + 3.0 * a.prob_accept_sigma + 1e-12);
        let json = serde_json::to_string(&a).unwrap();
        assert!(json.starts_with("{\"channel\":"));
        assert!(json.contains("\"eveEntropyBoundBits\""));
    }
}
