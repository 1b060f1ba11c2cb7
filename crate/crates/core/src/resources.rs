//! Ebit accounting: recyclable fraction of an entanglement-keyed cipher
//! versus entanglement distillable over the same channel.

use serde::Serialize;

use crate::channels::{shannon_entropy, PauliChannel};
use crate::error::{Result, SimError};
use crate::pauli::Pauli1;
use crate::qvc::{
    hash_identify, preliminary_test, BellPairs, QvcBackend, QvcFrame, RecycleParams,
};
use crate::rng::SimRng;

const VERDICT_TOL: f64 = 1e-12;

fn check(p: &[f64; 4]) -> Result<()> {
    let total: f64 = p.iter().sum();
    if p.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) || (total - 1.0).abs() > 1e-9 {
        return Err(SimError::InvalidDistribution(format!("{p:?}")));
    }
    Ok(())
}

/// Per-qubit `(I, X, Z, XZ)` distribution of a channel, if it has one.
pub fn per_qubit_distribution(channel: &PauliChannel) -> Result<[f64; 4]> {
    if let Some(p) = channel.per_qubit() {
        return Ok(p);
    }
    if channel.num_qubits() == 1 {
        let mut p = [0.0; 4];
        for (op, w) in channel.entries() {
            let k = Pauli1::ALL.iter().position(|&l| l == op.letter(0)).expect("qubit letter");
            p[k] += w;
        }
        return Ok(p);
    }
    Err(SimError::InvalidDistribution(
        "channel is not an independent per-qubit channel".into(),
    ))
}

/// `F = 1 - S(p)/2`, clamped to `[0, 1]`.
pub fn recyclable_fraction(p: &[f64; 4]) -> Result<f64> {
    check(p)?;
    Ok((1.0 - shannon_entropy(p) / 2.0).clamp(0.0, 1.0))
}

/// Hashing rate `max(0, 1 - S(q))` of the Bell-diagonal state made by sending
/// half of a `Phi+` through the channel; `q` carries the same weights as `p`.
pub fn distillable_rate(p: &[f64; 4]) -> Result<f64> {
    check(p)?;
    Ok((1.0 - shannon_entropy(&induced_bell_distribution(p))).max(0.0))
}

/// Bell-label weights `(Phi+, Phi-, Psi+, Psi-)` induced by `p`.
pub fn induced_bell_distribution(p: &[f64; 4]) -> [f64; 4] {
    // I -> Phi+, X -> Psi+, Z -> Phi-, XZ -> Psi-
    [p[0], p[2], p[1], p[3]]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    TeleportBetter,
    Equal,
    QvcBetter,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ResourceComparison {
    pub channel: String,
    pub n: usize,
    pub f: f64,
    pub d2: f64,
    pub qvc_ebits: f64,
    pub teleport_ebits: f64,
    pub verdict: Verdict,
}

impl ResourceComparison {
    /// `F <= (1 + D2)/2`.
    pub fn teleport_at_least_as_good(&self) -> bool {
        self.f <= (1.0 + self.d2) / 2.0 + VERDICT_TOL
    }
}

pub fn compare_methods(name: &str, p: &[f64; 4], n: usize) -> Result<ResourceComparison> {
    let f = recyclable_fraction(p)?;
    let d2 = distillable_rate(p)?;
    let qvc = 2.0 * n as f64 * (1.0 - f);
    let tele = n as f64 * (1.0 - d2);
    let verdict = if (qvc - tele).abs() <= VERDICT_TOL * n.max(1) as f64 {
        Verdict::Equal
    } else if tele < qvc {
        Verdict::TeleportBetter
    } else {
        Verdict::QvcBetter
    };
    Ok(ResourceComparison {
        channel: name.to_string(),
        n,
        f,
        d2,
        qvc_ebits: qvc,
        teleport_ebits: tele,
        verdict,
    })
}

/// Monte Carlo recyclable fraction on the frame backend: net ebits kept per
/// key ebit, `(recycled - ancillas spent) / 2n`, averaged over `trials`. The
/// per-qubit distribution is given to the parties: pairs that can never be
/// flagged are kept without testing and the rest are hashed at their known
/// flag probability (or measured outright when hashing cannot apply).
pub fn simulate_recyclable_fraction(
    p: &[f64; 4],
    n: usize,
    trials: usize,
    params: &RecycleParams,
    rng: &mut SimRng,
) -> Result<f64> {
    check(p)?;
    let channel = PauliChannel::product(n, *p)?;
    // pair 2i flags Z components, 2i+1 flags X components
    let flag = [p[2] + p[3], p[1] + p[3]];
    let mut total = 0.0;
    for _ in 0..trials {
        let mut b = QvcFrame::new(n, params.r);
        b.encode()?;
        b.transmit(&channel, rng)?;
        b.decode()?;
        let layout = b.layout();
        let key: Vec<usize> = (0..2 * n).collect();
        let ancillas: Vec<usize> = (0..params.r).map(|j| layout.ancilla(j)).collect();
        let net = if preliminary_test(&mut b, &key, &ancillas, rng)?.pass {
            2 * n as i64 - params.r as i64
        } else {
            let known = key.iter().filter(|&&k| flag[k % 2] == 0.0).count();
            let uncertain: Vec<usize> = key.iter().copied().filter(|&k| flag[k % 2] > 0.0).collect();
            let alpha = if uncertain.is_empty() {
                0.0
            } else {
                uncertain.iter().map(|&k| flag[k % 2]).sum::<f64>() / uncertain.len() as f64
            };
            let hashed = if alpha + params.delta < 0.5 {
                hash_identify(&mut b, &uncertain, alpha, params.delta, params.max_nullity, rng).is_ok()
            } else {
                false
            };
            if !hashed {
                for &k in &uncertain {
                    if !b.is_consumed(k) {
                        b.measure_pm(k, rng)?;
                    }
                }
            }
            let kept = known + uncertain.iter().filter(|&&k| !b.is_consumed(k)).count();
            kept as i64 - params.r as i64
        };
        total += net as f64 / (2 * n) as f64;
    }
    Ok(total / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::Preset;

    #[test]
    fn preset_fractions() {
        let f: Vec<f64> = Preset::ALL
            .iter()
            .map(|p| recyclable_fraction(&p.per_qubit()).unwrap())
            .collect();
        assert!((f[0] - 1.0).abs() < 1e-12);
        assert!((f[1] - 0.5).abs() < 1e-12);
        assert!((f[2] - 0.1037).abs() < 1e-3);
        assert!(f[3].abs() < 1e-12);
        assert!(recyclable_fraction(&[0.5, 0.6, 0.0, 0.0]).is_err());
    }

    #[test]
    fn preset_verdicts() {
        let v: Vec<Verdict> = Preset::ALL
            .iter()
            .map(|p| compare_methods(p.name(), &p.per_qubit(), 10).unwrap().verdict)
            .collect();
        assert_eq!(
            v,
            vec![Verdict::Equal, Verdict::Equal, Verdict::TeleportBetter, Verdict::TeleportBetter]
        );
    }

    #[test]
    fn noiseless_simulation_loses_only_the_test_pairs() {
        let mut rng = SimRng::new(41);
        let params = RecycleParams::default();
        let f = simulate_recyclable_fraction(&[1.0, 0.0, 0.0, 0.0], 64, 5, &params, &mut rng).unwrap();
        assert!((f - (128.0 - params.r as f64) / 128.0).abs() < 1e-12);
    }
}
