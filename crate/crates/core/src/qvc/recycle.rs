//! Parity tests, weight estimation and hashing over the decoded key pairs.

use serde::Serialize;

use super::backend::{BellPairs, QvcBackend};
use super::gf2::Gf2System;
use super::SyndromeVector;
use crate::channels::{binary_entropy, PauliChannel};
use crate::error::{Result, SimError};
use crate::pauli::Pauli1;
use crate::rng::SimRng;

/// Extra subsets allowed beyond the entropy estimate.
pub const HASH_SLACK: usize = 40;

/// Orderings tried by the information-set search after hashing.
const ISD_TRIES: usize = 2000;

/// Smallest `r2` with `1 / (4 delta^2 r2) <= eps`.
pub fn chebyshev_sample_size(delta: f64, eps: f64) -> usize {
    assert!(delta > 0.0 && eps > 0.0);
    let bound = |r2: usize| 1.0 / (4.0 * delta * delta * r2 as f64);
    let mut r2 = (1.0 / (4.0 * delta * delta * eps)).ceil().max(1.0) as usize;
    while r2 > 1 && bound(r2 - 1) <= eps {
        r2 -= 1;
    }
    while bound(r2) > eps {
        r2 += 1;
    }
    r2
}

/// Parity of the phase bits of `subset`, read out through a fresh ancilla
/// pair that is consumed.
pub fn subset_parity<B: BellPairs>(
    pairs: &mut B,
    subset: &[usize],
    ancilla: usize,
    rng: &mut SimRng,
) -> Result<bool> {
    if subset.is_empty() {
        return Err(SimError::Precondition("empty subset".into()));
    }
    if subset.contains(&ancilla) {
        return Err(SimError::Precondition("ancilla inside its own subset".into()));
    }
    pairs.check_live(ancilla)?;
    for &s in subset {
        pairs.bxor(ancilla, s)?;
    }
    let (a, b) = pairs.measure_pm(ancilla, rng)?;
    Ok(a ^ b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrelimResult {
    pub pass: bool,
    pub parities: Vec<bool>,
}

/// One random subset parity of `candidates` per ancilla; passes when all
/// parities are even. Subsets are uniform over all subsets so a nonzero
/// syndrome gives odd parity with probability exactly 1/2; an empty draw
/// measures the ancilla alone.
pub fn preliminary_test<B: BellPairs>(
    pairs: &mut B,
    candidates: &[usize],
    ancillas: &[usize],
    rng: &mut SimRng,
) -> Result<PrelimResult> {
    if ancillas.is_empty() {
        return Err(SimError::Precondition("r must be at least 1".into()));
    }
    if candidates.is_empty() {
        return Err(SimError::Precondition("no pairs to test".into()));
    }
    let mut parities = Vec::with_capacity(ancillas.len());
    for &anc in ancillas {
        let subset: Vec<usize> = candidates.iter().copied().filter(|_| rng.bit()).collect();
        let parity = if subset.is_empty() {
            pairs.check_live(anc)?;
            let (a, b) = pairs.measure_pm(anc, rng)?;
            a ^ b
        } else {
            subset_parity(pairs, &subset, anc, rng)?
        };
        parities.push(parity);
    }
    Ok(PrelimResult {
        pass: parities.iter().all(|&p| !p),
        parities,
    })
}

/// Measure `r2` distinct random pairs in the `+/-` basis; returns the Phi-
/// fraction and the announced bits.
pub fn estimate_weight<B: BellPairs>(
    pairs: &mut B,
    candidates: &[usize],
    r2: usize,
    rng: &mut SimRng,
) -> Result<(f64, Vec<(usize, bool)>)> {
    if r2 > candidates.len() {
        return Err(SimError::Precondition(format!(
            "r2 = {r2} exceeds the {} available pairs",
            candidates.len()
        )));
    }
    if r2 == 0 {
        return Ok((0.0, Vec::new()));
    }
    let mut bits = Vec::with_capacity(r2);
    for j in rng.sample_distinct(candidates.len(), r2) {
        let p = candidates[j];
        let (a, b) = pairs.measure_pm(p, rng)?;
        bits.push((p, a ^ b));
    }
    let ones = bits.iter().filter(|b| b.1).count();
    Ok((ones as f64 / r2 as f64, bits))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HashOutcome {
    /// Identified phase bit of every candidate, in candidate order.
    pub values: Vec<(usize, bool)>,
    pub subsets: usize,
    /// Pairs measured during hashing.
    pub consumed: Vec<usize>,
}

struct HashRun {
    system: Gf2System,
    subsets: usize,
    consumed: Vec<usize>,
    solution: Option<Vec<bool>>,
}

/// Subset budget for `m` unknown bits at weight fraction `p`.
pub fn hash_budget(m: usize, p: f64) -> usize {
    (m as f64 * binary_entropy(p)).ceil() as usize + HASH_SLACK
}

fn hash_run<B: BellPairs>(
    pairs: &mut B,
    candidates: &[usize],
    alpha_hat: f64,
    delta: f64,
    max_nullity: usize,
    rng: &mut SimRng,
) -> Result<HashRun> {
    let m = candidates.len();
    let mut run = HashRun {
        system: Gf2System::new(m),
        subsets: 0,
        consumed: Vec::new(),
        solution: None,
    };
    if m == 0 {
        run.solution = Some(vec![false; m]);
        return Ok(run);
    }
    let p = alpha_hat + delta;
    let budget = hash_budget(m, p);
    let window = (m as f64 * p).ceil() as usize;
    let mut live: Vec<usize> = (0..m).collect();
    while run.subsets < budget && !live.is_empty() {
        let subset: Vec<usize> = rng
            .nonempty_subset(live.len())
            .into_iter()
            .map(|j| live[j])
            .collect();
        // One member acts as the BXOR control and is measured.
        let control = subset[rng.below(subset.len())];
        for &t in &subset {
            if t != control {
                pairs.bxor(candidates[control], candidates[t])?;
            }
        }
        let (a, b) = pairs.measure_pm(candidates[control], rng)?;
        run.system.add(&subset, a ^ b)?;
        run.subsets += 1;
        run.consumed.push(candidates[control]);
        live.retain(|&j| j != control);
        if let Some(sols) = run.system.low_weight_solutions(window, max_nullity, 2) {
            if sols.len() == 1 {
                run.solution = sols.into_iter().next();
                break;
            }
        }
    }
    // Too wide to enumerate: with the budget spent, any solution inside the
    // window is the typical one with high probability.
    if run.solution.is_none() && run.system.nullity() > max_nullity {
        let expected = (alpha_hat * m as f64).round() as usize;
        run.solution = run.system.search_low_weight(window, expected, ISD_TRIES, rng);
    }
    Ok(run)
}

/// Identify the phase bits of `candidates` from random subset parities.
pub fn hash_identify<B: BellPairs>(
    pairs: &mut B,
    candidates: &[usize],
    alpha_hat: f64,
    delta: f64,
    max_nullity: usize,
    rng: &mut SimRng,
) -> Result<HashOutcome> {
    if !(alpha_hat + delta < 0.5) {
        return Err(SimError::Precondition(
            "hashing needs alpha_hat + delta < 1/2".into(),
        ));
    }
    let run = hash_run(pairs, candidates, alpha_hat, delta, max_nullity, rng)?;
    match run.solution {
        Some(v) => Ok(HashOutcome {
            values: candidates.iter().copied().zip(v).collect(),
            subsets: run.subsets,
            consumed: run.consumed,
        }),
        None => Err(SimError::HashAmbiguous {
            subsets: run.subsets,
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    PassedPreliminary,
    Hashed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RecycleReport {
    pub stage: Stage,
    pub r: usize,
    pub r2: usize,
    pub r3: usize,
    pub alpha_hat: Option<f64>,
    pub syndrome_hex: Option<String>,
    pub ebits_consumed: usize,
    pub ebits_recycled: usize,
    pub accepted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecycleParams {
    pub r: usize,
    pub delta: f64,
    pub eps: f64,
    /// Largest solution-space dimension searched exhaustively while hashing.
    pub max_nullity: usize,
}

impl Default for RecycleParams {
    fn default() -> Self {
        Self {
            r: 8,
            delta: 0.1,
            eps: 0.05,
            max_nullity: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundOutcome {
    pub report: RecycleReport,
    /// Syndrome implied by the sampled channel error (harness only).
    pub truth: SyndromeVector,
    pub message_intact: bool,
}

/// Full round: encode, transmit, decode, test, and on failure estimate,
/// hash and correct. When hashing cannot run or does not converge, every
/// remaining pair is measured so the message can still be corrected; the key
/// is then discarded.
pub fn recycle_round<B: QvcBackend>(
    backend: &mut B,
    channel: &PauliChannel,
    params: &RecycleParams,
    rng: &mut SimRng,
) -> Result<RoundOutcome> {
    let layout = backend.layout();
    let n = layout.n;
    if layout.pool < params.r {
        return Err(SimError::Precondition(format!(
            "{} ancilla pairs for r = {}",
            layout.pool, params.r
        )));
    }
    backend.encode()?;
    let error = backend.transmit(channel, rng)?;
    backend.decode()?;
    let truth = SyndromeVector::from_error(&error);

    let key: Vec<usize> = (0..2 * n).collect();
    let ancillas: Vec<usize> = (0..params.r).map(|j| layout.ancilla(j)).collect();
    let prelim = preliminary_test(backend, &key, &ancillas, rng)?;
    if prelim.pass {
        let report = RecycleReport {
            stage: Stage::PassedPreliminary,
            r: params.r,
            r2: 0,
            r3: 0,
            alpha_hat: None,
            syndrome_hex: None,
            ebits_consumed: params.r,
            ebits_recycled: 2 * n,
            accepted: true,
        };
        return Ok(RoundOutcome {
            report,
            truth,
            message_intact: backend.message_intact()?,
        });
    }

    let r2 = chebyshev_sample_size(params.delta, params.eps).min(2 * n);
    let (alpha_hat, sampled) = estimate_weight(backend, &key, r2, rng)?;
    let mut v = vec![false; 2 * n];
    for &(p, b) in &sampled {
        v[p] = b;
    }
    let remaining: Vec<usize> = key.iter().copied().filter(|&p| !backend.is_consumed(p)).collect();

    let run = if alpha_hat + params.delta < 0.5 {
        Some(hash_run(
            backend,
            &remaining,
            alpha_hat,
            params.delta,
            params.max_nullity,
            rng,
        )?)
    } else {
        None
    };
    let r3 = run.as_ref().map_or(0, |r| r.subsets);

    let accepted = match run {
        Some(HashRun {
            solution: Some(sol),
            ..
        }) => {
            for (&p, &b) in remaining.iter().zip(&sol) {
                v[p] = b;
                if b && !backend.is_consumed(p) {
                    backend.correct_bob(p, Pauli1::Z)?;
                }
            }
            true
        }
        other => {
            let mut system = other.map_or_else(|| Gf2System::new(remaining.len()), |r| r.system);
            for (j, &p) in remaining.iter().enumerate() {
                if !backend.is_consumed(p) {
                    let (a, b) = backend.measure_pm(p, rng)?;
                    system.add(&[j], a ^ b)?;
                }
            }
            let sol = system.unique_solution().ok_or_else(|| {
                SimError::Bookkeeping("syndrome not determined after full measurement".into())
            })?;
            for (&p, &b) in remaining.iter().zip(&sol) {
                v[p] = b;
            }
            false
        }
    };
    let syndrome = SyndromeVector::from_bits(v)?;
    backend.correct_message(&syndrome.correction())?;
    let recycled = key.iter().filter(|&&p| !backend.is_consumed(p)).count();
    let report = RecycleReport {
        stage: Stage::Hashed,
        r: params.r,
        r2,
        r3,
        alpha_hat: Some(alpha_hat),
        syndrome_hex: Some(syndrome.to_hex()),
        ebits_consumed: params.r + 2 * n - recycled,
        ebits_recycled: recycled,
        accepted,
    };
    Ok(RoundOutcome {
        report,
        truth,
        message_intact: backend.message_intact()?,
    })
}
