//! Incremental Gaussian elimination over GF(2).

use rand::seq::SliceRandom;

use crate::error::{Result, SimError};
use crate::rng::SimRng;

#[derive(Debug, Clone)]
struct Row {
    bits: Vec<u64>,
    rhs: bool,
    pivot: usize,
}

/// Linear system `A v = b` kept in reduced row-echelon form.
#[derive(Debug, Clone)]
pub struct Gf2System {
    m: usize,
    words: usize,
    rows: Vec<Row>,
    pivot_row: Vec<Option<usize>>,
}

fn get(bits: &[u64], j: usize) -> bool {
    bits[j / 64] >> (j % 64) & 1 == 1
}

fn flip(bits: &mut [u64], j: usize) {
    bits[j / 64] ^= 1 << (j % 64);
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn popcount(bits: &[u64]) -> usize {
    bits.iter().map(|w| w.count_ones() as usize).sum()
}

impl Gf2System {
    pub fn new(m: usize) -> Self {
        Self {
            m,
            words: m.div_ceil(64).max(1),
            rows: Vec::new(),
            pivot_row: vec![None; m],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.m
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn nullity(&self) -> usize {
        self.m - self.rows.len()
    }

    /// Add `sum_{j in vars} v_j = rhs`. Returns whether the rank grew; a
    /// contradiction with earlier equations is an error.
    pub fn add(&mut self, vars: &[usize], rhs: bool) -> Result<bool> {
        let mut bits = vec![0u64; self.words];
        for &j in vars {
            if j >= self.m {
                return Err(SimError::IndexOutOfRange {
                    index: j,
                    size: self.m,
                });
            }
            flip(&mut bits, j);
        }
        let mut rhs = rhs;
        for row in &self.rows {
            if get(&bits, row.pivot) {
                xor_into(&mut bits, &row.bits);
                rhs ^= row.rhs;
            }
        }
        let Some(pivot) = (0..self.m).find(|&j| get(&bits, j)) else {
            if rhs {
                return Err(SimError::Bookkeeping("inconsistent parity constraints".into()));
            }
            return Ok(false);
        };
        for row in &mut self.rows {
            if get(&row.bits, pivot) {
                xor_into(&mut row.bits, &bits);
                row.rhs ^= rhs;
            }
        }
        self.pivot_row[pivot] = Some(self.rows.len());
        self.rows.push(Row { bits, rhs, pivot });
        Ok(true)
    }

    fn particular(&self) -> Vec<u64> {
        let mut x = vec![0u64; self.words];
        for row in &self.rows {
            if row.rhs {
                flip(&mut x, row.pivot);
            }
        }
        x
    }

    fn unpack(&self, x: &[u64]) -> Vec<bool> {
        (0..self.m).map(|j| get(x, j)).collect()
    }

    /// The solution when the system has full rank.
    pub fn unique_solution(&self) -> Option<Vec<bool>> {
        (self.nullity() == 0).then(|| self.unpack(&self.particular()))
    }

    /// Up to `max_count` solutions of Hamming weight at most `max_weight`, or
    /// `None` when the solution space has dimension above `max_nullity`.
    pub fn low_weight_solutions(
        &self,
        max_weight: usize,
        max_nullity: usize,
        max_count: usize,
    ) -> Option<Vec<Vec<bool>>> {
        let free: Vec<usize> = (0..self.m).filter(|&j| self.pivot_row[j].is_none()).collect();
        if free.len() > max_nullity {
            return None;
        }
        // Flipping free variable j toggles j and every pivot whose row holds j.
        let masks: Vec<Vec<u64>> = free
            .iter()
            .map(|&j| {
                let mut mask = vec![0u64; self.words];
                flip(&mut mask, j);
                for row in &self.rows {
                    if get(&row.bits, j) {
                        flip(&mut mask, row.pivot);
                    }
                }
                mask
            })
            .collect();
        let mut x = self.particular();
        let mut found = Vec::new();
        let total: u64 = 1 << free.len();
        for step in 0..total {
            if step > 0 {
                xor_into(&mut x, &masks[step.trailing_zeros() as usize]);
            }
            if popcount(&x) <= max_weight {
                found.push(self.unpack(&x));
                if found.len() >= max_count {
                    break;
                }
            }
        }
        Some(found)
    }

    /// Randomized information-set search for one solution of weight at most
    /// `max_weight`, for systems too wide to enumerate. Each try re-pivots
    /// in a random column order, sets the free variables to zero and also
    /// tries each single free variable set. `expected_weight` sizes the
    /// effort: when the chance that such a support avoids every free column
    /// is below `1 / max_tries`, nothing is tried.
    pub fn search_low_weight(
        &self,
        max_weight: usize,
        expected_weight: usize,
        max_tries: usize,
        rng: &mut SimRng,
    ) -> Option<Vec<bool>> {
        let rank = self.rows.len();
        let log_p: f64 = (0..expected_weight.min(rank))
            .map(|i| ((rank - i) as f64 / (self.m - i) as f64).ln())
            .sum();
        let tries = if expected_weight > rank || log_p < -(max_tries as f64).ln() {
            1
        } else {
            max_tries
        };
        let mut rows: Vec<Row> = self.rows.clone();
        let mut order: Vec<usize> = (0..self.m).collect();
        for t in 0..tries {
            if t > 0 {
                order.shuffle(rng);
                let mut done = 0;
                for &c in &order {
                    let Some(k) = (done..rows.len()).find(|&k| get(&rows[k].bits, c)) else {
                        continue;
                    };
                    rows.swap(done, k);
                    rows[done].pivot = c;
                    let pr = rows[done].clone();
                    for (i, other) in rows.iter_mut().enumerate() {
                        if i != done && get(&other.bits, c) {
                            xor_into(&mut other.bits, &pr.bits);
                            other.rhs ^= pr.rhs;
                        }
                    }
                    done += 1;
                    if done == rows.len() {
                        break;
                    }
                }
            }
            if let Some(x) = best_near_particular(&rows, self.m, self.words, max_weight) {
                return Some(self.unpack(&x));
            }
        }
        None
    }
}

/// Lowest-weight solution among the particular one (free variables zero)
/// and its single-free-variable neighbours, if within `max_weight`.
fn best_near_particular(rows: &[Row], m: usize, words: usize, max_weight: usize) -> Option<Vec<u64>> {
    let mut is_pivot = vec![false; m];
    let mut x = vec![0u64; words];
    for row in rows {
        is_pivot[row.pivot] = true;
        if row.rhs {
            flip(&mut x, row.pivot);
        }
    }
    let base = popcount(&x);
    let mut best: Option<(usize, usize)> = (base <= max_weight).then_some((base, usize::MAX));
    for j in (0..m).filter(|&j| !is_pivot[j]) {
        // Setting v_j = 1 toggles the pivots of the rows containing j.
        let w = 1 + rows
            .iter()
            .map(|r| (r.rhs ^ get(&r.bits, j)) as usize)
            .sum::<usize>();
        if w <= max_weight && best.is_none_or(|b| w < b.0) {
            best = Some((w, j));
        }
    }
    let (_, j) = best?;
    if j != usize::MAX {
        flip(&mut x, j);
        for row in rows.iter().filter(|r| get(&r.bits, j)) {
            flip(&mut x, row.pivot);
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SimRng;
    use proptest::prelude::*;

    #[test]
    fn solves_small_system() {
        let mut s = Gf2System::new(3);
        assert!(s.add(&[0, 1], true).unwrap());
        assert!(s.add(&[1, 2], false).unwrap());
        assert!(!s.add(&[0, 2], true).unwrap());
        assert!(s.add(&[0, 2], false).is_err());
        assert!(s.add(&[2], true).unwrap());
        assert_eq!(s.unique_solution().unwrap(), vec![false, true, true]);
    }

    #[test]
    fn low_weight_enumeration_counts() {
        let s = Gf2System::new(4);
        let all = s.low_weight_solutions(4, 4, 100).unwrap();
        assert_eq!(all.len(), 16);
        assert_eq!(s.low_weight_solutions(1, 4, 100).unwrap().len(), 5);
        assert!(s.low_weight_solutions(1, 3, 100).is_none());
    }

    #[test]
    fn search_finds_planted_sparse_vector() {
        let mut rng = SimRng::new(4);
        let m = 200;
        for w in [0, 3, 10] {
            let mut truth = vec![false; m];
            for j in rng.sample_distinct(m, w) {
                truth[j] = true;
            }
            let mut s = Gf2System::new(m);
            let mut eqs = Vec::new();
            for _ in 0..120 {
                let sub = rng.nonempty_subset(m);
                let rhs = sub.iter().fold(false, |a, &j| a ^ truth[j]);
                s.add(&sub, rhs).unwrap();
                eqs.push((sub, rhs));
            }
            assert!(s.nullity() > 20);
            let found = s.search_low_weight(w, w, 2000, &mut rng).unwrap();
            assert_eq!(found, truth);
            for (sub, rhs) in &eqs {
                assert_eq!(sub.iter().fold(false, |a, &j| a ^ found[j]), *rhs);
            }
        }
    }

    proptest! {
        #[test]
        fn true_vector_always_satisfies(seed in 0u64..500, m in 1usize..140) {
            let mut rng = SimRng::new(seed);
            let truth: Vec<bool> = rng.bits(m);
            let mut s = Gf2System::new(m);
            for _ in 0..m + 10 {
                let sub = rng.nonempty_subset(m);
                let rhs = sub.iter().fold(false, |a, &j| a ^ truth[j]);
                s.add(&sub, rhs).unwrap();
            }
            if let Some(found) = s.low_weight_solutions(m, 12, 1 << 12) {
                prop_assert!(found.contains(&truth));
            }
            if let Some(v) = s.unique_solution() {
                prop_assert_eq!(v, truth);
            }
        }
    }
}
