//! Exact uniform random generation of structures by unranking against the
//! count tables.
//!
//! Every decision node draws one uniform big integer below that node's exact
//! branch total and descends the decomposition: a segment is empty, starts
//! with an unpaired vertex, or starts with a maximal stack of k >= r arcs
//! whose nested part is a reducible segment of length >= lambda - 1 followed
//! by an arbitrary concatenated segment. Branch weights are exact counts, so
//! there is no floating-point bias anywhere.
//!
//! The PRNG is pinned to ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`; together with the rejection sampler below this makes
//! equal seeds produce identical structures on every platform.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::series::ArcCountTable;
use crate::structure::{SecondaryStructure, StructureClass};

/// Uniform sampler over the structures counted by an [`ArcCountTable`].
///
/// Not shareable across threads mid-stream; for parallel sampling create
/// independent states with distinct seeds.
pub struct SamplerState<'a> {
    class: StructureClass,
    table: &'a ArcCountTable,
    rng: ChaCha8Rng,
    /// wblock[q]: total count of stack blocks occupying q positions,
    /// sum over stack sizes k >= r (nested length m = q - 2k >= lambda - 1)
    /// of t(m).
    wblock: Vec<BigUint>,
    /// tcum[q]: cumulative sums of t(q - 2k) over admissible k = r, r+1, ...
    tcum: Vec<Vec<BigUint>>,
    /// blockcum[n]: cumulative sums over q = qmin..=n of s(n - q) * wblock[q].
    blockcum: Vec<Vec<BigUint>>,
    qmin: usize,
}

impl<'a> SamplerState<'a> {
    /// Precompute the decomposition tables (O(n_max^2) big-integer work) and
    /// seed the generator.
    pub fn new(table: &'a ArcCountTable, seed: u64) -> Self {
        let class = table.class();
        let lambda = class.lambda() as usize;
        let r = class.r() as usize;
        let n_max = table.n_max();
        let qmin = 2 * r + lambda - 1;

        let mut wblock = vec![BigUint::zero(); n_max + 1];
        let mut tcum: Vec<Vec<BigUint>> = vec![Vec::new(); n_max + 1];
        for q in qmin..=n_max {
            let mut acc = BigUint::zero();
            let mut cums = Vec::new();
            let mut k = r;
            while q >= 2 * k && q - 2 * k + 1 >= lambda {
                acc += table.t_total(q - 2 * k);
                cums.push(acc.clone());
                k += 1;
            }
            wblock[q] = acc;
            tcum[q] = cums;
        }

        let mut blockcum: Vec<Vec<BigUint>> = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let mut cums = Vec::new();
            let mut acc = BigUint::zero();
            for q in qmin..=n {
                acc += table.s_total(n - q) * &wblock[q];
                cums.push(acc.clone());
            }
            blockcum.push(cums);
        }

        // the decomposition tables must reproduce the count tables exactly
        for n in 1..=n_max {
            let stacked = blockcum[n].last().cloned().unwrap_or_else(BigUint::zero);
            assert_eq!(
                table.s_total(n - 1) + &stacked,
                *table.s_total(n),
                "segment decomposition mismatch at n = {n}"
            );
            let reducible_stacked = if n > qmin {
                blockcum[n][n - 1 - qmin].clone()
            } else {
                BigUint::zero()
            };
            assert_eq!(
                table.s_total(n - 1) + &reducible_stacked,
                *table.t_total(n),
                "reducible decomposition mismatch at n = {n}"
            );
        }

        Self { class, table, rng: ChaCha8Rng::seed_from_u64(seed), wblock, tcum, blockcum, qmin }
    }

    pub fn class(&self) -> StructureClass {
        self.class
    }

    /// Uniform big integer in [0, bound) by top-bit-masked rejection.
    /// Bounds of 1 consume no randomness.
    fn rand_below(&mut self, bound: &BigUint) -> BigUint {
        debug_assert!(!bound.is_zero());
        if bound.is_one() {
            return BigUint::zero();
        }
        let bits = bound.bits();
        let nbytes = bits.div_ceil(8) as usize;
        let top_mask: u8 = if bits % 8 == 0 { 0xff } else { (1u8 << (bits % 8)) - 1 };
        let mut buf = vec![0u8; nbytes];
        loop {
            self.rng.fill_bytes(&mut buf);
            buf[0] &= top_mask;
            let candidate = BigUint::from_bytes_be(&buf);
            if &candidate < bound {
                return candidate;
            }
        }
    }

    /// First index whose cumulative sum exceeds `target`.
    fn search(cums: &[BigUint], target: &BigUint) -> usize {
        cums.partition_point(|c| c <= target)
    }

    fn sample_one(&mut self, n: usize) -> SecondaryStructure {
        let mut arcs: Vec<(usize, usize)> = Vec::new();
        // (start position, length, must be reducible)
        let mut pending: Vec<(usize, usize, bool)> = vec![(1, n, false)];
        while let Some((start, len, reducible)) = pending.pop() {
            if len == 0 {
                continue;
            }
            let total =
                if reducible { self.table.t_total(len) } else { self.table.s_total(len) };
            let u = self.rand_below(&total.clone());
            let unpaired = self.table.s_total(len - 1).clone();
            if u < unpaired {
                pending.push((start + 1, len - 1, false));
                continue;
            }
            let u = u - unpaired;
            // choose the block size q (stack + nested segment extent)
            let qmax = if reducible { len - 1 } else { len };
            assert!(qmax >= self.qmin, "no stack branch available yet u overflowed");
            let cums = &self.blockcum[len][..=qmax - self.qmin];
            let qi = Self::search(cums, &u);
            debug_assert!(qi < cums.len());
            let q = self.qmin + qi;
            // choose the stack length k within the block, weight t(q - 2k)
            let d = self.rand_below(&self.wblock[q].clone());
            let ki = Self::search(&self.tcum[q], &d);
            let k = self.class.r() as usize + ki;
            let nested_len = q - 2 * k;
            for i in 0..k {
                arcs.push((start + i, start + q - 1 - i));
            }
            pending.push((start + k, nested_len, true));
            pending.push((start + q, len - q, false));
        }
        SecondaryStructure::new(n, arcs).expect("decomposition emits well-formed arcs")
    }

    /// Draw `count` structures of length n, each exactly uniform over the
    /// s(n) structures of the class.
    pub fn sample_uniform(&mut self, n: usize, count: usize) -> Result<Vec<SecondaryStructure>, Error> {
        if n > self.table.n_max() {
            return Err(Error::TableRange { n, n_max: self.table.n_max() });
        }
        if count < 1 {
            return Err(Error::Domain("sample count must be >= 1".into()));
        }
        Ok((0..count).map(|_| self.sample_one(n)).collect())
    }
}

/// Sample mean and unbiased sample variance of the arc counts.
pub fn empirical_arc_stats(samples: &[SecondaryStructure]) -> Result<(f64, f64), Error> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let n0 = samples[0].n();
    if samples.iter().any(|s| s.n() != n0) {
        return Err(Error::MixedSampleLength);
    }
    let k = samples.len() as f64;
    let mean = samples.iter().map(|s| s.arc_count() as f64).sum::<f64>() / k;
    let variance = if samples.len() == 1 {
        0.0
    } else {
        samples
            .iter()
            .map(|s| {
                let d = s.arc_count() as f64 - mean;
                d * d
            })
            .sum::<f64>()
            / (k - 1.0)
    };
    Ok((mean, variance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ArcCountTable;
    use crate::structure::enumerate;

    fn class(lambda: u32, r: u32) -> StructureClass {
        StructureClass::new(lambda, r).unwrap()
    }

    #[test]
    fn two_vertex_frequency_band() {
        let table = ArcCountTable::build(class(1, 1), 2);
        let mut state = SamplerState::new(&table, 7);
        let samples = state.sample_uniform(2, 10_000).unwrap();
        let paired = samples.iter().filter(|s| s.arc_count() == 1).count();
        let freq = paired as f64 / 10_000.0;
        assert!((0.47..=0.53).contains(&freq), "freq = {freq}");
    }

    #[test]
    fn forced_empty_structure() {
        let table = ArcCountTable::build(class(2, 2), 4);
        for seed in [0u64, 1, 99] {
            let mut state = SamplerState::new(&table, seed);
            for s in state.sample_uniform(4, 50).unwrap() {
                assert_eq!(s.arc_count(), 0);
            }
        }
    }

    #[test]
    fn determinism_same_seed_same_output() {
        let table = ArcCountTable::build(class(2, 1), 40);
        let mut a = SamplerState::new(&table, 1234);
        let mut b = SamplerState::new(&table, 1234);
        assert_eq!(a.sample_uniform(40, 100).unwrap(), b.sample_uniform(40, 100).unwrap());
        let mut c = SamplerState::new(&table, 1235);
        assert_ne!(a.sample_uniform(40, 100).unwrap(), c.sample_uniform(40, 100).unwrap());
    }

    #[test]
    fn samples_validate_cleanly() {
        for (lambda, r) in [(1, 1), (2, 1), (3, 2), (4, 3), (2, 3)] {
            let c = class(lambda, r);
            let table = ArcCountTable::build(c, 60);
            let mut state = SamplerState::new(&table, 42);
            for s in state.sample_uniform(60, 200).unwrap() {
                assert!(s.validate(c).is_empty(), "invalid sample for {c}: {s:?}");
            }
        }
    }

    #[test]
    fn arc_count_marginal_within_three_sigma() {
        let c = class(2, 1);
        let table = ArcCountTable::build(c, 12);
        let mut state = SamplerState::new(&table, 9);
        let draws = 20_000usize;
        let samples = state.sample_uniform(12, draws).unwrap();
        let brute = enumerate(c, 12).unwrap();
        let total: u64 = brute.values().sum();
        for (l, &count) in &brute {
            let p = count as f64 / total as f64;
            let observed = samples.iter().filter(|s| s.arc_count() == *l).count() as f64;
            let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
            assert!(
                (observed - draws as f64 * p).abs() <= 3.0 * sigma + 1e-9,
                "l={l}: observed {observed}, expected {}",
                draws as f64 * p
            );
        }
    }

    #[test]
    fn rejects_out_of_table_n() {
        let table = ArcCountTable::build(class(1, 1), 10);
        let mut state = SamplerState::new(&table, 0);
        assert!(matches!(state.sample_uniform(11, 1), Err(Error::TableRange { .. })));
        assert!(state.sample_uniform(10, 1).is_ok());
        assert!(matches!(state.sample_uniform(5, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn stats_basics() {
        assert!(matches!(empirical_arc_stats(&[]), Err(Error::EmptySample)));

        let empties: Vec<_> = (0..5).map(|_| SecondaryStructure::empty(6)).collect();
        assert_eq!(empirical_arc_stats(&empties).unwrap(), (0.0, 0.0));

        let mixed = vec![SecondaryStructure::empty(6), SecondaryStructure::empty(7)];
        assert!(matches!(empirical_arc_stats(&mixed), Err(Error::MixedSampleLength)));

        let pair = vec![
            SecondaryStructure::empty(4),
            SecondaryStructure::new(4, vec![(1, 3)]).unwrap(),
        ];
        let (mean, var) = empirical_arc_stats(&pair).unwrap();
        assert_eq!(mean, 0.5);
        assert_eq!(var, 0.5);
    }
}
