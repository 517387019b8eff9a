//! End-of-run sampling: `First`, `FirstToRun`, `Samples` and the φ function.
//!
//! Text positions stored here are *letter* positions: the position of
//! `BWT[j]` in the text, `SA[j] - 1`, where the row whose suffix starts at 1
//! maps to position `n` (the sentinel). A stored sample `v` therefore
//! stands for `SA = (v mod n) + 1`.

use crate::codec::{ByteReader, ByteWriter};
use crate::error::{LocateError, PersistError};
use crate::succinct::{ceil_log2, DenseBV, IntVec, SparseBV};

/// `SA[j]` of a row `k` LF-steps above a row whose letter position is `v`.
#[inline]
pub fn sa_from_sample(v: usize, k: usize, n: usize) -> usize {
    (v + k) % n + 1
}

/// Result of one φ evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhiResult {
    /// `SA[j - 1]`.
    pub value: usize,
    /// LF-steps consumed; φ itself never steps.
    pub used_steps: usize,
    /// Whether the FirstToRun entry was run 1, whose preceding sample wraps
    /// to run `r`. Never happens for rows `j > 1`.
    pub wrapped_run: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocateCore {
    n: usize,
    r: usize,
    first: SparseBV,
    /// Original run index minus one, `ceil(lg r)` bits.
    first_to_run: IntVec,
    /// Retained samples in run order, stored minus one in `ceil(lg n)` bits.
    samples: IntVec,
    sa_last: usize,
}

impl LocateCore {
    /// `firsts`: `(letter position, run)` of the retained First entries,
    /// sorted by position. `samples`: retained samples in run order.
    pub fn new(n: usize, r: usize, firsts: &[(usize, usize)], samples: &[usize], sa_last: usize) -> Self {
        assert_eq!(firsts.len(), samples.len());
        let positions: Vec<usize> = firsts.iter().map(|&(pos, _)| pos).collect();
        let mut first_to_run = IntVec::new(ceil_log2(r as u64), firsts.len());
        for (k, &(_, run)) in firsts.iter().enumerate() {
            first_to_run.set(k, (run - 1) as u64);
        }
        let mut packed = IntVec::new(ceil_log2(n as u64), samples.len());
        for (k, &v) in samples.iter().enumerate() {
            packed.set(k, (v - 1) as u64);
        }
        Self {
            n,
            r,
            first: SparseBV::from_positions(n, &positions),
            first_to_run,
            samples: packed,
            sa_last,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of retained samples (equally, retained First entries).
    #[inline]
    pub fn retained(&self) -> usize {
        self.samples.len()
    }

    #[inline]
    pub fn sa_last(&self) -> usize {
        self.sa_last
    }

    pub fn first(&self) -> &SparseBV {
        &self.first
    }

    /// Run whose first letter is the `k`-th retained First entry (1-based).
    #[inline]
    pub fn first_to_run(&self, k: usize) -> usize {
        self.first_to_run.get(k - 1) as usize + 1
    }

    /// The `k`-th retained sample in run order (1-based).
    #[inline]
    pub fn sample(&self, k: usize) -> usize {
        self.samples.get(k - 1) as usize + 1
    }

    pub fn samples(&self) -> impl Iterator<Item = usize> + '_ {
        self.samples.iter().map(|v| v as usize + 1)
    }

    /// Rightmost retained First entry at or before `i`, with its ordinal.
    pub fn pred_first(&self, i: usize) -> Option<(usize, usize)> {
        self.first.pred_with_rank(i)
    }

    /// Like [`pred_first`](Self::pred_first) but wrapping around the end of
    /// the text. Returns `(position, ordinal, i - position mod n)`.
    pub fn cyclic_pred(&self, i: usize) -> Result<(usize, usize, usize), LocateError> {
        match self.pred_first(i) {
            Some((pos, k)) => Ok((pos, k, i - pos)),
            None => {
                let k = self.retained();
                let pos = self.first.select1(k).ok_or(LocateError::PredecessorMissing)?;
                Ok((pos, k, i + self.n - pos))
            }
        }
    }

    /// Retained sample of run `p`.
    #[inline]
    pub fn sample_of_run(&self, removed: &DenseBV, p: usize) -> Result<usize, LocateError> {
        if removed.get(p) {
            return Err(LocateError::SampleRemoved(p));
        }
        Ok(self.sample(p - removed.rank1(p)))
    }

    /// φ(i) = Samples[FirstToRun[rank(First, i)] - 1] + 1 + (i - pred(First, i)):
    /// from the letter position `i = SA[j] - 1` of row `j`, returns `SA[j - 1]`.
    ///
    /// Correct whenever no removed First entry lies in `(pred(First, i), i]`.
    pub fn phi(&self, removed: &DenseBV, i: usize) -> Result<PhiResult, LocateError> {
        if i == 0 || i > self.n {
            return Err(LocateError::PhiUndefined(i));
        }
        let (_, k, dist) = self.cyclic_pred(i)?;
        self.phi_from_pred(removed, k, dist)
    }

    /// φ given the predecessor ordinal `k` and the cyclic distance to it.
    pub(crate) fn phi_from_pred(&self, removed: &DenseBV, k: usize, dist: usize) -> Result<PhiResult, LocateError> {
        let run = self.first_to_run(k);
        let (prev, wrapped_run) = if run == 1 { (self.r, true) } else { (run - 1, false) };
        let v = self.sample_of_run(removed, prev)?;
        Ok(PhiResult {
            value: sa_from_sample(v, dist, self.n),
            used_steps: 0,
            wrapped_run,
        })
    }

    /// Bits of the three locating arrays (directories included).
    pub fn size_in_bits(&self) -> usize {
        self.first.size_in_bits() + self.first_to_run.size_in_bits() + self.samples.size_in_bits()
    }

    pub(crate) fn write_first(&self, w: &mut ByteWriter) {
        self.first.write(w);
    }

    pub(crate) fn write_first_to_run(&self, w: &mut ByteWriter) {
        self.first_to_run.write(w);
    }

    pub(crate) fn write_samples(&self, w: &mut ByteWriter) {
        self.samples.write(w);
    }

    pub(crate) fn read_parts(
        n: usize,
        r: usize,
        first: &mut ByteReader<'_>,
        first_to_run: &mut ByteReader<'_>,
        samples: &mut ByteReader<'_>,
        sa_last: usize,
    ) -> Result<Self, PersistError> {
        let corrupt = |m: &str| PersistError::Corrupt(m.to_string());
        let first_bv = SparseBV::read(first)?;
        let ftr = IntVec::read(first_to_run)?;
        let smp = IntVec::read(samples)?;
        first.finish("First")?;
        first_to_run.finish("FirstToRun")?;
        samples.finish("Samples")?;
        let k = first_bv.count_ones();
        if first_bv.universe() != n || ftr.len() != k || smp.len() != k {
            return Err(corrupt("locating structure lengths"));
        }
        if ftr.width() != ceil_log2(r as u64) || smp.width() != ceil_log2(n as u64) {
            return Err(corrupt("locating structure widths"));
        }
        if ftr.iter().any(|p| p as usize >= r) || smp.iter().any(|v| v as usize >= n) {
            return Err(corrupt("locating structure values"));
        }
        if sa_last == 0 || sa_last > n {
            return Err(corrupt("SA[n] out of range"));
        }
        Ok(Self {
            n,
            r,
            first: first_bv,
            first_to_run: ftr,
            samples: smp,
            sa_last,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suffix::SuffixContext;
    use crate::text::Text;

    /// Full sampling straight from a suffix context.
    fn full_core(ctx: &SuffixContext) -> LocateCore {
        let r = ctx.r();
        let mut firsts: Vec<(usize, usize)> = (1..=r).map(|p| (ctx.run_first(p), p)).collect();
        firsts.sort_unstable();
        let samples: Vec<usize> = (1..=r).map(|p| ctx.run_sample(p)).collect();
        LocateCore::new(ctx.n(), r, &firsts, &samples, ctx.sa_last())
    }

    #[test]
    fn worked_example_full_sampling() {
        let t = Text::from_bytes(b"abracadabra").unwrap();
        let ctx = SuffixContext::new(&t);
        let core = full_core(&ctx);
        let removed = DenseBV::from_positions(8, []);
        let ones: Vec<usize> = core.first().iter_ones().collect();
        assert_eq!(ones, vec![3, 5, 7, 8, 9, 10, 11, 12]);
        assert_eq!(core.pred_first(6), Some((5, 2)));
        assert_eq!(core.pred_first(3), Some((3, 1)));
        assert_eq!(core.pred_first(2), None);
        assert_eq!(core.phi(&removed, 1).unwrap().value, 9);
        assert_eq!(core.phi(&removed, 2).unwrap().value, 10);
        assert_eq!(core.sample_of_run(&removed, 7), Ok(6));
        // i itself marked: offset term vanishes. First 1 at 5 is run 6 (row 6);
        // Samples[5] = 3, so φ(5) = 4 = SA[5].
        assert_eq!(core.phi(&removed, 5).unwrap().value, 4);
        assert_eq!(ctx.sa(5), 4);
    }

    #[test]
    fn full_sampling_phi_is_total() {
        for raw in [&b"abracadabra"[..], b"mississippi", b"aaaa", b"abababab", b"ACGTTGCAACGT"] {
            let t = Text::from_bytes(raw).unwrap();
            let ctx = SuffixContext::new(&t);
            let core = full_core(&ctx);
            let removed = DenseBV::from_positions(ctx.r(), []);
            for j in 2..=ctx.n() {
                let phi = core.phi(&removed, ctx.letter_pos(j)).unwrap();
                assert_eq!(phi.value, ctx.sa(j - 1), "text {raw:?} row {j}");
                assert!(!phi.wrapped_run);
            }
        }
    }

    #[test]
    fn first_entries_map_to_run_starts() {
        let t = Text::from_bytes(b"mississippi").unwrap();
        let ctx = SuffixContext::new(&t);
        let core = full_core(&ctx);
        for (k, pos) in core.first().iter_ones().enumerate() {
            let run = core.first_to_run(k + 1);
            assert_eq!(pos, ctx.letter_pos(ctx.run_start(run)));
        }
    }

    #[test]
    fn removed_sample_is_reported() {
        let t = Text::from_bytes(b"abracadabra").unwrap();
        let ctx = SuffixContext::new(&t);
        let core = full_core(&ctx);
        let removed = DenseBV::from_positions(8, [1]);
        assert_eq!(core.sample_of_run(&removed, 1), Err(LocateError::SampleRemoved(1)));
        assert_eq!(core.phi(&removed, 0), Err(LocateError::PhiUndefined(0)));
    }
}
