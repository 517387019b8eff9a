//! Sample thinning and the Removed / Valid / ValidArea structures.
//!
//! Sorted end-of-run samples are scanned left to right; a sample is dropped
//! when the next original sample lies within distance `s` of the last kept
//! one. Dropping the sample of run `p` also drops the First entry of run
//! `p + 1` (run 1 for `p = r`), since φ from that entry would need it.

use std::fmt;

use crate::codec::{ByteReader, ByteWriter};
use crate::error::{PersistError, SubsampleError};
use crate::locate::LocateCore;
use crate::rlbwt::RlBwt;
use crate::succinct::{ceil_log2, DenseBV, IntVec};
use crate::suffix::SuffixContext;

/// Which locate fast-path structures an index carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variant {
    /// Removed only.
    Plain = 0,
    /// Adds Valid.
    Valid = 1,
    /// Adds Valid and ValidArea.
    ValidArea = 2,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Plain, Variant::Valid, Variant::ValidArea];

    pub fn from_u8(v: u8) -> Result<Self, SubsampleError> {
        match v {
            0 => Ok(Variant::Plain),
            1 => Ok(Variant::Valid),
            2 => Ok(Variant::ValidArea),
            other => Err(SubsampleError::InvalidVariant(other)),
        }
    }

    #[inline]
    pub fn as_u8(self) -> u8 {
        self as u8
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// Applies the thinning rule to strictly increasing `sorted` samples.
///
/// Returns the retained samples and, aligned with `sorted`, the removal
/// flags. The first and last samples are always kept.
pub fn subsample_positions(sorted: &[usize], s: usize) -> (Vec<usize>, Vec<bool>) {
    let r = sorted.len();
    let mut removed = vec![false; r];
    if r <= 2 {
        return (sorted.to_vec(), removed);
    }
    let mut last = sorted[0];
    for i in 1..r - 1 {
        if sorted[i + 1] - last <= s {
            removed[i] = true;
        } else {
            last = sorted[i];
        }
    }
    let retained = sorted.iter().zip(&removed).filter(|(_, &x)| !x).map(|(&v, _)| v).collect();
    (retained, removed)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsampleExt {
    s: usize,
    variant: Variant,
    removed: DenseBV,
    valid: Option<DenseBV>,
    valid_area: Option<IntVec>,
}

impl SubsampleExt {
    #[inline]
    pub fn s(&self) -> usize {
        self.s
    }

    #[inline]
    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// One bit per run, set when the run's sample was dropped.
    pub fn removed(&self) -> &DenseBV {
        &self.removed
    }

    #[inline]
    pub fn is_removed(&self, p: usize) -> bool {
        self.removed.get(p)
    }

    pub fn removed_count(&self) -> usize {
        self.removed.count_ones()
    }

    /// One bit per retained First entry in text order, set when no removed
    /// First entry lies between it and the next retained one.
    pub fn valid(&self) -> Option<&DenseBV> {
        self.valid.as_ref()
    }

    /// Per 0 in Valid, the distance to the nearest removed First entry,
    /// capped at `s - 1`.
    pub fn valid_area(&self) -> Option<&IntVec> {
        self.valid_area.as_ref()
    }

    /// Distance from the `q`-th retained First entry to the next removed one,
    /// or `None` when its gap holds no removal.
    pub fn next_removed_dist(&self, q: usize) -> Result<Option<usize>, SubsampleError> {
        match (&self.valid, &self.valid_area) {
            (Some(valid), Some(area)) => Ok(if valid.get(q) {
                None
            } else {
                Some(area.get(q - valid.rank1(q) - 1) as usize)
            }),
            _ => Err(SubsampleError::WrongVariant {
                required: 2,
                actual: self.variant.as_u8(),
            }),
        }
    }

    pub fn size_in_bits(&self) -> usize {
        self.removed.size_in_bits()
            + self.valid.as_ref().map_or(0, DenseBV::size_in_bits)
            + self.valid_area.as_ref().map_or(0, IntVec::size_in_bits)
    }

    #[cfg(test)]
    pub(crate) fn replace_removed(&mut self, removed: DenseBV) {
        self.removed = removed;
    }

    pub(crate) fn write_removed(&self, w: &mut ByteWriter) {
        self.removed.write(w);
    }

    pub(crate) fn write_valid(&self, w: &mut ByteWriter) {
        if let Some(v) = &self.valid {
            v.write(w);
        }
    }

    pub(crate) fn write_valid_area(&self, w: &mut ByteWriter) {
        if let Some(a) = &self.valid_area {
            a.write(w);
        }
    }

    pub(crate) fn read_parts(
        r: usize,
        s: usize,
        variant: Variant,
        retained: usize,
        removed: &mut ByteReader<'_>,
        valid: Option<&mut ByteReader<'_>>,
        valid_area: Option<&mut ByteReader<'_>>,
    ) -> Result<Self, PersistError> {
        let corrupt = |m: &str| PersistError::Corrupt(m.to_string());
        let removed_bv = DenseBV::read(removed)?;
        removed.finish("Removed")?;
        if removed_bv.len() != r || r - removed_bv.count_ones() != retained {
            return Err(corrupt("Removed shape"));
        }
        let valid_bv = match valid {
            Some(block) => {
                let bv = DenseBV::read(block)?;
                block.finish("Valid")?;
                if bv.len() != retained {
                    return Err(corrupt("Valid length"));
                }
                Some(bv)
            }
            None => None,
        };
        let area = match valid_area {
            Some(block) => {
                let iv = IntVec::read(block)?;
                block.finish("ValidArea")?;
                let zeros = valid_bv.as_ref().map_or(0, DenseBV::count_zeros);
                if iv.len() != zeros || iv.width() != ceil_log2(s as u64) {
                    return Err(corrupt("ValidArea shape"));
                }
                if iv.iter().any(|d| d == 0 || d as usize >= s) {
                    return Err(corrupt("ValidArea value"));
                }
                Some(iv)
            }
            None => None,
        };
        if valid_bv.is_some() != (variant >= Variant::Valid) || area.is_some() != (variant == Variant::ValidArea) {
            return Err(corrupt("optional blocks do not match the variant"));
        }
        Ok(Self {
            s,
            variant,
            removed: removed_bv,
            valid: valid_bv,
            valid_area: area,
        })
    }
}

fn check_params(n: usize, s: usize) -> Result<(), SubsampleError> {
    if s == 0 || s >= n {
        return Err(SubsampleError::STooLarge { s, n });
    }
    Ok(())
}

/// Builds the subsampled locating structures from an explicit suffix array.
pub fn build_ext(ctx: &SuffixContext, s: usize, variant: Variant) -> Result<(LocateCore, SubsampleExt), SubsampleError> {
    check_params(ctx.n(), s)?;
    let r = ctx.r();
    let samples: Vec<usize> = (1..=r).map(|p| ctx.run_sample(p)).collect();
    let firsts: Vec<usize> = (1..=r).map(|p| ctx.run_first(p)).collect();
    Ok(assemble(ctx.n(), &samples, &firsts, ctx.sa_last(), s, variant))
}

/// Builds the same structures as [`build_ext`] from the run-length BWT alone,
/// by walking the text backwards with LF from the sentinel's row.
pub fn build_ext_direct(rl: &RlBwt, s: usize, variant: Variant) -> Result<(LocateCore, SubsampleExt), SubsampleError> {
    let n = rl.n();
    check_params(n, s)?;
    let r = rl.r();
    let mut samples = vec![0usize; r];
    let mut firsts = vec![0usize; r];
    let mut sa_last = 0;
    // Row 1 holds the suffix starting at n; t LF-steps later, at n - t.
    let mut j = 1;
    for t in 0..n {
        let sa = n - t;
        if j == n {
            sa_last = sa;
        }
        let letter_pos = if sa == 1 { n } else { sa - 1 };
        let p = rl.run_of(j);
        if rl.is_run_end(j) {
            samples[p - 1] = letter_pos;
        }
        if rl.run_start(p) == j {
            firsts[p - 1] = letter_pos;
        }
        j = rl.lf(j);
    }
    Ok(assemble(n, &samples, &firsts, sa_last, s, variant))
}

/// Thins per-run samples and derives every locating structure.
/// `samples[p - 1]` and `firsts[p - 1]` are run `p`'s end and start letter positions.
fn assemble(n: usize, samples: &[usize], firsts: &[usize], sa_last: usize, s: usize, variant: Variant) -> (LocateCore, SubsampleExt) {
    let r = samples.len();
    let mut by_pos: Vec<(usize, usize)> = samples.iter().enumerate().map(|(i, &v)| (v, i + 1)).collect();
    by_pos.sort_unstable();
    let sorted: Vec<usize> = by_pos.iter().map(|&(v, _)| v).collect();
    let (_, flags) = subsample_positions(&sorted, s);
    let mut removed_run = vec![false; r + 1];
    for (&(_, p), &f) in by_pos.iter().zip(&flags) {
        removed_run[p] = f;
    }
    let removed = DenseBV::from_bits(removed_run[1..].iter().copied());

    // First entry of run p goes with the sample of the cyclically preceding run.
    let first_removed = |p: usize| removed_run[if p == 1 { r } else { p - 1 }];
    let mut all_firsts: Vec<(usize, usize, bool)> = (1..=r).map(|p| (firsts[p - 1], p, first_removed(p))).collect();
    all_firsts.sort_unstable();
    let kept_firsts: Vec<(usize, usize)> = all_firsts.iter().filter(|e| !e.2).map(|e| (e.0, e.1)).collect();
    let kept_samples: Vec<usize> = (1..=r).filter(|&p| !removed_run[p]).map(|p| samples[p - 1]).collect();
    let core = LocateCore::new(n, r, &kept_firsts, &kept_samples, sa_last);

    let (valid, valid_area) = if variant == Variant::Plain {
        (None, None)
    } else {
        let kept_idx: Vec<usize> = (0..r).filter(|&e| !all_firsts[e].2).collect();
        let mut bits = Vec::with_capacity(kept_idx.len());
        let mut dists = Vec::new();
        for (t, &e) in kept_idx.iter().enumerate() {
            let next = kept_idx[(t + 1) % kept_idx.len()];
            let after = (e + 1) % r;
            // Everything strictly between two consecutive kept entries is removed.
            let gap_empty = after == next;
            bits.push(gap_empty);
            if !gap_empty {
                let d = (all_firsts[after].0 + n - all_firsts[e].0) % n;
                dists.push(d.min(s - 1) as u64);
            }
        }
        let area = (variant == Variant::ValidArea).then(|| IntVec::from_slice(ceil_log2(s as u64), &dists));
        (Some(DenseBV::from_bits(bits)), area)
    };

    let ext = SubsampleExt {
        s,
        variant,
        removed,
        valid,
        valid_area,
    };
    (core, ext)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::Text;

    fn abra(s: usize, variant: Variant) -> (SuffixContext, LocateCore, SubsampleExt) {
        let t = Text::from_bytes(b"abracadabra").unwrap();
        let ctx = SuffixContext::new(&t);
        let (core, ext) = build_ext(&ctx, s, variant).unwrap();
        (ctx, core, ext)
    }

    #[test]
    fn thinning_rule_examples() {
        let (kept, flags) = subsample_positions(&[2, 3, 5, 6, 7, 10, 11, 12], 4);
        assert_eq!(kept, vec![2, 6, 10, 12]);
        assert_eq!(flags, vec![false, true, true, false, true, false, true, false]);
        let input = [1, 4, 9, 10, 30];
        assert_eq!(subsample_positions(&input, 1).0, input.to_vec());
        assert_eq!(subsample_positions(&[1, 2, 3], 1000).0, vec![1, 3]);
        assert_eq!(subsample_positions(&[1, 100], 7).0, vec![1, 100]);
        assert_eq!(subsample_positions(&[5], 7).0, vec![5]);
        // ties remove
        assert_eq!(subsample_positions(&[1, 3, 5], 4).0, vec![1, 5]);
        assert_eq!(subsample_positions(&[1, 3, 5], 3).0, vec![1, 3, 5]);
    }

    #[test]
    fn worked_example_s4() {
        let (_, core, ext) = abra(4, Variant::ValidArea);
        let removed: Vec<bool> = ext.removed().iter().collect();
        assert_eq!(removed, vec![true, false, true, false, true, true, false, false]);
        let ones: Vec<usize> = core.first().iter_ones().collect();
        assert_eq!(ones, vec![3, 7, 9, 11]);
        let runs: Vec<usize> = (1..=4).map(|k| core.first_to_run(k)).collect();
        assert_eq!(runs, vec![5, 3, 8, 1]);
        assert_eq!(core.sample_of_run(ext.removed(), 2), Ok(10));
        assert!(core.sample_of_run(ext.removed(), 1).is_err());
        assert_eq!(ext.next_removed_dist(1), Ok(Some(2)));
        let valid: Vec<bool> = ext.valid().unwrap().iter().collect();
        assert_eq!(valid, vec![false, false, false, false]);
        for q in 1..=4 {
            let d = ext.next_removed_dist(q).unwrap().unwrap();
            assert!((1..4).contains(&d));
        }
    }

    #[test]
    fn s1_removes_nothing_and_matches_full_sampling() {
        let (ctx, core, ext) = abra(1, Variant::Valid);
        assert_eq!(ext.removed_count(), 0);
        assert_eq!(core.retained(), ctx.r());
        assert!(ext.valid().unwrap().iter().all(|b| b));
        let (_, core0, ext0) = abra(1, Variant::Plain);
        assert_eq!(core, core0);
        assert_eq!(ext.removed(), ext0.removed());
    }

    #[test]
    fn parameter_errors() {
        let t = Text::from_bytes(b"abracadabra").unwrap();
        let ctx = SuffixContext::new(&t);
        assert_eq!(build_ext(&ctx, 12, Variant::Plain).unwrap_err(), SubsampleError::STooLarge { s: 12, n: 12 });
        assert!(build_ext(&ctx, 0, Variant::Plain).is_err());
        assert_eq!(Variant::from_u8(3), Err(SubsampleError::InvalidVariant(3)));
        let (_, _, ext) = abra(4, Variant::Valid);
        assert_eq!(ext.next_removed_dist(1), Err(SubsampleError::WrongVariant { required: 2, actual: 1 }));
    }

    #[test]
    fn direct_construction_matches() {
        for raw in [&b"abracadabra"[..], b"mississippi", b"a", b"aaaaaaaa", b"ACGTACGTTACGTACGAACGT"] {
            let t = Text::from_bytes(raw).unwrap();
            let ctx = SuffixContext::new(&t);
            let rl = RlBwt::from_context(&ctx);
            for s in [1, 2, 3, 5, 8] {
                if s >= t.n() {
                    continue;
                }
                for v in Variant::ALL {
                    assert_eq!(build_ext(&ctx, s, v).unwrap(), build_ext_direct(&rl, s, v).unwrap());
                }
            }
        }
    }
}
