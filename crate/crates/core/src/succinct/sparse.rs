use super::dense::DenseBV;
use super::intvec::IntVec;
use crate::codec::{ByteReader, ByteWriter};
use crate::error::{PersistError, SuccinctError};

/// Sparse bitvector over `[1..universe]` in Elias-Fano layout.
///
/// Each one at 1-based position `p` is stored as `x = p - 1`, split into a
/// low part of `low_width` bits and a high part written in unary into
/// `high`. `select1` costs one select on `high`; `rank1` costs a `select0`
/// plus a binary search inside one bucket of at most `2^low_width` values.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseBV {
    universe: usize,
    ones: usize,
    low_width: u8,
    high: DenseBV,
    low: IntVec,
}

impl SparseBV {
    /// Builds from strictly increasing 1-based positions in `[1..universe]`.
    pub fn from_positions(universe: usize, positions: &[usize]) -> Self {
        let k = positions.len();
        let low_width = if k == 0 || universe <= k {
            0
        } else {
            (usize::BITS - 1 - (universe / k).leading_zeros()) as u8
        };
        let high_len = k + (universe >> low_width) + 1;
        let mut high_words = vec![0u64; high_len.div_ceil(64)];
        let mut low = IntVec::new(low_width, k);
        let low_mask = (1usize << low_width) - 1;
        let mut prev = 0usize;
        for (i, &p) in positions.iter().enumerate() {
            assert!(p >= 1 && p <= universe, "position {p} outside 1..={universe}");
            assert!(i == 0 || p > prev, "positions must be strictly increasing");
            prev = p;
            let x = p - 1;
            low.set(i, (x & low_mask) as u64);
            let hp = (x >> low_width) + i;
            high_words[hp / 64] |= 1 << (hp % 64);
        }
        Self {
            universe,
            ones: k,
            low_width,
            high: DenseBV::from_words(high_words, high_len),
            low,
        }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut universe = 0;
        let mut pos = Vec::new();
        for (i, b) in bits.into_iter().enumerate() {
            universe = i + 1;
            if b {
                pos.push(i + 1);
            }
        }
        Self::from_positions(universe, &pos)
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn count_ones(&self) -> usize {
        self.ones
    }

    /// Value (0-based) of the i-th element, 0-based `i`.
    #[inline]
    fn value0(&self, i: usize) -> usize {
        let hp = self.high.select1(i + 1).expect("element index in range") - 1;
        ((hp - i) << self.low_width) | self.low.get(i) as usize
    }

    /// Position of the k-th one, 1-based `k`.
    #[inline]
    pub fn select1(&self, k: usize) -> Option<usize> {
        if k == 0 || k > self.ones {
            return None;
        }
        Some(self.value0(k - 1) + 1)
    }

    /// Ones in `[1..p]`, for `0 <= p <= universe`.
    pub fn rank1(&self, p: usize) -> usize {
        debug_assert!(p <= self.universe);
        if p == 0 || self.ones == 0 {
            return 0;
        }
        let x = p - 1;
        let h = x >> self.low_width;
        // elements with high part < h, and < h+1
        let begin = if h == 0 { 0 } else { self.high.select0(h).unwrap() - h };
        let end = match self.high.select0(h + 1) {
            Some(z) => z - 1 - h,
            None => self.ones,
        };
        let low_x = (x & ((1usize << self.low_width) - 1)) as u64;
        let (mut lo, mut hi) = (begin, end);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.low.get(mid) <= low_x {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    pub fn get(&self, p: usize) -> bool {
        assert!(p >= 1 && p <= self.universe);
        self.rank1(p) > self.rank1(p - 1)
    }

    pub fn access(&self, p: usize) -> Result<bool, SuccinctError> {
        if p == 0 || p > self.universe {
            return Err(SuccinctError::OutOfRange { index: p, len: self.universe });
        }
        Ok(self.get(p))
    }

    /// Rightmost one at or before `p` together with its rank.
    pub fn pred_with_rank(&self, p: usize) -> Option<(usize, usize)> {
        let k = self.rank1(p);
        self.select1(k).map(|pos| (pos, k))
    }

    pub fn pred(&self, p: usize) -> Option<usize> {
        self.pred_with_rank(p).map(|(pos, _)| pos)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.ones).map(move |k| self.select1(k).unwrap())
    }

    pub fn size_in_bits(&self) -> usize {
        self.high.size_in_bits() + self.low.size_in_bits()
    }

    /// Bits of the raw high and low arrays, without rank/select directories.
    pub fn payload_bits(&self) -> usize {
        self.high.len() + self.low.len() * self.low.width() as usize
    }

    pub(crate) fn write(&self, w: &mut ByteWriter) {
        w.u64(self.universe as u64);
        w.u64(self.ones as u64);
        w.u8(self.low_width);
        self.high.write(w);
        self.low.write(w);
    }

    pub(crate) fn read(r: &mut ByteReader<'_>) -> Result<Self, PersistError> {
        let universe = r.usize()?;
        let ones = r.usize()?;
        let low_width = r.u8()?;
        let high = DenseBV::read(r)?;
        let low = IntVec::read(r)?;
        if low_width >= 64
            || ones > universe
            || low.len() != ones
            || low.width() != low_width
            || high.count_ones() != ones
            || high.len() != ones + (universe >> low_width) + 1
        {
            return Err(PersistError::Corrupt("inconsistent Elias-Fano layout".into()));
        }
        let sv = Self {
            universe,
            ones,
            low_width,
            high,
            low,
        };
        if ones > 0 && sv.value0(ones - 1) >= universe {
            return Err(PersistError::Corrupt("Elias-Fano value beyond universe".into()));
        }
        Ok(sv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hand_examples() {
        let bv = SparseBV::from_bits("101001".chars().map(|c| c == '1'));
        assert_eq!(bv.rank1(4), 2);
        assert_eq!(bv.select1(3), Some(6));
        assert_eq!(bv.pred(5), Some(3));
        assert_eq!(bv.pred_with_rank(6), Some((6, 3)));
        assert_eq!(SparseBV::from_bits([false; 4]).pred(4), None);
        assert!(bv.access(9).is_err());
    }

    #[test]
    fn exhaustive_against_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for u in [1usize, 2, 7, 64, 100, 1000, 4096] {
            for density in [0.0, 0.001, 0.05, 0.3, 0.9, 1.0] {
                let raw: Vec<bool> = (0..u).map(|_| rng.gen_bool(density)).collect();
                let bv = SparseBV::from_bits(raw.iter().copied());
                let mut ones = 0;
                let mut last = None;
                assert_eq!(bv.rank1(0), 0);
                for p in 1..=u {
                    if raw[p - 1] {
                        ones += 1;
                        last = Some(p);
                        assert_eq!(bv.select1(ones), Some(p));
                    }
                    assert_eq!(bv.rank1(p), ones, "u {u} p {p}");
                    assert_eq!(bv.get(p), raw[p - 1]);
                    assert_eq!(bv.pred(p), last);
                }
                assert_eq!(bv.select1(ones + 1), None);
            }
        }
    }

    #[test]
    fn space_within_elias_fano_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (u, k) in [(1usize << 20, 1000usize), (100_000, 5000), (10_000, 9000)] {
            let mut pos: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=u)).collect();
            pos.sort_unstable();
            pos.dedup();
            let k = pos.len();
            let bv = SparseBV::from_positions(u, &pos);
            let ceil_lg = (u as f64 / k as f64).log2().ceil() as usize;
            let bound = k * (2 + ceil_lg);
            assert!(bv.payload_bits() <= 2 * bound + 64, "u {u} k {k}");
            let mut w = ByteWriter::new();
            bv.write(&mut w);
            assert!(w.len() * 8 <= 2 * bound + 1024);
        }
    }
}
