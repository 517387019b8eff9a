use crate::codec::{ByteReader, ByteWriter};
use crate::error::{PersistError, SuccinctError};

const WORDS_PER_BLOCK: usize = 8;
const BLOCK_BITS: usize = WORDS_PER_BLOCK * 64;
const SELECT_SAMPLE: usize = 1024;

/// Plain bitvector with a two-level rank directory and sampled select hints.
///
/// Positions are 1-based: `rank1(p)` counts ones in `[1..p]` and `select1(k)`
/// returns the position of the k-th one.
#[derive(Debug, Clone, Default)]
pub struct DenseBV {
    len: usize,
    words: Vec<u64>,
    ones: usize,
    /// Ones strictly before each block; one trailing entry holds the total.
    block_ranks: Vec<u64>,
    select1_hints: Vec<u32>,
    select0_hints: Vec<u32>,
}

impl PartialEq for DenseBV {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.words == other.words
    }
}

impl Eq for DenseBV {}

#[inline]
fn select_in_word(mut w: u64, mut k: usize) -> usize {
    // k is 0-based
    while k > 0 {
        w &= w - 1;
        k -= 1;
    }
    w.trailing_zeros() as usize
}

impl DenseBV {
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0usize;
        for b in bits {
            if len.is_multiple_of(64) {
                words.push(0u64);
            }
            if b {
                *words.last_mut().unwrap() |= 1 << (len % 64);
            }
            len += 1;
        }
        Self::from_words(words, len)
    }

    /// Builds from the 1-based positions of the ones.
    pub fn from_positions(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut words = vec![0u64; len.div_ceil(64)];
        for p in ones {
            assert!(p >= 1 && p <= len, "position {p} outside 1..={len}");
            let i = p - 1;
            words[i / 64] |= 1 << (i % 64);
        }
        Self::from_words(words, len)
    }

    pub fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.resize(len.div_ceil(64), 0);
        if !len.is_multiple_of(64) {
            let last = words.len() - 1;
            words[last] &= (1u64 << (len % 64)) - 1;
        }
        let mut bv = Self {
            len,
            words,
            ..Default::default()
        };
        bv.build_directory();
        bv
    }

    fn build_directory(&mut self) {
        let nblocks = self.words.len().div_ceil(WORDS_PER_BLOCK);
        let mut block_ranks = Vec::with_capacity(nblocks + 1);
        let mut select1_hints = Vec::new();
        let mut select0_hints = Vec::new();
        let (mut ones, mut zeros) = (0usize, 0usize);
        for b in 0..nblocks {
            block_ranks.push(ones as u64);
            let lo = b * WORDS_PER_BLOCK;
            let hi = (lo + WORDS_PER_BLOCK).min(self.words.len());
            let block_ones: usize = self.words[lo..hi]
                .iter()
                .map(|w| w.count_ones() as usize)
                .sum();
            let block_len = (self.len - b * BLOCK_BITS).min(BLOCK_BITS);
            let block_zeros = block_len - block_ones;
            // Record the block holding every SELECT_SAMPLE-th one (and zero).
            while select1_hints.len() * SELECT_SAMPLE < ones + block_ones {
                select1_hints.push(b as u32);
            }
            while select0_hints.len() * SELECT_SAMPLE < zeros + block_zeros {
                select0_hints.push(b as u32);
            }
            ones += block_ones;
            zeros += block_zeros;
        }
        block_ranks.push(ones as u64);
        self.ones = ones;
        self.block_ranks = block_ranks;
        self.select1_hints = select1_hints;
        self.select0_hints = select0_hints;
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn count_ones(&self) -> usize {
        self.ones
    }

    #[inline]
    pub fn count_zeros(&self) -> usize {
        self.len - self.ones
    }

    /// Bit at 1-based position `p`. Panics when out of range.
    #[inline]
    pub fn get(&self, p: usize) -> bool {
        assert!(p >= 1 && p <= self.len, "position {p} outside 1..={}", self.len);
        let i = p - 1;
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn access(&self, p: usize) -> Result<bool, SuccinctError> {
        if p == 0 || p > self.len {
            return Err(SuccinctError::OutOfRange { index: p, len: self.len });
        }
        Ok(self.get(p))
    }

    /// Ones in `[1..p]`, for `0 <= p <= len`.
    #[inline]
    pub fn rank1(&self, p: usize) -> usize {
        debug_assert!(p <= self.len);
        let block = p / BLOCK_BITS;
        let mut r = self.block_ranks[block] as usize;
        let word_end = p / 64;
        for w in &self.words[block * WORDS_PER_BLOCK..word_end] {
            r += w.count_ones() as usize;
        }
        let rem = p % 64;
        if rem != 0 {
            r += (self.words[word_end] & ((1u64 << rem) - 1)).count_ones() as usize;
        }
        r
    }

    #[inline]
    pub fn rank0(&self, p: usize) -> usize {
        p - self.rank1(p)
    }

    /// Position of the k-th one (1-based), or `None` when `k` is 0 or too large.
    pub fn select1(&self, k: usize) -> Option<usize> {
        if k == 0 || k > self.ones {
            return None;
        }
        let target = k - 1;
        let h = target / SELECT_SAMPLE;
        let mut lo = self.select1_hints[h] as usize;
        let mut hi = self
            .select1_hints
            .get(h + 1)
            .map_or(self.block_ranks.len() - 1, |&b| b as usize + 1);
        // last block with block_ranks[b] <= target
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.block_ranks[mid] as usize <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut rem = target - self.block_ranks[lo] as usize;
        let mut wi = lo * WORDS_PER_BLOCK;
        loop {
            let c = self.words[wi].count_ones() as usize;
            if rem < c {
                return Some(wi * 64 + select_in_word(self.words[wi], rem) + 1);
            }
            rem -= c;
            wi += 1;
        }
    }

    /// Position of the k-th zero (1-based).
    pub fn select0(&self, k: usize) -> Option<usize> {
        if k == 0 || k > self.count_zeros() {
            return None;
        }
        let target = k - 1;
        let zeros_before = |b: usize| b * BLOCK_BITS - self.block_ranks[b] as usize;
        let h = target / SELECT_SAMPLE;
        let mut lo = self.select0_hints[h] as usize;
        let mut hi = self
            .select0_hints
            .get(h + 1)
            .map_or(self.block_ranks.len() - 1, |&b| b as usize + 1);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if zeros_before(mid) <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut rem = target - zeros_before(lo);
        let mut wi = lo * WORDS_PER_BLOCK;
        loop {
            let inv = !self.words[wi];
            let c = inv.count_ones() as usize;
            if rem < c {
                return Some(wi * 64 + select_in_word(inv, rem) + 1);
            }
            rem -= c;
            wi += 1;
        }
    }

    /// Rightmost one at or before `p`.
    pub fn pred(&self, p: usize) -> Option<usize> {
        self.select1(self.rank1(p))
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (1..=self.len).map(move |p| self.get(p))
    }

    /// Payload plus directory bits.
    pub fn size_in_bits(&self) -> usize {
        self.words.len() * 64
            + self.block_ranks.len() * 64
            + (self.select1_hints.len() + self.select0_hints.len()) * 32
    }

    pub(crate) fn write(&self, w: &mut ByteWriter) {
        w.u64(self.len as u64);
        w.words(&self.words);
    }

    pub(crate) fn read(r: &mut ByteReader<'_>) -> Result<Self, PersistError> {
        let len = r.usize()?;
        let words = r.words()?;
        if words.len() != len.div_ceil(64) {
            return Err(PersistError::Corrupt("bitvector length mismatch".into()));
        }
        if len % 64 != 0 && words[words.len() - 1] >> (len % 64) != 0 {
            return Err(PersistError::Corrupt("bitvector padding bits set".into()));
        }
        Ok(Self::from_words(words, len))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bits(s: &str) -> DenseBV {
        DenseBV::from_bits(s.chars().map(|c| c == '1'))
    }

    #[test]
    fn hand_examples() {
        let bv = bits("101001");
        assert_eq!(bv.rank1(4), 2);
        assert_eq!(bv.select1(3), Some(6));
        assert_eq!(bv.pred(5), Some(3));
        assert_eq!(bits("0000").pred(4), None);
        assert_eq!(bv.select0(1), Some(2));
        assert_eq!(bv.access(7), Err(SuccinctError::OutOfRange { index: 7, len: 6 }));
        assert_eq!(bv.access(0), Err(SuccinctError::OutOfRange { index: 0, len: 6 }));
    }

    #[test]
    fn exhaustive_against_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for len in [0usize, 1, 63, 64, 65, 511, 512, 513, 1500, 4096] {
            for density in [0.0, 0.02, 0.5, 0.97, 1.0] {
                let raw: Vec<bool> = (0..len).map(|_| rng.gen_bool(density)).collect();
                let bv = DenseBV::from_bits(raw.iter().copied());
                let mut ones = 0;
                let mut zeros = 0;
                assert_eq!(bv.rank1(0), 0);
                for p in 1..=len {
                    if raw[p - 1] {
                        ones += 1;
                        assert_eq!(bv.select1(ones), Some(p));
                    } else {
                        zeros += 1;
                        assert_eq!(bv.select0(zeros), Some(p));
                    }
                    assert_eq!(bv.rank1(p), ones, "len {len} p {p}");
                    assert_eq!(bv.get(p), raw[p - 1]);
                }
                assert_eq!(bv.select1(ones + 1), None);
                assert_eq!(bv.select0(zeros + 1), None);
                assert_eq!(bv.count_ones(), ones);
            }
        }
    }

    #[test]
    fn serialization_roundtrip() {
        let bv = DenseBV::from_positions(700, [1, 64, 65, 700]);
        let mut w = ByteWriter::new();
        bv.write(&mut w);
        let bytes = w.into_inner();
        let back = DenseBV::read(&mut ByteReader::new(&bytes)).unwrap();
        assert_eq!(back, bv);
        assert_eq!(back.select1(4), Some(700));
    }
}
