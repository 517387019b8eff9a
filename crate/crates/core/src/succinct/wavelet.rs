use super::dense::DenseBV;
use super::intvec::bits_for;
use crate::codec::{ByteReader, ByteWriter};
use crate::error::{PersistError, SuccinctError};

/// Symbol sequence with per-symbol rank/select, stored as a wavelet matrix.
///
/// Used for the run-head letters of the run-length BWT. Positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RunHeadSeq {
    len: usize,
    sigma: usize,
    levels: Vec<DenseBV>,
    zeros: Vec<usize>,
}

impl RunHeadSeq {
    /// Builds over `symbols`, each of which must be `< sigma`.
    pub fn new(symbols: &[u8], sigma: usize) -> Self {
        assert!(sigma >= 1);
        let depth = bits_for(sigma.saturating_sub(1) as u64).max(1) as usize;
        let mut cur = symbols.to_vec();
        let mut levels = Vec::with_capacity(depth);
        let mut zeros = Vec::with_capacity(depth);
        for l in 0..depth {
            let shift = depth - 1 - l;
            let bv = DenseBV::from_bits(cur.iter().map(|&c| {
                assert!((c as usize) < sigma, "symbol {c} outside alphabet of size {sigma}");
                (c >> shift) & 1 == 1
            }));
            zeros.push(bv.count_zeros());
            levels.push(bv);
            let (mut lo, hi): (Vec<u8>, Vec<u8>) = cur.iter().partition(|&&c| (c >> shift) & 1 == 0);
            lo.extend(hi);
            cur = lo;
        }
        Self {
            len: symbols.len(),
            sigma,
            levels,
            zeros,
        }
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
    pub fn sigma(&self) -> usize {
        self.sigma
    }

    #[inline]
    fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Symbol at 1-based position `i`.
    pub fn get(&self, i: usize) -> u8 {
        assert!(i >= 1 && i <= self.len, "position {i} outside 1..={}", self.len);
        let mut p = i - 1;
        let mut c = 0u8;
        for (l, bv) in self.levels.iter().enumerate() {
            c <<= 1;
            if bv.get(p + 1) {
                c |= 1;
                p = self.zeros[l] + bv.rank1(p);
            } else {
                p = bv.rank0(p);
            }
        }
        c
    }

    pub fn access(&self, i: usize) -> Result<u8, SuccinctError> {
        if i == 0 || i > self.len {
            return Err(SuccinctError::OutOfRange { index: i, len: self.len });
        }
        Ok(self.get(i))
    }

    /// Occurrences of `c` in `[1..i]`.
    pub fn rank(&self, c: u8, i: usize) -> usize {
        assert!(i <= self.len, "position {i} outside 0..={}", self.len);
        if c as usize >= self.sigma || i == 0 {
            return 0;
        }
        let (mut s, mut e) = (0usize, i);
        let depth = self.depth();
        for (l, bv) in self.levels.iter().enumerate() {
            if (c >> (depth - 1 - l)) & 1 == 1 {
                s = self.zeros[l] + bv.rank1(s);
                e = self.zeros[l] + bv.rank1(e);
            } else {
                s = bv.rank0(s);
                e = bv.rank0(e);
            }
        }
        e - s
    }

    /// 1-based position of the k-th occurrence of `c`.
    pub fn select(&self, c: u8, k: usize) -> Result<usize, SuccinctError> {
        if k == 0 || k > self.rank(c, self.len) {
            return Err(SuccinctError::NoSuchOccurrence { k });
        }
        let depth = self.depth();
        let mut s = 0usize;
        for (l, bv) in self.levels.iter().enumerate() {
            s = if (c >> (depth - 1 - l)) & 1 == 1 {
                self.zeros[l] + bv.rank1(s)
            } else {
                bv.rank0(s)
            };
        }
        let mut p = s + k - 1;
        for l in (0..depth).rev() {
            let bv = &self.levels[l];
            p = if (c >> (depth - 1 - l)) & 1 == 1 {
                bv.select1(p - self.zeros[l] + 1).unwrap() - 1
            } else {
                bv.select0(p + 1).unwrap() - 1
            };
        }
        Ok(p + 1)
    }

    pub fn size_in_bits(&self) -> usize {
        self.levels.iter().map(DenseBV::size_in_bits).sum::<usize>() + self.zeros.len() * 64
    }

    pub(crate) fn write(&self, w: &mut ByteWriter) {
        w.u64(self.len as u64);
        w.u32(self.sigma as u32);
        w.u8(self.levels.len() as u8);
        for bv in &self.levels {
            bv.write(w);
        }
    }

    pub(crate) fn read(r: &mut ByteReader<'_>) -> Result<Self, PersistError> {
        let len = r.usize()?;
        let sigma = r.u32()? as usize;
        let depth = r.u8()? as usize;
        if sigma == 0 || sigma > 256 || depth != (bits_for(sigma as u64 - 1).max(1) as usize) {
            return Err(PersistError::Corrupt("wavelet matrix shape".into()));
        }
        let mut levels = Vec::with_capacity(depth);
        let mut zeros = Vec::with_capacity(depth);
        for _ in 0..depth {
            let bv = DenseBV::read(r)?;
            if bv.len() != len {
                return Err(PersistError::Corrupt("wavelet level length".into()));
            }
            zeros.push(bv.count_zeros());
            levels.push(bv);
        }
        let seq = Self {
            len,
            sigma,
            levels,
            zeros,
        };
        if (1..=len).any(|i| seq.get(i) as usize >= sigma) {
            return Err(PersistError::Corrupt("run-head symbol outside alphabet".into()));
        }
        Ok(seq)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn worked_example_letters() {
        // "ard$rcab" with $=0 a=1 b=2 c=3 d=4 r=5
        let letters = [1u8, 5, 4, 0, 5, 3, 1, 2];
        let seq = RunHeadSeq::new(&letters, 6);
        assert_eq!(seq.rank(1, 8), 2);
        assert_eq!(seq.select(1, 2), Ok(7));
        assert_eq!(seq.rank(1, 0), 0);
        assert_eq!(seq.select(4, 0), Err(SuccinctError::NoSuchOccurrence { k: 0 }));
        assert_eq!(seq.select(4, 2), Err(SuccinctError::NoSuchOccurrence { k: 2 }));
        assert_eq!(seq.rank(9, 8), 0);
        for (i, &c) in letters.iter().enumerate() {
            assert_eq!(seq.get(i + 1), c);
        }
    }

    #[test]
    fn exhaustive_against_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for sigma in [1usize, 2, 3, 5, 26, 200, 256] {
            for len in [0usize, 1, 50, 777] {
                let syms: Vec<u8> = (0..len).map(|_| rng.gen_range(0..sigma) as u8).collect();
                let seq = RunHeadSeq::new(&syms, sigma);
                for c in 0..sigma.min(30) as u8 {
                    let mut cnt = 0;
                    for i in 1..=len {
                        if syms[i - 1] == c {
                            cnt += 1;
                            assert_eq!(seq.select(c, cnt), Ok(i));
                        }
                        assert_eq!(seq.rank(c, i), cnt);
                    }
                    assert!(seq.select(c, cnt + 1).is_err());
                }
                for i in 1..=len {
                    assert_eq!(seq.get(i), syms[i - 1]);
                }
            }
        }
    }
}
