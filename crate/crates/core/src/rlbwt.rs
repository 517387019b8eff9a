//! Run-length BWT: the counting half of the index.
//!
//! The BWT is never materialized. `start` marks the first row of every run,
//! `letter` holds each run's symbol, and for every symbol `c` the sparse set
//! `run_len_prefix[c]` stores the cumulative lengths of the runs of `c` in run
//! order, so the number of `c`s in the first `t` runs of `c` is its `t`-th one.

use crate::codec::{ByteReader, ByteWriter};
use crate::error::{PersistError, SuccinctError};
use crate::succinct::{RunHeadSeq, SparseBV};
use crate::suffix::SuffixContext;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RlBwt {
    n: usize,
    sigma: usize,
    start: SparseBV,
    letter: RunHeadSeq,
    run_len_prefix: Vec<SparseBV>,
    c_table: Vec<usize>,
}

impl RlBwt {
    pub fn from_context(ctx: &SuffixContext) -> Self {
        let n = ctx.n();
        let sigma = ctx.sigma();
        let r = ctx.r();
        let letters: Vec<u8> = ctx.run_starts().iter().map(|&j| ctx.bwt(j)).collect();
        let mut cumulative: Vec<Vec<usize>> = vec![Vec::new(); sigma];
        for p in 1..=r {
            let c = letters[p - 1] as usize;
            let len = ctx.run_end(p) - ctx.run_start(p) + 1;
            let prev = cumulative[c].last().copied().unwrap_or(0);
            cumulative[c].push(prev + len);
        }
        let c_table = ctx.c_table().to_vec();
        let run_len_prefix = cumulative
            .iter()
            .enumerate()
            .map(|(c, cum)| SparseBV::from_positions(c_table[c + 1] - c_table[c], cum))
            .collect();
        Self {
            n,
            sigma,
            start: SparseBV::from_positions(n, ctx.run_starts()),
            letter: RunHeadSeq::new(&letters, sigma),
            run_len_prefix,
            c_table,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.start.count_ones()
    }

    #[inline]
    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn c_table(&self) -> &[usize] {
        &self.c_table
    }

    pub fn letters(&self) -> &RunHeadSeq {
        &self.letter
    }

    pub fn start(&self) -> &SparseBV {
        &self.start
    }

    /// `BWT[j] = Letter[rank1(Start, j)]`.
    #[inline]
    pub fn bwt_access(&self, j: usize) -> u8 {
        self.letter.get(self.start.rank1(j))
    }

    pub fn try_bwt_access(&self, j: usize) -> Result<u8, SuccinctError> {
        if j == 0 || j > self.n {
            return Err(SuccinctError::OutOfRange { index: j, len: self.n });
        }
        Ok(self.bwt_access(j))
    }

    /// Occurrences of `c` in the first `p - 1` runs.
    #[inline]
    fn rank_before_run(&self, c: u8, p: usize) -> usize {
        let t = self.letter.rank(c, p - 1);
        if t == 0 {
            0
        } else {
            self.run_len_prefix[c as usize].select1(t).unwrap()
        }
    }

    /// `rank_c(BWT, j)`: occurrences of `c` in `BWT[1..j]`.
    pub fn rank_sym_bwt(&self, c: u8, j: usize) -> usize {
        assert!(j <= self.n);
        if j == 0 || c as usize >= self.sigma {
            return 0;
        }
        let p = self.start.rank1(j);
        let full = self.rank_before_run(c, p);
        if self.letter.get(p) == c {
            full + j - self.start.select1(p).unwrap() + 1
        } else {
            full
        }
    }

    /// `LF(j) = C[c] + rank_c(BWT, j)` with `c = BWT[j]`.
    #[inline]
    pub fn lf(&self, j: usize) -> usize {
        let p = self.start.rank1(j);
        let c = self.letter.get(p);
        let in_run = j - self.start.select1(p).unwrap() + 1;
        self.c_table[c as usize] + self.rank_before_run(c, p) + in_run
    }

    /// One backward-search step; an empty result has `sp' > ep'`.
    #[inline]
    pub fn backward_step(&self, c: u8, sp: usize, ep: usize) -> (usize, usize) {
        debug_assert!(sp >= 1 && sp <= ep + 1 && ep <= self.n);
        if c as usize >= self.sigma {
            return (1, 0);
        }
        let base = self.c_table[c as usize];
        (base + self.rank_sym_bwt(c, sp - 1) + 1, base + self.rank_sym_bwt(c, ep))
    }

    /// Run containing row `j`.
    #[inline]
    pub fn run_of(&self, j: usize) -> usize {
        self.start.rank1(j)
    }

    #[inline]
    pub fn run_start(&self, p: usize) -> usize {
        self.start.select1(p).expect("run index in range")
    }

    /// Last row of run `p`.
    #[inline]
    pub fn run_end(&self, p: usize) -> usize {
        if p == self.r() {
            self.n
        } else {
            self.start.select1(p + 1).expect("run index in range") - 1
        }
    }

    pub fn try_run_end(&self, p: usize) -> Result<usize, SuccinctError> {
        if p == 0 || p > self.r() {
            return Err(SuccinctError::OutOfRange { index: p, len: self.r() });
        }
        Ok(self.run_end(p))
    }

    /// `j = n` or `Start[j + 1] = 1`.
    #[inline]
    pub fn is_run_end(&self, j: usize) -> bool {
        j == self.n || self.start.get(j + 1)
    }

    /// Largest run index `q <= p` whose letter is `c`.
    pub fn last_sym_run_upto(&self, c: u8, p: usize) -> Option<usize> {
        if c as usize >= self.sigma {
            return None;
        }
        let k = self.letter.rank(c, p);
        self.letter.select(c, k).ok()
    }

    pub fn size_in_bits(&self) -> usize {
        self.start.size_in_bits()
            + self.letter.size_in_bits()
            + self.run_len_prefix.iter().map(SparseBV::size_in_bits).sum::<usize>()
            + self.c_table.len() * 64
    }

    pub(crate) fn write_c_table(&self, w: &mut ByteWriter) {
        w.u64(self.c_table.len() as u64);
        for &c in &self.c_table {
            w.u64(c as u64);
        }
    }

    pub(crate) fn write_start(&self, w: &mut ByteWriter) {
        self.start.write(w);
    }

    pub(crate) fn write_letters(&self, w: &mut ByteWriter) {
        self.letter.write(w);
        for sv in &self.run_len_prefix {
            sv.write(w);
        }
    }

    pub(crate) fn read_parts(
        n: usize,
        sigma: usize,
        r: usize,
        c_block: &mut ByteReader<'_>,
        start_block: &mut ByteReader<'_>,
        letter_block: &mut ByteReader<'_>,
    ) -> Result<Self, PersistError> {
        let corrupt = |m: &str| PersistError::Corrupt(m.to_string());
        let len = c_block.usize()?;
        if len != sigma + 1 {
            return Err(corrupt("C table length"));
        }
        let c_table = (0..len).map(|_| c_block.usize()).collect::<Result<Vec<_>, _>>()?;
        if c_table[0] != 0 || c_table[sigma] != n || c_table.windows(2).any(|w| w[0] > w[1]) {
            return Err(corrupt("C table values"));
        }
        let start = SparseBV::read(start_block)?;
        if start.universe() != n || start.count_ones() != r || (r > 0 && start.select1(1) != Some(1)) {
            return Err(corrupt("Start bitvector shape"));
        }
        let letter = RunHeadSeq::read(letter_block)?;
        if letter.len() != r || letter.sigma() != sigma {
            return Err(corrupt("run-head sequence shape"));
        }
        let mut run_len_prefix = Vec::with_capacity(sigma);
        for c in 0..sigma {
            let sv = SparseBV::read(letter_block)?;
            let freq = c_table[c + 1] - c_table[c];
            if sv.universe() != freq
                || sv.count_ones() != letter.rank(c as u8, r)
                || (sv.count_ones() > 0 && sv.select1(sv.count_ones()) != Some(freq))
            {
                return Err(corrupt("run-length prefix shape"));
            }
            run_len_prefix.push(sv);
        }
        c_block.finish("C table")?;
        start_block.finish("Start")?;
        letter_block.finish("Letter")?;
        Ok(Self {
            n,
            sigma,
            start,
            letter,
            run_len_prefix,
            c_table,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::Text;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn abra() -> (Text, SuffixContext, RlBwt) {
        let t = Text::from_bytes(b"abracadabra").unwrap();
        let ctx = SuffixContext::new(&t);
        let rl = RlBwt::from_context(&ctx);
        (t, ctx, rl)
    }

    const A: u8 = 1;
    const B: u8 = 2;
    const D: u8 = 4;
    const R: u8 = 5;

    #[test]
    fn worked_example_access_rank_lf() {
        let (_, _, rl) = abra();
        assert_eq!(rl.r(), 8);
        assert_eq!(rl.bwt_access(1), A);
        assert_eq!(rl.bwt_access(9), A);
        assert_eq!(rl.bwt_access(12), B);
        assert_eq!(rl.rank_sym_bwt(A, 12), 5);
        assert_eq!(rl.rank_sym_bwt(A, 0), 0);
        assert_eq!(rl.rank_sym_bwt(77, 12), 0);
        assert_eq!(rl.lf(4), 1);
        assert_eq!(rl.lf(1), 2);
        assert!(rl.try_bwt_access(13).is_err());
    }

    #[test]
    fn worked_example_runs() {
        let (_, _, rl) = abra();
        assert_eq!(rl.run_of(9), 7);
        assert_eq!(rl.run_end(7), 10);
        assert_eq!(rl.run_end(8), 12);
        assert!(rl.is_run_end(12));
        assert!(!rl.is_run_end(9));
        assert_eq!(rl.last_sym_run_upto(A, 8), Some(7));
        assert_eq!(rl.last_sym_run_upto(R, 4), Some(2));
        assert_eq!(rl.last_sym_run_upto(D, 2), None);
        assert!(rl.try_run_end(9).is_err());
    }

    #[test]
    fn worked_example_backward_steps() {
        let (_, _, rl) = abra();
        assert_eq!(rl.backward_step(A, 1, 12), (2, 6));
        // "ba" is absent: the b-continuation of the "a" range is empty
        let (sp, ep) = rl.backward_step(B, 2, 6);
        assert!(sp > ep);
        // "bra" → rows 7..8
        let (sp, ep) = rl.backward_step(R, 2, 6);
        assert_eq!((sp, ep), (11, 12));
        assert_eq!(rl.backward_step(B, sp, ep), (7, 8));
    }

    #[test]
    fn lf_cycles_and_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..40 {
            let raw: Vec<u8> = (0..rng.gen_range(1..500)).map(|_| b'a' + rng.gen_range(0..3)).collect();
            let t = Text::from_bytes(&raw).unwrap();
            let ctx = SuffixContext::new(&t);
            let rl = RlBwt::from_context(&ctx);
            let n = t.n();
            let isa = ctx.inverse_sa();
            for j in 1..=n {
                assert_eq!(rl.bwt_access(j), ctx.bwt(j));
                let prev = if ctx.sa(j) == 1 { n } else { ctx.sa(j) - 1 };
                assert_eq!(rl.lf(j), isa[prev - 1] as usize);
                if j > 1 && rl.run_of(j) == rl.run_of(j - 1) {
                    assert_eq!(rl.lf(j - 1), rl.lf(j) - 1);
                }
                for c in 0..t.sigma() as u8 {
                    let naive = ctx.bwt_slice()[..j].iter().filter(|&&x| x == c).count();
                    assert_eq!(rl.rank_sym_bwt(c, j), naive);
                }
            }
            let mut j = 1;
            for _ in 0..n {
                j = rl.lf(j);
            }
            assert_eq!(j, 1);
        }
    }
}
