//! Suffix array, BWT, run boundaries and the C table of a [`Text`].
//!
//! Rows and text positions are 1-based at this module's boundary.

use crate::text::Text;

/// Construction-time view of a text: the full suffix array and the plain BWT.
///
/// Only the index builder and tests hold one of these; the built index keeps
/// none of it except `sa_last`.
#[derive(Debug, Clone)]
pub struct SuffixContext {
    n: usize,
    sigma: usize,
    /// `SA[i]` at slot `i - 1`.
    sa: Vec<u32>,
    bwt: Vec<u8>,
    c_table: Vec<usize>,
    run_starts: Vec<usize>,
}

impl SuffixContext {
    pub fn new(text: &Text) -> Self {
        let sa = build_suffix_array(text);
        let bwt = derive_bwt(text, &sa);
        let run_starts = compute_runs(&bwt);
        let c_table = compute_c(text);
        Self {
            n: text.n(),
            sigma: text.sigma(),
            sa,
            bwt,
            c_table,
            run_starts,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn sigma(&self) -> usize {
        self.sigma
    }

    /// Number of BWT runs.
    #[inline]
    pub fn r(&self) -> usize {
        self.run_starts.len()
    }

    #[inline]
    pub fn sa(&self, row: usize) -> usize {
        self.sa[row - 1] as usize
    }

    pub fn sa_slice(&self) -> &[u32] {
        &self.sa
    }

    #[inline]
    pub fn bwt(&self, row: usize) -> u8 {
        self.bwt[row - 1]
    }

    pub fn bwt_slice(&self) -> &[u8] {
        &self.bwt
    }

    /// `C[c]` for `c in 0..=sigma`; the final entry is `n`.
    pub fn c_table(&self) -> &[usize] {
        &self.c_table
    }

    /// Rows at which runs begin, ascending; `run_starts()[0] == 1`.
    pub fn run_starts(&self) -> &[usize] {
        &self.run_starts
    }

    #[inline]
    pub fn run_start(&self, p: usize) -> usize {
        self.run_starts[p - 1]
    }

    #[inline]
    pub fn run_end(&self, p: usize) -> usize {
        if p == self.r() {
            self.n
        } else {
            self.run_starts[p] - 1
        }
    }

    /// `SA[n]`, the suffix at the last row.
    #[inline]
    pub fn sa_last(&self) -> usize {
        self.sa(self.n)
    }

    /// Text position of the letter `BWT[row]`, i.e. `SA[row] - 1` with the
    /// suffix starting at 1 wrapping to position `n`.
    #[inline]
    pub fn letter_pos(&self, row: usize) -> usize {
        match self.sa(row) {
            1 => self.n,
            v => v - 1,
        }
    }

    /// End-of-run sample of run `p`: the letter position of its last row.
    pub fn run_sample(&self, p: usize) -> usize {
        self.letter_pos(self.run_end(p))
    }

    /// Letter position of the first row of run `p` (the run's First entry).
    pub fn run_first(&self, p: usize) -> usize {
        self.letter_pos(self.run_start(p))
    }

    /// Inverse suffix array, `isa[SA[i] - 1] == i`.
    pub fn inverse_sa(&self) -> Vec<u32> {
        let mut isa = vec![0u32; self.n];
        for (i, &s) in self.sa.iter().enumerate() {
            isa[s as usize - 1] = (i + 1) as u32;
        }
        isa
    }
}

/// 1-based suffix array of `text` (values in `1..=n`), by induced sorting.
pub fn build_suffix_array(text: &Text) -> Vec<u32> {
    let s: Vec<u32> = text.codes().iter().map(|&c| c as u32).collect();
    let mut sa = sa_is(&s, (text.sigma() - 1) as u32);
    for v in &mut sa {
        *v += 1;
    }
    sa
}

/// `BWT[i] = T[SA[i] - 1]`, and `T[n]` where `SA[i] = 1`.
pub fn derive_bwt(text: &Text, sa: &[u32]) -> Vec<u8> {
    let n = text.n();
    sa.iter()
        .map(|&p| {
            let p = p as usize;
            text.symbol(if p == 1 { n } else { p - 1 })
        })
        .collect()
}

/// Rows `i` (1-based) with `i = 1` or `bwt[i] != bwt[i - 1]`.
pub fn compute_runs(bwt: &[u8]) -> Vec<usize> {
    let mut starts = Vec::new();
    for i in 0..bwt.len() {
        if i == 0 || bwt[i] != bwt[i - 1] {
            starts.push(i + 1);
        }
    }
    starts
}

/// Prefix sums of symbol frequencies: `C[c]` counts symbols smaller than
/// `c`. Has `sigma + 1` entries, the last being `n`.
pub fn compute_c(text: &Text) -> Vec<usize> {
    let mut c = vec![0usize; text.sigma() + 1];
    for &s in text.codes() {
        c[s as usize + 1] += 1;
    }
    for i in 1..c.len() {
        c[i] += c[i - 1];
    }
    c
}

/// SA-IS over an integer string whose symbols lie in `0..=upper`.
/// Returns 0-based suffix starts.
fn sa_is(s: &[u32], upper: u32) -> Vec<u32> {
    let n = s.len();
    match n {
        0 => return vec![],
        1 => return vec![0],
        2 => return if s[0] < s[1] { vec![0, 1] } else { vec![1, 0] },
        _ => {}
    }
    if n < 16 {
        let mut sa: Vec<u32> = (0..n as u32).collect();
        sa.sort_by(|&a, &b| s[a as usize..].cmp(&s[b as usize..]));
        return sa;
    }
    let upper = upper as usize;
    // ls[i]: suffix i is S-type
    let mut ls = vec![false; n];
    for i in (0..n - 1).rev() {
        ls[i] = if s[i] == s[i + 1] { ls[i + 1] } else { s[i] < s[i + 1] };
    }
    let mut sum_l = vec![0u32; upper + 1];
    let mut sum_s = vec![0u32; upper + 1];
    for i in 0..n {
        if !ls[i] {
            sum_s[s[i] as usize] += 1;
        } else {
            sum_l[s[i] as usize + 1] += 1;
        }
    }
    for i in 0..=upper {
        sum_s[i] += sum_l[i];
        if i < upper {
            sum_l[i + 1] += sum_s[i];
        }
    }

    const EMPTY: u32 = u32::MAX;
    let mut sa = vec![EMPTY; n];
    let induce = |sa: &mut [u32], lms: &[u32]| {
        sa.fill(EMPTY);
        let mut buf = sum_s.clone();
        for &d in lms {
            let d = d as usize;
            if d == n {
                continue;
            }
            let b = &mut buf[s[d] as usize];
            sa[*b as usize] = d as u32;
            *b += 1;
        }
        buf.copy_from_slice(&sum_l);
        let b = &mut buf[s[n - 1] as usize];
        sa[*b as usize] = (n - 1) as u32;
        *b += 1;
        for i in 0..n {
            let v = sa[i];
            if v != EMPTY && v >= 1 && !ls[v as usize - 1] {
                let b = &mut buf[s[v as usize - 1] as usize];
                sa[*b as usize] = v - 1;
                *b += 1;
            }
        }
        buf.copy_from_slice(&sum_l);
        for i in (0..n).rev() {
            let v = sa[i];
            if v != EMPTY && v >= 1 && ls[v as usize - 1] {
                let b = &mut buf[s[v as usize - 1] as usize + 1];
                *b -= 1;
                sa[*b as usize] = v - 1;
            }
        }
    };

    let mut lms_map = vec![EMPTY; n + 1];
    let mut lms = Vec::new();
    for i in 1..n {
        if !ls[i - 1] && ls[i] {
            lms_map[i] = lms.len() as u32;
            lms.push(i as u32);
        }
    }
    let m = lms.len();
    induce(&mut sa, &lms);

    if m > 0 {
        let mut sorted_lms: Vec<u32> = sa
            .iter()
            .copied()
            .filter(|&v| lms_map[v as usize] != EMPTY)
            .collect();
        let mut rec_s = vec![0u32; m];
        let mut rec_upper = 0u32;
        rec_s[lms_map[sorted_lms[0] as usize] as usize] = 0;
        for i in 1..m {
            let mut l = sorted_lms[i - 1] as usize;
            let mut r = sorted_lms[i] as usize;
            let end_l = if (lms_map[l] as usize) + 1 < m { lms[lms_map[l] as usize + 1] as usize } else { n };
            let end_r = if (lms_map[r] as usize) + 1 < m { lms[lms_map[r] as usize + 1] as usize } else { n };
            let mut same = true;
            if end_l - l != end_r - r {
                same = false;
            } else {
                while l < end_l {
                    if s[l] != s[r] {
                        break;
                    }
                    l += 1;
                    r += 1;
                }
                if l == n || s[l] != s[r] {
                    same = false;
                }
            }
            if !same {
                rec_upper += 1;
            }
            rec_s[lms_map[sorted_lms[i] as usize] as usize] = rec_upper;
        }
        let rec_sa = sa_is(&rec_s, rec_upper);
        for i in 0..m {
            sorted_lms[i] = lms[rec_sa[i] as usize];
        }
        induce(&mut sa, &sorted_lms);
    }
    sa
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive_sa(text: &Text) -> Vec<u32> {
        let c = text.codes();
        let mut sa: Vec<u32> = (1..=c.len() as u32).collect();
        sa.sort_by(|&a, &b| c[a as usize - 1..].cmp(&c[b as usize - 1..]));
        sa
    }

    fn t(s: &[u8]) -> Text {
        Text::from_bytes(s).unwrap()
    }

    #[test]
    fn worked_example() {
        let text = t(b"abracadabra");
        let ctx = SuffixContext::new(&text);
        assert_eq!(ctx.sa_slice(), &[12, 11, 8, 1, 4, 6, 9, 2, 5, 7, 10, 3]);
        assert_eq!(ctx.sa_slice(), naive_sa(&text).as_slice());
        assert_eq!(text.decode_pattern(ctx.bwt_slice()), b"ard$rcaaaabb");
        assert_eq!(ctx.run_starts(), &[1, 2, 3, 4, 5, 6, 7, 11]);
        assert_eq!(ctx.r(), 8);
        let ends: Vec<usize> = (1..=8).map(|p| ctx.run_end(p)).collect();
        assert_eq!(ends, vec![1, 2, 3, 4, 5, 6, 10, 12]);
        let samples: Vec<usize> = (1..=8).map(|p| ctx.run_sample(p)).collect();
        assert_eq!(samples, vec![11, 10, 7, 12, 3, 5, 6, 2]);
        assert_eq!(ctx.c_table(), &[0, 1, 6, 8, 9, 10, 12]);
        assert_eq!(ctx.sa_last(), 3);
    }

    #[test]
    fn small_cases() {
        assert_eq!(build_suffix_array(&t(b"aa")), vec![3, 2, 1]);
        assert_eq!(build_suffix_array(&t(b"ba")), vec![3, 2, 1]);
        let aa = t(b"aa");
        assert_eq!(aa.decode_pattern(&derive_bwt(&aa, &[3, 2, 1])), b"aa$");
        let a = t(b"a");
        assert_eq!(a.decode_pattern(&derive_bwt(&a, &build_suffix_array(&a))), b"a$");
        assert_eq!(compute_runs(&[1, 1, 1, 1]), vec![1]);
        assert_eq!(compute_runs(&[1, 2, 1, 2]), vec![1, 2, 3, 4]);
        assert_eq!(compute_c(&a), vec![0, 1, 2]);
    }

    #[test]
    fn sa_is_matches_naive_sort() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..300 {
            let len = rng.gen_range(1..600);
            let sigma = *[1u8, 2, 3, 4, 26].get(rng.gen_range(0..5)).unwrap();
            let raw: Vec<u8> = if rng.gen_bool(0.5) {
                (0..len).map(|_| b'a' + rng.gen_range(0..sigma)).collect()
            } else {
                let unit: Vec<u8> = (0..rng.gen_range(1..9)).map(|_| b'a' + rng.gen_range(0..sigma)).collect();
                unit.iter().cycle().take(len).copied().collect()
            };
            let text = t(&raw);
            let sa = build_suffix_array(&text);
            assert_eq!(sa, naive_sa(&text), "text {:?}", String::from_utf8_lossy(&raw));
        }
    }

    #[test]
    fn context_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let raw: Vec<u8> = (0..rng.gen_range(1..300)).map(|_| b'a' + rng.gen_range(0..4)).collect();
            let text = t(&raw);
            let ctx = SuffixContext::new(&text);
            let n = ctx.n();
            assert_eq!(ctx.sa(1), n);
            for i in 2..=n {
                let (a, b) = (ctx.sa(i - 1), ctx.sa(i));
                assert!(text.codes()[a - 1..] < text.codes()[b - 1..]);
            }
            assert!(ctx.r() <= n && ctx.r() >= ctx.sigma());
            assert_eq!(*ctx.c_table().last().unwrap(), n);
            // stable sort of the BWT yields the first column
            let mut first: Vec<u8> = ctx.bwt_slice().to_vec();
            first.sort_unstable();
            for i in 1..=n {
                assert_eq!(first[i - 1], text.symbol(ctx.sa(i)));
            }
            let isa = ctx.inverse_sa();
            for i in 1..=n {
                assert_eq!(isa[ctx.sa(i) - 1] as usize, i);
            }
        }
    }
}
