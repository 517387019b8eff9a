//! Brute-force references used to check the index. Quadratic in places;
//! meant for texts of a few thousand symbols.

use crate::error::LocateError;
use crate::text::Text;

/// Full suffix array and its inverse, built by plain comparison sorting.
#[derive(Debug, Clone)]
pub struct OracleIndex {
    text: Text,
    sa: Vec<usize>,
    isa: Vec<usize>,
}

/// Answer of [`OracleIndex::naive_search`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaiveHit {
    pub sp: usize,
    pub ep: usize,
    /// Occurrences in suffix-array order.
    pub positions: Vec<usize>,
}

impl NaiveHit {
    pub fn occ(&self) -> usize {
        (self.ep + 1).saturating_sub(self.sp)
    }
}

impl OracleIndex {
    pub fn new(text: &Text) -> Self {
        let codes = text.codes();
        let n = codes.len();
        let mut sa: Vec<usize> = (1..=n).collect();
        sa.sort_by(|&a, &b| codes[a - 1..].cmp(&codes[b - 1..]));
        let mut isa = vec![0; n + 1];
        for (row, &pos) in sa.iter().enumerate() {
            isa[pos] = row + 1;
        }
        Self {
            text: text.clone(),
            sa,
            isa,
        }
    }

    pub fn text(&self) -> &Text {
        &self.text
    }

    pub fn n(&self) -> usize {
        self.sa.len()
    }

    /// `SA[row]`, 1-based.
    pub fn sa(&self, row: usize) -> usize {
        self.sa[row - 1]
    }

    /// Row of the suffix starting at `pos`.
    pub fn isa(&self, pos: usize) -> usize {
        self.isa[pos]
    }

    /// Suffix-array range of a code pattern by binary search. An empty range
    /// is reported as `sp = ep + 1`.
    pub fn naive_search(&self, pattern: &[u8]) -> NaiveHit {
        let codes = self.text.codes();
        let prefix = |pos: usize| {
            let suf = &codes[pos - 1..];
            &suf[..suf.len().min(pattern.len())]
        };
        let sp = self.sa.partition_point(|&pos| prefix(pos) < pattern);
        let ep = self.sa.partition_point(|&pos| prefix(pos) <= pattern);
        let positions = self.sa[sp..ep].to_vec();
        NaiveHit {
            sp: sp + 1,
            ep,
            positions,
        }
    }

    /// Byte-pattern search; bytes outside the alphabet (including 0x00) give
    /// no occurrence.
    pub fn naive_search_bytes(&self, pattern: &[u8]) -> NaiveHit {
        match self.text.encode_pattern(pattern) {
            Some(codes) => self.naive_search(&codes),
            None => NaiveHit {
                sp: 1,
                ep: 0,
                positions: Vec::new(),
            },
        }
    }

    /// `SA[j - 1]` for the row `j` with `SA[j] - 1 = i` (cyclically).
    pub fn naive_phi(&self, i: usize) -> Result<usize, LocateError> {
        let n = self.n();
        if i == 0 || i > n {
            return Err(LocateError::PhiUndefined(i));
        }
        let j = self.isa[i % n + 1];
        if j == 1 {
            return Err(LocateError::PhiUndefined(i));
        }
        Ok(self.sa(j - 1))
    }

    /// The end-of-run samples as a set of letter positions, sorted.
    pub fn sorted_run_samples(&self) -> Vec<usize> {
        let n = self.n();
        let codes = self.text.codes();
        let bwt = |row: usize| codes[(self.sa(row) + n - 2) % n];
        let mut out: Vec<usize> = (1..=n)
            .filter(|&j| j == n || bwt(j) != bwt(j + 1))
            .map(|j| (self.sa(j) + n - 2) % n + 1)
            .collect();
        out.sort_unstable();
        out
    }
}

/// Positions where `pattern` occurs in `haystack`, by sliding comparison.
pub fn scan_occurrences(haystack: &[u8], pattern: &[u8]) -> Vec<usize> {
    if pattern.is_empty() || pattern.len() > haystack.len() {
        return Vec::new();
    }
    haystack
        .windows(pattern.len())
        .enumerate()
        .filter(|(_, w)| *w == pattern)
        .map(|(i, _)| i + 1)
        .collect()
}

/// Retained samples under the thinning rule, written independently of the
/// index builder: a sample survives when dropping it would leave a gap
/// larger than `s` between its kept left neighbour and its right neighbour.
pub fn naive_subsample(sorted: &[usize], s: usize) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    for (idx, &v) in sorted.iter().enumerate() {
        let keep = match (kept.last(), sorted.get(idx + 1)) {
            (None, _) | (_, None) => true,
            (Some(&prev), Some(&next)) => next - prev > s,
        };
        if keep {
            kept.push(v);
        }
    }
    kept
}
