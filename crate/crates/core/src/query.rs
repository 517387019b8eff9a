//! Counting with a toehold and locating over the subsampled index.

use crate::error::{QueryError, SubsampleError};
use crate::locate::{sa_from_sample, LocateCore};
use crate::rlbwt::RlBwt;
use crate::subsample::{SubsampleExt, Variant};
use crate::text::encode_with;

/// The composed, immutable index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SrIndex {
    pub(crate) rlbwt: RlBwt,
    pub(crate) core: LocateCore,
    pub(crate) ext: SubsampleExt,
    pub(crate) code_to_byte: Vec<u8>,
    pub(crate) byte_to_code: [u8; 256],
    pub(crate) checksum: u64,
}

/// Outcome of a count query. `sp > ep` means no occurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountResult {
    pub sp: usize,
    pub ep: usize,
    /// `SA[ep]`, present iff the pattern occurs.
    pub sa_ep: Option<usize>,
    /// LF-steps spent recovering the toehold.
    pub lf_steps_used: usize,
    /// Backward-search steps performed.
    pub backward_steps: usize,
}

impl CountResult {
    fn empty(backward_steps: usize) -> Self {
        Self {
            sp: 1,
            ep: 0,
            sa_ep: None,
            lf_steps_used: 0,
            backward_steps,
        }
    }

    #[inline]
    pub fn occ(&self) -> usize {
        (self.ep + 1).saturating_sub(self.sp)
    }
}

/// Work counters for one locate call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LocateStats {
    pub occ: usize,
    pub backward_steps: usize,
    pub toehold_steps: usize,
    /// LF-steps taken by the run-splitting recursion.
    pub lf_steps: usize,
    /// φ evaluations, fast-path ones included.
    pub phi_calls: usize,
    /// φ evaluations taken before reaching depth `s`.
    pub fastpath_phi: usize,
    /// Largest number of LF-steps any single occurrence needed.
    pub max_occ_steps: usize,
    pub total_occ_steps: usize,
    /// φ evaluations whose FirstToRun entry was run 1. Expected to stay 0.
    pub phi_wrapped_runs: usize,
}

impl LocateStats {
    /// Every instrumented step: backward, toehold, recursion LF and φ.
    pub fn total_steps(&self) -> usize {
        self.backward_steps + self.toehold_steps + self.lf_steps + self.phi_calls
    }
}

/// Decision of the Valid / ValidArea fast path for one φ candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FastPath {
    UsePhi,
    /// φ is safe while the distance to the predecessor First entry is below `d`.
    UsePhiIfBefore(usize),
    MustStep,
}

#[derive(Debug, Clone, Copy)]
enum Task {
    /// Rows `lo..=hi`, `k` LF-steps away from the original rows, whose
    /// answers go to `res[base..]`.
    Rows { lo: usize, hi: usize, base: usize, k: usize },
    /// Fill `res[lo..=hi]` right to left with φ.
    Phi { lo: usize, hi: usize },
}

fn invariant(msg: impl Into<String>) -> QueryError {
    QueryError::Invariant(msg.into())
}

impl SrIndex {
    #[inline]
    pub fn n(&self) -> usize {
        self.rlbwt.n()
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.rlbwt.r()
    }

    #[inline]
    pub fn sigma(&self) -> usize {
        self.rlbwt.sigma()
    }

    #[inline]
    pub fn s(&self) -> usize {
        self.ext.s()
    }

    #[inline]
    pub fn variant(&self) -> Variant {
        self.ext.variant()
    }

    pub fn checksum(&self) -> u64 {
        self.checksum
    }

    pub fn rlbwt(&self) -> &RlBwt {
        &self.rlbwt
    }

    pub fn core(&self) -> &LocateCore {
        &self.core
    }

    pub fn ext(&self) -> &SubsampleExt {
        &self.ext
    }

    pub fn code_to_byte(&self) -> &[u8] {
        &self.code_to_byte
    }

    pub fn retained(&self) -> usize {
        self.core.retained()
    }

    /// Pattern bytes as codes; `None` if some byte is not in the text.
    pub fn encode(&self, pattern: &[u8]) -> Option<Vec<u8>> {
        encode_with(&self.byte_to_code, pattern)
    }

    pub fn count(&self, pattern: &[u8]) -> Result<CountResult, QueryError> {
        if pattern.is_empty() {
            return Err(QueryError::EmptyPattern);
        }
        match self.encode(pattern) {
            Some(codes) => self.count_codes(&codes),
            None => Ok(CountResult::empty(0)),
        }
    }

    /// Backward search that also yields `SA[ep]`.
    ///
    /// Only the last step whose symbol differs from `BWT[ep]` matters: there
    /// the new `ep` is `LF` of the end of the last run of that symbol, and
    /// every later step keeps `SA[ep]` moving back by one.
    pub fn count_codes(&self, codes: &[u8]) -> Result<CountResult, QueryError> {
        let m = codes.len();
        if m == 0 {
            return Err(QueryError::EmptyPattern);
        }
        let rl = &self.rlbwt;
        let (mut sp, mut ep) = (1, self.n());
        let mut hard: Option<(usize, usize)> = None;
        for (step, i) in (1..=m).rev().enumerate() {
            let c = codes[i - 1];
            let p = rl.run_of(ep);
            if rl.letters().get(p) != c {
                match rl.last_sym_run_upto(c, p) {
                    Some(q) => hard = Some((i, q)),
                    None => return Ok(CountResult::empty(step + 1)),
                }
            }
            (sp, ep) = rl.backward_step(c, sp, ep);
            if sp > ep {
                return Ok(CountResult::empty(step + 1));
            }
        }
        let (sa_ep, lf_steps_used) = match hard {
            None => {
                let last = self.core.sa_last();
                if last <= m {
                    return Err(invariant("SA[n] too small for an all-easy match"));
                }
                (last - m, 0)
            }
            Some((i, q)) => {
                // SA[ep_i] = SA[run_end(q)] - 1, then i - 1 easy steps.
                let (sa_j, k) = self.toehold_resolve(q)?;
                if sa_j <= i {
                    return Err(invariant("toehold position underflows"));
                }
                (sa_j - i, k)
            }
        };
        Ok(CountResult {
            sp,
            ep,
            sa_ep: Some(sa_ep),
            lf_steps_used,
            backward_steps: m,
        })
    }

    /// `SA` at the last row of run `q`, found by LF-stepping to a run end
    /// with a retained sample. Returns the value and the steps taken.
    pub fn toehold_resolve(&self, q: usize) -> Result<(usize, usize), QueryError> {
        let rl = &self.rlbwt;
        if q == 0 || q > self.r() {
            return Err(invariant(format!("run {q} out of range")));
        }
        let mut j = rl.run_end(q);
        for k in 0..self.s() {
            if rl.is_run_end(j) {
                let p = rl.run_of(j);
                if !self.ext.is_removed(p) {
                    let v = self.core.sample_of_run(self.ext.removed(), p).map_err(|e| invariant(e.to_string()))?;
                    return Ok((sa_from_sample(v, k, self.n()), k));
                }
            }
            j = rl.lf(j);
        }
        Err(invariant(format!("no retained sample within {} steps of run {q}", self.s())))
    }

    /// Fast-path decision for φ at letter position `i`.
    pub fn locate_fastpath_check(&self, i: usize) -> Result<FastPath, QueryError> {
        if self.variant() == Variant::Plain {
            return Err(SubsampleError::WrongVariant { required: 1, actual: 0 }.into());
        }
        let (_, q, dist) = self.core.cyclic_pred(i).map_err(|e| invariant(e.to_string()))?;
        Ok(self.resolve_fastpath(q, dist))
    }

    /// The raw rule for the `q`-th retained First entry.
    pub fn fastpath_rule(&self, q: usize) -> Result<FastPath, QueryError> {
        let valid = self.ext.valid().ok_or(SubsampleError::WrongVariant {
            required: 1,
            actual: self.variant().as_u8(),
        })?;
        Ok(if valid.get(q) {
            FastPath::UsePhi
        } else if self.variant() == Variant::ValidArea {
            FastPath::UsePhiIfBefore(self.ext.next_removed_dist(q)?.unwrap_or(0))
        } else {
            FastPath::MustStep
        })
    }

    fn resolve_fastpath(&self, q: usize, dist: usize) -> FastPath {
        match self.fastpath_rule(q) {
            Ok(FastPath::UsePhi) => FastPath::UsePhi,
            Ok(FastPath::UsePhiIfBefore(d)) if dist < d => FastPath::UsePhi,
            _ => FastPath::MustStep,
        }
    }

    pub fn locate(&self, pattern: &[u8]) -> Result<Vec<usize>, QueryError> {
        self.locate_with_stats(pattern).map(|(res, _)| res)
    }

    pub fn locate_with_stats(&self, pattern: &[u8]) -> Result<(Vec<usize>, LocateStats), QueryError> {
        if pattern.is_empty() {
            return Err(QueryError::EmptyPattern);
        }
        match self.encode(pattern) {
            Some(codes) => self.locate_codes_with_stats(&codes),
            None => Ok((Vec::new(), LocateStats::default())),
        }
    }

    /// All occurrences, in suffix-array order of their rows.
    pub fn locate_codes_with_stats(&self, codes: &[u8]) -> Result<(Vec<usize>, LocateStats), QueryError> {
        let cnt = self.count_codes(codes)?;
        let mut stats = LocateStats {
            occ: cnt.occ(),
            backward_steps: cnt.backward_steps,
            toehold_steps: cnt.lf_steps_used,
            ..Default::default()
        };
        let Some(sa_ep) = cnt.sa_ep else {
            return Ok((Vec::new(), stats));
        };
        let occ = cnt.occ();
        // res[x] holds SA[sp + x - 1]; slot occ + 1 is never read.
        let mut res = vec![0usize; occ + 1];
        res[occ] = sa_ep;
        if occ > 1 {
            self.fill(&mut res, cnt.sp, cnt.ep - 1, &mut stats)?;
        }
        if res[1..].contains(&0) {
            return Err(invariant("locate left a result slot unfilled"));
        }
        res.remove(0);
        Ok((res, stats))
    }

    /// Run-splitting recursion over rows `sp..=em`, with `res[em - sp + 2]`
    /// already known. Blocks are handled right to left so that the slot just
    /// above every block is filled before the block needs it.
    fn fill(&self, res: &mut [usize], sp: usize, em: usize, stats: &mut LocateStats) -> Result<(), QueryError> {
        let rl = &self.rlbwt;
        let n = self.n();
        let s = self.s();
        let removed = self.ext.removed();
        let use_fast = self.variant() != Variant::Plain;
        let mut stack = vec![Task::Rows { lo: sp, hi: em, base: 1, k: 0 }];
        while let Some(task) = stack.pop() {
            match task {
                Task::Phi { lo, hi } => {
                    for x in (lo..=hi).rev() {
                        res[x] = self.phi_next(res[x + 1], stats)?;
                        stats.max_occ_steps = stats.max_occ_steps.max(s - 1);
                        stats.total_occ_steps += s - 1;
                    }
                }
                Task::Rows { lo, hi, base, k } => {
                    let mut top = base + (hi - lo);
                    let mut hi = hi;
                    let mut done = false;
                    if rl.is_run_end(hi) && !removed.get(rl.run_of(hi)) {
                        let v = self.core.sample_of_run(removed, rl.run_of(hi)).map_err(|e| invariant(e.to_string()))?;
                        res[top] = sa_from_sample(v, k, n);
                        stats.max_occ_steps = stats.max_occ_steps.max(k);
                        stats.total_occ_steps += k;
                        (done, hi, top) = step_down(lo, hi, top);
                    }
                    while use_fast && !done {
                        let i = letter_pos(res[top + 1], n);
                        let (_, q, dist) = self.core.cyclic_pred(i).map_err(|e| invariant(e.to_string()))?;
                        if self.resolve_fastpath(q, dist) != FastPath::UsePhi {
                            break;
                        }
                        let phi = self.core.phi_from_pred(removed, q, dist).map_err(|e| invariant(e.to_string()))?;
                        stats.phi_calls += 1;
                        stats.fastpath_phi += 1;
                        stats.phi_wrapped_runs += phi.wrapped_run as usize;
                        res[top] = phi.value;
                        stats.max_occ_steps = stats.max_occ_steps.max(k);
                        stats.total_occ_steps += k;
                        (done, hi, top) = step_down(lo, hi, top);
                    }
                    if done {
                        continue;
                    }
                    // Cut lo..=hi into maximal runs; push left to right so the
                    // rightmost block is processed first.
                    let mut x = lo;
                    while x <= hi {
                        let y = rl.run_end(rl.run_of(x)).min(hi);
                        let b = base + (x - lo);
                        if k + 1 == s {
                            stack.push(Task::Phi { lo: b, hi: b + (y - x) });
                        } else {
                            let fx = rl.lf(x);
                            stats.lf_steps += 1;
                            stack.push(Task::Rows { lo: fx, hi: fx + (y - x), base: b, k: k + 1 });
                        }
                        x = y + 1;
                    }
                }
            }
        }
        Ok(())
    }

    fn phi_next(&self, sa_above: usize, stats: &mut LocateStats) -> Result<usize, QueryError> {
        let i = letter_pos(sa_above, self.n());
        let phi = self.core.phi(self.ext.removed(), i).map_err(|e| invariant(e.to_string()))?;
        stats.phi_calls += 1;
        stats.phi_wrapped_runs += phi.wrapped_run as usize;
        Ok(phi.value)
    }

    /// Bits of the counting structures.
    pub fn counting_bits(&self) -> usize {
        self.rlbwt.size_in_bits()
    }

    /// Bits of First, FirstToRun, Samples and the subsampling extensions.
    pub fn locating_bits(&self) -> usize {
        self.core.size_in_bits() + self.ext.size_in_bits()
    }
}

/// Drops the topmost row of a block; `done` once the block is exhausted.
#[inline]
fn step_down(lo: usize, hi: usize, top: usize) -> (bool, usize, usize) {
    if hi == lo {
        (true, hi, top)
    } else {
        (false, hi - 1, top - 1)
    }
}

#[inline]
fn letter_pos(sa: usize, n: usize) -> usize {
    if sa == 1 {
        n
    } else {
        sa - 1
    }
}
