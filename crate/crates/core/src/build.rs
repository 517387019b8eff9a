//! One-call index construction with construction-time checks.

use std::time::{Duration, Instant};

use crate::error::BuildError;
use crate::query::{FastPath, SrIndex};
use crate::rlbwt::RlBwt;
use crate::subsample::{build_ext, Variant};
use crate::succinct::ceil_log2;
use crate::suffix::SuffixContext;
use crate::text::Text;

/// Default largest `n` for which [`VerifyLevel::FullOracle`] runs.
pub const DEFAULT_ORACLE_CAP: usize = 1 << 20;

/// Per-sample slack, in bits, of the locating-space bound.
pub const SPACE_SLACK_BITS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VerifyLevel {
    None,
    /// Sample-count and gap bounds; linear in `r`.
    #[default]
    Lemmas,
    /// Also every toehold and every admissible φ against the suffix array.
    FullOracle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildOptions {
    pub s: usize,
    pub variant: Variant,
    pub verify_level: VerifyLevel,
    /// Largest `n` accepted with [`VerifyLevel::FullOracle`].
    pub oracle_cap: usize,
    /// Collect a [`BuildReport`].
    pub keep_instrumentation: bool,
}

impl BuildOptions {
    pub fn new(s: usize, variant: Variant) -> Self {
        Self {
            s,
            variant,
            verify_level: VerifyLevel::default(),
            oracle_cap: DEFAULT_ORACLE_CAP,
            keep_instrumentation: false,
        }
    }

    pub fn verify(mut self, level: VerifyLevel) -> Self {
        self.verify_level = level;
        self
    }

    pub fn instrumented(mut self, on: bool) -> Self {
        self.keep_instrumentation = on;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildReport {
    pub n: usize,
    pub r: usize,
    pub retained: usize,
    /// `min(r, 2 ceil(n / (s + 1)))`.
    pub retained_bound: usize,
    /// Payload bits of First, FirstToRun and Samples.
    pub locating_payload_bits: usize,
    pub locating_bound_bits: usize,
    pub suffix_time: Duration,
    pub index_time: Duration,
    pub verify_time: Duration,
}

pub fn build_index(text: &Text, opts: &BuildOptions) -> Result<SrIndex, BuildError> {
    build_index_reported(text, opts).map(|(idx, _)| idx)
}

/// Like [`build_index`], also returning a report when
/// `keep_instrumentation` is set.
pub fn build_index_reported(text: &Text, opts: &BuildOptions) -> Result<(SrIndex, Option<BuildReport>), BuildError> {
    let t0 = Instant::now();
    let ctx = SuffixContext::new(text);
    let suffix_time = t0.elapsed();
    let (idx, mut report) = build_inner(text, &ctx, opts)?;
    if let Some(rep) = report.as_mut() {
        rep.suffix_time = suffix_time;
    }
    Ok((idx, report))
}

/// Builds from an existing suffix context, e.g. to share one across several
/// parameter choices.
pub fn build_index_from_context(text: &Text, ctx: &SuffixContext, opts: &BuildOptions) -> Result<SrIndex, BuildError> {
    build_inner(text, ctx, opts).map(|(idx, _)| idx)
}

fn build_inner(text: &Text, ctx: &SuffixContext, opts: &BuildOptions) -> Result<(SrIndex, Option<BuildReport>), BuildError> {
    if opts.verify_level == VerifyLevel::FullOracle && text.n() > opts.oracle_cap {
        return Err(BuildError::InvalidOptions(format!(
            "full-oracle verification needs n <= {}, got {}",
            opts.oracle_cap,
            text.n()
        )));
    }
    if ctx.n() != text.n() {
        return Err(BuildError::InvalidOptions("suffix context belongs to another text".into()));
    }
    let t0 = Instant::now();
    let rlbwt = RlBwt::from_context(ctx);
    let (core, ext) = build_ext(ctx, opts.s, opts.variant)?;
    let idx = SrIndex {
        rlbwt,
        core,
        ext,
        code_to_byte: text.code_to_byte().to_vec(),
        byte_to_code: *text.byte_to_code(),
        checksum: text.checksum(),
    };
    let index_time = t0.elapsed();
    let t1 = Instant::now();
    verify_index(ctx, &idx, opts.verify_level)?;
    let verify_time = t1.elapsed();
    let report = opts.keep_instrumentation.then(|| BuildReport {
        n: idx.n(),
        r: idx.r(),
        retained: idx.retained(),
        retained_bound: retained_bound(idx.n(), idx.r(), idx.s()),
        locating_payload_bits: locating_payload_bits(&idx),
        locating_bound_bits: locating_bound_bits(idx.n(), idx.r(), idx.s()),
        suffix_time: Duration::ZERO,
        index_time,
        verify_time,
    });
    Ok((idx, report))
}

/// `min(r, 2 ceil(n / (s + 1)))`.
pub fn retained_bound(n: usize, r: usize, s: usize) -> usize {
    r.min(2 * n.div_ceil(s + 1))
}

pub fn locating_bound_bits(n: usize, r: usize, s: usize) -> usize {
    retained_bound(n, r, s) * (2 * ceil_log2(n as u64) as usize + SPACE_SLACK_BITS)
}

/// Bits of the sampled locating arrays without rank/select directories.
pub fn locating_payload_bits(idx: &SrIndex) -> usize {
    let k = idx.retained();
    idx.core.first().payload_bits()
        + k * ceil_log2(idx.r() as u64) as usize
        + k * ceil_log2(idx.n() as u64) as usize
}

fn fail(msg: String) -> BuildError {
    BuildError::VerificationFailed(msg)
}

/// Checks a built index against the suffix context it came from.
pub fn verify_index(ctx: &SuffixContext, idx: &SrIndex, level: VerifyLevel) -> Result<(), BuildError> {
    if level == VerifyLevel::None {
        return Ok(());
    }
    check_lemmas(ctx, idx)?;
    if level == VerifyLevel::FullOracle {
        check_oracle(ctx, idx)?;
    }
    Ok(())
}

fn check_lemmas(ctx: &SuffixContext, idx: &SrIndex) -> Result<(), BuildError> {
    let (n, r, s) = (idx.n(), idx.r(), idx.s());
    let removed = idx.ext.removed();
    if removed.len() != r || r - removed.count_ones() != idx.retained() {
        return Err(fail("Removed disagrees with the retained sample count".into()));
    }
    let bound = retained_bound(n, r, s);
    if idx.retained() > bound {
        return Err(fail(format!("retained samples {} exceed bound {bound}", idx.retained())));
    }
    let mut by_pos: Vec<(usize, bool)> = (1..=r).map(|p| (ctx.run_sample(p), removed.get(p))).collect();
    by_pos.sort_unstable();
    let kept: Vec<usize> = by_pos.iter().filter(|e| !e.1).map(|e| e.0).collect();
    if let Some(w) = kept.windows(3).find(|w| w[2] - w[0] <= s) {
        return Err(fail(format!("three retained samples {w:?} within a window of {}", s + 1)));
    }
    let mut left = None;
    for (i, &(v, gone)) in by_pos.iter().enumerate() {
        if !gone {
            left = Some(v);
            continue;
        }
        let right = by_pos[i + 1..].iter().find(|e| !e.1).map(|e| e.0);
        match (left, right) {
            (Some(a), Some(b)) if b - a <= s => {}
            _ => return Err(fail(format!("removed sample {v} has retained neighbours {left:?}, {right:?} further than s={s} apart"))),
        }
    }
    let bits = locating_payload_bits(idx);
    let limit = locating_bound_bits(n, r, s);
    if bits > limit {
        return Err(fail(format!("locating structures use {bits} bits, bound is {limit}")));
    }
    Ok(())
}

fn check_oracle(ctx: &SuffixContext, idx: &SrIndex) -> Result<(), BuildError> {
    let n = idx.n();
    for q in 1..=idx.r() {
        let want = ctx.sa(ctx.run_end(q));
        match idx.toehold_resolve(q) {
            Ok((got, k)) if got == want && k < idx.s() => {}
            other => return Err(fail(format!("toehold of run {q}: expected SA={want}, got {other:?}"))),
        }
    }
    // clean[i]: no removed First entry in (pred(First, i), i], cyclically.
    let removed = idx.ext.removed();
    let mut mark = vec![0u8; n + 1];
    for p in 1..=idx.r() {
        let prev = if p == 1 { idx.r() } else { p - 1 };
        mark[ctx.run_first(p)] = if removed.get(prev) { 2 } else { 1 };
    }
    let mut clean = vec![false; n + 1];
    let mut state = false;
    for pass in 0..2 {
        for i in 1..=n {
            match mark[i] {
                1 => state = true,
                2 => state = false,
                _ => {}
            }
            if pass == 1 {
                clean[i] = state;
            }
        }
    }
    for j in 2..=n {
        let i = ctx.letter_pos(j);
        let want = ctx.sa(j - 1);
        if clean[i] {
            match idx.core.phi(removed, i) {
                Ok(phi) if phi.value == want => {}
                other => return Err(fail(format!("phi({i}) expected {want}, got {other:?}"))),
            }
        }
        if idx.variant() != Variant::Plain && idx.locate_fastpath_check(i).ok() == Some(FastPath::UsePhi) && !clean[i] {
            return Err(fail(format!("fast path admits phi at {i} across a removed sample")));
        }
    }
    Ok(())
}
