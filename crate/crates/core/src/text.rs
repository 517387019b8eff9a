//! Input texts: loading with alphabet compaction, synthetic mutated-DNA
//! collections, and random pattern sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::TextError;

/// Identifier of the PRNG behind every seeded generator in this crate.
pub const RNG_ALGORITHM: &str = "chacha8";

/// Code of the end-of-text sentinel.
pub const SENTINEL: u8 = 0;

const DNA: [u8; 4] = *b"ACGT";

/// A sentinel-terminated text over a dense alphabet.
///
/// Byte values are mapped to codes `1..sigma` in byte order, so code order
/// is byte order; code 0 is the sentinel and occurs only at position `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Text {
    data: Vec<u8>,
    sigma: usize,
    byte_to_code: [u8; 256],
    code_to_byte: Vec<u8>,
}

impl Text {
    /// Compacts the alphabet of `raw` and appends the sentinel.
    pub fn from_bytes(raw: &[u8]) -> Result<Self, TextError> {
        if raw.is_empty() {
            return Err(TextError::EmptyInput);
        }
        if let Some(offset) = raw.iter().position(|&b| b == 0) {
            return Err(TextError::SentinelByteInInput { offset });
        }
        if raw.len() >= u32::MAX as usize {
            return Err(TextError::TextTooLarge { len: raw.len() });
        }
        let mut present = [false; 256];
        for &b in raw {
            present[b as usize] = true;
        }
        let mut byte_to_code = [0u8; 256];
        let mut code_to_byte = vec![b'$'];
        for b in 1..=255u8 {
            if present[b as usize] {
                byte_to_code[b as usize] = code_to_byte.len() as u8;
                code_to_byte.push(b);
            }
        }
        let mut data: Vec<u8> = raw.iter().map(|&b| byte_to_code[b as usize]).collect();
        data.push(SENTINEL);
        Ok(Self {
            data,
            sigma: code_to_byte.len(),
            byte_to_code,
            code_to_byte,
        })
    }

    /// Rebuilds a text's alphabet tables from the code-to-byte list alone
    /// (used when loading an index, which does not store the text).
    pub(crate) fn alphabet_from_codes(code_to_byte: &[u8]) -> Option<[u8; 256]> {
        let mut byte_to_code = [0u8; 256];
        for (code, &b) in code_to_byte.iter().enumerate().skip(1) {
            if b == 0 || byte_to_code[b as usize] != 0 {
                return None;
            }
            byte_to_code[b as usize] = code as u8;
        }
        Some(byte_to_code)
    }

    /// Length including the sentinel.
    #[inline]
    pub fn n(&self) -> usize {
        self.data.len()
    }

    /// Alphabet size including the sentinel.
    #[inline]
    pub fn sigma(&self) -> usize {
        self.sigma
    }

    /// All codes, `T[1..n]` stored at `[0..n)`.
    #[inline]
    pub fn codes(&self) -> &[u8] {
        &self.data
    }

    /// Code at 1-based position `i`.
    #[inline]
    pub fn symbol(&self, i: usize) -> u8 {
        self.data[i - 1]
    }

    pub fn code_to_byte(&self) -> &[u8] {
        &self.code_to_byte
    }

    pub fn byte_to_code(&self) -> &[u8; 256] {
        &self.byte_to_code
    }

    /// Original bytes (sentinel dropped).
    pub fn to_bytes(&self) -> Vec<u8> {
        self.data[..self.n() - 1]
            .iter()
            .map(|&c| self.code_to_byte[c as usize])
            .collect()
    }

    /// Translates a byte pattern into codes; `None` if any byte is outside
    /// the alphabet.
    pub fn encode_pattern(&self, pattern: &[u8]) -> Option<Vec<u8>> {
        encode_with(&self.byte_to_code, pattern)
    }

    pub fn decode_pattern(&self, codes: &[u8]) -> Vec<u8> {
        codes.iter().map(|&c| self.code_to_byte[c as usize]).collect()
    }

    /// 64-bit FNV-1a over the original bytes.
    pub fn checksum(&self) -> u64 {
        fnv1a64(self.data[..self.n() - 1].iter().map(|&c| self.code_to_byte[c as usize]))
    }
}

pub(crate) fn encode_with(byte_to_code: &[u8; 256], pattern: &[u8]) -> Option<Vec<u8>> {
    pattern
        .iter()
        .map(|&b| match byte_to_code[b as usize] {
            0 => None,
            c => Some(c),
        })
        .collect()
}

pub(crate) fn fnv1a64(bytes: impl IntoIterator<Item = u8>) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Parameters of a synthetic repetitive DNA collection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DnaSpec {
    pub seed_len: usize,
    pub copies: usize,
    pub mutation_rate: f64,
    pub rng_seed: u64,
}

/// Raw bytes of `copies` mutated copies of a random ACGT seed. Each copied
/// symbol is replaced, with probability `mutation_rate`, by a different base
/// chosen uniformly.
pub fn gen_mutated_dna_bytes(spec: &DnaSpec) -> Result<Vec<u8>, TextError> {
    if spec.seed_len == 0 || spec.copies == 0 {
        return Err(TextError::InvalidParameter(
            "seed length and copy count must be positive".into(),
        ));
    }
    if !(0.0..=1.0).contains(&spec.mutation_rate) {
        return Err(TextError::InvalidParameter(format!(
            "mutation rate {} outside [0, 1]",
            spec.mutation_rate
        )));
    }
    let total = spec
        .seed_len
        .checked_mul(spec.copies)
        .filter(|&t| t < u32::MAX as usize)
        .ok_or(TextError::TextTooLarge { len: usize::MAX })?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    let seed: Vec<u8> = (0..spec.seed_len).map(|_| rng.gen_range(0..4u8)).collect();
    let mut out = Vec::with_capacity(total);
    for _ in 0..spec.copies {
        for &base in &seed {
            let b = if spec.mutation_rate > 0.0 && rng.gen_bool(spec.mutation_rate) {
                (base + rng.gen_range(1..4u8)) % 4
            } else {
                base
            };
            out.push(DNA[b as usize]);
        }
    }
    Ok(out)
}

pub fn gen_mutated_dna(spec: &DnaSpec) -> Result<Text, TextError> {
    Text::from_bytes(&gen_mutated_dna_bytes(spec)?)
}

/// Random length-`m` substrings of a text, as code sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternSet {
    pub patterns: Vec<Vec<u8>>,
    pub m: usize,
    pub rng_seed: u64,
}

/// Samples `count` start positions uniformly, with replacement, from the
/// `n - m` windows that avoid the sentinel.
pub fn sample_patterns(
    text: &Text,
    count: usize,
    m: usize,
    rng_seed: u64,
) -> Result<PatternSet, TextError> {
    let max = text.n() - 1;
    if m == 0 {
        return Err(TextError::InvalidParameter("pattern length must be positive".into()));
    }
    if m > max {
        return Err(TextError::PatternTooLong { m, max });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let windows = max - m + 1;
    let patterns = (0..count)
        .map(|_| {
            let start = rng.gen_range(0..windows);
            text.codes()[start..start + m].to_vec()
        })
        .collect();
    Ok(PatternSet {
        patterns,
        m,
        rng_seed,
    })
}
