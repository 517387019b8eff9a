use crate::codec::{ByteReader, ByteWriter};
use crate::error::PersistError;

/// Fixed-width packed integer array. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntVec {
    width: u8,
    len: usize,
    words: Vec<u64>,
}

/// Number of bits needed to write any value in `0..=max`.
pub fn bits_for(max: u64) -> u8 {
    (64 - max.leading_zeros()) as u8
}

/// `ceil(lg x)` for x >= 1; 0 for x <= 1.
pub fn ceil_log2(x: u64) -> u8 {
    if x <= 1 {
        0
    } else {
        bits_for(x - 1)
    }
}

impl IntVec {
    pub fn new(width: u8, len: usize) -> Self {
        assert!(width <= 64);
        let bits = width as usize * len;
        Self {
            width,
            len,
            words: vec![0; bits.div_ceil(64)],
        }
    }

    /// Packs `values` using the smallest width that fits the maximum.
    pub fn from_slice_minimal(values: &[u64]) -> Self {
        let max = values.iter().copied().max().unwrap_or(0);
        Self::from_slice(bits_for(max), values)
    }

    pub fn from_slice(width: u8, values: &[u64]) -> Self {
        let mut v = Self::new(width, values.len());
        for (i, &x) in values.iter().enumerate() {
            v.set(i, x);
        }
        v
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
    pub fn width(&self) -> u8 {
        self.width
    }

    #[inline]
    fn mask(&self) -> u64 {
        if self.width == 64 {
            u64::MAX
        } else {
            (1u64 << self.width) - 1
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        debug_assert!(i < self.len);
        if self.width == 0 {
            return 0;
        }
        let bit = i * self.width as usize;
        let (w, off) = (bit / 64, bit % 64);
        let mut v = self.words[w] >> off;
        if off + self.width as usize > 64 {
            v |= self.words[w + 1] << (64 - off);
        }
        v & self.mask()
    }

    pub fn set(&mut self, i: usize, value: u64) {
        assert!(i < self.len);
        if self.width == 0 {
            debug_assert_eq!(value, 0);
            return;
        }
        let mask = self.mask();
        assert!(value <= mask, "value {value} does not fit in {} bits", self.width);
        let bit = i * self.width as usize;
        let (w, off) = (bit / 64, bit % 64);
        self.words[w] = (self.words[w] & !(mask << off)) | (value << off);
        if off + self.width as usize > 64 {
            let hi = 64 - off;
            self.words[w + 1] = (self.words[w + 1] & !(mask >> hi)) | (value >> hi);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn size_in_bits(&self) -> usize {
        self.words.len() * 64
    }

    pub(crate) fn write(&self, w: &mut ByteWriter) {
        w.u8(self.width);
        w.u64(self.len as u64);
        w.words(&self.words);
    }

    pub(crate) fn read(r: &mut ByteReader<'_>) -> Result<Self, PersistError> {
        let width = r.u8()?;
        if width > 64 {
            return Err(PersistError::Corrupt(format!("integer width {width}")));
        }
        let len = r.usize()?;
        let words = r.words()?;
        let need = (width as usize)
            .checked_mul(len)
            .ok_or_else(|| PersistError::Corrupt("integer array size overflow".into()))?
            .div_ceil(64);
        if words.len() != need {
            return Err(PersistError::Corrupt("integer array length mismatch".into()));
        }
        Ok(Self { width, len, words })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths() {
        assert_eq!(bits_for(0), 0);
        assert_eq!(bits_for(1), 1);
        assert_eq!(bits_for(255), 8);
        assert_eq!(bits_for(256), 9);
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(9), 4);
    }

    #[test]
    fn pack_across_word_boundaries() {
        for width in [1u8, 3, 7, 13, 31, 63, 64] {
            let mask = if width == 64 { u64::MAX } else { (1 << width) - 1 };
            let vals: Vec<u64> = (0..200u64)
                .map(|i| i.wrapping_mul(0x9E37_79B9_7F4A_7C15) & mask)
                .collect();
            let v = IntVec::from_slice(width, &vals);
            assert_eq!(v.iter().collect::<Vec<_>>(), vals, "width {width}");
        }
    }

    #[test]
    fn zero_width_holds_zeros() {
        let v = IntVec::from_slice(0, &[0, 0, 0]);
        assert_eq!(v.len(), 3);
        assert_eq!(v.get(2), 0);
        assert_eq!(v.size_in_bits(), 0);
    }
}
