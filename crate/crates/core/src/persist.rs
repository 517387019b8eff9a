//! Binary index files.
//!
//! A 40-byte header (magic `SRIX`, format version, variant, checksum kind,
//! `n`, `r`, `sigma`, `s`, text checksum) is followed by length-prefixed
//! blocks in a fixed order. Everything is little-endian; rank/select
//! directories are rebuilt on load rather than stored.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::codec::{ByteReader, ByteWriter};
use crate::error::PersistError;
use crate::locate::LocateCore;
use crate::query::SrIndex;
use crate::rlbwt::RlBwt;
use crate::subsample::{SubsampleExt, Variant};
use crate::text::Text;

pub const MAGIC: [u8; 4] = *b"SRIX";
pub const FORMAT_VERSION: u16 = 1;
pub const HEADER_LEN: usize = 40;
/// Value of the reserved header byte: the text checksum is 64-bit FNV-1a.
pub const CHECKSUM_FNV1A64: u8 = 1;

/// Header fields of an index file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub version: u16,
    pub variant: u8,
    pub checksum_kind: u8,
    pub n: u64,
    pub r: u64,
    pub sigma: u32,
    pub s: u32,
    pub checksum: u64,
}

/// Serialized size of one block, length prefix included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentSize {
    pub name: &'static str,
    pub bytes: usize,
}

type BlockWriter = fn(&SrIndex, &mut ByteWriter);

fn blocks(variant: Variant) -> Vec<(&'static str, BlockWriter)> {
    let mut out: Vec<(&'static str, BlockWriter)> = vec![
        ("code_map", |x, w| w.bytes(&x.code_to_byte)),
        ("c_table", |x, w| x.rlbwt.write_c_table(w)),
        ("start", |x, w| x.rlbwt.write_start(w)),
        ("letter", |x, w| x.rlbwt.write_letters(w)),
        ("first", |x, w| x.core.write_first(w)),
        ("first_to_run", |x, w| x.core.write_first_to_run(w)),
        ("samples", |x, w| x.core.write_samples(w)),
        ("removed", |x, w| x.ext.write_removed(w)),
    ];
    if variant >= Variant::Valid {
        out.push(("valid", |x, w| x.ext.write_valid(w)));
    }
    if variant == Variant::ValidArea {
        out.push(("valid_area", |x, w| x.ext.write_valid_area(w)));
    }
    out.push(("sa_last", |x, w| w.u64(x.core.sa_last() as u64)));
    out
}

fn write_header(index: &SrIndex, w: &mut ByteWriter) {
    w.bytes(&MAGIC);
    w.u16(FORMAT_VERSION);
    w.u8(index.variant().as_u8());
    w.u8(CHECKSUM_FNV1A64);
    w.u64(index.n() as u64);
    w.u64(index.r() as u64);
    w.u32(index.sigma() as u32);
    w.u32(index.s() as u32);
    w.u64(index.checksum());
}

/// Serializes the whole index.
pub fn to_bytes(index: &SrIndex) -> Vec<u8> {
    let mut w = ByteWriter::new();
    write_header(index, &mut w);
    for (_, write) in blocks(index.variant()) {
        let mut block = ByteWriter::new();
        write(index, &mut block);
        w.block(&block.into_inner());
    }
    w.into_inner()
}

/// Per-block sizes; they add up to the file size minus [`HEADER_LEN`].
pub fn component_sizes(index: &SrIndex) -> Vec<ComponentSize> {
    blocks(index.variant())
        .into_iter()
        .map(|(name, write)| {
            let mut block = ByteWriter::new();
            write(index, &mut block);
            ComponentSize {
                name,
                bytes: 8 + block.len(),
            }
        })
        .collect()
}

pub fn save<W: Write>(index: &SrIndex, sink: &mut W) -> Result<usize, PersistError> {
    let bytes = to_bytes(index);
    sink.write_all(&bytes)?;
    Ok(bytes.len())
}

pub fn save_file(index: &SrIndex, path: impl AsRef<Path>) -> Result<usize, PersistError> {
    let mut out = BufWriter::new(File::create(path)?);
    let len = save(index, &mut out)?;
    out.flush()?;
    Ok(len)
}

pub fn load<R: Read>(source: &mut R) -> Result<SrIndex, PersistError> {
    let mut data = Vec::new();
    source.read_to_end(&mut data)?;
    from_bytes(&data)
}

pub fn load_file(path: impl AsRef<Path>) -> Result<SrIndex, PersistError> {
    load(&mut BufReader::new(File::open(path)?))
}

pub fn read_header(data: &[u8]) -> Result<Header, PersistError> {
    let mut r = ByteReader::new(data);
    if data.len() < MAGIC.len() || r.bytes(4)? != MAGIC {
        return Err(PersistError::BadMagic);
    }
    let version = r.u16()?;
    if version != FORMAT_VERSION {
        return Err(PersistError::VersionMismatch {
            found: version,
            expected: FORMAT_VERSION,
        });
    }
    Ok(Header {
        version,
        variant: r.u8()?,
        checksum_kind: r.u8()?,
        n: r.u64()?,
        r: r.u64()?,
        sigma: r.u32()?,
        s: r.u32()?,
        checksum: r.u64()?,
    })
}

pub fn from_bytes(data: &[u8]) -> Result<SrIndex, PersistError> {
    let corrupt = |m: &str| PersistError::Corrupt(m.to_string());
    let h = read_header(data)?;
    let variant = Variant::from_u8(h.variant).map_err(|e| PersistError::Corrupt(e.to_string()))?;
    if h.checksum_kind != CHECKSUM_FNV1A64 {
        return Err(corrupt("unknown checksum kind"));
    }
    let n = usize::try_from(h.n).map_err(|_| corrupt("n overflows"))?;
    let r = usize::try_from(h.r).map_err(|_| corrupt("r overflows"))?;
    let sigma = h.sigma as usize;
    let s = h.s as usize;
    if n < 2 || r < 2 || r > n || !(2..=256).contains(&sigma) || s == 0 || s >= n {
        return Err(corrupt("header values out of range"));
    }

    let mut rd = ByteReader::new(&data[HEADER_LEN..]);
    let mut code_map = rd.block()?;
    let code_to_byte = code_map.bytes(sigma)?.to_vec();
    code_map.finish("code map")?;
    let byte_to_code = Text::alphabet_from_codes(&code_to_byte).ok_or_else(|| corrupt("code map is not injective"))?;

    let mut c_block = rd.block()?;
    let mut start = rd.block()?;
    let mut letter = rd.block()?;
    let rlbwt = RlBwt::read_parts(n, sigma, r, &mut c_block, &mut start, &mut letter)?;

    let mut first = rd.block()?;
    let mut ftr = rd.block()?;
    let mut samples = rd.block()?;
    let mut removed = rd.block()?;
    let mut valid = if variant >= Variant::Valid { Some(rd.block()?) } else { None };
    let mut area = if variant == Variant::ValidArea { Some(rd.block()?) } else { None };
    let mut last = rd.block()?;
    let sa_last = last.usize()?;
    last.finish("SA[n]")?;
    rd.finish("index file")?;

    let core = LocateCore::read_parts(n, r, &mut first, &mut ftr, &mut samples, sa_last)?;
    let ext = SubsampleExt::read_parts(r, s, variant, core.retained(), &mut removed, valid.as_mut(), area.as_mut())?;
    Ok(SrIndex {
        rlbwt,
        core,
        ext,
        code_to_byte,
        byte_to_code,
        checksum: h.checksum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::{build_index, BuildOptions};

    fn abra(s: usize, v: Variant) -> SrIndex {
        let t = Text::from_bytes(b"abracadabra").unwrap();
        build_index(&t, &BuildOptions::new(s, v)).unwrap()
    }

    #[test]
    fn header_layout() {
        let idx = abra(4, Variant::ValidArea);
        let bytes = to_bytes(&idx);
        assert_eq!(&bytes[..4], b"SRIX");
        assert_eq!(u16::from_le_bytes([bytes[4], bytes[5]]), FORMAT_VERSION);
        assert_eq!(bytes[6], 2);
        assert_eq!(bytes[7], CHECKSUM_FNV1A64);
        assert_eq!(u64::from_le_bytes(bytes[8..16].try_into().unwrap()), 12);
        assert_eq!(u64::from_le_bytes(bytes[16..24].try_into().unwrap()), 8);
        assert_eq!(u32::from_le_bytes(bytes[24..28].try_into().unwrap()), 6);
        assert_eq!(u32::from_le_bytes(bytes[28..32].try_into().unwrap()), 4);
        let total: usize = component_sizes(&idx).iter().map(|c| c.bytes).sum();
        assert_eq!(total, bytes.len() - HEADER_LEN);
    }

    #[test]
    fn round_trip_is_exact() {
        for v in Variant::ALL {
            let idx = abra(4, v);
            let bytes = to_bytes(&idx);
            let back = from_bytes(&bytes).unwrap();
            assert_eq!(back, idx);
            assert_eq!(to_bytes(&back), bytes);
        }
    }

    #[test]
    fn plain_variant_has_no_optional_blocks() {
        let names: Vec<&str> = component_sizes(&abra(4, Variant::Plain)).iter().map(|c| c.name).collect();
        assert!(!names.contains(&"valid") && !names.contains(&"valid_area"));
        let names: Vec<&str> = component_sizes(&abra(4, Variant::ValidArea)).iter().map(|c| c.name).collect();
        assert!(names.contains(&"valid") && names.contains(&"valid_area"));
    }

    #[test]
    fn damaged_files_are_rejected() {
        let bytes = to_bytes(&abra(2, Variant::Valid));
        assert!(matches!(from_bytes(b"NOPE"), Err(PersistError::BadMagic)));
        let mut wrong = bytes.clone();
        wrong[0] = b'X';
        assert!(matches!(from_bytes(&wrong), Err(PersistError::BadMagic)));
        let mut ver = bytes.clone();
        ver[4] = 9;
        assert!(matches!(from_bytes(&ver), Err(PersistError::VersionMismatch { found: 9, .. })));
        for cut in [10, HEADER_LEN, HEADER_LEN + 5, bytes.len() - 1] {
            assert!(matches!(from_bytes(&bytes[..cut]), Err(PersistError::Corrupt(_))), "cut {cut}");
        }
        let mut longer = bytes.clone();
        longer.push(0);
        assert!(matches!(from_bytes(&longer), Err(PersistError::Corrupt(_))));
        let mut bad_variant = bytes;
        bad_variant[6] = 7;
        assert!(matches!(from_bytes(&bad_variant), Err(PersistError::Corrupt(_))));
    }
}
