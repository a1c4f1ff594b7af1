//! On-disk slice cache.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic   "QLAT"                       4 bytes
//! version u32                          4
//! q       u32                          4
//! n       u16                          2
//! k       u16                          2
//! count   u64                          8
//! body    count * k * row_bytes        packed basis rows
//! check   u64                          8   FNV-1a of everything above
//! ```
//!
//! A row packs to the base-q integer whose most significant digit is
//! column 0, stored in `row_bytes` = the fewest bytes holding `q^n − 1`.
//! One file per `(q, n, k)`.

use std::fs;
use std::path::{Path, PathBuf};

use super::{LatticeError, LatticeSlice};
use crate::gfq::{FieldDesc, Matrix, Subspace};

pub const CACHE_MAGIC: &[u8; 4] = b"QLAT";
pub const CACHE_VERSION: u32 = 1;

/// Parsed cache file header.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CacheHeader {
    pub version: u32,
    pub q: u32,
    pub n: u16,
    pub k: u16,
    pub count: u64,
    pub checksum: u64,
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x1000_0000_01b3;

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = FNV_OFFSET;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

/// Bytes needed per packed row: the fewest that hold `q^n - 1`.
pub(crate) fn row_bytes(q: u64, n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let max = num_bigint::BigUint::from(q).pow(n as u32) - 1u32;
    max.bits().div_ceil(8) as usize
}

fn pack_row(row: &[u8], q: u64) -> u64 {
    let mut v = 0u64;
    for &e in row {
        v = v * q + e as u64;
    }
    v
}

fn unpack_row(mut code: u64, q: u64, n: usize) -> Vec<u8> {
    let mut row = vec![0u8; n];
    for j in (0..n).rev() {
        row[j] = (code % q) as u8;
        code /= q;
    }
    row
}

/// Conventional cache file name for a slice.
pub fn cache_path(dir: &Path, q: u64, n: usize, k: usize) -> PathBuf {
    dir.join(format!("q{q}_n{n}_k{k}.qlat"))
}

/// Serializes a slice. The write is atomic-enough for a single writer:
/// any truncation or bit flip is caught by the trailing checksum on load.
pub fn cache_save(slice: &LatticeSlice, path: &Path) -> Result<(), LatticeError> {
    let rb = row_bytes(slice.q(), slice.ambient());
    let mut bytes = Vec::with_capacity(32 + slice.len() * slice.dim() * rb);
    bytes.extend_from_slice(CACHE_MAGIC);
    bytes.extend_from_slice(&CACHE_VERSION.to_le_bytes());
    bytes.extend_from_slice(&(slice.q() as u32).to_le_bytes());
    bytes.extend_from_slice(&(slice.ambient() as u16).to_le_bytes());
    bytes.extend_from_slice(&(slice.dim() as u16).to_le_bytes());
    bytes.extend_from_slice(&(slice.len() as u64).to_le_bytes());
    for s in slice.elements() {
        for r in 0..s.dim() {
            let code = pack_row(s.basis().row(r), slice.q());
            bytes.extend_from_slice(&code.to_le_bytes()[..rb]);
        }
    }
    let checksum = fnv1a(&bytes);
    bytes.extend_from_slice(&checksum.to_le_bytes());
    fs::write(path, bytes)?;
    Ok(())
}

/// Reads a header without decoding the body. Checksum is still verified.
pub fn cache_header(path: &Path) -> Result<CacheHeader, LatticeError> {
    let bytes = fs::read(path)?;
    parse_validated(&bytes).map(|(header, _)| header)
}

fn parse_validated(bytes: &[u8]) -> Result<(CacheHeader, &[u8]), LatticeError> {
    const HEADER_LEN: usize = 24;
    if bytes.len() < HEADER_LEN + 8 {
        return Err(LatticeError::ChecksumMismatch);
    }
    let (payload, tail) = bytes.split_at(bytes.len() - 8);
    let stored = u64::from_le_bytes(tail.try_into().expect("8 bytes"));
    if fnv1a(payload) != stored {
        return Err(LatticeError::ChecksumMismatch);
    }
    if &payload[0..4] != CACHE_MAGIC {
        return Err(LatticeError::ChecksumMismatch);
    }
    let version = u32::from_le_bytes(payload[4..8].try_into().unwrap());
    if version != CACHE_VERSION {
        return Err(LatticeError::VersionMismatch { found: version, expected: CACHE_VERSION });
    }
    let q = u32::from_le_bytes(payload[8..12].try_into().unwrap());
    let n = u16::from_le_bytes(payload[12..14].try_into().unwrap());
    let k = u16::from_le_bytes(payload[14..16].try_into().unwrap());
    let count = u64::from_le_bytes(payload[16..24].try_into().unwrap());
    let header = CacheHeader { version, q, n, k, count, checksum: stored };
    let body = &payload[HEADER_LEN..];
    let expected_len = (count as usize)
        .checked_mul(k as usize)
        .and_then(|x| x.checked_mul(row_bytes(q as u64, n as usize)))
        .ok_or(LatticeError::ChecksumMismatch)?;
    if body.len() != expected_len {
        return Err(LatticeError::ChecksumMismatch);
    }
    Ok((header, body))
}

/// Loads a slice saved by [`cache_save`]; element-wise identical to the
/// original.
pub fn cache_load(path: &Path) -> Result<LatticeSlice, LatticeError> {
    let bytes = fs::read(path)?;
    let (header, body) = parse_validated(&bytes)?;
    let q = header.q as u64;
    let n = header.n as usize;
    let k = header.k as usize;
    let f = FieldDesc::get(q)?;
    let rb = row_bytes(q, n);
    let mut elements = Vec::with_capacity(header.count as usize);
    for i in 0..header.count as usize {
        let mut m = Matrix::zero(k, n);
        let mut pivots = Vec::with_capacity(k);
        for r in 0..k {
            let start = (i * k + r) * rb;
            let mut word = [0u8; 8];
            word[..rb].copy_from_slice(&body[start..start + rb]);
            let row = unpack_row(u64::from_le_bytes(word), q, n);
            match row.iter().position(|&v| v != 0) {
                Some(p) => pivots.push(p),
                None => return Err(LatticeError::ChecksumMismatch),
            }
            for (c, &v) in row.iter().enumerate() {
                if v as u64 >= q {
                    return Err(LatticeError::ChecksumMismatch);
                }
                m.set(r, c, v);
            }
        }
        elements.push(Subspace::from_canonical(m, pivots, f));
    }
    Ok(LatticeSlice::from_parts(q, n, k, elements))
}
