//! Binary on-disk format for partition families.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! magic   4 bytes  "PFAM"
//! version 1 byte   0x01
//! flags   1 byte   0x00 (no flags defined; non-zero is rejected)
//! n       u64      users per partition
//! b       u32      slots per partition
//! T       u32      number of partitions
//! width   1 byte   bytes per entry: 1, 2 or 4, the smallest holding b - 1
//! body    T*n*width bytes, partition-major: partition 0's assignment
//!         sequence, then partition 1's, ...
//! ```
//!
//! Parsing is strict: wrong magic/version/flags, a non-canonical width, an
//! entry `>= b`, `T = 0`, `b = 0`, truncation and trailing bytes are all
//! rejected as malformed. A file that parses is therefore bit-identical to
//! what serializing the parsed family produces.

use std::path::Path;

use crate::error::{Error, Result};
use crate::types::{Partition, PartitionFamily};

pub const MAGIC: [u8; 4] = *b"PFAM";
pub const VERSION: u8 = 1;

/// Bytes per entry: smallest of 1, 2, 4 whose width holds `b - 1`.
pub fn entry_width_bytes(b: u32) -> u8 {
    let max = b - 1;
    if max <= u8::MAX as u32 {
        1
    } else if max <= u16::MAX as u32 {
        2
    } else {
        4
    }
}

/// Encodes a family into the binary format.
pub fn serialize_family(family: &PartitionFamily) -> Result<Vec<u8>> {
    let t = family.len();
    if t > u32::MAX as usize {
        return Err(Error::TooLarge(format!(
            "family size {t} exceeds the format's 32-bit partition count"
        )));
    }
    let n = family.n() as u64;
    let b = family.b();
    let width = entry_width_bytes(b) as usize;

    let mut out = Vec::with_capacity(18 + t * n as usize * width);
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.push(0); // flags
    out.extend_from_slice(&n.to_le_bytes());
    out.extend_from_slice(&b.to_le_bytes());
    out.extend_from_slice(&(t as u32).to_le_bytes());
    out.push(width as u8);
    for partition in family.partitions() {
        for &slot in partition.assignment() {
            out.extend_from_slice(&slot.to_le_bytes()[..width]);
        }
    }
    Ok(out)
}

/// Decodes a family from the binary format.
pub fn deserialize_family(bytes: &[u8]) -> Result<PartitionFamily> {
    let malformed = |msg: &str| Error::MalformedFile(msg.to_string());

    if bytes.len() < 23 {
        return Err(malformed("shorter than the fixed header"));
    }
    if bytes[0..4] != MAGIC {
        return Err(malformed("bad magic (expected \"PFAM\")"));
    }
    if bytes[4] != VERSION {
        return Err(Error::MalformedFile(format!(
            "unsupported version {} (expected {VERSION})",
            bytes[4]
        )));
    }
    if bytes[5] != 0 {
        return Err(Error::MalformedFile(format!(
            "unknown flags 0x{:02x} (no flags are defined)",
            bytes[5]
        )));
    }
    let n = u64::from_le_bytes(bytes[6..14].try_into().unwrap());
    let b = u32::from_le_bytes(bytes[14..18].try_into().unwrap());
    if b == 0 {
        return Err(malformed("b = 0"));
    }
    let t = u32::from_le_bytes(bytes[18..22].try_into().unwrap());
    if t == 0 {
        return Err(malformed("family with T = 0 partitions"));
    }
    let width = bytes[22];
    if width != entry_width_bytes(b) {
        return Err(Error::MalformedFile(format!(
            "entry width {width} is not the canonical width {} for b = {b}",
            entry_width_bytes(b)
        )));
    }

    let n_usize = usize::try_from(n)
        .map_err(|_| Error::TooLarge(format!("n = {n} does not fit in memory on this platform")))?;
    let body = &bytes[23..];
    let expected = (t as u128) * (n as u128) * (width as u128);
    if (body.len() as u128) < expected {
        return Err(malformed("body shorter than T * n entries"));
    }
    if (body.len() as u128) > expected {
        return Err(malformed("trailing bytes after T * n entries"));
    }

    let width = width as usize;
    let mut partitions = Vec::with_capacity(t as usize);
    let mut off = 0;
    for _ in 0..t {
        let mut assignment = Vec::with_capacity(n_usize);
        for _ in 0..n_usize {
            let mut buf = [0u8; 4];
            buf[..width].copy_from_slice(&body[off..off + width]);
            let slot = u32::from_le_bytes(buf);
            if slot >= b {
                return Err(Error::MalformedFile(format!(
                    "assignment entry {slot} out of range for b = {b}"
                )));
            }
            assignment.push(slot);
            off += width;
        }
        partitions.push(Partition::new(assignment, b)?);
    }
    PartitionFamily::new(partitions)
}

/// Serializes and writes a family to `path`.
pub fn write_family(family: &PartitionFamily, path: &Path) -> Result<()> {
    Ok(std::fs::write(path, serialize_family(family)?)?)
}

/// Reads and parses a family from `path`.
pub fn read_family(path: &Path) -> Result<PartitionFamily> {
    deserialize_family(&std::fs::read(path)?)
}
