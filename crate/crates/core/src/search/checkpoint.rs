//! Resumable search state on disk.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic      8 bytes  "LCSLABCK"
//! version    u16
//! byte order u8       1 = little-endian
//! fingerprint u64
//! length     u32      word length in progress; shorter lengths are exhausted
//! shards     u32
//! done       u32 count, then that many u32 shard indices
//! best       u32 shard index or u32::MAX, u32 letter count, letters as bytes
//! checksum   u64      FNV-1a of everything above
//! ```

use std::collections::BTreeSet;
use std::fs;
use std::io::{Cursor, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use crate::error::{Error, Result};
use crate::word::Letter;

pub const MAGIC: &[u8; 8] = b"LCSLABCK";
pub const VERSION: u16 = 1;
const LITTLE_ENDIAN: u8 = 1;
const NO_BEST: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub fingerprint: u64,
    pub length: u32,
    pub shards: u32,
    pub completed: BTreeSet<u32>,
    pub best: Option<(u32, Vec<Letter>)>,
}

pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

impl Checkpoint {
    pub fn new(fingerprint: u64, length: u32, shards: u32) -> Self {
        Checkpoint {
            fingerprint,
            length,
            shards,
            completed: BTreeSet::new(),
            best: None,
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        buf.extend_from_slice(MAGIC);
        // Writes into a Vec cannot fail.
        buf.write_u16::<LittleEndian>(VERSION).unwrap();
        buf.write_u8(LITTLE_ENDIAN).unwrap();
        buf.write_u64::<LittleEndian>(self.fingerprint).unwrap();
        buf.write_u32::<LittleEndian>(self.length).unwrap();
        buf.write_u32::<LittleEndian>(self.shards).unwrap();
        buf.write_u32::<LittleEndian>(self.completed.len() as u32).unwrap();
        for &i in &self.completed {
            buf.write_u32::<LittleEndian>(i).unwrap();
        }
        match &self.best {
            Some((i, w)) => {
                buf.write_u32::<LittleEndian>(*i).unwrap();
                buf.write_u32::<LittleEndian>(w.len() as u32).unwrap();
                buf.extend(w.iter().map(|l| l.index() as u8));
            }
            None => {
                buf.write_u32::<LittleEndian>(NO_BEST).unwrap();
                buf.write_u32::<LittleEndian>(0).unwrap();
            }
        }
        let sum = fnv1a(&buf);
        buf.write_u64::<LittleEndian>(sum).unwrap();
        buf
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let bad = |m: &str| Error::Checkpoint(m.to_string());
        if bytes.len() < MAGIC.len() + 8 || &bytes[..MAGIC.len()] != MAGIC {
            return Err(bad("missing magic header"));
        }
        let (body, tail) = bytes.split_at(bytes.len() - 8);
        let stored = Cursor::new(tail).read_u64::<LittleEndian>()?;
        if stored != fnv1a(body) {
            return Err(bad("checksum mismatch"));
        }
        let mut r = Cursor::new(&body[MAGIC.len()..]);
        let version = r.read_u16::<LittleEndian>()?;
        if version != VERSION {
            return Err(bad(&format!("unsupported version {version}")));
        }
        if r.read_u8()? != LITTLE_ENDIAN {
            return Err(bad("unsupported byte order"));
        }
        let fingerprint = r.read_u64::<LittleEndian>()?;
        let length = r.read_u32::<LittleEndian>()?;
        let shards = r.read_u32::<LittleEndian>()?;
        let n = r.read_u32::<LittleEndian>()?;
        let mut completed = BTreeSet::new();
        for _ in 0..n {
            let i = r.read_u32::<LittleEndian>()?;
            if i >= shards {
                return Err(bad("shard index out of range"));
            }
            completed.insert(i);
        }
        let bi = r.read_u32::<LittleEndian>()?;
        let bl = r.read_u32::<LittleEndian>()? as usize;
        let best = if bi == NO_BEST {
            None
        } else {
            let mut raw = vec![0u8; bl];
            r.read_exact(&mut raw)?;
            if raw.iter().any(|&b| b > 3) {
                return Err(bad("invalid letter"));
            }
            Some((bi, raw.into_iter().map(|b| Letter::from_index(b as usize)).collect()))
        };
        if (r.position() as usize) != body.len() - MAGIC.len() {
            return Err(bad("trailing bytes"));
        }
        Ok(Checkpoint {
            fingerprint,
            length,
            shards,
            completed,
            best,
        })
    }

    /// Writes atomically: a sibling temporary file is renamed over `path`.
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&self.encode())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    /// `Ok(None)` when no file exists.
    pub fn load(path: &Path) -> Result<Option<Self>> {
        match fs::read(path) {
            Ok(bytes) => Self::decode(&bytes).map(Some),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Checkpoint {
        let mut c = Checkpoint::new(0xdead_beef, 12, 40);
        c.completed.extend([0, 3, 39]);
        c.best = Some((3, vec![Letter::A, Letter::B, Letter::AInv, Letter::BInv]));
        c
    }

    #[test]
    fn roundtrip() {
        let c = sample();
        assert_eq!(Checkpoint::decode(&c.encode()).unwrap(), c);
        let empty = Checkpoint::new(1, 1, 1);
        assert_eq!(Checkpoint::decode(&empty.encode()).unwrap(), empty);
    }

    #[test]
    fn header_is_explicit() {
        let bytes = sample().encode();
        assert_eq!(&bytes[..8], b"LCSLABCK");
        assert_eq!(&bytes[8..10], &[1, 0]);
        assert_eq!(bytes[10], 1);
        assert_eq!(&bytes[11..19], &0xdead_beef_u64.to_le_bytes());
    }

    #[test]
    fn corruption_detected() {
        let bytes = sample().encode();
        for i in [0, 9, 12, 25, bytes.len() - 1] {
            let mut b = bytes.clone();
            b[i] ^= 0x40;
            assert!(Checkpoint::decode(&b).is_err(), "flip at {i}");
        }
        assert!(Checkpoint::decode(&bytes[..bytes.len() - 3]).is_err());
        assert!(Checkpoint::decode(b"nonsense").is_err());
    }

    #[test]
    fn save_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("run.ckpt");
        assert!(Checkpoint::load(&p).unwrap().is_none());
        sample().save(&p).unwrap();
        assert_eq!(Checkpoint::load(&p).unwrap().unwrap(), sample());
        assert!(!p.with_extension("tmp").exists());
    }
}
