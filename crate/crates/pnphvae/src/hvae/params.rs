//! Versioned binary parameter files.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! magic   4 bytes  "HVPF"
//! version u32      currently 1
//! levels  u64      number of latent levels L
//! dims    L x u64  latent dimension per level
//! meta    u64 len + UTF-8 key=value lines (free-form header)
//! nsect   u64      number of named parameter sections
//! per section:
//!   name  u64 len + UTF-8 bytes
//!   data  u64 count + count x f64 (little-endian)
//! ```
//!
//! Sections appear in declaration order and are read back verbatim, so a
//! round trip reproduces bit-identical parameters.

use crate::error::{Error, Result};
use std::io::{Read, Write};

pub const MAGIC: &[u8; 4] = b"HVPF";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct ParamFile {
    pub latent_dims: Vec<usize>,
    pub metadata: String,
    pub sections: Vec<(String, Vec<f64>)>,
}

impl ParamFile {
    pub fn section(&self, name: &str) -> Option<&[f64]> {
        self.sections
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, d)| d.as_slice())
    }

    pub fn require(&self, name: &str) -> Result<&[f64]> {
        self.section(name).ok_or_else(|| Error::MalformedFile {
            format: "HVPF",
            offset: 0,
            reason: format!("missing section {name}"),
        })
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.metadata.lines().find_map(|l| {
            let (k, v) = l.split_once('=')?;
            (k.trim() == key).then(|| v.trim())
        })
    }

    pub fn write_to(&self, w: &mut dyn Write) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&(self.latent_dims.len() as u64).to_le_bytes())?;
        for &d in &self.latent_dims {
            w.write_all(&(d as u64).to_le_bytes())?;
        }
        let meta = self.metadata.as_bytes();
        w.write_all(&(meta.len() as u64).to_le_bytes())?;
        w.write_all(meta)?;
        w.write_all(&(self.sections.len() as u64).to_le_bytes())?;
        for (name, data) in &self.sections {
            let nb = name.as_bytes();
            w.write_all(&(nb.len() as u64).to_le_bytes())?;
            w.write_all(nb)?;
            w.write_all(&(data.len() as u64).to_le_bytes())?;
            for v in data {
                w.write_all(&v.to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn read_from(r: &mut dyn Read) -> Result<ParamFile> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        Reader { buf: &buf, pos: 0 }.parse()
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        self.write_to(&mut f)
    }

    pub fn load(path: &std::path::Path) -> Result<ParamFile> {
        let mut f = std::fs::File::open(path)?;
        Self::read_from(&mut f)
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn bad(&self, reason: &str) -> Error {
        Error::MalformedFile {
            format: "HVPF",
            offset: self.pos,
            reason: reason.into(),
        }
    }

    fn take(&mut self, n: usize) -> Result<&[u8]> {
        if self.pos + n > self.buf.len() {
            return Err(self.bad("truncated payload"));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn parse(mut self) -> Result<ParamFile> {
        if self.take(4)? != MAGIC {
            return Err(Error::MalformedFile {
                format: "HVPF",
                offset: 0,
                reason: "bad magic".into(),
            });
        }
        let version = self.u32()?;
        if version != VERSION {
            return Err(self.bad(&format!("unsupported version {version}")));
        }
        let levels = self.u64()? as usize;
        if levels > 1 << 20 {
            return Err(self.bad("implausible level count"));
        }
        let mut latent_dims = Vec::with_capacity(levels);
        for _ in 0..levels {
            latent_dims.push(self.u64()? as usize);
        }
        let meta_len = self.u64()? as usize;
        let metadata = String::from_utf8(self.take(meta_len)?.to_vec())
            .map_err(|_| self.bad("metadata is not UTF-8"))?;
        let nsect = self.u64()? as usize;
        let mut sections = Vec::with_capacity(nsect);
        for _ in 0..nsect {
            let name_len = self.u64()? as usize;
            let name = String::from_utf8(self.take(name_len)?.to_vec())
                .map_err(|_| self.bad("section name is not UTF-8"))?;
            let count = self.u64()? as usize;
            if count.saturating_mul(8) > self.buf.len() - self.pos {
                return Err(self.bad("section data exceeds file size"));
            }
            let mut data = Vec::with_capacity(count);
            for _ in 0..count {
                data.push(f64::from_le_bytes(self.take(8)?.try_into().unwrap()));
            }
            sections.push((name, data));
        }
        if self.pos != self.buf.len() {
            return Err(self.bad("trailing bytes after last section"));
        }
        Ok(ParamFile {
            latent_dims,
            metadata,
            sections,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ParamFile {
        ParamFile {
            latent_dims: vec![8, 32],
            metadata: "epochs=20\nlr=0.002\ndataset_seed=0\n".into(),
            sections: vec![
                ("enc0.w".into(), vec![1.0, -0.5, 3.25]),
                ("enc0.b".into(), vec![0.0, 1e-300]),
            ],
        }
    }

    #[test]
    fn round_trip_is_bit_identical() {
        let p = sample();
        let mut buf = Vec::new();
        p.write_to(&mut buf).unwrap();
        let q = ParamFile::read_from(&mut buf.as_slice()).unwrap();
        assert_eq!(p, q);
        let mut buf2 = Vec::new();
        q.write_to(&mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn truncation_reports_offset() {
        let p = sample();
        let mut buf = Vec::new();
        p.write_to(&mut buf).unwrap();
        buf.truncate(buf.len() - 3);
        match ParamFile::read_from(&mut buf.as_slice()) {
            Err(Error::MalformedFile { offset, .. }) => assert!(offset > 0),
            other => panic!("expected MalformedFile, got {other:?}"),
        }
    }

    #[test]
    fn bad_magic_rejected() {
        let buf = b"NOPE\x01\x00\x00\x00".to_vec();
        assert!(ParamFile::read_from(&mut buf.as_slice()).is_err());
    }

    #[test]
    fn meta_lookup() {
        let p = sample();
        assert_eq!(p.meta_value("lr"), Some("0.002"));
        assert_eq!(p.meta_value("missing"), None);
    }
}
