//! Little-endian primitives shared by the model file formats.

use std::io::{self, Cursor, Read, Write};

use byteorder::{LittleEndian as LE, ReadBytesExt, WriteBytesExt};

use crate::{Error, Result};

pub(crate) struct Encoder {
    buf: Vec<u8>,
}

impl Encoder {
    pub fn new(magic: &[u8; 4], version: u32) -> Self {
        let mut e = Encoder { buf: Vec::new() };
        e.buf.extend_from_slice(magic);
        e.u32(version);
        e
    }

    pub fn u8(&mut self, v: u8) {
        self.buf.push(v);
    }

    pub fn u32(&mut self, v: u32) {
        self.buf.write_u32::<LE>(v).expect("vec write");
    }

    pub fn u64(&mut self, v: u64) {
        self.buf.write_u64::<LE>(v).expect("vec write");
    }

    pub fn f32(&mut self, v: f32) {
        self.buf.write_f32::<LE>(v).expect("vec write");
    }

    pub fn f64(&mut self, v: f64) {
        self.buf.write_f64::<LE>(v).expect("vec write");
    }

    pub fn len(&mut self, n: usize) {
        self.u64(n as u64);
    }

    pub fn str(&mut self, s: &str) {
        self.len(s.len());
        self.buf.extend_from_slice(s.as_bytes());
    }

    pub fn f32s(&mut self, v: &[f32]) {
        self.buf.reserve(v.len() * 4);
        for &x in v {
            self.f32(x);
        }
    }

    pub fn f64s(&mut self, v: &[f64]) {
        self.buf.reserve(v.len() * 8);
        for &x in v {
            self.f64(x);
        }
    }

    pub fn finish(self) -> Vec<u8> {
        self.buf
    }
}

pub(crate) fn write_file(path: &std::path::Path, bytes: &[u8]) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(bytes).and_then(|_| f.sync_all()).map_err(|e| Error::io(path, e))
}

pub(crate) fn read_file(path: &std::path::Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

pub(crate) struct Decoder<'a> {
    cur: Cursor<&'a [u8]>,
    kind: &'static str,
}

impl<'a> Decoder<'a> {
    /// Checks magic and version.
    pub fn new(bytes: &'a [u8], magic: &'static str, version: u32, kind: &'static str) -> Result<Self> {
        if bytes.len() < 4 || &bytes[..4] != magic.as_bytes() {
            let found = String::from_utf8_lossy(&bytes[..bytes.len().min(4)]).into_owned();
            return Err(Error::BadMagic {
                kind,
                expected: magic,
                found,
            });
        }
        let mut d = Decoder {
            cur: Cursor::new(bytes),
            kind,
        };
        d.cur.set_position(4);
        let found = d.u32()?;
        if found != version {
            return Err(Error::BadVersion {
                kind,
                found,
                supported: version,
            });
        }
        Ok(d)
    }

    fn fault(&self, e: io::Error) -> Error {
        if e.kind() == io::ErrorKind::UnexpectedEof {
            Error::Truncated { kind: self.kind }
        } else {
            self.corrupt(e.to_string())
        }
    }

    pub fn corrupt(&self, msg: impl Into<String>) -> Error {
        Error::Corrupt {
            kind: self.kind,
            msg: msg.into(),
        }
    }

    fn remaining(&self) -> u64 {
        self.cur.get_ref().len() as u64 - self.cur.position()
    }

    pub fn u8(&mut self) -> Result<u8> {
        self.cur.read_u8().map_err(|e| self.fault(e))
    }

    pub fn u32(&mut self) -> Result<u32> {
        self.cur.read_u32::<LE>().map_err(|e| self.fault(e))
    }

    pub fn u64(&mut self) -> Result<u64> {
        self.cur.read_u64::<LE>().map_err(|e| self.fault(e))
    }

    pub fn f32(&mut self) -> Result<f32> {
        self.cur.read_f32::<LE>().map_err(|e| self.fault(e))
    }

    pub fn f64(&mut self) -> Result<f64> {
        self.cur.read_f64::<LE>().map_err(|e| self.fault(e))
    }

    pub fn usize(&mut self) -> Result<usize> {
        let v = self.u64()?;
        usize::try_from(v).map_err(|_| self.corrupt(format!("size {v} out of range")))
    }

    pub fn flag(&mut self) -> Result<bool> {
        match self.u8()? {
            0 => Ok(false),
            1 => Ok(true),
            v => Err(self.corrupt(format!("bad flag byte {v}"))),
        }
    }

    /// Element count followed by at least `count * width` bytes.
    pub fn count(&mut self, width: u64) -> Result<usize> {
        let n = self.usize()?;
        if (n as u64).saturating_mul(width) > self.remaining() {
            return Err(Error::Truncated { kind: self.kind });
        }
        Ok(n)
    }

    pub fn str(&mut self) -> Result<String> {
        let n = self.count(1)?;
        let mut buf = vec![0u8; n];
        self.cur.read_exact(&mut buf).map_err(|e| self.fault(e))?;
        String::from_utf8(buf).map_err(|_| self.corrupt("invalid UTF-8 string"))
    }

    pub fn f32s(&mut self, n: usize) -> Result<Vec<f32>> {
        if (n as u64).saturating_mul(4) > self.remaining() {
            return Err(Error::Truncated { kind: self.kind });
        }
        (0..n).map(|_| self.f32()).collect()
    }

    pub fn f64s(&mut self, n: usize) -> Result<Vec<f64>> {
        if (n as u64).saturating_mul(8) > self.remaining() {
            return Err(Error::Truncated { kind: self.kind });
        }
        (0..n).map(|_| self.f64()).collect()
    }

    pub fn finish(self) -> Result<()> {
        if self.remaining() != 0 {
            return Err(self.corrupt(format!("{} trailing bytes", self.remaining())));
        }
        Ok(())
    }
}
