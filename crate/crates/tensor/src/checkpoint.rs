//! Binary checkpoint format.
//!
//! ```text
//! "QNET" | version u16 | dtype u8 (4 or 8) | reserved u8
//! arch tag (u16 length + utf-8)
//! c1 u32 | c2 u32 | d u32 | seed u64
//! metadata: count u32, then (key, value) as u16-length strings
//! params: count u32, then name (u16-length string), rows u32, cols u32,
//!         rows·cols little-endian floats
//! ```
//! All integers are little-endian.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Result, TensorError};
use crate::param::ParamSet;
use crate::tensor::{Real, Tensor};

pub const MAGIC: &[u8; 4] = b"QNET";
pub const VERSION: u16 = 1;

/// Architecture header of a checkpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckpointHeader {
    pub arch: String,
    pub c1: u32,
    pub c2: u32,
    pub d: u32,
    pub seed: u64,
    /// Free-form extra settings, for example the feature encoding.
    pub metadata: BTreeMap<String, String>,
}

#[derive(Clone, Debug)]
pub struct Checkpoint<T> {
    pub header: CheckpointHeader,
    pub tensors: Vec<(String, Tensor<T>)>,
}

impl<T: Real> Checkpoint<T> {
    pub fn from_params(header: CheckpointHeader, params: &ParamSet<T>) -> Self {
        Self {
            header,
            tensors: params
                .iter()
                .map(|p| (p.name.clone(), p.value.clone()))
                .collect(),
        }
    }

    /// Copies stored tensors into `params` by name; every parameter must be present
    /// with a matching shape.
    pub fn load_into(&self, params: &mut ParamSet<T>) -> Result<()> {
        let ids: Vec<_> = params.ids().collect();
        for id in ids {
            let name = params.get(id).name.clone();
            let (_, t) = self
                .tensors
                .iter()
                .find(|(n, _)| *n == name)
                .ok_or_else(|| TensorError::UnknownParam(name.clone()))?;
            params.set_value(id, t.clone())?;
        }
        if self.tensors.len() != params.len() {
            return Err(TensorError::Format(format!(
                "checkpoint has {} tensors, model expects {}",
                self.tensors.len(),
                params.len()
            )));
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let h = &self.header;
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.push(T::BYTES as u8);
        out.push(0);
        put_str(&mut out, &h.arch)?;
        out.extend_from_slice(&h.c1.to_le_bytes());
        out.extend_from_slice(&h.c2.to_le_bytes());
        out.extend_from_slice(&h.d.to_le_bytes());
        out.extend_from_slice(&h.seed.to_le_bytes());
        out.extend_from_slice(&(h.metadata.len() as u32).to_le_bytes());
        for (k, v) in &h.metadata {
            put_str(&mut out, k)?;
            put_str(&mut out, v)?;
        }
        out.extend_from_slice(&(self.tensors.len() as u32).to_le_bytes());
        for (name, t) in &self.tensors {
            put_str(&mut out, name)?;
            out.extend_from_slice(&(t.rows() as u32).to_le_bytes());
            out.extend_from_slice(&(t.cols() as u32).to_le_bytes());
            for &x in t.data() {
                x.write_le(&mut out);
            }
        }
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(TensorError::Format("bad magic".into()));
        }
        let version = r.u16()?;
        if version != VERSION {
            return Err(TensorError::Format(format!(
                "unsupported version {version}"
            )));
        }
        let dtype = r.take(2)?[0] as usize;
        if dtype != T::BYTES {
            return Err(TensorError::Format(format!(
                "stored {}-byte floats, expected {}",
                dtype,
                T::BYTES
            )));
        }
        let arch = r.string()?;
        let (c1, c2, d) = (r.u32()?, r.u32()?, r.u32()?);
        let seed = u64::from_le_bytes(r.take(8)?.try_into().expect("8 bytes"));
        let mut metadata = BTreeMap::new();
        for _ in 0..r.u32()? {
            let k = r.string()?;
            let v = r.string()?;
            metadata.insert(k, v);
        }
        let count = r.u32()?;
        let mut tensors = Vec::new();
        for _ in 0..count {
            let name = r.string()?;
            let rows = r.u32()? as usize;
            let cols = r.u32()? as usize;
            let len = rows
                .checked_mul(cols)
                .and_then(|x| x.checked_mul(T::BYTES))
                .ok_or_else(|| TensorError::Format(format!("tensor {name} too large")))?;
            let raw = r.take(len)?;
            let data = raw.chunks_exact(T::BYTES).map(T::read_le).collect();
            tensors.push((name, Tensor::from_vec(rows, cols, data)?));
        }
        if r.pos != bytes.len() {
            return Err(TensorError::Format(format!(
                "{} trailing bytes",
                bytes.len() - r.pos
            )));
        }
        Ok(Self {
            header: CheckpointHeader {
                arch,
                c1,
                c2,
                d,
                seed,
                metadata,
            },
            tensors,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_bytes()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_bytes(&std::fs::read(path)?)
    }
}

fn put_str(out: &mut Vec<u8>, s: &str) -> Result<()> {
    let len = u16::try_from(s.len())
        .map_err(|_| TensorError::Format(format!("string of {} bytes is too long", s.len())))?;
    out.extend_from_slice(&len.to_le_bytes());
    out.extend_from_slice(s.as_bytes());
    Ok(())
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(len)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| TensorError::Format(format!("truncated at byte {}", self.pos)))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(
            self.take(2)?.try_into().expect("2 bytes"),
        ))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(
            self.take(4)?.try_into().expect("4 bytes"),
        ))
    }

    fn string(&mut self) -> Result<String> {
        let len = self.u16()? as usize;
        String::from_utf8(self.take(len)?.to_vec())
            .map_err(|_| TensorError::Format("invalid utf-8".into()))
    }
}
