//! Binary containers.
//!
//! `LFR1` layout, all little-endian:
//!
//! ```text
//! magic "LFR1" | u32 U | u32 V | u32 S | u32 T | u32 C | u32 kind
//! f32 samples[U*V*S*T*C] in (u, v, s, t, c) row-major order
//! ```
//!
//! `kind` is 0 for a light field. A focal stack reuses the layout with
//! `U = M` images, `V = 1`, `kind = 1`, and appends `M` f64 alpha values.
//!
//! `LFS1` stores a per-channel spectrum: the same header (kind 0) followed by,
//! for each channel in turn, `U*V*S*T` complex coefficients as interleaved
//! `(re, im)` f32 pairs in `(u, v, s, t)` order.

use std::io::Write;
use std::path::Path;

use num_complex::Complex32;

use crate::error::{Error, Result};
use crate::fourier::LfSpectrum;
use crate::lightfield::{AlphaSet, FocalStack, ImagePlane, LfDims, LightField};

pub const LF_MAGIC: [u8; 4] = *b"LFR1";
pub const SPECTRUM_MAGIC: [u8; 4] = *b"LFS1";
const HEADER_LEN: usize = 4 + 6 * 4;
const KIND_LIGHT_FIELD: u32 = 0;
const KIND_STACK: u32 = 1;

/// What an `LFR1` file holds, read from its header.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContainerKind {
    LightField,
    FocalStack,
}

struct Header {
    dims: [u32; 5],
    kind: u32,
}

impl Header {
    fn write(&self, magic: [u8; 4], out: &mut Vec<u8>) {
        out.extend_from_slice(&magic);
        for d in self.dims {
            out.extend_from_slice(&d.to_le_bytes());
        }
        out.extend_from_slice(&self.kind.to_le_bytes());
    }

    fn read(magic: [u8; 4], bytes: &[u8]) -> Result<Header> {
        if bytes.len() < 4 {
            return Err(Error::Truncated {
                expected: HEADER_LEN,
                found: bytes.len(),
            });
        }
        let found: [u8; 4] = bytes[..4].try_into().unwrap();
        if found != magic {
            return Err(Error::BadMagic {
                expected: magic,
                found,
            });
        }
        if bytes.len() < HEADER_LEN {
            return Err(Error::Truncated {
                expected: HEADER_LEN,
                found: bytes.len(),
            });
        }
        let word = |i: usize| u32::from_le_bytes(bytes[4 + 4 * i..8 + 4 * i].try_into().unwrap());
        Ok(Header {
            dims: [word(0), word(1), word(2), word(3), word(4)],
            kind: word(5),
        })
    }

    /// Validated dims plus the number of scalars they describe.
    fn lf_dims(&self) -> Result<(LfDims, usize)> {
        let wide: Vec<u64> = self.dims.iter().map(|&d| d as u64).collect();
        let as_usize = |d: u32| usize::try_from(d).map_err(|_| Error::DimensionOverflow(wide.clone()));
        let dims = LfDims::new(
            as_usize(self.dims[0])?,
            as_usize(self.dims[1])?,
            as_usize(self.dims[2])?,
            as_usize(self.dims[3])?,
            as_usize(self.dims[4])?,
        );
        let count = dims
            .checked_len()
            .filter(|n| n.checked_mul(8).is_some())
            .ok_or_else(|| Error::DimensionOverflow(wide.clone()))?;
        dims.validate()?;
        Ok((dims, count))
    }
}

fn dims_u32(dims: [usize; 5]) -> Result<[u32; 5]> {
    let mut out = [0u32; 5];
    for (o, d) in out.iter_mut().zip(dims) {
        *o = u32::try_from(d)
            .map_err(|_| Error::DimensionOverflow(dims.iter().map(|&x| x as u64).collect()))?;
    }
    Ok(out)
}

fn read_f32s(bytes: &[u8], count: usize) -> Result<Vec<f32>> {
    let need = count * 4;
    if bytes.len() < need {
        return Err(Error::Truncated {
            expected: count,
            found: bytes.len() / 4,
        });
    }
    Ok(bytes[..need]
        .chunks_exact(4)
        .map(|b| f32::from_le_bytes(b.try_into().unwrap()))
        .collect())
}

fn expect_consumed(bytes: &[u8], used: usize) -> Result<()> {
    if bytes.len() > used {
        return Err(Error::TrailingBytes(bytes.len() - used));
    }
    Ok(())
}

pub fn encode_lf(lf: &LightField) -> Result<Vec<u8>> {
    let header = Header {
        dims: dims_u32(lf.dims().as_array())?,
        kind: KIND_LIGHT_FIELD,
    };
    let mut out = Vec::with_capacity(HEADER_LEN + lf.samples().len() * 4);
    header.write(LF_MAGIC, &mut out);
    for x in lf.samples() {
        out.extend_from_slice(&x.to_le_bytes());
    }
    Ok(out)
}

pub fn decode_lf(bytes: &[u8]) -> Result<LightField> {
    let header = Header::read(LF_MAGIC, bytes)?;
    if header.kind != KIND_LIGHT_FIELD {
        return Err(Error::InvalidDims(format!(
            "container kind {} is not a light field",
            header.kind
        )));
    }
    let (dims, count) = header.lf_dims()?;
    let payload = &bytes[HEADER_LEN..];
    let samples = read_f32s(payload, count)?;
    expect_consumed(payload, count * 4)?;
    LightField::new(dims, samples)
}

pub fn encode_stack(stack: &FocalStack) -> Result<Vec<u8>> {
    let d = stack.image_dims();
    let m = stack.len();
    let header = Header {
        dims: dims_u32([m, 1, d.s, d.t, d.c])?,
        kind: KIND_STACK,
    };
    let mut out = Vec::with_capacity(HEADER_LEN + m * d.len() * 4 + m * 8);
    header.write(LF_MAGIC, &mut out);
    for im in stack.images() {
        for x in im.samples() {
            out.extend_from_slice(&x.to_le_bytes());
        }
    }
    for a in stack.alphas().iter() {
        out.extend_from_slice(&a.to_le_bytes());
    }
    Ok(out)
}

pub fn decode_stack(bytes: &[u8]) -> Result<FocalStack> {
    let header = Header::read(LF_MAGIC, bytes)?;
    if header.kind != KIND_STACK {
        return Err(Error::InvalidDims(format!(
            "container kind {} is not a focal stack",
            header.kind
        )));
    }
    let (dims, count) = header.lf_dims()?;
    if dims.v != 1 {
        return Err(Error::InvalidDims(format!(
            "focal stack must have V = 1, found {}",
            dims.v
        )));
    }
    let m = dims.u;
    let payload = &bytes[HEADER_LEN..];
    let need = count * 4 + m * 8;
    if payload.len() < need {
        return Err(Error::Truncated {
            expected: count + 2 * m,
            found: payload.len() / 4,
        });
    }
    expect_consumed(payload, need)?;
    let samples = read_f32s(payload, count)?;
    let alphas = payload[count * 4..need]
        .chunks_exact(8)
        .map(|b| f64::from_le_bytes(b.try_into().unwrap()))
        .collect();
    let image_dims = dims.image_dims();
    let images = samples
        .chunks_exact(image_dims.len())
        .map(|chunk| ImagePlane::new(image_dims, chunk.to_vec()))
        .collect::<Result<Vec<_>>>()?;
    FocalStack::new(AlphaSet::new(alphas)?, images)
}

pub fn encode_spectrum(spec: &LfSpectrum) -> Result<Vec<u8>> {
    let dims = spec.dims();
    let header = Header {
        dims: dims_u32(dims.as_array())?,
        kind: KIND_LIGHT_FIELD,
    };
    let mut out = Vec::with_capacity(HEADER_LEN + dims.len() * 8);
    header.write(SPECTRUM_MAGIC, &mut out);
    for c in 0..dims.c {
        for z in spec.channel(c) {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    Ok(out)
}

pub fn decode_spectrum(bytes: &[u8]) -> Result<LfSpectrum> {
    let header = Header::read(SPECTRUM_MAGIC, bytes)?;
    if header.kind != KIND_LIGHT_FIELD {
        return Err(Error::InvalidDims(format!(
            "spectrum container kind must be 0, found {}",
            header.kind
        )));
    }
    let (dims, count) = header.lf_dims()?;
    let payload = &bytes[HEADER_LEN..];
    let floats = read_f32s(payload, count * 2)?;
    expect_consumed(payload, count * 8)?;
    let per_channel = count / dims.c;
    let channels = floats
        .chunks_exact(per_channel * 2)
        .map(|ch| {
            ch.chunks_exact(2)
                .map(|p| Complex32::new(p[0], p[1]))
                .collect()
        })
        .collect();
    LfSpectrum::from_parts(dims, channels)
}

/// Reads the header of an `LFR1` file to tell light fields from stacks.
pub fn peek_kind(path: &Path) -> Result<ContainerKind> {
    let mut head = [0u8; HEADER_LEN];
    let mut file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let n = read_up_to(&mut file, &mut head).map_err(|e| Error::io(path, e))?;
    let header = Header::read(LF_MAGIC, &head[..n])?;
    match header.kind {
        KIND_LIGHT_FIELD => Ok(ContainerKind::LightField),
        KIND_STACK => Ok(ContainerKind::FocalStack),
        k => Err(Error::InvalidDims(format!("unknown container kind {k}"))),
    }
}

fn read_up_to(r: &mut impl std::io::Read, buf: &mut [u8]) -> std::io::Result<usize> {
    let mut filled = 0;
    while filled < buf.len() {
        match r.read(&mut buf[filled..])? {
            0 => break,
            n => filled += n,
        }
    }
    Ok(filled)
}

/// Writes `bytes` to a temporary file beside `path`, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(path, e))
}

pub fn save_lf(lf: &LightField, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), &encode_lf(lf)?)
}

pub fn load_lf(path: impl AsRef<Path>) -> Result<LightField> {
    decode_lf(&read_file(path.as_ref())?)
}

pub fn save_stack(stack: &FocalStack, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), &encode_stack(stack)?)
}

pub fn load_stack(path: impl AsRef<Path>) -> Result<FocalStack> {
    decode_stack(&read_file(path.as_ref())?)
}

pub fn save_spectrum(spec: &LfSpectrum, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path.as_ref(), &encode_spectrum(spec)?)
}

pub fn load_spectrum(path: impl AsRef<Path>) -> Result<LfSpectrum> {
    decode_spectrum(&read_file(path.as_ref())?)
}
