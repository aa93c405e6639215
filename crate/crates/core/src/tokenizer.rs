//! Token vocabulary, strip serialization and the binary token file.
//!
//! Vocabulary layout (4800 ids):
//!
//! | range        | class                               |
//! |--------------|-------------------------------------|
//! | `0..64`      | `c1`, plain geometry                |
//! | `64..128`    | `c1`, first vertex of a new strip   |
//! | `128..192`   | `c1`, first vertex of a new island  |
//! | `192..704`   | `c2`                                |
//! | `704..4800`  | `c3`                                |
//!
//! Within a strip a vertex drops the `c1` (and `c2`) token when it matches the
//! previous vertex. Strip heads always carry a full marker triple.

use std::fs;
use std::io::{Read, Write};
use std::ops::Range;
use std::path::Path;

use serde::Serialize;

use crate::quantizer::{encode_hier, HierCode, QuantizedMesh, Transform};
use crate::stripper::{seed_order, Stride, StripSet, UpAxis};
use crate::{Error, Result};

pub const C1_GEO: Range<u16> = 0..64;
pub const C1_T: Range<u16> = 64..128;
pub const C1_UV: Range<u16> = 128..192;
pub const C2: Range<u16> = 192..704;
pub const C3: Range<u16> = 704..4800;
pub const VOCAB_SIZE: u16 = 4800;

/// Named id intervals of the vocabulary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VocabLayout {
    pub ranges: [(&'static str, Range<u16>); 5],
    pub total_size: u16,
}

impl Default for VocabLayout {
    fn default() -> Self {
        Self {
            ranges: [("c1_geo", C1_GEO), ("c1_t", C1_T), ("c1_uv", C1_UV), ("c2", C2), ("c3", C3)],
            total_size: VOCAB_SIZE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Token {
    Geo(u16),
    Transition(u16),
    Island(u16),
    C2(u16),
    C3(u16),
}

impl Token {
    pub fn classify(id: u16) -> Option<Token> {
        Some(match id {
            _ if C1_GEO.contains(&id) => Token::Geo(id),
            _ if C1_T.contains(&id) => Token::Transition(id - C1_T.start),
            _ if C1_UV.contains(&id) => Token::Island(id - C1_UV.start),
            _ if C2.contains(&id) => Token::C2(id - C2.start),
            _ if C3.contains(&id) => Token::C3(id - C3.start),
            _ => return None,
        })
    }

    pub fn id(self) -> u16 {
        match self {
            Token::Geo(c) => C1_GEO.start + c,
            Token::Transition(c) => C1_T.start + c,
            Token::Island(c) => C1_UV.start + c,
            Token::C2(c) => C2.start + c,
            Token::C3(c) => C3.start + c,
        }
    }

    pub fn is_c1(self) -> bool {
        matches!(self, Token::Geo(_) | Token::Transition(_) | Token::Island(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TokenHeader {
    pub uv_mode: bool,
    pub source_stride: Stride,
    pub transform: Transform,
    pub face_count: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TokenSequence {
    pub tokens: Vec<u16>,
    pub header: TokenHeader,
}

/// Serializes strips with prefix sharing; each strip head is a `c1_t` marker,
/// or a `c1_uv` marker when it opens an island in uv mode.
pub fn serialize(s: &StripSet, uv_mode: bool) -> Result<TokenSequence> {
    if s.strips.is_empty() {
        return Err(Error::EmptyMesh);
    }
    let mut tokens = Vec::with_capacity(s.vertex_total() * 2);
    let mut current_island = None;
    for strip in &s.strips {
        let opens_island = current_island != Some(strip.island);
        current_island = Some(strip.island);
        let mut prev: Option<HierCode> = None;
        for &v in &strip.keys {
            let h = encode_hier(s.vertex_keys[v]);
            match prev {
                None => {
                    let head = if uv_mode && opens_island {
                        Token::Island(h.c1)
                    } else {
                        Token::Transition(h.c1)
                    };
                    tokens.extend([head.id(), Token::C2(h.c2).id(), Token::C3(h.c3).id()]);
                }
                Some(p) if p.c1 == h.c1 && p.c2 == h.c2 => tokens.push(Token::C3(h.c3).id()),
                Some(p) if p.c1 == h.c1 => tokens.extend([Token::C2(h.c2).id(), Token::C3(h.c3).id()]),
                Some(_) => tokens.extend([Token::Geo(h.c1).id(), Token::C2(h.c2).id(), Token::C3(h.c3).id()]),
            }
            prev = Some(h);
        }
    }
    Ok(TokenSequence {
        tokens,
        header: TokenHeader {
            uv_mode,
            source_stride: s.stride,
            transform: s.transform,
            face_count: s.face_count() as u32,
        },
    })
}

/// Face-list baseline: nine tokens per triangle, no sharing, faces in seed order.
pub fn baseline_serialize(q: &QuantizedMesh) -> Result<TokenSequence> {
    if q.faces.is_empty() {
        return Err(Error::EmptyMesh);
    }
    if let Some(f) = q.faces.iter().find(|f| f.len() != 3) {
        return Err(Error::StrideMismatch {
            stride: 1,
            expected: 3,
            found: f.len(),
        });
    }
    let flat = QuantizedMesh {
        island_of_face: None,
        ..q.clone()
    };
    let mut tokens = Vec::with_capacity(q.faces.len() * 9);
    for f in seed_order(&flat, 0, UpAxis::default()) {
        for &v in &q.faces[f] {
            let h = encode_hier(q.vertex_keys[v]);
            tokens.extend([Token::Geo(h.c1).id(), Token::C2(h.c2).id(), Token::C3(h.c3).id()]);
        }
    }
    Ok(TokenSequence {
        tokens,
        header: TokenHeader {
            uv_mode: false,
            source_stride: Stride::One,
            transform: q.transform,
            face_count: q.faces.len() as u32,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompressionStats {
    pub token_length: usize,
    /// Strip and island markers.
    pub transitions: usize,
    /// `token_length / (9 · face_count)`.
    pub comp_rate: f64,
    /// `token_length / (12 · face_count)`, reported for quad sources only.
    pub comp_rate_quad12: Option<f64>,
    /// Fractions of `c1`-class, `c2` and `c3` tokens.
    pub level_shares: [f64; 3],
}

pub fn compression_stats(t: &TokenSequence) -> Result<CompressionStats> {
    if t.header.face_count == 0 {
        return Err(Error::ZeroFaces);
    }
    let mut counts = [0usize; 3];
    let mut transitions = 0;
    for tok in t.tokens.iter().filter_map(|&id| Token::classify(id)) {
        match tok {
            Token::Transition(_) | Token::Island(_) => {
                transitions += 1;
                counts[0] += 1;
            }
            Token::Geo(_) => counts[0] += 1,
            Token::C2(_) => counts[1] += 1,
            Token::C3(_) => counts[2] += 1,
        }
    }
    let len = t.tokens.len();
    let faces = t.header.face_count as f64;
    let share = |c: usize| if len == 0 { 0.0 } else { c as f64 / len as f64 };
    Ok(CompressionStats {
        token_length: len,
        transitions,
        comp_rate: len as f64 / (9.0 * faces),
        comp_rate_quad12: (t.header.source_stride == Stride::Two).then(|| len as f64 / (12.0 * faces)),
        level_shares: counts.map(share),
    })
}

pub const MAGIC: [u8; 4] = *b"SATO";
pub const FORMAT_VERSION: u8 = 1;
const FLAG_UV: u8 = 0b01;
const FLAG_STRIDE2: u8 = 0b10;

/// Binary layout: magic, version, flags, then little-endian
/// `face_count: u32`, transform as four `f64` (origin x, y, z, scale),
/// `token_count: u32` and the tokens as `u16`.
pub fn to_bytes(t: &TokenSequence) -> Result<Vec<u8>> {
    if let Some(&bad) = t.tokens.iter().find(|&&id| id >= VOCAB_SIZE) {
        return Err(Error::TokenRange(bad));
    }
    let mut out = Vec::with_capacity(50 + t.tokens.len() * 2);
    out.extend_from_slice(&MAGIC);
    out.push(FORMAT_VERSION);
    let mut flags = 0;
    if t.header.uv_mode {
        flags |= FLAG_UV;
    }
    if t.header.source_stride == Stride::Two {
        flags |= FLAG_STRIDE2;
    }
    out.push(flags);
    out.extend_from_slice(&t.header.face_count.to_le_bytes());
    for c in t.header.transform.origin {
        out.extend_from_slice(&c.to_le_bytes());
    }
    out.extend_from_slice(&t.header.transform.scale.to_le_bytes());
    out.extend_from_slice(&(t.tokens.len() as u32).to_le_bytes());
    for &id in &t.tokens {
        out.extend_from_slice(&id.to_le_bytes());
    }
    Ok(out)
}

struct Cursor<'a>(&'a [u8]);

impl Cursor<'_> {
    fn take<const N: usize>(&mut self, what: &'static str) -> Result<[u8; N]> {
        if self.0.len() < N {
            return Err(Error::Truncated(what));
        }
        let (head, rest) = self.0.split_at(N);
        self.0 = rest;
        Ok(head.try_into().unwrap())
    }
}

pub fn from_bytes(bytes: &[u8]) -> Result<TokenSequence> {
    let mut cur = Cursor(bytes);
    let magic = cur.take::<4>("magic")?;
    if magic != MAGIC {
        return Err(Error::BadMagic(magic));
    }
    let [version] = cur.take::<1>("version")?;
    if version != FORMAT_VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let [flags] = cur.take::<1>("flags")?;
    if flags & !(FLAG_UV | FLAG_STRIDE2) != 0 {
        return Err(Error::UnknownFlags(flags));
    }
    let face_count = u32::from_le_bytes(cur.take("face count")?);
    let mut origin = [0.0; 3];
    for c in &mut origin {
        *c = f64::from_le_bytes(cur.take("transform")?);
    }
    let scale = f64::from_le_bytes(cur.take("transform")?);
    let count = u32::from_le_bytes(cur.take("token count")?) as usize;
    if cur.0.len() < count * 2 {
        return Err(Error::Truncated("token payload"));
    }
    let mut tokens = Vec::with_capacity(count);
    for _ in 0..count {
        let id = u16::from_le_bytes(cur.take("token payload")?);
        if id >= VOCAB_SIZE {
            return Err(Error::TokenRange(id));
        }
        tokens.push(id);
    }
    if !cur.0.is_empty() {
        return Err(Error::TrailingBytes(cur.0.len()));
    }
    Ok(TokenSequence {
        tokens,
        header: TokenHeader {
            uv_mode: flags & FLAG_UV != 0,
            source_stride: if flags & FLAG_STRIDE2 != 0 { Stride::Two } else { Stride::One },
            transform: Transform { origin, scale },
            face_count,
        },
    })
}

pub fn write_tokens(t: &TokenSequence, path: impl AsRef<Path>) -> Result<()> {
    let bytes = to_bytes(t)?;
    fs::File::create(path)?.write_all(&bytes)?;
    Ok(())
}

pub fn read_tokens(path: impl AsRef<Path>) -> Result<TokenSequence> {
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    from_bytes(&bytes)
}
