use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: mixed face degrees ({expected} and {found}); triangle and quad faces cannot share a mesh")]
    MixedDegree {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("{what} index {index} out of range (len {len})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("empty mesh")]
    EmptyMesh,

    #[error("mesh has no per-face uv indices")]
    MissingUv,

    #[error("degenerate extent: all positions coincide")]
    DegenerateExtent,

    #[error("normalized coordinate {0} outside [0, 1]")]
    CoordinateOutOfRange(f64),

    #[error("every face collapsed during quantization")]
    AllFacesDegenerate,

    #[error("stride {stride} requires faces of degree {expected}, found degree {found}")]
    StrideMismatch {
        stride: usize,
        expected: usize,
        found: usize,
    },

    #[error("token sequence describes zero faces")]
    ZeroFaces,

    #[error("bad magic {0:?}")]
    BadMagic([u8; 4]),

    #[error("unsupported token file version {0}")]
    UnsupportedVersion(u8),

    #[error("unknown flag bits {0:#04x}")]
    UnknownFlags(u8),

    #[error("truncated token file: {0}")]
    Truncated(&'static str),

    #[error("{0} trailing bytes after token payload")]
    TrailingBytes(usize),

    #[error("token id {0} outside vocabulary")]
    TokenRange(u16),

    #[error("empty sample set")]
    EmptySampleSet,

    #[error("mesh has zero surface area")]
    ZeroArea,

    #[error(transparent)]
    Io(#[from] io::Error),
}
