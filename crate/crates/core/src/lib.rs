//! Strip-based mesh tokenization.
//!
//! Converts triangle and quad meshes (optionally partitioned into UV islands)
//! into compact token sequences and back:
//!
//! - [`mesh_io`]: OBJ loading/saving, UV island extraction, corpus filtering
//! - [`quantizer`]: unit-cube normalization and three-level hierarchical codes on a 512³ grid
//! - [`stripper`]: greedy zipper-like strip extraction with stride 1 (triangles) or 2 (quads)
//! - [`tokenizer`]: the 4800-id vocabulary, prefix sharing, binary token files
//! - [`detokenizer`]: tolerant parsing, stride-aware decoding, welding
//! - [`metrics`]: surface sampling and NC / CD / HD / F1
//! - [`corpus`]: synthetic mesh generators used by tests, the CLI and the demo
//!
//! ```
//! use striptok::{corpus, quantizer, stripper, tokenizer, detokenizer, Stride};
//!
//! let mesh = corpus::tri_ribbon(10);
//! let q = quantizer::quantize_mesh(&mesh, None).unwrap();
//! let strips = stripper::extract_strips(&q, Stride::One).unwrap();
//! let seq = tokenizer::serialize(&strips, false).unwrap();
//! let decoded = detokenizer::detokenize(&seq, Stride::One);
//! assert_eq!(decoded.mesh.faces.len(), q.faces.len());
//! ```

mod error;

pub mod corpus;
pub mod detokenizer;
pub mod kdtree;
pub mod mesh_io;
pub mod metrics;
pub mod pipeline;
pub mod quantizer;
pub mod stripper;
pub mod tokenizer;

pub use error::{Error, Result};
pub use mesh_io::{IslandPartition, Mesh};
pub use quantizer::{GridCoord, HierCode, QuantizedMesh, Transform};
pub use stripper::{Strip, StripSet, Stride, UpAxis};
pub use tokenizer::{TokenHeader, TokenSequence};
