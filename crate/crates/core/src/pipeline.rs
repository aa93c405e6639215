//! End-to-end encode and round-trip verification helpers shared by the CLI and demo.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::Serialize;

use crate::detokenizer::{detokenize, Decoded};
use crate::mesh_io::{uv_islands, IslandPartition, Mesh};
use crate::quantizer::{quantize_mesh, GridCoord, QuantizedMesh};
use crate::stripper::{extract_strips_with, Stride, StripSet, UpAxis};
use crate::tokenizer::{compression_stats, serialize, CompressionStats, TokenSequence};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodeOptions {
    pub stride: Stride,
    pub uv_mode: bool,
    pub up: UpAxis,
}

impl Default for EncodeOptions {
    fn default() -> Self {
        Self {
            stride: Stride::One,
            uv_mode: false,
            up: UpAxis::Y,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Encoded {
    pub quantized: QuantizedMesh,
    pub strips: StripSet,
    pub tokens: TokenSequence,
    pub stats: CompressionStats,
    pub warnings: Vec<String>,
}

/// Quantize → strips → tokens. In uv mode a mesh without uv data falls back to one island.
pub fn encode_mesh(mesh: &Mesh, opts: EncodeOptions) -> Result<Encoded> {
    let mut warnings = Vec::new();
    if let Some(d) = mesh.degree() {
        if d != opts.stride.face_degree() {
            return Err(Error::StrideMismatch {
                stride: opts.stride.value(),
                expected: opts.stride.face_degree(),
                found: d,
            });
        }
    }
    let partition: Option<IslandPartition> = if opts.uv_mode {
        match uv_islands(mesh) {
            Ok(p) => Some(p),
            Err(Error::MissingUv) => {
                warnings.push("no uv data; encoded as a single island".to_string());
                None
            }
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let quantized = quantize_mesh(mesh, partition.as_ref())?;
    let dropped = mesh.faces.len() - quantized.faces.len();
    if dropped > 0 {
        warnings.push(format!("{dropped} degenerate or duplicate faces dropped during quantization"));
    }
    let strips = extract_strips_with(&quantized, opts.stride, opts.up)?;
    let tokens = serialize(&strips, opts.uv_mode)?;
    let stats = compression_stats(&tokens)?;
    Ok(Encoded {
        quantized,
        strips,
        tokens,
        stats,
        warnings,
    })
}

/// Faces as coordinate tuples with their island label.
pub fn keyed_faces(q: &QuantizedMesh) -> Vec<(usize, Vec<GridCoord>)> {
    q.faces
        .iter()
        .enumerate()
        .map(|(fi, f)| (q.island_of(fi), f.iter().map(|&v| q.vertex_keys[v]).collect()))
        .collect()
}

fn sorted_set(f: &[GridCoord]) -> Vec<GridCoord> {
    let mut s = f.to_vec();
    s.sort_unstable();
    s
}

fn is_cyclic_rotation(a: &[GridCoord], b: &[GridCoord]) -> bool {
    let n = b.len();
    a.len() == n && (0..n).any(|s| (0..n).all(|k| a[k] == b[(s + k) % n]))
}

/// Every directed edge used at most once: adjacent faces agree on orientation
/// and no edge is shared by more than two faces.
pub fn is_consistently_wound(q: &QuantizedMesh) -> bool {
    let mut seen = HashSet::new();
    q.faces.iter().all(|f| {
        let n = f.len();
        (0..n).all(|k| seen.insert((q.vertex_keys[f[k]], q.vertex_keys[f[(k + 1) % n]])))
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundTripCheck {
    pub passed: bool,
    pub divergence: Option<String>,
    pub winding_checked: bool,
    pub notes: Vec<String>,
}

/// Compares a decoded mesh against its source: face multiset, island partition,
/// per-island vertex sets and, on consistently wound inputs, face winding.
pub fn compare_round_trip(source: &QuantizedMesh, decoded: &Decoded) -> RoundTripCheck {
    let mut notes = Vec::new();
    let fail = |msg: String, notes: Vec<String>| RoundTripCheck {
        passed: false,
        divergence: Some(msg),
        winding_checked: false,
        notes,
    };
    if !decoded.report.is_clean() {
        return fail(format!("decode anomalies: {:?}", decoded.report), notes);
    }
    if let Err(e) = decoded.mesh.validate() {
        return fail(format!("decoded mesh invalid: {e}"), notes);
    }
    let src = keyed_faces(source);
    let dec = keyed_faces(&decoded.mesh);
    if src.len() != dec.len() {
        return fail(format!("face count {} != {}", dec.len(), src.len()), notes);
    }
    let dec_by_set: HashMap<Vec<GridCoord>, (usize, &Vec<GridCoord>)> =
        dec.iter().map(|(i, f)| (sorted_set(f), (*i, f))).collect();
    if dec_by_set.len() != dec.len() {
        return fail("decoded faces repeat a vertex set".into(), notes);
    }

    let winding_checked = is_consistently_wound(source);
    if !winding_checked {
        notes.push("source is not consistently wound; winding not compared".into());
    }
    let mut island_map: BTreeMap<usize, usize> = BTreeMap::new();
    let mut reverse: BTreeMap<usize, usize> = BTreeMap::new();
    for (fi, (island, face)) in src.iter().enumerate() {
        let Some(&(d_island, d_face)) = dec_by_set.get(&sorted_set(face)) else {
            return fail(format!("source face {fi} {face:?} missing from decode"), notes);
        };
        if *island_map.entry(*island).or_insert(d_island) != d_island || *reverse.entry(d_island).or_insert(*island) != *island {
            return fail(format!("source face {fi} changes island grouping"), notes);
        }
        if winding_checked && !is_cyclic_rotation(d_face, face) {
            return fail(format!("source face {fi} {face:?} decoded with flipped winding {d_face:?}"), notes);
        }
    }

    let vertex_sets = |faces: &[(usize, Vec<GridCoord>)], map: Option<&BTreeMap<usize, usize>>| {
        let mut out: BTreeMap<usize, BTreeSet<GridCoord>> = BTreeMap::new();
        for (i, f) in faces {
            let island = map.map_or(*i, |m| m[i]);
            out.entry(island).or_default().extend(f.iter().copied());
        }
        out
    };
    if vertex_sets(&src, Some(&island_map)) != vertex_sets(&dec, None) {
        return fail("per-island vertex sets differ".into(), notes);
    }
    if decoded.mesh.vertex_keys.len() != vertex_sets(&dec, None).values().map(BTreeSet::len).sum::<usize>() {
        return fail("decoded vertices not fully welded within islands".into(), notes);
    }
    RoundTripCheck {
        passed: true,
        divergence: None,
        winding_checked,
        notes,
    }
}

/// Encodes, decodes with the source stride and compares.
pub fn round_trip(mesh: &Mesh, opts: EncodeOptions) -> Result<(Encoded, Decoded, RoundTripCheck)> {
    let encoded = encode_mesh(mesh, opts)?;
    let decoded = detokenize(&encoded.tokens, opts.stride);
    let mut check = compare_round_trip(&encoded.quantized, &decoded);
    check.notes.extend(encoded.warnings.iter().cloned());
    Ok((encoded, decoded, check))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn uv_fallback_warns() {
        let e = encode_mesh(&corpus::tri_grid(2, 2), EncodeOptions { uv_mode: true, ..Default::default() }).unwrap();
        assert_eq!(e.warnings.len(), 1);
        assert_eq!(e.quantized.island_count(), 1);
    }

    #[test]
    fn uv_round_trip_keeps_islands() {
        let mesh = corpus::tri_l_solid(2);
        let opts = EncodeOptions { uv_mode: true, ..Default::default() };
        let (enc, dec, check) = round_trip(&mesh, opts).unwrap();
        assert!(check.passed, "{check:?}");
        assert!(check.winding_checked);
        assert_eq!(dec.partition.island_count, enc.quantized.island_count());
        assert!(enc.quantized.island_count() > 1);
    }

    #[test]
    fn detects_divergence() {
        let mesh = corpus::tri_grid(3, 3);
        let (enc, mut dec, _) = round_trip(&mesh, EncodeOptions::default()).unwrap();
        dec.mesh.faces[0].swap(1, 2);
        let check = compare_round_trip(&enc.quantized, &dec);
        assert!(!check.passed);
        assert!(check.divergence.unwrap().contains("winding"));
    }
}
