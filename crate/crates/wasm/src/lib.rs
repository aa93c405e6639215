//! Browser bindings for the striptok demo page.
//!
//! Every export returns a JSON string; the plain functions behind them are
//! public so they can be exercised without a browser.

use serde::Serialize;
use striptok::corpus;
use striptok::detokenizer::{decode, parse_tokens, DecodeReport};
use striptok::pipeline::{encode_mesh, EncodeOptions};
use striptok::quantizer::dequantize;
use striptok::tokenizer::Token;
use striptok::{Mesh, Stride, Transform};
use wasm_bindgen::prelude::*;

/// Shape names accepted by [`encode`], triangles first.
pub const SHAPES: [&str; 11] = [
    "tri_grid",
    "tri_grid_alt",
    "tri_ribbon",
    "icosphere",
    "tri_torus",
    "tri_l_solid",
    "quad_grid",
    "quad_ribbon",
    "quad_torus",
    "quad_box",
    "quad_l_solid",
];

/// `size` is clamped per shape so the page stays responsive.
pub fn build_shape(name: &str, size: usize) -> Result<Mesh, String> {
    let n = size.max(1);
    Ok(match name {
        "tri_grid" => corpus::tri_grid(n.min(40), n.min(40)),
        "tri_grid_alt" => corpus::tri_grid_alt(n.min(40), n.min(40)),
        "tri_ribbon" => corpus::tri_ribbon(n.min(200)),
        "icosphere" => corpus::icosphere(n.min(4)),
        "tri_torus" => corpus::tri_torus(4 * n.clamp(2, 16), 2 * n.clamp(2, 16)),
        "tri_l_solid" => corpus::tri_l_solid(n.min(8)),
        "quad_grid" => corpus::quad_grid(n.min(40), n.min(40)),
        "quad_ribbon" => corpus::quad_ribbon(n.min(200)),
        "quad_torus" => corpus::quad_torus(4 * n.clamp(2, 16), 2 * n.clamp(2, 16)),
        "quad_box" => corpus::quad_box(n.min(12)),
        "quad_l_solid" => corpus::quad_l_solid(n.min(8)),
        _ => return Err(format!("unknown shape {name:?}")),
    })
}

#[derive(Debug, Serialize)]
pub struct StripView {
    pub island: usize,
    /// Faces as lists of unit-cube positions.
    pub faces: Vec<Vec<[f64; 3]>>,
}

#[derive(Debug, Serialize)]
pub struct EncodeView {
    pub stride: usize,
    pub faces: usize,
    pub vertices: usize,
    pub strips: Vec<StripView>,
    pub tokens: Vec<u16>,
    /// `geo`, `t`, `uv`, `c2` or `c3` per token.
    pub classes: Vec<&'static str>,
    pub comp_rate: f64,
    pub transitions: usize,
    pub level_shares: [f64; 3],
}

#[derive(Debug, Serialize)]
pub struct DecodeView {
    pub stride: usize,
    pub faces: Vec<Vec<[f64; 3]>>,
    pub vertices: usize,
    pub islands: usize,
    pub report: DecodeReport,
}

fn class_of(id: u16) -> &'static str {
    match Token::classify(id) {
        Some(Token::Geo(_)) => "geo",
        Some(Token::Transition(_)) => "t",
        Some(Token::Island(_)) => "uv",
        Some(Token::C2(_)) => "c2",
        Some(Token::C3(_)) => "c3",
        None => "invalid",
    }
}

/// Encodes a synthetic shape in unit-cube coordinates.
pub fn encode(name: &str, size: usize) -> Result<EncodeView, String> {
    let mesh = build_shape(name, size)?;
    let stride = mesh.degree().and_then(Stride::for_degree).ok_or("empty shape")?;
    let enc = encode_mesh(&mesh, EncodeOptions { stride, ..Default::default() }).map_err(|e| e.to_string())?;
    let keys = &enc.strips.vertex_keys;
    let strips = enc
        .strips
        .strips
        .iter()
        .map(|s| StripView {
            island: s.island,
            faces: s.faces().iter().map(|f| f.iter().map(|&v| dequantize(keys[v], &Transform::IDENTITY)).collect()).collect(),
        })
        .collect();
    Ok(EncodeView {
        stride: stride.value(),
        faces: enc.quantized.faces.len(),
        vertices: enc.quantized.vertex_keys.len(),
        strips,
        classes: enc.tokens.tokens.iter().map(|&t| class_of(t)).collect(),
        tokens: enc.tokens.tokens,
        comp_rate: enc.stats.comp_rate,
        transitions: enc.stats.transitions,
        level_shares: enc.stats.level_shares,
    })
}

/// Decodes any id list; the result is always a mesh, possibly empty.
pub fn decode_ids(tokens: &[u16], stride: usize) -> Result<DecodeView, String> {
    let stride = Stride::from_value(stride).ok_or("stride must be 1 or 2")?;
    let d = decode(&parse_tokens(tokens), stride, Transform::IDENTITY);
    let positions = d.mesh.to_mesh().positions;
    Ok(DecodeView {
        stride: stride.value(),
        faces: d.mesh.faces.iter().map(|f| f.iter().map(|&v| positions[v]).collect()).collect(),
        vertices: d.mesh.vertex_keys.len(),
        islands: d.partition.island_count,
        report: d.report,
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    r.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string())).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn shapes() -> String {
    serde_json::to_string(&SHAPES).expect("static list")
}

#[wasm_bindgen]
pub fn encode_shape(name: &str, size: u32) -> Result<String, JsValue> {
    to_js(encode(name, size as usize))
}

#[wasm_bindgen]
pub fn decode_tokens(tokens: Vec<u16>, stride: u32) -> Result<String, JsValue> {
    to_js(decode_ids(&tokens, stride as usize))
}

#[wasm_bindgen]
pub fn vocab_size() -> u32 {
    u32::from(striptok::tokenizer::VOCAB_SIZE)
}
