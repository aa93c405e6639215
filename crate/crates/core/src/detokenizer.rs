//! Token parsing and stride-aware mesh reconstruction.
//!
//! Parsing is total: malformed patterns are dropped and counted instead of
//! failing, so arbitrary model output always yields a valid (possibly empty) mesh.

use rustc_hash::{FxHashMap, FxHashSet};
use serde::Serialize;

use crate::mesh_io::IslandPartition;
use crate::quantizer::{decode_hier, GridCoord, HierCode, QuantizedMesh, Transform};
use crate::stripper::{strip_faces, Stride};
use crate::tokenizer::{Token, TokenSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EventKind {
    StartStrip,
    StartIsland,
    Vertex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VertexEvent {
    pub kind: EventKind,
    pub code: HierCode,
    /// Number of tokens this vertex consumed (1 to 3).
    pub span: u8,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VertexStream {
    pub events: Vec<VertexEvent>,
    pub discarded: usize,
}

/// A `c1`-class or `c2` token still waiting for the rest of its vertex.
#[derive(Clone, Copy)]
struct Pending {
    head: Option<Token>,
    c2: Option<u16>,
}

impl Pending {
    fn len(&self) -> usize {
        usize::from(self.head.is_some()) + usize::from(self.c2.is_some())
    }
}

pub fn parse_tokens(tokens: &[u16]) -> VertexStream {
    let mut out = VertexStream::default();
    let mut cache: Option<(u16, u16)> = None;
    let mut pending: Option<Pending> = None;

    for &id in tokens {
        let Some(tok) = Token::classify(id) else {
            out.discarded += 1;
            continue;
        };
        match tok {
            Token::Geo(_) | Token::Transition(_) | Token::Island(_) => {
                if let Some(p) = pending.take() {
                    out.discarded += p.len();
                }
                pending = Some(Pending { head: Some(tok), c2: None });
            }
            Token::C2(c2) => match pending.take() {
                Some(Pending { head: Some(h), c2: None }) => pending = Some(Pending { head: Some(h), c2: Some(c2) }),
                stale => {
                    if let Some(p) = stale {
                        out.discarded += p.len();
                    }
                    if cache.is_some() {
                        pending = Some(Pending { head: None, c2: Some(c2) });
                    } else {
                        out.discarded += 1;
                    }
                }
            },
            Token::C3(c3) => {
                let (kind, c1, c2, span) = match pending.take() {
                    Some(Pending { head: Some(h), c2: Some(c2) }) => {
                        let (kind, c1) = match h {
                            Token::Transition(c) => (EventKind::StartStrip, c),
                            Token::Island(c) => (EventKind::StartIsland, c),
                            Token::Geo(c) => (EventKind::Vertex, c),
                            _ => unreachable!("pending head is a c1-class token"),
                        };
                        (kind, c1, c2, 3)
                    }
                    Some(Pending { head: None, c2: Some(c2) }) => match cache {
                        Some((c1, _)) => (EventKind::Vertex, c1, c2, 2),
                        None => {
                            out.discarded += 2;
                            continue;
                        }
                    },
                    stale => {
                        // a c1 head directly followed by c3 is dropped; the c3 may still use the cache
                        if let Some(p) = stale {
                            out.discarded += p.len();
                        }
                        match cache {
                            Some((c1, c2)) => (EventKind::Vertex, c1, c2, 1),
                            None => {
                                out.discarded += 1;
                                continue;
                            }
                        }
                    }
                };
                cache = Some((c1, c2));
                out.events.push(VertexEvent {
                    kind,
                    code: HierCode { c1, c2, c3 },
                    span,
                });
            }
        }
    }
    if let Some(p) = pending {
        out.discarded += p.len();
    }
    out
}

/// Anomaly and bookkeeping counters from [`decode`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DecodeReport {
    pub discarded_tokens: usize,
    /// Strips with fewer than three vertices.
    pub dropped_strips: usize,
    pub dropped_strip_tokens: usize,
    pub degenerate_faces: usize,
    pub duplicate_faces: usize,
    /// Tokens of vertices that ended up in no surviving face.
    pub orphan_tokens: usize,
    /// Tokens of vertices used by at least one surviving face.
    pub consumed_tokens: usize,
    /// Vertex events merged into an existing vertex of the same island.
    pub welded_vertices: usize,
}

impl DecodeReport {
    /// True when nothing was discarded or dropped.
    pub fn is_clean(&self) -> bool {
        self.discarded_tokens == 0
            && self.dropped_strips == 0
            && self.degenerate_faces == 0
            && self.duplicate_faces == 0
            && self.orphan_tokens == 0
    }

    pub fn accounted_tokens(&self) -> usize {
        self.discarded_tokens + self.dropped_strip_tokens + self.orphan_tokens + self.consumed_tokens
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decoded {
    pub mesh: QuantizedMesh,
    pub partition: IslandPartition,
    pub report: DecodeReport,
}

/// Rebuilds faces from a vertex stream.
///
/// The stream start opens island 0; `StartIsland` opens a new island and
/// `StartStrip` a new strip. Coincident vertices are welded within an island
/// only, so islands stay separable.
pub fn decode(stream: &VertexStream, stride: Stride, transform: Transform) -> Decoded {
    let mut report = DecodeReport {
        discarded_tokens: stream.discarded,
        ..Default::default()
    };

    // (island, event indices) per strip
    let mut strips: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut island = 0;
    for (i, ev) in stream.events.iter().enumerate() {
        match ev.kind {
            _ if i == 0 => strips.push((0, vec![i])),
            EventKind::StartIsland => {
                island += 1;
                strips.push((island, vec![i]));
            }
            EventKind::StartStrip => strips.push((island, vec![i])),
            EventKind::Vertex => strips.last_mut().expect("first event opened a strip").1.push(i),
        }
    }

    let mut vertex_of: FxHashMap<(usize, GridCoord), usize> = FxHashMap::default();
    let mut vertex_keys = Vec::new();
    let mut faces: Vec<Vec<usize>> = Vec::new();
    let mut labels = Vec::new();
    let mut seen_faces: FxHashSet<[usize; 4]> = FxHashSet::default();
    let mut event_used = vec![false; stream.events.len()];

    for (island, events) in &strips {
        if events.len() < 3 {
            report.dropped_strips += 1;
            report.dropped_strip_tokens += events.iter().map(|&e| stream.events[e].span as usize).sum::<usize>();
            continue;
        }
        // (event index, vertex id) per strip position
        let local: Vec<(usize, usize)> = events
            .iter()
            .map(|&e| {
                let g = decode_hier(stream.events[e].code);
                let next = vertex_keys.len();
                let v = *vertex_of.entry((*island, g)).or_insert(next);
                if v == next {
                    vertex_keys.push(g);
                } else {
                    report.welded_vertices += 1;
                }
                (e, v)
            })
            .collect();
        for face in strip_faces(&local, stride) {
            let mut key = [usize::MAX; 4];
            face.iter().enumerate().for_each(|(k, &(_, v))| key[k] = v);
            key.sort_unstable();
            if key.windows(2).any(|w| w[0] == w[1] && w[0] != usize::MAX) {
                report.degenerate_faces += 1;
                continue;
            }
            if !seen_faces.insert(key) {
                report.duplicate_faces += 1;
                continue;
            }
            face.iter().for_each(|&(e, _)| event_used[e] = true);
            let verts: Vec<usize> = face.iter().map(|&(_, v)| v).collect();
            faces.push(verts);
            labels.push(*island);
        }
    }

    for (used, ev) in event_used.iter().zip(&stream.events) {
        if *used {
            report.consumed_tokens += ev.span as usize;
        }
    }
    let in_dropped: usize = report.dropped_strip_tokens;
    let total_event_tokens: usize = stream.events.iter().map(|e| e.span as usize).sum();
    report.orphan_tokens = total_event_tokens - report.consumed_tokens - in_dropped;

    // Compact to referenced vertices and renumber islands densely.
    let mut remap = vec![usize::MAX; vertex_keys.len()];
    let mut compact_keys = Vec::new();
    for face in &mut faces {
        for v in face.iter_mut() {
            if remap[*v] == usize::MAX {
                remap[*v] = compact_keys.len();
                compact_keys.push(vertex_keys[*v]);
            }
            *v = remap[*v];
        }
    }
    let partition = IslandPartition::from_labels(&labels);
    Decoded {
        mesh: QuantizedMesh {
            vertex_keys: compact_keys,
            faces,
            island_of_face: Some(partition.island_of_face.clone()),
            transform,
        },
        partition,
        report,
    }
}

/// Parses and decodes a sequence with the given stride.
pub fn detokenize(t: &TokenSequence, stride: Stride) -> Decoded {
    decode(&parse_tokens(&t.tokens), stride, t.header.transform)
}

/// Faces as `(island, coordinates)` so decodes with different vertex numbering compare.
fn keyed_faces(d: &Decoded) -> Vec<(usize, Vec<GridCoord>)> {
    let mut out: Vec<(usize, Vec<GridCoord>)> = d
        .mesh
        .faces
        .iter()
        .enumerate()
        .map(|(fi, f)| (d.partition.island_of_face[fi], f.iter().map(|&v| d.mesh.vertex_keys[v]).collect()))
        .collect();
    out.sort();
    out
}

/// Checks that the stride-1 decode equals the stride-2 decode with every quad
/// `(v0, v1, v3, v2)` split into `(v0, v1, v2)` and `(v1, v3, v2)`.
pub fn dual_decode_check(t: &TokenSequence) -> bool {
    let stream = parse_tokens(&t.tokens);
    let quads = decode(&stream, Stride::Two, t.header.transform);
    let tris = decode(&stream, Stride::One, t.header.transform);
    let mut split: Vec<(usize, Vec<GridCoord>)> = Vec::new();
    for (island, f) in keyed_faces(&quads) {
        match f.as_slice() {
            // stored quad order is (v0, v1, v3, v2)
            &[v0, v1, v3, v2] => {
                split.push((island, vec![v0, v1, v2]));
                split.push((island, vec![v1, v3, v2]));
            }
            _ => split.push((island, f)),
        }
    }
    split.sort();
    split == keyed_faces(&tris)
}
