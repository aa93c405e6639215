//! Wavefront OBJ input/output, UV island partitions and corpus filtering.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::{Error, Result};

/// Polygon mesh with uniform face degree (all triangles or all quads).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Mesh {
    pub positions: Vec<[f64; 3]>,
    pub faces: Vec<Vec<usize>>,
    pub uv_coords: Option<Vec<[f64; 2]>>,
    /// Per-face uv indices, aligned with the vertex order of `faces`.
    pub face_uvs: Option<Vec<Vec<usize>>>,
}

impl Mesh {
    /// Builds a mesh without uv data and checks its invariants.
    pub fn new(positions: Vec<[f64; 3]>, faces: Vec<Vec<usize>>) -> Result<Self> {
        let mesh = Self {
            positions,
            faces,
            uv_coords: None,
            face_uvs: None,
        };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn with_uvs(mut self, uv_coords: Vec<[f64; 2]>, face_uvs: Vec<Vec<usize>>) -> Result<Self> {
        self.uv_coords = Some(uv_coords);
        self.face_uvs = Some(face_uvs);
        self.validate()?;
        Ok(self)
    }

    /// Face degree shared by every face, `None` for an empty mesh.
    pub fn degree(&self) -> Option<usize> {
        self.faces.first().map(Vec::len)
    }

    /// Full input check: [`Mesh::validate_structure`] plus one face degree throughout.
    pub fn validate(&self) -> Result<()> {
        self.validate_structure()?;
        let degree = self.degree();
        if self.faces.iter().any(|f| Some(f.len()) != degree) {
            return Err(Error::InvalidMesh("mixed face degrees".into()));
        }
        Ok(())
    }

    /// Index bounds, face degrees of 3 or 4 and uv consistency. Decoded quad
    /// strips may end in a triangle, so degrees are not required to agree.
    pub fn validate_structure(&self) -> Result<()> {
        for face in &self.faces {
            if face.len() != 3 && face.len() != 4 {
                return Err(Error::InvalidMesh(format!("face of degree {}", face.len())));
            }
            for &i in face {
                if i >= self.positions.len() {
                    return Err(Error::IndexOutOfRange {
                        what: "position",
                        index: i,
                        len: self.positions.len(),
                    });
                }
            }
        }
        match (&self.uv_coords, &self.face_uvs) {
            (None, None) => {}
            (Some(uvs), Some(face_uvs)) => {
                if face_uvs.len() != self.faces.len() {
                    return Err(Error::InvalidMesh("face_uvs length differs from faces".into()));
                }
                for (f, fu) in self.faces.iter().zip(face_uvs) {
                    if f.len() != fu.len() {
                        return Err(Error::InvalidMesh("face_uvs arity differs from face".into()));
                    }
                    if let Some(&bad) = fu.iter().find(|&&t| t >= uvs.len()) {
                        return Err(Error::IndexOutOfRange {
                            what: "uv",
                            index: bad,
                            len: uvs.len(),
                        });
                    }
                }
            }
            _ => return Err(Error::InvalidMesh("uv_coords and face_uvs must be given together".into())),
        }
        Ok(())
    }
}

/// Assignment of every face to one UV island.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IslandPartition {
    pub island_of_face: Vec<usize>,
    pub island_count: usize,
}

impl IslandPartition {
    /// All faces in island 0.
    pub fn single_island(face_count: usize) -> Self {
        Self {
            island_of_face: vec![0; face_count],
            island_count: usize::from(face_count > 0),
        }
    }

    /// Relabels arbitrary labels densely, in order of first appearance.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut remap = HashMap::new();
        let island_of_face = labels
            .iter()
            .map(|&l| {
                let next = remap.len();
                *remap.entry(l).or_insert(next)
            })
            .collect();
        Self {
            island_of_face,
            island_count: remap.len(),
        }
    }

    pub fn island_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.island_count];
        for &i in &self.island_of_face {
            sizes[i] += 1;
        }
        sizes
    }
}

pub fn load_obj(path: impl AsRef<Path>) -> Result<Mesh> {
    let text = fs::read_to_string(path)?;
    parse_obj(&text)
}

fn parse_index(token: &str, count: usize, line: usize) -> Result<usize> {
    let raw: i64 = token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("bad index {token:?}"),
    })?;
    let resolved = match raw {
        0 => {
            return Err(Error::Parse {
                line,
                message: "index 0 is not valid in OBJ".into(),
            })
        }
        r if r > 0 => r - 1,
        r => count as i64 + r,
    };
    if resolved < 0 {
        return Err(Error::Parse {
            line,
            message: format!("relative index {raw} before first element"),
        });
    }
    Ok(resolved as usize)
}

fn parse_floats<const N: usize>(fields: &[&str], line: usize) -> Result<[f64; N]> {
    if fields.len() < N {
        return Err(Error::Parse {
            line,
            message: format!("expected {N} coordinates, found {}", fields.len()),
        });
    }
    let mut out = [0.0f64; N];
    for (o, f) in out.iter_mut().zip(fields) {
        *o = f.parse().map_err(|_| Error::Parse {
            line,
            message: format!("bad number {f:?}"),
        })?;
        if !o.is_finite() {
            return Err(Error::Parse {
                line,
                message: format!("non-finite number {f:?}"),
            });
        }
    }
    Ok(out)
}

/// Parses OBJ text. Only `v`, `vt` and `f` records are interpreted.
pub fn parse_obj(text: &str) -> Result<Mesh> {
    let mut positions = Vec::new();
    let mut uvs = Vec::new();
    let mut faces = Vec::new();
    let mut face_uvs: Vec<Option<Vec<usize>>> = Vec::new();
    let mut degree: Option<usize> = None;

    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        let mut fields = content.split_whitespace();
        let Some(tag) = fields.next() else { continue };
        let rest: Vec<&str> = fields.collect();
        match tag {
            "v" => positions.push(parse_floats::<3>(&rest, line)?),
            "vt" => uvs.push(parse_floats::<2>(&rest, line)?),
            "f" => {
                if rest.len() != 3 && rest.len() != 4 {
                    return Err(Error::Parse {
                        line,
                        message: format!("unsupported polygon of degree {}", rest.len()),
                    });
                }
                match degree {
                    None => degree = Some(rest.len()),
                    Some(d) if d != rest.len() => {
                        return Err(Error::MixedDegree {
                            line,
                            expected: d,
                            found: rest.len(),
                        })
                    }
                    _ => {}
                }
                let mut face = Vec::with_capacity(rest.len());
                let mut fuv = Vec::with_capacity(rest.len());
                for corner in &rest {
                    let mut parts = corner.split('/');
                    let v = parts.next().unwrap_or("");
                    face.push(parse_index(v, positions.len(), line)?);
                    match parts.next() {
                        Some(t) if !t.is_empty() => fuv.push(parse_index(t, uvs.len(), line)?),
                        _ => {}
                    }
                }
                let fuv = match fuv.len() {
                    0 => None,
                    k if k == face.len() => Some(fuv),
                    _ => {
                        return Err(Error::Parse {
                            line,
                            message: "uv indices given for some corners only".into(),
                        })
                    }
                };
                faces.push(face);
                face_uvs.push(fuv);
            }
            _ => {}
        }
    }

    let with_uv = face_uvs.iter().filter(|f| f.is_some()).count();
    let mesh = if with_uv == 0 {
        Mesh {
            positions,
            faces,
            uv_coords: None,
            face_uvs: None,
        }
    } else if with_uv == faces.len() {
        Mesh {
            positions,
            faces,
            uv_coords: Some(uvs),
            face_uvs: Some(face_uvs.into_iter().flatten().collect()),
        }
    } else {
        return Err(Error::InvalidMesh("uv indices present on some faces only".into()));
    };
    mesh.validate()?;
    Ok(mesh)
}

/// Serializes a mesh as OBJ text. With a partition, faces are emitted grouped
/// by island under `g island_<id>` records.
pub fn to_obj_string(mesh: &Mesh, partition: Option<&IslandPartition>) -> Result<String> {
    if mesh.faces.is_empty() || mesh.positions.is_empty() {
        return Err(Error::EmptyMesh);
    }
    mesh.validate_structure()?;
    if let Some(p) = partition {
        if p.island_of_face.len() != mesh.faces.len() {
            return Err(Error::InvalidMesh("partition length differs from face count".into()));
        }
    }
    let mut out = String::new();
    for p in &mesh.positions {
        // Display for f64 is the shortest representation that parses back bit-exactly.
        writeln!(out, "v {} {} {}", p[0], p[1], p[2]).unwrap();
    }
    if let Some(uvs) = &mesh.uv_coords {
        for t in uvs {
            writeln!(out, "vt {} {}", t[0], t[1]).unwrap();
        }
    }
    let write_face = |out: &mut String, fi: usize| {
        out.push('f');
        for (k, &v) in mesh.faces[fi].iter().enumerate() {
            match &mesh.face_uvs {
                Some(fu) => write!(out, " {}/{}", v + 1, fu[fi][k] + 1).unwrap(),
                None => write!(out, " {}", v + 1).unwrap(),
            }
        }
        out.push('\n');
    };
    match partition {
        None => (0..mesh.faces.len()).for_each(|fi| write_face(&mut out, fi)),
        Some(p) => {
            let mut by_island = vec![Vec::new(); p.island_count];
            for (fi, &isl) in p.island_of_face.iter().enumerate() {
                by_island[isl].push(fi);
            }
            for (isl, faces) in by_island.iter().enumerate() {
                writeln!(out, "g island_{isl}").unwrap();
                faces.iter().for_each(|&fi| write_face(&mut out, fi));
            }
        }
    }
    Ok(out)
}

pub fn write_obj(mesh: &Mesh, partition: Option<&IslandPartition>, path: impl AsRef<Path>) -> Result<()> {
    let text = to_obj_string(mesh, partition)?;
    fs::write(path, text)?;
    Ok(())
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

type Edge = (usize, usize);

/// Connected components of faces linked by edges that are shared both in 3D
/// and in uv index space.
pub fn uv_islands(mesh: &Mesh) -> Result<IslandPartition> {
    let face_uvs = mesh.face_uvs.as_ref().ok_or(Error::MissingUv)?;
    // (position edge, uv edge) with both endpoints in matching order.
    let mut seen: HashMap<(Edge, Edge), usize> = HashMap::new();
    let mut uf = UnionFind::new(mesh.faces.len());
    for (fi, (face, fuv)) in mesh.faces.iter().zip(face_uvs).enumerate() {
        let n = face.len();
        for k in 0..n {
            let (a, b) = (face[k], face[(k + 1) % n]);
            let (ta, tb) = (fuv[k], fuv[(k + 1) % n]);
            let key = if a < b { ((a, b), (ta, tb)) } else { ((b, a), (tb, ta)) };
            match seen.get(&key) {
                Some(&other) => uf.union(other, fi),
                None => {
                    seen.insert(key, fi);
                }
            }
        }
    }
    let roots: Vec<usize> = (0..mesh.faces.len()).map(|f| uf.find(f)).collect();
    Ok(IslandPartition::from_labels(&roots))
}

/// Corpus filter thresholds.
pub const MIN_FACES: usize = 500;
pub const MAX_FACES: usize = 16_000;
pub const MAX_VERTEX_FACE_RATIO: f64 = 1.0;
pub const MIN_ISLANDS: usize = 10;
pub const MAX_ISLANDS: usize = 300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    Manifold,
    FaceCount,
    VertexFaceRatio,
    IslandCount,
}

impl RejectReason {
    pub fn as_str(self) -> &'static str {
        match self {
            RejectReason::Manifold => "manifold",
            RejectReason::FaceCount => "face_count",
            RejectReason::VertexFaceRatio => "vertex_face_ratio",
            RejectReason::IslandCount => "island_count",
        }
    }
}

impl std::fmt::Display for RejectReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Maps each position index to the index of its first bit-identical position.
pub fn merge_duplicate_positions(positions: &[[f64; 3]]) -> (Vec<usize>, usize) {
    let mut first: HashMap<[u64; 3], usize> = HashMap::new();
    let mut remap = Vec::with_capacity(positions.len());
    for p in positions {
        let key = p.map(f64::to_bits);
        let next = first.len();
        remap.push(*first.entry(key).or_insert(next));
    }
    (remap, first.len())
}

/// Edge-manifold test after duplicate-position merging: every edge bounds at most two faces.
pub fn is_edge_manifold(mesh: &Mesh) -> bool {
    let (remap, _) = merge_duplicate_positions(&mesh.positions);
    let mut edge_faces: HashMap<(usize, usize), u32> = HashMap::new();
    for face in &mesh.faces {
        let n = face.len();
        for k in 0..n {
            let (a, b) = (remap[face[k]], remap[face[(k + 1) % n]]);
            if a == b {
                continue;
            }
            *edge_faces.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    edge_faces.values().all(|&c| c <= 2)
}

/// Applies the dataset filtering rules; returns the first failing rule.
pub fn corpus_filter(mesh: &Mesh, partition: Option<&IslandPartition>) -> Result<(), RejectReason> {
    if !is_edge_manifold(mesh) {
        return Err(RejectReason::Manifold);
    }
    let faces = mesh.faces.len();
    if !(MIN_FACES..=MAX_FACES).contains(&faces) {
        return Err(RejectReason::FaceCount);
    }
    let (remap, _) = merge_duplicate_positions(&mesh.positions);
    let mut used: Vec<usize> = mesh.faces.iter().flatten().map(|&v| remap[v]).collect();
    used.sort_unstable();
    used.dedup();
    if used.len() as f64 / faces as f64 > MAX_VERTEX_FACE_RATIO {
        return Err(RejectReason::VertexFaceRatio);
    }
    if let Some(p) = partition {
        if !(MIN_ISLANDS..=MAX_ISLANDS).contains(&p.island_count) {
            return Err(RejectReason::IslandCount);
        }
    }
    Ok(())
}
