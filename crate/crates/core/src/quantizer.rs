//! Unit-cube normalization and hierarchical grid codes.
//!
//! Positions are snapped to a 512³ grid. Each axis value `g` splits into three
//! digits `(g / 128, (g % 128) / 16, g % 16)` which are interleaved x-major into
//! `c1 ∈ [0, 64)`, `c2 ∈ [0, 512)` and `c3 ∈ [0, 4096)` (4³, 8³ and 16³ cells).

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::mesh_io::{IslandPartition, Mesh};
use crate::{Error, Result};

pub const GRID_SIZE: u16 = 512;
const LEVEL1: u16 = 4;
const LEVEL2: u16 = 8;
const LEVEL3: u16 = 16;
/// Tolerance on normalized coordinates accepted by [`to_grid`].
pub const GRID_EPS: f64 = 1e-9;

/// Maps normalized coordinates back to model space: `p = n * scale + origin`.
///
/// `origin` is the minimum corner of the source bounding box and `scale` is
/// its largest axis extent (model units per normalized unit).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Transform {
    pub origin: [f64; 3],
    pub scale: f64,
}

impl Transform {
    pub const IDENTITY: Transform = Transform {
        origin: [0.0; 3],
        scale: 1.0,
    };

    pub fn to_model(&self, n: [f64; 3]) -> [f64; 3] {
        [0, 1, 2].map(|k| n[k] * self.scale + self.origin[k])
    }

    pub fn to_normalized(&self, p: [f64; 3]) -> [f64; 3] {
        [0, 1, 2].map(|k| (p[k] - self.origin[k]) / self.scale)
    }
}

impl Default for Transform {
    fn default() -> Self {
        Self::IDENTITY
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GridCoord {
    pub x: u16,
    pub y: u16,
    pub z: u16,
}

impl GridCoord {
    pub fn new(x: u16, y: u16, z: u16) -> Option<Self> {
        (x < GRID_SIZE && y < GRID_SIZE && z < GRID_SIZE).then_some(Self { x, y, z })
    }

    pub fn as_array(self) -> [u16; 3] {
        [self.x, self.y, self.z]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct HierCode {
    pub c1: u16,
    pub c2: u16,
    pub c3: u16,
}

impl HierCode {
    pub fn new(c1: u16, c2: u16, c3: u16) -> Option<Self> {
        (c1 < 64 && c2 < 512 && c3 < 4096).then_some(Self { c1, c2, c3 })
    }
}

/// Rescales positions into `[0, 1]³`, preserving aspect ratio.
pub fn normalize(mesh: &Mesh) -> Result<(Mesh, Transform)> {
    if mesh.positions.is_empty() {
        return Err(Error::EmptyMesh);
    }
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in &mesh.positions {
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let extent = (0..3).map(|k| hi[k] - lo[k]).fold(0.0, f64::max);
    if extent.is_nan() || extent <= 0.0 {
        return Err(Error::DegenerateExtent);
    }
    let transform = Transform {
        origin: lo,
        scale: extent,
    };
    let mut out = mesh.clone();
    for p in &mut out.positions {
        // clamp guards the last ulp of (hi - lo) / extent
        *p = transform.to_normalized(*p).map(|c| c.clamp(0.0, 1.0));
    }
    Ok((out, transform))
}

pub fn to_grid(p: [f64; 3]) -> Result<GridCoord> {
    let mut g = [0u16; 3];
    for k in 0..3 {
        let c = p[k];
        if !(-GRID_EPS..=1.0 + GRID_EPS).contains(&c) {
            return Err(Error::CoordinateOutOfRange(c));
        }
        let cell = (c.max(0.0) * GRID_SIZE as f64).floor() as i64;
        g[k] = cell.clamp(0, GRID_SIZE as i64 - 1) as u16;
    }
    Ok(GridCoord {
        x: g[0],
        y: g[1],
        z: g[2],
    })
}

fn split_axis(v: u16) -> [u16; 3] {
    [v / 128, (v % 128) / 16, v % 16]
}

pub fn encode_hier(g: GridCoord) -> HierCode {
    let [x1, x2, x3] = split_axis(g.x);
    let [y1, y2, y3] = split_axis(g.y);
    let [z1, z2, z3] = split_axis(g.z);
    HierCode {
        c1: (x1 * LEVEL1 + y1) * LEVEL1 + z1,
        c2: (x2 * LEVEL2 + y2) * LEVEL2 + z2,
        c3: (x3 * LEVEL3 + y3) * LEVEL3 + z3,
    }
}

pub fn decode_hier(h: HierCode) -> GridCoord {
    let unpack = |c: u16, k: u16| [c / (k * k), (c / k) % k, c % k];
    let a1 = unpack(h.c1, LEVEL1);
    let a2 = unpack(h.c2, LEVEL2);
    let a3 = unpack(h.c3, LEVEL3);
    let axis = |i: usize| a1[i] * 128 + a2[i] * 16 + a3[i];
    GridCoord {
        x: axis(0),
        y: axis(1),
        z: axis(2),
    }
}

/// Center of cell `g` in model space.
pub fn dequantize(g: GridCoord, t: &Transform) -> [f64; 3] {
    t.to_model(g.as_array().map(|c| (c as f64 + 0.5) / GRID_SIZE as f64))
}

/// Mesh after grid snapping and vertex deduplication.
///
/// `vertex_keys` may hold equal coordinates only when the copies are used by
/// disjoint sets of islands (decoded meshes keep islands separable);
/// [`quantize_mesh`] always produces globally unique keys.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedMesh {
    pub vertex_keys: Vec<GridCoord>,
    pub faces: Vec<Vec<usize>>,
    pub island_of_face: Option<Vec<usize>>,
    pub transform: Transform,
}

impl QuantizedMesh {
    pub fn degree(&self) -> Option<usize> {
        self.faces.first().map(Vec::len)
    }

    pub fn island_count(&self) -> usize {
        match &self.island_of_face {
            Some(l) => l.iter().max().map_or(0, |m| m + 1),
            None => usize::from(!self.faces.is_empty()),
        }
    }

    pub fn island_of(&self, face: usize) -> usize {
        self.island_of_face.as_ref().map_or(0, |l| l[face])
    }

    pub fn partition(&self) -> IslandPartition {
        match &self.island_of_face {
            Some(l) => IslandPartition {
                island_of_face: l.clone(),
                island_count: self.island_count(),
            },
            None => IslandPartition::single_island(self.faces.len()),
        }
    }

    /// Cell-center positions in model space.
    pub fn to_mesh(&self) -> Mesh {
        Mesh {
            positions: self.vertex_keys.iter().map(|&g| dequantize(g, &self.transform)).collect(),
            faces: self.faces.clone(),
            uv_coords: None,
            face_uvs: None,
        }
    }

    /// Checks the structural invariants, returning a description of the first violation.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let mut face_keys: Vec<([usize; 4], usize)> = Vec::with_capacity(self.faces.len());
        for (fi, face) in self.faces.iter().enumerate() {
            if face.len() != 3 && face.len() != 4 {
                return Err(format!("face {fi} has degree {}", face.len()));
            }
            if let Some(&bad) = face.iter().find(|&&v| v >= self.vertex_keys.len()) {
                return Err(format!("face {fi} references missing vertex {bad}"));
            }
            let mut coords = [GridCoord::default(); 4];
            face.iter().enumerate().for_each(|(k, &v)| coords[k] = self.vertex_keys[v]);
            let coords = &mut coords[..face.len()];
            coords.sort_unstable();
            if coords.windows(2).any(|w| w[0] == w[1]) {
                return Err(format!("face {fi} is degenerate"));
            }
            let mut key = [usize::MAX; 4];
            key[..face.len()].copy_from_slice(face);
            key.sort_unstable();
            face_keys.push((key, fi));
        }
        face_keys.sort_unstable();
        if let Some(w) = face_keys.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(format!("face {} duplicates face {}", w[1].1, w[0].1));
        }
        if let Some(labels) = &self.island_of_face {
            if labels.len() != self.faces.len() {
                return Err("island label count differs from face count".into());
            }
            let count = self.island_count();
            let mut present = vec![false; count];
            labels.iter().for_each(|&l| present[l] = true);
            if present.iter().any(|p| !p) {
                return Err("island labels are not dense".into());
            }
        }
        // Equal keys must belong to disjoint island sets.
        let mut uses: Vec<(GridCoord, usize, usize)> = Vec::new();
        for (fi, face) in self.faces.iter().enumerate() {
            uses.extend(face.iter().map(|&v| (self.vertex_keys[v], self.island_of(fi), v)));
        }
        uses.sort_unstable();
        uses.dedup();
        if let Some(w) = uses.windows(2).find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(format!("vertices {} and {} share a key within island {}", w[0].2, w[1].2, w[0].1));
        }
        Ok(())
    }
}

/// Normalizes, snaps and deduplicates a mesh.
pub fn quantize_mesh(mesh: &Mesh, partition: Option<&IslandPartition>) -> Result<QuantizedMesh> {
    let (_, transform) = normalize(mesh)?;
    quantize_with(mesh, partition, transform)
}

/// Quantizes with a caller-supplied transform instead of the mesh's own bounding box.
pub fn quantize_with(mesh: &Mesh, partition: Option<&IslandPartition>, transform: Transform) -> Result<QuantizedMesh> {
    mesh.validate()?;
    if mesh.faces.is_empty() {
        return Err(Error::EmptyMesh);
    }
    if let Some(p) = partition {
        if p.island_of_face.len() != mesh.faces.len() {
            return Err(Error::InvalidMesh("partition length differs from face count".into()));
        }
    }
    let grid: Vec<GridCoord> = mesh
        .positions
        .iter()
        .map(|&p| to_grid(transform.to_normalized(p)))
        .collect::<Result<_>>()?;

    let mut key_index: HashMap<GridCoord, usize> = HashMap::new();
    let mut vertex_keys = Vec::new();
    let mut faces = Vec::new();
    let mut labels = Vec::new();
    let mut seen = HashSet::new();
    for (fi, face) in mesh.faces.iter().enumerate() {
        let coords: Vec<GridCoord> = face.iter().map(|&v| grid[v]).collect();
        let mut set = coords.clone();
        set.sort_unstable();
        set.dedup();
        if set.len() != face.len() || !seen.insert(set) {
            continue;
        }
        let keyed = coords
            .into_iter()
            .map(|g| {
                *key_index.entry(g).or_insert_with(|| {
                    vertex_keys.push(g);
                    vertex_keys.len() - 1
                })
            })
            .collect();
        faces.push(keyed);
        labels.push(partition.map_or(0, |p| p.island_of_face[fi]));
    }
    if faces.is_empty() {
        return Err(Error::AllFacesDegenerate);
    }
    let island_of_face = partition.map(|_| IslandPartition::from_labels(&labels).island_of_face);
    Ok(QuantizedMesh {
        vertex_keys,
        faces,
        island_of_face,
        transform,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unit_cube_is_identity() {
        let (_, t) = normalize(&corpus::quad_box(1)).unwrap();
        assert_eq!(t, Transform::IDENTITY);
    }

    #[test]
    fn centered_cube_scales_by_quarter() {
        let mut cube = corpus::quad_box(2);
        for p in &mut cube.positions {
            *p = p.map(|c| c * 4.0 - 2.0);
        }
        let (n, t) = normalize(&cube).unwrap();
        // oracle: recompute the bounding box directly
        let lo = cube.positions.iter().fold(f64::INFINITY, |m, p| m.min(p[0]).min(p[1]).min(p[2]));
        let hi = cube.positions.iter().fold(f64::NEG_INFINITY, |m, p| m.max(p[0]).max(p[1]).max(p[2]));
        assert_eq!((lo, hi), (-2.0, 2.0));
        assert_eq!(1.0 / t.scale, 0.25);
        assert!(n.positions.iter().flatten().all(|&c| (0.0..=1.0).contains(&c)));
    }

    #[test]
    fn degenerate_extent() {
        let m = Mesh::new(vec![[1.0, 2.0, 3.0]; 3], vec![vec![0, 1, 2]]).unwrap();
        assert!(matches!(normalize(&m), Err(Error::DegenerateExtent)));
    }

    #[test]
    fn grid_snapping() {
        assert_eq!(to_grid([0.0; 3]).unwrap().as_array(), [0, 0, 0]);
        assert_eq!(to_grid([1.0; 3]).unwrap().as_array(), [511, 511, 511]);
        assert_eq!(to_grid([0.5, 0.25, 0.999]).unwrap().as_array(), [256, 128, 511]);
        assert_eq!(to_grid([-1e-10, 1.0 + 1e-10, 0.0]).unwrap().as_array(), [0, 511, 0]);
        assert!(to_grid([-1e-6, 0.0, 0.0]).is_err());
        assert!(to_grid([0.0, 1.01, 0.0]).is_err());
        assert!(to_grid([f64::NAN, 0.0, 0.0]).is_err());
    }

    #[test]
    fn hier_code_examples() {
        let g = |x, y, z| GridCoord::new(x, y, z).unwrap();
        assert_eq!(encode_hier(g(0, 0, 0)), HierCode { c1: 0, c2: 0, c3: 0 });
        assert_eq!(encode_hier(g(511, 511, 511)), HierCode { c1: 63, c2: 511, c3: 4095 });
        assert_eq!(encode_hier(g(128, 0, 0)), HierCode { c1: 16, c2: 0, c3: 0 });
        assert_eq!(decode_hier(HierCode { c1: 63, c2: 511, c3: 4095 }), g(511, 511, 511));
        assert_eq!(decode_hier(HierCode { c1: 0, c2: 0, c3: 0 }), g(0, 0, 0));
    }

    #[test]
    fn per_axis_bijection_is_exhaustive() {
        for v in 0..GRID_SIZE {
            for g in [GridCoord { x: v, y: 0, z: 0 }, GridCoord { x: 0, y: v, z: 0 }, GridCoord { x: 0, y: 0, z: v }] {
                let h = encode_hier(g);
                assert!(HierCode::new(h.c1, h.c2, h.c3).is_some());
                assert_eq!(decode_hier(h), g);
            }
        }
    }

    #[test]
    fn random_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let g = GridCoord::new(rng.gen_range(0..512), rng.gen_range(0..512), rng.gen_range(0..512)).unwrap();
            assert_eq!(decode_hier(encode_hier(g)), g);
        }
    }

    #[test]
    fn dequantize_cell_centers() {
        let g0 = GridCoord::new(0, 0, 0).unwrap();
        assert_eq!(dequantize(g0, &Transform::IDENTITY), [0.5 / 512.0; 3]);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let doubled = Transform { origin: [0.0; 3], scale: 2.0 };
        for _ in 0..1000 {
            let g = GridCoord::new(rng.gen_range(0..512), rng.gen_range(0..512), rng.gen_range(0..512)).unwrap();
            let p = dequantize(g, &Transform::IDENTITY);
            assert_eq!(to_grid(p).unwrap(), g);
            assert_eq!(dequantize(g, &doubled), p.map(|c| c * 2.0));
        }
    }

    #[test]
    fn cell_center_mesh_keeps_every_face() {
        let q = quantize_mesh(&corpus::tri_torus(12, 8), None).unwrap();
        let again = quantize_with(&q.to_mesh(), None, q.transform).unwrap();
        assert_eq!(again.faces.len(), q.faces.len());
        assert_eq!(again, q);
    }

    #[test]
    fn coincident_triangles_deduplicated() {
        let m = Mesh::new(
            vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            vec![vec![0, 1, 2], vec![1, 2, 0]],
        )
        .unwrap();
        let q = quantize_mesh(&m, None).unwrap();
        assert_eq!(q.faces.len(), 1);
    }

    #[test]
    fn sliver_dropped_and_islands_redensified() {
        // Big triangle plus a sliver whose extent is below one cell (1/512 after normalization).
        let m = Mesh::new(
            vec![
                [0.0, 0.0, 0.0],
                [1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [0.5, 0.5, 0.5],
                [0.5 + 1e-4, 0.5, 0.5],
                [0.5, 0.5 + 1e-4, 0.5],
                [1.0, 1.0, 1.0],
            ],
            vec![vec![0, 1, 2], vec![3, 4, 5], vec![1, 2, 6]],
        )
        .unwrap();
        let (n, _) = normalize(&m).unwrap();
        let cells: HashSet<GridCoord> = [3, 4, 5].iter().map(|&v| to_grid(n.positions[v]).unwrap()).collect();
        assert_eq!(cells.len(), 1);
        let p = IslandPartition::from_labels(&[0, 1, 2]);
        let q = quantize_mesh(&m, Some(&p)).unwrap();
        assert_eq!(q.faces.len(), 2);
        assert_eq!(q.island_of_face, Some(vec![0, 1]));
        q.validate().unwrap();
    }

    #[test]
    fn all_degenerate_is_error() {
        let m = Mesh::new(
            vec![[0.0, 0.0, 0.0], [1e-5, 0.0, 0.0], [0.0, 1e-5, 0.0], [1.0, 1.0, 1.0]],
            vec![vec![0, 1, 2]],
        )
        .unwrap();
        assert!(matches!(quantize_mesh(&m, None), Err(Error::AllFacesDegenerate)));
    }
}
