//! Greedy strip extraction.
//!
//! Faces are consumed island by island. Each strip starts at the lowest
//! unvisited face of the current island and grows across its frontier edge
//! (the last two strip vertices) until it reaches a boundary or visited face.
//! Triangles append one vertex per step, quads append a pair.

use std::collections::HashMap;

use serde::Serialize;

use crate::quantizer::{GridCoord, QuantizedMesh, Transform};
use crate::{Error, Result};

/// Vertices appended per face: 1 for triangles, 2 for quads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Stride {
    One,
    Two,
}

impl Stride {
    pub fn value(self) -> usize {
        match self {
            Stride::One => 1,
            Stride::Two => 2,
        }
    }

    pub fn face_degree(self) -> usize {
        self.value() + 2
    }

    pub fn from_value(v: usize) -> Option<Self> {
        match v {
            1 => Some(Stride::One),
            2 => Some(Stride::Two),
            _ => None,
        }
    }

    pub fn for_degree(degree: usize) -> Option<Self> {
        Self::from_value(degree.checked_sub(2)?)
    }
}

/// Axis treated as vertical when ordering vertices "bottom to top".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum UpAxis {
    X,
    #[default]
    Y,
    Z,
}

impl UpAxis {
    /// Lexicographic comparison key: the up axis first, then the other two in cyclic order.
    pub fn sort_key(self, g: GridCoord) -> (u16, u16, u16) {
        match self {
            UpAxis::X => (g.x, g.y, g.z),
            UpAxis::Y => (g.y, g.z, g.x),
            UpAxis::Z => (g.z, g.x, g.y),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Strip {
    /// Indices into [`StripSet::vertex_keys`].
    pub keys: Vec<usize>,
    pub island: usize,
    pub stride: Stride,
}

impl Strip {
    pub fn faces(&self) -> Vec<Vec<usize>> {
        strip_faces(&self.keys, self.stride)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StripSet {
    pub strips: Vec<Strip>,
    pub vertex_keys: Vec<GridCoord>,
    pub islands_in_order: Vec<usize>,
    pub transform: Transform,
    pub stride: Stride,
}

impl StripSet {
    pub fn face_count(&self) -> usize {
        self.strips.iter().map(|s| strip_faces(&s.keys, s.stride).len()).sum()
    }

    pub fn vertex_total(&self) -> usize {
        self.strips.iter().map(|s| s.keys.len()).sum()
    }
}

/// Rank of every vertex under the up-axis-major lexicographic order.
fn vertex_ranks(q: &QuantizedMesh, up: UpAxis) -> Vec<usize> {
    let order = vertex_key_order(q, up);
    let mut ranks = vec![0; order.len()];
    for (r, &v) in order.iter().enumerate() {
        ranks[v] = r;
    }
    ranks
}

/// Vertex indices sorted ascending by `(up, next, next)` coordinates.
pub fn vertex_key_order(q: &QuantizedMesh, up: UpAxis) -> Vec<usize> {
    let mut order: Vec<usize> = (0..q.vertex_keys.len()).collect();
    order.sort_by_key(|&v| (up.sort_key(q.vertex_keys[v]), v));
    order
}

fn face_sort_keys(q: &QuantizedMesh, ranks: &[usize]) -> Vec<Vec<usize>> {
    q.faces
        .iter()
        .map(|f| {
            let mut k: Vec<usize> = f.iter().map(|&v| ranks[v]).collect();
            k.sort_unstable();
            k
        })
        .collect()
}

fn global_seed_order(q: &QuantizedMesh, ranks: &[usize]) -> Vec<usize> {
    let keys = face_sort_keys(q, ranks);
    let mut order: Vec<usize> = (0..q.faces.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]).then(a.cmp(&b)));
    order
}

/// Faces of `island` ordered by their sorted vertex ranks.
pub fn seed_order(q: &QuantizedMesh, island: usize, up: UpAxis) -> Vec<usize> {
    let ranks = vertex_ranks(q, up);
    global_seed_order(q, &ranks)
        .into_iter()
        .filter(|&f| q.island_of(f) == island)
        .collect()
}

fn is_cyclic_rotation(a: &[usize], b: &[usize]) -> bool {
    let n = b.len();
    a.len() == n && (0..n).any(|s| (0..n).all(|k| a[k] == b[(s + k) % n]))
}

struct Walker<'a> {
    q: &'a QuantizedMesh,
    edge_faces: HashMap<(usize, usize), Vec<usize>>,
    seed_rank: Vec<usize>,
    visited: Vec<bool>,
}

impl Walker<'_> {
    fn next_face(&self, a: usize, b: usize, island: usize) -> Option<usize> {
        self.edge_faces
            .get(&(a.min(b), a.max(b)))?
            .iter()
            .copied()
            .filter(|&f| !self.visited[f] && self.q.island_of(f) == island)
            .min_by_key(|&f| self.seed_rank[f])
    }
}

/// Neighbor of `v` in the cyclic face other than `not`.
fn other_neighbor(face: &[usize], v: usize, not: usize) -> usize {
    let n = face.len();
    let p = face.iter().position(|&x| x == v).expect("vertex on face");
    let prev = face[(p + n - 1) % n];
    if prev == not {
        face[(p + 1) % n]
    } else {
        prev
    }
}

/// Decomposes a mesh into strips with the default vertical axis (+y).
pub fn extract_strips(q: &QuantizedMesh, stride: Stride) -> Result<StripSet> {
    extract_strips_with(q, stride, UpAxis::default())
}

pub fn extract_strips_with(q: &QuantizedMesh, stride: Stride, up: UpAxis) -> Result<StripSet> {
    if let Some(f) = q.faces.iter().find(|f| f.len() != stride.face_degree()) {
        return Err(Error::StrideMismatch {
            stride: stride.value(),
            expected: stride.face_degree(),
            found: f.len(),
        });
    }
    let ranks = vertex_ranks(q, up);
    let order = global_seed_order(q, &ranks);
    let mut seed_rank = vec![0; q.faces.len()];
    for (r, &f) in order.iter().enumerate() {
        seed_rank[f] = r;
    }

    let island_count = q.island_count();
    let mut island_faces: Vec<Vec<usize>> = vec![Vec::new(); island_count];
    for &f in &order {
        island_faces[q.island_of(f)].push(f);
    }
    // An island's first seed face starts with its minimum vertex, so ordering
    // by that face orders islands bottom to top with ties broken deterministically.
    let mut islands_in_order: Vec<usize> = (0..island_count).filter(|&i| !island_faces[i].is_empty()).collect();
    islands_in_order.sort_by_key(|&i| seed_rank[island_faces[i][0]]);

    let mut edge_faces: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (fi, face) in q.faces.iter().enumerate() {
        let n = face.len();
        for k in 0..n {
            let (a, b) = (face[k], face[(k + 1) % n]);
            edge_faces.entry((a.min(b), a.max(b))).or_default().push(fi);
        }
    }
    let mut walker = Walker {
        q,
        edge_faces,
        seed_rank,
        visited: vec![false; q.faces.len()],
    };

    let mut strips = Vec::new();
    for &island in &islands_in_order {
        for &seed in &island_faces[island] {
            if walker.visited[seed] {
                continue;
            }
            walker.visited[seed] = true;
            let face = &q.faces[seed];
            let mut keys = match stride {
                Stride::One => {
                    let mut v = face.clone();
                    v.sort_by_key(|&x| ranks[x]);
                    // Keep the two largest keys on the frontier but orient the
                    // seed so the decoded first triangle keeps the source winding.
                    if !is_cyclic_rotation(&v, face) {
                        v.swap(1, 2);
                    }
                    v
                }
                Stride::Two => {
                    let p = (0..4).min_by_key(|&k| ranks[face[k]]).unwrap();
                    let at = |k: usize| face[(p + k) % 4];
                    vec![at(0), at(1), at(3), at(2)]
                }
            };
            loop {
                let (a, b) = (keys[keys.len() - 2], keys[keys.len() - 1]);
                let Some(next) = walker.next_face(a, b, island) else { break };
                walker.visited[next] = true;
                let nf = &q.faces[next];
                match stride {
                    Stride::One => {
                        let c = *nf.iter().find(|&&v| v != a && v != b).expect("triangle has a third vertex");
                        keys.push(c);
                    }
                    Stride::Two => {
                        let y = other_neighbor(nf, a, b);
                        let x = other_neighbor(nf, b, a);
                        keys.extend([y, x]);
                    }
                }
            }
            strips.push(Strip { keys, island, stride });
        }
    }

    Ok(StripSet {
        strips,
        vertex_keys: q.vertex_keys.clone(),
        islands_in_order,
        transform: q.transform,
        stride,
    })
}

/// Faces implied by a strip.
///
/// Stride 1 yields `(v_i, v_{i+1}, v_{i+2})`, with every second triangle
/// reordered to `(v_i, v_{i+2}, v_{i+1})` so orientation stays consistent.
/// Stride 2 yields quads `(v_2i, v_2i+1, v_2i+3, v_2i+2)` and, when one vertex
/// is left unpaired, a closing triangle over the last three vertices.
pub fn strip_faces<T: Copy>(keys: &[T], stride: Stride) -> Vec<Vec<T>> {
    let m = keys.len();
    if m < 3 {
        return Vec::new();
    }
    match stride {
        Stride::One => (0..m - 2)
            .map(|i| {
                if i % 2 == 0 {
                    vec![keys[i], keys[i + 1], keys[i + 2]]
                } else {
                    vec![keys[i], keys[i + 2], keys[i + 1]]
                }
            })
            .collect(),
        Stride::Two => {
            let mut faces: Vec<Vec<T>> = (0..)
                .map(|k| 2 * k)
                .take_while(|&s| s + 3 < m)
                .map(|s| vec![keys[s], keys[s + 1], keys[s + 3], keys[s + 2]])
                .collect();
            if m % 2 == 1 {
                faces.push(vec![keys[m - 3], keys[m - 2], keys[m - 1]]);
            }
            faces
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::quantizer::quantize_mesh;

    fn gc(x: u16, y: u16, z: u16) -> GridCoord {
        GridCoord::new(x, y, z).unwrap()
    }

    #[test]
    fn key_order_is_y_major() {
        let up = UpAxis::Y;
        assert!(up.sort_key(gc(0, 0, 0)) < up.sort_key(gc(0, 0, 1)));
        assert!(up.sort_key(gc(0, 5, 9)) > up.sort_key(gc(1, 0, 0)));
        // (x, y, z) = (9, 0, 5) vs (0, 1, 0): y decides
        assert!(up.sort_key(gc(9, 0, 5)) < up.sort_key(gc(0, 1, 0)));
    }

    #[test]
    fn key_order_is_a_permutation() {
        let q = quantize_mesh(&corpus::icosphere(1), None).unwrap();
        let mut order = vertex_key_order(&q, UpAxis::Y);
        let sorted_ok = order
            .windows(2)
            .all(|w| UpAxis::Y.sort_key(q.vertex_keys[w[0]]) < UpAxis::Y.sort_key(q.vertex_keys[w[1]]));
        assert!(sorted_ok);
        order.sort_unstable();
        assert_eq!(order, (0..q.vertex_keys.len()).collect::<Vec<_>>());
    }

    #[test]
    fn seed_order_tie_breaks_on_second_vertex() {
        // Two triangles sharing the lowest vertex (0,0,0).
        let q = QuantizedMesh {
            vertex_keys: vec![gc(0, 0, 0), gc(0, 5, 0), gc(0, 5, 5), gc(4, 1, 0)],
            faces: vec![vec![0, 1, 2], vec![0, 3, 2]],
            island_of_face: None,
            transform: Transform::IDENTITY,
        };
        assert_eq!(seed_order(&q, 0, UpAxis::Y), vec![1, 0]);
        let single = QuantizedMesh { faces: vec![vec![0, 1, 2]], ..q };
        assert_eq!(seed_order(&single, 0, UpAxis::Y), vec![0]);
    }

    #[test]
    fn two_triangles_one_strip() {
        let q = quantize_mesh(&corpus::tri_grid(1, 1), None).unwrap();
        let s = extract_strips(&q, Stride::One).unwrap();
        assert_eq!(s.strips.len(), 1);
        assert_eq!(s.strips[0].keys.len(), 4);
    }

    #[test]
    fn stride_mismatch() {
        let q = quantize_mesh(&corpus::tri_grid(1, 1), None).unwrap();
        assert!(matches!(
            extract_strips(&q, Stride::Two),
            Err(Error::StrideMismatch { stride: 2, expected: 4, found: 3 })
        ));
    }

    #[test]
    fn strip_face_formulas() {
        assert_eq!(strip_faces(&['a', 'b', 'c', 'd'], Stride::One), vec![vec!['a', 'b', 'c'], vec!['b', 'd', 'c']]);
        assert_eq!(strip_faces(&[0, 1, 2, 3], Stride::Two), vec![vec![0, 1, 3, 2]]);
        assert_eq!(strip_faces(&[0, 1, 2, 3, 4], Stride::Two), vec![vec![0, 1, 3, 2], vec![2, 3, 4]]);
        assert_eq!(
            strip_faces(&[0, 1, 2, 3, 4, 5], Stride::Two),
            vec![vec![0, 1, 3, 2], vec![2, 3, 5, 4]]
        );
        assert_eq!(strip_faces(&[0, 1, 2, 3, 4, 5], Stride::One).len(), 4);
        assert!(strip_faces(&[0, 1], Stride::One).is_empty());
        assert_eq!(strip_faces(&[0, 1, 2], Stride::Two), vec![vec![0, 1, 2]]);
    }
}
