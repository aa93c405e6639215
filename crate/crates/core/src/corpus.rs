//! Synthetic meshes: grids, ribbons, icospheres, tori and voxel solids.
//!
//! All generators produce consistently wound faces (counter-clockwise seen
//! from outside, or from +z for planar meshes).

use std::collections::HashMap;
use std::f64::consts::TAU;

use crate::mesh_io::Mesh;

fn grid_vertices(nx: usize, ny: usize) -> Vec<[f64; 3]> {
    let mut positions = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            positions.push([i as f64, j as f64, 0.0]);
        }
    }
    positions
}

fn grid_cells(nx: usize, ny: usize) -> impl Iterator<Item = [usize; 4]> {
    let idx = move |i: usize, j: usize| j * (nx + 1) + i;
    (0..ny).flat_map(move |j| (0..nx).map(move |i| [idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)]))
}

/// `nx × ny` planar quad grid in the z = 0 plane.
pub fn quad_grid(nx: usize, ny: usize) -> Mesh {
    let faces = grid_cells(nx, ny).map(|c| c.to_vec()).collect();
    Mesh::new(grid_vertices(nx, ny), faces).expect("valid grid")
}

/// Triangulated grid, each cell split along its (i+1, j)–(i, j+1) diagonal.
pub fn tri_grid(nx: usize, ny: usize) -> Mesh {
    let faces = grid_cells(nx, ny)
        .flat_map(|[a, b, c, d]| [vec![a, b, d], vec![b, c, d]])
        .collect();
    Mesh::new(grid_vertices(nx, ny), faces).expect("valid grid")
}

/// Triangulated grid split along the other diagonal, (i, j)–(i+1, j+1).
pub fn tri_grid_alt(nx: usize, ny: usize) -> Mesh {
    let faces = grid_cells(nx, ny)
        .flat_map(|[a, b, c, d]| [vec![a, b, c], vec![a, c, d]])
        .collect();
    Mesh::new(grid_vertices(nx, ny), faces).expect("valid grid")
}

/// One-cell-wide vertical ribbon of `n` cells (2n triangles).
pub fn tri_ribbon(n: usize) -> Mesh {
    tri_grid(1, n)
}

/// One-cell-wide vertical ribbon of `n` quads.
pub fn quad_ribbon(n: usize) -> Mesh {
    quad_grid(1, n)
}

pub fn icosphere(subdivisions: usize) -> Mesh {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut positions: Vec<[f64; 3]> = vec![
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ];
    let unit = |p: [f64; 3]| {
        let l = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        p.map(|c| c / l)
    };
    positions.iter_mut().for_each(|p| *p = unit(*p));
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, positions: &mut Vec<[f64; 3]>| {
            *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                let (pa, pb) = (positions[a], positions[b]);
                positions.push(unit([0, 1, 2].map(|k| (pa[k] + pb[k]) / 2.0)));
                positions.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for [a, b, c] in faces {
            let ab = midpoint(a, b, &mut positions);
            let bc = midpoint(b, c, &mut positions);
            let ca = midpoint(c, a, &mut positions);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    Mesh::new(positions, faces.into_iter().map(|f| f.to_vec()).collect()).expect("valid icosphere")
}

fn torus_vertices(major: usize, minor: usize) -> Vec<[f64; 3]> {
    let (big_r, small_r) = (1.0, 0.4);
    let mut positions = Vec::with_capacity(major * minor);
    for i in 0..major {
        let u = TAU * i as f64 / major as f64;
        for j in 0..minor {
            let v = TAU * j as f64 / minor as f64;
            let ring = big_r + small_r * v.cos();
            positions.push([ring * u.cos(), ring * u.sin(), small_r * v.sin()]);
        }
    }
    positions
}

fn torus_cells(major: usize, minor: usize) -> impl Iterator<Item = [usize; 4]> {
    let idx = move |i: usize, j: usize| (i % major) * minor + (j % minor);
    (0..major).flat_map(move |i| (0..minor).map(move |j| [idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)]))
}

pub fn quad_torus(major: usize, minor: usize) -> Mesh {
    let faces = torus_cells(major, minor).map(|c| c.to_vec()).collect();
    Mesh::new(torus_vertices(major, minor), faces).expect("valid torus")
}

pub fn tri_torus(major: usize, minor: usize) -> Mesh {
    let faces = torus_cells(major, minor)
        .flat_map(|[a, b, c, d]| [vec![a, b, d], vec![b, c, d]])
        .collect();
    Mesh::new(torus_vertices(major, minor), faces).expect("valid torus")
}

/// Splits every quad `(a, b, c, d)` into `(a, b, d)` and `(b, c, d)`.
pub fn triangulate(mesh: &Mesh) -> Mesh {
    let split = |f: &Vec<usize>| -> Vec<Vec<usize>> {
        match f.as_slice() {
            &[a, b, c, d] => vec![vec![a, b, d], vec![b, c, d]],
            _ => vec![f.clone()],
        }
    };
    Mesh {
        positions: mesh.positions.clone(),
        faces: mesh.faces.iter().flat_map(split).collect(),
        uv_coords: mesh.uv_coords.clone(),
        face_uvs: mesh.face_uvs.as_ref().map(|fu| fu.iter().flat_map(split).collect()),
    }
}

/// Boundary quads of a union of unit voxels, each voxel face subdivided `n × n`.
///
/// Every outward face direction gets its own uv chart; with `charts` off all
/// faces share uv indices with their positions (one chart over the surface).
fn voxel_surface(cells: &[[i64; 3]], n: usize, charts: bool) -> Mesh {
    let n = n as i64;
    let filled: std::collections::HashSet<[i64; 3]> = cells
        .iter()
        .flat_map(|c| {
            (0..n).flat_map(move |a| {
                (0..n).flat_map(move |b| (0..n).map(move |d| [c[0] * n + a, c[1] * n + b, c[2] * n + d]))
            })
        })
        .collect();
    let mut sorted: Vec<[i64; 3]> = filled.iter().copied().collect();
    sorted.sort_unstable();

    let mut vertex_of: HashMap<[i64; 3], usize> = HashMap::new();
    let mut uv_of: HashMap<(usize, usize), usize> = HashMap::new();
    let mut positions = Vec::new();
    let mut faces = Vec::new();
    let mut face_uvs = Vec::new();
    for cell in &sorted {
        for axis in 0..3 {
            for positive in [true, false] {
                let mut neighbor = *cell;
                neighbor[axis] += if positive { 1 } else { -1 };
                if filled.contains(&neighbor) {
                    continue;
                }
                let (u, w) = ((axis + 1) % 3, (axis + 2) % 3);
                let mut base = *cell;
                if positive {
                    base[axis] += 1;
                }
                let offset = |du: i64, dw: i64| {
                    let mut p = base;
                    p[u] += du;
                    p[w] += dw;
                    p
                };
                let corners = if positive {
                    [offset(0, 0), offset(1, 0), offset(1, 1), offset(0, 1)]
                } else {
                    [offset(0, 0), offset(0, 1), offset(1, 1), offset(1, 0)]
                };
                let direction = axis * 2 + usize::from(positive);
                let mut face = Vec::with_capacity(4);
                let mut fuv = Vec::with_capacity(4);
                for c in corners {
                    let v = *vertex_of.entry(c).or_insert_with(|| {
                        positions.push(c.map(|x| x as f64 / n as f64));
                        positions.len() - 1
                    });
                    face.push(v);
                    let chart = if charts { direction } else { 0 };
                    let next = uv_of.len();
                    fuv.push(*uv_of.entry((chart, v)).or_insert(next));
                }
                faces.push(face);
                face_uvs.push(fuv);
            }
        }
    }
    let mut uv_coords = vec![[0.0; 2]; uv_of.len()];
    for (&(chart, v), &t) in &uv_of {
        let p = positions[v];
        let axis = chart / 2;
        uv_coords[t] = [p[(axis + 1) % 3], p[(axis + 2) % 3]];
    }
    Mesh::new(positions, faces)
        .and_then(|m| m.with_uvs(uv_coords, face_uvs))
        .expect("valid voxel surface")
}

/// Unit cube surface of `6 n²` quads, without uv data.
pub fn quad_box(n: usize) -> Mesh {
    let mut m = voxel_surface(&[[0, 0, 0]], n, false);
    m.uv_coords = None;
    m.face_uvs = None;
    m
}

/// Unit cube with uvs: one chart per side when `separate_charts`, else a single shared chart.
pub fn box_with_charts(n: usize, separate_charts: bool) -> Mesh {
    voxel_surface(&[[0, 0, 0]], n, separate_charts)
}

/// L-shaped non-convex solid made of three unit voxels, quad surface with one uv chart per side.
pub fn quad_l_solid(n: usize) -> Mesh {
    voxel_surface(&[[0, 0, 0], [1, 0, 0], [0, 1, 0]], n, true)
}

pub fn tri_l_solid(n: usize) -> Mesh {
    triangulate(&quad_l_solid(n))
}

/// Three triangles sharing one edge: the smallest non-manifold configuration.
pub fn fin() -> Mesh {
    Mesh::new(
        vec![
            [0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [1.0, 0.5, 0.0],
            [-1.0, 0.5, 0.0],
            [0.0, 0.5, 1.0],
        ],
        vec![vec![0, 2, 1], vec![0, 1, 3], vec![0, 4, 1]],
    )
    .expect("valid fin")
}

/// Named triangle meshes covering grids, ribbons, spheres, tori and a non-convex solid.
pub fn triangle_corpus() -> Vec<(String, Mesh)> {
    let mut out = Vec::new();
    for n in [2, 4, 8, 16, 32] {
        out.push((format!("tri_grid_{n}x{n}"), tri_grid(n, n)));
        out.push((format!("tri_grid_alt_{n}x{n}"), tri_grid_alt(n, n)));
    }
    for n in [5, 20, 50, 100] {
        out.push((format!("tri_ribbon_{n}"), tri_ribbon(n)));
    }
    out.push(("tri_ribbon_wide_20".into(), tri_grid(20, 1)));
    for s in 1..=3 {
        out.push((format!("icosphere_{s}"), icosphere(s)));
    }
    for (a, b) in [(12, 8), (24, 12), (36, 18)] {
        out.push((format!("tri_torus_{a}x{b}"), tri_torus(a, b)));
    }
    for n in 1..=3 {
        out.push((format!("tri_l_solid_{n}"), tri_l_solid(n)));
    }
    out.push(("tri_box_3".into(), triangulate(&box_with_charts(3, true))));
    out
}

/// Named quad meshes: grids, ribbons, tori and voxel solids.
pub fn quad_corpus() -> Vec<(String, Mesh)> {
    let mut out = Vec::new();
    for n in [2, 4, 8, 16, 32] {
        out.push((format!("quad_grid_{n}x{n}"), quad_grid(n, n)));
    }
    for n in [5, 20, 50] {
        out.push((format!("quad_ribbon_{n}"), quad_ribbon(n)));
    }
    out.push(("quad_ribbon_wide_20".into(), quad_grid(20, 1)));
    for (a, b) in [(12, 8), (24, 12), (36, 18)] {
        out.push((format!("quad_torus_{a}x{b}"), quad_torus(a, b)));
    }
    for n in 1..=3 {
        out.push((format!("quad_l_solid_{n}"), quad_l_solid(n)));
    }
    out.push(("quad_box_4".into(), box_with_charts(4, true)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signed_volume(m: &Mesh) -> f64 {
        triangulate(m)
            .faces
            .iter()
            .map(|f| {
                let [a, b, c] = [m.positions[f[0]], m.positions[f[1]], m.positions[f[2]]];
                a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
            })
            .sum::<f64>()
            / 6.0
    }

    #[test]
    fn closed_solids_wind_outward() {
        assert!((signed_volume(&quad_box(2)) - 1.0).abs() < 1e-12);
        assert!((signed_volume(&quad_l_solid(2)) - 3.0).abs() < 1e-12);
        assert!(signed_volume(&icosphere(2)) > 0.0);
    }

    #[test]
    fn face_counts() {
        assert_eq!(tri_grid(3, 2).faces.len(), 12);
        assert_eq!(icosphere(3).faces.len(), 1280);
        assert_eq!(quad_l_solid(1).faces.len(), 14);
        assert_eq!(quad_torus(12, 8).faces.len(), 96);
        assert!(triangle_corpus().len() >= 25);
    }
}
