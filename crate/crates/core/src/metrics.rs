//! Surface sampling and geometric comparison metrics.
//!
//! Conventions:
//! - CD averages the two directed mean nearest-neighbor distances.
//! - HD is the larger of the two directed maxima.
//! - NC averages `|n_p · n_nn(p)|` over both directions. The absolute value
//!   makes it insensitive to winding, so values are not directly comparable
//!   with signed-dot variants.
//! - F1 uses a distance threshold (default 0.003 in normalized units).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::kdtree::KdTree;
use crate::mesh_io::Mesh;
use crate::tokenizer::CompressionStats;
use crate::{Error, Result};

pub const DEFAULT_SAMPLES: usize = 100_000;
pub const DEFAULT_TAU: f64 = 0.003;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SampleSet {
    pub points: Vec<[f64; 3]>,
    pub normals: Vec<[f64; 3]>,
}

impl SampleSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Area-weighted uniform samples with face normals. Quads are split along (v0, v2).
pub fn sample_surface(mesh: &Mesh, n: usize, seed: u64) -> Result<SampleSet> {
    let mut tris = Vec::new();
    let mut cumulative = Vec::new();
    let mut total = 0.0;
    for face in &mesh.faces {
        let corners: Vec<[f64; 3]> = face.iter().map(|&v| mesh.positions[v]).collect();
        for k in 1..corners.len() - 1 {
            let (a, b, c) = (corners[0], corners[k], corners[k + 1]);
            let nrm = cross(sub(b, a), sub(c, a));
            let len = dot(nrm, nrm).sqrt();
            if len.is_nan() || len <= 0.0 {
                continue;
            }
            total += len / 2.0;
            cumulative.push(total);
            tris.push((a, b, c, nrm.map(|x| x / len)));
        }
    }
    if tris.is_empty() {
        return Err(Error::ZeroArea);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SampleSet {
        points: Vec::with_capacity(n),
        normals: Vec::with_capacity(n),
    };
    for _ in 0..n {
        let r = rng.gen::<f64>() * total;
        let t = cumulative.partition_point(|&c| c <= r).min(tris.len() - 1);
        let (a, b, c, nrm) = tris[t];
        let (u, v): (f64, f64) = (rng.gen(), rng.gen());
        let su = u.sqrt();
        let (wa, wb, wc) = (1.0 - su, su * (1.0 - v), su * v);
        out.points.push([0, 1, 2].map(|k| wa * a[k] + wb * b[k] + wc * c[k]));
        out.normals.push(nrm);
    }
    Ok(out)
}

/// Nearest neighbor in `to` for every point of `from`: `(index, distance)`.
pub fn nearest_neighbors(from: &SampleSet, to: &SampleSet) -> Result<Vec<(usize, f64)>> {
    if from.is_empty() || to.is_empty() {
        return Err(Error::EmptySampleSet);
    }
    let tree = KdTree::new(&to.points);
    Ok(from
        .points
        .par_iter()
        .map(|&p| {
            let (i, d2) = tree.nearest(p).expect("non-empty tree");
            (i, d2.sqrt())
        })
        .collect())
}

fn mean(values: impl Iterator<Item = f64>, n: usize) -> f64 {
    values.sum::<f64>() / n as f64
}

/// Directed nearest-neighbor results in both directions.
pub struct Correspondence {
    pub a_to_b: Vec<(usize, f64)>,
    pub b_to_a: Vec<(usize, f64)>,
}

impl Correspondence {
    pub fn new(a: &SampleSet, b: &SampleSet) -> Result<Self> {
        Ok(Self {
            a_to_b: nearest_neighbors(a, b)?,
            b_to_a: nearest_neighbors(b, a)?,
        })
    }

    pub fn chamfer_hausdorff(&self) -> (f64, f64) {
        let dir = |nn: &[(usize, f64)]| {
            let m = mean(nn.iter().map(|x| x.1), nn.len());
            let h = nn.iter().map(|x| x.1).fold(0.0, f64::max);
            (m, h)
        };
        let (ma, ha) = dir(&self.a_to_b);
        let (mb, hb) = dir(&self.b_to_a);
        ((ma + mb) / 2.0, ha.max(hb))
    }

    pub fn normal_consistency(&self, a: &SampleSet, b: &SampleSet) -> f64 {
        let agreement = |na: [f64; 3], nb: [f64; 3]| {
            // identical or opposite unit normals agree exactly
            if na == nb || na == nb.map(|x| -x) {
                1.0
            } else {
                dot(na, nb).abs().min(1.0)
            }
        };
        let ab = mean(self.a_to_b.iter().enumerate().map(|(i, &(j, _))| agreement(a.normals[i], b.normals[j])), a.len());
        let ba = mean(self.b_to_a.iter().enumerate().map(|(i, &(j, _))| agreement(b.normals[i], a.normals[j])), b.len());
        (ab + ba) / 2.0
    }

    pub fn f_score(&self, tau: f64) -> f64 {
        let within = |nn: &[(usize, f64)]| nn.iter().filter(|x| x.1 <= tau).count() as f64 / nn.len() as f64;
        let (p, r) = (within(&self.a_to_b), within(&self.b_to_a));
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }
}

pub fn chamfer_hausdorff(a: &SampleSet, b: &SampleSet) -> Result<(f64, f64)> {
    Ok(Correspondence::new(a, b)?.chamfer_hausdorff())
}

pub fn normal_consistency(a: &SampleSet, b: &SampleSet) -> Result<f64> {
    Ok(Correspondence::new(a, b)?.normal_consistency(a, b))
}

pub fn f_score(a: &SampleSet, b: &SampleSet, tau: f64) -> Result<f64> {
    Ok(Correspondence::new(a, b)?.f_score(tau))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeometryMetrics {
    pub nc: f64,
    pub cd: f64,
    pub hd: f64,
    pub f1: f64,
}

/// Samples both meshes with the same seed and computes all four metrics.
pub fn compare_meshes(a: &Mesh, b: &Mesh, samples: usize, seed: u64, tau: f64) -> Result<GeometryMetrics> {
    let sa = sample_surface(a, samples, seed)?;
    let sb = sample_surface(b, samples, seed)?;
    let c = Correspondence::new(&sa, &sb)?;
    let (cd, hd) = c.chamfer_hausdorff();
    Ok(GeometryMetrics {
        nc: c.normal_consistency(&sa, &sb),
        cd,
        hd,
        f1: c.f_score(tau),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub nc: f64,
    pub cd: f64,
    pub hd: f64,
    pub f1: f64,
    pub comp_rate: f64,
    pub transitions: usize,
    pub strip_count: usize,
    pub token_length: usize,
}

impl MetricReport {
    pub fn new(geometry: GeometryMetrics, stats: &CompressionStats, strip_count: usize) -> Self {
        Self {
            nc: geometry.nc,
            cd: geometry.cd,
            hd: geometry.hd,
            f1: geometry.f1,
            comp_rate: stats.comp_rate,
            transitions: stats.transitions,
            strip_count,
            token_length: stats.token_length,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn set(points: &[[f64; 3]], normal: [f64; 3]) -> SampleSet {
        SampleSet {
            points: points.to_vec(),
            normals: vec![normal; points.len()],
        }
    }

    #[test]
    fn square_split_is_area_weighted() {
        let square = corpus::tri_grid(1, 1);
        let s = sample_surface(&square, 10_000, 5).unwrap();
        // triangle (a, b, d) is the half below the x + y = 1 diagonal
        let lower = s.points.iter().filter(|p| p[0] + p[1] < 1.0).count() as f64;
        assert!((lower - 5000.0).abs() <= 3.0 * 2500f64.sqrt(), "{lower}");
        assert!(s.points.iter().all(|p| p[2].abs() <= 1e-9));
        assert!(s.normals.iter().all(|n| (dot(*n, *n).sqrt() - 1.0).abs() < 1e-6));
        assert_eq!(sample_surface(&square, 100, 9).unwrap(), sample_surface(&square, 100, 9).unwrap());
    }

    #[test]
    fn zero_area_rejected() {
        let m = Mesh::new(vec![[0.0; 3], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0]], vec![vec![0, 1, 2]]).unwrap();
        assert!(matches!(sample_surface(&m, 10, 0), Err(Error::ZeroArea)));
    }

    #[test]
    fn singleton_and_identity() {
        let a = set(&[[0.0, 0.0, 0.0]], [0.0, 0.0, 1.0]);
        let b = set(&[[3.0, 4.0, 0.0]], [0.0, 0.0, -1.0]);
        assert_eq!(chamfer_hausdorff(&a, &b).unwrap(), (5.0, 5.0));
        assert_eq!(normal_consistency(&a, &b).unwrap(), 1.0);
        assert_eq!(chamfer_hausdorff(&a, &a).unwrap(), (0.0, 0.0));
        assert_eq!(f_score(&a, &a, 1e-9).unwrap(), 1.0);
        assert_eq!(f_score(&a, &b, 1.0).unwrap(), 0.0);
        assert!(matches!(chamfer_hausdorff(&a, &SampleSet::default()), Err(Error::EmptySampleSet)));
    }

    #[test]
    fn f1_two_thirds() {
        // a: two points, one near b. b: one point near a[0].
        let a = set(&[[0.0; 3], [10.0, 0.0, 0.0]], [0.0, 0.0, 1.0]);
        let b = set(&[[0.001, 0.0, 0.0]], [0.0, 0.0, 1.0]);
        let f = f_score(&a, &b, 0.003).unwrap();
        assert!((f - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_patches_nc() {
        // Patch A (normal +z) and patch B (normal +x) placed far apart, each
        // set holding both patches so most points pair with themselves.
        let nz = [0.0, 0.0, 1.0];
        let nx = [1.0, 0.0, 0.0];
        let a = SampleSet {
            points: vec![[0.0; 3], [1.0, 0.0, 0.0], [100.0, 0.0, 0.0]],
            normals: vec![nz, nz, nx],
        };
        let b = SampleSet {
            points: vec![[0.0; 3], [100.0, 0.0, 0.0], [101.0, 0.0, 0.0]],
            normals: vec![nz, nx, nz],
        };
        // brute-force oracle
        let oracle = |p: &SampleSet, q: &SampleSet| {
            p.points
                .iter()
                .zip(&p.normals)
                .map(|(x, n)| {
                    let j = (0..q.len())
                        .min_by(|&i, &k| crate::kdtree::dist2(*x, q.points[i]).total_cmp(&crate::kdtree::dist2(*x, q.points[k])))
                        .unwrap();
                    dot(*n, q.normals[j]).abs()
                })
                .sum::<f64>()
                / p.len() as f64
        };
        let expected = (oracle(&a, &b) + oracle(&b, &a)) / 2.0;
        // a: 1, 1, 1 -> 1 ; b: 1, 1, 0 -> 2/3
        assert!((expected - 5.0 / 6.0).abs() < 1e-15);
        assert_eq!(normal_consistency(&a, &b).unwrap(), expected);
    }

    #[test]
    fn self_comparison_is_exact() {
        let m = corpus::icosphere(2);
        let g = compare_meshes(&m, &m, 2000, 1, DEFAULT_TAU).unwrap();
        assert_eq!(g, GeometryMetrics { nc: 1.0, cd: 0.0, hd: 0.0, f1: 1.0 });
    }
}
