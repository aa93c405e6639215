//! Exact nearest-neighbor search over 3D points.

/// Static 3D kd-tree. Queries return the nearest point, ties resolved to the lowest index.
pub struct KdTree<'a> {
    points: &'a [[f64; 3]],
    /// Point indices, arranged as an implicit balanced tree (median at the middle of each range).
    order: Vec<usize>,
    axes: Vec<u8>,
}

const LEAF: usize = 8;

impl<'a> KdTree<'a> {
    pub fn new(points: &'a [[f64; 3]]) -> Self {
        let mut order: Vec<usize> = (0..points.len()).collect();
        let mut axes = vec![0u8; points.len()];
        build(points, &mut order, &mut axes, 0);
        Self { points, order, axes }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of and squared distance to the nearest point.
    pub fn nearest(&self, q: [f64; 3]) -> Option<(usize, f64)> {
        if self.points.is_empty() {
            return None;
        }
        let mut best = (usize::MAX, f64::INFINITY);
        self.search(0, self.order.len(), q, &mut best);
        Some(best)
    }

    fn consider(&self, idx: usize, q: [f64; 3], best: &mut (usize, f64)) {
        let d = dist2(self.points[idx], q);
        if d < best.1 || (d == best.1 && idx < best.0) {
            *best = (idx, d);
        }
    }

    fn search(&self, lo: usize, hi: usize, q: [f64; 3], best: &mut (usize, f64)) {
        if hi - lo <= LEAF {
            for &idx in &self.order[lo..hi] {
                self.consider(idx, q, best);
            }
            return;
        }
        let mid = lo + (hi - lo) / 2;
        let idx = self.order[mid];
        let axis = self.axes[mid] as usize;
        let diff = q[axis] - self.points[idx][axis];
        let (near, far) = if diff <= 0.0 { ((lo, mid), (mid + 1, hi)) } else { ((mid + 1, hi), (lo, mid)) };
        self.search(near.0, near.1, q, best);
        self.consider(idx, q, best);
        // `<=` keeps equal-distance candidates reachable for the index tie-break.
        if diff * diff <= best.1 {
            self.search(far.0, far.1, q, best);
        }
    }
}

fn build(points: &[[f64; 3]], order: &mut [usize], axes: &mut [u8], depth: usize) {
    if order.len() <= LEAF {
        return;
    }
    // split along the widest axis of this range
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for &i in order.iter() {
        for k in 0..3 {
            lo[k] = lo[k].min(points[i][k]);
            hi[k] = hi[k].max(points[i][k]);
        }
    }
    let axis = (0..3).max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b]))).unwrap_or(depth % 3);
    let mid = order.len() / 2;
    order.select_nth_unstable_by(mid, |&a, &b| points[a][axis].total_cmp(&points[b][axis]));
    axes[mid] = axis as u8;
    let (left, right) = order.split_at_mut(mid);
    let (left_axes, right_axes) = axes.split_at_mut(mid);
    build(points, left, left_axes, depth + 1);
    build(points, &mut right[1..], &mut right_axes[1..], depth + 1);
}

pub fn dist2(a: [f64; 3], b: [f64; 3]) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    d[0] * d[0] + d[1] * d[1] + d[2] * d[2]
}
