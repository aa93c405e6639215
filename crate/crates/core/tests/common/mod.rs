//! Test-only oracles, independent of the library's strip and token code paths.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use striptok::quantizer::{encode_hier, GridCoord, QuantizedMesh};
use striptok::stripper::{StripSet, UpAxis};

/// Greedy fan-patch partition: take the lowest unvisited face, pick the vertex
/// of that face with the most unvisited incident faces as the patch center and
/// claim up to `cap` unvisited faces around it.
pub fn greedy_patch_count(q: &QuantizedMesh, cap: usize) -> usize {
    let key = |v: usize| UpAxis::Y.sort_key(q.vertex_keys[v]);
    let mut faces_of: HashMap<usize, Vec<usize>> = HashMap::new();
    for (fi, f) in q.faces.iter().enumerate() {
        for &v in f {
            faces_of.entry(v).or_default().push(fi);
        }
    }
    let mut face_key: Vec<_> = q
        .faces
        .iter()
        .enumerate()
        .map(|(fi, f)| {
            let mut k: Vec<_> = f.iter().map(|&v| key(v)).collect();
            k.sort_unstable();
            (k, fi)
        })
        .collect();
    face_key.sort();
    let mut visited = vec![false; q.faces.len()];
    let mut patches = 0;
    for (_, seed) in face_key {
        if visited[seed] {
            continue;
        }
        let open = |v: usize, visited: &[bool]| faces_of[&v].iter().filter(|&&f| !visited[f]).count();
        let center = *q.faces[seed]
            .iter()
            .max_by_key(|&&v| (open(v, &visited), std::cmp::Reverse(key(v))))
            .unwrap();
        let mut claimed = 0;
        visited[seed] = true;
        claimed += 1;
        for &f in &faces_of[&center] {
            if claimed == cap {
                break;
            }
            if !visited[f] {
                visited[f] = true;
                claimed += 1;
            }
        }
        patches += 1;
    }
    patches
}

/// Token count of a strip set by direct simulation of the prefix-sharing rules.
pub fn brute_token_count(s: &StripSet) -> usize {
    let mut total = 0;
    for strip in &s.strips {
        let codes: Vec<_> = strip.keys.iter().map(|&k| encode_hier(s.vertex_keys[k])).collect();
        total += 3;
        for w in codes.windows(2) {
            total += if w[0].c1 != w[1].c1 {
                3
            } else if w[0].c2 != w[1].c2 {
                2
            } else {
                1
            };
        }
    }
    total
}

/// Face multiset as sorted coordinate sets.
pub fn face_sets(q: &QuantizedMesh) -> Vec<Vec<GridCoord>> {
    let mut out: Vec<Vec<GridCoord>> = q
        .faces
        .iter()
        .map(|f| {
            let mut s: Vec<GridCoord> = f.iter().map(|&v| q.vertex_keys[v]).collect();
            s.sort_unstable();
            s
        })
        .collect();
    out.sort();
    out
}

pub fn distinct_keys(q: &QuantizedMesh) -> HashSet<GridCoord> {
    q.vertex_keys.iter().copied().collect()
}
