// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Hyperbolicity constants of finite graphs.

use alloc::vec;
use alloc::vec::Vec;

use super::geodesic::geodesics_with_row;
use super::{GeodesicSegment, Graph, Vertex};
use crate::{Error, HalfInt, Result};

/// Which hyperbolicity constant feeds the downstream constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaEstimator {
    /// Exact four-point constant.
    FourPoint,
    /// Rips constant over geodesic triangles, at most `cap` geodesics per
    /// pair of corners.
    Rips { cap: usize },
}

impl DeltaEstimator {
    /// Evaluates the estimator. Trees are 0-hyperbolic for both constants,
    /// which is answered without a scan.
    pub fn estimate(self, g: &Graph) -> Result<HalfInt> {
        if g.is_tree() {
            return Ok(HalfInt::ZERO);
        }
        match self {
            DeltaEstimator::FourPoint => Ok(delta_four_point(g)),
            DeltaEstimator::Rips { cap } => delta_rips(g, cap),
        }
    }
}

/// Four-point hyperbolicity constant: the maximum over quadruples of
/// `min((x|z)_w, (y|z)_w) - (x|y)_w`.
///
/// For a quadruple with pair sums `S1 >= S2 >= S3` the largest ordered
/// defect is `(S1 - S2) / 2`, so unordered quadruples suffice.
pub fn delta_four_point(g: &Graph) -> HalfInt {
    let n = g.vertex_count();
    let d = g.distance_matrix();
    let at = |i: usize, j: usize| d[i * n + j] as i64;
    let mut best = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            let dij = at(i, j);
            for k in j + 1..n {
                let (dik, djk) = (at(i, k), at(j, k));
                for l in k + 1..n {
                    let s1 = dij + at(k, l);
                    let s2 = dik + at(j, l);
                    let s3 = at(i, l) + djk;
                    let (hi, mid) = top_two(s1, s2, s3);
                    best = best.max(hi - mid);
                }
            }
        }
    }
    HalfInt::from_twice(best)
}

fn top_two(a: i64, b: i64, c: i64) -> (i64, i64) {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if c >= hi {
        (c, hi)
    } else if c >= lo {
        (hi, c)
    } else {
        (hi, lo)
    }
}

/// Rips constant of the graph viewed as a 1-complex with unit edges, over
/// geodesic triangles with corners at vertices: the largest distance from a
/// point of one side to the union of the other two sides.
///
/// Sides are drawn from [`enumerate_geodesics`](super::enumerate_geodesics)
/// with at most `cap` geodesics per pair, so a small cap gives a lower
/// bound; the value is exact once `cap` exceeds every geodesic count.
///
/// On an edge `(u, v)` of a side not lying on the union `K` of the other
/// sides the farthest point is at distance `(1 + d(u,K) + d(v,K)) / 2`,
/// which also dominates the vertices of the side.
pub fn delta_rips(g: &Graph, cap: usize) -> Result<HalfInt> {
    if cap == 0 {
        return Err(Error::InvalidParameter("geodesic cap must be at least 1"));
    }
    let n = g.vertex_count();
    let m = g.edge_count();
    let edge_id = EdgeIndex::new(g);
    let rows: Vec<Vec<u32>> = (0..n).map(|v| g.dist_row(v)).collect();
    // canonical lists for u <= v; the reverse direction reuses them
    let mut lists: Vec<Vec<GeodesicSegment>> = Vec::with_capacity(n * (n + 1) / 2);
    for u in 0..n {
        for v in u..n {
            lists.push(geodesics_with_row(g, u, &rows[v], cap));
        }
    }
    let list = |u: Vertex, v: Vertex| {
        let (a, b) = if u <= v { (u, v) } else { (v, u) };
        &lists[a * n - a * (a + 1) / 2 + b]
    };
    // edges of each side list, deduplicated
    let mut side_edges: Vec<Vec<usize>> = Vec::with_capacity(lists.len());
    let mut stamp = vec![usize::MAX; m];
    for (idx, geodesics) in lists.iter().enumerate() {
        let mut edges = Vec::new();
        for geo in geodesics {
            for w in geo.vertices().windows(2) {
                let e = edge_id.get(g, w[0], w[1]);
                if stamp[e] != idx {
                    stamp[e] = idx;
                    edges.push(e);
                }
            }
        }
        side_edges.push(edges);
    }
    let side = |u: Vertex, v: Vertex| {
        let (a, b) = if u <= v { (u, v) } else { (v, u) };
        &side_edges[a * n - a * (a + 1) / 2 + b]
    };

    let mut best = 0i64;
    // profiles[y][e]: distinct (d(u_e, g), d(v_e, g)) over x-y geodesics g
    // avoiding e
    let mut profiles: Vec<Vec<Vec<(u32, u32)>>> = vec![vec![Vec::new(); m]; n];
    for x in 0..n {
        for (y, per_edge) in profiles.iter_mut().enumerate() {
            per_edge.iter_mut().for_each(Vec::clear);
            for geo in list(x, y) {
                let dg = g.multi_source_bfs(geo.vertices().iter().copied());
                for (e, &(u, v)) in edge_id.endpoints.iter().enumerate() {
                    if geo.contains_edge(u, v) {
                        continue;
                    }
                    let pair = (dg[u], dg[v]);
                    if !per_edge[e].contains(&pair) {
                        per_edge[e].push(pair);
                    }
                }
            }
        }
        for y in 0..n {
            for z in 0..n {
                for &e in side(y, z) {
                    for &(a1, b1) in &profiles[y][e] {
                        for &(a2, b2) in &profiles[z][e] {
                            let twice = 1 + a1.min(a2) as i64 + b1.min(b2) as i64;
                            best = best.max(twice);
                        }
                    }
                }
            }
        }
    }
    Ok(HalfInt::from_twice(best))
}

struct EdgeIndex {
    /// Edge id of every adjacency slot.
    slot_edge: Vec<usize>,
    endpoints: Vec<(Vertex, Vertex)>,
}

impl EdgeIndex {
    fn new(g: &Graph) -> Self {
        let mut slot_edge = vec![usize::MAX; g.targets.len()];
        let mut endpoints = Vec::with_capacity(g.edge_count());
        for u in 0..g.vertex_count() {
            for slot in g.offsets[u]..g.offsets[u + 1] {
                let v = g.targets[slot];
                if u < v {
                    slot_edge[slot] = endpoints.len();
                    endpoints.push((u, v));
                }
            }
        }
        for u in 0..g.vertex_count() {
            for slot in g.offsets[u]..g.offsets[u + 1] {
                let v = g.targets[slot];
                if u > v {
                    slot_edge[slot] =
                        slot_edge[g.offsets[v] + g.neighbors(v).binary_search(&u).unwrap()];
                }
            }
        }
        EdgeIndex {
            slot_edge,
            endpoints,
        }
    }

    fn get(&self, g: &Graph, u: Vertex, v: Vertex) -> usize {
        let pos = g
            .neighbors(u)
            .binary_search(&v)
            .expect("vertices are adjacent");
        self.slot_edge[g.offsets[u] + pos]
    }
}
