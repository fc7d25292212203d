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

use alloc::vec::Vec;

use super::{Graph, Vertex};
use crate::{Error, Result};

/// A geodesic path in a graph, listed vertex by vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeodesicSegment {
    vertices: Vec<Vertex>,
}

impl GeodesicSegment {
    /// Checks adjacency and geodesicity before accepting `vertices`.
    pub fn new(g: &Graph, vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidParameter(
                "a geodesic has at least one vertex",
            ));
        }
        for &v in &vertices {
            g.check_vertex(v)?;
        }
        let segment = GeodesicSegment { vertices };
        if segment.is_geodesic(g) {
            Ok(segment)
        } else {
            Err(Error::InvalidParameter("vertex list is not a geodesic"))
        }
    }

    pub(crate) fn from_trusted(vertices: Vec<Vertex>) -> Self {
        debug_assert!(!vertices.is_empty());
        GeodesicSegment { vertices }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn first(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn last(&self) -> Vertex {
        self.vertices[self.vertices.len() - 1]
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() == 1
    }

    /// Vertex at parameter `t`, if `t <= len()`.
    pub fn at(&self, t: usize) -> Option<Vertex> {
        self.vertices.get(t).copied()
    }

    pub fn contains_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.vertices
            .windows(2)
            .any(|w| (w[0] == u && w[1] == v) || (w[0] == v && w[1] == u))
    }

    pub fn is_geodesic(&self, g: &Graph) -> bool {
        let (a, b) = (self.first(), self.last());
        let total = g.dist(a, b);
        total as usize == self.len()
            && self.vertices.windows(2).all(|w| g.is_adjacent(w[0], w[1]))
            && self
                .vertices
                .iter()
                .all(|&v| g.dist(a, v) + g.dist(v, b) == total)
    }

    /// Smallest distance from `v` to a vertex of the segment.
    pub fn distance_from(&self, g: &Graph, v: Vertex) -> u32 {
        self.vertices
            .iter()
            .map(|&w| g.dist(v, w))
            .min()
            .unwrap_or(u32::MAX)
    }
}

/// Geodesics from `u` to `v` in lexicographic order of their vertex lists,
/// at most `cap` of them. The list is complete when fewer than `cap` exist.
///
/// A vertex `w` lies on some `u`-`v` geodesic iff
/// `d(u,w) + d(w,v) = d(u,v)`, so the walk only steps to neighbours one unit
/// closer to `v`.
pub fn enumerate_geodesics(
    g: &Graph,
    u: Vertex,
    v: Vertex,
    cap: usize,
) -> Result<Vec<GeodesicSegment>> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if cap == 0 {
        return Err(Error::InvalidParameter("geodesic cap must be at least 1"));
    }
    let to_v = g.dist_row(v);
    Ok(geodesics_with_row(g, u, &to_v, cap))
}

pub(crate) fn geodesics_with_row(
    g: &Graph,
    u: Vertex,
    to_v: &[u32],
    cap: usize,
) -> Vec<GeodesicSegment> {
    let mut out = Vec::new();
    let mut stack: Vec<(Vertex, usize)> = alloc::vec![(u, 0)];
    let mut current: Vec<Vertex> = alloc::vec![u];
    while let Some(top) = stack.last_mut() {
        let w = top.0;
        if to_v[w] == 0 {
            out.push(GeodesicSegment::from_trusted(current.clone()));
            if out.len() == cap {
                break;
            }
            stack.pop();
            current.pop();
            continue;
        }
        let neighbors = g.neighbors(w);
        let mut found = None;
        while top.1 < neighbors.len() {
            let candidate = neighbors[top.1];
            top.1 += 1;
            if to_v[candidate] + 1 == to_v[w] {
                found = Some(candidate);
                break;
            }
        }
        match found {
            Some(c) => {
                stack.push((c, 0));
                current.push(c);
            }
            None => {
                stack.pop();
                current.pop();
            }
        }
    }
    out
}

/// Lexicographically first geodesic from `u` to the vertex whose distance
/// row is `to_v`.
pub(crate) fn first_geodesic(g: &Graph, u: Vertex, to_v: &[u32]) -> GeodesicSegment {
    let mut vertices = alloc::vec![u];
    let mut w = u;
    while to_v[w] > 0 {
        w = g
            .neighbors(w)
            .iter()
            .copied()
            .find(|&c| to_v[c] + 1 == to_v[w])
            .expect("connected graph has a closer neighbour");
        vertices.push(w);
    }
    GeodesicSegment::from_trusted(vertices)
}

/// Best synchronisation of two geodesics with a common far end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FellowTravel {
    /// Parameter shift `T` with `|T| <= d(a(0), b(0))`.
    pub shift: i64,
    /// `max_t d(a(t), b(t + T))` over the compared window.
    pub gap: u32,
    /// Number of compared parameters.
    pub span: usize,
}

/// Finds the shift `T`, `|T| <= D = d(a(0), b(0))`, minimising
/// `max d(a(t), b(t+T))` over `t >= D` where both points exist. Returns
/// `None` when no shift leaves a nonempty window.
pub fn fellow_travel(g: &Graph, a: &GeodesicSegment, b: &GeodesicSegment) -> Option<FellowTravel> {
    let start_gap = g.dist(a.first(), b.first()) as i64;
    let mut best: Option<FellowTravel> = None;
    for shift in -start_gap..=start_gap {
        let mut gap = 0;
        let mut span = 0;
        let mut t = start_gap;
        while t <= a.len() as i64 && t + shift <= b.len() as i64 {
            if t + shift >= 0 {
                gap = gap.max(g.dist(a.vertices[t as usize], b.vertices[(t + shift) as usize]));
                span += 1;
            }
            t += 1;
        }
        if span == 0 {
            continue;
        }
        let candidate = FellowTravel { shift, gap, span };
        let better = match best {
            None => true,
            Some(b) => {
                (gap, shift.unsigned_abs(), shift) < (b.gap, b.shift.unsigned_abs(), b.shift)
            }
        };
        if better {
            best = Some(candidate);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, grid, regular_tree};

    #[test]
    fn tree_geodesics_are_unique() {
        let g = regular_tree(3, 4).unwrap();
        for (u, v) in [(0, 30), (5, 40), (17, 17), (44, 2)] {
            let list = enumerate_geodesics(&g, u, v, 10).unwrap();
            assert_eq!(list.len(), 1);
            assert!(list[0].is_geodesic(&g));
        }
    }

    #[test]
    fn antipodal_pair_in_square() {
        let g = cycle(4).unwrap();
        let far = (0..4).find(|&v| g.dist(0, v) == 2).unwrap();
        assert_eq!(enumerate_geodesics(&g, 0, far, 100).unwrap().len(), 2);
    }

    #[test]
    fn cap_truncates_in_order() {
        let g = grid(4, 4).unwrap();
        let corner = (0..16).max_by_key(|&v| g.depth(v)).unwrap();
        let far = (0..16).max_by_key(|&v| g.dist(corner, v)).unwrap();
        let all = enumerate_geodesics(&g, corner, far, 1000).unwrap();
        assert_eq!(all.len(), 20);
        let some = enumerate_geodesics(&g, corner, far, 7).unwrap();
        assert_eq!(&all[..7], &some[..]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all[0], first_geodesic(&g, corner, &g.dist_row(far)));
    }

    #[test]
    fn zero_cap_is_an_error() {
        let g = cycle(5).unwrap();
        assert!(enumerate_geodesics(&g, 0, 2, 0).is_err());
    }

    #[test]
    fn rejects_non_geodesic_lists() {
        let g = cycle(6).unwrap();
        assert!(GeodesicSegment::new(&g, alloc::vec![0, 1]).is_ok());
        let n0 = g.neighbors(0).to_vec();
        assert!(GeodesicSegment::new(&g, alloc::vec![n0[0], 0, n0[1]]).is_ok());
        assert!(GeodesicSegment::new(&g, alloc::vec![0, 0]).is_err());
    }

    #[test]
    fn rays_into_a_common_end_fellow_travel() {
        let g = regular_tree(3, 6).unwrap();
        let end = (0..g.vertex_count()).find(|&v| g.depth(v) == 6).unwrap();
        let row = g.dist_row(end);
        let a = first_geodesic(&g, g.base(), &row);
        let start = g.neighbors(g.base())[2];
        let b = first_geodesic(&g, start, &row);
        let ft = fellow_travel(&g, &a, &b).unwrap();
        assert_eq!(ft.gap, 0);
        assert_eq!(ft.shift, 1);
    }
}
