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

//! Finite connected graphs standing in for a hyperbolic space.
//!
//! A [`Graph`] is immutable once built. Distances from the base vertex are
//! always stored; pairwise distances are kept in a dense table for small
//! graphs, answered through parent pointers for trees, and recomputed by
//! breadth-first search otherwise.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, HalfInt, Result};

mod generate;
mod geodesic;
mod hyperbolicity;

pub use generate::{
    cycle, free_product_cyclic, grid, path, random_connected, regular_tree, spider, star,
};
pub(crate) use geodesic::first_geodesic;
pub use geodesic::{enumerate_geodesics, fellow_travel, FellowTravel, GeodesicSegment};
pub use hyperbolicity::{delta_four_point, delta_rips, DeltaEstimator};

pub type Vertex = usize;

/// Graphs up to this many vertices keep a dense distance table.
pub const DENSE_DISTANCE_LIMIT: usize = 20_000;

#[derive(Debug, Clone)]
enum Distances {
    Dense(Vec<u16>),
    /// Parent of every vertex towards the base; the graph is a tree.
    Tree(Vec<Vertex>),
    OnDemand,
}

#[derive(Debug, Clone)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
    edge_count: usize,
    base: Vertex,
    depth: Vec<u32>,
    max_degree: usize,
    distances: Distances,
}

impl Graph {
    /// Builds a graph from an undirected edge list. Self loops are rejected,
    /// repeated edges are merged.
    pub fn from_edges(
        vertex_count: usize,
        edges: &[(Vertex, Vertex)],
        base: Vertex,
    ) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidParameter(
                "graph must have at least one vertex",
            ));
        }
        check_vertex(base, vertex_count)?;
        let mut lists: Vec<Vec<Vertex>> = vec![Vec::new(); vertex_count];
        for &(u, v) in edges {
            check_vertex(u, vertex_count)?;
            check_vertex(v, vertex_count)?;
            if u == v {
                return Err(Error::InvalidParameter("self loops are not allowed"));
            }
            lists[u].push(v);
            lists[v].push(u);
        }
        let mut offsets = Vec::with_capacity(vertex_count + 1);
        let mut targets = Vec::with_capacity(2 * edges.len());
        offsets.push(0);
        for list in &mut lists {
            list.sort_unstable();
            list.dedup();
            targets.extend_from_slice(list);
            offsets.push(targets.len());
        }
        let edge_count = targets.len() / 2;
        let max_degree = lists.iter().map(Vec::len).max().unwrap_or(0);
        let mut graph = Graph {
            offsets,
            targets,
            edge_count,
            base,
            depth: Vec::new(),
            max_degree,
            distances: Distances::OnDemand,
        };
        let depth = graph.bfs(base);
        if depth.iter().any(|&d| d == u32::MAX) {
            return Err(Error::Disconnected);
        }
        graph.depth = depth;
        graph.distances = if graph.is_tree() {
            let parents = (0..vertex_count)
                .map(|v| {
                    graph
                        .neighbors(v)
                        .iter()
                        .copied()
                        .find(|&w| graph.depth[w] + 1 == graph.depth[v])
                        .unwrap_or(v)
                })
                .collect();
            Distances::Tree(parents)
        } else if vertex_count <= DENSE_DISTANCE_LIMIT {
            let mut table = vec![0u16; vertex_count * vertex_count];
            for u in 0..vertex_count {
                let row = graph.bfs(u);
                for (slot, d) in table[u * vertex_count..(u + 1) * vertex_count]
                    .iter_mut()
                    .zip(row)
                {
                    *slot = d as u16;
                }
            }
            Distances::Dense(table)
        } else {
            Distances::OnDemand
        };
        Ok(graph)
    }

    /// Same graph with vertices renumbered in breadth-first order from the
    /// base, neighbours visited by increasing old id. The base becomes 0.
    pub fn bfs_relabeled(&self) -> Self {
        let n = self.vertex_count();
        let mut order = Vec::with_capacity(n);
        let mut new_id = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        new_id[self.base] = 0;
        order.push(self.base);
        queue.push_back(self.base);
        while let Some(u) = queue.pop_front() {
            for &w in self.neighbors(u) {
                if new_id[w] == usize::MAX {
                    new_id[w] = order.len();
                    order.push(w);
                    queue.push_back(w);
                }
            }
        }
        let edges: Vec<_> = self.edges().map(|(u, v)| (new_id[u], new_id[v])).collect();
        Graph::from_edges(n, &edges, 0).expect("relabeling a valid graph")
    }

    pub fn vertex_count(&self) -> usize {
        self.depth.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn base(&self) -> Vertex {
        self.base
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn is_adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| u < v)
                .map(move |&v| (u, v))
        })
    }

    pub fn is_tree(&self) -> bool {
        self.edge_count + 1 == self.vertex_count()
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        check_vertex(v, self.vertex_count())
    }

    /// Distance from the base.
    pub fn depth(&self, v: Vertex) -> u32 {
        self.depth[v]
    }

    pub fn depths(&self) -> &[u32] {
        &self.depth
    }

    /// Largest distance from the base, the horizon radius of a generated ball.
    pub fn radius(&self) -> u32 {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// Graph distance. Cheap for dense tables and trees; a full search on
    /// large non-tree graphs.
    pub fn dist(&self, u: Vertex, v: Vertex) -> u32 {
        match &self.distances {
            Distances::Dense(table) => table[u * self.vertex_count() + v] as u32,
            Distances::Tree(parent) => {
                let (mut a, mut b) = (u, v);
                let mut steps = 0;
                while self.depth[a] > self.depth[b] {
                    a = parent[a];
                    steps += 1;
                }
                while self.depth[b] > self.depth[a] {
                    b = parent[b];
                    steps += 1;
                }
                while a != b {
                    a = parent[a];
                    b = parent[b];
                    steps += 2;
                }
                steps
            }
            Distances::OnDemand => self.bfs(u)[v],
        }
    }

    /// Distances from `u` to every vertex.
    pub fn dist_row(&self, u: Vertex) -> Vec<u32> {
        match &self.distances {
            Distances::Dense(table) => {
                let n = self.vertex_count();
                table[u * n..(u + 1) * n]
                    .iter()
                    .map(|&d| d as u32)
                    .collect()
            }
            _ => self.bfs(u),
        }
    }

    /// Breadth-first distances from `source`; unreachable vertices get
    /// `u32::MAX`.
    pub fn bfs(&self, source: Vertex) -> Vec<u32> {
        self.multi_source_bfs(core::iter::once(source))
    }

    pub fn multi_source_bfs(&self, sources: impl IntoIterator<Item = Vertex>) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.offsets.len() - 1];
        let mut queue = VecDeque::new();
        for s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let next = dist[u] + 1;
            for &w in self.neighbors(u) {
                if dist[w] == u32::MAX {
                    dist[w] = next;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Vertices within distance `r` of `center`, in increasing id order.
    pub fn ball(&self, center: Vertex, r: u32) -> Vec<Vertex> {
        let row = self.dist_row(center);
        (0..row.len()).filter(|&v| row[v] <= r).collect()
    }

    /// Vertices at distance exactly `r` from `center`, in increasing id order.
    pub fn sphere(&self, center: Vertex, r: u32) -> Vec<Vertex> {
        if center == self.base {
            return (0..self.vertex_count())
                .filter(|&v| self.depth[v] == r)
                .collect();
        }
        let row = self.dist_row(center);
        (0..row.len()).filter(|&v| row[v] == r).collect()
    }

    /// Neighbour of `v` one step closer to the base with the smallest id.
    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        if v == self.base {
            return None;
        }
        match &self.distances {
            Distances::Tree(parent) => Some(parent[v]),
            _ => self
                .neighbors(v)
                .iter()
                .copied()
                .find(|&w| self.depth[w] + 1 == self.depth[v]),
        }
    }

    /// Full pairwise distance table, `n * n` entries, row major.
    pub fn distance_matrix(&self) -> Vec<u32> {
        let n = self.vertex_count();
        let mut out = Vec::with_capacity(n * n);
        for u in 0..n {
            out.extend(self.dist_row(u));
        }
        out
    }

    /// Applies a vertex permutation; the base follows the permutation.
    pub fn permuted(&self, perm: &[Vertex]) -> Result<Self> {
        if perm.len() != self.vertex_count() {
            return Err(Error::InvalidParameter(
                "permutation length must equal the vertex count",
            ));
        }
        let edges: Vec<_> = self.edges().map(|(u, v)| (perm[u], perm[v])).collect();
        Graph::from_edges(self.vertex_count(), &edges, perm[self.base])
    }

    /// True when `perm` maps edges onto edges bijectively.
    pub fn is_automorphism(&self, perm: &[Vertex]) -> bool {
        let n = self.vertex_count();
        if perm.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || seen[p] {
                return false;
            }
            seen[p] = true;
        }
        self.edges()
            .all(|(u, v)| self.is_adjacent(perm[u], perm[v]))
    }
}

fn check_vertex(v: Vertex, count: usize) -> Result<()> {
    if v < count {
        Ok(())
    } else {
        Err(Error::InvalidVertex { vertex: v, count })
    }
}

/// `(y|z)_x = (d(x,y) + d(x,z) - d(y,z)) / 2`.
pub fn gromov_product(g: &Graph, x: Vertex, y: Vertex, z: Vertex) -> Result<HalfInt> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    g.check_vertex(z)?;
    let twice = g.dist(x, y) as i64 + g.dist(x, z) as i64 - g.dist(y, z) as i64;
    Ok(HalfInt::from_twice(twice))
}

/// Permutation of a rooted tree exchanging the subtrees hanging below two
/// children `a` and `b` of the base. Both subtrees must have the same shape
/// when walked breadth first by increasing vertex id; `None` otherwise.
pub fn swap_base_branches(g: &Graph, a: Vertex, b: Vertex) -> Option<Vec<Vertex>> {
    if !g.is_tree() || g.parent(a) != Some(g.base()) || g.parent(b) != Some(g.base()) {
        return None;
    }
    let walk = |root: Vertex| {
        let mut order = vec![root];
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            order.extend(
                g.neighbors(u)
                    .iter()
                    .copied()
                    .filter(|&w| g.depth(w) > g.depth(u)),
            );
            i += 1;
        }
        order
    };
    let (wa, wb) = (walk(a), walk(b));
    if wa.len() != wb.len()
        || wa
            .iter()
            .zip(&wb)
            .any(|(&u, &v)| g.degree(u) != g.degree(v))
    {
        return None;
    }
    let mut perm: Vec<Vertex> = (0..g.vertex_count()).collect();
    for (&u, &v) in wa.iter().zip(&wb) {
        perm[u] = v;
        perm[v] = u;
    }
    g.is_automorphism(&perm).then_some(perm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_disconnected_and_bad_ids() {
        assert_eq!(
            Graph::from_edges(3, &[(0, 1)], 0).unwrap_err(),
            Error::Disconnected
        );
        assert!(matches!(
            Graph::from_edges(2, &[(0, 5)], 0),
            Err(Error::InvalidVertex { vertex: 5, .. })
        ));
        assert!(Graph::from_edges(2, &[(1, 1)], 0).is_err());
    }

    #[test]
    fn gromov_product_on_a_path() {
        let g = path(6);
        assert_eq!(gromov_product(&g, 0, 5, 3).unwrap(), 3);
        for v in 0..6 {
            assert_eq!(gromov_product(&g, v, v, 4).unwrap(), 0);
        }
        assert!(gromov_product(&g, 0, 9, 1).is_err());
    }

    #[test]
    fn tree_distances_match_bfs() {
        let g = regular_tree(3, 4).unwrap();
        assert!(g.is_tree());
        for u in (0..g.vertex_count()).step_by(5) {
            let row = g.bfs(u);
            for v in 0..g.vertex_count() {
                assert_eq!(g.dist(u, v), row[v]);
            }
        }
    }

    #[test]
    fn distances_are_a_graph_metric() {
        let g = random_connected(18, 0.15, 3).unwrap();
        let n = g.vertex_count();
        for u in 0..n {
            assert_eq!(g.dist(u, u), 0);
            for v in 0..n {
                assert_eq!(g.dist(u, v), g.dist(v, u));
                assert_eq!(g.dist(u, v) == 1, g.is_adjacent(u, v));
                for w in 0..n {
                    assert!(g.dist(u, w) <= g.dist(u, v) + g.dist(v, w));
                }
            }
        }
    }

    #[test]
    fn branch_swap_is_an_automorphism() {
        let g = regular_tree(3, 3).unwrap();
        let kids = g.neighbors(g.base()).to_vec();
        let perm = swap_base_branches(&g, kids[0], kids[2]).unwrap();
        assert!(g.is_automorphism(&perm));
        assert_eq!(perm[g.base()], g.base());
        assert_eq!(perm[kids[0]], kids[2]);
    }
}
