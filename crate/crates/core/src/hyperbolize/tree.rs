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

//! Trees with positive edge lengths and points on their edges.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// A point of a metric tree: at distance `offset` from `vertex` along the
/// edge toward its parent, `0 <= offset < length`. The root only carries
/// offset `0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreePoint {
    pub vertex: usize,
    pub offset: f64,
}

impl TreePoint {
    pub fn vertex(v: usize) -> Self {
        TreePoint {
            vertex: v,
            offset: 0.0,
        }
    }
}

/// A finite tree with edge lengths, rooted at vertex `0`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricTree {
    parent: Vec<usize>,
    /// Length of the edge to the parent; `0` at the root.
    length: Vec<f64>,
    hops: Vec<u32>,
    depth: Vec<f64>,
}

impl MetricTree {
    pub fn new(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        if n == 0 || edges.len() + 1 != n {
            return Err(Error::InvalidParameter(
                "a tree on n vertices has n - 1 edges",
            ));
        }
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(u, v, len) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::InvalidVertex {
                        vertex: w,
                        count: n,
                    });
                }
            }
            if !(len > 0.0 && len.is_finite()) {
                return Err(Error::InvalidParameter(
                    "edge lengths must be positive and finite",
                ));
            }
            adj[u].push((v, len));
            adj[v].push((u, len));
        }
        let mut parent = vec![usize::MAX; n];
        let mut length = vec![0.0; n];
        let mut hops = vec![0u32; n];
        let mut depth = vec![0.0; n];
        let mut stack = vec![0usize];
        parent[0] = 0;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &(w, len) in &adj[u] {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    length[w] = len;
                    hops[w] = hops[u] + 1;
                    depth[w] = depth[u] + len;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        if reached != n {
            return Err(Error::Disconnected);
        }
        Ok(MetricTree {
            parent,
            length,
            hops,
            depth,
        })
    }

    /// Random recursive tree: vertex `i` attaches to a uniform earlier
    /// vertex with a length uniform in `[0.1, 2)`.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edges: Vec<(usize, usize, f64)> = (1..n)
            .map(|i| (rng.gen_range(0..i), i, rng.gen_range(0.1..2.0)))
            .collect();
        Self::new(n, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        (v != 0).then(|| self.parent[v])
    }

    pub fn edge_length(&self, v: usize) -> f64 {
        self.length[v]
    }

    pub fn check_point(&self, p: TreePoint) -> Result<()> {
        if p.vertex >= self.vertex_count() {
            return Err(Error::InvalidVertex {
                vertex: p.vertex,
                count: self.vertex_count(),
            });
        }
        let ok = if p.vertex == 0 {
            p.offset == 0.0
        } else {
            p.offset >= 0.0 && p.offset < self.length[p.vertex]
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(
                "tree point offset outside its edge",
            ))
        }
    }

    /// Lowest common ancestor by climbing.
    fn lca(&self, mut u: usize, mut v: usize) -> usize {
        while self.hops[u] > self.hops[v] {
            u = self.parent[u];
        }
        while self.hops[v] > self.hops[u] {
            v = self.parent[v];
        }
        while u != v {
            u = self.parent[u];
            v = self.parent[v];
        }
        u
    }

    pub fn vertex_distance(&self, u: usize, v: usize) -> f64 {
        let w = self.lca(u, v);
        (self.depth[u] - self.depth[w]) + (self.depth[v] - self.depth[w])
    }

    /// The endpoints of the edge holding `p` with their distances from `p`.
    fn ends(&self, p: TreePoint) -> [(usize, f64); 2] {
        if p.offset == 0.0 {
            [(p.vertex, 0.0), (p.vertex, 0.0)]
        } else {
            [
                (p.vertex, p.offset),
                (self.parent[p.vertex], self.length[p.vertex] - p.offset),
            ]
        }
    }

    pub fn distance(&self, p: TreePoint, q: TreePoint) -> Result<f64> {
        self.check_point(p)?;
        self.check_point(q)?;
        if p.offset > 0.0 && q.offset > 0.0 && p.vertex == q.vertex {
            return Ok((p.offset - q.offset).abs());
        }
        let mut best = f64::INFINITY;
        for (a, da) in self.ends(p) {
            for (b, db) in self.ends(q) {
                best = best.min(da + db + self.vertex_distance(a, b));
            }
        }
        Ok(best)
    }

    /// Vertices on the path from `u` to `v`.
    fn vertex_path(&self, u: usize, v: usize) -> Vec<usize> {
        let w = self.lca(u, v);
        let mut up = vec![u];
        let mut x = u;
        while x != w {
            x = self.parent[x];
            up.push(x);
        }
        let mut down = Vec::new();
        let mut y = v;
        while y != w {
            down.push(y);
            y = self.parent[y];
        }
        up.extend(down.into_iter().rev());
        up
    }

    /// Point at distance `l` from `a` on the edge between adjacent `a`, `b`.
    fn on_edge(&self, a: usize, b: usize, l: f64) -> TreePoint {
        let (child, from_child) = if self.parent[a] == b && a != 0 {
            (a, l)
        } else {
            (b, self.length[b] - l)
        };
        if from_child <= 0.0 {
            TreePoint::vertex(child)
        } else if from_child >= self.length[child] {
            TreePoint::vertex(self.parent[child])
        } else {
            TreePoint {
                vertex: child,
                offset: from_child,
            }
        }
    }

    /// The point at distance `l` from `p` on the geodesic to `q`, clamped
    /// to the segment.
    pub fn point_along(&self, p: TreePoint, q: TreePoint, l: f64) -> Result<TreePoint> {
        let total = self.distance(p, q)?;
        let l = l.clamp(0.0, total);
        if p.offset > 0.0 && q.offset > 0.0 && p.vertex == q.vertex {
            let off = if q.offset >= p.offset {
                p.offset + l
            } else {
                p.offset - l
            };
            return Ok(if off <= 0.0 {
                TreePoint::vertex(p.vertex)
            } else {
                TreePoint {
                    vertex: p.vertex,
                    offset: off,
                }
            });
        }
        // pick the endpoint pair realising the distance
        let mut route = (p.vertex, 0.0, q.vertex, 0.0, f64::INFINITY);
        for (a, da) in self.ends(p) {
            for (b, db) in self.ends(q) {
                let d = da + db + self.vertex_distance(a, b);
                if d < route.4 {
                    route = (a, da, b, db, d);
                }
            }
        }
        let (a, da, b, _, _) = route;
        if l <= da {
            // still on the edge of p, moving toward a
            let other = if a == p.vertex {
                self.parent[p.vertex]
            } else {
                p.vertex
            };
            let from_other = self.vertex_distance(other, a) - da + l;
            return Ok(self.on_edge(other, a, from_other));
        }
        let mut left = l - da;
        let path = self.vertex_path(a, b);
        for w in path.windows(2) {
            let len = self.vertex_distance(w[0], w[1]);
            if left <= len {
                return Ok(self.on_edge(w[0], w[1], left));
            }
            left -= len;
        }
        // on the edge of q, coming from b
        let other = if b == q.vertex {
            self.parent[q.vertex]
        } else {
            q.vertex
        };
        Ok(self.on_edge(b, other, left))
    }

    pub fn random_point<R: Rng>(&self, rng: &mut R) -> TreePoint {
        let v = rng.gen_range(0..self.vertex_count());
        if v == 0 {
            TreePoint::vertex(0)
        } else {
            TreePoint {
                vertex: v,
                offset: rng.gen_range(0.0..self.length[v]),
            }
        }
    }

    /// Image of a point under a vertex permutation preserving edges and
    /// lengths.
    pub fn map_point(&self, perm: &[usize], p: TreePoint) -> TreePoint {
        if p.offset == 0.0 {
            return TreePoint::vertex(perm[p.vertex]);
        }
        let (a, b) = (perm[p.vertex], perm[self.parent[p.vertex]]);
        self.on_edge(a, b, p.offset)
    }

    /// Largest discrepancy in edge lengths under `perm`, or `None` if it is
    /// not a bijection mapping edges to edges.
    pub fn automorphism_defect(&self, perm: &[usize]) -> Option<f64> {
        let n = self.vertex_count();
        if perm.len() != n {
            return None;
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || core::mem::replace(&mut seen[p], true) {
                return None;
            }
        }
        let mut defect: f64 = 0.0;
        for v in 1..n {
            let (a, b) = (perm[v], perm[self.parent[v]]);
            let len = if a != 0 && self.parent[a] == b {
                self.length[a]
            } else if b != 0 && self.parent[b] == a {
                self.length[b]
            } else {
                return None;
            };
            defect = defect.max((len - self.length[v]).abs());
        }
        Some(defect)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star3() -> MetricTree {
        MetricTree::new(4, &[(0, 1, 1.0), (0, 2, 2.0), (0, 3, 1.0)]).unwrap()
    }

    #[test]
    fn distances_on_edges() {
        let t = star3();
        let p = TreePoint {
            vertex: 1,
            offset: 0.25,
        };
        let q = TreePoint {
            vertex: 2,
            offset: 0.5,
        };
        assert_eq!(t.distance(p, q).unwrap(), 0.75 + 1.5);
        assert_eq!(
            t.distance(
                p,
                TreePoint {
                    vertex: 1,
                    offset: 0.75
                }
            )
            .unwrap(),
            0.5
        );
        assert_eq!(t.distance(p, TreePoint::vertex(1)).unwrap(), 0.25);
        assert!(t
            .check_point(TreePoint {
                vertex: 1,
                offset: 1.0
            })
            .is_err());
    }

    #[test]
    fn points_along_paths() {
        let t = MetricTree::random(30, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let p = t.random_point(&mut rng);
            let q = t.random_point(&mut rng);
            let d = t.distance(p, q).unwrap();
            let l = rng.gen_range(0.0..=1.0) * d;
            let m = t.point_along(p, q, l).unwrap();
            t.check_point(m).unwrap();
            assert!((t.distance(p, m).unwrap() - l).abs() < 1e-9);
            assert!((t.distance(m, q).unwrap() - (d - l)).abs() < 1e-9);
        }
    }

    #[test]
    fn leaf_swap_is_an_automorphism() {
        let t = star3();
        assert_eq!(t.automorphism_defect(&[0, 3, 2, 1]), Some(0.0));
        assert_eq!(t.automorphism_defect(&[0, 2, 1, 3]), Some(1.0));
        assert_eq!(t.automorphism_defect(&[1, 0, 2, 3]), None);
        let p = TreePoint {
            vertex: 1,
            offset: 0.3,
        };
        assert_eq!(
            t.map_point(&[0, 3, 2, 1], p),
            TreePoint {
                vertex: 3,
                offset: 0.3
            }
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert!(MetricTree::new(3, &[(0, 1, 1.0), (0, 1, 1.0)]).is_err());
        assert!(MetricTree::new(2, &[(0, 1, 0.0)]).is_err());
    }
}
