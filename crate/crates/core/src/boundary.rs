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

//! Visual quasi-metrics `ϱ_x(y,z) = exp(-(y|z)_x)` and their inner metrics.
//!
//! The inner metric `ρ_x` is the infimum of `Σ ϱ_x(p_{i-1}, p_i)^a` over
//! chains from `y` to `z`. Chains are restricted to a finite point set (all
//! vertices by default), which makes the computed value an upper bound of
//! the infimum over the whole space; it is a shortest path problem on the
//! complete graph with edge weights `ϱ_x^a`.
//!
//! On a tree `ϱ_x` is an ultrametric, hence so is `ϱ_x^a`, and no chain can
//! beat the direct step: `ρ_x = ϱ_x^a` exactly. [`VisualMetric`] uses that
//! shortcut unless told otherwise.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Graph, Vertex};
use crate::{Error, HalfInt, Result};

/// Dense [`QuasiMetricTable`]s are limited to this many points.
pub const DENSE_TABLE_LIMIT: usize = 5_000;

/// Visual exponent `1 / (15 max(δ, 1/2))`.
pub fn default_exponent(delta: HalfInt) -> f64 {
    1.0 / (15.0 * delta.to_f64().max(0.5))
}

/// Streaming access to `ϱ_x` and `ρ_x` for one basepoint.
#[derive(Debug, Clone)]
pub struct VisualMetric<'g> {
    graph: &'g Graph,
    basepoint: Vertex,
    a: f64,
    from_base: Vec<u32>,
    ultrametric: bool,
}

impl<'g> VisualMetric<'g> {
    pub fn new(graph: &'g Graph, basepoint: Vertex, a: f64) -> Result<Self> {
        graph.check_vertex(basepoint)?;
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameter("visual exponent must be positive"));
        }
        let from_base = if basepoint == graph.base() {
            graph.depths().to_vec()
        } else {
            graph.dist_row(basepoint)
        };
        Ok(VisualMetric {
            graph,
            basepoint,
            a,
            from_base,
            ultrametric: graph.is_tree(),
        })
    }

    /// Always solve the chain problem, even on trees.
    pub fn with_chain_search(mut self) -> Self {
        self.ultrametric = false;
        self
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn basepoint(&self) -> Vertex {
        self.basepoint
    }

    pub fn exponent(&self) -> f64 {
        self.a
    }

    pub fn gromov(&self, y: Vertex, z: Vertex) -> HalfInt {
        let twice =
            self.from_base[y] as i64 + self.from_base[z] as i64 - self.graph.dist(y, z) as i64;
        HalfInt::from_twice(twice)
    }

    pub fn varrho(&self, y: Vertex, z: Vertex) -> f64 {
        if y == z {
            0.0
        } else {
            libm::exp(-self.gromov(y, z).to_f64())
        }
    }

    /// `ϱ_x(y,z)^a`.
    pub fn varrho_pow(&self, y: Vertex, z: Vertex) -> f64 {
        if y == z {
            0.0
        } else {
            libm::exp(-self.a * self.gromov(y, z).to_f64())
        }
    }

    fn varrho_pow_with(&self, y: Vertex, z: Vertex, d_yz: u32) -> f64 {
        if y == z {
            return 0.0;
        }
        let twice = self.from_base[y] as i64 + self.from_base[z] as i64 - d_yz as i64;
        libm::exp(-self.a * twice as f64 / 2.0)
    }

    /// `ρ_x(source, p)` for every `p` in `points`, chains running through
    /// `points` (which should contain `source`).
    pub fn rho_row(&self, source: Vertex, points: &[Vertex]) -> Vec<f64> {
        if self.ultrametric {
            return points.iter().map(|&p| self.varrho_pow(source, p)).collect();
        }
        let k = points.len();
        let mut dist = vec![f64::INFINITY; k];
        let mut settled = vec![false; k];
        let mut current = None;
        for (i, &p) in points.iter().enumerate() {
            dist[i] = self.varrho_pow(source, p);
            if p == source {
                current = Some(i);
            }
        }
        // the direct steps from the source are already relaxed
        if let Some(i) = current {
            settled[i] = true;
        }
        loop {
            let mut pick = None;
            let mut best = f64::INFINITY;
            for i in 0..k {
                if !settled[i] && dist[i] < best {
                    best = dist[i];
                    pick = Some(i);
                }
            }
            let Some(u) = pick else { break };
            settled[u] = true;
            let row = self.graph.dist_row(points[u]);
            for v in 0..k {
                if !settled[v] {
                    let candidate =
                        best + self.varrho_pow_with(points[u], points[v], row[points[v]]);
                    if candidate < dist[v] {
                        dist[v] = candidate;
                    }
                }
            }
        }
        dist
    }

    /// `ρ_x(y, z)` with chains through all vertices.
    pub fn rho(&self, y: Vertex, z: Vertex) -> f64 {
        if self.ultrametric || y == z {
            return self.varrho_pow(y, z);
        }
        let all: Vec<Vertex> = (0..self.graph.vertex_count()).collect();
        self.rho_row(y, &all)[z]
    }
}

/// Dense tables of `ϱ_x` and `ρ_x` over a point set.
#[derive(Debug, Clone)]
pub struct QuasiMetricTable {
    basepoint: Vertex,
    a: f64,
    points: Vec<Vertex>,
    varrho: Vec<f64>,
    rho: Vec<f64>,
}

impl QuasiMetricTable {
    /// Tables over `points` (all vertices when `None`); horizon points enter
    /// through their ray endpoints, which are vertices.
    pub fn build(metric: &VisualMetric<'_>, points: Option<Vec<Vertex>>) -> Result<Self> {
        let g = metric.graph();
        let mut points = points.unwrap_or_else(|| (0..g.vertex_count()).collect());
        points.sort_unstable();
        points.dedup();
        for &p in &points {
            g.check_vertex(p)?;
        }
        if points.len() > DENSE_TABLE_LIMIT {
            return Err(Error::InvalidParameter(
                "point set too large for a dense table",
            ));
        }
        let k = points.len();
        let mut varrho = Vec::with_capacity(k * k);
        let mut rho = Vec::with_capacity(k * k);
        for &p in &points {
            varrho.extend(points.iter().map(|&q| metric.varrho(p, q)));
            rho.extend(metric.rho_row(p, &points));
        }
        // chain search is symmetric up to rounding; keep the table exactly so
        for i in 0..k {
            for j in i + 1..k {
                let m = rho[i * k + j].min(rho[j * k + i]);
                rho[i * k + j] = m;
                rho[j * k + i] = m;
            }
        }
        Ok(QuasiMetricTable {
            basepoint: metric.basepoint(),
            a: metric.exponent(),
            points,
            varrho,
            rho,
        })
    }

    pub fn basepoint(&self) -> Vertex {
        self.basepoint
    }

    pub fn exponent(&self) -> f64 {
        self.a
    }

    pub fn points(&self) -> &[Vertex] {
        &self.points
    }

    pub fn index_of(&self, p: Vertex) -> Option<usize> {
        self.points.binary_search(&p).ok()
    }

    pub fn varrho(&self, i: usize, j: usize) -> f64 {
        self.varrho[i * self.points.len() + j]
    }

    pub fn rho(&self, i: usize, j: usize) -> f64 {
        self.rho[i * self.points.len() + j]
    }

    /// Pairs violating `ϱ^a / 2 <= ρ <= ϱ^a` by more than `slack`.
    pub fn sandwich_violations(&self, slack: f64) -> Vec<(Vertex, Vertex)> {
        let k = self.points.len();
        let mut out = Vec::new();
        for i in 0..k {
            for j in 0..k {
                let upper = libm::pow(self.varrho(i, j), self.a);
                let r = self.rho(i, j);
                if r > upper + slack || r < 0.5 * upper - slack {
                    out.push((self.points[i], self.points[j]));
                }
            }
        }
        out
    }
}

/// Points `p` of the table with `ρ_x(center, p) <= r`.
pub fn metric_ball(table: &QuasiMetricTable, center: Vertex, r: f64) -> Result<Vec<Vertex>> {
    if !(r >= 0.0) {
        return Err(Error::InvalidParameter("ball radius must be nonnegative"));
    }
    let c = table
        .index_of(center)
        .ok_or(Error::InvalidParameter("ball center is not a table point"))?;
    Ok((0..table.points.len())
        .filter(|&j| table.rho(c, j) <= r)
        .map(|j| table.points[j])
        .collect())
}
