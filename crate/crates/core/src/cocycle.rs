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

//! Distance cocycles, the horizon surrogate of the boundary quasi-cocycle,
//! and the barycenter functional.
//!
//! The boundary is approximated by the horizon: the sphere `S(base, R)`,
//! each vertex of it standing for the ray from the base that ends there.
//! For a horizon point `γ` the limsup over `z → γ` is replaced by the max of
//! `β_z` over the *cell* of `γ`: the vertices `z` with `|z| >= R'` and
//! `ρ_base(z, γ) <= 2 exp(-a R')`, where `R' <= R` is the tail radius.

use alloc::vec;
use alloc::vec::Vec;

use crate::boundary::{default_exponent, VisualMetric};
use crate::graph::{DeltaEstimator, Graph, Vertex};
use crate::measure::{BoundaryMeasure, FiniteMeasure};
use crate::{Error, HalfInt, Result};

/// `β_z(x, y) = d(y, z) - d(x, z)`.
pub fn distance_cocycle(g: &Graph, z: Vertex, x: Vertex, y: Vertex) -> Result<i64> {
    for v in [x, y, z] {
        g.check_vertex(v)?;
    }
    Ok(g.dist(y, z) as i64 - g.dist(x, z) as i64)
}

/// A horizon vertex together with its ray from the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HorizonPoint {
    ray: Vec<Vertex>,
}

impl HorizonPoint {
    /// The ray from the base to `endpoint` following smallest-id parents.
    pub fn new(g: &Graph, endpoint: Vertex) -> Result<Self> {
        g.check_vertex(endpoint)?;
        let mut ray = vec![endpoint];
        let mut v = endpoint;
        while let Some(p) = g.parent(v) {
            ray.push(p);
            v = p;
        }
        ray.reverse();
        Ok(HorizonPoint { ray })
    }

    pub fn endpoint(&self) -> Vertex {
        *self.ray.last().expect("rays are nonempty")
    }

    /// Vertices of the ray, base first.
    pub fn ray(&self) -> &[Vertex] {
        &self.ray
    }

    pub fn depth(&self) -> u32 {
        (self.ray.len() - 1) as u32
    }
}

/// All horizon points at the given radius, ordered by endpoint.
pub fn horizon(g: &Graph, radius: u32) -> Result<Vec<HorizonPoint>> {
    if radius > g.radius() {
        return Err(Error::HorizonTooShallow {
            needed: radius,
            available: g.radius(),
        });
    }
    let mut out = Vec::new();
    for v in 0..g.vertex_count() {
        if g.depth(v) == radius {
            out.push(HorizonPoint::new(g, v)?);
        }
    }
    if out.is_empty() {
        return Err(Error::EmptySphere { radius });
    }
    Ok(out)
}

/// Graph, horizon radius, hyperbolicity constant and the derived constants
/// `a` and `C₂ = 2 log 2 / a`.
#[derive(Debug, Clone)]
pub struct CocycleContext<'g> {
    graph: &'g Graph,
    radius: u32,
    tail: u32,
    delta: HalfInt,
    a: f64,
    metric: VisualMetric<'g>,
}

impl<'g> CocycleContext<'g> {
    /// Context with the default exponent for `delta` and tail radius `radius`.
    pub fn new(graph: &'g Graph, radius: u32, delta: HalfInt) -> Result<Self> {
        if radius > graph.radius() {
            return Err(Error::HorizonTooShallow {
                needed: radius,
                available: graph.radius(),
            });
        }
        if delta < 0 {
            return Err(Error::InvalidParameter(
                "hyperbolicity constant must be nonnegative",
            ));
        }
        let a = default_exponent(delta);
        let metric = VisualMetric::new(graph, graph.base(), a)?;
        Ok(CocycleContext {
            graph,
            radius,
            tail: radius,
            delta,
            a,
            metric,
        })
    }

    pub fn with_estimator(
        graph: &'g Graph,
        radius: u32,
        estimator: DeltaEstimator,
    ) -> Result<Self> {
        let delta = estimator.estimate(graph)?;
        Self::new(graph, radius, delta)
    }

    /// Override the visual exponent; `C₂` follows.
    pub fn with_exponent(mut self, a: f64) -> Result<Self> {
        self.metric = VisualMetric::new(self.graph, self.graph.base(), a)?;
        self.a = a;
        Ok(self)
    }

    pub fn with_tail(mut self, tail: u32) -> Result<Self> {
        if tail > self.radius {
            return Err(Error::HorizonTooShallow {
                needed: tail,
                available: self.radius,
            });
        }
        self.tail = tail;
        Ok(self)
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn tail(&self) -> u32 {
        self.tail
    }

    pub fn delta(&self) -> HalfInt {
        self.delta
    }

    pub fn exponent(&self) -> f64 {
        self.a
    }

    pub fn c2(&self) -> f64 {
        2.0 * core::f64::consts::LN_2 / self.a
    }

    pub fn metric(&self) -> &VisualMetric<'g> {
        &self.metric
    }

    pub fn horizon(&self) -> Result<Vec<HorizonPoint>> {
        horizon(self.graph, self.radius)
    }

    fn check_horizon(&self, endpoint: Vertex) -> Result<()> {
        self.graph.check_vertex(endpoint)?;
        if self.graph.depth(endpoint) != self.radius {
            return Err(Error::InvalidParameter("not a horizon vertex"));
        }
        Ok(())
    }

    /// The cell of the horizon point ending at `endpoint`.
    pub fn cell(&self, endpoint: Vertex) -> Result<Vec<Vertex>> {
        self.check_horizon(endpoint)?;
        let g = self.graph;
        let threshold = 2.0 * libm::exp(-self.a * self.tail as f64);
        let all: Vec<Vertex> = (0..g.vertex_count()).collect();
        let rho = self.metric.rho_row(endpoint, &all);
        let cell: Vec<Vertex> = all
            .into_iter()
            .filter(|&z| g.depth(z) >= self.tail && rho[z] <= threshold)
            .collect();
        if cell.is_empty() {
            return Err(Error::EmptyHorizonCell { endpoint });
        }
        Ok(cell)
    }

    pub fn quasi_cocycle(&self, endpoint: Vertex) -> Result<QuasiCocycle<'g>> {
        Ok(QuasiCocycle {
            graph: self.graph,
            endpoint,
            cell: self.cell(endpoint)?,
        })
    }

    /// Quasi-cocycles of every atom of `lambda`, weighted.
    pub fn functional(&self, lambda: &BoundaryMeasure) -> Result<BarycenterFunctional<'g>> {
        let mut atoms = Vec::new();
        for (&gamma, w) in lambda.iter() {
            if w > 0.0 {
                atoms.push((self.quasi_cocycle(gamma)?, w));
            }
        }
        Ok(BarycenterFunctional { atoms })
    }
}

/// Max and min of `β_z(x, y)` over a horizon cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellRange {
    pub max: i64,
    pub min: i64,
}

impl CellRange {
    pub fn oscillation(self) -> i64 {
        self.max - self.min
    }
}

/// `β̄_γ` for one horizon point.
#[derive(Debug, Clone)]
pub struct QuasiCocycle<'g> {
    graph: &'g Graph,
    endpoint: Vertex,
    cell: Vec<Vertex>,
}

impl QuasiCocycle<'_> {
    pub fn endpoint(&self) -> Vertex {
        self.endpoint
    }

    pub fn cell(&self) -> &[Vertex] {
        &self.cell
    }

    pub fn range(&self, x: Vertex, y: Vertex) -> Result<CellRange> {
        self.graph.check_vertex(x)?;
        self.graph.check_vertex(y)?;
        let mut max = i64::MIN;
        let mut min = i64::MAX;
        for &z in &self.cell {
            let b = self.graph.dist(y, z) as i64 - self.graph.dist(x, z) as i64;
            max = max.max(b);
            min = min.min(b);
        }
        Ok(CellRange { max, min })
    }

    pub fn value(&self, x: Vertex, y: Vertex) -> Result<i64> {
        Ok(self.range(x, y)?.max)
    }

    /// `β̄_γ(x, y)` for every vertex `y`.
    pub fn values_from(&self, x: Vertex) -> Result<Vec<i64>> {
        self.graph.check_vertex(x)?;
        let mut out = vec![i64::MIN; self.graph.vertex_count()];
        for &z in &self.cell {
            let row = self.graph.dist_row(z);
            let dx = row[x] as i64;
            for (o, &d) in out.iter_mut().zip(&row) {
                *o = (*o).max(d as i64 - dx);
            }
        }
        Ok(out)
    }
}

/// `B_λ(x, y) = Σ λ(γ) β̄_γ(x, y)`.
#[derive(Debug, Clone)]
pub struct BarycenterFunctional<'g> {
    atoms: Vec<(QuasiCocycle<'g>, f64)>,
}

impl BarycenterFunctional<'_> {
    pub fn atoms(&self) -> impl Iterator<Item = (&QuasiCocycle<'_>, f64)> {
        self.atoms.iter().map(|(c, w)| (c, *w))
    }

    pub fn value(&self, x: Vertex, y: Vertex) -> Result<f64> {
        let mut total = 0.0;
        for (c, w) in &self.atoms {
            total += w * c.value(x, y)? as f64;
        }
        Ok(total)
    }

    /// `B_λ(x, y)` for every vertex `y`.
    pub fn values_from(&self, x: Vertex) -> Result<Vec<f64>> {
        let mut out: Option<Vec<f64>> = None;
        for (c, w) in &self.atoms {
            let vals = c.values_from(x)?;
            let acc = out.get_or_insert_with(|| vec![0.0; vals.len()]);
            for (a, v) in acc.iter_mut().zip(vals) {
                *a += w * v as f64;
            }
        }
        out.ok_or(Error::InvalidParameter("measure has no atoms"))
    }
}

/// `β̄_γ(x, y)` with a freshly computed cell.
pub fn busemann_quasi(
    ctx: &CocycleContext<'_>,
    endpoint: Vertex,
    x: Vertex,
    y: Vertex,
) -> Result<i64> {
    ctx.quasi_cocycle(endpoint)?.value(x, y)
}

/// `B_λ(x, y)` with freshly computed cells.
pub fn barycenter_functional(
    ctx: &CocycleContext<'_>,
    lambda: &BoundaryMeasure,
    x: Vertex,
    y: Vertex,
) -> Result<f64> {
    ctx.functional(lambda)?.value(x, y)
}

/// Lower and upper bounds for `β_z(x, y)` in terms of `ρ_x(y, z)`:
/// `d(x,y) + (2/a) log ρ_x(y,z)` and the same plus `2 log 2 / a`.
pub fn cocycle_estimate_bounds(
    g: &Graph,
    a: f64,
    x: Vertex,
    y: Vertex,
    z: Vertex,
) -> Result<(f64, f64)> {
    if y == z {
        return Err(Error::InvalidParameter("bounds need distinct points"));
    }
    let metric = VisualMetric::new(g, x, a)?;
    let rho = metric.rho(y, z);
    let lower = g.dist(x, y) as f64 + 2.0 / a * libm::log(rho);
    Ok((lower, lower + 2.0 * core::f64::consts::LN_2 / a))
}

/// Comparison of `B_λ(x, y)` with the trailing limsup of `∫ β_z(x, y) dλ_n(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BInfinityReport {
    pub functional: f64,
    pub limsup: f64,
    pub deviation: f64,
    pub bound: f64,
    pub holds: bool,
}

pub fn b_infinity_check(
    ctx: &CocycleContext<'_>,
    interior: &[FiniteMeasure],
    limit: &BoundaryMeasure,
    x: Vertex,
    y: Vertex,
    window: usize,
) -> Result<BInfinityReport> {
    if interior.is_empty() || window == 0 {
        return Err(Error::InvalidParameter(
            "need a nonempty sequence and window",
        ));
    }
    let g = ctx.graph();
    let functional = barycenter_functional(ctx, limit, x, y)?;
    let start = interior.len().saturating_sub(window);
    let mut limsup = f64::NEG_INFINITY;
    for m in &interior[start..] {
        let mut total = 0.0;
        for (&z, w) in m.iter() {
            g.check_vertex(z)?;
            total += w * (g.dist(y, z) as f64 - g.dist(x, z) as f64);
        }
        limsup = limsup.max(total);
    }
    let deviation = (functional - limsup).abs();
    let bound = ctx.c2();
    Ok(BInfinityReport {
        functional,
        limsup,
        deviation,
        bound,
        holds: deviation <= bound + 1e-9,
    })
}
