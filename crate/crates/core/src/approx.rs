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

//! Weak* approximation of boundary measures by measures on spheres.
//!
//! A [`PartitionOfUnity`] over `S(x, n)` is built from the windows
//! `f_s(z) = max(0, 1 - (ρ_x(z, s) - ρ_x(z, S)) / ε)`, normalized to sum to
//! one at every vertex. Pairing a measure against it gives the projection
//! [`project_pi_n`].

use alloc::vec;
use alloc::vec::Vec;

use crate::boundary::VisualMetric;
use crate::cocycle::CocycleContext;
use crate::graph::Vertex;
use crate::measure::{BoundaryMeasure, FiniteMeasure, SignedMeasure};
use crate::{Error, Result};

/// Tolerance for ties between cell masses.
const TIE_TOLERANCE: f64 = 1e-12;

/// Normalized windows `φ_s`, `s ∈ S(x, n)`, evaluated at every vertex.
#[derive(Debug, Clone)]
pub struct PartitionOfUnity {
    basepoint: Vertex,
    n: u32,
    a: f64,
    epsilon: f64,
    sphere: Vec<Vertex>,
    // per vertex: (sphere index, φ, ρ_x(z, s)) for the nonzero windows
    weights: Vec<Vec<(usize, f64, f64)>>,
    to_sphere: Vec<f64>,
    sphere_rho: Vec<f64>,
}

fn rho_from(metric: &VisualMetric<'_>, s: Vertex, all: &[Vertex]) -> Vec<f64> {
    if metric.graph().is_tree() {
        all.iter().map(|&z| metric.varrho_pow(s, z)).collect()
    } else {
        metric.rho_row(s, all)
    }
}

/// Windows of width `epsilon` (default `e^{-an}`) over `S(x, n)`.
pub fn build_partition(
    ctx: &CocycleContext<'_>,
    x: Vertex,
    n: u32,
    epsilon: Option<f64>,
) -> Result<PartitionOfUnity> {
    let g = ctx.graph();
    g.check_vertex(x)?;
    let a = ctx.exponent();
    let epsilon = epsilon.unwrap_or_else(|| libm::exp(-a * n as f64));
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter("window width must be positive"));
    }
    let sphere = g.sphere(x, n);
    if sphere.is_empty() {
        return Err(Error::EmptySphere { radius: n });
    }
    let own;
    let metric = if ctx.metric().basepoint() == x {
        ctx.metric()
    } else {
        own = VisualMetric::new(g, x, a)?;
        &own
    };
    let count = g.vertex_count();
    let all: Vec<Vertex> = (0..count).collect();
    let m = sphere.len();
    let mut to_sphere = vec![f64::INFINITY; count];
    let mut candidates: Vec<Vec<(usize, f64)>> = vec![Vec::new(); count];
    let mut sphere_rho = vec![0.0; m * m];
    for (i, &s) in sphere.iter().enumerate() {
        let row = rho_from(metric, s, &all);
        for (j, &t) in sphere.iter().enumerate() {
            sphere_rho[i * m + j] = row[t];
        }
        for z in 0..count {
            let r = row[z];
            if r < to_sphere[z] {
                to_sphere[z] = r;
                let cut = r + epsilon;
                candidates[z].retain(|&(_, q)| q < cut);
            }
            if r < to_sphere[z] + epsilon {
                candidates[z].push((i, r));
            }
        }
    }
    // ρ is symmetric up to rounding in the chain search
    for i in 0..m {
        for j in i + 1..m {
            let v = sphere_rho[i * m + j].min(sphere_rho[j * m + i]);
            sphere_rho[i * m + j] = v;
            sphere_rho[j * m + i] = v;
        }
    }
    let weights = candidates
        .into_iter()
        .enumerate()
        .map(|(z, list)| {
            let raw: Vec<(usize, f64, f64)> = list
                .into_iter()
                .map(|(i, r)| (i, 1.0 - (r - to_sphere[z]) / epsilon, r))
                .filter(|&(_, f, _)| f > 0.0)
                .collect();
            let total: f64 = raw.iter().map(|&(_, f, _)| f).sum();
            raw.into_iter().map(|(i, f, r)| (i, f / total, r)).collect()
        })
        .collect();
    Ok(PartitionOfUnity {
        basepoint: x,
        n,
        a,
        epsilon,
        sphere,
        weights,
        to_sphere,
        sphere_rho,
    })
}

impl PartitionOfUnity {
    pub fn basepoint(&self) -> Vertex {
        self.basepoint
    }

    pub fn radius(&self) -> u32 {
        self.n
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `e^{-an}`, the scale of the support containments.
    pub fn scale(&self) -> f64 {
        libm::exp(-self.a * self.n as f64)
    }

    pub fn sphere(&self) -> &[Vertex] {
        &self.sphere
    }

    /// The nonzero values `(s, φ_s(z))`.
    pub fn phi(&self, z: Vertex) -> impl Iterator<Item = (Vertex, f64)> + '_ {
        self.weights[z].iter().map(|&(i, f, _)| (self.sphere[i], f))
    }

    pub fn phi_value(&self, s: Vertex, z: Vertex) -> f64 {
        self.phi(z).find(|&(t, _)| t == s).map_or(0.0, |(_, f)| f)
    }

    /// `ρ_x(z, S(x, n))`.
    pub fn distance_to_sphere(&self, z: Vertex) -> f64 {
        self.to_sphere[z]
    }

    fn sphere_index(&self, s: Vertex) -> Option<usize> {
        self.sphere.iter().position(|&t| t == s)
    }

    /// `ρ_x(s, t)` between sphere points.
    pub fn sphere_rho(&self, s: Vertex, t: Vertex) -> Option<f64> {
        let (i, j) = (self.sphere_index(s)?, self.sphere_index(t)?);
        Some(self.sphere_rho[i * self.sphere.len() + j])
    }

    /// `(s, z, φ_s(z))` over all nonzero entries.
    pub fn entries(&self) -> impl Iterator<Item = (Vertex, Vertex, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .flat_map(move |(z, list)| list.iter().map(move |&(i, f, _)| (self.sphere[i], z, f)))
    }

    /// Support containments for `π_n δ_γ`: the support lies in
    /// `B_x(γ, 2e^{-an})` and in `B_x(s, 3e^{-an})` for some sphere point
    /// `s`.
    pub fn containment(&self, gamma: Vertex) -> Containment {
        let scale = self.scale();
        let list = &self.weights[gamma];
        let reach = list.iter().map(|&(_, _, r)| r).fold(0.0, f64::max);
        let m = self.sphere.len();
        let cell_radius = (0..m)
            .map(|c| {
                list.iter()
                    .map(|&(i, _, _)| self.sphere_rho[c * m + i])
                    .fold(0.0, f64::max)
            })
            .fold(f64::INFINITY, f64::min);
        Containment {
            gamma,
            reach,
            cell_radius,
            gap: self.to_sphere[gamma],
            within_two: reach <= 2.0 * scale * (1.0 + TIE_TOLERANCE),
            within_three: cell_radius <= 3.0 * scale * (1.0 + TIE_TOLERANCE),
        }
    }
}

/// Support radii of `π_n δ_γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Containment {
    pub gamma: Vertex,
    /// `max ρ_x(γ, s)` over the support.
    pub reach: f64,
    /// Smallest radius of a sphere-centred ball holding the support.
    pub cell_radius: f64,
    /// `ρ_x(γ, S)`, at most `e^{-an}` in the infinite model.
    pub gap: f64,
    pub within_two: bool,
    pub within_three: bool,
}

/// `π_n θ(s) = Σ_z θ(z) φ_s(z)`.
pub fn project_pi_n(p: &PartitionOfUnity, theta: &FiniteMeasure<Vertex>) -> FiniteMeasure<Vertex> {
    let mut out = FiniteMeasure::new();
    for (&z, w) in theta.iter() {
        for (s, f) in p.phi(z) {
            out.add(s, w * f);
        }
    }
    out
}

/// [`project_pi_n`] for signed measures.
pub fn project_pi_n_signed(
    p: &PartitionOfUnity,
    theta: &SignedMeasure<Vertex>,
) -> Result<SignedMeasure<Vertex>> {
    let mut acc: Vec<(Vertex, f64)> = Vec::new();
    for (&z, w) in theta.iter() {
        acc.extend(p.phi(z).map(|(s, f)| (s, w * f)));
    }
    SignedMeasure::from_pairs(acc)
}

/// Positive and negative parts with disjoint supports.
pub fn hahn_split<K: Ord + Clone>(m: &SignedMeasure<K>) -> (FiniteMeasure<K>, FiniteMeasure<K>) {
    m.hahn_split()
}

/// One `n` of a weak* convergence series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakStarRow {
    pub n: u32,
    /// `|∫ f dπ_nθ - ∫ f dθ|`.
    pub difference: f64,
    /// `Lip(f) · 3e^{-an}`.
    pub bound: f64,
    pub holds: bool,
}

/// `|∫ f dπ_nθ - ∫ f dθ|` for each `n`, with `f` given at every vertex and
/// `lipschitz` its constant under `ρ_x` at the base.
pub fn weakstar_convergence_check(
    ctx: &CocycleContext<'_>,
    theta: &BoundaryMeasure,
    f: &[f64],
    lipschitz: f64,
    n_list: &[u32],
) -> Result<Vec<WeakStarRow>> {
    let g = ctx.graph();
    if f.len() != g.vertex_count() {
        return Err(Error::InvalidParameter(
            "test function needs one value per vertex",
        ));
    }
    if !(lipschitz >= 0.0) {
        return Err(Error::InvalidParameter(
            "Lipschitz constant must be nonnegative",
        ));
    }
    for &z in theta.support() {
        g.check_vertex(z)?;
    }
    let exact = theta.integrate(|&z| f[z]);
    n_list
        .iter()
        .map(|&n| {
            let p = build_partition(ctx, g.base(), n, None)?;
            let difference = (project_pi_n(&p, theta).integrate(|&s| f[s]) - exact).abs();
            let bound = lipschitz * 3.0 * p.scale();
            Ok(WeakStarRow {
                n,
                difference,
                bound,
                holds: difference <= bound + TIE_TOLERANCE,
            })
        })
        .collect()
}

/// Atomic part of a boundary measure read off the sphere projections.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomReport {
    /// `W_n = max_s π_nθ[B_x(s, 3e^{-an})]` for `n = 1..=n_max`.
    pub series: Vec<f64>,
    /// `|W_n - W_{n-1}|` for `n = 2..=n_max`.
    pub stabilization: Vec<f64>,
    /// `W_{n_max}`.
    pub weight: f64,
    /// Sphere points whose cells attain the maximum at `n_max`.
    pub centers: Vec<Vertex>,
    /// Support points of `θ` within `3e^{-an}` of an attaining cell.
    pub atomic_support: Vec<Vertex>,
    /// Support pairs of `θ` closer than `6e^{-a n_max}`, which the horizon
    /// cannot separate.
    pub unresolved: Vec<(Vertex, Vertex)>,
}

fn max_cell(p: &PartitionOfUnity, projected: &FiniteMeasure<Vertex>) -> (f64, Vec<usize>) {
    let m = p.sphere.len();
    let radius = 3.0 * p.scale() * (1.0 + TIE_TOLERANCE);
    let masses: Vec<f64> = (0..m)
        .map(|c| {
            (0..m)
                .filter(|&j| p.sphere_rho[c * m + j] <= radius)
                .map(|j| projected.get(&p.sphere[j]))
                .sum()
        })
        .collect();
    let best = masses.iter().copied().fold(0.0, f64::max);
    let centers = (0..m)
        .filter(|&c| masses[c] >= best - TIE_TOLERANCE)
        .collect();
    (best, centers)
}

/// Largest cell mass of `π_nθ` for `n` up to `n_max`, with the support of
/// `θ` near the maximizing cells at `n_max`.
pub fn extract_atoms(
    ctx: &CocycleContext<'_>,
    theta: &BoundaryMeasure,
    n_max: u32,
) -> Result<AtomReport> {
    let g = ctx.graph();
    theta.require_probability()?;
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be positive"));
    }
    if n_max > ctx.radius() {
        return Err(Error::HorizonTooShallow {
            needed: n_max,
            available: ctx.radius(),
        });
    }
    for &z in theta.support() {
        g.check_vertex(z)?;
    }
    let mut series = Vec::with_capacity(n_max as usize);
    let mut last = None;
    for n in 1..=n_max {
        let p = build_partition(ctx, g.base(), n, None)?;
        let (w, centers) = max_cell(&p, &project_pi_n(&p, theta));
        series.push(w);
        last = Some((p, centers));
    }
    let (p, centers) = last.expect("n_max is positive");
    let stabilization = series.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let support: Vec<Vertex> = theta.support().copied().collect();
    let metric = ctx.metric();
    let radius = 3.0 * p.scale() * (1.0 + TIE_TOLERANCE);
    let center_vertices: Vec<Vertex> = centers.iter().map(|&c| p.sphere[c]).collect();
    let mut atomic_support = Vec::new();
    let mut unresolved = Vec::new();
    for (i, &z) in support.iter().enumerate() {
        let row = rho_from(metric, z, &(0..g.vertex_count()).collect::<Vec<_>>());
        if center_vertices.iter().any(|&c| row[c] <= radius) {
            atomic_support.push(z);
        }
        for &w in &support[i + 1..] {
            if row[w] < 2.0 * 3.0 * p.scale() {
                unresolved.push((z, w));
            }
        }
    }
    Ok(AtomReport {
        weight: *series.last().expect("n_max is positive"),
        series,
        stabilization,
        centers: center_vertices,
        atomic_support,
        unresolved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, regular_tree};
    use crate::HalfInt;

    fn tree_ctx(g: &crate::graph::Graph, a: f64) -> CocycleContext<'_> {
        CocycleContext::new(g, g.radius(), HalfInt::ZERO)
            .unwrap()
            .with_exponent(a)
            .unwrap()
    }

    #[test]
    fn windows_sum_to_one() {
        let g = cycle(9).unwrap();
        let ctx = CocycleContext::new(&g, 4, HalfInt::from_twice(3)).unwrap();
        let p = build_partition(&ctx, 0, 2, None).unwrap();
        for z in 0..9 {
            let total: f64 = p.phi(z).map(|(_, f)| f).sum();
            assert!((total - 1.0).abs() < 1e-12);
            assert!(p.phi(z).all(|(_, f)| f > 0.0));
        }
        for &s in p.sphere() {
            assert_eq!(p.distance_to_sphere(s), 0.0);
        }
    }

    #[test]
    fn single_point_sphere() {
        let g = regular_tree(2, 5).unwrap();
        let ctx = tree_ctx(&g, 1.0);
        // the line has two points on every sphere about the base; take an end
        let end = (0..g.vertex_count()).find(|&v| g.depth(v) == 5).unwrap();
        let p = build_partition(&ctx, end, 10, None).unwrap();
        assert_eq!(p.sphere().len(), 1);
        for z in 0..g.vertex_count() {
            assert_eq!(p.phi_value(p.sphere()[0], z), 1.0);
        }
        assert!(matches!(
            build_partition(&ctx, end, 11, None),
            Err(Error::EmptySphere { .. })
        ));
    }

    #[test]
    fn window_rule_by_table_scan() {
        let g = regular_tree(3, 6).unwrap();
        let ctx = tree_ctx(&g, 0.7);
        let p = build_partition(&ctx, 0, 3, None).unwrap();
        let metric = ctx.metric();
        let eps = p.epsilon();
        for z in 0..g.vertex_count() {
            let rows: Vec<f64> = p.sphere().iter().map(|&s| metric.rho(z, s)).collect();
            let min = rows.iter().copied().fold(f64::INFINITY, f64::min);
            for (k, &s) in p.sphere().iter().enumerate() {
                assert_eq!(p.phi_value(s, z) > 0.0, rows[k] < min + eps, "z={z} s={s}");
            }
        }
    }

    #[test]
    fn projection_preserves_mass_and_symmetry() {
        let g = regular_tree(3, 6).unwrap();
        let ctx = tree_ctx(&g, 0.5);
        let horizon: Vec<Vertex> = (0..g.vertex_count()).filter(|&v| g.depth(v) == 6).collect();
        let p = build_partition(&ctx, 0, 3, None).unwrap();
        let out = project_pi_n(&p, &FiniteMeasure::uniform(horizon.iter().copied()));
        assert!((out.mass() - 1.0).abs() < 1e-12);
        let uniform = 1.0 / p.sphere().len() as f64;
        for &s in p.sphere() {
            assert!((out.get(&s) - uniform).abs() < 1e-12);
        }
        let s = p.sphere()[4];
        let dirac = project_pi_n(&p, &FiniteMeasure::dirac(s));
        assert!((dirac.mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn signed_projection_is_norm_one() {
        let g = cycle(12).unwrap();
        let ctx = CocycleContext::new(&g, 6, HalfInt::from_twice(5)).unwrap();
        let p = build_partition(&ctx, 0, 3, None).unwrap();
        let theta = SignedMeasure::from_pairs([(6, 0.5), (5, -0.3), (7, 0.2), (1, -0.1)]).unwrap();
        let out = project_pi_n_signed(&p, &theta).unwrap();
        assert!(out.norm() <= theta.norm() + 1e-12);
        assert!((out.mass() - theta.mass()).abs() < 1e-12);
    }

    #[test]
    fn containments_on_tree() {
        let g = regular_tree(3, 8).unwrap();
        let ctx = tree_ctx(&g, 2.0);
        for n in 2..=6 {
            let p = build_partition(&ctx, 0, n, None).unwrap();
            for gamma in (0..g.vertex_count()).filter(|&v| g.depth(v) == 8) {
                let c = p.containment(gamma);
                assert!(c.within_two && c.within_three);
                assert!(c.gap <= p.scale() * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn weakstar_series() {
        let g = regular_tree(3, 8).unwrap();
        let ctx = tree_ctx(&g, 1.0);
        let gamma = (0..g.vertex_count()).find(|&v| g.depth(v) == 8).unwrap();
        let theta = FiniteMeasure::dirac(gamma);
        let constant = vec![2.5; g.vertex_count()];
        for row in weakstar_convergence_check(&ctx, &theta, &constant, 0.0, &[1, 3, 5]).unwrap() {
            assert!(row.difference < 1e-12 && row.holds);
        }
        let f: Vec<f64> = (0..g.vertex_count())
            .map(|z| ctx.metric().rho(z, gamma))
            .collect();
        for row in weakstar_convergence_check(&ctx, &theta, &f, 1.0, &[1, 3, 5, 7]).unwrap() {
            assert!(row.difference <= 2.0 * libm::exp(-(row.n as f64)) + 1e-12);
            assert!(row.holds);
        }
    }

    #[test]
    fn atoms_of_simple_measures() {
        let g = regular_tree(3, 8).unwrap();
        let ctx = tree_ctx(&g, 2.0);
        let horizon: Vec<Vertex> = (0..g.vertex_count()).filter(|&v| g.depth(v) == 8).collect();
        let one = extract_atoms(&ctx, &FiniteMeasure::dirac(horizon[0]), 6).unwrap();
        assert!((one.weight - 1.0).abs() < 1e-12);
        assert_eq!(one.atomic_support, vec![horizon[0]]);
        let far = *horizon.last().unwrap();
        let two = extract_atoms(
            &ctx,
            &FiniteMeasure::from_pairs([(horizon[0], 0.5), (far, 0.5)]).unwrap(),
            6,
        )
        .unwrap();
        assert!((two.weight - 0.5).abs() < 1e-12);
        assert_eq!(two.atomic_support, vec![horizon[0], far]);
        assert!(two.unresolved.is_empty());
        let close = extract_atoms(
            &ctx,
            &FiniteMeasure::from_pairs([(horizon[0], 0.5), (horizon[1], 0.5)]).unwrap(),
            6,
        )
        .unwrap();
        assert_eq!(close.unresolved, vec![(horizon[0], horizon[1])]);
        assert!(extract_atoms(&ctx, &FiniteMeasure::dirac(horizon[0]), 9).is_err());
    }
}
