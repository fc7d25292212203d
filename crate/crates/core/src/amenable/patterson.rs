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

//! Pre-Patterson measures `ν_x` with density proportional to
//! `e^{-δ d(x, ·)}`, and their Cesàro averages along geodesic rays.
//!
//! Three models:
//! * a finite graph, truncated to a ball, with a tail estimate from the
//!   growth rate;
//! * the regular tree of degree `q`, exactly: a finite subtree `K` (the
//!   chart) carries the vertex masses and every vertex `k` of `K` carries the
//!   mass of the `q - deg_K(k)` branches leaving `K` there, in closed form;
//! * `H(ℝ)` with the counting measure on a horocyclic lattice.

use alloc::vec;
use alloc::vec::Vec;

use crate::cocycle::HorizonPoint;
use crate::graph::{first_geodesic, Graph, Vertex};
use crate::growth::critical_exponent;
use crate::hyperbolize::{h2_distance, BasePoint, BaseSpace, HPoint, HSpace};
use crate::measure::FiniteMeasure;
use crate::{Error, Result};

/// A normalized pre-Patterson measure with its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct PrePatterson<K: Ord> {
    pub measure: FiniteMeasure<K>,
    /// `Σ e^{-δ d(x, y)}` over the retained points.
    pub normalizer: f64,
    /// Estimated mass beyond the truncation, relative to the normalizer.
    pub tail_bound: f64,
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter(
            "exponent must be positive and finite",
        ));
    }
    Ok(())
}

/// `ν_x` on `B(x, truncation)` of a finite graph. The exponent must exceed
/// the growth rate of the graph; the tail beyond the truncation is bounded
/// by a geometric series at that rate.
pub fn pre_patterson_graph(
    g: &Graph,
    x: Vertex,
    delta: f64,
    truncation: u32,
) -> Result<PrePatterson<Vertex>> {
    check_delta(delta)?;
    g.check_vertex(x)?;
    let growth = critical_exponent(g, g.radius())?;
    if delta <= growth {
        return Err(Error::DivergentNormalizer { delta, growth });
    }
    let row = g.dist_row(x);
    let mut normalizer = 0.0;
    let mut rim = 0usize;
    let mut pairs = Vec::new();
    for (y, &d) in row.iter().enumerate() {
        if d <= truncation {
            let w = libm::exp(-delta * d as f64);
            normalizer += w;
            pairs.push((y, w));
            if d == truncation {
                rim += 1;
            }
        }
    }
    let ratio = libm::exp(growth - delta);
    let tail_bound =
        rim as f64 * libm::exp(-delta * truncation as f64) * ratio / (1.0 - ratio) / normalizer;
    let measure = FiniteMeasure::from_pairs(pairs.into_iter().map(|(y, w)| (y, w / normalizer)))?;
    Ok(PrePatterson {
        measure,
        normalizer,
        tail_bound,
    })
}

/// Where mass of the regular tree lives relative to a chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TreeSite {
    Vertex(Vertex),
    /// The branches leaving the chart at a vertex.
    Shadow(Vertex),
}

/// A measure on the regular tree, stored per chart vertex and per shadow.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeDensity {
    vertex: Vec<f64>,
    shadow: Vec<f64>,
}

impl TreeDensity {
    fn zero(n: usize) -> Self {
        TreeDensity {
            vertex: vec![0.0; n],
            shadow: vec![0.0; n],
        }
    }

    pub fn get(&self, site: TreeSite) -> f64 {
        match site {
            TreeSite::Vertex(v) => self.vertex[v],
            TreeSite::Shadow(v) => self.shadow[v],
        }
    }

    pub fn mass(&self) -> f64 {
        self.vertex.iter().sum::<f64>() + self.shadow.iter().sum::<f64>()
    }

    /// `Σ |μ - μ'|` over sites. Both densities are constant multiples of
    /// each other on every shadow, so this is the total variation on the
    /// tree itself.
    pub fn tv_distance(&self, other: &Self) -> f64 {
        let diff = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>();
        diff(&self.vertex, &other.vertex) + diff(&self.shadow, &other.shadow)
    }

    fn add_scaled(&mut self, other: &Self, factor: f64) {
        for (a, b) in self.vertex.iter_mut().zip(&other.vertex) {
            *a += factor * b;
        }
        for (a, b) in self.shadow.iter_mut().zip(&other.shadow) {
            *a += factor * b;
        }
    }

    pub fn to_measure(&self) -> FiniteMeasure<TreeSite> {
        let mut m = FiniteMeasure::new();
        for (v, &w) in self.vertex.iter().enumerate() {
            if w > 0.0 {
                m.add(TreeSite::Vertex(v), w);
            }
        }
        for (v, &w) in self.shadow.iter().enumerate() {
            if w > 0.0 {
                m.add(TreeSite::Shadow(v), w);
            }
        }
        m
    }
}

/// The `q`-regular tree seen through a finite chart.
#[derive(Debug, Clone)]
pub struct TreeModel<'g> {
    chart: &'g Graph,
    degree: usize,
}

impl<'g> TreeModel<'g> {
    pub fn new(chart: &'g Graph, degree: usize) -> Result<Self> {
        if !chart.is_tree() {
            return Err(Error::InvalidParameter("chart must be a tree"));
        }
        if degree < 2 || chart.max_degree() > degree {
            return Err(Error::InvalidParameter(
                "chart degrees must not exceed the tree degree",
            ));
        }
        Ok(TreeModel { chart, degree })
    }

    pub fn chart(&self) -> &'g Graph {
        self.chart
    }

    fn ratio(&self, delta: f64) -> Result<f64> {
        check_delta(delta)?;
        let r = (self.degree - 1) as f64 * libm::exp(-delta);
        if r >= 1.0 {
            return Err(Error::DivergentNormalizer {
                delta,
                growth: libm::log((self.degree - 1) as f64),
            });
        }
        Ok(r)
    }

    /// `Σ_y e^{-δ d(x, y)} = 1 + q e^{-δ} / (1 - (q-1) e^{-δ})`.
    pub fn normalizer(&self, delta: f64) -> Result<f64> {
        let r = self.ratio(delta)?;
        Ok(1.0 + self.degree as f64 * libm::exp(-delta) / (1.0 - r))
    }

    /// `ν_x` exactly. A branch leaving the chart at `k` carries
    /// `e^{-δ (d(x,k) + 1)} / (1 - (q-1) e^{-δ})`.
    pub fn pre_patterson(&self, x: Vertex, delta: f64) -> Result<TreeDensity> {
        self.chart.check_vertex(x)?;
        let r = self.ratio(delta)?;
        let z = self.normalizer(delta)?;
        let row = self.chart.dist_row(x);
        let n = self.chart.vertex_count();
        let mut out = TreeDensity::zero(n);
        for k in 0..n {
            let w = libm::exp(-delta * row[k] as f64) / z;
            out.vertex[k] = w;
            let missing = self.degree - self.chart.degree(k);
            if missing > 0 {
                out.shadow[k] = missing as f64 * w * libm::exp(-delta) / (1.0 - r);
            }
        }
        Ok(out)
    }

    /// `(1/m) Σ_{i<m} ν_{ξ(i·step)}` with `m = n / step` and `ξ` the geodesic
    /// from `x` to `far`, read as a ray toward the end beyond `far`.
    pub fn cesaro_geodesic(
        &self,
        x: Vertex,
        far: Vertex,
        n: u32,
        step: u32,
        delta: f64,
    ) -> Result<TreeDensity> {
        if step == 0 || n == 0 || n % step != 0 {
            return Err(Error::InvalidParameter(
                "n must be a positive multiple of the step",
            ));
        }
        self.chart.check_vertex(x)?;
        self.chart.check_vertex(far)?;
        let ray = first_geodesic(self.chart, x, &self.chart.dist_row(far));
        let terms = n / step;
        if (terms - 1) as usize * step as usize > ray.len() {
            return Err(Error::RayConstruction(
                "ray leaves the chart before parameter n",
            ));
        }
        let mut out = TreeDensity::zero(self.chart.vertex_count());
        for i in 0..terms {
            let p = ray.vertices()[(i * step) as usize];
            out.add_scaled(&self.pre_patterson(p, delta)?, 1.0 / terms as f64);
        }
        Ok(out)
    }
}

/// The chart extended by a path of `extra` new vertices continuing the ray
/// of `gamma` past its endpoint; returns the new chart and the far end.
pub fn extend_ray(g: &Graph, gamma: &HorizonPoint, extra: u32) -> Result<(Graph, Vertex)> {
    let n = g.vertex_count();
    let mut edges: Vec<(Vertex, Vertex)> = g.edges().collect();
    let mut prev = gamma.endpoint();
    g.check_vertex(prev)?;
    for i in 0..extra as usize {
        edges.push((prev, n + i));
        prev = n + i;
    }
    Ok((
        Graph::from_edges(n + extra as usize, &edges, g.base())?,
        prev,
    ))
}

/// Counting measure on `{(i h_t, j h e^{i h_t})}` in `H(ℝ)`: rows of points
/// at heights spaced by `h_t`, spaced by `h` in the hyperbolic length of
/// their row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorocyclicLattice {
    pub height_step: f64,
    pub row_step: f64,
}

impl Default for HorocyclicLattice {
    fn default() -> Self {
        HorocyclicLattice {
            height_step: 0.5,
            row_step: 0.5,
        }
    }
}

impl HorocyclicLattice {
    pub fn point(&self, i: i64, j: i64) -> (f64, f64) {
        let t = i as f64 * self.height_step;
        (t, j as f64 * self.row_step * libm::exp(t))
    }
}

fn line_coordinate(space: &HSpace, p: &HPoint) -> Result<f64> {
    space.check_base_point(&p.y)?;
    match (space.base(), &p.y) {
        (BaseSpace::Euclidean(1), BasePoint::Euclidean(v)) => Ok(v[0]),
        _ => Err(Error::InvalidParameter(
            "horocyclic lattices need a Euclidean line base",
        )),
    }
}

/// `ν_x` on the lattice points within `truncation` of `x` in `H(ℝ)`, whose
/// volume growth has exponent `1`. The tail is bounded through the volume
/// of hyperbolic discs.
pub fn pre_patterson_hspace(
    space: &HSpace,
    x: &HPoint,
    delta: f64,
    truncation: f64,
    lattice: HorocyclicLattice,
) -> Result<PrePatterson<(i64, i64)>> {
    check_delta(delta)?;
    let lx = line_coordinate(space, x)?;
    if delta <= 1.0 {
        return Err(Error::DivergentNormalizer { delta, growth: 1.0 });
    }
    if !(lattice.height_step > 0.0 && lattice.row_step > 0.0 && truncation > 0.0) {
        return Err(Error::InvalidParameter(
            "lattice steps and truncation must be positive",
        ));
    }
    let (h_t, h) = (lattice.height_step, lattice.row_step);
    let i_lo = libm::ceil((x.t - truncation) / h_t) as i64;
    let i_hi = libm::floor((x.t + truncation) / h_t) as i64;
    let sh = libm::sinh(truncation / 2.0);
    let mut pairs = Vec::new();
    let mut normalizer = 0.0;
    for i in i_lo..=i_hi {
        let t = i as f64 * h_t;
        let sv = libm::sinh((t - x.t) / 2.0);
        let room = sh * sh - sv * sv;
        if room < 0.0 {
            continue;
        }
        let gap = 2.0 * libm::sqrt(room) * libm::exp((t + x.t) / 2.0);
        let spacing = h * libm::exp(t);
        let j_lo = libm::ceil((lx - gap) / spacing) as i64;
        let j_hi = libm::floor((lx + gap) / spacing) as i64;
        for j in j_lo..=j_hi {
            let d = h2_distance(x.t, lx, t, j as f64 * spacing);
            if d <= truncation {
                let w = libm::exp(-delta * d);
                normalizer += w;
                pairs.push(((i, j), w));
            }
        }
    }
    // disc volume 2π(cosh r - 1) and density 1/(h_t h) give the tail
    // ∫_T^∞ 2π sinh(r) e^{-δr} dr / (h_t h) <= π e^{(1-δ)T} / ((δ-1) h_t h)
    let tail_bound = core::f64::consts::PI * libm::exp((1.0 - delta) * truncation)
        / ((delta - 1.0) * h_t * h)
        / normalizer;
    let measure = FiniteMeasure::from_pairs(pairs.into_iter().map(|(k, w)| (k, w / normalizer)))?;
    Ok(PrePatterson {
        measure,
        normalizer,
        tail_bound,
    })
}

/// `(1/m) Σ_{i<m} ν_{ξ(i·step)}`, `m = round(n / step)`, along the upward
/// vertical ray `ξ(t) = (t_x + t, y_x)` toward `ω`.
pub fn cesaro_geodesic_hspace(
    space: &HSpace,
    x: &HPoint,
    n: f64,
    step: f64,
    delta: f64,
    truncation: f64,
    lattice: HorocyclicLattice,
) -> Result<FiniteMeasure<(i64, i64)>> {
    if !(step > 0.0 && n >= step) {
        return Err(Error::InvalidParameter("n must be at least one step"));
    }
    let terms = libm::round(n / step) as usize;
    let mut out = FiniteMeasure::new();
    for i in 0..terms {
        let p = HPoint::new(x.t + i as f64 * step, x.y.clone());
        let nu = pre_patterson_hspace(space, &p, delta, truncation, lattice)?;
        out.add_scaled(&nu.measure, 1.0 / terms as f64);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::horizon;
    use crate::graph::{regular_tree, spider};

    #[test]
    fn line_closed_form() {
        let g = regular_tree(2, 60).unwrap();
        let nu = pre_patterson_graph(&g, g.base(), 1.0, 50).unwrap();
        let e = libm::exp(-1.0);
        // independent summation of the two-sided geometric series
        let z: f64 = 1.0 + 2.0 * (1..200).map(|r| libm::exp(-(r as f64))).sum::<f64>();
        assert!((nu.measure.get(&g.base()) - 1.0 / z).abs() < 1e-15);
        assert!((nu.measure.get(&g.base()) - (1.0 - e) / (1.0 + e)).abs() < 1e-12);
        assert!(nu.tail_bound < 1e-9);
        assert!(nu.measure.is_probability(1e-12));
    }

    #[test]
    fn divergent_exponent_rejected() {
        let g = regular_tree(4, 6).unwrap();
        assert!(matches!(
            pre_patterson_graph(&g, 0, 1.0, 3),
            Err(Error::DivergentNormalizer { .. })
        ));
        let m = TreeModel::new(&g, 4).unwrap();
        assert!(matches!(
            m.pre_patterson(0, 1.0),
            Err(Error::DivergentNormalizer { .. })
        ));
    }

    #[test]
    fn tree_model_matches_large_truncation() {
        // the model on a small chart against direct sums on a large ball
        let small = regular_tree(3, 2).unwrap();
        let big = regular_tree(3, 14).unwrap();
        let delta = 3.0;
        let m = TreeModel::new(&small, 3).unwrap();
        let nu = m.pre_patterson(0, delta).unwrap();
        assert!((nu.mass() - 1.0).abs() < 1e-12);
        let direct = pre_patterson_graph(&big, 0, delta, 14).unwrap();
        assert!((nu.get(TreeSite::Vertex(0)) - direct.measure.get(&0)).abs() < 1e-9);
        // a shadow at a leaf of the small chart is the whole subtree below it
        let leaf = (0..small.vertex_count())
            .find(|&v| small.depth(v) == 2)
            .unwrap();
        let below: f64 = (0..big.vertex_count())
            .filter(|&v| {
                big.depth(v) >= 3 && {
                    let mut a = v;
                    while big.depth(a) > 2 {
                        a = big.parent(a).unwrap();
                    }
                    a == leaf
                }
            })
            .map(|v| direct.measure.get(&v))
            .sum();
        assert!((nu.get(TreeSite::Shadow(leaf)) - below).abs() < 1e-9);
    }

    #[test]
    fn lipschitz_in_the_basepoint() {
        let g = regular_tree(4, 5).unwrap();
        let m = TreeModel::new(&g, 4).unwrap();
        let delta = 1.2;
        let nu0 = m.pre_patterson(0, delta).unwrap();
        for &w in g.neighbors(0) {
            let tv = nu0.tv_distance(&m.pre_patterson(w, delta).unwrap());
            assert!((tv - 2.0 * libm::tanh(delta / 2.0)).abs() < 1e-12);
            assert!(tv <= 3.0 * delta);
        }
    }

    #[test]
    fn geodesic_cesaro() {
        let g = regular_tree(4, 4).unwrap();
        let gamma = &horizon(&g, 4).unwrap()[7];
        let (chart, far) = extend_ray(&g, gamma, 40).unwrap();
        let m = TreeModel::new(&chart, 4).unwrap();
        let delta = 1.2;
        let single = m.cesaro_geodesic(0, far, 1, 1, delta).unwrap();
        assert_eq!(single, m.pre_patterson(0, delta).unwrap());
        let off = *chart
            .neighbors(0)
            .iter()
            .find(|&&v| v != gamma.ray()[1])
            .unwrap();
        let mut prev = f64::INFINITY;
        for n in [2, 4, 8, 16, 32] {
            let a = m.cesaro_geodesic(0, far, n, 1, delta).unwrap();
            let b = m.cesaro_geodesic(off, far, n, 1, delta).unwrap();
            let tv = a.tv_distance(&b);
            // the rays differ by one initial step, so the averages differ by
            // one term
            let expected = m.pre_patterson(off, delta).unwrap().tv_distance(
                &m.pre_patterson(
                    first_geodesic(&chart, 0, &chart.dist_row(far)).vertices()[n as usize - 1],
                    delta,
                )
                .unwrap(),
            ) / n as f64;
            assert!((tv - expected).abs() < 1e-12);
            assert!(tv < prev);
            prev = tv;
        }
        assert!(m.cesaro_geodesic(0, far, 64, 1, delta).is_err());
    }

    #[test]
    fn chart_must_fit() {
        let g = spider(5, 2).unwrap();
        assert!(TreeModel::new(&g, 4).is_err());
    }

    #[test]
    fn hspace_lattice_measure() {
        let space = HSpace::euclidean(1);
        let x = HPoint::new(0.0, BasePoint::Euclidean(alloc::vec![0.0]));
        let lattice = HorocyclicLattice::default();
        let nu = pre_patterson_hspace(&space, &x, 4.0, 8.0, lattice).unwrap();
        assert!(nu.measure.is_probability(1e-12));
        assert!(nu.tail_bound < 1e-6);
        assert!(matches!(
            pre_patterson_hspace(&space, &x, 1.0, 8.0, lattice),
            Err(Error::DivergentNormalizer { .. })
        ));
        assert!(pre_patterson_hspace(&HSpace::euclidean(2), &x, 4.0, 8.0, lattice).is_err());
    }

    #[test]
    fn hspace_vertical_cesaro_decays() {
        let space = HSpace::euclidean(1);
        let lattice = HorocyclicLattice::default();
        let x = HPoint::new(0.0, BasePoint::Euclidean(alloc::vec![0.0]));
        let x2 = HPoint::new(0.0, BasePoint::Euclidean(alloc::vec![1.0]));
        // the vertical rays from x and x2 converge
        let d = |t: f64| {
            space
                .distance(&HPoint::new(t, x.y.clone()), &HPoint::new(t, x2.y.clone()))
                .unwrap()
        };
        assert!(d(1.0) < d(0.0) && d(4.0) < d(1.0) && d(8.0) < 1e-3);
        let step = 0.25;
        let tv = |n: f64| {
            let a = cesaro_geodesic_hspace(&space, &x, n, step, 4.0, 6.0, lattice).unwrap();
            let b = cesaro_geodesic_hspace(&space, &x2, n, step, 4.0, 6.0, lattice).unwrap();
            a.tv_distance(&b)
        };
        let (t1, t4) = (tv(1.0), tv(4.0));
        assert!(t4 < t1, "{t1} {t4}");
    }
}
