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

//! The measures `λ_n(x, γ) = (1/n) Σ_{k=1}^n m_{Z(x,γ,n,k)}` on the horizon
//! model.
//!
//! `Y(x,γ,n,k)` collects the points `ξ(n)` of rays `ξ` toward `γ` starting in
//! `B(x, k)`. A ray from `s` toward `γ` is surrogated by a geodesic from `s`
//! to the horizon endpoint `e` of `γ`: the lexicographically first one, or
//! failing that any enumerated one, whose terminal window stays within `C₁`
//! of the ray of `γ`. The window is the last `⌊R/4⌋` steps, started no
//! earlier than `d(s, base)`, the parameter after which rays to a common
//! point fellow-travel. On trees every geodesic to `e` passes.
//!
//! When `n` exceeds `d(s, e)` the point `ξ(n)` lies past the horizon. With
//! the virtual tail enabled it is recorded as [`Site::Beyond`]: the ray of
//! `γ` continued past `e`, which is exact on trees whose branching goes on
//! beyond the truncation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_rational::BigRational;

use super::sandwich::{sandwich_bound_holds, sandwich_bound_value, NestedCesaro};
use crate::cocycle::{CocycleContext, HorizonPoint};
use crate::graph::{enumerate_geodesics, first_geodesic, Graph, Vertex};
use crate::growth::LocalBfs;
use crate::measure::rational_to_f64;
use crate::{Error, Result};

/// A point of the horizon model: a vertex, or a point on the continuation of
/// a horizon ray `p >= 1` steps past its endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Site {
    Vertex(Vertex),
    Beyond(u32),
}

/// Tuning of the horizon construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LambdaParams {
    /// Neighbourhood radius taking `Y` to `Z`.
    pub r: u32,
    /// Fellow-travel constant; `ceil(8δ)` when `None`.
    pub c1: Option<u32>,
    /// Record points past the horizon as [`Site::Beyond`] instead of failing.
    pub virtual_tail: bool,
    /// Geodesics enumerated per start when the first one is rejected.
    pub geodesic_cap: usize,
}

impl Default for LambdaParams {
    fn default() -> Self {
        LambdaParams {
            r: 0,
            c1: None,
            virtual_tail: false,
            geodesic_cap: 64,
        }
    }
}

/// Geodesics from arbitrary starts toward one horizon point.
#[derive(Debug, Clone)]
pub struct RaySurrogate<'g> {
    graph: &'g Graph,
    endpoint: Vertex,
    to_end: Vec<u32>,
    to_ray: Vec<u32>,
    c1: u32,
    window: usize,
    params: LambdaParams,
}

impl<'g> RaySurrogate<'g> {
    pub fn new(
        ctx: &CocycleContext<'g>,
        gamma: &HorizonPoint,
        params: LambdaParams,
    ) -> Result<Self> {
        let g = ctx.graph();
        let endpoint = gamma.endpoint();
        g.check_vertex(endpoint)?;
        if params.geodesic_cap == 0 {
            return Err(Error::InvalidParameter("geodesic cap must be positive"));
        }
        let c1 = params
            .c1
            .unwrap_or_else(|| libm::ceil(8.0 * ctx.delta().to_f64()) as u32);
        Ok(RaySurrogate {
            graph: g,
            endpoint,
            to_end: g.dist_row(endpoint),
            to_ray: g.multi_source_bfs(gamma.ray().iter().copied()),
            c1,
            window: (gamma.depth() / 4) as usize,
            params,
        })
    }

    pub fn c1(&self) -> u32 {
        self.c1
    }

    fn accepted(&self, path: &[Vertex], start_depth: usize) -> bool {
        let len = path.len() - 1;
        let from = start_depth.max(len.saturating_sub(self.window));
        (from..=len).all(|t| self.to_ray[path[t]] <= self.c1)
    }

    /// The accepted geodesic from `s` to the horizon endpoint, if any.
    pub fn geodesic(&self, s: Vertex) -> Result<Option<Vec<Vertex>>> {
        self.graph.check_vertex(s)?;
        let depth = self.graph.depth(s) as usize;
        let first = first_geodesic(self.graph, s, &self.to_end);
        if self.accepted(first.vertices(), depth) {
            return Ok(Some(first.vertices().to_vec()));
        }
        for path in enumerate_geodesics(self.graph, s, self.endpoint, self.params.geodesic_cap)? {
            if self.accepted(path.vertices(), depth) {
                return Ok(Some(path.vertices().to_vec()));
            }
        }
        Ok(None)
    }

    /// `ξ_s(n)` for the accepted geodesic from `s`.
    pub fn position(&self, s: Vertex, n: u32) -> Result<Option<Site>> {
        self.graph.check_vertex(s)?;
        let len = self.to_end[s];
        if n > len && !self.params.virtual_tail {
            return Err(Error::HorizonTooShallow {
                needed: n,
                available: len,
            });
        }
        // the first geodesic is accepted in the common case; walk it lazily
        let Some(path) = self.geodesic(s)? else {
            return Ok(None);
        };
        Ok(Some(if n <= len {
            Site::Vertex(path[n as usize])
        } else {
            Site::Beyond(n - len)
        }))
    }
}

/// The sets `Z(x,γ,n,k)` for `k = 1..=kmax` as a nested Cesàro average.
pub fn lambda_sets(
    surrogate: &RaySurrogate<'_>,
    x: Vertex,
    n: u32,
    kmax: u32,
) -> Result<NestedCesaro<Site>> {
    let g = surrogate.graph;
    g.check_vertex(x)?;
    if n == 0 || kmax == 0 {
        return Err(Error::InvalidParameter("n and k must be positive"));
    }
    let r = surrogate.params.r;
    let from_x = g.dist_row(x);
    let mut layers: Vec<Vec<Vertex>> = alloc::vec![Vec::new(); kmax as usize + 1];
    for (v, &d) in from_x.iter().enumerate() {
        if d <= kmax {
            layers[d as usize].push(v);
        }
    }
    let mut first: BTreeMap<Site, usize> = BTreeMap::new();
    let mut seen: BTreeSet<Site> = BTreeSet::new();
    let mut sizes = Vec::with_capacity(kmax as usize);
    let mut bfs = LocalBfs::new(g.vertex_count());
    for k in 1..=kmax as usize {
        let layer_range = if k == 1 { 0..=1 } else { k..=k };
        for &s in layer_range.flat_map(|d| layers[d].iter()) {
            let Some(site) = surrogate.position(s, n)? else {
                continue;
            };
            if !seen.insert(site) {
                continue;
            }
            match site {
                Site::Vertex(v) if r > 0 => bfs.run(g, v, r, |w, _| {
                    first.entry(Site::Vertex(w)).or_insert(k - 1);
                }),
                Site::Beyond(_) if r > 0 => {
                    return Err(Error::InvalidParameter(
                        "neighbourhoods of points past the horizon need r = 0",
                    ))
                }
                _ => {
                    first.entry(site).or_insert(k - 1);
                }
            }
        }
        if first.is_empty() {
            return Err(Error::RayConstruction(
                "no geodesic from the ball follows the horizon ray",
            ));
        }
        sizes.push(first.len());
    }
    Ok(NestedCesaro::from_parts(sizes, first))
}

/// `λ_n(x, γ)` with exact weights.
pub fn build_lambda_n(
    ctx: &CocycleContext<'_>,
    x: Vertex,
    gamma: &HorizonPoint,
    n: u32,
    params: LambdaParams,
) -> Result<NestedCesaro<Site>> {
    let surrogate = RaySurrogate::new(ctx, gamma, params)?;
    lambda_sets(&surrogate, x, n, n)
}

/// One row of a decay experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayRow {
    pub n: u32,
    pub tv: BigRational,
    /// Sandwich bound with `τ = d(x, x')`; `2` when `n <= τ`.
    pub bound: f64,
    /// Exact comparison of `tv` with `bound`.
    pub holds: bool,
    /// Whether the computed set sequences satisfy the sandwich inclusions.
    pub sandwiched: bool,
}

impl DecayRow {
    pub fn tv_f64(&self) -> f64 {
        rational_to_f64(&self.tv)
    }
}

fn sandwiched(a: &NestedCesaro<Site>, b: &NestedCesaro<Site>, tau: usize) -> bool {
    let kmax = a.len();
    let inside = |p: &NestedCesaro<Site>, q: &NestedCesaro<Site>| {
        p.points()
            .all(|(site, j)| j + tau >= kmax || q.entry_index(site).is_some_and(|i| i <= j + tau))
    };
    inside(a, b) && inside(b, a)
}

/// `‖λ_n(x,γ) - λ_n(x',γ)‖` for each `n`, against the sandwich bound.
pub fn lambda_decay_experiment(
    ctx: &CocycleContext<'_>,
    x: Vertex,
    x2: Vertex,
    gamma: &HorizonPoint,
    n_list: &[u32],
    params: LambdaParams,
) -> Result<Vec<DecayRow>> {
    let g = ctx.graph();
    g.check_vertex(x)?;
    g.check_vertex(x2)?;
    let tau = g.dist(x, x2);
    let surrogate = RaySurrogate::new(ctx, gamma, params)?;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let kmax = n + tau;
        let a = lambda_sets(&surrogate, x, n, kmax)?;
        let b = lambda_sets(&surrogate, x2, n, kmax)?;
        let tv = a.prefix(n as usize)?.tv_distance(&b.prefix(n as usize)?);
        let (bound, holds) = if n > tau {
            let (m1, mlast) = (a.sizes()[0], a.sizes()[kmax as usize - 1]);
            let (n, t) = (n as usize, tau as usize);
            (
                sandwich_bound_value(n, t, m1, mlast)?,
                sandwich_bound_holds(&tv, n, t, m1, mlast)?,
            )
        } else {
            (2.0, rational_to_f64(&tv) <= 2.0)
        };
        rows.push(DecayRow {
            n,
            tv,
            bound,
            holds,
            sandwiched: sandwiched(&a, &b, tau as usize),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::horizon;
    use crate::graph::{cycle, regular_tree, swap_base_branches};
    use crate::HalfInt;
    use num_traits::Zero;

    /// `ξ_s(n)` on a rooted tree: climb from `s` to the ray, then walk the
    /// ray outward.
    fn tree_position(g: &Graph, gamma: &HorizonPoint, s: Vertex, n: u32) -> Site {
        let ray = gamma.ray();
        let mut up = s;
        let mut climbed = 0;
        while !ray.contains(&up) {
            if climbed == n {
                return Site::Vertex(up);
            }
            up = g.parent(up).unwrap();
            climbed += 1;
        }
        let depth = g.depth(up) + (n - climbed);
        if depth as usize >= ray.len() {
            Site::Beyond(depth - gamma.depth())
        } else {
            Site::Vertex(ray[depth as usize])
        }
    }

    fn tree_oracle(g: &Graph, gamma: &HorizonPoint, x: Vertex, n: u32) -> NestedCesaro<Site> {
        let row = g.dist_row(x);
        let sets: Vec<Vec<Site>> = (1..=n)
            .map(|k| {
                let mut set: Vec<Site> = (0..g.vertex_count())
                    .filter(|&s| row[s] <= k)
                    .map(|s| tree_position(g, gamma, s, n))
                    .collect();
                set.sort();
                set.dedup();
                set
            })
            .collect();
        NestedCesaro::new(&sets).unwrap()
    }

    fn tree_setup() -> (crate::Graph, Vec<HorizonPoint>) {
        let g = regular_tree(3, 7).unwrap();
        let h = horizon(&g, 7).unwrap();
        (g, h)
    }

    #[test]
    fn tree_matches_ray_enumeration() {
        let (g, h) = tree_setup();
        let ctx = CocycleContext::new(&g, 7, HalfInt::ZERO).unwrap();
        let params = LambdaParams {
            virtual_tail: true,
            ..LambdaParams::default()
        };
        let gamma = &h[20];
        for (x, n) in [
            (gamma.ray()[2], 4),
            (g.base(), 6),
            (h[0].ray()[3], 9),
            (gamma.ray()[1], 1),
        ] {
            let got = build_lambda_n(&ctx, x, gamma, n, params).unwrap();
            assert_eq!(got, tree_oracle(&g, gamma, x, n), "x={x} n={n}");
        }
    }

    #[test]
    fn support_on_the_ray() {
        let (g, h) = tree_setup();
        let ctx = CocycleContext::new(&g, 7, HalfInt::ZERO).unwrap();
        let gamma = &h[11];
        let lam = build_lambda_n(&ctx, gamma.ray()[1], gamma, 3, LambdaParams::default()).unwrap();
        for (site, _) in lam.points() {
            let Site::Vertex(v) = *site else {
                panic!("inside the horizon")
            };
            assert!(gamma.ray().contains(&v));
        }
        assert!(lam.to_rational().mass() == num_rational::BigRational::from_integer(1.into()));
    }

    #[test]
    fn single_term() {
        let (g, h) = tree_setup();
        let ctx = CocycleContext::new(&g, 7, HalfInt::ZERO).unwrap();
        let gamma = &h[3];
        let x = gamma.ray()[2];
        let lam = build_lambda_n(&ctx, x, gamma, 1, LambdaParams::default()).unwrap();
        assert_eq!(lam.len(), 1);
        let z: Vec<Site> = lam.points().map(|(s, _)| *s).collect();
        let surrogate = RaySurrogate::new(&ctx, gamma, LambdaParams::default()).unwrap();
        let mut expected: Vec<Site> = g
            .ball(x, 1)
            .into_iter()
            .map(|s| surrogate.position(s, 1).unwrap().unwrap())
            .collect();
        expected.sort();
        expected.dedup();
        assert_eq!(z, expected);
    }

    #[test]
    fn shallow_horizon_is_reported() {
        let (g, h) = tree_setup();
        let ctx = CocycleContext::new(&g, 7, HalfInt::ZERO).unwrap();
        let err = build_lambda_n(&ctx, g.base(), &h[0], 9, LambdaParams::default());
        assert!(matches!(err, Err(Error::HorizonTooShallow { .. })));
    }

    #[test]
    fn same_basepoint_gives_zero() {
        let (g, h) = tree_setup();
        let ctx = CocycleContext::new(&g, 7, HalfInt::ZERO).unwrap();
        let params = LambdaParams {
            virtual_tail: true,
            ..LambdaParams::default()
        };
        let rows = lambda_decay_experiment(&ctx, 5, 5, &h[4], &[1, 2, 4, 8], params).unwrap();
        assert!(rows
            .iter()
            .all(|r| r.tv.is_zero() && r.holds && r.sandwiched));
    }

    #[test]
    fn decay_respects_the_bound() {
        let (g, h) = tree_setup();
        let ctx = CocycleContext::new(&g, 7, HalfInt::ZERO).unwrap();
        let params = LambdaParams {
            virtual_tail: true,
            ..LambdaParams::default()
        };
        let gamma = &h[9];
        let x = gamma.ray()[1];
        let x2 = h.iter().map(|p| p.ray()[1]).find(|&v| v != x).unwrap();
        assert_eq!(g.dist(x, x2), 2);
        let rows = lambda_decay_experiment(&ctx, x, x2, gamma, &[2, 4, 8, 16], params).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].tv < w[0].tv);
        }
        assert!(rows.iter().all(|r| r.holds && r.sandwiched));
    }

    #[test]
    fn equivariant_under_branch_swap() {
        let (g, h) = tree_setup();
        let ctx = CocycleContext::new(&g, 7, HalfInt::ZERO).unwrap();
        let kids = g.neighbors(g.base()).to_vec();
        let perm = swap_base_branches(&g, kids[0], kids[2]).unwrap();
        let params = LambdaParams {
            virtual_tail: true,
            ..LambdaParams::default()
        };
        let gamma = &h[2];
        let moved = HorizonPoint::new(&g, perm[gamma.endpoint()]).unwrap();
        let x = h[30].ray()[2];
        let a = build_lambda_n(&ctx, x, gamma, 6, params)
            .unwrap()
            .to_rational();
        let b = build_lambda_n(&ctx, perm[x], &moved, 6, params)
            .unwrap()
            .to_rational();
        let image = a.push_forward(|s| match *s {
            Site::Vertex(v) => Site::Vertex(perm[v]),
            beyond => beyond,
        });
        assert!(image.tv_distance(&b).is_zero());
    }

    #[test]
    fn cycle_with_fellow_travel_window() {
        let g = cycle(24).unwrap();
        let ctx = CocycleContext::with_estimator(&g, 12, crate::graph::DeltaEstimator::FourPoint)
            .unwrap();
        let gamma = &horizon(&g, 12).unwrap()[0];
        let lam = build_lambda_n(&ctx, g.base(), gamma, 6, LambdaParams::default()).unwrap();
        assert!(lam.to_rational().mass() == num_rational::BigRational::from_integer(1.into()));
    }
}
