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

//! Growth of balls and spheres, packing numbers, temperedness of the
//! counting measure, and the critical exponent.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Graph, Vertex};
use crate::{Error, Result};

/// Packing scales reported by [`growth_profile`].
pub const PACKING_SCALES: [u32; 3] = [1, 2, 3];

/// Packing numbers are skipped when `B(base, rmax)` exceeds this size.
pub const PACKING_LIMIT: usize = 200_000;

/// Breadth-first search truncated at a radius, reusing its buffers.
pub(crate) struct LocalBfs {
    stamp: Vec<u32>,
    dist: Vec<u32>,
    round: u32,
    queue: VecDeque<Vertex>,
}

impl LocalBfs {
    pub(crate) fn new(n: usize) -> Self {
        LocalBfs {
            stamp: vec![0; n],
            dist: vec![0; n],
            round: 0,
            queue: VecDeque::new(),
        }
    }

    /// Calls `visit(v, d)` for every `v` with `d = d(source, v) <= r`.
    pub(crate) fn run(
        &mut self,
        g: &Graph,
        source: Vertex,
        r: u32,
        mut visit: impl FnMut(Vertex, u32),
    ) {
        self.round += 1;
        let round = self.round;
        self.stamp[source] = round;
        self.dist[source] = 0;
        self.queue.clear();
        self.queue.push_back(source);
        while let Some(u) = self.queue.pop_front() {
            let du = self.dist[u];
            visit(u, du);
            if du == r {
                continue;
            }
            for &w in g.neighbors(u) {
                if self.stamp[w] != round {
                    self.stamp[w] = round;
                    self.dist[w] = du + 1;
                    self.queue.push_back(w);
                }
            }
        }
    }
}

/// Ball, sphere and packing statistics around the base.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthProfile {
    pub rmax: u32,
    /// `|B(base, r)|` for `r = 0..=rmax`.
    pub ball_sizes: Vec<usize>,
    /// `|S(base, r)|` for `r = 0..=rmax`.
    pub sphere_sizes: Vec<usize>,
    /// Greedy maximal packing counts, indexed by radius then by
    /// [`PACKING_SCALES`]; `None` above [`PACKING_LIMIT`].
    pub packing_numbers: Option<Vec<[usize; 3]>>,
    pub growth_rate: f64,
    pub critical_exponent_estimate: f64,
}

fn check_radius(g: &Graph, rmax: u32) -> Result<()> {
    if rmax > g.radius() {
        return Err(Error::RadiusTooLarge {
            requested: rmax,
            limit: g.radius(),
        });
    }
    Ok(())
}

/// Sphere sizes `|S(base, r)|` for `r = 0..=rmax`.
pub fn sphere_sizes(g: &Graph, rmax: u32) -> Result<Vec<usize>> {
    check_radius(g, rmax)?;
    let mut out = vec![0usize; rmax as usize + 1];
    for &d in g.depths() {
        if d <= rmax {
            out[d as usize] += 1;
        }
    }
    Ok(out)
}

/// Least-squares slope of `log |S(base, r)|` over `r` in the last half of
/// `0..=rmax`, clamped at zero.
pub fn fitted_rate(spheres: &[usize]) -> f64 {
    let rmax = spheres.len().saturating_sub(1);
    let start = rmax.div_ceil(2);
    let pts: Vec<(f64, f64)> = (start..=rmax)
        .filter(|&r| spheres[r] > 0)
        .map(|r| (r as f64, libm::log(spheres[r] as f64)))
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    (sxy / sxx).max(0.0)
}

/// Greedy maximal family of points of `B(base, r - ρ)` pairwise more than
/// `2ρ` apart, so that their `ρ`-balls are disjoint and inside `B(base, r)`.
pub fn packing_number(g: &Graph, r: u32, rho: u32) -> Result<usize> {
    check_radius(g, r)?;
    Ok(packing_with(
        g,
        &mut LocalBfs::new(g.vertex_count()),
        r,
        rho,
    ))
}

fn packing_with(g: &Graph, bfs: &mut LocalBfs, r: u32, rho: u32) -> usize {
    let Some(inner) = r.checked_sub(rho) else {
        return 0;
    };
    let mut blocked = vec![false; g.vertex_count()];
    let mut count = 0;
    for v in 0..g.vertex_count() {
        if g.depth(v) <= inner && !blocked[v] {
            count += 1;
            bfs.run(g, v, 2 * rho, |w, _| blocked[w] = true);
        }
    }
    count
}

pub fn growth_profile(g: &Graph, rmax: u32) -> Result<GrowthProfile> {
    let sphere_sizes = sphere_sizes(g, rmax)?;
    let ball_sizes: Vec<usize> = sphere_sizes
        .iter()
        .scan(0, |acc, &s| {
            *acc += s;
            Some(*acc)
        })
        .collect();
    let packing_numbers = (ball_sizes[rmax as usize] <= PACKING_LIMIT).then(|| {
        let mut bfs = LocalBfs::new(g.vertex_count());
        (0..=rmax)
            .map(|r| PACKING_SCALES.map(|rho| packing_with(g, &mut bfs, r, rho)))
            .collect()
    });
    let growth_rate = fitted_rate(&sphere_sizes);
    Ok(GrowthProfile {
        rmax,
        ball_sizes,
        sphere_sizes,
        packing_numbers,
        growth_rate,
        critical_exponent_estimate: growth_rate,
    })
}

/// Exponential growth rate of sphere sizes around the base, the finite
/// stand-in for the infimum of exponents making `Σ |S(base,r)| e^{-δr}`
/// converge. For graphs that are not vertex-transitive this is an analogue
/// computed from the base only.
pub fn critical_exponent(g: &Graph, rmax: u32) -> Result<f64> {
    Ok(fitted_rate(&sphere_sizes(g, rmax)?))
}

/// Ball sizes over interior vertices for a range of radii.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemperedReport {
    /// `(r, min_x |B(x,r)|, max_x |B(x,r)|)`.
    pub rows: Vec<(u32, usize, usize)>,
    pub interior: usize,
    pub cap: usize,
    pub pass: bool,
}

/// Ball sizes `|B(x, r)|` for `r1 <= r <= r2` over the interior vertices,
/// those `x` with `d(base, x) + r2 <= radius` whose balls are untruncated.
/// Passes when every ball has at least one point and at most `cap`.
pub fn tempered_check(g: &Graph, r1: u32, r2: u32, cap: usize) -> Result<TemperedReport> {
    if r1 > r2 {
        return Err(Error::InvalidParameter("radius range is empty"));
    }
    check_radius(g, r2)?;
    let reach = g.radius() - r2;
    let interior: Vec<Vertex> = (0..g.vertex_count())
        .filter(|&x| g.depth(x) <= reach)
        .collect();
    let width = (r2 - r1 + 1) as usize;
    let mut lo = vec![usize::MAX; width];
    let mut hi = vec![0usize; width];
    let mut bfs = LocalBfs::new(g.vertex_count());
    let mut per_radius = vec![0usize; r2 as usize + 1];
    for &x in &interior {
        per_radius.iter_mut().for_each(|c| *c = 0);
        bfs.run(g, x, r2, |_, d| per_radius[d as usize] += 1);
        let mut acc = 0;
        for (r, &c) in per_radius.iter().enumerate() {
            acc += c;
            if r as u32 >= r1 {
                let i = r - r1 as usize;
                lo[i] = lo[i].min(acc);
                hi[i] = hi[i].max(acc);
            }
        }
    }
    let rows: Vec<(u32, usize, usize)> =
        (0..width).map(|i| (r1 + i as u32, lo[i], hi[i])).collect();
    let pass = rows.iter().all(|&(_, lo, hi)| lo >= 1 && hi <= cap);
    Ok(TemperedReport {
        rows,
        interior: interior.len(),
        cap,
        pass,
    })
}
