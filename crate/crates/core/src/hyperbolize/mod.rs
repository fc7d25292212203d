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

//! The hyperbolization `H(Y) = ℝ × Y` of a CAT(0) space `Y`, with distance
//! `d((t₁,y₁),(t₂,y₂)) = d_{H²}((t₁,0),(t₂,d_Y(y₁,y₂)))` where `H²` carries
//! the metric `dt² + e^{-2t} dl²`, the upper half-plane under `y = e^t`.
//!
//! Bases are Euclidean spaces and metric trees. Every pair of points lies in
//! the curtain `ℝ × [y₁, y₂]`, a strip of `H²`, so geodesics are explicit.

mod check;
mod tree;

pub use check::{cat_minus1_check, isometry_action_check, BaseIsometry, CatReport, IsometryReport};
pub use tree::{MetricTree, TreePoint};

use alloc::vec::Vec;

use rand::Rng;

use crate::{Error, Result};

/// Distance in `H²` between `(t₁, l₁)` and `(t₂, l₂)`.
///
/// Evaluated as `2 asinh(√S)` with `S = Δl² e^{-(t₁+t₂)}/4 + sinh²(Δt/2)`,
/// switching to logarithms when `S` leaves the floating range.
pub fn h2_distance(t1: f64, l1: f64, t2: f64, l2: f64) -> f64 {
    let dl = (l1 - l2).abs();
    let dt = t1 - t2;
    if dl == 0.0 {
        return dt.abs();
    }
    let sh = libm::sinh(dt / 2.0);
    let s = dl * dl * libm::exp(-(t1 + t2)) / 4.0 + sh * sh;
    if s.is_finite() && s > 0.0 && s < 1e300 {
        return 2.0 * libm::asinh(libm::sqrt(s));
    }
    let a = 2.0 * libm::log(dl) - (t1 + t2) - 2.0 * core::f64::consts::LN_2;
    let half = dt.abs() / 2.0;
    let b = if half == 0.0 {
        f64::NEG_INFINITY
    } else {
        // log sinh(x) = x - log 2 + log(1 - e^{-2x})
        2.0 * (half - core::f64::consts::LN_2 + libm::log1p(-libm::exp(-2.0 * half)))
    };
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    let log_s = hi + libm::log1p(libm::exp(lo - hi));
    if log_s < 600.0 {
        2.0 * libm::asinh(libm::exp(log_s / 2.0))
    } else {
        log_s + 2.0 * core::f64::consts::LN_2
    }
}

/// The point at distance `s` from `(t₁, 0)` on the `H²` geodesic to
/// `(t₂, len)`, returned as `(t, l)`.
pub fn h2_geodesic_point(t1: f64, t2: f64, len: f64, s: f64) -> (f64, f64) {
    let total = h2_distance(t1, 0.0, t2, len);
    if total == 0.0 {
        return (t1, 0.0);
    }
    let s = s.clamp(0.0, total);
    if len == 0.0 {
        return (if t2 >= t1 { t1 + s } else { t1 - s }, 0.0);
    }
    // hyperboloid coordinates of a half-plane point (l, y)
    let lift = |l: f64, y: f64| -> [f64; 3] {
        [
            (l * l + y * y + 1.0) / (2.0 * y),
            l / y,
            (l * l + y * y - 1.0) / (2.0 * y),
        ]
    };
    let a = lift(0.0, libm::exp(t1));
    let b = lift(len, libm::exp(t2));
    let (wa, wb) = (
        libm::sinh(total - s) / libm::sinh(total),
        libm::sinh(s) / libm::sinh(total),
    );
    let p: Vec<f64> = (0..3).map(|i| wa * a[i] + wb * b[i]).collect();
    let y = 1.0 / (p[0] - p[2]);
    (libm::log(y), (p[1] * y).clamp(0.0, len))
}

/// A CAT(0) base space.
#[derive(Debug, Clone, PartialEq)]
pub enum BaseSpace {
    Euclidean(usize),
    MetricTree(MetricTree),
}

/// A point of a base space.
#[derive(Debug, Clone, PartialEq)]
pub enum BasePoint {
    Euclidean(Vec<f64>),
    Tree(TreePoint),
}

/// A point `(t, y)` of `H(Y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HPoint {
    pub t: f64,
    pub y: BasePoint,
}

impl HPoint {
    pub fn new(t: f64, y: BasePoint) -> Self {
        HPoint { t, y }
    }
}

/// `H(Y)` for a Euclidean or metric-tree base.
#[derive(Debug, Clone, PartialEq)]
pub struct HSpace {
    base: BaseSpace,
}

impl HSpace {
    pub fn new(base: BaseSpace) -> Self {
        HSpace { base }
    }

    pub fn euclidean(dim: usize) -> Self {
        HSpace {
            base: BaseSpace::Euclidean(dim),
        }
    }

    pub fn over_tree(tree: MetricTree) -> Self {
        HSpace {
            base: BaseSpace::MetricTree(tree),
        }
    }

    pub fn base(&self) -> &BaseSpace {
        &self.base
    }

    pub fn check_base_point(&self, y: &BasePoint) -> Result<()> {
        match (&self.base, y) {
            (BaseSpace::Euclidean(n), BasePoint::Euclidean(v))
                if v.len() == *n && v.iter().all(|c| c.is_finite()) =>
            {
                Ok(())
            }
            (BaseSpace::MetricTree(t), BasePoint::Tree(p)) => t.check_point(*p),
            _ => Err(Error::InvalidParameter(
                "point does not belong to the base space",
            )),
        }
    }

    pub fn base_distance(&self, a: &BasePoint, b: &BasePoint) -> Result<f64> {
        self.check_base_point(a)?;
        self.check_base_point(b)?;
        match (&self.base, a, b) {
            (BaseSpace::Euclidean(_), BasePoint::Euclidean(u), BasePoint::Euclidean(v)) => Ok(
                libm::sqrt(u.iter().zip(v).map(|(x, y)| (x - y) * (x - y)).sum()),
            ),
            (BaseSpace::MetricTree(t), BasePoint::Tree(p), BasePoint::Tree(q)) => {
                t.distance(*p, *q)
            }
            _ => unreachable!("points checked against the base"),
        }
    }

    /// The base point at distance `l` from `a` on the geodesic to `b`.
    pub fn base_point_along(&self, a: &BasePoint, b: &BasePoint, l: f64) -> Result<BasePoint> {
        let total = self.base_distance(a, b)?;
        match (&self.base, a, b) {
            (BaseSpace::Euclidean(_), BasePoint::Euclidean(u), BasePoint::Euclidean(v)) => {
                let f = if total == 0.0 {
                    0.0
                } else {
                    (l / total).clamp(0.0, 1.0)
                };
                Ok(BasePoint::Euclidean(
                    u.iter().zip(v).map(|(x, y)| x + f * (y - x)).collect(),
                ))
            }
            (BaseSpace::MetricTree(t), BasePoint::Tree(p), BasePoint::Tree(q)) => {
                Ok(BasePoint::Tree(t.point_along(*p, *q, l)?))
            }
            _ => unreachable!("points checked against the base"),
        }
    }

    pub fn distance(&self, p: &HPoint, q: &HPoint) -> Result<f64> {
        if !(p.t.is_finite() && q.t.is_finite()) {
            return Err(Error::InvalidParameter("heights must be finite"));
        }
        Ok(h2_distance(p.t, 0.0, q.t, self.base_distance(&p.y, &q.y)?))
    }

    /// The point at distance `s` from `p` on the geodesic to `q`.
    pub fn geodesic_point(&self, p: &HPoint, q: &HPoint, s: f64) -> Result<HPoint> {
        let len = self.base_distance(&p.y, &q.y)?;
        let (t, l) = h2_geodesic_point(p.t, q.t, len, s);
        Ok(HPoint {
            t,
            y: self.base_point_along(&p.y, &q.y, l)?,
        })
    }

    /// Base coordinates uniform in `[-5, 5]` (Euclidean) or a uniform vertex
    /// and offset (tree).
    pub fn random_base_point<R: Rng>(&self, rng: &mut R) -> BasePoint {
        match &self.base {
            BaseSpace::Euclidean(n) => {
                BasePoint::Euclidean((0..*n).map(|_| rng.gen_range(-5.0..5.0)).collect())
            }
            BaseSpace::MetricTree(t) => BasePoint::Tree(t.random_point(rng)),
        }
    }

    /// Height uniform in `[-3, 3]` over a random base point.
    pub fn random_point<R: Rng>(&self, rng: &mut R) -> HPoint {
        let t = rng.gen_range(-3.0..3.0);
        HPoint {
            t,
            y: self.random_base_point(rng),
        }
    }
}

/// `d((t,y₁),(t,y₂))` for a shared height.
pub fn level_distance(space: &HSpace, t: f64, y1: &BasePoint, y2: &BasePoint) -> Result<f64> {
    space.distance(&HPoint::new(t, y1.clone()), &HPoint::new(t, y2.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Length of the cheapest polyline from `(t₁, 0)` to `(t₂, len)` whose
    /// vertices sit on a grid: uniform columns in `l`, heights on a fine
    /// lattice, solved by dynamic programming column by column. Segment
    /// lengths use the midpoint rule for `√(dt² + e^{-2t} dl²)`.
    fn polyline_oracle(t1: f64, t2: f64, len: f64) -> f64 {
        let (cols, h) = (200usize, 0.002);
        let lo = t1.min(t2) - 0.5;
        let rows = ((t1.max(t2) + 2.5 - lo) / h) as usize;
        let height = |i: usize| lo + i as f64 * h;
        let index = |t: f64| libm::round((t - lo) / h) as usize;
        let dl = len / cols as f64;
        let seg = |ta: f64, tb: f64| -> f64 {
            let tm = (ta + tb) / 2.0;
            libm::sqrt((tb - ta) * (tb - ta) + libm::exp(-2.0 * tm) * dl * dl)
        };
        let reach = (0.2 / h) as usize;
        let mut cost = alloc::vec![f64::INFINITY; rows];
        cost[index(t1)] = 0.0;
        for _ in 0..cols {
            let mut next = alloc::vec![f64::INFINITY; rows];
            for (a, &ca) in cost.iter().enumerate() {
                if !ca.is_finite() {
                    continue;
                }
                for b in a.saturating_sub(reach)..(a + reach + 1).min(rows) {
                    let c = ca + seg(height(a), height(b));
                    if c < next[b] {
                        next[b] = c;
                    }
                }
            }
            cost = next;
        }
        cost[index(t2)]
    }

    #[test]
    fn vertical_and_diagonal() {
        assert_eq!(h2_distance(1.5, 2.0, -0.25, 2.0), 1.75);
        assert_eq!(h2_distance(0.3, 0.7, 0.3, 0.7), 0.0);
        for len in [0.5, 1.0, 3.0] {
            let d = h2_distance(0.0, 0.0, 0.0, len);
            assert!((d - libm::acosh(1.0 + len * len / 2.0)).abs() < 1e-14);
            assert_eq!(d, h2_distance(0.0, len, 0.0, 0.0));
        }
    }

    #[test]
    fn matches_polyline_minimization() {
        for (t1, t2, len) in [(0.0, 0.0, 2.0), (0.0, 1.0, 3.0), (-0.5, 0.5, 1.0)] {
            let d = h2_distance(t1, 0.0, t2, len);
            let oracle = polyline_oracle(t1, t2, len);
            assert!(
                (oracle - d).abs() < 5e-3,
                "{t1} {t2} {len}: {oracle} vs {d}"
            );
        }
    }

    #[test]
    fn extreme_heights() {
        let d = h2_distance(800.0, 0.0, -800.0, 1.0);
        assert!(d.is_finite());
        assert!((d - 1600.0).abs() < 1e-6);
        let d = h2_distance(-750.0, 0.0, -750.0, 1.0);
        // 2 asinh(e^{750}/2) ≈ 1500
        assert!((d - 1500.0).abs() < 1e-9);
        let d = h2_distance(700.0, 0.0, 700.0, 1.0);
        assert!((d / libm::exp(-700.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn geodesic_points() {
        for (t1, t2, len) in [
            (0.0, 1.0, 3.0),
            (1.0, -2.0, 0.5),
            (0.0, 0.0, 4.0),
            (0.0, 2.0, 0.0),
        ] {
            let total = h2_distance(t1, 0.0, t2, len);
            for f in [0.0, 0.25, 0.5, 0.9, 1.0] {
                let (t, l) = h2_geodesic_point(t1, t2, len, f * total);
                assert!((h2_distance(t1, 0.0, t, l) - f * total).abs() < 1e-9);
                assert!((h2_distance(t, l, t2, len) - (1.0 - f) * total).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn tree_base_distance_via_lca() {
        let tree = MetricTree::random(50, 3).unwrap();
        let space = HSpace::over_tree(tree.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let (a, b) = (rng.gen_range(0..50), rng.gen_range(0..50));
            // distance through the root path sums
            let mut path_len = 0.0;
            let (mut u, mut v) = (a, b);
            let depth = |mut w: usize| {
                let mut d = 0;
                while let Some(p) = tree.parent(w) {
                    d += 1;
                    w = p;
                }
                d
            };
            let (mut du, mut dv) = (depth(u), depth(v));
            while u != v {
                if du >= dv {
                    path_len += tree.edge_length(u);
                    u = tree.parent(u).unwrap();
                    du -= 1;
                } else {
                    path_len += tree.edge_length(v);
                    v = tree.parent(v).unwrap();
                    dv -= 1;
                }
            }
            let p = HPoint::new(0.5, BasePoint::Tree(TreePoint::vertex(a)));
            let q = HPoint::new(-1.0, BasePoint::Tree(TreePoint::vertex(b)));
            let d = space.distance(&p, &q).unwrap();
            assert!((d - h2_distance(0.5, 0.0, -1.0, path_len)).abs() < 1e-12);
        }
    }

    #[test]
    fn metric_axioms_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for space in [
            HSpace::euclidean(1),
            HSpace::euclidean(2),
            HSpace::over_tree(MetricTree::random(40, 2).unwrap()),
        ] {
            for _ in 0..2000 {
                let (p, q, r) = (
                    space.random_point(&mut rng),
                    space.random_point(&mut rng),
                    space.random_point(&mut rng),
                );
                let (pq, qr, pr) = (
                    space.distance(&p, &q).unwrap(),
                    space.distance(&q, &r).unwrap(),
                    space.distance(&p, &r).unwrap(),
                );
                assert!(pr <= pq + qr + 1e-9);
                assert_eq!(pq, space.distance(&q, &p).unwrap());
                assert_eq!(space.distance(&p, &p).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn vertical_rays_converge_up_and_diverge_down() {
        let space = HSpace::euclidean(1);
        let (a, b) = (
            BasePoint::Euclidean(alloc::vec![0.0]),
            BasePoint::Euclidean(alloc::vec![2.0]),
        );
        let mut prev_up = f64::INFINITY;
        let mut prev_down = 0.0;
        for t in [0.0, 1.0, 5.0, 10.0, 20.0] {
            let up = level_distance(&space, t, &a, &b).unwrap();
            let down = level_distance(&space, -t, &a, &b).unwrap();
            assert!(up <= prev_up && down >= prev_down);
            prev_up = up;
            prev_down = down;
        }
        assert!(prev_up < 1e-8);
        assert!(prev_down > 40.0);
    }

    #[test]
    fn mismatched_points_rejected() {
        let space = HSpace::euclidean(2);
        let p = HPoint::new(0.0, BasePoint::Euclidean(alloc::vec![1.0]));
        assert!(space.distance(&p, &p).is_err());
    }
}
