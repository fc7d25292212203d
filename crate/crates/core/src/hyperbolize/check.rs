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

//! Comparison tests: CAT(-1) triangles and isometries fixing `ω`.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{h2_distance, BasePoint, BaseSpace, HPoint, HSpace};
use crate::{Error, Result};

const SLACK: f64 = 1e-9;

/// Outcome of [`cat_minus1_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatReport {
    /// Largest `d_X(p, q) - d(p', q')` over the sampled pairs.
    pub max_violation: f64,
    /// Largest `|d_X(p, q) - d(p', q')|`, zero for flat base triangles.
    pub max_gap: f64,
    pub samples: usize,
    /// The base triangle has a zero-area Euclidean comparison triangle.
    pub degenerate: bool,
    pub pass: bool,
}

/// Area of a triangle with the given side lengths, in the cancellation-free
/// arrangement of Heron's formula.
fn triangle_area(a: f64, b: f64, c: f64) -> f64 {
    let mut s = [a, b, c];
    s.sort_by(|x, y| y.total_cmp(x));
    let [a, b, c] = s;
    let p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    libm::sqrt(p.max(0.0)) / 4.0
}

/// A side point: height, base point, and position in the comparison plane.
struct SidePoint {
    t: f64,
    y: BasePoint,
    z: [f64; 2],
}

/// Samples pairs of points on the sides of the triangle and compares their
/// distance with that of the corresponding points of the comparison
/// triangle in `H(E²)`: the vertices keep their heights over the Euclidean
/// comparison triangle of the base, and a side point keeps its height and
/// its base distance from the corner it is measured from. Side points are
/// taken at uniform arclength fractions of the sides.
pub fn cat_minus1_check(
    space: &HSpace,
    triangle: &[HPoint; 3],
    samples: usize,
    seed: u64,
) -> Result<CatReport> {
    let d = |i: usize, j: usize| space.base_distance(&triangle[i].y, &triangle[j].y);
    let (d01, d02, d12) = (d(0, 1)?, d(0, 2)?, d(1, 2)?);
    let excess = [d01 - d02 - d12, d02 - d01 - d12, d12 - d01 - d02]
        .into_iter()
        .fold(f64::MIN, f64::max);
    if excess > SLACK {
        return Err(Error::TriangleInequality { excess });
    }
    let z0 = [0.0, 0.0];
    let z1 = [d01, 0.0];
    let z2 = if d01 == 0.0 {
        [d02, 0.0]
    } else {
        let x = (d01 * d01 + d02 * d02 - d12 * d12) / (2.0 * d01);
        [x, 2.0 * triangle_area(d01, d02, d12) / d01]
    };
    let z = [z0, z1, z2];
    let scale = d01.max(d02).max(d12).max(1.0);
    let degenerate = -excess <= SLACK * scale;
    let sides = [(0usize, 1usize), (1, 2), (2, 0)];
    let side_len = [d01, d12, d02];

    let point = |side: usize, frac: f64| -> Result<SidePoint> {
        let (i, j) = sides[side];
        let (a, b) = (&triangle[i], &triangle[j]);
        let len = side_len[side];
        let total = h2_distance(a.t, 0.0, b.t, len);
        let (t, l) = super::h2_geodesic_point(a.t, b.t, len, frac * total);
        let f = if len == 0.0 { 0.0 } else { l / len };
        Ok(SidePoint {
            t,
            y: space.base_point_along(&a.y, &b.y, l)?,
            z: [
                z[i][0] + f * (z[j][0] - z[i][0]),
                z[i][1] + f * (z[j][1] - z[i][1]),
            ],
        })
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_violation: f64 = f64::NEG_INFINITY;
    let mut max_gap: f64 = 0.0;
    for k in 0..samples {
        // the first samples pin the corners
        let (p, q) = if k < 3 {
            (point(k, 0.0)?, point((k + 1) % 3, 0.0)?)
        } else {
            (
                point(rng.gen_range(0..3), rng.gen_range(0.0..=1.0))?,
                point(rng.gen_range(0..3), rng.gen_range(0.0..=1.0))?,
            )
        };
        let actual = h2_distance(p.t, 0.0, q.t, space.base_distance(&p.y, &q.y)?);
        let gap = libm::hypot(p.z[0] - q.z[0], p.z[1] - q.z[1]);
        let comparison = h2_distance(p.t, 0.0, q.t, gap);
        max_violation = max_violation.max(actual - comparison);
        max_gap = max_gap.max((actual - comparison).abs());
    }
    Ok(CatReport {
        max_violation,
        max_gap,
        samples,
        degenerate,
        pass: max_violation <= SLACK,
    })
}

/// An isometry of the base.
#[derive(Debug, Clone, PartialEq)]
pub enum BaseIsometry {
    /// `y ↦ R y + v` with `R` row major.
    Euclidean {
        rotation: Vec<f64>,
        translation: Vec<f64>,
    },
    /// A vertex permutation of a metric tree preserving edge lengths.
    TreeAutomorphism(Vec<usize>),
}

impl BaseIsometry {
    pub fn identity(space: &HSpace) -> Self {
        match space.base() {
            BaseSpace::Euclidean(n) => {
                let mut rotation = alloc::vec![0.0; n * n];
                for i in 0..*n {
                    rotation[i * n + i] = 1.0;
                }
                BaseIsometry::Euclidean {
                    rotation,
                    translation: alloc::vec![0.0; *n],
                }
            }
            BaseSpace::MetricTree(t) => {
                BaseIsometry::TreeAutomorphism((0..t.vertex_count()).collect())
            }
        }
    }

    /// Rotation of the plane by `angle` followed by a translation.
    pub fn planar(angle: f64, translation: [f64; 2]) -> Self {
        let (s, c) = (libm::sin(angle), libm::cos(angle));
        BaseIsometry::Euclidean {
            rotation: alloc::vec![c, -s, s, c],
            translation: translation.to_vec(),
        }
    }

    fn validate(&self, space: &HSpace) -> Result<()> {
        match (self, space.base()) {
            (
                BaseIsometry::Euclidean {
                    rotation,
                    translation,
                },
                BaseSpace::Euclidean(n),
            ) => {
                if rotation.len() != n * n || translation.len() != *n {
                    return Err(Error::InvalidParameter("isometry dimension mismatch"));
                }
                let mut deviation: f64 = 0.0;
                for i in 0..*n {
                    for j in 0..*n {
                        let dot: f64 = (0..*n)
                            .map(|k| rotation[i * n + k] * rotation[j * n + k])
                            .sum();
                        deviation = deviation.max((dot - if i == j { 1.0 } else { 0.0 }).abs());
                    }
                }
                if deviation > SLACK {
                    return Err(Error::NotIsometry { deviation });
                }
                Ok(())
            }
            (BaseIsometry::TreeAutomorphism(perm), BaseSpace::MetricTree(t)) => {
                match t.automorphism_defect(perm) {
                    Some(deviation) if deviation <= SLACK => Ok(()),
                    Some(deviation) => Err(Error::NotIsometry { deviation }),
                    None => Err(Error::NotIsometry {
                        deviation: f64::INFINITY,
                    }),
                }
            }
            _ => Err(Error::InvalidParameter("isometry does not match the base")),
        }
    }

    pub fn apply(&self, space: &HSpace, y: &BasePoint) -> Result<BasePoint> {
        space.check_base_point(y)?;
        match (self, space.base(), y) {
            (
                BaseIsometry::Euclidean {
                    rotation,
                    translation,
                },
                BaseSpace::Euclidean(n),
                BasePoint::Euclidean(v),
            ) => Ok(BasePoint::Euclidean(
                (0..*n)
                    .map(|i| {
                        (0..*n).map(|k| rotation[i * n + k] * v[k]).sum::<f64>() + translation[i]
                    })
                    .collect(),
            )),
            (
                BaseIsometry::TreeAutomorphism(perm),
                BaseSpace::MetricTree(t),
                BasePoint::Tree(p),
            ) => Ok(BasePoint::Tree(t.map_point(perm, *p))),
            _ => Err(Error::InvalidParameter("isometry does not match the base")),
        }
    }
}

/// Outcome of [`isometry_action_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct IsometryReport {
    /// Largest `|d(gp, gq) - d(p, q)|` over the sampled pairs.
    pub max_deviation: f64,
    /// `(ξ₁(t) | ξ₂(t))_o` for upward vertical rays at `t = 5, 10, 20`.
    pub gromov_products: [f64; 3],
    pub increasing: bool,
    pub pass: bool,
}

/// Checks that `(t, y) ↦ (t, g y)` preserves distances on sampled pairs and
/// that upward vertical rays from distinct base points have unbounded
/// Gromov products, so they share the endpoint `ω` fixed by the action.
pub fn isometry_action_check(
    space: &HSpace,
    iso: &BaseIsometry,
    samples: usize,
    seed: u64,
) -> Result<IsometryReport> {
    iso.validate(space)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_deviation: f64 = 0.0;
    for _ in 0..samples {
        let (p, q) = (space.random_point(&mut rng), space.random_point(&mut rng));
        let gp = HPoint::new(p.t, iso.apply(space, &p.y)?);
        let gq = HPoint::new(q.t, iso.apply(space, &q.y)?);
        max_deviation =
            max_deviation.max((space.distance(&gp, &gq)? - space.distance(&p, &q)?).abs());
    }
    let o = HPoint::new(0.0, space.random_base_point(&mut rng));
    let y1 = space.random_base_point(&mut rng);
    let mut y2 = space.random_base_point(&mut rng);
    while space.base_distance(&y1, &y2)? == 0.0 {
        y2 = space.random_base_point(&mut rng);
    }
    let mut gromov_products = [0.0; 3];
    for (slot, t) in gromov_products.iter_mut().zip([5.0, 10.0, 20.0]) {
        let (a, b) = (HPoint::new(t, y1.clone()), HPoint::new(t, y2.clone()));
        *slot = (space.distance(&o, &a)? + space.distance(&o, &b)? - space.distance(&a, &b)?) / 2.0;
    }
    let increasing =
        gromov_products[0] < gromov_products[1] && gromov_products[1] < gromov_products[2];
    Ok(IsometryReport {
        max_deviation,
        gromov_products,
        increasing,
        pass: increasing && max_deviation <= SLACK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolize::{MetricTree, TreePoint};

    fn line(x: f64) -> BasePoint {
        BasePoint::Euclidean(alloc::vec![x])
    }

    #[test]
    fn collinear_triangle_is_flat() {
        let space = HSpace::euclidean(2);
        let tri = [
            HPoint::new(0.0, BasePoint::Euclidean(alloc::vec![0.0, 0.0])),
            HPoint::new(1.0, BasePoint::Euclidean(alloc::vec![1.0, 1.0])),
            HPoint::new(-0.5, BasePoint::Euclidean(alloc::vec![3.0, 3.0])),
        ];
        let r = cat_minus1_check(&space, &tri, 500, 1).unwrap();
        assert!(r.degenerate && r.pass, "{r:?}");
        assert!(r.max_gap < 1e-9);
    }

    #[test]
    fn random_line_triangles_pass() {
        let space = HSpace::euclidean(1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for k in 0..200 {
            let tri = [
                space.random_point(&mut rng),
                space.random_point(&mut rng),
                space.random_point(&mut rng),
            ];
            let r = cat_minus1_check(&space, &tri, 50, k).unwrap();
            assert!(r.pass, "{tri:?} {r:?}");
        }
        let tri = [
            HPoint::new(0.0, line(0.0)),
            HPoint::new(0.0, line(1.0)),
            HPoint::new(2.0, line(4.0)),
        ];
        assert!(cat_minus1_check(&space, &tri, 100, 3).unwrap().pass);
    }

    #[test]
    fn tree_triangles_pass() {
        let space = HSpace::over_tree(MetricTree::random(50, 8).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for k in 0..100 {
            let tri = [
                space.random_point(&mut rng),
                space.random_point(&mut rng),
                space.random_point(&mut rng),
            ];
            assert!(cat_minus1_check(&space, &tri, 50, k).unwrap().pass);
        }
    }

    #[test]
    fn isometries() {
        let plane = HSpace::euclidean(2);
        let r = isometry_action_check(&plane, &BaseIsometry::planar(0.7, [1.0, -2.0]), 1000, 4)
            .unwrap();
        assert!(r.pass && r.max_deviation < 1e-9, "{r:?}");
        let id = BaseIsometry::identity(&plane);
        assert_eq!(
            isometry_action_check(&plane, &id, 100, 1)
                .unwrap()
                .max_deviation,
            0.0
        );
        let squash = BaseIsometry::Euclidean {
            rotation: alloc::vec![2.0, 0.0, 0.0, 1.0],
            translation: alloc::vec![0.0, 0.0],
        };
        assert!(matches!(
            isometry_action_check(&plane, &squash, 10, 1),
            Err(Error::NotIsometry { .. })
        ));

        let tree = MetricTree::new(4, &[(0, 1, 1.0), (0, 2, 2.0), (0, 3, 1.0)]).unwrap();
        let space = HSpace::over_tree(tree);
        let swap = BaseIsometry::TreeAutomorphism(alloc::vec![0, 3, 2, 1]);
        let r = isometry_action_check(&space, &swap, 500, 2).unwrap();
        assert!(r.pass && r.max_deviation == 0.0);
        let bad = BaseIsometry::TreeAutomorphism(alloc::vec![0, 2, 1, 3]);
        assert!(isometry_action_check(&space, &bad, 10, 1).is_err());
        let p = BasePoint::Tree(TreePoint {
            vertex: 1,
            offset: 0.5,
        });
        assert_eq!(
            swap.apply(&space, &p).unwrap(),
            BasePoint::Tree(TreePoint {
                vertex: 3,
                offset: 0.5
            })
        );
    }

    #[test]
    fn triangle_inequality_violation_reported() {
        // points of the base that are fine, but a bogus tree point is rejected earlier
        let space = HSpace::euclidean(1);
        let tri = [
            HPoint::new(0.0, line(0.0)),
            HPoint::new(0.0, line(1.0)),
            HPoint::new(0.0, line(f64::NAN)),
        ];
        assert!(cat_minus1_check(&space, &tri, 10, 1).is_err());
    }
}
