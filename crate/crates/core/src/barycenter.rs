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

//! Quasi-barycenter sets of boundary measures and the elementarity
//! classifier.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::cocycle::CocycleContext;
use crate::graph::Vertex;
use crate::measure::BoundaryMeasure;
use crate::{Error, Result};

const LEVEL_TOL: f64 = 1e-9;

/// Sublevel set of `B_λ(x, ·)` over the vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct BarycenterResult {
    pub basepoint: Vertex,
    pub r: f64,
    pub infimum: f64,
    /// `C(λ, x, r)`.
    pub set: Vec<Vertex>,
    /// Union of `C(λ, x', r)` over `x'` in `{x} ∪ C(λ, x, r)`.
    pub global_set: Vec<Vertex>,
}

fn check_measure(lambda: &BoundaryMeasure) -> Result<()> {
    lambda.require_probability()?;
    if let Some((_, w)) = lambda.max_atom() {
        if w >= 0.5 {
            return Err(Error::AtomTooHeavy { weight: w });
        }
    }
    Ok(())
}

fn sublevel(values: &[f64], r: f64) -> (f64, Vec<Vertex>) {
    let inf = values.iter().copied().fold(f64::INFINITY, f64::min);
    let set = (0..values.len())
        .filter(|&y| values[y] <= inf + r + LEVEL_TOL)
        .collect();
    (inf, set)
}

/// `C(λ, x, r) = {y : B_λ(x, y) <= r + inf_z B_λ(x, z)}`, by exhaustive
/// minimization over the vertices.
pub fn quasi_barycenter(
    ctx: &CocycleContext<'_>,
    lambda: &BoundaryMeasure,
    x: Vertex,
    r: f64,
) -> Result<BarycenterResult> {
    check_measure(lambda)?;
    if !(r >= 0.0) {
        return Err(Error::InvalidParameter(
            "sublevel offset must be nonnegative",
        ));
    }
    let f = ctx.functional(lambda)?;
    let (infimum, set) = sublevel(&f.values_from(x)?, r);
    let mut global: BTreeSet<Vertex> = set.iter().copied().collect();
    for x2 in core::iter::once(x).chain(set.iter().copied()) {
        global.extend(sublevel(&f.values_from(x2)?, r).1);
    }
    Ok(BarycenterResult {
        basepoint: x,
        r,
        infimum,
        set,
        global_set: global.into_iter().collect(),
    })
}

/// Outcome of testing `C(λ, x, r) ⊆ C(λ, x', r + 6 C₂)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub holds: bool,
    /// Points of the first set missing from the second.
    pub missing: Vec<Vertex>,
}

pub fn barycenter_stability_check(
    ctx: &CocycleContext<'_>,
    lambda: &BoundaryMeasure,
    x: Vertex,
    x2: Vertex,
    r: f64,
) -> Result<StabilityReport> {
    check_measure(lambda)?;
    let f = ctx.functional(lambda)?;
    let (_, inner) = sublevel(&f.values_from(x)?, r);
    let (_, outer) = sublevel(&f.values_from(x2)?, r + 6.0 * ctx.c2());
    let missing: Vec<Vertex> = inner
        .into_iter()
        .filter(|v| outer.binary_search(v).is_err())
        .collect();
    Ok(StabilityReport {
        holds: missing.is_empty(),
        missing,
    })
}

/// `min_{y ∈ S(base, k)} B_λ(base, y)` for `k = 0..=R`.
pub fn escape_profile(ctx: &CocycleContext<'_>, lambda: &BoundaryMeasure) -> Result<Vec<f64>> {
    check_measure(lambda)?;
    let g = ctx.graph();
    let values = ctx.functional(lambda)?.values_from(g.base())?;
    let mut out = alloc::vec![f64::INFINITY; ctx.radius() as usize + 1];
    for (y, &v) in values.iter().enumerate() {
        let k = g.depth(y) as usize;
        if k < out.len() {
            out[k] = out[k].min(v);
        }
    }
    Ok(out)
}

/// Elementarity class of a boundary measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    Elementary1(Vertex),
    Elementary2(Vertex, Vertex),
    /// Quasi-barycenter set `C(λ', base, 8 C₂)` of the rebalanced measure.
    Bulky(Vec<Vertex>),
}

/// Caps every atom at `1/2 - 1e-6` and spreads the excess uniformly over the
/// atoms below the cap, until no atom exceeds it.
pub fn rebalance(lambda: &BoundaryMeasure) -> Result<BoundaryMeasure> {
    const CAP: f64 = 0.5 - 1e-6;
    lambda.require_probability()?;
    let mut atoms: Vec<(Vertex, f64)> = lambda
        .iter()
        .filter(|&(_, w)| w > 0.0)
        .map(|(&k, w)| (k, w))
        .collect();
    if atoms.len() < 3 {
        return Err(Error::InvalidParameter(
            "rebalancing needs at least three atoms",
        ));
    }
    loop {
        let mut excess = 0.0;
        for a in atoms.iter_mut() {
            if a.1 > CAP {
                excess += a.1 - CAP;
                a.1 = CAP;
            }
        }
        if excess <= 0.0 {
            break;
        }
        let free = atoms.iter().filter(|a| a.1 < CAP).count();
        let share = excess / free as f64;
        for a in atoms.iter_mut() {
            if a.1 < CAP {
                a.1 += share;
            }
        }
    }
    BoundaryMeasure::from_pairs(atoms)
}

/// Support of size one or two: the atoms of maximal weight. Larger support:
/// rebalance, then the set `C(λ', base, 8 C₂)`.
pub fn classify_measure(
    ctx: &CocycleContext<'_>,
    lambda: &BoundaryMeasure,
) -> Result<Classification> {
    lambda.require_probability()?;
    let atoms: Vec<(Vertex, f64)> = lambda
        .iter()
        .filter(|&(_, w)| w > 0.0)
        .map(|(&k, w)| (k, w))
        .collect();
    match atoms.as_slice() {
        [] => Err(Error::NotProbability { mass: 0.0 }),
        [(a, _)] => Ok(Classification::Elementary1(*a)),
        [(a, wa), (b, wb)] => Ok(if wa == wb {
            Classification::Elementary2(*a, *b)
        } else if wa > wb {
            Classification::Elementary1(*a)
        } else {
            Classification::Elementary1(*b)
        }),
        _ => {
            let balanced = rebalance(lambda)?;
            let res = quasi_barycenter(ctx, &balanced, ctx.graph().base(), 8.0 * ctx.c2())?;
            Ok(Classification::Bulky(res.set))
        }
    }
}
