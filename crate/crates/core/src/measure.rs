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

//! Finitely supported measures.
//!
//! Total variation is the `l1` norm of the difference, so two probability
//! measures are at distance at most 2.

use alloc::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::graph::Vertex;
use crate::{Error, Result};

/// Nonnegative weights on finitely many points.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMeasure<K: Ord = Vertex> {
    weights: BTreeMap<K, f64>,
}

/// A measure on horizon points, keyed by the endpoint vertex of each ray.
pub type BoundaryMeasure = FiniteMeasure<Vertex>;

impl<K: Ord> Default for FiniteMeasure<K> {
    fn default() -> Self {
        FiniteMeasure {
            weights: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> FiniteMeasure<K> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sums repeated keys; zero weights are dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (K, f64)>) -> Result<Self> {
        let mut m = Self::new();
        for (k, w) in pairs {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidParameter(
                    "measure weights must be finite and nonnegative",
                ));
            }
            m.add(k, w);
        }
        Ok(m)
    }

    pub fn dirac(k: K) -> Self {
        let mut m = Self::new();
        m.weights.insert(k, 1.0);
        m
    }

    /// Uniform probability on the given points (duplicates counted once).
    pub fn uniform(points: impl IntoIterator<Item = K>) -> Self {
        let mut m = Self::new();
        for p in points {
            m.weights.insert(p, 1.0);
        }
        let count = m.weights.len() as f64;
        m.weights.values_mut().for_each(|w| *w /= count);
        m
    }

    pub fn add(&mut self, k: K, w: f64) {
        if w != 0.0 {
            *self.weights.entry(k).or_insert(0.0) += w;
        }
    }

    pub fn get(&self, k: &K) -> f64 {
        self.weights.get(k).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, f64)> {
        self.weights.iter().map(|(k, &w)| (k, w))
    }

    pub fn support(&self) -> impl Iterator<Item = &K> {
        self.weights
            .iter()
            .filter(|(_, &w)| w > 0.0)
            .map(|(k, _)| k)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn mass(&self) -> f64 {
        self.weights.values().sum()
    }

    pub fn is_probability(&self, tol: f64) -> bool {
        (self.mass() - 1.0).abs() <= tol
    }

    /// Fails unless the mass is one within `1e-9`.
    pub fn require_probability(&self) -> Result<()> {
        if self.is_probability(1e-9) {
            Ok(())
        } else {
            Err(Error::NotProbability { mass: self.mass() })
        }
    }

    pub fn max_atom(&self) -> Option<(&K, f64)> {
        self.weights
            .iter()
            .map(|(k, &w)| (k, w))
            .fold(None, |best, (k, w)| match best {
                Some((_, bw)) if bw >= w => best,
                _ => Some((k, w)),
            })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        FiniteMeasure {
            weights: self
                .weights
                .iter()
                .map(|(k, &w)| (k.clone(), w * factor))
                .collect(),
        }
    }

    pub fn normalized(&self) -> Self {
        self.scaled(1.0 / self.mass())
    }

    /// `self + factor * other`.
    pub fn add_scaled(&mut self, other: &Self, factor: f64) {
        for (k, &w) in &other.weights {
            self.add(k.clone(), factor * w);
        }
    }

    pub fn integrate(&self, f: impl Fn(&K) -> f64) -> f64 {
        self.weights.iter().map(|(k, &w)| w * f(k)).sum()
    }

    /// `l1` distance between the two weight functions.
    pub fn tv_distance(&self, other: &Self) -> f64 {
        let mut total = 0.0;
        for (k, &w) in &self.weights {
            total += (w - other.get(k)).abs();
        }
        for (k, &w) in &other.weights {
            if !self.weights.contains_key(k) {
                total += w.abs();
            }
        }
        total
    }

    /// Image under a point map.
    pub fn push_forward<J: Ord + Clone>(&self, f: impl Fn(&K) -> J) -> FiniteMeasure<J> {
        let mut out = FiniteMeasure::new();
        for (k, &w) in &self.weights {
            out.add(f(k), w);
        }
        out
    }

    pub fn restricted(&self, keep: impl Fn(&K) -> bool) -> Self {
        FiniteMeasure {
            weights: self
                .weights
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, &w)| (k.clone(), w))
                .collect(),
        }
    }

    pub fn to_signed(&self) -> SignedMeasure<K> {
        SignedMeasure {
            weights: self.weights.clone(),
        }
    }
}

/// Real weights of either sign on finitely many points.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SignedMeasure<K: Ord = Vertex> {
    weights: BTreeMap<K, f64>,
}

impl<K: Ord + Clone> SignedMeasure<K> {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (K, f64)>) -> Result<Self> {
        let mut weights = BTreeMap::new();
        for (k, w) in pairs {
            if !w.is_finite() {
                return Err(Error::InvalidParameter("measure weights must be finite"));
            }
            *weights.entry(k).or_insert(0.0) += w;
        }
        Ok(SignedMeasure { weights })
    }

    pub fn get(&self, k: &K) -> f64 {
        self.weights.get(k).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, f64)> {
        self.weights.iter().map(|(k, &w)| (k, w))
    }

    /// Sum of absolute weights.
    pub fn norm(&self) -> f64 {
        self.weights.values().map(|w| w.abs()).sum()
    }

    pub fn mass(&self) -> f64 {
        self.weights.values().sum()
    }

    /// Positive and negative parts with disjoint supports; `self` equals
    /// their difference exactly.
    pub fn hahn_split(&self) -> (FiniteMeasure<K>, FiniteMeasure<K>) {
        let mut pos = FiniteMeasure::new();
        let mut neg = FiniteMeasure::new();
        for (k, &w) in &self.weights {
            if w > 0.0 {
                pos.weights.insert(k.clone(), w);
            } else if w < 0.0 {
                neg.weights.insert(k.clone(), -w);
            }
        }
        (pos, neg)
    }
}

/// Exact rational weights, used for Cesàro averages of counting measures.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RationalMeasure<K: Ord = Vertex> {
    weights: BTreeMap<K, BigRational>,
}

impl<K: Ord + Clone> RationalMeasure<K> {
    pub fn new() -> Self {
        RationalMeasure {
            weights: BTreeMap::new(),
        }
    }

    /// Normalised counting measure on `points`.
    pub fn uniform(points: &[K]) -> Self {
        let mut m = Self::new();
        let share = BigRational::new(BigInt::from(1), BigInt::from(points.len()));
        for p in points {
            m.weights.insert(p.clone(), share.clone());
        }
        m
    }

    /// Weights summed per key; negative weights are allowed.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (K, BigRational)>) -> Self {
        let mut m = Self::new();
        for (k, w) in pairs {
            let slot = m.weights.entry(k).or_insert_with(BigRational::zero);
            *slot += w;
        }
        m
    }

    pub fn add_scaled(&mut self, other: &Self, factor: &BigRational) {
        for (k, w) in &other.weights {
            let slot = self
                .weights
                .entry(k.clone())
                .or_insert_with(BigRational::zero);
            *slot += w * factor;
        }
    }

    pub fn get(&self, k: &K) -> BigRational {
        self.weights
            .get(k)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &BigRational)> {
        self.weights.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &K> {
        self.weights
            .iter()
            .filter(|(_, w)| !w.is_zero())
            .map(|(k, _)| k)
    }

    pub fn mass(&self) -> BigRational {
        self.weights
            .values()
            .fold(BigRational::zero(), |acc, w| acc + w)
    }

    pub fn tv_distance(&self, other: &Self) -> BigRational {
        let mut total = BigRational::zero();
        for (k, w) in &self.weights {
            total += (w - other.get(k)).abs();
        }
        for (k, w) in &other.weights {
            if !self.weights.contains_key(k) {
                total += w.abs();
            }
        }
        total
    }

    pub fn push_forward<J: Ord + Clone>(&self, f: impl Fn(&K) -> J) -> RationalMeasure<J> {
        let mut out = RationalMeasure::new();
        for (k, w) in &self.weights {
            let slot = out.weights.entry(f(k)).or_insert_with(BigRational::zero);
            *slot += w;
        }
        out
    }

    pub fn to_f64(&self) -> FiniteMeasure<K> {
        let mut out = FiniteMeasure::new();
        for (k, w) in &self.weights {
            out.add(k.clone(), rational_to_f64(w));
        }
        out
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
