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

//! Cesàro averages of normalized counting measures on increasing sets and
//! the sandwich bound for their total variation distance.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::graph::{Graph, Vertex};
use crate::measure::{rational_to_f64, FiniteMeasure, RationalMeasure};
use crate::{Error, Result};

fn ratio(p: usize, q: usize) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn is_subset<K: Ord>(a: &[K], b: &[K]) -> bool {
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
    }
    true
}

/// `(1/n) Σ_{k<n} m_{Z_k}` for increasing finite sets `Z_0 ⊆ Z_1 ⊆ ...`,
/// stored as the set sizes and, per point, the first index whose set holds
/// it. The weight of a point entering at `j` is `(1/n) Σ_{k>=j} 1/|Z_k|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestedCesaro<K: Ord = Vertex> {
    sizes: Vec<usize>,
    first: BTreeMap<K, usize>,
}

impl<K: Ord + Clone> NestedCesaro<K> {
    /// Average over `sets`, which must be nonempty and increasing.
    pub fn new(sets: &[Vec<K>]) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::InvalidParameter("no sets to average"));
        }
        let mut first = BTreeMap::new();
        let mut sizes = Vec::with_capacity(sets.len());
        for (k, set) in sets.iter().enumerate() {
            for p in set {
                first.entry(p.clone()).or_insert(k);
            }
            let mut distinct = set.clone();
            distinct.sort();
            distinct.dedup();
            // a set holding every earlier point has as many points as the union so far
            if distinct.is_empty() || distinct.len() != first.len() {
                return Err(Error::InvalidParameter(
                    "sets must be nonempty and increasing",
                ));
            }
            sizes.push(first.len());
        }
        Ok(NestedCesaro { sizes, first })
    }

    /// Trusted constructor: `first` maps each point to its entry index and
    /// `sizes[k]` counts the points entering at or before `k`.
    pub(crate) fn from_parts(sizes: Vec<usize>, first: BTreeMap<K, usize>) -> Self {
        NestedCesaro { sizes, first }
    }

    /// Average over the first `n` sets only.
    pub fn prefix(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.len() {
            return Err(Error::IndexOutOfRange {
                index: n,
                len: self.len(),
            });
        }
        let first = self
            .first
            .iter()
            .filter(|(_, &j)| j < n)
            .map(|(k, &j)| (k.clone(), j))
            .collect();
        Ok(NestedCesaro {
            sizes: self.sizes[..n].to_vec(),
            first,
        })
    }

    /// Number of averaged sets.
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn entry_index(&self, k: &K) -> Option<usize> {
        self.first.get(k).copied()
    }

    pub fn points(&self) -> impl Iterator<Item = (&K, usize)> {
        self.first.iter().map(|(k, &j)| (k, j))
    }

    /// `h[j] = (1/n) Σ_{k=j}^{n-1} 1/|Z_k|`, with `h[n] = 0`.
    fn tail_weights(&self) -> Vec<BigRational> {
        let n = self.sizes.len();
        let mut h = vec![BigRational::zero(); n + 1];
        for j in (0..n).rev() {
            h[j] = &h[j + 1] + ratio(1, n * self.sizes[j]);
        }
        h
    }

    pub fn weight(&self, k: &K) -> BigRational {
        match self.first.get(k) {
            Some(&j) => self.tail_weights()[j].clone(),
            None => BigRational::zero(),
        }
    }

    pub fn to_rational(&self) -> RationalMeasure<K> {
        let h = self.tail_weights();
        RationalMeasure::from_pairs(self.first.iter().map(|(k, &j)| (k.clone(), h[j].clone())))
    }

    pub fn to_measure(&self) -> FiniteMeasure<K> {
        let h: Vec<f64> = self.tail_weights().iter().map(rational_to_f64).collect();
        let mut m = FiniteMeasure::new();
        for (k, &j) in &self.first {
            m.add(k.clone(), h[j]);
        }
        m
    }

    /// Exact `Σ |λ(p) - λ'(p)|`.
    pub fn tv_distance(&self, other: &Self) -> BigRational {
        let (ha, hb) = (self.tail_weights(), other.tail_weights());
        let (na, nb) = (self.len(), other.len());
        let mut pairs: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        let mut a = self.first.iter().peekable();
        let mut b = other.first.iter().peekable();
        loop {
            let key = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some((ka, &ja)), Some((kb, &jb))) => match ka.cmp(kb) {
                    core::cmp::Ordering::Less => {
                        a.next();
                        (ja, nb)
                    }
                    core::cmp::Ordering::Greater => {
                        b.next();
                        (na, jb)
                    }
                    core::cmp::Ordering::Equal => {
                        a.next();
                        b.next();
                        (ja, jb)
                    }
                },
                (Some((_, &ja)), None) => {
                    a.next();
                    (ja, nb)
                }
                (None, Some((_, &jb))) => {
                    b.next();
                    (na, jb)
                }
            };
            *pairs.entry(key).or_insert(0) += 1;
        }
        let mut total = BigRational::zero();
        for ((i, j), count) in pairs {
            total += (&ha[i] - &hb[j]).abs() * BigRational::from_integer(BigInt::from(count));
        }
        total
    }
}

/// `2τ/n + 4(n-τ)/n · [1 - (m₁/m_{n+τ})^{2τ/(n-τ)}]` for `n > τ`.
pub fn sandwich_bound_value(n: usize, tau: usize, m_first: usize, m_last: usize) -> Result<f64> {
    check_bound_args(n, tau, m_first, m_last)?;
    let (nf, tf) = (n as f64, tau as f64);
    let q = m_first as f64 / m_last as f64;
    Ok(2.0 * tf / nf + 4.0 * (nf - tf) / nf * (1.0 - libm::pow(q, 2.0 * tf / (nf - tf))))
}

fn check_bound_args(n: usize, tau: usize, m_first: usize, m_last: usize) -> Result<()> {
    if n <= tau {
        return Err(Error::IndexOutOfRange {
            index: n,
            len: tau + 1,
        });
    }
    if m_first == 0 || m_first > m_last {
        return Err(Error::InvalidParameter(
            "set sizes must satisfy 0 < m1 <= m_(n+tau)",
        ));
    }
    Ok(())
}

/// Exact test of `tv <= sandwich_bound_value(n, tau, m_first, m_last)`.
///
/// With `q = m₁/m_{n+τ}` and `c = 1 - (tv - 2τ/n) n / (4(n-τ))` the bound
/// holds iff `q^{2τ/(n-τ)} <= c`, i.e. `c >= 1` or `q^{2τ} <= c^{n-τ}`
/// with `c > 0`.
pub fn sandwich_bound_holds(
    tv: &BigRational,
    n: usize,
    tau: usize,
    m_first: usize,
    m_last: usize,
) -> Result<bool> {
    check_bound_args(n, tau, m_first, m_last)?;
    let c = BigRational::one() - (tv - ratio(2 * tau, n)) * ratio(n, 4 * (n - tau));
    if c >= BigRational::one() {
        return Ok(true);
    }
    if !c.is_positive() {
        return Ok(false);
    }
    let q = ratio(m_first, m_last);
    Ok(Pow::pow(q, 2 * tau as u32) <= Pow::pow(c, (n - tau) as u32))
}

/// Two increasing set sequences with `Z_k ⊆ Z'_{k+τ}` and `Z'_k ⊆ Z_{k+τ}`,
/// indexed from `k = 1`, under the counting measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SandwichInstance<K: Ord = Vertex> {
    z: Vec<Vec<K>>,
    zp: Vec<Vec<K>>,
    tau: usize,
}

impl<K: Ord + Clone> SandwichInstance<K> {
    pub fn new(z: Vec<Vec<K>>, zp: Vec<Vec<K>>, tau: usize) -> Result<Self> {
        if z.len() != zp.len() || z.is_empty() {
            return Err(Error::InvalidParameter(
                "sequences must have the same positive length",
            ));
        }
        let norm = |seq: Vec<Vec<K>>| -> Vec<Vec<K>> {
            seq.into_iter()
                .map(|mut s| {
                    s.sort();
                    s.dedup();
                    s
                })
                .collect()
        };
        let (z, zp) = (norm(z), norm(zp));
        for seq in [&z, &zp] {
            if seq.iter().any(|s| s.is_empty()) || seq.windows(2).any(|w| !is_subset(&w[0], &w[1]))
            {
                return Err(Error::InvalidParameter(
                    "sets must be nonempty and increasing",
                ));
            }
        }
        for k in 0..z.len().saturating_sub(tau) {
            if !is_subset(&z[k], &zp[k + tau]) || !is_subset(&zp[k], &z[k + tau]) {
                return Err(Error::InvalidParameter("sequences are not sandwiched"));
            }
        }
        Ok(SandwichInstance { z, zp, tau })
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    /// `Z_k` for `k >= 1`.
    pub fn z(&self, k: usize) -> Option<&[K]> {
        k.checked_sub(1)
            .and_then(|i| self.z.get(i))
            .map(|s| s.as_slice())
    }

    pub fn zp(&self, k: usize) -> Option<&[K]> {
        k.checked_sub(1)
            .and_then(|i| self.zp.get(i))
            .map(|s| s.as_slice())
    }

    fn check_n(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.len() {
            return Err(Error::IndexOutOfRange {
                index: n,
                len: self.len(),
            });
        }
        Ok(())
    }

    /// The two Cesàro averages of the first `n` sets.
    pub fn averages(&self, n: usize) -> Result<(NestedCesaro<K>, NestedCesaro<K>)> {
        self.check_n(n)?;
        Ok((
            NestedCesaro::new(&self.z[..n])?,
            NestedCesaro::new(&self.zp[..n])?,
        ))
    }

    /// Exact `‖λ_n - λ'_n‖`.
    pub fn cesaro_tv(&self, n: usize) -> Result<BigRational> {
        let (a, b) = self.averages(n)?;
        Ok(a.tv_distance(&b))
    }

    fn bound_sizes(&self, n: usize) -> Result<(usize, usize)> {
        self.check_n(n + self.tau)?;
        Ok((self.z[0].len(), self.z[n + self.tau - 1].len()))
    }

    pub fn sandwich_bound(&self, n: usize) -> Result<f64> {
        let (m1, mlast) = self.bound_sizes(n)?;
        sandwich_bound_value(n, self.tau, m1, mlast)
    }

    /// Exact comparison of [`Self::cesaro_tv`] with [`Self::sandwich_bound`].
    pub fn bound_holds(&self, n: usize) -> Result<bool> {
        let (m1, mlast) = self.bound_sizes(n)?;
        sandwich_bound_holds(&self.cesaro_tv(n)?, n, self.tau, m1, mlast)
    }
}

impl SandwichInstance<Vertex> {
    /// `Z_k = B(x, k)`, `Z'_k = B(x', k)` for `k = 1..=len`, `τ = d(x, x')`.
    pub fn balls(g: &Graph, x: Vertex, x2: Vertex, len: usize) -> Result<Self> {
        g.check_vertex(x)?;
        g.check_vertex(x2)?;
        let (rx, rx2) = (g.dist_row(x), g.dist_row(x2));
        let seq = |row: &[u32]| -> Vec<Vec<Vertex>> {
            (1..=len as u32)
                .map(|k| (0..row.len()).filter(|&v| row[v] <= k).collect())
                .collect()
        };
        Self::new(seq(&rx), seq(&rx2), g.dist(x, x2) as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::path;

    fn line_instance() -> SandwichInstance<u32> {
        let z = (1..=8).map(|k| (0..k).collect()).collect();
        let zp = (1..=8).map(|k| (0..=k).collect()).collect();
        SandwichInstance::new(z, zp, 1).unwrap()
    }

    #[test]
    fn hand_computed_line_value() {
        assert_eq!(line_instance().cesaro_tv(4).unwrap(), ratio(2, 5));
    }

    #[test]
    fn nested_average_weights() {
        let c = NestedCesaro::new(&[alloc::vec![0u32], alloc::vec![0, 1]]).unwrap();
        assert_eq!(c.weight(&0), ratio(3, 4));
        assert_eq!(c.weight(&1), ratio(1, 4));
        assert_eq!(c.to_rational().mass(), BigRational::one());
        assert!(NestedCesaro::new(&[alloc::vec![0u32, 1], alloc::vec![1]]).is_err());
        assert!(NestedCesaro::<u32>::new(&[alloc::vec![]]).is_err());
    }

    #[test]
    fn tv_matches_materialized_measures() {
        let inst = line_instance();
        for n in 1..=8 {
            let (a, b) = inst.averages(n).unwrap();
            assert_eq!(
                a.tv_distance(&b),
                a.to_rational().tv_distance(&b.to_rational())
            );
        }
    }

    #[test]
    fn identical_sequences() {
        let z: Vec<Vec<u32>> = (1..=5).map(|k| (0..k).collect()).collect();
        let inst = SandwichInstance::new(z.clone(), z, 0).unwrap();
        for n in 1..=5 {
            assert!(inst.cesaro_tv(n).unwrap().is_zero());
            assert_eq!(inst.sandwich_bound(n).unwrap(), 0.0);
            assert!(inst.bound_holds(n).unwrap());
        }
    }

    #[test]
    fn closed_form_value() {
        let v = sandwich_bound_value(10, 2, 1, 25).unwrap();
        // independent evaluation: sqrt(1/25) = 1/5
        let expected = 0.4 + 3.2 * (1.0 - 0.2);
        assert!((v - expected).abs() < 1e-12);
        assert!(sandwich_bound_holds(&ratio(296, 100), 10, 2, 1, 25).unwrap());
        assert!(!sandwich_bound_holds(&ratio(2961, 1000), 10, 2, 1, 25).unwrap());
        assert!(sandwich_bound_value(2, 2, 1, 4).is_err());
    }

    #[test]
    fn validation() {
        let z = alloc::vec![alloc::vec![0u32], alloc::vec![0, 1]];
        let zp = alloc::vec![alloc::vec![5u32], alloc::vec![5, 6]];
        assert!(SandwichInstance::new(z.clone(), zp.clone(), 0).is_err());
        assert!(SandwichInstance::new(z, zp, 2).is_ok());
    }

    #[test]
    fn line_balls_decay() {
        let g = path(301);
        let inst = SandwichInstance::balls(&g, 150, 152, 70).unwrap();
        let tv4 = inst.cesaro_tv(4).unwrap();
        let tv64 = inst.cesaro_tv(64).unwrap();
        assert!(tv64 < tv4);
        for n in [3, 4, 16, 64] {
            assert!(inst.bound_holds(n).unwrap());
            let tv = rational_to_f64(&inst.cesaro_tv(n).unwrap());
            assert!(tv <= inst.sandwich_bound(n).unwrap() + 1e-12);
        }
    }
}
