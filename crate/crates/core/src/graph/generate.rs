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

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, Vertex};
use crate::{Error, Result};

/// Ball of radius `radius` in the `q`-regular tree, base at the centre.
/// `regular_tree(2, r)` is a segment of the integer line.
pub fn regular_tree(q: usize, radius: u32) -> Result<Graph> {
    if q < 2 {
        return Err(Error::InvalidParameter(
            "regular tree degree must be at least 2",
        ));
    }
    let mut edges = Vec::new();
    let mut frontier: Vec<Vertex> = alloc::vec![0];
    let mut next_id = 1;
    for level in 0..radius {
        let children = if level == 0 { q } else { q - 1 };
        let mut next = Vec::with_capacity(frontier.len() * children);
        for &v in &frontier {
            for _ in 0..children {
                edges.push((v, next_id));
                next.push(next_id);
                next_id += 1;
            }
        }
        frontier = next;
    }
    Graph::from_edges(next_id, &edges, 0)
}

/// Three or more rays of length `len` glued at the base.
pub fn spider(arms: usize, len: u32) -> Result<Graph> {
    if arms == 0 {
        return Err(Error::InvalidParameter("spider needs at least one arm"));
    }
    let mut edges = Vec::new();
    let mut next_id = 1;
    for _ in 0..arms {
        let mut prev = 0;
        for _ in 0..len {
            edges.push((prev, next_id));
            prev = next_id;
            next_id += 1;
        }
    }
    Ok(Graph::from_edges(next_id, &edges, 0)?.bfs_relabeled())
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter("cycle needs at least 3 vertices"));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Ok(Graph::from_edges(n, &edges, 0)?.bfs_relabeled())
}

/// Path `0 - 1 - ... - (n-1)` based at vertex 0.
pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n.max(1)).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n.max(1), &edges, 0).expect("paths are connected")
}

/// `width x height` grid based at its central vertex.
pub fn grid(width: usize, height: usize) -> Result<Graph> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidParameter("grid sides must be positive"));
    }
    let id = |x: usize, y: usize| y * width + x;
    let mut edges = Vec::new();
    for y in 0..height {
        for x in 0..width {
            if x + 1 < width {
                edges.push((id(x, y), id(x + 1, y)));
            }
            if y + 1 < height {
                edges.push((id(x, y), id(x, y + 1)));
            }
        }
    }
    let base = id((width - 1) / 2, (height - 1) / 2);
    Ok(Graph::from_edges(width * height, &edges, base)?.bfs_relabeled())
}

/// A hub joined to `leaves` leaves; the hub is the base.
pub fn star(leaves: usize) -> Result<Graph> {
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    Graph::from_edges(leaves + 1, &edges, 0)
}

/// Random spanning tree plus independent extra edges with probability
/// `extra_edge_prob`, base 0. Deterministic in `seed`.
pub fn random_connected(n: usize, extra_edge_prob: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "graph must have at least one vertex",
        ));
    }
    if !(0.0..=1.0).contains(&extra_edge_prob) {
        return Err(Error::InvalidParameter(
            "edge probability must lie in [0, 1]",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(extra_edge_prob) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges, 0)
}

type Syllable = (u8, u32);

/// Ball of radius `radius` around the identity in the Cayley graph of the
/// free product of cyclic groups with the given orders; order `0` stands
/// for the infinite cyclic group. Every factor contributes its generator
/// and, unless it has order two, the inverse.
///
/// Vertices are reduced words: consecutive syllables come from different
/// factors and exponents are reduced modulo the factor order.
pub fn free_product_cyclic(orders: &[u32], radius: u32) -> Result<Graph> {
    if orders.is_empty() {
        return Err(Error::UnsupportedPresentation("no factors"));
    }
    if orders.len() > u8::MAX as usize {
        return Err(Error::UnsupportedPresentation("too many factors"));
    }
    if orders.iter().any(|&o| o == 1) {
        return Err(Error::UnsupportedPresentation("trivial cyclic factor"));
    }
    let mut generators: Vec<(u8, i64)> = Vec::new();
    for (i, &order) in orders.iter().enumerate() {
        generators.push((i as u8, 1));
        if order != 2 {
            generators.push((i as u8, -1));
        }
    }
    let multiply = |word: &[Syllable], (factor, step): (u8, i64)| -> Vec<Syllable> {
        let order = orders[factor as usize];
        let reduce = |e: i64| -> i64 {
            if order == 0 {
                e
            } else {
                e.rem_euclid(order as i64)
            }
        };
        let mut out = word.to_vec();
        match out.last_mut() {
            Some(last) if last.0 == factor => {
                // exponents of infinite factors are stored with a sign bias
                let e = reduce(decode(last.1, order) + step);
                if e == 0 {
                    out.pop();
                } else {
                    last.1 = encode(e, order);
                }
            }
            _ => out.push((factor, encode(reduce(step), order))),
        }
        out
    };

    let mut ids: BTreeMap<Vec<Syllable>, Vertex> = BTreeMap::new();
    let mut words: Vec<Vec<Syllable>> = alloc::vec![Vec::new()];
    ids.insert(Vec::new(), 0);
    let mut level_start = 0;
    for _ in 0..radius {
        let level_end = words.len();
        for idx in level_start..level_end {
            for &gen in &generators {
                let next = multiply(&words[idx], gen);
                if !ids.contains_key(&next) {
                    ids.insert(next.clone(), words.len());
                    words.push(next);
                }
            }
        }
        level_start = level_end;
    }
    let mut edges = Vec::new();
    for (idx, word) in words.iter().enumerate() {
        for &gen in &generators {
            if let Some(&other) = ids.get(&multiply(word, gen)) {
                if idx < other {
                    edges.push((idx, other));
                }
            }
        }
    }
    drop(ids);
    Ok(Graph::from_edges(words.len(), &edges, 0)?.bfs_relabeled())
}

fn encode(e: i64, order: u32) -> u32 {
    if order == 0 {
        (e + i64::from(i32::MAX)) as u32
    } else {
        e as u32
    }
}

fn decode(stored: u32, order: u32) -> i64 {
    if order == 0 {
        i64::from(stored) - i64::from(i32::MAX)
    } else {
        i64::from(stored)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_tree_sizes() {
        let g = regular_tree(4, 3).unwrap();
        assert_eq!(g.vertex_count(), 1 + 4 + 4 * 3 + 4 * 9);
        assert!(g.is_tree());
        let line = regular_tree(2, 5).unwrap();
        assert_eq!(line.vertex_count(), 11);
        assert_eq!(line.max_degree(), 2);
    }

    #[test]
    fn cycle_degrees() {
        let g = cycle(8).unwrap();
        assert_eq!(g.vertex_count(), 8);
        assert!((0..8).all(|v| g.degree(v) == 2));
        assert_eq!(g.base(), 0);
    }

    #[test]
    fn grid_is_based_at_center() {
        let g = grid(9, 9).unwrap();
        assert_eq!(g.vertex_count(), 81);
        assert_eq!(g.radius(), 8);
        assert_eq!(g.degree(g.base()), 4);
    }

    #[test]
    fn free_group_ball_is_a_tree() {
        let g = free_product_cyclic(&[0, 0], 4).unwrap();
        assert!(g.is_tree());
        // 1 + 4 + 12 + 36 + 108
        assert_eq!(g.vertex_count(), 161);
        assert_eq!(g.degree(g.base()), 4);
    }

    #[test]
    fn order_three_factors_give_triangles() {
        let g = free_product_cyclic(&[3, 3], 1).unwrap();
        // identity, a, a^2, b, b^2 ; a ~ a^2 and b ~ b^2
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn rejects_trivial_factor() {
        assert!(matches!(
            free_product_cyclic(&[1, 2], 3),
            Err(Error::UnsupportedPresentation(_))
        ));
    }

    #[test]
    fn random_graphs_are_reproducible() {
        let a = random_connected(30, 0.1, 11).unwrap();
        let b = random_connected(30, 0.1, 11).unwrap();
        assert_eq!(a.edges().collect::<Vec<_>>(), b.edges().collect::<Vec<_>>());
    }
}
