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

//! Plain-text file formats.
//!
//! Graphs: a line `n m base` followed by `m` lines `u v`. Measures: lines
//! `vertex weight`, the weight a decimal or a rational `p/q`. In both,
//! `#` starts a comment and blank lines are skipped.

use std::fmt::Write as _;
use std::fs;

use hyperbound::measure::FiniteMeasure;
use hyperbound::{Graph, Vertex};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{CliError, Result};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| CliError::parse(format!("line {line}: expected {what}")))
}

pub fn read_text(path: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (ln, head) = lines
        .next()
        .ok_or_else(|| CliError::parse("empty graph file"))?;
    let mut tok = head.split_whitespace();
    let n: usize = field(tok.next(), ln, "vertex count")?;
    let m: usize = field(tok.next(), ln, "edge count")?;
    let base: Vertex = field(tok.next(), ln, "base vertex")?;
    let mut edges = Vec::with_capacity(m);
    for (ln, l) in lines {
        let mut tok = l.split_whitespace();
        let u = field(tok.next(), ln, "edge endpoint")?;
        let v = field(tok.next(), ln, "edge endpoint")?;
        if tok.next().is_some() {
            return Err(CliError::parse(format!("line {ln}: trailing tokens")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(CliError::parse(format!(
            "header promises {m} edges, found {}",
            edges.len()
        )));
    }
    Ok(Graph::from_edges(n, &edges, base)?)
}

pub fn format_graph(g: &Graph) -> String {
    let mut out = format!("{} {} {}\n", g.vertex_count(), g.edge_count(), g.base());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// A weight written as a decimal or as `p/q`.
pub fn parse_weight(tok: &str) -> Option<f64> {
    match tok.split_once('/') {
        Some((p, q)) => {
            let (p, q): (BigInt, BigInt) = (p.trim().parse().ok()?, q.trim().parse().ok()?);
            if q.is_zero() {
                return None;
            }
            let r = BigRational::new(p, q);
            Some(hyperbound::measure::rational_to_f64(&r))
        }
        None => tok.parse().ok(),
    }
    .filter(|w: &f64| w.is_finite())
}

pub fn parse_measure(text: &str) -> Result<FiniteMeasure<Vertex>> {
    let mut pairs = Vec::new();
    for (ln, l) in content_lines(text) {
        let mut tok = l.split_whitespace();
        let v: Vertex = field(tok.next(), ln, "vertex id")?;
        let w = tok
            .next()
            .and_then(parse_weight)
            .ok_or_else(|| CliError::parse(format!("line {ln}: expected a weight")))?;
        pairs.push((v, w));
    }
    Ok(FiniteMeasure::from_pairs(pairs)?)
}

/// Seventeen significant digits, round-tripping every `f64`.
pub fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

pub fn rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
