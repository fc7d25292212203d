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

//! Textual descriptions of graphs, vertices, base spaces and points.

use std::str::FromStr;

use hyperbound::graph::{
    cycle, free_product_cyclic, grid, path, random_connected, regular_tree, spider, star,
};
use hyperbound::hyperbolize::{BasePoint, BaseSpace, HPoint, HSpace, MetricTree, TreePoint};
use hyperbound::{Graph, Vertex};

use crate::error::{CliError, Result};
use crate::format::{parse_graph, read_text};

/// A generated family or a graph file.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    Tree { q: usize, radius: u32 },
    FreeGroup { rank: usize, radius: u32 },
    FreeProduct { orders: Vec<u32>, radius: u32 },
    Cycle(usize),
    Path(usize),
    Grid(usize, usize),
    Star(usize),
    Spider { arms: usize, len: u32 },
    Random { n: usize, p: f64, seed: u64 },
    File(String),
}

fn num<T: FromStr>(tok: &str, spec: &str) -> Result<T> {
    tok.trim()
        .parse()
        .map_err(|_| CliError::parse(format!("bad number `{tok}` in `{spec}`")))
}

impl FromStr for GraphSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        if kind == "file" {
            return Ok(GraphSpec::File(rest.to_string()));
        }
        let args: Vec<&str> = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split(':').collect()
        };
        let want = |k: usize| -> Result<()> {
            if args.len() == k {
                Ok(())
            } else {
                Err(CliError::parse(format!(
                    "`{s}`: {kind} takes {k} parameters"
                )))
            }
        };
        Ok(match kind {
            "tree" => {
                want(2)?;
                GraphSpec::Tree {
                    q: num(args[0], s)?,
                    radius: num(args[1], s)?,
                }
            }
            "freegroup" => {
                want(2)?;
                GraphSpec::FreeGroup {
                    rank: num(args[0], s)?,
                    radius: num(args[1], s)?,
                }
            }
            "freeprod" => {
                want(2)?;
                let orders = args[0]
                    .split(',')
                    .map(|t| num(t, s))
                    .collect::<Result<_>>()?;
                GraphSpec::FreeProduct {
                    orders,
                    radius: num(args[1], s)?,
                }
            }
            "cycle" => {
                want(1)?;
                GraphSpec::Cycle(num(args[0], s)?)
            }
            "path" => {
                want(1)?;
                GraphSpec::Path(num(args[0], s)?)
            }
            "grid" => {
                want(2)?;
                GraphSpec::Grid(num(args[0], s)?, num(args[1], s)?)
            }
            "star" => {
                want(1)?;
                GraphSpec::Star(num(args[0], s)?)
            }
            "spider" => {
                want(2)?;
                GraphSpec::Spider {
                    arms: num(args[0], s)?,
                    len: num(args[1], s)?,
                }
            }
            "random" => {
                want(3)?;
                GraphSpec::Random {
                    n: num(args[0], s)?,
                    p: num(args[1], s)?,
                    seed: num(args[2], s)?,
                }
            }
            _ => return Err(CliError::parse(format!("unknown graph family `{kind}`"))),
        })
    }
}

impl GraphSpec {
    pub fn build(&self) -> Result<Graph> {
        Ok(match self {
            GraphSpec::Tree { q, radius } => regular_tree(*q, *radius)?,
            GraphSpec::FreeGroup { rank, radius } => free_product_cyclic(&vec![0; *rank], *radius)?,
            GraphSpec::FreeProduct { orders, radius } => free_product_cyclic(orders, *radius)?,
            GraphSpec::Cycle(n) => cycle(*n)?,
            GraphSpec::Path(n) => path(*n),
            GraphSpec::Grid(w, h) => grid(*w, *h)?,
            GraphSpec::Star(k) => star(*k)?,
            GraphSpec::Spider { arms, len } => spider(*arms, *len)?,
            GraphSpec::Random { n, p, seed } => random_connected(*n, *p, *seed)?,
            GraphSpec::File(path) => parse_graph(&read_text(path)?)?,
        })
    }
}

/// `base` or a vertex id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexArg {
    Base,
    Id(Vertex),
}

impl FromStr for VertexArg {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        if s == "base" {
            Ok(VertexArg::Base)
        } else {
            Ok(VertexArg::Id(num(s, s)?))
        }
    }
}

impl VertexArg {
    pub fn resolve(self, g: &Graph) -> Result<Vertex> {
        match self {
            VertexArg::Base => Ok(g.base()),
            VertexArg::Id(v) => {
                g.check_vertex(v)?;
                Ok(v)
            }
        }
    }
}

/// `euclid:d` or `tree:n:seed` (a random metric tree).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseSpec {
    Euclidean(usize),
    RandomTree { n: usize, seed: u64 },
}

impl FromStr for BaseSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["euclid", d] => Ok(BaseSpec::Euclidean(num(d, s)?)),
            ["tree", n, seed] => Ok(BaseSpec::RandomTree {
                n: num(n, s)?,
                seed: num(seed, s)?,
            }),
            _ => Err(CliError::parse(format!("unknown base space `{s}`"))),
        }
    }
}

impl BaseSpec {
    pub fn build(self) -> Result<HSpace> {
        match self {
            BaseSpec::Euclidean(0) => {
                Err(CliError::parse("Euclidean base needs a positive dimension"))
            }
            BaseSpec::Euclidean(d) => Ok(HSpace::euclidean(d)),
            BaseSpec::RandomTree { n, seed } => Ok(HSpace::over_tree(MetricTree::random(n, seed)?)),
        }
    }
}

/// `t@y1,y2,...` over a Euclidean base, `t@v+offset` over a tree.
pub fn parse_point(space: &HSpace, s: &str) -> Result<HPoint> {
    let (t, y) = s
        .split_once('@')
        .ok_or_else(|| CliError::parse(format!("point `{s}` is not of the form t@y")))?;
    let t: f64 = num(t, s)?;
    let y = match space.base() {
        BaseSpace::Euclidean(_) => {
            BasePoint::Euclidean(y.split(',').map(|c| num(c, s)).collect::<Result<_>>()?)
        }
        BaseSpace::MetricTree(_) => {
            let (v, off) = y.split_once('+').unwrap_or((y, "0"));
            BasePoint::Tree(TreePoint {
                vertex: num(v, s)?,
                offset: num(off, s)?,
            })
        }
    };
    space.check_base_point(&y)?;
    Ok(HPoint::new(t, y))
}

pub fn format_base_point(y: &BasePoint) -> String {
    match y {
        BasePoint::Euclidean(v) => v
            .iter()
            .map(|&c| crate::format::float(c))
            .collect::<Vec<_>>()
            .join(";"),
        BasePoint::Tree(p) => format!("{}+{}", p.vertex, crate::format::float(p.offset)),
    }
}
