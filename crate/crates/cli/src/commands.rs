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

use std::collections::HashMap;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperbound::amenable::{lambda_decay_experiment, pre_patterson_graph, LambdaParams};
use hyperbound::approx::{build_partition, extract_atoms, project_pi_n};
use hyperbound::barycenter::{classify_measure, quasi_barycenter, Classification};
use hyperbound::boundary::{QuasiMetricTable, VisualMetric};
use hyperbound::cocycle::{CocycleContext, HorizonPoint, QuasiCocycle};
use hyperbound::graph::{delta_four_point, delta_rips, DeltaEstimator};
use hyperbound::growth::{growth_profile, tempered_check};
use hyperbound::hyperbolize::cat_minus1_check;
use hyperbound::measure::FiniteMeasure;
use hyperbound::{Graph, Vertex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::format::{float, format_graph, parse_measure, rational, read_text};
use crate::output::Output;
use crate::spec::{format_base_point, parse_point, BaseSpec, GraphSpec, VertexArg};

#[derive(Debug, Parser)]
#[command(
    name = "hyperbound",
    version,
    about = "Experiments on finite models of hyperbolic spaces"
)]
pub struct Cli {
    /// Worker threads; overrides HYPERBOUND_THREADS.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// tree:q:R, freegroup:k:R, freeprod:o1,o2,..:R, cycle:n, path:n,
    /// grid:w:h, star:k, spider:arms:len, random:n:p:seed or file:path.
    #[arg(long = "gen")]
    pub graph: GraphSpec,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Estimator {
    FourPoint,
    Rips,
}

#[derive(Debug, Args)]
pub struct ContextArgs {
    /// Horizon radius; the radius of the graph when absent.
    #[arg(long)]
    pub radius: Option<u32>,
    #[arg(long, value_enum, default_value = "rips")]
    pub estimator: Estimator,
    /// Visual exponent `a`, overriding the default from δ.
    #[arg(long)]
    pub a: Option<f64>,
    /// Minimum depth of horizon cells.
    #[arg(long)]
    pub tail: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Writes a generated graph in the graph file format.
    Gen(GraphArgs),
    /// Four-point and Rips hyperbolicity constants.
    Delta {
        #[command(flatten)]
        graph: GraphArgs,
        /// Geodesics enumerated per pair for the Rips constant.
        #[arg(long, default_value_t = 64)]
        cap: usize,
    },
    /// Visual quasi-metric and inner metric tables.
    Metrics {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long, default_value = "base")]
        x: VertexArg,
        /// Search chains even on trees.
        #[arg(long)]
        chain_search: bool,
    },
    /// Quasi-cocycle inequalities on sampled triples.
    CocycleCheck {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Quasi-barycenter set or elementarity class of a boundary measure.
    Barycenter {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        ctx: ContextArgs,
        /// Boundary measure file.
        #[arg(long)]
        measure: String,
        #[arg(long, default_value = "base")]
        x: VertexArg,
        #[arg(long, default_value_t = 0.0)]
        r: f64,
        /// Report the elementarity class instead of the sublevel set.
        #[arg(long)]
        classify: bool,
    },
    /// Ball, sphere and packing statistics.
    Growth {
        #[command(flatten)]
        graph: GraphArgs,
        /// Largest radius; half the radius of the graph when absent.
        #[arg(long)]
        rmax: Option<u32>,
    },
    /// Total variation between harmonic averages from two basepoints.
    LambdaDecay {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long, default_value = "base")]
        x: VertexArg,
        #[arg(long)]
        xp: VertexArg,
        /// Endpoint of the horizon point.
        #[arg(long)]
        gamma: Vertex,
        #[arg(long, value_delimiter = ',', default_value = "2,4,8")]
        n: Vec<u32>,
        /// Fellow-travel constant; ceil(8δ) when absent.
        #[arg(long)]
        c1: Option<u32>,
        #[arg(long, default_value_t = 0)]
        r: u32,
        /// Continue rays past the horizon.
        #[arg(long)]
        virtual_tail: bool,
    },
    /// Truncated pre-Patterson measure.
    Patterson {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value = "base")]
        x: VertexArg,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        truncation: u32,
    },
    /// Projection of a measure onto a sphere.
    PiProject {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long)]
        measure: String,
        #[arg(long, default_value = "base")]
        x: VertexArg,
        #[arg(long)]
        n: u32,
        /// Window width; e^{-an} when absent.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Writes the partition of unity as `s,z,phi`.
        #[arg(long)]
        partition: Option<String>,
    },
    /// Largest atom of a boundary measure from its sphere projections.
    Atoms {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long)]
        measure: String,
        #[arg(long)]
        nmax: u32,
    },
    /// Distance and geodesic in the hyperbolization of a base space.
    Hyperbolize {
        /// euclid:d or tree:n:seed.
        #[arg(long)]
        base: BaseSpec,
        /// `t@y1,..` or `t@v+offset`.
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        /// Geodesic points to list besides the endpoints.
        #[arg(long, default_value_t = 0)]
        steps: usize,
    },
    /// Comparison triangle tests on random triangles.
    CatCheck {
        #[arg(long)]
        base: BaseSpec,
        /// Number of triangles.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Point pairs tested per triangle.
        #[arg(long, default_value_t = 8)]
        pairs: usize,
        /// Writes `triangle,max_violation,pass` per triangle.
        #[arg(long)]
        csv: Option<String>,
    },
}

impl Command {
    fn seed(&self) -> Option<u64> {
        match self {
            Command::CocycleCheck { seed, .. } | Command::CatCheck { seed, .. } => Some(*seed),
            _ => None,
        }
    }
}

fn context<'g>(g: &'g Graph, args: &ContextArgs) -> Result<CocycleContext<'g>> {
    let estimator = match args.estimator {
        Estimator::FourPoint => DeltaEstimator::FourPoint,
        Estimator::Rips => DeltaEstimator::Rips { cap: 64 },
    };
    let mut ctx = CocycleContext::with_estimator(g, args.radius.unwrap_or(g.radius()), estimator)?;
    if let Some(a) = args.a {
        ctx = ctx.with_exponent(a)?;
    }
    if let Some(t) = args.tail {
        ctx = ctx.with_tail(t)?;
    }
    Ok(ctx)
}

fn context_comment(ctx: &CocycleContext<'_>) -> String {
    format!(
        "# radius,{}\n# delta,{}\n# a,{}\n# c2,{}",
        ctx.radius(),
        ctx.delta(),
        float(ctx.exponent()),
        float(ctx.c2())
    )
}

fn json_list(v: &[Vertex]) -> String {
    let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(", "))
}

fn measure_lines(out: &mut Output, m: &FiniteMeasure<Vertex>) -> Result<()> {
    out.line("point,weight")?;
    for (p, w) in m.iter() {
        out.line(format!("{p},{}", float(w)))?;
    }
    Ok(())
}

/// Runs one parsed command line; `command_line` goes into the header.
pub fn run(cli: Cli, command_line: &str) -> Result<()> {
    let mut out = Output::open(cli.out.as_deref(), command_line, cli.command.seed())?;
    match cli.command {
        Command::Gen(graph) => out.write(&format_graph(&graph.graph.build()?))?,
        Command::Delta { graph, cap } => {
            let g = graph.graph.build()?;
            out.line(format!("delta_4pt,{}", delta_four_point(&g)))?;
            out.line(format!("delta_rips,{}", delta_rips(&g, cap)?))?;
        }
        Command::Metrics {
            graph,
            ctx,
            x,
            chain_search,
        } => {
            let g = graph.graph.build()?;
            let c = context(&g, &ctx)?;
            let mut metric = VisualMetric::new(&g, x.resolve(&g)?, c.exponent())?;
            if chain_search {
                metric = metric.with_chain_search();
            }
            let table = QuasiMetricTable::build(&metric, None)?;
            out.line(context_comment(&c))?;
            out.line("p,q,varrho,rho")?;
            let pts = table.points();
            for i in 0..pts.len() {
                for j in 0..pts.len() {
                    out.line(format!(
                        "{},{},{},{}",
                        pts[i],
                        pts[j],
                        float(table.varrho(i, j)),
                        float(table.rho(i, j))
                    ))?;
                }
            }
            out.line(format!(
                "# sandwich_violations,{}",
                table.sandwich_violations(1e-12).len()
            ))?;
        }
        Command::CocycleCheck {
            graph,
            ctx,
            samples,
            seed,
        } => {
            let g = graph.graph.build()?;
            let c = context(&g, &ctx)?;
            cocycle_check(&mut out, &c, samples, seed)?;
        }
        Command::Barycenter {
            graph,
            ctx,
            measure,
            x,
            r,
            classify,
        } => {
            let g = graph.graph.build()?;
            let c = context(&g, &ctx)?;
            let lambda = parse_measure(&read_text(&measure)?)?;
            if classify {
                let (kind, set) = match classify_measure(&c, &lambda)? {
                    Classification::Elementary1(a) => ("elementary1", vec![a]),
                    Classification::Elementary2(a, b) => ("elementary2", vec![a, b]),
                    Classification::Bulky(set) => ("bulky", set),
                };
                out.line(format!(
                    "{{\"kind\": \"{kind}\", \"set\": {}}}",
                    json_list(&set)
                ))?;
            } else {
                let b = quasi_barycenter(&c, &lambda, x.resolve(&g)?, r)?;
                out.line(format!(
                    "{{\"basepoint\": {}, \"r\": {}, \"infimum\": {}, \"set\": {}, \"global_set\": {}}}",
                    b.basepoint,
                    float(b.r),
                    float(b.infimum),
                    json_list(&b.set),
                    json_list(&b.global_set)
                ))?;
            }
        }
        Command::Growth { graph, rmax } => {
            let g = graph.graph.build()?;
            let rmax = rmax.unwrap_or(g.radius() / 2);
            let profile = growth_profile(&g, rmax)?;
            let tempered = tempered_check(&g, 0, rmax, usize::MAX)?;
            out.line("r,ball_min,ball_max,sphere,packing_rho1,packing_rho2,packing_rho3")?;
            for r in 0..=rmax as usize {
                let (_, lo, hi) = tempered.rows[r];
                let packing = match &profile.packing_numbers {
                    Some(p) => format!("{},{},{}", p[r][0], p[r][1], p[r][2]),
                    None => ",,".to_string(),
                };
                out.line(format!(
                    "{r},{lo},{hi},{},{packing}",
                    profile.sphere_sizes[r]
                ))?;
            }
            out.line(format!("# interior,{}", tempered.interior))?;
            out.line(format!("# growth_rate,{}", float(profile.growth_rate)))?;
            out.line(format!(
                "# critical_exponent,{}",
                float(profile.critical_exponent_estimate)
            ))?;
        }
        Command::LambdaDecay {
            graph,
            ctx,
            x,
            xp,
            gamma,
            n,
            c1,
            r,
            virtual_tail,
        } => {
            let g = graph.graph.build()?;
            let c = context(&g, &ctx)?;
            let gamma = HorizonPoint::new(&g, gamma)?;
            let params = LambdaParams {
                r,
                c1,
                virtual_tail,
                ..Default::default()
            };
            let rows =
                lambda_decay_experiment(&c, x.resolve(&g)?, xp.resolve(&g)?, &gamma, &n, params)?;
            out.line(context_comment(&c))?;
            out.line("n,tv,tv_float,bound,holds,sandwiched")?;
            for row in rows {
                out.line(format!(
                    "{},{},{},{},{},{}",
                    row.n,
                    rational(&row.tv),
                    float(row.tv_f64()),
                    float(row.bound),
                    row.holds,
                    row.sandwiched
                ))?;
            }
        }
        Command::Patterson {
            graph,
            x,
            delta,
            truncation,
        } => {
            let g = graph.graph.build()?;
            let nu = pre_patterson_graph(&g, x.resolve(&g)?, delta, truncation)?;
            out.line(format!("# normalizer,{}", float(nu.normalizer)))?;
            out.line(format!("# tail_bound,{}", float(nu.tail_bound)))?;
            measure_lines(&mut out, &nu.measure)?;
        }
        Command::PiProject {
            graph,
            ctx,
            measure,
            x,
            n,
            epsilon,
            partition,
        } => {
            let g = graph.graph.build()?;
            let c = context(&g, &ctx)?;
            let theta = parse_measure(&read_text(&measure)?)?;
            for &z in theta.support() {
                g.check_vertex(z)?;
            }
            let p = build_partition(&c, x.resolve(&g)?, n, epsilon)?;
            if let Some(path) = partition {
                let mut dump = Output::open(Some(&path), command_line, None)?;
                dump.line("s,z,phi")?;
                for (s, z, f) in p.entries() {
                    dump.line(format!("{s},{z},{}", float(f)))?;
                }
                dump.finish()?;
            }
            out.line(format!("# epsilon,{}", float(p.epsilon())))?;
            measure_lines(&mut out, &project_pi_n(&p, &theta))?;
        }
        Command::Atoms {
            graph,
            ctx,
            measure,
            nmax,
        } => {
            let g = graph.graph.build()?;
            let c = context(&g, &ctx)?;
            let theta = parse_measure(&read_text(&measure)?)?;
            let report = extract_atoms(&c, &theta, nmax)?;
            out.line("n,w")?;
            for (i, w) in report.series.iter().enumerate() {
                out.line(format!("{},{}", i + 1, float(*w)))?;
            }
            out.line(format!("# weight,{}", float(report.weight)))?;
            out.line(format!("# centers,{}", json_list(&report.centers)))?;
            out.line(format!(
                "# atomic_support,{}",
                json_list(&report.atomic_support)
            ))?;
            for (a, b) in &report.unresolved {
                out.line(format!("# unresolved,{a},{b}"))?;
            }
        }
        Command::Hyperbolize { base, p, q, steps } => {
            let space = base.build()?;
            let (p, q) = (parse_point(&space, &p)?, parse_point(&space, &q)?);
            let d = space.distance(&p, &q)?;
            out.line(format!("distance,{}", float(d)))?;
            if steps > 0 {
                out.line("s,t,y")?;
                for i in 0..=steps + 1 {
                    let s = d * i as f64 / (steps + 1) as f64;
                    let point = space.geodesic_point(&p, &q, s)?;
                    out.line(format!(
                        "{},{},{}",
                        float(s),
                        float(point.t),
                        format_base_point(&point.y)
                    ))?;
                }
            }
        }
        Command::CatCheck {
            base,
            samples,
            seed,
            pairs,
            csv,
        } => {
            let space = base.build()?;
            let reports: Vec<_> = (0..samples)
                .into_par_iter()
                .map(|i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(i as u64);
                    let tri = [
                        space.random_point(&mut rng),
                        space.random_point(&mut rng),
                        space.random_point(&mut rng),
                    ];
                    cat_minus1_check(&space, &tri, pairs, rng.gen())
                })
                .collect::<std::result::Result<_, _>>()?;
            if let Some(path) = csv {
                let mut dump = Output::open(Some(&path), command_line, Some(seed))?;
                dump.line("triangle,max_violation,pass")?;
                for (i, r) in reports.iter().enumerate() {
                    dump.line(format!("{i},{},{}", float(r.max_violation), r.pass))?;
                }
                dump.finish()?;
            }
            let passed = reports.iter().filter(|r| r.pass).count();
            let worst = reports
                .iter()
                .map(|r| r.max_violation)
                .fold(f64::NEG_INFINITY, f64::max);
            out.line(format!("# worst_violation,{}", float(worst)))?;
            let verdict = if passed == samples { "PASS" } else { "FAIL" };
            out.line(format!("{verdict} {passed}/{samples}"))?;
        }
    }
    out.finish()
}

/// Samples triples from the inner half ball and horizon points from a pool,
/// testing the quasi-cocycle inequalities and the defect of the averaged
/// functional under random three-atom measures.
fn cocycle_check(
    out: &mut Output,
    ctx: &CocycleContext<'_>,
    samples: usize,
    seed: u64,
) -> Result<()> {
    let g = ctx.graph();
    let c2 = ctx.c2();
    let inner = g.ball(g.base(), ctx.radius() / 2);
    let horizon = ctx.horizon()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<Vertex> = (0..horizon.len().min(32))
        .map(|_| horizon[rng.gen_range(0..horizon.len())].endpoint())
        .collect();
    let mut cocycles: HashMap<Vertex, QuasiCocycle<'_>> = HashMap::new();
    for &e in &pool {
        if !cocycles.contains_key(&e) {
            cocycles.insert(e, ctx.quasi_cocycle(e)?);
        }
    }
    let rows: Vec<[bool; 4]> = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<[bool; 4]> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64 + 1);
            let mut pick = || inner[rng.gen_range(0..inner.len())];
            let (x, y, z) = (pick(), pick(), pick());
            let b = &cocycles[&pool[rng.gen_range(0..pool.len())]];
            let v = |p, q| b.value(p, q).map(|v| v as f64);
            let first = v(x, y)?.abs() <= g.dist(x, y) as f64;
            let two = v(x, y)? + v(y, x)?;
            let three = v(x, y)? + v(y, z)? + v(z, x)?;
            let atoms: Vec<(Vertex, f64)> = (0..3)
                .map(|_| (pool[rng.gen_range(0..pool.len())], rng.gen_range(0.1..1.0)))
                .collect();
            let total: f64 = atoms.iter().map(|a| a.1).sum();
            let bl = |p, q| -> Result<f64> {
                let mut s = 0.0;
                for &(e, w) in &atoms {
                    s += w / total * cocycles[&e].value(p, q)? as f64;
                }
                Ok(s)
            };
            let defect = (bl(x, z)? - bl(y, z)? - bl(x, y)?).abs();
            Ok([
                first,
                (0.0..=c2).contains(&two),
                (0.0..=2.0 * c2).contains(&three),
                defect <= 3.0 * c2,
            ])
        })
        .collect::<Result<_>>()?;
    out.line(context_comment(ctx))?;
    out.line("check,passed,total")?;
    for (k, name) in ["lipschitz", "pair", "triple", "averaged_defect"]
        .iter()
        .enumerate()
    {
        out.line(format!(
            "{name},{},{samples}",
            rows.iter().filter(|r| r[k]).count()
        ))?;
    }
    let passed = rows.iter().filter(|r| r.iter().all(|&b| b)).count();
    let verdict = if passed == samples { "PASS" } else { "FAIL" };
    out.line(format!("{verdict} {passed}/{samples}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_consistent() {
        Cli::command().debug_assert();
    }
}
