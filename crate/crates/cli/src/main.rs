//! Command-line front end: load an edge-list graph, run a routine, print a
//! JSON answer with its cost report, optionally cross-checked against the
//! brute-force oracle.
//!
//! Exit codes: 0 on success, 1 on graph/routine errors or an oracle
//! mismatch, 2 on usage errors. Machine-readable JSON goes to stdout and is
//! byte-identical for identical invocations; a human summary goes to stderr.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use spikegraph::families;
use spikegraph::graph::{Graph, VertexSet};
use spikegraph::oracle;
use spikegraph::primitives::{self, EdgeSet, Outcome};
use spikegraph::report::{expected_costs, CostParams, Routine};

#[derive(Parser)]
#[command(
    name = "spikegraph",
    version,
    about = "Graph analysis with spiking neurons"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphArgs {
    /// Edge-list file to load.
    #[arg(short = 'g', long = "graph")]
    graph: PathBuf,
    /// Interpret edges as directed arcs.
    #[arg(long)]
    directed: bool,
    /// Cross-check the answer against the brute-force oracle.
    #[arg(long)]
    oracle: bool,
    /// Include the spike raster(s) in the output.
    #[arg(long)]
    raster: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum SubgraphMethod {
    Iterative,
    Parallel,
}

#[derive(Clone, Copy, ValueEnum)]
enum TriangleMethod {
    Iterative,
    Clique,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Path,
    Cycle,
    Complete,
    Star,
    Er,
}

#[derive(Subcommand)]
enum Command {
    /// Nearest neighbors of a vertex.
    Neighbors {
        #[command(flatten)]
        graph: GraphArgs,
        /// Vertex label to drive.
        #[arg(short = 'v', long)]
        vertex: u64,
    },
    /// First-fire tick of every reachable vertex (equals hop distance).
    Distances {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(short = 'v', long)]
        vertex: u64,
        /// Tick budget for reaching quiescence (default: |V| + 2).
        #[arg(long)]
        max_ticks: Option<u64>,
    },
    /// Eccentricity of a vertex.
    Eccentricity {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(short = 'v', long)]
        vertex: u64,
    },
    /// Induced edge set of a vertex subset.
    Subgraph {
        #[command(flatten)]
        graph: GraphArgs,
        /// Comma-separated vertex labels.
        #[arg(long, value_delimiter = ',')]
        vertices: Vec<u64>,
        #[arg(long, value_enum, default_value = "parallel")]
        method: SubgraphMethod,
    },
    /// Neighborhood graph of a vertex (members and induced edges).
    Neighborhood {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(short = 'v', long)]
        vertex: u64,
    },
    /// Triangle enumeration on an edge or at a vertex.
    Triangles {
        #[command(flatten)]
        graph: GraphArgs,
        /// Count triangles containing this edge, given as "u,v".
        #[arg(long, value_delimiter = ',', conflicts_with = "vertex")]
        edge: Option<Vec<u64>>,
        /// Count triangles containing this vertex.
        #[arg(short = 'v', long)]
        vertex: Option<u64>,
        #[arg(long, value_enum, default_value = "iterative")]
        method: TriangleMethod,
    },
    /// Test whether a vertex subset is a clique.
    CliqueVerify {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_delimiter = ',')]
        vertices: Vec<u64>,
        /// Use plastic synapses and also report the missing edges.
        #[arg(long)]
        plastic: bool,
    },
    /// Vertices that extend a known clique by one.
    CliqueExpand {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_delimiter = ',')]
        vertices: Vec<u64>,
    },
    /// Generate an edge-list file from a named family.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(short = 'n', long)]
        n: usize,
        /// Edge probability (Erdős–Rényi only).
        #[arg(short = 'p', long)]
        p: Option<f64>,
        /// Generator seed (Erdős–Rényi only).
        #[arg(long, default_value = "0")]
        seed: u64,
        /// Output file (default: stdout).
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
    /// Reference cost bounds for a routine instance.
    Costs {
        /// Routine name, e.g. nearest-neighbors or triangle-vertex-clique.
        #[arg(long)]
        routine: String,
        /// Vertex count of the instance.
        #[arg(short = 'n', long, default_value = "0")]
        n: usize,
        /// Edge count of the instance.
        #[arg(long, default_value = "0")]
        edges: usize,
        /// Degree of the queried vertex (triangle routines).
        #[arg(short = 'd', long)]
        degree: Option<usize>,
        /// Subset size (clique routines).
        #[arg(long)]
        subset_size: Option<usize>,
    },
}

/// Everything a successful invocation prints.
#[derive(Debug)]
struct Execution {
    stdout: String,
    summary: String,
    oracle_ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(exec) => {
            println!("{}", exec.stdout);
            eprintln!("{}", exec.summary);
            if exec.oracle_ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: oracle disagrees with the spike-based answer");
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn load_graph(args: &GraphArgs) -> Result<Graph> {
    let text = fs::read_to_string(&args.graph)
        .with_context(|| format!("cannot read {}", args.graph.display()))?;
    Graph::parse_edge_list(&text, args.directed)
        .with_context(|| format!("cannot parse {}", args.graph.display()))
}

fn resolve_vertex(g: &Graph, label: u64) -> Result<usize> {
    g.index_of_label(label)
        .ok_or_else(|| anyhow!("vertex label {label} does not occur in the graph"))
}

fn resolve_subset(g: &Graph, labels: &[u64]) -> Result<VertexSet> {
    labels.iter().map(|&l| resolve_vertex(g, l)).collect()
}

fn labels(g: &Graph, vertices: impl IntoIterator<Item = usize>) -> Vec<u64> {
    let mut out: Vec<u64> = vertices
        .into_iter()
        .map(|v| g.label_of(v).unwrap())
        .collect();
    out.sort_unstable();
    out
}

fn label_edges(g: &Graph, edges: &EdgeSet) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> = edges
        .iter()
        .map(|&(a, b)| {
            let (la, lb) = (g.label_of(a).unwrap(), g.label_of(b).unwrap());
            (la.min(lb), la.max(lb))
        })
        .collect();
    out.sort_unstable();
    out
}

fn edges_json(pairs: &[(u64, u64)]) -> Value {
    Value::Array(pairs.iter().map(|&(a, b)| json!([a, b])).collect())
}

/// Assembles the output object and one-line summary for a routine outcome.
fn render<T>(
    out: &Outcome<T>,
    answer: Value,
    oracle_match: Option<bool>,
    with_rasters: bool,
    summary: String,
) -> Result<Execution> {
    let mut body = Map::new();
    body.insert("answer".into(), answer);
    body.insert("report".into(), serde_json::to_value(&out.report)?);
    if let Some(matched) = oracle_match {
        body.insert("oracle_match".into(), Value::Bool(matched));
    }
    if with_rasters {
        body.insert("rasters".into(), serde_json::to_value(&out.rasters)?);
    }
    Ok(Execution {
        stdout: serde_json::to_string(&Value::Object(body))?,
        summary,
        oracle_ok: oracle_match.unwrap_or(true),
    })
}

fn run(command: Command) -> Result<Execution> {
    match command {
        Command::Neighbors { graph, vertex } => {
            let g = load_graph(&graph)?;
            let v = resolve_vertex(&g, vertex)?;
            let out = primitives::nearest_neighbors(&g, v)?;
            let answer = labels(&g, out.answer.iter());
            let oracle_match = graph
                .oracle
                .then(|| -> Result<bool> { Ok(labels(&g, oracle::adjacency(&g, v)?) == answer) })
                .transpose()?;
            let summary = format!(
                "neighbors of {vertex}: {} vertices in {} round(s)",
                answer.len(),
                out.report.mct
            );
            render(&out, json!(answer), oracle_match, graph.raster, summary)
        }
        Command::Distances {
            graph,
            vertex,
            max_ticks,
        } => {
            let g = load_graph(&graph)?;
            let v = resolve_vertex(&g, vertex)?;
            let budget = max_ticks.unwrap_or_else(|| primitives::default_wavefront_ticks(&g));
            let out = primitives::first_fire_times(&g, v, budget)?;
            let mut answer: Vec<(u64, u64)> = out
                .answer
                .iter()
                .map(|&(u, t)| (g.label_of(u).unwrap(), t))
                .collect();
            answer.sort_unstable();
            let oracle_match = graph
                .oracle
                .then(|| -> Result<bool> {
                    let mut want: Vec<(u64, u64)> = oracle::bfs_distances(&g, v)?
                        .into_iter()
                        .map(|(u, d)| (g.label_of(u).unwrap(), d))
                        .collect();
                    want.sort_unstable();
                    Ok(want == answer)
                })
                .transpose()?;
            let summary = format!(
                "first-fire times from {vertex}: {} vertices, last at tick {}",
                answer.len(),
                out.report.mct
            );
            let answer_json = Value::Array(answer.iter().map(|&(u, t)| json!([u, t])).collect());
            render(&out, answer_json, oracle_match, graph.raster, summary)
        }
        Command::Eccentricity { graph, vertex } => {
            let g = load_graph(&graph)?;
            let v = resolve_vertex(&g, vertex)?;
            let out = primitives::eccentricity(&g, v)?;
            let oracle_match = graph
                .oracle
                .then(|| -> Result<bool> {
                    let max = oracle::bfs_distances(&g, v)?
                        .into_iter()
                        .map(|(_, d)| d)
                        .max()
                        .unwrap_or(0);
                    Ok(max == out.answer)
                })
                .transpose()?;
            let summary = format!("eccentricity of {vertex}: {}", out.answer);
            render(&out, json!(out.answer), oracle_match, graph.raster, summary)
        }
        Command::Subgraph {
            graph,
            vertices,
            method,
        } => {
            let g = load_graph(&graph)?;
            let subset = resolve_subset(&g, &vertices)?;
            let out = match method {
                SubgraphMethod::Iterative => primitives::subgraph_extract_iterative(&g, &subset)?,
                SubgraphMethod::Parallel => primitives::subgraph_extract_parallel(&g, &subset)?,
            };
            let answer = label_edges(&g, &out.answer);
            let oracle_match = graph
                .oracle
                .then(|| -> Result<bool> {
                    let want = oracle::induced_edges(&g, subset.as_slice())?;
                    Ok(label_edges(&g, &want) == answer)
                })
                .transpose()?;
            let summary = format!("induced subgraph: {} edge(s)", answer.len());
            render(
                &out,
                edges_json(&answer),
                oracle_match,
                graph.raster,
                summary,
            )
        }
        Command::Neighborhood { graph, vertex } => {
            let g = load_graph(&graph)?;
            let v = resolve_vertex(&g, vertex)?;
            let out = primitives::neighborhood_extract(&g, v)?;
            let members = labels(&g, out.answer.0.iter());
            let edges = label_edges(&g, &out.answer.1);
            let oracle_match =
                graph
                    .oracle
                    .then(|| -> Result<bool> {
                        let mut want_members: Vec<usize> = oracle::adjacency(&g, v)?;
                        want_members.push(v);
                        let want_edges = oracle::induced_edges(&g, &want_members)?;
                        Ok(labels(&g, want_members) == members
                            && label_edges(&g, &want_edges) == edges)
                    })
                    .transpose()?;
            let summary = format!(
                "neighborhood of {vertex}: {} vertices, {} edges",
                members.len(),
                edges.len()
            );
            let answer = json!({ "vertices": members, "edges": edges_json(&edges) });
            render(&out, answer, oracle_match, graph.raster, summary)
        }
        Command::Triangles {
            graph,
            edge,
            vertex,
            method,
        } => {
            let g = load_graph(&graph)?;
            match (edge, vertex) {
                (Some(pair), None) => {
                    if pair.len() != 2 {
                        bail!("--edge takes exactly two labels, e.g. --edge 0,1");
                    }
                    let i = resolve_vertex(&g, pair[0])?;
                    let j = resolve_vertex(&g, pair[1])?;
                    let out = primitives::triangles_on_edge(&g, i, j)?;
                    let apexes = labels(&g, out.answer.1.iter());
                    let oracle_match = graph
                        .oracle
                        .then(|| -> Result<bool> {
                            Ok(labels(&g, oracle::common_neighbors(&g, &[i, j])?) == apexes)
                        })
                        .transpose()?;
                    let summary = format!(
                        "triangles on edge ({}, {}): {}",
                        pair[0], pair[1], out.answer.0
                    );
                    let answer = json!({ "count": out.answer.0, "apexes": apexes });
                    render(&out, answer, oracle_match, graph.raster, summary)
                }
                (None, Some(label)) => {
                    let v = resolve_vertex(&g, label)?;
                    let out = match method {
                        TriangleMethod::Iterative => {
                            primitives::triangles_at_vertex_iterative(&g, v)?
                        }
                        TriangleMethod::Clique => primitives::triangles_at_vertex_clique(&g, v)?,
                    };
                    let tuples: Vec<[u64; 3]> = out
                        .answer
                        .1
                        .iter()
                        .map(|t| {
                            let (a, b, c) = t.vertices();
                            let mut l = [
                                g.label_of(a).unwrap(),
                                g.label_of(b).unwrap(),
                                g.label_of(c).unwrap(),
                            ];
                            l.sort_unstable();
                            l
                        })
                        .collect();
                    let oracle_match = graph
                        .oracle
                        .then(|| -> Result<bool> {
                            let (want, want_tuples) = oracle::triangle_count_vertex(&g, v)?;
                            let got: BTreeSet<(usize, usize, usize)> =
                                out.answer.1.iter().map(|t| t.vertices()).collect();
                            Ok(want == out.answer.0 && want_tuples == got)
                        })
                        .transpose()?;
                    let summary = format!("triangles at vertex {label}: {}", out.answer.0);
                    let answer = json!({ "count": out.answer.0, "triangles": tuples });
                    render(&out, answer, oracle_match, graph.raster, summary)
                }
                _ => bail!("pass exactly one of --edge or --vertex"),
            }
        }
        Command::CliqueVerify {
            graph,
            vertices,
            plastic,
        } => {
            let g = load_graph(&graph)?;
            let subset = resolve_subset(&g, &vertices)?;
            if plastic {
                let out = primitives::clique_verify_plastic(&g, &subset)?;
                let missing = label_edges(&g, &out.answer.1);
                let oracle_match = graph
                    .oracle
                    .then(|| -> Result<bool> {
                        Ok(oracle::is_clique(&g, subset.as_slice())? == out.answer.0)
                    })
                    .transpose()?;
                let summary = format!(
                    "clique({vertices:?}) = {}, {} missing edge(s)",
                    out.answer.0,
                    missing.len()
                );
                let answer =
                    json!({ "clique": out.answer.0, "missing_edges": edges_json(&missing) });
                render(&out, answer, oracle_match, graph.raster, summary)
            } else {
                let out = primitives::clique_verify(&g, &subset)?;
                let oracle_match = graph
                    .oracle
                    .then(|| -> Result<bool> {
                        Ok(oracle::is_clique(&g, subset.as_slice())? == out.answer)
                    })
                    .transpose()?;
                let summary = format!("clique({vertices:?}) = {}", out.answer);
                render(&out, json!(out.answer), oracle_match, graph.raster, summary)
            }
        }
        Command::CliqueExpand { graph, vertices } => {
            let g = load_graph(&graph)?;
            let subset = resolve_subset(&g, &vertices)?;
            let out = primitives::clique_expand(&g, &subset)?;
            let answer = labels(&g, out.answer.iter());
            let oracle_match = graph
                .oracle
                .then(|| -> Result<bool> {
                    Ok(labels(&g, oracle::common_neighbors(&g, subset.as_slice())?) == answer)
                })
                .transpose()?;
            let summary = format!("{} vertex(es) extend the clique", answer.len());
            render(&out, json!(answer), oracle_match, graph.raster, summary)
        }
        Command::Gen {
            family,
            n,
            p,
            seed,
            out,
        } => {
            let need = |minimum: usize, what: &str| -> Result<()> {
                if n < minimum {
                    bail!("a {what} needs at least {minimum} vertices (got {n})");
                }
                Ok(())
            };
            let g = match family {
                Family::Path => {
                    need(1, "path")?;
                    families::path(n)
                }
                Family::Cycle => {
                    need(3, "cycle")?;
                    families::cycle(n)
                }
                Family::Complete => {
                    need(1, "complete graph")?;
                    families::complete(n)
                }
                Family::Star => {
                    need(2, "star")?;
                    families::star(n)
                }
                Family::Er => {
                    need(1, "random graph")?;
                    let p = p.ok_or_else(|| anyhow!("the er family needs --p"))?;
                    if !(0.0..=1.0).contains(&p) {
                        bail!("edge probability must lie in [0, 1] (got {p})");
                    }
                    families::erdos_renyi_connected(n, p, seed)
                }
            };
            let text = g.to_edge_list();
            let summary = format!(
                "generated {} vertices, {} edges",
                g.vertex_count(),
                g.edge_count()
            );
            match out {
                Some(path) => {
                    fs::write(&path, &text)
                        .with_context(|| format!("cannot write {}", path.display()))?;
                    Ok(Execution {
                        stdout: serde_json::to_string(&json!({
                            "path": path.display().to_string(),
                            "vertices": g.vertex_count(),
                            "edges": g.edge_count(),
                        }))?,
                        summary,
                        oracle_ok: true,
                    })
                }
                None => Ok(Execution {
                    stdout: text.trim_end().to_string(),
                    summary,
                    oracle_ok: true,
                }),
            }
        }
        Command::Costs {
            routine,
            n,
            edges,
            degree,
            subset_size,
        } => {
            let routine: Routine = routine.parse()?;
            let params = CostParams {
                vertex_count: n,
                edge_count: edges,
                degree,
                subset_size,
            };
            let bounds = expected_costs(routine, &params)?;
            Ok(Execution {
                stdout: serde_json::to_string(&bounds)?,
                summary: format!("reference costs for {routine}"),
                oracle_ok: true,
            })
        }
    }
}
