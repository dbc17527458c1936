//! Spike-based graph routines.
//!
//! Every routine here follows the same shape: configure a spiking neuron
//! system from the input graph, drive some neurons, and read the answer
//! back out of the spike raster or the potentiated weights — never out of
//! the graph's own adjacency, except where a degenerate case or an
//! explicitly documented ambiguity makes simulation uninformative. Each
//! answer ships with a [`RunReport`] stating the propagation rounds,
//! threshold/weight ratios, and network read/write counts of the
//! construction used.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::engine::{
    build_sns, EngineError, NeuronParams, Sns, SpikeRaster, StimulusPlan, SynapseParams,
};
use crate::graph::{Graph, GraphError, VertexSet};
use crate::report::{Routine, RunReport};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PrimitiveError {
    #[error("graph is not connected")]
    DisconnectedGraph,
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("({0}, {1}) is not an edge of the graph")]
    NotAnEdge(usize, usize),
    #[error("the given vertex set is not a clique")]
    NotAClique,
    #[error("vertex subset must not be empty")]
    EmptySubset,
    #[error("routine requires an undirected graph")]
    DirectedGraph,
    #[error("no quiescence within {0} ticks")]
    MaxTicksExceeded(u64),
}

impl From<EngineError> for PrimitiveError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::UnknownVertex(v) => PrimitiveError::UnknownVertex(v),
            EngineError::MaxTicksExceeded(t) => PrimitiveError::MaxTicksExceeded(t),
        }
    }
}

/// A routine answer, the raster(s) it was read from, and its cost report.
#[derive(Debug, Clone)]
pub struct Outcome<T> {
    pub answer: T,
    pub rasters: Vec<SpikeRaster>,
    pub report: RunReport,
}

/// A triangle as a sorted triple of distinct vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct TriangleTuple(usize, usize, usize);

impl TriangleTuple {
    pub fn new(a: usize, b: usize, c: usize) -> TriangleTuple {
        assert!(
            a != b && b != c && a != c,
            "triangle vertices must be distinct"
        );
        let mut t = [a, b, c];
        t.sort_unstable();
        TriangleTuple(t[0], t[1], t[2])
    }

    pub fn vertices(&self) -> (usize, usize, usize) {
        (self.0, self.1, self.2)
    }
}

/// Undirected edge sets are kept endpoint-normalized.
pub type EdgeSet = BTreeSet<(usize, usize)>;

fn norm_edge(a: usize, b: usize) -> (usize, usize) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn check_connected(g: &Graph) -> Result<(), PrimitiveError> {
    if g.is_connected() {
        Ok(())
    } else {
        Err(PrimitiveError::DisconnectedGraph)
    }
}

fn check_undirected(g: &Graph) -> Result<(), PrimitiveError> {
    if g.directed() {
        Err(PrimitiveError::DirectedGraph)
    } else {
        Ok(())
    }
}

fn check_vertex(g: &Graph, v: usize) -> Result<(), PrimitiveError> {
    if g.contains_vertex(v) {
        Ok(())
    } else {
        Err(PrimitiveError::UnknownVertex(v))
    }
}

fn check_subset(g: &Graph, subset: &VertexSet) -> Result<(), PrimitiveError> {
    if subset.is_empty() {
        return Err(PrimitiveError::EmptySubset);
    }
    match subset.validate(g) {
        Ok(()) => Ok(()),
        Err(GraphError::UnknownVertex(v)) => Err(PrimitiveError::UnknownVertex(v)),
        Err(other) => unreachable!("validate only reports unknown vertices: {other}"),
    }
}

/// One fire-and-arrival round: unit static-or-plastic synapses with delay 1,
/// `lowered` neurons at `lowered_threshold`, everyone else at
/// `default_threshold`, `driven` stimulated at tick 0, exactly two ticks
/// executed. No refractory gap is needed because the window closes before
/// any echo returns.
fn one_round<'g>(
    g: &'g Graph,
    lowered: &VertexSet,
    lowered_threshold: f64,
    default_threshold: f64,
    learning_rate: f64,
    driven: &VertexSet,
) -> (Sns<'g>, SpikeRaster) {
    let mut sns = build_sns(
        g,
        NeuronParams::new(default_threshold, 0),
        SynapseParams::new(1.0, 1, learning_rate),
    );
    sns.set_thresholds(lowered, lowered_threshold)
        .expect("caller validates the lowered subset");
    let raster = sns
        .run(&StimulusPlan::at(0, driven.clone()), 2, false)
        .expect("bounded run cannot exceed its own budget");
    (sns, raster)
}

/// Default quiescence budget for wavefront runs: the spike front dies out
/// within `|V| + 2` ticks when every neuron fires at most once.
pub fn default_wavefront_ticks(g: &Graph) -> u64 {
    g.vertex_count() as u64 + 2
}

fn wavefront_raster(
    g: &Graph,
    source: usize,
    max_ticks: u64,
) -> Result<SpikeRaster, PrimitiveError> {
    let mut sns = build_sns(
        g,
        NeuronParams::new(1.0, g.vertex_count() as u64),
        SynapseParams::static_unit(),
    );
    Ok(sns.run(
        &StimulusPlan::at(0, VertexSet::new([source])),
        max_ticks,
        true,
    )?)
}

/// Neighbors of `v`, read from which neurons fire internally one round after
/// driving `v` in a unit-threshold system.
pub fn nearest_neighbors(g: &Graph, v: usize) -> Result<Outcome<VertexSet>, PrimitiveError> {
    check_connected(g)?;
    check_vertex(g, v)?;
    let driven = VertexSet::new([v]);
    let (_, raster) = one_round(g, &VertexSet::empty(), 1.0, 1.0, 0.0, &driven);
    let answer = VertexSet::new(raster.internal_at(1));
    let report = RunReport {
        routine: Routine::NearestNeighbors,
        mct: 1,
        threshold_weight_ratios: vec![1.0],
        reads: 0,
        writes: 1,
        spike_total: raster.total_spikes(),
        engine_ticks: raster.executed_ticks(),
    };
    Ok(Outcome {
        answer,
        rasters: vec![raster],
        report,
    })
}

/// First firing tick of every reachable neuron when `v` is driven once and
/// a full-network refractory period makes the wavefront non-backtracking.
/// Each tick equals the unweighted shortest-path distance from `v`.
pub fn first_fire_times(
    g: &Graph,
    v: usize,
    max_ticks: u64,
) -> Result<Outcome<Vec<(usize, u64)>>, PrimitiveError> {
    check_connected(g)?;
    check_vertex(g, v)?;
    if max_ticks == 0 {
        return Err(PrimitiveError::MaxTicksExceeded(0));
    }
    let raster = wavefront_raster(g, v, max_ticks)?;
    let answer: Vec<(usize, u64)> = (0..g.vertex_count())
        .filter_map(|u| raster.first_fire(u).map(|t| (u, t)))
        .collect();
    let report = RunReport {
        routine: Routine::FirstFireTimes,
        mct: raster.last_firing_tick().unwrap_or(0),
        threshold_weight_ratios: vec![1.0],
        reads: 0,
        writes: 1,
        spike_total: raster.total_spikes(),
        engine_ticks: raster.executed_ticks(),
    };
    Ok(Outcome {
        answer,
        rasters: vec![raster],
        report,
    })
}

/// True iff `target` fires within `r` ticks of driving `source`, i.e. the
/// shortest path between them has length at most `r`.
pub fn shortest_path_upper_bound(
    g: &Graph,
    source: usize,
    target: usize,
    r: u64,
) -> Result<Outcome<bool>, PrimitiveError> {
    check_undirected(g)?;
    check_vertex(g, target)?;
    let mut out = first_fire_times(g, source, default_wavefront_ticks(g))?;
    let answer = out.answer.iter().any(|&(u, t)| u == target && t <= r);
    out.report.routine = Routine::ShortestPathUpperBound;
    Ok(Outcome {
        answer,
        rasters: out.rasters,
        report: out.report,
    })
}

/// Longest shortest path from `v`: the tick at which the wavefront's firing
/// pattern terminates.
pub fn eccentricity(g: &Graph, v: usize) -> Result<Outcome<u64>, PrimitiveError> {
    check_undirected(g)?;
    let mut out = first_fire_times(g, v, default_wavefront_ticks(g))?;
    let answer = out
        .rasters
        .first()
        .and_then(|r| r.last_firing_tick())
        .expect("the driven neuron always fires");
    out.report.routine = Routine::Eccentricity;
    Ok(Outcome {
        answer,
        rasters: out.rasters,
        report: out.report,
    })
}

/// Induced edge set of `subset`, found by driving each member in turn with
/// subset thresholds lowered to the synapse weight: only subset members
/// adjacent to the driven neuron can answer.
pub fn subgraph_extract_iterative(
    g: &Graph,
    subset: &VertexSet,
) -> Result<Outcome<EdgeSet>, PrimitiveError> {
    check_undirected(g)?;
    check_connected(g)?;
    check_subset(g, subset)?;
    let mut edges = EdgeSet::new();
    let mut rasters = Vec::with_capacity(subset.len());
    let (mut spikes, mut ticks) = (0u64, 0u64);
    for v in subset.iter() {
        let (_, raster) = one_round(g, subset, 1.0, 2.0, 0.0, &VertexSet::new([v]));
        for u in raster.internal_at(1) {
            edges.insert(norm_edge(v, u));
        }
        spikes += raster.total_spikes();
        ticks += raster.executed_ticks();
        rasters.push(raster);
    }
    let report = RunReport {
        routine: Routine::SubgraphIterative,
        mct: subset.len() as u64,
        threshold_weight_ratios: vec![1.0],
        reads: 0,
        // Base configuration plus the threshold lowering; the serial drives
        // reuse the same parameters.
        writes: 2,
        spike_total: spikes,
        engine_ticks: ticks,
    };
    Ok(Outcome {
        answer: edges,
        rasters,
        report,
    })
}

/// Induced edge set of `subset` in a single two-tick run: drive the whole
/// subset with plastic synapses and read back the synapses that
/// strengthened. An undirected edge is reported only when both directions
/// potentiated, which screens out guard-threshold leaks onto outside
/// neurons.
pub fn subgraph_extract_parallel(
    g: &Graph,
    subset: &VertexSet,
) -> Result<Outcome<EdgeSet>, PrimitiveError> {
    check_undirected(g)?;
    check_connected(g)?;
    check_subset(g, subset)?;
    let guard = (g.edge_count().max(1)) as f64;
    let (sns, raster) = one_round(g, subset, 1.0, guard, 0.5, subset);
    let potentiated: BTreeSet<(usize, usize)> = sns
        .read_potentiated()
        .into_iter()
        .map(|(a, b, _)| (a, b))
        .collect();
    let answer: EdgeSet = potentiated
        .iter()
        .filter(|&&(a, b)| a < b && potentiated.contains(&(b, a)))
        .copied()
        .collect();
    let report = RunReport {
        routine: Routine::SubgraphParallel,
        mct: 2,
        threshold_weight_ratios: vec![1.0],
        reads: 1,
        writes: 2,
        spike_total: raster.total_spikes(),
        engine_ticks: raster.executed_ticks(),
    };
    Ok(Outcome {
        answer,
        rasters: vec![raster],
        report,
    })
}

/// The neighborhood graph of `v`: its vertices from one nearest-neighbor
/// round, its edges from one parallel subgraph extraction over them.
pub fn neighborhood_extract(
    g: &Graph,
    v: usize,
) -> Result<Outcome<(VertexSet, EdgeSet)>, PrimitiveError> {
    check_undirected(g)?;
    let first = nearest_neighbors(g, v)?;
    let mut members = first.answer.clone();
    members.insert(v);
    let second = subgraph_extract_parallel(g, &members)?;
    let mut rasters = first.rasters;
    rasters.extend(second.rasters);
    let report = RunReport {
        routine: Routine::Neighborhood,
        mct: first.report.mct + second.report.mct,
        threshold_weight_ratios: vec![1.0, 1.0],
        reads: 1,
        writes: 2,
        spike_total: first.report.spike_total + second.report.spike_total,
        engine_ticks: first.report.engine_ticks + second.report.engine_ticks,
    };
    Ok(Outcome {
        answer: (members, second.answer),
        rasters,
        report,
    })
}

/// Apex vertices of every triangle containing the edge `(i, j)`: drive both
/// endpoints under a coincidence threshold of 2 and collect the neurons
/// that fire from two simultaneous arrivals.
pub fn triangles_on_edge(
    g: &Graph,
    i: usize,
    j: usize,
) -> Result<Outcome<(usize, VertexSet)>, PrimitiveError> {
    check_undirected(g)?;
    check_vertex(g, i)?;
    check_vertex(g, j)?;
    if !g.has_edge(i, j) {
        return Err(PrimitiveError::NotAnEdge(i, j));
    }
    let driven = VertexSet::new([i, j]);
    let (_, raster) = one_round(g, &VertexSet::empty(), 2.0, 2.0, 0.0, &driven);
    let apexes = VertexSet::new(raster.internal_at(1));
    let report = RunReport {
        routine: Routine::TriangleEdge,
        mct: 1,
        threshold_weight_ratios: vec![2.0],
        reads: 0,
        writes: 1,
        spike_total: raster.total_spikes(),
        engine_ticks: raster.executed_ticks(),
    };
    Ok(Outcome {
        answer: (apexes.len(), apexes),
        rasters: vec![raster],
        report,
    })
}

/// Triangles containing `v` by edge-wise enumeration: one nearest-neighbor
/// round, then one coincidence round per incident edge. Every triangle is
/// witnessed twice, so the raw apex total is halved and tuples are
/// deduplicated as sorted triples.
pub fn triangles_at_vertex_iterative(
    g: &Graph,
    v: usize,
) -> Result<Outcome<(usize, BTreeSet<TriangleTuple>)>, PrimitiveError> {
    check_undirected(g)?;
    let first = nearest_neighbors(g, v)?;
    let degree = first.answer.len() as u64;
    let mut rasters = first.rasters;
    let mut raw_apex_total = 0usize;
    let mut tuples = BTreeSet::new();
    let (mut spikes, mut ticks) = (first.report.spike_total, first.report.engine_ticks);
    for u in first.answer.iter() {
        let edge_out = triangles_on_edge(g, v, u)?;
        let (count, apexes) = edge_out.answer;
        raw_apex_total += count;
        for k in apexes.iter() {
            tuples.insert(TriangleTuple::new(v, u, k));
        }
        spikes += edge_out.report.spike_total;
        ticks += edge_out.report.engine_ticks;
        rasters.extend(edge_out.rasters);
    }
    debug_assert!(
        raw_apex_total.is_multiple_of(2),
        "each triangle is witnessed exactly twice"
    );
    let report = RunReport {
        routine: Routine::TriangleVertexIterative,
        mct: degree + 1,
        threshold_weight_ratios: vec![1.0, 2.0],
        reads: 0,
        writes: (degree + 1) as u32,
        spike_total: spikes,
        engine_ticks: ticks,
    };
    Ok(Outcome {
        answer: (raw_apex_total / 2, tuples),
        rasters,
        report,
    })
}

/// Drives `subset` for one round with subset thresholds at
/// `subset_threshold` and a prohibitive threshold everywhere else; returns
/// the system and raster for inspection.
fn subset_refire_round<'g>(
    g: &'g Graph,
    subset: &VertexSet,
    subset_threshold: f64,
    learning_rate: f64,
) -> (Sns<'g>, SpikeRaster) {
    let prohibitive = (g.edge_count() + 1) as f64;
    one_round(
        g,
        subset,
        subset_threshold,
        prohibitive,
        learning_rate,
        subset,
    )
}

fn all_refired(subset: &VertexSet, raster: &SpikeRaster) -> bool {
    let fired: BTreeSet<usize> = raster.internal_at(1).into_iter().collect();
    subset.iter().all(|v| fired.contains(&v))
}

/// Triangles containing `v` by local clique testing: one nearest-neighbor
/// round, then an all-refire test on each neighbor pair's triple.
pub fn triangles_at_vertex_clique(
    g: &Graph,
    v: usize,
) -> Result<Outcome<(usize, BTreeSet<TriangleTuple>)>, PrimitiveError> {
    check_undirected(g)?;
    let first = nearest_neighbors(g, v)?;
    let neighbors: Vec<usize> = first.answer.iter().collect();
    let degree = neighbors.len() as u64;
    let mut rasters = first.rasters;
    let mut tuples = BTreeSet::new();
    let (mut spikes, mut ticks) = (first.report.spike_total, first.report.engine_ticks);
    for (a, &j) in neighbors.iter().enumerate() {
        for &k in &neighbors[a + 1..] {
            let triple = VertexSet::new([v, j, k]);
            let (_, raster) = subset_refire_round(g, &triple, 2.0, 0.0);
            if all_refired(&triple, &raster) {
                tuples.insert(TriangleTuple::new(v, j, k));
            }
            spikes += raster.total_spikes();
            ticks += raster.executed_ticks();
            rasters.push(raster);
        }
    }
    let pair_count = degree * degree.saturating_sub(1) / 2;
    let report = RunReport {
        routine: Routine::TriangleVertexClique,
        mct: pair_count + 1,
        threshold_weight_ratios: vec![1.0, 2.0],
        reads: 0,
        writes: (pair_count + 1) as u32,
        spike_total: spikes,
        engine_ticks: ticks,
    };
    Ok(Outcome {
        answer: (tuples.len(), tuples),
        rasters,
        report,
    })
}

/// True iff `subset` induces a complete subgraph: with subset thresholds at
/// `n-1`, driving all members makes every member refire exactly when it is
/// adjacent to all the others. Sizes 1 and 2 are answered without
/// simulation (their threshold construction degenerates) but are charged
/// the same costs as the general test.
pub fn clique_verify(g: &Graph, subset: &VertexSet) -> Result<Outcome<bool>, PrimitiveError> {
    check_undirected(g)?;
    check_subset(g, subset)?;
    let n = subset.len();
    let ratio = (n as f64) - 1.0;
    let mut rasters = Vec::new();
    let answer = match n {
        1 => true,
        2 => {
            let m: Vec<usize> = subset.iter().collect();
            g.has_edge(m[0], m[1])
        }
        _ => {
            let (_, raster) = subset_refire_round(g, subset, ratio, 0.0);
            let verdict = all_refired(subset, &raster);
            rasters.push(raster);
            verdict
        }
    };
    let (spikes, ticks) = rasters
        .first()
        .map(|r| (r.total_spikes(), r.executed_ticks()))
        .unwrap_or((0, 0));
    let report = RunReport {
        routine: Routine::CliqueVerify,
        mct: 1,
        threshold_weight_ratios: vec![ratio],
        reads: 0,
        writes: 1,
        spike_total: spikes,
        engine_ticks: ticks,
    };
    Ok(Outcome {
        answer,
        rasters,
        report,
    })
}

/// Clique verification with plastic synapses: the same drive schedule with
/// a nonzero learning rate additionally localizes absent edges. A pair is
/// decided by potentiation whenever at least one endpoint refired; pairs
/// whose endpoints both stayed silent are undetermined by the run and are
/// completed from the graph directly.
pub fn clique_verify_plastic(
    g: &Graph,
    subset: &VertexSet,
) -> Result<Outcome<(bool, EdgeSet)>, PrimitiveError> {
    check_undirected(g)?;
    check_subset(g, subset)?;
    let n = subset.len();
    let ratio = (n as f64) - 1.0;
    let mut rasters = Vec::new();
    let mut missing = EdgeSet::new();
    let answer = match n {
        1 => true,
        2 => {
            let m: Vec<usize> = subset.iter().collect();
            let present = g.has_edge(m[0], m[1]);
            if !present {
                missing.insert(norm_edge(m[0], m[1]));
            }
            present
        }
        _ => {
            let (sns, raster) = subset_refire_round(g, subset, ratio, 0.5);
            let fired: BTreeSet<usize> = raster.internal_at(1).into_iter().collect();
            let potentiated: BTreeSet<(usize, usize)> = sns
                .read_potentiated()
                .into_iter()
                .map(|(a, b, _)| (a, b))
                .collect();
            let members: Vec<usize> = subset.iter().collect();
            for (i, &a) in members.iter().enumerate() {
                for &b in &members[i + 1..] {
                    let present = if fired.contains(&b) {
                        potentiated.contains(&(a, b))
                    } else if fired.contains(&a) {
                        potentiated.contains(&(b, a))
                    } else {
                        g.has_edge(a, b)
                    };
                    if !present {
                        missing.insert(norm_edge(a, b));
                    }
                }
            }
            let verdict = members.iter().all(|v| fired.contains(v));
            rasters.push(raster);
            verdict
        }
    };
    let (spikes, ticks) = rasters
        .first()
        .map(|r| (r.total_spikes(), r.executed_ticks()))
        .unwrap_or((0, 0));
    let report = RunReport {
        routine: Routine::CliqueVerifyPlastic,
        mct: 1,
        threshold_weight_ratios: vec![ratio],
        reads: 1,
        writes: 1,
        spike_total: spikes,
        engine_ticks: ticks,
    };
    Ok(Outcome {
        answer: (answer, missing),
        rasters,
        report,
    })
}

/// Vertices that extend a known clique by one: drive the clique with
/// outside thresholds equal to the clique size, so exactly the neurons
/// adjacent to every member fire.
pub fn clique_expand(g: &Graph, clique: &VertexSet) -> Result<Outcome<VertexSet>, PrimitiveError> {
    check_undirected(g)?;
    check_subset(g, clique)?;
    if !clique_verify(g, clique)?.answer {
        return Err(PrimitiveError::NotAClique);
    }
    let n = clique.len();
    // Threshold n-1 for members degenerates at n=1; any positive value
    // works there because a lone driven neuron receives no return spikes.
    let member_threshold = ((n as f64) - 1.0).max(1.0);
    let (_, raster) = one_round(g, clique, member_threshold, n as f64, 0.0, clique);
    let answer: VertexSet = raster
        .internal_at(1)
        .into_iter()
        .filter(|&u| !clique.contains(u))
        .collect();
    let report = RunReport {
        routine: Routine::CliqueExpand,
        mct: 1,
        threshold_weight_ratios: vec![n as f64],
        reads: 0,
        writes: 1,
        spike_total: raster.total_spikes(),
        engine_ticks: raster.executed_ticks(),
    };
    Ok(Outcome {
        answer,
        rasters: vec![raster],
        report,
    })
}
