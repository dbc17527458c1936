//! Deterministic discrete-time simulator for a spiking neuron system.
//!
//! Neurons carry a firing threshold and a refractory period; synapses carry
//! a weight, an integer delay, and a learning rate. A graph is mapped
//! directly onto the system: one neuron per vertex, one synapse per arc (a
//! symmetric pair per undirected edge). Each tick runs in a fixed order:
//!
//! 1. deliver every queued spike whose arrival tick is now, accumulating a
//!    per-neuron potential from the carrying synapses' current weights;
//! 2. a neuron fires if it is externally driven this tick (unconditional)
//!    or its accumulated potential reaches its threshold, unless it is
//!    still refractory from an earlier firing — refractory neurons simply
//!    discard what arrived;
//! 3. every firing neuron puts one spike on each outgoing synapse, arriving
//!    after that synapse's delay;
//! 4. one-step plasticity: a synapse whose spike arrived this tick and whose
//!    target fired this tick is strengthened by its learning rate;
//! 5. potentials reset to zero — integration never spans ticks.
//!
//! The same inputs always produce bit-identical rasters and weights: all
//! iteration is in neuron/synapse index order and nothing is sampled.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, VertexSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("no quiescence within {0} ticks")]
    MaxTicksExceeded(u64),
}

/// Per-neuron parameters: firing threshold (must be positive) and refractory
/// period in ticks. A neuron that fires at tick `t` cannot fire again during
/// ticks `t+1 ..= t+refractory`; zero allows consecutive-tick firing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeuronParams {
    pub threshold: f64,
    pub refractory: u64,
}

impl NeuronParams {
    pub fn new(threshold: f64, refractory: u64) -> NeuronParams {
        assert!(threshold > 0.0, "firing threshold must be positive");
        NeuronParams {
            threshold,
            refractory,
        }
    }
}

/// Per-synapse parameters: initial weight, transmission delay in ticks
/// (at least 1), and the plasticity learning rate. A zero learning rate
/// means the synapse is static.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynapseParams {
    pub weight: f64,
    pub delay: u64,
    pub learning_rate: f64,
}

impl SynapseParams {
    pub fn new(weight: f64, delay: u64, learning_rate: f64) -> SynapseParams {
        assert!(delay >= 1, "synaptic delay must be at least one tick");
        assert!(learning_rate >= 0.0, "learning rate cannot be negative");
        SynapseParams {
            weight,
            delay,
            learning_rate,
        }
    }

    pub fn static_unit() -> SynapseParams {
        SynapseParams::new(1.0, 1, 0.0)
    }
}

/// A directed synapse with its live weight alongside the initial parameters.
#[derive(Debug, Clone, Copy)]
pub struct Synapse {
    pub source: usize,
    pub target: usize,
    pub params: SynapseParams,
    pub weight: f64,
}

/// Why a neuron fired at a given tick.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FireCause {
    External,
    Internal,
}

/// One firing event in the raster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Firing {
    #[serde(rename = "n")]
    pub neuron: usize,
    pub cause: FireCause,
}

/// All firings of a single executed tick, in neuron index order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TickRecord {
    #[serde(rename = "t")]
    pub tick: u64,
    pub fired: Vec<Firing>,
}

/// Complete record of which neurons fired when, and why.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SpikeRaster {
    pub ticks: Vec<TickRecord>,
}

impl SpikeRaster {
    /// Number of ticks actually executed (including silent ones).
    pub fn executed_ticks(&self) -> u64 {
        self.ticks.len() as u64
    }

    /// Last tick containing any firing, if one exists.
    pub fn last_firing_tick(&self) -> Option<u64> {
        self.ticks
            .iter()
            .rev()
            .find(|r| !r.fired.is_empty())
            .map(|r| r.tick)
    }

    pub fn total_spikes(&self) -> u64 {
        self.ticks.iter().map(|r| r.fired.len() as u64).sum()
    }

    /// First tick at which `neuron` fired, if ever.
    pub fn first_fire(&self, neuron: usize) -> Option<u64> {
        self.ticks
            .iter()
            .find(|r| r.fired.iter().any(|f| f.neuron == neuron))
            .map(|r| r.tick)
    }

    /// Neurons that fired internally at `tick`, ascending.
    pub fn internal_at(&self, tick: u64) -> Vec<usize> {
        self.fired_at(tick)
            .iter()
            .filter(|f| f.cause == FireCause::Internal)
            .map(|f| f.neuron)
            .collect()
    }

    pub fn fired_at(&self, tick: u64) -> &[Firing] {
        self.ticks
            .iter()
            .find(|r| r.tick == tick)
            .map(|r| r.fired.as_slice())
            .unwrap_or(&[])
    }
}

/// Schedule of external supra-threshold drives: tick to driven neuron set.
#[derive(Debug, Clone, Default)]
pub struct StimulusPlan {
    drives: BTreeMap<u64, VertexSet>,
}

impl StimulusPlan {
    pub fn new() -> StimulusPlan {
        StimulusPlan::default()
    }

    /// Single drive event at one tick.
    pub fn at(tick: u64, vertices: VertexSet) -> StimulusPlan {
        let mut plan = StimulusPlan::new();
        plan.drive(tick, vertices);
        plan
    }

    pub fn drive(&mut self, tick: u64, vertices: VertexSet) {
        if vertices.is_empty() {
            return;
        }
        let entry = self.drives.entry(tick).or_default();
        let merged: VertexSet = entry.iter().chain(vertices.iter()).collect();
        *entry = merged;
    }

    pub fn driven_at(&self, tick: u64) -> Option<&VertexSet> {
        self.drives.get(&tick)
    }

    pub fn has_drive_at_or_after(&self, tick: u64) -> bool {
        self.drives.range(tick..).next().is_some()
    }
}

/// A spiking neuron system built from a graph, with mutable run state.
///
/// Instances are single-writer: `step`/`run` mutate state. Independent
/// instances share nothing and can run concurrently.
#[derive(Debug, Clone)]
pub struct Sns<'g> {
    graph: &'g Graph,
    neurons: Vec<NeuronParams>,
    synapses: Vec<Synapse>,
    outgoing: Vec<Vec<usize>>,
    /// Arrival tick -> synapse indices carrying an in-flight spike.
    pending: BTreeMap<u64, Vec<usize>>,
    last_fire: Vec<Option<u64>>,
    potentials: Vec<f64>,
    tick: u64,
    /// Slack subtracted from thresholds before comparison; zero by default
    /// since the shipped routines use integer weights and thresholds.
    fire_tolerance: f64,
}

/// Direct mapping of a graph onto a spiking neuron system: one neuron per
/// vertex; each undirected edge becomes a symmetric pair of synapses, each
/// directed arc a single synapse. Synapse order follows the normalized edge
/// order, forward direction first.
pub fn build_sns<'g>(graph: &'g Graph, neuron: NeuronParams, synapse: SynapseParams) -> Sns<'g> {
    let n = graph.vertex_count();
    let mut synapses = Vec::with_capacity(graph.edge_count() * 2);
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in graph.edges() {
        outgoing[a].push(synapses.len());
        synapses.push(Synapse {
            source: a,
            target: b,
            params: synapse,
            weight: synapse.weight,
        });
        if !graph.directed() {
            outgoing[b].push(synapses.len());
            synapses.push(Synapse {
                source: b,
                target: a,
                params: synapse,
                weight: synapse.weight,
            });
        }
    }
    Sns {
        graph,
        neurons: vec![neuron; n],
        synapses,
        outgoing,
        pending: BTreeMap::new(),
        last_fire: vec![None; n],
        potentials: vec![0.0; n],
        tick: 0,
        fire_tolerance: 0.0,
    }
}

impl<'g> Sns<'g> {
    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn neuron_count(&self) -> usize {
        self.neurons.len()
    }

    pub fn synapse_count(&self) -> usize {
        self.synapses.len()
    }

    pub fn synapses(&self) -> &[Synapse] {
        &self.synapses
    }

    pub fn current_tick(&self) -> u64 {
        self.tick
    }

    /// Comparison slack for non-integral weight/threshold configurations.
    pub fn set_fire_tolerance(&mut self, tolerance: f64) {
        assert!(tolerance >= 0.0);
        self.fire_tolerance = tolerance;
    }

    /// Replaces the firing threshold of every listed neuron.
    pub fn set_thresholds(
        &mut self,
        subset: &VertexSet,
        threshold: f64,
    ) -> Result<(), EngineError> {
        assert!(threshold > 0.0, "firing threshold must be positive");
        if let Some(v) = subset.iter().find(|&v| v >= self.neurons.len()) {
            return Err(EngineError::UnknownVertex(v));
        }
        for v in subset.iter() {
            self.neurons[v].threshold = threshold;
        }
        Ok(())
    }

    fn refractory_at(&self, neuron: usize, tick: u64) -> bool {
        match self.last_fire[neuron] {
            Some(prev) => prev + self.neurons[neuron].refractory >= tick,
            None => false,
        }
    }

    /// Executes one tick and returns its firing record.
    ///
    /// `driven` neurons fire unconditionally this tick (unless refractory);
    /// a neuron that is both driven and above threshold fires once, recorded
    /// as external.
    pub fn step(&mut self, driven: &VertexSet) -> TickRecord {
        let t = self.tick;
        debug_assert!(driven.as_slice().iter().all(|&v| v < self.neurons.len()));

        // 1. Deliver queued spikes arriving now at their current weights.
        let arriving = self.pending.remove(&t).unwrap_or_default();
        for &syn in &arriving {
            let s = &self.synapses[syn];
            self.potentials[s.target] += s.weight;
        }

        // 2. Resolve firings in neuron index order.
        let mut fired = Vec::new();
        let mut fired_mask = vec![false; self.neurons.len()];
        for (neuron, fired_flag) in fired_mask.iter_mut().enumerate() {
            if self.refractory_at(neuron, t) {
                continue;
            }
            let external = driven.contains(neuron);
            let internal =
                self.potentials[neuron] >= self.neurons[neuron].threshold - self.fire_tolerance;
            if external || internal {
                let cause = if external {
                    FireCause::External
                } else {
                    FireCause::Internal
                };
                fired.push(Firing { neuron, cause });
                *fired_flag = true;
            }
        }

        // 3. Enqueue outgoing spikes. Delays of at least one tick keep every
        // queued arrival strictly in the future.
        for firing in &fired {
            for &syn in &self.outgoing[firing.neuron] {
                let arrival = t + self.synapses[syn].params.delay;
                self.pending.entry(arrival).or_default().push(syn);
            }
        }
        debug_assert!(self.pending.keys().all(|&arrival| arrival > t));

        // 4. Strengthen synapses whose arrival coincided with a target fire.
        for &syn in &arriving {
            let s = &mut self.synapses[syn];
            if fired_mask[s.target] {
                s.weight += s.params.learning_rate;
            }
        }

        // 5. Reset potentials; 6. advance the clock.
        self.potentials.fill(0.0);
        for firing in &fired {
            self.last_fire[firing.neuron] = Some(t);
        }
        self.tick = t + 1;

        TickRecord { tick: t, fired }
    }

    /// True when nothing can happen anymore without new external drives.
    fn quiescent_against(&self, plan: &StimulusPlan) -> bool {
        self.pending.is_empty() && !plan.has_drive_at_or_after(self.tick)
    }

    /// Runs up to `max_ticks` ticks under the plan's drive schedule.
    ///
    /// With `stop_on_quiescence`, execution halts at the first tick with no
    /// queued spikes and no remaining drives; failing to reach that state
    /// within `max_ticks` is an error. Without it, exactly `max_ticks` ticks
    /// execute.
    pub fn run(
        &mut self,
        plan: &StimulusPlan,
        max_ticks: u64,
        stop_on_quiescence: bool,
    ) -> Result<SpikeRaster, EngineError> {
        assert!(max_ticks >= 1, "max_ticks must be at least 1");
        let mut raster = SpikeRaster::default();
        let mut executed = 0u64;
        loop {
            if stop_on_quiescence && self.quiescent_against(plan) {
                break;
            }
            if executed == max_ticks {
                if stop_on_quiescence {
                    return Err(EngineError::MaxTicksExceeded(max_ticks));
                }
                break;
            }
            let empty = VertexSet::empty();
            let driven = plan.driven_at(self.tick).unwrap_or(&empty);
            raster.ticks.push(self.step(driven));
            executed += 1;
        }
        Ok(raster)
    }

    /// All synapses whose live weight exceeds their initial weight.
    pub fn read_potentiated(&self) -> Vec<(usize, usize, f64)> {
        self.synapses
            .iter()
            .filter(|s| s.weight > s.params.weight)
            .map(|s| (s.source, s.target, s.weight))
            .collect()
    }

    /// Live weight of the synapse from `source` to `target`, if present.
    pub fn weight_between(&self, source: usize, target: usize) -> Option<f64> {
        self.synapses
            .iter()
            .find(|s| s.source == source && s.target == target)
            .map(|s| s.weight)
    }
}
