//! Graph algorithm primitives computed by spiking neurons.
//!
//! A graph is mapped directly onto a deterministic discrete-time spiking
//! neuron system — one neuron per vertex, one synapse per arc — and graph
//! questions are answered by driving neurons and reading spike rasters or
//! potentiated synapse weights:
//!
//! - neighbor and neighborhood extraction,
//! - first-fire times, shortest-path bounds, and eccentricity,
//! - induced-subgraph extraction (serial drives or one plastic pass),
//! - triangle enumeration per edge and per vertex,
//! - clique verification, missing-edge localization, and clique expansion.
//!
//! Every routine returns its answer together with a [`report::RunReport`]
//! of the cost model (propagation rounds, threshold/weight ratios, network
//! reads and writes), and the [`oracle`] module provides brute-force
//! reference implementations for cross-checking.

pub mod engine;
pub mod families;
pub mod graph;
pub mod oracle;
pub mod primitives;
pub mod report;

pub use engine::{
    build_sns, EngineError, FireCause, NeuronParams, Sns, SpikeRaster, StimulusPlan, SynapseParams,
};
pub use graph::{Graph, GraphError, VertexSet};
pub use primitives::{Outcome, PrimitiveError, TriangleTuple};
pub use report::{check_report, expected_costs, CostBounds, CostParams, Routine, RunReport};
