//! Property tests: structural invariants of the graph format and the
//! engine's firing semantics, checked against independently recomputed
//! expectations on randomized inputs.

use std::collections::BTreeSet;

use proptest::prelude::*;

use spikegraph::engine::{
    build_sns, FireCause, NeuronParams, SpikeRaster, StimulusPlan, SynapseParams,
};
use spikegraph::graph::{Graph, VertexSet};
use spikegraph::oracle;

/// Random loop-free edge pairs over `n` vertices, plus the vertex count.
fn raw_graph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1usize..14).prop_flat_map(|n| {
        let edges = prop::collection::vec((0..n, 0..n), 0..40).prop_map(move |pairs| {
            pairs
                .into_iter()
                .filter(|(a, b)| a != b)
                .collect::<Vec<_>>()
        });
        (Just(n), edges)
    })
}

fn arb_graph() -> impl Strategy<Value = Graph> {
    raw_graph().prop_map(|(n, edges)| Graph::undirected(n, &edges))
}

/// As above but with a spanning path mixed in so the graph is connected.
fn arb_connected_graph() -> impl Strategy<Value = Graph> {
    raw_graph().prop_map(|(n, mut edges)| {
        edges.extend((0..n.saturating_sub(1)).map(|i| (i, i + 1)));
        Graph::undirected(n, &edges)
    })
}

/// A drive schedule over the first few ticks.
fn arb_plan(n: usize) -> impl Strategy<Value = StimulusPlan> {
    prop::collection::vec((0u64..4, prop::collection::vec(0..n, 0..4)), 0..4).prop_map(|entries| {
        let mut plan = StimulusPlan::new();
        for (tick, vs) in entries {
            plan.drive(tick, VertexSet::new(vs));
        }
        plan
    })
}

/// Spikes arriving at `target` at `tick`, recomputed from the raster alone
/// (unit weights, delay 1): one per firing in-neighbor at the previous tick.
fn arrivals_at(g: &Graph, raster: &SpikeRaster, tick: u64, target: usize) -> usize {
    if tick == 0 {
        return 0;
    }
    raster
        .fired_at(tick - 1)
        .iter()
        .filter(|f| g.has_edge(f.neuron, target))
        .count()
}

fn last_fire_before(raster: &SpikeRaster, tick: u64, neuron: usize) -> Option<u64> {
    raster
        .ticks
        .iter()
        .filter(|r| r.tick < tick)
        .filter(|r| r.fired.iter().any(|f| f.neuron == neuron))
        .map(|r| r.tick)
        .max()
}

proptest! {
    #[test]
    fn parse_of_serialized_graph_is_identity(g in arb_graph()) {
        let text = g.to_edge_list();
        let back = Graph::parse_edge_list(&text, false).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn edge_count_survives_endpoint_swap_and_line_shuffle(
        (n, edges) in raw_graph(),
        swaps in prop::collection::vec(any::<bool>(), 40),
        rotate in 0usize..40,
    ) {
        let canonical = Graph::undirected(n, &edges);
        let mut lines: Vec<(usize, usize)> = edges
            .iter()
            .zip(swaps.iter().cycle())
            .map(|(&(a, b), &swap)| if swap { (b, a) } else { (a, b) })
            .collect();
        if !lines.is_empty() {
            let k = rotate % lines.len();
            lines.rotate_left(k);
        }
        let mut text = format!("vertices {n}\n");
        for (a, b) in lines {
            text.push_str(&format!("{a} {b}\n"));
        }
        let shuffled = Graph::parse_edge_list(&text, false).unwrap();
        prop_assert_eq!(shuffled.edge_count(), canonical.edge_count());
        prop_assert_eq!(shuffled, canonical);
    }

    #[test]
    fn degrees_sum_to_twice_the_edge_count(g in arb_graph()) {
        let sum: usize = (0..g.vertex_count()).map(|v| g.degree(v).unwrap()).sum();
        prop_assert_eq!(sum, 2 * g.edge_count());
    }

    #[test]
    fn degree_equals_incident_edge_recount(g in arb_graph()) {
        for v in 0..g.vertex_count() {
            let recount = g.edges().iter().filter(|&&(a, b)| a == v || b == v).count();
            prop_assert_eq!(g.degree(v).unwrap(), recount);
        }
    }

    #[test]
    fn connectivity_agrees_with_component_oracle(g in arb_graph()) {
        prop_assert_eq!(g.is_connected(), oracle::component_count(&g) <= 1);
    }

    #[test]
    fn identical_inputs_give_identical_runs(
        g in arb_graph(),
        plan_seed in 0usize..1,
    ) {
        let _ = plan_seed;
        let plan = StimulusPlan::at(0, VertexSet::new(0..g.vertex_count().min(3)));
        let neuron = NeuronParams::new(2.0, 1);
        let synapse = SynapseParams::new(1.0, 1, 0.5);
        let mut a = build_sns(&g, neuron, synapse);
        let mut b = build_sns(&g, neuron, synapse);
        let ra = a.run(&plan, 8, false).unwrap();
        let rb = b.run(&plan, 8, false).unwrap();
        prop_assert_eq!(ra, rb);
        let wa: Vec<f64> = a.synapses().iter().map(|s| s.weight).collect();
        let wb: Vec<f64> = b.synapses().iter().map(|s| s.weight).collect();
        prop_assert_eq!(wa, wb);
    }

    #[test]
    fn static_synapses_never_change(g in arb_graph(), refractory in 0u64..3) {
        let mut sns = build_sns(
            &g,
            NeuronParams::new(1.0, refractory),
            SynapseParams::new(1.0, 1, 0.0),
        );
        sns.run(&StimulusPlan::at(0, VertexSet::new(0..g.vertex_count())), 8, false)
            .unwrap();
        prop_assert!(sns.synapses().iter().all(|s| s.weight == s.params.weight));
        prop_assert!(sns.read_potentiated().is_empty());
    }

    #[test]
    fn plastic_weights_never_shrink(g in arb_connected_graph(), plan in arb_plan(14)) {
        let plan_clamped = {
            let mut p = StimulusPlan::new();
            for t in 0..4 {
                if let Some(v) = plan.driven_at(t) {
                    let valid: VertexSet = v.iter().filter(|&x| x < g.vertex_count()).collect();
                    p.drive(t, valid);
                }
            }
            p
        };
        let mut sns = build_sns(
            &g,
            NeuronParams::new(1.0, 1),
            SynapseParams::new(1.0, 1, 0.25),
        );
        sns.run(&plan_clamped, 10, false).unwrap();
        prop_assert!(sns.synapses().iter().all(|s| s.weight >= s.params.weight));
    }

    #[test]
    fn no_neuron_fires_during_its_refractory_window(
        g in arb_connected_graph(),
        refractory in 0u64..4,
    ) {
        let mut sns = build_sns(
            &g,
            NeuronParams::new(1.0, refractory),
            SynapseParams::static_unit(),
        );
        let raster = sns
            .run(&StimulusPlan::at(0, VertexSet::new([0])), 12, false)
            .unwrap();
        for v in 0..g.vertex_count() {
            let fire_ticks: Vec<u64> = raster
                .ticks
                .iter()
                .filter(|r| r.fired.iter().any(|f| f.neuron == v))
                .map(|r| r.tick)
                .collect();
            for pair in fire_ticks.windows(2) {
                prop_assert!(pair[1] > pair[0] + refractory);
            }
        }
    }

    #[test]
    fn wavefront_first_fires_equal_bfs_distances(g in arb_connected_graph(), source_pick in any::<prop::sample::Index>()) {
        let source = source_pick.index(g.vertex_count());
        let mut sns = build_sns(
            &g,
            NeuronParams::new(1.0, g.vertex_count() as u64),
            SynapseParams::static_unit(),
        );
        let raster = sns
            .run(
                &StimulusPlan::at(0, VertexSet::new([source])),
                g.vertex_count() as u64 + 2,
                true,
            )
            .unwrap();
        let distances = oracle::bfs_distances(&g, source).unwrap();
        prop_assert_eq!(raster.total_spikes(), g.vertex_count() as u64);
        for (v, d) in distances {
            prop_assert_eq!(raster.first_fire(v), Some(d));
        }
    }

    #[test]
    fn internal_fires_are_exactly_double_arrivals(
        g in arb_connected_graph(),
        plan in arb_plan(14),
    ) {
        // Unit weights with threshold 2: a neuron fires internally at t iff
        // at least two spikes arrive at exactly t and it is eligible.
        let mut valid_plan = StimulusPlan::new();
        for t in 0..4 {
            if let Some(v) = plan.driven_at(t) {
                let valid: VertexSet = v.iter().filter(|&x| x < g.vertex_count()).collect();
                valid_plan.drive(t, valid);
            }
        }
        let refractory = 1u64;
        let mut sns = build_sns(
            &g,
            NeuronParams::new(2.0, refractory),
            SynapseParams::static_unit(),
        );
        let raster = sns.run(&valid_plan, 10, false).unwrap();

        for record in &raster.ticks {
            let t = record.tick;
            let internal: BTreeSet<usize> = record
                .fired
                .iter()
                .filter(|f| f.cause == FireCause::Internal)
                .map(|f| f.neuron)
                .collect();
            for f in &internal {
                prop_assert!(arrivals_at(&g, &raster, t, *f) >= 2);
            }
            for v in 0..g.vertex_count() {
                let eligible = match last_fire_before(&raster, t, v) {
                    Some(prev) => prev + refractory < t,
                    None => true,
                };
                let driven = valid_plan.driven_at(t).is_some_and(|d| d.contains(v));
                if eligible && !driven && arrivals_at(&g, &raster, t, v) >= 2 {
                    prop_assert!(internal.contains(&v));
                }
            }
        }
    }
}
