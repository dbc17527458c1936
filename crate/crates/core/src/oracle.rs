//! Brute-force reference implementations used to cross-check every routine.
//!
//! Everything here is computed directly from the edge set by plain
//! combinatorics; nothing touches the simulation engine. These functions are
//! deliberately naive (up to O(n^3)) and serve as the ground truth in
//! property tests and in the CLI's `--oracle` mode.

use std::collections::BTreeSet;
use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph is not connected")]
    DisconnectedGraph,
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("routine requires an undirected graph")]
    DirectedGraph,
}

/// Sorted triangle triples, ascending within each triple.
pub type TriangleSet = BTreeSet<(usize, usize, usize)>;

fn check_vertex(g: &Graph, v: usize) -> Result<(), OracleError> {
    if g.contains_vertex(v) {
        Ok(())
    } else {
        Err(OracleError::UnknownVertex(v))
    }
}

fn check_undirected(g: &Graph) -> Result<(), OracleError> {
    if g.directed() {
        Err(OracleError::DirectedGraph)
    } else {
        Ok(())
    }
}

/// Sorted adjacency of `v` (out-neighbors for directed graphs).
pub fn adjacency(g: &Graph, v: usize) -> Result<Vec<usize>, OracleError> {
    check_vertex(g, v)?;
    Ok(g.neighbors(v).to_vec())
}

/// Unweighted shortest-path distances from `source` by breadth-first search,
/// following arc direction on directed graphs. Unreachable vertices are
/// absent from the result.
pub fn bfs_distances(g: &Graph, source: usize) -> Result<Vec<(usize, u64)>, OracleError> {
    check_vertex(g, source)?;
    if !g.is_connected() {
        return Err(OracleError::DisconnectedGraph);
    }
    let mut dist: Vec<Option<u64>> = vec![None; g.vertex_count()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v].unwrap();
        for &u in g.neighbors(v) {
            if dist[u].is_none() {
                dist[u] = Some(d + 1);
                queue.push_back(u);
            }
        }
    }
    Ok(dist
        .iter()
        .enumerate()
        .filter_map(|(v, d)| d.map(|d| (v, d)))
        .collect())
}

/// Number of connected components under the undirected view of the edges.
pub fn component_count(g: &Graph) -> usize {
    let n = g.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for &(a, b) in g.edges() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    (0..n).filter(|&v| find(&mut parent, v) == v).count()
}

/// Triangles through `v`: exhaustive scan over neighbor pairs with a closing
/// edge. Returns the count and the sorted triples.
pub fn triangle_count_vertex(g: &Graph, v: usize) -> Result<(usize, TriangleSet), OracleError> {
    check_undirected(g)?;
    check_vertex(g, v)?;
    let neighbors = g.neighbors(v);
    let mut tuples = BTreeSet::new();
    for (i, &a) in neighbors.iter().enumerate() {
        for &b in &neighbors[i + 1..] {
            if g.has_edge(a, b) {
                let mut t = [v, a, b];
                t.sort_unstable();
                tuples.insert((t[0], t[1], t[2]));
            }
        }
    }
    Ok((tuples.len(), tuples))
}

/// Every distinct triangle in the graph.
pub fn triangle_total(g: &Graph) -> Result<(usize, TriangleSet), OracleError> {
    check_undirected(g)?;
    let mut tuples = BTreeSet::new();
    for v in 0..g.vertex_count() {
        let (_, local) = triangle_count_vertex(g, v)?;
        tuples.extend(local);
    }
    Ok((tuples.len(), tuples))
}

/// All-pairs edge test: true iff the subset induces a complete subgraph.
/// Singletons and the empty set are vacuously cliques.
pub fn is_clique(g: &Graph, subset: &[usize]) -> Result<bool, OracleError> {
    check_undirected(g)?;
    for &v in subset {
        check_vertex(g, v)?;
    }
    for (i, &a) in subset.iter().enumerate() {
        for &b in &subset[i + 1..] {
            if a == b {
                continue;
            }
            if !g.has_edge(a, b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Intersection of the neighbor sets of every vertex in `set`, minus `set`
/// itself.
pub fn common_neighbors(g: &Graph, set: &[usize]) -> Result<Vec<usize>, OracleError> {
    check_undirected(g)?;
    for &v in set {
        check_vertex(g, v)?;
    }
    let Some((&first, rest)) = set.split_first() else {
        return Ok(Vec::new());
    };
    let mut common: BTreeSet<usize> = g.neighbors(first).iter().copied().collect();
    for &v in rest {
        let adj: BTreeSet<usize> = g.neighbors(v).iter().copied().collect();
        common = common.intersection(&adj).copied().collect();
    }
    for &v in set {
        common.remove(&v);
    }
    Ok(common.into_iter().collect())
}

/// Edges of the induced subgraph on `subset`, endpoint-normalized.
pub fn induced_edges(g: &Graph, subset: &[usize]) -> Result<BTreeSet<(usize, usize)>, OracleError> {
    check_undirected(g)?;
    for &v in subset {
        check_vertex(g, v)?;
    }
    let members: BTreeSet<usize> = subset.iter().copied().collect();
    Ok(g.edges()
        .iter()
        .copied()
        .filter(|&(a, b)| members.contains(&a) && members.contains(&b))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bowtie() -> Graph {
        Graph::undirected(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (2, 4), (3, 4)])
    }

    fn k4() -> Graph {
        Graph::undirected(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    }

    #[test]
    fn bfs_on_path_and_complete_graph() {
        let path = Graph::undirected(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(
            bfs_distances(&path, 0).unwrap(),
            vec![(0, 0), (1, 1), (2, 2), (3, 3)]
        );
        let k4 = k4();
        for v in 0..4 {
            let d = bfs_distances(&k4, v).unwrap();
            assert!(d.iter().all(|&(u, dist)| dist == u64::from(u != v)));
        }
    }

    #[test]
    fn bfs_rejects_disconnected() {
        let g = Graph::undirected(4, &[(0, 1)]);
        assert_eq!(bfs_distances(&g, 0), Err(OracleError::DisconnectedGraph));
    }

    #[test]
    fn triangle_counts() {
        assert_eq!(triangle_count_vertex(&k4(), 0).unwrap().0, 3);
        let c4 = Graph::undirected(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        assert_eq!(triangle_count_vertex(&c4, 0).unwrap().0, 0);
        let (count, tuples) = triangle_count_vertex(&bowtie(), 2).unwrap();
        assert_eq!(count, 2);
        assert_eq!(tuples, BTreeSet::from([(0, 1, 2), (2, 3, 4)]));
    }

    #[test]
    fn per_vertex_triangle_counts_sum_to_three_times_total() {
        let g = bowtie();
        let per_vertex: usize = (0..g.vertex_count())
            .map(|v| triangle_count_vertex(&g, v).unwrap().0)
            .sum();
        let (total, _) = triangle_total(&g).unwrap();
        assert_eq!(per_vertex, 3 * total);
    }

    #[test]
    fn clique_and_neighbor_queries() {
        assert!(is_clique(&k4(), &[0, 1, 2, 3]).unwrap());
        assert!(!is_clique(&bowtie(), &[0, 1, 3]).unwrap());
        assert!(is_clique(&bowtie(), &[4]).unwrap());
        assert_eq!(common_neighbors(&bowtie(), &[0, 1]).unwrap(), vec![2]);
        assert_eq!(
            induced_edges(
                &Graph::undirected(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]),
                &[0, 1, 2]
            )
            .unwrap(),
            BTreeSet::from([(0, 1), (1, 2)])
        );
    }

    #[test]
    fn component_counting() {
        assert_eq!(component_count(&bowtie()), 1);
        assert_eq!(component_count(&Graph::undirected(4, &[(0, 1)])), 3);
        assert_eq!(component_count(&Graph::undirected(0, &[])), 0);
    }
}
