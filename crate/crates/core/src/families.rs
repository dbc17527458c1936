//! Deterministic test-corpus graph generators.
//!
//! The random family uses a small self-contained splitmix64 generator so a
//! seed pins the output forever, independent of external crates.

use crate::graph::Graph;

/// splitmix64: tiny, deterministic, good enough for sampling edges.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [0, bound).
    pub fn next_below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }
}

/// Path graph on `n` vertices (n-1 edges).
pub fn path(n: usize) -> Graph {
    assert!(n >= 1);
    let edges: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    Graph::undirected(n, &edges)
}

/// Cycle on `n` vertices.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a cycle needs at least 3 vertices");
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::undirected(n, &edges)
}

/// Complete graph K_n.
pub fn complete(n: usize) -> Graph {
    assert!(n >= 1);
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    Graph::undirected(n, &edges)
}

/// Star with vertex 0 at the center and n-1 leaves.
pub fn star(n: usize) -> Graph {
    assert!(n >= 2, "a star needs a center and at least one leaf");
    let edges: Vec<(usize, usize)> = (1..n).map(|leaf| (0, leaf)).collect();
    Graph::undirected(n, &edges)
}

/// Erdős–Rényi G(n, p) sample, resampled until connected.
pub fn erdos_renyi_connected(n: usize, p: f64, seed: u64) -> Graph {
    assert!(n >= 1);
    assert!((0.0..=1.0).contains(&p));
    let mut rng = SplitMix64::new(seed);
    loop {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.next_f64() < p {
                    edges.push((a, b));
                }
            }
        }
        let g = Graph::undirected(n, &edges);
        if g.is_connected() {
            return g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_family_sizes() {
        assert_eq!(complete(4).edge_count(), 6);
        assert_eq!(path(4).edge_count(), 3);
        assert_eq!(cycle(5).edge_count(), 5);
        assert_eq!(star(6).edge_count(), 5);
        assert_eq!(path(1).edge_count(), 0);
    }

    #[test]
    fn random_family_is_connected_and_reproducible() {
        let a = erdos_renyi_connected(30, 0.2, 7);
        let b = erdos_renyi_connected(30, 0.2, 7);
        assert!(a.is_connected());
        assert_eq!(a, b);
        let c = erdos_renyi_connected(30, 0.2, 8);
        assert_ne!(a, c);
    }

    #[test]
    fn sparse_small_samples_terminate() {
        // Low p on a small n forces many resamples before connectivity.
        let g = erdos_renyi_connected(5, 0.1, 3);
        assert!(g.is_connected());
    }
}
