//! Immutable simple-graph representation with edge-list parsing.
//!
//! Vertex labels in input files are arbitrary nonnegative integers; they are
//! compacted to dense internal indices `0..vertex_count` in first-appearance
//! order so that downstream neuron arrays stay dense. Undirected edges are
//! stored endpoint-normalized, duplicates collapse to one edge (a counter
//! records how many were dropped), and self-loops are rejected outright.

use std::collections::BTreeSet;
use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

/// Errors produced while parsing or querying a [`Graph`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    /// A line whose two labels are equal. Line numbers are 1-based.
    #[error("self-loop on line {0}")]
    SelfLoop(usize),
    /// A line that does not hold exactly two nonnegative integer tokens.
    #[error("malformed edge on line {0}")]
    Malformed(usize),
    /// A vertex index outside `0..vertex_count`.
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
}

/// An immutable simple graph (undirected or directed) with dense vertex ids.
#[derive(Debug, Clone)]
pub struct Graph {
    directed: bool,
    labels: Vec<u64>,
    id_map: HashMap<u64, usize>,
    adjacency: Vec<Vec<usize>>,
    edges: BTreeSet<(usize, usize)>,
    duplicate_edges: usize,
}

impl PartialEq for Graph {
    /// Structural equality on the normalized graph: orientation, vertex
    /// count, and edge set. External labels are presentation-level and do
    /// not participate.
    fn eq(&self, other: &Self) -> bool {
        self.directed == other.directed
            && self.labels.len() == other.labels.len()
            && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph from `(label, label)` pairs, compacting labels in
    /// first-appearance order. `declared_vertices` pre-registers labels
    /// `0..n` so isolated vertices can exist.
    pub fn from_labeled_edges<I>(
        directed: bool,
        declared_vertices: usize,
        pairs: I,
    ) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        let mut builder = GraphBuilder::new(directed);
        builder.declare_vertices(declared_vertices);
        for (line, (a, b)) in pairs.into_iter().enumerate() {
            builder
                .add_edge(a, b)
                .map_err(|_| GraphError::SelfLoop(line + 1))?;
        }
        Ok(builder.finish())
    }

    /// Convenience constructor for tests and generators: dense `usize`
    /// endpoints, undirected.
    pub fn undirected(vertex_count: usize, edges: &[(usize, usize)]) -> Graph {
        Self::from_labeled_edges(
            false,
            vertex_count,
            edges.iter().map(|&(a, b)| (a as u64, b as u64)),
        )
        .expect("static edge list must be loop-free")
    }

    /// Parses the edge-list text format.
    ///
    /// One edge per line as two whitespace-separated nonnegative integer
    /// labels. Lines starting with `#` are comments; blank lines are
    /// skipped. A header line `vertices N` declares labels `0..N-1` up
    /// front, which is how isolated vertices are expressed.
    pub fn parse_edge_list(text: &str, directed: bool) -> Result<Graph, GraphError> {
        let mut builder = GraphBuilder::new(directed);
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() == 2 && tokens[0] == "vertices" {
                let n: usize = tokens[1]
                    .parse()
                    .map_err(|_| GraphError::Malformed(line_no))?;
                builder.declare_vertices(n);
                continue;
            }
            if tokens.len() != 2 {
                return Err(GraphError::Malformed(line_no));
            }
            let a: u64 = tokens[0]
                .parse()
                .map_err(|_| GraphError::Malformed(line_no))?;
            let b: u64 = tokens[1]
                .parse()
                .map_err(|_| GraphError::Malformed(line_no))?;
            builder
                .add_edge(a, b)
                .map_err(|_| GraphError::SelfLoop(line_no))?;
        }
        Ok(builder.finish())
    }

    /// Serializes to the edge-list format: a `vertices N` header, then one
    /// edge per line with endpoints ascending (undirected) and lines sorted.
    /// Output uses internal indices, so `parse(serialize(g))` reproduces the
    /// normalized structure exactly.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "vertices {}", self.vertex_count());
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "{a} {b}");
        }
        out
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of duplicate edge lines collapsed during construction.
    pub fn duplicate_edges(&self) -> usize {
        self.duplicate_edges
    }

    /// Normalized edge set: `(min, max)` pairs when undirected, `(src, dst)`
    /// arcs when directed.
    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    /// Out-neighbors of `v` in ascending order (symmetric for undirected).
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        v < self.labels.len()
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if self.contains_vertex(v) {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v))
        }
    }

    /// True when the edge (arc) exists. Undirected queries are orientation
    /// independent.
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        if !self.contains_vertex(a) || !self.contains_vertex(b) {
            return false;
        }
        self.edges.contains(&self.normalize(a, b))
    }

    fn normalize(&self, a: usize, b: usize) -> (usize, usize) {
        if self.directed || a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Incident edge count (out-degree for directed graphs).
    pub fn degree(&self, v: usize) -> Result<usize, GraphError> {
        self.check_vertex(v)?;
        Ok(self.adjacency[v].len())
    }

    /// True iff every vertex is reachable from vertex 0 with edges treated
    /// as undirected. Empty and single-vertex graphs count as connected.
    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n <= 1 {
            return true;
        }
        let mut undirected: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            undirected[a].push(b);
            undirected[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut reached = 1usize;
        while let Some(v) = stack.pop() {
            for &u in &undirected[v] {
                if !seen[u] {
                    seen[u] = true;
                    reached += 1;
                    stack.push(u);
                }
            }
        }
        reached == n
    }

    /// Internal index for an external label, if the label occurs.
    pub fn index_of_label(&self, label: u64) -> Option<usize> {
        self.id_map.get(&label).copied()
    }

    /// External label of an internal index.
    pub fn label_of(&self, v: usize) -> Result<u64, GraphError> {
        self.check_vertex(v)?;
        Ok(self.labels[v])
    }
}

struct GraphBuilder {
    directed: bool,
    labels: Vec<u64>,
    id_map: HashMap<u64, usize>,
    edges: BTreeSet<(usize, usize)>,
    duplicate_edges: usize,
}

struct SelfLoop;

impl GraphBuilder {
    fn new(directed: bool) -> Self {
        GraphBuilder {
            directed,
            labels: Vec::new(),
            id_map: HashMap::new(),
            edges: BTreeSet::new(),
            duplicate_edges: 0,
        }
    }

    fn declare_vertices(&mut self, n: usize) {
        for label in 0..n as u64 {
            self.intern(label);
        }
    }

    fn intern(&mut self, label: u64) -> usize {
        if let Some(&idx) = self.id_map.get(&label) {
            return idx;
        }
        let idx = self.labels.len();
        self.labels.push(label);
        self.id_map.insert(label, idx);
        idx
    }

    fn add_edge(&mut self, a: u64, b: u64) -> Result<(), SelfLoop> {
        if a == b {
            return Err(SelfLoop);
        }
        let ia = self.intern(a);
        let ib = self.intern(b);
        let key = if self.directed || ia <= ib {
            (ia, ib)
        } else {
            (ib, ia)
        };
        if !self.edges.insert(key) {
            self.duplicate_edges += 1;
        }
        Ok(())
    }

    fn finish(self) -> Graph {
        let n = self.labels.len();
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            adjacency[a].push(b);
            if !self.directed {
                adjacency[b].push(a);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph {
            directed: self.directed,
            labels: self.labels,
            id_map: self.id_map,
            adjacency,
            edges: self.edges,
            duplicate_edges: self.duplicate_edges,
        }
    }
}

/// An ordered set of distinct vertex indices, kept sorted ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
#[serde(transparent)]
pub struct VertexSet {
    items: Vec<usize>,
}

impl VertexSet {
    pub fn new<I: IntoIterator<Item = usize>>(vertices: I) -> VertexSet {
        let mut items: Vec<usize> = vertices.into_iter().collect();
        items.sort_unstable();
        items.dedup();
        VertexSet { items }
    }

    pub fn empty() -> VertexSet {
        VertexSet { items: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.items.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.items.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.items
    }

    /// All indices valid for `g`, or the first offender.
    pub fn validate(&self, g: &Graph) -> Result<(), GraphError> {
        match self.items.iter().find(|&&v| !g.contains_vertex(v)) {
            Some(&v) => Err(GraphError::UnknownVertex(v)),
            None => Ok(()),
        }
    }

    pub fn insert(&mut self, v: usize) {
        if let Err(pos) = self.items.binary_search(&v) {
            self.items.insert(pos, v);
        }
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        VertexSet::new(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_edge_path() {
        let g = Graph::parse_edge_list("0 1\n1 2", false).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2));
        assert!(!g.has_edge(0, 2));
    }

    #[test]
    fn rejects_self_loop() {
        assert_eq!(
            Graph::parse_edge_list("0 0", false),
            Err(GraphError::SelfLoop(1))
        );
        assert_eq!(
            Graph::parse_edge_list("0 1\n2 2", false),
            Err(GraphError::SelfLoop(2))
        );
    }

    #[test]
    fn undirected_reverse_line_is_same_edge() {
        let g = Graph::parse_edge_list("0 1\n1 0", false).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.duplicate_edges(), 1);
    }

    #[test]
    fn directed_reverse_line_is_distinct_arc() {
        let g = Graph::parse_edge_list("0 1\n1 0", true).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.duplicate_edges(), 0);
    }

    #[test]
    fn header_declares_isolated_vertices() {
        let g = Graph::parse_edge_list("vertices 5\n0 1\n", false).unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.degree(4).unwrap(), 0);
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let g = Graph::parse_edge_list("# a comment\n\n0 1\n   \n# another\n1 2\n", false).unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn malformed_lines_are_reported_with_position() {
        assert_eq!(
            Graph::parse_edge_list("0 1\n1 2 3", false),
            Err(GraphError::Malformed(2))
        );
        assert_eq!(
            Graph::parse_edge_list("a b", false),
            Err(GraphError::Malformed(1))
        );
        assert_eq!(
            Graph::parse_edge_list("0 -1", false),
            Err(GraphError::Malformed(1))
        );
        assert_eq!(
            Graph::parse_edge_list("0", false),
            Err(GraphError::Malformed(1))
        );
    }

    #[test]
    fn labels_compact_in_first_appearance_order() {
        let g = Graph::parse_edge_list("7 3\n3 9", false).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.index_of_label(7), Some(0));
        assert_eq!(g.index_of_label(3), Some(1));
        assert_eq!(g.index_of_label(9), Some(2));
        assert_eq!(g.label_of(2).unwrap(), 9);
    }

    #[test]
    fn degree_counts_incident_edges() {
        let k3 = Graph::undirected(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(k3.degree(0).unwrap(), 2);
        let path = Graph::undirected(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(path.degree(1).unwrap(), 2);
        assert_eq!(path.degree(0).unwrap(), 1);
        assert_eq!(path.degree(9), Err(GraphError::UnknownVertex(9)));
    }

    #[test]
    fn out_degree_for_directed() {
        let g = Graph::parse_edge_list("0 1\n0 2\n2 0", true).unwrap();
        assert_eq!(g.degree(0).unwrap(), 2);
        assert_eq!(g.degree(1).unwrap(), 0);
        assert_eq!(g.degree(2).unwrap(), 1);
    }

    #[test]
    fn connectivity() {
        assert!(Graph::undirected(3, &[(0, 1), (1, 2)]).is_connected());
        assert!(!Graph::undirected(4, &[(0, 1)]).is_connected());
        assert!(Graph::undirected(1, &[]).is_connected());
        // Directed graphs use weak connectivity.
        assert!(Graph::parse_edge_list("1 0\n1 2", true)
            .unwrap()
            .is_connected());
    }

    #[test]
    fn serializer_emits_sorted_normalized_lines() {
        let g = Graph::parse_edge_list("2 1\n1 0\nvertices 4", false).unwrap();
        assert_eq!(g.to_edge_list(), "vertices 4\n0 1\n1 2\n");
    }

    #[test]
    fn directed_graphs_round_trip_too() {
        let g = Graph::parse_edge_list("vertices 5\n3 1\n1 3\n0 4", true).unwrap();
        let back = Graph::parse_edge_list(&g.to_edge_list(), true).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn vertex_set_sorts_and_dedups() {
        let s = VertexSet::new([3, 1, 3, 2]);
        assert_eq!(s.as_slice(), &[1, 2, 3]);
        assert!(s.contains(2));
        assert!(!s.contains(0));
    }
}
