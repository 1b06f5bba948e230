//! Simple undirected graphs with a fixed vertex set `0..n`, plus the
//! structural primitives the coloring pipeline is built on: an edge-list
//! text format, 2-connectivity testing, and even-cycle extraction.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Errors raised while parsing, constructing, or probing graphs.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("malformed header on line {line}: {text:?} (expected \"n m\")")]
    MalformedHeader { line: usize, text: String },
    #[error("malformed edge on line {line}: {text:?} (expected \"u v\" with u < v)")]
    MalformedEdge { line: usize, text: String },
    #[error("vertex out of range: edge ({u}, {v}) in a graph on {n} vertices")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
    #[error("loop edge at vertex {u}")]
    LoopEdge { u: usize },
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },
    #[error("edge count mismatch: header declares {expected} edges, found {found}")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error("graph is not 2-connected")]
    NotTwoConnected,
    #[error("graph has no even cycle")]
    NoEvenCycle,
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
}

/// An undirected simple graph on vertices `0..n`.
///
/// Edges are stored as ordered pairs `(u, v)` with `u < v`; adjacency lists
/// are kept sorted so that every traversal in this crate is deterministic.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

impl Graph {
    /// Builds a graph from an explicit edge list. Edges may be given in
    /// either orientation; loops and duplicates are rejected.
    pub fn new(n: usize, edge_list: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut edges = BTreeSet::new();
        for &(a, b) in edge_list {
            if a == b {
                return Err(GraphError::LoopEdge { u: a });
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if v >= n {
                return Err(GraphError::VertexOutOfRange { u, v, n });
            }
            if !edges.insert((u, v)) {
                return Err(GraphError::DuplicateEdge { u, v });
            }
        }
        Ok(Self::from_edge_set(n, edges))
    }

    fn from_edge_set(n: usize, edges: BTreeSet<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` pairs with `u < v`, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// Sorted neighbors of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let key = if a < b { (a, b) } else { (b, a) };
        self.edges.contains(&key)
    }

    /// True when every vertex is reachable from vertex 0 (vacuously true
    /// for the empty graph, false when an isolated vertex exists).
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n
    }
}

// ============================================================
// Edge-list text format
// ============================================================

/// Parses the plain-text edge-list format.
///
/// Line 1 is `n m`; the following `m` lines are `u v` with
/// `0 <= u < v < n`. Lines beginning with `#` are comments and blank
/// lines are ignored; a trailing newline is optional. Vertex ids must be
/// dense: a graph that "skips" ids simply has isolated vertices, while an
/// id `>= n` is rejected rather than remapped.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut content = text
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line))
        .filter(|(_, line)| !line.starts_with('#') && !line.trim().is_empty());

    let (header_line, header) = content
        .next()
        .ok_or(GraphError::MalformedHeader { line: 1, text: String::new() })?;
    let mut parts = header.split_whitespace();
    let (n, m) = match (parts.next(), parts.next(), parts.next()) {
        (Some(a), Some(b), None) => {
            let n = a.parse::<usize>().map_err(|_| GraphError::MalformedHeader {
                line: header_line,
                text: header.to_string(),
            })?;
            let m = b.parse::<usize>().map_err(|_| GraphError::MalformedHeader {
                line: header_line,
                text: header.to_string(),
            })?;
            (n, m)
        }
        _ => {
            return Err(GraphError::MalformedHeader { line: header_line, text: header.to_string() })
        }
    };

    let mut edges = BTreeSet::new();
    let mut found = 0usize;
    for (line_no, line) in content {
        if found == m {
            return Err(GraphError::EdgeCountMismatch { expected: m, found: found + 1 });
        }
        let mut parts = line.split_whitespace();
        let (u, v) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), None) => {
                let u = a.parse::<usize>().map_err(|_| GraphError::MalformedEdge {
                    line: line_no,
                    text: line.to_string(),
                })?;
                let v = b.parse::<usize>().map_err(|_| GraphError::MalformedEdge {
                    line: line_no,
                    text: line.to_string(),
                })?;
                (u, v)
            }
            _ => {
                return Err(GraphError::MalformedEdge { line: line_no, text: line.to_string() })
            }
        };
        if u == v {
            return Err(GraphError::LoopEdge { u });
        }
        if u > v {
            return Err(GraphError::MalformedEdge { line: line_no, text: line.to_string() });
        }
        if v >= n {
            return Err(GraphError::VertexOutOfRange { u, v, n });
        }
        if !edges.insert((u, v)) {
            return Err(GraphError::DuplicateEdge { u, v });
        }
        found += 1;
    }
    if found != m {
        return Err(GraphError::EdgeCountMismatch { expected: m, found });
    }
    Ok(Graph::from_edge_set(n, edges))
}

/// Serializes a graph to the edge-list format: header line `n m`, then one
/// `u v` line per edge in sorted order. `parse_edge_list` inverts this.
pub fn serialize_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{} {}\n", u, v));
    }
    out
}

/// One-line `u-v u-v …` form of the edge list, for log records and labels.
pub fn compact_edge_list(g: &Graph) -> String {
    g.edges()
        .map(|(u, v)| format!("{u}-{v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

// ============================================================
// Connectivity
// ============================================================

/// Tests 2-connectedness (nonseparability on 3+ vertices): the graph must
/// be connected, have at least 3 vertices, and contain no cut vertex.
/// Cut vertices are found with the usual depth-first lowpoint computation.
pub fn is_two_connected(g: &Graph) -> bool {
    let n = g.vertex_count();
    if n < 3 || !g.is_connected() {
        return false;
    }

    // Iterative DFS from vertex 0 computing discovery times and lowpoints.
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut parent = vec![usize::MAX; n];
    let mut timer = 0usize;
    let mut root_children = 0usize;

    // Stack entries are (vertex, index into its adjacency list).
    let mut stack = vec![(0usize, 0usize)];
    disc[0] = 0;
    low[0] = 0;
    timer += 1;

    while let Some(&mut (v, ref mut idx)) = stack.last_mut() {
        if *idx < g.neighbors(v).len() {
            let w = g.neighbors(v)[*idx];
            *idx += 1;
            if disc[w] == usize::MAX {
                parent[w] = v;
                disc[w] = timer;
                low[w] = timer;
                timer += 1;
                if v == 0 {
                    root_children += 1;
                }
                stack.push((w, 0));
            } else if w != parent[v] {
                low[v] = low[v].min(disc[w]);
            }
        } else {
            stack.pop();
            if let Some(&(p, _)) = stack.last() {
                low[p] = low[p].min(low[v]);
                // A non-root vertex p is a cut vertex when some child's
                // lowpoint cannot reach above p.
                if p != 0 && low[v] >= disc[p] {
                    return false;
                }
            }
        }
    }
    // The root is a cut vertex exactly when it has 2+ DFS children.
    root_children == 1
}

// ============================================================
// Cycles
// ============================================================

/// A cycle given as its vertex sequence; the closing edge from the last
/// vertex back to the first is implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    vertices: Vec<usize>,
}

impl Cycle {
    /// Validates that `vertices` traces a cycle of `g`: length at least 3,
    /// all vertices distinct, and every consecutive (and the closing) pair
    /// an edge of `g`.
    pub fn new(g: &Graph, vertices: Vec<usize>) -> Result<Self, GraphError> {
        if vertices.len() < 3 {
            return Err(GraphError::InvalidCycle(format!(
                "length {} below minimum 3",
                vertices.len()
            )));
        }
        let distinct: BTreeSet<_> = vertices.iter().copied().collect();
        if distinct.len() != vertices.len() {
            return Err(GraphError::InvalidCycle("repeated vertex".into()));
        }
        for i in 0..vertices.len() {
            let u = vertices[i];
            let v = vertices[(i + 1) % vertices.len()];
            if u >= g.vertex_count() || v >= g.vertex_count() || !g.has_edge(u, v) {
                return Err(GraphError::InvalidCycle(format!("missing edge ({}, {})", u, v)));
            }
        }
        Ok(Cycle { vertices })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Number of edges (equals the number of vertices).
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges in traversal order, each normalized to `(min, max)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let k = self.vertices.len();
        (0..k)
            .map(|i| {
                let u = self.vertices[i];
                let v = self.vertices[(i + 1) % k];
                if u < v {
                    (u, v)
                } else {
                    (v, u)
                }
            })
            .collect()
    }
}

/// Rewrites a cycle's vertex sequence to its canonical form: among all
/// rotations in both directions, the lexicographically least. For a cycle
/// this means starting at the smallest vertex and moving toward the
/// smaller of its two cycle neighbors.
pub fn canonical_cycle_order(vertices: &[usize]) -> Vec<usize> {
    let k = vertices.len();
    let pos = (0..k).min_by_key(|&i| vertices[i]).expect("nonempty cycle");
    let forward: Vec<usize> = (0..k).map(|i| vertices[(pos + i) % k]).collect();
    let backward: Vec<usize> = (0..k).map(|i| vertices[(pos + k - i) % k]).collect();
    if forward <= backward {
        forward
    } else {
        backward
    }
}

// ============================================================
// Subgraphs
// ============================================================

/// A subgraph of some host graph, tracked as explicit vertex and edge
/// sets. Stage graphs of the coloring pipeline are `Subgraph`s whose
/// vertex ids refer to the host, so they are generally not dense.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgraph {
    vertices: BTreeSet<usize>,
    edges: BTreeSet<(usize, usize)>,
}

impl Subgraph {
    pub fn empty() -> Self {
        Subgraph { vertices: BTreeSet::new(), edges: BTreeSet::new() }
    }

    pub fn from_cycle(cycle: &Cycle) -> Self {
        let mut sub = Subgraph::empty();
        for &v in cycle.vertices() {
            sub.vertices.insert(v);
        }
        for e in cycle.edges() {
            sub.edges.insert(e);
        }
        sub
    }

    /// Inserts a path given by its vertex sequence: all vertices plus each
    /// consecutive edge (no closing edge).
    pub fn add_path(&mut self, vertices: &[usize]) {
        for &v in vertices {
            self.vertices.insert(v);
        }
        for w in vertices.windows(2) {
            let (u, v) = if w[0] < w[1] { (w[0], w[1]) } else { (w[1], w[0]) };
            self.edges.insert((u, v));
        }
    }

    pub fn insert_edge(&mut self, a: usize, b: usize) {
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        self.vertices.insert(u);
        self.vertices.insert(v);
        self.edges.insert((u, v));
    }

    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_edge(&self, a: usize, b: usize) -> bool {
        let key = if a < b { (a, b) } else { (b, a) };
        self.edges.contains(&key)
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.vertices.iter().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// True when the subgraph covers every vertex and edge of `g`.
    pub fn is_all_of(&self, g: &Graph) -> bool {
        self.vertices.len() == g.vertex_count() && self.edges.len() == g.edge_count()
    }

    /// Builds a dense graph on `0..order()` by ranking the vertex set.
    /// Returns the graph together with the rank-to-host-id table.
    pub fn to_dense(&self) -> (Graph, Vec<usize>) {
        let ids: Vec<usize> = self.vertices.iter().copied().collect();
        let rank: BTreeMap<usize, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|&(u, v)| (rank[&u], rank[&v])).collect();
        let g = Graph::new(ids.len(), &edges).expect("subgraph edges are a valid edge set");
        (g, ids)
    }
}

// ============================================================
// Even cycles
// ============================================================

/// Finds an even cycle of a 2-connected graph deterministically.
///
/// The search starts from the shortest cycle through vertex 0. If that
/// cycle is even it is returned directly. Otherwise every ear of the cycle
/// (one shortest ear per foot pair, found by breadth-first search) closes
/// an even cycle with exactly one of the two arcs between its feet, because
/// the arcs have lengths of different parity; the lexicographically least
/// of these candidates is returned. The only 2-connected graphs without an
/// even cycle are the odd cycles themselves, reported as `NoEvenCycle`.
pub fn find_even_cycle(g: &Graph) -> Result<Cycle, GraphError> {
    if !is_two_connected(g) {
        return Err(GraphError::NotTwoConnected);
    }

    let start = shortest_cycle_through(g, 0).ok_or(GraphError::NotTwoConnected)?;
    if start.len() % 2 == 0 {
        let canon = canonical_cycle_order(&start);
        return Cycle::new(g, canon);
    }

    // The start cycle is odd. For each pair of its vertices, look for a
    // shortest connecting path that avoids the rest of the cycle; each one
    // found is an ear and yields exactly one even candidate cycle.
    let on_cycle: BTreeSet<usize> = start.iter().copied().collect();
    let k = start.len();
    let cycle_edges: BTreeSet<(usize, usize)> = (0..k)
        .map(|i| {
            let u = start[i];
            let v = start[(i + 1) % k];
            if u < v {
                (u, v)
            } else {
                (v, u)
            }
        })
        .collect();
    let mut best: Option<Vec<usize>> = None;
    for i in 0..k {
        for j in (i + 1)..k {
            let a = start[i];
            let b = start[j];
            let Some(ear) = shortest_ear_path(g, &on_cycle, &cycle_edges, a, b) else {
                continue;
            };
            // Arc from position i forward to j, and its complement.
            let arc_fwd: Vec<usize> = (i..=j).map(|p| start[p]).collect();
            let arc_bwd: Vec<usize> = (j..=i + k).map(|p| start[p % k]).collect();
            for arc in [arc_fwd, arc_bwd] {
                let arc_len = arc.len() - 1;
                let ear_len = ear.len() - 1;
                if (arc_len + ear_len) % 2 != 0 {
                    continue;
                }
                // Join ear (a..b) with the arc traversed b..a; drop the
                // duplicated endpoints.
                let mut cyc = ear.clone();
                if arc[0] == a {
                    // arc runs a..b; reverse it to continue from b.
                    let mut rev: Vec<usize> = arc.iter().rev().copied().collect();
                    rev.remove(0); // b, already present
                    rev.pop(); // a, closes implicitly
                    cyc.extend(rev);
                } else {
                    let mut fwd = arc.clone();
                    fwd.remove(0);
                    fwd.pop();
                    cyc.extend(fwd);
                }
                let canon = canonical_cycle_order(&cyc);
                if best.as_ref().map_or(true, |b| canon < *b) {
                    best = Some(canon);
                }
            }
        }
    }
    match best {
        Some(vertices) => Cycle::new(g, vertices),
        None => Err(GraphError::NoEvenCycle),
    }
}

/// Shortest cycle through `v`: for each incident edge `(v, u)` in
/// ascending neighbor order, find the shortest `v`-`u` path avoiding that
/// edge; ties between candidate cycles break toward the canonically least
/// vertex sequence.
fn shortest_cycle_through(g: &Graph, v: usize) -> Option<Vec<usize>> {
    let mut best: Option<Vec<usize>> = None;
    for &u in g.neighbors(v) {
        if let Some(path) = bfs_path_avoiding_edge(g, v, u, (v, u)) {
            let canon = canonical_cycle_order(&path);
            let better = match &best {
                None => true,
                Some(b) => (canon.len(), &canon) < (b.len(), b),
            };
            if better {
                best = Some(canon);
            }
        }
    }
    best
}

/// Shortest path from `a` to `b` that does not traverse `skip`, found by
/// breadth-first search with neighbors visited in ascending order.
fn bfs_path_avoiding_edge(g: &Graph, a: usize, b: usize, skip: (usize, usize)) -> Option<Vec<usize>> {
    let banned = if skip.0 < skip.1 { skip } else { (skip.1, skip.0) };
    let mut parent = vec![usize::MAX; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = VecDeque::from([a]);
    seen[a] = true;
    while let Some(v) = queue.pop_front() {
        if v == b {
            break;
        }
        for &w in g.neighbors(v) {
            let key = if v < w { (v, w) } else { (w, v) };
            if key == banned || seen[w] {
                continue;
            }
            seen[w] = true;
            parent[w] = v;
            queue.push_back(w);
        }
    }
    if !seen[b] {
        return None;
    }
    let mut path = vec![b];
    let mut cur = b;
    while cur != a {
        cur = parent[cur];
        path.push(cur);
    }
    path.reverse();
    Some(path)
}

/// Shortest ear of a cycle with feet `a`, `b`: a path whose internal
/// vertices avoid the cycle entirely. A single-edge path counts only when
/// the edge is a chord, so edges of the cycle itself are never traversed.
fn shortest_ear_path(
    g: &Graph,
    on_cycle: &BTreeSet<usize>,
    cycle_edges: &BTreeSet<(usize, usize)>,
    a: usize,
    b: usize,
) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = VecDeque::from([a]);
    seen[a] = true;
    while let Some(v) = queue.pop_front() {
        if v == b {
            break;
        }
        for &w in g.neighbors(v) {
            if seen[w] {
                continue;
            }
            // Internal vertices must avoid the cycle; only b may re-enter.
            if w != b && on_cycle.contains(&w) {
                continue;
            }
            // The direct a-b hop is allowed only over a chord.
            let key = if v < w { (v, w) } else { (w, v) };
            if cycle_edges.contains(&key) {
                continue;
            }
            seen[w] = true;
            parent[w] = v;
            queue.push_back(w);
        }
    }
    if !seen[b] {
        return None;
    }
    let mut path = vec![b];
    let mut cur = b;
    while cur != a {
        cur = parent[cur];
        path.push(cur);
    }
    path.reverse();
    Some(path)
}

// ============================================================
// Tests
// ============================================================

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle_graph(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).unwrap()
    }

    fn complete_graph(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                edges.push((u, v));
            }
        }
        Graph::new(n, &edges).unwrap()
    }

    // ---------- parsing ----------

    #[test]
    fn parses_triangle() {
        let g = parse_edge_list("3 3\n0 1\n0 2\n1 2\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert!(g.has_edge(1, 0));
    }

    #[test]
    fn parses_single_edge_graph() {
        let g = parse_edge_list("2 1\n0 1").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn skips_comments_and_blank_lines() {
        let g = parse_edge_list("# a triangle\n3 3\n\n0 1\n# middle\n0 2\n1 2\n").unwrap();
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn rejects_vertex_out_of_range() {
        let err = parse_edge_list("3 1\n0 3\n").unwrap_err();
        assert_eq!(err, GraphError::VertexOutOfRange { u: 0, v: 3, n: 3 });
    }

    #[test]
    fn rejects_loops_duplicates_and_bad_order() {
        assert_eq!(parse_edge_list("3 1\n1 1\n").unwrap_err(), GraphError::LoopEdge { u: 1 });
        assert_eq!(
            parse_edge_list("3 2\n0 1\n0 1\n").unwrap_err(),
            GraphError::DuplicateEdge { u: 0, v: 1 }
        );
        assert!(matches!(
            parse_edge_list("3 1\n1 0\n").unwrap_err(),
            GraphError::MalformedEdge { .. }
        ));
    }

    #[test]
    fn rejects_malformed_header_and_count_mismatch() {
        assert!(matches!(parse_edge_list("").unwrap_err(), GraphError::MalformedHeader { .. }));
        assert!(matches!(parse_edge_list("x y\n").unwrap_err(), GraphError::MalformedHeader { .. }));
        assert!(matches!(
            parse_edge_list("3 2\n0 1\n").unwrap_err(),
            GraphError::EdgeCountMismatch { expected: 2, found: 1 }
        ));
        assert!(matches!(
            parse_edge_list("3 1\n0 1\n0 2\n").unwrap_err(),
            GraphError::EdgeCountMismatch { .. }
        ));
    }

    #[test]
    fn serialize_then_parse_is_identity() {
        let g = parse_edge_list("5 6\n0 1\n0 2\n1 2\n2 3\n2 4\n3 4\n").unwrap();
        let text = serialize_edge_list(&g);
        let back = parse_edge_list(&text).unwrap();
        assert_eq!(g, back);
        assert_eq!(text, serialize_edge_list(&back));
    }

    // ---------- 2-connectivity ----------

    #[test]
    fn cycles_are_two_connected() {
        for n in 3..9 {
            assert!(is_two_connected(&cycle_graph(n)), "C_{}", n);
        }
    }

    #[test]
    fn small_or_disconnected_graphs_are_not_two_connected() {
        assert!(!is_two_connected(&Graph::new(1, &[]).unwrap()));
        assert!(!is_two_connected(&Graph::new(2, &[(0, 1)]).unwrap()));
        // Two triangles with no connection.
        let g = Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(!is_two_connected(&g));
    }

    #[test]
    fn path_and_shared_vertex_triangles_have_cut_vertices() {
        let path = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(!is_two_connected(&path));
        // Bowtie: two triangles sharing vertex 2.
        let bowtie = Graph::new(5, &[(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]).unwrap();
        assert!(!is_two_connected(&bowtie));
    }

    #[test]
    fn dense_graphs_are_two_connected() {
        assert!(is_two_connected(&complete_graph(4)));
        assert!(is_two_connected(&complete_graph(6)));
    }

    /// Brute-force cross-check: 2-connected iff connected, n >= 3, and
    /// deleting any single vertex leaves the rest connected.
    #[test]
    fn lowpoint_matches_vertex_deletion_oracle() {
        // All graphs on 4 vertices, plus a sample on 5.
        for mask in 0u32..(1 << 6) {
            let all = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
            let edges: Vec<_> =
                all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            let g = Graph::new(4, &edges).unwrap();
            assert_eq!(is_two_connected(&g), brute_two_connected(&g), "mask {:#b}", mask);
        }
    }

    fn brute_two_connected(g: &Graph) -> bool {
        let n = g.vertex_count();
        if n < 3 || !g.is_connected() {
            return false;
        }
        for cut in 0..n {
            // Check connectivity of g minus `cut` over remaining vertices.
            let keep: Vec<usize> = (0..n).filter(|&v| v != cut).collect();
            let mut seen = vec![false; n];
            let start = keep[0];
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            let mut count = 1;
            while let Some(v) = queue.pop_front() {
                for &w in g.neighbors(v) {
                    if w != cut && !seen[w] {
                        seen[w] = true;
                        count += 1;
                        queue.push_back(w);
                    }
                }
            }
            if count != keep.len() {
                return false;
            }
        }
        true
    }

    // ---------- cycles ----------

    #[test]
    fn cycle_validation() {
        let g = cycle_graph(4);
        assert!(Cycle::new(&g, vec![0, 1, 2, 3]).is_ok());
        assert!(Cycle::new(&g, vec![0, 1, 2]).is_err()); // edge (2,0) missing
        assert!(Cycle::new(&g, vec![0, 1]).is_err());
        assert!(Cycle::new(&g, vec![0, 1, 2, 1]).is_err());
    }

    #[test]
    fn canonical_order_starts_at_least_vertex_toward_smaller_neighbor() {
        assert_eq!(canonical_cycle_order(&[2, 1, 0, 3]), vec![0, 1, 2, 3]);
        assert_eq!(canonical_cycle_order(&[0, 4, 3, 2]), vec![0, 2, 3, 4]);
        assert_eq!(canonical_cycle_order(&[5, 7, 6]), vec![5, 6, 7]);
    }

    // ---------- even cycles ----------

    #[test]
    fn even_cycle_of_even_cycle_is_itself() {
        let c4 = cycle_graph(4);
        let cycle = find_even_cycle(&c4).unwrap();
        assert_eq!(cycle.vertices(), &[0, 1, 2, 3]);
    }

    /// C_5 plus the chord (0, 2): the shortest cycle through 0 is the odd
    /// triangle 0-1-2, and the unique ear 0-4-3-2 closes the only even
    /// cycle, 0-2-3-4. Exhaustive cycle enumeration agrees.
    #[test]
    fn chorded_five_cycle_yields_the_unique_even_cycle() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 2)]).unwrap();
        let cycle = find_even_cycle(&g).unwrap();
        assert_eq!(cycle.vertices(), &[0, 2, 3, 4]);

        let evens = enumerate_even_cycles(&g);
        assert_eq!(evens, vec![vec![0, 2, 3, 4]]);
    }

    #[test]
    fn theta_graph_even_cycle() {
        // Hubs 0 and 1; internal vertices 2, 3, 4 on three parallel paths.
        let g = Graph::new(5, &[(0, 2), (1, 2), (0, 3), (1, 3), (0, 4), (1, 4)]).unwrap();
        let cycle = find_even_cycle(&g).unwrap();
        assert_eq!(cycle.vertices(), &[0, 2, 1, 3]);
    }

    #[test]
    fn odd_cycles_have_none() {
        assert_eq!(find_even_cycle(&cycle_graph(3)).unwrap_err(), GraphError::NoEvenCycle);
        assert_eq!(find_even_cycle(&cycle_graph(7)).unwrap_err(), GraphError::NoEvenCycle);
    }

    #[test]
    fn not_two_connected_is_reported() {
        let path = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(find_even_cycle(&path).unwrap_err(), GraphError::NotTwoConnected);
    }

    #[test]
    fn even_cycle_found_is_even_and_valid_on_k5() {
        let g = complete_graph(5);
        let cycle = find_even_cycle(&g).unwrap();
        assert_eq!(cycle.len() % 2, 0);
    }

    /// Test oracle: enumerate all cycles by DFS and keep the even ones in
    /// canonical form.
    fn enumerate_even_cycles(g: &Graph) -> Vec<Vec<usize>> {
        let n = g.vertex_count();
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut path = Vec::new();
        for start in 0..n {
            path.push(start);
            dfs_cycles(g, start, start, &mut path, &mut found);
            path.pop();
        }
        found.into_iter().filter(|c| c.len() % 2 == 0).collect()
    }

    fn dfs_cycles(
        g: &Graph,
        start: usize,
        v: usize,
        path: &mut Vec<usize>,
        found: &mut BTreeSet<Vec<usize>>,
    ) {
        for &w in g.neighbors(v) {
            if w == start && path.len() >= 3 {
                found.insert(canonical_cycle_order(path));
            } else if w > start && !path.contains(&w) {
                path.push(w);
                dfs_cycles(g, start, w, path, found);
                path.pop();
            }
        }
    }

    // ---------- subgraphs ----------

    #[test]
    fn subgraph_tracks_cycle_plus_ear() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 2)]).unwrap();
        let cycle = Cycle::new(&g, vec![0, 2, 3, 4]).unwrap();
        let mut sub = Subgraph::from_cycle(&cycle);
        assert_eq!(sub.order(), 4);
        assert_eq!(sub.size(), 4);
        sub.add_path(&[0, 1, 2]);
        assert_eq!(sub.order(), 5);
        assert!(sub.contains_edge(1, 0));
        assert!(sub.is_all_of(&g));
    }

    #[test]
    fn dense_remap_preserves_structure() {
        let mut sub = Subgraph::empty();
        sub.add_path(&[7, 3, 9]);
        let (g, ids) = sub.to_dense();
        assert_eq!(ids, vec![3, 7, 9]);
        assert_eq!(g.vertex_count(), 3);
        assert!(g.has_edge(0, 1)); // 3-7
        assert!(g.has_edge(0, 2)); // 3-9
        assert!(!g.has_edge(1, 2)); // 7 and 9 are not adjacent
    }
}
