//! Ear decompositions with nonincreasing ear lengths over an even base cycle.
//!
//! Ears are attached longest-first. That greedy order is automatically
//! nonincreasing: a longer ear appearing after a shorter one could be routed
//! through the shorter ear's stage and would have been available earlier,
//! contradicting the earlier maximal choice. Every prefix union stays
//! 2-connected, which the stage-by-stage coloring relies on.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{find_even_cycle, is_two_connected, Cycle, Graph, GraphError, Subgraph};

/// Node-expansion budget for the longest-ear search when none is given.
pub const DEFAULT_EAR_BUDGET: usize = 5_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("graph is not 2-connected")]
    NotTwoConnected,
    #[error("graph has no even cycle")]
    NoEvenCycle,
    #[error("subgraph already spans every edge; no ear exists")]
    NoEar,
    #[error("longest-ear search exceeded its budget of {budget} nodes")]
    SearchBudgetExceeded { budget: usize },
    #[error("invalid decomposition: {0}")]
    Invalid(String),
}

impl From<GraphError> for DecompositionError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::NotTwoConnected => DecompositionError::NotTwoConnected,
            GraphError::NoEvenCycle => DecompositionError::NoEvenCycle,
            other => DecompositionError::Invalid(other.to_string()),
        }
    }
}

// ---------------------------------------------------------------------------
// Ear
// ---------------------------------------------------------------------------

/// A nontrivial path whose feet lie in an existing stage and whose internal
/// vertices do not. A length-1 ear is a chord.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ear {
    vertices: Vec<usize>,
}

impl Ear {
    pub fn new(vertices: Vec<usize>) -> Result<Self, DecompositionError> {
        if vertices.len() < 2 {
            return Err(DecompositionError::Invalid(
                "an ear needs at least two vertices".into(),
            ));
        }
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(DecompositionError::Invalid(
                "ear vertices must be pairwise distinct".into(),
            ));
        }
        Ok(Ear { vertices })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_chord(&self) -> bool {
        self.len() == 1
    }

    /// The two endpoints, in stored orientation.
    pub fn feet(&self) -> (usize, usize) {
        (self.vertices[0], *self.vertices.last().unwrap())
    }

    /// Vertices strictly between the feet.
    pub fn internal(&self) -> &[usize] {
        &self.vertices[1..self.vertices.len() - 1]
    }

    /// Edges as normalized pairs, in path order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices.windows(2).map(|w| {
            if w[0] < w[1] {
                (w[0], w[1])
            } else {
                (w[1], w[0])
            }
        })
    }

    pub fn reversed(&self) -> Ear {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Ear { vertices }
    }
}

// ---------------------------------------------------------------------------
// EarDecomposition
// ---------------------------------------------------------------------------

/// Even base cycle plus ears in nonincreasing length order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EarDecomposition {
    pub base: Cycle,
    pub ears: Vec<Ear>,
}

/// Serialized form: `{"base":[v…],"ears":[{"vertices":[v…]}…],"t":…}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionDocument {
    pub base: Vec<usize>,
    pub ears: Vec<EarDocument>,
    pub t: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EarDocument {
    pub vertices: Vec<usize>,
}

impl EarDecomposition {
    /// Total number of ears.
    pub fn ear_count(&self) -> usize {
        self.ears.len()
    }

    /// Number of ears of length at least 2 (they come first).
    pub fn long_ear_count(&self) -> usize {
        self.ears.iter().take_while(|e| e.len() >= 2).count()
    }

    /// Vertex counts of the stages: base first, then one entry per ear.
    pub fn stage_orders(&self) -> Vec<usize> {
        let mut orders = vec![self.base.len()];
        for ear in &self.ears {
            orders.push(orders.last().unwrap() + ear.len() - 1);
        }
        orders
    }

    /// Union of the base and the first `i` ears.
    pub fn stage_subgraph(&self, i: usize) -> Subgraph {
        let mut sub = Subgraph::from_cycle(&self.base);
        for ear in &self.ears[..i] {
            sub.add_path(ear.vertices());
        }
        sub
    }

    /// Check every structural invariant against the host graph.
    pub fn validate(&self, g: &Graph) -> Result<(), DecompositionError> {
        let base_cycle = Cycle::new(g, self.base.vertices().to_vec())
            .map_err(|e| DecompositionError::Invalid(format!("base: {e}")))?;
        if base_cycle.len() % 2 != 0 {
            return Err(DecompositionError::Invalid("base cycle has odd length".into()));
        }
        let mut sub = Subgraph::from_cycle(&self.base);
        let mut prev_len = usize::MAX;
        for (i, ear) in self.ears.iter().enumerate() {
            let idx = i + 1;
            if ear.len() > prev_len {
                return Err(DecompositionError::Invalid(format!(
                    "ear {idx} is longer than its predecessor"
                )));
            }
            prev_len = ear.len();
            let (a, b) = ear.feet();
            for foot in [a, b] {
                if !sub.contains_vertex(foot) {
                    return Err(DecompositionError::Invalid(format!(
                        "ear {idx}: foot {foot} is outside the earlier stage"
                    )));
                }
            }
            for &w in ear.internal() {
                if sub.contains_vertex(w) {
                    return Err(DecompositionError::Invalid(format!(
                        "ear {idx}: internal vertex {w} already appears in the stage"
                    )));
                }
            }
            for (u, v) in ear.edges() {
                if !g.has_edge(u, v) {
                    return Err(DecompositionError::Invalid(format!(
                        "ear {idx}: edge ({u}, {v}) is not in the graph"
                    )));
                }
                if sub.contains_edge(u, v) {
                    return Err(DecompositionError::Invalid(format!(
                        "ear {idx}: edge ({u}, {v}) already appears in the stage"
                    )));
                }
            }
            sub.add_path(ear.vertices());
        }
        if !sub.is_all_of(g) {
            return Err(DecompositionError::Invalid(
                "base and ears do not cover the whole graph".into(),
            ));
        }
        Ok(())
    }

    pub fn to_document(&self) -> DecompositionDocument {
        DecompositionDocument {
            base: self.base.vertices().to_vec(),
            ears: self
                .ears
                .iter()
                .map(|e| EarDocument {
                    vertices: e.vertices().to_vec(),
                })
                .collect(),
            t: self.long_ear_count(),
        }
    }

    /// Rebuild from a document and validate against the host graph.
    pub fn from_document(g: &Graph, doc: &DecompositionDocument) -> Result<Self, DecompositionError> {
        let base = Cycle::new(g, doc.base.clone()).map_err(|e| DecompositionError::Invalid(format!("base: {e}")))?;
        let ears = doc
            .ears
            .iter()
            .map(|e| Ear::new(e.vertices.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        let d = EarDecomposition { base, ears };
        d.validate(g)?;
        if d.long_ear_count() != doc.t {
            return Err(DecompositionError::Invalid(format!(
                "declared t = {} but {} ears have length >= 2",
                doc.t,
                d.long_ear_count()
            )));
        }
        Ok(d)
    }
}

// ---------------------------------------------------------------------------
// longest-ear search
// ---------------------------------------------------------------------------

struct EarSearch<'a> {
    g: &'a Graph,
    current: &'a Subgraph,
    budget: usize,
    nodes: usize,
    free_total: usize,
    best: Option<Vec<usize>>,
}

impl EarSearch<'_> {
    fn best_len(&self) -> usize {
        self.best.as_ref().map_or(0, |b| b.len() - 1)
    }

    fn consider(&mut self, cand: &[usize]) {
        let mut c = cand.to_vec();
        if c[0] > *c.last().unwrap() {
            c.reverse();
        }
        let len = c.len() - 1;
        match &self.best {
            None => self.best = Some(c),
            Some(b) => {
                let blen = b.len() - 1;
                if len > blen || (len == blen && c < *b) {
                    self.best = Some(c);
                }
            }
        }
    }

    fn extend(
        &mut self,
        path: &mut Vec<usize>,
        used: &mut [bool],
        free_used: usize,
    ) -> Result<(), DecompositionError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(DecompositionError::SearchBudgetExceeded { budget: self.budget });
        }
        // even absorbing every remaining free vertex cannot beat the best
        let potential = path.len() - 1 + (self.free_total - free_used) + 1;
        if self.best.is_some() && potential < self.best_len() {
            return Ok(());
        }
        let x = *path.last().unwrap();
        for &w in self.g.neighbors(x) {
            if path.len() == 1 {
                if self.current.contains_vertex(w) {
                    // chord candidate: a new single edge between stage vertices
                    let (a, b) = if x < w { (x, w) } else { (w, x) };
                    if !self.current.contains_edge(a, b) {
                        self.consider(&[x, w]);
                    }
                } else {
                    path.push(w);
                    used[w] = true;
                    self.extend(path, used, free_used + 1)?;
                    used[w] = false;
                    path.pop();
                }
            } else if self.current.contains_vertex(w) {
                if w != path[0] {
                    path.push(w);
                    self.consider(path);
                    path.pop();
                }
            } else if !used[w] {
                path.push(w);
                used[w] = true;
                self.extend(path, used, free_used + 1)?;
                used[w] = false;
                path.pop();
            }
        }
        Ok(())
    }
}

/// Longest ear of `current` in `g`; ties resolve to the lexicographically
/// least vertex sequence oriented from the smaller foot. Exhaustive
/// depth-first search with branch-and-bound pruning, abandoned with an error
/// once `budget` node expansions are spent.
pub fn find_longest_ear(
    g: &Graph,
    current: &Subgraph,
    budget: usize,
) -> Result<Ear, DecompositionError> {
    let mut search = EarSearch {
        g,
        current,
        budget,
        nodes: 0,
        free_total: g.vertex_count() - current.order(),
        best: None,
    };
    let starts: Vec<usize> = current.vertices().collect();
    let mut path = Vec::with_capacity(g.vertex_count());
    let mut used = vec![false; g.vertex_count()];
    for &a in &starts {
        path.push(a);
        used[a] = true;
        search.extend(&mut path, &mut used, 0)?;
        used[a] = false;
        path.pop();
    }
    match search.best {
        Some(v) => Ear::new(v),
        None => Err(DecompositionError::NoEar),
    }
}

// ---------------------------------------------------------------------------
// decomposition driver
// ---------------------------------------------------------------------------

/// Decompose a 2-connected graph into an even base cycle plus longest-first
/// ears. A graph that is itself an even cycle yields zero ears; an odd cycle
/// has no even base and is rejected.
pub fn ear_decomposition(g: &Graph) -> Result<EarDecomposition, DecompositionError> {
    ear_decomposition_with_budget(g, DEFAULT_EAR_BUDGET)
}

pub fn ear_decomposition_with_budget(
    g: &Graph,
    budget: usize,
) -> Result<EarDecomposition, DecompositionError> {
    if !is_two_connected(g) {
        return Err(DecompositionError::NotTwoConnected);
    }
    let base = find_even_cycle(g)?;
    let mut current = Subgraph::from_cycle(&base);
    let mut ears = Vec::new();
    while !current.is_all_of(g) {
        let ear = find_longest_ear(g, &current, budget)?;
        current.add_path(ear.vertices());
        ears.push(ear);
    }
    let d = EarDecomposition { base, ears };
    debug_assert_eq!(d.validate(g), Ok(()));
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle_graph(m: usize) -> Graph {
        let edges: Vec<(usize, usize)> = (0..m).map(|i| (i, (i + 1) % m)).collect();
        Graph::new(m, &edges).unwrap()
    }

    fn complete_graph(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::new(n, &edges).unwrap()
    }

    /// Independent brute-force ear enumeration (no pruning, no budget):
    /// returns the maximum ear length, or None when no ear exists.
    fn brute_longest(g: &Graph, current: &Subgraph) -> Option<usize> {
        fn paths(
            g: &Graph,
            current: &Subgraph,
            path: &mut Vec<usize>,
            used: &mut Vec<bool>,
            best: &mut Option<usize>,
        ) {
            let x = *path.last().unwrap();
            for &w in g.neighbors(x) {
                if current.contains_vertex(w) {
                    let ok = if path.len() == 1 {
                        let (a, b) = if x < w { (x, w) } else { (w, x) };
                        !current.contains_edge(a, b)
                    } else {
                        w != path[0]
                    };
                    if ok {
                        let len = path.len();
                        *best = Some(best.map_or(len, |b: usize| b.max(len)));
                    }
                } else if !used[w] {
                    path.push(w);
                    used[w] = true;
                    paths(g, current, path, used, best);
                    used[w] = false;
                    path.pop();
                }
            }
        }
        let mut best = None;
        for a in current.vertices() {
            let mut path = vec![a];
            let mut used = vec![false; g.vertex_count()];
            used[a] = true;
            paths(g, current, &mut path, &mut used, &mut best);
        }
        best
    }

    #[test]
    fn ear_accessors() {
        let ear = Ear::new(vec![3, 7, 8, 1]).unwrap();
        assert_eq!(ear.len(), 3);
        assert_eq!(ear.feet(), (3, 1));
        assert_eq!(ear.internal(), &[7, 8]);
        assert_eq!(ear.edges().collect::<Vec<_>>(), vec![(3, 7), (7, 8), (1, 8)]);
        assert_eq!(ear.reversed().vertices(), &[1, 8, 7, 3]);
        assert!(!ear.is_chord());
        assert!(Ear::new(vec![5]).is_err());
        assert!(Ear::new(vec![1, 2, 1]).is_err());
    }

    #[test]
    fn longest_ear_c5_with_chord() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 2)]).unwrap();
        let base = Cycle::new(&g, vec![0, 2, 3, 4]).unwrap();
        let current = Subgraph::from_cycle(&base);
        let ear = find_longest_ear(&g, &current, 10_000).unwrap();
        assert_eq!(ear.vertices(), &[0, 1, 2]);
    }

    #[test]
    fn longest_ear_k4_tie_break() {
        let g = complete_graph(4);
        let mut current = Subgraph::empty();
        current.add_path(&[0, 1, 2, 0]);
        let ear = find_longest_ear(&g, &current, 10_000).unwrap();
        assert_eq!(ear.vertices(), &[0, 3, 1]);
    }

    #[test]
    fn no_ear_when_spanning() {
        let g = cycle_graph(6);
        let base = find_even_cycle(&g).unwrap();
        let current = Subgraph::from_cycle(&base);
        assert_eq!(
            find_longest_ear(&g, &current, 10_000).unwrap_err(),
            DecompositionError::NoEar
        );
    }

    #[test]
    fn budget_is_enforced() {
        let g = complete_graph(6);
        let base = find_even_cycle(&g).unwrap();
        let current = Subgraph::from_cycle(&base);
        assert_eq!(
            find_longest_ear(&g, &current, 1).unwrap_err(),
            DecompositionError::SearchBudgetExceeded { budget: 1 }
        );
    }

    #[test]
    fn decomposition_of_even_cycle() {
        let d = ear_decomposition(&cycle_graph(6)).unwrap();
        assert_eq!(d.base.vertices(), &[0, 1, 2, 3, 4, 5]);
        assert!(d.ears.is_empty());
        assert_eq!(d.long_ear_count(), 0);
        assert_eq!(d.stage_orders(), vec![6]);
    }

    #[test]
    fn odd_cycle_is_rejected() {
        assert_eq!(
            ear_decomposition(&cycle_graph(7)).unwrap_err(),
            DecompositionError::NoEvenCycle
        );
    }

    #[test]
    fn path_is_rejected() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(
            ear_decomposition(&g).unwrap_err(),
            DecompositionError::NotTwoConnected
        );
    }

    #[test]
    fn decomposition_of_theta() {
        let g = Graph::new(5, &[(0, 2), (1, 2), (0, 3), (1, 3), (0, 4), (1, 4)]).unwrap();
        let d = ear_decomposition(&g).unwrap();
        assert_eq!(d.base.vertices(), &[0, 2, 1, 3]);
        assert_eq!(d.ears.len(), 1);
        assert_eq!(d.ears[0].vertices(), &[0, 4, 1]);
        assert_eq!(d.long_ear_count(), 1);
        assert_eq!(d.stage_orders(), vec![4, 5]);
        d.validate(&g).unwrap();
    }

    #[test]
    fn decomposition_of_k4() {
        let g = complete_graph(4);
        let d = ear_decomposition(&g).unwrap();
        assert_eq!(d.base.vertices(), &[0, 1, 2, 3]);
        assert_eq!(d.ears.len(), 2);
        assert_eq!(d.ears[0].vertices(), &[0, 2]);
        assert_eq!(d.ears[1].vertices(), &[1, 3]);
        assert_eq!(d.long_ear_count(), 0);
        d.validate(&g).unwrap();
    }

    #[test]
    fn decomposition_of_c5_with_chord() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 2)]).unwrap();
        let d = ear_decomposition(&g).unwrap();
        assert_eq!(d.base.vertices(), &[0, 2, 3, 4]);
        assert_eq!(d.ears.len(), 1);
        assert_eq!(d.ears[0].vertices(), &[0, 1, 2]);
        assert_eq!(d.long_ear_count(), 1);
        d.validate(&g).unwrap();
    }

    #[test]
    fn longest_first_is_nonincreasing_and_valid() {
        // hand-picked graphs with mixed ear shapes
        let graphs = vec![
            // C_6 plus a 2-chain and a chord
            Graph::new(8, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5), (0, 6), (6, 7), (7, 3), (1, 4)]).unwrap(),
            // two nested theta shapes
            Graph::new(8, &[(0, 1), (1, 2), (2, 3), (0, 3), (0, 4), (4, 2), (1, 5), (5, 6), (6, 7), (7, 3)]).unwrap(),
            complete_graph(5),
            complete_graph(6),
        ];
        for g in &graphs {
            let d = ear_decomposition(g).unwrap();
            d.validate(g).unwrap();
            let lens: Vec<usize> = d.ears.iter().map(|e| e.len()).collect();
            assert!(lens.windows(2).all(|w| w[0] >= w[1]), "lens = {lens:?}");
            assert_eq!(*d.stage_orders().last().unwrap(), g.vertex_count());
        }
    }

    #[test]
    fn longest_matches_brute_force() {
        let graphs = vec![
            complete_graph(5),
            Graph::new(7, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5), (5, 2), (1, 6), (6, 3)]).unwrap(),
            Graph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5), (0, 3), (1, 4)]).unwrap(),
        ];
        for g in &graphs {
            let base = find_even_cycle(g).unwrap();
            let mut current = Subgraph::from_cycle(&base);
            loop {
                let brute = brute_longest(g, &current);
                match find_longest_ear(g, &current, 1_000_000) {
                    Ok(ear) => {
                        assert_eq!(Some(ear.len()), brute);
                        // the ear itself is structurally sound
                        let (a, b) = ear.feet();
                        assert!(current.contains_vertex(a) && current.contains_vertex(b));
                        assert!(ear.internal().iter().all(|&w| !current.contains_vertex(w)));
                        for (u, v) in ear.edges() {
                            assert!(g.has_edge(u, v));
                            assert!(!current.contains_edge(u, v));
                        }
                        current.add_path(ear.vertices());
                    }
                    Err(DecompositionError::NoEar) => {
                        assert_eq!(brute, None);
                        break;
                    }
                    Err(other) => panic!("unexpected error: {other}"),
                }
            }
        }
    }

    #[test]
    fn document_round_trip_and_shape() {
        let g = Graph::new(5, &[(0, 2), (1, 2), (0, 3), (1, 3), (0, 4), (1, 4)]).unwrap();
        let d = ear_decomposition(&g).unwrap();
        let doc = d.to_document();
        let json = serde_json::to_string(&doc).unwrap();
        assert_eq!(json, r#"{"base":[0,2,1,3],"ears":[{"vertices":[0,4,1]}],"t":1}"#);
        let back = EarDecomposition::from_document(&g, &doc).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn validate_rejects_tampering() {
        let g = Graph::new(5, &[(0, 2), (1, 2), (0, 3), (1, 3), (0, 4), (1, 4)]).unwrap();
        let good = ear_decomposition(&g).unwrap();

        // missing ear: union is not the whole graph
        let mut d = good.clone();
        d.ears.clear();
        assert!(matches!(d.validate(&g), Err(DecompositionError::Invalid(_))));

        // foot outside the stage
        let mut d = good.clone();
        d.ears[0] = Ear::new(vec![4, 0, 2]).unwrap();
        assert!(matches!(d.validate(&g), Err(DecompositionError::Invalid(_))));

        // increasing lengths
        let g2 = Graph::new(7, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 2), (1, 5), (5, 6), (6, 3)]).unwrap();
        let d2 = ear_decomposition(&g2).unwrap();
        let mut bad = d2.clone();
        bad.ears.reverse();
        assert!(matches!(bad.validate(&g2), Err(DecompositionError::Invalid(_))));
        assert_eq!(d2.validate(&g2), Ok(()));
    }

    #[test]
    fn prefix_stages_are_two_connected() {
        let g = Graph::new(8, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5), (0, 6), (6, 7), (7, 3), (1, 4)]).unwrap();
        let d = ear_decomposition(&g).unwrap();
        for i in 0..=d.ear_count() {
            let (dense, _) = d.stage_subgraph(i).to_dense();
            assert!(is_two_connected(&dense), "stage {i}");
        }
    }
}
