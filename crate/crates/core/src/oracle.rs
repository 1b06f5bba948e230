//! Brute-force ground truth: exact rainbow connection numbers, Hamiltonian
//! cycles, exhaustive small-graph corpora, random 2-connected generators,
//! and the ⌈n/k⌉ conjecture scan.
//!
//! Everything here is independent of the constructive pipeline so the two
//! can cross-check each other. All searches carry explicit node budgets and
//! report "unknown" instead of guessing when a budget runs out.

use std::collections::BTreeSet;
use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::EdgeColoring;
use crate::graph::{compact_edge_list, Cycle, Graph};

/// Default node budget for `exact_rc` searches.
pub const DEFAULT_RC_BUDGET: usize = 20_000_000;
/// Default node budget for Hamiltonian-cycle backtracking.
pub const DEFAULT_HAM_BUDGET: usize = 1_000_000;
/// Exhaustive enumeration is limited to this order (2^(n(n-1)/2) masks).
pub const MAX_ENUMERATION_ORDER: usize = 7;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("search exceeded its budget of {budget} nodes")]
    BudgetExceeded { budget: usize },
    #[error("infeasible parameters: {0}")]
    InfeasibleParameters(String),
}

// ---------------------------------------------------------------------------
// exact rainbow connection number
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: usize,
    pub feasibility_checks: usize,
}

#[derive(Debug, Clone)]
pub struct RcResult {
    /// The exact rainbow connection number.
    pub rc: usize,
    /// A rainbow coloring that achieves it (lexicographically least over the
    /// sorted edge list, colors introduced in ascending order).
    pub witness: EdgeColoring,
    pub explored: SearchStats,
}

/// All-pairs BFS distances; `None` when some pair is unreachable.
fn diameter(g: &Graph) -> Option<usize> {
    let n = g.vertex_count();
    let mut diam = 0;
    for src in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(x) = queue.pop_front() {
            for &w in g.neighbors(x) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[x] + 1;
                    queue.push_back(w);
                }
            }
        }
        let far = *dist.iter().max().unwrap();
        if far == usize::MAX {
            return None;
        }
        diam = diam.max(far);
    }
    Some(diam)
}

/// Every pair must stay joinable by a rainbow walk when uncolored edges
/// (color 0) are traversed for free. This is an optimistic relaxation of any
/// future completion, so a `false` here soundly prunes the partial coloring.
fn relaxed_rainbow_connected(
    n: usize,
    edges: &[(usize, usize)],
    colors: &[usize],
    k: usize,
) -> bool {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        adj[u].push((v, colors[i]));
        adj[v].push((u, colors[i]));
    }
    let states = n << k;
    let mut visited = vec![false; states];
    let mut queue = VecDeque::new();
    for src in 0..n {
        visited.iter_mut().for_each(|s| *s = false);
        let mut reached = 1usize;
        let mut seen = vec![false; n];
        seen[src] = true;
        visited[src << k] = true;
        queue.clear();
        queue.push_back((src, 0usize));
        while let Some((x, mask)) = queue.pop_front() {
            if reached == n {
                break;
            }
            for &(w, c) in &adj[x] {
                let nm = if c == 0 {
                    mask
                } else {
                    let bit = 1usize << (c - 1);
                    if mask & bit != 0 {
                        continue;
                    }
                    mask | bit
                };
                let id = (w << k) | nm;
                if !visited[id] {
                    visited[id] = true;
                    if !seen[w] {
                        seen[w] = true;
                        reached += 1;
                    }
                    queue.push_back((w, nm));
                }
            }
        }
        if reached != n {
            return false;
        }
    }
    true
}

struct RcSearch<'a> {
    n: usize,
    edges: &'a [(usize, usize)],
    k: usize,
    budget: usize,
    stats: &'a mut SearchStats,
}

impl RcSearch<'_> {
    fn dfs(&mut self, colors: &mut Vec<usize>, i: usize, used_max: usize) -> Result<Option<Vec<usize>>, OracleError> {
        let m = self.edges.len();
        if i == m {
            return Ok(Some(colors.clone()));
        }
        // colorings with fewer than k colors were refuted at earlier depths
        if used_max + (m - i) < self.k {
            return Ok(None);
        }
        let top = self.k.min(used_max + 1);
        for c in 1..=top {
            self.stats.nodes += 1;
            if self.stats.nodes > self.budget {
                return Err(OracleError::BudgetExceeded { budget: self.budget });
            }
            colors[i] = c;
            self.stats.feasibility_checks += 1;
            if relaxed_rainbow_connected(self.n, self.edges, colors, self.k) {
                if let Some(hit) = self.dfs(colors, i + 1, used_max.max(c))? {
                    return Ok(Some(hit));
                }
            }
            colors[i] = 0;
        }
        Ok(None)
    }
}

/// Exact rainbow connection number by iterative deepening from the diameter.
/// For each candidate k, the search enumerates colorings of the sorted edge
/// list with the first edge fixed to color 1 and new colors introduced in
/// ascending order (one canonical representative per color-permutation
/// class), pruning any prefix that already disconnects some pair. The first
/// full assignment found is therefore the lexicographically least witness.
pub fn exact_rc(g: &Graph, max_colors: usize, budget: usize) -> Result<RcResult, OracleError> {
    let n = g.vertex_count();
    let d = diameter(g).ok_or(OracleError::Disconnected)?;
    let m = g.edge_count();
    if m == 0 {
        // a single vertex (or empty graph) is vacuously rainbow connected
        return Ok(RcResult {
            rc: 0,
            witness: EdgeColoring::new(),
            explored: SearchStats::default(),
        });
    }
    if max_colors < d {
        return Err(OracleError::InfeasibleParameters(format!(
            "max_colors {max_colors} is below the diameter {d}"
        )));
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut stats = SearchStats::default();
    for k in d..=max_colors.min(m) {
        let mut search = RcSearch {
            n,
            edges: &edges,
            k,
            budget,
            stats: &mut stats,
        };
        let mut colors = vec![0usize; m];
        if let Some(hit) = search.dfs(&mut colors, 0, 0)? {
            let mut witness = EdgeColoring::new();
            for (i, &(u, v)) in edges.iter().enumerate() {
                witness.assign(u, v, hit[i]);
            }
            return Ok(RcResult {
                rc: k,
                witness,
                explored: stats,
            });
        }
    }
    Err(OracleError::InfeasibleParameters(format!(
        "no rainbow coloring with at most {} colors",
        max_colors.min(m)
    )))
}

// ---------------------------------------------------------------------------
// Hamiltonian cycles
// ---------------------------------------------------------------------------

fn ham_extend(
    g: &Graph,
    path: &mut Vec<usize>,
    used: &mut [bool],
    nodes: &mut usize,
    budget: usize,
) -> Result<Option<Vec<usize>>, OracleError> {
    *nodes += 1;
    if *nodes > budget {
        return Err(OracleError::BudgetExceeded { budget });
    }
    let n = g.vertex_count();
    let x = *path.last().unwrap();
    if path.len() == n {
        // close up; keep one orientation per cycle
        if g.has_edge(x, 0) && path[1] < path[n - 1] {
            return Ok(Some(path.clone()));
        }
        return Ok(None);
    }
    for &w in g.neighbors(x) {
        if !used[w] {
            path.push(w);
            used[w] = true;
            let hit = ham_extend(g, path, used, nodes, budget)?;
            used[w] = false;
            path.pop();
            if hit.is_some() {
                return Ok(hit);
            }
        }
    }
    Ok(None)
}

/// First Hamiltonian cycle in deterministic order (backtracking from vertex
/// 0, neighbors ascending, one orientation per cycle), or `None` when the
/// exhaustive search closes without finding one.
pub fn find_hamiltonian_cycle(g: &Graph, budget: usize) -> Result<Option<Cycle>, OracleError> {
    let n = g.vertex_count();
    if n < 3 || (0..n).any(|v| g.degree(v) < 2) {
        return Ok(None);
    }
    let mut path = vec![0usize];
    let mut used = vec![false; n];
    used[0] = true;
    let mut nodes = 0usize;
    match ham_extend(g, &mut path, &mut used, &mut nodes, budget)? {
        Some(cycle) => {
            let cycle = Cycle::new(g, cycle).expect("backtracking produces a valid cycle");
            Ok(Some(cycle))
        }
        None => Ok(None),
    }
}

// ---------------------------------------------------------------------------
// canonical forms and enumeration
// ---------------------------------------------------------------------------

struct KeySearch<'a> {
    g: &'a Graph,
    n: usize,
    total_bits: usize,
    best: u64,
}

impl KeySearch<'_> {
    fn place(&mut self, placed: &mut Vec<usize>, used: &mut [bool], key: u64, bits: usize) {
        if placed.len() == self.n {
            if key < self.best {
                self.best = key;
            }
            return;
        }
        for v in 0..self.n {
            if used[v] {
                continue;
            }
            let mut b = 0u64;
            for &p in placed.iter() {
                b = (b << 1) | (self.g.has_edge(p, v) as u64);
            }
            let nk = (key << placed.len()) | b;
            let nb = bits + placed.len();
            // a worse prefix can never become the minimum
            if nk > (self.best >> (self.total_bits - nb)) {
                continue;
            }
            placed.push(v);
            used[v] = true;
            self.place(placed, used, nk, nb);
            used[v] = false;
            placed.pop();
        }
    }
}

/// Isomorphism-invariant key: the minimum adjacency bitstring over all
/// vertex orderings, packed MSB-first as vertices are placed one at a time.
/// Limited to order ≤ 7 so the permutation search stays trivial.
pub fn canonical_key(g: &Graph) -> u64 {
    let n = g.vertex_count();
    assert!(
        n <= MAX_ENUMERATION_ORDER,
        "canonical keys are limited to order {MAX_ENUMERATION_ORDER}"
    );
    if n < 2 {
        return 0;
    }
    let total_bits = n * (n - 1) / 2;
    let mut search = KeySearch {
        g,
        n,
        total_bits,
        best: u64::MAX >> (64 - total_bits),
    };
    let mut placed = Vec::with_capacity(n);
    let mut used = vec![false; n];
    search.place(&mut placed, &mut used, 0, 0);
    search.best
}

/// True when the graph is k-connected: more than k vertices, connected, and
/// still connected after deleting any vertex set of size at most k − 1.
/// `k = 0` accepts everything; `k = 1` is plain connectivity.
pub fn k_connected(g: &Graph, k: usize) -> bool {
    if k == 0 {
        return true;
    }
    if !g.is_connected() {
        return false;
    }
    if k == 1 {
        return true;
    }
    let n = g.vertex_count();
    if n <= k {
        return false;
    }
    // delete every subset of size 1..=k-1 and check connectivity of the rest
    let mut removed = Vec::new();
    subsets_connected(g, &mut removed, 0, k - 1)
}

fn subsets_connected(g: &Graph, removed: &mut Vec<usize>, from: usize, max_size: usize) -> bool {
    if !removed.is_empty() && !connected_without(g, removed) {
        return false;
    }
    if removed.len() == max_size {
        return true;
    }
    for v in from..g.vertex_count() {
        removed.push(v);
        let ok = subsets_connected(g, removed, v + 1, max_size);
        removed.pop();
        if !ok {
            return false;
        }
    }
    true
}

fn connected_without(g: &Graph, removed: &[usize]) -> bool {
    let n = g.vertex_count();
    let mut blocked = vec![false; n];
    for &v in removed {
        blocked[v] = true;
    }
    let Some(start) = (0..n).find(|&v| !blocked[v]) else {
        return true;
    };
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    let mut count = 1;
    while let Some(x) = queue.pop_front() {
        for &w in g.neighbors(x) {
            if !blocked[w] && !seen[w] {
                seen[w] = true;
                count += 1;
                queue.push_back(w);
            }
        }
    }
    count == n - removed.len()
}

/// All k-connected graphs of order exactly n, one representative per
/// isomorphism class, in ascending edge-mask order.
pub fn enumerate_graphs(n: usize, connectivity: usize) -> Result<Vec<Graph>, OracleError> {
    if n == 0 || n > MAX_ENUMERATION_ORDER {
        return Err(OracleError::InfeasibleParameters(format!(
            "enumeration supports 1 ≤ n ≤ {MAX_ENUMERATION_ORDER}, got {n}"
        )));
    }
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            pairs.push((u, v));
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let g = Graph::new(n, &edges).expect("enumerated edges are simple");
        if !k_connected(&g, connectivity) {
            continue;
        }
        if seen.insert(canonical_key(&g)) {
            out.push(g);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// random generation
// ---------------------------------------------------------------------------

/// Random 2-connected graph of order exactly n (n ≥ 4): a random even base
/// cycle, the remaining vertices distributed into random open ears, then a
/// few random chords. 2-connectivity holds by construction.
pub fn random_two_connected(n: usize, rng: &mut impl Rng) -> Graph {
    assert!(n >= 4, "random generation needs n >= 4");
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(rng);
    let even_lengths: Vec<usize> = (4..=n).filter(|l| l % 2 == 0).collect();
    let base_len = *even_lengths.choose(rng).unwrap();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for i in 0..base_len {
        edges.push((ids[i], ids[(i + 1) % base_len]));
    }
    let mut placed: Vec<usize> = ids[..base_len].to_vec();
    let mut rest: Vec<usize> = ids[base_len..].to_vec();
    while !rest.is_empty() {
        let take = rng.gen_range(1..=rest.len());
        let internals: Vec<usize> = rest.drain(..take).collect();
        let a = placed[rng.gen_range(0..placed.len())];
        let b = loop {
            let b = placed[rng.gen_range(0..placed.len())];
            if b != a {
                break b;
            }
        };
        let mut walk = Vec::with_capacity(take + 2);
        walk.push(a);
        walk.extend(&internals);
        walk.push(b);
        for w in walk.windows(2) {
            edges.push((w[0], w[1]));
        }
        placed.extend(internals);
    }
    let tries = rng.gen_range(0..=n / 3);
    for _ in 0..tries {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v && !edges.iter().any(|&(a, b)| (a, b) == (u.min(v), u.max(v)) || (a, b) == (u.max(v), u.min(v))) {
            edges.push((u, v));
        }
    }
    let normalized: Vec<(usize, usize)> = edges
        .into_iter()
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect();
    Graph::new(n, &normalized).expect("generator produces a simple graph")
}

// ---------------------------------------------------------------------------
// corpora
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusMode {
    Enumerate,
    Random,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Enumerated,
    Generated { seed: u64 },
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub graph: Graph,
    pub provenance: Provenance,
    /// Canonical dedup key; present when the order admits one (n ≤ 7).
    pub key: Option<u64>,
}

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub entries: Vec<CorpusEntry>,
}

/// Build a graph corpus of order exactly `n`.
///
/// Enumerate mode lists every k-connected graph up to isomorphism
/// (`count = 0` keeps all, otherwise truncates). Random mode draws `count`
/// 2-connected graphs reproducibly from `seed`; it refuses any other
/// connectivity because the generator only guarantees 2.
pub fn build_corpus(
    mode: CorpusMode,
    n: usize,
    connectivity: usize,
    count: usize,
    seed: u64,
) -> Result<Corpus, OracleError> {
    match mode {
        CorpusMode::Enumerate => {
            let mut graphs = enumerate_graphs(n, connectivity)?;
            if count > 0 {
                graphs.truncate(count);
            }
            let entries = graphs
                .into_iter()
                .map(|g| {
                    let key = Some(canonical_key(&g));
                    CorpusEntry {
                        graph: g,
                        provenance: Provenance::Enumerated,
                        key,
                    }
                })
                .collect();
            Ok(Corpus { entries })
        }
        CorpusMode::Random => {
            if connectivity != 2 {
                return Err(OracleError::InfeasibleParameters(
                    "random generation guarantees exactly 2-connectivity".into(),
                ));
            }
            if n < 4 {
                return Err(OracleError::InfeasibleParameters(format!(
                    "random generation needs n >= 4, got {n}"
                )));
            }
            use rand::SeedableRng;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let entries = (0..count)
                .map(|_| {
                    let g = random_two_connected(n, &mut rng);
                    let key = (g.vertex_count() <= MAX_ENUMERATION_ORDER).then(|| canonical_key(&g));
                    CorpusEntry {
                        graph: g,
                        provenance: Provenance::Generated { seed },
                        key,
                    }
                })
                .collect();
            Ok(Corpus { entries })
        }
    }
}

// ---------------------------------------------------------------------------
// conjecture scan
// ---------------------------------------------------------------------------

/// One scanned graph: `rc` is `None` when the search ran out of budget.
/// `ok` is true only for a known rc within the bound — unknowns never pass.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub graph: String,
    pub n: usize,
    #[serde(with = "rc_field")]
    pub rc: Option<usize>,
    pub bound: usize,
    pub ok: bool,
}

mod rc_field {
    use serde::de::{self, Visitor};
    use serde::{Deserializer, Serializer};
    use std::fmt;

    pub fn serialize<S: Serializer>(v: &Option<usize>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_u64(*x as u64),
            None => s.serialize_str("unknown"),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<usize>, D::Error> {
        struct RcVisitor;
        impl<'de> Visitor<'de> for RcVisitor {
            type Value = Option<usize>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or the string \"unknown\"")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(Some(v as usize))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                if v < 0 {
                    return Err(E::custom("rc cannot be negative"));
                }
                Ok(Some(v as usize))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                if v == "unknown" {
                    Ok(None)
                } else {
                    Err(E::custom(format!("expected \"unknown\", got {v:?}")))
                }
            }
        }
        d.deserialize_any(RcVisitor)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScanReport {
    pub records: Vec<ScanRecord>,
}

impl ScanReport {
    /// Graphs whose known rc exceeds the bound.
    pub fn violations(&self) -> usize {
        self.records
            .iter()
            .filter(|r| matches!(r.rc, Some(rc) if rc > r.bound))
            .count()
    }

    /// Graphs whose rc search ran out of budget.
    pub fn unknowns(&self) -> usize {
        self.records.iter().filter(|r| r.rc.is_none()).count()
    }

    /// Largest rc − bound over the known records (negative when the bound
    /// holds with slack everywhere).
    pub fn max_excess(&self) -> Option<i64> {
        self.records
            .iter()
            .filter_map(|r| r.rc.map(|rc| rc as i64 - r.bound as i64))
            .max()
    }
}

/// Measure rc against the ⌈n/k⌉ bound over every corpus member of order at
/// most `n_max`. Evidence only: budget-exhausted entries surface as unknown
/// (`ok = false`), never as passes, and violations are recorded verbatim.
pub fn conjecture_scan(
    k: usize,
    n_max: usize,
    corpus: &Corpus,
    budget: usize,
) -> Result<ScanReport, OracleError> {
    if k == 0 {
        return Err(OracleError::InfeasibleParameters(
            "connectivity k must be at least 1".into(),
        ));
    }
    let mut records = Vec::new();
    for entry in &corpus.entries {
        let g = &entry.graph;
        let n = g.vertex_count();
        if n > n_max {
            continue;
        }
        let bound = n.div_ceil(k);
        let rc = match exact_rc(g, g.edge_count().max(1), budget) {
            Ok(result) => Some(result.rc),
            Err(OracleError::BudgetExceeded { .. }) => None,
            Err(other) => return Err(other),
        };
        let ok = matches!(rc, Some(v) if v <= bound);
        records.push(ScanRecord {
            graph: compact_edge_list(g),
            n,
            rc,
            bound,
            ok,
        });
    }
    Ok(ScanReport { records })
}
