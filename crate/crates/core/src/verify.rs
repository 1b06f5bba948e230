//! Ground truth for every produced coloring: rainbow-connectivity decisions,
//! rainbow-path witnesses, and the noncompleteness audit.
//!
//! The engine is a breadth-first search over `(vertex, used-color-set)`
//! states. Every transition consumes exactly one color, so search depth
//! equals path length, the first arrival at a vertex is a shortest rainbow
//! trail, and a shortest rainbow trail is automatically a simple path
//! (cutting a revisited vertex out of a trail keeps the colors distinct and
//! shortens it). A pair is *exceptional* exactly when its shortest rainbow
//! path has length `K`: no rainbow path can be longer than the palette, so
//! every rainbow path between such a pair uses all `K` colors.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::coloring::EdgeColoring;
use crate::graph::{Graph, Subgraph};

/// Palette size above which the subset-state search is refused; the state
/// space is `n · 2^K`.
pub const MAX_VERIFY_COLORS: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("vertex {v} is outside 0..{n}")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("edge ({u}, {v}) has no color")]
    UncoloredEdge { u: usize, v: usize },
    #[error("coloring is not rainbow connected; pair ({}, {}) has no rainbow path", pair.0, pair.1)]
    NotRainbowConnected { pair: (usize, usize) },
    #[error("{color_count} colors exceed the verifiable limit of {MAX_VERIFY_COLORS}")]
    TooManyColors { color_count: usize },
}

/// A concrete rainbow path between one pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RainbowWitness {
    pub pair: (usize, usize),
    /// Vertex sequence from `pair.0` to `pair.1`.
    pub path: Vec<usize>,
    pub used_colors: BTreeSet<usize>,
    /// True when the path length equals the palette size `K`.
    pub complete: bool,
}

/// Outcome of an all-pairs rainbow audit.
///
/// `noncomplete` holds when every vertex occurs in at most one exceptional
/// pair — a pair all of whose rainbow paths are complete. `failing_pairs`
/// lists pairs with no rainbow path at all; when it is nonempty,
/// `noncomplete` is reported as `false` and `exceptional_pairs` stays empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RainbowReport {
    pub rainbow_connected: bool,
    pub noncomplete: bool,
    #[serde(rename = "K")]
    pub color_count: usize,
    pub exceptional_pairs: Vec<(usize, usize)>,
    pub failing_pairs: Vec<(usize, usize)>,
}

// ---------------------------------------------------------------------------
// search engine
// ---------------------------------------------------------------------------

/// Adjacency annotated with color bits; built once per audit.
struct ColorAdj {
    n: usize,
    k: usize,
    adj: Vec<Vec<(usize, u32)>>,
}

fn color_adj(g: &Graph, c: &EdgeColoring) -> Result<ColorAdj, VerifyError> {
    let k = c.color_count();
    if k > MAX_VERIFY_COLORS {
        return Err(VerifyError::TooManyColors { color_count: k });
    }
    let n = g.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for (u, v) in g.edges() {
        let color = c.get(u, v).ok_or(VerifyError::UncoloredEdge { u, v })?;
        debug_assert!(color >= 1 && color <= k);
        let bit = 1u32 << (color - 1);
        adj[u].push((v, bit));
        adj[v].push((u, bit));
    }
    Ok(ColorAdj { n, k, adj })
}

/// Shortest rainbow-path length from `src` to every vertex (`None` where no
/// rainbow path exists).
fn bfs_distances(ca: &ColorAdj, src: usize) -> Vec<Option<usize>> {
    let mut dist: Vec<Option<usize>> = vec![None; ca.n];
    dist[src] = Some(0);
    let mut remaining = ca.n - 1;
    let mut visited = vec![false; ca.n << ca.k];
    visited[src << ca.k] = true;
    let mut queue = VecDeque::new();
    queue.push_back((src, 0u32));
    while let Some((v, mask)) = queue.pop_front() {
        if remaining == 0 {
            break;
        }
        for &(w, bit) in &ca.adj[v] {
            if mask & bit != 0 {
                continue;
            }
            let nm = mask | bit;
            let idx = (w << ca.k) | nm as usize;
            if visited[idx] {
                continue;
            }
            visited[idx] = true;
            if dist[w].is_none() {
                dist[w] = Some(nm.count_ones() as usize);
                remaining -= 1;
            }
            queue.push_back((w, nm));
        }
    }
    dist
}

/// Full pairwise shortest rainbow distances.
fn rainbow_distances(g: &Graph, c: &EdgeColoring) -> Result<Vec<Vec<Option<usize>>>, VerifyError> {
    let ca = color_adj(g, c)?;
    Ok((0..ca.n).map(|src| bfs_distances(&ca, src)).collect())
}

fn report_from_distances(dist: &[Vec<Option<usize>>], k: usize) -> RainbowReport {
    let n = dist.len();
    let mut failing = Vec::new();
    let mut exceptional = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            match dist[u][v] {
                None => failing.push((u, v)),
                Some(d) if d == k => exceptional.push((u, v)),
                Some(_) => {}
            }
        }
    }
    let rainbow_connected = failing.is_empty();
    let noncomplete = if rainbow_connected {
        let mut appearances = vec![0usize; n];
        for &(u, v) in &exceptional {
            appearances[u] += 1;
            appearances[v] += 1;
        }
        appearances.iter().all(|&a| a <= 1)
    } else {
        false
    };
    RainbowReport {
        rainbow_connected,
        noncomplete,
        color_count: k,
        exceptional_pairs: if rainbow_connected { exceptional } else { Vec::new() },
        failing_pairs: failing,
    }
}

// ---------------------------------------------------------------------------
// operations
// ---------------------------------------------------------------------------

/// Find a rainbow path between `u` and `v`, shortest first.
///
/// A shortest rainbow path is noncomplete whenever any noncomplete rainbow
/// path exists, so the search satisfies `prefer_noncomplete` without extra
/// work; the flag documents intent at call sites.
pub fn find_rainbow_path(
    g: &Graph,
    c: &EdgeColoring,
    u: usize,
    v: usize,
    _prefer_noncomplete: bool,
) -> Result<Option<RainbowWitness>, VerifyError> {
    let n = g.vertex_count();
    for w in [u, v] {
        if w >= n {
            return Err(VerifyError::VertexOutOfRange { v: w, n });
        }
    }
    let ca = color_adj(g, c)?;
    if u == v {
        return Ok(Some(RainbowWitness {
            pair: (u, v),
            path: vec![u],
            used_colors: BTreeSet::new(),
            complete: ca.k == 0,
        }));
    }

    let mut parent: HashMap<(usize, u32), (usize, u32)> = HashMap::new();
    let mut visited = vec![false; ca.n << ca.k];
    visited[u << ca.k] = true;
    let mut queue = VecDeque::new();
    queue.push_back((u, 0u32));
    let mut hit: Option<(usize, u32)> = None;
    'search: while let Some((x, mask)) = queue.pop_front() {
        for &(w, bit) in &ca.adj[x] {
            if mask & bit != 0 {
                continue;
            }
            let nm = mask | bit;
            let idx = (w << ca.k) | nm as usize;
            if visited[idx] {
                continue;
            }
            visited[idx] = true;
            parent.insert((w, nm), (x, mask));
            if w == v {
                hit = Some((w, nm));
                break 'search;
            }
            queue.push_back((w, nm));
        }
    }

    let Some(goal) = hit else { return Ok(None) };
    let mut path = Vec::new();
    let mut cur = goal;
    loop {
        path.push(cur.0);
        if cur == (u, 0) {
            break;
        }
        cur = parent[&cur];
    }
    path.reverse();
    let used_colors: BTreeSet<usize> = (0..ca.k).filter(|i| goal.1 & (1 << i) != 0).map(|i| i + 1).collect();
    let complete = used_colors.len() == ca.k;
    Ok(Some(RainbowWitness {
        pair: (u, v),
        path,
        used_colors,
        complete,
    }))
}

/// All-pairs rainbow-connectivity audit.
pub fn is_rainbow_connected(g: &Graph, c: &EdgeColoring) -> Result<RainbowReport, VerifyError> {
    let dist = rainbow_distances(g, c)?;
    Ok(report_from_distances(&dist, c.color_count()))
}

/// Noncompleteness audit; requires the coloring to be rainbow connected.
pub fn is_noncomplete(g: &Graph, c: &EdgeColoring) -> Result<RainbowReport, VerifyError> {
    let report = is_rainbow_connected(g, c)?;
    if !report.rainbow_connected {
        return Err(VerifyError::NotRainbowConnected {
            pair: report.failing_pairs[0],
        });
    }
    Ok(report)
}

/// Audit a coloring restricted to a subgraph, reporting pairs in the host
/// graph's vertex ids. The palette size is the number of distinct colors on
/// the subgraph's edges.
pub fn analyze_stage(sub: &Subgraph, c: &EdgeColoring) -> Result<RainbowReport, VerifyError> {
    let (dense, back) = sub.to_dense();
    let mut rank: HashMap<usize, usize> = HashMap::new();
    for (r, &host) in back.iter().enumerate() {
        rank.insert(host, r);
    }
    let mut dense_coloring = EdgeColoring::new();
    for (u, v) in sub.edges() {
        let color = c.get(u, v).ok_or(VerifyError::UncoloredEdge { u, v })?;
        dense_coloring.assign(rank[&u], rank[&v], color);
    }
    let mut report = is_rainbow_connected(&dense, &dense_coloring)?;
    let map_pair = |(u, v): (usize, usize)| {
        let (a, b) = (back[u], back[v]);
        if a < b {
            (a, b)
        } else {
            (b, a)
        }
    };
    report.exceptional_pairs = report.exceptional_pairs.iter().copied().map(map_pair).collect();
    report.failing_pairs = report.failing_pairs.iter().copied().map(map_pair).collect();
    report.exceptional_pairs.sort_unstable();
    report.failing_pairs.sort_unstable();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{color_cycle, ColoringDocument};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

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

    fn mono_coloring(g: &Graph) -> EdgeColoring {
        let mut c = EdgeColoring::new();
        for (u, v) in g.edges() {
            c.assign(u, v, 1);
        }
        c
    }

    /// Exhaustive simple-path oracle: shortest rainbow path length.
    fn brute_shortest(g: &Graph, c: &EdgeColoring, u: usize, v: usize) -> Option<usize> {
        fn dfs(
            g: &Graph,
            c: &EdgeColoring,
            v: usize,
            target: usize,
            seen: &mut Vec<bool>,
            colors: &mut BTreeSet<usize>,
            len: usize,
            best: &mut Option<usize>,
        ) {
            if v == target {
                *best = Some(best.map_or(len, |b: usize| b.min(len)));
                return;
            }
            for &w in g.neighbors(v) {
                if seen[w] {
                    continue;
                }
                let color = c.get(v, w).unwrap();
                if colors.contains(&color) {
                    continue;
                }
                seen[w] = true;
                colors.insert(color);
                dfs(g, c, w, target, seen, colors, len + 1, best);
                colors.remove(&color);
                seen[w] = false;
            }
        }
        let mut seen = vec![false; g.vertex_count()];
        seen[u] = true;
        let mut best = None;
        dfs(g, c, u, v, &mut seen, &mut BTreeSet::new(), 0, &mut best);
        best
    }

    #[test]
    fn c4_complete_pair() {
        let g = cycle_graph(4);
        let c = color_cycle(4);
        let w = find_rainbow_path(&g, &c, 0, 2, true).unwrap().unwrap();
        assert_eq!(w.path, vec![0, 1, 2]);
        assert_eq!(w.used_colors, BTreeSet::from([1, 2]));
        assert!(w.complete);
    }

    #[test]
    fn same_vertex_is_noncomplete() {
        let g = cycle_graph(4);
        let c = color_cycle(4);
        let w = find_rainbow_path(&g, &c, 3, 3, true).unwrap().unwrap();
        assert_eq!(w.path, vec![3]);
        assert!(w.used_colors.is_empty());
        assert!(!w.complete);
    }

    #[test]
    fn adjacent_pair_single_edge() {
        let g = cycle_graph(6);
        let c = color_cycle(6);
        let w = find_rainbow_path(&g, &c, 2, 3, false).unwrap().unwrap();
        assert_eq!(w.path, vec![2, 3]);
        assert!(!w.complete);
    }

    #[test]
    fn vertex_out_of_range() {
        let g = cycle_graph(4);
        let c = color_cycle(4);
        assert_eq!(
            find_rainbow_path(&g, &c, 0, 9, true).unwrap_err(),
            VerifyError::VertexOutOfRange { v: 9, n: 4 }
        );
    }

    #[test]
    fn c6_pattern_report() {
        let g = cycle_graph(6);
        let report = is_noncomplete(&g, &color_cycle(6)).unwrap();
        assert!(report.rainbow_connected);
        assert!(report.noncomplete);
        assert_eq!(report.color_count, 3);
        assert_eq!(report.exceptional_pairs, vec![(0, 3), (1, 4), (2, 5)]);
        assert!(report.failing_pairs.is_empty());
    }

    #[test]
    fn c5_pattern_no_exceptional_pairs() {
        let g = cycle_graph(5);
        let report = is_noncomplete(&g, &color_cycle(5)).unwrap();
        assert!(report.rainbow_connected && report.noncomplete);
        assert!(report.exceptional_pairs.is_empty());
    }

    #[test]
    fn k3_monochromatic_is_complete_everywhere() {
        let g = complete_graph(3);
        let report = is_noncomplete(&g, &mono_coloring(&g)).unwrap();
        assert!(report.rainbow_connected);
        assert!(!report.noncomplete);
        assert_eq!(report.exceptional_pairs.len(), 3);
    }

    #[test]
    fn c6_monochromatic_fails() {
        let g = cycle_graph(6);
        let c = mono_coloring(&g);
        let report = is_rainbow_connected(&g, &c).unwrap();
        assert!(!report.rainbow_connected);
        assert!(report.failing_pairs.contains(&(0, 3)));
        assert!(!report.noncomplete);
        assert!(report.exceptional_pairs.is_empty());
        assert_eq!(
            is_noncomplete(&g, &c).unwrap_err(),
            VerifyError::NotRainbowConnected { pair: (0, 2) }
        );
    }

    #[test]
    fn k2_any_coloring_connects() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let mut c = EdgeColoring::new();
        c.assign(0, 1, 1);
        let report = is_rainbow_connected(&g, &c).unwrap();
        assert!(report.rainbow_connected);
    }

    #[test]
    fn uncovered_edge_is_an_error() {
        let g = cycle_graph(4);
        let mut c = EdgeColoring::new();
        c.assign(0, 1, 1);
        assert_eq!(
            is_rainbow_connected(&g, &c).unwrap_err(),
            VerifyError::UncoloredEdge { u: 0, v: 3 }
        );
    }

    #[test]
    fn palette_guard() {
        // path with 21 fresh colors exceeds the state-space limit
        let n = 22;
        let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        let g = Graph::new(n, &edges).unwrap();
        let mut c = EdgeColoring::new();
        for (i, (u, v)) in edges.iter().enumerate() {
            c.assign(*u, *v, i + 1);
        }
        assert_eq!(
            is_rainbow_connected(&g, &c).unwrap_err(),
            VerifyError::TooManyColors { color_count: 21 }
        );
    }

    #[test]
    fn prefer_flag_changes_nothing() {
        let g = cycle_graph(6);
        let c = color_cycle(6);
        for u in 0..6 {
            for v in 0..6 {
                let a = find_rainbow_path(&g, &c, u, v, true).unwrap();
                let b = find_rainbow_path(&g, &c, u, v, false).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn fresh_edge_keeps_connectivity() {
        // adding an edge under a brand-new color never disconnects a report
        let g = cycle_graph(5);
        let c = color_cycle(5);
        assert!(is_rainbow_connected(&g, &c).unwrap().rainbow_connected);
        let mut edges: Vec<(usize, usize)> = g.edges().collect();
        edges.push((0, 2));
        let g2 = Graph::new(5, &edges).unwrap();
        let mut c2 = c.clone();
        let fresh = c2.fresh_color();
        c2.assign(0, 2, fresh);
        assert!(is_rainbow_connected(&g2, &c2).unwrap().rainbow_connected);
    }

    #[test]
    fn stage_report_uses_host_ids() {
        // host: C_6; stage: the 4-cycle on {0, 2, 3, 5} plus chord-free edges
        let g = Graph::new(6, &[(0, 2), (2, 3), (3, 5), (0, 5), (0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        let mut sub = Subgraph::empty();
        sub.add_path(&[0, 2, 3, 5, 0]);
        let mut c = EdgeColoring::new();
        c.assign(0, 2, 1);
        c.assign(2, 3, 2);
        c.assign(3, 5, 1);
        c.assign(5, 0, 2);
        let report = analyze_stage(&sub, &c).unwrap();
        assert!(report.rainbow_connected);
        assert_eq!(report.color_count, 2);
        assert_eq!(report.exceptional_pairs, vec![(0, 3), (2, 5)]);
        let _ = g;
    }

    #[test]
    fn witnesses_are_sound() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let n = rng.gen_range(3..=7);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.6) {
                        edges.push((u, v));
                    }
                }
            }
            if edges.is_empty() {
                continue;
            }
            let g = Graph::new(n, &edges).unwrap();
            let k = rng.gen_range(1..=4);
            let mut c = EdgeColoring::new();
            for &(u, v) in &edges {
                c.assign(u, v, rng.gen_range(1..=k));
            }
            let doc = ColoringDocument::from_coloring(n, &c);
            let c = doc.to_coloring().unwrap();
            for u in 0..n {
                for v in u + 1..n {
                    if let Some(w) = find_rainbow_path(&g, &c, u, v, true).unwrap() {
                        // path is simple, consecutive edges exist, colors distinct
                        let mut seen = BTreeSet::new();
                        assert!(w.path.iter().all(|&x| seen.insert(x)));
                        let mut colors = BTreeSet::new();
                        for pair in w.path.windows(2) {
                            let color = c.get(pair[0], pair[1]).expect("edge exists");
                            assert!(colors.insert(color), "repeated color");
                        }
                        assert_eq!(colors, w.used_colors);
                        assert_eq!(w.complete, colors.len() == c.color_count());
                    }
                }
            }
        }
    }

    #[test]
    fn engine_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..80 {
            let n = rng.gen_range(3..=6);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.55) {
                        edges.push((u, v));
                    }
                }
            }
            if edges.is_empty() {
                continue;
            }
            let g = Graph::new(n, &edges).unwrap();
            let k = rng.gen_range(1..=4);
            let mut c = EdgeColoring::new();
            for &(u, v) in &edges {
                c.assign(u, v, rng.gen_range(1..=k));
            }
            // pad the palette so K is the declared maximum
            let doc = ColoringDocument {
                n,
                colors: k,
                edges: c.iter().map(|((u, v), col)| (u, v, col)).collect(),
            };
            let c = doc.to_coloring().unwrap();
            let dist = rainbow_distances(&g, &c).unwrap();
            for u in 0..n {
                for v in 0..n {
                    if u == v {
                        continue;
                    }
                    assert_eq!(dist[u][v], brute_shortest(&g, &c, u, v), "n={n} pair ({u},{v})");
                }
            }
        }
    }
}
