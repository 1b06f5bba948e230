//! End-to-end runs of the full pipeline: decompose, color, verify, and
//! cross-check against the exact oracle on named and random instances.

use rainbow_core::*;
use rand::SeedableRng;
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

fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..a {
        for v in 0..b {
            edges.push((u, a + v));
        }
    }
    Graph::new(a + b, &edges).unwrap()
}

fn petersen() -> Graph {
    Graph::new(
        10,
        &[
            (0, 1), (1, 2), (2, 3), (3, 4), (0, 4),
            (5, 7), (7, 9), (6, 9), (6, 8), (5, 8),
            (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
        ],
    )
    .unwrap()
}

fn assert_constructed(g: &Graph) -> ConstructionResult {
    let n = g.vertex_count();
    let result = construct_coloring(g).expect("construction succeeds");
    let report = is_rainbow_connected(g, &result.coloring).unwrap();
    assert!(report.rainbow_connected, "coloring must be rainbow connected");
    assert!(
        result.coloring.color_count() <= n.div_ceil(2),
        "{} colors on {} vertices breaks the bound",
        result.coloring.color_count(),
        n
    );
    assert!(result.coloring.covers(g));
    assert!(result.coloring.contiguous());
    result
}

#[test]
fn petersen_takes_the_ear_route() {
    let g = petersen();
    // famously no spanning cycle, so the probe must come back empty
    assert_eq!(find_hamiltonian_cycle(&g, DEFAULT_HAM_BUDGET).unwrap(), None);
    let result = assert_constructed(&g);
    assert_eq!(
        result.trace.rules(),
        vec![Rule::Lemma1, Rule::BaseOdd, Rule::Chords]
    );
    assert_eq!(result.coloring.color_count(), 5);
}

#[test]
fn cycles_use_exactly_half_their_order() {
    for n in 4..=10 {
        let result = assert_constructed(&cycle_graph(n));
        assert_eq!(result.trace.rules(), vec![Rule::Lemma1]);
        assert_eq!(result.coloring.color_count(), n.div_ceil(2));
    }
}

#[test]
fn complete_graphs_take_the_spanning_route() {
    // the guarantee is ⌈n/2⌉, not optimality: rc(K_n) = 1, but the spanning
    // cycle is colored with the halved pattern and the chords with color 1
    for n in 4..=7 {
        let result = assert_constructed(&complete_graph(n));
        assert_eq!(result.trace.rules(), vec![Rule::Lemma1, Rule::Chords]);
        assert_eq!(result.coloring.color_count(), n.div_ceil(2));
    }
}

#[test]
fn named_instances_stay_within_the_bound() {
    // K_{2,3} has no spanning cycle; K_{3,3} and the triangular prism do
    let instances: Vec<(Graph, usize)> = vec![
        (complete_bipartite(2, 3), 3),
        (complete_bipartite(3, 3), 3),
        (
            Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)])
                .unwrap(),
            3,
        ),
    ];
    for (g, expected) in instances {
        let result = assert_constructed(&g);
        assert_eq!(result.coloring.color_count(), expected);
    }
}

#[test]
fn every_small_two_connected_graph_constructs() {
    for n in 3..=6 {
        for g in &enumerate_graphs(n, 2).unwrap() {
            let result = assert_constructed(g);
            // the exact optimum can never beat the construction
            let exact = exact_rc(g, n, DEFAULT_RC_BUDGET).unwrap();
            assert!(exact.rc <= result.coloring.color_count());
        }
    }
}

#[test]
fn random_graphs_construct_within_the_bound() {
    for n in 4..=16 {
        for seed in 0..8u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed * 1000 + n as u64);
            let g = random_two_connected(n, &mut rng);
            assert_constructed(&g);
        }
    }
}

#[test]
fn random_decompositions_validate_with_two_connected_prefixes() {
    for n in 4..=14 {
        for seed in [11u64, 22, 33] {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64) << 8);
            let g = random_two_connected(n, &mut rng);
            let d = ear_decomposition(&g).unwrap();
            d.validate(&g).unwrap();
            // ears are nonincreasing and every stage is 2-connected
            for w in d.ears.windows(2) {
                assert!(w[0].len() >= w[1].len());
            }
            for i in 0..=d.ear_count() {
                let (dense, _) = d.stage_subgraph(i).to_dense();
                assert!(is_two_connected(&dense), "stage {i} of n={n} seed={seed}");
            }
        }
    }
}

#[test]
fn construction_is_reproducible() {
    for n in [6usize, 9, 12, 15] {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64 * 77);
        let g = random_two_connected(n, &mut rng);
        let a = construct_coloring(&g).unwrap();
        let b = construct_coloring(&g).unwrap();
        assert_eq!(a.coloring, b.coloring);
        assert_eq!(a.trace.steps, b.trace.steps);
        assert_eq!(a.trace.ear_order, b.trace.ear_order);
    }
}

#[test]
fn pipeline_stages_log_a_clean_noncompleteness_audit() {
    for n in 5..=14 {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64 + 4242);
        let g = random_two_connected(n, &mut rng);
        let result = construct_coloring(&g).unwrap();
        for step in &result.trace.steps {
            match step.rule {
                Rule::Lemma3Few | Rule::Lemma3Many | Rule::Chords => {}
                _ => {
                    assert_eq!(step.noncomplete, Some(true), "{} stage", step.rule);
                    let pairs = step.exceptional_pairs.as_ref().unwrap();
                    if step.stage_order % 2 == 1 {
                        assert!(pairs.is_empty(), "odd stage carries no exceptional pair");
                    }
                }
            }
        }
    }
}

#[test]
fn constructed_colorings_roundtrip_through_json() {
    let g = petersen();
    let result = construct_coloring(&g).unwrap();
    let doc = ColoringDocument::from_coloring(g.vertex_count(), &result.coloring);
    let text = serde_json::to_string(&doc).unwrap();
    let back: ColoringDocument = serde_json::from_str(&text).unwrap();
    let restored = back.to_coloring().unwrap();
    assert_eq!(restored, result.coloring);
    let report = is_rainbow_connected(&g, &restored).unwrap();
    assert!(report.rainbow_connected && report.noncomplete);
}
