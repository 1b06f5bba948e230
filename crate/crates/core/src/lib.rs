//! Rainbow colorings of 2-connected graphs with at most ceil(n/2) colors.
//!
//! The pipeline: decompose the graph into an even base cycle plus
//! nonincreasing ears, color stage by stage with a small repair search at
//! each step, then verify the result — every pair of vertices must be
//! joined by a path whose edge colors are pairwise distinct, and the
//! coloring must stay noncomplete along the way. A brute-force oracle for
//! the exact rainbow connection number cross-checks the construction on
//! small graphs.

pub mod coloring;
pub mod construct;
pub mod decomposition;
pub mod graph;
pub mod oracle;
pub mod verify;

pub use coloring::{
    color_along_cycle, color_cycle, cycle_pattern, ColoringDocument, ColoringError,
    ConstructionTrace, EdgeColoring, Rule, TraceStep,
};
pub use construct::{
    color_base_with_first_ear, color_chords, color_decomposition, color_short_ears,
    construct_coloring, construct_coloring_with, extend_even_ear, extend_odd_ear, ConstructConfig,
    ConstructError, ConstructionResult, EvenEarOutcome, PrevEar, StageState,
};
pub use decomposition::{
    ear_decomposition, ear_decomposition_with_budget, find_longest_ear, DecompositionDocument,
    DecompositionError, Ear, EarDecomposition, EarDocument, DEFAULT_EAR_BUDGET,
};
pub use graph::{
    canonical_cycle_order, compact_edge_list, find_even_cycle, is_two_connected, parse_edge_list,
    serialize_edge_list, Cycle, Graph, GraphError, Subgraph,
};
pub use oracle::{
    build_corpus, canonical_key, conjecture_scan, enumerate_graphs, exact_rc,
    find_hamiltonian_cycle, k_connected, random_two_connected, Corpus, CorpusEntry, CorpusMode,
    OracleError, Provenance, RcResult, ScanRecord, ScanReport, SearchStats, DEFAULT_HAM_BUDGET,
    DEFAULT_RC_BUDGET, MAX_ENUMERATION_ORDER,
};
pub use verify::{
    analyze_stage, find_rainbow_path, is_noncomplete, is_rainbow_connected, RainbowReport,
    RainbowWitness, VerifyError, MAX_VERIFY_COLORS,
};
