//! `rainbow` — construct, verify and probe rainbow colorings of 2-connected
//! graphs from the command line.
//!
//! Graphs are read from edge-list files (`n m` header, one `u v` line per
//! edge); colorings from JSON documents. Results go to stdout in the chosen
//! format, diagnostics to stderr. Exit codes: 0 success, 1 property
//! violation, 2 input or parameter error, 3 inconclusive within budget.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rainbow_core::{
    build_corpus, compact_edge_list, conjecture_scan, construct_coloring_with, exact_rc,
    is_rainbow_connected, parse_edge_list, ColoringDocument, ConstructConfig, ConstructError,
    ConstructionTrace, Corpus, CorpusMode, EdgeColoring, Graph, OracleError, Provenance,
    RainbowReport, DEFAULT_RC_BUDGET, MAX_ENUMERATION_ORDER,
};

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

/// Sixteen visually distinct colors for DOT edge attributes; ids cycle.
const DOT_PALETTE: [&str; 16] = [
    "#e6194B", "#3cb44b", "#ffe119", "#4363d8", "#f58231", "#911eb4", "#42d4f4", "#f032e6",
    "#bfef45", "#fabed4", "#469990", "#dcbeff", "#9A6324", "#fffac8", "#800000", "#aaffc3",
];

#[derive(Parser)]
#[command(
    name = "rainbow",
    about = "Rainbow colorings of 2-connected graphs with at most ceil(n/2) colors",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Enumerate,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a rainbow coloring for a 2-connected graph
    Color {
        /// Edge-list file
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Shorthand for --format dot
        #[arg(long)]
        dot: bool,
        /// Node budget for the spanning-cycle probe and the ear search
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Check a coloring file against a graph
    Verify {
        /// Edge-list file
        graph: PathBuf,
        /// Coloring JSON file
        coloring: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Compute the exact rainbow connection number by exhaustive search
    Exact {
        /// Edge-list file
        graph: PathBuf,
        /// Largest palette to try (default: the edge count)
        #[arg(long)]
        max_colors: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_RC_BUDGET)]
        budget: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Emit a corpus of 2-connected test graphs as JSON lines
    Gen {
        /// Enumeration: largest order to list; random: the exact order
        #[arg(long)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = Mode::Enumerate)]
        mode: Mode,
        /// Number of random graphs (random mode only)
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Required connectivity (enumeration mode only)
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Scan enumerated k-connected graphs against the ceil(n/k) bound
    Scan {
        /// Connectivity of the scanned corpus
        #[arg(long)]
        k: usize,
        /// Largest graph order to enumerate
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value_t = DEFAULT_RC_BUDGET)]
        budget: usize,
    },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Color {
            graph,
            format,
            dot,
            budget,
        } => run_color(&graph, if dot { Format::Dot } else { format }, budget),
        Command::Verify {
            graph,
            coloring,
            format,
        } => run_verify(&graph, &coloring, format),
        Command::Exact {
            graph,
            max_colors,
            budget,
            format,
        } => run_exact(&graph, max_colors, budget, format),
        Command::Gen {
            max_n,
            mode,
            count,
            seed,
            k,
        } => run_gen(max_n, mode, count, seed, k),
        Command::Scan { k, max_n, budget } => run_scan(k, max_n, budget),
    }
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn load_graph(path: &PathBuf) -> Result<Graph, ExitCode> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage_error(format_args!("{}: {e}", path.display())))?;
    parse_edge_list(&text).map_err(|e| usage_error(format_args!("{}: {e}", path.display())))
}

// ---------------------------------------------------------------------------
// color
// ---------------------------------------------------------------------------

fn run_color(path: &PathBuf, format: Format, budget: Option<usize>) -> ExitCode {
    let g = match load_graph(path) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let mut cfg = ConstructConfig::default();
    if let Some(b) = budget {
        if b == 0 {
            return usage_error("--budget must be positive");
        }
        cfg.ham_budget = b;
        cfg.ear_budget = b;
    }
    let result = match construct_coloring_with(&g, &cfg) {
        Ok(r) => r,
        Err(ConstructError::NotTwoConnected) => return usage_error("graph is not 2-connected"),
        Err(ConstructError::Decomposition(e)) => return usage_error(e),
        Err(e) => {
            eprintln!("error: {e}");
            if let ConstructError::ConstructionUnverified {
                pair: Some((u, v)), ..
            } = e
            {
                eprintln!("counterexample pair: ({u}, {v})");
            }
            return ExitCode::from(EXIT_VIOLATION);
        }
    };
    let n = g.vertex_count();
    let report = match is_rainbow_connected(&g, &result.coloring) {
        Ok(r) => r,
        Err(e) => return usage_error(e),
    };
    let bound = n.div_ceil(2);
    match format {
        Format::Json => {
            let doc = ColoringDocument::from_coloring(n, &result.coloring);
            let out = serde_json::json!({
                "coloring": doc,
                "trace": result.trace,
                "report": report,
            });
            println!("{out}");
        }
        Format::Text => print!("{}", color_text(n, &result.coloring, &result.trace, &report)),
        Format::Dot => print!("{}", render_dot(&g, &result.coloring)),
    }
    if report.rainbow_connected && result.coloring.color_count() <= bound {
        ExitCode::SUCCESS
    } else {
        eprintln!(
            "error: constructed {} colors against bound {bound} (rainbow: {})",
            result.coloring.color_count(),
            report.rainbow_connected
        );
        ExitCode::from(EXIT_VIOLATION)
    }
}

fn color_text(
    n: usize,
    coloring: &EdgeColoring,
    trace: &ConstructionTrace,
    report: &RainbowReport,
) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "n={n} K={} bound={} rainbow={} noncomplete={}",
        coloring.color_count(),
        n.div_ceil(2),
        report.rainbow_connected,
        report.noncomplete
    );
    for step in &trace.steps {
        let _ = writeln!(
            out,
            "stage {} {}: order={} new={:?} reused={:?}",
            step.stage, step.rule, step.stage_order, step.new_colors, step.reused_colors
        );
    }
    for ((u, v), c) in coloring.iter() {
        let _ = writeln!(out, "{u} {v} {c}");
    }
    out
}

fn render_dot(g: &Graph, coloring: &EdgeColoring) -> String {
    let mut out = String::from("graph rainbow {\n  node [shape=circle];\n");
    for (u, v) in g.edges() {
        let c = coloring.get(u, v).expect("constructed coloring covers g");
        let hex = DOT_PALETTE[(c - 1) % DOT_PALETTE.len()];
        let _ = writeln!(out, "  {u} -- {v} [color=\"{hex}\", label=\"{c}\"];");
    }
    out.push_str("}\n");
    out
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn run_verify(graph: &PathBuf, coloring: &PathBuf, format: Format) -> ExitCode {
    let g = match load_graph(graph) {
        Ok(g) => g,
        Err(code) => return code,
    };
    let text = match fs::read_to_string(coloring) {
        Ok(t) => t,
        Err(e) => return usage_error(format_args!("{}: {e}", coloring.display())),
    };
    // Accept both a bare coloring document and the wrapper `color` emits.
    let doc: ColoringDocument = match serde_json::from_str(&text) {
        Ok(d) => d,
        Err(bare) => {
            let inner = serde_json::from_str::<serde_json::Value>(&text)
                .ok()
                .and_then(|mut v| v.get_mut("coloring").map(serde_json::Value::take))
                .and_then(|v| serde_json::from_value(v).ok());
            match inner {
                Some(d) => d,
                None => return usage_error(format_args!("{}: {bare}", coloring.display())),
            }
        }
    };
    let c = match doc.to_coloring() {
        Ok(c) => c,
        Err(e) => return usage_error(e),
    };
    let report = match is_rainbow_connected(&g, &c) {
        Ok(r) => r,
        Err(e) => return usage_error(e),
    };
    match format {
        Format::Json => println!("{}", serde_json::to_string(&report).unwrap()),
        _ => {
            println!(
                "rainbow={} noncomplete={} K={} exceptional={:?} failing={:?}",
                report.rainbow_connected,
                report.noncomplete,
                report.color_count,
                report.exceptional_pairs,
                report.failing_pairs
            );
        }
    }
    if report.rainbow_connected {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VIOLATION)
    }
}

// ---------------------------------------------------------------------------
// exact
// ---------------------------------------------------------------------------

fn run_exact(
    graph: &PathBuf,
    max_colors: Option<usize>,
    budget: usize,
    format: Format,
) -> ExitCode {
    let g = match load_graph(graph) {
        Ok(g) => g,
        Err(code) => return code,
    };
    if budget == 0 {
        return usage_error("--budget must be positive");
    }
    let cap = max_colors.unwrap_or_else(|| g.edge_count().max(1));
    match exact_rc(&g, cap, budget) {
        Ok(result) => {
            match format {
                Format::Json => {
                    let doc = ColoringDocument::from_coloring(g.vertex_count(), &result.witness);
                    let out = serde_json::json!({
                        "rc": result.rc,
                        "witness": doc,
                        "explored": result.explored.nodes,
                    });
                    println!("{out}");
                }
                _ => println!("rc={} explored={}", result.rc, result.explored.nodes),
            }
            ExitCode::SUCCESS
        }
        Err(OracleError::BudgetExceeded { budget }) => {
            eprintln!("inconclusive: search budget of {budget} nodes exhausted");
            ExitCode::from(EXIT_INCONCLUSIVE)
        }
        Err(e) => usage_error(e),
    }
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

fn run_gen(max_n: usize, mode: Mode, count: usize, seed: u64, k: usize) -> ExitCode {
    let corpora: Result<Vec<Corpus>, OracleError> = match mode {
        Mode::Enumerate => {
            if max_n > MAX_ENUMERATION_ORDER {
                return usage_error(format_args!(
                    "enumeration is limited to order {MAX_ENUMERATION_ORDER}"
                ));
            }
            (3..=max_n)
                .map(|n| build_corpus(CorpusMode::Enumerate, n, k, 0, 0))
                .collect()
        }
        Mode::Random => build_corpus(CorpusMode::Random, max_n, k, count, seed).map(|c| vec![c]),
    };
    let corpora = match corpora {
        Ok(c) => c,
        Err(e) => return usage_error(e),
    };
    for corpus in &corpora {
        for entry in &corpus.entries {
            let provenance = match entry.provenance {
                Provenance::Enumerated => "enumerated".to_string(),
                Provenance::Generated { seed } => format!("seed:{seed}"),
            };
            let line = serde_json::json!({
                "n": entry.graph.vertex_count(),
                "m": entry.graph.edge_count(),
                "graph": compact_edge_list(&entry.graph),
                "provenance": provenance,
            });
            println!("{line}");
        }
    }
    ExitCode::SUCCESS
}

// ---------------------------------------------------------------------------
// scan
// ---------------------------------------------------------------------------

fn run_scan(k: usize, max_n: usize, budget: usize) -> ExitCode {
    if k == 0 {
        return usage_error("--k must be at least 1");
    }
    if max_n > MAX_ENUMERATION_ORDER {
        return usage_error(format_args!(
            "scan enumerates graphs, so --max-n is limited to {MAX_ENUMERATION_ORDER}"
        ));
    }
    if budget == 0 {
        return usage_error("--budget must be positive");
    }
    let mut corpus = Corpus::default();
    for n in 3..=max_n {
        match build_corpus(CorpusMode::Enumerate, n, k, 0, 0) {
            Ok(mut c) => corpus.entries.append(&mut c.entries),
            Err(e) => return usage_error(e),
        }
    }
    let report = match conjecture_scan(k, max_n, &corpus, budget) {
        Ok(r) => r,
        Err(e) => return usage_error(e),
    };
    for record in &report.records {
        println!("{}", serde_json::to_string(record).unwrap());
    }
    let violations = report.violations();
    let unknowns = report.unknowns();
    eprintln!(
        "scanned {} graphs: {violations} violations, {unknowns} unknown (bound ceil(n/{k}))",
        report.records.len()
    );
    if violations > 0 {
        ExitCode::from(EXIT_VIOLATION)
    } else if unknowns > 0 {
        ExitCode::from(EXIT_INCONCLUSIVE)
    } else {
        ExitCode::SUCCESS
    }
}
