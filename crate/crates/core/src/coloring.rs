//! Edge colorings and the audit trail left by the coloring construction.
//!
//! Color ids are positive integers; a finished coloring always uses the
//! contiguous palette `1..=K`. [`ConstructionTrace`] records how each part of
//! the graph was colored: one step per colored stage, tagged with the rule
//! that fired, the fresh colors the step introduced, and the colors it chose
//! to reuse.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

/// Errors raised while building or decoding a coloring.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    /// The same edge is assigned twice in a serialized document.
    #[error("edge ({u}, {v}) appears more than once")]
    DuplicateEdge { u: usize, v: usize },
    /// An edge joins a vertex to itself.
    #[error("edge ({u}, {u}) is a loop")]
    LoopEdge { u: usize },
    /// A color id lies outside the declared palette.
    #[error("color {color} on edge ({u}, {v}) is outside 1..={declared}")]
    ColorOutOfRange {
        u: usize,
        v: usize,
        color: usize,
        declared: usize,
    },
    /// A vertex id lies outside the declared vertex range.
    #[error("vertex {v} is outside 0..{n}")]
    VertexOutOfRange { v: usize, n: usize },
}

fn norm(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

// ---------------------------------------------------------------------------
// EdgeColoring
// ---------------------------------------------------------------------------

/// Map from unordered edges to color ids.
///
/// `color_count` tracks the palette size `K`; colorings produced by the
/// construction keep the palette contiguous (`1..=K`, checkable with
/// [`EdgeColoring::contiguous`]).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeColoring {
    assignment: BTreeMap<(usize, usize), usize>,
    color_count: usize,
}

impl EdgeColoring {
    pub fn new() -> Self {
        Self::default()
    }

    /// Allocate the next unused color id and grow the palette.
    pub fn fresh_color(&mut self) -> usize {
        self.color_count += 1;
        self.color_count
    }

    /// Assign (or overwrite) the color of the edge `{u, v}`.
    ///
    /// Panics on loops or on color id 0; growing the palette through a large
    /// id is allowed so that colorings can be rebuilt in any edge order.
    pub fn assign(&mut self, u: usize, v: usize, color: usize) {
        assert!(u != v, "loop edge ({u}, {u}) cannot be colored");
        assert!(color >= 1, "color ids start at 1");
        self.color_count = self.color_count.max(color);
        self.assignment.insert(norm(u, v), color);
    }

    pub fn get(&self, u: usize, v: usize) -> Option<usize> {
        self.assignment.get(&norm(u, v)).copied()
    }

    /// Palette size `K`.
    pub fn color_count(&self) -> usize {
        self.color_count
    }

    pub fn edge_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Colored edges in sorted order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.assignment.iter().map(|(&e, &c)| (e, c))
    }

    /// True when every edge of `g` has a color.
    pub fn covers(&self, g: &Graph) -> bool {
        g.edges().all(|(u, v)| self.get(u, v).is_some())
    }

    /// Vertices incident to at least one colored edge.
    pub fn colored_vertices(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for &(u, v) in self.assignment.keys() {
            out.insert(u);
            out.insert(v);
        }
        out
    }

    /// True when the used color ids are exactly `1..=K`.
    pub fn contiguous(&self) -> bool {
        let used: BTreeSet<usize> = self.assignment.values().copied().collect();
        used.len() == self.color_count && used.iter().all(|&c| c >= 1 && c <= self.color_count)
    }
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------

/// Serialized coloring: `{"n":…,"colors":…,"edges":[[u,v,color],…]}` with the
/// edge list sorted by `(u, v)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringDocument {
    pub n: usize,
    pub colors: usize,
    pub edges: Vec<(usize, usize, usize)>,
}

impl ColoringDocument {
    pub fn from_coloring(n: usize, c: &EdgeColoring) -> Self {
        ColoringDocument {
            n,
            colors: c.color_count(),
            edges: c.iter().map(|((u, v), color)| (u, v, color)).collect(),
        }
    }

    /// Rebuild the coloring, validating vertex ranges, loops, duplicates and
    /// the declared palette. The palette size of the result is the declared
    /// `colors`, even when not every id is used.
    pub fn to_coloring(&self) -> Result<EdgeColoring, ColoringError> {
        let mut c = EdgeColoring::new();
        for &(u, v, color) in &self.edges {
            if u == v {
                return Err(ColoringError::LoopEdge { u });
            }
            for w in [u, v] {
                if w >= self.n {
                    return Err(ColoringError::VertexOutOfRange { v: w, n: self.n });
                }
            }
            if color < 1 || color > self.colors {
                return Err(ColoringError::ColorOutOfRange {
                    u,
                    v,
                    color,
                    declared: self.colors,
                });
            }
            if c.get(u, v).is_some() {
                return Err(ColoringError::DuplicateEdge { u, v });
            }
            c.assign(u, v, color);
        }
        c.color_count = self.colors;
        Ok(c)
    }
}

// ---------------------------------------------------------------------------
// construction trace
// ---------------------------------------------------------------------------

/// Which coloring rule produced a trace step.
///
/// The names are stable identifiers used in serialized traces and in the
/// command-line output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    /// Cyclic two-block pattern along a spanning or base cycle.
    #[serde(rename = "Lemma1")]
    Lemma1,
    /// First ear over the base, even length: the fresh run repeated.
    #[serde(rename = "Base-t1-even")]
    BaseEven,
    /// First ear over the base, odd length: fresh runs around a reused middle.
    #[serde(rename = "Base-t1-odd")]
    BaseOdd,
    /// Odd ear on a later stage.
    #[serde(rename = "Case1")]
    Case1,
    /// Even ear on an even-order stage.
    #[serde(rename = "Case2")]
    Case2,
    /// Even ear on an odd-order stage, feet disjoint from the previous ear's
    /// interior; recolors the previous ear jointly (or reorders).
    #[serde(rename = "Sub3.1")]
    Sub31,
    /// Even ear on an odd-order stage, one foot inside the previous ear.
    #[serde(rename = "Sub3.2")]
    Sub32,
    /// Even ear on an odd-order stage, both feet inside the previous ear.
    #[serde(rename = "Sub3.3")]
    Sub33,
    /// Final batch of two length-2 ears.
    #[serde(rename = "Lemma3-few")]
    Lemma3Few,
    /// Final batch of four or more length-2 ears.
    #[serde(rename = "Lemma3-many")]
    Lemma3Many,
    /// Leftover single-edge ears, all colored 1.
    #[serde(rename = "Chords")]
    Chords,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Lemma1 => "Lemma1",
            Rule::BaseEven => "Base-t1-even",
            Rule::BaseOdd => "Base-t1-odd",
            Rule::Case1 => "Case1",
            Rule::Case2 => "Case2",
            Rule::Sub31 => "Sub3.1",
            Rule::Sub32 => "Sub3.2",
            Rule::Sub33 => "Sub3.3",
            Rule::Lemma3Few => "Lemma3-few",
            Rule::Lemma3Many => "Lemma3-many",
            Rule::Chords => "Chords",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One step of the construction: a rule applied to one stage.
///
/// Batch rules (`Lemma3-*`, `Chords`) list every path they colored; the
/// joint rule `Sub3.1` appears twice, once per recolored ear. When the rule
/// requires the stage to stay noncomplete, the verifier's verdict and the
/// exceptional pairs it found are recorded for audit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    /// Stage index: 0 for the base (or a spanning cycle), then one per ear.
    pub stage: usize,
    pub rule: Rule,
    /// Vertex runs colored by this step.
    pub paths: Vec<Vec<usize>>,
    /// Edge assignments written by this step.
    pub edges: Vec<(usize, usize, usize)>,
    pub new_colors: Vec<usize>,
    pub reused_colors: Vec<usize>,
    /// Number of vertices of the stage after this step.
    pub stage_order: usize,
    /// Verifier verdict for stages that must stay noncomplete.
    pub noncomplete: Option<bool>,
    /// Exceptional pairs of the stage, when the verdict was computed.
    pub exceptional_pairs: Option<Vec<(usize, usize)>>,
}

/// Ordered record of every construction step.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ConstructionTrace {
    pub steps: Vec<TraceStep>,
    /// Processing order of the decomposition's ears (1-based indices); this
    /// differs from `1..=k` when a reorder swapped two ears.
    pub ear_order: Vec<usize>,
}

impl ConstructionTrace {
    pub fn rules(&self) -> Vec<Rule> {
        self.steps.iter().map(|s| s.rule).collect()
    }

    pub fn has_rule(&self, rule: Rule) -> bool {
        self.steps.iter().any(|s| s.rule == rule)
    }
}

// ---------------------------------------------------------------------------
// cycle patterns
// ---------------------------------------------------------------------------

/// Color sequence for the edges of a cycle of length `m`: edge `i` (1-based)
/// gets color `i` while `i ≤ ⌈m/2⌉`, then the run repeats.
pub fn cycle_pattern(m: usize) -> Vec<usize> {
    assert!(m >= 3, "a cycle has at least 3 edges");
    let half = m.div_ceil(2);
    (1..=m).map(|i| if i <= half { i } else { i - half }).collect()
}

/// Apply [`cycle_pattern`] along a closed vertex walk.
///
/// Edge `i` joins `vertices[i-1]` to `vertices[i % m]`. The vertices must be
/// pairwise distinct.
pub fn color_along_cycle(vertices: &[usize]) -> EdgeColoring {
    let m = vertices.len();
    let pattern = cycle_pattern(m);
    let mut c = EdgeColoring::new();
    for i in 0..m {
        let u = vertices[i];
        let v = vertices[(i + 1) % m];
        c.assign(u, v, pattern[i]);
    }
    debug_assert!(c.contiguous());
    c
}

/// Color the standard cycle `0-1-…-(m-1)-0` with [`cycle_pattern`];
/// the palette size is `⌈m/2⌉`.
pub fn color_cycle(m: usize) -> EdgeColoring {
    let vertices: Vec<usize> = (0..m).collect();
    color_along_cycle(&vertices)
}
