//! Stage-by-stage construction of a rainbow coloring with at most ⌈n/2⌉
//! colors for a 2-connected graph.
//!
//! The Hamiltonian route colors a spanning cycle with the halved pattern and
//! paints the leftover chords color 1. The ear route colors the decomposition
//! one stage at a time; each stage has a fixed pattern with at most one or
//! two free slots (a reused color, an orientation), and a small repair search
//! scans those slots in deterministic order until the stage passes its gate:
//! the stage must be rainbow connected and noncomplete, with no exceptional
//! pair at all when the stage has odd order. First candidate to pass wins, so
//! results are reproducible; exhausting the candidates is an explicit error.

use thiserror::Error;

use crate::coloring::{cycle_pattern, ConstructionTrace, EdgeColoring, Rule, TraceStep};
use crate::decomposition::{
    ear_decomposition_with_budget, DecompositionError, Ear, EarDecomposition, DEFAULT_EAR_BUDGET,
};
use crate::graph::{is_two_connected, Cycle, Graph, Subgraph};
use crate::oracle::{find_hamiltonian_cycle, OracleError, DEFAULT_HAM_BUDGET};
use crate::verify::{analyze_stage, is_rainbow_connected, RainbowReport, VerifyError};

/// Safety valve for the reorder rewind; the swap argument terminates long
/// before this, so hitting it means a bug rather than a hard instance.
const MAX_REWINDS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstructConfig {
    /// Node budget for the Hamiltonian-cycle probe; exhaustion falls back to
    /// the ear route instead of failing.
    pub ham_budget: usize,
    /// Node budget for each longest-ear search.
    pub ear_budget: usize,
}

impl Default for ConstructConfig {
    fn default() -> Self {
        ConstructConfig {
            ham_budget: DEFAULT_HAM_BUDGET,
            ear_budget: DEFAULT_EAR_BUDGET,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConstructionResult {
    pub coloring: EdgeColoring,
    pub trace: ConstructionTrace,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructError {
    #[error("graph is not 2-connected")]
    NotTwoConnected,
    #[error("this step needs an ear of length at least 2")]
    EarTooShort,
    #[error("expected an odd-length ear")]
    EvenEar,
    #[error("expected an even-length ear")]
    OddEar,
    #[error("an even ear on an odd-order stage needs the previous ear for context")]
    MissingPreviousEar,
    #[error("repair search for {rule} exhausted all {tried} candidates")]
    RepairExhausted { rule: Rule, tried: usize },
    #[error("batch coloring needs exactly 2 or at least 4 short ears, got {found}")]
    TooFewShortEars { found: usize },
    #[error("batch coloring only handles ears of length 2, got length {len}")]
    NotAShortEar { len: usize },
    #[error("short-ear foot {foot} lies outside the colored stage")]
    FeetNotInStage { foot: usize },
    #[error("edge ({u}, {v}) is not an uncolored chord of the colored subgraph")]
    NotAChord { u: usize, v: usize },
    #[error("construction failed verification: {detail}")]
    ConstructionUnverified {
        detail: String,
        /// A witness pair when the failure is a specific disconnection.
        pair: Option<(usize, usize)>,
    },
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

/// Colored stage: the subgraph built so far and its edge coloring.
#[derive(Debug, Clone)]
pub struct StageState {
    pub sub: Subgraph,
    pub coloring: EdgeColoring,
}

/// What an even ear on an odd-order stage needs to know about the ear before
/// it: the ear itself, the rule and colors of its step, and the stage state
/// it was built on.
#[derive(Debug, Clone, Copy)]
pub struct PrevEar<'a> {
    pub ear: &'a Ear,
    pub rule: Rule,
    pub fresh_colors: &'a [usize],
    pub reused: Option<usize>,
    pub before: &'a StageState,
}

#[derive(Debug)]
pub enum EvenEarOutcome {
    /// The ear was colored on top of the existing stage.
    Colored { coloring: EdgeColoring, step: TraceStep },
    /// Both this ear and the previous one were recolored from the stage
    /// before them (the previous ear keeps its fresh-run-repeated pattern;
    /// this ear wraps the previous ear's first fresh color).
    JointlyColored {
        mid_coloring: EdgeColoring,
        mid_step: TraceStep,
        coloring: EdgeColoring,
        step: TraceStep,
    },
    /// Both feet lie two stages back and the previous ear is odd: swap the
    /// two ears and redo from the earlier stage.
    ReorderBefore,
}

// ---------------------------------------------------------------------------
// gate helpers
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Gate {
    /// Rainbow connected, noncomplete, and no exceptional pair when the
    /// stage order is odd.
    NoncompleteStage,
    /// Rainbow connected only (batch short ears; the noncompleteness
    /// machinery stops once the pipeline stages are done).
    RainbowOnly,
}

fn gate_check(
    sub: &Subgraph,
    c: &EdgeColoring,
    gate: Gate,
) -> Result<(bool, RainbowReport), VerifyError> {
    let report = analyze_stage(sub, c)?;
    let pass = match gate {
        Gate::RainbowOnly => report.rainbow_connected,
        Gate::NoncompleteStage => {
            report.rainbow_connected
                && report.noncomplete
                && (sub.order() % 2 == 0 || report.exceptional_pairs.is_empty())
        }
    };
    Ok((pass, report))
}

/// A gate with no free slot failed; report the most concrete witness we have.
fn gate_failure(rule: Rule, sub: &Subgraph, report: &RainbowReport) -> ConstructError {
    let pair = report
        .failing_pairs
        .first()
        .or_else(|| report.exceptional_pairs.first())
        .copied();
    ConstructError::ConstructionUnverified {
        detail: format!(
            "stage of order {} failed the {} gate (rainbow={}, noncomplete={}, {} exceptional pairs)",
            sub.order(),
            rule,
            report.rainbow_connected,
            report.noncomplete,
            report.exceptional_pairs.len()
        ),
        pair,
    }
}

/// Candidate list for a reused-color slot: the preferred colors first, then
/// every other stage color in ascending order. The widening keeps a repair
/// total whenever any stage color works, without disturbing the preferred
/// choice when it does.
fn widen(preferred: impl Iterator<Item = usize>, k_state: usize) -> Vec<usize> {
    let mut out: Vec<usize> = preferred.collect();
    for c in 1..=k_state {
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// Color the p-th edge of the walk with `colors[p]`; returns the normalized
/// assignments in walk order.
fn assign_along(
    c: &mut EdgeColoring,
    walk: &[usize],
    colors: &[usize],
) -> Vec<(usize, usize, usize)> {
    assert_eq!(walk.len(), colors.len() + 1);
    let mut edges = Vec::with_capacity(colors.len());
    for (w, &color) in walk.windows(2).zip(colors) {
        c.assign(w[0], w[1], color);
        edges.push((w[0].min(w[1]), w[0].max(w[1]), color));
    }
    edges
}

#[allow(clippy::too_many_arguments)]
fn make_step(
    rule: Rule,
    paths: Vec<Vec<usize>>,
    edges: Vec<(usize, usize, usize)>,
    new_colors: Vec<usize>,
    reused_colors: Vec<usize>,
    sub: &Subgraph,
    report: Option<&RainbowReport>,
) -> TraceStep {
    TraceStep {
        stage: 0,
        rule,
        paths,
        edges,
        new_colors,
        reused_colors,
        stage_order: sub.order(),
        noncomplete: report.map(|r| r.noncomplete),
        exceptional_pairs: report.map(|r| r.exceptional_pairs.clone()),
    }
}

/// The halved cycle pattern as an assignment step over a closed walk.
fn color_cycle_stage(cycle: &Cycle) -> (EdgeColoring, Subgraph, Vec<(usize, usize, usize)>, Vec<usize>) {
    let mut closed = cycle.vertices().to_vec();
    closed.push(cycle.vertices()[0]);
    let mut coloring = EdgeColoring::new();
    let pattern = cycle_pattern(cycle.len());
    let edges = assign_along(&mut coloring, &closed, &pattern);
    let sub = Subgraph::from_cycle(cycle);
    let fresh = (1..=coloring.color_count()).collect();
    (coloring, sub, edges, fresh)
}

// ---------------------------------------------------------------------------
// base + first ear
// ---------------------------------------------------------------------------

/// Color the base cycle with the halved pattern, then the first ear: an even
/// ear repeats a run of fresh colors; an odd ear wraps a repaired base color
/// with the fresh run on both sides.
pub fn color_base_with_first_ear(
    base: &Cycle,
    ear: &Ear,
) -> Result<(EdgeColoring, Vec<TraceStep>), ConstructError> {
    if ear.len() < 2 {
        return Err(ConstructError::EarTooShort);
    }
    let (base_coloring, base_sub, base_edges, base_fresh) = color_cycle_stage(base);
    let (pass, report) = gate_check(&base_sub, &base_coloring, Gate::NoncompleteStage)?;
    if !pass {
        return Err(gate_failure(Rule::Lemma1, &base_sub, &report));
    }
    let mut closed = base.vertices().to_vec();
    closed.push(base.vertices()[0]);
    let base_step = make_step(
        Rule::Lemma1,
        vec![closed],
        base_edges,
        base_fresh,
        vec![],
        &base_sub,
        Some(&report),
    );

    let mut stage_sub = base_sub.clone();
    stage_sub.add_path(ear.vertices());
    let l = ear.len();
    let k_base = base_coloring.color_count();

    if l % 2 == 0 {
        let r = l / 2;
        let mut c2 = base_coloring;
        let mut fresh = Vec::with_capacity(r);
        for _ in 0..r {
            fresh.push(c2.fresh_color());
        }
        let mut colors = fresh.clone();
        colors.extend(&fresh);
        let edges = assign_along(&mut c2, ear.vertices(), &colors);
        let (pass, report) = gate_check(&stage_sub, &c2, Gate::NoncompleteStage)?;
        if !pass {
            return Err(gate_failure(Rule::BaseEven, &stage_sub, &report));
        }
        let mut step = make_step(
            Rule::BaseEven,
            vec![ear.vertices().to_vec()],
            edges,
            fresh,
            vec![],
            &stage_sub,
            Some(&report),
        );
        step.stage = 1;
        Ok((c2, vec![base_step, step]))
    } else {
        let r = (l - 1) / 2;
        let mut tried = 0;
        for x in 1..=k_base {
            tried += 1;
            let mut c2 = base_coloring.clone();
            let mut fresh = Vec::with_capacity(r);
            for _ in 0..r {
                fresh.push(c2.fresh_color());
            }
            let mut colors = fresh.clone();
            colors.push(x);
            colors.extend(&fresh);
            let edges = assign_along(&mut c2, ear.vertices(), &colors);
            let (pass, report) = gate_check(&stage_sub, &c2, Gate::NoncompleteStage)?;
            if pass {
                let mut step = make_step(
                    Rule::BaseOdd,
                    vec![ear.vertices().to_vec()],
                    edges,
                    fresh,
                    vec![x],
                    &stage_sub,
                    Some(&report),
                );
                step.stage = 1;
                return Ok((c2, vec![base_step, step]));
            }
        }
        Err(ConstructError::RepairExhausted {
            rule: Rule::BaseOdd,
            tried,
        })
    }
}

// ---------------------------------------------------------------------------
// later pipeline stages
// ---------------------------------------------------------------------------

/// Odd ear on any stage: fresh run, one repaired reused color in the middle,
/// fresh run again.
pub fn extend_odd_ear(
    state: &StageState,
    ear: &Ear,
) -> Result<(EdgeColoring, TraceStep), ConstructError> {
    let l = ear.len();
    if l == 1 {
        return Err(ConstructError::EarTooShort);
    }
    if l % 2 == 0 {
        return Err(ConstructError::EvenEar);
    }
    let r = (l - 1) / 2;
    let k = state.coloring.color_count();
    let mut stage_sub = state.sub.clone();
    stage_sub.add_path(ear.vertices());
    let mut tried = 0;
    for x in 1..=k {
        tried += 1;
        let mut c2 = state.coloring.clone();
        let mut fresh = Vec::with_capacity(r);
        for _ in 0..r {
            fresh.push(c2.fresh_color());
        }
        let mut colors = fresh.clone();
        colors.push(x);
        colors.extend(&fresh);
        let edges = assign_along(&mut c2, ear.vertices(), &colors);
        let (pass, report) = gate_check(&stage_sub, &c2, Gate::NoncompleteStage)?;
        if pass {
            let step = make_step(
                Rule::Case1,
                vec![ear.vertices().to_vec()],
                edges,
                fresh,
                vec![x],
                &stage_sub,
                Some(&report),
            );
            return Ok((c2, step));
        }
    }
    Err(ConstructError::RepairExhausted {
        rule: Rule::Case1,
        tried,
    })
}

/// Even ear. On an even-order stage the fresh run is simply repeated. On an
/// odd-order stage the handling depends on how many of the ear's feet lie
/// two stages back (outside the previous ear's interior): both (3.1), one
/// (3.2), or none (3.3).
pub fn extend_even_ear(
    state: &StageState,
    ear: &Ear,
    prev: Option<PrevEar<'_>>,
) -> Result<EvenEarOutcome, ConstructError> {
    let l = ear.len();
    if l % 2 == 1 {
        return Err(ConstructError::OddEar);
    }
    let mut stage_sub = state.sub.clone();
    stage_sub.add_path(ear.vertices());

    if state.sub.order() % 2 == 0 {
        // fresh run repeated; no free slot
        let r = l / 2;
        let mut c2 = state.coloring.clone();
        let mut fresh = Vec::with_capacity(r);
        for _ in 0..r {
            fresh.push(c2.fresh_color());
        }
        let mut colors = fresh.clone();
        colors.extend(&fresh);
        let edges = assign_along(&mut c2, ear.vertices(), &colors);
        let (pass, report) = gate_check(&stage_sub, &c2, Gate::NoncompleteStage)?;
        if !pass {
            return Err(gate_failure(Rule::Case2, &stage_sub, &report));
        }
        let step = make_step(
            Rule::Case2,
            vec![ear.vertices().to_vec()],
            edges,
            fresh,
            vec![],
            &stage_sub,
            Some(&report),
        );
        return Ok(EvenEarOutcome::Colored { coloring: c2, step });
    }

    let prev = prev.ok_or(ConstructError::MissingPreviousEar)?;
    let (a, b) = ear.feet();
    let a_deep = prev.before.sub.contains_vertex(a);
    let b_deep = prev.before.sub.contains_vertex(b);
    match (a_deep, b_deep) {
        (true, true) => extend_even_both_feet_deep(state, ear, prev, &stage_sub),
        (false, false) => extend_even_no_feet_deep(state, ear, prev, &stage_sub),
        (true, false) => extend_even_one_foot_deep(state, ear.clone(), prev, &stage_sub),
        (false, true) => extend_even_one_foot_deep(state, ear.reversed(), prev, &stage_sub),
    }
}

/// Both feet two stages back. An odd previous ear swaps places with this
/// one; an even previous ear is recolored jointly with it.
fn extend_even_both_feet_deep(
    _state: &StageState,
    ear: &Ear,
    prev: PrevEar<'_>,
    stage_sub: &Subgraph,
) -> Result<EvenEarOutcome, ConstructError> {
    if prev.ear.len() % 2 == 1 {
        return Ok(EvenEarOutcome::ReorderBefore);
    }
    // previous ear keeps the fresh-run-repeated pattern it was built with
    let rp = prev.ear.len() / 2;
    let mut mid = prev.before.coloring.clone();
    let mut prev_fresh = Vec::with_capacity(rp);
    for _ in 0..rp {
        prev_fresh.push(mid.fresh_color());
    }
    let mut mid_colors = prev_fresh.clone();
    mid_colors.extend(&prev_fresh);
    let mid_edges = assign_along(&mut mid, prev.ear.vertices(), &mid_colors);
    let mut mid_sub = prev.before.sub.clone();
    mid_sub.add_path(prev.ear.vertices());
    let (pass, mid_report) = gate_check(&mid_sub, &mid, Gate::NoncompleteStage)?;
    if !pass {
        return Err(gate_failure(prev.rule, &mid_sub, &mid_report));
    }
    let mid_step = make_step(
        prev.rule,
        vec![prev.ear.vertices().to_vec()],
        mid_edges,
        prev_fresh.clone(),
        vec![],
        &mid_sub,
        Some(&mid_report),
    );

    let x1 = prev_fresh[0];
    let s = ear.len() / 2;
    let k_mid = mid.color_count();
    let mut tried = 0;
    for oriented in [ear.clone(), ear.reversed()] {
        for x in 1..=k_mid {
            tried += 1;
            let mut c2 = mid.clone();
            let mut fresh = Vec::with_capacity(s - 1);
            for _ in 0..s - 1 {
                fresh.push(c2.fresh_color());
            }
            // (y_1..y_{s-1}, x, x_1, y_1..y_{s-1})
            let mut colors = fresh.clone();
            colors.push(x);
            colors.push(x1);
            colors.extend(&fresh);
            let edges = assign_along(&mut c2, oriented.vertices(), &colors);
            let (pass, report) = gate_check(stage_sub, &c2, Gate::NoncompleteStage)?;
            if pass {
                let step = make_step(
                    Rule::Sub31,
                    vec![oriented.vertices().to_vec()],
                    edges,
                    fresh,
                    vec![x, x1],
                    stage_sub,
                    Some(&report),
                );
                return Ok(EvenEarOutcome::JointlyColored {
                    mid_coloring: mid,
                    mid_step,
                    coloring: c2,
                    step,
                });
            }
        }
    }
    Err(ConstructError::RepairExhausted {
        rule: Rule::Sub31,
        tried,
    })
}

/// Exactly one foot two stages back; `ear` arrives oriented to start there.
/// Pattern (y_1..y_{s-1}, x_1, y, y_1..y_{s-1}) with x_1 the previous ear's
/// first fresh color and y a repaired stage color differing from the
/// previous ear's reused color.
fn extend_even_one_foot_deep(
    state: &StageState,
    ear: Ear,
    prev: PrevEar<'_>,
    stage_sub: &Subgraph,
) -> Result<EvenEarOutcome, ConstructError> {
    let s = ear.len() / 2;
    let k_state = state.coloring.color_count();
    // the previous ear's first fresh color leads; when it fails every y (its
    // edge can sit right at the shared foot) or when the previous ear
    // introduced nothing, the slot opens up to the remaining stage colors
    let x1_candidates = widen(prev.fresh_colors.first().copied().into_iter(), k_state);
    let y_candidates: Vec<usize> = (1..=k_state).filter(|&y| Some(y) != prev.reused).collect();
    let mut tried = 0;
    for &x1 in &x1_candidates {
        for &y in &y_candidates {
            tried += 1;
            let mut c2 = state.coloring.clone();
            let mut fresh = Vec::with_capacity(s - 1);
            for _ in 0..s - 1 {
                fresh.push(c2.fresh_color());
            }
            let mut colors = fresh.clone();
            colors.push(x1);
            colors.push(y);
            colors.extend(&fresh);
            let edges = assign_along(&mut c2, ear.vertices(), &colors);
            let (pass, report) = gate_check(stage_sub, &c2, Gate::NoncompleteStage)?;
            if pass {
                let step = make_step(
                    Rule::Sub32,
                    vec![ear.vertices().to_vec()],
                    edges,
                    fresh,
                    vec![x1, y],
                    stage_sub,
                    Some(&report),
                );
                return Ok(EvenEarOutcome::Colored { coloring: c2, step });
            }
        }
    }
    Err(ConstructError::RepairExhausted {
        rule: Rule::Sub32,
        tried,
    })
}

/// Both feet inside the previous ear's interior. As the one-foot case, but
/// the fixed slot scans the previous ear's fresh palette and the orientation
/// is free (orientation outer, palette middle, y inner).
fn extend_even_no_feet_deep(
    state: &StageState,
    ear: &Ear,
    prev: PrevEar<'_>,
    stage_sub: &Subgraph,
) -> Result<EvenEarOutcome, ConstructError> {
    let s = ear.len() / 2;
    let k_state = state.coloring.color_count();
    let slot_candidates = widen(prev.fresh_colors.iter().copied(), k_state);
    let mut tried = 0;
    for oriented in [ear.clone(), ear.reversed()] {
        for &xj in &slot_candidates {
            for y in 1..=k_state {
                tried += 1;
                let mut c2 = state.coloring.clone();
                let mut fresh = Vec::with_capacity(s - 1);
                for _ in 0..s - 1 {
                    fresh.push(c2.fresh_color());
                }
                let mut colors = fresh.clone();
                colors.push(xj);
                colors.push(y);
                colors.extend(&fresh);
                let edges = assign_along(&mut c2, oriented.vertices(), &colors);
                let (pass, report) = gate_check(stage_sub, &c2, Gate::NoncompleteStage)?;
                if pass {
                    let step = make_step(
                        Rule::Sub33,
                        vec![oriented.vertices().to_vec()],
                        edges,
                        fresh,
                        vec![xj, y],
                        stage_sub,
                        Some(&report),
                    );
                    return Ok(EvenEarOutcome::Colored { coloring: c2, step });
                }
            }
        }
    }
    Err(ConstructError::RepairExhausted {
        rule: Rule::Sub33,
        tried,
    })
}

// ---------------------------------------------------------------------------
// batch short ears and chords
// ---------------------------------------------------------------------------

/// Color a batch of length-2 ears whose feet all lie in the current stage.
/// Two ears: one fresh color covers the first ear and the second ear's far
/// edge, while the second ear's near edge reuses a repaired stage color
/// (orientation of the second ear is free). Four or more: two fresh colors,
/// every ear takes them in stored orientation, no free slot. The gate here
/// is rainbow connectivity only.
pub fn color_short_ears(
    state: &StageState,
    ears: &[Ear],
) -> Result<(EdgeColoring, TraceStep), ConstructError> {
    let found = ears.len();
    if found != 2 && found < 4 {
        return Err(ConstructError::TooFewShortEars { found });
    }
    for ear in ears {
        if ear.len() != 2 {
            return Err(ConstructError::NotAShortEar { len: ear.len() });
        }
        let (a, b) = ear.feet();
        for foot in [a, b] {
            if !state.sub.contains_vertex(foot) {
                return Err(ConstructError::FeetNotInStage { foot });
            }
        }
    }
    let mut stage_sub = state.sub.clone();
    for ear in ears {
        stage_sub.add_path(ear.vertices());
    }

    if found == 2 {
        let e1 = &ears[0];
        let k_state = state.coloring.color_count();
        let mut tried = 0;
        for e2 in [ears[1].clone(), ears[1].reversed()] {
            for x in 1..=k_state {
                tried += 1;
                let mut c2 = state.coloring.clone();
                let x1 = c2.fresh_color();
                let mut edges = assign_along(&mut c2, e1.vertices(), &[x1, x1]);
                edges.extend(assign_along(&mut c2, e2.vertices(), &[x, x1]));
                let (pass, report) = gate_check(&stage_sub, &c2, Gate::RainbowOnly)?;
                if pass {
                    let step = make_step(
                        Rule::Lemma3Few,
                        vec![e1.vertices().to_vec(), e2.vertices().to_vec()],
                        edges,
                        vec![x1],
                        vec![x],
                        &stage_sub,
                        Some(&report),
                    );
                    return Ok((c2, step));
                }
            }
        }
        Err(ConstructError::RepairExhausted {
            rule: Rule::Lemma3Few,
            tried,
        })
    } else {
        let mut c2 = state.coloring.clone();
        let x1 = c2.fresh_color();
        let x2 = c2.fresh_color();
        let mut edges = Vec::new();
        let mut paths = Vec::new();
        for ear in ears {
            edges.extend(assign_along(&mut c2, ear.vertices(), &[x1, x2]));
            paths.push(ear.vertices().to_vec());
        }
        let (pass, report) = gate_check(&stage_sub, &c2, Gate::RainbowOnly)?;
        if !pass {
            return Err(gate_failure(Rule::Lemma3Many, &stage_sub, &report));
        }
        let step = make_step(
            Rule::Lemma3Many,
            paths,
            edges,
            vec![x1, x2],
            vec![],
            &stage_sub,
            Some(&report),
        );
        Ok((c2, step))
    }
}

/// Chords take color 1 and never change K: any rainbow path in the colored
/// subgraph survives, and the new edge only adds routes.
pub fn color_chords(
    coloring: &EdgeColoring,
    chords: &[Ear],
) -> Result<(EdgeColoring, TraceStep), ConstructError> {
    let colored = coloring.colored_vertices();
    let mut c2 = coloring.clone();
    let mut edges = Vec::new();
    let mut paths = Vec::new();
    for chord in chords {
        let (u, v) = chord.feet();
        let (u, v) = (u.min(v), u.max(v));
        if chord.len() != 1
            || !colored.contains(&u)
            || !colored.contains(&v)
            || c2.get(u, v).is_some()
        {
            return Err(ConstructError::NotAChord { u, v });
        }
        c2.assign(u, v, 1);
        edges.push((u, v, 1));
        paths.push(vec![u, v]);
    }
    let reused = if chords.is_empty() { vec![] } else { vec![1] };
    let step = TraceStep {
        stage: 0,
        rule: Rule::Chords,
        paths,
        edges,
        new_colors: vec![],
        reused_colors: reused,
        stage_order: colored.len(),
        noncomplete: None,
        exceptional_pairs: None,
    };
    Ok((c2, step))
}

// ---------------------------------------------------------------------------
// drivers
// ---------------------------------------------------------------------------

fn final_gate(
    g: &Graph,
    coloring: EdgeColoring,
    steps: Vec<TraceStep>,
    ear_order: Vec<usize>,
) -> Result<ConstructionResult, ConstructError> {
    debug_assert!(coloring.covers(g));
    let report = is_rainbow_connected(g, &coloring)?;
    if !report.rainbow_connected {
        return Err(ConstructError::ConstructionUnverified {
            detail: "final coloring is not rainbow connected".into(),
            pair: report.failing_pairs.first().copied(),
        });
    }
    let bound = g.vertex_count().div_ceil(2);
    if coloring.color_count() > bound {
        return Err(ConstructError::ConstructionUnverified {
            detail: format!(
                "final coloring uses {} colors, above the ⌈n/2⌉ bound of {}",
                coloring.color_count(),
                bound
            ),
            pair: None,
        });
    }
    Ok(ConstructionResult {
        coloring,
        trace: ConstructionTrace { steps, ear_order },
    })
}

/// Color a validated decomposition stage by stage. Short ears (length 2) are
/// batched when there are two or more of them: with exactly two or three,
/// the last two go to the batch (a third is absorbed by the pipeline); with
/// four or more, all of them do. A reorder outcome swaps the offending pair
/// of ears, rewinds to the stage before them, and replays.
pub fn color_decomposition(
    g: &Graph,
    decomp: &EarDecomposition,
) -> Result<ConstructionResult, ConstructError> {
    decomp.validate(g)?;
    let t = decomp.long_ear_count();
    let long_ears = &decomp.ears[..t];
    let chords = &decomp.ears[t..];
    let short_count = long_ears.iter().filter(|e| e.len() == 2).count();
    let pipeline_len = if short_count <= 1 {
        t
    } else if short_count <= 3 {
        t - 2
    } else {
        t - short_count
    };
    let batch = &long_ears[pipeline_len..];

    let base_cycle = &decomp.base;
    let mut order: Vec<usize> = (0..pipeline_len).collect();
    let mut steps: Vec<TraceStep>;
    let mut snapshots: Vec<StageState>;

    if pipeline_len == 0 {
        let (coloring, sub, edges, fresh) = color_cycle_stage(base_cycle);
        let (pass, report) = gate_check(&sub, &coloring, Gate::NoncompleteStage)?;
        if !pass {
            return Err(gate_failure(Rule::Lemma1, &sub, &report));
        }
        let mut closed = base_cycle.vertices().to_vec();
        closed.push(base_cycle.vertices()[0]);
        steps = vec![make_step(
            Rule::Lemma1,
            vec![closed],
            edges,
            fresh,
            vec![],
            &sub,
            Some(&report),
        )];
        snapshots = vec![StageState { sub, coloring }];
    } else {
        let (s, n) = start_pipeline(base_cycle, &long_ears[order[0]])?;
        steps = s;
        snapshots = n;
        let mut rewinds = 0usize;
        let mut j = 2;
        while j <= pipeline_len {
            let ear = &long_ears[order[j - 1]];
            let mut next_sub = snapshots[j - 1].sub.clone();
            next_sub.add_path(ear.vertices());
            if ear.len() % 2 == 1 {
                let (c2, mut step) = extend_odd_ear(&snapshots[j - 1], ear)?;
                step.stage = j;
                steps.push(step);
                snapshots.push(StageState {
                    sub: next_sub,
                    coloring: c2,
                });
                j += 1;
            } else {
                let prev = PrevEar {
                    ear: &long_ears[order[j - 2]],
                    rule: steps[j - 1].rule,
                    fresh_colors: &steps[j - 1].new_colors,
                    reused: steps[j - 1].reused_colors.first().copied(),
                    before: &snapshots[j - 2],
                };
                match extend_even_ear(&snapshots[j - 1], ear, Some(prev))? {
                    EvenEarOutcome::Colored { coloring, mut step } => {
                        step.stage = j;
                        steps.push(step);
                        snapshots.push(StageState {
                            sub: next_sub,
                            coloring,
                        });
                        j += 1;
                    }
                    EvenEarOutcome::JointlyColored {
                        mid_coloring,
                        mut mid_step,
                        coloring,
                        mut step,
                    } => {
                        mid_step.stage = j - 1;
                        step.stage = j;
                        steps[j - 1] = mid_step;
                        snapshots[j - 1].coloring = mid_coloring;
                        steps.push(step);
                        snapshots.push(StageState {
                            sub: next_sub,
                            coloring,
                        });
                        j += 1;
                    }
                    EvenEarOutcome::ReorderBefore => {
                        rewinds += 1;
                        if rewinds > MAX_REWINDS {
                            return Err(ConstructError::ConstructionUnverified {
                                detail: "ear reordering did not settle".into(),
                                pair: None,
                            });
                        }
                        order.swap(j - 2, j - 1);
                        steps.truncate(j - 1);
                        snapshots.truncate(j - 1);
                        j -= 1;
                        if j == 1 {
                            let (s, n) = start_pipeline(base_cycle, &long_ears[order[0]])?;
                            steps = s;
                            snapshots = n;
                            j = 2;
                        }
                    }
                }
            }
            debug_assert!(snapshots
                .last()
                .map(|st| st.coloring.color_count() <= st.sub.order().div_ceil(2))
                .unwrap_or(true));
        }
    }

    let last = snapshots.last().expect("at least the base stage exists");
    let mut coloring = last.coloring.clone();
    let mut next_stage = pipeline_len + 1;
    if !batch.is_empty() {
        let (c2, mut step) = color_short_ears(last, batch)?;
        step.stage = next_stage;
        next_stage += 1;
        steps.push(step);
        coloring = c2;
    }
    if !chords.is_empty() {
        let (c2, mut step) = color_chords(&coloring, chords)?;
        step.stage = next_stage;
        steps.push(step);
        coloring = c2;
    }

    // 1-based ear indices in the order they were colored
    let mut ear_order: Vec<usize> = order.iter().map(|&i| i + 1).collect();
    ear_order.extend(pipeline_len + 1..=decomp.ear_count());
    final_gate(g, coloring, steps, ear_order)
}

fn start_pipeline(
    base: &Cycle,
    first: &Ear,
) -> Result<(Vec<TraceStep>, Vec<StageState>), ConstructError> {
    let (c1, two_steps) = color_base_with_first_ear(base, first)?;
    let base_sub = Subgraph::from_cycle(base);
    let mut base_coloring = EdgeColoring::new();
    let mut closed = base.vertices().to_vec();
    closed.push(base.vertices()[0]);
    assign_along(&mut base_coloring, &closed, &cycle_pattern(base.len()));
    let mut sub1 = base_sub.clone();
    sub1.add_path(first.vertices());
    Ok((
        two_steps,
        vec![
            StageState {
                sub: base_sub,
                coloring: base_coloring,
            },
            StageState {
                sub: sub1,
                coloring: c1,
            },
        ],
    ))
}

fn hamiltonian_route(g: &Graph, cycle: &Cycle) -> Result<ConstructionResult, ConstructError> {
    let (coloring, sub, edges, fresh) = color_cycle_stage(cycle);
    let (pass, report) = gate_check(&sub, &coloring, Gate::NoncompleteStage)?;
    if !pass {
        return Err(gate_failure(Rule::Lemma1, &sub, &report));
    }
    let mut closed = cycle.vertices().to_vec();
    closed.push(cycle.vertices()[0]);
    let mut steps = vec![make_step(
        Rule::Lemma1,
        vec![closed],
        edges,
        fresh,
        vec![],
        &sub,
        Some(&report),
    )];
    let chord_ears: Vec<Ear> = g
        .edges()
        .filter(|&(u, v)| !sub.contains_edge(u, v))
        .map(|(u, v)| Ear::new(vec![u, v]))
        .collect::<Result<_, _>>()?;
    let mut coloring = coloring;
    if !chord_ears.is_empty() {
        let (c2, mut step) = color_chords(&coloring, &chord_ears)?;
        step.stage = 1;
        steps.push(step);
        coloring = c2;
    }
    final_gate(g, coloring, steps, vec![])
}

/// Construct a rainbow coloring with at most ⌈n/2⌉ colors. A Hamiltonian
/// graph takes the spanning-cycle route (budget exhaustion on the cycle
/// probe silently falls back); everything else goes through the ear
/// decomposition pipeline.
pub fn construct_coloring(g: &Graph) -> Result<ConstructionResult, ConstructError> {
    construct_coloring_with(g, &ConstructConfig::default())
}

pub fn construct_coloring_with(
    g: &Graph,
    cfg: &ConstructConfig,
) -> Result<ConstructionResult, ConstructError> {
    if !is_two_connected(g) {
        return Err(ConstructError::NotTwoConnected);
    }
    match find_hamiltonian_cycle(g, cfg.ham_budget) {
        Ok(Some(cycle)) => hamiltonian_route(g, &cycle),
        Ok(None) => ear_route(g, cfg),
        Err(OracleError::BudgetExceeded { .. }) => ear_route(g, cfg),
        Err(_) => ear_route(g, cfg),
    }
}

fn ear_route(g: &Graph, cfg: &ConstructConfig) -> Result<ConstructionResult, ConstructError> {
    let decomp = ear_decomposition_with_budget(g, cfg.ear_budget)?;
    color_decomposition(g, &decomp)
}
