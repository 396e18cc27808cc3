//! Parse → precheck → reduce → build → construct → verify → classify → slopes.

use serde::{Deserialize, Serialize};

use crate::braid::{
    component_stats, components_of, parse_braid_with, precheck, BraidWord, ComponentStats,
    PrecheckReport,
};
use crate::brick::{build_brick_diagram, BrickDiagram, RowPoint};
use crate::curves::{
    choose_initial_point, run_construction_with, ConstructionError, CurveFamily, EventLog,
    Mutation,
};
use crate::rewrite::{reduce_fully, Reduction};
use crate::slopes::{classify_crossings, select_x_points, slope_bounds, CrossingReport, XPoint};
use crate::verify::{check_properties, PropertyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_NON_MINIMAL: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Options {
    pub auto_reduce: bool,
    pub strands: Option<usize>,
    pub mutation: Option<Mutation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Parse,
    Precheck,
    Reduce,
    Construct,
    Verify,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub stage: Stage,
    pub exit_code: i32,
    pub message: String,
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} stage: {}", self.stage, self.message)
    }
}

fn fail(stage: Stage, exit_code: i32, message: impl Into<String>) -> Failure {
    Failure { stage, exit_code, message: message.into() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub component: usize,
    /// Admissible slopes are the rationals below this bound.
    pub upper: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineResult {
    pub input: String,
    pub word: String,
    pub reductions: Vec<Reduction>,
    pub precheck: PrecheckReport,
    pub stats: ComponentStats,
    pub q: RowPoint,
    pub k: usize,
    pub s: usize,
    pub family: CurveFamily,
    pub log: EventLog,
    pub properties: PropertyReport,
    pub crossings: Option<CrossingReport>,
    pub x_points: Option<Vec<XPoint>>,
    pub intervals: Vec<Interval>,
    /// Every failed check, empty on a clean run.
    pub problems: Vec<String>,
    #[serde(skip)]
    pub diagram: Option<BrickDiagram>,
    #[serde(skip)]
    pub braid: Option<BraidWord>,
}

impl PipelineResult {
    pub fn exit_code(&self) -> i32 {
        if self.problems.is_empty() {
            EXIT_OK
        } else {
            EXIT_VERIFICATION
        }
    }
}

/// Parses and, when asked, reduces the word; shared by every verb.
pub fn prepare(
    text: &str,
    opts: &Options,
) -> Result<(BraidWord, BraidWord, Vec<Reduction>), Failure> {
    let input = parse_braid_with(text, opts.strands)
        .map_err(|e| fail(Stage::Parse, EXIT_INPUT, e.to_string()))?;
    let (word, reductions) = if opts.auto_reduce {
        reduce_fully(&input).map_err(|e| fail(Stage::Reduce, EXIT_VERIFICATION, e.to_string()))?
    } else {
        (input.clone(), Vec::new())
    };
    Ok((input, word, reductions))
}

fn construction_failure(e: ConstructionError) -> Failure {
    let code = match e {
        ConstructionError::NoNontrivialComponent => EXIT_PRECONDITION,
        ConstructionError::NonMinimalInput { .. } => EXIT_NON_MINIMAL,
        _ => EXIT_VERIFICATION,
    };
    fail(Stage::Construct, code, e.to_string())
}

pub fn run_pipeline(text: &str, opts: &Options) -> Result<PipelineResult, Failure> {
    let (input, word, reductions) = prepare(text, opts)?;
    run_word(&input, word, reductions, opts)
}

pub fn run_word(
    input: &BraidWord,
    word: BraidWord,
    reductions: Vec<Reduction>,
    opts: &Options,
) -> Result<PipelineResult, Failure> {
    let no_genus = || fail(Stage::Precheck, EXIT_PRECONDITION, "no component of positive genus");
    if word.strands() < 2 {
        return Err(no_genus());
    }
    let parts = components_of(&word);
    let stats = component_stats(&word, &parts)
        .map_err(|e| fail(Stage::Precheck, EXIT_PRECONDITION, e.to_string()))?;
    let pre = precheck(&word, &stats);
    if !pre.nonsplit {
        return Err(fail(
            Stage::Precheck,
            EXIT_PRECONDITION,
            format!("split diagram: generators {:?} never occur", pre.missing_generators),
        ));
    }
    if !pre.has_nontrivial {
        return Err(no_genus());
    }
    let d = build_brick_diagram(&word);
    let q = choose_initial_point(&d, &stats).map_err(construction_failure)?;
    let (family, log) = run_construction_with(&d, q, opts.mutation).map_err(construction_failure)?;
    let properties = check_properties(&family, &d);
    let mut problems: Vec<String> = properties
        .checks()
        .iter()
        .filter(|(_, c)| !c.pass)
        .map(|(name, c)| {
            let w = c.witness.as_ref().map(|w| serde_json::to_string(w).unwrap()).unwrap_or_default();
            format!("{name} failed: {w}")
        })
        .collect();
    let crossings = match classify_crossings(&d, &log, &parts) {
        Ok(r) => {
            if r.x_count() != word.strands() {
                problems.push(format!("{} Type X crossings on {} strands", r.x_count(), word.strands()));
            }
            if !r.identities_hold(&stats) {
                problems.push("per-component X count or realized slope mismatch".into());
            }
            Some(r)
        }
        Err(e) => {
            problems.push(e.to_string());
            None
        }
    };
    let x_points = match select_x_points(&d, &log, &parts) {
        Ok(p) => Some(p),
        Err(e) => {
            problems.push(format!("x-points: {e}"));
            None
        }
    };
    let intervals = slope_bounds(&stats)
        .into_iter()
        .enumerate()
        .map(|(component, upper)| Interval { component, upper })
        .collect();
    Ok(PipelineResult {
        input: input.to_string(),
        word: word.to_string(),
        reductions,
        precheck: pre,
        stats,
        q,
        k: family.k(),
        s: family.s,
        family,
        log,
        properties,
        crossings,
        x_points,
        intervals,
        problems,
        diagram: Some(d),
        braid: Some(word),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_passes() {
        let r = run_pipeline("1 1 1", &Options::default()).unwrap();
        assert_eq!(r.exit_code(), EXIT_OK, "{:?}", r.problems);
        assert_eq!(r.k, 1);
        assert_eq!(r.intervals, vec![Interval { component: 0, upper: 1 }]);
    }

    #[test]
    fn hopf_is_rejected() {
        let e = run_pipeline("1 1", &Options::default()).unwrap_err();
        assert_eq!(e.exit_code, EXIT_PRECONDITION);
        assert_eq!(e.message, "no component of positive genus");
    }

    #[test]
    fn bad_input() {
        let e = run_pipeline("1 -2", &Options::default()).unwrap_err();
        assert_eq!(e.exit_code, EXIT_INPUT);
    }

    #[test]
    fn non_minimal_without_reduction() {
        let e = run_pipeline("1 2 2 2", &Options::default()).unwrap_err();
        assert_eq!(e.exit_code, EXIT_NON_MINIMAL);
        let opts = Options { auto_reduce: true, ..Options::default() };
        let r = run_pipeline("1 2 2 2", &opts).unwrap();
        assert_eq!(r.exit_code(), EXIT_OK);
        assert_eq!(r.word, "m=2; 1 1 1");
        assert_eq!(r.reductions.len(), 1);
    }
}
