//! Command dispatch for the `brickcurve` binary.
//!
//! [`run`] takes the argument list and returns what the process would print
//! and its exit code, so the whole front end can be driven from tests.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use brickcurve::brick::build_brick_diagram;
use brickcurve::corpus::{corpus_verify, CorpusParams};
use brickcurve::pipeline::{
    prepare, run_pipeline, Failure, Options, PipelineResult, Stage, EXIT_INPUT, EXIT_OK,
    EXIT_PRECONDITION, EXIT_VERIFICATION,
};
use brickcurve::render::{render_ascii, render_svg};
use brickcurve::rewrite::{invariant_signature, reduce_fully};
use brickcurve::slopes::{admissible_multislope, parse_multislope};
use brickcurve::track::{realize_slope, validate_track, homology_of, Slope, TorusTrack};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "brickcurve", version, about = "Brick diagrams and surgery slopes for positive braids")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Reduce the word to a minimal one before building.
    #[arg(long, global = true)]
    pub auto_reduce: bool,
    /// Strand count when the word has no `m=` prefix.
    #[arg(long, global = true, value_name = "M")]
    pub strands: Option<usize>,
    /// Also write an SVG picture here.
    #[arg(long, global = true, value_name = "PATH")]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WordArg {
    /// Letters such as `1 1 1`, optionally prefixed `m=N;`.
    #[arg(required = true, num_args = 1..)]
    pub word: Vec<String>,
}

impl WordArg {
    fn text(&self) -> String {
        self.word.join(" ")
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full run: construction, checks, crossings, slope intervals.
    Analyze(WordArg),
    /// The curve family and the construction log.
    Curves(WordArg),
    /// Property checks only; exits 4 when any fails.
    Verify(WordArg),
    /// Admissible slope intervals, and a decision for `--multislope`.
    Slopes {
        #[command(flatten)]
        word: WordArg,
        /// Comma-separated slopes, one per component, e.g. `1/2,-3`.
        #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
        multislope: Option<String>,
    },
    /// Reduce to a minimal word and print the move trace.
    Reduce(WordArg),
    /// Train tracks on the torus.
    Track {
        #[command(subcommand)]
        action: TrackAction,
    },
    /// Text picture of the diagram (and SVG with `--svg`).
    Render(WordArg),
    /// Run a seeded random corpus through the pipeline.
    Corpus {
        #[arg(long, default_value_t = 7, value_name = "N")]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 8)]
        max_strands: usize,
        #[arg(long, default_value_t = 40)]
        max_len: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum TrackAction {
    /// Find a positive measure carrying the given slope.
    Realize {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        slope: String,
    },
    /// Validate a track file.
    Check { file: PathBuf },
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn error(code: i32, message: impl Into<String>) -> Self {
        Outcome { stdout: String::new(), stderr: message.into() + "\n", code }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome::error(code, text.trim_end())
            }
        }
    }
}

pub fn execute(cli: &Cli) -> Outcome {
    let opts = Options { auto_reduce: cli.auto_reduce, strands: cli.strands, mutation: None };
    match &cli.command {
        Command::Analyze(w) => with_pipeline(cli, &w.text(), &opts, |r| {
            if cli.json {
                to_json(r)
            } else {
                analyze_text(r)
            }
        }),
        Command::Curves(w) => with_pipeline(cli, &w.text(), &opts, |r| {
            if cli.json {
                to_json(&CurvesOut {
                    q: &r.q,
                    k: r.k,
                    s: r.s,
                    row_assignment: &r.family.row_assignment,
                    curves: &r.family.curves,
                    log: &r.log,
                })
            } else {
                curves_text(r)
            }
        }),
        Command::Verify(w) => with_pipeline(cli, &w.text(), &opts, |r| {
            if cli.json {
                to_json(&r.properties)
            } else {
                let mut s = String::new();
                for (name, c) in r.properties.checks() {
                    let _ = writeln!(s, "{name}: {}", if c.pass { "pass" } else { "FAIL" });
                }
                for p in &r.problems {
                    let _ = writeln!(s, "problem: {p}");
                }
                s
            }
        }),
        Command::Slopes { word, multislope } => slopes(cli, &word.text(), &opts, multislope.as_deref()),
        Command::Reduce(w) => reduce(cli, &w.text()),
        Command::Track { action } => track(cli, action),
        Command::Render(w) => render(cli, &w.text(), &opts),
        Command::Corpus { seed, count, max_strands, max_len } => {
            let params = CorpusParams {
                max_strands: *max_strands,
                max_len: *max_len,
                count: *count,
                seed: *seed,
            };
            let summary = corpus_verify(&params, None);
            let code = if summary.all_clean() { EXIT_OK } else { EXIT_VERIFICATION };
            let stdout = if cli.json {
                to_json(&summary)
            } else {
                let mut s = format!(
                    "words: {}\naccepted: {}\nclean: {}\n",
                    summary.total, summary.accepted, summary.clean
                );
                for (code, n) in &summary.rejected {
                    let _ = writeln!(s, "rejected with exit {code}: {n}");
                }
                for f in &summary.failures {
                    let _ = writeln!(s, "failure: {} -> {}: {}", f.word, f.reduced, f.problems.join("; "));
                }
                s
            };
            Outcome { stdout, stderr: String::new(), code }
        }
    }
}

fn failure_outcome(cli: &Cli, f: &Failure) -> Outcome {
    if cli.json {
        Outcome { stdout: to_json(f), stderr: String::new(), code: f.exit_code }
    } else {
        Outcome::error(f.exit_code, f.to_string())
    }
}

fn write_svg(path: &Path, svg: &str) -> Result<(), Outcome> {
    std::fs::write(path, svg)
        .map_err(|e| Outcome::error(EXIT_INPUT, format!("cannot write {}: {e}", path.display())))
}

fn with_pipeline(
    cli: &Cli,
    text: &str,
    opts: &Options,
    show: impl FnOnce(&PipelineResult) -> String,
) -> Outcome {
    let r = match run_pipeline(text, opts) {
        Ok(r) => r,
        Err(f) => return failure_outcome(cli, &f),
    };
    if let Some(path) = &cli.svg {
        let d = r.diagram.as_ref().expect("successful runs keep the diagram");
        if let Err(o) = write_svg(path, &render_svg(d, Some(&r.family), r.crossings.as_ref())) {
            return o;
        }
    }
    let code = r.exit_code();
    let stdout = show(&r);
    let stderr = r.problems.iter().map(|p| format!("{p}\n")).collect();
    Outcome { stdout, stderr, code }
}

#[derive(Serialize)]
struct CurvesOut<'a> {
    q: &'a brickcurve::brick::RowPoint,
    k: usize,
    s: usize,
    row_assignment: &'a [usize],
    curves: &'a [brickcurve::curves::Curve],
    log: &'a brickcurve::curves::EventLog,
}

fn analyze_text(r: &PipelineResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "input: {}", r.input);
    let _ = writeln!(s, "word: {}", r.word);
    let _ = writeln!(s, "reductions: {}", r.reductions.len());
    let _ = writeln!(s, "genera: {:?}", r.stats.genera());
    let _ = writeln!(s, "initial point: row {}, coord {}", r.q.row, r.q.coord);
    let _ = writeln!(s, "curves: {} (s = {})", r.k, r.s);
    let failed = r.properties.failures();
    if failed.is_empty() {
        let _ = writeln!(s, "checks: all pass");
    } else {
        let _ = writeln!(s, "checks failed: {}", failed.join(", "));
    }
    if let Some(c) = &r.crossings {
        let _ = writeln!(s, "type X crossings: {}", c.x_count());
    }
    for i in &r.intervals {
        let _ = writeln!(s, "component {}: slopes in (-inf, {})", i.component, i.upper);
    }
    s
}

fn curves_text(r: &PipelineResult) -> String {
    let mut s = format!("q = ({}, {}), k = {}, s = {}\n", r.q.row, r.q.coord, r.k, r.s);
    for (i, c) in r.family.curves.iter().enumerate() {
        let _ = writeln!(s, "curve {} (row {}):", i + 1, r.family.row_assignment[i]);
        for e in &c.edges {
            let _ = writeln!(s, "  {}", serde_json::to_string(e).expect("edges serialize"));
        }
    }
    s
}

#[derive(Serialize)]
struct SlopesOut<'a> {
    intervals: &'a [brickcurve::pipeline::Interval],
    #[serde(skip_serializing_if = "Option::is_none")]
    decision: Option<brickcurve::slopes::MultislopeDecision>,
}

fn slopes(cli: &Cli, text: &str, opts: &Options, multislope: Option<&str>) -> Outcome {
    let r = match run_pipeline(text, opts) {
        Ok(r) => r,
        Err(f) => return failure_outcome(cli, &f),
    };
    let decision = match multislope {
        None => None,
        Some(list) => {
            let parsed = parse_multislope(list).and_then(|s| admissible_multislope(&r.stats, &s));
            match parsed {
                Ok(d) => Some(d),
                Err(e) => return Outcome::error(EXIT_INPUT, e.to_string()),
            }
        }
    };
    let code = r.exit_code();
    let stderr = r.problems.iter().map(|p| format!("{p}\n")).collect();
    let stdout = if cli.json {
        to_json(&SlopesOut { intervals: &r.intervals, decision })
    } else {
        let mut s = String::new();
        for i in &r.intervals {
            let _ = writeln!(s, "component {}: (-inf, {})", i.component, i.upper);
        }
        if let Some(d) = decision {
            for c in &d.components {
                let cert = c
                    .certificate
                    .as_ref()
                    .map(|c| format!(" certificate a={} b={}", c.a, c.b))
                    .unwrap_or_default();
                let verdict = if c.admissible { "admissible" } else { "not admissible" };
                let _ = writeln!(s, "component {}: slope {} {verdict}{cert}", c.component, c.slope);
            }
            let _ = writeln!(s, "multislope: {}", if d.admissible { "admissible" } else { "not admissible" });
        }
        s
    };
    Outcome { stdout, stderr, code }
}

#[derive(Serialize)]
struct ReduceOut<'a> {
    input: &'a brickcurve::braid::BraidWord,
    output: &'a brickcurve::braid::BraidWord,
    signature: brickcurve::rewrite::Signature,
    reductions: &'a [brickcurve::rewrite::Reduction],
}

fn reduce(cli: &Cli, text: &str) -> Outcome {
    let opts = Options { auto_reduce: false, strands: cli.strands, mutation: None };
    let (input, _, _) = match prepare(text, &opts) {
        Ok(p) => p,
        Err(f) => return failure_outcome(cli, &f),
    };
    let (output, reductions) = match reduce_fully(&input) {
        Ok(r) => r,
        Err(e) => {
            let f = Failure { stage: Stage::Reduce, exit_code: EXIT_VERIFICATION, message: e.to_string() };
            return failure_outcome(cli, &f);
        }
    };
    let signature = invariant_signature(&output);
    if cli.json {
        Outcome::ok(to_json(&ReduceOut { input: &input, output: &output, signature, reductions: &reductions }))
    } else {
        let mut s = format!("input: {input}\n");
        for r in &reductions {
            let _ = writeln!(s, "{:?}: {} -> {} ({} moves)", r.kind, r.input, r.output, r.trace.len());
        }
        let _ = writeln!(s, "output: {output}");
        Outcome::ok(s)
    }
}

fn load_track(path: &Path) -> Result<TorusTrack, Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Outcome::error(EXIT_INPUT, format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Outcome::error(EXIT_INPUT, format!("bad track file {}: {e}", path.display())))
}

#[derive(Serialize)]
struct RealizeOut {
    slope: String,
    realizable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    homology: Option<[String; 2]>,
}

fn track(cli: &Cli, action: &TrackAction) -> Outcome {
    match action {
        TrackAction::Check { file } => {
            let t = match load_track(file) {
                Ok(t) => t,
                Err(o) => return o,
            };
            match validate_track(&t) {
                Ok(rep) if cli.json => Outcome::ok(to_json(&rep)),
                Ok(rep) => Outcome::ok(format!(
                    "switches: {}\nbranches: {}\nfaces: {}\nall bigons: {}\n",
                    rep.vertices, rep.edges, rep.faces, rep.all_bigons
                )),
                Err(e) => Outcome::error(EXIT_PRECONDITION, e.to_string()),
            }
        }
        TrackAction::Realize { file, slope } => {
            let t = match load_track(file) {
                Ok(t) => t,
                Err(o) => return o,
            };
            let s: Slope = match slope.parse() {
                Ok(s) => s,
                Err(_) => return Outcome::error(EXIT_INPUT, format!("bad slope {slope:?}")),
            };
            let mu = match realize_slope(&t, &s) {
                Ok(mu) => mu,
                Err(e) => return Outcome::error(EXIT_PRECONDITION, e.to_string()),
            };
            let out = match &mu {
                None => RealizeOut { slope: s.to_string(), realizable: false, weights: None, homology: None },
                Some(mu) => {
                    let h = homology_of(&t, mu).expect("measure comes from this track");
                    RealizeOut {
                        slope: s.to_string(),
                        realizable: true,
                        weights: Some(mu.weights.iter().map(|w| w.to_string()).collect()),
                        homology: Some([h[0].to_string(), h[1].to_string()]),
                    }
                }
            };
            if cli.json {
                Outcome::ok(to_json(&out))
            } else if let (Some(w), Some(h)) = (&out.weights, &out.homology) {
                Outcome::ok(format!(
                    "slope {}: carried\nweights: {}\nclass: ({}, {})\n",
                    out.slope,
                    w.join(" "),
                    h[0],
                    h[1]
                ))
            } else {
                Outcome::ok(format!("slope {}: not carried\n", out.slope))
            }
        }
    }
}

fn render(cli: &Cli, text: &str, opts: &Options) -> Outcome {
    match run_pipeline(text, opts) {
        Ok(r) => {
            let d = r.diagram.as_ref().expect("successful runs keep the diagram");
            if let Some(path) = &cli.svg {
                if let Err(o) = write_svg(path, &render_svg(d, Some(&r.family), r.crossings.as_ref())) {
                    return o;
                }
            }
            let stderr = r.problems.iter().map(|p| format!("{p}\n")).collect();
            Outcome {
                stdout: render_ascii(d, Some(&r.family), r.crossings.as_ref()),
                stderr,
                code: r.exit_code(),
            }
        }
        Err(f) => {
            // Past parsing there is still a diagram worth drawing.
            let word = match prepare(text, opts) {
                Ok((_, w, _)) if w.strands() >= 2 => w,
                _ => return failure_outcome(cli, &f),
            };
            let d = build_brick_diagram(&word);
            if let Some(path) = &cli.svg {
                if let Err(o) = write_svg(path, &render_svg(&d, None, None)) {
                    return o;
                }
            }
            Outcome { stdout: render_ascii(&d, None, None), stderr: f.to_string() + "\n", code: f.exit_code }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Outcome {
        run(std::iter::once("brickcurve").chain(args.iter().copied()))
    }

    #[test]
    fn analyze_trefoil() {
        let o = go(&["analyze", "1", "1", "1"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(o.stdout.contains("checks: all pass"));
        assert!(o.stdout.contains("component 0: slopes in (-inf, 1)"));
    }

    #[test]
    fn hopf_exit_code() {
        let o = go(&["analyze", "1 1"]);
        assert_eq!(o.code, 2);
        assert!(o.stderr.contains("no component of positive genus"));
    }

    #[test]
    fn bad_letters() {
        assert_eq!(go(&["verify", "1", "x"]).code, 1);
        assert_eq!(go(&["analyze", "1", "-2"]).code, 1);
    }

    #[test]
    fn multislope_decision() {
        let o = go(&["slopes", "1 1 1", "--multislope", "1/2", "--json"]);
        assert_eq!(o.code, 0);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["decision"]["admissible"], true);
        let o = go(&["slopes", "1 1 1", "--multislope", "1"]);
        assert!(o.stdout.contains("not admissible"));
        assert_eq!(go(&["slopes", "1 1 1", "--multislope", "1,2"]).code, 1);
    }

    #[test]
    fn reduce_outputs_trace() {
        let o = go(&["reduce", "--json", "1 2 2 2"]);
        assert_eq!(o.code, 0);
        let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["reductions"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn render_falls_back_to_diagram() {
        let o = go(&["render", "1 2 2 2"]);
        assert_eq!(o.code, 3);
        assert_eq!(o.stdout.lines().count(), 5);
        assert!(!o.stdout.contains('='));
    }
}
