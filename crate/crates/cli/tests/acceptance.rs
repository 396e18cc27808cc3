//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use brickcurve::braid::BraidWord;
use brickcurve::corpus::{corpus_verify, random_word, CorpusParams};
use brickcurve::curves::{CurveEdge, Mutation};
use brickcurve::pipeline::{run_pipeline, Interval, Options, EXIT_PRECONDITION};
use brickcurve::rewrite::{
    invariant_signature, match_strand2_shape, reduce_single_occurrence, reduce_strand2,
    validate_trace, Reduction, SignedWord,
};
use brickcurve::track::{homology_of, proportional, realize_slope, two_branch_track, Slope};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TREFOIL_BUDGET: Duration = Duration::from_millis(100);
const CORPUS_BUDGET: Duration = Duration::from_secs(30);
const TRACK_BUDGET: Duration = Duration::from_secs(1);
const CORPUS_WORDS: usize = 500;
const SINGLE_OCCURRENCE_WORDS: usize = 200;
const STRAND2_WORDS: usize = 100;
const CARRIED_SAMPLES: usize = 50;
const UNCARRIED_SAMPLES: usize = 20;
const SEED: u64 = 7;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Merges row arcs that continue each other, then relabels letters so the
/// vertical edge sits at letter 0.
fn normalized_edges(edges: &[CurveEdge], letters: usize) -> Vec<String> {
    let mut merged: Vec<CurveEdge> = Vec::new();
    for e in edges {
        if let (Some(CurveEdge::RowArc { row: r0, to: t0, .. }), CurveEdge::RowArc { row, from, to }) =
            (merged.last_mut(), e)
        {
            if r0 == row && t0 == from {
                *t0 = *to;
                continue;
            }
        }
        merged.push(*e);
    }
    if merged.len() > 1 {
        if let (CurveEdge::RowArc { row: ra, from: fa, .. }, CurveEdge::RowArc { row: rb, to: tb, .. }) =
            (merged[0], merged[merged.len() - 1])
        {
            if ra == rb && tb == fa {
                let last = merged.pop().unwrap();
                if let (CurveEdge::RowArc { from, .. }, CurveEdge::RowArc { from: f0, .. }) = (last, &mut merged[0]) {
                    *f0 = from;
                }
            }
        }
    }
    let shift = merged
        .iter()
        .find_map(|e| match e {
            CurveEdge::Vertical { pos } => Some(*pos),
            _ => None,
        })
        .unwrap_or(0);
    let rel = |p: usize| (p + letters - shift) % letters;
    let mut out: Vec<String> = merged
        .iter()
        .map(|e| match e {
            CurveEdge::RowArc { row, .. } => format!("row {row} arc"),
            CurveEdge::Vertical { pos } => format!("vertical s{}", rel(*pos)),
            CurveEdge::BrickArc { brick, .. } => {
                format!("brick (s{}, s{})", rel(brick.left_pos), rel(brick.right_pos))
            }
        })
        .collect();
    out.sort();
    out
}

fn criterion_trefoil() -> Verdict {
    let start = Instant::now();
    let r = run_pipeline("1 1 1", &Options::default()).map_err(|f| f.to_string())?;
    let elapsed = start.elapsed();
    ensure(r.k == 1, || format!("k = {}", r.k))?;
    let mut expected = vec![
        "brick (s1, s2)".to_string(),
        "row 1 arc".into(),
        "row 2 arc".into(),
        "vertical s0".into(),
    ];
    expected.sort();
    let got = normalized_edges(&r.family.curves[0].edges, 3);
    ensure(got == expected, || format!("edge multiset {got:?}"))?;
    ensure(r.properties.all_pass(), || format!("failed checks {:?}", r.properties.failures()))?;
    ensure(r.problems.is_empty(), || format!("problems {:?}", r.problems))?;
    let c = r.crossings.as_ref().ok_or("no crossing report")?;
    ensure(c.x_count() == 2, || format!("{} Type X crossings", c.x_count()))?;
    ensure(c.components.len() == 1 && c.components[0].realized_slope == 1, || {
        format!("realized slopes {:?}", c.components)
    })?;
    ensure(r.intervals == vec![Interval { component: 0, upper: 1 }], || {
        format!("intervals {:?}", r.intervals)
    })?;
    ensure(elapsed < TREFOIL_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("k=1, edges {got:?}, X=2, slope 1, interval (-inf,1), {elapsed:?} < {TREFOIL_BUDGET:?}"))
}

fn criterion_hopf() -> Verdict {
    let f = run_pipeline("1 1", &Options::default()).err().ok_or("Hopf link accepted")?;
    ensure(f.exit_code == EXIT_PRECONDITION, || format!("exit {}", f.exit_code))?;
    ensure(f.message == "no component of positive genus", || format!("message {:?}", f.message))?;
    Ok(format!("exit {}, \"{}\"", f.exit_code, f.message))
}

fn criterion_corpus() -> Verdict {
    let params = CorpusParams { max_strands: 8, max_len: 40, count: CORPUS_WORDS, seed: SEED };
    let start = Instant::now();
    let s = corpus_verify(&params, None);
    let elapsed = start.elapsed();
    ensure(s.total >= CORPUS_WORDS, || format!("only {} words", s.total))?;
    ensure(s.accepted > 0, || "no word reached the verifier".into())?;
    if let Some(f) = s.failures.first() {
        return Err(format!(
            "{} of {} accepted runs failed; first: {} -> {}: {:?}",
            s.failures.len(),
            s.accepted,
            f.word,
            f.reduced,
            f.problems
        ));
    }
    ensure(s.all_clean(), || "summary not clean".into())?;
    ensure(elapsed < CORPUS_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} words, {} accepted, {} clean, rejected {:?}, {elapsed:?} < {CORPUS_BUDGET:?}",
        s.total, s.accepted, s.clean, s.rejected
    ))
}

fn check_reduction(w: &BraidWord, red: &Reduction) -> Result<(), String> {
    ensure(red.output.strands() + 1 == w.strands(), || format!("{w}: strands {}", red.output.strands()))?;
    ensure(red.output.len() + 1 == w.len(), || format!("{w}: {} letters", red.output.len()))?;
    ensure(invariant_signature(&red.output) == invariant_signature(w), || {
        format!("{w}: signature changed to {:?}", invariant_signature(&red.output))
    })?;
    validate_trace(&SignedWord::from_positive(w), &red.trace).map_err(|e| format!("{w}: {e}"))
}

/// Random word with the strand-2 shape σ_{i+j-1}..σ_i W0 σ_i..σ_{i+j-1} W1.
fn strand2_word(rng: &mut ChaCha8Rng) -> BraidWord {
    let m = rng.gen_range(3..=8);
    let i = rng.gen_range(1..m - 1);
    let j = rng.gen_range(1..m - i);
    let w0: Vec<usize> = (0..rng.gen_range(0..5))
        .map(|_| rng.gen_range(1..m))
        .filter(|&l| l != i && l + 1 != i)
        .collect();
    let mut w1: Vec<usize> = (0..rng.gen_range(0..5))
        .map(|_| rng.gen_range(1..m))
        .filter(|&l| l != i + j - 1 && l != i + j)
        .collect();
    w1.insert(rng.gen_range(0..=w1.len()), i + j);
    let mut letters: Vec<usize> = (i..i + j).rev().collect();
    letters.extend(w0);
    letters.extend(i..i + j);
    letters.extend(w1);
    let k = rng.gen_range(0..letters.len());
    letters.rotate_left(k);
    BraidWord::new(m, letters).unwrap()
}

fn criterion_reduction() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut singles = 0;
    while singles < SINGLE_OCCURRENCE_WORDS {
        let w = random_word(&mut rng, 8, 40);
        if w.strands() < 3 {
            continue;
        }
        // Keep one copy of a chosen generator.
        let i = rng.gen_range(1..w.strands());
        let mut seen = false;
        let letters: Vec<usize> = w
            .letters()
            .iter()
            .copied()
            .filter(|&l| l != i || !std::mem::replace(&mut seen, true))
            .collect();
        let w = BraidWord::new(w.strands(), letters).unwrap();
        let red = reduce_single_occurrence(&w, i).map_err(|e| format!("{w}: {e}"))?;
        check_reduction(&w, &red)?;
        singles += 1;
    }

    let w: BraidWord = "m=3; 1 2 2 2".parse().unwrap();
    let red = reduce_single_occurrence(&w, 1).map_err(|e| e.to_string())?;
    check_reduction(&w, &red)?;
    let trefoil: BraidWord = "1 1 1".parse().unwrap();
    ensure(invariant_signature(&red.output) == invariant_signature(&trefoil), || {
        format!("σ1σ2³ reduced to {}", red.output)
    })?;

    let mut fixtures: Vec<BraidWord> = ["m=4; 2 1 3 1 2 3", "m=4; 1 3 1 2 3", "m=5; 3 2 4 2 3 4 1 1"]
        .iter()
        .map(|t| t.parse().unwrap())
        .collect();
    fixtures.extend((0..STRAND2_WORDS).map(|_| strand2_word(&mut rng)));
    for w in &fixtures {
        let params = match_strand2_shape(w).ok_or_else(|| format!("{w}: no strand-2 match"))?;
        let red = reduce_strand2(w, &params).map_err(|e| format!("{w}: {e}"))?;
        check_reduction(w, &red)?;
    }
    Ok(format!(
        "{singles} single-occurrence words, σ1σ2³ ~ σ1³, {} strand-2 words",
        fixtures.len()
    ))
}

fn criterion_track() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let start = Instant::now();
    let mut checked = 0;
    for n in -3i64..=5 {
        let t = two_branch_track(n);
        for k in 0..CARRIED_SAMPLES + UNCARRIED_SAMPLES {
            let q = rng.gen_range(1..=12i64);
            let carried = k < CARRIED_SAMPLES;
            let p = match (carried, k) {
                (false, k) if k == CARRIED_SAMPLES => n * q,
                (false, _) => rng.gen_range(n * q..=n * q + 60),
                (true, _) => rng.gen_range(n * q - 60..n * q),
            };
            let s = Slope::Rational(BigRational::new(BigInt::from(p), BigInt::from(q)));
            let mu = realize_slope(&t, &s).map_err(|e| format!("n={n}, {s}: {e}"))?;
            match (carried, mu) {
                (true, Some(mu)) => {
                    ensure(mu.positive, || format!("n={n}, {s}: measure not positive"))?;
                    let h = homology_of(&t, &mu).map_err(|e| e.to_string())?;
                    ensure(proportional(&h, &s), || format!("n={n}, {s}: class {h:?}"))?;
                }
                (true, None) => return Err(format!("n={n}: {s} below n not carried")),
                (false, Some(_)) => return Err(format!("n={n}: {s} at or above n carried")),
                (false, None) => {}
            }
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < TRACK_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "n in -3..=5, {CARRIED_SAMPLES} carried + {UNCARRIED_SAMPLES} refused each ({checked} total), {elapsed:?} < {TRACK_BUDGET:?}"
    ))
}

fn scratch_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("brickcurve-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn criterion_determinism() -> Verdict {
    let bin = env!("CARGO_BIN_EXE_brickcurve");
    let dir = scratch_dir();
    let track = dir.join("track.json");
    std::fs::write(&track, serde_json::to_string(&two_branch_track(2)).unwrap()).unwrap();
    let track = track.to_str().unwrap().to_string();
    let fixtures = ["1 1 1", "1 1", "m=3; 1 2 2 2", "m=4; 2 1 3 1 2 3", "m=3; 1 1 2 2 1 1 2 2", "1 x"];
    let mut cases: Vec<Vec<String>> = Vec::new();
    for f in fixtures {
        for verb in ["analyze", "curves", "verify", "slopes", "reduce", "render"] {
            for extra in [&[][..], &["--json"][..], &["--auto-reduce", "--json"][..]] {
                let mut args = vec![verb.to_string(), f.to_string()];
                args.extend(extra.iter().map(|s| s.to_string()));
                cases.push(args);
            }
        }
        cases.push(vec!["slopes".into(), f.into(), "--multislope".into(), "1/2".into(), "--json".into()]);
        cases.push(vec!["render".into(), f.into(), "--auto-reduce".into(), "--svg".into(), "SVG".into()]);
    }
    for slope in ["1/3", "2", "-5/2", "inf"] {
        for json in [false, true] {
            let mut args = vec!["track".into(), "realize".into(), track.clone(), "--slope".into(), slope.into()];
            if json {
                args.push("--json".into());
            }
            cases.push(args);
        }
    }
    cases.push(vec!["track".into(), "check".into(), track.clone(), "--json".into()]);
    cases.push(vec!["corpus".into(), "--count".into(), "60".into(), "--seed".into(), "3".into()]);
    cases.push(vec!["corpus".into(), "--count".into(), "60".into(), "--json".into()]);

    for args in &cases {
        let mut runs = Vec::new();
        for round in 0..2 {
            let svg = dir.join(format!("out{round}.svg"));
            let argv: Vec<String> = args
                .iter()
                .map(|a| if a == "SVG" { svg.to_str().unwrap().to_string() } else { a.clone() })
                .collect();
            let out = Command::new(bin).args(&argv).output().map_err(|e| e.to_string())?;
            let picture = std::fs::read(&svg).unwrap_or_default();
            let _ = std::fs::remove_file(&svg);
            runs.push((out.status.code(), out.stdout, out.stderr, picture));
        }
        ensure(runs[0] == runs[1], || format!("output differs for {args:?}"))?;
        ensure(runs[0].0.is_some(), || format!("{args:?} killed by a signal"))?;
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{} invocations over 8 verbs byte-identical on repeat", cases.len()))
}

fn criterion_mutations() -> Verdict {
    let params = CorpusParams { max_strands: 8, max_len: 40, count: CORPUS_WORDS, seed: SEED };
    let mut lines = Vec::new();
    for m in Mutation::ALL {
        let opts = Options { mutation: Some(m), ..Options::default() };
        let witness = match run_pipeline("1 1 1", &opts) {
            Ok(r) if !r.problems.is_empty() => Some(format!("trefoil: {}", r.problems[0])),
            Err(f) => Some(format!("trefoil: {f}")),
            Ok(_) => {
                let s = corpus_verify(&params, Some(m));
                s.failures.first().map(|f| {
                    format!("corpus {}/{} failing, e.g. {}: {}", s.failures.len(), s.accepted, f.reduced, f.problems[0])
                })
            }
        };
        match witness {
            Some(w) => lines.push(format!("{m:?} caught ({w})")),
            None => return Err(format!("{m:?} passed every check")),
        }
    }
    Ok(lines.join("; "))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("trefoil fixture", criterion_trefoil),
        ("Hopf rejection", criterion_hopf),
        ("corpus property suite", criterion_corpus),
        ("reduction soundness", criterion_reduction),
        ("track solver", criterion_track),
        ("CLI determinism", criterion_determinism),
        ("mutation detection", criterion_mutations),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
