//! Braid-group rewriting: free reduction, conjugation by πₖ = σ_{m−1}⋯σₖ,
//! commuting factorizations, Markov destabilization, and the two strand
//! reductions that remove a strand from a non-minimal positive diagram.
//!
//! Every reduction is returned with an explicit move trace; [`validate_trace`]
//! re-checks each move on its own.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::{component_stats, components_of, BraidWord};
use crate::group::group_equal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("letter {0} is outside both bands")]
    OutsideBands(usize),
    #[error("bands do not commute: {0} and {1}")]
    BandsOverlap(usize, usize),
    #[error("conjugation index {k} out of range for {strands} strands")]
    PiOutOfRange { k: usize, strands: usize },
    #[error("destabilization needs exactly one positive σ_{top}; found {positive} positive and {negative} negative")]
    Destabilize { top: usize, positive: usize, negative: usize },
    #[error("σ_{index} occurs {count} times, expected exactly once")]
    Occurrences { index: usize, count: usize },
    #[error("generator {0} out of range")]
    BadGenerator(usize),
    #[error("strand-2 shape hypothesis violated: {0}")]
    Shape(String),
    #[error("reduced word still has negative letters: {0:?}")]
    NotPositive(Vec<i32>),
}

/// A braid word with signed letters: `k` is σₖ, `-k` is σₖ⁻¹.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedWord {
    pub strands: usize,
    pub letters: Vec<i32>,
}

impl SignedWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Self {
        SignedWord { strands, letters }
    }

    pub fn from_positive(word: &BraidWord) -> Self {
        SignedWord {
            strands: word.strands(),
            letters: word.letters().iter().map(|&l| l as i32).collect(),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.letters
            .iter()
            .all(|l| *l != 0 && (l.unsigned_abs() as usize) < self.strands)
    }

    pub fn to_positive(&self) -> Result<BraidWord, RewriteError> {
        if self.letters.iter().any(|&l| l < 0) {
            return Err(RewriteError::NotPositive(self.letters.clone()));
        }
        BraidWord::new(
            self.strands,
            self.letters.iter().map(|&l| l as usize).collect(),
        )
        .map_err(|_| RewriteError::NotPositive(self.letters.clone()))
    }

    fn rotated(&self, offset: usize) -> SignedWord {
        let n = self.letters.len();
        if n == 0 {
            return self.clone();
        }
        let k = offset % n;
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        SignedWord::new(self.strands, letters)
    }
}

pub fn free_reduce(w: &SignedWord) -> SignedWord {
    let mut out: Vec<i32> = Vec::with_capacity(w.letters.len());
    for &l in &w.letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    SignedWord::new(w.strands, out)
}

/// πₖ = σ_{m−1} σ_{m−2} ⋯ σₖ as letters.
pub fn pi(strands: usize, k: usize) -> Vec<i32> {
    (k..strands).rev().map(|x| x as i32).collect()
}

fn inverse_letters(w: &[i32]) -> Vec<i32> {
    w.iter().rev().map(|x| -x).collect()
}

/// πₖ · w · πₖ⁻¹, simplified letter by letter with πₖσⱼπₖ⁻¹ = σⱼ₋₁ (j > k) and
/// σⱼ (j < k − 1); the remaining letters keep the literal conjugation.
pub fn conjugate_by_pi(w: &SignedWord, k: usize) -> Result<SignedWord, RewriteError> {
    if k == 0 || k >= w.strands {
        return Err(RewriteError::PiOutOfRange { k, strands: w.strands });
    }
    let p = pi(w.strands, k);
    let p_inv = inverse_letters(&p);
    let mut out = Vec::new();
    for &l in &w.letters {
        let j = l.unsigned_abs() as usize;
        if j > k {
            out.push(l.signum() * (j as i32 - 1));
        } else if j + 1 < k {
            out.push(l);
        } else {
            out.extend_from_slice(&p);
            out.push(l);
            out.extend_from_slice(&p_inv);
        }
    }
    Ok(free_reduce(&SignedWord::new(w.strands, out)))
}

/// Splits a positive word into (upper, lower) using only commutations.
pub fn factor_commuting(
    w: &[usize],
    low_band: &[usize],
    high_band: &[usize],
) -> Result<(Vec<usize>, Vec<usize>), RewriteError> {
    for &a in low_band {
        for &b in high_band {
            if a.abs_diff(b) < 2 {
                return Err(RewriteError::BandsOverlap(a, b));
            }
        }
    }
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for &l in w {
        if low_band.contains(&l) {
            upper.push(l);
        } else if high_band.contains(&l) {
            lower.push(l);
        } else {
            return Err(RewriteError::OutsideBands(l));
        }
    }
    Ok((upper, lower))
}

fn split_by(w: &[usize], pred: impl Fn(usize) -> bool) -> (Vec<usize>, Vec<usize>) {
    w.iter().partition(|&&l| pred(l))
}

/// Removes the unique σ_{m−1} and drops the last strand.
pub fn destabilize_last(w: &SignedWord) -> Result<SignedWord, RewriteError> {
    let w = free_reduce(w);
    let top = w.strands as i32 - 1;
    let positive = w.letters.iter().filter(|&&l| l == top).count();
    let negative = w.letters.iter().filter(|&&l| l == -top).count();
    if top < 1 || positive != 1 || negative != 0 {
        return Err(RewriteError::Destabilize {
            top: top.max(0) as usize,
            positive,
            negative,
        });
    }
    let letters = w.letters.into_iter().filter(|&l| l != top).collect();
    Ok(SignedWord::new(w.strands - 1, letters))
}

/// One step of a rewrite trace, carrying the word it produces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Move {
    /// Cyclic rotation (conjugation by a prefix).
    Rotate { offset: usize, result: SignedWord },
    /// Rearrangement by far commutations σᵢσⱼ = σⱼσᵢ, |i − j| ≥ 2.
    Commute { result: SignedWord },
    /// Literal conjugation πₖ · w · πₖ⁻¹.
    ConjugateByPi { k: usize, result: SignedWord },
    /// Rewrite inside the braid group (same element).
    BraidRelations { result: SignedWord },
    /// Cancellation of adjacent inverse pairs.
    FreeReduce { result: SignedWord },
    /// Markov destabilization along the last strand.
    Destabilize { result: SignedWord },
}

impl Move {
    pub fn result(&self) -> &SignedWord {
        match self {
            Move::Rotate { result, .. }
            | Move::Commute { result }
            | Move::ConjugateByPi { result, .. }
            | Move::BraidRelations { result }
            | Move::FreeReduce { result }
            | Move::Destabilize { result } => result,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionKind {
    SingleOccurrence { index: usize },
    Strand2 { i: usize, j: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub kind: ReductionKind,
    pub input: BraidWord,
    pub output: BraidWord,
    pub trace: Vec<Move>,
}

/// Two words are equal in the partially commutative monoid iff their
/// projections onto every pair of non-commuting letters agree.
fn commutation_equivalent(a: &[i32], b: &[i32]) -> bool {
    let mut alphabet: Vec<i32> = a.to_vec();
    alphabet.sort_unstable();
    alphabet.dedup();
    let mut other: Vec<i32> = b.to_vec();
    other.sort_unstable();
    other.dedup();
    if alphabet != other {
        return false;
    }
    for (x_idx, &x) in alphabet.iter().enumerate() {
        for &y in &alphabet[x_idx..] {
            if x.unsigned_abs().abs_diff(y.unsigned_abs()) >= 2 {
                continue;
            }
            let pa: Vec<i32> = a.iter().copied().filter(|&l| l == x || l == y).collect();
            let pb: Vec<i32> = b.iter().copied().filter(|&l| l == x || l == y).collect();
            if pa != pb {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("move {step} is invalid: {reason}")]
pub struct TraceError {
    pub step: usize,
    pub reason: String,
}

/// Checks every move of a trace in isolation, starting from `input`.
pub fn validate_trace(input: &SignedWord, trace: &[Move]) -> Result<(), TraceError> {
    let mut prev = input.clone();
    for (step, mv) in trace.iter().enumerate() {
        let fail = |reason: &str| TraceError { step, reason: reason.to_string() };
        let next = mv.result();
        if !next.is_valid() {
            return Err(fail("result has out-of-range letters"));
        }
        let ok = match mv {
            Move::Rotate { offset, result } => *result == prev.rotated(*offset),
            Move::Commute { result } => {
                result.strands == prev.strands
                    && commutation_equivalent(&prev.letters, &result.letters)
            }
            Move::ConjugateByPi { k, result } => {
                let p = pi(prev.strands, *k);
                let mut lit = p.clone();
                lit.extend_from_slice(&prev.letters);
                lit.extend(inverse_letters(&p));
                result.strands == prev.strands && result.letters == lit
            }
            Move::BraidRelations { result } => {
                result.strands == prev.strands
                    && group_equal(prev.strands, &prev.letters, &result.letters)
            }
            Move::FreeReduce { result } => {
                result.strands == prev.strands
                    && free_reduce(result) == *result
                    && free_reduce(&prev) == *result
            }
            Move::Destabilize { result } => {
                let top = prev.strands as i32 - 1;
                let occurrences: Vec<usize> = prev
                    .letters
                    .iter()
                    .enumerate()
                    .filter(|(_, l)| l.abs() == top)
                    .map(|(i, _)| i)
                    .collect();
                occurrences.len() == 1
                    && prev.letters[occurrences[0]] == top
                    && result.strands + 1 == prev.strands
                    && {
                        let mut rest = prev.letters.clone();
                        rest.remove(occurrences[0]);
                        rest == result.letters
                    }
            }
        };
        if !ok {
            return Err(fail(&format!("{mv:?} does not follow from {prev:?}")));
        }
        prev = next.clone();
    }
    Ok(())
}

fn shift_down(w: &[usize]) -> Vec<i32> {
    w.iter().map(|&l| l as i32 - 1).collect()
}

fn as_signed(w: &[usize]) -> Vec<i32> {
    w.iter().map(|&l| l as i32).collect()
}

/// π_k⁻¹ σ_{m−1} π_k, written out literally.
fn pi_inv_top_pi(strands: usize, k: usize) -> Vec<i32> {
    let p = pi(strands, k);
    let mut out = inverse_letters(&p);
    out.push(strands as i32 - 1);
    out.extend_from_slice(&p);
    out
}

/// Finishes a reduction once the word has the shape produced by a
/// πₖ-conjugation: free-reduce, destabilize, free-reduce, check positivity.
fn finish(
    mut current: SignedWord,
    trace: &mut Vec<Move>,
) -> Result<BraidWord, RewriteError> {
    current = free_reduce(&current);
    trace.push(Move::FreeReduce { result: current.clone() });
    current = destabilize_last(&current)?;
    trace.push(Move::Destabilize { result: current.clone() });
    current = free_reduce(&current);
    trace.push(Move::FreeReduce { result: current.clone() });
    current.to_positive()
}

/// Removes one strand from a word in which σᵢ occurs exactly once.
pub fn reduce_single_occurrence(w: &BraidWord, i: usize) -> Result<Reduction, RewriteError> {
    let m = w.strands();
    if i == 0 || i >= m {
        return Err(RewriteError::BadGenerator(i));
    }
    let count = w.occurrences(i);
    if count != 1 {
        return Err(RewriteError::Occurrences { index: i, count });
    }
    let mut trace = Vec::new();
    let at = w.letters().iter().position(|&l| l == i).expect("counted once");
    let rotated = w.rotated(at);
    trace.push(Move::Rotate { offset: at, result: SignedWord::from_positive(&rotated) });

    // σᵢ X with X free of σᵢ: X = High · Low by commutation.
    let rest = &rotated.letters()[1..];
    let (low, high) = split_by(rest, |l| l < i);
    let mut arranged = vec![i as i32];
    arranged.extend(as_signed(&high));
    arranged.extend(as_signed(&low));
    trace.push(Move::Commute { result: SignedWord::new(m, arranged) });

    // rotate to W₀ σᵢ W₁ with W₀ = Low, W₁ = High
    let offset = 1 + high.len();
    let mut shaped = as_signed(&low);
    shaped.push(i as i32);
    shaped.extend(as_signed(&high));
    let shaped = SignedWord::new(m, shaped);
    trace.push(Move::Rotate { offset, result: shaped.clone() });

    let p = pi(m, i);
    let mut conj = p.clone();
    conj.extend_from_slice(&shaped.letters);
    conj.extend(inverse_letters(&p));
    trace.push(Move::ConjugateByPi { k: i, result: SignedWord::new(m, conj) });

    let mut rewritten = pi_inv_top_pi(m, i);
    rewritten.extend(as_signed(&low));
    rewritten.extend(shift_down(&high));
    let rewritten = SignedWord::new(m, rewritten);
    trace.push(Move::BraidRelations { result: rewritten.clone() });

    let output = finish(rewritten, &mut trace)?;
    Ok(Reduction {
        kind: ReductionKind::SingleOccurrence { index: i },
        input: w.clone(),
        output,
        trace,
    })
}

/// Parameters of a conjugate of the form
/// σ_{i+j−1}⋯σᵢ · W₀ · σᵢ⋯σ_{i+j−1} · W₁.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strand2Match {
    pub rotation: usize,
    pub i: usize,
    pub j: usize,
    pub w0: Vec<usize>,
    pub w1: Vec<usize>,
}

impl Strand2Match {
    fn assembled(&self) -> Vec<usize> {
        let (i, j) = (self.i, self.j);
        let mut out: Vec<usize> = (i..i + j).rev().collect();
        out.extend_from_slice(&self.w0);
        out.extend(i..i + j);
        out.extend_from_slice(&self.w1);
        out
    }

    fn check(&self, strands: usize) -> Result<(), RewriteError> {
        let (i, j) = (self.i, self.j);
        if i == 0 || j == 0 || i + j >= strands {
            return Err(RewriteError::Shape(format!("i={i}, j={j} out of range")));
        }
        if self.w0.iter().any(|&l| l == i || l + 1 == i) {
            return Err(RewriteError::Shape(format!("W0 contains σ{} or σ{}", i - 1, i)));
        }
        if self.w1.contains(&(i + j - 1)) {
            return Err(RewriteError::Shape(format!("W1 contains σ{}", i + j - 1)));
        }
        let top = self.w1.iter().filter(|&&l| l == i + j).count();
        if top != 1 {
            return Err(RewriteError::Shape(format!(
                "W1 contains σ{} {top} times",
                i + j
            )));
        }
        Ok(())
    }
}

/// Scans rotations by increasing offset, then `i` increasing, for the strand-2
/// shape. `j` is fixed by the first letter of the rotation.
pub fn match_strand2_shape(w: &BraidWord) -> Option<Strand2Match> {
    let m = w.strands();
    for rotation in 0..w.len() {
        let r = w.rotated(rotation);
        let l = r.letters();
        let first = l[0];
        for i in 1..=first {
            let j = first + 1 - i;
            if i + j >= m || 2 * j > l.len() {
                continue;
            }
            let prefix_ok = (0..j).all(|t| l[t] == i + j - 1 - t);
            if !prefix_ok {
                continue;
            }
            let Some(p) = (j..l.len()).find(|&t| l[t] == i) else {
                continue;
            };
            if p + j > l.len() || !(0..j).all(|t| l[p + t] == i + t) {
                continue;
            }
            let candidate = Strand2Match {
                rotation,
                i,
                j,
                w0: l[j..p].to_vec(),
                w1: l[p + j..].to_vec(),
            };
            if candidate.check(m).is_ok() {
                return Some(candidate);
            }
        }
    }
    None
}

/// Removes one strand from a word matching the strand-2 shape.
pub fn reduce_strand2(w: &BraidWord, params: &Strand2Match) -> Result<Reduction, RewriteError> {
    let m = w.strands();
    params.check(m)?;
    let rotated = w.rotated(params.rotation);
    if rotated.letters() != params.assembled().as_slice() {
        return Err(RewriteError::Shape(
            "parameters do not reassemble the rotated word".into(),
        ));
    }
    let (i, j) = (params.i, params.j);
    let mut trace = vec![Move::Rotate {
        offset: params.rotation,
        result: SignedWord::from_positive(&rotated),
    }];

    // W₀ = V₀V₁, W₁ = V₂V₃ σ_{i+j} V₄V₅
    let (v0, v1) = split_by(&params.w0, |l| l + 1 < i);
    let top = params.w1.iter().position(|&l| l == i + j).expect("checked");
    let (v2, v3) = split_by(&params.w1[..top], |l| l + 1 < i + j);
    let (v4, v5) = split_by(&params.w1[top + 1..], |l| l + 1 < i + j);

    let descending: Vec<i32> = (i..i + j).rev().map(|x| x as i32).collect();
    let ascending: Vec<i32> = (i..=i + j).map(|x| x as i32).collect();
    let mut arranged = descending.clone();
    arranged.extend(as_signed(&v0));
    arranged.extend(as_signed(&v1));
    arranged.extend(as_signed(&v3));
    arranged.extend_from_slice(&ascending);
    arranged.extend(as_signed(&v2));
    arranged.extend(as_signed(&v4));
    arranged.extend(as_signed(&v5));
    let arranged = SignedWord::new(m, arranged);
    trace.push(Move::Commute { result: arranged.clone() });

    let k = i + j;
    let p = pi(m, k);
    let mut conj = p.clone();
    conj.extend_from_slice(&arranged.letters);
    conj.extend(inverse_letters(&p));
    trace.push(Move::ConjugateByPi { k, result: SignedWord::new(m, conj) });

    let mut rewritten = as_signed(&v0);
    rewritten.extend(shift_down(&v1));
    rewritten.extend(shift_down(&v3));
    rewritten.extend(pi_inv_top_pi(m, k));
    rewritten.extend(descending.iter().copied());
    rewritten.extend(descending.iter().rev().copied());
    rewritten.extend(as_signed(&v2));
    rewritten.extend(as_signed(&v4));
    rewritten.extend(shift_down(&v5));
    let rewritten = SignedWord::new(m, rewritten);
    trace.push(Move::BraidRelations { result: rewritten.clone() });

    let output = finish(rewritten, &mut trace)?;
    Ok(Reduction {
        kind: ReductionKind::Strand2 { i, j },
        input: w.clone(),
        output,
        trace,
    })
}

/// Link invariants of the closure used to cross-check reductions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature {
    pub components: usize,
    pub genera: Vec<usize>,
    pub linking: Vec<usize>,
}

pub fn invariant_signature(w: &BraidWord) -> Signature {
    let parts = components_of(w);
    let stats = component_stats(w, &parts).expect("valid positive words satisfy the genus parity");
    let mut genera = stats.genera();
    genera.sort_unstable();
    let n = parts.count();
    let mut linking = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            linking.push(stats.linking[a][b]);
        }
    }
    linking.sort_unstable();
    Signature { components: n, genera, linking }
}

/// Applies single-occurrence reductions (smallest index first) and then the
/// strand-2 reduction until neither applies. Best effort: reaching a fixed
/// point does not prove the strand count is minimal.
pub fn reduce_fully(w: &BraidWord) -> Result<(BraidWord, Vec<Reduction>), RewriteError> {
    let mut current = w.clone();
    let mut applied = Vec::new();
    loop {
        if current.strands() < 2 {
            break;
        }
        let single = (1..current.strands()).find(|&i| current.occurrences(i) == 1);
        let step = if let Some(i) = single {
            reduce_single_occurrence(&current, i)?
        } else if let Some(params) = match_strand2_shape(&current) {
            reduce_strand2(&current, &params)?
        } else {
            break;
        };
        current = step.output.clone();
        applied.push(step);
    }
    Ok((current, applied))
}
