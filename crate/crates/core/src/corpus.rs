//! Seeded random positive words run through the whole pipeline.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::braid::BraidWord;
use crate::curves::Mutation;
use crate::pipeline::{run_word, Options, EXIT_OK, EXIT_VERIFICATION};
use crate::rewrite::reduce_fully;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusParams {
    pub max_strands: usize,
    pub max_len: usize,
    pub count: usize,
    pub seed: u64,
}

impl Default for CorpusParams {
    fn default() -> Self {
        CorpusParams { max_strands: 8, max_len: 40, count: 500, seed: 7 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub word: String,
    pub reduced: String,
    pub exit_code: i32,
    pub problems: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub params: CorpusParams,
    pub total: usize,
    /// Runs that reached the verifier.
    pub accepted: usize,
    /// Accepted runs with every check passing.
    pub clean: usize,
    /// Rejections before verification, keyed by exit code.
    pub rejected: BTreeMap<i32, usize>,
    pub failures: Vec<CorpusEntry>,
}

impl CorpusSummary {
    pub fn all_clean(&self) -> bool {
        self.failures.is_empty() && self.accepted == self.clean
    }
}

/// A positive word using every generator at least once.
pub fn random_word<R: Rng>(rng: &mut R, max_strands: usize, max_len: usize) -> BraidWord {
    let m = rng.gen_range(2..=max_strands.max(2));
    let lo = (2 * m - 1).min(max_len.max(m - 1));
    let len = rng.gen_range(lo..=max_len.max(lo));
    let mut letters: Vec<usize> = (1..m).collect();
    while letters.len() < len {
        letters.push(rng.gen_range(1..m));
    }
    letters.shuffle(rng);
    BraidWord::new(m, letters).expect("generated letters are in range")
}

pub fn generate(params: &CorpusParams) -> Vec<BraidWord> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    (0..params.count)
        .map(|_| random_word(&mut rng, params.max_strands, params.max_len))
        .collect()
}

/// Auto-reduces and runs one word.
pub fn evaluate(word: &BraidWord, mutation: Option<Mutation>) -> CorpusEntry {
    let opts = Options { auto_reduce: true, strands: None, mutation };
    let (reduced, reductions) = match reduce_fully(word) {
        Ok(r) => r,
        Err(e) => {
            return CorpusEntry {
                word: word.to_string(),
                reduced: String::new(),
                exit_code: EXIT_VERIFICATION,
                problems: vec![format!("reduction: {e}")],
            }
        }
    };
    let text = reduced.to_string();
    match run_word(word, reduced, reductions, &opts) {
        Ok(r) => CorpusEntry {
            word: word.to_string(),
            reduced: text,
            exit_code: r.exit_code(),
            problems: r.problems,
        },
        Err(f) => CorpusEntry {
            word: word.to_string(),
            reduced: text,
            exit_code: f.exit_code,
            problems: vec![f.message],
        },
    }
}

#[cfg(feature = "parallel")]
pub fn evaluate_all(words: &[BraidWord], mutation: Option<Mutation>) -> Vec<CorpusEntry> {
    use rayon::prelude::*;
    words.par_iter().map(|w| evaluate(w, mutation)).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn evaluate_all(words: &[BraidWord], mutation: Option<Mutation>) -> Vec<CorpusEntry> {
    evaluate_all_sequential(words, mutation)
}

pub fn evaluate_all_sequential(words: &[BraidWord], mutation: Option<Mutation>) -> Vec<CorpusEntry> {
    words.iter().map(|w| evaluate(w, mutation)).collect()
}

pub fn summarize(params: &CorpusParams, entries: Vec<CorpusEntry>) -> CorpusSummary {
    let mut summary = CorpusSummary {
        params: params.clone(),
        total: entries.len(),
        accepted: 0,
        clean: 0,
        rejected: BTreeMap::new(),
        failures: Vec::new(),
    };
    for e in entries {
        match e.exit_code {
            EXIT_OK => {
                summary.accepted += 1;
                summary.clean += 1;
            }
            EXIT_VERIFICATION => {
                summary.accepted += 1;
                summary.failures.push(e);
            }
            code => *summary.rejected.entry(code).or_default() += 1,
        }
    }
    summary
}

pub fn corpus_verify(params: &CorpusParams, mutation: Option<Mutation>) -> CorpusSummary {
    let words = generate(params);
    summarize(params, evaluate_all(&words, mutation))
}
