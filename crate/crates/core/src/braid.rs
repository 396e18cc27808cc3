//! Positive braid words, closure components and per-component genus data.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("token `{0}` is not an integer")]
    NonInteger(String),
    #[error("negative generator: only positive braids accepted (got {0})")]
    Negative(i64),
    #[error("generator index 0 is not allowed")]
    Zero,
    #[error("generator {index} is out of range for {strands} strands")]
    OutOfRange { index: usize, strands: usize },
    #[error("empty braid word on {0} strands")]
    Empty(usize),
    #[error("malformed strand declaration `{0}`")]
    BadDeclaration(String),
    #[error("component {component}: N - m + 1 = {value} is odd or negative")]
    Parity { component: usize, value: i64 },
}

/// A positive braid word. Generator `i` crosses the strands on rows `i` and `i+1`
/// (rows counted from the top, starting at 1). Letter positions are the cyclic
/// coordinates of the closure.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<usize>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<usize>) -> Result<Self, BraidError> {
        if strands == 0 {
            return Err(BraidError::BadDeclaration("m=0".into()));
        }
        for &index in &letters {
            if index == 0 {
                return Err(BraidError::Zero);
            }
            if index >= strands {
                return Err(BraidError::OutOfRange { index, strands });
            }
        }
        if strands >= 2 && letters.is_empty() {
            return Err(BraidError::Empty(strands));
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Cyclic rotation: the letter at `offset` becomes the first letter.
    pub fn rotated(&self, offset: usize) -> BraidWord {
        let n = self.letters.len();
        if n == 0 {
            return self.clone();
        }
        let k = offset % n;
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        BraidWord { strands: self.strands, letters }
    }

    pub fn occurrences(&self, index: usize) -> usize {
        self.letters.iter().filter(|&&l| l == index).count()
    }

    /// `table[j][r - 1]` is the strand occupying row `r` just before letter `j`;
    /// `table[len]` is the state after the whole word. Strands are named by the
    /// row they start on.
    pub fn level_table(&self) -> Vec<Vec<usize>> {
        let mut state: Vec<usize> = (1..=self.strands).collect();
        let mut table = Vec::with_capacity(self.letters.len() + 1);
        table.push(state.clone());
        for &i in &self.letters {
            state.swap(i - 1, i);
            table.push(state.clone());
        }
        table
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={};", self.strands)?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = BraidError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_braid(s)
    }
}

/// Parses `"1 1 1"` or `"m=4; 2 1 3 1 2 3"`.
pub fn parse_braid(text: &str) -> Result<BraidWord, BraidError> {
    parse_braid_with(text, None)
}

/// Like [`parse_braid`], with a fallback strand count used when the text has
/// no `m=` prefix.
pub fn parse_braid_with(text: &str, strands: Option<usize>) -> Result<BraidWord, BraidError> {
    let text = text.trim();
    let (declared, body) = match text.split_once(';') {
        Some((head, rest)) => {
            let head = head.trim();
            let value = head
                .strip_prefix("m=")
                .or_else(|| head.strip_prefix("m ="))
                .ok_or_else(|| BraidError::BadDeclaration(head.to_string()))?;
            let m = value
                .trim()
                .parse::<usize>()
                .map_err(|_| BraidError::BadDeclaration(head.to_string()))?;
            (Some(m), rest)
        }
        None => (strands, text),
    };
    let mut letters = Vec::new();
    for token in body.split_whitespace() {
        let v: i64 = token
            .parse()
            .map_err(|_| BraidError::NonInteger(token.to_string()))?;
        if v < 0 {
            return Err(BraidError::Negative(v));
        }
        if v == 0 {
            return Err(BraidError::Zero);
        }
        letters.push(v as usize);
    }
    let m = match declared {
        Some(m) => m,
        None => letters.iter().copied().max().map_or(1, |x| x + 1),
    };
    BraidWord::new(m, letters)
}

/// Cycle decomposition of the closure permutation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentPartition {
    /// `permutation[s - 1]` is the row strand `s` ends on.
    pub permutation: Vec<usize>,
    /// Each component as the sorted list of rows it starts on; ordered by least row.
    pub components: Vec<Vec<usize>>,
    /// `component_of[s - 1]` is the component id of strand `s`.
    pub component_of: Vec<usize>,
}

impl ComponentPartition {
    pub fn count(&self) -> usize {
        self.components.len()
    }

    pub fn of_strand(&self, strand: usize) -> usize {
        self.component_of[strand - 1]
    }
}

pub fn components_of(word: &BraidWord) -> ComponentPartition {
    let m = word.strands();
    let last = word.level_table().pop().expect("table is never empty");
    // last[r - 1] = strand ending on row r
    let mut permutation = vec![0; m];
    for (r, &s) in last.iter().enumerate() {
        permutation[s - 1] = r + 1;
    }
    let mut component_of = vec![usize::MAX; m];
    let mut components = Vec::new();
    for start in 1..=m {
        if component_of[start - 1] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut cycle = Vec::new();
        let mut s = start;
        while component_of[s - 1] == usize::MAX {
            component_of[s - 1] = id;
            cycle.push(s);
            s = permutation[s - 1];
        }
        cycle.sort_unstable();
        components.push(cycle);
    }
    ComponentPartition { permutation, components, component_of }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentData {
    pub strands: Vec<usize>,
    pub strand_count: usize,
    pub internal_crossings: usize,
    pub genus: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentStats {
    pub components: Vec<ComponentData>,
    pub linking: Vec<Vec<usize>>,
}

impl ComponentStats {
    pub fn genera(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.genus).collect()
    }

    pub fn is_unknot(&self, k: usize) -> bool {
        self.components[k].genus == 0
    }
}

pub fn component_stats(
    word: &BraidWord,
    parts: &ComponentPartition,
) -> Result<ComponentStats, BraidError> {
    let n = parts.count();
    let mut internal = vec![0usize; n];
    let mut cross = vec![vec![0usize; n]; n];
    let table = word.level_table();
    for (j, &i) in word.letters().iter().enumerate() {
        let a = parts.of_strand(table[j][i - 1]);
        let b = parts.of_strand(table[j][i]);
        if a == b {
            internal[a] += 1;
        } else {
            cross[a][b] += 1;
            cross[b][a] += 1;
        }
    }
    let mut components = Vec::with_capacity(n);
    for (k, strands) in parts.components.iter().enumerate() {
        let value = internal[k] as i64 - strands.len() as i64 + 1;
        if value < 0 || value % 2 != 0 {
            return Err(BraidError::Parity { component: k, value });
        }
        components.push(ComponentData {
            strands: strands.clone(),
            strand_count: strands.len(),
            internal_crossings: internal[k],
            genus: (value / 2) as usize,
        });
    }
    let linking = cross
        .iter()
        .map(|row| row.iter().map(|c| c / 2).collect())
        .collect();
    Ok(ComponentStats { components, linking })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecheckReport {
    pub nonsplit: bool,
    pub missing_generators: Vec<usize>,
    pub has_nontrivial: bool,
    pub single_occurrence_generators: Vec<usize>,
}

pub fn precheck(word: &BraidWord, stats: &ComponentStats) -> PrecheckReport {
    let mut counts = BTreeMap::new();
    for &l in word.letters() {
        *counts.entry(l).or_insert(0usize) += 1;
    }
    let gens = 1..word.strands();
    let missing_generators: Vec<usize> =
        gens.clone().filter(|i| !counts.contains_key(i)).collect();
    let single_occurrence_generators = gens.filter(|i| counts.get(i) == Some(&1)).collect();
    PrecheckReport {
        nonsplit: missing_generators.is_empty(),
        missing_generators,
        has_nontrivial: stats.components.iter().any(|c| c.genus >= 1),
        single_occurrence_generators,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(m: usize, l: &[usize]) -> BraidWord {
        BraidWord::new(m, l.to_vec()).unwrap()
    }

    #[test]
    fn parses_plain_and_declared() {
        assert_eq!(parse_braid("1 1 1").unwrap(), w(2, &[1, 1, 1]));
        assert_eq!(parse_braid("m=4; 2 1 3 1 2 3").unwrap(), w(4, &[2, 1, 3, 1, 2, 3]));
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_braid("1 -2"), Err(BraidError::Negative(-2)));
        assert_eq!(parse_braid("1 x"), Err(BraidError::NonInteger("x".into())));
        assert_eq!(parse_braid("0"), Err(BraidError::Zero));
        assert_eq!(
            parse_braid("m=2; 1 2"),
            Err(BraidError::OutOfRange { index: 2, strands: 2 })
        );
        assert_eq!(parse_braid("m=3;"), Err(BraidError::Empty(3)));
        assert!(parse_braid("1 -2").unwrap_err().to_string().contains("only positive"));
    }

    #[test]
    fn components() {
        assert_eq!(components_of(&w(2, &[1, 1, 1])).components, vec![vec![1, 2]]);
        assert_eq!(components_of(&w(2, &[1, 1])).components, vec![vec![1], vec![2]]);
        assert_eq!(
            components_of(&w(4, &[2, 1, 3, 1, 2, 3])).components,
            vec![vec![1], vec![2, 3, 4]]
        );
    }

    #[test]
    fn stats_examples() {
        let t = w(2, &[1, 1, 1]);
        let s = component_stats(&t, &components_of(&t)).unwrap();
        assert_eq!(s.components[0].internal_crossings, 3);
        assert_eq!(s.components[0].genus, 1);

        let h = w(2, &[1, 1]);
        let s = component_stats(&h, &components_of(&h)).unwrap();
        assert_eq!(s.genera(), vec![0, 0]);
        assert_eq!(s.linking[0][1], 1);

        let x = w(3, &[1, 1, 1, 2, 2]);
        let s = component_stats(&x, &components_of(&x)).unwrap();
        assert_eq!(s.components[0].strands, vec![1, 2]);
        assert_eq!(
            (s.components[0].internal_crossings, s.components[0].genus),
            (3, 1)
        );
        assert_eq!(
            (s.components[1].internal_crossings, s.components[1].genus),
            (0, 0)
        );
        assert_eq!(s.linking[0][1], 1);
    }

    #[test]
    fn precheck_examples() {
        let a = w(3, &[1, 1, 1]);
        let r = precheck(&a, &component_stats(&a, &components_of(&a)).unwrap());
        assert!(!r.nonsplit);
        let h = w(2, &[1, 1]);
        let r = precheck(&h, &component_stats(&h, &components_of(&h)).unwrap());
        assert!(r.nonsplit && !r.has_nontrivial);
        let b = w(3, &[1, 2, 2, 2]);
        let r = precheck(&b, &component_stats(&b, &components_of(&b)).unwrap());
        assert_eq!(r.single_occurrence_generators, vec![1]);
    }
}
